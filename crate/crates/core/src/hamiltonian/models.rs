use super::TwoLocalHamiltonian;
use crate::fock::{annihilation, creation, number, FockOperator, SystemShape};
use crate::graph::InteractionGraph;
use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};
use nalgebra::DMatrix;

const SYMMETRY_TOL: f64 = 1e-12;

fn hop(shape: SystemShape, a: (usize, usize), b: (usize, usize), amp: C64) -> Result<FockOperator> {
    Ok((&creation(shape, a.0, a.1)? * &annihilation(shape, b.0, b.1)?).scale(amp))
}

fn density_pair(shape: SystemShape, a: (usize, usize), b: (usize, usize)) -> Result<FockOperator> {
    Ok(&number(shape, a.0, a.1)? * &number(shape, b.0, b.1)?)
}

fn lattice_shape(dim: usize, length: usize, p: usize) -> Result<(Vec<usize>, usize)> {
    if dim == 0 || length == 0 {
        return Err(Error::InvalidArgument(format!("lattice needs D, L >= 1, got D = {dim}, L = {length}")));
    }
    let dims = vec![length; dim];
    let n = length
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::InvalidArgument("lattice too large".into()))?;
    SystemShape::new(n, p)?;
    Ok((dims, n))
}

/// Spinless Hubbard model on a `D`-dimensional lattice of side `L`:
/// `sum_<ij> t (f_i† f_j + f_j† f_i) + U n_i n_j`, each edge counted once.
pub fn build_hubbard_spinless(dim: usize, length: usize, t: f64, u: f64, periodic: bool) -> Result<TwoLocalHamiltonian> {
    let (dims, _) = lattice_shape(dim, length, 1)?;
    let graph = InteractionGraph::lattice_with(&dims, periodic)?;
    spinless_on_graph(&graph, t, u)
}

/// The spinless model on an arbitrary graph.
pub fn spinless_on_graph(graph: &InteractionGraph, t: f64, u: f64) -> Result<TwoLocalHamiltonian> {
    let shape = SystemShape::new(graph.n(), 1)?;
    let pair = shape.with_sites(2)?;
    let term = &(&hop(pair, (0, 0), (1, 0), t.into())? + &hop(pair, (1, 0), (0, 0), t.into())?)
        + &density_pair(pair, (0, 0), (1, 0))?.scale(u.into());
    let terms = vec![term; graph.num_edges()];
    TwoLocalHamiltonian::new(shape, graph.clone(), terms, Vec::new())
}

/// Spinful Hubbard model (`p = 2`): spin-conserving hopping on every edge and
/// `U n_{i,0} n_{i,1}` on every site, split evenly over the edges at that site.
pub fn build_hubbard_spinful(dim: usize, length: usize, t: f64, u: f64, periodic: bool) -> Result<TwoLocalHamiltonian> {
    let (dims, _) = lattice_shape(dim, length, 2)?;
    let graph = InteractionGraph::lattice_with(&dims, periodic)?;
    let shape = SystemShape::new(graph.n(), 2)?;
    let pair = shape.with_sites(2)?;
    let single = shape.with_sites(1)?;
    let mut hopping = FockOperator::zeros(pair);
    for s in 0..2 {
        hopping = &hopping + &hop(pair, (0, s), (1, s), t.into())?;
        hopping = &hopping + &hop(pair, (1, s), (0, s), t.into())?;
    }
    let onsite = |site: usize| density_pair(pair, (site, 0), (site, 1));
    let mut terms = Vec::with_capacity(graph.num_edges());
    for &(i, j) in graph.edges() {
        let wi = u / graph.degree(i) as f64;
        let wj = u / graph.degree(j) as f64;
        terms.push(&(&hopping + &onsite(0)?.scale(wi.into())) + &onsite(1)?.scale(wj.into()));
    }
    let isolated = (0..graph.n())
        .filter(|&i| graph.degree(i) == 0)
        .map(|i| Ok((i, density_pair(single, (0, 0), (0, 1))?.scale(u.into()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoLocalHamiltonian::new(shape, graph, terms, isolated)?.with_note(
        "on-site interaction: ground energy scales with N rather than |E|, so per-edge bounds become weak as D grows",
    ))
}

/// `H = sum t_{(i,a),(j,b)} f_{i,a}† f_{j,b} + v_{(i,a),(j,b)} n_{i,a} n_{j,b}` over
/// global modes `i * p + a`. Pairs of distinct sites with any nonzero
/// coupling become edges; same-site parts are split evenly over the edges at
/// that site, or kept as on-site terms for sites without edges.
pub fn build_qc_hamiltonian(p: usize, t: &CMatrix, v: &DMatrix<f64>) -> Result<TwoLocalHamiltonian> {
    let modes = t.nrows();
    if p == 0 || !modes.is_multiple_of(p) || t.shape() != (modes, modes) || v.shape() != (modes, modes) {
        return Err(Error::ShapeMismatch(format!(
            "t is {}x{}, v is {}x{}, p = {p}",
            t.nrows(),
            t.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    let dev = crate::linalg::hermitian_deviation(t);
    if dev > SYMMETRY_TOL {
        return Err(Error::NotHermitian(dev));
    }
    if let Some((r, c)) = (0..modes)
        .flat_map(|r| (0..modes).map(move |c| (r, c)))
        .find(|&(r, c)| (v[(r, c)] - v[(c, r)]).abs() > SYMMETRY_TOL)
    {
        return Err(Error::InvalidArgument(format!("v is not symmetric at ({r}, {c})")));
    }
    let n = modes / p;
    let shape = SystemShape::new(n, p)?;
    let pair = shape.with_sites(2)?;
    let single = shape.with_sites(1)?;
    let zero = C64::new(0.0, 0.0);

    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let coupled = (0..p).any(|a| {
                (0..p).any(|b| {
                    let (x, y) = (i * p + a, j * p + b);
                    t[(x, y)] != zero || t[(y, x)] != zero || v[(x, y)] != 0.0
                })
            });
            if coupled {
                edges.push((i, j));
            }
        }
    }
    let graph = InteractionGraph::from_edge_list(n, &edges)?;

    // same-site part on local site `k` of `shape_k`
    let onsite_on = |target: SystemShape, k: usize, i: usize| -> Result<FockOperator> {
        let mut o = FockOperator::zeros(target);
        for a in 0..p {
            for b in 0..p {
                let (x, y) = (i * p + a, i * p + b);
                if t[(x, y)] != zero {
                    o = &o + &hop(target, (k, a), (k, b), t[(x, y)])?;
                }
                if v[(x, y)] != 0.0 {
                    o = &o + &density_pair(target, (k, a), (k, b))?.scale(v[(x, y)].into());
                }
            }
        }
        Ok(o)
    };

    let mut terms = Vec::with_capacity(graph.num_edges());
    for &(i, j) in graph.edges() {
        let mut h = FockOperator::zeros(pair);
        for a in 0..p {
            for b in 0..p {
                let (x, y) = (i * p + a, j * p + b);
                if t[(x, y)] != zero {
                    h = &h + &hop(pair, (0, a), (1, b), t[(x, y)])?;
                }
                if t[(y, x)] != zero {
                    h = &h + &hop(pair, (1, b), (0, a), t[(y, x)])?;
                }
                let w = v[(x, y)] + v[(y, x)];
                if w != 0.0 {
                    h = &h + &density_pair(pair, (0, a), (1, b))?.scale(w.into());
                }
            }
        }
        let oi = onsite_on(pair, 0, i)?.scale((1.0 / graph.degree(i) as f64).into());
        let oj = onsite_on(pair, 1, j)?.scale((1.0 / graph.degree(j) as f64).into());
        terms.push(&(&h + &oi) + &oj);
    }
    let mut isolated = Vec::new();
    for i in (0..n).filter(|&i| graph.degree(i) == 0) {
        let o = onsite_on(single, 0, i)?;
        if o.operator_norm() > 0.0 {
            isolated.push((i, o));
        }
    }
    let folded = (0..n).filter(|&i| graph.degree(i) > 0).count();
    let h = TwoLocalHamiltonian::new(shape, graph, terms, isolated)?;
    Ok(if folded > 0 {
        h.with_note("same-site terms split evenly over incident edges")
    } else {
        h
    })
}
