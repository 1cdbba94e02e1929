use super::TwoLocalHamiltonian;
use crate::fock::SystemShape;
use crate::linalg::{hermitian_eigh, kron, random_density_matrix, trace_product, CMatrix, C64};
use crate::par::{map_indexed, Execution};
use crate::state::DensityState;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MONOTONE_SLACK: f64 = 1e-12;

/// Product of single-site states, each commuting with its local parity.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProductState {
    p: usize,
    locals: Vec<CMatrix>,
}

fn parity(b: usize) -> bool {
    b.count_ones() % 2 == 1
}

/// Zeroes the entries that connect opposite local parities.
fn even_part(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        if parity(r) == parity(c) {
            m[(r, c)]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

impl ModeProductState {
    pub fn new(p: usize, locals: Vec<CMatrix>) -> Result<Self> {
        let q = 1usize << p;
        for (i, s) in locals.iter().enumerate() {
            if s.shape() != (q, q) {
                return Err(Error::ShapeMismatch(format!("local state {i} is not {q}x{q}")));
            }
            let odd = crate::linalg::max_abs_diff(s, &even_part(s));
            if odd > 1e-12 {
                return Err(Error::InvalidState(format!("local state {i} has parity-odd part {odd}")));
            }
            DensityState::from_matrix(SystemShape::new(1, p)?, s.clone())
                .map_err(|e| Error::InvalidState(format!("local state {i}: {e}")))?;
        }
        Ok(ModeProductState { p, locals })
    }

    fn basis(p: usize, n: usize, occupied: bool) -> Self {
        let q = 1usize << p;
        let mut m = CMatrix::zeros(q, q);
        let idx = if occupied { q - 1 } else { 0 };
        m[(idx, idx)] = C64::new(1.0, 0.0);
        ModeProductState { p, locals: vec![m; n] }
    }

    fn random(p: usize, n: usize, rng: &mut ChaCha8Rng) -> Self {
        let locals = (0..n).map(|_| even_part(&random_density_matrix(1 << p, rng))).collect();
        ModeProductState { p, locals }
    }

    pub fn num_sites(&self) -> usize {
        self.locals.len()
    }

    pub fn locals(&self) -> &[CMatrix] {
        &self.locals
    }

    /// Largest parity-odd entry over all local states.
    pub fn odd_weight(&self) -> f64 {
        self.locals
            .iter()
            .map(|s| crate::linalg::max_abs_diff(s, &even_part(s)))
            .fold(0.0, f64::max)
    }

    /// Global density matrix; later sites occupy the higher bits.
    pub fn to_density(&self) -> Result<DensityState> {
        let shape = SystemShape::new(self.locals.len(), self.p)?;
        let m = self.locals.iter().fold(CMatrix::identity(1, 1), |acc, s| kron(s, &acc));
        DensityState::from_matrix(shape, m)
    }

    /// `tr(H sigma)` from the per-edge partial expectations.
    pub fn energy(&self, h: &TwoLocalHamiltonian) -> f64 {
        normalized_energy(h, &self.locals) * h.scale()
    }

    /// `tr(H sigma)` from the assembled global operator.
    pub fn global_energy(&self, h: &TwoLocalHamiltonian) -> Result<f64> {
        let rho = self.to_density()?;
        Ok(trace_product(h.assemble()?.matrix(), rho.matrix()).re)
    }
}

/// Two-site term `h` with local site 0 in the low bits: the operator on one
/// site obtained by tracing the other against `other`.
fn partial_expectation(h: &CMatrix, other: &CMatrix, keep_low: bool) -> CMatrix {
    let q = other.nrows();
    CMatrix::from_fn(q, q, |c, r| {
        let mut acc = C64::new(0.0, 0.0);
        for r2 in 0..q {
            for c2 in 0..q {
                let o = other[(r2, c2)];
                if o == C64::new(0.0, 0.0) {
                    continue;
                }
                let (row, col) = if keep_low { (c2 * q + c, r2 * q + r) } else { (c * q + c2, r * q + r2) };
                acc += h[(row, col)] * o;
            }
        }
        acc
    })
}

fn effective_operator(h: &TwoLocalHamiltonian, locals: &[CMatrix], i: usize) -> CMatrix {
    let q = locals[i].nrows();
    let mut eff = CMatrix::zeros(q, q);
    for (e, &(a, b)) in h.graph().edges().iter().enumerate() {
        let t = h.term(e).matrix();
        if a == i {
            eff += partial_expectation(t, &locals[b], true);
        } else if b == i {
            eff += partial_expectation(t, &locals[a], false);
        }
    }
    for (s, o) in h.onsite() {
        if *s == i {
            eff += o.matrix();
        }
    }
    eff
}

fn normalized_energy(h: &TwoLocalHamiltonian, locals: &[CMatrix]) -> f64 {
    let mut e = 0.0;
    for (k, &(a, b)) in h.graph().edges().iter().enumerate() {
        e += trace_product(h.term(k).matrix(), &kron(&locals[b], &locals[a])).re;
    }
    for (s, o) in h.onsite() {
        e += trace_product(o.matrix(), &locals[*s]).re;
    }
    e
}

/// Lowest eigenpair of `m` restricted to one parity sector, even sector first on ties.
fn lowest_even_state(m: &CMatrix) -> (f64, CMatrix) {
    let q = m.nrows();
    let mut best: Option<(f64, CMatrix)> = None;
    for odd in [false, true] {
        let idx: Vec<usize> = (0..q).filter(|&b| parity(b) == odd).collect();
        let block = CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
        let (vals, vecs) = hermitian_eigh(&block);
        if best.as_ref().is_none_or(|(b, _)| vals[0] < *b) {
            let mut proj = CMatrix::zeros(q, q);
            for (r, &ir) in idx.iter().enumerate() {
                for (c, &ic) in idx.iter().enumerate() {
                    proj[(ir, ic)] = vecs[(r, 0)] * vecs[(c, 0)].conj();
                }
            }
            best = Some((vals[0], proj));
        }
    }
    best.expect("two sectors")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { restarts: 16, tol: 1e-10, max_iters: 500, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct ProductOptimum {
    pub state: ModeProductState,
    /// `tr(H sigma)` in physical units.
    pub energy: f64,
    pub converged: bool,
    pub restart: usize,
    pub sweeps: usize,
}

fn descend(h: &TwoLocalHamiltonian, mut locals: Vec<CMatrix>, opts: &OptimizeOptions) -> Result<(Vec<CMatrix>, f64, bool, usize)> {
    let mut energy = normalized_energy(h, &locals);
    for sweep in 1..=opts.max_iters {
        let start = energy;
        for i in 0..locals.len() {
            let eff = crate::linalg::hermitian_part(&even_part(&effective_operator(h, &locals, i)));
            let current = trace_product(&eff, &locals[i]).re;
            let (value, proj) = lowest_even_state(&eff);
            if value > current + MONOTONE_SLACK * (1.0 + current.abs()) {
                return Err(Error::Numerical(format!("site update raised the energy from {current} to {value}")));
            }
            energy += value - current;
            locals[i] = proj;
        }
        if (start - energy).abs() < opts.tol {
            let e = normalized_energy(h, &locals);
            return Ok((locals, e, true, sweep));
        }
    }
    let e = normalized_energy(h, &locals);
    Ok((locals, e, false, opts.max_iters))
}

/// Coordinate-descent mean field over totally even product states.
///
/// Restart 0 starts from the vacuum, restart 1 from full occupation, the rest
/// from random even local states drawn from stream `r` of the seed. The
/// lowest energy wins; ties go to the lower restart index.
pub fn optimize_product_state(h: &TwoLocalHamiltonian, opts: &OptimizeOptions, exec: Execution) -> Result<ProductOptimum> {
    if opts.restarts == 0 || opts.max_iters == 0 {
        return Err(Error::InvalidArgument("restarts and max_iters must be positive".into()));
    }
    let (p, n) = (h.shape().modes_per_site(), h.shape().num_sites());
    let runs = map_indexed(opts.restarts, exec, |r| {
        let start = match r {
            0 => ModeProductState::basis(p, n, false),
            1 => ModeProductState::basis(p, n, true),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(r as u64);
                ModeProductState::random(p, n, &mut rng)
            }
        };
        descend(h, start.locals, opts)
    });
    let mut best: Option<ProductOptimum> = None;
    for (r, run) in runs.into_iter().enumerate() {
        let (locals, e, converged, sweeps) = run?;
        if best.as_ref().is_none_or(|b| e * h.scale() < b.energy) {
            best = Some(ProductOptimum {
                state: ModeProductState { p, locals },
                energy: e * h.scale(),
                converged,
                restart: r,
                sweeps,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}
