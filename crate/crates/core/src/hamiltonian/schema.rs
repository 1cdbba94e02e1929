use super::models::spinless_on_graph;
use super::{build_hubbard_spinful, build_hubbard_spinless, build_qc_hamiltonian, TwoLocalHamiltonian};
use crate::fock::{FockOperator, SystemShape};
use crate::graph::{GraphSpec, InteractionGraph};
use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// `{"family": ..., "params": {...}, "graph": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub family: FamilyTag,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    HubbardSpinless,
    HubbardSpinful,
    Qc,
    Explicit,
}

/// A real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> C64 {
        match e {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

fn default_dim() -> usize {
    1
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeParams {
    #[serde(default = "default_dim")]
    dim: usize,
    length: Option<usize>,
    t: f64,
    u: f64,
    #[serde(default = "default_true")]
    periodic: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QcParams {
    p: usize,
    t: Vec<Vec<Entry>>,
    v: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitTerm {
    sites: Vec<usize>,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitParams {
    p: usize,
    n: Option<usize>,
    terms: Vec<ExplicitTerm>,
}

fn square<T: Copy>(rows: &[Vec<T>], what: &str) -> Result<usize> {
    let n = rows.len();
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(Error::ShapeMismatch(format!("{what}[{r}] has {} entries, expected {n}", row.len())));
    }
    Ok(n)
}

fn complex_matrix(rows: &[Vec<Entry>], what: &str) -> Result<CMatrix> {
    let n = square(rows, what)?;
    Ok(CMatrix::from_fn(n, n, |r, c| rows[r][c].into()))
}

fn lattice(params: LatticeParams) -> Result<(usize, usize, f64, f64, bool)> {
    let length = params
        .length
        .ok_or_else(|| Error::InvalidArgument("lattice families need params.length or a graph".into()))?;
    Ok((params.dim, length, params.t, params.u, params.periodic))
}

impl HamiltonianSpec {
    pub fn build(&self) -> Result<TwoLocalHamiltonian> {
        let params = || self.params.clone();
        match self.family {
            FamilyTag::HubbardSpinless => {
                let p: LatticeParams = serde_json::from_value(params())?;
                match &self.graph {
                    Some(g) => {
                        let (graph, _) = g.build()?;
                        spinless_on_graph(&graph, p.t, p.u)
                    }
                    None => {
                        let (d, l, t, u, periodic) = lattice(p)?;
                        build_hubbard_spinless(d, l, t, u, periodic)
                    }
                }
            }
            FamilyTag::HubbardSpinful => {
                if self.graph.is_some() {
                    return Err(Error::InvalidArgument("hubbard_spinful is defined on lattices only".into()));
                }
                let (d, l, t, u, periodic) = lattice(serde_json::from_value(params())?)?;
                build_hubbard_spinful(d, l, t, u, periodic)
            }
            FamilyTag::Qc => {
                let p: QcParams = serde_json::from_value(params())?;
                let t = complex_matrix(&p.t, "t")?;
                let n = square(&p.v, "v")?;
                let v = DMatrix::from_fn(n, n, |r, c| p.v[r][c]);
                build_qc_hamiltonian(p.p, &t, &v)
            }
            FamilyTag::Explicit => self.build_explicit(serde_json::from_value(params())?),
        }
    }

    fn build_explicit(&self, p: ExplicitParams) -> Result<TwoLocalHamiltonian> {
        let n = match (&self.graph, p.n) {
            (Some(g), _) => g.n,
            (None, Some(n)) => n,
            (None, None) => return Err(Error::InvalidArgument("explicit family needs params.n or a graph".into())),
        };
        let shape = SystemShape::new(n, p.p)?;
        let pair = shape.with_sites(2)?;
        let single = shape.with_sites(1)?;
        let mut by_pair: BTreeMap<(usize, usize), FockOperator> = BTreeMap::new();
        let mut onsite: BTreeMap<usize, FockOperator> = BTreeMap::new();
        for (k, term) in p.terms.iter().enumerate() {
            let m = complex_matrix(&term.matrix, &format!("terms[{k}].matrix"))?;
            match term.sites[..] {
                [i, j] if i < j && j < n => {
                    let op = FockOperator::new(pair, m)?;
                    let slot = by_pair.entry((i, j)).or_insert_with(|| FockOperator::zeros(pair));
                    *slot = &*slot + &op;
                }
                [i] if i < n => {
                    let op = FockOperator::new(single, m)?;
                    let slot = onsite.entry(i).or_insert_with(|| FockOperator::zeros(single));
                    *slot = &*slot + &op;
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "terms[{k}].sites must be [i] or [i, j] with i < j < {n}, got {:?}",
                        term.sites
                    )))
                }
            }
        }
        let edges: Vec<(usize, usize)> = by_pair.keys().copied().collect();
        let graph = InteractionGraph::from_edge_list(n, &edges)?;
        if let Some(g) = &self.graph {
            let (declared, _) = g.build()?;
            if declared.edges() != graph.edges() {
                return Err(Error::InvalidGraph("graph edges differ from the pairs carrying terms".into()));
            }
        }
        let mut terms: Vec<FockOperator> = by_pair.into_values().collect();
        let mut isolated = Vec::new();
        for (i, o) in onsite {
            let deg = graph.degree(i);
            if deg == 0 {
                isolated.push((i, o));
                continue;
            }
            let share = o.scale((1.0 / deg as f64).into());
            for (e, &(a, b)) in graph.edges().iter().enumerate() {
                if a == i || b == i {
                    let sites: &[usize] = if a == i { &[0] } else { &[1] };
                    let lifted = crate::fock::embed_on_sites(&share, pair, sites)?;
                    terms[e] = &terms[e] + &lifted;
                }
            }
        }
        TwoLocalHamiltonian::new(shape, graph, terms, isolated)
    }
}

pub fn parse_hamiltonian(json: &str) -> Result<TwoLocalHamiltonian> {
    let spec: HamiltonianSpec = serde_json::from_str(json)?;
    spec.build()
}

pub fn load_hamiltonian(path: &Path) -> Result<TwoLocalHamiltonian> {
    parse_hamiltonian(&std::fs::read_to_string(path)?)
}
