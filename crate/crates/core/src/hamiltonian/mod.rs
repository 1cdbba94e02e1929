//! Two-local fermionic Hamiltonians on interaction graphs, exact ground
//! states, mean-field product states and the resulting energy certificates.

mod certificate;
mod ground;
mod meanfield;
mod models;
mod schema;

pub use certificate::{certificate, Certificate, SweepRow};
pub use ground::{ground_state, GroundState, DEGENERACY_TOL};
pub use meanfield::{optimize_product_state, ModeProductState, OptimizeOptions, ProductOptimum};
pub use models::{build_hubbard_spinful, build_hubbard_spinless, build_qc_hamiltonian, spinless_on_graph};
pub use schema::{load_hamiltonian, parse_hamiltonian, Entry, FamilyTag, HamiltonianSpec};

use crate::fock::{embed_on_sites, FockOperator, SystemShape};
use crate::graph::InteractionGraph;
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;

/// `H = scale * (sum_e h_e + sum_i o_i)` with every `h_e` on the two sites of
/// edge `e` and `|h_e| <= 1`. On-site terms `o_i` occur only on sites without
/// edges; everywhere else they are folded into the edge terms.
#[derive(Debug, Clone)]
pub struct TwoLocalHamiltonian {
    shape: SystemShape,
    graph: InteractionGraph,
    terms: Vec<FockOperator>,
    onsite: Vec<(usize, FockOperator)>,
    scale: f64,
    notes: Vec<String>,
}

impl TwoLocalHamiltonian {
    /// `terms[e]` lives on the two-site shape with local site 0 the smaller
    /// endpoint of `graph.edges()[e]`; `onsite` terms live on one site.
    pub fn new(
        shape: SystemShape,
        graph: InteractionGraph,
        terms: Vec<FockOperator>,
        onsite: Vec<(usize, FockOperator)>,
    ) -> Result<Self> {
        if graph.n() != shape.num_sites() {
            return Err(Error::ShapeMismatch(format!(
                "graph on {} vertices for {} sites",
                graph.n(),
                shape.num_sites()
            )));
        }
        if terms.len() != graph.num_edges() {
            return Err(Error::ShapeMismatch(format!("{} terms for {} edges", terms.len(), graph.num_edges())));
        }
        let pair = shape.with_sites(2)?;
        let single = shape.with_sites(1)?;
        for t in &terms {
            check_term(t, pair)?;
        }
        for (site, o) in &onsite {
            shape.check_site(*site)?;
            if graph.degree(*site) > 0 {
                return Err(Error::InvalidArgument(format!("on-site term at site {site}, which has edges")));
            }
            check_term(o, single)?;
        }
        let scale = terms
            .iter()
            .chain(onsite.iter().map(|(_, o)| o))
            .map(FockOperator::operator_norm)
            .fold(0.0, f64::max);
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let inv = (1.0 / scale).into();
        Ok(TwoLocalHamiltonian {
            shape,
            graph,
            terms: terms.iter().map(|t| t.scale(inv)).collect(),
            onsite: onsite.into_iter().map(|(s, o)| (s, o.scale(inv))).collect(),
            scale,
            notes: Vec::new(),
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn graph(&self) -> &InteractionGraph {
        &self.graph
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// Normalised term of edge `e`.
    pub fn term(&self, e: usize) -> &FockOperator {
        &self.terms[e]
    }

    pub fn terms(&self) -> &[FockOperator] {
        &self.terms
    }

    pub fn onsite(&self) -> &[(usize, FockOperator)] {
        &self.onsite
    }

    /// Factor restoring physical units: `max_e |h_e|` before normalisation.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Dense global operator in physical units.
    pub fn assemble(&self) -> Result<FockOperator> {
        let mut h = FockOperator::zeros(self.shape);
        for (&(i, j), t) in self.graph.edges().iter().zip(&self.terms) {
            h = &h + &embed_on_sites(t, self.shape, &[i, j])?;
        }
        for (s, o) in &self.onsite {
            h = &h + &embed_on_sites(o, self.shape, &[*s])?;
        }
        Ok(h.scale(self.scale.into()))
    }
}

fn check_term(t: &FockOperator, shape: SystemShape) -> Result<()> {
    if t.shape() != shape {
        return Err(Error::ShapeMismatch(format!(
            "term on {} sites with p = {}",
            t.shape().num_sites(),
            t.shape().modes_per_site()
        )));
    }
    let dev = t.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}
