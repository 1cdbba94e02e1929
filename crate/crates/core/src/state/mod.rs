//! Fermionic density states, two-site reductions and correlation measures.

mod monogamy;
mod random;
mod witness;

pub use monogamy::{gamma_site, monogamy_check, pair_distance};
pub use random::{random_even_observable, random_even_product_state, random_hermitian, random_state};
pub use witness::{build_witness, extendibility_witness_check, witness_operator};

use crate::fock::{restrict_to_sites, xi_total, FockOperator, SystemShape};
use crate::linalg::{hermitian_eigenvalues, hermitian_part, CMatrix};
use crate::{Error, Result};
use std::io::{Read, Write};
use std::sync::OnceLock;

pub const TRACE_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Positive semidefinite unit-trace operator on a Fock space.
///
/// The totally even part `Xi(rho)` is computed on first use and cached.
#[derive(Debug, Clone)]
pub struct DensityState {
    op: FockOperator,
    sigma: OnceLock<Box<DensityState>>,
}

impl PartialEq for DensityState {
    fn eq(&self, other: &Self) -> bool {
        self.op == other.op
    }
}

impl DensityState {
    /// Validates trace, Hermiticity and the smallest eigenvalue.
    pub fn new(op: FockOperator) -> Result<Self> {
        let state = Self::checked_without_spectrum(op)?;
        let min = state.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:e} is negative")));
        }
        Ok(state)
    }

    /// Trace and Hermiticity checks only; positivity must be known otherwise.
    pub(crate) fn checked_without_spectrum(op: FockOperator) -> Result<Self> {
        let dev = op.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        Ok(DensityState {
            op,
            sigma: OnceLock::new(),
        })
    }

    pub fn from_matrix(shape: SystemShape, matrix: CMatrix) -> Result<Self> {
        Self::new(FockOperator::new(shape, matrix)?)
    }

    pub fn maximally_mixed(shape: SystemShape) -> Self {
        let d = shape.dim() as f64;
        let op = FockOperator::identity(shape).scale((1.0 / d).into());
        DensityState {
            op,
            sigma: OnceLock::new(),
        }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(shape: SystemShape, psi: &[crate::linalg::C64]) -> Result<Self> {
        if psi.len() != shape.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for dimension {}",
                psi.len(),
                shape.dim()
            )));
        }
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let m = crate::linalg::projector(&v.unscale(norm));
        Self::new(FockOperator::new(shape, m)?)
    }

    pub fn shape(&self) -> SystemShape {
        self.op.shape()
    }

    pub fn operator(&self) -> &FockOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn into_operator(self) -> FockOperator {
        self.op
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&hermitian_part(self.op.matrix()))
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    /// `sigma_rho = Xi(rho)`, the totally even part, cached.
    pub fn sigma(&self) -> &DensityState {
        self.sigma.get_or_init(|| {
            // Xi is a channel, so positivity and trace carry over.
            Box::new(DensityState {
                op: xi_total(&self.op),
                sigma: OnceLock::new(),
            })
        })
    }

    pub fn write_dump<W: Write>(&self, w: W) -> Result<()> {
        self.op.write_dump(w)
    }

    pub fn read_dump<R: Read>(shape: SystemShape, r: R) -> Result<Self> {
        Self::new(FockOperator::read_dump(shape, r)?)
    }
}

/// Reduction of a state to an ordered site pair `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    sites: (usize, usize),
    state: DensityState,
}

impl ReducedState {
    pub fn sites(&self) -> (usize, usize) {
        self.sites
    }

    pub fn state(&self) -> &DensityState {
        &self.state
    }

    pub fn operator(&self) -> &FockOperator {
        self.state.operator()
    }
}

/// Fermionic reduction to the sites `{i, j}`, relabelled in ascending order.
pub fn reduce(rho: &DensityState, i: usize, j: usize) -> Result<ReducedState> {
    if i == j {
        return Err(Error::InvalidArgument(format!("reduction needs two distinct sites, got {i} twice")));
    }
    let (a, b) = (i.min(j), i.max(j));
    let state = reduce_sites(rho, &[a, b])?;
    Ok(ReducedState { sites: (a, b), state })
}

/// Fermionic reduction to an arbitrary set of distinct sites.
pub fn reduce_sites(rho: &DensityState, sites: &[usize]) -> Result<DensityState> {
    DensityState::new(restrict_to_sites(rho.operator(), sites)?)
}

pub fn trace_norm(x: &FockOperator) -> f64 {
    x.trace_norm()
}
