//! Operators on the fermionic Fock space of `N` sites with `p` modes each.
//!
//! Modes are ordered site-major: site `j`, local mode `a` is global mode
//! `j * p + a`, and global mode `q` is bit `q` of an occupation-basis index.
//! Majorana operators carry Jordan-Wigner strings over every lower global
//! mode. Local Majorana index `alpha in 0..2p` maps to mode `alpha / 2`;
//! even `alpha` is `f† + f`, odd `alpha` is `i(f† - f)`.

mod channel;
mod dump;
mod expansion;
mod majorana;
mod sparse;

pub use channel::{xi_site, xi_total};
pub use expansion::{
    classify_parity, coefficient, embed_on_sites, even_odd_split, expand, monomial_coefficients, reconstruct,
    restrict_to_sites, MajoranaMonomial, MonomialMask, Parity,
};
pub use majorana::{
    annihilation, creation, local_parity, majorana, number, MajoranaString,
};
pub use sparse::{bipartite_sum, hermitian_phase, site_sum, MajoranaSum};

use crate::linalg::{self, CMatrix, C64};
use crate::{Error, Result};
use serde::Serialize;
use std::ops::{Add, Mul, Sub};

/// Default cap on `p * N` for dense algebra.
pub const DEFAULT_MODE_CAP: usize = 14;
/// Absolute limit imposed by the 64-bit Majorana masks.
pub const HARD_MODE_LIMIT: usize = 30;

/// Mode cap in effect: `FM_DIM_CAP` when set to a valid integer, otherwise
/// [`DEFAULT_MODE_CAP`].
pub fn mode_cap() -> usize {
    std::env::var("FM_DIM_CAP")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(HARD_MODE_LIMIT))
        .unwrap_or(DEFAULT_MODE_CAP)
}

/// `N` sites with `p` fermionic modes each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SystemShape {
    num_sites: usize,
    modes_per_site: usize,
}

impl SystemShape {
    pub fn new(num_sites: usize, modes_per_site: usize) -> Result<Self> {
        Self::with_cap(num_sites, modes_per_site, mode_cap())
    }

    pub fn with_cap(num_sites: usize, modes_per_site: usize, cap: usize) -> Result<Self> {
        if num_sites == 0 || modes_per_site == 0 {
            return Err(Error::InvalidArgument(
                "system shape needs at least one site and one mode per site".into(),
            ));
        }
        let modes = num_sites * modes_per_site;
        if modes > cap.min(HARD_MODE_LIMIT) {
            return Err(Error::DimensionCap {
                modes,
                cap: cap.min(HARD_MODE_LIMIT),
            });
        }
        Ok(SystemShape {
            num_sites,
            modes_per_site,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn modes_per_site(&self) -> usize {
        self.modes_per_site
    }

    pub fn num_modes(&self) -> usize {
        self.num_sites * self.modes_per_site
    }

    pub fn num_majoranas(&self) -> usize {
        2 * self.num_modes()
    }

    /// `2^(p N)`.
    pub fn dim(&self) -> usize {
        1usize << self.num_modes()
    }

    /// `2^p`.
    pub fn local_dim(&self) -> usize {
        1usize << self.modes_per_site
    }

    /// Same `p`, different site count, inheriting no cap beyond the hard one.
    pub fn with_sites(&self, num_sites: usize) -> Result<Self> {
        Self::with_cap(num_sites, self.modes_per_site, HARD_MODE_LIMIT)
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.num_sites {
            return Err(Error::IndexOutOfRange {
                what: "site",
                index: site,
                limit: self.num_sites,
            });
        }
        Ok(())
    }

    /// Occupation bits belonging to `site`.
    pub fn site_mode_mask(&self, site: usize) -> u64 {
        let p = self.modes_per_site;
        ((1u64 << p) - 1) << (site * p)
    }

    /// Majorana-mask bits belonging to `site`.
    pub fn site_majorana_mask(&self, site: usize) -> u64 {
        let w = 2 * self.modes_per_site;
        ((1u64 << w) - 1) << (site * w)
    }

    /// Global Majorana index of `(site, alpha)`.
    pub fn majorana_index(&self, site: usize, alpha: usize) -> Result<usize> {
        self.check_site(site)?;
        if alpha >= 2 * self.modes_per_site {
            return Err(Error::IndexOutOfRange {
                what: "alpha",
                index: alpha,
                limit: 2 * self.modes_per_site,
            });
        }
        Ok(site * 2 * self.modes_per_site + alpha)
    }

    /// Site-parity signature of a basis state: bit `j` is the occupation
    /// parity of site `j`.
    pub fn parity_signature(&self, basis: usize) -> u64 {
        let mut sig = 0u64;
        for j in 0..self.num_sites {
            let bits = (basis as u64) & self.site_mode_mask(j);
            sig |= ((bits.count_ones() & 1) as u64) << j;
        }
        sig
    }
}

/// Dense operator on the Fock space of a [`SystemShape`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    shape: SystemShape,
    matrix: CMatrix,
}

impl FockOperator {
    pub fn new(shape: SystemShape, matrix: CMatrix) -> Result<Self> {
        let d = shape.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, shape needs {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(FockOperator { shape, matrix })
    }

    /// Builds a Hermitian operator, rejecting inputs whose max-abs deviation
    /// from Hermiticity exceeds `1e-12`.
    pub fn new_hermitian(shape: SystemShape, matrix: CMatrix) -> Result<Self> {
        let op = Self::new(shape, matrix)?;
        let dev = op.hermitian_deviation();
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        Ok(op)
    }

    pub fn zeros(shape: SystemShape) -> Self {
        let d = shape.dim();
        FockOperator {
            shape,
            matrix: CMatrix::zeros(d, d),
        }
    }

    pub fn identity(shape: SystemShape) -> Self {
        let d = shape.dim();
        FockOperator {
            shape,
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        linalg::hermitian_deviation(&self.matrix)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= 1e-12
    }

    pub fn adjoint(&self) -> Self {
        FockOperator {
            shape: self.shape,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        FockOperator {
            shape: self.shape,
            matrix: self.matrix.map(|x| x * c),
        }
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(&self.matrix)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        linalg::operator_norm(&self.matrix)
    }

    pub fn trace_norm(&self) -> f64 {
        linalg::trace_norm(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &FockOperator) -> f64 {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn commutator(&self, other: &FockOperator) -> Result<Self> {
        self.check_same(other)?;
        Ok(FockOperator {
            shape: self.shape,
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        })
    }

    pub fn anticommutator(&self, other: &FockOperator) -> Result<Self> {
        self.check_same(other)?;
        Ok(FockOperator {
            shape: self.shape,
            matrix: &self.matrix * &other.matrix + &other.matrix * &self.matrix,
        })
    }

    pub fn check_same(&self, other: &FockOperator) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    /// `tr(self * other)`.
    pub fn trace_product(&self, other: &FockOperator) -> C64 {
        linalg::trace_product(&self.matrix, &other.matrix)
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.shape, rhs.shape, "shape mismatch in operator sum");
        FockOperator {
            shape: self.shape,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.shape, rhs.shape, "shape mismatch in operator difference");
        FockOperator {
            shape: self.shape,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.shape, rhs.shape, "shape mismatch in operator product");
        FockOperator {
            shape: self.shape,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}
