//! The parity twirls `Xi_j(X) = (X + P_j X P_j)/2` and their composition.
//!
//! `P_j` is diagonal in the occupation basis, so the twirl keeps exactly the
//! entries whose row and column have equal parity on site `j`.

use super::FockOperator;
use crate::linalg::ZERO;
use crate::Result;

pub fn xi_site(x: &FockOperator, site: usize) -> Result<FockOperator> {
    let shape = x.shape();
    shape.check_site(site)?;
    let mask = shape.site_mode_mask(site);
    let parity = |b: usize| ((b as u64) & mask).count_ones() & 1;
    let mut out = x.matrix().clone();
    let d = shape.dim();
    for c in 0..d {
        let pc = parity(c);
        for r in 0..d {
            if parity(r) != pc {
                out[(r, c)] = ZERO;
            }
        }
    }
    FockOperator::new(shape, out)
}

/// `Xi = Xi_1 o ... o Xi_N`: projects onto the totally even part.
pub fn xi_total(x: &FockOperator) -> FockOperator {
    let shape = x.shape();
    let d = shape.dim();
    let sig: Vec<u64> = (0..d).map(|b| shape.parity_signature(b)).collect();
    let mut out = x.matrix().clone();
    for c in 0..d {
        for r in 0..d {
            if sig[r] != sig[c] {
                out[(r, c)] = ZERO;
            }
        }
    }
    FockOperator {
        shape,
        matrix: out,
    }
}
