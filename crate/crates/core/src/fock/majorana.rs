use super::{FockOperator, SystemShape};
use crate::linalg::{i_pow, CMatrix, C64, I, ONE};
use crate::Result;

/// Ordered product of Majorana operators, leftmost factor first.
///
/// Every such product maps an occupation basis state to a single basis
/// state times a power of `i`, so it is applied without a dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajoranaString {
    factors: Vec<usize>,
}

impl MajoranaString {
    /// Factors are global Majorana indices `site * 2p + alpha`.
    pub fn new(factors: Vec<usize>) -> Self {
        MajoranaString { factors }
    }

    /// The canonical (ascending) monomial for a Majorana bitmask.
    pub fn from_mask(mask: u64) -> Self {
        let mut factors = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let g = m.trailing_zeros() as usize;
            factors.push(g);
            m &= m - 1;
        }
        MajoranaString { factors }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Occupation bits flipped by the string.
    pub fn flip_mask(&self) -> u64 {
        self.factors
            .iter()
            .fold(0u64, |acc, &g| acc ^ (1u64 << (g / 2)))
    }

    /// Image of basis state `b`: `(target, k)` with `m |b> = i^k |target>`.
    #[inline]
    pub fn act(&self, b: usize) -> (usize, u8) {
        let mut state = b as u64;
        let mut power = 0u8;
        for &g in self.factors.iter().rev() {
            power = power.wrapping_add(single_phase(g, state));
            state ^= 1u64 << (g / 2);
        }
        (state as usize, power & 3)
    }

    pub fn to_matrix(&self, dim: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for b in 0..dim {
            let (t, k) = self.act(b);
            m[(t, b)] = i_pow(k);
        }
        m
    }

    pub fn to_operator(&self, shape: SystemShape) -> FockOperator {
        FockOperator {
            shape,
            matrix: self.to_matrix(shape.dim()),
        }
    }
}

/// Power of `i` picked up when Majorana `g` acts on basis state `state`.
#[inline]
fn single_phase(g: usize, state: u64) -> u8 {
    let q = g / 2;
    let below = state & ((1u64 << q) - 1);
    let mut power = 2 * (below.count_ones() as u8 & 1);
    if g % 2 == 1 {
        // i(f† - f): +i when creating, -i when annihilating
        power += if (state >> q) & 1 == 0 { 1 } else { 3 };
    }
    power
}

/// Jordan-Wigner matrix of `m_site^alpha`.
pub fn majorana(shape: SystemShape, site: usize, alpha: usize) -> Result<FockOperator> {
    let g = shape.majorana_index(site, alpha)?;
    Ok(MajoranaString::new(vec![g]).to_operator(shape))
}

/// `P_j = (-i)^p prod_a m_j^{2a} m_j^{2a+1}` (zero-based alpha).
pub fn local_parity(shape: SystemShape, site: usize) -> Result<FockOperator> {
    shape.check_site(site)?;
    let p = shape.modes_per_site();
    let factors = (0..2 * p)
        .map(|alpha| shape.majorana_index(site, alpha))
        .collect::<Result<Vec<_>>>()?;
    let string = MajoranaString::new(factors);
    // (-i)^p = i^(3p)
    Ok(string.to_operator(shape).scale(i_pow((3 * p % 4) as u8)))
}

/// `f_{site,mode}^†`.
pub fn creation(shape: SystemShape, site: usize, mode: usize) -> Result<FockOperator> {
    let x = majorana(shape, site, 2 * mode)?;
    let y = majorana(shape, site, 2 * mode + 1)?;
    Ok((&x - &y.scale(I)).scale(C64::new(0.5, 0.0)))
}

/// `f_{site,mode}`.
pub fn annihilation(shape: SystemShape, site: usize, mode: usize) -> Result<FockOperator> {
    let x = majorana(shape, site, 2 * mode)?;
    let y = majorana(shape, site, 2 * mode + 1)?;
    Ok((&x + &y.scale(I)).scale(C64::new(0.5, 0.0)))
}

/// `n = f† f`, diagonal in the occupation basis.
pub fn number(shape: SystemShape, site: usize, mode: usize) -> Result<FockOperator> {
    shape.check_site(site)?;
    if mode >= shape.modes_per_site() {
        return Err(crate::Error::IndexOutOfRange {
            what: "mode",
            index: mode,
            limit: shape.modes_per_site(),
        });
    }
    let q = site * shape.modes_per_site() + mode;
    let d = shape.dim();
    let mut m = CMatrix::zeros(d, d);
    for b in 0..d {
        if (b >> q) & 1 == 1 {
            m[(b, b)] = ONE;
        }
    }
    FockOperator::new(shape, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    fn shape(n: usize, p: usize) -> SystemShape {
        SystemShape::new(n, p).unwrap()
    }

    #[test]
    fn majorana_squares_to_identity() {
        let s = shape(1, 1);
        let m = majorana(s, 0, 0).unwrap();
        let sq = &m * &m;
        assert!(sq.max_abs_diff(&FockOperator::identity(s)) < 1e-12);
    }

    #[test]
    fn distinct_sites_anticommute() {
        let s = shape(2, 1);
        let a = majorana(s, 0, 0).unwrap();
        let b = majorana(s, 1, 1).unwrap();
        let ac = a.anticommutator(&b).unwrap();
        assert!(ac.operator_norm() < 1e-12);
    }

    #[test]
    fn majorana_is_hermitian_unitary() {
        let s = shape(2, 1);
        let m = majorana(s, 1, 0).unwrap();
        assert!(m.is_hermitian());
        let sv = m.matrix().clone().singular_values();
        assert!(sv.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn full_car_relations() {
        for (n, p) in [(2, 1), (2, 2), (3, 1)] {
            let s = shape(n, p);
            let ops: Vec<_> = (0..n)
                .flat_map(|j| (0..2 * p).map(move |a| (j, a)))
                .map(|(j, a)| majorana(s, j, a).unwrap())
                .collect();
            let id = FockOperator::identity(s);
            for (x, a) in ops.iter().enumerate() {
                for (y, b) in ops.iter().enumerate() {
                    let ac = a.anticommutator(b).unwrap();
                    if x == y {
                        assert!(ac.max_abs_diff(&id.scale(C64::new(2.0, 0.0))) < 1e-12);
                    } else {
                        assert!(ac.operator_norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn single_mode_parity_is_diag_one_minus_one() {
        let s = shape(1, 1);
        let p = local_parity(s, 0).unwrap();
        assert!((p.matrix()[(0, 0)] - ONE).norm() < 1e-12);
        assert!((p.matrix()[(1, 1)] + ONE).norm() < 1e-12);
        assert!(p.matrix()[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn parity_is_involution_and_commutes() {
        for (n, p) in [(2, 1), (2, 2), (3, 2)] {
            let s = shape(n, p);
            let id = FockOperator::identity(s);
            let ps: Vec<_> = (0..n).map(|j| local_parity(s, j).unwrap()).collect();
            for a in &ps {
                assert!(a.is_hermitian());
                assert!((a * a).max_abs_diff(&id) < 1e-12);
                for b in &ps {
                    assert!(a.commutator(b).unwrap().operator_norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parity_is_diagonal_site_parity() {
        let s = shape(2, 2);
        let p1 = local_parity(s, 1).unwrap();
        for b in 0..s.dim() {
            let occ = ((b as u64) & s.site_mode_mask(1)).count_ones();
            let expect = if occ.is_multiple_of(2) { 1.0 } else { -1.0 };
            assert!((p1.matrix()[(b, b)].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_operators() {
        let s = shape(2, 1);
        let c = creation(s, 1, 0).unwrap();
        let a = annihilation(s, 1, 0).unwrap();
        let n = number(s, 1, 0).unwrap();
        assert!((&c * &a).max_abs_diff(&n) < 1e-12);
        assert!(c.max_abs_diff(&a.adjoint()) < 1e-12);
        // f† on vacuum of mode 1 -> |b = 2>, no string since mode 0 is empty
        assert!((c.matrix()[(2, 0)] - ONE).norm() < 1e-12);
        // with mode 0 occupied the string gives a minus sign
        assert!((c.matrix()[(3, 1)] + ONE).norm() < 1e-12);
        assert_eq!(c.matrix()[(0, 2)], ZERO);
    }

    #[test]
    fn out_of_range() {
        let s = shape(2, 1);
        assert!(majorana(s, 2, 0).is_err());
        assert!(majorana(s, 0, 2).is_err());
        assert!(local_parity(s, 5).is_err());
    }
}
