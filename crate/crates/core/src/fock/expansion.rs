//! Majorana-monomial expansion `A = sum_I c_I m_I` and the parity
//! classification built on it.
//!
//! The monomials `m_I` (ascending products) are orthogonal under the
//! normalized trace, so `c_I = tr(m_I† A) / dim`.

use super::{FockOperator, MajoranaString, SystemShape};
use crate::linalg::{i_pow, CMatrix, C64, ZERO};
use crate::{Error, Result};
use serde::Serialize;

/// Coefficients below this magnitude are treated as absent.
pub const COEFFICIENT_THRESHOLD: f64 = 1e-12;

/// Bitmask over global Majorana indices; bit `g` set means `m_g` is a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonomialMask(pub u64);

impl MonomialMask {
    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    /// Number of factors on `site`.
    pub fn site_count(&self, shape: SystemShape, site: usize) -> u32 {
        (self.0 & shape.site_majorana_mask(site)).count_ones()
    }

    pub fn is_totally_even(&self, shape: SystemShape) -> bool {
        (0..shape.num_sites()).all(|j| self.site_count(shape, j).is_multiple_of(2))
    }

    /// Every per-site count odd or zero.
    pub fn is_totally_odd(&self, shape: SystemShape) -> bool {
        (0..shape.num_sites()).all(|j| {
            let c = self.site_count(shape, j);
            c == 0 || c % 2 == 1
        })
    }

    pub fn string(&self) -> MajoranaString {
        MajoranaString::from_mask(self.0)
    }
}

/// One term `c_I prod_{(j, alpha) in I} m_j^alpha` of an expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajoranaMonomial {
    /// Strictly increasing `(site, alpha)` pairs.
    pub indices: Vec<(usize, usize)>,
    #[serde(serialize_with = "serialize_complex")]
    pub coefficient: C64,
}

fn serialize_complex<S: serde::Serializer>(c: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&c.re)?;
    t.serialize_element(&c.im)?;
    t.end()
}

impl MajoranaMonomial {
    pub fn new(shape: SystemShape, indices: Vec<(usize, usize)>, coefficient: C64) -> Result<Self> {
        if !coefficient.re.is_finite() || !coefficient.im.is_finite() {
            return Err(Error::InvalidArgument("non-finite monomial coefficient".into()));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(format!(
                    "monomial indices must be strictly increasing, got {:?} then {:?}",
                    w[0], w[1]
                )));
            }
        }
        for &(j, a) in &indices {
            shape.majorana_index(j, a)?;
        }
        Ok(MajoranaMonomial {
            indices,
            coefficient,
        })
    }

    fn from_mask(shape: SystemShape, mask: MonomialMask, coefficient: C64) -> Self {
        let w = 2 * shape.modes_per_site();
        let indices = MajoranaString::from_mask(mask.0)
            .factors()
            .iter()
            .map(|&g| (g / w, g % w))
            .collect();
        MajoranaMonomial {
            indices,
            coefficient,
        }
    }

    pub fn mask(&self, shape: SystemShape) -> MonomialMask {
        let w = 2 * shape.modes_per_site();
        MonomialMask(
            self.indices
                .iter()
                .fold(0u64, |acc, &(j, a)| acc | (1u64 << (j * w + a))),
        )
    }

    pub fn to_operator(&self, shape: SystemShape) -> FockOperator {
        self.mask(shape)
            .string()
            .to_operator(shape)
            .scale(self.coefficient)
    }
}

/// `tr(m_I† A)` computed from the phased-permutation action of `m_I`.
pub fn trace_against(a: &CMatrix, string: &MajoranaString) -> C64 {
    let d = a.nrows();
    let mut acc = ZERO;
    for b in 0..d {
        let (t, k) = string.act(b);
        acc += i_pow(k).conj() * a[(t, b)];
    }
    acc
}

/// Single normalized coefficient `c_I = tr(m_I† A) / dim`.
pub fn coefficient(a: &FockOperator, mask: MonomialMask) -> C64 {
    trace_against(a.matrix(), &mask.string()) / a.dim() as f64
}

fn check_enumerable(shape: SystemShape) -> Result<()> {
    let cap = super::mode_cap();
    if shape.num_modes() > cap {
        return Err(Error::DimensionCap {
            modes: shape.num_modes(),
            cap,
        });
    }
    Ok(())
}

/// Lazily enumerates the `4^(pN)` monomials and yields those whose
/// coefficient exceeds [`COEFFICIENT_THRESHOLD`].
pub fn monomial_coefficients(a: &FockOperator) -> impl Iterator<Item = (MonomialMask, C64)> + '_ {
    let total = 1u64 << a.shape().num_majoranas();
    (0..total).filter_map(move |m| {
        let mask = MonomialMask(m);
        let c = coefficient(a, mask);
        (c.norm() > COEFFICIENT_THRESHOLD).then_some((mask, c))
    })
}

pub fn expand(a: &FockOperator) -> Result<Vec<MajoranaMonomial>> {
    let shape = a.shape();
    check_enumerable(shape)?;
    Ok(monomial_coefficients(a)
        .map(|(mask, c)| MajoranaMonomial::from_mask(shape, mask, c))
        .collect())
}

pub fn reconstruct(shape: SystemShape, terms: &[MajoranaMonomial]) -> FockOperator {
    let d = shape.dim();
    let mut m = CMatrix::zeros(d, d);
    for term in terms {
        let s = term.mask(shape).string();
        for b in 0..d {
            let (t, k) = s.act(b);
            m[(t, b)] += term.coefficient * i_pow(k);
        }
    }
    FockOperator { shape, matrix: m }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    TotallyEven,
    TotallyOdd,
    Mixed,
}

/// Totally even wins when every monomial qualifies (this includes the
/// identity and the zero operator); otherwise totally odd if every monomial
/// has odd-or-zero per-site counts.
pub fn classify_parity(a: &FockOperator) -> Result<Parity> {
    let shape = a.shape();
    check_enumerable(shape)?;
    let mut all_even = true;
    let mut all_odd = true;
    for (mask, _) in monomial_coefficients(a) {
        all_even &= mask.is_totally_even(shape);
        all_odd &= mask.is_totally_odd(shape);
        if !all_even && !all_odd {
            return Ok(Parity::Mixed);
        }
    }
    Ok(if all_even {
        Parity::TotallyEven
    } else {
        Parity::TotallyOdd
    })
}

/// `(A_even, A - A_even)` where `A_even` collects the totally even monomials.
pub fn even_odd_split(a: &FockOperator) -> Result<(FockOperator, FockOperator)> {
    let shape = a.shape();
    let terms: Vec<MajoranaMonomial> = expand(a)?
        .into_iter()
        .filter(|t| t.mask(shape).is_totally_even(shape))
        .collect();
    let even = reconstruct(shape, &terms);
    let rest = a - &even;
    Ok((even, rest))
}

/// Fermionic partial trace onto `sites` (strictly increasing).
///
/// Returns the operator `B` on `|sites|` sites with
/// `tr(m_I† B) = tr(m~_I† A)` for every local monomial `m_I`, where `m~_I`
/// is the global monomial on the listed sites. Local site `k` stands for
/// global site `sites[k]`.
pub fn restrict_to_sites(a: &FockOperator, sites: &[usize]) -> Result<FockOperator> {
    let shape = a.shape();
    if sites.is_empty() {
        return Err(Error::InvalidArgument("restriction needs at least one site".into()));
    }
    for w in sites.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidArgument(format!(
                "sites must be strictly increasing, got {sites:?}"
            )));
        }
    }
    for &s in sites {
        shape.check_site(s)?;
    }
    let local = shape.with_sites(sites.len())?;
    let w = 2 * shape.modes_per_site();
    let local_dim = local.dim();
    let n_local = local.num_majoranas();
    let mut out = CMatrix::zeros(local_dim, local_dim);
    for lm in 0..(1u64 << n_local) {
        let mut gm = 0u64;
        for (k, &site) in sites.iter().enumerate() {
            let bits = (lm >> (k * w)) & ((1u64 << w) - 1);
            gm |= bits << (site * w);
        }
        let weight = trace_against(a.matrix(), &MajoranaString::from_mask(gm)) / local_dim as f64;
        if weight.norm() == 0.0 {
            continue;
        }
        let s = MajoranaString::from_mask(lm);
        for b in 0..local_dim {
            let (t, k) = s.act(b);
            out[(t, b)] += weight * i_pow(k);
        }
    }
    FockOperator::new(local, out)
}

/// Places an operator on `k` sites onto the listed sites (strictly
/// increasing) of `shape`, mapping each local Majorana monomial to the global
/// monomial on the same modes. Inverse of [`restrict_to_sites`] up to the
/// factor `2^{p(N-k)}`.
pub fn embed_on_sites(a: &FockOperator, shape: SystemShape, sites: &[usize]) -> Result<FockOperator> {
    let local = a.shape();
    if local.modes_per_site() != shape.modes_per_site() || local.num_sites() != sites.len() {
        return Err(Error::ShapeMismatch(format!(
            "operator on {} sites with p = {} cannot sit on {} sites with p = {}",
            local.num_sites(),
            local.modes_per_site(),
            sites.len(),
            shape.modes_per_site()
        )));
    }
    if sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("sites must be strictly increasing, got {sites:?}")));
    }
    for &s in sites {
        shape.check_site(s)?;
    }
    check_enumerable(local)?;
    let w = 2 * shape.modes_per_site();
    let terms: Vec<MajoranaMonomial> = monomial_coefficients(a)
        .map(|(mask, c)| {
            let mut gm = 0u64;
            for (k, &site) in sites.iter().enumerate() {
                gm |= ((mask.0 >> (k * w)) & ((1u64 << w) - 1)) << (site * w);
            }
            MajoranaMonomial::from_mask(shape, MonomialMask(gm), c)
        })
        .collect();
    Ok(reconstruct(shape, &terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{local_parity, majorana, xi_total};
    use crate::linalg::ONE;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_op(shape: SystemShape, seed: u64) -> FockOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = shape.dim();
        let m = CMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        FockOperator::new(shape, m).unwrap()
    }

    #[test]
    fn single_majorana_expands_to_itself() {
        let s = SystemShape::new(1, 1).unwrap();
        let terms = expand(&majorana(s, 0, 0).unwrap()).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].indices, vec![(0, 0)]);
        assert!((terms[0].coefficient - ONE).norm() < 1e-14);
    }

    #[test]
    fn identity_expands_to_empty_monomial() {
        let s = SystemShape::new(2, 1).unwrap();
        let terms = expand(&FockOperator::identity(s)).unwrap();
        assert_eq!(terms.len(), 1);
        assert!(terms[0].indices.is_empty());
        assert!((terms[0].coefficient - ONE).norm() < 1e-14);
    }

    #[test]
    fn embedding_inverts_restriction() {
        let global = SystemShape::new(4, 1).unwrap();
        let a = random_op(SystemShape::new(2, 1).unwrap(), 7);
        let lifted = embed_on_sites(&a, global, &[1, 3]).unwrap();
        let back = restrict_to_sites(&lifted, &[1, 3]).unwrap();
        assert!((&back - &a.scale(C64::new(4.0, 0.0))).operator_norm() < 1e-10);
        let f = crate::fock::creation(SystemShape::new(2, 1).unwrap(), 0, 0).unwrap();
        let g = crate::fock::creation(global, 1, 0).unwrap();
        assert!((&embed_on_sites(&f, global, &[1, 2]).unwrap() - &g).operator_norm() < 1e-12);
        assert!(embed_on_sites(&a, global, &[3, 1]).is_err());
    }

    #[test]
    fn reconstruction_of_random_operator() {
        let s = SystemShape::new(2, 1).unwrap();
        let a = random_op(s, 42);
        let back = reconstruct(s, &expand(&a).unwrap());
        assert!((&back - &a).operator_norm() < 1e-10);
    }

    #[test]
    fn classification_examples() {
        let s = SystemShape::new(2, 1).unwrap();
        assert_eq!(classify_parity(&local_parity(s, 0).unwrap()).unwrap(), Parity::TotallyEven);
        let m01 = &majorana(s, 0, 0).unwrap() * &majorana(s, 1, 1).unwrap();
        assert_eq!(classify_parity(&m01).unwrap(), Parity::TotallyOdd);
        let pair = &majorana(s, 0, 0).unwrap() * &majorana(s, 0, 1).unwrap();
        let mixed = &pair + &majorana(s, 0, 0).unwrap();
        assert_eq!(classify_parity(&mixed).unwrap(), Parity::Mixed);
    }

    #[test]
    fn split_examples() {
        let s = SystemShape::new(2, 1).unwrap();
        let id = FockOperator::identity(s);
        let m = majorana(s, 0, 0).unwrap();
        let (even, rest) = even_odd_split(&(&id + &m)).unwrap();
        assert!(even.max_abs_diff(&id) < 1e-14);
        assert!(rest.max_abs_diff(&m) < 1e-14);

        let p = local_parity(s, 1).unwrap();
        let (even, rest) = even_odd_split(&p).unwrap();
        assert!(even.max_abs_diff(&p) < 1e-14);
        assert!(rest.operator_norm() < 1e-14);

        let (even, rest) = even_odd_split(&m).unwrap();
        assert!(even.operator_norm() < 1e-14);
        assert!(rest.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn even_part_equals_twirl() {
        let s = SystemShape::new(2, 2).unwrap();
        let a = random_op(s, 9);
        let (even, rest) = even_odd_split(&a).unwrap();
        assert!(even.max_abs_diff(&xi_total(&a)) < 1e-12);
        assert!((&(&even + &rest) - &a).operator_norm() < 1e-12);
    }

    #[test]
    fn monomial_validation() {
        let s = SystemShape::new(2, 1).unwrap();
        assert!(MajoranaMonomial::new(s, vec![(1, 0), (0, 1)], ONE).is_err());
        assert!(MajoranaMonomial::new(s, vec![(0, 0), (0, 0)], ONE).is_err());
        assert!(MajoranaMonomial::new(s, vec![(0, 0), (3, 0)], ONE).is_err());
        assert!(MajoranaMonomial::new(s, vec![(0, 0)], C64::new(f64::NAN, 0.0)).is_err());
        let ok = MajoranaMonomial::new(s, vec![(0, 1), (1, 0)], ONE).unwrap();
        assert_eq!(ok.mask(s), MonomialMask(0b0110));
    }

    #[test]
    fn restriction_of_supported_operator() {
        // m_0^0 m_2^1 on three sites restricts (up to the 2^(p(N-2)) trace
        // factor) to m_0^0 m_1^1 on two sites.
        let s = SystemShape::new(3, 1).unwrap();
        let a = &majorana(s, 0, 0).unwrap() * &majorana(s, 2, 1).unwrap();
        let r = restrict_to_sites(&a, &[0, 2]).unwrap();
        let l = SystemShape::new(2, 1).unwrap();
        let expect = (&majorana(l, 0, 0).unwrap() * &majorana(l, 1, 1).unwrap()).scale(C64::new(2.0, 0.0));
        assert!(r.max_abs_diff(&expect) < 1e-13);
        assert!(restrict_to_sites(&a, &[2, 0]).is_err());
    }
}
