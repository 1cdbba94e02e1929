use super::{FockOperator, MajoranaString, SystemShape};
use crate::linalg::{i_pow, CMatrix, C64, I, ONE, ZERO};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Linear combination of Majorana strings, applied matrix-free.
///
/// Lets the norm identities be checked on Fock spaces too large for dense
/// matrices.
#[derive(Debug, Clone)]
pub struct MajoranaSum {
    shape: SystemShape,
    terms: Vec<(C64, MajoranaString)>,
}

impl MajoranaSum {
    pub fn new(shape: SystemShape) -> Self {
        MajoranaSum {
            shape,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coefficient: C64, string: MajoranaString) {
        self.terms.push((coefficient, string));
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn terms(&self) -> &[(C64, MajoranaString)] {
        &self.terms
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        for (c, s) in &self.terms {
            for (b, &x) in v.iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                let (t, k) = s.act(b);
                out[t] += c * i_pow(k) * x;
            }
        }
        out
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        for (c, s) in &self.terms {
            let cc = c.conj();
            for (b, slot) in out.iter_mut().enumerate() {
                let (t, k) = s.act(b);
                *slot += cc * i_pow(k).conj() * v[t];
            }
        }
        out
    }

    /// Column `b` of the operator as sparse `(row, value)` pairs.
    pub fn column(&self, b: usize) -> BTreeMap<usize, C64> {
        let mut col = BTreeMap::new();
        for (c, s) in &self.terms {
            let (t, k) = s.act(b);
            *col.entry(t).or_insert(ZERO) += c * i_pow(k);
        }
        col
    }

    /// `max |(A^2 - c 1)_{rc}|`, computed column by column.
    pub fn square_deviation_from(&self, c: C64) -> f64 {
        let d = self.shape.dim();
        let mut worst: f64 = 0.0;
        for b in 0..d {
            let mut sq: BTreeMap<usize, C64> = BTreeMap::new();
            for (&mid, &x) in &self.column(b) {
                for (c2, s) in &self.terms {
                    let (t, k) = s.act(mid);
                    *sq.entry(t).or_insert(ZERO) += c2 * i_pow(k) * x;
                }
            }
            let diag = sq.get(&b).copied().unwrap_or(ZERO);
            worst = worst.max((diag - c).norm());
            for (&r, &v) in &sq {
                if r != b {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }

    /// Max-abs deviation between the operator and its adjoint.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.shape.dim();
        let cols: Vec<BTreeMap<usize, C64>> = (0..d).map(|b| self.column(b)).collect();
        let mut worst: f64 = 0.0;
        for (c, col) in cols.iter().enumerate() {
            for (&r, &v) in col {
                let mirror = cols[r].get(&c).copied().unwrap_or(ZERO);
                worst = worst.max((v - mirror.conj()).norm());
            }
        }
        worst
    }

    pub fn to_operator(&self) -> FockOperator {
        let d = self.shape.dim();
        let mut m = CMatrix::zeros(d, d);
        for (c, s) in &self.terms {
            for b in 0..d {
                let (t, k) = s.act(b);
                m[(t, b)] += c * i_pow(k);
            }
        }
        FockOperator {
            shape: self.shape,
            matrix: m,
        }
    }

    /// Largest singular value by power iteration on `A† A`.
    ///
    /// Returns the estimate and whether successive Rayleigh quotients agreed
    /// to `rel_tol` within `max_iters` steps.
    pub fn operator_norm(&self, max_iters: usize, rel_tol: f64) -> (f64, bool) {
        let d = self.shape.dim();
        // Deterministic dense start vector with no special alignment.
        let mut v: Vec<C64> = (0..d)
            .map(|b| {
                let x = (b as f64 + 1.0) * 0.618_033_988_749_895;
                C64::new(1.0 + (x - x.floor()), 0.5 * (3.0 * x).sin())
            })
            .collect();
        normalize(&mut v);
        let mut last = 0.0;
        for it in 0..max_iters {
            let av = self.apply(&v);
            let est: f64 = av.iter().map(|x| x.norm_sqr()).sum();
            let mut w = self.apply_adjoint(&av);
            if normalize(&mut w) == 0.0 {
                return (0.0, true);
            }
            v = w;
            if it > 0 && (est - last).abs() <= rel_tol * est.max(f64::MIN_POSITIVE) {
                return (est.sqrt(), true);
            }
            last = est;
        }
        (last.sqrt(), false)
    }
}

/// Phase `s_k` making a product of `k` distinct Majoranas Hermitian.
pub fn hermitian_phase(k: usize) -> C64 {
    if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
        ONE
    } else {
        I
    }
}

fn site_factors(shape: SystemShape, site: usize, alphas: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = alphas.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != alphas.len() {
        return Err(Error::InvalidArgument(format!(
            "repeated local Majorana index in {alphas:?}"
        )));
    }
    sorted
        .iter()
        .map(|&a| shape.majorana_index(site, a))
        .collect()
}

/// `s_|J| sum_j c_j m_j^J` over the listed sites.
pub fn site_sum(
    shape: SystemShape,
    sites: &[usize],
    alphas: &[usize],
    coefficients: &[f64],
) -> Result<MajoranaSum> {
    if sites.len() != coefficients.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} sites but {} coefficients",
            sites.len(),
            coefficients.len()
        )));
    }
    let phase = hermitian_phase(alphas.len());
    let mut sum = MajoranaSum::new(shape);
    for (&j, &c) in sites.iter().zip(coefficients) {
        sum.push(phase.scale(c), MajoranaString::new(site_factors(shape, j, alphas)?));
    }
    Ok(sum)
}

/// `s_{|J|+|K|} sum_{j in V1, k in V2} m_j^J m_k^K` for disjoint `V1`, `V2`.
pub fn bipartite_sum(
    shape: SystemShape,
    v1: &[usize],
    v2: &[usize],
    alphas_j: &[usize],
    alphas_k: &[usize],
) -> Result<MajoranaSum> {
    if let Some(x) = v1.iter().find(|x| v2.contains(x)) {
        return Err(Error::InvalidArgument(format!(
            "site {x} appears in both vertex sets"
        )));
    }
    let phase = hermitian_phase(alphas_j.len() + alphas_k.len());
    let mut sum = MajoranaSum::new(shape);
    for &j in v1 {
        let fj = site_factors(shape, j, alphas_j)?;
        for &k in v2 {
            let mut f = fj.clone();
            f.extend(site_factors(shape, k, alphas_k)?);
            sum.push(phase, MajoranaString::new(f));
        }
    }
    Ok(sum)
}

fn normalize(v: &mut [C64]) -> f64 {
    let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}
