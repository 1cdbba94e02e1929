use super::joint::{JointDistribution, CONDITIONING_FLOOR};
use super::povm::IcPovm;
use crate::linalg::{hermitian_eigenvalues, hermitian_deviation, hermitian_part, kron, CMatrix, C64};
use crate::{Error, Result};
use rand::Rng;

/// Largest `n log2 d` accepted for a qudit state.
pub const MAX_STATE_BITS: f64 = 12.0;
/// Largest number of outcome tuples enumerated when conditioning.
pub const MAX_OUTCOME_TUPLES: usize = 1 << 16;
const STATE_TOL: f64 = 1e-10;

/// Density matrix of `n` qudits of dimension `d`; site 0 is the most
/// significant tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    n: usize,
    d: usize,
    rho: CMatrix,
}

impl QuditState {
    pub fn new(n: usize, d: usize, rho: CMatrix) -> Result<Self> {
        check_dims(n, d)?;
        let dim = d.pow(n as u32);
        if rho.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        validate_density(&rho)?;
        Ok(QuditState { n, d, rho })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        check_dims(n, d)?;
        let rho = crate::linalg::random_density_matrix(d.pow(n as u32), rng);
        Self::new(n, d, rho)
    }

    /// `rho_0 ⊗ rho_1 ⊗ ...`.
    pub fn product(factors: &[CMatrix]) -> Result<Self> {
        let d = factors.first().map_or(0, |f| f.nrows());
        if factors.iter().any(|f| f.shape() != (d, d)) {
            return Err(Error::ShapeMismatch("factors differ in dimension".into()));
        }
        for f in factors {
            validate_density(f)?;
        }
        let rho = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| kron(&acc, f));
        Self::new(factors.len(), d, rho)
    }

    /// Random product of Hilbert-Schmidt single-site states.
    pub fn random_product<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        check_dims(n, d)?;
        let factors: Vec<_> = (0..n).map(|_| crate::linalg::random_density_matrix(d, rng)).collect();
        Self::product(&factors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    /// Reduced state on `keep`, factors in ascending site order.
    pub fn reduce(&self, keep: &[usize]) -> Result<CMatrix> {
        partial_trace(&self.rho, self.n, self.d, keep)
    }
}

/// Partial trace of an operator on `n` qudits down to `keep` (ascending order).
pub fn partial_trace(m: &CMatrix, n: usize, d: usize, keep: &[usize]) -> Result<CMatrix> {
    let keep = sorted_distinct(keep, n)?;
    let mut m = m.clone();
    let mut sites = n;
    let id = CMatrix::identity(d, d);
    for s in (0..n).rev() {
        if !keep.contains(&s) {
            m = contract_site(&m, sites, d, s, &id);
            sites -= 1;
        }
    }
    Ok(m)
}

fn check_dims(n: usize, d: usize) -> Result<()> {
    if n == 0 || d < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 1 and d >= 2, got n = {n}, d = {d}")));
    }
    if n as f64 * (d as f64).log2() > MAX_STATE_BITS {
        return Err(Error::SizeCap(format!("{n} qudits of dimension {d} exceed 2^{MAX_STATE_BITS}")));
    }
    Ok(())
}

pub(crate) fn validate_density(rho: &CMatrix) -> Result<()> {
    let dev = hermitian_deviation(rho);
    if dev > STATE_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace {tr}")));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -STATE_TOL {
        return Err(Error::InvalidState(format!("eigenvalue {min}")));
    }
    Ok(())
}

fn sorted_distinct(sites: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut v = sites.to_vec();
    v.sort_unstable();
    if let Some(&s) = v.iter().find(|&&s| s >= n) {
        return Err(Error::IndexOutOfRange { what: "site", index: s, limit: n });
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(format!("repeated site in {sites:?}")));
    }
    Ok(v)
}

/// `tr_s[(E_s ⊗ 1) m]` for an operator `m` on `sites` qudits.
pub(crate) fn contract_site(m: &CMatrix, sites: usize, d: usize, s: usize, e: &CMatrix) -> CMatrix {
    let low = d.pow((sites - 1 - s) as u32);
    let out_dim = m.nrows() / d;
    let expand = |rest: usize, digit: usize| (rest / low * d + digit) * low + rest % low;
    CMatrix::from_fn(out_dim, out_dim, |r, c| {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..d {
            for b in 0..d {
                let w = e[(a, b)];
                if w != C64::new(0.0, 0.0) {
                    acc += w * m[(expand(r, b), expand(c, a))];
                }
            }
        }
        acc
    })
}

/// Places `rest` on the sites outside `c` and `1/d` on each site of `c`.
fn embed_with_mixed(rest: &CMatrix, n: usize, d: usize, c: &[usize]) -> CMatrix {
    let dim = d.pow(n as u32);
    let digits = |idx: usize| -> Vec<usize> { (0..n).map(|s| idx / d.pow((n - 1 - s) as u32) % d).collect() };
    let rest_index = |dg: &[usize]| {
        (0..n).filter(|s| !c.contains(s)).fold(0, |acc, s| acc * d + dg[s])
    };
    let scale = 1.0 / d.pow(c.len() as u32) as f64;
    CMatrix::from_fn(dim, dim, |r, col| {
        let (dr, dc) = (digits(r), digits(col));
        if c.iter().any(|&s| dr[s] != dc[s]) {
            C64::new(0.0, 0.0)
        } else {
            rest[(rest_index(&dr), rest_index(&dc))] * scale
        }
    })
}

/// One branch of a measurement on the conditioning set.
#[derive(Debug, Clone)]
pub struct ConditionalState {
    pub prob: f64,
    /// POVM outcome per site of the conditioning set, in the given order.
    pub outcome: Vec<usize>,
    /// Normalised post-measurement state on the unmeasured sites, ascending order.
    pub rest: CMatrix,
}

/// Measures the sites of `c` and returns every branch with probability at least
/// [`CONDITIONING_FLOOR`], renormalised so the kept probabilities sum to one.
pub fn condition_on(rho: &QuditState, c: &[usize], povm: &IcPovm) -> Result<Vec<ConditionalState>> {
    if povm.d() != rho.d {
        return Err(Error::ShapeMismatch(format!("POVM on C^{}, state on C^{}", povm.d(), rho.d)));
    }
    sorted_distinct(c, rho.n)?;
    let m = povm.num_outcomes();
    if (m as f64).powi(c.len() as i32) > MAX_OUTCOME_TUPLES as f64 {
        return Err(Error::SizeCap(format!("{m}^{} outcome tuples", c.len())));
    }
    // contract from the highest site down so lower positions stay valid
    let mut order: Vec<(usize, usize)> = c.iter().copied().enumerate().collect();
    order.sort_by_key(|&(_, s)| std::cmp::Reverse(s));

    let mut branches = vec![(vec![0usize; c.len()], rho.rho.clone())];
    let mut sites = rho.n;
    for &(slot, s) in &order {
        let mut next = Vec::with_capacity(branches.len() * m);
        for (outcome, op) in &branches {
            for (x, e) in povm.effects().iter().enumerate() {
                let mut o = outcome.clone();
                o[slot] = x;
                next.push((o, contract_site(op, sites, rho.d, s, e)));
            }
        }
        branches = next;
        sites -= 1;
    }
    branches.sort_by(|a, b| a.0.cmp(&b.0));

    let mut out = Vec::new();
    for (outcome, op) in branches {
        let prob = op.trace().re;
        if prob >= CONDITIONING_FLOOR {
            out.push(ConditionalState { prob, outcome, rest: hermitian_part(&op.unscale(prob)) });
        }
    }
    let total: f64 = out.iter().map(|b| b.prob).sum();
    if total <= 0.0 {
        return Err(Error::Numerical("no measurement branch has positive probability".into()));
    }
    for b in &mut out {
        b.prob /= total;
    }
    Ok(out)
}

/// Full-system ensemble `{(p(x), tau_x ⊗ (1/d)^{⊗|C|})}`.
pub fn measure_and_condition(rho: &QuditState, c: &[usize], povm: &IcPovm) -> Result<Vec<(f64, QuditState)>> {
    let sorted = sorted_distinct(c, rho.n)?;
    condition_on(rho, c, povm)?
        .into_iter()
        .map(|b| {
            let full = embed_with_mixed(&b.rest, rho.n, rho.d, &sorted);
            Ok((b.prob, QuditState { n: rho.n, d: rho.d, rho: full }))
        })
        .collect()
}

/// Joint law of the POVM outcomes when every site is measured, as a
/// [`JointDistribution`] with one variable per site.
pub fn outcome_distribution(rho: &QuditState, povm: &IcPovm) -> Result<JointDistribution> {
    let (n, d, m) = (rho.n, rho.d, povm.num_outcomes());
    if povm.d() != d {
        return Err(Error::ShapeMismatch(format!("POVM on C^{}, state on C^{d}", povm.d())));
    }
    let dd = d * d;
    // tensor with one (row digit, column digit) axis per site, site 0 outermost
    let dim = d.pow(n as u32);
    let mut t = vec![C64::new(0.0, 0.0); dd.pow(n as u32)];
    for r in 0..dim {
        for c in 0..dim {
            let mut idx = 0;
            for s in 0..n {
                let shift = d.pow((n - 1 - s) as u32);
                idx = idx * dd + (r / shift % d) * d + c / shift % d;
            }
            t[idx] = rho.rho[(r, c)];
        }
    }
    // map axis s from (r, c) to outcome x with weight E_x[c, r]
    let mut sizes = vec![dd; n];
    for s in 0..n {
        let outer: usize = sizes[..s].iter().product();
        let inner: usize = sizes[s + 1..].iter().product();
        let mut next = vec![C64::new(0.0, 0.0); outer * m * inner];
        for o in 0..outer {
            for (x, e) in povm.effects().iter().enumerate() {
                for rc in 0..dd {
                    let w = e[(rc % d, rc / d)];
                    let src = (o * dd + rc) * inner;
                    let dst = (o * m + x) * inner;
                    for i in 0..inner {
                        next[dst + i] += w * t[src + i];
                    }
                }
            }
        }
        t = next;
        sizes[s] = m;
    }
    let mut probs = vec![0.0; t.len()];
    for (idx, z) in t.iter().enumerate() {
        if z.re < -STATE_TOL {
            return Err(Error::Numerical(format!("negative outcome probability {}", z.re)));
        }
        // reorder to the little-endian layout of JointDistribution
        let mut rest = idx;
        let mut target = 0;
        for s in (0..n).rev() {
            target += (rest % m) * m.pow(s as u32);
            rest /= m;
        }
        probs[target] = z.re.max(0.0);
    }
    let s: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= s);
    JointDistribution::new(n, m, probs)
}
