use super::joint::JointDistribution;
use super::pmf::{ordered_tuples, swor_pmf, Pmf};
use crate::par::{map_slice, Execution};
use crate::{Error, Result};
use serde::Serialize;

const MAX_EXHAUSTIVE_BITS: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecouplingResult {
    pub k: usize,
    pub k_prime: usize,
    /// Minimising conditioning set, ascending.
    pub conditioning: Vec<usize>,
    /// `sum_{a != b} pi(a) mu(b) I(a:b|C)` at the minimiser.
    pub achieved: f64,
    /// `E_{k' < k} E_{C ~ mu^{*k'}}` of the same weighted sum.
    pub average: f64,
    /// `(1/k) E_{i ~ pi} I(X_i : X_{-i})`.
    pub information_bound: f64,
    /// `ln(d) / k`.
    pub ln_d_over_k: f64,
}

/// `sum_{a != b} pi(a) mu(b) I(X_a : X_b | X_C)`.
pub fn weighted_cmi(p: &JointDistribution, pi: &Pmf, mu: &Pmf, c: &[usize]) -> Result<f64> {
    let mut total = 0.0;
    for a in 0..p.n() {
        if pi.get(a) == 0.0 {
            continue;
        }
        for b in 0..p.n() {
            if a == b || mu.get(b) == 0.0 {
                continue;
            }
            total += pi.get(a) * mu.get(b) * p.conditional_mutual_information(a, b, c)?;
        }
    }
    Ok(total)
}

/// All subsets of `0..n` with fewer than `k` elements, by size then lexicographically.
pub(crate) fn small_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 1..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&x: &usize| x + 1);
            for v in start..n {
                let mut t = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Candidates within this margin of the incumbent count as ties.
const TIE_TOL: f64 = 1e-12;

fn mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

/// Exhaustive evaluation of the decoupling average and its minimiser.
pub fn decoupling_select(
    p: &JointDistribution,
    pi: &Pmf,
    mu: &Pmf,
    k: usize,
    exec: Execution,
) -> Result<DecouplingResult> {
    let n = p.n();
    if pi.len() != n || mu.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "weights on {} and {} points for {n} variables",
            pi.len(),
            mu.len()
        )));
    }
    if k == 0 || k >= mu.support_size() {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k < |supp(mu)| = {}, got k = {k}",
            mu.support_size()
        )));
    }
    if n as f64 * (p.d() as f64).log2() > MAX_EXHAUSTIVE_BITS {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search limited to n log2 d <= {MAX_EXHAUSTIVE_BITS}"
        )));
    }
    let subsets = small_subsets(n, k);
    let values = map_slice(&subsets, exec, |c| weighted_cmi(p, pi, mu, c));
    let mut by_mask = std::collections::HashMap::with_capacity(subsets.len());
    let mut best: Option<(usize, f64)> = None;
    for (idx, (c, v)) in subsets.iter().zip(values).enumerate() {
        let v = v?;
        by_mask.insert(mask(c), v);
        if best.is_none_or(|(_, b)| v < b - TIE_TOL) {
            best = Some((idx, v));
        }
    }
    let (best_idx, achieved) = best.expect("the empty set is always a candidate");

    let mut average = 0.0;
    for kp in 0..k {
        for t in ordered_tuples(n, kp) {
            let w = swor_pmf(mu, &t)?;
            if w > 0.0 {
                average += w * by_mask[&mask(&t)];
            }
        }
    }
    average /= k as f64;

    let mut info = 0.0;
    for i in 0..n {
        if pi.get(i) > 0.0 {
            info += pi.get(i) * p.information_with_rest(i)?;
        }
    }
    Ok(DecouplingResult {
        k,
        k_prime: subsets[best_idx].len(),
        conditioning: subsets[best_idx].clone(),
        achieved,
        average,
        information_bound: info / k as f64,
        ln_d_over_k: (p.d() as f64).ln() / k as f64,
    })
}
