use crate::{Error, Result};
use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

const SUM_TOL: f64 = 1e-12;
const DENOMINATOR_FLOOR: f64 = 1e-15;

/// Probability mass function on `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty pmf".into()));
        }
        if let Some(i) = probs.iter().position(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidDistribution(format!("mu({i}) = {} is not a probability", probs[i])));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("pmf sums to {s}")));
        }
        Ok(Pmf { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Uniform on `support`, zero elsewhere on `0..n`.
    pub fn uniform_on(n: usize, support: &[usize]) -> Result<Self> {
        let mut probs = vec![0.0; n];
        for &i in support {
            if i >= n {
                return Err(Error::IndexOutOfRange { what: "support element", index: i, limit: n });
            }
            probs[i] = 1.0 / support.len() as f64;
        }
        Self::new(probs)
    }

    pub fn point(n: usize, i: usize) -> Result<Self> {
        Self::uniform_on(n, &[i])
    }

    /// Flat-Dirichlet random pmf.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let s: f64 = w.iter().sum();
        Pmf {
            probs: w.iter().map(|x| x / s).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&x| x > 0.0).count()
    }

    pub fn mass_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.probs[i]).sum()
    }
}

fn check_tuple(mu: &Pmf, tuple: &[usize]) -> Result<bool> {
    if tuple.len() > mu.support_size() {
        return Err(Error::InvalidArgument(format!(
            "tuple length {} exceeds support size {}",
            tuple.len(),
            mu.support_size()
        )));
    }
    for (pos, &i) in tuple.iter().enumerate() {
        if i >= mu.len() {
            return Err(Error::IndexOutOfRange { what: "tuple entry", index: i, limit: mu.len() });
        }
        if tuple[..pos].contains(&i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Probability of drawing the ordered tuple without replacement:
/// `mu(i_1) ... mu(i_k) / ((1 - mu(i_1)) ... (1 - mu(i_1) - ... - mu(i_{k-1})))`.
pub fn swor_pmf(mu: &Pmf, tuple: &[usize]) -> Result<f64> {
    if !check_tuple(mu, tuple)? {
        return Ok(0.0);
    }
    let mut value = 1.0;
    let mut drawn = 0.0;
    for &i in tuple {
        let p = mu.get(i);
        if p == 0.0 {
            return Ok(0.0);
        }
        let remaining = 1.0 - drawn;
        if remaining <= DENOMINATOR_FLOOR {
            return Err(Error::Numerical(format!("remaining mass {remaining:e} underflows")));
        }
        value *= p / remaining;
        drawn += p;
    }
    Ok(value)
}

/// The product-renormalised tuple law `mu(i_1)...mu(i_m) / sum_{distinct} mu(j_1)...mu(j_m)`.
///
/// It is a valid law on distinct tuples but not the law of sampling without
/// replacement; kept only to demonstrate that its marginals are inconsistent.
pub fn product_renormalized_pmf(mu: &Pmf, tuple: &[usize]) -> Result<f64> {
    if !check_tuple(mu, tuple)? {
        return Ok(0.0);
    }
    let num: f64 = tuple.iter().map(|&i| mu.get(i)).product();
    let den: f64 = ordered_tuples(mu.len(), tuple.len())
        .iter()
        .map(|t| t.iter().map(|&i| mu.get(i)).product::<f64>())
        .sum();
    if den <= DENOMINATOR_FLOOR {
        return Err(Error::Numerical(format!("normaliser {den:e} underflows")));
    }
    Ok(num / den)
}

/// All ordered tuples of `k` distinct elements of `0..n`, lexicographic.
pub fn ordered_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn rec(n: usize, k: usize, used: &mut [bool], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(n, k, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, k, &mut used, &mut current, &mut out);
    out
}

fn marginal_deviation(
    mu: &Pmf,
    k: usize,
    law: impl Fn(&Pmf, &[usize]) -> Result<f64>,
) -> Result<f64> {
    if k + 1 > mu.support_size() {
        return Err(Error::InvalidArgument(format!(
            "k + 1 = {} exceeds support size {}",
            k + 1,
            mu.support_size()
        )));
    }
    let mut worst: f64 = 0.0;
    for t in ordered_tuples(mu.len(), k) {
        let mut extended = t.clone();
        extended.push(0);
        let mut sum = 0.0;
        for last in (0..mu.len()).filter(|i| !t.contains(i)) {
            *extended.last_mut().expect("nonempty") = last;
            sum += law(mu, &extended)?;
        }
        worst = worst.max((sum - law(mu, &t)?).abs());
    }
    Ok(worst)
}

/// `max_t |sum_i mu^{*k+1}(t, i) - mu^{*k}(t)|` over distinct `k`-tuples `t`.
pub fn swor_marginal_check(mu: &Pmf, k: usize) -> Result<f64> {
    marginal_deviation(mu, k, swor_pmf)
}

/// The same deviation for [`product_renormalized_pmf`].
pub fn product_renormalized_marginal_deviation(mu: &Pmf, k: usize) -> Result<f64> {
    marginal_deviation(mu, k, product_renormalized_pmf)
}

/// Draws `k` indices without replacement, renormalising after each draw.
pub fn swor_sample<R: Rng + ?Sized>(mu: &Pmf, k: usize, rng: &mut R) -> Result<Vec<usize>> {
    if k > mu.support_size() {
        return Err(Error::InvalidArgument(format!(
            "cannot draw {k} distinct elements from a support of size {}",
            mu.support_size()
        )));
    }
    let mut weights = mu.probs().to_vec();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = None;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                pick = Some(i);
                if u < w {
                    break;
                }
                u -= w;
            }
        }
        let i = pick.expect("positive mass remains");
        out.push(i);
        weights[i] = 0.0;
    }
    Ok(out)
}
