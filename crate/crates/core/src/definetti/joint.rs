use crate::{Error, Result};
use rand::Rng;
use rand_distr::Exp1;

const SUM_TOL: f64 = 1e-10;
/// Conditioning outcomes below this probability are dropped.
pub const CONDITIONING_FLOOR: f64 = 1e-14;
const MAX_TABLE_BITS: f64 = 24.0;

/// Joint law of `n` variables with `d` outcomes each. Outcome `(x_0, ..., x_{n-1})`
/// is stored at index `sum_i x_i d^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n: usize,
    d: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(n: usize, d: usize, probs: Vec<f64>) -> Result<Self> {
        check_size(n, d)?;
        let expected = d.pow(n as u32);
        if probs.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries, expected d^n = {expected}",
                probs.len()
            )));
        }
        if let Some(i) = probs.iter().position(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {i} is {}", probs[i])));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("table sums to {s}")));
        }
        Ok(JointDistribution { n, d, probs })
    }

    /// Flat-Dirichlet random table.
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        check_size(n, d)?;
        let w: Vec<f64> = (0..d.pow(n as u32)).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let s: f64 = w.iter().sum();
        Self::new(n, d, w.iter().map(|x| x / s).collect())
    }

    /// Independent variables with the given marginals.
    pub fn product(marginals: &[Vec<f64>]) -> Result<Self> {
        let n = marginals.len();
        let d = marginals.first().map_or(0, Vec::len);
        if marginals.iter().any(|m| m.len() != d) {
            return Err(Error::ShapeMismatch("marginals differ in length".into()));
        }
        check_size(n, d)?;
        let probs = (0..d.pow(n as u32))
            .map(|idx| {
                let mut rest = idx;
                let mut p = 1.0;
                for m in marginals {
                    p *= m[rest % d];
                    rest /= d;
                }
                p
            })
            .collect();
        Self::new(n, d, probs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn outcome(&self, index: usize, var: usize) -> usize {
        (index / self.d.pow(var as u32)) % self.d
    }

    fn check_vars(&self, vars: &[usize]) -> Result<()> {
        for (pos, &v) in vars.iter().enumerate() {
            if v >= self.n {
                return Err(Error::IndexOutOfRange { what: "variable", index: v, limit: self.n });
            }
            if vars[..pos].contains(&v) {
                return Err(Error::InvalidArgument(format!("variable {v} listed twice")));
            }
        }
        Ok(())
    }

    /// Marginal table over `vars`, indexed by `sum_t x_{vars[t]} d^t`.
    pub fn marginal(&self, vars: &[usize]) -> Result<Vec<f64>> {
        self.check_vars(vars)?;
        let mut out = vec![0.0; self.d.pow(vars.len() as u32)];
        for (idx, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            out[self.sub_index(idx, vars)] += p;
        }
        Ok(out)
    }

    fn sub_index(&self, idx: usize, vars: &[usize]) -> usize {
        let mut j = 0;
        let mut stride = 1;
        for &v in vars {
            j += self.outcome(idx, v) * stride;
            stride *= self.d;
        }
        j
    }

    /// Shannon entropy of the marginal on `vars`, in nats.
    pub fn entropy(&self, vars: &[usize]) -> Result<f64> {
        Ok(shannon(&self.marginal(vars)?))
    }

    /// `I(A:B) = S(A) + S(B) - S(AB)` in nats.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if let Some(x) = a.iter().find(|x| b.contains(x)) {
            return Err(Error::InvalidArgument(format!("variable {x} is on both sides")));
        }
        let ab: Vec<usize> = a.iter().chain(b).copied().collect();
        Ok(self.entropy(a)? + self.entropy(b)? - self.entropy(&ab)?)
    }

    /// `I(X_a:X_b | X_C) = E_{x ~ p_C} I(X_a:X_b)_{p_x}`, by explicit conditioning.
    /// Zero when `a` or `b` lies in `C`.
    pub fn conditional_mutual_information(&self, a: usize, b: usize, c: &[usize]) -> Result<f64> {
        if a == b {
            return Err(Error::InvalidArgument(format!("conditional information needs a != b, got {a} twice")));
        }
        self.check_vars(&[a, b])?;
        self.check_vars(c)?;
        if c.contains(&a) || c.contains(&b) {
            return Ok(0.0);
        }
        let d = self.d;
        let mut vars = vec![a, b];
        vars.extend_from_slice(c);
        // table over (x_a, x_b, x_C) with x_a least significant
        let table = self.marginal(&vars)?;
        let block = d * d;
        let mut total = 0.0;
        let mut kept = 0.0;
        for cond in table.chunks_exact(block) {
            let pc: f64 = cond.iter().sum();
            if pc < CONDITIONING_FLOOR {
                continue;
            }
            let joint: Vec<f64> = cond.iter().map(|x| x / pc).collect();
            let mut pa = vec![0.0; d];
            let mut pb = vec![0.0; d];
            for xb in 0..d {
                for xa in 0..d {
                    let v = joint[xa + d * xb];
                    pa[xa] += v;
                    pb[xb] += v;
                }
            }
            total += pc * (shannon(&pa) + shannon(&pb) - shannon(&joint));
            kept += pc;
        }
        Ok(if kept > 0.0 { total / kept } else { 0.0 })
    }

    /// `I(X_i : X_{-i})`.
    pub fn information_with_rest(&self, i: usize) -> Result<f64> {
        let rest: Vec<usize> = (0..self.n).filter(|&v| v != i).collect();
        self.mutual_information(&[i], &rest)
    }
}

fn check_size(n: usize, d: usize) -> Result<()> {
    if n == 0 || d < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 1 and d >= 2, got n = {n}, d = {d}")));
    }
    if n as f64 * (d as f64).log2() > MAX_TABLE_BITS {
        return Err(Error::InvalidArgument(format!(
            "table of {d}^{n} entries exceeds 2^{MAX_TABLE_BITS}"
        )));
    }
    Ok(())
}

pub fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}
