use super::decoupling::small_subsets;
use super::joint::JointDistribution;
use super::pmf::Pmf;
use super::povm::IcPovm;
use super::qudit::{condition_on, outcome_distribution, partial_trace, validate_density, QuditState};
use crate::bounds::{bipartite_product, general_product, star_product, STAR_CONSTANT};
use crate::graph::WeightMatrix;
use crate::linalg::{kron, trace_norm, CMatrix};
use crate::par::{map_slice, Execution};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Slack allowed when comparing the measured distance with the bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Which pairs are averaged over, and the sampling laws `pi`, `mu` of the construction.
#[derive(Debug, Clone)]
pub enum Weighting {
    /// Star with the given center: `pi` is the point mass on the center, `mu` uniform on leaves.
    Star { center: usize },
    /// Complete bipartite graph on parts `0..a` and `a..a+b`: `pi` uniform on the first, `mu` on the second.
    Bipartite { a: usize, b: usize },
    /// Arbitrary weights; `pi = mu` is the vertex marginal.
    General(WeightMatrix),
}

impl Weighting {
    fn laws(&self, n: usize) -> Result<(Pmf, Pmf)> {
        match self {
            Weighting::Star { center } => {
                if *center >= n || n < 2 {
                    return Err(Error::InvalidArgument(format!("star center {center} on {n} sites")));
                }
                let leaves: Vec<usize> = (0..n).filter(|i| i != center).collect();
                Ok((Pmf::point(n, *center)?, Pmf::uniform_on(n, &leaves)?))
            }
            Weighting::Bipartite { a, b } => {
                if a + b != n || *a == 0 || *b == 0 {
                    return Err(Error::InvalidArgument(format!("parts {a} + {b} on {n} sites")));
                }
                let left: Vec<usize> = (0..*a).collect();
                let right: Vec<usize> = (*a..n).collect();
                Ok((Pmf::uniform_on(n, &left)?, Pmf::uniform_on(n, &right)?))
            }
            Weighting::General(w) => {
                if w.n() != n {
                    return Err(Error::ShapeMismatch(format!("weights on {} sites, state on {n}", w.n())));
                }
                let pi = Pmf::new(w.pi().to_vec())?;
                Ok((pi.clone(), pi))
            }
        }
    }

    /// Ordered pairs `(a, b)`, `a != b`, with positive averaging weight.
    fn pair_weights(&self, pi: &Pmf, mu: &Pmf) -> Vec<((usize, usize), f64)> {
        let n = pi.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let w = match self {
                    Weighting::General(g) => g.g()[(a, b)],
                    _ => pi.get(a) * mu.get(b),
                };
                if a != b && w > 0.0 {
                    out.push(((a, b), w));
                }
            }
        }
        out
    }

    /// The product-approximation bound this weighting is checked against.
    pub fn bound(&self, d: usize, n: usize) -> Result<f64> {
        match self {
            Weighting::Star { .. } => star_product(d, n, STAR_CONSTANT),
            Weighting::Bipartite { a, b } => bipartite_product(d, a + b),
            Weighting::General(w) => general_product(d, w),
        }
    }
}

/// One term of the separable mixture: a product of single-site states.
#[derive(Debug, Clone)]
pub struct ProductMember {
    pub prob: f64,
    pub outcome: Vec<usize>,
    pub sites: Vec<CMatrix>,
}

#[derive(Debug, Clone)]
pub struct SeparableApprox {
    pub conditioning: Vec<usize>,
    /// Upper estimate of the pair-averaged distance that drove the choice of `conditioning`.
    pub objective: f64,
    /// Weighted conditional mutual information of the outcome law at the chosen set.
    pub weighted_cmi: f64,
    pub members: Vec<ProductMember>,
    pub measured: f64,
    pub bound: f64,
    pub kappa: f64,
}

impl SeparableApprox {
    pub fn k_prime(&self) -> usize {
        self.conditioning.len()
    }

    pub fn within_bound(&self) -> bool {
        self.measured <= self.bound + BOUND_SLACK
    }

    /// The mixture written out as a full density matrix.
    pub fn to_matrix(&self) -> CMatrix {
        let mut total: Option<CMatrix> = None;
        for m in &self.members {
            let term = m.sites.iter().skip(1).fold(m.sites[0].clone(), |acc, s| kron(&acc, s)).scale(m.prob);
            total = Some(match total {
                Some(t) => t + term,
                None => term,
            });
        }
        total.expect("at least one member")
    }
}

fn candidate_objective(
    p: &JointDistribution,
    pairs: &[((usize, usize), f64)],
    c: &[usize],
    d: usize,
) -> Result<(f64, f64)> {
    let mut penalty = 0.0;
    let mut cmi = 0.0;
    let mut spread = 0.0;
    for &((a, b), w) in pairs {
        if c.contains(&a) || c.contains(&b) {
            penalty += 2.0 * w;
            continue;
        }
        let i = p.conditional_mutual_information(a, b, c)?.max(0.0);
        cmi += w * i;
        spread += w * 18.0 * d as f64 * (2.0 * i).sqrt();
    }
    Ok((penalty + spread, cmi))
}

/// Builds the measure-and-condition separable approximation of `rho`.
///
/// Conditioning sets of size `< k` inside the support of `mu` are scored by
/// the distance estimate `P(C) + sum w(a,b) 18 d sqrt(2 I(a:b|C))`; the lowest
/// score wins, ties going to the earlier set in size-then-lexicographic order.
pub fn build_separable_approx(
    rho: &QuditState,
    weighting: &Weighting,
    povm: &IcPovm,
    k: usize,
    exec: Execution,
) -> Result<SeparableApprox> {
    let (n, d) = (rho.n(), rho.d());
    let (pi, mu) = weighting.laws(n)?;
    if k == 0 || k > mu.support_size() {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= |supp(mu)| = {}, got {k}",
            mu.support_size()
        )));
    }
    let pairs = weighting.pair_weights(&pi, &mu);
    let outcomes = outcome_distribution(rho, povm)?;

    let candidates: Vec<Vec<usize>> =
        small_subsets(n, k).into_iter().filter(|c| c.iter().all(|&i| mu.get(i) > 0.0)).collect();
    let scores = map_slice(&candidates, exec, |c| candidate_objective(&outcomes, &pairs, c, d));
    let mut best: Option<(usize, f64, f64)> = None;
    for (idx, s) in scores.into_iter().enumerate() {
        let (obj, cmi) = s?;
        if best.is_none_or(|(_, b, _)| obj < b - 1e-12) {
            best = Some((idx, obj, cmi));
        }
    }
    let (best_idx, objective, weighted_cmi) = best.expect("the empty set is a candidate");
    let conditioning = candidates[best_idx].clone();

    let members = product_members(rho, &conditioning, povm)?;
    let measured = pair_average_distance(rho, &members, &pairs, exec)?;
    Ok(SeparableApprox {
        conditioning,
        objective,
        weighted_cmi,
        members,
        measured,
        bound: weighting.bound(d, n)?,
        kappa: povm.kappa(),
    })
}

fn product_members(rho: &QuditState, c: &[usize], povm: &IcPovm) -> Result<Vec<ProductMember>> {
    let (n, d) = (rho.n(), rho.d());
    let rest_sites: Vec<usize> = (0..n).filter(|s| !c.contains(s)).collect();
    let mixed = CMatrix::identity(d, d).unscale(d as f64);
    condition_on(rho, c, povm)?
        .into_iter()
        .map(|branch| {
            let mut sites = Vec::with_capacity(n);
            for s in 0..n {
                match rest_sites.iter().position(|&r| r == s) {
                    Some(pos) => {
                        let tau = partial_trace(&branch.rest, rest_sites.len(), d, &[pos])?;
                        validate_density(&tau)?;
                        sites.push(tau);
                    }
                    None => sites.push(mixed.clone()),
                }
            }
            Ok(ProductMember { prob: branch.prob, outcome: branch.outcome, sites })
        })
        .collect()
}

fn pair_average_distance(
    rho: &QuditState,
    members: &[ProductMember],
    pairs: &[((usize, usize), f64)],
    exec: Execution,
) -> Result<f64> {
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &((a, b), w) in pairs {
        *weights.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
    }
    let keys: Vec<(usize, usize)> = weights.keys().copied().collect();
    let distances = map_slice(&keys, exec, |&(a, b)| -> Result<f64> {
        let target = rho.reduce(&[a, b])?;
        let d = rho.d();
        let mut sigma = CMatrix::zeros(d * d, d * d);
        for m in members {
            sigma += kron(&m.sites[a], &m.sites[b]).scale(m.prob);
        }
        Ok(trace_norm(&(target - sigma)))
    });
    let mut total = 0.0;
    for (key, dist) in keys.iter().zip(distances) {
        total += weights[key] * dist?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::definetti::build_ic_povm;
    use crate::graph::InteractionGraph;
    use crate::linalg::max_abs_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_input_is_reproduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let povm = build_ic_povm(2).unwrap();
        let rho = QuditState::random_product(4, 2, &mut rng).unwrap();
        let r = build_separable_approx(&rho, &Weighting::Star { center: 0 }, &povm, 2, Execution::Sequential).unwrap();
        assert!(r.conditioning.is_empty());
        assert!(r.measured < 1e-9);
        assert_eq!(r.members.len(), 1);
        assert!(max_abs_diff(&r.to_matrix(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn random_star_state_within_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let povm = build_ic_povm(2).unwrap();
        let rho = QuditState::random(4, 2, &mut rng).unwrap();
        let w = Weighting::Star { center: 0 };
        let r = build_separable_approx(&rho, &w, &povm, 2, Execution::Sequential).unwrap();
        assert!((r.bound - 22.0 * (4.0 * 2f64.ln() / 3.0).cbrt()).abs() < 1e-12);
        assert!(r.measured <= 2.0 && r.within_bound());
        let total: f64 = r.members.iter().map(|m| m.prob).sum();
        assert!((total - 1.0).abs() < 1e-10);
        let par = build_separable_approx(&rho, &w, &povm, 2, Execution::Parallel).unwrap();
        assert_eq!(par.measured.to_bits(), r.measured.to_bits());
        assert_eq!(par.conditioning, r.conditioning);
    }

    #[test]
    fn bipartite_and_general_weightings() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let povm = build_ic_povm(2).unwrap();
        let rho = QuditState::random(4, 2, &mut rng).unwrap();
        let r = build_separable_approx(&rho, &Weighting::Bipartite { a: 2, b: 2 }, &povm, 2, Execution::Sequential)
            .unwrap();
        assert!(r.conditioning.iter().all(|&c| c >= 2));
        assert!(r.within_bound());
        let w = WeightMatrix::uniform(&InteractionGraph::ring(4).unwrap()).unwrap();
        let r = build_separable_approx(&rho, &Weighting::General(w), &povm, 3, Execution::Sequential).unwrap();
        assert!(r.within_bound());
        assert!(r.k_prime() < 3);
    }

    #[test]
    fn shared_bit_keeps_residual_correlation() {
        // an IC measurement only partially reveals a classical bit
        let mut m = CMatrix::zeros(16, 16);
        m[(0, 0)] = crate::linalg::ONE * 0.5;
        m[(15, 15)] = crate::linalg::ONE * 0.5;
        let rho = QuditState::new(4, 2, m).unwrap();
        let povm = build_ic_povm(2).unwrap();
        let r = build_separable_approx(&rho, &Weighting::Star { center: 0 }, &povm, 2, Execution::Sequential).unwrap();
        assert!(r.measured > 0.1 && r.measured <= 1.0 + 1e-12);
    }

    #[test]
    fn rejects_bad_weighting() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let povm = build_ic_povm(2).unwrap();
        let rho = QuditState::random(3, 2, &mut rng).unwrap();
        assert!(build_separable_approx(&rho, &Weighting::Star { center: 3 }, &povm, 1, Execution::Sequential).is_err());
        assert!(build_separable_approx(&rho, &Weighting::Star { center: 0 }, &povm, 3, Execution::Sequential).is_err());
        assert!(
            build_separable_approx(&rho, &Weighting::Bipartite { a: 1, b: 1 }, &povm, 1, Execution::Sequential).is_err()
        );
    }
}
