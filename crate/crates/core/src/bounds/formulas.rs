//! Closed-form right-hand sides. Each function evaluates one printed formula;
//! `*_strict` variants substitute the constant the corresponding proof yields.

use crate::graph::{validate_cover, InteractionGraph, WeightMatrix};
use crate::{Error, Result};

/// Star constant of the distinguishable-particle bound as derived in its proof.
pub const STAR_CONSTANT: f64 = 22.0;
/// Star constant in the appendix restatement and the energy-density corollary.
pub const STAR_CONSTANT_RESTATED: f64 = 18.0;

fn odd_weight(p: usize) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidArgument("modes per site must be at least 1".into()));
    }
    Ok(16f64.powi(p as i32))
}

fn positive(name: &str, x: usize) -> Result<f64> {
    if x == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be positive")));
    }
    Ok(x as f64)
}

fn local_dim(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension must be at least 2, got {d}")));
    }
    Ok(d as f64)
}

fn leaves(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a star needs at least 2 vertices, got {n}")));
    }
    Ok((n - 1) as f64)
}

fn edge_count(graph: &InteractionGraph) -> Result<f64> {
    if graph.num_edges() == 0 {
        return Err(Error::InvalidGraph("bound needs at least one edge".into()));
    }
    Ok(graph.num_edges() as f64)
}

/// Per-site monogamy: `2^{4p} / (4 sqrt(deg))`.
pub fn monogamy_site(p: usize, degree: usize) -> Result<f64> {
    Ok(odd_weight(p)? / (4.0 * positive("degree", degree)?.sqrt()))
}

/// Edge average from all sites: `sum_i 2^{4p} sqrt(|E_i|) / (8|E|)`.
pub fn edge_average(p: usize, graph: &InteractionGraph) -> Result<f64> {
    let m = edge_count(graph)?;
    let s: f64 = graph.degrees().iter().map(|&c| (c as f64).sqrt()).sum();
    Ok(odd_weight(p)? * s / (8.0 * m))
}

/// Edge average from a vertex cover: `sum_{i in V'} 2^{4p} sqrt(|E_i|) / (4|E|)`.
pub fn cover_average(p: usize, graph: &InteractionGraph, cover: &[usize]) -> Result<f64> {
    let m = edge_count(graph)?;
    validate_cover(graph, cover)?;
    Ok(odd_weight(p)? * cover_sqrt_sum(graph, cover) / (4.0 * m))
}

fn cover_sqrt_sum(graph: &InteractionGraph, cover: &[usize]) -> f64 {
    cover.iter().map(|&i| (graph.degree(i) as f64).sqrt()).sum()
}

/// `2^{4p} / (8 sqrt(c))` as printed for c-regular graphs.
pub fn regular_edge_average(p: usize, c: usize) -> Result<f64> {
    Ok(odd_weight(p)? / (8.0 * positive("degree", c)?.sqrt()))
}

/// `2^{4p} / (4 sqrt(c))`: the all-sites edge average evaluated on a c-regular graph.
pub fn regular_edge_average_strict(p: usize, c: usize) -> Result<f64> {
    Ok(odd_weight(p)? / (4.0 * positive("degree", c)?.sqrt()))
}

/// `2^{4p} / (4 sqrt(N - 1))`.
pub fn star_edge_average(p: usize, n: usize) -> Result<f64> {
    Ok(odd_weight(p)? / (4.0 * leaves(n)?.sqrt()))
}

/// Extendible states on a complete bipartite layout: `2^{4p} / (4 sqrt(nk))`.
pub fn bipartite_extension(p: usize, n: usize, k: usize) -> Result<f64> {
    Ok(odd_weight(p)? / (4.0 * (positive("n", n)? * positive("k", k)?).sqrt()))
}

/// General weights: `47 (d^4 ln d tr(A^2) |pi|^2)^{1/5} + 2 |pi|^2`.
pub fn general_product(d: usize, w: &WeightMatrix) -> Result<f64> {
    let d = local_dim(d)?;
    let pi2 = w.pi_norm_squared();
    Ok(47.0 * (d.powi(4) * d.ln() * w.tr_a_squared() * pi2).powf(0.2) + 2.0 * pi2)
}

/// Graph form as printed:
/// `47 (d^4 ln d sum_E 1/(|E_i||E_j|) sum_i |E_i|^2/(4|E|^2))^{1/5} + sum_i |E_i|^2/(2|E|^2)`.
pub fn graph_product(d: usize, graph: &InteractionGraph) -> Result<f64> {
    let d = local_dim(d)?;
    let m = edge_count(graph)?;
    let (inv, sq) = degree_sums(graph);
    Ok(47.0 * (d.powi(4) * d.ln() * inv * sq / (4.0 * m * m)).powf(0.2) + sq / (2.0 * m * m))
}

/// `(sum_E 1/(|E_i||E_j|), sum_i |E_i|^2)`.
fn degree_sums(graph: &InteractionGraph) -> (f64, f64) {
    let inv = graph
        .edges()
        .iter()
        .map(|&(a, b)| 1.0 / (graph.degree(a) * graph.degree(b)) as f64)
        .sum();
    let sq = graph.degrees().iter().map(|&c| (c * c) as f64).sum();
    (inv, sq)
}

/// c-regular graphs: `12 (d^2 ln d / c)^{1/3}`.
pub fn regular_product(d: usize, c: usize) -> Result<f64> {
    let d = local_dim(d)?;
    Ok(12.0 * (d * d * d.ln() / positive("degree", c)?).cbrt())
}

/// Stars: `constant (d^2 ln d / (N - 1))^{1/3}`.
pub fn star_product(d: usize, n: usize, constant: f64) -> Result<f64> {
    let d = local_dim(d)?;
    Ok(constant * (d * d * d.ln() / leaves(n)?).cbrt())
}

/// Complete bipartite graphs: `22 (d^2 ln d / size)^{1/3}`, where the printed
/// statement uses `size = |V|` and the proof supports `size = |B|`.
pub fn bipartite_product(d: usize, size: usize) -> Result<f64> {
    let d = local_dim(d)?;
    Ok(STAR_CONSTANT * (d * d * d.ln() / positive("size", size)?).cbrt())
}

/// Fermionic product approximation as printed:
/// `sum_{i in V'} 2^{4p} sqrt(|E_i|) / |E| + eps`.
pub fn fermion_product(p: usize, graph: &InteractionGraph, cover: &[usize], epsilon: f64) -> Result<f64> {
    Ok(fermion_cover_term(p, graph, cover)? + nonneg_epsilon(epsilon)?)
}

/// Same with the per-site monogamy factor `1/4` carried through.
pub fn fermion_product_strict(p: usize, graph: &InteractionGraph, cover: &[usize], epsilon: f64) -> Result<f64> {
    Ok(fermion_cover_term(p, graph, cover)? / 4.0 + nonneg_epsilon(epsilon)?)
}

fn nonneg_epsilon(epsilon: f64) -> Result<f64> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    Ok(epsilon)
}

fn fermion_cover_term(p: usize, graph: &InteractionGraph, cover: &[usize]) -> Result<f64> {
    let m = edge_count(graph)?;
    validate_cover(graph, cover)?;
    Ok(odd_weight(p)? * cover_sqrt_sum(graph, cover) / m)
}

/// Distinguishable part of the two-local corollary with `d = 2^p` as printed:
/// `47 (2^{4p} p sum_E 1/(|E_i||E_j|) sum_i |E_i|^2/|E|^2)^{1/5} + 2 sum_i |E_i|^2/|E|^2`.
pub fn two_local_epsilon(p: usize, graph: &InteractionGraph) -> Result<f64> {
    let m = edge_count(graph)?;
    let (inv, sq) = degree_sums(graph);
    let s = sq / (m * m);
    Ok(47.0 * (odd_weight(p)? * p as f64 * inv * s).powf(0.2) + 2.0 * s)
}

pub fn two_local(p: usize, graph: &InteractionGraph, cover: &[usize]) -> Result<f64> {
    fermion_product(p, graph, cover, two_local_epsilon(p, graph)?)
}

pub fn two_local_strict(p: usize, graph: &InteractionGraph, cover: &[usize]) -> Result<f64> {
    fermion_product_strict(p, graph, cover, two_local_epsilon(p, graph)?)
}

fn regular_energy_tail(p: usize, c: f64) -> f64 {
    12.0 * (4f64.powi(p as i32) * p as f64 / c).cbrt()
}

/// `2^{4p}/(8 sqrt c) + 12 (2^{2p} p / c)^{1/3}`.
pub fn energy_density_regular(p: usize, c: usize) -> Result<f64> {
    Ok(regular_edge_average(p, c)? + regular_energy_tail(p, c as f64))
}

pub fn energy_density_regular_strict(p: usize, c: usize) -> Result<f64> {
    Ok(regular_edge_average_strict(p, c)? + regular_energy_tail(p, c as f64))
}

/// Spinless Hubbard on a `D`-dimensional square lattice: `max(t, U)` times the
/// c-regular value at `c = 2D`.
pub fn energy_density_hubbard(p: usize, t: f64, u: f64, dim: usize) -> Result<f64> {
    Ok(t.abs().max(u.abs()) * energy_density_regular(p, 2 * dim)?)
}

pub fn energy_density_hubbard_strict(p: usize, t: f64, u: f64, dim: usize) -> Result<f64> {
    Ok(t.abs().max(u.abs()) * energy_density_regular_strict(p, 2 * dim)?)
}

/// `2^{4p}/(4 sqrt(N-1)) + constant (2^{2p} p / (N-1))^{1/3}`.
pub fn energy_density_star(p: usize, n: usize, constant: f64) -> Result<f64> {
    let l = leaves(n)?;
    Ok(star_edge_average(p, n)? + constant * (4f64.powi(p as i32) * p as f64 / l).cbrt())
}

/// One-sided extendibility: `2^{4p}/(4 sqrt k) + 8/k`.
pub fn one_sided_extension(p: usize, k: usize) -> Result<f64> {
    let kf = positive("k", k)?;
    Ok(odd_weight(p)? / (4.0 * kf.sqrt()) + 8.0 / kf)
}

/// Two-sided extendibility: `2^{4p}/(4 sqrt(nk)) + 8/k`.
pub fn two_sided_extension(p: usize, n: usize, k: usize) -> Result<f64> {
    Ok(bipartite_extension(p, n, k)? + 8.0 / positive("k", k)?)
}

/// Two-sided with `n = k`: `(2^{4p} + 32) / (4k)`.
pub fn symmetric_extension(p: usize, k: usize) -> Result<f64> {
    Ok((odd_weight(p)? + 32.0) / (4.0 * positive("k", k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{vertex_cover, CoverMode};
    use approx::assert_abs_diff_eq;

    const EPS: f64 = 1e-12;

    #[test]
    fn monogamy_examples() {
        assert_abs_diff_eq!(monogamy_site(1, 4).unwrap(), 2.0, epsilon = EPS);
        assert_abs_diff_eq!(monogamy_site(1, 64).unwrap(), 0.5, epsilon = EPS);
        assert_abs_diff_eq!(monogamy_site(2, 1).unwrap(), 64.0, epsilon = EPS);
        assert!(monogamy_site(1, 0).is_err());
    }

    #[test]
    fn edge_average_examples() {
        let star = InteractionGraph::star(5).unwrap();
        assert_abs_diff_eq!(edge_average(1, &star).unwrap(), 3.0, epsilon = EPS);
        assert_abs_diff_eq!(cover_average(1, &star, &[0]).unwrap(), 2.0, epsilon = EPS);
        assert!(cover_average(1, &star, &[1]).is_err());
        assert_abs_diff_eq!(regular_edge_average(1, 4).unwrap(), 1.0, epsilon = EPS);
        assert_abs_diff_eq!(star_edge_average(1, 17).unwrap(), 1.0, epsilon = EPS);
        assert_abs_diff_eq!(regular_edge_average(1, 64).unwrap(), 0.25, epsilon = EPS);
    }

    #[test]
    fn regular_edge_average_from_all_sites_matches_strict_form() {
        for (g, c) in [
            (InteractionGraph::ring(6).unwrap(), 2),
            (InteractionGraph::lattice(&[3, 4]).unwrap(), 4),
            (InteractionGraph::complete(5).unwrap(), 4),
        ] {
            for p in 1..=3 {
                let all = edge_average(p, &g).unwrap();
                assert_abs_diff_eq!(all, regular_edge_average_strict(p, c).unwrap(), epsilon = EPS);
                assert_abs_diff_eq!(all, 2.0 * regular_edge_average(p, c).unwrap(), epsilon = EPS);
            }
        }
    }

    #[test]
    fn extension_examples() {
        assert_abs_diff_eq!(bipartite_extension(1, 1, 1).unwrap(), 4.0, epsilon = EPS);
        assert_abs_diff_eq!(bipartite_extension(1, 4, 4).unwrap(), 1.0, epsilon = EPS);
        assert_abs_diff_eq!(bipartite_extension(1, 1, 16).unwrap(), 1.0, epsilon = EPS);
        assert_abs_diff_eq!(one_sided_extension(1, 16).unwrap(), 1.5, epsilon = EPS);
        assert_abs_diff_eq!(symmetric_extension(1, 4).unwrap(), 3.0, epsilon = EPS);
        for p in 1..=3 {
            for k in 1..=20 {
                assert_abs_diff_eq!(
                    two_sided_extension(p, k, k).unwrap(),
                    symmetric_extension(p, k).unwrap(),
                    epsilon = EPS
                );
            }
        }
    }

    #[test]
    fn fermion_product_examples() {
        let star = InteractionGraph::star(5).unwrap();
        assert_abs_diff_eq!(fermion_product(1, &star, &[0], 0.0).unwrap(), 8.0, epsilon = EPS);
        let edge = InteractionGraph::path(2).unwrap();
        assert_abs_diff_eq!(fermion_product(1, &edge, &[0], 0.25).unwrap(), 16.25, epsilon = EPS);
        assert!(fermion_product(1, &edge, &[0], -1.0).is_err());
        for g in [star, InteractionGraph::lattice(&[3, 3]).unwrap()] {
            let cover = vertex_cover(&g, CoverMode::Exact).vertices;
            let printed = fermion_product(1, &g, &cover, 0.0).unwrap();
            assert_abs_diff_eq!(printed, 4.0 * cover_average(1, &g, &cover).unwrap(), epsilon = EPS);
            assert_abs_diff_eq!(printed, 4.0 * fermion_product_strict(1, &g, &cover, 0.0).unwrap(), epsilon = EPS);
            assert!(two_local(1, &g, &cover).unwrap() >= printed);
        }
    }

    #[test]
    fn energy_density_examples() {
        assert_abs_diff_eq!(
            energy_density_regular(1, 16).unwrap(),
            0.5 + 12.0 * 0.25f64.cbrt(),
            epsilon = EPS
        );
        assert_abs_diff_eq!(energy_density_hubbard(1, 1.0, 1.0, 2).unwrap(), 13.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            energy_density_star(1, 5, STAR_CONSTANT_RESTATED).unwrap(),
            20.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(energy_density_star(1, 5, STAR_CONSTANT).unwrap(), 24.0, epsilon = 1e-12);
    }

    #[test]
    fn regular_energy_density_decomposes() {
        for p in 1..=3 {
            for c in 1..=40 {
                let tail = 12.0 * (4f64.powi(p as i32) * p as f64 / c as f64).cbrt();
                assert_abs_diff_eq!(
                    energy_density_regular(p, c).unwrap(),
                    regular_edge_average(p, c).unwrap() + tail,
                    epsilon = EPS
                );
                // the distinguishable tail never exceeds the d = 2^p product bound
                assert!(tail >= regular_product(1 << p, c).unwrap() - EPS);
            }
        }
    }

    #[test]
    fn product_bounds_reduce_to_limits() {
        let k4 = InteractionGraph::complete(4).unwrap();
        let w = WeightMatrix::uniform(&k4).unwrap();
        let v = general_product(2, &w).unwrap();
        let expected = 47.0 * (16.0 * 2f64.ln() * (4.0 / 3.0) * 0.25).powf(0.2) + 0.5;
        assert_abs_diff_eq!(v, expected, epsilon = 1e-12);
        assert!(general_product(1, &w).is_err());
        assert!(general_product(4, &w).unwrap() > v);
    }

    #[test]
    fn monotone_in_growth_parameters() {
        for p in 1..=3 {
            for x in 1..60 {
                assert!(monogamy_site(p, x + 1).unwrap() <= monogamy_site(p, x).unwrap());
                assert!(regular_edge_average(p, x + 1).unwrap() <= regular_edge_average(p, x).unwrap());
                assert!(star_edge_average(p, x + 2).unwrap() <= star_edge_average(p, x + 1).unwrap());
                assert!(bipartite_extension(p, x + 1, 3).unwrap() <= bipartite_extension(p, x, 3).unwrap());
                assert!(one_sided_extension(p, x + 1).unwrap() <= one_sided_extension(p, x).unwrap());
                assert!(symmetric_extension(p, x + 1).unwrap() <= symmetric_extension(p, x).unwrap());
                assert!(energy_density_regular(p, x + 1).unwrap() <= energy_density_regular(p, x).unwrap());
                assert!(
                    energy_density_star(p, x + 2, STAR_CONSTANT).unwrap()
                        <= energy_density_star(p, x + 1, STAR_CONSTANT).unwrap()
                );
            }
        }
        for d in 2..=5 {
            for x in 1..60 {
                assert!(regular_product(d, x + 1).unwrap() <= regular_product(d, x).unwrap());
                assert!(star_product(d, x + 2, STAR_CONSTANT).unwrap() <= star_product(d, x + 1, STAR_CONSTANT).unwrap());
                assert!(bipartite_product(d, x + 1).unwrap() <= bipartite_product(d, x).unwrap());
            }
        }
    }
}
