//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always shown.

use fermibound::bounds::{
    bipartite_extension, cover_average, edge_average, energy_density_hubbard, energy_density_regular,
    energy_density_star, fermion_product, general_product, monogamy_site, one_sided_extension,
    regular_edge_average, regular_product, star_edge_average, star_product, symmetric_extension,
    two_local, two_sided_extension, STAR_CONSTANT, STAR_CONSTANT_RESTATED,
};
use fermibound::definetti::{
    build_ic_povm, build_separable_approx, decoupling_select, product_renormalized_marginal_deviation,
    swor_marginal_check, JointDistribution, Pmf, QuditState, Weighting,
};
use fermibound::fock::{bipartite_sum, site_sum, xi_total, SystemShape};
use fermibound::graph::{InteractionGraph, WeightMatrix};
use fermibound::hamiltonian::{build_hubbard_spinless, certificate, OptimizeOptions};
use fermibound::linalg::{hermitian_eigenvalues, kron, max_abs_diff, CMatrix, ONE};
use fermibound::par::{map_slice, Execution};
use fermibound::state::{build_witness, monogamy_check, pair_distance, random_even_observable, random_state};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::Instant;

type Verdict = Result<String, String>;
type Check = (&'static str, fn() -> Verdict);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Nonempty subsets of `0..m` with odd size at most 3.
fn odd_index_sets(m: usize) -> Vec<Vec<usize>> {
    (1u32..1 << m)
        .filter(|s| s.count_ones() % 2 == 1 && s.count_ones() <= 3)
        .map(|s| (0..m).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

struct NormCase {
    p: usize,
    n: usize,
    j: Vec<usize>,
    k: Vec<usize>,
    coefficients: Vec<f64>,
    v1: Vec<usize>,
    v2: Vec<usize>,
}

fn c1_odd_sum_norms() -> Verdict {
    const TOL: f64 = 1e-9;
    let mut r = rng(1);
    let mut cases = Vec::new();
    for p in 1..=2 {
        let sets = odd_index_sets(2 * p);
        for n in 2..=8 {
            for j in &sets {
                for _ in 0..50 {
                    let coefficients = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
                    let k = sets[r.random_range(0..sets.len())].clone();
                    let split = r.random_range(1..n);
                    let mut order: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        order.swap(i, r.random_range(0..=i));
                    }
                    let (v1, v2) = order.split_at(split);
                    cases.push(NormCase { p, n, j: j.clone(), k, coefficients, v1: v1.to_vec(), v2: v2.to_vec() });
                }
            }
        }
    }
    let deviations = map_slice(&cases, Execution::default(), |c| -> Result<f64, String> {
        let shape = SystemShape::with_cap(c.n, c.p, 16).map_err(|e| e.to_string())?;
        let sites: Vec<usize> = (0..c.n).collect();
        let sum = site_sum(shape, &sites, &c.j, &c.coefficients).map_err(|e| e.to_string())?;
        let (norm, _) = sum.operator_norm(200, 1e-15);
        let expected = c.coefficients.iter().map(|x| x * x).sum::<f64>().sqrt();
        ensure((norm - expected).abs() <= TOL, || {
            format!("site sum p={} N={} J={:?}: {norm} vs {expected}", c.p, c.n, c.j)
        })?;
        let b = bipartite_sum(shape, &c.v1, &c.v2, &c.j, &c.k).map_err(|e| e.to_string())?;
        let (bnorm, _) = b.operator_norm(200, 1e-15);
        let bexpected = ((c.v1.len() * c.v2.len()) as f64).sqrt();
        ensure((bnorm - bexpected).abs() <= TOL, || {
            format!("bipartite sum p={} N={} J={:?} K={:?}: {bnorm} vs {bexpected}", c.p, c.n, c.j, c.k)
        })?;
        Ok((norm - expected).abs().max((bnorm - bexpected).abs()))
    });
    let mut worst: f64 = 0.0;
    for d in deviations {
        worst = worst.max(d?);
    }
    Ok(format!("{} norms, max deviation {worst:.2e}", 2 * cases.len()))
}

fn witness_partition(n: usize, mask: u32) -> Result<f64, String> {
    const TOL: f64 = 1e-9;
    let shape = SystemShape::new(n, 1).map_err(|e| e.to_string())?;
    let v1: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    let v2: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
    let rho = build_witness(shape, &v1, &v2).map_err(|e| e.to_string())?;
    let expected = 1.0 / ((v1.len() * v2.len()) as f64).sqrt();
    let mut worst: f64 = 0.0;
    for &a in &v1 {
        for &b in &v2 {
            let d = pair_distance(&rho, a.min(b), a.max(b)).map_err(|e| e.to_string())?;
            worst = worst.max((d - expected).abs());
            ensure((d - expected).abs() <= TOL, || format!("N={n} V1={v1:?} pair ({a},{b}): {d} vs {expected}"))?;
        }
    }
    if v1 == [0] {
        let mut total = 0.0;
        for j in 1..n {
            total += pair_distance(&rho, 0, j).map_err(|e| e.to_string())?;
        }
        let avg = total / (n - 1) as f64;
        let target = 1.0 / ((n - 1) as f64).sqrt();
        ensure((avg - target).abs() <= TOL, || format!("N={n} neighbour average {avg} vs {target}"))?;
    }
    Ok(worst)
}

fn c2_witness_saturation() -> Verdict {
    // every ordered split into nonempty V1, V2
    let splits: Vec<(usize, u32)> = (2..=10).flat_map(|n| (1u32..(1 << n) - 1).map(move |m| (n, m))).collect();
    let results = map_slice(&splits, Execution::default(), |&(n, mask)| witness_partition(n, mask));
    let mut worst: f64 = 0.0;
    for r in results {
        worst = worst.max(r?);
    }
    Ok(format!("{} partitions, max deviation {worst:.2e}", splits.len()))
}

fn c3_monogamy_random() -> Verdict {
    let shape = SystemShape::new(6, 1).map_err(|e| e.to_string())?;
    let k4: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let graphs = [
        InteractionGraph::star(6),
        InteractionGraph::ring(6),
        InteractionGraph::from_edge_list(6, &k4),
    ]
    .into_iter()
    .collect::<fermibound::Result<Vec<_>>>()
    .map_err(|e| e.to_string())?;
    let mut r = rng(3);
    let mut violations = 0usize;
    let mut max_ratio: f64 = 0.0;
    for _ in 0..500 {
        let rho = random_state(shape, &mut r);
        for g in &graphs {
            let report = monogamy_check(&rho, g, Execution::default()).map_err(|e| e.to_string())?;
            violations += report.violations();
            for e in &report.entries {
                max_ratio = max_ratio.max(e.measured / e.bound);
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("1500 checks, 0 violations, max measured/bound {max_ratio:.3e}"))
}

fn c4_channel() -> Verdict {
    const TOL: f64 = 1e-10;
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for (n, p) in [(3, 1), (2, 2), (4, 1)] {
        let shape = SystemShape::new(n, p).map_err(|e| e.to_string())?;
        let rho = random_state(shape, &mut r);
        let sigma = xi_total(rho.operator());
        let twice = xi_total(&sigma);
        let idem = sigma.max_abs_diff(&twice);
        let tr = (sigma.trace() - rho.operator().trace()).norm();
        ensure(idem <= TOL && tr <= TOL, || format!("N={n} p={p}: idempotence {idem:e}, trace {tr:e}"))?;
        worst = worst.max(idem).max(tr);
        for _ in 0..100 {
            let a = random_even_observable(shape, &mut r);
            let dev = (sigma.trace_product(&a) - rho.operator().trace_product(&a)).norm();
            worst = worst.max(dev);
            ensure(dev <= TOL, || format!("N={n} p={p}: expectation mismatch {dev:e}"))?;
        }
    }
    Ok(format!("3 shapes x 100 observables, max deviation {worst:.2e}"))
}

fn c5_swor() -> Verdict {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for n in 2..=7 {
        for _ in 0..20 {
            let mu = Pmf::random(n, &mut r);
            for k in 1..=5.min(n - 1) {
                let dev = swor_marginal_check(&mu, k).map_err(|e| e.to_string())?;
                worst = worst.max(dev);
                ensure(dev < 1e-12, || format!("n={n} k={k}: deviation {dev:e}"))?;
                cases += 1;
            }
        }
    }
    let mu = Pmf::new(vec![0.6, 0.3, 0.1]).map_err(|e| e.to_string())?;
    let wrong = product_renormalized_marginal_deviation(&mu, 1).map_err(|e| e.to_string())?;
    ensure(wrong > 1e-3, || format!("renormalised product deviation only {wrong:e}"))?;
    Ok(format!("{cases} cases, max deviation {worst:.2e}; renormalised product deviates by {wrong:.4}"))
}

fn c6_decoupling() -> Verdict {
    let mut r = rng(6);
    let mut worst_gap = f64::NEG_INFINITY;
    for trial in 0..500 {
        let n = r.random_range(2..=6);
        let k = r.random_range(1..=4.min(n - 1));
        let p = JointDistribution::random(n, 2, &mut r).map_err(|e| e.to_string())?;
        let pi = Pmf::random(n, &mut r);
        let mu = Pmf::random(n, &mut r);
        let res = decoupling_select(&p, &pi, &mu, k, Execution::default()).map_err(|e| e.to_string())?;
        let limit = 2f64.ln() / k as f64 + 1e-10;
        worst_gap = worst_gap.max(res.average - limit).max(res.achieved - limit);
        ensure(res.average <= limit && res.achieved <= limit, || {
            format!("trial {trial} n={n} k={k}: average {} achieved {} limit {limit}", res.average, res.achieved)
        })?;
    }
    Ok(format!("500 distributions, 0 failures, max value - limit {worst_gap:.3e}"))
}

fn is_state(m: &CMatrix, tol: f64) -> bool {
    (m.trace().re - 1.0).abs() <= tol
        && m.trace().im.abs() <= tol
        && fermibound::linalg::hermitian_deviation(m) <= tol
        && hermitian_eigenvalues(m).iter().all(|&x| x >= -tol)
}

fn c7_separable() -> Verdict {
    const TOL: f64 = 1e-9;
    let (n, d, k) = (4, 2, 2);
    let povm = build_ic_povm(d).map_err(|e| e.to_string())?;
    let weighting = Weighting::Star { center: 0 };
    let bound = star_product(d, n, STAR_CONSTANT).map_err(|e| e.to_string())?;
    let ceiling = bound.min(2.0);
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    let mut worst_product: f64 = 0.0;
    for trial in 0..70 {
        let product = trial >= 50;
        let rho = if product { QuditState::random_product(n, d, &mut r) } else { QuditState::random(n, d, &mut r) }
            .map_err(|e| e.to_string())?;
        let approx =
            build_separable_approx(&rho, &weighting, &povm, k, Execution::default()).map_err(|e| e.to_string())?;
        let total: f64 = approx.members.iter().map(|m| m.prob).sum();
        ensure((total - 1.0).abs() <= TOL, || format!("trial {trial}: weights sum to {total}"))?;
        let mut rebuilt = CMatrix::zeros(d.pow(n as u32), d.pow(n as u32));
        for m in &approx.members {
            ensure(m.prob >= 0.0 && m.sites.len() == n, || format!("trial {trial}: malformed member"))?;
            let mut prod = CMatrix::identity(1, 1);
            for s in &m.sites {
                ensure(is_state(s, TOL), || format!("trial {trial}: site factor is not a state"))?;
                prod = kron(&prod, s);
            }
            rebuilt += prod * ONE.scale(m.prob);
        }
        let gap = max_abs_diff(&rebuilt, &approx.to_matrix());
        ensure(gap <= TOL, || format!("trial {trial}: ensemble does not rebuild the output ({gap:e})"))?;
        ensure(approx.measured <= ceiling + TOL, || {
            format!("trial {trial}: measured {} above {ceiling}", approx.measured)
        })?;
        if product {
            worst_product = worst_product.max(approx.measured);
            ensure(approx.measured <= TOL, || format!("trial {trial}: product input at distance {}", approx.measured))?;
        } else {
            worst = worst.max(approx.measured);
        }
    }
    Ok(format!(
        "50 random (max {worst:.4} <= {ceiling:.4}), 20 product (max {worst_product:.2e})"
    ))
}

fn c8_certificates() -> Verdict {
    let opts = OptimizeOptions::default();
    let mut count = 0usize;
    let mut max_delta: f64 = 0.0;
    for l in [4, 6] {
        for t in [0.0, 0.5, 1.0] {
            for u in [0.0, 0.5, 1.0] {
                let h = build_hubbard_spinless(1, l, t, u, true).map_err(|e| e.to_string())?;
                let c = certificate(&h, None, &opts, Execution::default()).map_err(|e| e.to_string())?;
                ensure(c.pass && c.converged, || {
                    format!("L={l} t={t} U={u}: delta {} bound {} converged {}", c.delta, c.bound, c.converged)
                })?;
                max_delta = max_delta.max(c.delta);
                count += 1;
            }
        }
    }
    let h = build_hubbard_spinless(1, 2, 1.0, 1.0, false).map_err(|e| e.to_string())?;
    let c = certificate(&h, None, &opts, Execution::Sequential).map_err(|e| e.to_string())?;
    ensure((c.e_gs + 1.0).abs() <= 1e-12 && (c.delta - 1.0).abs() <= 1e-12 && c.pass, || {
        format!("two-site case: E_GS {} delta {}", c.e_gs, c.delta)
    })?;
    Ok(format!("{count} ring certificates pass (max delta {max_delta:.4}); two-site E_GS = -1, delta = 1"))
}

/// Values printed by `tests/oracle/bounds_oracle.py`.
const ORACLE: &[(&str, f64)] = &[
    ("site_p1_deg4", 2.0),
    ("site_p1_deg64", 0.5),
    ("site_p2_deg1", 64.0),
    ("edge_avg_star5", 3.0),
    ("cover_avg_star5", 2.0),
    ("family_regular4", 1.0),
    ("family_star17", 1.0),
    ("family_regular64", 0.25),
    ("bipartite_ext_1_1", 4.0),
    ("bipartite_ext_4_4", 1.0),
    ("bipartite_ext_1_16", 1.0),
    ("general_k4_d2", 61.54677076942754),
    ("product_d2_regular4", 10.619964534006213),
    ("product_d2_star5", 19.46993497901139),
    ("product_d2_star5_restated", 15.929946801009319),
    ("fermion_star5", 8.0),
    ("two_local_star5", 96.06651754222577),
    ("energy_regular16", 8.059526299369239),
    ("energy_hubbard_d2", 13.0),
    ("energy_star5", 20.0),
    ("ext_one_sided_k16", 1.5),
    ("ext_symmetric_k4", 3.0),
    ("ext_two_sided_4_4", 3.0),
];

fn implementation_value(name: &str) -> fermibound::Result<f64> {
    let star5 = InteractionGraph::star(5)?;
    Ok(match name {
        "site_p1_deg4" => monogamy_site(1, 4)?,
        "site_p1_deg64" => monogamy_site(1, 64)?,
        "site_p2_deg1" => monogamy_site(2, 1)?,
        "edge_avg_star5" => edge_average(1, &star5)?,
        "cover_avg_star5" => cover_average(1, &star5, &[0])?,
        "family_regular4" => regular_edge_average(1, 4)?,
        "family_star17" => star_edge_average(1, 17)?,
        "family_regular64" => regular_edge_average(1, 64)?,
        "bipartite_ext_1_1" => bipartite_extension(1, 1, 1)?,
        "bipartite_ext_4_4" => bipartite_extension(1, 4, 4)?,
        "bipartite_ext_1_16" => bipartite_extension(1, 1, 16)?,
        "general_k4_d2" => general_product(2, &WeightMatrix::uniform(&InteractionGraph::complete(4)?)?)?,
        "product_d2_regular4" => regular_product(2, 4)?,
        "product_d2_star5" => star_product(2, 5, STAR_CONSTANT)?,
        "product_d2_star5_restated" => star_product(2, 5, STAR_CONSTANT_RESTATED)?,
        "fermion_star5" => fermion_product(1, &star5, &[0], 0.0)?,
        "two_local_star5" => two_local(1, &star5, &[0])?,
        "energy_regular16" => energy_density_regular(1, 16)?,
        "energy_hubbard_d2" => energy_density_hubbard(1, 1.0, 1.0, 2)?,
        "energy_star5" => energy_density_star(1, 5, STAR_CONSTANT_RESTATED)?,
        "ext_one_sided_k16" => one_sided_extension(1, 16)?,
        "ext_symmetric_k4" => symmetric_extension(1, 4)?,
        "ext_two_sided_4_4" => two_sided_extension(1, 4, 4)?,
        other => panic!("no implementation mapping for {other}"),
    })
}

fn c9_oracle_values() -> Verdict {
    let mut worst: f64 = 0.0;
    for &(name, expected) in ORACLE {
        let got = implementation_value(name).map_err(|e| format!("{name}: {e}"))?;
        worst = worst.max((got - expected).abs());
        ensure((got - expected).abs() <= 1e-9, || format!("{name}: {got} vs oracle {expected}"))?;
    }
    Ok(format!("{} values, max deviation {worst:.2e}", ORACLE.len()))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fermibound"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited with {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn c10_determinism() -> Verdict {
    let commands: [&[&str]; 2] = [
        &["verify-monogamy", "--n", "6", "--graph", "ring", "--trials", "24", "--seed", "11"],
        &["definetti-approx", "--n", "4", "--k", "2", "--trials", "6", "--seed", "11"],
    ];
    for cmd in commands {
        let mut outputs = Vec::new();
        for threads in ["1", "4"] {
            for _ in 0..2 {
                let mut args = cmd.to_vec();
                args.extend(["--threads", threads]);
                outputs.push(run_cli(&args)?);
            }
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{} output differs across runs", cmd[0]))?;
    }
    Ok("verify-monogamy and definetti-approx identical over 2 runs x {1, 4} threads".into())
}

fn main() {
    let criteria: [Check; 10] = [
        ("odd Majorana sum norms", c1_odd_sum_norms),
        ("witness saturation", c2_witness_saturation),
        ("monogamy on random states", c3_monogamy_random),
        ("parity twirl channel", c4_channel),
        ("sampling without replacement", c5_swor),
        ("decoupling average", c6_decoupling),
        ("separable approximation", c7_separable),
        ("ground-state certificates", c8_certificates),
        ("bound values vs oracle", c9_oracle_values),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
