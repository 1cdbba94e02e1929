use super::{
    BoundsArgs, DefinettiArgs, GlobalOpts, GroundArgs, MonogamyArgs, Outcome, WitnessArgs, EXIT_NONCONVERGENCE,
    EXIT_PASS, EXIT_VIOLATION,
};
use crate::bounds::{evaluate, monogamy_site, BoundQuery, BoundReport, PASS_TOLERANCE};
use crate::definetti::{build_ic_povm, build_separable_approx, QuditState, Weighting};
use crate::fock::SystemShape;
use crate::graph::{load_graph, GraphSpec, InteractionGraph, WeightMatrix};
use crate::hamiltonian::{
    build_hubbard_spinful, build_hubbard_spinless, certificate, load_hamiltonian, Certificate, OptimizeOptions,
    SweepRow, TwoLocalHamiltonian,
};
use crate::par::{map_indexed, map_slice, Execution};
use crate::state::{build_witness, monogamy_check, pair_distance, random_state};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn tol(g: &GlobalOpts) -> f64 {
    g.tol.unwrap_or(PASS_TOLERANCE)
}

fn csv_table<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn report_csv(r: &BoundReport) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    r.write_csv(&mut buf)?;
    Ok(buf)
}

/// `star`, `ring`, `path`, `complete`, `kM` or `bipartite:A` on `n` vertices.
pub(crate) fn named_graph(name: &str, n: usize) -> Result<InteractionGraph> {
    let bad = || Error::InvalidArgument(format!("--graph: unknown graph '{name}'"));
    match name {
        "star" => InteractionGraph::star(n),
        "ring" => InteractionGraph::ring(n),
        "path" => InteractionGraph::path(n),
        "complete" => InteractionGraph::complete(n),
        _ => {
            if let Some(a) = name.strip_prefix("bipartite:") {
                let a: usize = a.parse().map_err(|_| bad())?;
                if a == 0 || a >= n {
                    return Err(Error::InvalidArgument(format!("--graph: part size {a} must lie in 1..{n}")));
                }
                InteractionGraph::complete_bipartite(a, n - a)
            } else if let Some(m) = name.strip_prefix('k') {
                let m: usize = m.parse().map_err(|_| bad())?;
                if m < 2 || m > n {
                    return Err(Error::InvalidArgument(format!("--graph: clique size {m} must lie in 2..={n}")));
                }
                let edges: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
                InteractionGraph::from_edge_list(n, &edges)
            } else {
                Err(bad())
            }
        }
    }
}

pub(super) fn bounds(g: &GlobalOpts, a: &BoundsArgs) -> Result<Outcome> {
    let path = g
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("bounds needs --input with a query file".into()))?;
    let text = std::fs::read_to_string(path)?;
    let mut q: BoundQuery = serde_json::from_str(&text)?;
    if !a.theorems.is_empty() {
        q.theorems = a.theorems.clone();
    }
    let rows = evaluate(&q, g.strict_proof)?;
    #[derive(Serialize)]
    struct Flat<'a> {
        theorem: &'a str,
        value: f64,
        strict_value: Option<f64>,
        params: String,
    }
    let flat: Vec<Flat> = rows
        .iter()
        .map(|r| Flat { theorem: &r.theorem, value: r.value, strict_value: r.strict_value, params: r.params.to_string() })
        .collect();
    Ok(Outcome {
        json: json!({ "command": "bounds", "strict_proof": g.strict_proof, "rows": rows }),
        csv: Some(csv_table(&flat)?),
        code: EXIT_PASS,
    })
}

#[derive(Debug, Serialize)]
struct TrialSummary {
    trial: usize,
    max_ratio: f64,
    violations: usize,
}

fn summarize(trial: usize, r: &BoundReport, slack: f64) -> TrialSummary {
    let max_ratio = r.entries.iter().map(|e| e.measured / e.bound).fold(0.0, f64::max);
    let violations = r.entries.iter().filter(|e| e.measured > e.bound + slack).count();
    TrialSummary { trial, max_ratio, violations }
}

fn monogamy_graph(g: &GlobalOpts, a: &MonogamyArgs) -> Result<InteractionGraph> {
    match &g.input {
        Some(path) => Ok(load_graph(path)?.0),
        None => named_graph(&a.graph, a.n),
    }
}

pub(super) fn verify_monogamy(g: &GlobalOpts, a: &MonogamyArgs) -> Result<Outcome> {
    let graph = monogamy_graph(g, a)?;
    let shape = SystemShape::new(graph.n(), a.p)?;
    let slack = tol(g);
    if a.witness {
        let v2: Vec<usize> = (0..graph.n()).filter(|i| !a.v1.contains(i)).collect();
        let rho = build_witness(shape, &a.v1, &v2)?;
        let report = monogamy_check(&rho, &graph, Execution::default())?;
        let s = summarize(0, &report, slack);
        let code = if s.violations == 0 { EXIT_PASS } else { EXIT_VIOLATION };
        return Ok(Outcome {
            json: json!({
                "command": "verify-monogamy",
                "theorem": "thm1",
                "n": graph.n(),
                "p": a.p,
                "graph": GraphSpec::from_graph(&graph),
                "witness": {"v1": a.v1, "v2": v2},
                "violations": s.violations,
                "max_ratio": s.max_ratio,
                "report": report,
            }),
            csv: Some(report_csv(&report)?),
            code,
        });
    }
    let trials = g.trials.unwrap_or(100);
    let results = map_indexed(trials, Execution::default(), |t| -> Result<TrialSummary> {
        let rho = random_state(shape, &mut trial_rng(g.seed, t));
        let report = monogamy_check(&rho, &graph, Execution::Sequential)?;
        Ok(summarize(t, &report, slack))
    });
    let summaries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let violations: usize = summaries.iter().map(|s| s.violations).sum();
    let worst = summaries.iter().max_by(|x, y| x.max_ratio.total_cmp(&y.max_ratio).then(y.trial.cmp(&x.trial)));
    let code = if violations == 0 { EXIT_PASS } else { EXIT_VIOLATION };
    Ok(Outcome {
        json: json!({
            "command": "verify-monogamy",
            "theorem": "thm1",
            "n": graph.n(),
            "p": a.p,
            "graph": GraphSpec::from_graph(&graph),
            "seed": g.seed,
            "trials": trials,
            "violations": violations,
            "max_ratio": worst.map_or(0.0, |w| w.max_ratio),
            "worst_trial": worst.map(|w| w.trial),
            "per_trial": summaries,
        }),
        csv: Some(csv_table(&summaries)?),
        code,
    })
}

fn lattice_hamiltonian(a: &GroundArgs, t: f64, u: f64) -> Result<TwoLocalHamiltonian> {
    match a.family.as_str() {
        "spinless" => build_hubbard_spinless(a.dim, a.length, t, u, !a.open),
        "spinful" => build_hubbard_spinful(a.dim, a.length, t, u, !a.open),
        other => Err(Error::InvalidArgument(format!("--family: expected spinless or spinful, got '{other}'"))),
    }
}

fn cert_code(certs: &[&Certificate], strict: bool) -> i32 {
    if certs.iter().any(|c| !c.pass || (strict && !c.pass_strict)) {
        EXIT_VIOLATION
    } else if certs.iter().any(|c| !c.converged) {
        EXIT_NONCONVERGENCE
    } else {
        EXIT_PASS
    }
}

pub(super) fn ground_cert(g: &GlobalOpts, a: &GroundArgs) -> Result<Outcome> {
    let opts = OptimizeOptions {
        restarts: a.restarts,
        tol: g.tol.unwrap_or(1e-10),
        max_iters: a.max_iters,
        seed: g.seed,
    };
    let exec = Execution::default();
    let sweep = match (&a.sweep_u, &a.sweep_t) {
        (Some(v), _) => Some(("u", v)),
        (None, Some(v)) => Some(("t", v)),
        _ => None,
    };
    if let Some((param, values)) = sweep {
        if g.input.is_some() {
            return Err(Error::InvalidArgument("sweeps apply to the lattice families, not to --input".into()));
        }
        let certs = values
            .iter()
            .map(|&x| {
                let (t, u) = if param == "u" { (a.t, x) } else { (x, a.u) };
                certificate(&lattice_hamiltonian(a, t, u)?, a.cover.as_deref(), &opts, exec)
            })
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<SweepRow> = values.iter().zip(&certs).map(|(&x, c)| SweepRow::from((x, c))).collect();
        let code = cert_code(&certs.iter().collect::<Vec<_>>(), g.strict_proof);
        return Ok(Outcome {
            json: json!({
                "command": "ground-cert",
                "theorem": "cor12",
                "family": a.family,
                "sweep": param,
                "rows": rows,
                "certificates": certs,
            }),
            csv: Some(csv_table(&rows)?),
            code,
        });
    }
    let h = match &g.input {
        Some(path) => load_hamiltonian(path)?,
        None => lattice_hamiltonian(a, a.t, a.u)?,
    };
    let cert = certificate(&h, a.cover.as_deref(), &opts, exec)?;
    let report = cert.report();
    Ok(Outcome {
        code: cert_code(&[&cert], g.strict_proof),
        csv: Some(report_csv(&report)?),
        json: json!({ "command": "ground-cert", "theorem": "cor12", "certificate": cert, "report": report }),
    })
}

#[derive(Debug, Serialize)]
struct DefinettiRun {
    trial: usize,
    measured: f64,
    k_prime: usize,
    #[serde(rename = "C")]
    conditioning: Vec<usize>,
    objective: f64,
    weighted_cmi: f64,
    members: usize,
    within_bound: bool,
}

pub(super) fn definetti(g: &GlobalOpts, a: &DefinettiArgs) -> Result<Outcome> {
    let (graph, weights) = match &g.input {
        Some(path) => load_graph(path)?,
        None => (named_graph(&a.graph, a.n)?, None),
    };
    let n = graph.n();
    let weighting = match (weights, g.input.is_some(), a.graph.as_str()) {
        (Some(w), _, _) => Weighting::General(w),
        (None, false, "star") => Weighting::Star { center: 0 },
        (None, false, name) if name.starts_with("bipartite:") => {
            let left = graph.neighbors(n - 1).len();
            Weighting::Bipartite { a: left, b: n - left }
        }
        _ => Weighting::General(WeightMatrix::uniform(&graph)?),
    };
    let povm = build_ic_povm(a.d)?;
    let trials = g.trials.unwrap_or(1);
    let slack = tol(g);
    let runs = map_indexed(trials, Execution::default(), |t| -> Result<(DefinettiRun, f64)> {
        let mut rng = trial_rng(g.seed, t);
        let rho = if a.product { QuditState::random_product(n, a.d, &mut rng)? } else { QuditState::random(n, a.d, &mut rng)? };
        let r = build_separable_approx(&rho, &weighting, &povm, a.k, Execution::Sequential)?;
        let run = DefinettiRun {
            trial: t,
            measured: r.measured,
            k_prime: r.k_prime(),
            conditioning: r.conditioning.clone(),
            objective: r.objective,
            weighted_cmi: r.weighted_cmi,
            members: r.members.len(),
            within_bound: r.measured <= r.bound + slack,
        };
        Ok((run, r.bound))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let bound = match runs.first() {
        Some((_, b)) => *b,
        None => weighting.bound(a.d, n)?,
    };
    let runs: Vec<DefinettiRun> = runs.into_iter().map(|(r, _)| r).collect();
    let worst = runs.iter().max_by(|x, y| x.measured.total_cmp(&y.measured).then(y.trial.cmp(&x.trial)));
    let code = if runs.iter().all(|r| r.within_bound) { EXIT_PASS } else { EXIT_VIOLATION };
    let weighting_name = match &weighting {
        Weighting::Star { .. } => "star",
        Weighting::Bipartite { .. } => "bipartite",
        Weighting::General(_) => "general",
    };
    Ok(Outcome {
        json: json!({
            "command": "definetti-approx",
            "theorem": if weighting_name == "general" { "thm8" } else { "thm10" },
            "n": n,
            "d": a.d,
            "k": a.k,
            "graph": GraphSpec::from_graph(&graph),
            "weighting": weighting_name,
            "seed": g.seed,
            "trials": trials,
            "product_inputs": a.product,
            "bound": bound,
            "measured": worst.map_or(0.0, |w| w.measured),
            "k_prime": worst.map(|w| w.k_prime),
            "C": worst.map(|w| w.conditioning.clone()),
            "kappa_measured": povm.kappa(),
            "kappa_printed": 18.0 * a.d as f64,
            "runs": runs,
        }),
        csv: Some(csv_table(
            &runs
                .iter()
                .map(|r| (r.trial, r.measured, r.k_prime, format!("{:?}", r.conditioning), r.within_bound))
                .collect::<Vec<_>>(),
        )?),
        code,
    })
}

pub(super) fn witness(g: &GlobalOpts, a: &WitnessArgs) -> Result<Outcome> {
    let shape = SystemShape::new(a.n, 1)?;
    let v2: Vec<usize> = (0..a.n).filter(|i| !a.v1.contains(i)).collect();
    let rho = build_witness(shape, &a.v1, &v2)?;
    let expected = 1.0 / ((a.v1.len() * v2.len()) as f64).sqrt();
    let pairs: Vec<(usize, usize)> = a.v1.iter().flat_map(|&x| v2.iter().map(move |&y| (x.min(y), x.max(y)))).collect();
    let distances = map_slice(&pairs, Execution::default(), |&(x, y)| pair_distance(&rho, x, y));
    let distances = distances.into_iter().collect::<Result<Vec<_>>>()?;
    let measured = distances.iter().sum::<f64>() / distances.len() as f64;
    let deviation = distances.iter().map(|d| (d - expected).abs()).fold(0.0, f64::max);
    let mut report = BoundReport::new("thm1", json!({"p": 1, "v1": a.v1, "v2": v2}));
    // per-site check of the first V1 site against its V2 neighbours
    let bound = monogamy_site(1, v2.len())?;
    let neighbor_average = distances[..v2.len()].iter().sum::<f64>() / v2.len() as f64;
    report.check(format!("{}", a.v1[0]), neighbor_average, bound);
    let pass = deviation <= tol(g);
    #[derive(Serialize)]
    struct Pair {
        i: usize,
        j: usize,
        distance: f64,
    }
    let rows: Vec<Pair> = pairs.iter().zip(&distances).map(|(&(i, j), &distance)| Pair { i, j, distance }).collect();
    Ok(Outcome {
        json: json!({
            "command": "witness",
            "n": a.n,
            "v1": a.v1,
            "v2": v2,
            "measured": measured,
            "expected": expected,
            "max_deviation": deviation,
            "neighbor_average": neighbor_average,
            "ratio_to_site_bound": neighbor_average / bound,
            "pairs": rows,
            "report": report,
        }),
        csv: Some(csv_table(&rows)?),
        code: if pass && report.passed { EXIT_PASS } else { EXIT_VIOLATION },
    })
}
