use super::formulas::*;
use crate::graph::{vertex_cover, CoverMode, GraphSpec, InteractionGraph, WeightMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

/// Graph families with closed-form special-case bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    CRegular { c: usize },
    Star { n: usize },
    /// Parts of sizes `a` and `b`; the conditioning part is `b`.
    CompleteBipartite { a: usize, b: usize },
}

/// Input of the `bounds` command. Every field is optional; each theorem uses
/// the ones it needs.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundQuery {
    pub p: Option<usize>,
    pub d: Option<usize>,
    pub graph: Option<GraphSpec>,
    pub family: Option<Family>,
    pub cover: Option<Vec<usize>>,
    #[serde(default)]
    pub theorems: Vec<String>,
    pub epsilon: Option<f64>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub t: Option<f64>,
    pub u: Option<f64>,
    pub dim: Option<usize>,
    pub site: Option<usize>,
    pub degree: Option<usize>,
}

/// One evaluated bound: `{theorem, params, value, strict_value?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub theorem: String,
    pub params: serde_json::Value,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_value: Option<f64>,
}

pub const THEOREM_TAGS: &[&str] = &[
    "thm1",
    "cor3",
    "cor4",
    "cor5",
    "thm6",
    "thm8",
    "thm8_graph",
    "thm10",
    "thm11",
    "cor12",
    "cor13",
    "sym_one_sided",
    "sym_two_sided",
    "sym_symmetric",
];

struct Ctx<'a> {
    q: &'a BoundQuery,
    strict: bool,
    graph: Option<(InteractionGraph, Option<WeightMatrix>)>,
}

impl Ctx<'_> {
    fn graph(&self) -> Option<&InteractionGraph> {
        self.graph.as_ref().map(|g| &g.0)
    }

    fn cover(&self, graph: &InteractionGraph) -> (Vec<usize>, &'static str) {
        match &self.q.cover {
            Some(c) => (c.clone(), "given"),
            None => {
                let c = vertex_cover(graph, CoverMode::Auto);
                let how = if c.method == CoverMode::Exact { "exact" } else { "greedy" };
                (c.vertices, how)
            }
        }
    }

    fn d(&self) -> Option<usize> {
        self.q.d.or(self.q.p.map(|p| 1usize << p))
    }

    fn row(&self, theorem: &str, params: serde_json::Value, value: f64, strict: Option<f64>) -> BoundRow {
        BoundRow {
            theorem: theorem.to_string(),
            params,
            value,
            strict_value: if self.strict { strict } else { None },
        }
    }
}

fn family_graph(f: Family) -> Result<Option<InteractionGraph>> {
    Ok(match f {
        Family::Star { n } => Some(InteractionGraph::star(n)?),
        Family::CompleteBipartite { a, b } => Some(InteractionGraph::complete_bipartite(a, b)?),
        Family::CRegular { .. } => None,
    })
}

/// Evaluates the requested theorems, or every theorem whose inputs are
/// present when the list is empty.
pub fn evaluate(q: &BoundQuery, strict: bool) -> Result<Vec<BoundRow>> {
    let graph = match (&q.graph, q.family) {
        (Some(spec), _) => Some(spec.build()?),
        (None, Some(f)) => family_graph(f)?.map(|g| (g, None)),
        (None, None) => None,
    };
    let ctx = Ctx { q, strict, graph };
    let explicit = !q.theorems.is_empty();
    let tags: Vec<&str> = if explicit {
        q.theorems.iter().map(String::as_str).collect()
    } else {
        THEOREM_TAGS.to_vec()
    };
    let mut rows = Vec::new();
    for tag in tags {
        match evaluate_one(&ctx, tag)? {
            Some(mut r) => rows.append(&mut r),
            None if explicit => {
                return Err(Error::InvalidArgument(format!(
                    "theorem '{tag}' is missing required inputs"
                )))
            }
            None => {}
        }
    }
    Ok(rows)
}

fn evaluate_one(ctx: &Ctx, tag: &str) -> Result<Option<Vec<BoundRow>>> {
    let q = ctx.q;
    let rows = match tag {
        "thm1" => {
            let Some(p) = q.p else { return Ok(None) };
            let degree = match (q.degree, ctx.graph(), q.family) {
                (Some(c), _, _) => c,
                (None, Some(g), _) if q.site.is_some() => {
                    let s = q.site.unwrap_or_default();
                    if s >= g.n() {
                        return Err(Error::IndexOutOfRange {
                            what: "site",
                            index: s,
                            limit: g.n(),
                        });
                    }
                    g.degree(s)
                }
                (None, _, Some(Family::CRegular { c })) => c,
                (None, _, Some(Family::Star { n })) => n.saturating_sub(1),
                _ => return Ok(None),
            };
            vec![ctx.row("thm1", json!({"p": p, "degree": degree}), monogamy_site(p, degree)?, None)]
        }
        "cor3" => {
            let (Some(p), Some(g)) = (q.p, ctx.graph()) else { return Ok(None) };
            vec![ctx.row("cor3", json!({"p": p, "degrees": g.degrees()}), edge_average(p, g)?, None)]
        }
        "cor4" => {
            let (Some(p), Some(g)) = (q.p, ctx.graph()) else { return Ok(None) };
            let (cover, how) = ctx.cover(g);
            let v = cover_average(p, g, &cover)?;
            vec![ctx.row("cor4", json!({"p": p, "cover": cover, "cover_method": how}), v, None)]
        }
        "cor5" => {
            let Some(p) = q.p else { return Ok(None) };
            match q.family {
                Some(Family::CRegular { c }) => vec![ctx.row(
                    "cor5",
                    json!({"p": p, "family": "c_regular", "c": c}),
                    regular_edge_average(p, c)?,
                    Some(regular_edge_average_strict(p, c)?),
                )],
                Some(Family::Star { n }) => vec![ctx.row(
                    "cor5",
                    json!({"p": p, "family": "star", "n": n}),
                    star_edge_average(p, n)?,
                    None,
                )],
                _ => return Ok(None),
            }
        }
        "thm6" => {
            let (Some(p), Some(n), Some(k)) = (q.p, q.n, q.k) else { return Ok(None) };
            vec![ctx.row("thm6", json!({"p": p, "n": n, "k": k}), bipartite_extension(p, n, k)?, None)]
        }
        "thm8" => {
            let (Some(d), Some((g, w))) = (ctx.d(), ctx.graph.as_ref()) else { return Ok(None) };
            let (w, source) = match w {
                Some(w) => (w.clone(), "given"),
                None => (WeightMatrix::uniform(g)?, "uniform"),
            };
            let params = json!({
                "d": d,
                "weights": source,
                "tr_a2": w.tr_a_squared(),
                "pi_norm2": w.pi_norm_squared(),
            });
            vec![ctx.row("thm8", params, general_product(d, &w)?, None)]
        }
        "thm8_graph" => {
            let (Some(d), Some(g)) = (ctx.d(), ctx.graph()) else { return Ok(None) };
            let exact = general_product(d, &WeightMatrix::uniform(g)?)?;
            vec![ctx.row("thm8_graph", json!({"d": d, "degrees": g.degrees()}), graph_product(d, g)?, Some(exact))]
        }
        "thm10" => {
            let (Some(d), Some(f)) = (ctx.d(), q.family) else { return Ok(None) };
            match f {
                Family::CRegular { c } => vec![ctx.row(
                    "thm10",
                    json!({"d": d, "family": "c_regular", "c": c}),
                    regular_product(d, c)?,
                    None,
                )],
                Family::Star { n } => {
                    let main = star_product(d, n, STAR_CONSTANT)?;
                    let mut rows = vec![ctx.row(
                        "thm10",
                        json!({"d": d, "family": "star", "n": n, "constant": STAR_CONSTANT}),
                        main,
                        None,
                    )];
                    if ctx.strict {
                        rows.push(ctx.row(
                            "thm10_restated",
                            json!({"d": d, "family": "star", "n": n, "constant": STAR_CONSTANT_RESTATED}),
                            star_product(d, n, STAR_CONSTANT_RESTATED)?,
                            Some(main),
                        ));
                    }
                    rows
                }
                Family::CompleteBipartite { a, b } => vec![ctx.row(
                    "thm10",
                    json!({"d": d, "family": "complete_bipartite", "a": a, "b": b}),
                    bipartite_product(d, a + b)?,
                    Some(bipartite_product(d, b)?),
                )],
            }
        }
        "thm11" => {
            let (Some(p), Some(g)) = (q.p, ctx.graph()) else { return Ok(None) };
            let eps = q.epsilon.unwrap_or(0.0);
            let (cover, how) = ctx.cover(g);
            let params = json!({
                "p": p,
                "epsilon": eps,
                "cover": cover,
                "cover_method": how,
                "note": "cover term is 4x the cover-average monogamy bound",
            });
            vec![ctx.row(
                "thm11",
                params,
                fermion_product(p, g, &cover, eps)?,
                Some(fermion_product_strict(p, g, &cover, eps)?),
            )]
        }
        "cor12" => {
            let (Some(p), Some(g)) = (q.p, ctx.graph()) else { return Ok(None) };
            let (cover, how) = ctx.cover(g);
            vec![ctx.row(
                "cor12",
                json!({"p": p, "cover": cover, "cover_method": how}),
                two_local(p, g, &cover)?,
                Some(two_local_strict(p, g, &cover)?),
            )]
        }
        "cor13" => {
            let Some(p) = q.p else { return Ok(None) };
            let mut rows = Vec::new();
            if let (Some(t), Some(u), Some(dim)) = (q.t, q.u, q.dim) {
                rows.push(ctx.row(
                    "cor13",
                    json!({"p": p, "model": "spinless_hubbard", "t": t, "u": u, "dim": dim}),
                    energy_density_hubbard(p, t, u, dim)?,
                    Some(energy_density_hubbard_strict(p, t, u, dim)?),
                ));
            }
            match q.family {
                Some(Family::CRegular { c }) => rows.push(ctx.row(
                    "cor13",
                    json!({"p": p, "family": "c_regular", "c": c}),
                    energy_density_regular(p, c)?,
                    Some(energy_density_regular_strict(p, c)?),
                )),
                Some(Family::Star { n }) => rows.push(ctx.row(
                    "cor13",
                    json!({"p": p, "family": "star", "n": n}),
                    energy_density_star(p, n, STAR_CONSTANT_RESTATED)?,
                    Some(energy_density_star(p, n, STAR_CONSTANT)?),
                )),
                _ => {}
            }
            if rows.is_empty() {
                return Ok(None);
            }
            rows
        }
        "sym_one_sided" => {
            let (Some(p), Some(k)) = (q.p, q.k) else { return Ok(None) };
            vec![ctx.row("sym_one_sided", json!({"p": p, "k": k}), one_sided_extension(p, k)?, None)]
        }
        "sym_two_sided" => {
            let (Some(p), Some(n), Some(k)) = (q.p, q.n, q.k) else { return Ok(None) };
            vec![ctx.row("sym_two_sided", json!({"p": p, "n": n, "k": k}), two_sided_extension(p, n, k)?, None)]
        }
        "sym_symmetric" => {
            let (Some(p), Some(k)) = (q.p, q.k) else { return Ok(None) };
            vec![ctx.row("sym_symmetric", json!({"p": p, "k": k}), symmetric_extension(p, k)?, None)]
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown theorem '{other}', expected one of {}",
                THEOREM_TAGS.join(", ")
            )))
        }
    };
    Ok(Some(rows))
}
