use super::{ground_state, optimize_product_state, OptimizeOptions, TwoLocalHamiltonian};
use crate::bounds::{two_local, two_local_epsilon, two_local_strict, BoundReport, PASS_TOLERANCE};
use crate::graph::{validate_cover, vertex_cover, CoverMode};
use crate::par::Execution;
use crate::{Error, Result};
use serde::Serialize;

/// Energies per edge, the product-state gap and the two-local bound it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub num_sites: usize,
    pub modes_per_site: usize,
    pub num_edges: usize,
    pub cover: Vec<usize>,
    pub scale: f64,
    pub e_gs: f64,
    pub e_gs_per_edge: f64,
    pub degeneracy: usize,
    pub product_energy: f64,
    pub product_per_edge: f64,
    pub converged: bool,
    pub restart: usize,
    /// `(tr(H sigma) - E_GS) / |E|`.
    pub delta: f64,
    pub epsilon: f64,
    /// `scale` times the two-local bound as printed.
    pub bound: f64,
    /// `scale` times the bound with the monogamy factor carried through.
    pub bound_strict: f64,
    pub pass: bool,
    pub pass_strict: bool,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn report(&self) -> BoundReport {
        let mut r = BoundReport::new(
            "cor12",
            serde_json::json!({
                "num_sites": self.num_sites,
                "p": self.modes_per_site,
                "num_edges": self.num_edges,
                "cover": self.cover,
                "scale": self.scale,
                "e_gs_per_edge": self.e_gs_per_edge,
                "product_per_edge": self.product_per_edge,
                "degeneracy": self.degeneracy,
                "converged": self.converged,
                "epsilon": self.epsilon,
            }),
        );
        r.check("variational", self.e_gs_per_edge, self.product_per_edge);
        r.check("delta", self.delta, self.bound);
        r.check("delta_strict", self.delta, self.bound_strict);
        for n in &self.notes {
            r.note(n.clone());
        }
        r
    }
}

/// One line of a parameter sweep table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub e_gs_per_edge: f64,
    pub product_per_edge: f64,
    pub delta: f64,
    pub bound: f64,
}

impl From<(f64, &Certificate)> for SweepRow {
    fn from((parameter, c): (f64, &Certificate)) -> Self {
        SweepRow {
            parameter,
            e_gs_per_edge: c.e_gs_per_edge,
            product_per_edge: c.product_per_edge,
            delta: c.delta,
            bound: c.bound,
        }
    }
}

/// Exact ground energy against the best mean-field product state, checked
/// against the two-local product bound scaled by the Hamiltonian's norm.
/// Without an explicit cover the minimum vertex cover is used.
pub fn certificate(
    h: &TwoLocalHamiltonian,
    cover: Option<&[usize]>,
    opts: &OptimizeOptions,
    exec: Execution,
) -> Result<Certificate> {
    let graph = h.graph();
    let m = graph.num_edges();
    if m == 0 {
        return Err(Error::InvalidGraph("certificate needs at least one edge".into()));
    }
    let cover = match cover {
        Some(c) => {
            validate_cover(graph, c)?;
            c.to_vec()
        }
        None => vertex_cover(graph, CoverMode::Auto).vertices,
    };
    let p = h.shape().modes_per_site();
    let gs = ground_state(h)?;
    let opt = optimize_product_state(h, opts, exec)?;
    let per = |x: f64| x / m as f64;
    let delta = per(opt.energy - gs.energy);
    let bound = h.scale() * two_local(p, graph, &cover)?;
    let bound_strict = h.scale() * two_local_strict(p, graph, &cover)?;
    let mut notes = h.notes().to_vec();
    if !opt.converged {
        notes.push(format!("mean field stopped after {} sweeps without converging", opts.max_iters));
    }
    if gs.degeneracy > 1 {
        notes.push(format!("ground space degeneracy {}", gs.degeneracy));
    }
    Ok(Certificate {
        num_sites: graph.n(),
        modes_per_site: p,
        num_edges: m,
        cover,
        scale: h.scale(),
        e_gs: gs.energy,
        e_gs_per_edge: per(gs.energy),
        degeneracy: gs.degeneracy,
        product_energy: opt.energy,
        product_per_edge: per(opt.energy),
        converged: opt.converged,
        restart: opt.restart,
        delta,
        epsilon: two_local_epsilon(p, graph)?,
        bound,
        bound_strict,
        pass: delta <= bound + PASS_TOLERANCE && opt.energy >= gs.energy - PASS_TOLERANCE,
        pass_strict: delta <= bound_strict + PASS_TOLERANCE,
        notes,
    })
}
