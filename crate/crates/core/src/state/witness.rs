use super::{pair_distance, DensityState};
use crate::bounds::{bipartite_extension, BoundReport};
use crate::fock::{bipartite_sum, FockOperator, MajoranaSum, SystemShape};
use crate::linalg::ONE;
use crate::par::{map_slice, Execution};
use crate::{Error, Result};
use serde_json::json;

const CERTIFICATE_TOL: f64 = 1e-9;

/// Agreement required between measured witness distances and `1/sqrt(|V1||V2|)`.
pub const SATURATION_TOL: f64 = 1e-9;

fn check_partition(shape: SystemShape, v1: &[usize], v2: &[usize]) -> Result<()> {
    if shape.modes_per_site() != 1 {
        return Err(Error::InvalidArgument(format!(
            "witness needs one mode per site, got {}",
            shape.modes_per_site()
        )));
    }
    if v1.is_empty() || v2.is_empty() {
        return Err(Error::InvalidArgument("both parts of the witness partition must be nonempty".into()));
    }
    let n = shape.num_sites();
    let mut seen = vec![0u8; n];
    for &v in v1.iter().chain(v2) {
        shape.check_site(v)?;
        seen[v] += 1;
    }
    if let Some(v) = seen.iter().position(|&c| c != 1) {
        return Err(Error::InvalidArgument(format!(
            "sites must be split into two disjoint parts covering 0..{n}; site {v} appears {} times",
            seen[v]
        )));
    }
    Ok(())
}

/// `O = (1/sqrt(|V1||V2|)) sum_{j in V1, k in V2} i m_j^0 m_k^1`, matrix-free.
pub fn witness_operator(shape: SystemShape, v1: &[usize], v2: &[usize]) -> Result<MajoranaSum> {
    check_partition(shape, v1, v2)?;
    let raw = bipartite_sum(shape, v1, v2, &[0], &[1])?;
    let scale = 1.0 / ((v1.len() * v2.len()) as f64).sqrt();
    let mut o = MajoranaSum::new(shape);
    for (c, s) in raw.terms() {
        o.push(c.scale(scale), s.clone());
    }
    Ok(o)
}

/// `rho = (1 + O) / 2^N`. Positivity is certified by `O = O†` and `O^2 = 1`,
/// which pins the spectrum of `rho` to `{0, 2^{1-N}}`.
pub fn build_witness(shape: SystemShape, v1: &[usize], v2: &[usize]) -> Result<DensityState> {
    let o = witness_operator(shape, v1, v2)?;
    let herm = o.hermitian_deviation();
    let square = o.square_deviation_from(ONE);
    if herm > CERTIFICATE_TOL || square > CERTIFICATE_TOL {
        return Err(Error::Numerical(format!(
            "witness certificate failed: hermitian deviation {herm:e}, square deviation {square:e}"
        )));
    }
    let dense = o.to_operator();
    let id = FockOperator::identity(shape);
    let rho = (&id + &dense).scale((1.0 / shape.dim() as f64).into());
    DensityState::checked_without_spectrum(rho)
}

/// Witness on the complete bipartite layout `|V1| = n`, `|V2| = k`, compared
/// against the extendible-state bound.
pub fn extendibility_witness_check(n: usize, k: usize, exec: Execution) -> Result<BoundReport> {
    let shape = SystemShape::new(n + k, 1)?;
    let v1: Vec<usize> = (0..n).collect();
    let v2: Vec<usize> = (n..n + k).collect();
    let rho = build_witness(shape, &v1, &v2)?;
    let bound = bipartite_extension(1, n, k)?;
    let expected = 1.0 / ((n * k) as f64).sqrt();
    let pairs: Vec<(usize, usize)> = v1.iter().flat_map(|&a| v2.iter().map(move |&b| (a, b))).collect();
    let measured = map_slice(&pairs, exec, |&(a, b)| pair_distance(&rho, a, b));
    let mut report = BoundReport::new("thm6", json!({"p": 1, "n": n, "k": k, "expected": expected}));
    for (&(a, b), m) in pairs.iter().zip(measured) {
        let m = m?;
        let pass = (m - expected).abs() <= SATURATION_TOL && m <= bound + crate::bounds::PASS_TOLERANCE;
        report.record(format!("({a},{b})"), m, bound, pass);
    }
    report.note(format!("witness distance expected 1/sqrt(nk) = {expected}"));
    Ok(report)
}
