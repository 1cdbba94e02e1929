use crate::linalg::{hermitian_eigh, projector, trace_norm, CMatrix, C64, I, ONE, ZERO};
use crate::{Error, Result};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const RANDOM_PROBES: usize = 2000;

/// Informationally complete POVM on `C^d`, built from `d + 1` mutually
/// unbiased bases with every rank-one effect weighted `1/(d+1)`.
#[derive(Debug, Clone)]
pub struct IcPovm {
    d: usize,
    effects: Vec<CMatrix>,
    kappa: f64,
}

impl IcPovm {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }

    /// Measured `max |xi|_1 / |Lambda(xi)|_1` over the probe set.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Outcome vector `tr(E_m xi)`.
    pub fn apply(&self, xi: &CMatrix) -> Vec<C64> {
        self.effects
            .iter()
            .map(|e| (e.transpose().component_mul(xi)).sum())
            .collect()
    }

    pub fn output_norm(&self, xi: &CMatrix) -> f64 {
        self.apply(xi).iter().map(|z| z.norm()).sum()
    }

    /// `|xi|_1 / |Lambda(xi)|_1`.
    pub fn distortion(&self, xi: &CMatrix) -> f64 {
        trace_norm(xi) / self.output_norm(xi)
    }
}

fn basis_vectors(d: usize) -> Result<Vec<Vec<DVector<C64>>>> {
    let e = |i: usize| {
        let mut v = DVector::from_element(d, ZERO);
        v[i] = ONE;
        v
    };
    let computational: Vec<_> = (0..d).map(e).collect();
    let mut bases = vec![computational];
    match d {
        2 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let x = vec![
                DVector::from_vec(vec![ONE * s, ONE * s]),
                DVector::from_vec(vec![ONE * s, -ONE * s]),
            ];
            let y = vec![
                DVector::from_vec(vec![ONE * s, I * s]),
                DVector::from_vec(vec![ONE * s, -I * s]),
            ];
            bases.push(x);
            bases.push(y);
        }
        3 => {
            // prime dimension: phases omega^{b j^2 + m j}
            let omega = |k: usize| C64::from_polar(1.0, 2.0 * PI * (k % 3) as f64 / 3.0);
            for b in 0..3 {
                let basis = (0..3)
                    .map(|m| DVector::from_fn(3, |j, _| omega(b * j * j + m * j) / 3f64.sqrt()))
                    .collect();
                bases.push(basis);
            }
        }
        4 => {
            // joint eigenbases of the four remaining classes of commuting two-qubit Paulis
            let classes = [("XI", "IX"), ("YI", "IY"), ("XZ", "ZY"), ("YZ", "ZX")];
            for (p1, p2) in classes {
                let h = pauli_string(p1) + pauli_string(p2).scale(2f64.sqrt());
                let (_, vecs) = hermitian_eigh(&h);
                bases.push((0..4).map(|c| vecs.column(c).into_owned()).collect());
            }
        }
        _ => return Err(Error::InvalidArgument(format!("IC-POVM available for d in 2..=4, got {d}"))),
    }
    Ok(bases)
}

fn pauli(c: char) -> CMatrix {
    match c {
        'X' => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        'Y' => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        'Z' => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => CMatrix::identity(2, 2),
    }
}

fn pauli_string(s: &str) -> CMatrix {
    s.chars().map(pauli).reduce(|a, b| a.kronecker(&b)).expect("nonempty")
}

/// Hermitian probe operators: the generalized Gell-Mann basis, each scaled to unit trace norm.
fn probe_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let mut s = CMatrix::zeros(d, d);
            s[(a, b)] = ONE;
            s[(b, a)] = ONE;
            let mut t = CMatrix::zeros(d, d);
            t[(a, b)] = -I;
            t[(b, a)] = I;
            out.push(s);
            out.push(t);
        }
    }
    for l in 1..d {
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = ONE;
        }
        m[(l, l)] = -ONE * l as f64;
        out.push(m);
    }
    out.push(CMatrix::identity(d, d));
    out.into_iter()
        .map(|m| {
            let n = trace_norm(&m);
            m.unscale(n)
        })
        .collect()
}

pub fn build_ic_povm(d: usize) -> Result<IcPovm> {
    let bases = basis_vectors(d)?;
    let w = 1.0 / (d + 1) as f64;
    let effects: Vec<CMatrix> = bases.iter().flatten().map(|v| projector(v).scale(w)).collect();
    let mut povm = IcPovm { d, effects, kappa: 0.0 };

    let mut kappa: f64 = 0.0;
    for xi in probe_basis(d) {
        kappa = kappa.max(povm.distortion(&xi));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c_b0);
    for _ in 0..RANDOM_PROBES {
        let g = crate::linalg::ginibre(d, &mut rng);
        let mut h = crate::linalg::hermitian_part(&g);
        // traceless half the time
        if rng.random::<bool>() {
            let shift = h.trace() / d as f64;
            for i in 0..d {
                h[(i, i)] -= shift;
            }
        }
        kappa = kappa.max(povm.distortion(&h));
    }
    povm.kappa = kappa;
    Ok(povm)
}
