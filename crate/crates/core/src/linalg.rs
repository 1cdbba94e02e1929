//! Dense complex matrix helpers shared by the fermionic and qudit code paths.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `i^power` for `power` taken mod 4.
#[inline]
pub fn i_pow(power: u8) -> C64 {
    match power & 3 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Largest entrywise deviation `max |A - A†|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for c in 0..n {
        for r in 0..=c {
            dev = dev.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    dev
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `(A + A†)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let eig = hermitian_part(a).symmetric_eigenvalues();
    let mut v: Vec<f64> = eig.iter().copied().collect();
    v.sort_by(|x, y| x.total_cmp(y));
    v
}

/// Ascending eigenpairs of a Hermitian matrix. Equal eigenvalues keep the
/// solver's column order, so the choice of vector is deterministic.
pub fn hermitian_eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]).then(x.cmp(&y)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = a.nrows();
    let mut vecs = CMatrix::zeros(n, order.len());
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vecs)
}

/// Sum of singular values. Hermitian inputs use the eigenvalue route.
pub fn trace_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    if hermitian_deviation(a) <= 1e-13 {
        hermitian_eigenvalues(a).iter().map(|x| x.abs()).sum()
    } else {
        a.clone().singular_values().iter().sum()
    }
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    if hermitian_deviation(a) <= 1e-13 {
        hermitian_eigenvalues(a)
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    } else {
        a.clone().singular_values().iter().copied().fold(0.0, f64::max)
    }
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for r in 0..n {
        for k in 0..n {
            acc += a[(r, k)] * b[(k, r)];
        }
    }
    acc
}

/// Kronecker product with `a` as the slow (leftmost) factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `|v><v|` for a column vector.
pub fn projector(v: &nalgebra::DVector<C64>) -> CMatrix {
    v * v.adjoint()
}

/// Square matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Hilbert-Schmidt random density matrix `G G† / tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    hermitian_part(&m.unscale(tr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_norm_of_pauli_x_is_two() {
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        assert!((trace_norm(&x) - 2.0).abs() < 1e-14);
        assert!((operator_norm(&x) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_uses_singular_values() {
        let a = CMatrix::from_row_slice(2, 2, &[ZERO, ONE.scale(2.0), ZERO, ZERO]);
        assert!((trace_norm(&a) - 2.0).abs() < 1e-12);
        assert!((operator_norm(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_is_sorted() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            ONE.scale(3.0),
            -ONE,
            ONE,
        ]));
        let (vals, vecs) = hermitian_eigh(&a);
        assert_eq!(vals, vec![-1.0, 1.0, 3.0]);
        assert!((vecs[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }
}
