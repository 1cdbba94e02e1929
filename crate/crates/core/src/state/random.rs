use super::DensityState;
use crate::fock::{xi_total, FockOperator, SystemShape};
use crate::linalg::{ginibre, hermitian_part, kron, random_density_matrix, CMatrix};
use crate::Result;
use rand::Rng;

/// Hilbert-Schmidt random state `G G† / tr(G G†)` with Gaussian `G`.
pub fn random_state<R: Rng + ?Sized>(shape: SystemShape, rng: &mut R) -> DensityState {
    let m = random_density_matrix(shape.dim(), rng);
    DensityState::checked_without_spectrum(FockOperator::new(shape, m).expect("square matrix of shape dimension"))
        .expect("Gram matrices are states")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(shape: SystemShape, rng: &mut R) -> FockOperator {
    FockOperator::new(shape, hermitian_part(&ginibre(shape.dim(), rng))).expect("dimension matches")
}

/// Random totally even Hermitian observable, `Xi` applied to a random Hermitian.
pub fn random_even_observable<R: Rng + ?Sized>(shape: SystemShape, rng: &mut R) -> FockOperator {
    xi_total(&random_hermitian(shape, rng))
}

/// Product of random single-site states that each commute with the local
/// parity, so the Jordan-Wigner tensor product is the fermionic product.
pub fn random_even_product_state<R: Rng + ?Sized>(shape: SystemShape, rng: &mut R) -> Result<DensityState> {
    let local = shape.with_sites(1)?;
    let mut m = CMatrix::identity(1, 1);
    for _ in 0..shape.num_sites() {
        let rho = random_state(local, rng);
        let even = xi_total(rho.operator());
        // later sites occupy higher bits
        m = kron(even.matrix(), &m);
    }
    DensityState::new(FockOperator::new(shape, m)?)
}
