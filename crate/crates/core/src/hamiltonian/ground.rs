use super::TwoLocalHamiltonian;
use crate::linalg::hermitian_eigh;
use crate::state::DensityState;
use crate::{Error, Result};

/// Eigenvalues within this distance of the minimum count towards the degeneracy.
pub const DEGENERACY_TOL: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// First eigenvector of the ground space, as a pure state.
    pub state: DensityState,
    pub degeneracy: usize,
}

/// Dense diagonalisation of the assembled Hamiltonian.
pub fn ground_state(h: &TwoLocalHamiltonian) -> Result<GroundState> {
    let op = h.assemble()?;
    let dev = op.hermitian_deviation();
    if dev > HERMITIAN_TOL * h.scale().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let (values, vectors) = hermitian_eigh(op.matrix());
    let energy = values[0];
    let degeneracy = values.iter().take_while(|&&e| e - energy <= DEGENERACY_TOL).count();
    let psi: Vec<_> = vectors.column(0).iter().copied().collect();
    Ok(GroundState {
        energy,
        state: DensityState::pure(h.shape(), &psi)?,
        degeneracy,
    })
}
