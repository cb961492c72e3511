//! Two-qubit entanglement diagnostics: PPT test, Bell-diagonal form and
//! numerical rank.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::numeric::{hermitian_eigenvalues, partial_transpose, validate_density, CMatrix};

/// `ρ^{T_B}` eigenvalues below this count as genuine negativity.
pub const ENTANGLEMENT_THRESHOLD: f64 = -1e-10;
pub const BELL_DIAGONAL_TOL: f64 = 1e-10;
pub const RANK_TOL: f64 = 1e-10;

/// Smallest eigenvalue of the partial transpose on Bob's qubit.
pub fn ppt_min_eigenvalue(rho: &CMatrix) -> Result<f64> {
    let rho = validate_density(rho, 4)?;
    let pt = partial_transpose(&rho, &[2, 2], 1)?;
    Ok(hermitian_eigenvalues(&pt)?.min())
}

/// PPT is necessary and sufficient for separability of two qubits.
pub fn is_entangled(rho: &CMatrix) -> Result<bool> {
    Ok(ppt_min_eigenvalue(rho)? < ENTANGLEMENT_THRESHOLD)
}

/// Rows are `Φ+, Φ-, Ψ+, Ψ-` in the computational basis.
pub fn bell_basis() -> CMatrix {
    let s = FRAC_1_SQRT_2;
    CMatrix::from_real(
        4,
        4,
        &[
            s, 0.0, 0.0, s, //
            s, 0.0, 0.0, -s, //
            0.0, s, s, 0.0, //
            0.0, s, -s, 0.0,
        ],
    )
    .expect("16 finite entries")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonal {
    pub is_diagonal: bool,
    /// Weights on `Φ+, Φ-, Ψ+, Ψ-`.
    pub weights: [f64; 4],
    pub max_off_diagonal: f64,
}

pub fn bell_diagonal_check(rho: &CMatrix) -> Result<BellDiagonal> {
    let rho = validate_density(rho, 4)?;
    let b = bell_basis();
    let m = b.matmul(&rho).matmul(&b.adjoint());
    let mut max_off = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                max_off = max_off.max(m[(i, j)].norm());
            }
        }
    }
    Ok(BellDiagonal {
        is_diagonal: max_off < BELL_DIAGONAL_TOL,
        weights: [0, 1, 2, 3].map(|i| m[(i, i)].re),
        max_off_diagonal: max_off,
    })
}

/// Number of eigenvalues above `tol`.
pub fn numerical_rank(rho: &CMatrix, tol: f64) -> Result<usize> {
    Ok(hermitian_eigenvalues(rho)?
        .eigenvalues()
        .iter()
        .filter(|&&l| l > tol)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{C64, ONE, ZERO};

    fn phi_plus() -> CMatrix {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        CMatrix::outer(&[s, ZERO, ZERO, s])
    }

    #[test]
    fn ppt_reference_states() {
        assert!((ppt_min_eigenvalue(&phi_plus()).unwrap() + 0.5).abs() < 1e-14);
        let mixed = CMatrix::identity(4).scale(C64::new(0.25, 0.0));
        assert!((ppt_min_eigenvalue(&mixed).unwrap() - 0.25).abs() < 1e-15);
        assert!(is_entangled(&phi_plus()).unwrap());
        assert!(!is_entangled(&mixed).unwrap());
        assert!(ppt_min_eigenvalue(&CMatrix::identity(4)).is_err());
    }

    #[test]
    fn bell_diagonal_reference_states() {
        let r = bell_diagonal_check(&phi_plus()).unwrap();
        assert!(r.is_diagonal);
        for (w, e) in r.weights.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((w - e).abs() < 1e-15);
        }
        let zero_zero = CMatrix::outer(&[ONE, ZERO, ZERO, ZERO]);
        assert!(!bell_diagonal_check(&zero_zero).unwrap().is_diagonal);
    }

    #[test]
    fn rank_of_pure_projector() {
        assert_eq!(numerical_rank(&phi_plus(), RANK_TOL).unwrap(), 1);
        assert_eq!(numerical_rank(&CMatrix::identity(4), RANK_TOL).unwrap(), 4);
    }
}
