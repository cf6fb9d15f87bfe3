//! Dense-matrix oracle, assembled by explicit Kronecker products so it shares
//! no code with the bit-mask expectation path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::simulator::PauliSum;
use crate::{Error, Result};

/// Largest register [`exact_diag`] will assemble (a 4096 × 4096 matrix).
pub const MAX_EXACT_QUBITS: usize = 12;

fn pauli_matrix(letter: char) -> DMatrix<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let entries = match letter {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => unreachable!("PauliString only holds IXYZ"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// `Σ_t c_t · P_t^(0) ⊗ P_t^(1) ⊗ …` with qubit 0 as the leftmost factor.
pub fn dense_matrix(obs: &PauliSum) -> Result<DMatrix<Complex64>> {
    let n = obs.n_qubits();
    if n > MAX_EXACT_QUBITS {
        return Err(Error::Capability(format!(
            "dense assembly is limited to {MAX_EXACT_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut total = DMatrix::<Complex64>::zeros(dim, dim);
    for (coeff, pauli) in obs.terms() {
        let mut m = DMatrix::<Complex64>::identity(1, 1);
        for q in 0..n {
            m = m.kronecker(&pauli_matrix(pauli.letter(q)));
        }
        total += m * Complex64::new(*coeff, 0.0);
    }
    Ok(total)
}

/// Ground-state energy: the smallest eigenvalue of the assembled Hermitian
/// matrix.
pub fn exact_diag(hamiltonian: &PauliSum) -> Result<f64> {
    let m = dense_matrix(hamiltonian)?;
    Ok(m.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn single_z_has_ground_minus_one() {
        let h = PauliSum::single("Z").unwrap();
        assert_abs_diff_eq!(exact_diag(&h).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn zz_plus_xx() {
        // ZZ and XX commute; joint eigenvalues (±1, ±1) give 0.5·(a + b) ∈ {−1, 0, 1}.
        let h = PauliSum::from_labels(&[(0.5, "ZZ"), (0.5, "XX")]).unwrap();
        assert_abs_diff_eq!(exact_diag(&h).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_only_is_constant() {
        let h = PauliSum::from_labels(&[(-0.37, "III")]).unwrap();
        assert_abs_diff_eq!(exact_diag(&h).unwrap(), -0.37, epsilon = 1e-12);
    }

    #[test]
    fn y_term_is_hermitian() {
        let h = PauliSum::from_labels(&[(0.8, "XY"), (0.3, "YI")]).unwrap();
        let m = dense_matrix(&h).unwrap();
        assert!((m.adjoint() - &m).norm() < 1e-14);
    }

    #[test]
    fn large_registers_are_refused() {
        let label = "Z".repeat(MAX_EXACT_QUBITS + 1);
        let h = PauliSum::single(&label).unwrap();
        assert!(matches!(exact_diag(&h), Err(Error::Capability(_))));
    }
}
