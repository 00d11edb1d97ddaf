//! Explicit dilations and functional models of Γ-contractions.

mod factor;
mod model;
mod schaffer;

pub use factor::{factorization_check, nf_dilation, Factorization};
pub use model::{compressed_scalar, nf_ay_build, nf_ay_build_rotated, scalar_part_from_pair, CompressedScalar, NfAyModel};
pub use schaffer::{schaffer_build, SchafferPair};

use crate::classify::OperatorPair;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, ComplexMatrix, Tolerance};

/// `(U₁ + U₂, U₁U₂)` for commuting unitaries.
pub fn gamma_unitary_synth(u1: &ComplexMatrix, u2: &ComplexMatrix, tol: &Tolerance) -> Result<OperatorPair> {
    let n = u1.nrows();
    if u1.shape() != (n, n) || u2.shape() != (n, n) {
        return Err(Error::dims("unitaries must be square of equal size"));
    }
    let id = ComplexMatrix::identity(n, n);
    for u in [u1, u2] {
        let defect = op_norm(&(u.adjoint() * u - &id)).max(op_norm(&(u * u.adjoint() - &id)));
        if defect > tol.residual_tol {
            return Err(Error::NotUnitary { defect });
        }
    }
    let commutator_norm = op_norm(&(u1 * u2 - u2 * u1));
    if commutator_norm > tol.residual_tol {
        return Err(Error::NotCommuting { commutator_norm });
    }
    OperatorPair::new(u1 + u2, u1 * u2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_gamma_unitary;
    use crate::gamma_point::{in_gamma, GammaPoint};
    use crate::linalg::{c64, diag, eigenvalues, from_real};

    #[test]
    fn scalar_and_diagonal_cases() {
        let one = from_real(1, 1, &[1.0]);
        let pair = gamma_unitary_synth(&one, &one, &Tolerance::default()).unwrap();
        assert_eq!(pair.s()[(0, 0)], c64(2.0, 0.0));
        assert_eq!(pair.p()[(0, 0)], c64(1.0, 0.0));

        let u1 = diag(&[c64(1.0, 0.0), c64(0.0, 1.0)]);
        let u2 = diag(&[c64(-1.0, 0.0), c64(1.0, 0.0)]);
        let pair = gamma_unitary_synth(&u1, &u2, &Tolerance::default()).unwrap();
        assert_eq!(*pair.s(), diag(&[c64(0.0, 0.0), c64(1.0, 1.0)]));
        assert_eq!(*pair.p(), diag(&[c64(-1.0, 0.0), c64(0.0, 1.0)]));
        assert!(is_gamma_unitary(&pair, &Tolerance::default()).holds);
        // joint eigenvalues on the distinguished boundary
        let (s_eig, p_eig) = (eigenvalues(pair.s()).unwrap(), eigenvalues(pair.p()).unwrap());
        for p in &p_eig {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
        for (s, p) in [(pair.s()[(0, 0)], pair.p()[(0, 0)]), (pair.s()[(1, 1)], pair.p()[(1, 1)])] {
            assert!(in_gamma(GammaPoint::new(s, p), 1e-9));
        }
        assert_eq!(s_eig.len(), 2);
    }

    #[test]
    fn input_errors() {
        let u = diag(&[c64(1.0, 0.0), c64(0.0, 1.0)]);
        let not_unitary = from_real(2, 2, &[1.0, 0.0, 0.0, 0.5]);
        assert!(matches!(gamma_unitary_synth(&u, &not_unitary, &Tolerance::default()), Err(Error::NotUnitary { .. })));
        let swap = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(gamma_unitary_synth(&u, &swap, &Tolerance::default()), Err(Error::NotCommuting { .. })));
    }
}
