use crate::classify::{fundamental_op, is_gamma_contraction, Kind, OperatorPair};
use crate::error::{Error, Result};
use crate::hardy::{build_mult_op, shift_op, SymbolPoly, TruncatedOp};
use crate::linalg::{op_norm, ComplexMatrix, Tolerance};

/// The Schäffer isometric dilation `V_P = [[P, 0], [𝐃_P, M_z]]` together
/// with `W_A = [[S, 0], [𝐀*D_P, A + A*M_z]]` on `ℋ ⊕ H²_{𝒟_P}` (degrees `0..=N`).
#[derive(Debug, Clone, PartialEq)]
pub struct SchafferPair {
    pub v: TruncatedOp,
    pub w: TruncatedOp,
    /// `Π_Sc: h ↦ h ⊕ 0`.
    pub embed: ComplexMatrix,
    /// Fundamental operator in `𝒟_P`-basis coordinates.
    pub a_used: ComplexMatrix,
}

impl SchafferPair {
    /// `‖V*Π − ΠP*‖`.
    pub fn v_intertwining(&self, p: &ComplexMatrix) -> f64 {
        op_norm(&(self.v.matrix.adjoint() * &self.embed - &self.embed * p.adjoint()))
    }

    /// `‖W*Π − ΠS*‖`.
    pub fn w_intertwining(&self, s: &ComplexMatrix) -> f64 {
        op_norm(&(self.w.matrix.adjoint() * &self.embed - &self.embed * s.adjoint()))
    }

    /// `(W_A, V_P)` with its interior window (Hardy degrees `0..N−1`).
    pub fn as_pair(&self) -> OperatorPair {
        OperatorPair::with_interior(self.w.matrix.clone(), self.v.matrix.clone(), self.v.interior_dim())
            .expect("Schäffer blocks are square and share one shape")
    }
}

fn hardy_block(head: &ComplexMatrix, row: &ComplexMatrix, tail: &TruncatedOp) -> TruncatedOp {
    let n = head.nrows();
    let h = tail.matrix.nrows();
    let mut m = ComplexMatrix::zeros(n + h, n + h);
    m.view_mut((0, 0), (n, n)).copy_from(head);
    m.view_mut((n, 0), (row.nrows(), n)).copy_from(row);
    m.view_mut((n, n), (h, h)).copy_from(&tail.matrix);
    TruncatedOp {
        matrix: m,
        block_size: tail.block_size,
        dom_block_size: tail.dom_block_size,
        degree_lo: 0,
        degree_hi: tail.degree_hi,
        interior_hi: tail.degree_hi - 1,
        head_dim: n,
    }
}

/// Builds the Schäffer pair of a Γ-contraction on Hardy degrees `0..=n_trunc`.
pub fn schaffer_build(pair: &OperatorPair, n_trunc: usize, tol: &Tolerance) -> Result<SchafferPair> {
    if n_trunc < 2 {
        return Err(Error::TruncationTooSmall { degree: n_trunc, required: 2 });
    }
    let report = is_gamma_contraction(pair, tol);
    if report.kind != Kind::GammaContraction {
        return Err(Error::ClassificationFailed { kind: report.kind.to_string() });
    }
    let fundamental = fundamental_op(pair, tol)?;
    let basis = &fundamental.defect_basis;
    let a = fundamental.op.clone();
    let d = basis.ncols();
    let n = pair.dim();
    let d_p = {
        let id = ComplexMatrix::identity(n, n);
        crate::linalg::psd_sqrt(&(id - pair.p().adjoint() * pair.p()), tol)?
    };
    // constant-function rows, in 𝒟_P-basis coordinates at degree 0
    let defect_row = basis.adjoint() * &d_p;
    let mut v_row = ComplexMatrix::zeros(d * (n_trunc + 1), n);
    let mut w_row = v_row.clone();
    v_row.view_mut((0, 0), (d, n)).copy_from(&defect_row);
    w_row.view_mut((0, 0), (d, n)).copy_from(&(a.adjoint() * &defect_row));

    let shift = shift_op(d, n_trunc);
    let pencil = build_mult_op(&SymbolPoly::pencil(&a), n_trunc)?;
    let v = hardy_block(pair.p(), &v_row, &shift);
    let w = hardy_block(pair.s(), &w_row, &pencil);
    let mut embed = ComplexMatrix::zeros(n + d * (n_trunc + 1), n);
    embed.view_mut((0, 0), (n, n)).fill_with_identity();
    Ok(SchafferPair { v, w, embed, a_used: a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_gamma_isometry;
    use crate::dilation::gamma_unitary_synth;
    use crate::linalg::{c64, diag, from_real, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_product_case() {
        let s = from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let p = ComplexMatrix::zeros(2, 2);
        let pair = OperatorPair::new(s.clone(), p.clone()).unwrap();
        let sc = schaffer_build(&pair, 4, &Tolerance::default()).unwrap();
        assert_eq!(sc.v.matrix.nrows(), 2 + 2 * 5);
        // D_P = I, A = S
        assert!(op_norm(&(&sc.a_used - &s)) < 1e-14);
        let row = sc.v.matrix.view((2, 0), (2, 2)).into_owned();
        assert!(op_norm(&(row - ComplexMatrix::identity(2, 2))) < 1e-14);
        let wrow = sc.w.matrix.view((2, 0), (2, 2)).into_owned();
        assert!(op_norm(&(wrow - s.adjoint())) < 1e-14);
        assert!(sc.v_intertwining(&p) < 1e-12);
        assert!(sc.w_intertwining(&s) < 1e-12);
        assert!(is_gamma_isometry(&sc.as_pair(), &Tolerance::default()).holds);
    }

    #[test]
    fn gamma_unitary_input_degenerates() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = random_unitary(3, &mut rng);
        let u1 = w.adjoint() * diag(&[c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0)]) * &w;
        let u2 = w.adjoint() * diag(&[c64(0.0, -1.0), c64(1.0, 0.0), c64(0.6, 0.8)]) * &w;
        let pair = gamma_unitary_synth(&u1, &u2, &Tolerance::default()).unwrap();
        let sc = schaffer_build(&pair, 3, &Tolerance::default()).unwrap();
        assert_eq!(sc.v.matrix.nrows(), 3);
        assert!(op_norm(&(&sc.v.matrix - pair.p())) < 1e-14);
        assert!(op_norm(&(&sc.w.matrix - pair.s())) < 1e-14);
    }

    #[test]
    fn rejects_non_gamma_input() {
        let pair = OperatorPair::new(from_real(2, 2, &[1.2, 0.0, 0.0, 0.0]), ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(schaffer_build(&pair, 4, &Tolerance::default()), Err(Error::ClassificationFailed { .. })));
    }
}
