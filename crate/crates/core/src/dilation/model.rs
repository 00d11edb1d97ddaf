use crate::classify::{is_gamma_contraction, trace_word_discrepancy, Kind, OperatorPair};
use crate::defect::{build_model_space, default_truncation, ModelSpace};
use crate::error::{Error, Result};
use crate::hardy::{build_mult_op, compress, constant_op, shift_op, SymbolPoly};
use crate::linalg::{op_norm, psd_sqrt, sandwich_solve, ComplexMatrix, Tolerance};
use crate::numrad::numerical_radius;

/// Functional model of a c.n.u. Γ-contraction: `(S, P)` compressed from
/// `(M_{A + A*z}, M_z)` on `H²_{𝒟_{P*}}` to the model space.
#[derive(Debug, Clone, PartialEq)]
pub struct NfAyModel {
    pub model_space: ModelSpace,
    /// Model symbol in `𝒟_{P*}`-basis coordinates.
    pub symbol_a: ComplexMatrix,
    pub s_model: ComplexMatrix,
    pub p_model: ComplexMatrix,
    /// Trace-word discrepancy of `(S_model, P_model)` against `(S, P)`.
    pub residual_s: f64,
    /// Trace-word discrepancy of `P_model` against `P`.
    pub residual_p: f64,
    /// `‖D_{P*} G D_{P*} − (S* − SP*)‖` for the extracted symbol.
    pub symbol_residual: f64,
}

impl NfAyModel {
    /// `max(1e-8, 10 · trunc_error)`.
    pub fn tolerance(&self) -> f64 {
        self.model_space.tolerance()
    }
}

/// Builds the model with the default `𝒟_{P*}` basis.
pub fn nf_ay_build(pair: &OperatorPair, n_trunc: Option<usize>, tol: &Tolerance) -> Result<NfAyModel> {
    nf_ay_build_rotated(pair, n_trunc, None, tol)
}

/// Builds the model after changing the `𝒟_{P*}` basis by the unitary
/// `rotation` (`Q ↦ Q·R`); the symbol comes out as `R* A R`.
pub fn nf_ay_build_rotated(
    pair: &OperatorPair,
    n_trunc: Option<usize>,
    rotation: Option<&ComplexMatrix>,
    tol: &Tolerance,
) -> Result<NfAyModel> {
    let report = is_gamma_contraction(pair, tol);
    if report.kind != Kind::GammaContraction {
        return Err(Error::ClassificationFailed { kind: report.kind.to_string() });
    }
    let (s, p) = (pair.s(), pair.p());
    let n = match n_trunc {
        Some(n) => n,
        None => default_truncation(p, tol)?,
    };
    let mut model_space = build_model_space(p, n, tol)?;
    let dim = p.nrows();
    let d_pstar = psd_sqrt(&(ComplexMatrix::identity(dim, dim) - p * p.adjoint()), tol)?;
    let rhs = s.adjoint() - s * p.adjoint();
    let (g, symbol_residual) = sandwich_solve(&d_pstar, &d_pstar, &rhs, tol)?;
    if symbol_residual > tol.residual_tol * op_norm(&rhs).max(1.0) {
        return Err(Error::ResidualTooLarge { residual: symbol_residual, bound: tol.residual_tol });
    }
    let qs = &model_space.charfn.defects.basis_pstar;
    let mut symbol_a = qs.adjoint() * g.adjoint() * qs;

    if let Some(r) = rotation {
        let b = model_space.block_size;
        if r.shape() != (b, b) {
            return Err(Error::dims(format!("basis rotation must be {b}×{b}")));
        }
        symbol_a = r.adjoint() * &symbol_a * r;
        // the model basis changes coordinates degree by degree
        model_space.basis = constant_op(&r.adjoint(), n) * &model_space.basis;
    }

    let s_full = build_mult_op(&SymbolPoly::pencil(&symbol_a), n)?.matrix;
    let shift = shift_op(model_space.block_size, n).matrix;
    let s_model = compress(&s_full, &model_space.basis)?;
    let p_model = compress(&shift, &model_space.basis)?;
    let residual_s = trace_word_discrepancy(&[s_model.clone(), p_model.clone()], &[s.clone(), p.clone()], None)?;
    let residual_p = trace_word_discrepancy(&[p_model.clone()], &[p.clone()], None)?;
    Ok(NfAyModel { model_space, symbol_a, s_model, p_model, residual_s, residual_p, symbol_residual })
}

/// `X = P_Q (I ⊗ A)|_Q`, the compressed scalar part of `S_model = X + P_model X*`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedScalar {
    pub x: ComplexMatrix,
    pub source_a: ComplexMatrix,
    /// `w(A)`, the decompressed numerical radius.
    pub decompressed_wr: f64,
    /// `‖S_model − (X + P_model X*)‖`.
    pub residual: f64,
}

pub fn compressed_scalar(model: &NfAyModel, tol: &Tolerance) -> Result<CompressedScalar> {
    let n = model.model_space.n_trunc;
    let x = compress(&constant_op(&model.symbol_a, n), &model.model_space.basis)?;
    let residual = op_norm(&(&model.s_model - (&x + &model.p_model * x.adjoint())));
    let bound = model.tolerance();
    if residual > bound {
        return Err(Error::ResidualTooLarge { residual, bound });
    }
    Ok(CompressedScalar {
        decompressed_wr: numerical_radius(&model.symbol_a, tol).value,
        x,
        source_a: model.symbol_a.clone(),
        residual,
    })
}

/// The unique `X` with `S = X + PX*`, from the pair alone.
///
/// Taking adjoints, `X − PXP* = S − PS*`, a Stein equation whose solution is
/// `Σ_k P^k (S − PS*) P*^k` when `ρ(P) < 1`. Terms are summed until they fall
/// below `convergence_tol`.
pub fn scalar_part_from_pair(pair: &OperatorPair, tol: &Tolerance) -> Result<ComplexMatrix> {
    let (s, p) = (pair.s(), pair.p());
    let p_adj = p.adjoint();
    let mut term = s - p * s.adjoint();
    let mut x = term.clone();
    const CAP: usize = 100_000;
    for _ in 0..CAP {
        term = p * term * &p_adj;
        let size = term.norm();
        x += &term;
        if size <= tol.convergence_tol {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence { iterations: CAP, last_delta: term.norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::joint_unitary_equiv;
    use crate::linalg::{c64, from_real, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_pair(s: f64, p: f64) -> OperatorPair {
        OperatorPair::new(from_real(1, 1, &[s]), from_real(1, 1, &[p])).unwrap()
    }

    #[test]
    fn zero_product_recovers_s() {
        let s = from_real(2, 2, &[0.2, 0.9, 0.0, -0.3]);
        let pair = OperatorPair::new(s.clone(), ComplexMatrix::zeros(2, 2)).unwrap();
        let model = nf_ay_build(&pair, Some(4), &Tolerance::default()).unwrap();
        assert_eq!(model.model_space.dim(), 2);
        // constants ⊗ ℂ²: symbol and model coincide with S up to the basis
        assert!(model.residual_s < 1e-12);
        assert!(op_norm(&model.p_model) < 1e-14);
        let cs = compressed_scalar(&model, &Tolerance::default()).unwrap();
        assert!(joint_unitary_equiv(&[cs.x.clone()], &[s.clone()], None, 1e-12).unwrap());
    }

    #[test]
    fn scalar_model() {
        let pair = scalar_pair(1.2, 0.5);
        let model = nf_ay_build(&pair, Some(30), &Tolerance::default()).unwrap();
        assert!((model.symbol_a[(0, 0)] - 0.8).norm() < 1e-12);
        assert!((model.s_model[(0, 0)] - 1.2).norm() <= 1e-6);
        assert!((model.p_model[(0, 0)] - 0.5).norm() <= 1e-6);
        let cs = compressed_scalar(&model, &Tolerance::default()).unwrap();
        assert!((cs.x[(0, 0)] - 0.8).norm() <= 1e-6);
        assert!((cs.decompressed_wr - 0.8).abs() < 1e-12);
        let x = scalar_part_from_pair(&pair, &Tolerance::default()).unwrap();
        assert!((x[(0, 0)] - 0.8).norm() < 1e-12);
    }

    #[test]
    fn basis_rotation_conjugates_symbol() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let a = crate::suite::random_with_wr(2, 0.9, &mut rng);
        let pair = crate::suite::kernel_compression(&a, &[c64(0.3, -0.2)]).unwrap();
        let tol = Tolerance::default();
        assert_eq!(is_gamma_contraction(&pair, &tol).kind, Kind::GammaContraction);
        let base = nf_ay_build(&pair, None, &tol).unwrap();
        assert_eq!(base.model_space.block_size, 2);
        let r = random_unitary(base.model_space.block_size, &mut rng);
        let rotated = nf_ay_build_rotated(&pair, None, Some(&r), &tol).unwrap();
        assert!(op_norm(&(&rotated.symbol_a - r.adjoint() * &base.symbol_a * &r)) < 1e-12);
        assert!(joint_unitary_equiv(&[base.symbol_a.clone()], &[rotated.symbol_a.clone()], None, 1e-10).unwrap());
        assert!(rotated.residual_s <= rotated.tolerance());
    }

    #[test]
    fn rejects_unitary_part() {
        // Γ-unitary: P unitary, so not c.n.u.
        let pair = OperatorPair::new(from_real(1, 1, &[0.0]), ComplexMatrix::from_element(1, 1, c64(-1.0, 0.0))).unwrap();
        assert!(matches!(nf_ay_build(&pair, Some(10), &Tolerance::default()), Err(Error::NotCnu { .. })));
    }
}
