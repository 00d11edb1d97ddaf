use bidisc::classify::joint_unitary_equiv;
use bidisc::dilation::{compressed_scalar, nf_ay_build, nf_ay_build_rotated, scalar_part_from_pair};
use bidisc::linalg::{op_norm, random_unitary, ComplexMatrix, Tolerance};
use bidisc::suite::{gamma_contraction_of_dim, random_gamma_contraction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// X computed from the pair alone and X compressed from the model describe the
// same pair (X, P) up to the unitary that identifies the model with ℋ.
#[test]
fn scalar_part_is_model_independent() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1101);
    for k in 0..60 {
        let pair = gamma_contraction_of_dim(2 + k % 2, &mut rng).unwrap();
        let x = scalar_part_from_pair(&pair, &tol).unwrap();
        let s_back = &x + pair.p() * x.adjoint();
        assert!(op_norm(&(s_back - pair.s())) < 1e-10, "pair {k}");

        let model = nf_ay_build(&pair, None, &tol).unwrap();
        let cs = compressed_scalar(&model, &tol).unwrap();
        assert!(cs.residual <= model.tolerance(), "pair {k}: {}", cs.residual);
        let same = joint_unitary_equiv(&[cs.x, model.p_model], &[x, pair.p().clone()], None, 1e-6).unwrap();
        assert!(same, "pair {k}");
    }
}

#[test]
fn symbol_is_unique_up_to_basis_rotation() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1102);
    for k in 0..20 {
        let pair = random_gamma_contraction(&mut rng).unwrap();
        let base = nf_ay_build(&pair, None, &tol).unwrap();
        let r = random_unitary(base.model_space.block_size, &mut rng);
        let rotated = nf_ay_build_rotated(&pair, None, Some(&r), &tol).unwrap();
        let expected = r.adjoint() * &base.symbol_a * &r;
        assert!(op_norm(&(&rotated.symbol_a - expected)) < 1e-12, "pair {k}");
        assert!(rotated.residual_s <= rotated.tolerance(), "pair {k}: {}", rotated.residual_s);
        let scalar = compressed_scalar(&rotated, &tol).unwrap();
        assert!(scalar.residual <= rotated.tolerance());
    }
}

// Pairs whose P is a multiple of the identity give repeated singular values
// in the model-space construction.
#[test]
fn three_dimensional_models_reproduce_p() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1103);
    for k in 0..80 {
        let pair = gamma_contraction_of_dim(3, &mut rng).unwrap();
        let model = nf_ay_build(&pair, None, &tol).unwrap();
        assert_eq!(model.model_space.dim(), 3);
        assert!(model.residual_p <= model.tolerance(), "pair {k}: {}", model.residual_p);
        assert!(model.residual_s <= model.tolerance(), "pair {k}: {}", model.residual_s);
        let id = ComplexMatrix::identity(3, 3);
        let q = &model.model_space.basis;
        assert!(op_norm(&(q.adjoint() * q - id)) < 1e-10);
    }
}
