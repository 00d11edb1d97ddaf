//! Functional model of a Γ-contraction and its scalar part X with S = X + PX*.

use bidisc::classify::{joint_unitary_equiv, OperatorPair};
use bidisc::defect::scalar;
use bidisc::dilation::{compressed_scalar, nf_ay_build, scalar_part_from_pair};
use bidisc::suite::gamma_contraction_of_dim;
use bidisc::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bidisc::Result<()> {
    let tol = Tolerance::default();

    let pair = OperatorPair::new(scalar(1.2), scalar(0.5))?;
    let model = nf_ay_build(&pair, None, &tol)?;
    let x = compressed_scalar(&model, &tol)?;
    println!("(1.2, 0.5): symbol {:.6}, S_model {:.6}, X {:.6}", model.symbol_a[(0, 0)].re, model.s_model[(0, 0)].re, x.x[(0, 0)].re);

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..4 {
        let pair = gamma_contraction_of_dim(3, &mut rng)?;
        let model = nf_ay_build(&pair, None, &tol)?;
        let cs = compressed_scalar(&model, &tol)?;
        let x_pair = scalar_part_from_pair(&pair, &tol)?;
        let same = joint_unitary_equiv(&[cs.x, model.p_model.clone()], &[x_pair, pair.p().clone()], None, 1e-6)?;
        println!(
            "N {:>3}  (S,P) discrepancy {:.1e}  X residual {:.1e}  (X,P) matches pair: {same}",
            model.model_space.n_trunc, model.residual_s, cs.residual
        );
    }
    Ok(())
}
