//! Classification reports, fundamental operators and von Neumann margins.

use bidisc::classify::{classify, fundamental_op, von_neumann_margin, OperatorPair};
use bidisc::defect::scalar;
use bidisc::linalg::{from_real, random_unitary, ComplexMatrix};
use bidisc::suite::{random_commuting_unitaries, random_gamma_contraction};
use bidisc::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bidisc::Result<()> {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let (u1, u2) = random_commuting_unitaries(3, &mut rng);
    let unitary = bidisc::dilation::gamma_unitary_synth(&u1, &u2, &tol)?;
    let isometry = bidisc::hardy::gamma_isometry_model(&from_real(1, 1, &[0.6]), 8)?;
    let cases = vec![
        ("Γ-unitary", unitary),
        ("shift model", isometry),
        ("nilpotent", OperatorPair::new(from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]), ComplexMatrix::zeros(2, 2))?),
        ("diag(1.2, 0)", OperatorPair::new(from_real(2, 2, &[1.2, 0.0, 0.0, 0.0]), ComplexMatrix::zeros(2, 2))?),
        ("random", random_gamma_contraction(&mut rng)?),
        ("(2.2, 1)", OperatorPair::new(scalar(2.2), scalar(1.0))?),
    ];
    for (name, pair) in &cases {
        let report = classify(pair, &tol)?;
        let vn = von_neumann_margin(pair, 3, 40, 32, &mut rng);
        println!("{name:<13} {:<17} w(F) {:.6}  vN margin {:+.3e}", report.kind.to_string(), report.w_a, vn.min_margin);
    }

    // the fundamental operator is unitarily covariant
    let pair = random_gamma_contraction(&mut rng)?;
    let u = random_unitary(pair.dim(), &mut rng);
    let f1 = fundamental_op(&pair, &tol)?;
    let f2 = fundamental_op(&pair.conjugate(&u)?, &tol)?;
    println!("\nresiduals {:.1e} / {:.1e}, defect rank {}", f1.residual, f2.residual, f1.defect_basis.ncols());
    Ok(())
}
