//! Solving (A + A*z)Θ = Θ(B + B*z) and checking invariance of ΘH².

use bidisc::blh::{blaschke_factor, blh_solve, invariance_check, BlhOutcome, BlhProblem};
use bidisc::hardy::SymbolPoly;
use bidisc::linalg::{diag_real, from_real, ComplexMatrix};
use bidisc::suite::random_blh_instance;
use bidisc::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(name: &str, a: &ComplexMatrix, theta: SymbolPoly, tol: &Tolerance) -> bidisc::Result<()> {
    let inv = invariance_check(a, &theta, 12, tol)?;
    let prob = BlhProblem::new(a.clone(), theta)?;
    match blh_solve(&prob, tol) {
        BlhOutcome::Solved(sol) => println!("{name:<14} solved: residual {:.1e}, w(B) {:.4}, invariant {}", sol.residual, sol.w_b, inv.invariant),
        BlhOutcome::NoSolution { residual, .. } => println!("{name:<14} no B: residual {residual:.3}, invariant {}", inv.invariant),
    }
    Ok(())
}

fn main() -> bidisc::Result<()> {
    let tol = Tolerance { residual_tol: 1e-8, ..Tolerance::default() };
    let a = from_real(2, 2, &[0.2, 0.6, 0.0, -0.3]);
    report("Θ = zI", &a, SymbolPoly::shift(2), &tol)?;
    // Θ = diag(z, 1) does not intertwine this A
    let counter = SymbolPoly::new(vec![diag_real(&[0.0, 1.0]), diag_real(&[1.0, 0.0])])?;
    report("diag(z, 1)", &from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]), counter, &tol)?;
    report("Blaschke", &diag_real(&[0.5, -0.2]), blaschke_factor(&diag_real(&[1.0, 0.0]), &tol), &tol)?;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..4 {
        let inst = random_blh_instance(&mut rng);
        report(&format!("random {k}"), &inst.a, inst.theta, &tol)?;
    }
    Ok(())
}
