//! Membership of scalar points in Γ, by roots and by the β-equation.

use bidisc::gamma_point::{beta_solve, in_gamma, in_gamma_via_beta, symmetrize, GammaPoint};
use bidisc::linalg::c64;

fn main() {
    let points = [
        ("π(0.5, -0.3i)", symmetrize(c64(0.5, 0.0), c64(0.0, -0.3))),
        ("(2, 1) boundary", GammaPoint::new(c64(2.0, 0.0), c64(1.0, 0.0))),
        ("(2.2, 1)", GammaPoint::new(c64(2.2, 0.0), c64(1.0, 0.0))),
        ("(1.2, 0.5)", GammaPoint::new(c64(1.2, 0.0), c64(0.5, 0.0))),
        ("π(1.1, 0)", symmetrize(c64(1.1, 0.0), c64(0.0, 0.0))),
    ];
    println!("{:<18} {:>6} {:>6}  beta", "point", "roots", "beta");
    for (name, pt) in points {
        let b = beta_solve(pt);
        println!(
            "{:<18} {:>6} {:>6}  {:.4}{:+.4}i",
            name,
            in_gamma(pt, 1e-9),
            in_gamma_via_beta(pt, 1e-9),
            b.beta.re,
            b.beta.im
        );
    }
}
