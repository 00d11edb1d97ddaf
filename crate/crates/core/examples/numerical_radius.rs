//! Numerical radius with a certificate vector.

use bidisc::linalg::{c64, from_real, ComplexMatrix};
use bidisc::numrad::numerical_radius;
use bidisc::Tolerance;

fn main() {
    let tol = Tolerance::default();
    let jordan = from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
    let hermitian = from_real(2, 2, &[1.0, 0.5, 0.5, -0.3]);
    let mut mixed = ComplexMatrix::zeros(3, 3);
    mixed[(0, 1)] = c64(0.4, 0.2);
    mixed[(1, 2)] = c64(-0.1, 0.7);
    mixed[(2, 2)] = c64(0.0, 0.5);

    for (name, a) in [("[[0,2],[0,0]]", jordan), ("hermitian", hermitian), ("3x3", mixed)] {
        let r = numerical_radius(&a, &tol);
        let h = &r.certificate;
        let attained = (h.adjoint() * &a * h)[(0, 0)].norm();
        println!("{name:<14} w = {:.12}  |<Ah,h>| = {:.12}  angle {:.4}", r.value, attained, r.argmax_angle);
    }
}
