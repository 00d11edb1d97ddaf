//! Characteristic function of a contraction and its model space.

use std::f64::consts::PI;

use bidisc::defect::{build_model_space, default_truncation, pi_nf_matrix, theta_eval, theta_taylor};
use bidisc::hardy::{compress, shift_op};
use bidisc::linalg::{c64, from_real, op_norm};
use bidisc::Tolerance;
use num_complex::Complex64;

fn main() -> bidisc::Result<()> {
    let tol = Tolerance::default();

    // scalar c: Taylor coefficients −c, (1−c²), (1−c²)c, ...
    let cf = theta_taylor(&from_real(1, 1, &[0.5]), 6, &tol)?;
    let coeffs: Vec<String> = cf.taylor.coeffs().iter().map(|m| format!("{:.5}", m[(0, 0)].re)).collect();
    println!("Θ for c = 0.5: {}", coeffs.join(", "));

    let p = from_real(2, 2, &[0.3, 0.5, 0.0, -0.4]);
    let n = default_truncation(&p, &tol)?;
    let cf = theta_taylor(&p, n, &tol)?;
    let max_boundary = (0..64)
        .map(|j| theta_eval(&cf, Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 64.0)).map(|t| op_norm(&t)))
        .collect::<bidisc::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("max ‖Θ(e^it)‖ = {max_boundary:.12}, Θ(0.3i) = {:.4}", theta_eval(&cf, c64(0.0, 0.3))?);

    let ms = build_model_space(&p, n, &tol)?;
    let pm = compress(&shift_op(ms.block_size, n).matrix, &ms.basis)?;
    println!("N = {n}, model dim {}, truncation error {:.1e}, ‖Δ‖ {:.1e}", ms.dim(), ms.trunc_error, ms.delta_norm);
    println!("tr P = {:.6}, tr P_model = {:.6}", p.trace(), pm.trace());
    let pi = pi_nf_matrix(&p, n, &tol)?;
    println!("‖Π*Π − I‖ = {:.1e}", op_norm(&(pi.adjoint() * &pi - bidisc::ComplexMatrix::identity(2, 2))));
    Ok(())
}
