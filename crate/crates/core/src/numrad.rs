//! Numerical radius `w(A) = sup{|⟨Ah, h⟩| : ‖h‖ = 1}`.
//!
//! Uses `w(A) = max_θ λ_max(Re(e^{iθ}A))`: a uniform θ-grid locates the
//! global maximum and golden-section search refines the best brackets.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{hermitian_eigen, ComplexMatrix, ComplexVector, Tolerance};

const GRID: usize = 720;
const ANGLE_WIDTH: f64 = 1e-12;
const BRACKETS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct NumRadResult {
    pub value: f64,
    /// Angle θ ∈ [0, 2π) at which `λ_max(Re(e^{iθ}A))` is maximal.
    pub argmax_angle: f64,
    /// Unit vector with `|⟨A h, h⟩| ≈ value`. Empty for a 0×0 input.
    pub certificate: ComplexVector,
}

fn rotated_top(a: &ComplexMatrix, theta: f64) -> (f64, ComplexVector) {
    let rot = Complex64::from_polar(1.0, theta);
    let h = (a * rot + a.adjoint() * rot.conj()).scale(0.5);
    let (vals, vecs) = hermitian_eigen(&h);
    (vals[0], vecs.column(0).into_owned())
}

fn golden_max(a: &ComplexMatrix, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = rotated_top(a, x1).0;
    let mut f2 = rotated_top(a, x2).0;
    while hi - lo > ANGLE_WIDTH {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = rotated_top(a, x2).0;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = rotated_top(a, x1).0;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Computes `w(A)` with a certificate vector.
///
/// The grid has 720 angles; the three best local maxima of the grid are
/// refined by golden-section search down to an angle width of 1e-12.
pub fn numerical_radius(a: &ComplexMatrix, _tol: &Tolerance) -> NumRadResult {
    assert_eq!(a.nrows(), a.ncols(), "numerical radius needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return NumRadResult { value: 0.0, argmax_angle: 0.0, certificate: ComplexVector::zeros(0) };
    }
    let step = 2.0 * PI / GRID as f64;
    let samples: Vec<f64> = (0..GRID).map(|j| rotated_top(a, j as f64 * step).0).collect();
    let mut peaks: Vec<usize> = (0..GRID)
        .filter(|&j| {
            let prev = samples[(j + GRID - 1) % GRID];
            let next = samples[(j + 1) % GRID];
            samples[j] >= prev && samples[j] >= next
        })
        .collect();
    peaks.sort_by(|&x, &y| samples[y].partial_cmp(&samples[x]).unwrap_or(std::cmp::Ordering::Equal));
    peaks.truncate(BRACKETS);
    if peaks.is_empty() {
        peaks.push(0);
    }

    let mut best_theta = peaks[0] as f64 * step;
    let mut best = samples[peaks[0]];
    for &j in &peaks {
        let centre = j as f64 * step;
        let (theta, value) = golden_max(a, centre - step, centre + step);
        if value > best {
            best = value;
            best_theta = theta;
        }
    }
    let theta = best_theta.rem_euclid(2.0 * PI);
    let (value, certificate) = rotated_top(a, theta);
    NumRadResult { value: value.max(0.0), argmax_angle: theta, certificate }
}

/// The `w(A) ≤ 1` test with the configured slack.
pub fn within_unit_radius(a: &ComplexMatrix, tol: &Tolerance) -> (bool, f64) {
    let w = numerical_radius(a, tol).value;
    (w <= 1.0 + tol.wr_slack, w)
}
