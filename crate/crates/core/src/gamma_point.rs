//! Scalar geometry of the symmetrized bidisc Γ = {(z₁+z₂, z₁z₂) : |z₁|,|z₂| ≤ 1}.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default slack on root moduli in [`in_gamma`].
pub const DEFAULT_POINT_TOL: f64 = 1e-9;

/// A point `(s, p)` of ℂ², read as (sum, product).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPoint {
    pub s: Complex64,
    pub p: Complex64,
}

impl GammaPoint {
    pub fn new(s: Complex64, p: Complex64) -> Self {
        GammaPoint { s, p }
    }

    pub fn conj(&self) -> Self {
        GammaPoint { s: self.s.conj(), p: self.p.conj() }
    }

    /// The two roots of `t² − s t + p`, larger modulus first.
    pub fn roots(&self) -> (Complex64, Complex64) {
        let disc = (self.s * self.s - 4.0 * self.p).sqrt();
        // Pick the branch that avoids cancellation, then recover the other
        // root from the product.
        let plus = self.s + disc;
        let minus = self.s - disc;
        let big = if plus.norm() >= minus.norm() { plus } else { minus } * 0.5;
        let small = if big.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { self.p / big };
        (big, small)
    }
}

/// Solution of `s = β + p·conj(β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaSolution {
    pub beta: Complex64,
    pub exact: bool,
    pub residual: f64,
}

/// π(z₁, z₂) = (z₁ + z₂, z₁z₂).
pub fn symmetrize(z1: Complex64, z2: Complex64) -> GammaPoint {
    GammaPoint { s: z1 + z2, p: z1 * z2 }
}

/// Root-based membership: both roots of `t² − s t + p` lie in the closed
/// disk of radius `1 + tol`.
pub fn in_gamma(pt: GammaPoint, tol: f64) -> bool {
    let (a, b) = pt.roots();
    a.norm() <= 1.0 + tol && b.norm() <= 1.0 + tol
}

/// Solves `s = β + p·conj(β)` as a 2×2 real system in (Re β, Im β).
///
/// With `p = a + ib` the system matrix is `[[1+a, b], [b, 1−a]]`, whose
/// determinant is `1 − |p|²`. On the degenerate circle `|p| = 1` the
/// minimal-norm least-squares solution is returned and `exact` records
/// whether the system was consistent.
pub fn beta_solve(pt: GammaPoint) -> BetaSolution {
    let (a, b) = (pt.p.re, pt.p.im);
    let (u, v) = (pt.s.re, pt.s.im);
    let m = [[1.0 + a, b], [b, 1.0 - a]];
    let det = 1.0 - a * a - b * b;
    let scale = 1.0 + pt.p.norm();
    let (x, y) = if det.abs() > 1e-12 * scale * scale {
        ((m[1][1] * u - m[0][1] * v) / det, (m[0][0] * v - m[1][0] * u) / det)
    } else {
        min_norm_symmetric_2x2(m, (u, v))
    };
    let beta = Complex64::new(x, y);
    let residual = (beta + pt.p * beta.conj() - pt.s).norm();
    BetaSolution { beta, exact: residual <= 1e-9 * pt.s.norm().max(1.0), residual }
}

/// Pseudo-inverse solve of a symmetric 2×2 real system.
fn min_norm_symmetric_2x2(m: [[f64; 2]; 2], rhs: (f64, f64)) -> (f64, f64) {
    // Symmetric: eigen-decompose directly.
    let (p, q, r) = (m[0][0], m[0][1], m[1][1]);
    let mean = 0.5 * (p + r);
    let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    let eig = [mean + rad, mean - rad];
    let big = eig[0].abs().max(eig[1].abs());
    if big == 0.0 {
        return (0.0, 0.0);
    }
    let mut out = (0.0, 0.0);
    for &lambda in &eig {
        if lambda.abs() <= 1e-12 * big {
            continue;
        }
        // eigenvector of [[p,q],[q,r]] for lambda
        let (ex, ey) = if q.abs() > 1e-300 {
            (lambda - r, q)
        } else if (lambda - p).abs() <= (lambda - r).abs() {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        };
        let n = (ex * ex + ey * ey).sqrt();
        let (ex, ey) = (ex / n, ey / n);
        let coef = (ex * rhs.0 + ey * rhs.1) / lambda;
        out.0 += coef * ex;
        out.1 += coef * ey;
    }
    out
}

/// Membership via the β-characterization: `|p| ≤ 1`, `|β| ≤ 1` and the
/// equation solved to within `tol`.
pub fn in_gamma_via_beta(pt: GammaPoint, tol: f64) -> bool {
    if pt.p.norm() > 1.0 + tol {
        return false;
    }
    let sol = beta_solve(pt);
    sol.beta.norm() <= 1.0 + tol && sol.residual <= tol * pt.s.norm().max(1.0)
}

/// `n²` points π(e^{iθ_j}, e^{iθ_k}) of the distinguished boundary on the
/// uniform angle grid `θ_j = 2πj/n`.
pub fn boundary_sample(n: usize) -> Vec<GammaPoint> {
    let n = n.max(1);
    let unit: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect();
    let mut out = Vec::with_capacity(n * n);
    for &z1 in &unit {
        for &z2 in &unit {
            out.push(symmetrize(z1, z2));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetrize_examples() {
        assert_eq!(symmetrize(c(1.0, 0.0), c(1.0, 0.0)), GammaPoint::new(c(2.0, 0.0), c(1.0, 0.0)));
        let pt = symmetrize(c(0.0, 1.0), c(0.0, -1.0));
        assert_eq!(pt, GammaPoint::new(c(0.0, 0.0), c(1.0, 0.0)));
        let pt = symmetrize(c(0.5, 0.0), c(0.2, 0.0));
        assert!((pt.s - c(0.7, 0.0)).norm() < 1e-15 && (pt.p - c(0.1, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn membership_examples() {
        let tol = DEFAULT_POINT_TOL;
        assert!(in_gamma(GammaPoint::new(c(2.0, 0.0), c(1.0, 0.0)), tol));
        // roots 1 ± √2
        assert!(!in_gamma(GammaPoint::new(c(2.0, 0.0), c(-1.0, 0.0)), tol));
        // roots 1 and 0.5
        assert!(in_gamma(GammaPoint::new(c(1.5, 0.0), c(0.5, 0.0)), tol));
    }

    #[test]
    fn beta_examples() {
        let b = beta_solve(GammaPoint::new(c(0.0, 0.0), c(0.0, 0.0)));
        assert!(b.exact && b.beta.norm() == 0.0);
        let b = beta_solve(GammaPoint::new(c(1.5, 0.0), c(0.5, 0.0)));
        assert!(b.exact && (b.beta - c(1.0, 0.0)).norm() < 1e-14);
        // degenerate branch: [[2,0],[0,0]](x,y) = (2,0), minimal norm solution β = 1
        let b = beta_solve(GammaPoint::new(c(2.0, 0.0), c(1.0, 0.0)));
        assert!(b.exact && (b.beta - c(1.0, 0.0)).norm() < 1e-14 && b.residual < 1e-14);
    }

    #[test]
    fn degenerate_inconsistent_system_is_flagged() {
        // |p| = 1 with s not of the form β + p β̄: s = i, p = 1 needs 2 Re β = i.
        let b = beta_solve(GammaPoint::new(c(0.0, 1.0), c(1.0, 0.0)));
        assert!(!b.exact);
        assert!((b.residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_sample_examples() {
        assert_eq!(boundary_sample(1), vec![GammaPoint::new(c(2.0, 0.0), c(1.0, 0.0))]);
        let pts = boundary_sample(2);
        assert_eq!(pts.len(), 4);
        let has = |s: Complex64, p: Complex64| pts.iter().any(|q| (q.s - s).norm() < 1e-12 && (q.p - p).norm() < 1e-12);
        assert!(has(c(-2.0, 0.0), c(1.0, 0.0)));
        assert!(has(c(0.0, 0.0), c(-1.0, 0.0)));
        for pt in boundary_sample(17) {
            assert!((pt.p.norm() - 1.0).abs() < 1e-14);
            assert!(in_gamma(pt, 1e-12));
        }
    }

    #[test]
    fn root_membership_matches_bidisc_predicate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let tol = DEFAULT_POINT_TOL;
        for _ in 0..10_000 {
            let z1 = Complex64::from_polar(rng.random_range(0.0..1.5), rng.random_range(0.0..2.0 * PI));
            let z2 = Complex64::from_polar(rng.random_range(0.0..1.5), rng.random_range(0.0..2.0 * PI));
            let expect = z1.norm() <= 1.0 + tol && z2.norm() <= 1.0 + tol;
            assert_eq!(in_gamma(symmetrize(z1, z2), tol), expect, "z1={z1} z2={z2}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let pt = GammaPoint::new(
                c(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5)),
                c(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)),
            );
            assert_eq!(in_gamma(pt, DEFAULT_POINT_TOL), in_gamma(pt.conj(), DEFAULT_POINT_TOL));
        }
    }

    #[test]
    fn beta_consistency_inside_and_outside() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let tol = DEFAULT_POINT_TOL;
        for _ in 0..5000 {
            let z1 = Complex64::from_polar(rng.random_range(0.0..1.3), rng.random_range(0.0..2.0 * PI));
            let z2 = Complex64::from_polar(rng.random_range(0.0..1.3), rng.random_range(0.0..2.0 * PI));
            let pt = symmetrize(z1, z2);
            if pt.p.norm() >= 1.0 - 1e-6 {
                continue;
            }
            let sol = beta_solve(pt);
            assert!(sol.exact);
            if in_gamma(pt, tol) {
                assert!(sol.beta.norm() <= 1.0 + 1e-9);
            } else {
                assert!(sol.beta.norm() > 1.0 || sol.residual > tol);
            }
            assert_eq!(in_gamma_via_beta(pt, tol), in_gamma(pt, tol));
        }
    }
}
