//! Beurling–Lax–Halmos intertwining: given `A` on `𝓔*` and a polynomial
//! inner `Θ: 𝓔 → 𝓔*`, find `B` on `𝓔` with `(A + A*z)Θ = Θ(B + B*z)`, and
//! test whether `Θ H²_𝓔` is invariant under `M_{A + A*z}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{build_mult_op, SymbolPoly};
use crate::linalg::{complement_basis, op_norm, range_basis, ComplexMatrix, Tolerance, I, ONE};
use crate::numrad::numerical_radius;

pub const INNER_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct BlhProblem {
    pub a: ComplexMatrix,
    pub theta: SymbolPoly,
    /// `max_t ‖Θ(e^{it})*Θ(e^{it}) − I‖` over [`INNER_SAMPLES`] points.
    pub inner_residual: f64,
}

impl BlhProblem {
    pub fn new(a: ComplexMatrix, theta: SymbolPoly) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() != theta.cod_dim() {
            return Err(Error::dims(format!(
                "A is {}×{} but Θ maps into ℂ^{}",
                a.nrows(),
                a.ncols(),
                theta.cod_dim()
            )));
        }
        let k = theta.dom_dim();
        let id = ComplexMatrix::identity(k, k);
        let inner_residual = (0..INNER_SAMPLES)
            .map(|j| {
                let t = theta.eval(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / INNER_SAMPLES as f64));
                op_norm(&(t.adjoint() * t - &id))
            })
            .fold(0.0, f64::max);
        Ok(BlhProblem { a, theta, inner_residual })
    }

    pub fn is_inner(&self) -> bool {
        self.inner_residual <= 1e-8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlhSolution {
    pub b: ComplexMatrix,
    /// `max_k ‖AΘ_k + A*Θ_{k−1} − Θ_k B − Θ_{k−1}B*‖`.
    pub residual: f64,
    /// Dimension of the real solution space of the homogeneous system.
    pub kernel_dim: usize,
    pub w_b: f64,
    /// Uniqueness is only claimed for inner `Θ` with a consistent system.
    pub unique: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlhOutcome {
    Solved(BlhSolution),
    /// No `B` brings the residual below tolerance; the least-squares
    /// candidate is kept for diagnostics.
    NoSolution { residual: f64, best: BlhSolution },
}

impl BlhOutcome {
    pub fn solution(&self) -> Option<&BlhSolution> {
        match self {
            BlhOutcome::Solved(s) => Some(s),
            BlhOutcome::NoSolution { .. } => None,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            BlhOutcome::Solved(s) => s.residual,
            BlhOutcome::NoSolution { residual, .. } => *residual,
        }
    }
}

fn push_complex(col: &mut Vec<f64>, m: &ComplexMatrix) {
    col.extend(m.iter().map(|z| z.re));
    col.extend(m.iter().map(|z| z.im));
}

fn equation_residual(prob: &BlhProblem, b: &ComplexMatrix) -> f64 {
    let d = prob.theta.degree() as isize;
    let a = &prob.a;
    (0..=d + 1)
        .map(|k| {
            let (tk, tk1) = (prob.theta.coeff(k), prob.theta.coeff(k - 1));
            op_norm(&(a * &tk + a.adjoint() * &tk1 - &tk * b - &tk1 * b.adjoint()))
        })
        .fold(0.0, f64::max)
}

/// Solves the coefficient equations for `k = 0..=deg Θ + 1` in the real
/// unknowns `(Re B, Im B)` by least squares.
pub fn blh_solve(prob: &BlhProblem, tol: &Tolerance) -> BlhOutcome {
    let k = prob.theta.dom_dim();
    let d = prob.theta.degree() as isize;
    let a = &prob.a;
    let unknowns = 2 * k * k;

    // column j of the real system: image of the j-th real basis direction of B
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(unknowns);
    for part in [ONE, I] {
        for idx in 0..k * k {
            let mut e = ComplexMatrix::zeros(k, k);
            e[(idx % k, idx / k)] = part;
            let mut col = Vec::new();
            for j in 0..=d + 1 {
                let (tj, tj1) = (prob.theta.coeff(j), prob.theta.coeff(j - 1));
                push_complex(&mut col, &(&tj * &e + &tj1 * e.adjoint()));
            }
            columns.push(col);
        }
    }
    let mut rhs = Vec::new();
    for j in 0..=d + 1 {
        let (tj, tj1) = (prob.theta.coeff(j), prob.theta.coeff(j - 1));
        push_complex(&mut rhs, &(a * &tj + a.adjoint() * &tj1));
    }
    let rows = rhs.len();
    let system = DMatrix::<f64>::from_fn(rows, unknowns, |r, c| columns[c][r]);
    let rhs = DMatrix::<f64>::from_column_slice(rows, 1, &rhs);

    let (x, rank) = if unknowns == 0 {
        (DMatrix::<f64>::zeros(0, 1), 0)
    } else {
        let svd = crate::linalg::checked_svd(&system);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let cutoff = tol.rank_tol * smax.max(f64::MIN_POSITIVE);
        let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
        let x = svd.solve(&rhs, cutoff).unwrap_or_else(|_| DMatrix::zeros(unknowns, 1));
        (x, rank)
    };
    let b = ComplexMatrix::from_fn(k, k, |r, c| Complex64::new(x[(c * k + r, 0)], x[(k * k + c * k + r, 0)]));
    let residual = equation_residual(prob, &b);
    let kernel_dim = unknowns - rank;
    let solution = BlhSolution {
        w_b: numerical_radius(&b, tol).value,
        residual,
        kernel_dim,
        unique: kernel_dim == 0 && prob.is_inner(),
        b,
    };
    if residual <= tol.residual_tol {
        BlhOutcome::Solved(solution)
    } else {
        BlhOutcome::NoSolution { residual, best: solution }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub residual: f64,
    /// Dimension of `Θ H²_𝓔` within degrees `0..=N`.
    pub subspace_dim: usize,
}

/// Orthonormal basis of `Θ H²_𝓔 ∩ span{z^0..z^max_deg}`.
///
/// For inner polynomial `Θ`, every polynomial in `Θ H²` is `Θ f` with `f` a
/// polynomial of no larger degree, so the intersection is found exactly from
/// `Θ f`, `deg f ≤ max_deg`, by requiring the coefficients above `max_deg`
/// to vanish.
fn range_within_degree(theta: &SymbolPoly, max_deg: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
    let d = theta.degree();
    let tall = build_mult_op(theta, max_deg + d)?.matrix;
    let m = theta.cod_dim();
    let cols = theta.dom_dim() * (max_deg + 1);
    let top = tall.view((0, 0), (m * (max_deg + 1), cols)).into_owned();
    let kernel = if d == 0 || cols == 0 {
        ComplexMatrix::identity(cols, cols)
    } else {
        let bottom = tall.view((m * (max_deg + 1), 0), (m * d, cols)).into_owned();
        complement_basis(&range_basis(&bottom.adjoint(), tol), cols, tol)
    };
    Ok(range_basis(&(top * kernel), tol))
}

/// Tests `M_{A + A*z}(Θ H²_𝓔) ⊂ Θ H²_𝓔` on degrees `0..=N`.
///
/// `Θ·constants` lies in the tested part and the rest of `Θ H²` is obtained
/// from it by powers of `z`, which commute with `M_{A + A*z}`, so the finite
/// check decides invariance for every `N ≥ deg Θ + 1`.
pub fn invariance_check(a: &ComplexMatrix, theta: &SymbolPoly, n: usize, tol: &Tolerance) -> Result<InvarianceReport> {
    let d = theta.degree();
    if n < d + 1 {
        return Err(Error::TruncationTooSmall { degree: n, required: d + 1 });
    }
    if a.nrows() != a.ncols() || a.nrows() != theta.cod_dim() {
        return Err(Error::dims("A must act on the codomain of Θ"));
    }
    let t = build_mult_op(&SymbolPoly::pencil(a), n)?.matrix;
    let q_s = range_within_degree(theta, n, tol)?;
    let q_in = range_within_degree(theta, n - 1, tol)?;
    let m = theta.cod_dim();
    // embed degree ≤ N−1 coordinates into degree ≤ N
    let mut q_in_full = ComplexMatrix::zeros(m * (n + 1), q_in.ncols());
    q_in_full.view_mut((0, 0), (q_in.nrows(), q_in.ncols())).copy_from(&q_in);
    let image = t * q_in_full;
    let leak = &image - &q_s * (q_s.adjoint() * &image);
    let residual = op_norm(&leak);
    Ok(InvarianceReport { invariant: residual <= tol.residual_tol, residual, subspace_dim: q_s.ncols() })
}

/// `I − P_E + z P_E` for the orthogonal projection onto `span(e)`.
pub fn blaschke_factor(e: &ComplexMatrix, tol: &Tolerance) -> SymbolPoly {
    let q = range_basis(e, tol);
    let m = e.nrows();
    let proj = &q * q.adjoint();
    SymbolPoly::new(vec![ComplexMatrix::identity(m, m) - &proj, proj]).expect("equal shapes")
}
