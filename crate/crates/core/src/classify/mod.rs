//! Classification of commuting pairs `(S, P)`.
//!
//! The algebraic criteria used here:
//!
//! * Γ-unitary: `P` unitary, `S = S*P`, `‖S‖ ≤ 2`;
//! * Γ-isometry: `P` isometric, `S = S*P`, `‖S‖ ≤ 2`;
//! * Γ-contraction: `‖P‖ ≤ 1`, `‖S‖ ≤ 2` and `S − S*P = D_P F D_P` for some
//!   `F` on the defect space of `P` with `w(F) ≤ 1`.
//!
//! Pairs built from truncated Hardy-space operators carry an interior
//! window (a count of leading coordinates) on which the identities are
//! checked; outside it the truncation edge breaks them by construction.

mod equiv;
mod von_neumann;

pub use equiv::{joint_unitary_equiv, trace_word_discrepancy};
pub use von_neumann::{polynomial_margin, sup_on_distinguished_boundary, von_neumann_margin, BiPoly, VonNeumannOutcome, VonNeumannProbes};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_finite, op_norm, psd_sqrt, range_basis, sandwich_solve, ComplexMatrix, Tolerance};
use crate::numrad::numerical_radius;

/// A pair of square operators of equal dimension, read as (sum, product).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPair {
    s: ComplexMatrix,
    p: ComplexMatrix,
    commutator_norm: f64,
    interior: Option<usize>,
}

impl OperatorPair {
    pub fn new(s: ComplexMatrix, p: ComplexMatrix) -> Result<Self> {
        Self::build(s, p, None)
    }

    /// A pair whose identities are only meaningful on the first `interior`
    /// coordinates.
    pub fn with_interior(s: ComplexMatrix, p: ComplexMatrix, interior: usize) -> Result<Self> {
        Self::build(s, p, Some(interior))
    }

    fn build(s: ComplexMatrix, p: ComplexMatrix, interior: Option<usize>) -> Result<Self> {
        let n = s.nrows();
        if s.ncols() != n || p.shape() != (n, n) {
            return Err(Error::dims(format!(
                "pair operators must be square of equal size: S is {}×{}, P is {}×{}",
                s.nrows(),
                s.ncols(),
                p.nrows(),
                p.ncols()
            )));
        }
        if !is_finite(&s) || !is_finite(&p) {
            return Err(Error::NonFinite);
        }
        if let Some(k) = interior {
            if k > n {
                return Err(Error::dims(format!("interior window {k} exceeds dimension {n}")));
            }
        }
        let comm = &s * &p - &p * &s;
        let commutator_norm = match interior {
            Some(k) => op_norm(&comm.view((0, 0), (k, k)).into_owned()),
            None => op_norm(&comm),
        };
        Ok(OperatorPair { s, p, commutator_norm, interior })
    }

    pub fn s(&self) -> &ComplexMatrix {
        &self.s
    }

    pub fn p(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn commutator_norm(&self) -> f64 {
        self.commutator_norm
    }

    pub fn interior(&self) -> Option<usize> {
        self.interior
    }

    /// Size of the window on which identities are checked.
    pub fn window_dim(&self) -> usize {
        self.interior.unwrap_or_else(|| self.dim())
    }

    /// `(S*, P*)`. The interior window is dropped.
    pub fn adjoint(&self) -> OperatorPair {
        OperatorPair::new(self.s.adjoint(), self.p.adjoint()).expect("adjoint keeps shape")
    }

    /// `(U* S U, U* P U)` for a unitary `U`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<OperatorPair> {
        OperatorPair::new(u.adjoint() * &self.s * u, u.adjoint() * &self.p * u)
    }

    /// `(S ⊕ S', P ⊕ P')`.
    pub fn direct_sum(&self, other: &OperatorPair) -> OperatorPair {
        use crate::linalg::direct_sum;
        OperatorPair::new(direct_sum(&self.s, &other.s), direct_sum(&self.p, &other.p)).expect("direct sum keeps shape")
    }

    fn window(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let k = self.window_dim();
        m.view((0, 0), (k, k)).into_owned()
    }

    /// Whether the commutator passes `‖SP − PS‖ ≤ residual_tol · max(1, ‖S‖‖P‖)`.
    pub fn commutes(&self, tol: &Tolerance) -> bool {
        self.commutator_norm <= commutator_bound(self, tol)
    }
}

fn commutator_bound(pair: &OperatorPair, tol: &Tolerance) -> f64 {
    tol.residual_tol * (op_norm(&pair.s) * op_norm(&pair.p)).max(1.0)
}

/// Outcome of one named predicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.to_string(), value, bound, passed: value <= bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredicateReport {
    pub holds: bool,
    pub checks: Vec<Check>,
}

impl PredicateReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        PredicateReport { holds: checks.iter().all(|c| c.passed), checks }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    GammaUnitary,
    GammaIsometry,
    GammaContraction,
    NotGamma,
    Inconclusive,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub kind: Kind,
    /// Fundamental operator in an orthonormal basis of the defect space of `P`.
    pub fundamental_op: Option<ComplexMatrix>,
    pub fundamental_residual: f64,
    pub w_a: f64,
    pub checks: Vec<Check>,
}

/// Solution of `S − S*P = D_P F D_P`.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalOp {
    /// `F` in the coordinates of `defect_basis`.
    pub op: ComplexMatrix,
    /// `‖D_P X D_P − (S − S*P)‖` for the minimal-norm ambient solution `X`.
    pub residual: f64,
    /// Orthonormal basis of the defect space `ran D_P`.
    pub defect_basis: ComplexMatrix,
    /// Minimal-norm solution in ambient coordinates.
    pub ambient: ComplexMatrix,
}

fn contraction_norm_check(p: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    let norm = op_norm(p);
    if norm > 1.0 + tol.rank_tol {
        return Err(Error::NotAContraction { norm });
    }
    Ok(norm)
}

fn defect_operator(p: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let n = p.nrows();
    psd_sqrt(&(ComplexMatrix::identity(n, n) - p.adjoint() * p), tol)
}

/// Solves `S − S*P = D_P F D_P` in the minimal-norm least-squares sense.
pub fn fundamental_op(pair: &OperatorPair, tol: &Tolerance) -> Result<FundamentalOp> {
    contraction_norm_check(pair.p(), tol)?;
    let d = defect_operator(pair.p(), tol)?;
    let rhs = pair.s() - pair.s().adjoint() * pair.p();
    let (ambient, residual) = sandwich_solve(&d, &d, &rhs, tol)?;
    let basis = range_basis(&d, tol);
    let op = basis.adjoint() * &ambient * &basis;
    Ok(FundamentalOp { op, residual, defect_basis: basis, ambient })
}

/// Γ-unitary test: `P` unitary, `S = S*P`, `‖S‖ ≤ 2`.
pub fn is_gamma_unitary(pair: &OperatorPair, tol: &Tolerance) -> PredicateReport {
    let n = pair.dim();
    let (s, p) = (pair.s(), pair.p());
    let id = ComplexMatrix::identity(n, n);
    let eps = tol.residual_tol;
    PredicateReport::from_checks(vec![
        Check::at_most("commutator", pair.commutator_norm, commutator_bound(pair, tol)),
        Check::at_most("isometry ‖P*P − I‖", op_norm(&(p.adjoint() * p - &id)), eps),
        Check::at_most("co-isometry ‖PP* − I‖", op_norm(&(p * p.adjoint() - &id)), eps),
        Check::at_most("‖S − S*P‖", op_norm(&(s - s.adjoint() * p)), eps),
        Check::at_most("‖S‖", op_norm(s), 2.0 + eps),
    ])
}

/// Γ-isometry test on the interior window: `P*P = I`, `S = S*P`, `‖S‖ ≤ 2`.
pub fn is_gamma_isometry(pair: &OperatorPair, tol: &Tolerance) -> PredicateReport {
    let k = pair.window_dim();
    let (s, p) = (pair.s(), pair.p());
    let eps = tol.residual_tol;
    PredicateReport::from_checks(vec![
        Check::at_most("commutator", pair.commutator_norm, commutator_bound(pair, tol)),
        Check::at_most(
            "isometry ‖P*P − I‖",
            op_norm(&(pair.window(&(p.adjoint() * p)) - ComplexMatrix::identity(k, k))),
            eps,
        ),
        Check::at_most("‖S − S*P‖", op_norm(&pair.window(&(s - s.adjoint() * p))), eps),
        Check::at_most("‖S‖", op_norm(s), 2.0 + eps),
    ])
}

/// Γ-contraction test via the fundamental-operator equation.
///
/// Never fails: every sub-check is recorded in the report. Values that miss
/// a bound by less than a factor of 100 of its slack give `Inconclusive`.
pub fn is_gamma_contraction(pair: &OperatorPair, tol: &Tolerance) -> ClassificationReport {
    let eps = tol.residual_tol;
    let mut checks = vec![Check::at_most("commutator", pair.commutator_norm, commutator_bound(pair, tol))];
    let p_norm = op_norm(pair.p());
    checks.push(Check::at_most("‖P‖", p_norm, 1.0 + tol.rank_tol));
    checks.push(Check::at_most("‖S‖", op_norm(pair.s()), 2.0 + eps));

    let mut report = ClassificationReport {
        kind: Kind::NotGamma,
        fundamental_op: None,
        fundamental_residual: f64::NAN,
        w_a: f64::NAN,
        checks,
    };
    if !report.checks.iter().all(|c| c.passed) {
        return report;
    }
    let fundamental = match fundamental_op(pair, tol) {
        Ok(f) => f,
        Err(_) => return report,
    };
    let w = numerical_radius(&fundamental.op, tol).value;
    report.checks.push(Check::at_most("fundamental residual", fundamental.residual, eps));
    report.checks.push(Check::at_most("w(F)", w, 1.0 + tol.wr_slack));
    report.fundamental_residual = fundamental.residual;
    report.w_a = w;
    report.fundamental_op = Some(fundamental.op);

    let residual_ok = fundamental.residual <= eps;
    let w_ok = w <= 1.0 + tol.wr_slack;
    report.kind = if residual_ok && w_ok {
        Kind::GammaContraction
    } else if fundamental.residual <= 100.0 * eps && w <= 1.0 + 100.0 * tol.wr_slack {
        Kind::Inconclusive
    } else {
        Kind::NotGamma
    };
    report
}

/// Full classification with the commutator gate.
///
/// Returns the finest applicable kind: Γ-unitary, then Γ-isometry, then the
/// result of [`is_gamma_contraction`].
pub fn classify(pair: &OperatorPair, tol: &Tolerance) -> Result<ClassificationReport> {
    if !pair.commutes(tol) {
        return Err(Error::NotCommuting { commutator_norm: pair.commutator_norm });
    }
    let mut report = is_gamma_contraction(pair, tol);
    if report.kind != Kind::GammaContraction {
        return Ok(report);
    }
    let unitary = is_gamma_unitary(pair, tol);
    let isometry = is_gamma_isometry(pair, tol);
    if unitary.holds {
        report.kind = Kind::GammaUnitary;
        report.checks.extend(unitary.checks);
    } else if isometry.holds {
        report.kind = Kind::GammaIsometry;
        report.checks.extend(isometry.checks);
    }
    Ok(report)
}

/// Recovers `A` from a truncated model pair `(M_{A+A*z}, M_z)` on degrees
/// `0..=n`, using `S* − SP* = P_ℂ ⊗ A*` on degrees below `n`.
pub fn recover_pure_symbol(pair: &OperatorPair, n: usize) -> Result<ComplexMatrix> {
    let dim = pair.dim();
    if n == 0 || dim % (n + 1) != 0 {
        return Err(Error::dims(format!("dimension {dim} is not a multiple of n + 1 = {}", n + 1)));
    }
    let b = dim / (n + 1);
    let (s, p) = (pair.s(), pair.p());
    let defect = s.adjoint() - s * p.adjoint();
    let a = defect.view((0, 0), (b, b)).adjoint();
    let k = b * n;
    let mut off = defect.view((0, 0), (k, k)).into_owned();
    off.view_mut((0, 0), (b, b)).fill(crate::linalg::ZERO);
    let residual = op_norm(&off);
    if residual > 1e-10 * op_norm(&defect).max(1.0) {
        return Err(Error::NotPureModelForm { residual });
    }
    Ok(a)
}
