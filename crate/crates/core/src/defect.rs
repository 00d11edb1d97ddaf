//! Defect operators, the characteristic function and the truncated
//! Sz.-Nagy–Foias model space of a completely non-unitary contraction.
//!
//! Coordinates: the defect spaces `𝒟_P = ran D_P` and `𝒟_{P*} = ran D_{P*}`
//! are represented through orthonormal bases `Q_P`, `Q_{P*}` produced by
//! [`range_basis`]. The characteristic function is stored in these bases as
//! a map `𝒟_P → 𝒟_{P*}`, and the model space lives in the truncated Hardy
//! space `H²_{𝒟_{P*}}` with degree-major coordinates.
//!
//! At matrix scale a c.n.u. contraction has spectral radius < 1, so the
//! characteristic function is inner, `Δ_P ≡ 0` and `X_P = 0`. The model
//! therefore has no `Δ`-summand; `delta_norm` records the sampled size of
//! `Δ_P` so this can be checked rather than assumed.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardy::{build_mult_op, SymbolPoly};
use crate::linalg::{
    op_norm, psd_sqrt, range_basis, spectral_radius, ComplexMatrix, ComplexVector, Tolerance, ONE,
};

/// Largest admissible `‖P^{N+1}‖` for a model space at truncation `N`.
pub const MAX_TRUNC_ERROR: f64 = 1e-6;
/// Number of boundary samples used for `delta_norm`.
pub const DELTA_SAMPLES: usize = 256;
const X_LIMIT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DefectData {
    /// `D_P = (I − P*P)^{1/2}`.
    pub d_p: ComplexMatrix,
    /// `D_{P*} = (I − PP*)^{1/2}`.
    pub d_pstar: ComplexMatrix,
    /// Orthonormal basis of `ran D_P`.
    pub basis_p: ComplexMatrix,
    /// Orthonormal basis of `ran D_{P*}`.
    pub basis_pstar: ComplexMatrix,
}

impl DefectData {
    pub fn rank_p(&self) -> usize {
        self.basis_p.ncols()
    }

    pub fn rank_pstar(&self) -> usize {
        self.basis_pstar.ncols()
    }
}

fn require_contraction(p: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
    if p.nrows() != p.ncols() {
        return Err(Error::dims("contraction must be square"));
    }
    let norm = op_norm(p);
    if norm > 1.0 + tol.rank_tol {
        return Err(Error::NotAContraction { norm });
    }
    Ok(())
}

pub fn defect_data(p: &ComplexMatrix, tol: &Tolerance) -> Result<DefectData> {
    require_contraction(p, tol)?;
    let n = p.nrows();
    let id = ComplexMatrix::identity(n, n);
    let d_p = psd_sqrt(&(&id - p.adjoint() * p), tol)?;
    let d_pstar = psd_sqrt(&(&id - p * p.adjoint()), tol)?;
    let basis_p = range_basis(&d_p, tol);
    let basis_pstar = range_basis(&d_pstar, tol);
    Ok(DefectData { d_p, d_pstar, basis_p, basis_pstar })
}

/// Rejects contractions with a unitary part.
///
/// For a matrix contraction an eigenvalue on the unit circle always comes
/// with an eigenvector annihilated by `D_P` that spans a reducing subspace,
/// so c.n.u. is equivalent to spectral radius < 1. Returns the spectral
/// radius.
pub fn check_cnu(p: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    require_contraction(p, tol)?;
    let rho = spectral_radius(p)?;
    if rho >= 1.0 - 1e-9 {
        return Err(Error::NotCnu { spectral_radius: rho });
    }
    Ok(rho)
}

/// Smallest `N ≥ 32` with `ρ(P)^{N+1} ≤ 1e-10`.
pub fn default_truncation(p: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    let rho = check_cnu(p, tol)?;
    if rho <= 0.0 {
        return Ok(32);
    }
    let needed = ((1e-10f64).ln() / rho.ln()).ceil() as usize;
    Ok(needed.saturating_sub(1).max(32))
}

/// Characteristic function `Θ_P(z) = [−P + z D_{P*}(I − zP*)^{-1} D_P]|_{𝒟_P}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFn {
    /// Taylor coefficients `C_0..C_K` in defect-basis coordinates.
    pub taylor: SymbolPoly,
    pub source_p: ComplexMatrix,
    pub degree_used: usize,
    pub defects: DefectData,
}

/// Taylor coefficients of `Θ_P` up to degree `k`:
/// `C_0 = −P`, `C_j = D_{P*} P*^{j−1} D_P` (in defect bases).
pub fn theta_taylor(p: &ComplexMatrix, k: usize, tol: &Tolerance) -> Result<CharFn> {
    check_cnu(p, tol)?;
    let defects = defect_data(p, tol)?;
    let qs = &defects.basis_pstar;
    let qd = &defects.basis_p;
    let mut coeffs = Vec::with_capacity(k + 1);
    coeffs.push(-(qs.adjoint() * p * qd));
    // running = P*^{j-1} D_P Q_P
    let mut running = &defects.d_p * qd;
    let p_adj = p.adjoint();
    for _ in 1..=k {
        coeffs.push(qs.adjoint() * &defects.d_pstar * &running);
        running = &p_adj * running;
    }
    Ok(CharFn { taylor: SymbolPoly::new(coeffs)?, source_p: p.clone(), degree_used: k, defects })
}

/// Evaluates `Θ_P(z)` through the resolvent, independent of the Taylor data.
pub fn theta_eval(charfn: &CharFn, z: Complex64) -> Result<ComplexMatrix> {
    let p = &charfn.source_p;
    let n = p.nrows();
    let d = &charfn.defects;
    let resolvent_arg = ComplexMatrix::identity(n, n) - p.adjoint() * z;
    let smallest = nalgebra::SVD::new(resolvent_arg.clone(), false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !(smallest > 1e-13) {
        return Err(Error::ResolventSingular { z: z.to_string() });
    }
    let rhs = &d.d_p * &d.basis_p;
    let solved = resolvent_arg.lu().solve(&rhs).ok_or_else(|| Error::ResolventSingular { z: z.to_string() })?;
    let qs_adj = d.basis_pstar.adjoint();
    Ok(-(&qs_adj * p * &d.basis_p) + (&qs_adj * &d.d_pstar * solved) * z)
}

/// `Δ_P(t) = [I − Θ_P(e^{it})* Θ_P(e^{it})]^{1/2}`.
pub fn delta_eval(charfn: &CharFn, t: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
    let theta = theta_eval(charfn, Complex64::from_polar(1.0, t))?;
    let k = theta.ncols();
    psd_sqrt(&(ComplexMatrix::identity(k, k) - theta.adjoint() * &theta), tol)
}

/// `X_P = (SOT-lim P^m P^{*m})^{1/2}` by the iteration `M ← P M P*`.
pub fn x_limit(p: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    require_contraction(p, tol)?;
    let n = p.nrows();
    let p_adj = p.adjoint();
    let mut m = ComplexMatrix::identity(n, n);
    let mut last_delta = f64::INFINITY;
    for _ in 0..X_LIMIT_CAP {
        let next = p * &m * &p_adj;
        last_delta = (&next - &m).norm();
        m = crate::linalg::hermitian_part(&next);
        if last_delta <= tol.convergence_tol {
            return psd_sqrt(&m, tol);
        }
    }
    Err(Error::NonConvergence { iterations: X_LIMIT_CAP, last_delta })
}

/// Orthonormal basis of the truncated model space `𝒬_P^{(N)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpace {
    /// Columns span `𝒬_P^{(N)}` inside `H²_{𝒟_{P*}}` on degrees `0..=N`.
    pub basis: ComplexMatrix,
    pub n_trunc: usize,
    /// `dim 𝒟_{P*}`, the block size of the ambient Hardy space.
    pub block_size: usize,
    /// `max_t ‖Δ_P(t)‖` over [`DELTA_SAMPLES`] boundary points.
    pub delta_norm: f64,
    /// `‖P^{N+1}‖`, the tail left out by truncating at degree `N`.
    pub trunc_error: f64,
    /// `‖T_Θ^* Q‖` restricted to domain degrees `0..=N/2`.
    pub orth_residual: f64,
    pub charfn: CharFn,
}

impl ModelSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `max(1e-8, 10 · trunc_error)`, the accuracy the model promises.
    pub fn tolerance(&self) -> f64 {
        (10.0 * self.trunc_error).max(1e-8)
    }
}

fn power_norm(p: &ComplexMatrix, k: usize) -> f64 {
    let n = p.nrows();
    let mut acc = ComplexMatrix::identity(n, n);
    for _ in 0..k {
        acc = &acc * p;
    }
    op_norm(&acc)
}

/// Builds `𝒬_P^{(N)} = H²_{𝒟_{P*}}^{(N)} ⊖ Θ_P H²_{𝒟_P}`.
///
/// With `T` the compression of `M_{Θ_P}` to degrees `0..=N`, the identity
/// `T T* = I − P_N P_𝒬 P_N` holds exactly because `Θ_P` is inner and `M_Θ*`
/// maps polynomials of degree ≤ N into themselves. The basis is therefore the
/// range of `I − T T*`, the directions in which `T` fails to be co-isometric.
pub fn build_model_space(p: &ComplexMatrix, n: usize, tol: &Tolerance) -> Result<ModelSpace> {
    check_cnu(p, tol)?;
    if n < 1 {
        return Err(Error::TruncationTooSmall { degree: n, required: 1 });
    }
    let trunc_error = power_norm(p, n + 1);
    if trunc_error > MAX_TRUNC_ERROR {
        let rho = spectral_radius(p)?;
        let required = if rho > 0.0 { (MAX_TRUNC_ERROR.ln() / rho.ln()).ceil() as usize } else { 1 };
        return Err(Error::TruncationTooSmall { degree: n, required: required.max(n + 1) });
    }
    let charfn = theta_taylor(p, n, tol)?;
    let delta_norm = (0..DELTA_SAMPLES)
        .map(|j| delta_eval(&charfn, 2.0 * PI * j as f64 / DELTA_SAMPLES as f64, tol).map(|d| op_norm(&d)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let t = build_mult_op(&charfn.taylor, n)?.matrix;
    let dim = t.nrows();
    let cokernel = ComplexMatrix::identity(dim, dim) - &t * t.adjoint();
    let basis = range_basis(&crate::linalg::hermitian_part(&cokernel), tol);

    let lo_cols = charfn.taylor.dom_dim() * (n / 2 + 1);
    let t_lo = t.columns(0, lo_cols);
    let orth_residual = op_norm(&(t_lo.adjoint() * &basis));

    Ok(ModelSpace {
        basis,
        n_trunc: n,
        block_size: charfn.taylor.cod_dim(),
        delta_norm,
        trunc_error,
        orth_residual,
        charfn,
    })
}

/// `Π_NF h = Σ_{k=0}^{N} z^k ⊗ D_{P*} P*^k h` in `𝒟_{P*}`-basis coordinates.
///
/// `‖Π_NF h‖² = ‖h‖² − ‖P*^{N+1} h‖²` exactly.
pub fn pi_nf_embed(p: &ComplexMatrix, n: usize, h: &ComplexVector, tol: &Tolerance) -> Result<ComplexVector> {
    if h.len() != p.nrows() {
        return Err(Error::dims("Π_NF: vector length differs from dim P"));
    }
    let m = pi_nf_matrix(p, n, tol)?;
    Ok(m * h)
}

/// Matrix of `Π_NF` (truncated at degree `N`), one column per basis vector.
pub fn pi_nf_matrix(p: &ComplexMatrix, n: usize, tol: &Tolerance) -> Result<ComplexMatrix> {
    check_cnu(p, tol)?;
    let defects = defect_data(p, tol)?;
    Ok(pi_nf_in_basis(p, n, &defects.d_pstar, &defects.basis_pstar))
}

pub(crate) fn pi_nf_in_basis(p: &ComplexMatrix, n: usize, d_pstar: &ComplexMatrix, qs: &ComplexMatrix) -> ComplexMatrix {
    let dim = p.nrows();
    let b = qs.ncols();
    let head = qs.adjoint() * d_pstar;
    let p_adj = p.adjoint();
    let mut out = ComplexMatrix::zeros(b * (n + 1), dim);
    let mut power = ComplexMatrix::identity(dim, dim);
    for k in 0..=n {
        out.view_mut((k * b, 0), (b, dim)).copy_from(&(&head * &power));
        power = &p_adj * power;
    }
    out
}

/// Scalar helper: `1` as a 1×1 matrix times `c`.
pub fn scalar(c: f64) -> ComplexMatrix {
    ComplexMatrix::from_element(1, 1, ONE * c)
}
