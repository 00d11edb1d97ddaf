//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. The decompositions (SVD,
//! hermitian eigen, complex Schur) come from nalgebra; this module adds the
//! tolerance-aware operations built on top of them: positive square roots,
//! range bases with a reproducible phase convention, pseudo-inverses and
//! the two-sided least-squares solve `L X R = C`.

use nalgebra::{ComplexField, DMatrix, DVector, Dyn, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Shorthand for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical tolerances shared by the toolkit.
///
/// `rank_tol` is relative to the largest singular value of whatever is being
/// rank-revealed; `residual_tol` bounds identity residuals; `convergence_tol`
/// stops iterations; `wr_slack` is the allowance in `w(A) ≤ 1` tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub convergence_tol: f64,
    pub wr_slack: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank_tol: 1e-10, residual_tol: 1e-9, convergence_tol: 1e-12, wr_slack: 1e-8 }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, residual_tol: f64, convergence_tol: f64, wr_slack: f64) -> Result<Self> {
        let t = Tolerance { rank_tol, residual_tol, convergence_tol, wr_slack };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.rank_tol, self.residual_tol, self.convergence_tol, self.wr_slack];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInput("tolerances must be finite and strictly positive".into()));
        }
        if self.rank_tol >= 1.0 {
            return Err(Error::InvalidInput("rank_tol must be < 1".into()));
        }
        Ok(())
    }
}

/// Builds a matrix from real row-major data.
pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols, "data length must be rows × cols");
    ComplexMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c64(x, 0.0)))
}

/// Diagonal matrix from complex entries.
pub fn diag(entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(entries))
}

/// Diagonal matrix from real entries.
pub fn diag_real(entries: &[f64]) -> ComplexMatrix {
    let v: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
    diag(&v)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// SVD with singular vectors, checked by recomposition.
///
/// nalgebra's default convergence threshold occasionally stops with
/// singular vectors that do not reproduce the input (seen on Hermitian
/// matrices with repeated singular values), so a few thresholds are tried
/// and the most accurate factorization is kept.
pub fn checked_svd<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> SVD<T, Dyn, Dyn> {
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let mut best: Option<(f64, SVD<T, Dyn, Dyn>)> = None;
    for eps in [f64::EPSILON, 1e-15, 1e-14, 1e-13] {
        let Some(svd) = SVD::try_new(m.clone(), true, true, eps, 0) else { continue };
        let err = svd.clone().recompose().map(|r| (r - m).norm()).unwrap_or(f64::INFINITY);
        if err <= 1e-12 * scale {
            return svd;
        }
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, svd));
        }
    }
    best.map(|(_, svd)| svd).unwrap_or_else(|| SVD::new(m.clone(), true, true))
}

/// Spectral (operator 2-) norm. Zero for empty matrices.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.iter().all(|z| *z == ZERO) {
        return 0.0;
    }
    let svd = SVD::new(m.clone(), false, false);
    svd.singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Operator norm of a vector-valued column (the Euclidean norm).
pub fn vec_norm(v: &ComplexVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian eigendecomposition with eigenvalues in descending order.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// (M + M*)/2.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Hermitian positive square root.
///
/// Eigenvalues in `[-rank_tol·max(1,‖M‖), rank_tol·max(1,‖M‖)]` are set to
/// zero before taking roots, so defect operators of (near-)isometries come
/// out exactly zero instead of carrying `√ε` noise.
pub fn psd_sqrt(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::dims(format!("psd_sqrt needs a square matrix, got {}×{}", m.nrows(), m.ncols())));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let scale = op_norm(m).max(1.0);
    let asymmetry = op_norm(&(m - m.adjoint()));
    if asymmetry > tol.rank_tol * scale {
        return Err(Error::NotHermitian { asymmetry });
    }
    let (values, vectors) = hermitian_eigen(m);
    let floor = tol.rank_tol * scale;
    let min = values.last().copied().unwrap_or(0.0);
    if min < -floor {
        return Err(Error::IndefiniteInput { min_eigenvalue: min });
    }
    let roots: Vec<f64> = values.iter().map(|&v| if v <= floor { 0.0 } else { v.sqrt() }).collect();
    Ok(scale_columns_gram(&vectors, &roots))
}

/// V · diag(d) · V*.
fn scale_columns_gram(v: &ComplexMatrix, d: &[f64]) -> ComplexMatrix {
    let mut scaled = v.clone();
    for (j, &s) in d.iter().enumerate() {
        scaled.column_mut(j).scale_mut(s);
    }
    &scaled * v.adjoint()
}

/// Makes the largest-magnitude entry of every column real and positive.
///
/// Ties within a relative 1e-9 go to the lowest row index.
pub fn normalize_phases(q: &mut ComplexMatrix) {
    for j in 0..q.ncols() {
        let mut col = q.column_mut(j);
        let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        let pivot = col.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap_or(0);
        let phase = col[pivot] / col[pivot].norm();
        let rot = phase.conj();
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
}

/// Orthonormal basis for the column space of `m`.
///
/// Keeps left singular vectors whose singular value exceeds
/// `rank_tol · σ_max`. The zero matrix yields a basis with no columns.
pub fn range_basis(m: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let rows = m.nrows();
    if m.is_empty() || m.iter().all(|z| *z == ZERO) {
        return ComplexMatrix::zeros(rows, 0);
    }
    let svd = checked_svd(m);
    let u = svd.u.expect("requested U");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax <= f64::MIN_POSITIVE {
        return ComplexMatrix::zeros(rows, 0);
    }
    let mut keep: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] > tol.rank_tol * smax).collect();
    keep.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut q = ComplexMatrix::from_fn(rows, keep.len(), |r, c| u[(r, keep[c])]);
    normalize_phases(&mut q);
    q
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` in ℂ^dim.
pub fn complement_basis(basis: &ComplexMatrix, dim: usize, tol: &Tolerance) -> ComplexMatrix {
    if basis.ncols() == 0 {
        return ComplexMatrix::identity(dim, dim);
    }
    let proj = ComplexMatrix::identity(dim, dim) - basis * basis.adjoint();
    range_basis(&proj, &Tolerance { rank_tol: tol.rank_tol.max(1e-8), ..*tol })
}

/// Moore–Penrose pseudo-inverse with a relative singular-value cutoff.
pub fn pseudo_inverse(m: &ComplexMatrix, rank_tol: f64) -> ComplexMatrix {
    let (r, c) = m.shape();
    if m.is_empty() || m.iter().all(|z| *z == ZERO) {
        return ComplexMatrix::zeros(c, r);
    }
    let svd = checked_svd(m);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested Vᵀ");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut out = ComplexMatrix::zeros(c, r);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > rank_tol * smax {
            let vk = vt.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (vk * uk).scale(1.0 / s);
        }
    }
    out
}

/// Minimal-Frobenius-norm least-squares solution of `L X R = C`.
///
/// Returns `X = L⁺ C R⁺` together with the residual `‖L X R − C‖`.
pub fn sandwich_solve(
    l: &ComplexMatrix,
    r: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<(ComplexMatrix, f64)> {
    if l.nrows() != c.nrows() || r.ncols() != c.ncols() {
        return Err(Error::dims(format!(
            "sandwich_solve: L is {}×{}, R is {}×{}, C is {}×{}",
            l.nrows(),
            l.ncols(),
            r.nrows(),
            r.ncols(),
            c.nrows(),
            c.ncols()
        )));
    }
    let x = pseudo_inverse(l, tol.rank_tol) * c * pseudo_inverse(r, tol.rank_tol);
    let residual = op_norm(&(l * &x * r - c));
    Ok((x, residual))
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::dims("eigenvalues of a non-square matrix"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000).ok_or(Error::Decomposition("complex Schur"))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

pub fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Block-diagonal direct sum `a ⊕ b`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(ar + br, ac + bc);
    out.view_mut((0, 0), (ar, ac)).copy_from(a);
    out.view_mut((ar, ac), (br, bc)).copy_from(b);
    out
}

/// Leading `k × k` principal block.
pub fn leading_block(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    m.view((0, 0), (k, k)).into_owned()
}

/// Complex matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed random unitary (QR of a Gaussian matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let ph = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= ph;
            }
        }
    }
    q
}

/// Random matrix scaled so that its operator norm equals `norm`.
pub fn random_with_norm<R: Rng + ?Sized>(n: usize, norm: f64, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian(n, n, rng);
    let s = op_norm(&g);
    if s == 0.0 {
        return g;
    }
    g.scale(norm / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) -> bool {
        a.shape() == b.shape() && op_norm(&(a - b)) <= eps
    }

    #[test]
    fn psd_sqrt_identity_and_diagonal() {
        let tol = Tolerance::default();
        let id = ComplexMatrix::identity(2, 2);
        assert!(close(&psd_sqrt(&id, &tol).unwrap(), &id, 1e-14));
        let d = diag_real(&[4.0, 9.0]);
        assert!(close(&psd_sqrt(&d, &tol).unwrap(), &diag_real(&[2.0, 3.0]), 1e-14));
    }

    #[test]
    fn psd_sqrt_matches_eigen_oracle() {
        // [[2,1],[1,2]] = V diag(3,1) V*, V = [(1,1),(1,−1)]/√2
        let m = from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let r = psd_sqrt(&m, &Tolerance::default()).unwrap();
        let s = 0.5 * (3f64.sqrt() + 1.0);
        let t = 0.5 * (3f64.sqrt() - 1.0);
        assert!(close(&r, &from_real(2, 2, &[s, t, t, s]), 1e-13));
    }

    #[test]
    fn psd_sqrt_rejects_bad_input() {
        let tol = Tolerance::default();
        let asym = from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(psd_sqrt(&asym, &tol), Err(Error::NotHermitian { .. })));
        let neg = diag_real(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&neg, &tol), Err(Error::IndefiniteInput { .. })));
        let tiny_neg = diag_real(&[1.0, -1e-13]);
        let r = psd_sqrt(&tiny_neg, &tol).unwrap();
        assert_eq!(r[(1, 1)], ZERO);
    }

    #[test]
    fn range_basis_cases() {
        let tol = Tolerance::default();
        assert_eq!(range_basis(&ComplexMatrix::zeros(3, 3), &tol).ncols(), 0);
        let q = range_basis(&ComplexMatrix::identity(2, 2), &tol);
        assert_eq!(q.ncols(), 2);
        assert!(close(&(q.adjoint() * &q), &ComplexMatrix::identity(2, 2), 1e-14));
        let ones = from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let q = range_basis(&ones, &tol);
        assert_eq!(q.ncols(), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((q[(0, 0)] - c64(h, 0.0)).norm() < 1e-14);
        assert!((q[(1, 0)] - c64(h, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn phase_convention_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_gaussian(4, 2, &mut rng);
        let q1 = range_basis(&m, &Tolerance::default());
        let q2 = range_basis(&m.scale(-1.0), &Tolerance::default());
        assert!(close(&q1, &q2, 1e-12));
        for j in 0..q1.ncols() {
            let col = q1.column(j);
            let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let p = col.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap();
            assert!(col[p].im.abs() < 1e-15 && col[p].re > 0.0);
        }
    }

    #[test]
    fn checked_svd_recomposes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (r, c) in [(1, 1), (5, 3), (3, 5), (12, 12)] {
            let m = random_gaussian(r, c, &mut rng);
            let back = checked_svd(&m).recompose().unwrap();
            assert!(op_norm(&(back - &m)) < 1e-12 * m.norm());
        }
        // rank-3 projection with a triple singular value
        let q = random_unitary(40, &mut rng).columns(0, 3).into_owned();
        let proj = &q * q.adjoint();
        let basis = range_basis(&proj, &Tolerance::default());
        assert_eq!(basis.ncols(), 3);
        assert!(op_norm(&(&basis * basis.adjoint() - proj)) < 1e-12);
    }

    #[test]
    fn sandwich_solve_cases() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_gaussian(3, 3, &mut rng);
        let id = ComplexMatrix::identity(3, 3);
        let (x, res) = sandwich_solve(&id, &id, &c, &tol).unwrap();
        assert!(close(&x, &c, 1e-14) && res < 1e-14);

        // Pseudo-inverse oracle: L⁺ = diag(1,0), so X = diag(1,0)·diag(0,1) = 0
        // and the residual is ‖C‖ = 1.
        let (x, res) =
            sandwich_solve(&diag_real(&[1.0, 0.0]), &ComplexMatrix::identity(2, 2), &diag_real(&[0.0, 1.0]), &tol).unwrap();
        assert!(op_norm(&x) < 1e-15);
        assert!((res - 1.0).abs() < 1e-14);

        let l = diag_real(&[2.0, 1.0]);
        let (x, res) = sandwich_solve(&l, &l, &diag_real(&[4.0, 1.0]), &tol).unwrap();
        assert!(close(&x, &ComplexMatrix::identity(2, 2), 1e-14));
        assert!(res <= 1e-12);
    }

    #[test]
    fn sandwich_solve_dimension_error() {
        let tol = Tolerance::default();
        let r = sandwich_solve(&ComplexMatrix::identity(2, 2), &ComplexMatrix::identity(3, 3), &ComplexMatrix::zeros(2, 2), &tol);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_unitary(4, &mut rng);
        assert!(close(&(u.adjoint() * &u), &ComplexMatrix::identity(4, 4), 1e-13));
    }

    #[test]
    fn eigenvalues_of_rotation() {
        let m = from_real(2, 2, &[0.0, 2.0, -1.0, 0.0]);
        let rho = spectral_radius(&m).unwrap();
        assert!((rho - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(1e-10, 1e-9, 1e-12, 1e-8).is_ok());
        assert!(Tolerance::new(0.0, 1e-9, 1e-12, 1e-8).is_err());
        assert!(Tolerance::new(1.5, 1e-9, 1e-12, 1e-8).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn seeded(seed: u64, n: usize) -> ComplexMatrix {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_gaussian(n, n, &mut rng)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn psd_sqrt_squares_back(seed in any::<u64>(), n in 1usize..6) {
                let g = seeded(seed, n);
                let m = &g * g.adjoint();
                let tol = Tolerance::default();
                let r = psd_sqrt(&m, &tol).unwrap();
                prop_assert!(op_norm(&(&r * &r - &m)) <= tol.residual_tol * op_norm(&m).max(1.0));
            }

            #[test]
            fn range_basis_is_orthonormal_and_spans(seed in any::<u64>(), n in 1usize..6, k in 1usize..4) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let m = random_gaussian(n, k, &mut rng) * random_gaussian(k, n, &mut rng);
                let tol = Tolerance::default();
                let q = range_basis(&m, &tol);
                prop_assert_eq!(q.ncols(), k.min(n));
                let id = ComplexMatrix::identity(q.ncols(), q.ncols());
                prop_assert!(op_norm(&(q.adjoint() * &q - id)) <= 1e-12);
                let proj = ComplexMatrix::identity(n, n) - &q * q.adjoint();
                prop_assert!(op_norm(&(proj * &m)) <= tol.rank_tol * op_norm(&m));
            }

            #[test]
            fn sandwich_solve_consistent_systems(seed in any::<u64>(), n in 1usize..5) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let l = random_gaussian(n, n, &mut rng);
                let r = random_gaussian(n, n, &mut rng);
                let x0 = random_gaussian(n, n, &mut rng);
                let c = &l * &x0 * &r;
                let (_, res) = sandwich_solve(&l, &r, &c, &Tolerance::default()).unwrap();
                prop_assert!(res <= 1e-10 * op_norm(&c).max(1.0));
            }
        }
    }
}
