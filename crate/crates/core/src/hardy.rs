//! Truncated vector-valued Hardy space `H²_E` spanned by `z^0 … z^N`.
//!
//! Vectors are stored degree-major: the coordinates of the degree-`k`
//! coefficient occupy rows `k·b .. (k+1)·b` where `b = dim E`. Analytic
//! Toeplitz operators become lower block-triangular block-Toeplitz matrices.

use num_complex::Complex64;

use crate::classify::OperatorPair;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};

/// Matrix polynomial `Σ_k C_k z^k`, each `C_k : ℂ^dom → ℂ^cod`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPoly {
    coeffs: Vec<ComplexMatrix>,
    dom_dim: usize,
    cod_dim: usize,
}

impl SymbolPoly {
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::InvalidInput("symbol needs at least one coefficient".into()))?;
        let (cod_dim, dom_dim) = first.shape();
        if coeffs.iter().any(|c| c.shape() != (cod_dim, dom_dim)) {
            return Err(Error::dims("symbol coefficients must share dimensions"));
        }
        Ok(SymbolPoly { coeffs, dom_dim, cod_dim })
    }

    pub fn constant(c: ComplexMatrix) -> Self {
        let (cod_dim, dom_dim) = c.shape();
        SymbolPoly { coeffs: vec![c], dom_dim, cod_dim }
    }

    /// `z^k · C`.
    pub fn monomial(c: ComplexMatrix, k: usize) -> Self {
        let (cod_dim, dom_dim) = c.shape();
        let mut coeffs = vec![ComplexMatrix::zeros(cod_dim, dom_dim); k];
        coeffs.push(c);
        SymbolPoly { coeffs, dom_dim, cod_dim }
    }

    /// `z · I_n`.
    pub fn shift(n: usize) -> Self {
        Self::monomial(ComplexMatrix::identity(n, n), 1)
    }

    /// The pencil `A + A* z`.
    pub fn pencil(a: &ComplexMatrix) -> Self {
        SymbolPoly { coeffs: vec![a.clone(), a.adjoint()], dom_dim: a.ncols(), cod_dim: a.nrows() }
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// Coefficient `C_k`, zero outside `0..=degree`.
    pub fn coeff(&self, k: isize) -> ComplexMatrix {
        if k < 0 || k as usize >= self.coeffs.len() {
            ComplexMatrix::zeros(self.cod_dim, self.dom_dim)
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dom_dim(&self) -> usize {
        self.dom_dim
    }

    pub fn cod_dim(&self) -> usize {
        self.cod_dim
    }

    pub fn eval(&self, z: Complex64) -> ComplexMatrix {
        // Horner
        let mut acc = ComplexMatrix::zeros(self.cod_dim, self.dom_dim);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Pointwise product `(self · rhs)(z)`.
    pub fn mul(&self, rhs: &SymbolPoly) -> Result<SymbolPoly> {
        if self.dom_dim != rhs.cod_dim {
            return Err(Error::dims("symbol product: inner dimensions differ"));
        }
        let deg = self.degree() + rhs.degree();
        let mut coeffs = vec![ComplexMatrix::zeros(self.cod_dim, rhs.dom_dim); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(SymbolPoly { coeffs, dom_dim: rhs.dom_dim, cod_dim: self.cod_dim })
    }
}

/// An operator on truncated Hardy space(s), possibly preceded by a plain
/// summand of dimension `head_dim` (as in `ℋ ⊕ H²`).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOp {
    pub matrix: ComplexMatrix,
    /// Codomain block size.
    pub block_size: usize,
    /// Domain block size (differs from `block_size` for rectangular symbols).
    pub dom_block_size: usize,
    pub degree_lo: i64,
    pub degree_hi: i64,
    /// Largest degree on which the truncated identities hold exactly.
    pub interior_hi: i64,
    pub head_dim: usize,
}

impl TruncatedOp {
    pub fn degrees(&self) -> usize {
        (self.degree_hi - self.degree_lo + 1) as usize
    }

    /// Number of leading coordinates covered by the interior window.
    pub fn interior_dim(&self) -> usize {
        self.head_dim + self.dom_block_size * ((self.interior_hi - self.degree_lo + 1).max(0) as usize)
    }

    /// Block of the Hardy part mapping degree `col` to degree `row`.
    pub fn block(&self, row: usize, col: usize) -> ComplexMatrix {
        let r0 = self.head_dim + row * self.block_size;
        let c0 = self.head_dim + col * self.dom_block_size;
        self.matrix.view((r0, c0), (self.block_size, self.dom_block_size)).into_owned()
    }
}

/// Lower block-triangular block-Toeplitz matrix of `M_φ` on degrees `0..=n`.
pub fn build_mult_op(phi: &SymbolPoly, n: usize) -> Result<TruncatedOp> {
    let d = phi.degree();
    if n < d {
        return Err(Error::TruncationTooSmall { degree: n, required: d });
    }
    let (rb, cb) = (phi.cod_dim(), phi.dom_dim());
    let mut m = ComplexMatrix::zeros(rb * (n + 1), cb * (n + 1));
    for col in 0..=n {
        for (k, c) in phi.coeffs().iter().enumerate() {
            let row = col + k;
            if row > n {
                break;
            }
            m.view_mut((row * rb, col * cb), (rb, cb)).copy_from(c);
        }
    }
    Ok(TruncatedOp {
        matrix: m,
        block_size: rb,
        dom_block_size: cb,
        degree_lo: 0,
        degree_hi: n as i64,
        interior_hi: (n - d) as i64,
        head_dim: 0,
    })
}

/// Truncated `M_z` on `H²_{ℂ^b}` with degrees `0..=n`.
pub fn shift_op(block: usize, n: usize) -> TruncatedOp {
    build_mult_op(&SymbolPoly::shift(block), n.max(1)).expect("degree 1 symbol fits n ≥ 1")
}

/// The pure Γ-isometry model `(M_{A + A*z}, M_z)` truncated to degrees `0..=n`.
///
/// The returned pair carries the interior window of degrees `0..=n−1`.
pub fn gamma_isometry_model(a: &ComplexMatrix, n: usize) -> Result<OperatorPair> {
    if a.nrows() != a.ncols() {
        return Err(Error::dims("model symbol must be square"));
    }
    if n < 1 {
        return Err(Error::TruncationTooSmall { degree: n, required: 1 });
    }
    let s = build_mult_op(&SymbolPoly::pencil(a), n)?;
    let p = shift_op(a.nrows(), n);
    OperatorPair::with_interior(s.matrix, p.matrix, a.nrows() * n)
}

/// `P_Q T|_Q = Q* T Q` for an orthonormal basis `Q`.
pub fn compress(op: &ComplexMatrix, basis: &ComplexMatrix) -> Result<ComplexMatrix> {
    if op.nrows() != op.ncols() || op.ncols() != basis.nrows() {
        return Err(Error::dims(format!(
            "compress: operator is {}×{}, basis has {} rows",
            op.nrows(),
            op.ncols(),
            basis.nrows()
        )));
    }
    Ok(basis.adjoint() * op * basis)
}

/// `P_ℂ ⊗ A`: `A` on the constant functions, zero on higher degrees.
pub fn pc_tensor(a: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let b = a.nrows();
    let mut m = ComplexMatrix::from_element(b * (n + 1), b * (n + 1), ZERO);
    m.view_mut((0, 0), (b, b)).copy_from(a);
    m
}

/// `I ⊗ A`: `A` acting coefficient-wise on degrees `0..=n`.
pub fn constant_op(a: &ComplexMatrix, n: usize) -> ComplexMatrix {
    build_mult_op(&SymbolPoly::constant(a.clone()), n).expect("degree 0").matrix
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real, op_norm, random_gaussian, Tolerance};
    use crate::numrad::numerical_radius;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn window(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
        m.view((0, 0), (k, k)).into_owned()
    }

    #[test]
    fn scalar_shift() {
        let op = build_mult_op(&SymbolPoly::shift(1), 2).unwrap();
        assert_eq!(op.matrix, from_real(3, 3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]));
        assert_eq!(op.interior_hi, 1);
    }

    #[test]
    fn constant_symbol_is_block_diagonal() {
        let c = from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let op = build_mult_op(&SymbolPoly::constant(c.clone()), 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { c.clone() } else { ComplexMatrix::zeros(2, 2) };
                assert_eq!(op.block(i, j), expect);
            }
        }
    }

    #[test]
    fn pencil_structure() {
        let a = from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let op = build_mult_op(&SymbolPoly::pencil(&a), 1).unwrap();
        assert_eq!(op.block(0, 0), a);
        assert_eq!(op.block(1, 0), a.adjoint());
        assert_eq!(op.block(1, 1), a);
        assert_eq!(op.block(0, 1), ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn truncation_too_small() {
        let phi = SymbolPoly::monomial(ComplexMatrix::identity(1, 1), 3);
        assert!(matches!(build_mult_op(&phi, 2), Err(Error::TruncationTooSmall { degree: 2, required: 3 })));
    }

    #[test]
    fn model_examples() {
        let pair = gamma_isometry_model(&ComplexMatrix::zeros(1, 1), 3).unwrap();
        assert_eq!(op_norm(pair.s()), 0.0);
        assert_eq!(pair.p(), &shift_op(1, 3).matrix);

        let pair = gamma_isometry_model(&ComplexMatrix::identity(1, 1), 3).unwrap();
        // S e_k = e_k + e_{k+1}
        for k in 0..3 {
            assert_eq!(pair.s()[(k, k)].re, 1.0);
            assert_eq!(pair.s()[(k + 1, k)].re, 1.0);
        }

        let a = from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let pair = gamma_isometry_model(&a, 3).unwrap();
        let s = pair.s();
        let p = pair.p();
        let diff = s - s.adjoint() * p;
        assert!(op_norm(&window(&diff, 6)) == 0.0);
    }

    #[test]
    fn compress_examples() {
        let shift = shift_op(1, 2).matrix;
        let full = ComplexMatrix::identity(3, 3);
        assert_eq!(compress(&shift, &full).unwrap(), shift);
        let e0 = full.columns(0, 1).into_owned();
        assert_eq!(compress(&shift, &e0).unwrap()[(0, 0)].norm(), 0.0);
        let e01 = full.columns(0, 2).into_owned();
        assert_eq!(compress(&shift, &e01).unwrap(), from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]));
        assert!(matches!(compress(&shift, &ComplexMatrix::identity(2, 2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pc_tensor_examples() {
        let id = ComplexMatrix::identity(2, 2);
        let m = pc_tensor(&id, 1);
        let mut expect = ComplexMatrix::zeros(4, 4);
        expect.view_mut((0, 0), (2, 2)).copy_from(&id);
        assert_eq!(m, expect);
        assert_eq!(op_norm(&pc_tensor(&ComplexMatrix::zeros(2, 2), 3)), 0.0);
        let a = from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(pc_tensor(&a, 0), a);
    }

    #[test]
    fn multiplicativity_on_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = SymbolPoly::new((0..3).map(|_| random_gaussian(2, 2, &mut rng)).collect()).unwrap();
        let psi = SymbolPoly::new((0..2).map(|_| random_gaussian(2, 2, &mut rng)).collect()).unwrap();
        let n = 8;
        let prod = build_mult_op(&phi.mul(&psi).unwrap(), n).unwrap().matrix;
        let composed = build_mult_op(&phi, n).unwrap().matrix * build_mult_op(&psi, n).unwrap().matrix;
        let limit = n - phi.degree() - psi.degree();
        for row in 0..=n {
            for col in 0..=n {
                if row + col <= limit {
                    let a = prod.view((2 * row, 2 * col), (2, 2)).into_owned();
                    let b = composed.view((2 * row, 2 * col), (2, 2)).into_owned();
                    assert!(op_norm(&(a - b)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn model_identities_on_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tol = Tolerance::default();
        for dim in 1..4 {
            let g = random_gaussian(dim, dim, &mut rng);
            let a = g.scale(1.0 / numerical_radius(&g, &tol).value);
            let n = 5;
            let pair = gamma_isometry_model(&a, n).unwrap();
            let (s, p) = (pair.s(), pair.p());
            let k = dim * n;
            let ptp = p.adjoint() * p;
            assert!(op_norm(&(window(&ptp, k) - ComplexMatrix::identity(k, k))) < 1e-14);
            assert!(op_norm(&window(&(s * p - p * s), k)) < 1e-14);
            assert!(op_norm(&window(&(s - s.adjoint() * p), k)) < 1e-14);
            assert!(op_norm(s) <= 2.0 + 1e-9);
            let defect = s.adjoint() - s * p.adjoint();
            assert!(op_norm(&window(&(defect - pc_tensor(&a.adjoint(), n)), k)) < 1e-14);
        }
    }

    #[test]
    fn eval_matches_coefficients() {
        let a = from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let phi = SymbolPoly::pencil(&a);
        let z = Complex64::new(0.3, -0.4);
        assert!(op_norm(&(phi.eval(z) - (&a + a.adjoint() * z))) < 1e-15);
    }
}
