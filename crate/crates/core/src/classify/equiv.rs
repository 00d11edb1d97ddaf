//! Joint unitary equivalence of operator tuples via traces of words.
//!
//! Two tuples `(T_1..T_k)` and `(T'_1..T'_k)` are unitarily equivalent iff
//! `tr w(T) = tr w(T')` for every word `w` in the letters `T_i, T_i*`.
//! Instead of enumerating the exponentially many words, words are grown
//! breadth-first in the joint algebra `M_n ⊕ M_m`: a word is extended only
//! if its value is linearly independent of the words already kept, which
//! covers the span of all words of each length with at most `n² + m²`
//! kept words.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Relative size of the new component below which a word is treated as
/// dependent on the words already kept.
const INDEPENDENCE_TOL: f64 = 1e-8;
/// Words smaller than this multiple of their norm bound are treated as zero.
const ZERO_WORD: f64 = 1e-10;

fn check_tuple(ops: &[ComplexMatrix], label: &str) -> Result<usize> {
    let n = ops.first().map(|m| m.nrows()).unwrap_or(0);
    if ops.iter().any(|m| m.shape() != (n, n)) {
        return Err(Error::dims(format!("{label}: operators must be square of one size")));
    }
    Ok(n)
}

fn frob(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn trace(m: &ComplexMatrix) -> Complex64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

struct JointSpan {
    basis: Vec<Vec<Complex64>>,
}

impl JointSpan {
    /// Adds `a ⊕ b` if independent; returns whether it was added.
    fn try_add(&mut self, a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        let mut v: Vec<Complex64> = a.iter().chain(b.iter()).cloned().collect();
        let norm0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            return false;
        }
        v.iter_mut().for_each(|z| *z /= norm0);
        // classical Gram–Schmidt, applied twice
        for _ in 0..2 {
            for q in &self.basis {
                let dot: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                v.iter_mut().zip(q).for_each(|(y, x)| *y -= dot * x);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= INDEPENDENCE_TOL {
            return false;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        self.basis.push(v);
        true
    }
}

/// Largest normalized trace discrepancy over words of length at most
/// `max_word_len` (default `2n²`).
///
/// A word `w = u·ℓ` is built from a kept word `u` and a letter `ℓ`; its
/// discrepancy is `|tr w(T) − tr w(T')| / (√n · σ)` with
/// `σ = max(‖u(T)‖_F, ‖u(T')‖_F) · max(‖ℓ(T)‖_F, ‖ℓ(T')‖_F)`, which bounds
/// both Frobenius norms, so the value lies in `[0, 2]`. Normalizing by `σ`
/// rather than by the word itself keeps rounding noise in words that vanish
/// (such as powers of a nilpotent) from being blown up. Words below
/// `1e-10 · σ` count as zero and are not extended. Tuples of different
/// dimension get `+∞`.
pub fn trace_word_discrepancy(
    left: &[ComplexMatrix],
    right: &[ComplexMatrix],
    max_word_len: Option<usize>,
) -> Result<f64> {
    if left.len() != right.len() {
        return Err(Error::dims("tuples have different lengths"));
    }
    let n = check_tuple(left, "left tuple")?;
    let m = check_tuple(right, "right tuple")?;
    if n != m {
        return Ok(f64::INFINITY);
    }
    if n == 0 {
        return Ok(0.0);
    }
    let max_len = max_word_len.unwrap_or(2 * n * n);
    let letters: Vec<(ComplexMatrix, ComplexMatrix)> = left
        .iter()
        .zip(right)
        .flat_map(|(a, b)| [(a.clone(), b.clone()), (a.adjoint(), b.adjoint())])
        .collect();

    let root_n = (n as f64).sqrt();

    let mut span = JointSpan { basis: Vec::new() };
    let id = ComplexMatrix::identity(n, n);
    span.try_add(&id, &id);
    let mut frontier = vec![(id.clone(), id)];
    let mut worst = 0.0f64;
    for _len in 1..=max_len {
        let mut next = Vec::new();
        for (a, b) in &frontier {
            let word_scale = frob(a).max(frob(b));
            for (la, lb) in &letters {
                let sigma = word_scale * frob(la).max(frob(lb));
                if sigma == 0.0 {
                    continue;
                }
                let wa = a * la;
                let wb = b * lb;
                worst = worst.max((trace(&wa) - trace(&wb)).norm() / (root_n * sigma));
                let size = frob(&wa).max(frob(&wb));
                if size > ZERO_WORD * sigma && span.try_add(&wa, &wb) {
                    // keep magnitudes bounded; trace relations are scale-invariant
                    next.push((wa.unscale(size), wb.unscale(size)));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(worst)
}

/// `true` when every word trace agrees within `tol` (see
/// [`trace_word_discrepancy`]). With a word-length cap below `2n²` a `false`
/// answer is still conclusive while `true` is only necessary.
pub fn joint_unitary_equiv(
    left: &[ComplexMatrix],
    right: &[ComplexMatrix],
    max_word_len: Option<usize>,
    tol: f64,
) -> Result<bool> {
    Ok(trace_word_discrepancy(left, right, max_word_len)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, from_real, random_gaussian, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_and_conjugated_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_gaussian(3, 3, &mut rng);
        let p = random_gaussian(3, 3, &mut rng);
        let pair = [s.clone(), p.clone()];
        assert!(joint_unitary_equiv(&pair, &pair, None, 1e-10).unwrap());
        let u = random_unitary(3, &mut rng);
        let conj = [u.adjoint() * &s * &u, u.adjoint() * &p * &u];
        assert!(trace_word_discrepancy(&pair, &conj, None).unwrap() < 1e-12);
    }

    #[test]
    fn different_singletons() {
        let a = [diag_real(&[1.0, 0.0])];
        let b = [diag_real(&[0.5, 0.0])];
        assert!(!joint_unitary_equiv(&a, &b, Some(1), 1e-8).unwrap());
    }

    #[test]
    fn similar_but_not_unitarily_equivalent() {
        // Same spectrum and trace of every power, but one is normal and the
        // other is not: words with adjoints tell them apart.
        let a = [from_real(2, 2, &[1.0, 0.0, 0.0, 2.0])];
        let b = [from_real(2, 2, &[1.0, 1.0, 0.0, 2.0])];
        assert!(!joint_unitary_equiv(&a, &b, None, 1e-8).unwrap());
    }

    #[test]
    fn pairs_distinguished_jointly_but_not_individually() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = random_gaussian(2, 2, &mut rng);
        let p = diag_real(&[1.0, -1.0]);
        let u = random_unitary(2, &mut rng);
        // S conjugated alone, P left fixed
        let left = [s.clone(), p.clone()];
        let right = [u.adjoint() * &s * &u, p];
        assert!(!joint_unitary_equiv(&left, &right, None, 1e-8).unwrap());
    }

    #[test]
    fn dimension_handling() {
        let a = [ComplexMatrix::identity(2, 2)];
        let b = [ComplexMatrix::identity(3, 3)];
        assert!(!joint_unitary_equiv(&a, &b, None, 1e-8).unwrap());
        let bad = [ComplexMatrix::identity(2, 2), ComplexMatrix::identity(3, 3)];
        assert!(trace_word_discrepancy(&bad, &bad, None).is_err());
        assert!(trace_word_discrepancy(&a, &bad, None).is_err());
    }
}
