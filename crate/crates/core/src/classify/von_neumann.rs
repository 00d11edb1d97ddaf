//! Sampling check of `‖p(S, P)‖ ≤ sup_Γ |p|`.
//!
//! The supremum of a polynomial over Γ is attained on the distinguished
//! boundary `{(e^{iα} + e^{iβ}, e^{i(α+β)})}`, which is sampled on a grid and
//! refined by pattern search from every grid local maximum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::OperatorPair;
use crate::linalg::{c64, op_norm, ComplexMatrix, ONE};

/// Polynomial `Σ c_{ab} z₁^a z₂^b` in two variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiPoly {
    pub terms: Vec<(usize, usize, Complex64)>,
}

impl BiPoly {
    pub fn constant(c: Complex64) -> Self {
        BiPoly { terms: vec![(0, 0, c)] }
    }

    pub fn monomial(a: usize, b: usize) -> Self {
        BiPoly { terms: vec![(a, b, ONE)] }
    }

    /// All monomials of total degree ≤ `degree` with coefficients uniform in
    /// the complex unit box.
    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        let mut terms = Vec::new();
        for total in 0..=degree {
            for a in 0..=total {
                let c = c64(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
                terms.push((a, total - a, c));
            }
        }
        BiPoly { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|&(a, b, _)| a + b).max().unwrap_or(0)
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.terms.iter().map(|&(a, b, c)| c * z1.powu(a as u32) * z2.powu(b as u32)).sum()
    }

    /// `p(S, P)` for commuting `S`, `P`.
    pub fn eval_pair(&self, s: &ComplexMatrix, p: &ComplexMatrix) -> ComplexMatrix {
        let n = s.nrows();
        let deg = self.degree();
        let mut s_pow = vec![ComplexMatrix::identity(n, n)];
        let mut p_pow = vec![ComplexMatrix::identity(n, n)];
        for k in 1..=deg {
            s_pow.push(&s_pow[k - 1] * s);
            p_pow.push(&p_pow[k - 1] * p);
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for &(a, b, c) in &self.terms {
            out += (&s_pow[a] * &p_pow[b]) * c;
        }
        out
    }

    fn on_torus(&self, alpha: f64, beta: f64) -> f64 {
        let (u, v) = (Complex64::from_polar(1.0, alpha), Complex64::from_polar(1.0, beta));
        self.eval(u + v, u * v).norm()
    }
}

/// `sup |p|` over the distinguished boundary of Γ using a `grid × grid`
/// angle grid and local refinement.
pub fn sup_on_distinguished_boundary(poly: &BiPoly, grid: usize) -> f64 {
    let g = grid.max(1);
    let step = 2.0 * PI / g as f64;
    let vals: Vec<f64> = (0..g * g).map(|idx| poly.on_torus((idx / g) as f64 * step, (idx % g) as f64 * step)).collect();
    let at = |j: usize, k: usize| vals[(j % g) * g + (k % g)];
    let mut best = vals.iter().cloned().fold(0.0, f64::max);
    let mut starts: Vec<(usize, usize)> = Vec::new();
    for j in 0..g {
        for k in 0..g {
            let v = at(j, k);
            let is_peak = (0..3).all(|dj| (0..3).all(|dk| at(j + g + dj - 1, k + g + dk - 1) <= v));
            if is_peak {
                starts.push((j, k));
            }
        }
    }
    starts.sort_by(|x, y| at(y.0, y.1).partial_cmp(&at(x.0, x.1)).unwrap_or(std::cmp::Ordering::Equal));
    starts.truncate(8);
    for (j, k) in starts {
        best = best.max(pattern_search(poly, j as f64 * step, k as f64 * step, step));
    }
    best
}

fn pattern_search(poly: &BiPoly, mut a: f64, mut b: f64, mut h: f64) -> f64 {
    let mut f = poly.on_torus(a, b);
    const DIRS: [(f64, f64); 8] =
        [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)];
    while h > 1e-10 {
        let mut moved = false;
        for (da, db) in DIRS {
            let (na, nb) = (a + da * h, b + db * h);
            let nf = poly.on_torus(na, nb);
            if nf > f {
                a = na;
                b = nb;
                f = nf;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    f
}

/// `sup_Γ |p| − ‖p(S, P)‖` for one polynomial.
pub fn polynomial_margin(pair: &OperatorPair, poly: &BiPoly, grid: usize) -> f64 {
    sup_on_distinguished_boundary(poly, grid) - op_norm(&poly.eval_pair(pair.s(), pair.p()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VonNeumannOutcome {
    pub min_margin: f64,
    pub witness: BiPoly,
}

/// Polynomials with their precomputed suprema over Γ, reusable across pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct VonNeumannProbes {
    polys: Vec<BiPoly>,
    sups: Vec<f64>,
}

impl VonNeumannProbes {
    /// The coordinate probes `z₁`, `z₂` followed by `trials` random
    /// polynomials of total degree ≤ `degree`.
    pub fn new<R: Rng + ?Sized>(degree: usize, trials: usize, grid: usize, rng: &mut R) -> Self {
        let mut polys = Vec::with_capacity(trials + 2);
        if degree >= 1 {
            polys.push(BiPoly::monomial(1, 0));
            polys.push(BiPoly::monomial(0, 1));
        }
        polys.extend((0..trials).map(|_| BiPoly::random(degree, rng)));
        if polys.is_empty() {
            polys.push(BiPoly::constant(ONE));
        }
        let sups = polys.iter().map(|p| sup_on_distinguished_boundary(p, grid)).collect();
        VonNeumannProbes { polys, sups }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn min_margin(&self, pair: &OperatorPair) -> VonNeumannOutcome {
        let mut best = VonNeumannOutcome { min_margin: f64::INFINITY, witness: self.polys[0].clone() };
        for (poly, sup) in self.polys.iter().zip(&self.sups) {
            let m = sup - op_norm(&poly.eval_pair(pair.s(), pair.p()));
            if m < best.min_margin {
                best = VonNeumannOutcome { min_margin: m, witness: poly.clone() };
            }
        }
        best
    }
}

/// Minimum of [`polynomial_margin`] over the coordinate probes `z₁`, `z₂`
/// followed by `trials` random polynomials of total degree ≤ `degree`.
pub fn von_neumann_margin<R: Rng + ?Sized>(
    pair: &OperatorPair,
    degree: usize,
    trials: usize,
    grid: usize,
    rng: &mut R,
) -> VonNeumannOutcome {
    VonNeumannProbes::new(degree, trials, grid, rng).min_margin(pair)
}
