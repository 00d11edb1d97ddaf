//! Seeded generators and the property suite.
//!
//! Γ-contractions are generated with known provenance: compressions of the
//! pure Γ-isometry `(M_{A + A*z}, M_z)` to subspaces that are co-invariant
//! for both operators. Two families are used:
//!
//! * spans `{S*^a P*^b v}` of polynomial vectors (nilpotent `P`);
//! * spans of kernel functions `k_w ⊗ ℂ^m`, on which `M_z*` acts as `w̄`
//!   (non-nilpotent `P` with spectrum `{w}`).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blh::{blaschke_factor, blh_solve, invariance_check, BlhOutcome, BlhProblem};
use crate::classify::{
    classify, is_gamma_contraction, joint_unitary_equiv, recover_pure_symbol, Kind, OperatorPair, VonNeumannProbes,
};
use crate::defect::{build_model_space, default_truncation, delta_eval, pi_nf_matrix, theta_eval, theta_taylor, scalar};
use crate::dilation::{compressed_scalar, factorization_check, gamma_unitary_synth, nf_ay_build, schaffer_build};
use crate::error::Result;
use crate::gamma_point::{in_gamma, in_gamma_via_beta, symmetrize, DEFAULT_POINT_TOL};
use crate::hardy::{compress, gamma_isometry_model, shift_op, SymbolPoly};
use crate::linalg::{
    c64, diag, direct_sum, from_real, op_norm, random_gaussian, random_unitary, random_with_norm, range_basis,
    ComplexMatrix, Tolerance,
};
use crate::numrad::numerical_radius;

/// Truncation used for kernel-function compressions (`|w| ≤ 0.7`).
const KERNEL_TRUNCATION: usize = 100;
/// Trace-word discrepancy below which two pairs count as equivalent.
pub const EQUIV_TOL: f64 = 1e-6;

/// Random matrix scaled to numerical radius `wr`.
pub fn random_with_wr<R: Rng + ?Sized>(n: usize, wr: f64, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian(n, n, rng);
    let w = numerical_radius(&g, &Tolerance::default()).value;
    if w == 0.0 {
        return g;
    }
    g * Complex64::from(wr / w)
}

/// Compression of the truncated model `(M_{A+A*z}, M_z)` (degrees `0..=L+1`)
/// to the smallest subspace containing `starts` and invariant under `S*`, `P*`.
/// The `starts` columns must live in degrees `0..=L`.
pub fn coinvariant_compression(a: &ComplexMatrix, degree: usize, starts: &ComplexMatrix) -> Result<OperatorPair> {
    let model = gamma_isometry_model(a, degree + 1)?;
    let (s_adj, p_adj) = (model.s().adjoint(), model.p().adjoint());
    let tol = Tolerance::default();
    if starts.nrows() > a.nrows() * (degree + 1) {
        return Err(crate::error::Error::dims("start vectors exceed the degree bound"));
    }
    let mut padded = ComplexMatrix::zeros(model.dim(), starts.ncols());
    padded.view_mut((0, 0), starts.shape()).copy_from(starts);
    let mut basis = range_basis(&padded, &tol);
    loop {
        let grown = hcat(&[basis.clone(), &s_adj * &basis, &p_adj * &basis]);
        let next = range_basis(&grown, &tol);
        if next.ncols() == basis.ncols() {
            break;
        }
        basis = next;
    }
    OperatorPair::new(compress(model.s(), &basis)?, compress(model.p(), &basis)?)
}

/// Compression of `(M_{A+A*z}, M_z)` to `span{k_w ⊗ ℂ^m : w ∈ points}`.
pub fn kernel_compression(a: &ComplexMatrix, points: &[Complex64]) -> Result<OperatorPair> {
    let m = a.nrows();
    let n = KERNEL_TRUNCATION;
    let model = gamma_isometry_model(a, n)?;
    let mut cols = ComplexMatrix::zeros(m * (n + 1), m * points.len());
    for (i, w) in points.iter().enumerate() {
        let mut wk = Complex64::new(1.0, 0.0);
        for k in 0..=n {
            for j in 0..m {
                cols[(k * m + j, i * m + j)] = wk;
            }
            wk *= w.conj();
        }
    }
    let basis = range_basis(&cols, &Tolerance::default());
    OperatorPair::new(compress(model.s(), &basis)?, compress(model.p(), &basis)?)
}

fn hcat(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let rows = blocks[0].nrows();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut c0 = 0;
    for b in blocks {
        out.view_mut((0, c0), (rows, b.ncols())).copy_from(b);
        c0 += b.ncols();
    }
    out
}

fn separated_points<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = Vec::new();
    while pts.len() < count {
        let w = Complex64::from_polar(rng.random_range(0.0..0.7), rng.random_range(0.0..2.0 * PI));
        if pts.iter().all(|p| (p - w).norm() >= 0.2) {
            pts.push(w);
        }
    }
    pts
}

/// A Γ-contraction of dimension exactly `n` (1 ≤ n ≤ 4), scrambled by a
/// random unitary.
pub fn gamma_contraction_of_dim<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<OperatorPair> {
    let wr = rng.random_range(0.2..=1.0);
    let pair = if rng.random_bool(0.5) {
        // kernel family: m·r = n
        let divisors: Vec<usize> = (1..=n).filter(|m| n % m == 0).collect();
        let m = divisors[rng.random_range(0..divisors.len())];
        let a = random_with_wr(m, wr, rng);
        kernel_compression(&a, &separated_points(n / m, rng))?
    } else {
        // polynomial family on degrees 0..=n−1 with scalar symbol; the
        // Krylov span of a generic vector is the whole space
        let a = random_with_wr(1, wr, rng);
        let v = random_gaussian(n, 1, rng);
        coinvariant_compression(&a, n - 1, &v)?
    };
    let u = random_unitary(pair.dim(), rng);
    pair.conjugate(&u)
}

/// A Γ-contraction of dimension between 1 and 4 from either family.
pub fn random_gamma_contraction<R: Rng + ?Sized>(rng: &mut R) -> Result<OperatorPair> {
    let wr = rng.random_range(0.2..=1.0);
    let pair = match rng.random_range(0..3) {
        0 => {
            let m = rng.random_range(1..=2);
            let a = random_with_wr(m, wr, rng);
            let count = rng.random_range(1..=(4 / m));
            kernel_compression(&a, &separated_points(count, rng))?
        }
        1 => {
            let a = random_with_wr(1, wr, rng);
            let degree = rng.random_range(1..=3);
            let v = random_gaussian(degree + 1, 1, rng);
            coinvariant_compression(&a, degree, &v)?
        }
        _ => {
            // ℂ²-valued polynomials of degree ≤ 1, one start vector
            let a = random_with_wr(2, wr, rng);
            let v = random_gaussian(4, 1, rng);
            coinvariant_compression(&a, 1, &v)?
        }
    };
    let u = random_unitary(pair.dim(), rng);
    pair.conjugate(&u)
}

pub fn gamma_contraction_suite<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Result<Vec<OperatorPair>> {
    (0..count).map(|_| random_gamma_contraction(rng)).collect()
}

/// `W* diag(e^{iα}) W`, `W* diag(e^{iβ}) W`: commuting unitaries.
pub fn random_commuting_unitaries<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (ComplexMatrix, ComplexMatrix) {
    let phase = |rng: &mut R| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    let d1: Vec<Complex64> = (0..n).map(|_| phase(rng)).collect();
    let d2: Vec<Complex64> = (0..n).map(|_| phase(rng)).collect();
    let w = random_unitary(n, rng);
    (w.adjoint() * diag(&d1) * &w, w.adjoint() * diag(&d2) * &w)
}

/// One BLH instance: an inner polynomial `Θ` adapted to a block structure of
/// `A'`, then either the transported symbol or a random one.
pub struct BlhInstance {
    pub a: ComplexMatrix,
    pub theta: SymbolPoly,
    /// `true` when `A` was built to satisfy the intertwining.
    pub transported: bool,
}

pub fn random_blh_instance<R: Rng + ?Sized>(rng: &mut R) -> BlhInstance {
    let tol = Tolerance::default();
    let m = rng.random_range(1..=3);
    // A' block diagonal over ℂ^m = E₁ ⊕ E₂ (E₂ possibly empty)
    let split = rng.random_range(1..=m);
    let wr = rng.random_range(0.1..=1.0);
    let a1 = random_with_wr(split, wr, rng);
    let a2 = random_with_wr(m - split, rng.random_range(0.1..=1.0), rng);
    let a_block = direct_sum(&a1, &a2);
    let proj_e1 = {
        let mut e = ComplexMatrix::zeros(m, split);
        e.view_mut((0, 0), (split, split)).fill_with_identity();
        e
    };
    let w = random_unitary(m, rng);
    let kind = rng.random_range(0..4);
    let (inner, b_dom): (SymbolPoly, usize) = match kind {
        0 => {
            // z^k on E₁, z^j on E₂
            let (k, j) = (rng.random_range(0..=2), rng.random_range(0..=2));
            let deg = k.max(j);
            let mut coeffs = vec![ComplexMatrix::zeros(m, m); deg + 1];
            for i in 0..m {
                let p = if i < split { k } else { j };
                coeffs[p][(i, i)] = c64(1.0, 0.0);
            }
            (SymbolPoly::new(coeffs).expect("shapes"), m)
        }
        1 => {
            // product of Blaschke factors at reducing subspaces
            let f1 = blaschke_factor(&proj_e1, &tol);
            let f2 = if rng.random_bool(0.5) { SymbolPoly::shift(m) } else { f1.clone() };
            (f1.mul(&f2).expect("square"), m)
        }
        2 => {
            // isometry onto E₁ times z^k
            let k = rng.random_range(0..=2);
            (SymbolPoly::monomial(proj_e1.clone(), k), split)
        }
        _ => {
            // Blaschke factor at a random (generally non-reducing) direction
            let e = random_gaussian(m, 1, rng);
            (blaschke_factor(&e, &tol), m)
        }
    };
    let v = random_unitary(b_dom, rng);
    let theta = SymbolPoly::constant(w.clone())
        .mul(&inner)
        .and_then(|t| t.mul(&SymbolPoly::constant(v)))
        .expect("dimensions chain");
    let transported = kind != 3 && rng.random_bool(0.5);
    let a = if transported { &w * &a_block * w.adjoint() } else { random_with_wr(m, rng.random_range(0.1..=1.0), rng) };
    BlhInstance { a, theta, transported }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    fn new(id: usize, name: &'static str, passed: bool, detail: String) -> Self {
        CriterionOutcome { id, name, passed, detail }
    }

    pub fn line(&self) -> String {
        format!("[{}] {:>2} {:<34} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

pub const CRITERIA: [&str; 12] = [
    "scalar oracle equivalence",
    "gamma-unitary theorem",
    "pure-model symbol recovery",
    "fundamental-operator criterion",
    "von Neumann inequality",
    "characteristic function",
    "NF model",
    "NF-AY model and compressed scalar",
    "Schaffer dilation",
    "BLH theorem",
    "complete invariant",
    "dilation factorization",
];

/// Per-criterion seeds, all drawn from one generator seeded by `seed`.
pub fn criterion_seeds(seed: u64) -> [u64; 12] {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut out = [0u64; 12];
    for s in out.iter_mut() {
        *s = master.next_u64();
    }
    out
}

pub fn run_criterion(id: usize, seed: u64) -> CriterionOutcome {
    let sub = criterion_seeds(seed)[id - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(sub);
    let name = CRITERIA[id - 1];
    let result = match id {
        1 => scalar_oracle(&mut rng),
        2 => gamma_unitary_theorem(&mut rng),
        3 => pure_symbol_recovery(&mut rng),
        4 => fundamental_criterion(&mut rng),
        5 => von_neumann(&mut rng),
        6 => characteristic_function(&mut rng),
        7 => nf_model(&mut rng),
        8 => nf_ay_model(&mut rng),
        9 => schaffer_dilation(&mut rng),
        10 => blh_theorem(&mut rng),
        11 => complete_invariant(&mut rng),
        12 => dilation_factorization(&mut rng),
        _ => unreachable!("criteria are numbered 1..=12"),
    };
    match result {
        Ok((passed, detail)) => CriterionOutcome::new(id, name, passed, detail),
        Err(e) => CriterionOutcome::new(id, name, false, format!("error {}: {e}", e.code())),
    }
}

pub fn run_suite(seed: u64) -> Vec<CriterionOutcome> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, seed)).collect()
}

type Verdict = Result<(bool, String)>;

fn scalar_oracle(rng: &mut ChaCha8Rng) -> Verdict {
    let mut disagree = 0;
    let mut beta_disagree = 0;
    let mut beta_checked = 0;
    for _ in 0..10_000 {
        let mut draw = || Complex64::from_polar(rng.random_range(0.0..=1.5), rng.random_range(0.0..2.0 * PI));
        let (z1, z2) = (draw(), draw());
        let pt = symmetrize(z1, z2);
        let inside = in_gamma(pt, DEFAULT_POINT_TOL);
        if inside != (z1.norm() <= 1.0 && z2.norm() <= 1.0) {
            disagree += 1;
        }
        if pt.p.norm() <= 1.0 - 1e-6 {
            beta_checked += 1;
            if in_gamma_via_beta(pt, DEFAULT_POINT_TOL) != inside {
                beta_disagree += 1;
            }
        }
    }
    Ok((
        disagree == 0 && beta_disagree == 0,
        format!("{disagree} disagreements / 10000; beta: {beta_disagree} / {beta_checked}"),
    ))
}

fn gamma_unitary_theorem(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let (mut unitary, mut flipped) = (0, 0);
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let (u1, u2) = random_commuting_unitaries(n, rng);
        let pair = gamma_unitary_synth(&u1, &u2, &tol)?;
        if classify(&pair, &tol)?.kind == Kind::GammaUnitary {
            unitary += 1;
        }
        let damped = OperatorPair::new(pair.s().clone(), pair.p() * Complex64::from(0.99))?;
        if classify(&damped, &tol)?.kind != Kind::GammaUnitary {
            flipped += 1;
        }
    }
    Ok((unitary == 100 && flipped == 100, format!("{unitary}/100 gamma-unitary, {flipped}/100 flipped by 0.99·P")))
}

fn pure_symbol_recovery(rng: &mut ChaCha8Rng) -> Verdict {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(1..=4);
        let a = random_with_wr(n, rng.random_range(0.0..=1.0), rng);
        let model = gamma_isometry_model(&a, rng.random_range(2..=6))?;
        let recovered = recover_pure_symbol(&model, model.dim() / n - 1)?;
        worst = worst.max(op_norm(&(recovered - &a)));
    }
    Ok((worst <= 1e-12, format!("max error {worst:.3e} over 50 symbols")))
}

fn fundamental_criterion(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let suite = gamma_contraction_suite(100, rng)?;
    let (mut ok, mut worst_res, mut worst_w) = (0, 0.0f64, 0.0f64);
    for pair in &suite {
        let r = classify(pair, &tol)?;
        worst_res = worst_res.max(r.fundamental_residual);
        worst_w = worst_w.max(r.w_a);
        if r.kind == Kind::GammaContraction && r.fundamental_residual <= 1e-10 && r.w_a <= 1.0 + 1e-8 {
            ok += 1;
        }
    }
    let neg1 = OperatorPair::new(from_real(2, 2, &[1.2, 0.0, 0.0, 0.0]), ComplexMatrix::zeros(2, 2))?;
    let neg2 = OperatorPair::new(scalar(2.2), scalar(1.0))?;
    let negatives_ok = [neg1, neg2].iter().all(|p| is_gamma_contraction(p, &tol).kind == Kind::NotGamma);
    Ok((
        ok == 100 && negatives_ok,
        format!("{ok}/100 pass (max residual {worst_res:.2e}, max w(F) {worst_w:.6}); negatives rejected: {negatives_ok}"),
    ))
}

fn von_neumann(rng: &mut ChaCha8Rng) -> Verdict {
    let suite = gamma_contraction_suite(100, rng)?;
    let probes = VonNeumannProbes::new(3, 100, 64, rng);
    let worst = suite.iter().map(|p| probes.min_margin(p).min_margin).fold(f64::INFINITY, f64::min);
    let violation = probes.min_margin(&OperatorPair::new(scalar(2.2), scalar(1.0))?).min_margin;
    Ok((
        worst >= -1e-6 && violation <= -0.19,
        format!("min margin {worst:.3e} over 100 pairs; scalar violation margin {violation:.4}"),
    ))
}

fn characteristic_function(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let mut coeff_err: f64 = 0.0;
    for c in [0.3, 0.5, 0.9] {
        let t = theta_taylor(&scalar(c), 20, &tol)?;
        coeff_err = coeff_err.max((t.taylor.coeffs()[0][(0, 0)] + c).norm());
        for k in 1..=20 {
            let expect = (1.0 - c * c) * c.powi(k as i32 - 1);
            coeff_err = coeff_err.max((t.taylor.coeffs()[k][(0, 0)] - expect).norm());
        }
    }
    let (mut worst_theta, mut worst_delta) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let n = rng.random_range(1..=4);
        let p = random_with_norm(n, rng.random_range(0.05..0.99), rng);
        let t = theta_taylor(&p, 1, &tol)?;
        for j in 0..256 {
            let angle = 2.0 * PI * j as f64 / 256.0;
            worst_theta = worst_theta.max(op_norm(&theta_eval(&t, Complex64::from_polar(1.0, angle))?));
            worst_delta = worst_delta.max(op_norm(&delta_eval(&t, angle, &tol)?));
        }
    }
    Ok((
        coeff_err <= 1e-12 && worst_theta <= 1.0 + 1e-9 && worst_delta <= 1e-7,
        format!("Möbius error {coeff_err:.2e}; max ‖Θ‖ {worst_theta:.12}; max ‖Δ‖ {worst_delta:.2e}"),
    ))
}

fn nf_model(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let (mut dims_ok, mut equiv_ok) = (0, 0);
    let (mut worst_ratio, mut worst_pi) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let n = rng.random_range(1..=3);
        let p = random_with_norm(n, rng.random_range(0.1..=0.9), rng);
        let big_n = default_truncation(&p, &tol)?;
        let model = build_model_space(&p, big_n, &tol)?;
        if model.dim() == n {
            dims_ok += 1;
        }
        let pm = compress(&shift_op(model.block_size, big_n).matrix, &model.basis)?;
        let disc = crate::classify::trace_word_discrepancy(&[pm], &[p.clone()], None)?;
        worst_ratio = worst_ratio.max(disc / model.tolerance());
        if disc <= model.tolerance() {
            equiv_ok += 1;
        }
        let pi = pi_nf_matrix(&p, 32, &tol)?;
        let shift = shift_op(model.block_size, 32).matrix;
        worst_pi = worst_pi.max(op_norm(&(pi.adjoint() * shift * &pi - &p)));
    }
    Ok((
        dims_ok == 20 && equiv_ok == 20 && worst_pi <= 1e-5,
        format!(
            "dim match {dims_ok}/20, equivalence {equiv_ok}/20 (worst disc/tol {worst_ratio:.2e}); Π_NF residual {worst_pi:.2e}"
        ),
    ))
}

fn nf_ay_model(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let suite = gamma_contraction_suite(20, rng)?;
    let (mut ok, mut worst_ratio) = (0, 0.0f64);
    for pair in &suite {
        let model = nf_ay_build(pair, None, &tol)?;
        let cs = compressed_scalar(&model, &tol)?;
        let ratio = model.residual_s / model.tolerance();
        worst_ratio = worst_ratio.max(ratio).max(cs.residual / model.tolerance());
        if ratio <= 1.0 {
            ok += 1;
        }
    }
    let pair = OperatorPair::new(scalar(1.2), scalar(0.5))?;
    let model = nf_ay_build(&pair, Some(30), &tol)?;
    let cs = compressed_scalar(&model, &tol)?;
    let s_err = (model.s_model[(0, 0)] - 1.2).norm();
    let x_err = (cs.x[(0, 0)] - 0.8).norm();
    Ok((
        ok == 20 && s_err <= 1e-6 && x_err <= 1e-6,
        format!("round trip {ok}/20 (worst residual/tol {worst_ratio:.2e}); scalar: s err {s_err:.2e}, x err {x_err:.2e}"),
    ))
}

fn schaffer_dilation(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let suite = gamma_contraction_suite(100, rng)?;
    let (mut worst, mut isometries) = (0.0f64, 0);
    for pair in &suite {
        let sc = schaffer_build(pair, 8, &tol)?;
        worst = worst.max(sc.v_intertwining(pair.p())).max(sc.w_intertwining(pair.s()));
        if crate::classify::is_gamma_isometry(&sc.as_pair(), &tol).holds {
            isometries += 1;
        }
    }
    Ok((
        worst <= 1e-12 && isometries == 100,
        format!("max intertwining residual {worst:.2e}; Γ-isometry on window {isometries}/100"),
    ))
}

fn blh_theorem(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance { residual_tol: 1e-8, ..Tolerance::default() };
    let (mut agree, mut solved, mut worst_wb) = (0, 0, 0.0f64);
    for _ in 0..200 {
        let inst = random_blh_instance(rng);
        let prob = BlhProblem::new(inst.a.clone(), inst.theta.clone())?;
        let outcome = blh_solve(&prob, &tol);
        let inv = invariance_check(&inst.a, &inst.theta, inst.theta.degree() + 2, &tol)?;
        if outcome.solution().is_some() == inv.invariant {
            agree += 1;
        }
        if let Some(sol) = outcome.solution() {
            solved += 1;
            if numerical_radius(&inst.a, &tol).value <= 1.0 && prob.is_inner() {
                worst_wb = worst_wb.max(sol.w_b);
            }
        }
    }

    let a = random_gaussian(3, 3, rng);
    let shift = BlhProblem::new(a.clone(), SymbolPoly::shift(3))?;
    let shift_err = blh_solve(&shift, &tol).solution().map(|s| op_norm(&(&s.b - &a))).unwrap_or(f64::INFINITY);
    let w = random_unitary(3, rng);
    let conj = BlhProblem::new(a.clone(), SymbolPoly::constant(w.clone()))?;
    let conj_err = blh_solve(&conj, &tol)
        .solution()
        .map(|s| op_norm(&(&s.b - w.adjoint() * &a * &w)))
        .unwrap_or(f64::INFINITY);
    let counter = BlhProblem::new(
        from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]),
        SymbolPoly::new(vec![from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]), from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])])?,
    )?;
    let counter_res = match blh_solve(&counter, &tol) {
        BlhOutcome::NoSolution { residual, .. } => residual,
        BlhOutcome::Solved(_) => 0.0,
    };
    Ok((
        agree == 200 && shift_err <= 1e-12 && conj_err <= 1e-12 && counter_res >= 1.0 && worst_wb <= 1.0 + 1e-6,
        format!(
            "iff agreement {agree}/200 ({solved} solvable); zI err {shift_err:.1e}; W*AW err {conj_err:.1e}; \
             counterexample residual {counter_res:.3}; max w(B) {worst_wb:.6}"
        ),
    ))
}

fn complete_invariant(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let n = 3;
    let pairs: Vec<OperatorPair> = (0..50).map(|_| gamma_contraction_of_dim(n, rng)).collect::<Result<_>>()?;
    let conjugates: Vec<OperatorPair> =
        pairs.iter().map(|p| p.conjugate(&random_unitary(n, rng))).collect::<Result<_>>()?;
    // X lives in model coordinates, so it is paired with the model's P
    let scalar_pair = |pair: &OperatorPair| -> Result<[ComplexMatrix; 2]> {
        let model = nf_ay_build(pair, None, &tol)?;
        let x = compressed_scalar(&model, &tol)?.x;
        Ok([x, model.p_model])
    };
    let xs: Vec<[ComplexMatrix; 2]> = pairs.iter().map(scalar_pair).collect::<Result<_>>()?;
    let xs_conj: Vec<[ComplexMatrix; 2]> = conjugates.iter().map(scalar_pair).collect::<Result<_>>()?;
    let (mut matches, mut positives) = (0, 0);
    let total = 2 * pairs.len();
    for i in 0..pairs.len() {
        for j in [i, (i + 1) % pairs.len()] {
            let s_equiv = joint_unitary_equiv(
                &[pairs[i].s().clone(), pairs[i].p().clone()],
                &[conjugates[j].s().clone(), conjugates[j].p().clone()],
                None,
                EQUIV_TOL,
            )?;
            let x_equiv = joint_unitary_equiv(&xs[i], &xs_conj[j], None, EQUIV_TOL)?;
            if s_equiv {
                positives += 1;
            }
            if s_equiv == x_equiv {
                matches += 1;
            }
        }
    }
    Ok((matches == total, format!("{matches}/{total} verdicts match ({positives} equivalent pairs)")))
}

fn dilation_factorization(rng: &mut ChaCha8Rng) -> Verdict {
    let tol = Tolerance::default();
    let suite = gamma_contraction_suite(20, rng)?;
    let (mut worst_iso, mut worst_block) = (0.0f64, 0.0f64);
    let mut minimal = 0;
    for pair in &suite {
        let m = 2 * pair.dim() + 2;
        let sc = schaffer_build(pair, m + 2, &tol)?;
        let f = factorization_check(pair.p(), &sc.v.matrix, &sc.embed, m, &tol)?;
        worst_iso = worst_iso.max(f.isometry_residual);
        worst_block = worst_block.max(f.block_residual);
        if f.domain_rank == f.range_rank {
            minimal += 1;
        }
    }
    Ok((
        worst_iso <= 1e-8 && worst_block <= 1e-8,
        format!("max isometry residual {worst_iso:.2e}; max block residual {worst_block:.2e}; equal span ranks {minimal}/20"),
    ))
}
