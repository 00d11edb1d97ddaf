use crate::defect::{check_cnu, defect_data, pi_nf_in_basis};
use crate::error::{Error, Result};
use crate::hardy::shift_op;
use crate::linalg::{op_norm, ComplexMatrix, Tolerance};

/// Relative singular-value cutoff when inverting the generator matrix.
const GENERATOR_CUTOFF: f64 = 1e-9;
/// Tail length of the Sz.-Nagy–Foias embedding: `‖P^tail‖` below this.
const TAIL_NORM: f64 = 1e-16;
const TAIL_CAP: usize = 4000;

/// The map `Φ` with `Φ(M_z^m Π_NF h) = V^m Π h`, built on the span of the
/// generators `m = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub phi: ComplexMatrix,
    /// `‖Φ_dom* Φ_dom − I‖` on an orthonormal basis of the generator span.
    pub isometry_residual: f64,
    /// `‖Φ M_z g − V Φ g‖` over the part of the span that `M_z` keeps inside it.
    pub block_residual: f64,
    /// `‖Φ G − T‖`: how well `Φ` reproduces the defining relation.
    pub definition_residual: f64,
    /// Rank of the Sz.-Nagy–Foias generator span.
    pub domain_rank: usize,
    /// Rank of the span `{V^m Π h}` in the other dilation.
    pub range_rank: usize,
}

/// Sz.-Nagy–Foias dilation `(M_z, Π_NF)` on Hardy degrees `0..=degree`, with
/// `Π_NF` truncated at `degree − reserve` so that `M_z^m Π_NF` stays exact for
/// `m ≤ reserve`.
pub fn nf_dilation(p: &ComplexMatrix, degree: usize, reserve: usize, tol: &Tolerance) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_cnu(p, tol)?;
    let defects = defect_data(p, tol)?;
    let b = defects.rank_pstar();
    let pi = pi_nf_in_basis(p, degree.saturating_sub(reserve), &defects.d_pstar, &defects.basis_pstar);
    let mut embed = ComplexMatrix::zeros(b * (degree + 1), p.nrows());
    embed.view_mut((0, 0), (pi.nrows(), pi.ncols())).copy_from(&pi);
    Ok((shift_op(b, degree).matrix, embed))
}

fn tail_length(p: &ComplexMatrix) -> usize {
    let n = p.nrows();
    let mut power = ComplexMatrix::identity(n, n);
    for k in 0..TAIL_CAP {
        if op_norm(&power) <= TAIL_NORM {
            return k;
        }
        power = &power * p;
    }
    TAIL_CAP
}

fn generators(v: &ComplexMatrix, embed: &ComplexMatrix, m: usize) -> ComplexMatrix {
    let n = embed.ncols();
    let mut out = ComplexMatrix::zeros(embed.nrows(), n * (m + 1));
    let mut current = embed.clone();
    for k in 0..=m {
        out.view_mut((0, k * n), (embed.nrows(), n)).copy_from(&current);
        current = v * current;
    }
    out
}

/// Compares an isometric dilation `(V, Π)` of `P` with the Sz.-Nagy–Foias
/// dilation through the map `Φ`, using generators up to `V^m`.
pub fn factorization_check(
    p: &ComplexMatrix,
    v: &ComplexMatrix,
    embed: &ComplexMatrix,
    m: usize,
    tol: &Tolerance,
) -> Result<Factorization> {
    let n = p.nrows();
    if v.nrows() != v.ncols() || embed.shape() != (v.nrows(), n) {
        return Err(Error::dims("dilation: V must be square and Π must map ℋ into its space"));
    }
    let intertwining = op_norm(&(v.adjoint() * embed - embed * p.adjoint()));
    if intertwining > tol.residual_tol.max(1e-8) {
        return Err(Error::NotADilation { residual: intertwining });
    }
    let tail = tail_length(p);
    let (shift, pi) = nf_dilation(p, tail + m + 1, m + 1, tol)?;

    let g = generators(&shift, &pi, m);
    let t = generators(v, embed, m);
    let svd = crate::linalg::checked_svd(&g);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > GENERATOR_CUTOFF * smax)
        .collect();
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V");
    let u_r = ComplexMatrix::from_fn(g.nrows(), keep.len(), |r, c| u[(r, keep[c])]);
    let w_r = ComplexMatrix::from_fn(g.ncols(), keep.len(), |r, c| vt[(keep[c], r)].conj());
    let inv_sigma = ComplexMatrix::from_fn(keep.len(), keep.len(), |r, c| {
        if r == c { (1.0 / svd.singular_values[keep[r]]).into() } else { 0.0.into() }
    });

    // Φ on range(G): Φ U_r = T W_r Σ_r⁻¹
    let phi_dom = &t * &w_r * &inv_sigma;
    let phi = &phi_dom * u_r.adjoint();
    let k = keep.len();
    let isometry_residual = op_norm(&(phi_dom.adjoint() * &phi_dom - ComplexMatrix::identity(k, k)));
    let definition_residual = op_norm(&(&phi * &g - &t));

    // generators with index < m stay inside the span after one shift
    let g_lo = g.columns(0, n * m).into_owned();
    let lo_basis = crate::linalg::range_basis(&g_lo, &Tolerance { rank_tol: GENERATOR_CUTOFF, ..*tol });
    let block_residual = op_norm(&(&phi * &shift * &lo_basis - v * &phi * &lo_basis));
    let range_rank = crate::linalg::range_basis(&t, &Tolerance { rank_tol: GENERATOR_CUTOFF, ..*tol }).ncols();

    Ok(Factorization { phi, isometry_residual, block_residual, definition_residual, domain_rank: k, range_rank })
}
