//! Compares the explicit dilation with the minimal one through Φ.

use bidisc::dilation::{factorization_check, schaffer_build};
use bidisc::suite::random_gamma_contraction;
use bidisc::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bidisc::Result<()> {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5 {
        let pair = random_gamma_contraction(&mut rng)?;
        let m = 2 * pair.dim() + 2;
        let sc = schaffer_build(&pair, m + 2, &tol)?;
        let f = factorization_check(pair.p(), &sc.v.matrix, &sc.embed, m, &tol)?;
        println!(
            "dim {}  isometry {:.1e}  block {:.1e}  spans {}/{}",
            pair.dim(),
            f.isometry_residual,
            f.block_residual,
            f.domain_rank,
            f.range_rank
        );
    }
    Ok(())
}
