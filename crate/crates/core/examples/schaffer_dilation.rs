//! Explicit isometric dilation (W, V) of a Γ-contraction.

use bidisc::classify::is_gamma_isometry;
use bidisc::dilation::schaffer_build;
use bidisc::suite::random_gamma_contraction;
use bidisc::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bidisc::Result<()> {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let pair = random_gamma_contraction(&mut rng)?;
        let sc = schaffer_build(&pair, 12, &tol)?;
        let iso = is_gamma_isometry(&sc.as_pair(), &tol);
        println!(
            "dim {} -> {}  V*Π−ΠP* {:.1e}  W*Π−ΠS* {:.1e}  Γ-isometry on window: {}",
            pair.dim(),
            sc.v.matrix.nrows(),
            sc.v_intertwining(pair.p()),
            sc.w_intertwining(pair.s()),
            iso.holds
        );
    }
    Ok(())
}
