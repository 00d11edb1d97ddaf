//! Joint unitary equivalence of matrix tuples through trace words.

use bidisc::classify::{joint_unitary_equiv, trace_word_discrepancy};
use bidisc::linalg::{from_real, random_gaussian, random_unitary};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bidisc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_gaussian(3, 3, &mut rng);
    let b = random_gaussian(3, 3, &mut rng);
    let u = random_unitary(3, &mut rng);
    let (ua, ub) = (u.adjoint() * &a * &u, u.adjoint() * &b * &u);
    println!("conjugated pair: {:.1e}", trace_word_discrepancy(&[a.clone(), b.clone()], &[ua.clone(), ub], None)?);
    println!("transposed B:    {:.3}", trace_word_discrepancy(&[a.clone(), b.clone()], &[ua, b.transpose()], None)?);

    // same spectrum, different Jordan structure
    let j = from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let z = from_real(2, 2, &[0.0, 0.0, 0.0, 0.0]);
    println!("Jordan vs zero:  {}", joint_unitary_equiv(&[j], &[z], None, 1e-9)?);
    Ok(())
}
