//! Splitting a matrix algebra given by generators into simple summands.

use opalg::linalg::{self, kron, Mat};
use opalg::states::wedderburn;
use opalg::{random, C64};

fn main() -> opalg::Result<()> {
    let mut rng = random::seeded(5);
    // M2 acting on C^2 ⊗ C^3 together with a 1x1 block: shape [1,2],
    // multiplicities [1,3], hidden by a random unitary.
    let x = Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| C64::new(v, 0.0)));
    let z = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0].map(|v| C64::new(v, 0.0)));
    let embed = |m: &Mat, scalar: f64| {
        let mut out = linalg::zeros(7, 7);
        out[(0, 0)] = C64::new(scalar, 0.0);
        out.view_mut((1, 1), (6, 6)).copy_from(&kron(&linalg::identity(3), m));
        out
    };
    let u = random::unitary(&mut rng, 7);
    let gens: Vec<Mat> = [embed(&x, 2.0), embed(&z, 0.0)]
        .iter()
        .map(|g| &u * g * u.adjoint())
        .collect();

    let w = wedderburn(&gens, 42)?;
    println!("shape {}  multiplicities {:?}", w.shape, w.multiplicities);
    println!("off-block residual {:.2e}", w.block_residual(&gens));
    Ok(())
}
