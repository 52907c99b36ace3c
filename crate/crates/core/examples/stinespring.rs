//! Complete positivity via Choi blocks, and minimal Stinespring dilations.

use opalg::cpmaps::LinMapAB;
use opalg::{random, BlockShape, Error, Tolerances};

fn main() -> opalg::Result<()> {
    let tol = Tolerances::default();
    let mut rng = random::seeded(21);

    let q = random::unital_cp_map(&mut rng, &BlockShape::new(vec![1, 2])?, 3, 2);
    let d = q.stinespring(&tol)?;
    println!(
        "random unital CP map [1,2] -> M3: dilation dim {}, block multiplicities {:?}, residual {:.1e}",
        d.dilation_dim(),
        d.block_multiplicities(),
        d.residual
    );

    let dep = LinMapAB::depolarizing(2);
    let d = dep.stinespring(&tol)?;
    println!("depolarizing map on M2: dilation dim {}, Kraus rank {:?}", d.dilation_dim(), d.block_multiplicities());

    // The transpose is positive but not completely positive.
    let t = LinMapAB::transpose(2);
    let check = t.positivity_check(&tol, 200, 1);
    println!("transpose: sampled positivity falsified = {}", check.falsified);
    match t.stinespring(&tol) {
        Err(Error::NotCompletelyPositive { min_choi_eig }) => {
            println!("transpose rejected, min Choi eigenvalue {min_choi_eig:.3}")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
