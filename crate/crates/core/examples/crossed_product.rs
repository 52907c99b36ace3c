//! Transformation group algebras and covariant pairs.

use opalg::groups::{cstar_gg, CrossedProduct, FiniteGroup, GAction};

fn main() -> opalg::Result<()> {
    for n in 2..=4 {
        let g = FiniteGroup::cyclic(n);
        let c = cstar_gg(&g, &GAction::translation(&g))?;
        println!("C*(Z{n}, Z{n}) on l2: span dim {} of {} (onto: {})", c.span_dim, n * n, c.surjective);
    }

    // S3 permuting three points.
    let s3 = FiniteGroup::symmetric(3)?;
    let table = (0..6)
        .map(|x| {
            (0..3)
                .map(|q| {
                    // Element x is the x-th permutation in lexicographic order.
                    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
                    perms[x][q]
                })
                .collect()
        })
        .collect();
    let action = GAction::new(&s3, 3, table)?;
    let cp = CrossedProduct::new(s3, action)?;
    let pair = cp.permutation_pair();
    let rep = cp.integrate(&pair)?;
    println!(
        "S3 on 3 points: algebra dim {}, covariance residual {:.1e}, representation defect {:.1e}",
        cp.dim(),
        pair.covariance_residual(&cp),
        rep.defect(&cp)?
    );
    let back = cp.disintegrate(&rep, &opalg::Tolerances::default())?;
    println!("disintegrated pair acts on C^{}", back.u.dim());
    Ok(())
}
