//! Arithmetic, norms and quotients in a direct sum of matrix blocks.

use std::collections::BTreeSet;

use opalg::algebra::quotient_by_ideal;
use opalg::{random, AlgElem, BlockShape, C64};

fn show(a: &AlgElem) -> String {
    let parts: Vec<String> = a.coeffs().iter().map(|z| format!("{}", z.re)).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> opalg::Result<()> {
    let shape = BlockShape::new(vec![1, 2])?;
    let a = AlgElem::from_coeffs(
        &shape,
        &[2.0, 1.0, 3.0, 0.0, -1.0].map(|x| C64::new(x, 0.0)),
    )?;
    let b = a.star().mul(&a)?;
    println!("a       = {}", show(&a));
    println!("a* a    = {}", show(&b));
    println!("|a|^2   = {:.6}", a.op_norm().powi(2));
    println!("|a* a|  = {:.6}", b.op_norm());

    let norms = a.schatten();
    println!("op / HS / trace norms: {:.4} {:.4} {:.4}", norms.op, norms.hs, norms.tr);

    // Killing the 1x1 block leaves the M2 summand.
    let q = quotient_by_ideal(&shape, &BTreeSet::from([0]), &a)?;
    println!("a modulo block 0 lives in {}: {}", q.shape(), show(&q));

    let mut rng = random::seeded(7);
    let x = random::element(&mut rng, &BlockShape::new(vec![2, 3])?);
    let defect = (x.star().mul(&x)?.op_norm() - x.op_norm().powi(2)).abs();
    println!("C*-identity defect on a random element of [2,3]: {defect:.2e}");
    Ok(())
}
