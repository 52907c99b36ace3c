//! Hilbert modules, their compact operators, Rieffel induction and the
//! imprimitivity bridge for the dual pair M_n, C^n, C.

use opalg::hmod::{compacts, imprimitivity_bridge, rieffel_induce, DualPair, HModule};
use opalg::states::Representation;
use opalg::{BlockShape, Tolerances};

fn main() -> opalg::Result<()> {
    let tol = Tolerances::default();

    let e = HModule::rectangular(3, 2);
    let report = e.validate(&tol, 20, 0)?;
    println!("3x2 matrices over M2: module axioms hold = {}", report.valid());
    for c in &report.checks {
        println!("  {:<22} {:.1e}", c.name, c.residual);
    }
    let k = compacts(&e, &tol, 0)?;
    println!("compact operators: {} (dim {})", k.shape, k.dim());

    let e = HModule::standard(3);
    let chi = Representation::defining(&BlockShape::full(1));
    let induced = rieffel_induce(&e, &chi, &tol)?;
    let rep = induced.compacts_rep(&compacts(&e, &tol, 0)?)?;
    println!("inducing C -> M3 through C^3: dim {}, irreducible {}", rep.dim(), rep.is_irreducible()?);

    let pair = DualPair::column(3);
    let bridge = imprimitivity_bridge(&pair, &Representation::defining(&BlockShape::full(1)), &tol)?;
    println!(
        "C -> M3 -> C: forward dim {}, round trip residual {:.1e}",
        bridge.forward.dim(),
        bridge.residual
    );
    let bridge = imprimitivity_bridge(&pair.conjugate()?, &Representation::defining(&BlockShape::full(3)), &tol)?;
    println!(
        "M3 -> C -> M3: forward dim {}, round trip residual {:.1e}",
        bridge.forward.dim(),
        bridge.residual
    );
    Ok(())
}
