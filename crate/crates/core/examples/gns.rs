//! GNS representations of pure, mixed and tracial states.

use opalg::states::{self, State};
use opalg::{random, AlgElem, BlockShape, Tolerances};

fn main() -> opalg::Result<()> {
    let tol = Tolerances::default();
    let mut rng = random::seeded(11);
    let m3 = BlockShape::full(3);

    let states_to_try = [
        ("pure", random::pure_state(&mut rng, &m3)),
        ("mixed", random::mixed_state(&mut rng, &m3)),
        ("trace", State::tracial(&m3)),
    ];
    for (name, s) in &states_to_try {
        let g = states::gns(s, &tol)?;
        let a = random::element(&mut rng, &m3);
        let err = (g.expectation(&a)? - s.eval(&a)?).norm();
        println!(
            "{name:>5}: dim {}  irreducible {}  commutant dim {}  |<Ω,π(a)Ω> - ω(a)| {err:.1e}",
            g.rep.dim(),
            g.rep.is_irreducible()?,
            g.rep.commutant_dim()?,
        );
    }

    // A vector state on C ⊕ M2 only sees the block it lives in.
    let shape = BlockShape::new(vec![1, 2])?;
    let s = states::State::vector(&shape, 1, &random::unit_vec(&mut rng, 2))?;
    let g = states::gns(&s, &tol)?;
    let unit = g.rep.apply(&AlgElem::identity(&shape))?;
    println!("vector state on [1,2]: dim {}, unit image trace {}", g.rep.dim(), unit.trace());
    Ok(())
}
