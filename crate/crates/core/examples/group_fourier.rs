//! Group algebras: Fourier transform on abelian groups and the block
//! structure of C*(G) for small non-abelian groups.

use opalg::groups::{abelian_fourier, group_cstar, FiniteGroup, GroupFn};
use opalg::{Tolerances, C64};

fn main() -> opalg::Result<()> {
    let tol = Tolerances::default();
    let z5 = FiniteGroup::cyclic(5);
    let fourier = abelian_fourier(&z5, &tol)?;
    let f = GroupFn::new((0..5).map(|x| C64::new(x as f64, 0.0)).collect());
    let g = GroupFn::new(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
    let conv = z5.convolve(&f, &g)?;
    let lhs = fourier.transform(&conv)?;
    let (fh, gh) = (fourier.transform(&f)?, fourier.transform(&g)?);
    let worst = lhs
        .iter()
        .zip(fh.iter().zip(&gh))
        .map(|(c, (a, b))| (c - a * b).norm())
        .fold(0.0, f64::max);
    println!("Z5: (f*g)^ = f^ g^ up to {worst:.1e}");

    for (name, g) in [
        ("Z4", FiniteGroup::cyclic(4)),
        ("S3", FiniteGroup::symmetric(3)?),
        ("D4", FiniteGroup::dihedral(4)),
        ("Q8", FiniteGroup::quaternion()),
    ] {
        let c = group_cstar(&g, 1)?;
        println!("C*({name}) = {}", c.shape);
    }
    Ok(())
}
