//! Spectra, the spectral radius two ways, functional calculus and the
//! Gelfand transform of a commutative subalgebra.

use opalg::spectral::{self, RadiusMethod, ScalarFn};
use opalg::{random, AlgElem, BlockShape, Tolerances, C64};

fn main() -> opalg::Result<()> {
    let tol = Tolerances::default();
    let mut rng = random::seeded(3);
    let shape = BlockShape::full(4);

    let a = random::element(&mut rng, &shape);
    let eig = spectral::spectral_radius(&a, RadiusMethod::Eigen, &tol)?;
    let gel = spectral::spectral_radius(&a, RadiusMethod::Gelfand, &tol)?;
    println!("spectral radius: eigenvalues {eig:.6}, repeated squaring {gel:.6}");

    let h = random::self_adjoint(&mut rng, &shape);
    let p = h.mul(&h)?;
    let root: ScalarFn = "sqrt".parse()?;
    let abs_h = spectral::functional_calculus(|z| root.eval(z), &p, &tol)?;
    let direct = spectral::functional_calculus(|z| C64::from(z.norm()), &h, &tol)?;
    println!("sqrt(h^2) vs |h|: {:.2e}", abs_h.sub(&direct)?.max_abs());

    let (u, pos) = spectral::polar(&a, &tol)?;
    println!("polar residual: {:.2e}", u.mul(&pos)?.sub(&a)?.max_abs());

    let d = AlgElem::diagonal(&[1.0, 2.0, 2.0, 5.0].map(|x| C64::new(x, 0.0)))?;
    let chars = spectral::characters(&[d.clone()], &tol)?;
    println!("characters of C*(d): {}", chars.characters.len());
    for c in &chars.characters {
        println!("  chi(d) = {}", c.eval(&d));
    }
    Ok(())
}
