//! Induced representations, systems of imprimitivity, Mackey's recovery of
//! the inducing representation, and covariant POVMs from compression.

use opalg::groups::{FiniteGroup, UnitaryRep};
use opalg::induce::{generalized_covariant, induce, irreducible_systems, mackey_recover, Subgroup};
use opalg::linalg::{self, Mat};
use opalg::{Tolerances, C64};

fn main() -> opalg::Result<()> {
    let tol = Tolerances::default();
    let s3 = FiniteGroup::symmetric(3)?;
    let a3 = Subgroup::generated(&s3, &[3])?;
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let chi = UnitaryRep::from_character(&a3.as_group(&s3), &[C64::new(1.0, 0.0), w, w * w], &tol)?;
    let sys = induce(&s3, &a3, &chi, &tol)?;
    println!(
        "Ind(A3 -> S3, omega): dim {}, irreducible {}, covariance residual {:.1e}",
        sys.space_dim,
        sys.is_irreducible()?,
        sys.covariance_residual()
    );
    let back = mackey_recover(&s3, &a3, &sys.rep, &sys.pvm, &tol)?;
    let values: Vec<String> = back.chi.mats().iter().map(|m| format!("{:.4}", m[(0, 0)])).collect();
    println!("recovered character: [{}], residual {:.1e}", values.join(", "), back.residual);

    for (name, g, h) in [
        ("S3 / A3", s3.clone(), a3.clone()),
        ("S3 / <(01)>", s3.clone(), Subgroup::generated(&s3, &[2])?),
        ("Z4 / Z2", FiniteGroup::cyclic(4), Subgroup::generated(&FiniteGroup::cyclic(4), &[2])?),
    ] {
        println!("{name}: {} irreducible systems", irreducible_systems(&g, &h, 0, &tol)?.len());
    }

    // Compress the regular system of Z4 to two Fourier modes.
    let z4 = FiniteGroup::cyclic(4);
    let h = Subgroup::trivial();
    let reg = induce(&z4, &h, &UnitaryRep::trivial(&h.as_group(&z4), 1), &tol)?;
    let mut p = linalg::zeros(4, 4);
    for k in 0..2 {
        let f = Mat::from_fn(4, 1, |x, _| C64::from_polar(0.5, std::f64::consts::FRAC_PI_2 * (k * x) as f64));
        p += &f * f.adjoint();
    }
    let gc = generalized_covariant(&z4, &reg, &p, &tol)?;
    let check = gc.povm.validate(&tol);
    println!(
        "compressed system: POVM valid {}, projective {}, covariance residual {:.1e}",
        check.valid, check.is_pvm, gc.covariance_residual
    );
    let dil = gc.q.stinespring(&tol)?;
    println!("its Stinespring dilation has dimension {}", dil.dilation_dim());
    Ok(())
}
