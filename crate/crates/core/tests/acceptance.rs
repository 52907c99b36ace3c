//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Oracles here use nalgebra directly or explicit
//! enumeration rather than the library routine being checked.

use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;

use opalg::cpmaps::LinMapAB;
use opalg::groups::{abelian_fourier, cstar_gg, group_cstar, FiniteGroup, GAction, GroupFn, UnitaryRep};
use opalg::hmod::{imprimitivity_bridge, DualPair};
use opalg::induce::{generalized_covariant, induce, irreducible_systems, mackey_recover, InducedSystem, Subgroup};
use opalg::linalg::{self, Mat};
use opalg::povm::Povm;
use opalg::spectral::{self, RadiusMethod};
use opalg::states::{self, Representation, State};
use opalg::{random, AlgElem, BlockShape, Tolerances, C64};

type Outcome = Result<String, String>;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T>(r: opalg::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn brute_rank(m: &Mat) -> usize {
    let s = m.clone().svd(false, false).singular_values;
    let top = s.iter().cloned().fold(0.0, f64::max);
    s.iter().filter(|&&x| x > 1e-9 * top.max(1.0)).count()
}

/// Basis of the joint commutant of `mats`, from the null space of the stacked
/// `I⊗M − Mᵀ⊗I` computed with nalgebra's SVD.
fn brute_commutant(mats: &[Mat]) -> Vec<Mat> {
    let n = mats[0].nrows();
    let mut stacked = DMatrix::zeros(n * n * mats.len(), n * n);
    for (k, m) in mats.iter().enumerate() {
        let block = linalg::kron(&linalg::identity(n), m) - linalg::kron(&m.transpose(), &linalg::identity(n));
        stacked.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    // The stack is tall, so v_t is square and its trailing rows span the null space.
    let svd = stacked.svd(false, true);
    let vt = svd.v_t.unwrap();
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-9 * top).count();
    (rank..n * n)
        .map(|r| {
            let v: Vec<C64> = vt.row(r).iter().map(|z| z.conj()).collect();
            Mat::from_column_slice(n, n, &v)
        })
        .collect()
}

fn brute_eigs(m: &Mat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest eigenvalue modulus through the real 2n×2n form `[[Re, −Im], [Im, Re]]`.
fn brute_radius(m: &Mat) -> f64 {
    let n = m.nrows();
    let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, s| {
        let z = m[(r % n, s % n)];
        match (r / n, s / n) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    });
    real.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two finite subsets of ℂ.
fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn with_zero(mut v: Vec<C64>) -> Vec<C64> {
    v.push(c(0.0));
    v
}

// ---- criteria ----

fn c_star_identity() -> Outcome {
    let start = Instant::now();
    let shapes = [BlockShape::full(2), BlockShape::full(3), BlockShape::new(vec![2, 3]).unwrap()];
    let mut rng = random::seeded(101);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let a = random::element(&mut rng, &shapes[k % 3]);
        let n = a.op_norm();
        let ata = lib(a.star().mul(&a))?;
        worst = worst.max((ata.op_norm() - n * n).abs() / (1.0 + n * n));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-9, format!("relative defect {worst:.1e}"))?;
    check(secs < 2.0, format!("took {secs:.2} s"))?;
    Ok(format!("max relative defect {worst:.1e} over 1000 elements in {secs:.2} s"))
}

fn gelfand_radius() -> Outcome {
    let start = Instant::now();
    let shape = BlockShape::full(8);
    let mut rng = random::seeded(102);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = random::element(&mut rng, &shape);
        let gel = lib(spectral::spectral_radius(&a, RadiusMethod::Gelfand, &tol()))?;
        let exact = brute_radius(a.block(0));
        worst = worst.max((gel - exact).abs() / (1.0 + a.op_norm()));
    }
    check(worst <= 1e-2, format!("general defect {worst:.1e}"))?;
    let mut worst_sa: f64 = 0.0;
    for _ in 0..100 {
        let a = random::self_adjoint(&mut rng, &shape);
        let gel = lib(spectral::spectral_radius(&a, RadiusMethod::Gelfand, &tol()))?;
        let e = brute_eigs(a.block(0));
        let exact = e[0].abs().max(e[e.len() - 1].abs());
        worst_sa = worst_sa.max((gel - exact).abs() / (1.0 + exact));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst_sa <= 1e-9, format!("self-adjoint defect {worst_sa:.1e}"))?;
    check(secs < 5.0, format!("took {secs:.2} s"))?;
    Ok(format!(
        "defect {worst:.1e} general, {worst_sa:.1e} self-adjoint, {secs:.2} s"
    ))
}

fn spectral_mapping() -> Outcome {
    let shapes = [BlockShape::full(3), BlockShape::full(4), BlockShape::new(vec![2, 3]).unwrap()];
    let mut rng = random::seeded(103);
    let mut worst_ab: f64 = 0.0;
    let mut worst_poly: f64 = 0.0;
    for k in 0..200 {
        let shape = &shapes[k % 3];
        let a0 = random::element(&mut rng, shape);
        let b0 = random::element(&mut rng, shape);
        let a = a0.scale_re(1.0 / a0.op_norm());
        let b = b0.scale_re(1.0 / b0.op_norm());
        let ab = lib(spectral::spectrum(&lib(a.mul(&b))?, &tol()))?.eigenvalues;
        let ba = lib(spectral::spectrum(&lib(b.mul(&a))?, &tol()))?.eigenvalues;
        worst_ab = worst_ab.max(hausdorff(&with_zero(ab), &with_zero(ba)));

        let coeffs: Vec<C64> = (0..4).map(|_| random::gaussian(&mut rng)).collect();
        let pa = spectral::polynomial(&coeffs, &a);
        let lhs = lib(spectral::spectrum(&pa, &tol()))?.eigenvalues;
        let rhs: Vec<C64> = lib(spectral::spectrum(&a, &tol()))?
            .eigenvalues
            .iter()
            .map(|&z| coeffs.iter().rev().fold(c(0.0), |acc, &ck| acc * z + ck))
            .collect();
        worst_poly = worst_poly.max(hausdorff(&lhs, &rhs) / (1.0 + pa.op_norm()));
    }
    check(worst_ab <= 1e-8, format!("σ(AB) vs σ(BA) distance {worst_ab:.1e}"))?;
    check(worst_poly <= 1e-8, format!("polynomial mapping distance {worst_poly:.1e}"))?;
    Ok(format!("200 instances: σ(AB)/σ(BA) {worst_ab:.1e}, p(σ(A)) {worst_poly:.1e}"))
}

fn gns() -> Outcome {
    let mut rng = random::seeded(104);
    let mut worst: f64 = 0.0;
    let (mut pure, mut mixed) = (0, 0);
    for k in 0..100 {
        let n = 2 + k % 2;
        let shape = BlockShape::full(n);
        let s: State = if k % 4 < 2 {
            random::pure_state(&mut rng, &shape)
        } else {
            random::mixed_state(&mut rng, &shape)
        };
        let g = lib(states::gns(&s, &tol()))?;
        for _ in 0..5 {
            let a = random::element(&mut rng, &shape);
            let direct = lib(s.eval(&a))?;
            let via = g.cyclic.dotc(&(lib(g.rep.apply(&a))? * &g.cyclic));
            worst = worst.max((direct - via).norm());
        }
        // A state on M_n is pure exactly when its density has rank one.
        let rank = brute_rank(&s.densities()[0]);
        let is_pure = rank == 1;
        check(is_pure == lib(s.is_pure(&tol()))?, format!("purity test disagrees at rank {rank}"))?;
        check(
            is_pure == lib(g.rep.is_irreducible())?,
            format!("purity {is_pure} but irreducibility disagrees on M{n}"),
        )?;
        // The GNS space is M_n·ρ^{1/2}, of dimension n·rank(ρ).
        check(g.rep.dim() == n * rank, format!("GNS dim {} for rank {rank} on M{n}", g.rep.dim()))?;
        if is_pure {
            pure += 1;
        } else {
            mixed += 1;
        }
    }
    for n in 1..=4 {
        let g = lib(states::gns(&State::tracial(&BlockShape::full(n)), &tol()))?;
        check(g.rep.dim() == n * n, format!("tracial GNS dim {} on M{n}", g.rep.dim()))?;
    }
    check(worst <= 1e-10, format!("reconstruction defect {worst:.1e}"))?;
    Ok(format!("{pure} pure, {mixed} mixed; reconstruction {worst:.1e}; trace gives n²"))
}

fn stinespring() -> Outcome {
    let shapes = [
        BlockShape::full(2),
        BlockShape::full(3),
        BlockShape::new(vec![1, 2]).unwrap(),
        BlockShape::commutative(3),
    ];
    let mut rng = random::seeded(105);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let shape = &shapes[k % 4];
        let target = 1 + k % 4;
        let kraus = 1 + k % 3;
        let q = random::unital_cp_map(&mut rng, shape, target, kraus.max(target.div_ceil(shape.total_dim())));
        let d = lib(q.stinespring(&tol()))?;
        // Recompute W* π(A) W on random elements.
        for _ in 0..3 {
            let a = random::element(&mut rng, shape);
            let lhs = lib(q.apply(&a))?;
            let rhs = d.w.adjoint() * lib(d.rep.apply(&a))? * &d.w;
            worst = worst.max(linalg::max_diff(&lhs, &rhs));
        }
        worst = worst.max(d.residual);
    }
    check(worst <= 1e-9, format!("reconstruction residual {worst:.1e}"))?;

    // Choi matrix of the transpose on M2 is the swap; nalgebra's eigensolver
    // gives its least eigenvalue.
    let t = LinMapAB::transpose(2);
    let swap = DMatrix::from_fn(4, 4, |r, s| if r == (s % 2) * 2 + s / 2 { c(1.0) } else { c(0.0) });
    let oracle = brute_eigs(&swap)[0];
    let err = match t.stinespring(&tol()) {
        Ok(_) => return Err("transpose accepted".into()),
        Err(e) => e,
    };
    check(err.is_precondition(), format!("transpose rejected with the wrong kind: {err}"))?;
    let min_eig = lib(t.is_cp(&tol()))?.min_choi_eig;
    check(
        (min_eig - oracle).abs() <= 1e-9 && (min_eig + 1.0).abs() <= 1e-9,
        format!("min Choi eigenvalue {min_eig} vs oracle {oracle}"),
    )?;
    Ok(format!("100 maps, residual {worst:.1e}; transpose rejected, min Choi eigenvalue {min_eig}"))
}

fn naimark() -> Outcome {
    let t = Povm::trine();
    let nm = lib(t.naimark(&tol()))?;
    check(nm.pvm.dim() == 3, format!("trine dilates to {}", nm.pvm.dim()))?;
    let mut worst: f64 = 0.0;
    for (e, p) in t.effects().iter().zip(nm.pvm.effects()) {
        worst = worst.max(linalg::max_diff(&(nm.w.adjoint() * p * &nm.w), e));
        worst = worst.max(linalg::max_diff(&(p * p), p));
    }
    check(worst <= 1e-9, format!("trine reconstruction {worst:.1e}"))?;

    // Projective inputs: the dilation space is the input space and W is a
    // unitary conjugating one PVM onto the other.
    let mut rng = random::seeded(106);
    let mut worst_pvm: f64 = 0.0;
    for d in 2..=4 {
        let u = random::unitary(&mut rng, d);
        let effects: Vec<Mat> = (0..d)
            .map(|j| {
                let col = u.column(j).into_owned();
                &col * col.adjoint()
            })
            .collect();
        let p = lib(Povm::unlabeled(d, effects))?;
        let n = lib(p.naimark(&tol()))?;
        check(n.pvm.dim() == d, format!("PVM on C^{d} dilated to {}", n.pvm.dim()))?;
        worst_pvm = worst_pvm.max(linalg::max_diff(&(n.w.adjoint() * &n.w), &linalg::identity(d)));
        worst_pvm = worst_pvm.max(linalg::max_diff(&(&n.w * n.w.adjoint()), &linalg::identity(d)));
        for (e, q) in p.effects().iter().zip(n.pvm.effects()) {
            worst_pvm = worst_pvm.max(linalg::max_diff(&(&n.w * e * n.w.adjoint()), q));
        }
    }
    check(worst_pvm <= 1e-9, format!("PVM fixed point defect {worst_pvm:.1e}"))?;
    Ok(format!("trine -> dim 3, effects {worst:.1e}; PVMs fixed up to unitary {worst_pvm:.1e}"))
}

/// Irreducible dimensions of a group determined from brute-force counts: the
/// number of conjugacy classes, the number of linear characters `|G/[G,G]|`,
/// and `Σ d² = |G|`. Returns `None` if these do not pin the dimensions down.
fn irrep_dims_oracle(g: &FiniteGroup) -> Option<Vec<usize>> {
    let n = g.order();
    let mut class = vec![usize::MAX; n];
    let mut classes = 0;
    for x in 0..n {
        if class[x] == usize::MAX {
            for y in 0..n {
                class[g.mul(g.mul(y, x), g.inv(y))] = classes;
            }
            classes += 1;
        }
    }
    let commutators: Vec<usize> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y))))
        .collect();
    let derived = g.closure(&commutators).len();
    let linear = n / derived;
    let rest = n - linear;
    match classes - linear {
        0 => Some(vec![1; linear]),
        1 => {
            let d = (rest as f64).sqrt().round() as usize;
            (d * d == rest).then(|| {
                let mut v = vec![1; linear];
                v.push(d);
                v
            })
        }
        _ => None,
    }
}

fn groups() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rng = random::seeded(107);
    for n in 2..=8 {
        let g = FiniteGroup::cyclic(n);
        let f = lib(abelian_fourier(&g, &tol()))?;
        for _ in 0..10 {
            let a = GroupFn::new((0..n).map(|_| random::gaussian(&mut rng)).collect());
            let b = GroupFn::new((0..n).map(|_| random::gaussian(&mut rng)).collect());
            let conv: Vec<C64> = (0..n)
                .map(|x| (0..n).map(|y| a.values[y] * b.values[(x + n - y) % n]).sum())
                .collect();
            let lhs = lib(f.transform(&GroupFn::new(conv)))?;
            let (fa, fb) = (lib(f.transform(&a))?, lib(f.transform(&b))?);
            for k in 0..n {
                worst = worst.max((lhs[k] - fa[k] * fb[k]).norm() / (1.0 + a.l1_norm() * b.l1_norm()));
            }
        }
    }
    check(worst <= 1e-10, format!("convolution theorem defect {worst:.1e}"))?;

    let mut named: Vec<(String, FiniteGroup)> = (2..=6).map(|n| (format!("Z{n}"), FiniteGroup::cyclic(n))).collect();
    named.push(("S3".into(), lib(FiniteGroup::symmetric(3))?));
    named.push(("Q8".into(), FiniteGroup::quaternion()));
    let mut shapes = Vec::new();
    for (name, g) in &named {
        let got = lib(group_cstar(g, 0))?.shape.dims().to_vec();
        let mut sorted = got.clone();
        sorted.sort();
        let want = irrep_dims_oracle(g).ok_or(format!("oracle undetermined for {name}"))?;
        check(sorted == want, format!("{name}: shape {got:?}, oracle {want:?}"))?;
        shapes.push(format!("{name} {got:?}"));
    }
    let s3 = &named[named.len() - 2].1;
    check(lib(group_cstar(s3, 0))?.shape.dims() == [1, 1, 2], "S3 block order")?;
    check(lib(group_cstar(&FiniteGroup::quaternion(), 0))?.shape.dims() == [1, 1, 1, 1, 2], "Q8 block order")?;

    for n in 2..=4 {
        let g = FiniteGroup::cyclic(n);
        let cg = lib(cstar_gg(&g, &GAction::translation(&g)))?;
        let stacked = DMatrix::from_fn(n * n, cg.images.len(), |r, k| cg.images[k][(r / n, r % n)]);
        let rank = brute_rank(&stacked);
        check(rank == n * n && cg.span_dim == n * n, format!("C*(G,G) for Z{n}: span {} / brute {rank}", cg.span_dim))?;
    }
    Ok(format!("Fourier {worst:.1e}; {}; C*(G,G) spans |G|²", shapes.join(", ")))
}

fn morita() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        let pair = DualPair::column(n);
        let conj = lib(pair.conjugate())?;
        for (p, pi, dim) in [
            (&pair, Representation::defining(&BlockShape::full(1)), n),
            (&conj, Representation::defining(&BlockShape::full(n)), 1),
        ] {
            let b = lib(imprimitivity_bridge(p, &pi, &tol()))?;
            check(b.forward.dim() == dim, format!("forward dim {} for n = {n}", b.forward.dim()))?;
            check(lib(b.forward.is_irreducible())?, format!("forward rep not irreducible for n = {n}"))?;
            // Recheck the intertwiner against the basis images.
            let u = &b.intertwiner;
            let mut res = linalg::max_diff(&(u * u.adjoint()), &linalg::identity(u.nrows()));
            for (a, c) in pi.images().iter().zip(b.back.images()) {
                res = res.max(linalg::max_diff(&(u * a * u.adjoint()), c));
            }
            worst = worst.max(res).max(b.residual);
        }
    }
    check(worst <= 1e-9, format!("round trip residual {worst:.1e}"))?;
    Ok(format!("M_n <-> C^n <-> C for n = 1..4, residual {worst:.1e}"))
}

fn class_count(g: &FiniteGroup) -> usize {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut count = 0;
    for x in 0..n {
        if !seen[x] {
            count += 1;
            for y in 0..n {
                seen[g.mul(g.mul(y, x), g.inv(y))] = true;
            }
        }
    }
    count
}

fn mackey() -> Outcome {
    let s3 = lib(FiniteGroup::symmetric(3))?;
    let a3 = lib(Subgroup::new(&s3, &[0, 3, 4]))?;
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let chi = lib(UnitaryRep::from_character(&a3.as_group(&s3), &[c(1.0), w, w * w], &tol()))?;
    let sys = lib(induce(&s3, &a3, &chi, &tol()))?;
    check(sys.space_dim == 2, format!("dimension {}", sys.space_dim))?;
    let mut joint: Vec<Mat> = sys.rep.mats().to_vec();
    joint.extend(sys.pvm.effects().iter().cloned());
    check(brute_commutant(&joint).len() == 1, "joint commutant is not trivial")?;
    check(brute_commutant(sys.rep.mats()).len() == 1, "U alone is reducible")?;

    let back = lib(mackey_recover(&s3, &a3, &sys.rep, &sys.pvm, &tol()))?;
    check(back.residual <= 1e-9, format!("round trip residual {:.1e}", back.residual))?;
    // One-dimensional, so equivalence is equality of the character values.
    let defect = back
        .chi
        .mats()
        .iter()
        .zip(chi.mats())
        .map(|(a, b)| linalg::max_diff(a, b))
        .fold(0.0, f64::max);
    check(defect <= 1e-9, format!("recovered character off by {defect:.1e}"))?;

    let z4 = FiniteGroup::cyclic(4);
    let pairs = [
        ("S3/A3", s3.clone(), a3.clone()),
        ("Z4/Z2", z4.clone(), lib(Subgroup::new(&z4, &[0, 2]))?),
        ("S3/<(01)>", s3.clone(), lib(Subgroup::generated(&s3, &[2]))?),
    ];
    let mut counts = Vec::new();
    for (name, g, h) in &pairs {
        let systems = lib(irreducible_systems(g, h, 0, &tol()))?;
        let want = class_count(&h.as_group(g));
        check(systems.len() == want, format!("{name}: {} systems, |Irr(H)| = {want}", systems.len()))?;
        for s in &systems {
            let mut joint = s.u.mats().to_vec();
            joint.extend(s.proj.iter().cloned());
            check(brute_commutant(&joint).len() == 1, format!("{name}: a system is reducible"))?;
        }
        // Pairwise inequivalent: no nonzero intertwiner between distinct systems.
        for i in 0..systems.len() {
            for j in 0..i {
                let (a, b) = (&systems[i], &systems[j]);
                if a.u.dim() != b.u.dim() {
                    continue;
                }
                let mut both: Vec<Mat> = Vec::new();
                let d = a.u.dim();
                let direct = |x: &Mat, y: &Mat| {
                    let mut m = linalg::zeros(2 * d, 2 * d);
                    m.view_mut((0, 0), (d, d)).copy_from(x);
                    m.view_mut((d, d), (d, d)).copy_from(y);
                    m
                };
                both.extend(a.u.mats().iter().zip(b.u.mats()).map(|(x, y)| direct(x, y)));
                both.extend(a.proj.iter().zip(&b.proj).map(|(x, y)| direct(x, y)));
                check(brute_commutant(&both).len() == 2, format!("{name}: systems {j} and {i} are equivalent"))?;
            }
        }
        counts.push(systems.len().to_string());
    }
    Ok(format!(
        "Ind(S3, A3, ω) dim 2 irreducible; class counts {}; round trip {:.1e}",
        counts.join(", "),
        back.residual
    ))
}

/// A random projection in the commutant of `U`: the positive spectral
/// projection of a random self-adjoint element of the commutant.
fn commutant_projection(sys: &InducedSystem, rng: &mut impl rand::Rng) -> Mat {
    let basis = brute_commutant(sys.rep.mats());
    let d = sys.space_dim;
    let mut x = linalg::zeros(d, d);
    for b in &basis {
        x += b * random::gaussian(rng);
    }
    let h = &x + x.adjoint();
    let eig = h.symmetric_eigen();
    let mut p = linalg::zeros(d, d);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l > 0.0 {
            let v = eig.eigenvectors.column(k).into_owned();
            p += &v * v.adjoint();
        }
    }
    p
}

fn generalized_covariance() -> Outcome {
    let s3 = lib(FiniteGroup::symmetric(3))?;
    let z4 = FiniteGroup::cyclic(4);
    let fixtures = [
        (s3.clone(), lib(Subgroup::new(&s3, &[0, 3, 4]))?),
        (z4.clone(), lib(Subgroup::new(&z4, &[0, 2]))?),
        (s3.clone(), lib(Subgroup::generated(&s3, &[2]))?),
        (z4.clone(), Subgroup::trivial()),
    ];
    let mut rng = random::seeded(110);
    let (mut worst_cov, mut worst_dil): (f64, f64) = (0.0, 0.0);
    let mut non_projective = 0;
    let mut count = 0;
    for (g, h) in &fixtures {
        let sys = lib(induce(g, h, &UnitaryRep::regular(&h.as_group(g)), &tol()))?;
        for _ in 0..5 {
            let p = commutant_projection(&sys, &mut rng);
            if brute_rank(&p) == 0 {
                continue;
            }
            let gc = lib(generalized_covariant(g, &sys, &p, &tol()))?;
            // Covariance recomputed from the compressed pieces.
            for x in 0..g.order() {
                let u = &gc.u_c.mats()[x];
                for (cidx, e) in gc.povm.effects().iter().enumerate() {
                    let moved = &gc.povm.effects()[sys.cosets.action.act(x, cidx)];
                    worst_cov = worst_cov.max(linalg::max_diff(&(u * e * u.adjoint()), moved));
                }
            }
            worst_cov = worst_cov.max(gc.covariance_residual);
            if !gc.povm.validate(&tol()).is_pvm {
                non_projective += 1;
            }
            let dil = lib(gc.q.stinespring(&tol()))?;
            let shape = gc.q.source().clone();
            for (k, e) in gc.povm.effects().iter().enumerate() {
                let pi = lib(dil.rep.apply(&AlgElem::matrix_unit(&shape, k)))?;
                worst_dil = worst_dil.max(linalg::max_diff(&(dil.w.adjoint() * &pi * &dil.w), e));
                worst_dil = worst_dil.max(linalg::max_diff(&(&pi * &pi), &pi));
            }
            worst_dil = worst_dil.max(dil.residual);
            count += 1;
        }
    }
    check(worst_cov <= 1e-10, format!("covariance residual {worst_cov:.1e}"))?;
    check(worst_dil <= 1e-9, format!("redilation residual {worst_dil:.1e}"))?;
    check(non_projective > 0, "no compression produced a non-projective POVM")?;
    Ok(format!(
        "{count} compressions ({non_projective} non-projective): covariance {worst_cov:.1e}, redilation {worst_dil:.1e}"
    ))
}

/// Same table as the CLI golden test, run in-process.
const GOLDEN: &[(&str, &[&str])] = &[
    ("spectrum_diag12", &["spectrum", "--in", "diag12.json"]),
    ("spectrum_gelfand", &["spectrum", "--in", "diag12.json", "--gelfand"]),
    ("calculus_sqrt", &["calculus", "--fn", "sqrt", "--in", "diag12.json"]),
    ("calculus_poly", &["calculus", "--fn", "poly:1,0,2", "--in", "diag12.json"]),
    ("gns_pure", &["gns", "--algebra", "shape2.json", "--state", "pure0.json"]),
    ("gns_tracial", &["gns", "--state", "tracial2.json"]),
    ("stinespring_identity", &["stinespring", "--map", "identity_map.json"]),
    ("stinespring_transpose", &["stinespring", "--map", "transpose.json"]),
    ("naimark_trine", &["naimark", "--povm", "trine.json"]),
    ("fourier_z4", &["fourier", "--group", "z4.json", "--fn", "f_z4.json"]),
    ("decompose_pauli", &["decompose", "--mats", "pauli_x.json", "pauli_z.json", "--seed", "42"]),
    ("crossed_z4", &["crossed", "--group", "z4.json", "--action", "z4_translation.json"]),
    ("induce_s3_a3", &["induce", "--group", "s3.json", "--subgroup", "a3.json", "--rep", "chi_omega.json"]),
    ("mackey_s3_a3", &["mackey", "--system", "../golden/induce_s3_a3.json"]),
    ("validate_transpose", &["validate", "--kind", "map", "--in", "transpose.json"]),
    ("validate_trine", &["validate", "--kind", "povm", "--in", "trine.json"]),
    ("validate_s3", &["validate", "--kind", "group", "--in", "s3.json"]),
    ("validate_module", &["validate", "--kind", "module", "--in", "module_c2.json"]),
    ("induce_module_c2", &["induce-module", "--module", "module_c2.json", "--rep", "rep_c.json"]),
    ("schema_error", &["spectrum", "--in", "bad_entries.json"]),
    ("fourier_nonabelian", &["fourier", "--group", "s3.json", "--fn", "f_z4.json"]),
];

fn suite_and_goldens(elapsed: f64) -> Outcome {
    let tests = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    std::env::set_current_dir(tests.join("fixtures")).map_err(|e| e.to_string())?;
    std::env::remove_var("OPALG_TOL_EQ");
    for (name, args) in GOLDEN {
        let argv = std::iter::once("opalg").chain(args.iter().copied());
        let (_, first) = opalg::cli::run_args(argv.clone());
        let (_, second) = opalg::cli::run_args(argv);
        check(first == second, format!("{name}: output differs between runs"))?;
        let want = std::fs::read_to_string(tests.join("golden").join(format!("{name}.json")))
            .map_err(|e| format!("{name}: {e}"))?;
        check(first == want, format!("{name}: output differs from golden file"))?;
    }
    check(elapsed < 60.0, format!("acceptance checks took {elapsed:.1} s"))?;
    Ok(format!(
        "{} golden files byte-stable; acceptance checks ran in {elapsed:.1} s",
        GOLDEN.len()
    ))
}

fn main() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("C*-identity", c_star_identity),
        ("Gelfand spectral radius", gelfand_radius),
        ("spectra of AB and BA, polynomial mapping", spectral_mapping),
        ("GNS", gns),
        ("Stinespring", stinespring),
        ("Naimark", naimark),
        ("groups", groups),
        ("Morita round trip", morita),
        ("Mackey", mackey),
        ("generalized covariance", generalized_covariance),
    ];
    let mut failed = 0;
    let mut report = |k: usize, name: &str, r: Outcome| match r {
        Ok(detail) => println!("PASS {k:>2} {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL {k:>2} {name}: {detail}");
        }
    };
    for (k, (name, f)) in criteria.iter().enumerate() {
        report(k + 1, name, f());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(11, "runtime and golden files", suite_and_goldens(elapsed));
    if failed > 0 {
        std::process::exit(1);
    }
}
