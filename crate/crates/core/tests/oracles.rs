//! Worked small instances checked against independent computations: hand
//! arithmetic, brute-force linear algebra written out here, or explicit
//! enumeration.

use std::collections::BTreeSet;

use nalgebra::DMatrix;

use opalg::algebra::quotient_by_ideal;
use opalg::cpmaps::LinMapAB;
use opalg::groups::{
    abelian_fourier, cstar_gg, group_cstar, invariant_state_cov, AlgebraAction, FiniteGroup, GAction, GroupAlgebraRep,
    GroupFn, UnitaryRep,
};
use opalg::hmod::{compacts, serre_swan, HModule};
use opalg::induce::{cosets, induce, irreducible_systems, Subgroup};
use opalg::linalg::{self, CVec, Mat};
use opalg::povm::{Frame, Povm};
use opalg::spectral::{self, RadiusMethod};
use opalg::states::{self, bloch_coords, bloch_state, State};
use opalg::{random, AlgElem, BlockShape, Tolerances, C64};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn real(rows: usize, cols: usize, v: &[f64]) -> Mat {
    DMatrix::from_row_slice(rows, cols, &v.iter().map(|&x| c(x)).collect::<Vec<_>>())
}

/// Rank of a matrix by counting singular values above `1e-9·σ_max`, using
/// nalgebra directly.
fn brute_rank(m: &Mat) -> usize {
    let s = m.clone().svd(false, false).singular_values;
    let top = s.iter().cloned().fold(0.0, f64::max);
    s.iter().filter(|&&x| x > 1e-9 * top.max(1.0)).count()
}

/// Dimension of `{X : XM = MX for all M}` by stacking `I⊗M − Mᵀ⊗I`.
fn brute_commutant_dim(mats: &[Mat]) -> usize {
    let n = mats[0].nrows();
    let mut stacked = DMatrix::zeros(n * n * mats.len(), n * n);
    for (k, m) in mats.iter().enumerate() {
        let block = linalg::kron(&linalg::identity(n), m) - linalg::kron(&m.transpose(), &linalg::identity(n));
        stacked.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    n * n - brute_rank(&stacked)
}

/// Hermitian eigenvalues by nalgebra's own solver.
fn brute_eigs(m: &Mat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

// ---- core ----

#[test]
fn nilpotent_norms_by_hand() {
    // A = [[0,2],[0,0]] has singular values {2, 0}; A*A = diag(0, 4).
    let a = AlgElem::from_matrix(real(2, 2, &[0.0, 2.0, 0.0, 0.0])).unwrap();
    assert!((a.op_norm() - 2.0).abs() < 1e-14);
    assert!((a.star().mul(&a).unwrap().op_norm() - 4.0).abs() < 1e-14);
    assert_eq!(
        a.star().block(0),
        &real(2, 2, &[0.0, 0.0, 2.0, 0.0])
    );
}

#[test]
fn rank_one_trace_norm() {
    let mut rng = random::seeded(1);
    for _ in 0..20 {
        let phi = random::gaussian_vec(&mut rng, 4);
        let psi = random::gaussian_vec(&mut rng, 4);
        let a = AlgElem::from_matrix(&phi * psi.adjoint()).unwrap();
        assert!((a.schatten().tr - phi.norm() * psi.norm()).abs() < 1e-12 * phi.norm() * psi.norm());
    }
}

#[test]
fn quotient_maps_are_contractive() {
    let shape = BlockShape::new(vec![1, 2, 3]).unwrap();
    let mut rng = random::seeded(2);
    for k in 0..100 {
        let a = random::element(&mut rng, &shape);
        let ideal = BTreeSet::from([k % 3]);
        let q = quotient_by_ideal(&shape, &ideal, &a).unwrap();
        assert!(q.op_norm() <= a.op_norm() * (1.0 + 1e-12));
    }
}

// ---- spectral ----

#[test]
fn gelfand_radius_on_contractions() {
    let mut rng = random::seeded(3);
    let shape = BlockShape::full(8);
    for _ in 0..20 {
        let a0 = random::element(&mut rng, &shape);
        let a = a0.scale_re(1.0 / a0.op_norm());
        // The realification [[Re, -Im], [Im, Re]] has spectrum σ(A) ∪ conj σ(A).
        let m = a.block(0);
        let real = DMatrix::<f64>::from_fn(16, 16, |r, s| {
            let z = m[(r % 8, s % 8)];
            match (r / 8, s / 8) {
                (0, 0) | (1, 1) => z.re,
                (0, 1) => -z.im,
                _ => z.im,
            }
        });
        let eig = real.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let gel = spectral::spectral_radius(&a, RadiusMethod::Gelfand, &tol()).unwrap();
        assert!((gel - eig).abs() <= 1e-2, "{gel} vs {eig}");
    }
}

#[test]
fn cube_spectrum() {
    let mut rng = random::seeded(4);
    let a = random::self_adjoint(&mut rng, &BlockShape::full(5));
    let cube = a.pow(3);
    let direct: Vec<f64> = brute_eigs(a.block(0)).iter().map(|x| x * x * x).collect();
    let via = spectral::spectrum(&cube, &tol()).unwrap();
    let mut got: Vec<f64> = via.eigenvalues.iter().map(|z| z.re).collect();
    got.sort_by(f64::total_cmp);
    for (x, y) in got.iter().zip(&direct) {
        assert!((x - y).abs() <= 1e-9 * (1.0 + cube.op_norm()));
    }
}

#[test]
fn positivity_of_squares() {
    let mut rng = random::seeded(5);
    let shape = BlockShape::new(vec![2, 3]).unwrap();
    for _ in 0..200 {
        let b = random::element(&mut rng, &shape);
        let bb = b.star().mul(&b).unwrap();
        assert!(spectral::positivity(&bb, &tol()).unwrap().is_positive);
        assert!(!spectral::positivity(&bb.scale_re(-1.0), &tol()).unwrap().is_positive);
    }
}

#[test]
fn characters_of_diagonal_algebras() {
    let d = AlgElem::diagonal(&[c(1.0), c(2.0), c(2.0)]).unwrap();
    let ch = spectral::characters(&[d.clone()], &tol()).unwrap();
    assert_eq!(ch.characters.len(), 2);
    // The Gelfand transform of d is the identity function on {1, 2}.
    let mut vals: Vec<f64> = ch.characters.iter().map(|x| x.eval(&d).re).collect();
    vals.sort_by(f64::total_cmp);
    assert_eq!(vals, vec![1.0, 2.0]);

    let n = 4;
    let units: Vec<AlgElem> = (0..n)
        .map(|i| {
            let mut v = vec![c(0.0); n];
            v[i] = c(1.0);
            AlgElem::diagonal(&v).unwrap()
        })
        .collect();
    assert_eq!(spectral::characters(&units, &tol()).unwrap().characters.len(), n);
}

// ---- states ----

#[test]
fn bloch_examples() {
    // The first coordinate is the diagonal axis: (1,0,0) ↦ diag(1,0).
    let north = bloch_state(1.0, 0.0, 0.0, &tol()).unwrap();
    let sz = AlgElem::from_matrix(real(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
    assert!((north.eval(&sz).unwrap() - c(1.0)).norm() < 1e-15);
    assert_eq!(north.densities()[0], real(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    let mut rng = random::seeded(6);
    for _ in 0..100 {
        let v = random::gaussian_vec(&mut rng, 3);
        let r = v.norm() / (1.0 + v.norm());
        let (x, y, z) = (v[0].re, v[1].re, v[2].re);
        let n = (x * x + y * y + z * z).sqrt().max(1e-300);
        let (x, y, z) = (x / n * r, y / n * r, z / n * r);
        let s = bloch_state(x, y, z, &tol()).unwrap();
        let (a, b, cc) = bloch_coords(&s).unwrap();
        assert!((a - x).abs() < 1e-12 && (b - y).abs() < 1e-12 && (cc - z).abs() < 1e-12);
    }
}

#[test]
fn two_point_states() {
    let shape = BlockShape::commutative(2);
    let mid = State::new(shape.clone(), vec![real(1, 1, &[0.5]), real(1, 1, &[0.5])]).unwrap();
    assert!(!mid.is_pure(&tol()).unwrap());
    for t in [0.0, 1.0] {
        let s = State::new(shape.clone(), vec![real(1, 1, &[t]), real(1, 1, &[1.0 - t])]).unwrap();
        assert!(s.is_pure(&tol()).unwrap());
    }
}

#[test]
fn tracial_gns_on_m2() {
    // The GNS space of the trace is M2 with the Hilbert-Schmidt form; π acts by
    // left multiplication, whose commutant is right multiplication by M2.
    let shape = BlockShape::full(2);
    let g = states::gns(&State::tracial(&shape), &tol()).unwrap();
    assert_eq!(g.rep.dim(), 4);
    assert!(!g.rep.is_irreducible().unwrap());
    assert_eq!(brute_commutant_dim(g.rep.images()), 4);
    assert_eq!(g.rep.commutant_dim().unwrap(), 4);
}

#[test]
fn pure_vector_states() {
    let mut rng = random::seeded(7);
    for n in 1..=4 {
        let shape = BlockShape::full(n);
        let s = State::vector(&shape, 0, &random::unit_vec(&mut rng, n)).unwrap();
        let g = states::gns(&s, &tol()).unwrap();
        assert_eq!(g.rep.dim(), n);
        assert_eq!(brute_commutant_dim(g.rep.images()), 1);
    }
}

#[test]
fn regular_representations_decompose() {
    let z2 = UnitaryRep::regular(&FiniteGroup::cyclic(2));
    assert_eq!(brute_commutant_dim(z2.mats()), 2);
    assert_eq!(states::commutant(z2.mats()).unwrap().dim, 2);

    let z3 = UnitaryRep::regular(&FiniteGroup::cyclic(3));
    let w = states::wedderburn(z3.mats(), 1).unwrap();
    assert_eq!(w.shape.dims(), &[1, 1, 1]);

    let s3 = UnitaryRep::regular(&FiniteGroup::symmetric(3).unwrap());
    let w = states::wedderburn(s3.mats(), 1).unwrap();
    assert_eq!(w.shape.dims(), &[1, 1, 2]);
    assert_eq!(w.multiplicities, vec![1, 1, 2]);
    // Brute force: commutant dimension is Σ mᵢ² = 1 + 1 + 4.
    assert_eq!(brute_commutant_dim(s3.mats()), 6);
}

// ---- cpmaps ----

/// Partial transpose on the second factor of C² ⊗ C², index a·2 + j.
fn partial_transpose(m: &Mat) -> Mat {
    DMatrix::from_fn(4, 4, |r, s| {
        let (a, j) = (r / 2, r % 2);
        let (b, k) = (s / 2, s % 2);
        m[(a * 2 + k, b * 2 + j)]
    })
}

#[test]
fn transpose_is_not_completely_positive() {
    // Choi matrix of the transpose is the swap, eigenvalues {1,1,1,-1}.
    let swap = DMatrix::from_fn(4, 4, |r, s| if r == (s % 2) * 2 + s / 2 { c(1.0) } else { c(0.0) });
    assert_eq!(brute_eigs(&swap), vec![-1.0, 1.0, 1.0, 1.0]);
    let t = LinMapAB::transpose(2);
    let report = t.is_cp(&tol()).unwrap();
    assert!(!report.cp);
    assert!((report.min_choi_eig + 1.0).abs() < 1e-9);
    assert!(!t.positivity_check(&tol(), 200, 3).falsified);

    // id ⊗ T on the maximally entangled projector.
    let mut omega = CVec::zeros(4);
    omega[0] = c(std::f64::consts::FRAC_1_SQRT_2);
    omega[3] = c(std::f64::consts::FRAC_1_SQRT_2);
    let proj = &omega * omega.adjoint();
    let brute = brute_eigs(&partial_transpose(&proj));
    assert!((brute[0] + 0.5).abs() < 1e-12);
    let via = t.amplify(2).unwrap().apply(&AlgElem::from_matrix(proj).unwrap()).unwrap();
    assert!((brute_eigs(&via)[0] + 0.5).abs() < 1e-12);
}

#[test]
fn homomorphisms_and_commutative_sources_are_cp() {
    let shape = BlockShape::new(vec![1, 2]).unwrap();
    let mut rng = random::seeded(8);
    let v = random::unitary(&mut rng, 3);
    let hom = LinMapAB::from_fn(&shape, 3, |a| v.adjoint() * a.to_dense() * &v).unwrap();
    assert!(hom.is_cp(&tol()).unwrap().cp);
    let q = random::povm(&mut rng, 3, 4).quantization_map();
    assert!(q.is_cp(&tol()).unwrap().cp);
}

#[test]
fn depolarizing_kraus_rank() {
    for n in 2..=3 {
        let q = LinMapAB::depolarizing(n);
        let d = q.stinespring(&tol()).unwrap();
        // Kraus rank n²: the Choi matrix of A ↦ Tr(A)/n·𝕀 is 𝕀/n on C^{n²}.
        let choi: Mat = q.choi_blocks()[0].clone();
        assert_eq!(brute_rank(&choi), n * n);
        assert_eq!(d.block_multiplicities(), vec![n * n]);
        assert_eq!(d.dilation_dim(), n * n * n);
        assert!(d.residual <= 1e-10);
    }
}

#[test]
fn povm_quantization_dilates_to_naimark() {
    let mut rng = random::seeded(9);
    let p = random::povm(&mut rng, 2, 3);
    let st = p.quantization_map().stinespring(&tol()).unwrap();
    let nm = p.naimark(&tol()).unwrap();
    assert_eq!(st.dilation_dim(), nm.pvm.dim());
    for (x, e) in p.effects().iter().enumerate() {
        let pi = st.rep.apply(&AlgElem::matrix_unit(&BlockShape::commutative(3), x)).unwrap();
        assert!(linalg::max_diff(&(st.w.adjoint() * pi * &st.w), e) < 1e-9);
        // p E p = W A W*, the compression identity.
        let pp = &nm.p * &nm.pvm.effects()[x] * &nm.p;
        assert!(linalg::max_diff(&pp, &(&nm.w * e * nm.w.adjoint())) < 1e-9);
    }
}

// ---- povm ----

#[test]
fn trine_by_hand() {
    let t = Povm::trine();
    let sum: Mat = t.effects().iter().fold(linalg::zeros(2, 2), |acc, e| acc + e);
    assert!(linalg::max_diff(&sum, &linalg::identity(2)) < 1e-15);
    let check = t.validate(&tol());
    assert!(check.valid && !check.is_pvm);
    // E₀² = (4/9)|ψ₀⟩⟨ψ₀| ≠ E₀.
    assert!(linalg::max_diff(&(&t.effects()[0] * &t.effects()[0]), &t.effects()[0]) > 0.2);

    let n = t.naimark(&tol()).unwrap();
    assert_eq!(n.pvm.dim(), 3);
    for e in n.pvm.effects() {
        assert_eq!(brute_rank(e), 1);
    }
    let rho = State::new(BlockShape::full(2), vec![real(2, 2, &[1.0, 0.0, 0.0, 0.0])]).unwrap();
    assert!((t.localization_prob(&rho, &["0"]).unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn povm_map_round_trip() {
    let mut rng = random::seeded(10);
    let p = random::povm(&mut rng, 3, 4);
    let back = opalg::povm::povm_of(&p.quantization_map(), &tol()).unwrap();
    for (a, b) in p.effects().iter().zip(back.effects()) {
        assert!(linalg::max_diff(a, b) < 1e-12);
    }
    let n = p.naimark(&tol()).unwrap();
    assert!(n.residual < 1e-9);
}

#[test]
fn frames_resolve_identity() {
    let oct = Frame::octahedral();
    let q1 = oct.povm().unwrap().quantize(&[c(1.0); 6]).unwrap();
    assert!(linalg::max_diff(&q1, &linalg::identity(2)) < 1e-12);
    let mut rng = random::seeded(11);
    for _ in 0..10 {
        let f = Frame::random_tight(&mut rng, 3, 5).unwrap();
        let w = f.analysis_map();
        assert!(linalg::max_diff(&(w.adjoint() * &w), &linalg::identity(3)) < 1e-12);
    }
}

// ---- groups ----

#[test]
fn z2_convolution_by_hand() {
    let g = FiniteGroup::cyclic(2);
    let (a, b, cc, d) = (c(1.5), c(-2.0), C64::new(0.5, 1.0), c(3.0));
    let f = GroupFn::new(vec![a, b]);
    let h = GroupFn::new(vec![cc, d]);
    let conv = g.convolve(&f, &h).unwrap();
    assert!((conv.values[0] - (a * cc + b * d)).norm() < 1e-15);
    assert!((conv.values[1] - (a * d + b * cc)).norm() < 1e-15);
}

#[test]
fn left_regular_representation_is_faithful() {
    let g = FiniteGroup::dihedral(3);
    let reg = UnitaryRep::regular(&g).to_algebra_rep();
    // The images of δ_x are linearly independent, so π_L(f) = 0 forces f = 0.
    let stacked = DMatrix::from_fn(36, 6, |r, x| reg.images()[x][(r / 6, r % 6)]);
    assert_eq!(brute_rank(&stacked), 6);
    let mut rng = random::seeded(12);
    for _ in 0..100 {
        let f = GroupFn::new((0..6).map(|_| random::gaussian(&mut rng)).collect());
        assert!(linalg::op_norm(&reg.apply(&f).unwrap()) > 1e-6);
    }
}

#[test]
fn group_algebra_round_trip() {
    let g = FiniteGroup::quaternion();
    let u = opalg::groups::group_cstar(&g, 0).unwrap().irreps.pop().unwrap();
    let alg = u.to_algebra_rep();
    for x in 0..g.order() {
        assert_eq!(alg.apply(&g.delta(x)).unwrap(), u.mats()[x]);
    }
    let back = GroupAlgebraRep::new(&g, u.dim(), alg.images().to_vec())
        .unwrap()
        .to_unitary_rep(&g, &tol())
        .unwrap();
    for (a, b) in back.mats().iter().zip(u.mats()) {
        assert!(linalg::max_diff(a, b) < 1e-12);
    }
}

#[test]
fn z4_characters_form_the_dft() {
    let f = abelian_fourier(&FiniteGroup::cyclic(4), &tol()).unwrap();
    for (k, ch) in f.characters.iter().enumerate() {
        for x in 0..4 {
            let expected = C64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * (k * x) as f64);
            assert!((ch.values[x] - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn convolution_theorem_on_z6() {
    let g = FiniteGroup::cyclic(6);
    let f = abelian_fourier(&g, &tol()).unwrap();
    let mut rng = random::seeded(13);
    for _ in 0..20 {
        let a = GroupFn::new((0..6).map(|_| random::gaussian(&mut rng)).collect());
        let b = GroupFn::new((0..6).map(|_| random::gaussian(&mut rng)).collect());
        // Brute-force cyclic convolution.
        let conv: Vec<C64> = (0..6)
            .map(|x| (0..6).map(|y| a.values[y] * b.values[(x + 6 - y) % 6]).sum())
            .collect();
        let lhs = f.transform(&GroupFn::new(conv)).unwrap();
        let (fa, fb) = (f.transform(&a).unwrap(), f.transform(&b).unwrap());
        for k in 0..6 {
            assert!((lhs[k] - fa[k] * fb[k]).norm() < 1e-10);
        }
    }
}

#[test]
fn group_cstar_shapes() {
    for n in 2..=6 {
        assert_eq!(group_cstar(&FiniteGroup::cyclic(n), 0).unwrap().shape.dims(), vec![1; n].as_slice());
    }
    assert_eq!(group_cstar(&FiniteGroup::symmetric(3).unwrap(), 0).unwrap().shape.dims(), &[1, 1, 2]);
    assert_eq!(group_cstar(&FiniteGroup::quaternion(), 0).unwrap().shape.dims(), &[1, 1, 1, 1, 2]);
}

#[test]
fn transformation_group_algebras_are_full_matrix_algebras() {
    for n in 2..=4 {
        let g = FiniteGroup::cyclic(n);
        let cg = cstar_gg(&g, &GAction::translation(&g)).unwrap();
        let stacked = DMatrix::from_fn(n * n, cg.images.len(), |r, k| cg.images[k][(r / n, r % n)]);
        assert_eq!(brute_rank(&stacked), n * n);
        assert_eq!(cg.span_dim, n * n);
    }
}

#[test]
fn invariant_states_give_covariant_pairs() {
    let g = FiniteGroup::cyclic(3);
    let uniform = State::tracial(&BlockShape::commutative(3));
    let cov = invariant_state_cov(&g, &AlgebraAction::Points(GAction::translation(&g)), &uniform, &tol()).unwrap();
    assert!(cov.u.equivalence(&UnitaryRep::regular(&g)).unwrap().is_some());
    assert!(cov.covariance_residual <= 1e-10);

    // Ad(U₀) on M2 with U₀ = diag(1, -1), a Z2 action; the trace is invariant.
    let z2 = FiniteGroup::cyclic(2);
    let u0 = AlgElem::from_matrix(real(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
    let act = AlgebraAction::Inner(vec![AlgElem::identity(&BlockShape::full(2)), u0]);
    let cov = invariant_state_cov(&z2, &act, &State::tracial(&BlockShape::full(2)), &tol()).unwrap();
    assert!(cov.covariance_residual <= 1e-10);
    assert!(cov.fixed_residual <= 1e-10);
}

// ---- hmod ----

#[test]
fn module_norms_of_fixtures() {
    let mut rng = random::seeded(14);
    let shape = BlockShape::full(3);
    let e = HModule::over_itself(&shape);
    for _ in 0..10 {
        let a = random::element(&mut rng, &shape);
        let psi = CVec::from_vec(a.coeffs());
        assert!((e.norm(&psi).unwrap() - a.op_norm()).abs() < 1e-10 * (1.0 + a.op_norm()));
    }
    let e = HModule::standard(4);
    let z = random::gaussian_vec(&mut rng, 4);
    let w = random::gaussian_vec(&mut rng, 4);
    let ip = e.inner(&z, &w).unwrap().block(0)[(0, 0)];
    assert!((ip - z.dotc(&w)).norm() < 1e-12);
}

#[test]
fn cauchy_schwarz_as_psd_inequality() {
    // ⟨Ψ,Φ⟩*⟨Ψ,Φ⟩ ≤ ‖Ψ‖² ⟨Φ,Φ⟩ in the base algebra.
    let e = HModule::rectangular(3, 2);
    let mut rng = random::seeded(15);
    for _ in 0..50 {
        let psi = random::gaussian_vec(&mut rng, 6);
        let phi = random::gaussian_vec(&mut rng, 6);
        let ip = e.inner(&psi, &phi).unwrap();
        let lhs = ip.star().mul(&ip).unwrap();
        let rhs = e.inner(&phi, &phi).unwrap().scale_re(e.norm(&psi).unwrap().powi(2));
        let diff = rhs.sub(&lhs).unwrap();
        assert!(brute_eigs(&linalg::hermitian_part(diff.block(0)))[0] >= -1e-10 * (1.0 + rhs.op_norm()));
    }
}

#[test]
fn compact_operator_algebras() {
    assert_eq!(compacts(&HModule::standard(4), &tol(), 0).unwrap().shape.dims(), &[4]);
    let b = BlockShape::new(vec![1, 3]).unwrap();
    assert_eq!(compacts(&HModule::over_itself(&b), &tol(), 0).unwrap().shape, b);
    let k = compacts(&HModule::rectangular(2, 4), &tol(), 0).unwrap();
    assert_eq!(k.dim(), 4);
}

#[test]
fn two_point_bundle() {
    let p = vec![real(2, 2, &[1.0, 0.0, 0.0, 0.0]), real(2, 2, &[0.0, 0.0, 0.0, 1.0])];
    let ss = serre_swan(2, &p, &tol()).unwrap();
    assert_eq!(ss.module.carrier_dim(), 2);
    assert_eq!(ss.fiber_ranks, vec![1, 1]);
    assert_eq!(compacts(&ss.module, &tol(), 0).unwrap().shape.dims(), &[1, 1]);
}

// ---- induce ----

#[test]
fn sign_cosets_of_s3() {
    let g = FiniteGroup::symmetric(3).unwrap();
    let a3 = Subgroup::new(&g, &[0, 3, 4]).unwrap();
    let cs = cosets(&g, &a3).unwrap();
    assert_eq!(cs.len(), 2);
    // Brute-force parity of the lexicographic permutations.
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for (x, p) in perms.iter().enumerate() {
        let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        assert_eq!(cs.action.act(x, 0), inversions % 2);
    }
}

#[test]
fn induced_from_trivial_subgroup_is_regular() {
    for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3).unwrap()] {
        let h = Subgroup::trivial();
        let sys = induce(&g, &h, &UnitaryRep::trivial(&h.as_group(&g), 1), &tol()).unwrap();
        assert!(sys.rep.equivalence(&UnitaryRep::regular(&g)).unwrap().is_some());
    }
}

#[test]
fn z4_over_z2_has_two_systems() {
    let g = FiniteGroup::cyclic(4);
    let h = Subgroup::new(&g, &[0, 2]).unwrap();
    let systems = irreducible_systems(&g, &h, 0, &tol()).unwrap();
    assert_eq!(systems.len(), 2);
    // Inequivalent: the restriction to H of each carries a different character.
    let signs: BTreeSet<i64> = systems
        .iter()
        .map(|s| {
            let u2 = &s.u.mats()[2];
            let p0 = &s.proj[0];
            let v = linalg::range_basis(p0, 1e-9);
            (v.adjoint() * u2 * &v)[(0, 0)].re.round() as i64
        })
        .collect();
    assert_eq!(signs, BTreeSet::from([-1, 1]));
}
