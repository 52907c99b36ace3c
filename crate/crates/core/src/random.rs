//! Seeded generators for test inputs: Gaussian matrices, Haar-ish unitaries,
//! states, Kraus-form CP maps and POVMs.
//!
//! Everything takes an explicit `rand::Rng`, so callers control
//! reproducibility. These generators use only closed-form constructions
//! (Kraus sums, Gram matrices), never the routines they are used to test.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgElem, BlockShape};
use crate::cpmaps::LinMapAB;
use crate::linalg::{self, CVec, Mat};
use crate::povm::Povm;
use crate::states::State;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian `(x + iy)/√2`.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    C64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_mat<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

pub fn unit_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    let v = gaussian_vec(rng, n);
    let len = v.norm();
    v.unscale(len)
}

/// Random element with Gaussian entries in every block.
pub fn element<R: Rng + ?Sized>(rng: &mut R, shape: &BlockShape) -> AlgElem {
    let blocks = shape.dims().iter().map(|&n| gaussian_mat(rng, n, n)).collect();
    AlgElem::new(shape.clone(), blocks).expect("shape-consistent blocks")
}

pub fn self_adjoint<R: Rng + ?Sized>(rng: &mut R, shape: &BlockShape) -> AlgElem {
    let a = element(rng, shape);
    a.add(&a.star()).expect("same shape").scale_re(0.5)
}

/// Unitary from the QR factorisation of a Gaussian matrix, with the phases of
/// `R`'s diagonal divided out.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let qr = gaussian_mat(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random normal element: blockwise `U diag(λ) U†` with Gaussian `λ`.
pub fn normal<R: Rng + ?Sized>(rng: &mut R, shape: &BlockShape) -> AlgElem {
    let blocks = shape
        .dims()
        .iter()
        .map(|&n| {
            let u = unitary(rng, n);
            let d = Mat::from_diagonal(&gaussian_vec(rng, n));
            &u * d * u.adjoint()
        })
        .collect();
    AlgElem::new(shape.clone(), blocks).expect("shape-consistent blocks")
}

/// Full-rank mixed state: `W W†` normalised, with Gaussian `W`.
pub fn mixed_state<R: Rng + ?Sized>(rng: &mut R, shape: &BlockShape) -> State {
    let raw: Vec<Mat> = shape
        .dims()
        .iter()
        .map(|&n| {
            let w = gaussian_mat(rng, n, n);
            &w * w.adjoint()
        })
        .collect();
    let total: f64 = raw.iter().map(|r| r.trace().re).sum();
    State::new(shape.clone(), raw.into_iter().map(|r| r.unscale(total)).collect())
        .expect("valid by construction")
}

/// Vector state `|ψ⟩⟨ψ|` supported in a single randomly chosen block.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, shape: &BlockShape) -> State {
    let block = rng.gen_range(0..shape.num_blocks());
    let densities = shape
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            if i == block {
                let v = unit_vec(rng, n);
                &v * v.adjoint()
            } else {
                linalg::zeros(n, n)
            }
        })
        .collect();
    State::new(shape.clone(), densities).expect("valid by construction")
}

/// Unital CP map `Q(A) = Σₗ Kₗ† A Kₗ` from `k` Gaussian Kraus operators
/// `Kₗ : ℂ^{target} → ℂ^{Σnᵢ}`, renormalised by `S^{-1/2}` on both sides where
/// `S = Σ Kₗ†Kₗ`, so that `Q(𝕀) = 𝕀`. Needs `k·Σnᵢ ≥ target_dim`, otherwise `S`
/// is singular.
pub fn unital_cp_map<R: Rng + ?Sized>(
    rng: &mut R,
    source: &BlockShape,
    target_dim: usize,
    k: usize,
) -> LinMapAB {
    let n = source.total_dim();
    let mut kraus: Vec<Mat> = (0..k).map(|_| gaussian_mat(rng, n, target_dim)).collect();
    let s: Mat = kraus.iter().map(|kk| kk.adjoint() * kk).fold(
        linalg::zeros(target_dim, target_dim),
        |acc, x| acc + x,
    );
    let (vals, vecs) = linalg::eigh(&s);
    let inv_sqrt = &vecs
        * Mat::from_diagonal(&DVector::from_iterator(
            target_dim,
            vals.iter().map(|&l| C64::from(1.0 / l.sqrt())),
        ))
        * vecs.adjoint();
    for kk in kraus.iter_mut() {
        *kk = &*kk * &inv_sqrt;
    }
    kraus_map(source, &kraus)
}

/// The map `A ↦ Σₗ Kₗ† A_dense Kₗ` written out on the matrix-unit basis.
pub fn kraus_map(source: &BlockShape, kraus: &[Mat]) -> LinMapAB {
    let target_dim = kraus[0].ncols();
    let images = (0..source.algebra_dim())
        .map(|idx| {
            let e = AlgElem::matrix_unit(source, idx).to_dense();
            kraus
                .iter()
                .map(|kk| kk.adjoint() * &e * kk)
                .fold(linalg::zeros(target_dim, target_dim), |acc, x| acc + x)
        })
        .collect();
    LinMapAB::new(source.clone(), target_dim, images).expect("consistent sizes")
}

/// POVM with `m` effects `S^{-1/2} Gₗ S^{-1/2}` built from Gaussian Gram
/// matrices `Gₗ = WₗWₗ†`, `S = Σ Gₗ`.
pub fn povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, m: usize) -> Povm {
    let grams: Vec<Mat> = (0..m)
        .map(|_| {
            let w = gaussian_mat(rng, dim, dim);
            &w * w.adjoint()
        })
        .collect();
    let s = grams
        .iter()
        .fold(linalg::zeros(dim, dim), |acc, g| acc + g);
    let (vals, vecs) = linalg::eigh(&s);
    let inv_sqrt = &vecs
        * Mat::from_diagonal(&DVector::from_iterator(
            dim,
            vals.iter().map(|&l| C64::from(1.0 / l.sqrt())),
        ))
        * vecs.adjoint();
    let effects = grams.iter().map(|g| &inv_sqrt * g * &inv_sqrt).collect();
    let labels = (0..m).map(|i| i.to_string()).collect();
    Povm::new(dim, labels, effects).expect("consistent sizes")
}
