use num_complex::Complex64 as C64;

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, Mat};
use crate::states::{wedderburn, Wedderburn, RANK_TOL};

use super::HModule;

/// The algebra spanned by rank-one operators `T_{Ψ,Φ}` on a module,
/// together with its identification with a block algebra.
///
/// Internally the carrier is re-coordinatised by `G^{1/2}`, `G` the scalar
/// Gram matrix of the canonical trace; in those coordinates the module
/// adjoint is the ordinary conjugate transpose.
#[derive(Debug, Clone)]
pub struct Compacts {
    /// Frobenius-orthonormal (in the internal coordinates) spanning set,
    /// returned in carrier coordinates.
    pub basis: Vec<Mat>,
    pub shape: BlockShape,
    /// Multiplicity of each block on the carrier.
    pub multiplicities: Vec<usize>,
    g_half: Mat,
    g_half_inv: Mat,
    decomposition: Wedderburn,
}

fn sqrt_and_inverse(g: &Mat) -> Result<(Mat, Mat)> {
    let (vals, vecs) = linalg::eigh(&linalg::hermitian_part(g));
    if vals[0] <= 0.0 {
        return Err(Error::precondition(
            "module inner product is not definite; min scalar Gram eigenvalue",
            vals[0],
        ));
    }
    let diag = |f: &dyn Fn(f64) -> f64| {
        Mat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&l| C64::new(f(l), 0.0))))
    };
    let half = &vecs * diag(&|l| l.sqrt()) * vecs.adjoint();
    let half_inv = &vecs * diag(&|l| 1.0 / l.sqrt()) * vecs.adjoint();
    Ok((half, half_inv))
}

impl Compacts {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn to_internal(&self, t: &Mat) -> Mat {
        &self.g_half * t * &self.g_half_inv
    }

    fn from_internal(&self, t: &Mat) -> Mat {
        &self.g_half_inv * t * &self.g_half
    }

    /// Image of a compact operator in `⊕ M_{nᵢ}`.
    pub fn to_blocks(&self, t: &Mat) -> Result<AlgElem> {
        let c = self.g_half.nrows();
        if t.nrows() != c || t.ncols() != c {
            return Err(Error::Dimension(format!("operator is not {c}x{c}")));
        }
        let internal = self.to_internal(t);
        let blocks = self
            .decomposition
            .components
            .iter()
            .map(|comp| comp.compress(&internal))
            .collect();
        AlgElem::new(self.shape.clone(), blocks)
    }

    /// The compact operator (carrier coordinates) with the given blocks.
    pub fn from_blocks(&self, a: &AlgElem) -> Result<Mat> {
        if a.shape() != &self.shape {
            AlgElem::zeros(&self.shape).add(a)?;
        }
        let c = self.g_half.nrows();
        let mut internal = linalg::zeros(c, c);
        for (comp, block) in self.decomposition.components.iter().zip(a.blocks()) {
            for v in &comp.copies {
                internal += v * block * v.adjoint();
            }
        }
        Ok(self.from_internal(&internal))
    }

    /// Largest distance from the span of products `bᵢ bⱼ` and adjoints of
    /// basis elements, measured in the internal coordinates.
    pub fn closure_defect(&self) -> f64 {
        let internal: Vec<Mat> = self.basis.iter().map(|b| self.to_internal(b)).collect();
        let project = |m: &Mat| {
            let mut rest = m.clone();
            for b in &internal {
                rest -= b * linalg::frobenius_inner(b, m);
            }
            rest.norm()
        };
        let mut worst = 0.0f64;
        for a in &internal {
            worst = worst.max(project(&a.adjoint()));
            for b in &internal {
                worst = worst.max(project(&(a * b)));
            }
        }
        worst
    }
}

/// The compact operators of a module: the span of all `T_{ψ_p, ψ_q}` on
/// basis vectors, and its block structure.
pub fn compacts(e: &HModule, tol: &Tolerances, seed: u64) -> Result<Compacts> {
    e.require_valid(tol)?;
    let c = e.carrier_dim();
    let (g_half, g_half_inv) = sqrt_and_inverse(&e.scalar_gram())?;
    let mut rank_ones = Vec::with_capacity(c * c);
    for p in 0..c {
        for q in 0..c {
            let t = e.rank_one(&unit(c, p), &unit(c, q))?;
            rank_ones.push(&g_half * t * &g_half_inv);
        }
    }
    let internal = linalg::span_basis(&rank_ones, RANK_TOL);
    if internal.is_empty() {
        return Err(Error::Invalid("module has no nonzero rank-one operators".into()));
    }
    let id = linalg::identity(c);
    let mut rest = id.clone();
    for b in &internal {
        rest -= b * linalg::frobenius_inner(b, &id);
    }
    if rest.norm() > 1e-8 * (c as f64).sqrt() {
        return Err(Error::Numerical(
            "the identity is not a finite sum of rank-one operators".into(),
        ));
    }
    let decomposition = wedderburn(&internal, seed)?;
    let basis = internal
        .iter()
        .map(|b| &g_half_inv * b * &g_half)
        .collect();
    Ok(Compacts {
        basis,
        shape: decomposition.shape.clone(),
        multiplicities: decomposition.multiplicities.clone(),
        g_half,
        g_half_inv,
        decomposition,
    })
}

fn unit(c: usize, p: usize) -> CVec {
    let mut e = CVec::zeros(c);
    e[p] = C64::new(1.0, 0.0);
    e
}
