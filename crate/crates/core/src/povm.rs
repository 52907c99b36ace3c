//! Positive-operator-valued measures on finite outcome sets, the matching
//! quantization maps, Naimark dilation, and quantization by finite frames.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::cpmaps::LinMapAB;
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, Mat};
use crate::random;
use crate::states::State;

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    outcomes: Vec<String>,
    effects: Vec<Mat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PovmCheck {
    pub valid: bool,
    pub is_pvm: bool,
}

fn min_eig(m: &Mat) -> f64 {
    linalg::eigh(&linalg::hermitian_part(m)).0[0]
}

impl Povm {
    /// Structural checks only (sizes, labels, finiteness); positivity and
    /// normalisation are reported by [`Povm::validate`].
    pub fn new(dim: usize, outcomes: Vec<String>, effects: Vec<Mat>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("POVM on a zero-dimensional space".into()));
        }
        if outcomes.is_empty() || outcomes.len() != effects.len() {
            return Err(Error::Dimension(format!(
                "{} outcome labels for {} effects",
                outcomes.len(),
                effects.len()
            )));
        }
        let distinct: BTreeSet<&String> = outcomes.iter().collect();
        if distinct.len() != outcomes.len() {
            return Err(Error::Invalid("duplicate outcome labels".into()));
        }
        for (x, e) in effects.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::Dimension(format!("effect {x} is not {dim}x{dim}")));
            }
            if !linalg::is_all_finite(e) {
                return Err(Error::Invalid(format!("effect {x} has non-finite entries")));
            }
        }
        Ok(Povm {
            dim,
            outcomes,
            effects,
        })
    }

    /// Effects labelled `"0"`, `"1"`, ….
    pub fn unlabeled(dim: usize, effects: Vec<Mat>) -> Result<Self> {
        let labels = (0..effects.len()).map(|i| i.to_string()).collect();
        Povm::new(dim, labels, effects)
    }

    /// Rank-one projections onto the standard basis of `ℂᵈ`.
    pub fn standard_basis(dim: usize) -> Self {
        let effects = (0..dim)
            .map(|i| {
                let mut e = linalg::zeros(dim, dim);
                e[(i, i)] = C64::new(1.0, 0.0);
                e
            })
            .collect();
        Povm::unlabeled(dim, effects).expect("consistent")
    }

    /// The trine POVM `{⅔|ψₖ⟩⟨ψₖ|}` on `ℂ²`, `ψₖ = (cos θₖ, sin θₖ)`,
    /// `θₖ = 2πk/3`.
    pub fn trine() -> Self {
        let effects = (0..3)
            .map(|k| {
                let psi = trine_vector(k);
                (&psi * psi.adjoint()) * C64::new(2.0 / 3.0, 0.0)
            })
            .collect();
        Povm::unlabeled(2, effects).expect("consistent")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn effects(&self) -> &[Mat] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::Invalid(format!("unknown outcome label {label:?}")))
    }

    pub fn effect(&self, label: &str) -> Result<&Mat> {
        Ok(&self.effects[self.index_of(label)?])
    }

    /// `‖Σ effects − 𝕀‖` (entrywise max).
    pub fn normalization_defect(&self) -> f64 {
        let sum = self
            .effects
            .iter()
            .fold(linalg::zeros(self.dim, self.dim), |acc, e| acc + e);
        linalg::max_diff(&sum, &linalg::identity(self.dim))
    }

    pub fn validate(&self, tol: &Tolerances) -> PovmCheck {
        let positive = self.effects.iter().all(|e| {
            linalg::max_diff(e, &e.adjoint()) <= tol.eps_eq && min_eig(e) >= -tol.eps_psd
        });
        let valid = positive && self.normalization_defect() <= tol.eps_eq;
        PovmCheck {
            valid,
            is_pvm: valid && self.multiplicativity_defect() <= tol.eps_eq,
        }
    }

    fn require_valid(&self, tol: &Tolerances) -> Result<()> {
        if !self.validate(tol).valid {
            let worst_neg = self.effects.iter().map(min_eig).fold(0.0, f64::min);
            return Err(Error::precondition(
                "invalid POVM; normalisation defect",
                self.normalization_defect().max(-worst_neg),
            ));
        }
        Ok(())
    }

    /// `max ‖E_x E_y − δ_{xy} E_x‖`; zero exactly for projection-valued
    /// measures.
    pub fn multiplicativity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (x, ex) in self.effects.iter().enumerate() {
            for (y, ey) in self.effects.iter().enumerate() {
                let prod = ex * ey;
                let d = if x == y {
                    linalg::max_diff(&prod, ex)
                } else {
                    linalg::max_abs(&prod)
                };
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `Q(f) = Σₓ f(x) A({x})`.
    pub fn quantize(&self, f: &[C64]) -> Result<Mat> {
        if f.len() != self.effects.len() {
            return Err(Error::Dimension(format!(
                "function has {} values for {} outcomes",
                f.len(),
                self.effects.len()
            )));
        }
        Ok(self
            .effects
            .iter()
            .zip(f)
            .fold(linalg::zeros(self.dim, self.dim), |acc, (e, &c)| acc + e * c))
    }

    /// The quantization `C(X) → M_d` as a linear map on the commutative
    /// algebra `ℂ^{|X|}`.
    pub fn quantization_map(&self) -> LinMapAB {
        LinMapAB::new(
            BlockShape::commutative(self.effects.len()),
            self.dim,
            self.effects.clone(),
        )
        .expect("consistent")
    }

    /// Naimark dilation through the Stinespring dilation of the
    /// quantization map.
    pub fn naimark(&self, tol: &Tolerances) -> Result<Naimark> {
        self.require_valid(tol)?;
        let st = self.quantization_map().stinespring(tol)?;
        let pvm = Povm::new(st.rep.dim(), self.outcomes.clone(), st.rep.images().to_vec())?;
        let residual = self
            .effects
            .iter()
            .zip(pvm.effects())
            .map(|(a, e)| linalg::op_norm(&(a - st.w.adjoint() * e * &st.w)))
            .fold(0.0, f64::max);
        Ok(Naimark {
            p: st.range_projection(),
            w: st.w,
            pvm,
            residual,
        })
    }

    /// `Tr(ρ · Σ_{x ∈ subset} A({x}))` for a state on `M_d`.
    pub fn localization_prob(&self, rho: &State, subset: &[&str]) -> Result<f64> {
        if rho.shape() != &BlockShape::full(self.dim) {
            return Err(Error::Dimension(format!(
                "state on {} for a POVM on C^{}",
                rho.shape(),
                self.dim
            )));
        }
        let mut indices = BTreeSet::new();
        for label in subset {
            indices.insert(self.index_of(label)?);
        }
        let density = &rho.densities()[0];
        let p: C64 = indices
            .into_iter()
            .map(|x| (density * &self.effects[x]).trace())
            .sum();
        Ok(p.re)
    }
}

/// Recovers the POVM `x ↦ Q(δ_x)` of a positive unital map on a
/// commutative algebra.
pub fn povm_of(q: &LinMapAB, tol: &Tolerances) -> Result<Povm> {
    if !q.source().is_commutative() {
        return Err(Error::Invalid(format!(
            "POVMs come from maps on commutative algebras, not {}",
            q.source()
        )));
    }
    let p = Povm::unlabeled(q.target_dim(), q.images().to_vec())?;
    p.require_valid(tol)?;
    Ok(p)
}

pub(crate) fn trine_vector(k: usize) -> Mat {
    let theta = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
    Mat::from_column_slice(2, 1, &[C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0)])
}

#[derive(Debug, Clone)]
pub struct Naimark {
    /// Projection-valued measure on the dilation space.
    pub pvm: Povm,
    /// Isometry `ℂᵈ → ℂᴰ` with `A({x}) = W* E({x}) W`.
    pub w: Mat,
    /// `W W*`.
    pub p: Mat,
    pub residual: f64,
}

/// A finite family of unit vectors with weights resolving the identity,
/// `Σ_σ μ_σ |Ψ^σ⟩⟨Ψ^σ| = 𝕀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    points: Vec<String>,
    vectors: Vec<CVec>,
    weights: Vec<f64>,
}

impl Frame {
    pub fn new(points: Vec<String>, vectors: Vec<CVec>, weights: Vec<f64>) -> Result<Self> {
        if vectors.is_empty() || points.len() != vectors.len() || weights.len() != vectors.len() {
            return Err(Error::Dimension(format!(
                "{} points, {} vectors, {} weights",
                points.len(),
                vectors.len(),
                weights.len()
            )));
        }
        let d = vectors[0].len();
        for (s, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::Dimension(format!("vector {s} has length {}", v.len())));
            }
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Invalid(format!("vector {s} has norm {}", v.norm())));
            }
        }
        if let Some(s) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Invalid(format!("weight {s} is not positive")));
        }
        Ok(Frame {
            points,
            vectors,
            weights,
        })
    }

    fn labelled(vectors: Vec<CVec>, weights: Vec<f64>) -> Result<Self> {
        let points = (0..vectors.len()).map(|i| i.to_string()).collect();
        Frame::new(points, vectors, weights)
    }

    /// The standard basis with unit weights.
    pub fn orthonormal_basis(d: usize) -> Self {
        let vectors = (0..d)
            .map(|i| {
                let mut v = CVec::zeros(d);
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Frame::labelled(vectors, vec![1.0; d]).expect("consistent")
    }

    /// The six eigenvectors of the Pauli matrices, weight `⅓` each.
    pub fn octahedral() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |a: f64, b: C64| CVec::from_vec(vec![C64::new(a, 0.0), b]);
        let vectors = vec![
            r(1.0, C64::new(0.0, 0.0)),
            r(0.0, C64::new(1.0, 0.0)),
            r(h, C64::new(h, 0.0)),
            r(h, C64::new(-h, 0.0)),
            r(h, C64::new(0.0, h)),
            r(h, C64::new(0.0, -h)),
        ];
        Frame::labelled(vectors, vec![1.0 / 3.0; 6]).expect("consistent")
    }

    /// A random tight frame of `k ≥ d` vectors: the normalised rows of a
    /// random isometry, weighted by their squared norms.
    pub fn random_tight<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Result<Self> {
        if k < d || d == 0 {
            return Err(Error::Dimension(format!("cannot build {k} frame vectors in C^{d}")));
        }
        let u = random::unitary(rng, k);
        let iso = u.columns(0, d).into_owned();
        let mut vectors = Vec::with_capacity(k);
        let mut weights = Vec::with_capacity(k);
        for row in iso.row_iter() {
            let v: CVec = row.adjoint();
            let n = v.norm();
            weights.push(n * n);
            vectors.push(v / C64::new(n, 0.0));
        }
        Frame::labelled(vectors, weights)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// `‖Σ μ_σ |Ψ^σ⟩⟨Ψ^σ| − 𝕀‖`.
    pub fn resolution_residual(&self) -> f64 {
        let d = self.dim();
        let sum = self
            .vectors
            .iter()
            .zip(&self.weights)
            .fold(linalg::zeros(d, d), |acc, (v, &w)| acc + v * v.adjoint() * C64::new(w, 0.0));
        linalg::op_norm(&(sum - linalg::identity(d)))
    }

    /// The POVM `σ ↦ μ_σ |Ψ^σ⟩⟨Ψ^σ|`.
    pub fn povm(&self) -> Result<Povm> {
        let effects = self
            .vectors
            .iter()
            .zip(&self.weights)
            .map(|(v, &w)| v * v.adjoint() * C64::new(w, 0.0))
            .collect();
        Povm::new(self.dim(), self.points.clone(), effects)
    }

    /// `W : ℂᵈ → ℓ²(points, μ)`, `(WΨ)(σ) = ⟨Ψ^σ, Ψ⟩`, written in the
    /// orthonormal basis `δ_σ / √μ_σ`.
    pub fn analysis_map(&self) -> Mat {
        let d = self.dim();
        DMatrix::from_fn(self.vectors.len(), d, |s, j| {
            self.vectors[s][j].conj() * self.weights[s].sqrt()
        })
    }
}

#[derive(Debug, Clone)]
pub struct CoherentQuantization {
    pub qf: Mat,
    pub povm: Povm,
    pub w: Mat,
}

/// `Q(f) = Σ_σ μ_σ f(σ) |Ψ^σ⟩⟨Ψ^σ| = W* M_f W`.
pub fn coherent_quantize(frame: &Frame, f: &[C64], tol: &Tolerances) -> Result<CoherentQuantization> {
    let residual = frame.resolution_residual();
    if residual > tol.eps_eq.max(1e-9) {
        return Err(Error::precondition(
            "frame does not resolve the identity; residual",
            residual,
        ));
    }
    let povm = frame.povm()?;
    let qf = povm.quantize(f)?;
    Ok(CoherentQuantization {
        qf,
        povm,
        w: frame.analysis_map(),
    })
}

/// The quantization map of a POVM applied to an element of `ℂ^{|X|}`.
pub fn quantize_elem(p: &Povm, f: &AlgElem) -> Result<Mat> {
    p.quantization_map().apply(f)
}
