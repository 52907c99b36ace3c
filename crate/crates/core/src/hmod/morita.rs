use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, GramQuotient, Mat};
use crate::states::{Representation, RANK_TOL};

use super::{Compacts, HModule};

/// A representation induced from the base algebra of a module: the space
/// `E ⊗ ℂᵏ` with the form `⟨Ψ⊗v, Φ⊗w⟩ = ⟨v, π_χ(⟨Ψ,Φ⟩_B) w⟩`, divided by
/// its null space. Adjointable operators `T` on `E` act as `T ⊗ 𝕀`.
#[derive(Debug, Clone)]
pub struct InducedRep {
    pub dim: usize,
    inducing_dim: usize,
    quotient: GramQuotient,
}

impl InducedRep {
    /// The operator `[Ψ ⊗ v] ↦ [TΨ ⊗ v]` for an adjointable `T` on carrier
    /// coordinates.
    pub fn apply(&self, t: &Mat) -> Mat {
        self.quotient
            .descend(&linalg::kron(t, &linalg::identity(self.inducing_dim)))
    }

    /// Orthonormal coordinates of `[Ψ ⊗ v]`.
    pub fn class_of(&self, psi: &CVec, v: &CVec) -> CVec {
        let beta = DVector::from_iterator(
            psi.len() * v.len(),
            psi.iter().flat_map(|&a| v.iter().map(move |&b| a * b)),
        );
        self.quotient.class_of(&beta)
    }

    /// The representation of an algebra acting adjointably through the
    /// operators `ops` (one per matrix unit of `shape`).
    pub fn representation(&self, shape: &BlockShape, ops: &[Mat]) -> Result<Representation> {
        Representation::new(shape.clone(), self.dim, ops.iter().map(|t| self.apply(t)).collect())
    }

    /// The induced representation of the compact operators of the module.
    pub fn compacts_rep(&self, k: &Compacts) -> Result<Representation> {
        let ops = (0..k.shape.algebra_dim())
            .map(|a| k.from_blocks(&AlgElem::matrix_unit(&k.shape, a)))
            .collect::<Result<Vec<_>>>()?;
        self.representation(&k.shape, &ops)
    }
}

/// Rieffel induction of `π_χ` through the module `e`.
pub fn rieffel_induce(e: &HModule, chi: &Representation, tol: &Tolerances) -> Result<InducedRep> {
    if chi.source() != e.base() {
        return Err(Error::Invalid(format!(
            "representation of {} cannot be induced through a module over {}",
            chi.source(),
            e.base()
        )));
    }
    let unit = chi.apply(&AlgElem::identity(e.base()))?;
    let deg = linalg::max_diff(&unit, &linalg::identity(chi.dim()));
    if deg > tol.eps_eq.max(1e-9) {
        return Err(Error::precondition(
            "inducing representation is degenerate; ‖π(𝕀) − 𝕀‖",
            deg,
        ));
    }
    let c = e.carrier_dim();
    let k = chi.dim();
    let mut gram = linalg::zeros(c * k, c * k);
    for p in 0..c {
        for q in 0..c {
            let block = chi.apply(&e.inner_table()[p * c + q])?;
            gram.view_mut((p * k, q * k), (k, k)).copy_from(&block);
        }
    }
    let quotient = GramQuotient::new(&gram, tol.eps_psd);
    Ok(InducedRep {
        dim: quotient.dim(),
        inducing_dim: k,
        quotient,
    })
}

/// A bimodule `A ⇌ E ⇌ B`: a right Hilbert `B`-module with a left action of
/// `A` and an `A`-valued inner product, linear in the first slot.
#[derive(Debug, Clone)]
pub struct DualPair {
    pub left: BlockShape,
    pub module: HModule,
    /// `Ψ ↦ aΨ` for each matrix unit `a` of `A`.
    pub left_action: Vec<Mat>,
    /// `⟨ψ_p, ψ_q⟩_A`, `p`-major.
    pub a_inner: Vec<AlgElem>,
}

impl DualPair {
    pub fn new(
        left: BlockShape,
        module: HModule,
        left_action: Vec<Mat>,
        a_inner: Vec<AlgElem>,
    ) -> Result<Self> {
        let c = module.carrier_dim();
        if left_action.len() != left.algebra_dim() {
            return Err(Error::Dimension(format!(
                "{} left-action matrices for an algebra of dimension {}",
                left_action.len(),
                left.algebra_dim()
            )));
        }
        if left_action.iter().any(|m| m.nrows() != c || m.ncols() != c) {
            return Err(Error::Dimension(format!("left action matrices must be {c}x{c}")));
        }
        if a_inner.len() != c * c || a_inner.iter().any(|v| v.shape() != &left) {
            return Err(Error::Dimension(format!(
                "left inner-product table must hold {} elements of {left}",
                c * c
            )));
        }
        Ok(DualPair {
            left,
            module,
            left_action,
            a_inner,
        })
    }

    /// `Mₙ ⇌ ℂⁿ ⇌ ℂ` with `(⟨z, w⟩_{Mₙ})ᵢⱼ = zⁱ w̄ʲ`.
    pub fn column(n: usize) -> Self {
        let left = BlockShape::full(n);
        let module = HModule::standard(n);
        let left_action = (0..n * n)
            .map(|a| AlgElem::matrix_unit(&left, a).to_dense())
            .collect();
        let a_inner = (0..n * n)
            .map(|pq| AlgElem::matrix_unit(&left, left.basis_index(0, pq / n, pq % n)))
            .collect();
        DualPair::new(left, module, left_action, a_inner).expect("consistent")
    }

    /// `Mₙ ⇌ M_{n×m} ⇌ M_m` with `⟨X, Y⟩_A = XY*` and `⟨X, Y⟩_B = X*Y`.
    pub fn rectangular(n: usize, m: usize) -> Self {
        let left = BlockShape::full(n);
        let module = HModule::rectangular(n, m);
        let c = n * m;
        let left_action = left
            .basis()
            .map(|(_, a, b)| {
                // E_{ab} E_{jk} = δ_{bj} E_{ak}.
                let mut l = linalg::zeros(c, c);
                for k in 0..m {
                    l[(a * m + k, b * m + k)] = C64::new(1.0, 0.0);
                }
                l
            })
            .collect();
        let a_inner = (0..c * c)
            .map(|pq| {
                let (p, q) = (pq / c, pq % c);
                let (j, k) = (p / m, p % m);
                let (j2, k2) = (q / m, q % m);
                if k == k2 {
                    AlgElem::matrix_unit(&left, left.basis_index(0, j, j2))
                } else {
                    AlgElem::zeros(&left)
                }
            })
            .collect();
        DualPair::new(left, module, left_action, a_inner).expect("consistent")
    }

    /// The matrix of `Ψ ↦ aΨ` for a general `a ∈ A`.
    pub fn left_matrix(&self, a: &AlgElem) -> Result<Mat> {
        if a.shape() != &self.left {
            AlgElem::zeros(&self.left).add(a)?;
        }
        let c = self.module.carrier_dim();
        Ok(a
            .coeffs()
            .iter()
            .zip(&self.left_action)
            .fold(linalg::zeros(c, c), |acc, (&z, l)| acc + l * z))
    }

    /// `⟨Ψ, Φ⟩_A`, linear in `Ψ`.
    pub fn a_inner(&self, psi: &CVec, phi: &CVec) -> Result<AlgElem> {
        let c = self.module.carrier_dim();
        let mut out = AlgElem::zeros(&self.left);
        for p in 0..c {
            for q in 0..c {
                let w = psi[p] * phi[q].conj();
                if w != C64::new(0.0, 0.0) {
                    out = out.add(&self.a_inner[p * c + q].scale(w))?;
                }
            }
        }
        Ok(out)
    }

    /// Worst violation of `⟨ψ_p, ψ_q⟩_A ψ_r = ψ_p ⟨ψ_q, ψ_r⟩_B` over basis
    /// triples, with the triple attaining it.
    pub fn compatibility_residual(&self) -> Result<(f64, (usize, usize, usize))> {
        let c = self.module.carrier_dim();
        let mut worst = (0.0f64, (0, 0, 0));
        for p in 0..c {
            for q in 0..c {
                let lhs_op = self.left_matrix(&self.a_inner[p * c + q])?;
                for r in 0..c {
                    let lhs = lhs_op.column(r).into_owned();
                    let rhs = self
                        .module
                        .action_matrix(&self.module.inner_table()[q * c + r])?
                        .column(p)
                        .into_owned();
                    let d = (lhs - rhs).camax();
                    if d > worst.0 {
                        worst = (d, (p, q, r));
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Dimensions of the spans of the `A`- and `B`-valued inner products.
    pub fn fullness(&self) -> (usize, usize) {
        let span = |vals: &[AlgElem]| {
            let mats: Vec<Mat> = vals
                .iter()
                .map(|v| Mat::from_column_slice(v.coeffs().len(), 1, &v.coeffs()))
                .collect();
            let cols: Vec<CVec> = mats.iter().map(|m| m.column(0).into_owned()).collect();
            let m = Mat::from_columns(&cols);
            let s = linalg::singular_values(&m);
            let smax = s.first().copied().unwrap_or(0.0);
            s.iter().filter(|&&x| smax > 0.0 && x > RANK_TOL * smax).count()
        };
        (span(&self.a_inner), span(self.module.inner_table()))
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        self.module.require_valid(tol)?;
        let (res, _) = self.compatibility_residual()?;
        if res > tol.eps_eq.max(1e-9) {
            return Err(Error::precondition(
                "⟨Ψ,Φ⟩_A Z ≠ Ψ ⟨Φ,Z⟩_B; worst residual",
                res,
            ));
        }
        let (fa, fb) = self.fullness();
        if fa != self.left.algebra_dim() || fb != self.module.base().algebra_dim() {
            return Err(Error::Invalid(format!(
                "inner products are not full: spans of dimension {fa} and {fb}, expected {} and {}",
                self.left.algebra_dim(),
                self.module.base().algebra_dim()
            )));
        }
        Ok(())
    }

    /// The conjugate bimodule `B ⇌ Ē ⇌ A`, on the same carrier
    /// coordinates (complex conjugated).
    pub fn conjugate(&self) -> Result<DualPair> {
        let a = &self.left;
        let b = self.module.base();
        let right_bar = (0..a.algebra_dim())
            .map(|i| self.left_action[a.star_index(i)].map(|z| z.conj()))
            .collect();
        let left_bar = (0..b.algebra_dim())
            .map(|i| self.module.right_action()[b.star_index(i)].map(|z| z.conj()))
            .collect();
        let module = HModule::new(
            a.clone(),
            self.module.carrier_dim(),
            right_bar,
            self.a_inner.clone(),
        )?;
        DualPair::new(b.clone(), module, left_bar, self.module.inner_table().to_vec())
    }
}

#[derive(Debug, Clone)]
pub struct Bridge {
    /// The induced representation of the left algebra.
    pub forward: Representation,
    /// Induced back through the conjugate module.
    pub back: Representation,
    /// Unitary with `U π(b) U* = back(b)`.
    pub intertwiner: Mat,
    pub residual: f64,
}

/// Induces a representation of `B` to `A` through the bimodule and back
/// through its conjugate.
pub fn imprimitivity_bridge(pair: &DualPair, pi: &Representation, tol: &Tolerances) -> Result<Bridge> {
    pair.validate(tol)?;
    let up = rieffel_induce(&pair.module, pi, tol)?;
    let forward = up.representation(&pair.left, &pair.left_action)?;
    let conj = pair.conjugate()?;
    let down = rieffel_induce(&conj.module, &forward, tol)?;
    let back = down.representation(pair.module.base(), &conj.left_action)?;
    let Some((intertwiner, residual)) = pi.equivalence(&back)? else {
        return Err(Error::Numerical(
            "round trip through the conjugate module is not equivalent to the input".into(),
        ));
    };
    Ok(Bridge {
        forward,
        back,
        intertwiner,
        residual,
    })
}
