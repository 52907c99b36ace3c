//! Finite-dimensional Hilbert C*-modules: right modules over a block
//! algebra `B` with a `B`-valued inner product, their rank-one operators,
//! projective modules over `C(X)`, Morita dual pairs and Rieffel induction.
//!
//! A module is stored on a carrier basis `ψ₀, …, ψ_{c−1}`: the right action
//! of each matrix unit of `B` is a `c × c` matrix on carrier coordinates,
//! and the inner product is the table `⟨ψ_p, ψ_q⟩_B`, antilinear in the
//! first slot.

mod compacts;
mod morita;

pub use compacts::{compacts, Compacts};
pub use morita::{imprimitivity_bridge, rieffel_induce, Bridge, DualPair, InducedRep};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::algebra::{right_mult_matrix, AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, Mat};
use crate::random;

#[derive(Debug, Clone, PartialEq)]
pub struct HModule {
    base: BlockShape,
    carrier_dim: usize,
    right_action: Vec<Mat>,
    inner: Vec<AlgElem>,
}

/// Outcome of one module axiom or inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub residual: f64,
    pub passed: bool,
    /// Index of the sampled vector pair (or basis pair) attaining the
    /// residual, when relevant.
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleReport {
    pub checks: Vec<AxiomCheck>,
}

impl ModuleReport {
    pub fn valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `τ(b) = Σᵢ Tr bᵢ`, a faithful trace on any block algebra.
fn canonical_trace(b: &AlgElem) -> C64 {
    b.trace()
}

impl HModule {
    pub fn new(
        base: BlockShape,
        carrier_dim: usize,
        right_action: Vec<Mat>,
        inner: Vec<AlgElem>,
    ) -> Result<Self> {
        if carrier_dim == 0 {
            return Err(Error::Dimension("module with an empty carrier".into()));
        }
        if right_action.len() != base.algebra_dim() {
            return Err(Error::Dimension(format!(
                "{} action matrices for a base of dimension {}",
                right_action.len(),
                base.algebra_dim()
            )));
        }
        if let Some(b) = right_action
            .iter()
            .position(|m| m.nrows() != carrier_dim || m.ncols() != carrier_dim)
        {
            return Err(Error::Dimension(format!(
                "action matrix {b} is not {carrier_dim}x{carrier_dim}"
            )));
        }
        if inner.len() != carrier_dim * carrier_dim {
            return Err(Error::Dimension(format!(
                "inner-product table has {} entries, expected {}",
                inner.len(),
                carrier_dim * carrier_dim
            )));
        }
        if let Some(i) = inner.iter().position(|v| v.shape() != &base) {
            return Err(Error::Invalid(format!(
                "inner product entry {i} lives in {}, not {base}",
                inner[i].shape()
            )));
        }
        Ok(HModule {
            base,
            carrier_dim,
            right_action,
            inner,
        })
    }

    /// `ℂⁿ` over `ℂ` with the standard inner product.
    pub fn standard(n: usize) -> Self {
        let base = BlockShape::full(1);
        let inner = (0..n * n)
            .map(|pq| {
                let v = if pq / n == pq % n { 1.0 } else { 0.0 };
                AlgElem::scalar(&base, C64::new(v, 0.0))
            })
            .collect();
        HModule::new(base, n, vec![linalg::identity(n)], inner).expect("consistent")
    }

    /// `B` over itself with `⟨A, C⟩ = A*C`; carrier basis = matrix units.
    pub fn over_itself(shape: &BlockShape) -> Self {
        let n = shape.algebra_dim();
        let units: Vec<AlgElem> = (0..n).map(|a| AlgElem::matrix_unit(shape, a)).collect();
        let right_action = units.iter().map(right_mult_matrix).collect();
        let inner = (0..n * n)
            .map(|pq| units[pq / n].star().mul(&units[pq % n]).expect("same shape"))
            .collect();
        HModule::new(shape.clone(), n, right_action, inner).expect("consistent")
    }

    /// `M_{n×m}` over `M_m` with `⟨X, Y⟩ = X*Y`; carrier basis `E_{jk}` at
    /// index `j·m + k`.
    pub fn rectangular(n: usize, m: usize) -> Self {
        let base = BlockShape::full(m);
        let c = n * m;
        let right_action = base
            .basis()
            .map(|(_, k, l)| {
                // E_{jk'} F_{kl} = δ_{k'k} E_{jl}.
                let mut r = linalg::zeros(c, c);
                for j in 0..n {
                    r[(j * m + l, j * m + k)] = C64::new(1.0, 0.0);
                }
                r
            })
            .collect();
        let inner = (0..c * c)
            .map(|pq| {
                let (p, q) = (pq / c, pq % c);
                let (j, k) = (p / m, p % m);
                let (j2, k2) = (q / m, q % m);
                if j == j2 {
                    AlgElem::matrix_unit(&base, base.basis_index(0, k, k2))
                } else {
                    AlgElem::zeros(&base)
                }
            })
            .collect();
        HModule::new(base, c, right_action, inner).expect("consistent")
    }

    pub fn base(&self) -> &BlockShape {
        &self.base
    }

    pub fn carrier_dim(&self) -> usize {
        self.carrier_dim
    }

    pub fn right_action(&self) -> &[Mat] {
        &self.right_action
    }

    /// Inner products of carrier basis vectors, `p`-major.
    pub fn inner_table(&self) -> &[AlgElem] {
        &self.inner
    }

    fn check_vec(&self, v: &CVec) -> Result<()> {
        if v.len() != self.carrier_dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in a module with carrier dimension {}",
                v.len(),
                self.carrier_dim
            )));
        }
        Ok(())
    }

    /// The matrix of `Ψ ↦ Ψ·b` on carrier coordinates.
    pub fn action_matrix(&self, b: &AlgElem) -> Result<Mat> {
        if b.shape() != &self.base {
            AlgElem::zeros(&self.base).add(b)?;
        }
        let c = self.carrier_dim;
        Ok(b
            .coeffs()
            .iter()
            .zip(&self.right_action)
            .fold(linalg::zeros(c, c), |acc, (&z, r)| acc + r * z))
    }

    pub fn act(&self, v: &CVec, b: &AlgElem) -> Result<CVec> {
        self.check_vec(v)?;
        Ok(self.action_matrix(b)? * v)
    }

    /// `⟨Ψ, Φ⟩_B`, antilinear in `Ψ`.
    pub fn inner(&self, psi: &CVec, phi: &CVec) -> Result<AlgElem> {
        self.check_vec(psi)?;
        self.check_vec(phi)?;
        let c = self.carrier_dim;
        let n = self.base.algebra_dim();
        let mut coeffs = vec![C64::new(0.0, 0.0); n];
        for p in 0..c {
            let a = psi[p].conj();
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for q in 0..c {
                let w = a * phi[q];
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                for (slot, z) in coeffs.iter_mut().zip(self.inner[p * c + q].coeffs()) {
                    *slot += w * z;
                }
            }
        }
        AlgElem::from_coeffs(&self.base, &coeffs)
    }

    /// `‖Ψ‖ = ‖⟨Ψ, Ψ⟩‖^{1/2}`.
    pub fn norm(&self, psi: &CVec) -> Result<f64> {
        Ok(self.inner(psi, psi)?.op_norm().sqrt())
    }

    /// The scalar Gram matrix `τ(⟨ψ_p, ψ_q⟩)` for the canonical trace.
    pub fn scalar_gram(&self) -> Mat {
        let c = self.carrier_dim;
        DMatrix::from_fn(c, c, |p, q| canonical_trace(&self.inner[p * c + q]))
    }

    /// `T_{Ψ,Φ} Z = Ψ ⟨Φ, Z⟩_B` as a matrix on carrier coordinates.
    pub fn rank_one(&self, psi: &CVec, phi: &CVec) -> Result<Mat> {
        self.check_vec(psi)?;
        self.check_vec(phi)?;
        let c = self.carrier_dim;
        let mut t = linalg::zeros(c, c);
        for q in 0..c {
            let mut e = CVec::zeros(c);
            e[q] = C64::new(1.0, 0.0);
            let col = self.act(psi, &self.inner(phi, &e)?)?;
            t.set_column(q, &col);
        }
        Ok(t)
    }

    /// Solves `⟨T ψ_p, ψ_q⟩ = ⟨ψ_p, S ψ_q⟩` for `S`; `None` when no solution
    /// exists, i.e. `T` is not adjointable.
    pub fn adjoint(&self, t: &Mat) -> Result<Option<Mat>> {
        let c = self.carrier_dim;
        if t.nrows() != c || t.ncols() != c {
            return Err(Error::Dimension(format!("operator is not {c}x{c}")));
        }
        let n = self.base.algebra_dim();
        let table: Vec<Vec<C64>> = self.inner.iter().map(|v| v.coeffs()).collect();
        // Unknown S in column-major order, index r + q·c.
        let mut sys = linalg::zeros(c * c * n, c * c);
        let mut rhs = CVec::zeros(c * c * n);
        for p in 0..c {
            for q in 0..c {
                for beta in 0..n {
                    let row = (p * c + q) * n + beta;
                    for r in 0..c {
                        sys[(row, r + q * c)] = table[p * c + r][beta];
                        rhs[row] += t[(r, p)].conj() * table[r * c + q][beta];
                    }
                }
            }
        }
        let (u, s, v) = linalg::svd(&sys);
        let smax = s.first().copied().unwrap_or(0.0);
        let mut x = CVec::zeros(c * c);
        let utb = u.adjoint() * &rhs;
        for (k, &sk) in s.iter().enumerate() {
            if sk > 1e-12 * smax {
                x += v.column(k) * (utb[k] / sk);
            }
        }
        let resid = (&sys * &x - &rhs).norm();
        let scale = rhs.norm().max(1.0);
        if resid > 1e-9 * scale {
            return Ok(None);
        }
        Ok(Some(linalg::unvectorize(&x, c, c)))
    }

    /// Checks the module axioms on the basis and the standard inequalities
    /// on `samples` random vector pairs.
    pub fn validate(&self, tol: &Tolerances, samples: usize, seed: u64) -> Result<ModuleReport> {
        let c = self.carrier_dim;
        let base = &self.base;
        let mut checks = Vec::new();
        let mut push = |name, residual: f64, bound: f64, witness| {
            checks.push(AxiomCheck {
                name,
                residual,
                passed: residual <= bound,
                witness,
            })
        };
        let slack = tol.eps_eq.max(1e-9);

        // Right action: R(𝕀) = 𝕀 and R(b)R(b') = R(b'b).
        let mut worst = linalg::max_diff(
            &self.action_matrix(&AlgElem::identity(base))?,
            &linalg::identity(c),
        );
        let mut wit = None;
        for a in 0..base.algebra_dim() {
            for b in 0..base.algebra_dim() {
                let ea = AlgElem::matrix_unit(base, a);
                let eb = AlgElem::matrix_unit(base, b);
                let lhs = &self.right_action[b] * &self.right_action[a];
                let d = linalg::max_diff(&lhs, &self.action_matrix(&ea.mul(&eb)?)?);
                if d > worst {
                    worst = d;
                    wit = Some((a, b));
                }
            }
        }
        push("action_homomorphism", worst, slack, wit);

        // ⟨ψ_p, ψ_q⟩* = ⟨ψ_q, ψ_p⟩.
        let (mut worst, mut wit) = (0.0f64, None);
        for p in 0..c {
            for q in 0..c {
                let d = self.inner[p * c + q]
                    .star()
                    .sub(&self.inner[q * c + p])?
                    .max_abs();
                if d > worst {
                    worst = d;
                    wit = Some((p, q));
                }
            }
        }
        push("inner_hermitian", worst, slack, wit);

        // ⟨ψ_p, ψ_q·b⟩ = ⟨ψ_p, ψ_q⟩ b on matrix units b.
        let (mut worst, mut wit) = (0.0f64, None);
        for p in 0..c {
            let ep = unit_vec(c, p);
            for q in 0..c {
                let eq = unit_vec(c, q);
                for b in 0..base.algebra_dim() {
                    let eb = AlgElem::matrix_unit(base, b);
                    let lhs = self.inner(&ep, &self.act(&eq, &eb)?)?;
                    let rhs = self.inner[p * c + q].mul(&eb)?;
                    let d = lhs.sub(&rhs)?.max_abs();
                    if d > worst {
                        worst = d;
                        wit = Some((p, q));
                    }
                }
            }
        }
        push("inner_right_linear", worst, slack, wit);

        // Positivity: the matrix [⟨ψ_p, ψ_q⟩] is positive in M_c(B), which
        // gives ⟨Ψ, Ψ⟩ ⪰ 0 for every Ψ; checked through its blocks.
        let big_min = self.amplified_gram_min_eig();
        let gram_scale = self.inner.iter().map(|v| v.max_abs()).fold(1.0, f64::max);
        push("inner_positive", (-big_min).max(0.0), tol.eps_psd * gram_scale * c as f64, None);

        // Definiteness: τ(⟨Ψ, Ψ⟩) = Ψ† G Ψ with τ faithful.
        let (gvals, _) = linalg::eigh(&self.scalar_gram());
        let gmin = gvals[0];
        push(
            "inner_definite",
            if gmin > tol.eps_psd * gram_scale { 0.0 } else { 1.0 },
            0.5,
            None,
        );

        // Inequalities on random vectors.
        let mut rng = random::seeded(seed);
        let (mut w1, mut w2, mut w3) = (0.0f64, 0.0f64, 0.0f64);
        let (mut k1, mut k2, mut k3) = (None, None, None);
        for s in 0..samples {
            let psi = random::gaussian_vec(&mut rng, c);
            let phi = random::gaussian_vec(&mut rng, c);
            let b = random::element(&mut rng, base);
            let np = self.norm(&psi)?;
            let nf = self.norm(&phi)?;
            let scale = 1.0 + np * nf;

            let d1 = self.norm(&self.act(&psi, &b)?)? - np * b.op_norm();
            if d1 / (1.0 + np * b.op_norm()) > w1 {
                w1 = d1 / (1.0 + np * b.op_norm());
                k1 = Some((s, s));
            }

            let pf = self.inner(&psi, &phi)?;
            let lhs = pf.mul(&pf.star())?;
            let rhs = self.inner(&psi, &psi)?.scale_re(nf * nf);
            let diff = rhs.sub(&lhs)?;
            let neg = diff
                .blocks()
                .iter()
                .map(|m| -linalg::eigh(&linalg::hermitian_part(m)).0[0])
                .fold(0.0, f64::max);
            if neg / (scale * scale) > w2 {
                w2 = neg / (scale * scale);
                k2 = Some((s, s));
            }

            let d3 = pf.op_norm() - np * nf;
            if d3 / scale > w3 {
                w3 = d3 / scale;
                k3 = Some((s, s));
            }
        }
        push("action_bound", w1, slack, k1);
        push("cauchy_schwarz", w2, slack, k2);
        push("inner_bound", w3, slack, k3);
        Ok(ModuleReport { checks })
    }

    /// Fails with the first violated axiom.
    pub fn require_valid(&self, tol: &Tolerances) -> Result<()> {
        let report = self.validate(tol, 20, 0x4d0d)?;
        if let Some(f) = report.failures().first() {
            return Err(Error::precondition(
                format!("module axiom `{}` fails", f.name),
                f.residual,
            ));
        }
        Ok(())
    }

    /// Smallest eigenvalue over the blocks of the `c × c` matrix over `B`
    /// with entries `⟨ψ_p, ψ_q⟩`.
    fn amplified_gram_min_eig(&self) -> f64 {
        let c = self.carrier_dim;
        let mut worst = f64::INFINITY;
        for (i, &n) in self.base.dims().iter().enumerate() {
            let mut big = linalg::zeros(c * n, c * n);
            for p in 0..c {
                for q in 0..c {
                    big.view_mut((p * n, q * n), (n, n))
                        .copy_from(self.inner[p * c + q].block(i));
                }
            }
            worst = worst.min(linalg::eigh(&linalg::hermitian_part(&big)).0[0]);
        }
        worst
    }
}

fn unit_vec(c: usize, p: usize) -> CVec {
    let mut e = CVec::zeros(c);
    e[p] = C64::new(1.0, 0.0);
    e
}

/// The module of continuous sections `p·C(X)ⁿ` of the vector bundle defined
/// by a projection-valued function `p` on a finite space `X`.
#[derive(Debug, Clone)]
pub struct SerreSwan {
    pub module: HModule,
    pub fiber_ranks: Vec<usize>,
    /// Orthonormal basis of `p(x)ℂⁿ` per point, as columns; carrier basis
    /// vectors enumerate these point by point.
    pub fibers: Vec<Mat>,
}

pub fn serre_swan(x_size: usize, p: &[Mat], tol: &Tolerances) -> Result<SerreSwan> {
    if x_size == 0 || p.len() != x_size {
        return Err(Error::Dimension(format!(
            "{} projections for a space of {x_size} points",
            p.len()
        )));
    }
    let n = p[0].nrows();
    let mut fibers = Vec::with_capacity(x_size);
    for (x, px) in p.iter().enumerate() {
        if px.nrows() != n || px.ncols() != n {
            return Err(Error::Dimension(format!("p({x}) is not {n}x{n}")));
        }
        let d = linalg::max_diff(px, &px.adjoint()).max(linalg::max_diff(&(px * px), px));
        if d > tol.eps_eq.max(1e-9) {
            return Err(Error::precondition(format!("p({x}) is not a projection; defect"), d));
        }
        fibers.push(linalg::range_basis(px, 1e-8));
    }
    let fiber_ranks: Vec<usize> = fibers.iter().map(|f| f.ncols()).collect();
    let c: usize = fiber_ranks.iter().sum();
    if c == 0 {
        return Err(Error::Invalid("the bundle has rank zero everywhere".into()));
    }
    let base = BlockShape::commutative(x_size);
    let point_of: Vec<usize> = fiber_ranks
        .iter()
        .enumerate()
        .flat_map(|(x, &r)| std::iter::repeat(x).take(r))
        .collect();
    let right_action = (0..x_size)
        .map(|y| {
            let mut r = linalg::zeros(c, c);
            for (k, &x) in point_of.iter().enumerate() {
                if x == y {
                    r[(k, k)] = C64::new(1.0, 0.0);
                }
            }
            r
        })
        .collect();
    let inner = (0..c * c)
        .map(|pq| {
            let (a, b) = (pq / c, pq % c);
            if a == b {
                AlgElem::matrix_unit(&base, point_of[a])
            } else {
                AlgElem::zeros(&base)
            }
        })
        .collect();
    Ok(SerreSwan {
        module: HModule::new(base, c, right_action, inner)?,
        fiber_ranks,
        fibers,
    })
}
