//! Linear maps from block algebras into `M_m`: positivity, complete
//! positivity through the Choi matrix, amplification, and the Stinespring
//! dilation.

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::algebra::{left_mult_matrix, AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, GramQuotient, Mat};
use crate::random;
use crate::states::Representation;

/// A linear map `Q : ⊕ᵢ M_{nᵢ} → M_m`, stored as the images of matrix units.
#[derive(Debug, Clone, PartialEq)]
pub struct LinMapAB {
    source: BlockShape,
    target_dim: usize,
    images: Vec<Mat>,
}

impl LinMapAB {
    pub fn new(source: BlockShape, target_dim: usize, images: Vec<Mat>) -> Result<Self> {
        if images.len() != source.algebra_dim() {
            return Err(Error::Dimension(format!(
                "{} images for a source of dimension {}",
                images.len(),
                source.algebra_dim()
            )));
        }
        if let Some(i) = images
            .iter()
            .position(|m| m.nrows() != target_dim || m.ncols() != target_dim)
        {
            return Err(Error::Dimension(format!(
                "image {i} is not {target_dim}x{target_dim}"
            )));
        }
        if let Some(i) = images.iter().position(|m| !linalg::is_all_finite(m)) {
            return Err(Error::Invalid(format!("image {i} has non-finite entries")));
        }
        Ok(LinMapAB {
            source,
            target_dim,
            images,
        })
    }

    pub fn from_fn(
        source: &BlockShape,
        target_dim: usize,
        f: impl Fn(&AlgElem) -> Mat,
    ) -> Result<Self> {
        let images = (0..source.algebra_dim())
            .map(|i| f(&AlgElem::matrix_unit(source, i)))
            .collect();
        LinMapAB::new(source.clone(), target_dim, images)
    }

    /// The defining embedding `⊕ M_{nᵢ} → M_{Σnᵢ}`; the identity map when
    /// the source is a single block.
    pub fn identity(source: &BlockShape) -> Self {
        LinMapAB::from_fn(source, source.total_dim(), |a| a.to_dense()).expect("consistent")
    }

    /// Transpose on `M_n`.
    pub fn transpose(n: usize) -> Self {
        LinMapAB::from_fn(&BlockShape::full(n), n, |a| a.to_dense().transpose())
            .expect("consistent")
    }

    /// `A ↦ Tr(A)/n · 𝕀` on `M_n`.
    pub fn depolarizing(n: usize) -> Self {
        LinMapAB::from_fn(&BlockShape::full(n), n, |a| {
            linalg::identity(n) * (a.trace() / n as f64)
        })
        .expect("consistent")
    }

    pub fn source(&self) -> &BlockShape {
        &self.source
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn apply(&self, a: &AlgElem) -> Result<Mat> {
        if a.shape() != &self.source {
            AlgElem::zeros(&self.source).add(a)?;
        }
        let mut out = linalg::zeros(self.target_dim, self.target_dim);
        for (c, img) in a.coeffs().into_iter().zip(&self.images) {
            if c != C64::new(0.0, 0.0) {
                out += img * c;
            }
        }
        Ok(out)
    }

    pub fn unit_image(&self) -> Mat {
        self.apply(&AlgElem::identity(&self.source)).expect("same shape")
    }

    pub fn is_unital(&self, tol: &Tolerances) -> bool {
        linalg::max_diff(&self.unit_image(), &linalg::identity(self.target_dim)) <= tol.eps_eq
    }

    /// `max ‖Q(E_{kj}) − Q(E_{jk})*‖` over the basis.
    pub fn star_defect(&self) -> f64 {
        (0..self.images.len())
            .map(|a| {
                let b = self.source.star_index(a);
                linalg::max_diff(&self.images[b], &self.images[a].adjoint())
            })
            .fold(0.0, f64::max)
    }

    fn check_star(&self, tol: &Tolerances) -> Result<()> {
        let scale = self.images.iter().map(linalg::max_abs).fold(1.0, f64::max);
        let d = self.star_defect();
        if d > tol.eps_eq * scale {
            return Err(Error::precondition(
                "map is not star-compatible; max ‖Q(A*) − Q(A)*‖",
                d,
            ));
        }
        Ok(())
    }

    /// `Q_n : M_n(source) → M_n(M_m)`, acting entrywise on `n × n` block
    /// matrices. Block `i` of the new source has size `n·nᵢ`, with index
    /// `(a, j) ↦ a·nᵢ + j`.
    pub fn amplify(&self, n: usize) -> Result<LinMapAB> {
        if n == 0 {
            return Err(Error::Invalid("amplification order must be at least 1".into()));
        }
        let dims: Vec<usize> = self.source.dims().iter().map(|&k| n * k).collect();
        let big = BlockShape::new(dims)?;
        let images = big
            .basis()
            .map(|(i, p, q)| {
                let k = self.source.dims()[i];
                let (a, j) = (p / k, p % k);
                let (b, l) = (q / k, q % k);
                let mut e = linalg::zeros(n, n);
                e[(a, b)] = C64::new(1.0, 0.0);
                linalg::kron(&e, &self.images[self.source.basis_index(i, j, l)])
            })
            .collect();
        LinMapAB::new(big, n * self.target_dim, images)
    }

    /// Per source block, `Cᵢ = Σ_{jk} E_{jk} ⊗ Q(E^{(i)}_{jk})`.
    pub fn choi_blocks(&self) -> Vec<Mat> {
        let m = self.target_dim;
        self.source
            .dims()
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let mut c = linalg::zeros(n * m, n * m);
                for j in 0..n {
                    for k in 0..n {
                        let img = &self.images[self.source.basis_index(i, j, k)];
                        c.view_mut((j * m, k * m), (m, m)).copy_from(img);
                    }
                }
                c
            })
            .collect()
    }

    /// Complete positivity through the Choi criterion.
    pub fn is_cp(&self, tol: &Tolerances) -> Result<CpReport> {
        self.check_star(tol)?;
        let mut min_eig = f64::INFINITY;
        let mut scale = 1.0f64;
        for c in self.choi_blocks() {
            let (vals, _) = linalg::eigh(&c);
            min_eig = min_eig.min(vals[0]);
            scale = scale.max(vals.iter().fold(0.0, |a, v| a.max(v.abs())));
        }
        Ok(CpReport {
            cp: min_eig >= -tol.eps_psd * scale,
            min_choi_eig: min_eig,
        })
    }

    /// Exact positivity test for commutative sources; otherwise tries to
    /// falsify positivity on `samples` random inputs `B*B`.
    pub fn positivity_check(&self, tol: &Tolerances, samples: usize, seed: u64) -> PositivityCheck {
        let negative = |m: &Mat| {
            let (vals, _) = linalg::eigh(m);
            let scale = vals.iter().fold(1.0, |a: f64, v| a.max(v.abs()));
            vals[0] < -tol.eps_psd * scale
        };
        if self.source.is_commutative() {
            let bad = self.images.iter().any(negative);
            return PositivityCheck {
                exact: Some(!bad),
                falsified: bad,
            };
        }
        let mut rng = random::seeded(seed);
        let falsified = (0..samples).any(|_| {
            let b = random::element(&mut rng, &self.source);
            let pos = b.star().mul(&b).expect("same shape");
            negative(&self.apply(&pos).expect("same shape"))
        });
        PositivityCheck {
            exact: None,
            falsified,
        }
    }

    /// Stinespring dilation `Q(A) = W* π(A) W`.
    ///
    /// Built from the form `⟨A⊗v, B⊗w⟩ = ⟨v, Q(A*B) w⟩` on
    /// `source ⊗ ℂᵐ` (coefficient index `a·m + v`), quotiented by its null
    /// space; the source acts by left multiplication and `W v = [𝕀 ⊗ v]`.
    pub fn stinespring(&self, tol: &Tolerances) -> Result<StinespringResult> {
        let report = self.is_cp(tol)?;
        if !report.cp {
            return Err(Error::NotCompletelyPositive {
                min_choi_eig: report.min_choi_eig,
            });
        }
        let s = &self.source;
        let m = self.target_dim;
        let n = s.algebra_dim();
        let mut gram = linalg::zeros(n * m, n * m);
        // (E_{jk})* E_{jk'} = E_{kk'}; other products vanish.
        for (a, (i, j, k)) in s.basis().enumerate() {
            for kk in 0..s.dims()[i] {
                let b = s.basis_index(i, j, kk);
                let img = &self.images[s.basis_index(i, k, kk)];
                gram.view_mut((a * m, b * m), (m, m)).copy_from(img);
            }
        }
        let quotient = GramQuotient::new(&gram, tol.eps_psd);
        let dim = quotient.dim();
        let id_m = linalg::identity(m);
        let images = (0..n)
            .map(|idx| {
                let l = left_mult_matrix(&AlgElem::matrix_unit(s, idx));
                quotient.descend(&linalg::kron(&l, &id_m))
            })
            .collect();
        let rep = Representation::new(s.clone(), dim, images)?;
        let unit = AlgElem::identity(s).coeffs();
        let mut w = linalg::zeros(dim, m);
        for v in 0..m {
            let mut beta = DVector::from_element(n * m, C64::new(0.0, 0.0));
            for (a, &c) in unit.iter().enumerate() {
                beta[a * m + v] = c;
            }
            w.set_column(v, &quotient.class_of(&beta));
        }
        let residual = self
            .images
            .iter()
            .zip(rep.images())
            .map(|(q, p)| linalg::op_norm(&(q - w.adjoint() * p * &w)))
            .fold(0.0, f64::max);
        Ok(StinespringResult {
            unital: self.is_unital(tol),
            rep,
            w,
            residual,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpReport {
    pub cp: bool,
    pub min_choi_eig: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositivityCheck {
    /// `Some` when the source is commutative and the test is decisive.
    pub exact: Option<bool>,
    pub falsified: bool,
}

#[derive(Debug, Clone)]
pub struct StinespringResult {
    pub rep: Representation,
    /// `D × m` with `Q(A) = W* π(A) W`.
    pub w: Mat,
    pub unital: bool,
    /// Worst basis residual `‖Q(e) − W*π(e)W‖` in operator norm.
    pub residual: f64,
}

impl StinespringResult {
    pub fn dilation_dim(&self) -> usize {
        self.rep.dim()
    }

    /// Multiplicity of each source block in `π`: the rank of `π(E^{(i)}_{00})`.
    /// Their sum is the Kraus rank of the map.
    pub fn block_multiplicities(&self) -> Vec<usize> {
        let s = self.rep.source();
        (0..s.num_blocks())
            .map(|i| {
                let p = &self.rep.images()[s.basis_index(i, 0, 0)];
                p.trace().re.round() as usize
            })
            .collect()
    }

    /// The projection `W W*` onto the embedded copy of the target space.
    pub fn range_projection(&self) -> Mat {
        &self.w * self.w.adjoint()
    }
}
