use num_complex::Complex64 as C64;

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

use super::RANK_TOL;

/// A *-representation of a block algebra on `ℂᵈ`, stored as the images of
/// the matrix units.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    source: BlockShape,
    dim: usize,
    images: Vec<Mat>,
    nondegenerate: bool,
}

impl Representation {
    pub fn new(source: BlockShape, dim: usize, images: Vec<Mat>) -> Result<Self> {
        if images.len() != source.algebra_dim() {
            return Err(Error::Dimension(format!(
                "{} images for an algebra of dimension {}",
                images.len(),
                source.algebra_dim()
            )));
        }
        if let Some(i) = images.iter().position(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::Dimension(format!("image {i} is not {dim}x{dim}")));
        }
        let mut r = Representation {
            source,
            dim,
            images,
            nondegenerate: false,
        };
        let unit = r.apply(&AlgElem::identity(&r.source))?;
        r.nondegenerate = linalg::max_diff(&unit, &linalg::identity(dim)) <= 1e-8;
        Ok(r)
    }

    /// The defining representation of `⊕ M_{nᵢ}` on `ℂ^{Σnᵢ}`.
    pub fn defining(source: &BlockShape) -> Self {
        let images = (0..source.algebra_dim())
            .map(|i| AlgElem::matrix_unit(source, i).to_dense())
            .collect();
        Representation::new(source.clone(), source.total_dim(), images).expect("consistent")
    }

    /// The representation whose images are `f(E_idx)` for a linear map `f`
    /// given on matrix units.
    pub fn from_fn(source: &BlockShape, dim: usize, f: impl Fn(&AlgElem) -> Mat) -> Result<Self> {
        let images = (0..source.algebra_dim())
            .map(|i| f(&AlgElem::matrix_unit(source, i)))
            .collect();
        Representation::new(source.clone(), dim, images)
    }

    pub fn source(&self) -> &BlockShape {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn apply(&self, a: &AlgElem) -> Result<Mat> {
        if a.shape() != &self.source {
            AlgElem::zeros(&self.source).add(a)?;
        }
        let mut out = linalg::zeros(self.dim, self.dim);
        for (c, img) in a.coeffs().into_iter().zip(&self.images) {
            if c != C64::new(0.0, 0.0) {
                out += img * c;
            }
        }
        Ok(out)
    }

    /// Largest violation of `π(E_{jk})π(E_{lm}) = δ_{kl}π(E_{jm})` and
    /// `π(E_{jk})* = π(E_{kj})` over the basis.
    pub fn defect(&self) -> f64 {
        let s = &self.source;
        let mut worst = 0.0f64;
        for (a, (i, j, k)) in s.basis().enumerate() {
            let star = &self.images[s.basis_index(i, k, j)];
            worst = worst.max(linalg::max_diff(&self.images[a].adjoint(), star));
            let n = s.dims()[i];
            for l in 0..n {
                for m in 0..n {
                    let b = s.basis_index(i, l, m);
                    let prod = &self.images[a] * &self.images[b];
                    let expect = if k == l {
                        self.images[s.basis_index(i, j, m)].clone()
                    } else {
                        linalg::zeros(self.dim, self.dim)
                    };
                    worst = worst.max(linalg::max_diff(&prod, &expect));
                }
            }
            // Products across different blocks vanish.
            for (b, (i2, _, _)) in s.basis().enumerate() {
                if i2 != i {
                    worst = worst.max(linalg::max_abs(&(&self.images[a] * &self.images[b])));
                }
            }
        }
        worst
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let d = self.defect();
        if d > tol.eps_eq.max(1e-9) * 10.0 {
            return Err(Error::precondition("not a *-representation; basis defect", d));
        }
        Ok(())
    }

    /// Dimension of the commutant of the image.
    pub fn commutant_dim(&self) -> Result<usize> {
        if self.dim == 0 {
            return Ok(0);
        }
        Ok(linalg::commutant_basis(&self.images, RANK_TOL)?.len())
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        Ok(self.dim > 0 && self.commutant_dim()? == 1)
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if self.source != other.source {
            return Err(Error::Invalid(format!(
                "direct sum of representations of {} and {}",
                self.source, other.source
            )));
        }
        let d = self.dim + other.dim;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut m = linalg::zeros(d, d);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(b);
                m
            })
            .collect();
        Representation::new(self.source.clone(), d, images)
    }

    /// Unitary `U` with `U π(a) U† = other(a)` on the basis, with the
    /// residual of that identity, or `None` when the two are inequivalent.
    pub fn equivalence(&self, other: &Representation) -> Result<Option<(Mat, f64)>> {
        if self.source != other.source || self.dim != other.dim {
            return Ok(None);
        }
        if self.dim == 0 {
            return Ok(Some((linalg::zeros(0, 0), 0.0)));
        }
        let Some(u) = linalg::unitary_intertwiner(&self.images, &other.images, RANK_TOL)? else {
            return Ok(None);
        };
        let residual = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| linalg::max_diff(&(&u * a * u.adjoint()), b))
            .fold(0.0, f64::max);
        Ok(Some((u, residual)))
    }
}
