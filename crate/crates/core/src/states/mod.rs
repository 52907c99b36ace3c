//! States on block algebras, representations, the GNS construction,
//! commutants and the numerical Wedderburn decomposition.
//!
//! A state on `⊕ᵢ M_{nᵢ}` is stored as one density block per summand and
//! acts by the trace pairing `ω(A) = Σᵢ Tr(ρᵢ Aᵢ)`.

mod gns;
mod rep;
mod wedderburn;

pub use gns::{gns, GnsResult};
pub use rep::Representation;
pub use wedderburn::{commutant, wedderburn, Commutant, IsotypicComponent, Wedderburn};

use num_complex::Complex64 as C64;

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, Mat};

/// Relative singular-value cut used when solving the homogeneous systems
/// behind commutants and intertwiners.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    shape: BlockShape,
    densities: Vec<Mat>,
}

impl State {
    /// Wraps density blocks; checks sizes only. Use [`validate`](Self::validate)
    /// for positivity and normalisation.
    pub fn new(shape: BlockShape, densities: Vec<Mat>) -> Result<Self> {
        // Reuse the element constructor for the size checks.
        let e = AlgElem::new(shape, densities)?;
        let shape = e.shape().clone();
        Ok(State {
            shape,
            densities: e.into_blocks(),
        })
    }

    /// The normalised trace `A ↦ Tr(A)/Σnᵢ`.
    pub fn tracial(shape: &BlockShape) -> Self {
        let n = shape.total_dim() as f64;
        let densities = shape
            .dims()
            .iter()
            .map(|&k| linalg::identity(k).unscale(n))
            .collect();
        State {
            shape: shape.clone(),
            densities,
        }
    }

    /// Vector state `A ↦ ⟨v, A_block v⟩` for a unit vector in one block.
    pub fn vector(shape: &BlockShape, block: usize, v: &CVec) -> Result<Self> {
        if block >= shape.num_blocks() {
            return Err(Error::IndexOutOfRange {
                index: block,
                len: shape.num_blocks(),
            });
        }
        if v.len() != shape.dims()[block] {
            return Err(Error::Dimension(format!(
                "vector of length {} for block of size {}",
                v.len(),
                shape.dims()[block]
            )));
        }
        let v = v.unscale(v.norm());
        let densities = shape
            .dims()
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                if i == block {
                    &v * v.adjoint()
                } else {
                    linalg::zeros(k, k)
                }
            })
            .collect();
        Ok(State {
            shape: shape.clone(),
            densities,
        })
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn densities(&self) -> &[Mat] {
        &self.densities
    }

    /// Checks Hermiticity, positivity (down to `−eps_psd`) and unit trace.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let mut total = C64::new(0.0, 0.0);
        for (i, rho) in self.densities.iter().enumerate() {
            let herm = linalg::max_diff(rho, &rho.adjoint());
            if herm > tol.eps_eq {
                return Err(Error::precondition(
                    format!("density block {i} is not Hermitian"),
                    herm,
                ));
            }
            let (vals, _) = linalg::eigh(rho);
            if let Some(&min) = vals.first() {
                if min < -tol.eps_psd {
                    return Err(Error::precondition(
                        format!("density block {i} has a negative eigenvalue"),
                        min,
                    ));
                }
            }
            total += rho.trace();
        }
        if (total - C64::new(1.0, 0.0)).norm() > tol.eps_eq {
            return Err(Error::precondition("state is not normalised; Σ Tr ρᵢ", total.re));
        }
        Ok(())
    }

    pub fn is_valid(&self, tol: &Tolerances) -> bool {
        self.validate(tol).is_ok()
    }

    /// `ω(A) = Σᵢ Tr(ρᵢ Aᵢ)`.
    pub fn eval(&self, a: &AlgElem) -> Result<C64> {
        if a.shape() != &self.shape {
            AlgElem::zeros(&self.shape).add(a)?;
        }
        Ok(self
            .densities
            .iter()
            .zip(a.blocks())
            .map(|(r, x)| (r * x).trace())
            .sum())
    }

    /// Value on the matrix unit `E^{(i)}_{jk}`, i.e. `(ρᵢ)_{kj}`.
    pub(crate) fn on_matrix_unit(&self, block: usize, row: usize, col: usize) -> C64 {
        self.densities[block][(col, row)]
    }

    /// Pure iff exactly one block carries weight and that block has rank one.
    pub fn is_pure(&self, tol: &Tolerances) -> Result<bool> {
        self.validate(tol)?;
        let mut loaded = 0;
        let mut rank_one = true;
        for rho in &self.densities {
            if rho.trace().re <= tol.eps_psd {
                continue;
            }
            loaded += 1;
            let (vals, _) = linalg::eigh(rho);
            rank_one &= vals.iter().filter(|&&l| l > tol.eps_psd.max(1e-8)).count() == 1;
        }
        Ok(loaded == 1 && rank_one)
    }

    /// Convex combination `t·self + (1−t)·other`.
    pub fn mix(&self, other: &State, t: f64) -> Result<State> {
        let a = AlgElem::new(self.shape.clone(), self.densities.clone())?;
        let b = AlgElem::new(other.shape.clone(), other.densities.clone())?;
        let m = a.scale_re(t).add(&b.scale_re(1.0 - t))?;
        State::new(self.shape.clone(), m.into_blocks())
    }
}

/// Density matrix `½[[1+x, y+iz], [y−iz, 1−x]]` on `M₂` for a point of the
/// closed unit ball.
pub fn bloch_state(x: f64, y: f64, z: f64, tol: &Tolerances) -> Result<State> {
    let r2 = x * x + y * y + z * z;
    if !r2.is_finite() || r2 > 1.0 + tol.eps_eq {
        return Err(Error::precondition(
            "Bloch coordinates outside the closed unit ball; x²+y²+z²",
            r2,
        ));
    }
    let rho = Mat::from_row_slice(
        2,
        2,
        &[
            C64::new(1.0 + x, 0.0),
            C64::new(y, z),
            C64::new(y, -z),
            C64::new(1.0 - x, 0.0),
        ],
    )
    .scale(0.5);
    State::new(BlockShape::full(2), vec![rho])
}

/// Inverse of [`bloch_state`].
pub fn bloch_coords(state: &State) -> Result<(f64, f64, f64)> {
    if state.shape().dims() != [2] {
        return Err(Error::Invalid(format!(
            "Bloch coordinates need shape [2], got {}",
            state.shape()
        )));
    }
    let r = &state.densities()[0];
    let x = (r[(0, 0)] - r[(1, 1)]).re;
    let y = 2.0 * r[(0, 1)].re;
    let z = 2.0 * r[(0, 1)].im;
    Ok((x, y, z))
}
