use num_complex::Complex64 as C64;

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::spectral;
use crate::states::wedderburn;

use super::{FiniteGroup, GroupFn};

/// A unitary representation `x ↦ U(x)` of a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryRep {
    dim: usize,
    mats: Vec<Mat>,
}

/// `max` over the table of `‖U(x)U(y) − U(xy)‖`, together with `‖U(e) − 𝕀‖`
/// and `‖U(x)*U(x) − 𝕀‖`.
fn homomorphism_defect(group: &FiniteGroup, mats: &[Mat], unitary: bool) -> f64 {
    let d = mats[0].nrows();
    let id = linalg::identity(d);
    let mut worst = linalg::max_diff(&mats[0], &id);
    for x in 0..group.order() {
        if unitary {
            worst = worst.max(linalg::max_diff(&(mats[x].adjoint() * &mats[x]), &id));
        }
        for y in 0..group.order() {
            worst = worst.max(linalg::max_diff(&(&mats[x] * &mats[y]), &mats[group.mul(x, y)]));
        }
    }
    worst
}

fn check_mats(group: &FiniteGroup, dim: usize, mats: &[Mat]) -> Result<()> {
    if mats.len() != group.order() {
        return Err(Error::Dimension(format!(
            "{} matrices for a group of order {}",
            mats.len(),
            group.order()
        )));
    }
    if let Some(i) = mats.iter().position(|m| m.nrows() != dim || m.ncols() != dim) {
        return Err(Error::Dimension(format!("matrix {i} is not {dim}x{dim}")));
    }
    Ok(())
}

impl UnitaryRep {
    pub fn new(group: &FiniteGroup, dim: usize, mats: Vec<Mat>, tol: &Tolerances) -> Result<Self> {
        check_mats(group, dim, &mats)?;
        if dim == 0 {
            return Err(Error::Dimension("zero-dimensional representation".into()));
        }
        let d = homomorphism_defect(group, &mats, true);
        if d > tol.eps_eq.max(1e-9) {
            return Err(Error::precondition("not a unitary representation; defect", d));
        }
        Ok(UnitaryRep { dim, mats })
    }

    pub fn trivial(group: &FiniteGroup, dim: usize) -> Self {
        UnitaryRep {
            dim,
            mats: vec![linalg::identity(dim); group.order()],
        }
    }

    /// The left-regular representation on `ℓ²(G)`: `U(x) δ_y = δ_{xy}`.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.order();
        let mats = (0..n)
            .map(|x| {
                let mut m = linalg::zeros(n, n);
                for y in 0..n {
                    m[(group.mul(x, y), y)] = C64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        UnitaryRep { dim: n, mats }
    }

    /// One-dimensional representation from character values.
    pub fn from_character(group: &FiniteGroup, values: &[C64], tol: &Tolerances) -> Result<Self> {
        let mats = values.iter().map(|&z| Mat::from_element(1, 1, z)).collect();
        UnitaryRep::new(group, 1, mats, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn defect(&self, group: &FiniteGroup) -> f64 {
        homomorphism_defect(group, &self.mats, true)
    }

    /// `π(f) = Σ f(x) U(x)`.
    pub fn apply(&self, f: &GroupFn) -> Result<Mat> {
        if f.values.len() != self.mats.len() {
            return Err(Error::Dimension(format!(
                "function of length {} for a representation of a group of order {}",
                f.values.len(),
                self.mats.len()
            )));
        }
        Ok(f
            .values
            .iter()
            .zip(&self.mats)
            .fold(linalg::zeros(self.dim, self.dim), |acc, (&c, m)| acc + m * c))
    }

    pub fn to_algebra_rep(&self) -> GroupAlgebraRep {
        GroupAlgebraRep {
            dim: self.dim,
            images: self.mats.clone(),
        }
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<UnitaryRep> {
        if self.mats.len() != other.mats.len() {
            return Err(Error::Dimension("direct sum across different groups".into()));
        }
        let d = self.dim + other.dim;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = linalg::zeros(d, d);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(b);
                m
            })
            .collect();
        Ok(UnitaryRep { dim: d, mats })
    }

    /// `x ↦ V U(x) V*` for a unitary `V`.
    pub fn conjugate(&self, v: &Mat) -> UnitaryRep {
        UnitaryRep {
            dim: self.dim,
            mats: self.mats.iter().map(|m| v * m * v.adjoint()).collect(),
        }
    }

    /// Unitary `V` with `V U(x) V* = other(x)` for all `x`, if one exists.
    pub fn equivalence(&self, other: &UnitaryRep) -> Result<Option<Mat>> {
        if self.dim != other.dim || self.mats.len() != other.mats.len() {
            return Ok(None);
        }
        linalg::unitary_intertwiner(&self.mats, &other.mats, crate::states::RANK_TOL)
    }

    /// Dimension of the commutant `{T : T U(x) = U(x) T}`.
    pub fn commutant_dim(&self) -> Result<usize> {
        Ok(linalg::commutant_basis(&self.mats, crate::states::RANK_TOL)?.len())
    }

    /// Restriction to the elements listed (a subgroup, re-indexed in that
    /// order).
    pub fn restrict(&self, elements: &[usize]) -> UnitaryRep {
        UnitaryRep {
            dim: self.dim,
            mats: elements.iter().map(|&x| self.mats[x].clone()).collect(),
        }
    }

    pub(crate) fn from_parts(dim: usize, mats: Vec<Mat>) -> Self {
        UnitaryRep { dim, mats }
    }
}

/// A representation of the group algebra `ℂ(G)`, stored as the images
/// `π(δ_x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraRep {
    dim: usize,
    images: Vec<Mat>,
}

impl GroupAlgebraRep {
    pub fn new(group: &FiniteGroup, dim: usize, images: Vec<Mat>) -> Result<Self> {
        check_mats(group, dim, &images)?;
        Ok(GroupAlgebraRep { dim, images })
    }

    /// From a linear map on group functions.
    pub fn from_fn(group: &FiniteGroup, dim: usize, f: impl Fn(&GroupFn) -> Mat) -> Result<Self> {
        let images = (0..group.order()).map(|x| f(&group.delta(x))).collect();
        GroupAlgebraRep::new(group, dim, images)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn apply(&self, f: &GroupFn) -> Result<Mat> {
        UnitaryRep::from_parts(self.dim, self.images.clone()).apply(f)
    }

    /// `‖π(δ_e) − 𝕀‖`; zero exactly for nondegenerate representations.
    pub fn degeneracy(&self) -> f64 {
        linalg::max_diff(&self.images[0], &linalg::identity(self.dim))
    }

    /// `U(x) = π(δ_x)`.
    pub fn to_unitary_rep(&self, group: &FiniteGroup, tol: &Tolerances) -> Result<UnitaryRep> {
        let deg = self.degeneracy();
        if deg > tol.eps_eq.max(1e-9) {
            return Err(Error::precondition(
                "degenerate representation; ‖π(δ_e) − 𝕀‖",
                deg,
            ));
        }
        UnitaryRep::new(group, self.dim, self.images.clone(), tol)
    }
}

/// Characters of a finite abelian group and the Fourier transform
/// `f̂(γ) = Σₓ f(x) γ(x)`.
#[derive(Debug, Clone)]
pub struct Fourier {
    pub characters: Vec<GroupFn>,
    /// `exponents[c][x] = k` when `γ_c(x) = e^{2πik/|G|}`.
    pub exponents: Vec<Vec<usize>>,
}

impl Fourier {
    pub fn transform(&self, f: &GroupFn) -> Result<Vec<C64>> {
        let n = self.characters.len();
        if f.values.len() != n {
            return Err(Error::Dimension(format!(
                "function of length {} on a group of order {n}",
                f.values.len()
            )));
        }
        Ok(self
            .characters
            .iter()
            .map(|g| f.values.iter().zip(&g.values).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `f(x) = |G|⁻¹ Σ_γ f̂(γ) conj γ(x)`.
    pub fn inverse(&self, hat: &[C64]) -> Result<GroupFn> {
        let n = self.characters.len();
        if hat.len() != n {
            return Err(Error::Dimension(format!(
                "{} Fourier coefficients for a group of order {n}",
                hat.len()
            )));
        }
        Ok(GroupFn::new(
            (0..n)
                .map(|x| {
                    self.characters
                        .iter()
                        .zip(hat)
                        .map(|(g, h)| h * g.values[x].conj())
                        .sum::<C64>()
                        / n as f64
                })
                .collect(),
        ))
    }

    /// `‖f̂‖_∞`.
    pub fn sup_norm(&self, f: &GroupFn) -> Result<f64> {
        Ok(self.transform(f)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

/// Characters of an abelian group, found as the joint eigenvalues of the
/// left-regular representation. Each value is snapped to the nearest
/// `|G|`-th root of unity; the trivial character comes first and the rest
/// are ordered by their exponent tables.
pub fn abelian_fourier(group: &FiniteGroup, tol: &Tolerances) -> Result<Fourier> {
    if !group.is_abelian() {
        return Err(Error::Invalid("Fourier transform needs an abelian group".into()));
    }
    let n = group.order();
    let reg = UnitaryRep::regular(group);
    let gens: Vec<AlgElem> = reg
        .mats()
        .iter()
        .map(|m| AlgElem::from_matrix(m.clone()))
        .collect::<Result<_>>()?;
    let chars = spectral::characters(&gens, tol)?;
    if chars.characters.len() != n {
        return Err(Error::Numerical(format!(
            "found {} characters for an abelian group of order {n}",
            chars.characters.len()
        )));
    }
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let mut table: Vec<Vec<usize>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|x| {
                    let z = chars.gelfand_table[x][c];
                    let k = (z.arg() / step).round().rem_euclid(n as f64) as usize;
                    k % n
                })
                .collect()
        })
        .collect();
    for (c, row) in table.iter().enumerate() {
        for (x, &k) in row.iter().enumerate() {
            let snapped = C64::from_polar(1.0, step * k as f64);
            let err = (snapped - chars.gelfand_table[x][c]).norm();
            if err > 1e-6 {
                return Err(Error::Numerical(format!(
                    "character value off the unit circle lattice by {err:e}"
                )));
            }
        }
    }
    table.sort();
    let characters = table
        .iter()
        .map(|row| GroupFn::new(row.iter().map(|&k| C64::from_polar(1.0, step * k as f64)).collect()))
        .collect();
    Ok(Fourier {
        characters,
        exponents: table,
    })
}

/// The block structure of `C*(G)` with its irreducible representations.
#[derive(Debug, Clone)]
pub struct GroupCstar {
    pub shape: BlockShape,
    /// One irreducible unitary representation per block, in block order.
    pub irreps: Vec<UnitaryRep>,
}

/// Decomposes the algebra spanned by the left-regular representation.
pub fn group_cstar(group: &FiniteGroup, seed: u64) -> Result<GroupCstar> {
    let reg = UnitaryRep::regular(group);
    let gens: Vec<Mat> = group
        .generators()
        .iter()
        .map(|&x| reg.mats()[x].clone())
        .collect();
    let gens = if gens.is_empty() {
        vec![reg.mats()[0].clone()]
    } else {
        gens
    };
    let w = wedderburn(&gens, seed)?;
    let irreps = w
        .components
        .iter()
        .map(|c| UnitaryRep::from_parts(c.size, reg.mats().iter().map(|m| c.compress(m)).collect()))
        .collect();
    Ok(GroupCstar {
        shape: w.shape,
        irreps,
    })
}
