//! Commutants and the block decomposition of finite-dimensional
//! *-algebras of matrices.
//!
//! The decomposition is randomised: a random self-adjoint element of the
//! commutant splits `ℂᵈ` into its eigenspaces, which are invariant under the
//! algebra; pieces whose own commutant is still larger than `ℂ` are split
//! again. Irreducible pieces are then grouped into isotypic classes by
//! solving for intertwiners.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::BlockShape;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::random::gaussian;

use super::RANK_TOL;

const MAX_SPLIT_RETRIES: usize = 12;

fn star_closed_with_unit(s: &[Mat]) -> Result<Vec<Mat>> {
    let d = linalg::check_common_dim(s)?;
    let mut out = Vec::with_capacity(2 * s.len() + 1);
    out.push(linalg::identity(d));
    for m in s {
        out.push(m.clone());
        out.push(m.adjoint());
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Commutant {
    /// Frobenius-orthonormal basis of the commutant.
    pub basis: Vec<Mat>,
    pub dim: usize,
    pub irreducible: bool,
    /// Dimension of the commutant of the commutant.
    pub bicommutant_dim: usize,
}

/// Commutant of `S ∪ S* ∪ {𝕀}` and its own commutant.
pub fn commutant(s: &[Mat]) -> Result<Commutant> {
    let gens = star_closed_with_unit(s)?;
    let basis = linalg::commutant_basis(&gens, RANK_TOL)?;
    let mut comm_gens = basis.clone();
    comm_gens.extend(basis.iter().map(|b| b.adjoint()));
    let bicommutant_dim = linalg::commutant_basis(&comm_gens, RANK_TOL)?.len();
    let dim = basis.len();
    Ok(Commutant {
        basis,
        dim,
        irreducible: dim == 1,
        bicommutant_dim,
    })
}

/// One isotypic class: `multiplicity` copies of an irreducible
/// representation of dimension `size`.
#[derive(Debug, Clone)]
pub struct IsotypicComponent {
    pub size: usize,
    pub multiplicity: usize,
    /// Isometries `d × size`, one per copy, chosen so that every copy
    /// compresses each algebra element to the same matrix.
    pub copies: Vec<Mat>,
}

impl IsotypicComponent {
    /// The irreducible representation carried by this class, evaluated on `m`.
    pub fn compress(&self, m: &Mat) -> Mat {
        let v = &self.copies[0];
        v.adjoint() * m * v
    }
}

#[derive(Debug, Clone)]
pub struct Wedderburn {
    /// Sizes `nᵢ` of the simple summands, ascending.
    pub shape: BlockShape,
    pub multiplicities: Vec<usize>,
    /// Unitary whose columns list, class by class and copy by copy, the
    /// adapted basis. In it every algebra element is block diagonal with
    /// `mᵢ` identical `nᵢ × nᵢ` blocks per class, i.e. lies in
    /// `⊕ᵢ 𝕀_{mᵢ} ⊗ M_{nᵢ}`.
    pub basis_change: Mat,
    pub components: Vec<IsotypicComponent>,
}

impl Wedderburn {
    /// Largest entry of `P† s P` outside the predicted block pattern, over
    /// the given matrices.
    pub fn block_residual(&self, s: &[Mat]) -> f64 {
        let p = &self.basis_change;
        let mut worst = 0.0f64;
        for m in s {
            let conj = p.adjoint() * m * p;
            let mut expect = linalg::zeros(conj.nrows(), conj.ncols());
            let mut at = 0;
            for comp in &self.components {
                let block = comp.compress(m);
                for _ in 0..comp.multiplicity {
                    expect.view_mut((at, at), (comp.size, comp.size)).copy_from(&block);
                    at += comp.size;
                }
            }
            worst = worst.max(linalg::max_diff(&conj, &expect));
        }
        worst
    }
}

/// Decomposes the unital *-algebra generated by `s` (adjoints and the unit
/// are added automatically). Deterministic for a given `seed`.
pub fn wedderburn(s: &[Mat], seed: u64) -> Result<Wedderburn> {
    let gens = star_closed_with_unit(s)?;
    let d = gens[0].nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces = Vec::new();
    split(&gens, linalg::identity(d), &mut rng, &mut pieces)?;

    // Group irreducible pieces into classes of mutually equivalent ones.
    let mut classes: Vec<IsotypicComponent> = Vec::new();
    'piece: for piece in pieces {
        let compressed: Vec<Mat> = gens.iter().map(|g| piece.adjoint() * g * &piece).collect();
        for class in classes.iter_mut() {
            if class.size != piece.ncols() {
                continue;
            }
            let base: Vec<Mat> = gens.iter().map(|g| class.compress(g)).collect();
            // u base u† = compressed  ⇒  piece·u compresses like the base copy.
            if let Some(u) = linalg::unitary_intertwiner(&base, &compressed, RANK_TOL)? {
                class.copies.push(&piece * u);
                class.multiplicity += 1;
                continue 'piece;
            }
        }
        classes.push(IsotypicComponent {
            size: piece.ncols(),
            multiplicity: 1,
            copies: vec![piece],
        });
    }
    classes.sort_by_key(|c| c.size);

    let cols: Vec<_> = classes
        .iter()
        .flat_map(|c| c.copies.iter().flat_map(|m| m.column_iter().map(|x| x.into_owned())))
        .collect();
    let basis_change = Mat::from_columns(&cols);
    let shape = BlockShape::new(classes.iter().map(|c| c.size).collect())?;
    let multiplicities = classes.iter().map(|c| c.multiplicity).collect();
    Ok(Wedderburn {
        shape,
        multiplicities,
        basis_change,
        components: classes,
    })
}

/// Splits the range of the isometry `iso` into irreducible invariant
/// subspaces, appending their isometries to `out`.
fn split(gens: &[Mat], iso: Mat, rng: &mut ChaCha8Rng, out: &mut Vec<Mat>) -> Result<()> {
    let local: Vec<Mat> = gens.iter().map(|g| iso.adjoint() * g * &iso).collect();
    let comm = linalg::commutant_basis(&local, RANK_TOL)?;
    if comm.len() <= 1 {
        out.push(iso);
        return Ok(());
    }
    for _ in 0..MAX_SPLIT_RETRIES {
        let mut x = linalg::zeros(iso.ncols(), iso.ncols());
        for b in &comm {
            let c: C64 = gaussian(rng);
            x += b * c;
        }
        let h = linalg::hermitian_part(&x);
        let (vals, vecs) = linalg::eigh(&h);
        let spread = vals.last().unwrap() - vals.first().unwrap();
        let runs = linalg::cluster_sorted(&vals, 1e-6 * spread.max(f64::MIN_POSITIVE));
        if runs.len() < 2 {
            continue;
        }
        for run in runs {
            let sub = vecs.columns(run.start, run.len()).into_owned();
            split(gens, &iso * sub, rng, out)?;
        }
        return Ok(());
    }
    Err(Error::Numerical(format!(
        "could not split a {}-dimensional invariant subspace after {MAX_SPLIT_RETRIES} attempts; \
         try a different seed",
        iso.ncols()
    )))
}
