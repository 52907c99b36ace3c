//! Block *-algebras `M_{n₁} ⊕ … ⊕ M_{n_k}` and their elements.
//!
//! Every finite-dimensional C*-algebra is of this form, so `AlgElem` is the
//! single carrier for algebra elements throughout the crate. Elements are
//! immutable values; all operations return new elements.
//!
//! The matrix-unit basis `E^{(i)}_{jk}` is enumerated block-major and
//! row-major inside each block: index `offset(i) + j·nᵢ + k` with
//! `offset(i) = Σ_{i'<i} n_{i'}²`. Linear maps, representations and JSON
//! files all use this ordering.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

/// Numerical tolerances used across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for equality of elements.
    pub eps_eq: f64,
    /// Slack allowed below zero for eigenvalues of positive elements.
    pub eps_psd: f64,
    /// Number of squarings in the Gelfand spectral-radius iteration.
    pub max_power_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_eq: 1e-9,
            eps_psd: 1e-10,
            max_power_iters: 64,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_eq > 0.0 && self.eps_psd > 0.0 && self.max_power_iters > 0) {
            return Err(Error::Invalid(format!("tolerances must be positive: {self:?}")));
        }
        Ok(())
    }
}

/// Block sizes `[n₁, …, n_k]` of a direct sum of full matrix algebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockShape(Vec<usize>);

impl BlockShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Invalid("block shape must have at least one block".into()));
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Invalid(format!("block {i} has size 0")));
        }
        Ok(BlockShape(dims))
    }

    /// `M_n`.
    pub fn full(n: usize) -> Self {
        BlockShape::new(vec![n]).expect("n >= 1")
    }

    /// `ℂᵐ = C(X)` for a set of `m` points.
    pub fn commutative(m: usize) -> Self {
        BlockShape::new(vec![1; m]).expect("m >= 1")
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn num_blocks(&self) -> usize {
        self.0.len()
    }

    /// Size of the block-diagonal matrices realising the algebra.
    pub fn total_dim(&self) -> usize {
        self.0.iter().sum()
    }

    /// Complex dimension `Σ nᵢ²`.
    pub fn algebra_dim(&self) -> usize {
        self.0.iter().map(|n| n * n).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.0.iter().all(|&n| n == 1)
    }

    pub fn basis_offset(&self, block: usize) -> usize {
        self.0[..block].iter().map(|n| n * n).sum()
    }

    pub fn basis_index(&self, block: usize, row: usize, col: usize) -> usize {
        self.basis_offset(block) + row * self.0[block] + col
    }

    /// Inverse of [`basis_index`](Self::basis_index).
    pub fn basis_label(&self, index: usize) -> (usize, usize, usize) {
        let mut rest = index;
        for (i, &n) in self.0.iter().enumerate() {
            if rest < n * n {
                return (i, rest / n, rest % n);
            }
            rest -= n * n;
        }
        panic!("basis index {index} out of range for {self}");
    }

    /// All matrix units `(block, row, col)` in basis order.
    pub fn basis(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
    }

    /// Basis index of `E_{kj}` given that of `E_{jk}`.
    pub fn star_index(&self, index: usize) -> usize {
        let (i, j, k) = self.basis_label(index);
        self.basis_index(i, k, j)
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An element of a block algebra: one square matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElem {
    shape: BlockShape,
    blocks: Vec<Mat>,
}

impl AlgElem {
    pub fn new(shape: BlockShape, blocks: Vec<Mat>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::ShapeMismatch {
                block: blocks.len().min(shape.num_blocks()),
                expected: format!("{} blocks", shape.num_blocks()),
                found: format!("{} blocks", blocks.len()),
            });
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::ShapeMismatch {
                    block: i,
                    expected: format!("{n}x{n}"),
                    found: format!("{}x{}", b.nrows(), b.ncols()),
                });
            }
            if !linalg::is_all_finite(b) {
                return Err(Error::Invalid(format!("block {i} has non-finite entries")));
            }
        }
        Ok(AlgElem { shape, blocks })
    }

    /// Single-block element of `M_n`.
    pub fn from_matrix(m: Mat) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        AlgElem::new(BlockShape::full(m.nrows()), vec![m])
    }

    pub fn zeros(shape: &BlockShape) -> Self {
        let blocks = shape.dims().iter().map(|&n| linalg::zeros(n, n)).collect();
        AlgElem {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn identity(shape: &BlockShape) -> Self {
        let blocks = shape.dims().iter().map(|&n| linalg::identity(n)).collect();
        AlgElem {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn scalar(shape: &BlockShape, z: C64) -> Self {
        AlgElem::identity(shape).scale(z)
    }

    /// Commutative element `λ₁ ⊕ … ⊕ λ_m` of `ℂᵐ`.
    pub fn diagonal(values: &[C64]) -> Result<Self> {
        let shape = BlockShape::new(vec![1; values.len()])?;
        let blocks = values.iter().map(|&z| Mat::from_element(1, 1, z)).collect();
        AlgElem::new(shape, blocks)
    }

    /// Matrix unit with the given basis index.
    pub fn matrix_unit(shape: &BlockShape, index: usize) -> Self {
        let (i, j, k) = shape.basis_label(index);
        let mut e = AlgElem::zeros(shape);
        e.blocks[i][(j, k)] = C64::new(1.0, 0.0);
        e
    }

    /// Element with the given coordinates in the matrix-unit basis.
    pub fn from_coeffs(shape: &BlockShape, coeffs: &[C64]) -> Result<Self> {
        if coeffs.len() != shape.algebra_dim() {
            return Err(Error::Dimension(format!(
                "{} coefficients for an algebra of dimension {}",
                coeffs.len(),
                shape.algebra_dim()
            )));
        }
        let mut e = AlgElem::zeros(shape);
        for (idx, (i, j, k)) in shape.basis().enumerate() {
            e.blocks[i][(j, k)] = coeffs[idx];
        }
        Ok(e)
    }

    pub fn coeffs(&self) -> Vec<C64> {
        self.shape
            .basis()
            .map(|(i, j, k)| self.blocks[i][(j, k)])
            .collect()
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Mat {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<Mat> {
        self.blocks
    }

    /// Block-diagonal matrix of size `Σ nᵢ`.
    pub fn to_dense(&self) -> Mat {
        let n = self.shape.total_dim();
        let mut out = linalg::zeros(n, n);
        let mut at = 0;
        for b in &self.blocks {
            let k = b.nrows();
            out.view_mut((at, at), (k, k)).copy_from(b);
            at += k;
        }
        out
    }

    /// Reads the diagonal blocks of a dense `Σ nᵢ` square matrix.
    pub fn from_dense(shape: &BlockShape, m: &Mat) -> Result<Self> {
        let n = shape.total_dim();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension(format!(
                "dense matrix {}x{} for shape {shape}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        let mut at = 0;
        for &k in shape.dims() {
            blocks.push(m.view((at, at), (k, k)).into_owned());
            at += k;
        }
        AlgElem::new(shape.clone(), blocks)
    }

    fn check_shape(&self, other: &AlgElem) -> Result<()> {
        let (a, b) = (self.shape.dims(), other.shape.dims());
        if a.len() != b.len() {
            return Err(Error::ShapeMismatch {
                block: a.len().min(b.len()),
                expected: format!("{} blocks", a.len()),
                found: format!("{} blocks", b.len()),
            });
        }
        if let Some(i) = (0..a.len()).find(|&i| a[i] != b[i]) {
            return Err(Error::ShapeMismatch {
                block: i,
                expected: format!("{0}x{0}", a[i]),
                found: format!("{0}x{0}", b[i]),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &AlgElem, f: impl Fn(&Mat, &Mat) -> Mat) -> Result<AlgElem> {
        self.check_shape(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(AlgElem {
            shape: self.shape.clone(),
            blocks,
        })
    }

    fn map_blocks(&self, f: impl Fn(&Mat) -> Mat) -> AlgElem {
        AlgElem {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &AlgElem) -> Result<AlgElem> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &AlgElem) -> Result<AlgElem> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &AlgElem) -> Result<AlgElem> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, z: C64) -> AlgElem {
        self.map_blocks(|a| a * z)
    }

    pub fn scale_re(&self, x: f64) -> AlgElem {
        self.map_blocks(|a| a.scale(x))
    }

    /// The involution: blockwise conjugate transpose.
    pub fn star(&self) -> AlgElem {
        self.map_blocks(|a| a.adjoint())
    }

    /// Commutator `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &AlgElem) -> Result<AlgElem> {
        self.zip_with(other, |a, b| a * b - b * a)
    }

    pub fn pow(&self, k: u32) -> AlgElem {
        let mut acc = AlgElem::identity(&self.shape);
        for _ in 0..k {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn op_norm(&self) -> f64 {
        self.blocks.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }

    /// Singular values of every block, merged.
    pub fn singular_values(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(linalg::singular_values).collect()
    }

    /// Operator, Hilbert-Schmidt and trace norms.
    pub fn schatten(&self) -> SchattenNorms {
        let s = self.singular_values();
        SchattenNorms {
            op: s.iter().copied().fold(0.0, f64::max),
            hs: s.iter().map(|a| a * a).sum::<f64>().sqrt(),
            tr: s.iter().sum(),
        }
    }

    /// Equality up to `eps_eq·(1 + ‖self‖)` in blockwise max-norm.
    pub fn approx_eq(&self, other: &AlgElem, tol: &Tolerances) -> bool {
        match self.sub(other) {
            Ok(d) => d.max_abs() <= tol.eps_eq * (1.0 + self.op_norm()),
            Err(_) => false,
        }
    }

    /// `‖A − A*‖`.
    pub fn self_adjoint_defect(&self) -> f64 {
        self.sub(&self.star()).expect("same shape").op_norm()
    }

    pub fn is_self_adjoint(&self, tol: &Tolerances) -> bool {
        self.self_adjoint_defect() <= tol.eps_eq * self.op_norm().max(f64::MIN_POSITIVE)
    }

    /// `‖AA* − A*A‖`.
    pub fn normality_defect(&self) -> f64 {
        let s = self.star();
        self.mul(&s)
            .and_then(|x| x.sub(&s.mul(self)?))
            .expect("same shape")
            .op_norm()
    }

    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// Self-adjoint parts `(A′, A″)` with `A = A′ + iA″`.
    pub fn sa_parts(&self) -> (AlgElem, AlgElem) {
        let s = self.star();
        let re = self.add(&s).expect("same shape").scale_re(0.5);
        let im = self
            .sub(&s)
            .expect("same shape")
            .scale(C64::new(0.0, -0.5));
        (re, im)
    }

    /// `(𝕀 − A)⁻¹` as the limit of the Neumann series `Σₖ Aᵏ`.
    ///
    /// Partial sums are accumulated in the doubling form
    /// `Σ_{k<2ᴷ} Aᵏ = Π_{j<K} (𝕀 + A^{2ʲ})`, stopping once `‖A^{2ᴷ}‖` is below
    /// machine precision.
    pub fn neumann_inverse(&self, tol: &Tolerances) -> Result<AlgElem> {
        let norm = self.op_norm();
        if norm >= 1.0 {
            return Err(Error::precondition(
                "Neumann series requires ‖A‖ < 1",
                norm,
            ));
        }
        let one = AlgElem::identity(&self.shape);
        let mut sum = one.clone();
        let mut power = self.clone();
        for _ in 0..tol.max_power_iters.max(64) {
            let pn = power.op_norm();
            if pn <= f64::EPSILON * 1e-3 {
                break;
            }
            sum = sum.mul(&one.add(&power)?)?;
            power = power.mul(&power)?;
        }
        let residual = one.sub(self)?.mul(&sum)?.sub(&one)?.op_norm();
        if residual > tol.eps_eq * (1.0 + sum.op_norm()) {
            return Err(Error::Numerical(format!(
                "Neumann series residual {residual:e} exceeds tolerance"
            )));
        }
        Ok(sum)
    }
}

/// Matrix of left multiplication `X ↦ A X` on matrix-unit coordinates.
pub fn left_mult_matrix(a: &AlgElem) -> Mat {
    let shape = a.shape();
    let n = shape.algebra_dim();
    let mut out = linalg::zeros(n, n);
    for (col, (i, j, k)) in shape.basis().enumerate() {
        // A·E_{jk} has column j of Aᵢ placed in column k.
        for p in 0..shape.dims()[i] {
            out[(shape.basis_index(i, p, k), col)] = a.blocks[i][(p, j)];
        }
    }
    out
}

/// Matrix of right multiplication `X ↦ X A` on matrix-unit coordinates.
pub fn right_mult_matrix(a: &AlgElem) -> Mat {
    let shape = a.shape();
    let n = shape.algebra_dim();
    let mut out = linalg::zeros(n, n);
    for (col, (i, j, k)) in shape.basis().enumerate() {
        // E_{jk}·A has row k of Aᵢ placed in row j.
        for q in 0..shape.dims()[i] {
            out[(shape.basis_index(i, j, q), col)] = a.blocks[i][(k, q)];
        }
    }
    out
}

/// The three Schatten norms used in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenNorms {
    pub op: f64,
    pub hs: f64,
    pub tr: f64,
}

/// Image of `a` under the quotient map by the ideal spanned by the listed
/// blocks (0-based). The result lives over the retained blocks, in order.
///
/// Every two-sided ideal of a block algebra is a sub-direct-sum of blocks,
/// so this covers all quotients.
pub fn quotient_by_ideal(
    shape: &BlockShape,
    ideal_blocks: &BTreeSet<usize>,
    a: &AlgElem,
) -> Result<AlgElem> {
    if a.shape() != shape {
        a.check_shape(&AlgElem::zeros(shape))?;
    }
    if let Some(&bad) = ideal_blocks.iter().find(|&&i| i >= shape.num_blocks()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: shape.num_blocks(),
        });
    }
    let kept: Vec<usize> = (0..shape.num_blocks())
        .filter(|i| !ideal_blocks.contains(i))
        .collect();
    if kept.is_empty() {
        return Err(Error::Invalid(
            "quotient by the whole algebra is the zero algebra".into(),
        ));
    }
    let dims = kept.iter().map(|&i| shape.dims()[i]).collect();
    let blocks = kept.iter().map(|&i| a.blocks[i].clone()).collect();
    AlgElem::new(BlockShape::new(dims)?, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn m2(a: [[f64; 2]; 2]) -> AlgElem {
        AlgElem::from_matrix(Mat::from_fn(2, 2, |i, j| c(a[i][j], 0.0))).unwrap()
    }

    #[test]
    fn star_of_nilpotent() {
        let a = m2([[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(a.star(), m2([[0.0, 0.0], [1.0, 0.0]]));
    }

    #[test]
    fn star_is_antilinear() {
        let shape = BlockShape::full(2);
        let a = AlgElem::scalar(&shape, c(0.0, 1.0));
        assert_eq!(a.star(), AlgElem::scalar(&shape, c(0.0, -1.0)));
    }

    #[test]
    fn blockwise_product() {
        let a = AlgElem::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let b = AlgElem::diagonal(&[c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert_eq!(
            a.mul(&b).unwrap(),
            AlgElem::diagonal(&[c(3.0, 0.0), c(8.0, 0.0)]).unwrap()
        );
    }

    #[test]
    fn shape_mismatch_names_block() {
        let a = AlgElem::identity(&BlockShape::new(vec![2, 3]).unwrap());
        let b = AlgElem::identity(&BlockShape::new(vec![2, 2]).unwrap());
        match a.mul(&b) {
            Err(Error::ShapeMismatch { block, .. }) => assert_eq!(block, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn norms_of_small_examples() {
        assert_eq!(m2([[3.0, 0.0], [0.0, -4.0]]).op_norm(), 4.0);
        let a = m2([[0.0, 2.0], [0.0, 0.0]]);
        assert!((a.op_norm() - 2.0).abs() < 1e-15);
        assert!((a.star().mul(&a).unwrap().op_norm() - 4.0).abs() < 1e-14);
        let rot = m2([[0.6, -0.8], [0.8, 0.6]]);
        assert!((rot.op_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_schatten_norms() {
        let n = AlgElem::identity(&BlockShape::full(5)).schatten();
        assert!((n.op - 1.0).abs() < 1e-14);
        assert!((n.hs - 5f64.sqrt()).abs() < 1e-14);
        assert!((n.tr - 5.0).abs() < 1e-13);
    }

    #[test]
    fn rank_one_trace_norm_is_product_of_lengths() {
        let phi = nalgebra::DVector::from_vec(vec![c(1.0, 1.0), c(0.0, 2.0), c(-1.0, 0.0)]);
        let psi = nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.0, 0.0), c(2.0, -1.0)]);
        let r = AlgElem::from_matrix(&phi * psi.adjoint()).unwrap();
        assert!((r.schatten().tr - phi.norm() * psi.norm()).abs() < 1e-12);
    }

    #[test]
    fn neumann_examples() {
        let tol = Tolerances::default();
        let shape = BlockShape::full(2);
        let z = AlgElem::zeros(&shape).neumann_inverse(&tol).unwrap();
        assert_eq!(z, AlgElem::identity(&shape));
        let half = AlgElem::scalar(&shape, c(0.5, 0.0));
        let inv = half.neumann_inverse(&tol).unwrap();
        assert!(inv.approx_eq(&AlgElem::scalar(&shape, c(2.0, 0.0)), &tol));
        let big = AlgElem::scalar(&shape, c(1.0, 0.0));
        match big.neumann_inverse(&tol) {
            Err(Error::Precondition { measured, .. }) => assert!((measured - 1.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sa_parts_examples() {
        let shape = BlockShape::full(2);
        let i = AlgElem::scalar(&shape, c(0.0, 1.0));
        let (re, im) = i.sa_parts();
        assert_eq!(re, AlgElem::zeros(&shape));
        assert!(im.approx_eq(&AlgElem::identity(&shape), &Tolerances::default()));
        let h = m2([[1.0, 2.0], [2.0, -1.0]]);
        let (re, im) = h.sa_parts();
        assert_eq!(re, h);
        assert_eq!(im.max_abs(), 0.0);
    }

    #[test]
    fn quotient_examples() {
        let shape = BlockShape::new(vec![2, 3]).unwrap();
        let x = Mat::from_fn(2, 2, |i, j| c((i + j) as f64, 1.0));
        let y = Mat::from_fn(3, 3, |i, j| c((i * j) as f64, 0.0));
        let a = AlgElem::new(shape.clone(), vec![x.clone(), y]).unwrap();
        let none = quotient_by_ideal(&shape, &BTreeSet::new(), &a).unwrap();
        assert_eq!(none, a);
        let q = quotient_by_ideal(&shape, &BTreeSet::from([1]), &a).unwrap();
        assert_eq!(q, AlgElem::from_matrix(x).unwrap());
        assert!(matches!(
            quotient_by_ideal(&shape, &BTreeSet::from([2]), &a),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn basis_indexing_round_trips() {
        let shape = BlockShape::new(vec![2, 1, 3]).unwrap();
        for (idx, (i, j, k)) in shape.basis().enumerate() {
            assert_eq!(shape.basis_index(i, j, k), idx);
            assert_eq!(shape.basis_label(idx), (i, j, k));
        }
        assert_eq!(shape.basis().count(), shape.algebra_dim());
    }
}
