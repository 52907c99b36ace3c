//! Dense complex linear-algebra kernels shared by every construction in the
//! crate: Hermitian eigensolver, Schur form, singular values, null spaces,
//! commutants, generated algebras, intertwiners and Gram-form quotients.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. Vectorisation is
//! column-major, matching nalgebra's storage, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Mat = DMatrix<C64>;
pub type CVec = DVector<C64>;

const SCHUR_MAX_ITERS: usize = 10_000;
const INTERTWINER_SEED: u64 = 0x09a1_5eed;

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> Mat {
    Mat::zeros(r, c)
}

/// Largest entry modulus.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`. Shapes must agree.
pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_diff on mismatched shapes");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermitian_part(m: &Mat) -> Mat {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_all_finite(m: &Mat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigen-decomposition of the Hermitian part of `h`, eigenvalues ascending.
/// Columns of the returned matrix are the matching orthonormal eigenvectors.
pub fn eigh(h: &Mat) -> (Vec<f64>, Mat) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(h));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Complex Schur form `a = q t q†` with `t` upper triangular.
///
/// The shifted QR iteration can stall on matrices whose eigenvalues all share
/// one modulus (permutation matrices are the usual culprit). When that
/// happens the decomposition is retried on `a + c·𝕀` for a few fixed complex
/// shifts `c`; the Schur vectors are unchanged by the shift.
pub fn schur(a: &Mat) -> Result<(Mat, Mat)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!(
            "Schur form of a non-square {}x{} matrix",
            n,
            a.ncols()
        )));
    }
    if n <= 1 {
        return Ok((identity(n), a.clone()));
    }
    if let Some(s) = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITERS) {
        return Ok(s.unpack());
    }
    let scale = (a.norm() / (n as f64).sqrt()).max(f64::MIN_POSITIVE);
    for attempt in 0..8 {
        let angle = 0.7 + 1.3 * attempt as f64;
        let shift = C64::from_polar(scale * (0.31 + 0.17 * attempt as f64), angle);
        let shifted = a + identity(n) * shift;
        if let Some(s) = Schur::try_new(shifted, f64::EPSILON, SCHUR_MAX_ITERS) {
            let (q, mut t) = s.unpack();
            for i in 0..n {
                t[(i, i)] -= shift;
            }
            return Ok((q, t));
        }
    }
    Err(Error::Numerical(
        "Schur iteration failed to converge after shifted retries".into(),
    ))
}

/// Eigenvalues of a square matrix, in Schur-diagonal order.
pub fn eigenvalues(a: &Mat) -> Result<Vec<C64>> {
    let (_, t) = schur(a)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Unitary diagonalisation of a normal matrix: returns `(λ, q)` with
/// `a ≈ q diag(λ) q†`, plus the size of the discarded strictly upper part of
/// the Schur form (zero for exactly normal input).
pub fn normal_eig(a: &Mat) -> Result<(Vec<C64>, Mat, f64)> {
    let herm_defect = max_diff(a, &a.adjoint());
    if herm_defect <= 1e-14 * (1.0 + max_abs(a)) {
        let (vals, q) = eigh(a);
        return Ok((vals.into_iter().map(C64::from).collect(), q, 0.0));
    }
    let (q, t) = schur(a)?;
    let n = t.nrows();
    let mut off = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            off = off.max(t[(i, j)].norm());
        }
    }
    Ok(((0..n).map(|i| t[(i, i)]).collect(), q, off))
}

/// Singular values in descending order.
pub fn singular_values(a: &Mat) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(a.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral (largest singular value) norm.
pub fn op_norm(a: &Mat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Thin SVD `a = u diag(s) v†` with singular values descending.
pub fn svd(a: &Mat) -> (Mat, Vec<f64>, Mat) {
    let (r, c) = a.shape();
    let k = r.min(c);
    if k == 0 {
        return (zeros(r, 0), Vec::new(), zeros(c, 0));
    }
    let dec = SVD::new(a.clone(), true, true);
    let u = dec.u.expect("u requested");
    let v_t = dec.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    let mut uu = zeros(r, k);
    let mut vv = zeros(c, k);
    let mut s = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        uu.set_column(dst, &u.column(src));
        vv.set_column(dst, &v_t.row(src).adjoint());
        s.push(dec.singular_values[src]);
    }
    (uu, s, vv)
}

/// Orthonormal basis (as columns) of the kernel of `m`. A right singular
/// vector counts as null when its singular value is at most
/// `rel_tol · σ_max`.
pub fn null_space(m: &Mat, rel_tol: f64) -> Mat {
    null_space_scaled(m, rel_tol, 0.0)
}

/// Like [`null_space`], with the cut taken relative to
/// `max(σ_max, scale)`; used when `m` is built from inputs of known size
/// and may itself vanish up to rounding.
pub fn null_space_scaled(m: &Mat, rel_tol: f64, scale: f64) -> Mat {
    let (r, c) = m.shape();
    if c == 0 {
        return zeros(0, 0);
    }
    if r == 0 {
        return identity(c);
    }
    // Pad to at least square so that SVD returns a complete right basis.
    let padded = if r < c {
        let mut p = zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let dec = SVD::new(padded, false, true);
    let v_t = dec.v_t.expect("v_t requested");
    let smax = dec.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel_tol * smax.max(scale);
    let cols: Vec<CVec> = dec
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cut || smax == 0.0)
        .map(|(j, _)| v_t.row(j).adjoint())
        .collect();
    if cols.is_empty() {
        zeros(c, 0)
    } else {
        Mat::from_columns(&cols)
    }
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn range_basis(m: &Mat, rel_tol: f64) -> Mat {
    let (u, s, _) = svd(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let keep = s.iter().take_while(|&&x| smax > 0.0 && x > rel_tol * smax).count();
    u.columns(0, keep).into_owned()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Column-major vectorisation.
pub fn vectorize(m: &Mat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVec, rows: usize, cols: usize) -> Mat {
    Mat::from_column_slice(rows, cols, v.as_slice())
}

/// Frobenius inner product `Tr(a† b)`.
pub fn frobenius_inner(a: &Mat, b: &Mat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn stack_rows(blocks: &[Mat], cols: usize) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Orthonormal (Frobenius) basis of `{X : X s = s X for all s}`.
pub fn commutant_basis(mats: &[Mat], rel_tol: f64) -> Result<Vec<Mat>> {
    let k = check_common_dim(mats)?;
    let id = identity(k);
    let eqs: Vec<Mat> = mats
        .iter()
        .map(|s| kron(&s.transpose(), &id) - kron(&id, s))
        .collect();
    let scale = mats.iter().map(max_abs).fold(0.0, f64::max);
    let ns = null_space_scaled(&stack_rows(&eqs, k * k), rel_tol, scale);
    Ok(ns
        .column_iter()
        .map(|c| unvectorize(&c.into_owned(), k, k))
        .collect())
}

/// Orthonormal (Frobenius) basis of the intertwiner space
/// `{T : b_i T = T a_i}` between two families of the same length.
pub fn intertwiner_space(a: &[Mat], b: &[Mat], rel_tol: f64) -> Result<Vec<Mat>> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "intertwiner families of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let ka = check_common_dim(a)?;
    let kb = check_common_dim(b)?;
    let ia = identity(ka);
    let ib = identity(kb);
    let eqs: Vec<Mat> = a
        .iter()
        .zip(b)
        .map(|(x, y)| kron(&ia, y) - kron(&x.transpose(), &ib))
        .collect();
    let scale = a.iter().chain(b).map(max_abs).fold(0.0, f64::max);
    let ns = null_space_scaled(&stack_rows(&eqs, ka * kb), rel_tol, scale);
    Ok(ns
        .column_iter()
        .map(|c| unvectorize(&c.into_owned(), kb, ka))
        .collect())
}

/// Finds a unitary `u` with `u a_i u† = b_i` for all `i`, if one exists.
///
/// Both families are closed under adjoints before solving, so `a` and `b`
/// should be images of the same generators under two *-representations.
pub fn unitary_intertwiner(a: &[Mat], b: &[Mat], rel_tol: f64) -> Result<Option<Mat>> {
    let ka = check_common_dim(a)?;
    let kb = check_common_dim(b)?;
    if ka != kb {
        return Ok(None);
    }
    let mut aa: Vec<Mat> = a.to_vec();
    let mut bb: Vec<Mat> = b.to_vec();
    aa.extend(a.iter().map(|m| m.adjoint()));
    bb.extend(b.iter().map(|m| m.adjoint()));
    let space = intertwiner_space(&aa, &bb, rel_tol)?;
    if space.is_empty() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(INTERTWINER_SEED);
    for _ in 0..4 {
        let mut t = zeros(kb, ka);
        for basis in &space {
            let c = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            t += basis * c;
        }
        let (u, s, v) = svd(&t);
        let smax = s.first().copied().unwrap_or(0.0);
        let smin = s.last().copied().unwrap_or(0.0);
        if smax > 0.0 && smin > 1e-8 * smax {
            return Ok(Some(u * v.adjoint()));
        }
    }
    Ok(None)
}

/// Orthonormal (Frobenius) basis of the unital *-algebra generated by `gens`.
pub fn algebra_span(gens: &[Mat], rel_tol: f64) -> Result<Vec<Mat>> {
    let k = check_common_dim(gens)?;
    let mut letters: Vec<Mat> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(g.clone());
        letters.push(g.adjoint());
    }
    let mut basis: Vec<Mat> = Vec::new();
    let mut queue: Vec<Mat> = Vec::new();
    if let Some(b) = orthogonal_extend(&basis, identity(k), rel_tol) {
        basis.push(b.clone());
        queue.push(b);
    }
    while let Some(b) = queue.pop() {
        for l in &letters {
            if basis.len() == k * k {
                return Ok(basis);
            }
            if let Some(nb) = orthogonal_extend(&basis, &b * l, rel_tol) {
                basis.push(nb.clone());
                queue.push(nb);
            }
        }
    }
    Ok(basis)
}

/// Orthonormal basis of the linear span of `mats` (Frobenius inner product).
pub fn span_basis(mats: &[Mat], rel_tol: f64) -> Vec<Mat> {
    let mut basis = Vec::new();
    for m in mats {
        if let Some(b) = orthogonal_extend(&basis, m.clone(), rel_tol) {
            basis.push(b);
        }
    }
    basis
}

/// Gram-Schmidt step (applied twice): returns the normalised component of
/// `cand` orthogonal to `basis`, or `None` if it is negligible.
fn orthogonal_extend(basis: &[Mat], mut cand: Mat, rel_tol: f64) -> Option<Mat> {
    let start = cand.norm();
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let c = frobenius_inner(b, &cand);
            cand -= b * c;
        }
    }
    let rest = cand.norm();
    if rest <= rel_tol * start {
        None
    } else {
        Some(cand.unscale(rest))
    }
}

/// Dimension of the linear span of `mats`.
pub fn span_dim(mats: &[Mat], rel_tol: f64) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let cols: Vec<CVec> = mats.iter().map(vectorize).collect();
    let m = Mat::from_columns(&cols);
    let s = singular_values(&m);
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| smax > 0.0 && x > rel_tol * smax).count()
}

pub(crate) fn check_common_dim(mats: &[Mat]) -> Result<usize> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Invalid("empty matrix family".into()))?;
    let k = first.nrows();
    for (i, m) in mats.iter().enumerate() {
        if m.nrows() != k || m.ncols() != k {
            return Err(Error::Dimension(format!(
                "matrix {} is {}x{}, expected {}x{}",
                i,
                m.nrows(),
                m.ncols(),
                k,
                k
            )));
        }
    }
    Ok(k)
}

/// Quotient of a finite spanning family by the null space of its Gram form.
///
/// Given the Gram matrix `G` of a positive semi-definite sesquilinear form on
/// coefficient space `ℂᴺ`, keeps the eigenvectors whose eigenvalue exceeds
/// `rel_tol · Tr G` and scales them so that they are orthonormal for the
/// form. Coordinates of the class of a coefficient vector `β` are then
/// `V† G β`, and an operator `L` on coefficient space that preserves the null
/// space descends to `V† G L V`.
#[derive(Debug, Clone)]
pub struct GramQuotient {
    basis: Mat,
    gram: Mat,
}

impl GramQuotient {
    pub fn new(gram: &Mat, rel_tol: f64) -> Self {
        let g = hermitian_part(gram);
        let trace: f64 = (0..g.nrows()).map(|i| g[(i, i)].re).sum();
        let (vals, vecs) = eigh(&g);
        let cols: Vec<CVec> = vals
            .iter()
            .enumerate()
            .filter(|(_, &l)| trace > 0.0 && l > rel_tol * trace)
            .map(|(j, &l)| vecs.column(j).unscale(l.sqrt()))
            .collect();
        let basis = if cols.is_empty() {
            zeros(g.nrows(), 0)
        } else {
            Mat::from_columns(&cols)
        };
        GramQuotient { basis, gram: g }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal coordinates of the class of the coefficient vector `beta`.
    pub fn class_of(&self, beta: &CVec) -> CVec {
        self.basis.adjoint() * (&self.gram * beta)
    }

    /// The operator induced on the quotient by `op` acting on coefficients.
    pub fn descend(&self, op: &Mat) -> Mat {
        self.basis.adjoint() * &self.gram * op * &self.basis
    }
}

/// Groups an ascending list into runs whose consecutive gaps are at most `gap`.
pub(crate) fn cluster_sorted(vals: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || vals[i] - vals[i - 1] > gap {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cyclic_shift(n: usize) -> Mat {
        let mut p = zeros(n, n);
        for i in 0..n {
            p[((i + 1) % n, i)] = c(1.0, 0.0);
        }
        p
    }

    #[test]
    fn schur_handles_cyclic_permutations() {
        for n in [2, 5, 6, 8, 12] {
            let p = cyclic_shift(n);
            let (q, t) = schur(&p).unwrap();
            let back = &q * &t * q.adjoint();
            assert!(max_diff(&back, &p) < 1e-12, "n = {n}");
            for i in 0..n {
                assert!((t[(i, i)].norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = Mat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-14);
    }

    #[test]
    fn commutant_of_full_matrix_algebra_is_scalars() {
        let e12 = Mat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let basis = commutant_basis(&[e12.clone(), e12.adjoint()], 1e-10).unwrap();
        assert_eq!(basis.len(), 1);
    }

    #[test]
    fn algebra_span_of_shift_is_circulants() {
        let p = cyclic_shift(4);
        assert_eq!(algebra_span(&[p], 1e-10).unwrap().len(), 4);
    }

    #[test]
    fn gram_quotient_drops_null_directions() {
        let v = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let g = &v * v.adjoint();
        let q = GramQuotient::new(&g, 1e-12);
        assert_eq!(q.dim(), 1);
    }

    #[test]
    fn clusters_split_on_gaps() {
        let runs = cluster_sorted(&[0.0, 1e-12, 1.0, 2.0, 2.0 + 1e-9], 1e-6);
        assert_eq!(runs, vec![0..2, 2..3, 3..5]);
    }
}
