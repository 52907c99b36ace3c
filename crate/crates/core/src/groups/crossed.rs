use num_complex::Complex64 as C64;

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, Mat};
use crate::states::{gns, GnsResult, State};

use super::{FiniteGroup, UnitaryRep};

/// A left action of a finite group on `{0, …, set_size−1}`;
/// `table[x][q] = x·q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GAction {
    set_size: usize,
    table: Vec<Vec<usize>>,
}

impl GAction {
    pub fn new(group: &FiniteGroup, set_size: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if set_size == 0 {
            return Err(Error::Invalid("action on an empty set".into()));
        }
        if table.len() != group.order() {
            return Err(Error::Dimension(format!(
                "action table has {} rows for a group of order {}",
                table.len(),
                group.order()
            )));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != set_size || row.iter().any(|&q| q >= set_size) {
                return Err(Error::Invalid(format!("action row {x} is malformed")));
            }
        }
        if (0..set_size).any(|q| table[0][q] != q) {
            return Err(Error::Invalid("identity does not act trivially".into()));
        }
        for x in 0..group.order() {
            for y in 0..group.order() {
                for q in 0..set_size {
                    if table[x][table[y][q]] != table[group.mul(x, y)][q] {
                        return Err(Error::Invalid(format!(
                            "x·(y·q) ≠ (xy)·q at x = {x}, y = {y}, q = {q}"
                        )));
                    }
                }
            }
        }
        Ok(GAction { set_size, table })
    }

    /// Left translation of the group on itself.
    pub fn translation(group: &FiniteGroup) -> Self {
        GAction {
            set_size: group.order(),
            table: group.table().to_vec(),
        }
    }

    pub fn trivial(group: &FiniteGroup, set_size: usize) -> Self {
        GAction {
            set_size,
            table: vec![(0..set_size).collect(); group.order()],
        }
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn act(&self, x: usize, q: usize) -> usize {
        self.table[x][q]
    }

    /// Permutation matrices `δ_q ↦ δ_{x·q}`.
    pub fn permutation_rep(&self) -> UnitaryRep {
        let m = self.set_size;
        let mats = self
            .table
            .iter()
            .map(|row| {
                let mut p = linalg::zeros(m, m);
                for (q, &xq) in row.iter().enumerate() {
                    p[(xq, q)] = C64::new(1.0, 0.0);
                }
                p
            })
            .collect();
        UnitaryRep::from_parts(m, mats)
    }
}

/// A function `f(x, q)` on `G × Q`, stored `x`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedElem {
    order: usize,
    set_size: usize,
    values: Vec<C64>,
}

impl CrossedElem {
    pub fn new(order: usize, set_size: usize, values: Vec<C64>) -> Result<Self> {
        if values.len() != order * set_size {
            return Err(Error::Dimension(format!(
                "{} values for a {order} x {set_size} table",
                values.len()
            )));
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::Invalid("non-finite crossed-product entry".into()));
        }
        Ok(CrossedElem {
            order,
            set_size,
            values,
        })
    }

    pub fn get(&self, x: usize, q: usize) -> C64 {
        self.values[x * self.set_size + q]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn max_diff(&self, other: &CrossedElem) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The transformation group algebra `C*(G, Q)` of an action on a finite
/// set, of dimension `|G|·|Q|`.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    pub group: FiniteGroup,
    pub action: GAction,
}

impl CrossedProduct {
    pub fn new(group: FiniteGroup, action: GAction) -> Result<Self> {
        if action.table.len() != group.order() {
            return Err(Error::Dimension("action and group do not match".into()));
        }
        Ok(CrossedProduct { group, action })
    }

    pub fn dim(&self) -> usize {
        self.group.order() * self.action.set_size
    }

    fn check(&self, f: &CrossedElem) -> Result<()> {
        if f.order != self.group.order() || f.set_size != self.action.set_size {
            return Err(Error::Dimension(format!(
                "element on {} x {} used in a crossed product of size {} x {}",
                f.order,
                f.set_size,
                self.group.order(),
                self.action.set_size
            )));
        }
        Ok(())
    }

    pub fn zeros(&self) -> CrossedElem {
        CrossedElem {
            order: self.group.order(),
            set_size: self.action.set_size,
            values: vec![C64::new(0.0, 0.0); self.dim()],
        }
    }

    pub fn delta(&self, x: usize, q: usize) -> CrossedElem {
        let mut f = self.zeros();
        f.values[x * self.action.set_size + q] = C64::new(1.0, 0.0);
        f
    }

    /// `δ_e ⊗ 1`.
    pub fn unit(&self) -> CrossedElem {
        let mut f = self.zeros();
        for q in 0..self.action.set_size {
            f.values[q] = C64::new(1.0, 0.0);
        }
        f
    }

    /// `(f * g)(x, q) = Σ_y f(y, q) g(y⁻¹x, y⁻¹q)`.
    pub fn convolve(&self, f: &CrossedElem, g: &CrossedElem) -> Result<CrossedElem> {
        self.check(f)?;
        self.check(g)?;
        let m = self.action.set_size;
        let mut out = self.zeros();
        for x in 0..self.group.order() {
            for y in 0..self.group.order() {
                let yi = self.group.inv(y);
                let yix = self.group.mul(yi, x);
                for q in 0..m {
                    out.values[x * m + q] +=
                        f.get(y, q) * g.get(yix, self.action.act(yi, q));
                }
            }
        }
        Ok(out)
    }

    /// `f*(x, q) = conj f(x⁻¹, x⁻¹q)`.
    pub fn involute(&self, f: &CrossedElem) -> Result<CrossedElem> {
        self.check(f)?;
        let m = self.action.set_size;
        let mut out = self.zeros();
        for x in 0..self.group.order() {
            let xi = self.group.inv(x);
            for q in 0..m {
                out.values[x * m + q] = f.get(xi, self.action.act(xi, q)).conj();
            }
        }
        Ok(out)
    }

    /// `π(δ_{x,q}) = π̃(δ_q) U(x)`, the integrated form of a covariant pair.
    pub fn integrate(&self, pair: &CovariantPair) -> Result<CrossedRep> {
        if pair.u.mats().len() != self.group.order() || pair.proj.len() != self.action.set_size {
            return Err(Error::Dimension("covariant pair does not match the crossed product".into()));
        }
        let images = (0..self.group.order())
            .flat_map(|x| pair.proj.iter().map(move |p| (x, p)))
            .map(|(x, p)| p * &pair.u.mats()[x])
            .collect();
        Ok(CrossedRep {
            dim: pair.u.dim(),
            images,
        })
    }

    /// Recovers `U(x) = Σ_q π(δ_{x,q})` and `π̃(δ_q) = π(δ_{e,q})`.
    pub fn disintegrate(&self, rep: &CrossedRep, tol: &Tolerances) -> Result<CovariantPair> {
        let m = self.action.set_size;
        if rep.images.len() != self.dim() {
            return Err(Error::Dimension("representation does not match the crossed product".into()));
        }
        let d = rep.dim;
        let mats = (0..self.group.order())
            .map(|x| {
                rep.images[x * m..(x + 1) * m]
                    .iter()
                    .fold(linalg::zeros(d, d), |acc, p| acc + p)
            })
            .collect();
        let u = UnitaryRep::new(&self.group, d, mats, tol)?;
        let proj = rep.images[..m].to_vec();
        CovariantPair::new(self, u, proj, tol)
    }

    /// The covariant pair on `ℓ²(Q)` built from the permutation action.
    pub fn permutation_pair(&self) -> CovariantPair {
        let m = self.action.set_size;
        let proj = (0..m)
            .map(|q| {
                let mut p = linalg::zeros(m, m);
                p[(q, q)] = C64::new(1.0, 0.0);
                p
            })
            .collect();
        CovariantPair {
            u: self.action.permutation_rep(),
            proj,
        }
    }
}

/// A unitary representation `U` of `G` and a projection-valued
/// representation `q ↦ π̃(δ_q)` of `C(Q)` with
/// `U(x) π̃(δ_q) U(x)* = π̃(δ_{x·q})`.
#[derive(Debug, Clone)]
pub struct CovariantPair {
    pub u: UnitaryRep,
    pub proj: Vec<Mat>,
}

impl CovariantPair {
    pub fn new(cp: &CrossedProduct, u: UnitaryRep, proj: Vec<Mat>, tol: &Tolerances) -> Result<Self> {
        if proj.len() != cp.action.set_size {
            return Err(Error::Dimension(format!(
                "{} projections for a set of size {}",
                proj.len(),
                cp.action.set_size
            )));
        }
        let d = u.dim();
        if proj.iter().any(|p| p.nrows() != d || p.ncols() != d) {
            return Err(Error::Dimension("projection size differs from the representation".into()));
        }
        let pair = CovariantPair { u, proj };
        let r = pair.covariance_residual(cp).max(pair.pvm_defect());
        if r > tol.eps_eq.max(1e-9) {
            return Err(Error::precondition("not a covariant pair; residual", r));
        }
        Ok(pair)
    }

    /// `max ‖P_q P_r − δ_{qr} P_q‖`, `‖P_q* − P_q‖` and `‖Σ P_q − 𝕀‖`.
    pub fn pvm_defect(&self) -> f64 {
        let d = self.u.dim();
        let mut worst = linalg::max_diff(
            &self.proj.iter().fold(linalg::zeros(d, d), |acc, p| acc + p),
            &linalg::identity(d),
        );
        for (q, p) in self.proj.iter().enumerate() {
            worst = worst.max(linalg::max_diff(p, &p.adjoint()));
            for (r, pr) in self.proj.iter().enumerate() {
                let prod = p * pr;
                worst = worst.max(if q == r {
                    linalg::max_diff(&prod, p)
                } else {
                    linalg::max_abs(&prod)
                });
            }
        }
        worst
    }

    /// `max ‖U(x) π̃(δ_q) U(x)* − π̃(δ_{x·q})‖`.
    pub fn covariance_residual(&self, cp: &CrossedProduct) -> f64 {
        let mut worst = 0.0f64;
        for (x, ux) in self.u.mats().iter().enumerate() {
            for (q, p) in self.proj.iter().enumerate() {
                let moved = ux * p * ux.adjoint();
                worst = worst.max(linalg::max_diff(&moved, &self.proj[cp.action.act(x, q)]));
            }
        }
        worst
    }
}

/// A representation of a crossed product, stored as images of the basis
/// functions `δ_{x,q}` (`x`-major).
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedRep {
    pub dim: usize,
    pub images: Vec<Mat>,
}

impl CrossedRep {
    pub fn apply(&self, f: &CrossedElem) -> Result<Mat> {
        if f.values.len() != self.images.len() {
            return Err(Error::Dimension("element does not match representation".into()));
        }
        Ok(f
            .values
            .iter()
            .zip(&self.images)
            .fold(linalg::zeros(self.dim, self.dim), |acc, (&c, m)| acc + m * c))
    }

    /// Largest violation of `π(f*g) = π(f)π(g)` and `π(f*) = π(f)*` over
    /// basis functions.
    pub fn defect(&self, cp: &CrossedProduct) -> Result<f64> {
        let m = cp.action.set_size();
        let n = cp.group.order();
        let mut worst = 0.0f64;
        for a in 0..n * m {
            let fa = cp.delta(a / m, a % m);
            let star = self.apply(&cp.involute(&fa)?)?;
            worst = worst.max(linalg::max_diff(&star, &self.images[a].adjoint()));
            for b in 0..n * m {
                let fb = cp.delta(b / m, b % m);
                let prod = self.apply(&cp.convolve(&fa, &fb)?)?;
                worst = worst.max(linalg::max_diff(&prod, &(&self.images[a] * &self.images[b])));
            }
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone)]
pub struct CstarGG {
    /// `π(δ_{a,q})` on `ℓ²(G)`, `a`-major.
    pub images: Vec<Mat>,
    pub span_dim: usize,
    pub surjective: bool,
}

/// The representation `π(f)Ψ(x) = Σ_y f(xy⁻¹, x) Ψ(y)` of the crossed
/// product of `G` acting on itself by left translation; it maps onto
/// `M_{|G|}`.
pub fn cstar_gg(group: &FiniteGroup, action: &GAction) -> Result<CstarGG> {
    if action != &GAction::translation(group) {
        return Err(Error::Invalid(
            "the action must be left translation of the group on itself".into(),
        ));
    }
    let n = group.order();
    let mut images = Vec::with_capacity(n * n);
    for a in 0..n {
        for q in 0..n {
            // f = δ_{a,q}: only x = q and y with x y⁻¹ = a contribute.
            let mut m = linalg::zeros(n, n);
            for y in 0..n {
                if group.mul(q, group.inv(y)) == a {
                    m[(q, y)] = C64::new(1.0, 0.0);
                }
            }
            images.push(m);
        }
    }
    let span_dim = linalg::span_dim(&images, 1e-10);
    Ok(CstarGG {
        images,
        span_dim,
        surjective: span_dim == n * n,
    })
}

/// An action of a finite group on a block algebra by automorphisms.
#[derive(Debug, Clone)]
pub enum AlgebraAction {
    /// `α_x(A) = V_x A V_x*` for unitaries `V_x` of the algebra.
    Inner(Vec<AlgElem>),
    /// `α_x(f)(q) = f(x⁻¹·q)` on `ℂ^{|Q|}`.
    Points(GAction),
}

impl AlgebraAction {
    /// Matrix of `α_x` on matrix-unit coordinates.
    fn coefficient_matrix(&self, shape: &BlockShape, x: usize) -> Result<Mat> {
        let n = shape.algebra_dim();
        let mut m = linalg::zeros(n, n);
        match self {
            AlgebraAction::Inner(vs) => {
                let v = &vs[x];
                let vstar = v.star();
                for b in 0..n {
                    let img = v.mul(&AlgElem::matrix_unit(shape, b))?.mul(&vstar)?;
                    m.set_column(b, &CVec::from_vec(img.coeffs()));
                }
            }
            AlgebraAction::Points(act) => {
                for r in 0..n {
                    m[(act.act(x, r), r)] = C64::new(1.0, 0.0);
                }
            }
        }
        Ok(m)
    }

    fn check(&self, group: &FiniteGroup, shape: &BlockShape) -> Result<()> {
        match self {
            AlgebraAction::Inner(vs) => {
                if vs.len() != group.order() {
                    return Err(Error::Dimension(format!(
                        "{} unitaries for a group of order {}",
                        vs.len(),
                        group.order()
                    )));
                }
                for (x, v) in vs.iter().enumerate() {
                    if v.shape() != shape {
                        return Err(Error::Invalid(format!(
                            "unitary {x} lives in {}, not {shape}",
                            v.shape()
                        )));
                    }
                }
            }
            AlgebraAction::Points(act) => {
                if !shape.is_commutative() || shape.num_blocks() != act.set_size() {
                    return Err(Error::Invalid(format!(
                        "a point action on {} points needs the algebra C^{}, not {shape}",
                        act.set_size(),
                        act.set_size()
                    )));
                }
                if act.table().len() != group.order() {
                    return Err(Error::Dimension("action and group do not match".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CovariantGns {
    pub gns: GnsResult,
    pub u: UnitaryRep,
    /// `max ‖U(x) π(A) U(x)* − π(α_x(A))‖` over group elements and basis `A`.
    pub covariance_residual: f64,
    /// `max ‖U(x) Ω − Ω‖`.
    pub fixed_residual: f64,
}

/// The unitary representation `U(x)[A] = [α_x(A)]` on the GNS space of an
/// invariant state, covariant with `π_ω`.
pub fn invariant_state_cov(
    group: &FiniteGroup,
    action: &AlgebraAction,
    state: &State,
    tol: &Tolerances,
) -> Result<CovariantGns> {
    let shape = state.shape().clone();
    action.check(group, &shape)?;
    let coeff: Vec<Mat> = (0..group.order())
        .map(|x| action.coefficient_matrix(&shape, x))
        .collect::<Result<_>>()?;
    let hom = (0..group.order())
        .flat_map(|x| (0..group.order()).map(move |y| (x, y)))
        .map(|(x, y)| linalg::max_diff(&(&coeff[x] * &coeff[y]), &coeff[group.mul(x, y)]))
        .fold(0.0, f64::max);
    if hom > 1e-9 {
        return Err(Error::precondition("α is not a group action; defect", hom));
    }

    let n = shape.algebra_dim();
    let omega: Vec<C64> = (0..n)
        .map(|b| state.eval(&AlgElem::matrix_unit(&shape, b)))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for m in &coeff {
        for b in 0..n {
            let moved: C64 = (0..n).map(|a| m[(a, b)] * omega[a]).sum();
            worst = worst.max((moved - omega[b]).norm());
        }
    }
    if worst > tol.eps_eq.max(1e-9) {
        return Err(Error::precondition(
            "state is not invariant; worst |ω(α_x(A)) − ω(A)|",
            worst,
        ));
    }

    let g = gns(state, tol)?;
    let d = g.rep.dim();
    let mats: Vec<Mat> = coeff.iter().map(|m| g.descend(m)).collect();
    let u = UnitaryRep::new(group, d, mats, tol)?;
    let mut covariance_residual = 0.0f64;
    let mut fixed_residual = 0.0f64;
    for (x, ux) in u.mats().iter().enumerate() {
        fixed_residual = fixed_residual.max((ux * &g.cyclic - &g.cyclic).norm());
        for a in 0..n {
            let moved = AlgElem::from_coeffs(&shape, coeff[x].column(a).as_slice())?;
            let lhs = ux * &g.rep.images()[a] * ux.adjoint();
            covariance_residual = covariance_residual.max(linalg::max_diff(&lhs, &g.rep.apply(&moved)?));
        }
    }
    Ok(CovariantGns {
        gns: g,
        u,
        covariance_residual,
        fixed_residual,
    })
}
