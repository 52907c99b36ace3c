//! Induced representations of finite groups, systems of imprimitivity on
//! coset spaces, the Mackey correspondence, and covariant POVMs obtained by
//! compressing induced systems.

use num_complex::Complex64 as C64;

use crate::algebra::{BlockShape, Tolerances};
use crate::cpmaps::LinMapAB;
use crate::error::{Error, Result};
use crate::groups::{
    CovariantPair, CrossedProduct, CrossedRep, FiniteGroup, GAction, UnitaryRep,
};
use crate::linalg::{self, Mat};
use crate::povm::Povm;
use crate::states::{wedderburn, RANK_TOL};

/// A subgroup, as a sorted list of elements of the parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if let Some(&bad) = els.iter().find(|&&x| x >= group.order()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: group.order(),
            });
        }
        if els.first() != Some(&0) {
            return Err(Error::Invalid("a subgroup must contain the identity 0".into()));
        }
        for &x in &els {
            for &y in &els {
                if els.binary_search(&group.mul(x, y)).is_err() {
                    return Err(Error::Invalid(format!(
                        "not closed under products: {x}·{y} = {} is missing",
                        group.mul(x, y)
                    )));
                }
            }
        }
        Ok(Subgroup { elements: els })
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup {
            elements: (0..group.order()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    /// The subgroup generated by `gens`.
    pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Result<Self> {
        Subgroup::new(group, &group.closure(gens))
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of `x` in the element list, i.e. its index in
    /// [`Subgroup::as_group`].
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The subgroup as a group in its own right, elements re-indexed by
    /// position.
    pub fn as_group(&self, parent: &FiniteGroup) -> FiniteGroup {
        let table = self
            .elements
            .iter()
            .map(|&x| {
                self.elements
                    .iter()
                    .map(|&y| self.position(parent.mul(x, y)).expect("closed"))
                    .collect()
            })
            .collect();
        FiniteGroup::new(table).expect("subgroup of a valid group")
    }
}

/// Left cosets `xH`, ordered by their smallest element, with the smallest
/// element of each as the section. The coset of the identity is index `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    pub cosets: Vec<Vec<usize>>,
    pub section: Vec<usize>,
    pub coset_of: Vec<usize>,
    pub action: GAction,
}

impl CosetSpace {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Elements fixing the base point `[e]`.
    pub fn stabilizer(&self) -> Vec<usize> {
        (0..self.action.table().len())
            .filter(|&x| self.action.act(x, 0) == 0)
            .collect()
    }
}

pub fn cosets(group: &FiniteGroup, h: &Subgroup) -> Result<CosetSpace> {
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let mut c: Vec<usize> = h.elements().iter().map(|&k| group.mul(x, k)).collect();
        c.sort_unstable();
        for &y in &c {
            coset_of[y] = cosets.len();
        }
        cosets.push(c);
    }
    let section: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let table = (0..n)
        .map(|x| section.iter().map(|&s| coset_of[group.mul(x, s)]).collect())
        .collect();
    let action = GAction::new(group, cosets.len(), table)?;
    Ok(CosetSpace {
        cosets,
        section,
        coset_of,
        action,
    })
}

/// The induced representation together with its canonical system of
/// imprimitivity on `G/H`.
///
/// Vectors are `H`-equivariant functions `Ψ(xh) = χ(h)⁻¹ Ψ(x)` and are
/// stored by their values at the section, coset-major: coordinate
/// `c·k + v` is component `v` of `Ψ(s_c)`.
#[derive(Debug, Clone)]
pub struct InducedSystem {
    pub space_dim: usize,
    pub inducing_dim: usize,
    pub rep: UnitaryRep,
    /// `π̃(δ_c)`: projection onto the functions supported on coset `c`.
    pub mult_rep: Vec<Mat>,
    pub pvm: Povm,
    pub cosets: CosetSpace,
}

impl InducedSystem {
    /// `π̃(f) = Σ_c f(c) π̃(δ_c)`.
    pub fn multiplication(&self, f: &[C64]) -> Result<Mat> {
        self.pvm.quantize(f)
    }

    /// `max ‖U(x) π̃(δ_c) U(x)* − π̃(δ_{x·c})‖`.
    pub fn covariance_residual(&self) -> f64 {
        covariance_residual(&self.rep, &self.mult_rep, &self.cosets.action)
    }

    pub fn pair(&self) -> CovariantPair {
        CovariantPair {
            u: self.rep.clone(),
            proj: self.mult_rep.clone(),
        }
    }

    /// The crossed product `C*(G, G/H)` and its representation integrated
    /// from this system.
    pub fn crossed_rep(&self, group: &FiniteGroup) -> Result<(CrossedProduct, CrossedRep)> {
        let cp = CrossedProduct::new(group.clone(), self.cosets.action.clone())?;
        let rep = cp.integrate(&self.pair())?;
        Ok((cp, rep))
    }

    /// Dimension of the joint commutant of `U(G)` and `π̃(C(G/H))`.
    pub fn commutant_dim(&self) -> Result<usize> {
        joint_commutant_dim(&self.rep, &self.mult_rep)
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        Ok(self.commutant_dim()? == 1)
    }
}

fn covariance_residual(u: &UnitaryRep, proj: &[Mat], action: &GAction) -> f64 {
    let mut worst = 0.0f64;
    for (x, ux) in u.mats().iter().enumerate() {
        for (c, p) in proj.iter().enumerate() {
            let moved = ux * p * ux.adjoint();
            worst = worst.max(linalg::max_diff(&moved, &proj[action.act(x, c)]));
        }
    }
    worst
}

fn joint_commutant_dim(u: &UnitaryRep, proj: &[Mat]) -> Result<usize> {
    let mut all = u.mats().to_vec();
    all.extend(proj.iter().cloned());
    Ok(linalg::commutant_basis(&all, RANK_TOL)?.len())
}

/// Induces `χ` (a unitary representation of `H`, indexed by position in
/// the subgroup) to `G`.
pub fn induce(group: &FiniteGroup, h: &Subgroup, chi: &UnitaryRep, tol: &Tolerances) -> Result<InducedSystem> {
    let hg = h.as_group(group);
    if chi.mats().len() != h.order() {
        return Err(Error::Dimension(format!(
            "representation of a group of order {} used for a subgroup of order {}",
            chi.mats().len(),
            h.order()
        )));
    }
    let d = chi.defect(&hg);
    if d > tol.eps_eq.max(1e-9) {
        return Err(Error::precondition("inducing representation is invalid; defect", d));
    }
    let cs = cosets(group, h)?;
    let m = cs.len();
    let k = chi.dim();
    let dim = m * k;
    let mats = (0..group.order())
        .map(|y| {
            let mut u = linalg::zeros(dim, dim);
            for (c, &sc) in cs.section.iter().enumerate() {
                for (c2, &sc2) in cs.section.iter().enumerate() {
                    let g = group.mul(group.mul(group.inv(sc), y), sc2);
                    if let Some(pos) = h.position(g) {
                        u.view_mut((c * k, c2 * k), (k, k)).copy_from(&chi.mats()[pos]);
                    }
                }
            }
            u
        })
        .collect();
    let rep = UnitaryRep::new(group, dim, mats, tol)?;
    let mult_rep: Vec<Mat> = (0..m)
        .map(|c| {
            let mut p = linalg::zeros(dim, dim);
            for v in 0..k {
                p[(c * k + v, c * k + v)] = C64::new(1.0, 0.0);
            }
            p
        })
        .collect();
    let pvm = Povm::unlabeled(dim, mult_rep.clone())?;
    Ok(InducedSystem {
        space_dim: dim,
        inducing_dim: k,
        rep,
        mult_rep,
        pvm,
        cosets: cs,
    })
}

#[derive(Debug, Clone)]
pub struct MackeyResult {
    /// Representation of `H` (indexed by position in the subgroup).
    pub chi: UnitaryRep,
    /// Unitary `W` with `W U(x) W* = U^χ(x)` and `W E(c) W* = π̃^χ(δ_c)`.
    pub intertwiner: Mat,
    pub residual: f64,
}

/// Recovers the inducing representation of a transitive system of
/// imprimitivity `(U, E)` on `G/H`: `H` fixes the base point, so it acts on
/// the range of `E([e])`, and that action is `χ`.
pub fn mackey_recover(
    group: &FiniteGroup,
    h: &Subgroup,
    u: &UnitaryRep,
    e: &Povm,
    tol: &Tolerances,
) -> Result<MackeyResult> {
    let cs = cosets(group, h)?;
    if e.len() != cs.len() {
        return Err(Error::Dimension(format!(
            "{} effects for {} cosets",
            e.len(),
            cs.len()
        )));
    }
    if e.dim() != u.dim() {
        return Err(Error::Dimension("measure and representation act on different spaces".into()));
    }
    if !e.validate(tol).is_pvm {
        return Err(Error::precondition(
            "measure is not projection-valued; multiplicativity defect",
            e.multiplicativity_defect(),
        ));
    }
    let r = covariance_residual(u, e.effects(), &cs.action);
    if r > tol.eps_eq.max(1e-9) {
        return Err(Error::precondition("system is not covariant; residual", r));
    }
    let v = linalg::range_basis(&e.effects()[0], 1e-8);
    if v.ncols() == 0 {
        return Err(Error::Invalid("the base-point projection is zero".into()));
    }
    let hg = h.as_group(group);
    let chi_mats = h
        .elements()
        .iter()
        .map(|&x| v.adjoint() * &u.mats()[x] * &v)
        .collect();
    let chi = UnitaryRep::new(&hg, v.ncols(), chi_mats, tol)?;
    let sys = induce(group, h, &chi, tol)?;
    let mut a: Vec<Mat> = u.mats().to_vec();
    a.extend(e.effects().iter().cloned());
    let mut b: Vec<Mat> = sys.rep.mats().to_vec();
    b.extend(sys.mult_rep.iter().cloned());
    let Some(w) = linalg::unitary_intertwiner(&a, &b, RANK_TOL)? else {
        return Err(Error::Numerical(
            "no intertwiner between the input and the re-induced system".into(),
        ));
    };
    let residual = a
        .iter()
        .zip(&b)
        .map(|(x, y)| linalg::max_diff(&(&w * x * w.adjoint()), y))
        .fold(0.0, f64::max);
    Ok(MackeyResult {
        chi,
        intertwiner: w,
        residual,
    })
}

/// The irreducible systems of imprimitivity on `G/H`, one per equivalence
/// class, found by decomposing the system induced from the regular
/// representation of `H`.
pub fn irreducible_systems(group: &FiniteGroup, h: &Subgroup, seed: u64, tol: &Tolerances) -> Result<Vec<CovariantPair>> {
    let hg = h.as_group(group);
    let sys = induce(group, h, &UnitaryRep::regular(&hg), tol)?;
    let mut gens: Vec<Mat> = group
        .generators()
        .iter()
        .map(|&x| sys.rep.mats()[x].clone())
        .collect();
    gens.extend(sys.mult_rep.iter().cloned());
    let w = wedderburn(&gens, seed)?;
    Ok(w.components
        .iter()
        .map(|comp| CovariantPair {
            u: UnitaryRep::new(
                group,
                comp.size,
                sys.rep.mats().iter().map(|m| comp.compress(m)).collect(),
                tol,
            )
            .expect("compression of a representation to an invariant subspace"),
            proj: sys.mult_rep.iter().map(|m| comp.compress(m)).collect(),
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct GeneralizedCovariant {
    /// `U` compressed to the range of `p`.
    pub u_c: UnitaryRep,
    /// `f ↦ p π̃(f) p` on the range of `p`.
    pub q: LinMapAB,
    pub povm: Povm,
    /// Isometry onto the range of `p`.
    pub range: Mat,
    /// `max ‖U_c(x) Q(δ_c) U_c(x)* − Q(δ_{x·c})‖`.
    pub covariance_residual: f64,
}

/// Compresses an induced system by a projection in the commutant of `U`,
/// giving a covariant positive map on `C(G/H)`.
pub fn generalized_covariant(
    group: &FiniteGroup,
    sys: &InducedSystem,
    p: &Mat,
    tol: &Tolerances,
) -> Result<GeneralizedCovariant> {
    let d = sys.space_dim;
    if p.nrows() != d || p.ncols() != d {
        return Err(Error::Dimension(format!("projection is not {d}x{d}")));
    }
    let proj_defect = linalg::max_diff(p, &p.adjoint()).max(linalg::max_diff(&(p * p), p));
    if proj_defect > tol.eps_eq.max(1e-9) {
        return Err(Error::precondition("p is not a projection; defect", proj_defect));
    }
    let comm = sys
        .rep
        .mats()
        .iter()
        .map(|u| linalg::op_norm(&(p * u - u * p)))
        .fold(0.0, f64::max);
    if comm > tol.eps_eq.max(1e-9) {
        return Err(Error::precondition(
            "p is not in the commutant of U; worst ‖[p, U(x)]‖",
            comm,
        ));
    }
    let v = linalg::range_basis(p, 1e-8);
    let r = v.ncols();
    if r == 0 {
        return Err(Error::Invalid("p is zero".into()));
    }
    let u_c = UnitaryRep::new(
        group,
        r,
        sys.rep.mats().iter().map(|u| v.adjoint() * u * &v).collect(),
        tol,
    )?;
    let effects: Vec<Mat> = sys.mult_rep.iter().map(|m| v.adjoint() * m * &v).collect();
    let q = LinMapAB::new(BlockShape::commutative(effects.len()), r, effects.clone())?;
    let povm = Povm::new(r, sys.pvm.outcomes().to_vec(), effects)?;
    let covariance_residual = covariance_residual(&u_c, povm.effects(), &sys.cosets.action);
    Ok(GeneralizedCovariant {
        u_c,
        q,
        povm,
        range: v,
        covariance_residual,
    })
}
