//! Finite groups given by multiplication tables, their group algebras and
//! unitary representations, abelian Fourier analysis, and crossed products
//! by actions on finite sets and on block algebras.

mod crossed;
mod rep;

pub use crossed::{
    cstar_gg, invariant_state_cov, AlgebraAction, CovariantGns, CovariantPair, CrossedElem,
    CrossedProduct, CrossedRep, CstarGG, GAction,
};
pub use rep::{abelian_fourier, group_cstar, Fourier, GroupAlgebraRep, GroupCstar, UnitaryRep};

use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest group order accepted from tables.
pub const MAX_GROUP_ORDER: usize = 64;

/// A finite group on `{0, …, order−1}` with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty group table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::Invalid(format!(
                "group order {n} exceeds the limit {MAX_GROUP_ORDER}"
            )));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!("row {x} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&z| z >= n) {
                return Err(Error::Invalid(format!("row {x} contains {bad} outside 0..{n}")));
            }
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(Error::Invalid(format!("0 is not an identity at element {x}")));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == 0) {
                Some(y) if table[y][x] == 0 => inverses[x] = y,
                _ => return Err(Error::Invalid(format!("element {x} has no inverse"))),
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return Err(Error::Invalid(format!(
                            "associativity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, inverses })
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(vec![vec![0]]).expect("valid")
    }

    /// `ℤₙ` with `x·y = x + y mod n`.
    pub fn cyclic(n: usize) -> Self {
        FiniteGroup::new((0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect())
            .expect("valid")
    }

    /// `Sₙ` as permutations of `{0..n}` in lexicographic order, composed as
    /// `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        let perms = permutations(n);
        if perms.len() > MAX_GROUP_ORDER {
            return Err(Error::Invalid(format!("S_{n} is too large")));
        }
        let index: HashMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        index[&st]
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(table)
    }

    /// The dihedral group of order `2n`; element `k + n·e` is `rᵏ sᵉ`.
    pub fn dihedral(n: usize) -> Self {
        let idx = |k: usize, e: usize| k % n + n * e;
        let table = (0..2 * n)
            .map(|x| {
                let (a, e) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (b, f) = (y % n, y / n);
                        let k = if e == 0 { a + b } else { a + n - b };
                        idx(k, (e + f) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(table).expect("valid")
    }

    /// The quaternion group, ordered `1, −1, i, −i, j, −j, k, −k`.
    pub fn quaternion() -> Self {
        // Products of the units 1, i, j, k as (sign, unit).
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (neg, u) = UNIT[x / 2][y / 2];
                        let sign = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
                        2 * u + sign as usize
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(table).expect("valid")
    }

    /// `G × H` with `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let m = h.order();
        let table = (0..g.order() * m)
            .map(|x| {
                (0..g.order() * m)
                    .map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteGroup::new(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.table[x][y] == self.table[y][x]))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for x in 1..self.order() {
            if span.len() == self.order() {
                break;
            }
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order())
                .map(|g| self.mul(self.mul(g, x), self.inv(g)))
                .collect();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    fn check_fn(&self, f: &GroupFn) -> Result<()> {
        if f.values.len() != self.order() {
            return Err(Error::Dimension(format!(
                "function on a group of order {} used with a group of order {}",
                f.values.len(),
                self.order()
            )));
        }
        Ok(())
    }

    /// `(f * g)(x) = Σ_{yz = x} f(y) g(z)`.
    pub fn convolve(&self, f: &GroupFn, g: &GroupFn) -> Result<GroupFn> {
        self.check_fn(f)?;
        self.check_fn(g)?;
        let mut out = vec![C64::new(0.0, 0.0); self.order()];
        for (y, &fy) in f.values.iter().enumerate() {
            if fy == C64::new(0.0, 0.0) {
                continue;
            }
            for (z, &gz) in g.values.iter().enumerate() {
                out[self.mul(y, z)] += fy * gz;
            }
        }
        Ok(GroupFn::new(out))
    }

    /// `f*(x) = conj f(x⁻¹)`.
    pub fn involute(&self, f: &GroupFn) -> Result<GroupFn> {
        self.check_fn(f)?;
        Ok(GroupFn::new(
            (0..self.order()).map(|x| f.values[self.inv(x)].conj()).collect(),
        ))
    }

    pub fn delta(&self, x: usize) -> GroupFn {
        let mut v = vec![C64::new(0.0, 0.0); self.order()];
        v[x] = C64::new(1.0, 0.0);
        GroupFn::new(v)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}

/// A complex function on a finite group, an element of the group algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFn {
    pub values: Vec<C64>,
}

impl GroupFn {
    pub fn new(values: Vec<C64>) -> Self {
        GroupFn { values }
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).sum()
    }

    pub fn max_diff(&self, other: &GroupFn) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
