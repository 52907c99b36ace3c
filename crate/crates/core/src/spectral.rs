//! Spectrum, spectral radius, continuous functional calculus, positivity,
//! polar decomposition and Gelfand characters of commutative subalgebras.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElem, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, CVec, Mat};

/// Absolute tolerance for merging joint eigenvalue tuples into one character.
pub const EPS_CHAR: f64 = 1e-7;

/// Eigenvalues of every block, merged, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    pub is_real: bool,
}

impl Spectrum {
    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn cmp_complex(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn spectrum(a: &AlgElem, tol: &Tolerances) -> Result<Spectrum> {
    let norm = a.op_norm();
    let hermitian = a.self_adjoint_defect() <= tol.eps_eq * norm.max(f64::MIN_POSITIVE);
    let mut eigenvalues = Vec::with_capacity(a.shape().total_dim());
    for b in a.blocks() {
        let mut vals: Vec<C64> = if hermitian {
            linalg::eigh(b).0.into_iter().map(C64::from).collect()
        } else {
            linalg::eigenvalues(b)?
        };
        vals.sort_by(cmp_complex);
        eigenvalues.extend(vals);
    }
    let slack = tol.eps_psd * norm.max(1.0);
    let is_real = eigenvalues.iter().all(|z| z.im.abs() <= slack);
    Ok(Spectrum {
        eigenvalues,
        is_real,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMethod {
    /// `max |λ|` over the spectrum.
    Eigen,
    /// `‖A^{2ᵏ}‖^{1/2ᵏ}` by repeated squaring.
    Gelfand,
}

/// Spectral radius. The Gelfand route squares `max_power_iters` times,
/// renormalising at each step and tracking the scale in log space, so the
/// iteration cannot overflow.
pub fn spectral_radius(a: &AlgElem, method: RadiusMethod, tol: &Tolerances) -> Result<f64> {
    match method {
        RadiusMethod::Eigen => Ok(spectrum(a, tol)?.max_modulus()),
        RadiusMethod::Gelfand => gelfand_radius(a, tol.max_power_iters),
    }
}

fn gelfand_radius(a: &AlgElem, squarings: usize) -> Result<f64> {
    // Invariant: A^{2^k} = exp(log_scale) · b.
    let mut b = a.clone();
    let mut log_scale = 0.0f64;
    let mut exponent = 1.0f64;
    for _ in 0..squarings {
        let n = b.op_norm();
        if n == 0.0 {
            return Ok(0.0);
        }
        if !n.is_finite() {
            return Err(Error::Numerical("non-finite norm while squaring".into()));
        }
        let unit = b.scale_re(1.0 / n);
        b = unit.mul(&unit)?;
        log_scale = 2.0 * (log_scale + n.ln());
        exponent *= 2.0;
    }
    let n = b.op_norm();
    if n == 0.0 {
        return Ok(0.0);
    }
    let r = ((log_scale + n.ln()) / exponent).exp();
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Numerical("Gelfand iteration produced a non-finite radius".into()))
    }
}

/// Scalar functions accepted by the command-line calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    Sqrt,
    Abs,
    Exp,
    /// Coefficients `c₀, c₁, …` of `Σ cₖ tᵏ`.
    Poly(Vec<C64>),
}

impl ScalarFn {
    pub fn eval(&self, z: C64) -> C64 {
        match self {
            ScalarFn::Sqrt => z.sqrt(),
            ScalarFn::Abs => C64::from(z.norm()),
            ScalarFn::Exp => z.exp(),
            ScalarFn::Poly(c) => horner(c, z),
        }
    }
}

pub(crate) fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl FromStr for ScalarFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(ScalarFn::Sqrt),
            "abs" => Ok(ScalarFn::Abs),
            "exp" => Ok(ScalarFn::Exp),
            _ => {
                let body = s
                    .strip_prefix("poly:")
                    .ok_or_else(|| Error::Invalid(format!("unknown function {s:?}")))?;
                let coeffs = body
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map(C64::from)
                            .map_err(|e| Error::Invalid(format!("bad coefficient {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ScalarFn::Poly(coeffs))
            }
        }
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Sqrt => write!(f, "sqrt"),
            ScalarFn::Abs => write!(f, "abs"),
            ScalarFn::Exp => write!(f, "exp"),
            ScalarFn::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|z| z.re.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

/// Polynomial `p(A) = Σ cₖ Aᵏ` by Horner's rule, valid for any element.
pub fn polynomial(coeffs: &[C64], a: &AlgElem) -> AlgElem {
    let one = AlgElem::identity(a.shape());
    coeffs.iter().rev().fold(AlgElem::zeros(a.shape()), |acc, &c| {
        acc.mul(a)
            .and_then(|x| x.add(&one.scale(c)))
            .expect("same shape")
    })
}

fn check_normal(a: &AlgElem, tol: &Tolerances) -> Result<()> {
    let n = a.op_norm();
    let defect = a.normality_defect();
    if defect > tol.eps_eq * (n * n).max(f64::MIN_POSITIVE) {
        return Err(Error::precondition(
            "functional calculus requires a normal element; ‖AA* − A*A‖",
            defect,
        ));
    }
    Ok(())
}

/// `f(A)` for normal `A`, by unitary diagonalisation of each block.
pub fn functional_calculus<F>(f: F, a: &AlgElem, tol: &Tolerances) -> Result<AlgElem>
where
    F: Fn(C64) -> C64,
{
    check_normal(a, tol)?;
    let blocks = a
        .blocks()
        .iter()
        .map(|b| {
            let (vals, q, _) = linalg::normal_eig(b)?;
            let d = DVector::from_iterator(vals.len(), vals.into_iter().map(&f));
            Ok(&q * Mat::from_diagonal(&d) * q.adjoint())
        })
        .collect::<Result<Vec<_>>>()?;
    AlgElem::new(a.shape().clone(), blocks)
}

/// Positivity test and decomposition of a self-adjoint element.
#[derive(Debug, Clone)]
pub struct Positivity {
    pub is_positive: bool,
    pub min_eigenvalue: f64,
    /// Positive square root, present when `is_positive`.
    pub sqrt: Option<AlgElem>,
    pub pos_part: AlgElem,
    pub neg_part: AlgElem,
}

pub fn positivity(a: &AlgElem, tol: &Tolerances) -> Result<Positivity> {
    let norm = a.op_norm();
    let defect = a.self_adjoint_defect();
    if defect > tol.eps_eq * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::precondition(
            "positivity requires a self-adjoint element; ‖A − A*‖",
            defect,
        ));
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut root = Vec::new();
    let mut min_eig = f64::INFINITY;
    for b in a.blocks() {
        let (vals, q) = linalg::eigh(b);
        min_eig = min_eig.min(vals.first().copied().unwrap_or(0.0));
        let rebuild = |g: &dyn Fn(f64) -> f64| {
            let d = DVector::from_iterator(vals.len(), vals.iter().map(|&l| C64::from(g(l))));
            &q * Mat::from_diagonal(&d) * q.adjoint()
        };
        pos.push(rebuild(&|l| l.max(0.0)));
        neg.push(rebuild(&|l| (-l).max(0.0)));
        root.push(rebuild(&|l| l.max(0.0).sqrt()));
    }
    let is_positive = min_eig >= -tol.eps_psd * norm;
    let shape = a.shape().clone();
    Ok(Positivity {
        is_positive,
        min_eigenvalue: min_eig,
        sqrt: if is_positive {
            Some(AlgElem::new(shape.clone(), root)?)
        } else {
            None
        },
        pos_part: AlgElem::new(shape.clone(), pos)?,
        neg_part: AlgElem::new(shape, neg)?,
    })
}

/// Polar decomposition `A = U|A|` with `|A| = (A*A)^{1/2}` and `U` the
/// partial isometry whose initial projection is the support of `|A|`.
pub fn polar(a: &AlgElem, tol: &Tolerances) -> Result<(AlgElem, AlgElem)> {
    let norm = a.op_norm();
    let mut us = Vec::new();
    let mut abs = Vec::new();
    for b in a.blocks() {
        let (u, s, v) = linalg::svd(b);
        let rank = s.iter().filter(|&&x| x > tol.eps_psd * norm).count();
        let sd = DVector::from_iterator(s.len(), s.iter().map(|&x| C64::from(x)));
        abs.push(&v * Mat::from_diagonal(&sd) * v.adjoint());
        let ur = u.columns(0, rank);
        let vr = v.columns(0, rank);
        us.push(ur * vr.adjoint());
    }
    Ok((
        AlgElem::new(a.shape().clone(), us)?,
        AlgElem::new(a.shape().clone(), abs)?,
    ))
}

/// A character of the commutative C*-algebra generated by a family of
/// commuting normal elements and the unit.
#[derive(Debug, Clone)]
pub struct Character {
    /// Value on each generator, in input order.
    pub values: Vec<C64>,
    /// A unit joint eigenvector in `ℂ^{Σnᵢ}`; the character is
    /// `X ↦ ⟨v, X v⟩` on the generated algebra.
    pub witness: CVec,
}

impl Character {
    /// Evaluates the character on an element of the generated algebra.
    pub fn eval(&self, x: &AlgElem) -> C64 {
        (self.witness.adjoint() * x.to_dense() * &self.witness)[(0, 0)]
    }
}

#[derive(Debug, Clone)]
pub struct Characters {
    pub characters: Vec<Character>,
    /// `gelfand_table[g][c]` is the Gelfand transform of generator `g` at
    /// character `c`.
    pub gelfand_table: Vec<Vec<C64>>,
}

impl Characters {
    /// Gelfand transform `Â(χ) = χ(A)` on every character.
    pub fn transform(&self, a: &AlgElem) -> Vec<C64> {
        self.characters.iter().map(|c| c.eval(a)).collect()
    }
}

const CHARACTER_SEED: u64 = 0xc4a2;

/// Characters of `C*(generators, 𝕀)` via simultaneous unitary
/// diagonalisation. Joint eigenvalue tuples closer than [`EPS_CHAR`] are the
/// same character.
pub fn characters(generators: &[AlgElem], tol: &Tolerances) -> Result<Characters> {
    let Some(first) = generators.first() else {
        return Err(Error::Invalid("characters need at least one generator".into()));
    };
    let shape = first.shape().clone();
    for g in generators {
        g.sub(first)?;
        let n = g.op_norm();
        let defect = g.normality_defect();
        if defect > tol.eps_eq * (n * n).max(1.0) {
            return Err(Error::precondition("generator is not normal", defect));
        }
    }
    let mut worst = 0.0f64;
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[i + 1..] {
            worst = worst.max(a.commutator(b)?.op_norm());
        }
    }
    let scale = generators.iter().map(|g| g.op_norm()).fold(1.0, f64::max);
    if worst > tol.eps_eq * scale * scale {
        return Err(Error::precondition(
            "generators do not commute; max ‖[A, B]‖",
            worst,
        ));
    }

    let dense: Vec<Mat> = generators.iter().map(|g| g.to_dense()).collect();
    let n = shape.total_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(CHARACTER_SEED);
    for _attempt in 0..8 {
        let mut x = linalg::zeros(n, n);
        for d in &dense {
            let c = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            x += d * c;
        }
        let (_, q, _) = linalg::normal_eig(&x)?;
        let mut tuples: Vec<(Vec<C64>, CVec)> = Vec::with_capacity(n);
        let mut separated = true;
        for j in 0..n {
            let v = q.column(j).into_owned();
            let vals: Vec<C64> = dense
                .iter()
                .map(|d| (v.adjoint() * d * &v)[(0, 0)])
                .collect();
            for (d, &lam) in dense.iter().zip(&vals) {
                let r = (d * &v - &v * lam).norm();
                if r > 1e3 * EPS_CHAR * (1.0 + linalg::op_norm(d)) {
                    separated = false;
                }
            }
            tuples.push((vals, v));
        }
        if !separated {
            continue;
        }
        let mut chars: Vec<Character> = Vec::new();
        for (vals, v) in tuples {
            let dup = chars.iter().any(|c| {
                c.values
                    .iter()
                    .zip(&vals)
                    .all(|(a, b)| (a - b).norm() <= EPS_CHAR)
            });
            if !dup {
                chars.push(Character {
                    values: vals,
                    witness: v,
                });
            }
        }
        chars.sort_by(|a, b| {
            a.values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| cmp_complex(x, y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let gelfand_table = (0..generators.len())
            .map(|g| chars.iter().map(|c| c.values[g]).collect())
            .collect();
        return Ok(Characters {
            characters: chars,
            gelfand_table,
        });
    }
    Err(Error::Numerical(
        "could not separate joint eigenspaces of the generators".into(),
    ))
}
