use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::algebra::{left_mult_matrix, AlgElem, Tolerances};
use crate::error::Result;
use crate::linalg::{self, CVec, GramQuotient, Mat};

use super::{Representation, State};

/// Output of the GNS construction: the cyclic representation `π_ω` on
/// `ℋ_ω = 𝔄/𝒩_ω` together with the class `Ω` of the unit.
#[derive(Debug, Clone)]
pub struct GnsResult {
    pub rep: Representation,
    pub cyclic: CVec,
    pub gram_rank: usize,
    /// Quotient data, kept so that callers can push further operators on
    /// the algebra (automorphisms, for instance) down to `ℋ_ω`.
    pub(crate) quotient: GramQuotient,
}

impl GnsResult {
    /// The operator induced on `ℋ_ω` by a linear map of the algebra that
    /// preserves the left kernel `𝒩_ω`, given as a matrix on matrix-unit
    /// coordinates.
    pub fn descend(&self, op: &Mat) -> Mat {
        self.quotient.descend(op)
    }

    /// `[A]` in orthonormal coordinates of `ℋ_ω`.
    pub fn class_of(&self, a: &AlgElem) -> CVec {
        let coeffs = DVector::from_vec(a.coeffs());
        self.quotient.class_of(&coeffs)
    }

    /// `⟨Ω, π_ω(A) Ω⟩`.
    pub fn expectation(&self, a: &AlgElem) -> Result<C64> {
        let m = self.rep.apply(a)?;
        Ok((self.cyclic.adjoint() * m * &self.cyclic)[(0, 0)])
    }
}

/// GNS representation of a state.
///
/// The Gram matrix `G[a, b] = ω(eₐ* e_b)` over matrix units is cut at
/// `eps_psd · Tr G`; the algebra then acts on the quotient by left
/// multiplication.
pub fn gns(state: &State, tol: &Tolerances) -> Result<GnsResult> {
    state.validate(tol)?;
    let shape = state.shape().clone();
    let n = shape.algebra_dim();
    let mut gram = linalg::zeros(n, n);
    // e_a = E^{(i)}_{jk}, e_b = E^{(i)}_{jk'}: e_a* e_b = E^{(i)}_{kk'}.
    for (a, (i, j, k)) in shape.basis().enumerate() {
        for kk in 0..shape.dims()[i] {
            let b = shape.basis_index(i, j, kk);
            gram[(a, b)] = state.on_matrix_unit(i, k, kk);
        }
    }
    let quotient = GramQuotient::new(&gram, tol.eps_psd);
    let dim = quotient.dim();
    let images = (0..n)
        .map(|idx| quotient.descend(&left_mult_matrix(&AlgElem::matrix_unit(&shape, idx))))
        .collect();
    let rep = Representation::new(shape.clone(), dim, images)?;
    let unit = DVector::from_vec(AlgElem::identity(&shape).coeffs());
    let cyclic = quotient.class_of(&unit);
    Ok(GnsResult {
        rep,
        cyclic,
        gram_rank: dim,
        quotient,
    })
}
