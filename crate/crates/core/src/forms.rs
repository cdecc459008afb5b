//! Three expressions for the probability of a projector `P` in a pure state
//! `|ψ⟩`: the expectation value `⟨ψ|P|ψ⟩`, the overlap sum
//! `Σ_k |⟨ψ|φ_k⟩|²` over an orthonormal basis of `range(P)`, and the trace
//! `tr(P|ψ⟩⟨ψ|)`. Raw values are returned unclamped.

use crate::error::{Error, Result};
use crate::hilbert::{orthonormality_residual, Ket, Operator, Tolerance, Vector};
use crate::scalar::{czero, Real};
use crate::spectral::range_basis;

fn check_inputs<T: Real>(psi: &Ket<T>, p: &Operator<T>, tol: Tolerance<T>) -> Result<()> {
    if psi.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: psi.dim() });
    }
    p.check_projector(tol)
}

/// `⟨ψ|P|ψ⟩`.
pub fn expectation_form<T: Real>(psi: &Ket<T>, p: &Operator<T>, tol: Tolerance<T>) -> Result<T> {
    check_inputs(psi, p, tol)?;
    Ok(p.expectation(psi).re)
}

/// `Σ_k |⟨φ_k|ψ⟩|²` for an orthonormal family `{φ_k}`.
pub fn born_form<T: Real, V: AsRef<Vector<T>>>(
    psi: &Ket<T>,
    range_basis: &[V],
    tol: Tolerance<T>,
) -> Result<T> {
    for v in range_basis {
        if v.as_ref().dim() != psi.dim() {
            return Err(Error::DimensionMismatch { expected: psi.dim(), found: v.as_ref().dim() });
        }
    }
    let residual = orthonormality_residual(range_basis);
    if !tol.accepts(residual) {
        return Err(Error::NotOrthonormal { residual: residual.to_f64_lossy() });
    }
    Ok(range_basis
        .iter()
        .fold(T::zero(), |acc, v| acc + v.as_ref().inner(psi).norm_sqr()))
}

/// `tr(P |ψ⟩⟨ψ|)` summed explicitly over the diagonal of the product.
pub fn trace_form<T: Real>(psi: &Ket<T>, p: &Operator<T>, tol: Tolerance<T>) -> Result<T> {
    check_inputs(psi, p, tol)?;
    let n = p.dim();
    let mut trace = czero();
    for i in 0..n {
        for j in 0..n {
            // (P |ψ⟩⟨ψ|)_{ii} = Σ_j P_ij ψ_j ψ_i*
            trace = trace + p[(i, j)] * psi[j] * psi[i].conj();
        }
    }
    Ok(trace.re)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityTriple<T> {
    pub expectation_form: T,
    pub born_form: T,
    pub trace_form: T,
}

impl<T: Real> ProbabilityTriple<T> {
    pub fn max_pairwise_difference(&self) -> T {
        let (a, b, c) = (self.expectation_form, self.born_form, self.trace_form);
        (a - b).abs().max((a - c).abs()).max((b - c).abs())
    }

    /// All three values clamped to `[0, 1]`, for display.
    pub fn clamped(&self) -> Self {
        let clamp = |x: T| x.max(T::zero()).min(T::one());
        Self {
            expectation_form: clamp(self.expectation_form),
            born_form: clamp(self.born_form),
            trace_form: clamp(self.trace_form),
        }
    }
}

/// Evaluates all three forms; the overlap form uses an eigenbasis of
/// `range(P)`.
pub fn probability_triple<T: Real>(
    psi: &Ket<T>,
    p: &Operator<T>,
    tol: Tolerance<T>,
) -> Result<ProbabilityTriple<T>> {
    let expectation = expectation_form(psi, p, tol)?;
    let basis = range_basis(p, tol)?;
    Ok(ProbabilityTriple {
        expectation_form: expectation,
        born_form: born_form(psi, &basis, tol)?,
        trace_form: trace_form(psi, p, tol)?,
    })
}
