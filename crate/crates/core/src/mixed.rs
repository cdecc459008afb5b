//! Mixed object states through purification.
//!
//! `ρ = Σ_i r_i |i⟩⟨i|` is lifted to `|φ⟩ = Σ_i √r_i |i⟩|i⟩` on an ancilla of
//! dimension equal to the number of positive eigenvalues, with the ancilla's
//! canonical basis as partner vectors. The square roots are what make the
//! partial trace over the ancilla return `ρ`.

use crate::collapse::DensityOperator;
use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::hilbert::{apply_local, partial_trace, Ket, Operator, Subsystem, Tolerance, Vector};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Purification<T> {
    pub state: Ket<T>,
    /// `(dim_object, dim_ancilla)`.
    pub dims: (usize, usize),
    pub source: DensityOperator<T>,
}

impl<T: Real> Purification<T> {
    /// Object reduced state `tr_ancilla |φ⟩⟨φ|`.
    pub fn reduced(&self) -> Operator<T> {
        partial_trace(&self.state.projector(), self.dims, Subsystem::First)
            .expect("purification dims are consistent")
    }

    /// `max |tr_ancilla |φ⟩⟨φ| − ρ|`.
    pub fn reduction_residual(&self) -> T {
        (&self.reduced() - self.source.operator()).max_abs()
    }
}

pub fn purify<T: Real>(rho: &DensityOperator<T>, tol: Tolerance<T>) -> Result<Purification<T>> {
    let eig = eigh(rho.operator(), tol)?;
    if let Some(&min) = eig.values.last() {
        if min < -tol.eps() {
            return Err(Error::InvalidDensity(format!(
                "not positive semidefinite (min eigenvalue {:e})",
                min.to_f64_lossy()
            )));
        }
    }
    let cutoff = T::zero_eigenvalue();
    let kept: Vec<(T, Vector<T>)> = eig
        .values
        .into_iter()
        .zip(eig.vectors)
        .filter(|(r, _)| *r > cutoff)
        .collect();
    let dim_a = rho.dim();
    let dim_anc = kept.len();
    if dim_anc == 0 {
        return Err(Error::InvalidDensity("no positive eigenvalue".into()));
    }
    let mut state = Vector::zeros(dim_a * dim_anc);
    for (i, (r, v)) in kept.iter().enumerate() {
        let amp = r.sqrt();
        for a in 0..dim_a {
            state[a * dim_anc + i] = v[a] * amp;
        }
    }
    Ok(Purification {
        state: Ket::from_vector(state, tol)?,
        dims: (dim_a, dim_anc),
        source: rho.clone(),
    })
}

/// The same outcome probability along two routes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityRoutes<T> {
    /// `⟨φ|E ⊗ I|φ⟩` on the purification.
    pub purified: T,
    /// `tr(ρ E)`.
    pub trace_rule: T,
}

impl<T: Real> ProbabilityRoutes<T> {
    pub fn discrepancy(&self) -> T {
        (self.purified - self.trace_rule).abs()
    }
}

pub fn probability_routes<T: Real>(
    rho: &DensityOperator<T>,
    projector: &Operator<T>,
    tol: Tolerance<T>,
) -> Result<ProbabilityRoutes<T>> {
    if projector.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: projector.dim() });
    }
    projector.check_projector(tol)?;
    let p = purify(rho, tol)?;
    let lifted = apply_local(projector, &p.state, p.dims, Subsystem::First)?;
    let purified = p.state.inner(&lifted).re;
    let trace_rule = (rho.operator() * projector).trace().re;
    Ok(ProbabilityRoutes { purified, trace_rule })
}

/// `tr(ρ E)`, cross-checked against the purified expectation value.
pub fn mixed_probability<T: Real>(
    rho: &DensityOperator<T>,
    projector: &Operator<T>,
    tol: Tolerance<T>,
) -> Result<T> {
    let routes = probability_routes(rho, projector, tol)?;
    if !tol.accepts(routes.discrepancy()) {
        return Err(Error::RouteMismatch {
            purified: routes.purified.to_f64_lossy(),
            trace_rule: routes.trace_rule.to_f64_lossy(),
        });
    }
    Ok(routes.trace_rule)
}
