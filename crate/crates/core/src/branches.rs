//! Branch structure of initial and final states.
//!
//! A state splits over a projector family into terms `‖P_k ψ‖ · P_k ψ/‖P_k ψ‖`.
//! Terms whose amplitude falls below the tolerance carry no meaningful
//! normalized state; they are recorded as dropped with amplitude exactly 0.
//! Branch states keep the phase inherited from `P_k ψ`.

use crate::error::{Error, Result};
use crate::hilbert::{Ket, Tolerance, Vector};
use crate::model::{premeasure, CheckReport, MeasurementModel};
use crate::scalar::Real;
use crate::spectral::SpectralForm;

#[derive(Clone, Debug, PartialEq)]
pub struct BranchDecomposition<T> {
    /// Outcomes with a non-negligible branch, ascending.
    pub outcomes: Vec<usize>,
    /// `‖P_k ψ‖`, coindexed with `outcomes`.
    pub amplitudes: Vec<T>,
    /// `P_k ψ / ‖P_k ψ‖`, coindexed with `outcomes`.
    pub branch_states: Vec<Ket<T>>,
    /// Outcomes whose amplitude fell below the tolerance.
    pub dropped: Vec<usize>,
}

impl<T: Real> BranchDecomposition<T> {
    fn from_projections(projections: Vec<Vector<T>>, tol: Tolerance<T>) -> Result<Self> {
        let mut out = Self { outcomes: vec![], amplitudes: vec![], branch_states: vec![], dropped: vec![] };
        for (k, v) in projections.into_iter().enumerate() {
            let a = v.norm();
            if a < tol.eps() {
                out.dropped.push(k);
            } else {
                out.outcomes.push(k);
                out.amplitudes.push(a);
                out.branch_states.push(v.normalized()?);
            }
        }
        Ok(out)
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len() + self.dropped.len()
    }

    /// Amplitude of outcome `k`; 0 for dropped outcomes.
    pub fn amplitude(&self, k: usize) -> T {
        self.outcomes
            .iter()
            .position(|&o| o == k)
            .map_or(T::zero(), |i| self.amplitudes[i])
    }

    /// Amplitudes indexed by outcome, dropped ones as 0.
    pub fn amplitudes_by_outcome(&self) -> Vec<T> {
        (0..self.outcome_count()).map(|k| self.amplitude(k)).collect()
    }

    pub fn branch_state(&self, k: usize) -> Option<&Ket<T>> {
        self.outcomes.iter().position(|&o| o == k).map(|i| &self.branch_states[i])
    }

    /// `Σ_k a_k β_k`.
    pub fn reconstruct(&self) -> Vector<T> {
        let dim = self.branch_states.first().map_or(1, |b| b.dim());
        self.amplitudes
            .iter()
            .zip(&self.branch_states)
            .fold(Vector::zeros(dim), |acc, (&a, b)| &acc + &b.scale_real(a))
    }

    pub fn reconstruction_residual(&self, state: &Vector<T>) -> T {
        self.reconstruct().distance(state)
    }
}

/// Splits `phi` over the eigenprojectors of `observable`.
///
/// `amplitude_k = ‖E^k φ‖`, which equals `⟨φ|E^k|φ⟩^{1/2}` by idempotency.
pub fn decompose_initial<T: Real>(
    phi: &Ket<T>,
    observable: &SpectralForm<T>,
    tol: Tolerance<T>,
) -> Result<BranchDecomposition<T>> {
    if phi.dim() != observable.dim() {
        return Err(Error::DimensionMismatch { expected: observable.dim(), found: phi.dim() });
    }
    let projections = observable.projectors().iter().map(|p| p.apply(phi)).collect();
    BranchDecomposition::from_projections(projections, tol)
}

/// Splits the final state `U(φ_A ⊗ φ_B)` over the lifted pointer projectors
/// `I_A ⊗ F^k`.
pub fn decompose_final<T: Real>(
    model: &MeasurementModel<T>,
    phi_a: &Ket<T>,
    tol: Tolerance<T>,
) -> Result<BranchDecomposition<T>> {
    let fin = premeasure(model, phi_a)?;
    let projections = (0..model.outcome_count())
        .map(|k| model.apply_pointer(k, &fin))
        .collect::<Result<Vec<_>>>()?;
    BranchDecomposition::from_projections(projections, tol)
}

/// Probability reproducibility: `⟨Φ|F^k|Φ⟩ = ⟨φ|E^k|φ⟩` for every `k`.
pub fn check_prc<T: Real>(
    model: &MeasurementModel<T>,
    phi_a: &Ket<T>,
    tol: Tolerance<T>,
) -> Result<CheckReport<T>> {
    let fin = premeasure(model, phi_a)?;
    let mut residuals = Vec::with_capacity(model.outcome_count());
    let mut witness = None;
    for (k, e) in model.observable().projectors().iter().enumerate() {
        let pointer_side = fin.inner(&model.apply_pointer(k, &fin)?).re;
        let object_side = e.expectation(phi_a).re;
        let r = (pointer_side - object_side).abs();
        if witness.is_none() && !tol.accepts(r) {
            witness = Some(format!(
                "outcome {k}: pointer probability {:.6} vs object probability {:.6}",
                pointer_side.to_f64_lossy(),
                object_side.to_f64_lossy()
            ));
        }
        residuals.push(r);
    }
    Ok(CheckReport::from_residuals(residuals, witness, tol))
}

/// Evolves the single initial branch `E^k φ_A` on its own:
/// returns the unnormalized vector `U(E^k φ_A ⊗ φ_B)`.
///
/// For an exact measurement this equals `F^k Φ`; it is the zero vector when
/// `E^k φ_A = 0`.
pub fn evolve_branch<T: Real>(model: &MeasurementModel<T>, phi_a: &Ket<T>, k: usize) -> Result<Vector<T>> {
    model.check_object_dim(phi_a)?;
    let projected = model.observable().projector(k)?.apply(phi_a);
    model.evolve(&projected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Operator;
    use crate::model::{build_canonical_model, rotate_columns};
    use crate::scalar::cr;
    use crate::spectral::spectral_decompose;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn z() -> SpectralForm<f64> {
        spectral_decompose(&Operator::diag_real(&[1.0, -1.0]), tol()).unwrap()
    }

    #[test]
    fn initial_amplitudes_are_square_roots_of_weights() {
        let phi = Ket::new(vec![cr((1.0f64 / 3.0).sqrt()), cr((2.0f64 / 3.0).sqrt())], tol()).unwrap();
        let d = decompose_initial(&phi, &z(), tol()).unwrap();
        assert!((d.amplitudes[0] - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((d.amplitudes[1] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(d.dropped.is_empty());
    }

    #[test]
    fn eigenstate_drops_other_outcome() {
        let d = decompose_initial(&Ket::basis(2, 0), &z(), tol()).unwrap();
        assert_eq!(d.outcomes, vec![0]);
        assert_eq!(d.dropped, vec![1]);
        assert_eq!(d.amplitude(1), 0.0);
        assert_eq!(d.amplitudes_by_outcome(), vec![1.0, 0.0]);
        assert!(d.branch_state(1).is_none());
    }

    #[test]
    fn final_decomposition_of_z_model() {
        let m = build_canonical_model(&z(), tol()).unwrap();
        let d = decompose_final(&m, &Ket::uniform(2), tol()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(d.amplitudes.iter().all(|a| (a - h).abs() < 1e-15));
        assert!(d.branch_states[0].distance(&Vector::basis(4, 0)) < 1e-15);
        assert!(d.branch_states[1].distance(&Vector::basis(4, 3)) < 1e-15);

        let fin = premeasure(&m, &Ket::basis(2, 1)).unwrap();
        let single = decompose_final(&m, &Ket::basis(2, 1), tol()).unwrap();
        assert_eq!(single.outcomes, vec![1]);
        assert!(single.branch_states[0].distance(&fin) < 1e-15);
    }

    #[test]
    fn prc_on_z_model() {
        let m = build_canonical_model(&z(), tol()).unwrap();
        let r = check_prc(&m, &Ket::uniform(2), tol()).unwrap();
        assert!(r.passed && r.max_residual < 1e-15);
        let r = check_prc(&m, &Ket::basis(2, 0), tol()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn prc_can_fail_for_non_measurement() {
        let m = build_canonical_model(&z(), tol()).unwrap();
        let bad = rotate_columns(&m, 0, 1, 0.7, tol()).unwrap();
        let r = check_prc(&bad, &Ket::basis(2, 0), tol()).unwrap();
        assert!(!r.passed);
        assert!(r.witness.is_some());
    }

    #[test]
    fn evolve_branch_z_model() {
        let m = build_canonical_model(&z(), tol()).unwrap();
        let b0 = evolve_branch(&m, &Ket::uniform(2), 0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(b0.distance(&Vector::basis(4, 0).scale_real(h)) < 1e-15);
        let killed = evolve_branch(&m, &Ket::basis(2, 0), 1).unwrap();
        assert_eq!(killed.norm(), 0.0);
        assert!(matches!(evolve_branch(&m, &Ket::basis(2, 0), 2), Err(Error::OutcomeOutOfRange { .. })));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = build_canonical_model(&z(), tol()).unwrap();
        let phi3 = Ket::basis(3, 0);
        assert!(decompose_initial(&phi3, &z(), tol()).is_err());
        assert!(decompose_final(&m, &phi3, tol()).is_err());
        assert!(check_prc(&m, &phi3, tol()).is_err());
        assert!(evolve_branch(&m, &phi3, 0).is_err());
    }
}
