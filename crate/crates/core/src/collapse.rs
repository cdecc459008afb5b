//! Collapse of the premeasurement state: the coherent final density
//! operator, the decohered ("butchered") mixture, the statistical weights
//! and seeded sampling of individual outcomes from the mixture.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::branches::decompose_final;
use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::hilbert::{Ket, Operator, Tensor, Tolerance};
use crate::model::{premeasure, MeasurementModel};
use crate::scalar::Real;
use crate::spectral::SpectralForm;

/// Trace-one positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    op: Operator<T>,
}

impl<T: Real> DensityOperator<T> {
    pub fn new(op: Operator<T>, tol: Tolerance<T>) -> Result<Self> {
        let herm = op.hermiticity_residual();
        if !tol.accepts(herm) {
            return Err(Error::InvalidDensity(format!("not Hermitian (residual {:e})", herm.to_f64_lossy())));
        }
        let trace = op.trace().re;
        if !tol.accepts((trace - T::one()).abs()) {
            return Err(Error::InvalidDensity(format!("trace {} differs from 1", trace.to_f64_lossy())));
        }
        let eig = eigh(&op, tol)?;
        let min = eig.values.last().copied().unwrap_or_else(T::zero);
        if min < -tol.eps() {
            return Err(Error::InvalidDensity(format!(
                "not positive semidefinite (min eigenvalue {:e})",
                min.to_f64_lossy()
            )));
        }
        Ok(Self { op })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &Ket<T>) -> Self {
        Self { op: psi.projector() }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_operator(self) -> Operator<T> {
        self.op
    }

    pub fn trace(&self) -> T {
        self.op.trace().re
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<T> {
        eigh(&self.op, Tolerance::new(T::lit(0.5)).unwrap())
            .expect("density operators are Hermitian")
            .values
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> T {
        (&self.op * &self.op).trace().re
    }
}

/// `|Φ⟩⟨Φ|` for the final premeasurement state, coherence included.
pub fn final_density<T: Real>(model: &MeasurementModel<T>, phi_a: &Ket<T>) -> Result<DensityOperator<T>> {
    Ok(DensityOperator::pure(&premeasure(model, phi_a)?))
}

/// Decohered mixture `Σ_k w_k |β_k⟩⟨β_k|` with `w_k = ⟨φ|E^k|φ⟩` and
/// `β_k = F^k Φ / ‖F^k Φ‖`. Dropped branches are omitted.
pub fn butcher<T: Real>(
    model: &MeasurementModel<T>,
    phi_a: &Ket<T>,
    tol: Tolerance<T>,
) -> Result<DensityOperator<T>> {
    let w = weights(phi_a, model.observable())?;
    let branches = decompose_final(model, phi_a, tol)?;
    let dim = model.unitary().dim();
    let mixture = branches
        .outcomes
        .iter()
        .zip(&branches.branch_states)
        .fold(Operator::zeros(dim), |acc, (&k, beta)| &acc + &beta.projector().scale_real(w.weights[k]));
    DensityOperator::new(mixture, tol)
}

/// `I_A ⊗ F^k` on the joint space.
pub fn lifted_pointer<T: Real>(model: &MeasurementModel<T>, k: usize) -> Result<Operator<T>> {
    Operator::identity(model.dim_a()).tensor(model.pointer().projector(k)?)
}

/// Pinching `Σ_k F^k ρ F^k` over the lifted pointer projectors.
pub fn pinch<T: Real>(model: &MeasurementModel<T>, rho: &Operator<T>) -> Result<Operator<T>> {
    let dim = model.unitary().dim();
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho.dim() });
    }
    let mut out = Operator::zeros(dim);
    for k in 0..model.outcome_count() {
        let f = lifted_pointer(model, k)?;
        out = &out + &(&(&f * rho) * &f);
    }
    Ok(out)
}

/// Largest Frobenius norm of an off-diagonal block `F^k ρ F^{k'}`, `k ≠ k'`.
pub fn max_coherence<T: Real>(model: &MeasurementModel<T>, rho: &Operator<T>) -> Result<T> {
    let lifted = (0..model.outcome_count())
        .map(|k| lifted_pointer(model, k))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = T::zero();
    for (i, fi) in lifted.iter().enumerate() {
        for (j, fj) in lifted.iter().enumerate() {
            if i != j {
                worst = worst.max((&(fi * rho) * fj).frobenius_norm());
            }
        }
    }
    Ok(worst)
}

/// Probabilities over outcome indices.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<T> {
    pub outcomes: Vec<usize>,
    pub weights: Vec<T>,
}

impl<T: Real> OutcomeDistribution<T> {
    /// Outcomes are `0..weights.len()`. Weights must be nonnegative and sum
    /// to 1 within `tol`.
    pub fn new(weights: Vec<T>, tol: Tolerance<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < -tol.eps()) {
            return Err(Error::InvalidDistribution(format!("weight {k} is {}", w.to_f64_lossy())));
        }
        let sum = weights.iter().fold(T::zero(), |a, &b| a + b);
        if !tol.accepts((sum - T::one()).abs()) {
            return Err(Error::InvalidDistribution(format!("weights sum to {}", sum.to_f64_lossy())));
        }
        Ok(Self { outcomes: (0..weights.len()).collect(), weights })
    }

    pub fn total(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &b| a + b)
    }
}

/// Statistical weights `w_k = ⟨φ|E^k|φ⟩`.
pub fn weights<T: Real>(phi_a: &Ket<T>, observable: &SpectralForm<T>) -> Result<OutcomeDistribution<T>> {
    if phi_a.dim() != observable.dim() {
        return Err(Error::DimensionMismatch { expected: observable.dim(), found: phi_a.dim() });
    }
    let w = observable.projectors().iter().map(|e| e.expectation(phi_a).re).collect();
    OutcomeDistribution::new(w, Tolerance::default())
}

/// Algorithm identity recorded in every [`SampleReport`].
pub const SAMPLER_ID: &str = "chacha20/seed_from_u64/inverse-cdf-f64";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub counts: Vec<u64>,
    pub total: u64,
    pub seed: u64,
    pub generator: &'static str,
}

/// Draws `n` independent outcomes by inverse CDF, one uniform `f64` per
/// draw from a ChaCha20 stream seeded with `seed`. Weights below the
/// default tolerance are excluded from the support.
pub fn sample<T: Real>(dist: &OutcomeDistribution<T>, n: u64, seed: u64) -> Result<SampleReport> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let eps = T::default_eps().to_f64_lossy();
    let support: Vec<(usize, f64)> = dist
        .weights
        .iter()
        .map(|w| w.to_f64_lossy())
        .enumerate()
        .filter(|&(_, w)| w > eps)
        .collect();
    if support.is_empty() {
        return Err(Error::InvalidDistribution("empty support".into()));
    }
    let mass: f64 = support.iter().map(|&(_, w)| w).sum();
    let mut cumulative = Vec::with_capacity(support.len());
    let mut acc = 0.0;
    for &(_, w) in &support {
        acc += w / mass;
        cumulative.push(acc);
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.weights.len()];
    let last = support.len() - 1;
    for _ in 0..n {
        let u: f64 = rng.random();
        let idx = cumulative.iter().position(|&c| u < c).unwrap_or(last);
        counts[support[idx].0] += 1;
    }
    Ok(SampleReport { counts, total: n, seed, generator: SAMPLER_ID })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_canonical_model;
    use crate::scalar::cr;
    use crate::spectral::spectral_decompose;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn z_model() -> MeasurementModel<f64> {
        let obs = spectral_decompose(&Operator::diag_real(&[1.0, -1.0]), tol()).unwrap();
        build_canonical_model(&obs, tol()).unwrap()
    }

    #[test]
    fn final_density_is_pure() {
        let m = z_model();
        let rho = final_density(&m, &Ket::uniform(2)).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherence_block_of_superposition() {
        let m = z_model();
        let rho = final_density(&m, &Ket::uniform(2)).unwrap();
        let f0 = lifted_pointer(&m, 0).unwrap();
        let f1 = lifted_pointer(&m, 1).unwrap();
        let block = &(&f0 * rho.operator()) * &f1;
        assert!((block.frobenius_norm() - 0.5).abs() < 1e-15);
        let butchered = butcher(&m, &Ket::uniform(2), tol()).unwrap();
        assert!(max_coherence(&m, butchered.operator()).unwrap() < 1e-15);
    }

    #[test]
    fn butchered_superposition_is_even_mixture() {
        let m = z_model();
        let b = butcher(&m, &Ket::uniform(2), tol()).unwrap();
        assert!((b.operator() - &Operator::diag_real(&[0.5, 0.0, 0.0, 0.5])).max_abs() < 1e-15);
    }

    #[test]
    fn eigenstate_butcher_equals_final_density() {
        let m = z_model();
        let phi = Ket::basis(2, 1);
        let b = butcher(&m, &phi, tol()).unwrap();
        let f = final_density(&m, &phi).unwrap();
        assert!((b.operator() - f.operator()).max_abs() < 1e-15);
    }

    #[test]
    fn weights_examples() {
        let z = spectral_decompose(&Operator::diag_real(&[1.0, -1.0]), tol()).unwrap();
        assert_eq!(weights(&Ket::basis(2, 0), &z).unwrap().weights, vec![1.0, 0.0]);
        let w = weights(&Ket::uniform(2), &z).unwrap().weights;
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);
        let phi = Ket::new(vec![cr(0.3f64.sqrt()), cr(0.7f64.sqrt())], tol()).unwrap();
        let w = weights(&phi, &z).unwrap().weights;
        assert!((w[0] - 0.3).abs() < 1e-15 && (w[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn certain_event_sampling() {
        let d = OutcomeDistribution::new(vec![1.0, 0.0], tol()).unwrap();
        let r = sample(&d, 1000, 3).unwrap();
        assert_eq!(r.counts, vec![1000, 0]);
        assert_eq!(r.total, 1000);
    }

    #[test]
    fn sampling_is_seeded() {
        let d = OutcomeDistribution::new(vec![0.2, 0.5, 0.3], tol()).unwrap();
        assert_eq!(sample(&d, 5000, 11).unwrap(), sample(&d, 5000, 11).unwrap());
        assert_ne!(sample(&d, 5000, 11).unwrap(), sample(&d, 5000, 12).unwrap());
        assert!(matches!(sample(&d, 0, 1), Err(Error::ZeroSamples)));
    }

    #[test]
    fn distribution_validation() {
        assert!(OutcomeDistribution::new(vec![0.5, 0.6], tol()).is_err());
        assert!(OutcomeDistribution::new(vec![1.1, -0.1], tol()).is_err());
        assert!(OutcomeDistribution::<f64>::new(vec![], tol()).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::new(Operator::diag_real(&[1.5, -0.5]), tol()).is_err());
        assert!(DensityOperator::new(Operator::diag_real(&[0.5, 0.6]), tol()).is_err());
        assert!(DensityOperator::new(Operator::diag_real(&[0.25, 0.75]), tol()).is_ok());
    }
}
