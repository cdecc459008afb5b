//! Unique spectral forms `O = Σ_k o_k E^k` of Hermitian observables.

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::hilbert::{Operator, Tolerance, Vector};
use crate::scalar::Real;

/// Distinct eigenvalues with coindexed, mutually orthogonal eigenprojectors
/// that resolve the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralForm<T> {
    dim: usize,
    eigenvalues: Vec<T>,
    projectors: Vec<Operator<T>>,
}

/// Outcome of [`SpectralForm::verify_completeness`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletenessCheck<T> {
    pub passed: bool,
    pub max_residual: T,
}

impl<T: Real> SpectralForm<T> {
    /// Validates every spectral-form invariant within `tol`.
    pub fn new(eigenvalues: Vec<T>, projectors: Vec<Operator<T>>, tol: Tolerance<T>) -> Result<Self> {
        let sf = Self::from_parts_unchecked(eigenvalues, projectors)?;
        sf.validate(tol)?;
        Ok(sf)
    }

    /// Shape checks only; the algebraic invariants are left to the caller.
    /// Used to build deliberately broken forms for negative tests.
    pub fn from_parts_unchecked(eigenvalues: Vec<T>, projectors: Vec<Operator<T>>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidSpectralForm("no outcomes".into()));
        }
        if eigenvalues.len() != projectors.len() {
            return Err(Error::InvalidSpectralForm(format!(
                "{} eigenvalues for {} projectors",
                eigenvalues.len(),
                projectors.len()
            )));
        }
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("eigenvalues"));
        }
        let dim = projectors[0].dim();
        if let Some(p) = projectors.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        Ok(Self { dim, eigenvalues, projectors })
    }

    pub fn validate(&self, tol: Tolerance<T>) -> Result<()> {
        if !self.eigenvalues_distinct() {
            return Err(Error::InvalidSpectralForm("repeated eigenvalue".into()));
        }
        for (k, p) in self.projectors.iter().enumerate() {
            p.check_projector(tol)
                .map_err(|e| Error::InvalidSpectralForm(format!("projector {k}: {e}")))?;
            if p.trace().re < T::lit(0.5) {
                return Err(Error::InvalidSpectralForm(format!("projector {k} is zero")));
            }
        }
        let orth = self.orthogonality_residual();
        if !tol.accepts(orth) {
            return Err(Error::InvalidSpectralForm(format!(
                "projectors not mutually orthogonal (residual {:e})",
                orth.to_f64_lossy()
            )));
        }
        let check = self.verify_completeness(tol);
        if !check.passed {
            return Err(Error::InvalidSpectralForm(format!(
                "projectors do not sum to identity (residual {:e})",
                check.max_residual.to_f64_lossy()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn outcome_count(&self) -> usize {
        self.projectors.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[Operator<T>] {
        &self.projectors
    }

    pub fn projector(&self, k: usize) -> Result<&Operator<T>> {
        self.projectors
            .get(k)
            .ok_or(Error::OutcomeOutOfRange { index: k, count: self.outcome_count() })
    }

    pub fn eigenvalues_distinct(&self) -> bool {
        let v = &self.eigenvalues;
        (0..v.len()).all(|i| ((i + 1)..v.len()).all(|j| v[i] != v[j]))
    }

    /// Worst Hermiticity or idempotency defect over all projectors.
    pub fn idempotency_residual(&self) -> T {
        self.projectors.iter().fold(T::zero(), |acc, p| {
            acc.max(p.idempotency_residual()).max(p.hermiticity_residual())
        })
    }

    /// `max_{k≠k'} max |E^k E^{k'}|`.
    pub fn orthogonality_residual(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.projectors.iter().enumerate() {
            for b in self.projectors.iter().skip(i + 1) {
                worst = worst.max((a * b).max_abs());
            }
        }
        worst
    }

    /// `max |Σ_k E^k − I|`.
    pub fn completeness_residual(&self) -> T {
        let sum = self
            .projectors
            .iter()
            .fold(Operator::zeros(self.dim), |acc, p| &acc + p);
        (&sum - &Operator::identity(self.dim)).max_abs()
    }

    /// Checks the resolution of the identity `Σ_k E^k = I`.
    pub fn verify_completeness(&self, tol: Tolerance<T>) -> CompletenessCheck<T> {
        let max_residual = self.completeness_residual();
        CompletenessCheck { passed: tol.accepts(max_residual), max_residual }
    }

    /// `Σ_k o_k E^k`.
    pub fn reconstruct(&self) -> Operator<T> {
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(Operator::zeros(self.dim), |acc, (&o, p)| &acc + &p.scale_real(o))
    }

    /// Orthonormal basis of `range(E^k)`.
    pub fn range_basis(&self, k: usize, tol: Tolerance<T>) -> Result<Vec<Vector<T>>> {
        range_basis(self.projector(k)?, tol)
    }
}

/// Orthonormal basis of the range of a projector.
pub fn range_basis<T: Real>(projector: &Operator<T>, tol: Tolerance<T>) -> Result<Vec<Vector<T>>> {
    projector.check_projector(tol)?;
    let eig = eigh(projector, tol)?;
    let half = T::lit(0.5);
    Ok(eig
        .values
        .into_iter()
        .zip(eig.vectors)
        .filter(|(val, _)| *val > half)
        .map(|(_, vec)| vec)
        .collect())
}

/// Unique spectral form of a Hermitian operator.
///
/// Eigenvalues are sorted descending; neighbours closer than
/// [`Real::degeneracy_threshold`] are merged into one eigenprojector whose
/// eigenvalue is the cluster mean.
pub fn spectral_decompose<T: Real>(h: &Operator<T>, tol: Tolerance<T>) -> Result<SpectralForm<T>> {
    let eig = eigh(h, tol)?;
    let threshold = T::degeneracy_threshold();
    let dim = h.dim();

    let mut eigenvalues = Vec::new();
    let mut projectors = Vec::new();
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && eig.values[end - 1] - eig.values[end] < threshold {
            end += 1;
        }
        let cluster = start..end;
        let count = T::from_usize(cluster.len()).unwrap();
        let mean = eig.values[cluster.clone()].iter().fold(T::zero(), |a, &b| a + b) / count;
        let projector = eig.vectors[cluster]
            .iter()
            .fold(Operator::zeros(dim), |acc, v| &acc + &v.outer(v));
        eigenvalues.push(mean);
        projectors.push(projector);
        start = end;
    }
    SpectralForm::new(eigenvalues, projectors, tol)
}

/// Splits outcome `k` into finer sub-outcomes given by `sub_projectors`.
///
/// The sub-outcomes take the place of `k` in the outcome list. Their
/// eigenvalues are labels only: `o_k − j·gap/m` for `j = 0..m`, where `gap`
/// is the distance to the next lower eigenvalue (1 if there is none), which
/// keeps every label distinct.
pub fn refine<T: Real>(
    sf: &SpectralForm<T>,
    k: usize,
    sub_projectors: Vec<Operator<T>>,
    tol: Tolerance<T>,
) -> Result<SpectralForm<T>> {
    let coarse = sf.projector(k)?;
    if sub_projectors.is_empty() {
        return Err(Error::InvalidProjector("empty refinement".into()));
    }
    for p in &sub_projectors {
        if p.dim() != sf.dim() {
            return Err(Error::DimensionMismatch { expected: sf.dim(), found: p.dim() });
        }
        p.check_projector(tol)?;
    }
    let sum = sub_projectors
        .iter()
        .fold(Operator::zeros(sf.dim()), |acc, p| &acc + p);
    let residual = (&sum - coarse).max_abs();
    if !tol.accepts(residual) {
        return Err(Error::RefinementMismatch { residual: residual.to_f64_lossy() });
    }

    let o_k = sf.eigenvalues[k];
    let gap = sf
        .eigenvalues
        .iter()
        .filter(|&&o| o < o_k)
        .fold(None, |best: Option<T>, &o| Some(best.map_or(o_k - o, |b| b.min(o_k - o))))
        .unwrap_or_else(T::one);
    let m = T::from_usize(sub_projectors.len()).unwrap();
    let step = gap / m;

    let mut eigenvalues = Vec::with_capacity(sf.outcome_count() + sub_projectors.len() - 1);
    let mut projectors = Vec::with_capacity(eigenvalues.capacity());
    for (i, (o, p)) in sf.eigenvalues.iter().zip(&sf.projectors).enumerate() {
        if i == k {
            for (j, sub) in sub_projectors.iter().enumerate() {
                eigenvalues.push(o_k - T::from_usize(j).unwrap() * step);
                projectors.push(sub.clone());
            }
        } else {
            eigenvalues.push(*o);
            projectors.push(p.clone());
        }
    }
    SpectralForm::new(eigenvalues, projectors, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Ket;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn assert_invariants(sf: &SpectralForm<f64>) {
        assert!(sf.idempotency_residual() <= 1e-9);
        assert!(sf.orthogonality_residual() <= 1e-9);
        assert!(sf.completeness_residual() <= 1e-9);
        assert!(sf.eigenvalues_distinct());
    }

    #[test]
    fn diagonal_observable() {
        let sf = spectral_decompose(&Operator::diag_real(&[1.0, -1.0]), tol()).unwrap();
        assert_eq!(sf.eigenvalues(), &[1.0, -1.0]);
        assert_eq!(sf.projectors()[0], Operator::diag_real(&[1.0, 0.0]));
        assert_eq!(sf.projectors()[1], Operator::diag_real(&[0.0, 1.0]));
        assert_invariants(&sf);
    }

    #[test]
    fn identity_has_one_outcome() {
        let sf = spectral_decompose(&Operator::<f64>::identity(3), tol()).unwrap();
        assert_eq!(sf.eigenvalues(), &[1.0]);
        assert_eq!(sf.projectors()[0], Operator::identity(3));
    }

    #[test]
    fn near_degenerate_values_merge() {
        let sf = spectral_decompose(&Operator::diag_real(&[2.0, 2.0 + 1e-9, 5.0]), tol()).unwrap();
        assert_eq!(sf.outcome_count(), 2);
        assert!((sf.eigenvalues()[1] - 2.0).abs() < 1e-8);
        assert!((sf.projectors()[1].trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn completeness_detects_missing_projector() {
        let sf = spectral_decompose(&Operator::diag_real(&[1.0, -1.0, 0.5]), tol()).unwrap();
        assert!(sf.verify_completeness(tol()).passed);
        let broken = SpectralForm::from_parts_unchecked(
            sf.eigenvalues()[..2].to_vec(),
            sf.projectors()[..2].to_vec(),
        )
        .unwrap();
        let check = broken.verify_completeness(tol());
        assert!(!check.passed);
        assert!((check.max_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constructor_rejects_repeats_and_overlaps() {
        let p0 = Operator::diag_real(&[1.0, 0.0]);
        let p1 = Operator::diag_real(&[0.0, 1.0]);
        assert!(SpectralForm::new(vec![1.0, 1.0], vec![p0.clone(), p1.clone()], tol()).is_err());
        assert!(SpectralForm::new(vec![1.0, 0.0], vec![p0.clone(), p0.clone()], tol()).is_err());
        assert!(SpectralForm::new(vec![1.0], vec![p0], tol()).is_err());
    }

    #[test]
    fn refine_basis_split() {
        let sf = spectral_decompose(&Operator::<f64>::identity(2), tol()).unwrap();
        let refined = refine(
            &sf,
            0,
            vec![Operator::diag_real(&[1.0, 0.0]), Operator::diag_real(&[0.0, 1.0])],
            tol(),
        )
        .unwrap();
        assert_eq!(refined.outcome_count(), 2);
        assert_invariants(&refined);
    }

    #[test]
    fn refine_rank_one_with_itself_is_identity() {
        let sf = spectral_decompose(&Operator::diag_real(&[1.0, -1.0]), tol()).unwrap();
        let refined = refine(&sf, 1, vec![sf.projectors()[1].clone()], tol()).unwrap();
        assert_eq!(refined, sf);
    }

    #[test]
    fn refine_rejects_wrong_sum() {
        let sf = spectral_decompose(&Operator::diag_real(&[2.0, 2.0, 5.0]), tol()).unwrap();
        let err = refine(&sf, 1, vec![Operator::diag_real(&[1.0, 0.0, 0.0])], tol()).unwrap_err();
        assert!(matches!(err, Error::RefinementMismatch { .. }));
        assert!(matches!(refine(&sf, 7, vec![], tol()), Err(Error::OutcomeOutOfRange { .. })));
    }

    #[test]
    fn refined_labels_stay_between_neighbours() {
        let sf = spectral_decompose(&Operator::diag_real(&[2.0, 2.0, 5.0, -1.0]), tol()).unwrap();
        assert_eq!(sf.eigenvalues(), &[5.0, 2.0, -1.0]);
        let subs = vec![Operator::diag_real(&[1.0, 0.0, 0.0, 0.0]), Operator::diag_real(&[0.0, 1.0, 0.0, 0.0])];
        let refined = refine(&sf, 1, subs, tol()).unwrap();
        assert_eq!(refined.eigenvalues(), &[5.0, 2.0, 0.5, -1.0]);
    }

    #[test]
    fn range_basis_spans_projector() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Ket::<f64>::uniform(2);
        let basis = range_basis(&plus.projector(), tol()).unwrap();
        assert_eq!(basis.len(), 1);
        assert!((basis[0].inner(&plus).norm() - 1.0).abs() < 1e-14);
        assert!((basis[0][0].norm() - h).abs() < 1e-14);
    }
}
