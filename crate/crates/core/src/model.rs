//! Premeasurement models: object observable, instrument pointer, instrument
//! initial state and the joint unitary, plus the calibration and dynamical
//! condition checks.
//!
//! Both checks quantify over basis vectors only. The conditions are linear
//! in the object state, so a basis of `range(E^k)` (calibration) or of the
//! whole object space (dynamical) covers every state.

use crate::error::{Error, Result};
use crate::hilbert::{
    apply_local, complete_to_unitary, Ket, Operator, Subsystem, Tensor, Tolerance, Vector,
};
use crate::scalar::{cr, Real};
use crate::spectral::{range_basis, SpectralForm};

/// A complete premeasurement setup on `H_A ⊗ H_B`.
///
/// Outcome `k` of the observable is coindexed with pointer position `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementModel<T> {
    dim_a: usize,
    dim_b: usize,
    observable: SpectralForm<T>,
    pointer: SpectralForm<T>,
    instrument_state: Ket<T>,
    unitary: Operator<T>,
}

impl<T: Real> MeasurementModel<T> {
    pub fn new(
        observable: SpectralForm<T>,
        pointer: SpectralForm<T>,
        instrument_state: Ket<T>,
        unitary: Operator<T>,
        tol: Tolerance<T>,
    ) -> Result<Self> {
        observable
            .validate(tol)
            .map_err(|e| Error::InvalidModel(format!("observable: {e}")))?;
        pointer
            .validate(tol)
            .map_err(|e| Error::InvalidModel(format!("pointer: {e}")))?;
        if observable.outcome_count() != pointer.outcome_count() {
            return Err(Error::InvalidModel(format!(
                "observable has {} outcomes but pointer has {}",
                observable.outcome_count(),
                pointer.outcome_count()
            )));
        }
        let (dim_a, dim_b) = (observable.dim(), pointer.dim());
        if instrument_state.dim() != dim_b {
            return Err(Error::InvalidModel(format!(
                "instrument_state has dimension {} but pointer acts on {}",
                instrument_state.dim(),
                dim_b
            )));
        }
        let joint = dim_a
            .checked_mul(dim_b)
            .ok_or(Error::DimensionOverflow(dim_a, dim_b))?;
        if unitary.dim() != joint {
            return Err(Error::InvalidModel(format!(
                "unitary has dimension {} but dim_a * dim_b = {joint}",
                unitary.dim()
            )));
        }
        let residual = unitary.unitarity_residual();
        if !tol.accepts(residual) {
            return Err(Error::NotUnitary { residual: residual.to_f64_lossy() });
        }
        Ok(Self { dim_a, dim_b, observable, pointer, instrument_state, unitary })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn outcome_count(&self) -> usize {
        self.observable.outcome_count()
    }

    pub fn observable(&self) -> &SpectralForm<T> {
        &self.observable
    }

    pub fn pointer(&self) -> &SpectralForm<T> {
        &self.pointer
    }

    pub fn instrument_state(&self) -> &Ket<T> {
        &self.instrument_state
    }

    pub fn unitary(&self) -> &Operator<T> {
        &self.unitary
    }

    /// Same model with the joint unitary replaced.
    pub fn with_unitary(&self, unitary: Operator<T>, tol: Tolerance<T>) -> Result<Self> {
        Self::new(
            self.observable.clone(),
            self.pointer.clone(),
            self.instrument_state.clone(),
            unitary,
            tol,
        )
    }

    /// Same model with a different pointer observable.
    pub fn with_pointer(&self, pointer: SpectralForm<T>, tol: Tolerance<T>) -> Result<Self> {
        Self::new(
            self.observable.clone(),
            pointer,
            self.instrument_state.clone(),
            self.unitary.clone(),
            tol,
        )
    }

    /// `(I_A ⊗ F^k) v` on the joint space.
    pub fn apply_pointer(&self, k: usize, v: &Vector<T>) -> Result<Vector<T>> {
        apply_local(self.pointer.projector(k)?, v, self.dims(), Subsystem::Second)
    }

    pub(crate) fn check_object_dim(&self, phi_a: &Vector<T>) -> Result<()> {
        if phi_a.dim() != self.dim_a {
            return Err(Error::DimensionMismatch { expected: self.dim_a, found: phi_a.dim() });
        }
        Ok(())
    }

    /// `U (v ⊗ |φ⟩_B)` for an arbitrary (unnormalized) object vector.
    pub(crate) fn evolve(&self, v: &Vector<T>) -> Result<Vector<T>> {
        self.check_object_dim(v)?;
        Ok(self.unitary.apply(&v.tensor(self.instrument_state.as_vector())?))
    }
}

/// Builds a unitary `U` on `H_A ⊗ H_B` with `U(e_i ⊗ |φ⟩_B) = images[i]`.
///
/// `images` must be orthonormal. The unitary is completed deterministically:
/// the instrument state is rotated onto `|0⟩_B`, then the isometry is
/// extended with [`complete_to_unitary`] and its columns are placed so that
/// column `i·dim_b` carries `images[i]`.
pub fn unitary_from_isometry<T: Real>(
    dim_a: usize,
    instrument_state: &Ket<T>,
    images: &[Vector<T>],
    tol: Tolerance<T>,
) -> Result<Operator<T>> {
    let dim_b = instrument_state.dim();
    if images.len() != dim_a {
        return Err(Error::DimensionMismatch { expected: dim_a, found: images.len() });
    }
    let joint = dim_a
        .checked_mul(dim_b)
        .ok_or(Error::DimensionOverflow(dim_a, dim_b))?;
    let w = complete_to_unitary(joint, images, tol)?;

    // Column j of the placed isometry takes column slot[j] of w.
    let mut slot = vec![0; joint];
    let mut next_free = dim_a;
    for (j, s) in slot.iter_mut().enumerate() {
        if j % dim_b == 0 {
            *s = j / dim_b;
        } else {
            *s = next_free;
            next_free += 1;
        }
    }
    let columns: Vec<Vector<T>> = slot.iter().map(|&s| w.column(s)).collect();
    let placed = Operator::from_columns(&columns)?;

    if *instrument_state == Ket::basis(dim_b, 0) {
        return Ok(placed);
    }
    let rotation = complete_to_unitary(dim_b, &[instrument_state.as_vector()], tol)?;
    let lifted = Operator::identity(dim_a).tensor(&rotation.adjoint())?;
    Ok(&placed * &lifted)
}

/// Canonical exact measurement of `observable`.
///
/// The instrument has one pointer position per outcome (`dim_b = K`,
/// `F^k = |k⟩⟨k|`, `p_k = k`) and starts in `|0⟩_B`. On the initial subspace
/// the unitary acts as `|ψ⟩|0⟩ ↦ Σ_k (E^k|ψ⟩) ⊗ |k⟩`, leaving each object
/// branch intact while moving the pointer.
pub fn build_canonical_model<T: Real>(
    observable: &SpectralForm<T>,
    tol: Tolerance<T>,
) -> Result<MeasurementModel<T>> {
    let dim_a = observable.dim();
    let outcomes = observable.outcome_count();

    let pointer = SpectralForm::new(
        (0..outcomes).map(|k| T::from_usize(k).unwrap()).collect(),
        (0..outcomes).map(|k| Ket::basis(outcomes, k).projector()).collect(),
        tol,
    )?;
    let instrument_state = Ket::basis(outcomes, 0);

    let mut images = Vec::with_capacity(dim_a);
    for i in 0..dim_a {
        let e_i = Vector::basis(dim_a, i);
        let mut image = Vector::zeros(dim_a * outcomes);
        for (k, projector) in observable.projectors().iter().enumerate() {
            let term = projector.apply(&e_i).tensor(&Vector::basis(outcomes, k))?;
            image = &image + &term;
        }
        images.push(image);
    }
    let unitary = unitary_from_isometry(dim_a, &instrument_state, &images, tol)?;
    MeasurementModel::new(observable.clone(), pointer, instrument_state, unitary, tol)
}

/// Final premeasurement state `|Φ⟩ = U(|φ⟩_A ⊗ |φ⟩_B)`.
pub fn premeasure<T: Real>(model: &MeasurementModel<T>, phi_a: &Ket<T>) -> Result<Ket<T>> {
    Ok(Ket::assume_normalized(model.evolve(phi_a)?))
}

/// Result of a verification pass.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<T> {
    pub passed: bool,
    pub per_outcome_residuals: Vec<T>,
    pub max_residual: T,
    /// Describes the first outcome/basis vector whose residual exceeded the
    /// tolerance.
    pub witness: Option<String>,
}

impl<T: Real> CheckReport<T> {
    pub(crate) fn from_residuals(
        per_outcome_residuals: Vec<T>,
        witness: Option<String>,
        tol: Tolerance<T>,
    ) -> Self {
        let max_residual = per_outcome_residuals
            .iter()
            .fold(T::zero(), |acc, &r| if r.is_nan() || acc.is_nan() { T::nan() } else { acc.max(r) });
        let passed = tol.accepts(max_residual);
        Self { passed, per_outcome_residuals, max_residual, witness: if passed { None } else { witness } }
    }
}

/// Calibration: whenever the object starts in an eigenstate of `E^k̄`, the
/// final state must be an eigenstate of `F^k̄` with eigenvalue 1.
///
/// Residual for outcome `k̄` is `max_e ‖F^k̄ U(e⊗φ_B) − U(e⊗φ_B)‖` over an
/// orthonormal basis `e` of `range(E^k̄)`.
pub fn check_calibration<T: Real>(model: &MeasurementModel<T>, tol: Tolerance<T>) -> CheckReport<T> {
    let loose = Tolerance::new(T::lit(0.5)).unwrap();
    let mut residuals = Vec::with_capacity(model.outcome_count());
    let mut witness = None;
    for (k, projector) in model.observable.projectors().iter().enumerate() {
        let basis = range_basis(projector, loose).expect("observable validated at construction");
        let mut worst = T::zero();
        for (j, e) in basis.iter().enumerate() {
            let out = model.evolve(e).expect("dimensions validated at construction");
            let flagged = model.apply_pointer(k, &out).expect("validated pointer");
            let r = flagged.distance(&out);
            if witness.is_none() && !tol.accepts(r) {
                witness = Some(format!(
                    "outcome {k}: range vector {j} of E^{k} is not mapped into range of F^{k} (residual {:.3e})",
                    r.to_f64_lossy()
                ));
            }
            worst = worst.max(r);
        }
        residuals.push(worst);
    }
    CheckReport::from_residuals(residuals, witness, tol)
}

/// Dynamical condition `F^k U(φ_A ⊗ φ_B) = U(E^k φ_A ⊗ φ_B)` for every `k`.
///
/// Residual for outcome `k` is the worst violation over the canonical basis
/// of `H_A`.
pub fn check_dynamical<T: Real>(model: &MeasurementModel<T>, tol: Tolerance<T>) -> CheckReport<T> {
    let dim_a = model.dim_a;
    let finals: Vec<Vector<T>> = (0..dim_a)
        .map(|i| model.evolve(&Vector::basis(dim_a, i)).expect("validated dims"))
        .collect();
    let mut residuals = Vec::with_capacity(model.outcome_count());
    let mut witness = None;
    for (k, projector) in model.observable.projectors().iter().enumerate() {
        let mut worst = T::zero();
        for (i, fin) in finals.iter().enumerate() {
            let lhs = model.apply_pointer(k, fin).expect("validated pointer");
            let rhs = model
                .evolve(&projector.apply(&Vector::basis(dim_a, i)))
                .expect("validated dims");
            let r = lhs.distance(&rhs);
            if witness.is_none() && !tol.accepts(r) {
                witness = Some(format!(
                    "outcome {k}: basis vector {i} violates F^{k} U = U E^{k} (residual {:.3e})",
                    r.to_f64_lossy()
                ));
            }
            worst = worst.max(r);
        }
        residuals.push(worst);
    }
    CheckReport::from_residuals(residuals, witness, tol)
}

/// Exchanges the pointer projectors of outcomes `a` and `b` while keeping
/// the eigenvalue labels, breaking the coindexing.
pub fn swap_pointer_labels<T: Real>(
    model: &MeasurementModel<T>,
    a: usize,
    b: usize,
    tol: Tolerance<T>,
) -> Result<MeasurementModel<T>> {
    let count = model.outcome_count();
    for idx in [a, b] {
        if idx >= count {
            return Err(Error::OutcomeOutOfRange { index: idx, count });
        }
    }
    let mut projectors = model.pointer.projectors().to_vec();
    projectors.swap(a, b);
    let pointer = SpectralForm::new(model.pointer.eigenvalues().to_vec(), projectors, tol)?;
    model.with_pointer(pointer, tol)
}

/// Applies a real two-level rotation by `angle` to columns `i` and `j` of
/// the model's unitary.
pub fn rotate_columns<T: Real>(
    model: &MeasurementModel<T>,
    i: usize,
    j: usize,
    angle: T,
    tol: Tolerance<T>,
) -> Result<MeasurementModel<T>> {
    let n = model.unitary.dim();
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidModel(format!("invalid rotation plane ({i}, {j}) in dimension {n}")));
    }
    let (s, c) = angle.sin_cos();
    let mut rotation = Operator::identity(n);
    rotation[(i, i)] = cr(c);
    rotation[(j, j)] = cr(c);
    rotation[(i, j)] = cr(-s);
    rotation[(j, i)] = cr(s);
    model.with_unitary(&model.unitary * &rotation, tol)
}
