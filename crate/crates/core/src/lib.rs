//! Numerical verification of unitary measurement theory on
//! finite-dimensional systems.
//!
//! A measurement couples an object `A` to an instrument `B` through a joint
//! unitary. This crate builds such models, checks the calibration and
//! dynamical conditions, the reproducibility of outcome probabilities in the
//! pointer, the branch structure of the final state, its decoherence into a
//! mixture, mixed initial states via purification, and the equivalence of
//! the usual forms of the quantum probability law.
//!
//! All types are generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases below fix double precision.

pub mod branches;
pub mod collapse;
pub mod eigen;
pub mod error;
pub mod forms;
pub mod generate;
pub mod hilbert;
pub mod mixed;
pub mod model;
pub mod scalar;
pub mod spectral;

pub use branches::{check_prc, decompose_final, decompose_initial, evolve_branch, BranchDecomposition};
pub use collapse::{
    butcher, final_density, max_coherence, pinch, sample, weights, DensityOperator, OutcomeDistribution,
    SampleReport,
};
pub use error::{Error, Result};
pub use forms::{born_form, expectation_form, probability_triple, trace_form, ProbabilityTriple};
pub use hilbert::{complete_to_unitary, partial_trace, tensor, Ket, Operator, Subsystem, Tensor, Tolerance, Vector};
pub use mixed::{mixed_probability, probability_routes, purify, Purification};
pub use model::{
    build_canonical_model, check_calibration, check_dynamical, premeasure, CheckReport, MeasurementModel,
};
pub use scalar::{Real, C};
pub use spectral::{refine, spectral_decompose, SpectralForm};

pub type C64 = C<f64>;
pub type Ket64 = Ket<f64>;
pub type Vector64 = Vector<f64>;
pub type Operator64 = Operator<f64>;
pub type Tolerance64 = Tolerance<f64>;
pub type SpectralForm64 = SpectralForm<f64>;
pub type MeasurementModel64 = MeasurementModel<f64>;
pub type CheckReport64 = CheckReport<f64>;
pub type BranchDecomposition64 = BranchDecomposition<f64>;
pub type DensityOperator64 = DensityOperator<f64>;
pub type OutcomeDistribution64 = OutcomeDistribution<f64>;
pub type Purification64 = Purification<f64>;
pub type ProbabilityTriple64 = ProbabilityTriple<f64>;
