//! Random states, observables, density operators and measurement models for
//! property tests and the acceptance suite.

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::collapse::DensityOperator;
use crate::hilbert::{apply_local, Ket, Operator, Subsystem, Tolerance, Vector};
use crate::model::{rotate_columns, unitary_from_isometry, MeasurementModel};
use crate::scalar::{c, Real, C};
use crate::spectral::{range_basis, SpectralForm};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(T::lit(re), T::lit(im))
}

fn gaussian_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector<T> {
    Vector::new((0..dim).map(|_| gaussian(rng)).collect()).expect("finite samples")
}

/// Haar-distributed pure state.
pub fn random_ket<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ket<T> {
    gaussian_vector(rng, dim).normalized().expect("gaussian vector is nonzero")
}

/// `(G + G†)/2` with i.i.d. complex Gaussian `G`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator<T> {
    let g = Operator::new(dim, (0..dim * dim).map(|_| gaussian(rng)).collect()).expect("finite samples");
    (&g + &g.adjoint()).scale_real(T::lit(0.5))
}

/// Orthonormalizes `vectors` in order with two Gram–Schmidt passes.
fn orthonormalize<T: Real>(vectors: Vec<Vector<T>>) -> Vec<Vector<T>> {
    let mut out: Vec<Vector<T>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for _ in 0..2 {
            for b in &out {
                let overlap = b.inner(&v);
                v = &v - &b.scale(overlap);
            }
        }
        out.push(v.normalized().expect("gaussian vectors are independent").into_vector());
    }
    out
}

/// `count` orthonormal vectors in dimension `dim`.
pub fn random_orthonormal<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<Vector<T>> {
    assert!(count <= dim);
    orthonormalize((0..count).map(|_| gaussian_vector(rng, dim)).collect())
}

pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator<T> {
    Operator::from_columns(&random_orthonormal(rng, dim, dim)).expect("square")
}

/// Random composition of `dim` into `parts` positive ranks.
pub fn random_ranks<R: Rng + ?Sized>(rng: &mut R, dim: usize, parts: usize) -> Vec<usize> {
    assert!(parts >= 1 && parts <= dim);
    let mut cuts: Vec<usize> = index::sample(rng, dim - 1, parts - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(dim);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let r = c - prev;
            prev = c;
            r
        })
        .collect()
}

/// Orthogonal projectors of the given ranks in a random basis, summing to
/// the identity on `ranks.iter().sum()` dimensions.
pub fn random_projector_family<T: Real, R: Rng + ?Sized>(rng: &mut R, ranks: &[usize]) -> Vec<Operator<T>> {
    let dim = ranks.iter().sum();
    let basis = random_orthonormal::<T, _>(rng, dim, dim);
    let mut start = 0;
    ranks
        .iter()
        .map(|&r| {
            let p = basis[start..start + r]
                .iter()
                .fold(Operator::zeros(dim), |acc, v| &acc + &v.outer(v));
            start += r;
            p
        })
        .collect()
}

/// Observable with `outcomes` distinct eigenvalues on `dim` dimensions;
/// degenerate whenever `outcomes < dim`.
pub fn random_observable<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> SpectralForm<T> {
    let ranks = random_ranks(rng, dim, outcomes);
    let projectors = random_projector_family(rng, &ranks);
    // Distinct, well-separated labels in descending order.
    let mut level = T::lit(rng.random_range(-2.0..2.0));
    let eigenvalues = (0..outcomes)
        .map(|_| {
            let v = level;
            level = level - T::lit(rng.random_range(0.25..1.5));
            v
        })
        .collect();
    SpectralForm::new(eigenvalues, projectors, Tolerance::default()).expect("valid by construction")
}

/// Density operator `G G† / tr(G G†)` with `G` of shape `dim × rank`.
pub fn random_density<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator<T> {
    let cols: Vec<Vector<T>> = (0..rank).map(|_| gaussian_vector(rng, dim)).collect();
    let gg = cols.iter().fold(Operator::zeros(dim), |acc, v| &acc + &v.outer(v));
    let tr = gg.trace().re;
    DensityOperator::new(gg.scale_real(T::one() / tr), Tolerance::default()).expect("valid by construction")
}

/// General exact measurement of `observable` (not necessarily
/// nondemolition).
///
/// The instrument has dimension `sum(pointer_ranks)` and a random initial
/// state; pointer projectors have the given ranks in a random basis. The
/// range of each `E^k` is mapped by a random isometry into
/// `H_A ⊗ range(F^k)`.
pub fn random_exact_model<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    observable: &SpectralForm<T>,
    pointer_ranks: &[usize],
) -> MeasurementModel<T> {
    let tol = Tolerance::default();
    let outcomes = observable.outcome_count();
    assert_eq!(pointer_ranks.len(), outcomes);
    let dim_a = observable.dim();
    let dim_b: usize = pointer_ranks.iter().sum();
    let pointer_projectors = random_projector_family::<T, _>(rng, pointer_ranks);
    let pointer = SpectralForm::new(
        (0..outcomes).map(|k| T::from_usize(k).unwrap()).collect(),
        pointer_projectors,
        tol,
    )
    .expect("valid by construction");
    let instrument_state = random_ket(rng, dim_b);

    let mut images = vec![Vector::zeros(dim_a * dim_b); dim_a];
    for k in 0..outcomes {
        let sources = range_basis(observable.projector(k).unwrap(), tol).unwrap();
        let targets = orthonormalize(
            (0..sources.len())
                .map(|_| {
                    let g = gaussian_vector(rng, dim_a * dim_b);
                    apply_local(pointer.projector(k).unwrap(), &g, (dim_a, dim_b), Subsystem::Second).unwrap()
                })
                .collect(),
        );
        // images[i] += Σ_j target_j ⟨source_j|e_i⟩
        for (src, tgt) in sources.iter().zip(&targets) {
            for (i, image) in images.iter_mut().enumerate() {
                *image = &*image + &tgt.scale(src[i].conj());
            }
        }
    }
    let unitary = unitary_from_isometry(dim_a, &instrument_state, &images, tol).expect("isometry");
    MeasurementModel::new(observable.clone(), pointer, instrument_state, unitary, tol).expect("valid")
}

/// Rotates a random pair of the model's unitary columns by an angle drawn
/// from `[0.1, 1.0]` rad.
pub fn perturb_model<T: Real, R: Rng + ?Sized>(rng: &mut R, model: &MeasurementModel<T>) -> MeasurementModel<T> {
    let n = model.unitary().dim();
    let pair = index::sample(rng, n, 2);
    let angle = T::lit(rng.random_range(0.1..=1.0));
    rotate_columns(model, pair.index(0), pair.index(1), angle, Tolerance::default()).expect("rotation is unitary")
}

/// Kind of model produced by [`model_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Canonical builder on a nondegenerate observable.
    Canonical,
    /// Canonical builder on an observable with repeated eigenvalues.
    Degenerate,
    /// General exact measurement with higher-rank pointer projectors and a
    /// random instrument state.
    HigherRankPointer,
    /// Any of the above with two unitary columns rotated.
    Perturbed,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Canonical => "canonical",
            ModelKind::Degenerate => "degenerate",
            ModelKind::HigherRankPointer => "higher-rank-pointer",
            ModelKind::Perturbed => "perturbed",
        }
    }
}

/// `count` models with object dimensions in `2..=max_dim_a`, cycling through
/// the four [`ModelKind`]s.
pub fn model_family<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    max_dim_a: usize,
) -> Vec<(ModelKind, MeasurementModel<T>)> {
    let tol = Tolerance::default();
    let kinds = [ModelKind::Canonical, ModelKind::Degenerate, ModelKind::HigherRankPointer, ModelKind::Perturbed];
    (0..count)
        .map(|i| {
            let kind = kinds[i % kinds.len()];
            let dim_a = rng.random_range(2..=max_dim_a.max(2));
            let model = match kind {
                ModelKind::Canonical => {
                    let obs = random_observable(rng, dim_a, dim_a);
                    crate::model::build_canonical_model(&obs, tol).expect("canonical model")
                }
                ModelKind::Degenerate => {
                    let outcomes = rng.random_range(1..dim_a);
                    let obs = random_observable(rng, dim_a, outcomes);
                    crate::model::build_canonical_model(&obs, tol).expect("canonical model")
                }
                ModelKind::HigherRankPointer => {
                    let outcomes = rng.random_range(1..=dim_a.min(3));
                    let obs = random_observable(rng, dim_a, outcomes);
                    let ranks: Vec<usize> = (0..outcomes).map(|_| rng.random_range(1..=2)).collect();
                    random_exact_model(rng, &obs, &ranks)
                }
                ModelKind::Perturbed => {
                    let outcomes = rng.random_range(2..=dim_a);
                    let obs = random_observable(rng, dim_a, outcomes);
                    let base = if rng.random_bool(0.5) {
                        crate::model::build_canonical_model(&obs, tol).expect("canonical model")
                    } else {
                        let ranks: Vec<usize> = (0..outcomes).map(|_| rng.random_range(1..=2)).collect();
                        random_exact_model(rng, &obs, &ranks)
                    };
                    perturb_model(rng, &base)
                }
            };
            (kind, model)
        })
        .collect()
}
