//! Dense complex vectors and operators on finite-dimensional Hilbert spaces.
//!
//! Composite spaces use the A-major index convention: the basis vector
//! `|i_A⟩ ⊗ |i_B⟩` sits at index `i_A * dim_B + i_B`. Every module in the
//! crate inherits this convention.
//!
//! Arithmetic operators (`+`, `-`, `*`) panic on mismatched dimensions, like
//! `ndarray`. The domain-level operations built on top validate dimensions
//! up front and report [`Error::DimensionMismatch`] instead.

use std::fmt;
use std::ops::{Add, Deref, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{cone, cr, czero, Real, C};

/// Comparison threshold for numerical equalities, `0 < eps < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T>(T);

impl<T: Real> Tolerance<T> {
    pub fn new(eps: T) -> Result<Self> {
        if eps > T::zero() && eps < T::one() {
            Ok(Self(eps))
        } else {
            Err(Error::InvalidTolerance(eps.to_f64_lossy()))
        }
    }

    #[inline]
    pub fn eps(self) -> T {
        self.0
    }

    #[inline]
    pub fn accepts(self, residual: T) -> bool {
        residual <= self.0
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self(T::default_eps())
    }
}

/// Complex column vector with no normalization requirement.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T> {
    amps: Vec<C<T>>,
}

impl<T: Real> Vector<T> {
    pub fn new(amps: Vec<C<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self { amps })
    }

    pub(crate) fn from_vec(amps: Vec<C<T>>) -> Self {
        debug_assert!(!amps.is_empty());
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_vec(vec![czero(); dim])
    }

    /// Canonical basis vector `e_index`.
    ///
    /// # Panics
    /// If `index >= dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = Self::zeros(dim);
        v.amps[index] = cone();
        v
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| cr(x)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Vector<T>) -> C<T> {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Vector<T>) -> T {
        (self - other).norm()
    }

    pub fn scale(&self, factor: C<T>) -> Vector<T> {
        Self::from_vec(self.amps.iter().map(|z| z * factor).collect())
    }

    pub fn scale_real(&self, factor: T) -> Vector<T> {
        self.scale(cr(factor))
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Divide by the norm. Fails on (numerically) zero vectors.
    pub fn normalized(&self) -> Result<Ket<T>> {
        let n = self.norm();
        if n <= T::min_positive_value() || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Ket(self.scale_real(T::one() / n)))
    }

    /// Outer product `|self⟩⟨other|`.
    pub fn outer(&self, other: &Vector<T>) -> Operator<T> {
        assert_eq!(self.dim(), other.dim(), "outer product dimension mismatch");
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in &self.amps {
            for b in &other.amps {
                entries.push(a * b.conj());
            }
        }
        Operator { dim, entries }
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = C<T>;
    fn index(&self, i: usize) -> &C<T> {
        &self.amps[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut C<T> {
        &mut self.amps[i]
    }
}

impl<T: Real> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: &Vector<T>) -> Vector<T> {
        assert_eq!(self.dim(), rhs.dim(), "vector addition dimension mismatch");
        Vector::from_vec(self.amps.iter().zip(&rhs.amps).map(|(a, b)| a + b).collect())
    }
}

impl<T: Real> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: &Vector<T>) -> Vector<T> {
        assert_eq!(self.dim(), rhs.dim(), "vector subtraction dimension mismatch");
        Vector::from_vec(self.amps.iter().zip(&rhs.amps).map(|(a, b)| a - b).collect())
    }
}

impl<T> AsRef<Vector<T>> for Vector<T> {
    fn as_ref(&self) -> &Vector<T> {
        self
    }
}

/// Unit-norm state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket<T>(Vector<T>);

impl<T: Real> Ket<T> {
    /// Accepts `amps` only if its norm is 1 within `tol`.
    pub fn new(amps: Vec<C<T>>, tol: Tolerance<T>) -> Result<Self> {
        Self::from_vector(Vector::new(amps)?, tol)
    }

    pub fn from_vector(v: Vector<T>, tol: Tolerance<T>) -> Result<Self> {
        let norm = v.norm();
        if !tol.accepts((norm - T::one()).abs()) {
            return Err(Error::NotNormalized { norm: norm.to_f64_lossy() });
        }
        Ok(Ket(v))
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalize(amps: Vec<C<T>>) -> Result<Self> {
        Vector::new(amps)?.normalized()
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Ket(Vector::basis(dim, index))
    }

    /// `(1/√dim) Σ_i |i⟩`.
    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0);
        let a = T::one() / T::from_usize(dim).unwrap().sqrt();
        Ket(Vector::from_vec(vec![cr(a); dim]))
    }

    /// Wraps a vector the caller knows to be normalized.
    pub(crate) fn assume_normalized(v: Vector<T>) -> Self {
        Ket(v)
    }

    pub fn as_vector(&self) -> &Vector<T> {
        &self.0
    }

    pub fn into_vector(self) -> Vector<T> {
        self.0
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> Operator<T> {
        self.0.outer(&self.0)
    }
}

impl<T> Deref for Ket<T> {
    type Target = Vector<T>;
    fn deref(&self) -> &Vector<T> {
        &self.0
    }
}

impl<T> AsRef<Vector<T>> for Ket<T> {
    fn as_ref(&self) -> &Vector<T> {
        &self.0
    }
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    entries: Vec<C<T>>,
}

impl<T: Real> Operator<T> {
    pub fn new(dim: usize, entries: Vec<C<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("operator"));
        }
        Ok(Self { dim, entries })
    }

    /// Builds from a list of rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            entries.extend(row);
        }
        Self::new(dim, entries)
    }

    pub fn from_real_rows(rows: &[&[T]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| cr(x)).collect()).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        Self { dim, entries: vec![czero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn diag_real(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = cr(v);
        }
        m
    }

    /// Operator whose `j`-th column is `columns[j]`.
    pub fn from_columns<V: AsRef<Vector<T>>>(columns: &[V]) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            let col = col.as_ref();
            if col.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: col.dim() });
            }
            for i in 0..dim {
                m[(i, j)] = col[i];
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C<T>]> {
        self.entries.chunks(self.dim)
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector::from_vec((0..self.dim).map(|i| self[(i, j)]).collect())
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        assert_eq!(self.dim, v.dim(), "operator/vector dimension mismatch");
        Vector::from_vec(
            self.rows()
                .map(|row| row.iter().zip(v.amplitudes()).fold(czero(), |acc, (a, b)| acc + a * b))
                .collect(),
        )
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(cr(factor))
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// `max |A − A†|`.
    pub fn hermiticity_residual(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: Tolerance<T>) -> bool {
        tol.accepts(self.hermiticity_residual())
    }

    /// `max |U†U − I|`.
    pub fn unitarity_residual(&self) -> T {
        (&(&self.adjoint() * self) - &Self::identity(self.dim)).max_abs()
    }

    /// `max |P² − P|`.
    pub fn idempotency_residual(&self) -> T {
        (&(self * self) - self).max_abs()
    }

    /// Validates `self` as an orthogonal projector (Hermitian and idempotent).
    pub fn check_projector(&self, tol: Tolerance<T>) -> Result<()> {
        let h = self.hermiticity_residual();
        if !tol.accepts(h) {
            return Err(Error::InvalidProjector(format!("not Hermitian (residual {:e})", h.to_f64_lossy())));
        }
        let p = self.idempotency_residual();
        if !tol.accepts(p) {
            return Err(Error::InvalidProjector(format!(
                "not idempotent (residual {:e})",
                p.to_f64_lossy()
            )));
        }
        Ok(())
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &Vector<T>) -> C<T> {
        v.inner(&self.apply(v))
    }
}

impl<T> Index<(usize, usize)> for Operator<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.entries[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Operator<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.entries[i * self.dim + j]
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator addition dimension mismatch");
        Operator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator subtraction dimension mismatch");
        Operator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator product dimension mismatch");
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs[(k, j)];
                    out[(i, j)] = out[(i, j)] + a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Mul<&Vector<T>> for &Operator<T> {
    type Output = Vector<T>;
    fn mul(self, rhs: &Vector<T>) -> Vector<T> {
        self.apply(rhs)
    }
}

impl<T: fmt::Debug> fmt::Debug for Operator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{}) [", self.dim, self.dim)?;
        for row in self.entries.chunks(self.dim) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

fn checked_product(a: usize, b: usize) -> Result<usize> {
    a.checked_mul(b).ok_or(Error::DimensionOverflow(a, b))
}

/// Kronecker product in the A-major convention.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl<T: Real> Tensor for Vector<T> {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = checked_product(self.dim(), other.dim())?;
        let mut amps = Vec::with_capacity(dim);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Vector::from_vec(amps))
    }
}

impl<T: Real> Tensor for Ket<T> {
    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Ket(self.0.tensor(&other.0)?))
    }
}

impl<T: Real> Tensor for Operator<T> {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let (da, db) = (self.dim, other.dim);
        let dim = checked_product(da, db)?;
        checked_product(dim, dim)?;
        let mut out = Operator::zeros(dim);
        for ia in 0..da {
            for ja in 0..da {
                let a = self[(ia, ja)];
                for ib in 0..db {
                    for jb in 0..db {
                        out[(ia * db + ib, ja * db + jb)] = a * other[(ib, jb)];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor<X: Tensor>(a: &X, b: &X) -> Result<X> {
    a.tensor(b)
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Reduced operator on the `keep` factor of a `dims.0 × dims.1` space.
pub fn partial_trace<T: Real>(
    rho: &Operator<T>,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<Operator<T>> {
    let (da, db) = dims;
    if da == 0 || db == 0 {
        return Err(Error::EmptyDimension);
    }
    let total = checked_product(da, db)?;
    if rho.dim() != total {
        return Err(Error::DimensionMismatch { expected: total, found: rho.dim() });
    }
    let out = match keep {
        Subsystem::First => {
            let mut out = Operator::zeros(da);
            for i in 0..da {
                for j in 0..da {
                    out[(i, j)] = (0..db).fold(czero(), |acc, b| acc + rho[(i * db + b, j * db + b)]);
                }
            }
            out
        }
        Subsystem::Second => {
            let mut out = Operator::zeros(db);
            for i in 0..db {
                for j in 0..db {
                    out[(i, j)] = (0..da).fold(czero(), |acc, a| acc + rho[(a * db + i, a * db + j)]);
                }
            }
            out
        }
    };
    Ok(out)
}

/// Applies `op` to one factor of a bipartite vector, i.e. `(op ⊗ I) v` or
/// `(I ⊗ op) v`, without forming the lifted operator.
pub fn apply_local<T: Real>(
    op: &Operator<T>,
    v: &Vector<T>,
    dims: (usize, usize),
    target: Subsystem,
) -> Result<Vector<T>> {
    let (da, db) = dims;
    let total = checked_product(da, db)?;
    if v.dim() != total {
        return Err(Error::DimensionMismatch { expected: total, found: v.dim() });
    }
    let local = match target {
        Subsystem::First => da,
        Subsystem::Second => db,
    };
    if op.dim() != local {
        return Err(Error::DimensionMismatch { expected: local, found: op.dim() });
    }
    let mut out = Vector::zeros(total);
    for a in 0..da {
        for b in 0..db {
            let mut acc = czero();
            match target {
                Subsystem::First => {
                    for a2 in 0..da {
                        acc = acc + op[(a, a2)] * v[a2 * db + b];
                    }
                }
                Subsystem::Second => {
                    for b2 in 0..db {
                        acc = acc + op[(b, b2)] * v[a * db + b2];
                    }
                }
            }
            out[a * db + b] = acc;
        }
    }
    Ok(out)
}

/// `max |⟨c_i|c_j⟩ − δ_ij|` over a family of vectors.
pub fn orthonormality_residual<T: Real, V: AsRef<Vector<T>>>(vectors: &[V]) -> T {
    let mut worst = T::zero();
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate().skip(i) {
            let g = a.as_ref().inner(b.as_ref());
            let target = if i == j { cone() } else { czero() };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

/// Canonical basis vectors whose residual after projection falls below this
/// are skipped during completion.
const COMPLETION_ACCEPT: f64 = 1e-3;

/// Extends orthonormal `columns` to a unitary on `dim` whose leading columns
/// are exactly the inputs.
///
/// Remaining columns are drawn from the canonical basis in index order,
/// orthogonalized by two passes of classical Gram–Schmidt.
pub fn complete_to_unitary<T: Real, V: AsRef<Vector<T>>>(
    dim: usize,
    columns: &[V],
    tol: Tolerance<T>,
) -> Result<Operator<T>> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    if columns.len() > dim {
        return Err(Error::TooManyColumns { count: columns.len(), dim });
    }
    for c in columns {
        if c.as_ref().dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.as_ref().dim() });
        }
    }
    let residual = orthonormality_residual(columns);
    if !tol.accepts(residual) {
        return Err(Error::NotOrthonormal { residual: residual.to_f64_lossy() });
    }

    let mut basis: Vec<Vector<T>> = columns.iter().map(|c| c.as_ref().clone()).collect();
    let accept = T::lit(COMPLETION_ACCEPT);
    let mut candidate = 0;
    while basis.len() < dim {
        debug_assert!(candidate < dim, "canonical basis exhausted during completion");
        let mut v = Vector::basis(dim, candidate);
        candidate += 1;
        for _pass in 0..2 {
            for b in &basis {
                let overlap = b.inner(&v);
                v = &v - &b.scale(overlap);
            }
        }
        let n = v.norm();
        if n > accept {
            basis.push(v.scale_real(T::one() / n));
        }
    }
    Operator::from_columns(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn tensor_basis_index_convention() {
        let v = Vector::<f64>::basis(2, 0).tensor(&Vector::basis(2, 1)).unwrap();
        assert_eq!(v, Vector::basis(4, 1));
        let v = Vector::<f64>::basis(3, 2).tensor(&Vector::basis(2, 1)).unwrap();
        assert_eq!(v, Vector::basis(6, 5));
    }

    #[test]
    fn tensor_identity() {
        let i4 = Operator::<f64>::identity(2).tensor(&Operator::identity(2)).unwrap();
        assert_eq!(i4, Operator::identity(4));
    }

    #[test]
    fn tensor_superposition() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Ket::new(vec![cr(h), cr(h)], tol()).unwrap();
        let out = plus.tensor(&Ket::basis(2, 0)).unwrap();
        let expected = [h, 0.0, h, 0.0];
        for (z, e) in out.amplitudes().iter().zip(expected) {
            assert!((z - cr(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let zero = Ket::<f64>::basis(2, 0).projector();
        let sigma = Operator::from_rows(vec![
            vec![cr(0.25), c(0.1, 0.2), cr(0.0)],
            vec![c(0.1, -0.2), cr(0.5), cr(0.05)],
            vec![cr(0.0), cr(0.05), cr(0.25)],
        ])
        .unwrap();
        let rho = zero.tensor(&sigma).unwrap();
        let reduced = partial_trace(&rho, (2, 3), Subsystem::First).unwrap();
        assert!((&reduced - &zero).max_abs() < 1e-15);
        let other = partial_trace(&rho, (2, 3), Subsystem::Second).unwrap();
        assert!((&other - &sigma).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_bell_state_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Ket::new(vec![cr(h), cr(0.0), cr(0.0), cr(h)], tol()).unwrap();
        let reduced = partial_trace(&bell.projector(), (2, 2), Subsystem::First).unwrap();
        assert!((&reduced - &Operator::identity(2).scale_real(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let rho = Operator::<f64>::identity(4);
        assert!(matches!(
            partial_trace(&rho, (2, 3), Subsystem::First),
            Err(Error::DimensionMismatch { expected: 6, found: 4 })
        ));
    }

    #[test]
    fn completion_of_full_unitary_is_identity_map() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = Operator::from_real_rows(&[&[h, h], &[h, -h]]).unwrap();
        let cols = [hadamard.column(0), hadamard.column(1)];
        let u = complete_to_unitary(2, &cols, tol()).unwrap();
        assert_eq!(u, hadamard);
    }

    #[test]
    fn completion_selects_next_canonical_vector() {
        let u = complete_to_unitary(2, &[Vector::<f64>::basis(2, 0)], tol()).unwrap();
        assert_eq!(u, Operator::identity(2));
        let empty: [Vector<f64>; 0] = [];
        assert_eq!(complete_to_unitary(3, &empty, tol()).unwrap(), Operator::identity(3));
    }

    #[test]
    fn completion_rejects_bad_input() {
        let a = Vector::<f64>::basis(2, 0);
        let b = Vector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            complete_to_unitary(2, &[a.clone(), b], tol()),
            Err(Error::NotOrthonormal { .. })
        ));
        let three = [a.clone(), Vector::basis(2, 1), a];
        assert!(matches!(complete_to_unitary(2, &three, tol()), Err(Error::TooManyColumns { .. })));
    }

    #[test]
    fn ket_rejects_unnormalized() {
        assert!(matches!(
            Ket::new(vec![cr(1.0), cr(1.0)], tol()),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(Ket::<f64>::normalize(vec![cr(0.0); 3]), Err(Error::ZeroVector)));
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(0.0f64).is_err());
        assert!(Tolerance::new(1.0f64).is_err());
        assert!(Tolerance::new(1e-3f64).is_ok());
        assert_eq!(Tolerance::<f64>::default().eps(), 1e-9);
    }

    #[test]
    fn local_application_matches_lifted_operator() {
        let x = Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let m = Operator::from_rows(vec![
            vec![cr(1.0), c(0.0, 2.0), cr(0.0)],
            vec![cr(0.5), cr(-1.0), c(1.0, 1.0)],
            vec![cr(0.0), cr(3.0), cr(0.25)],
        ])
        .unwrap();
        let v = Vector::new((0..6).map(|i| c(i as f64, 1.0 - i as f64)).collect()).unwrap();
        let lifted = x.tensor(&Operator::identity(3)).unwrap();
        let direct = apply_local(&x, &v, (2, 3), Subsystem::First).unwrap();
        assert!(direct.distance(&lifted.apply(&v)) < 1e-14);
        let lifted = Operator::identity(2).tensor(&m).unwrap();
        let direct = apply_local(&m, &v, (2, 3), Subsystem::Second).unwrap();
        assert!(direct.distance(&lifted.apply(&v)) < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let plus = Ket::<f32>::uniform(2);
        let rho = plus.tensor(&plus).unwrap().projector();
        let reduced = partial_trace(&rho, (2, 2), Subsystem::Second).unwrap();
        assert!((&reduced - &plus.projector()).max_abs() < 1e-6);
    }
}
