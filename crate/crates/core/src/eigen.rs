//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow compared with tridiagonal QR but it is backward stable,
//! delivers eigenvectors orthonormal to working precision, and is generic
//! over the scalar type. Dimensions here stay below a few hundred.

use crate::error::{Error, Result};
use crate::hilbert::{Operator, Tolerance, Vector};
use crate::scalar::{c, cr, czero, Real};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian operator, eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Orthonormal eigenvectors, coindexed with `values`.
    pub vectors: Vec<Vector<T>>,
}

/// Diagonalizes `h`, which must be Hermitian within `tol`.
pub fn eigh<T: Real>(h: &Operator<T>, tol: Tolerance<T>) -> Result<HermitianEigen<T>> {
    let residual = h.hermiticity_residual();
    if !tol.accepts(residual) {
        return Err(Error::NotHermitian { residual: residual.to_f64_lossy() });
    }
    let n = h.dim();
    // Symmetrize so the rotations see an exactly Hermitian matrix.
    let mut a = Operator::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (h[(i, j)] + h[(j, i)].conj()) * cr(T::lit(0.5));
        }
        a[(i, i)] = cr(a[(i, i)].re);
    }
    let mut v = Operator::identity(n);

    let scale = a.frobenius_norm();
    let target = T::epsilon() * scale;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    Ok(HermitianEigen {
        values: order.iter().map(|&i| a[(i, i)].re).collect(),
        vectors: order.iter().map(|&i| v.column(i)).collect(),
    })
}

fn off_diagonal_norm<T: Real>(a: &Operator<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with `R = diag-phase · Givens`, updating
/// `a ← R† a R` and `v ← v R`.
fn rotate<T: Real>(a: &mut Operator<T>, v: &mut Operator<T>, p: usize, q: usize) {
    let g = a[(p, q)];
    let gabs = g.norm();
    if gabs == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Rotations below rounding level of the diagonal only add noise.
    if gabs <= T::epsilon() * T::lit(1e-3) * (app.abs() + aqq.abs()) {
        a[(p, q)] = czero();
        a[(q, p)] = czero();
        return;
    }
    let phase = g / cr(gabs);
    let two = T::lit(2.0);
    let theta = (aqq - app) / (two * gabs);
    let t = {
        let denom = theta.abs() + (theta * theta + T::one()).sqrt();
        if theta >= T::zero() {
            T::one() / denom
        } else {
            -T::one() / denom
        }
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    // R restricted to (p, q): [[c, s], [-s·ē, c·ē]] with e = g/|g|.
    let r_pp = cr(cs);
    let r_pq = cr(sn);
    let r_qp = phase.conj() * cr(-sn);
    let r_qq = phase.conj() * cr(cs);

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * r_pp + akq * r_qp;
        a[(k, q)] = akp * r_pq + akq * r_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = r_pp.conj() * apk + r_qp.conj() * aqk;
        a[(q, k)] = r_pq.conj() * apk + r_qq.conj() * aqk;
    }
    a[(p, q)] = czero();
    a[(q, p)] = czero();
    a[(p, p)] = c(a[(p, p)].re, T::zero());
    a[(q, q)] = c(a[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * r_pp + vkq * r_qp;
        v[(k, q)] = vkp * r_pq + vkq * r_qq;
    }
}
