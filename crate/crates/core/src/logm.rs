//! Trace-zero matrix logarithm with a prescribed eigenvalue branch.
//!
//! For B with det B = 1 and a branch lambda with e^lambda an eigenvalue of B
//! and e^lambda != e^{-lambda}, the spectral projection
//!
//! ```text
//!     P = (B - e^{-lambda} I) / (e^lambda - e^{-lambda})
//! ```
//!
//! splits the plane into the two eigendirections, B = e^lambda P +
//! e^{-lambda}(I - P), and
//!
//! ```text
//!     F = lambda P - lambda (I - P) = lambda (2P - I)
//! ```
//!
//! is the unique trace-zero logarithm of B whose eigenvalue on ran P is
//! lambda. Both gates (eigenvalue membership, eigenvalue separation) error
//! out rather than regularize: the factorization pipeline guarantees them,
//! so a failure here means an upstream bug, not an input to repair.

use num_complex::Complex64 as C;

use crate::consts;
use crate::error::{Error, Result};
use crate::funcrep::GridFn;
use crate::mat2::{Mat2, MatFn};

/// Worst-case branch diagnostics over a grid: the smallest eigenvalue
/// separation |e^lambda - e^{-lambda}| and the largest membership residual
/// |det(e^lambda I - B)| / ||B||^2 seen at any point.
#[derive(Debug, Clone, Copy)]
pub struct LogBranchData {
    pub gap: f64,
    pub residual: f64,
}

/// Validate the branch at one point and return (e^lambda, e^-lambda).
fn branch_exponentials(b: &Mat2, lambda: C) -> Result<(C, C)> {
    let el = lambda.exp();
    let eml = (-lambda).exp();
    let gap = (el - eml).norm();
    if gap <= consts::EIGENVALUE_GAP_MIN {
        return Err(Error::DegenerateEigenvalues { gap, min: consts::EIGENVALUE_GAP_MIN });
    }
    let membership = Mat2::diag(el, el).sub(b).det().norm();
    let tol = consts::EIGENVALUE_RESIDUAL_FACTOR * b.norm() * b.norm();
    if membership > tol {
        return Err(Error::NotAnEigenvalue { residual: membership, tol });
    }
    Ok((el, eml))
}

/// P with ran P the e^lambda eigendirection of B.
pub fn spectral_projection(b: &Mat2, lambda: C) -> Result<Mat2> {
    let (el, eml) = branch_exponentials(b, lambda)?;
    Ok(b.sub(&Mat2::diag(eml, eml)).scale(C::new(1.0, 0.0) / (el - eml)))
}

/// The trace-zero logarithm F = lambda (2P - I) of B.
pub fn log_with_eigenvalue(b: &Mat2, lambda: C) -> Result<Mat2> {
    let p = spectral_projection(b, lambda)?;
    Ok(p.scale(lambda * 2.0).sub(&Mat2::diag(lambda, lambda)))
}

/// Pointwise [`log_with_eigenvalue`] over the grids of B, with the branch
/// given as a grid function. Returns F together with the worst-case branch
/// diagnostics actually observed.
pub fn log_with_eigenvalue_grid(b: &MatFn, lambda: &GridFn) -> Result<(MatFn, LogBranchData)> {
    let bg = b.to_grid()?;
    let n_b = bg.domain.num_boundary_points();
    let n_i = bg.domain.interior.len();
    let mut data = LogBranchData { gap: f64::INFINITY, residual: 0.0 };

    let mut entries: [[Vec<C>; 2]; 2] = Default::default();
    for row in entries.iter_mut() {
        for e in row.iter_mut() {
            e.reserve(n_b + n_i);
        }
    }
    let mut push = |bm: &Mat2, lam: C| -> Result<()> {
        let f = log_with_eigenvalue(bm, lam)?;
        let el = lam.exp();
        data.gap = data.gap.min((el - (-lam).exp()).norm());
        let scale = bm.norm() * bm.norm();
        data.residual = data.residual.max(Mat2::diag(el, el).sub(bm).det().norm() / scale);
        for i in 0..2 {
            for j in 0..2 {
                entries[i][j].push(f.e[i][j]);
            }
        }
        Ok(())
    };
    for (i, &lam) in lambda.boundary.iter().enumerate() {
        push(&bg.at_boundary(i), lam)?;
    }
    for (i, &lam) in lambda.interior.iter().enumerate() {
        push(&bg.at_interior(i), lam)?;
    }

    let grid = |v: Vec<C>| {
        GridFn::from_values(bg.domain.clone(), v[..n_b].to_vec(), v[n_b..].to_vec())
    };
    let [[e00, e01], [e10, e11]] = entries;
    let f = MatFn::from_grid(bg.domain.clone(), [[grid(e00), grid(e01)], [grid(e10), grid(e11)]]);
    Ok((f, data))
}
