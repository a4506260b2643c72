//! Independent check of a claimed factorization A = e^E e^F: pointwise
//! exponentials, trace maxima, and holomorphy certificates, collected into a
//! report. Math failures land in the report's flags, never in an error.

use crate::consts;
use crate::error::Result;
use crate::mat2::{exp_oracle, exp_sl2, Mat2, MatFn};

#[derive(Debug, Clone, Copy)]
pub struct VerifyReport {
    /// max over grid points of ||e^E e^F - A|| / (1 + ||A||).
    pub residual: f64,
    pub trace_e: f64,
    pub trace_f: f64,
    pub cert_e: f64,
    pub cert_f: f64,
    pub tol: f64,
    pub residual_ok: bool,
    pub traces_ok: bool,
    pub certs_ok: bool,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.residual_ok && self.traces_ok && self.certs_ok
    }
}

pub(crate) struct Assessment {
    pub residual: f64,
    pub trace_e: f64,
    pub trace_f: f64,
    pub cert_e: f64,
    pub cert_f: f64,
}

/// Closed-form exponential where the trace gate allows it, scaling-and-
/// squaring oracle otherwise (GL(2) exponents have nonzero trace by design).
pub(crate) fn point_exp(m: &Mat2) -> Mat2 {
    exp_sl2(m).unwrap_or_else(|_| exp_oracle(m))
}

pub(crate) fn assess(a: &MatFn, e: &MatFn, f: &MatFn) -> Result<Assessment> {
    let ag = a.to_grid()?;
    let mut residual = 0.0f64;
    let mut trace_e = 0.0f64;
    let mut trace_f = 0.0f64;
    let mut check = |a_pt: Mat2, e_pt: Mat2, f_pt: Mat2| {
        trace_e = trace_e.max(e_pt.trace().norm());
        trace_f = trace_f.max(f_pt.trace().norm());
        let prod = point_exp(&e_pt).mul(&point_exp(&f_pt));
        residual = residual.max(prod.sub(&a_pt).norm() / (1.0 + a_pt.norm()));
    };
    for i in 0..a.domain.num_boundary_points() {
        check(ag.at_boundary(i), e.at_boundary(i), f.at_boundary(i));
    }
    for i in 0..a.domain.interior.len() {
        check(ag.at_interior(i), e.at_interior(i), f.at_interior(i));
    }
    let cert = |m: &MatFn| -> Result<f64> {
        let g = m.to_grid()?;
        let ent = g.grid_entries().expect("grid repr");
        Ok(ent.iter().flatten().map(|x| x.holomorphy_residual()).fold(0.0, f64::max))
    };
    Ok(Assessment { residual, trace_e, trace_f, cert_e: cert(e)?, cert_f: cert(f)? })
}

/// Check A against e^E e^F with the given residual tolerance. Trace and
/// certificate flags use the standing gates; the report carries the numbers
/// either way.
pub fn verify(a: &MatFn, e: &MatFn, f: &MatFn, tol: f64) -> Result<VerifyReport> {
    let s = assess(a, e, f)?;
    Ok(VerifyReport {
        residual: s.residual,
        trace_e: s.trace_e,
        trace_f: s.trace_f,
        cert_e: s.cert_e,
        cert_f: s.cert_f,
        tol,
        residual_ok: s.residual <= tol,
        traces_ok: s.trace_e <= consts::TRACE_TOL && s.trace_f <= consts::TRACE_TOL,
        certs_ok: s.cert_e <= consts::CERT_TOL && s.cert_f <= consts::CERT_TOL,
    })
}

// point_exp relies on exp_sl2 erroring out on matrices that fail its own
// trace gate; keep that assumption visible here.
#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn point_exp_routes_by_trace() {
        let tz = Mat2::new(C::new(0.3, 0.0), C::new(0.1, 0.2), C::new(0.0, -0.4), C::new(-0.3, 0.0));
        let closed = point_exp(&tz);
        let oracle = exp_oracle(&tz);
        assert!(closed.sub(&oracle).norm() < 1e-13);

        let traced = Mat2::diag(C::new(0.7, 0.0), C::new(0.7, 0.0));
        let via = point_exp(&traced);
        let want = Mat2::diag(C::new(0.7f64.exp(), 0.0), C::new(0.7f64.exp(), 0.0));
        assert!(via.sub(&want).norm() < 1e-12);
    }
}
