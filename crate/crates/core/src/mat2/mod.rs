//! Constant 2x2 complex matrices and their exponentials.
//!
//! A trace-zero M has eigenvalues +-mu with mu^2 = -det M, and
//!
//! ```text
//!     exp(M) = cosh(mu) I + sinhc(mu) M,      sinhc(mu) = sinh(mu)/mu,
//! ```
//!
//! an even function of mu, so the branch of the square root is immaterial.
//! Near mu = 0 the quotient switches to its power series. A second,
//! structurally independent implementation (`exp_oracle`, scaling and
//! squaring with a degree-13 Taylor kernel) cross-checks the closed form.

mod matfn;

pub use matfn::{MatFn, MatRepr};

use num_complex::Complex64 as C;

use crate::consts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    /// Row-major entries: e[row][col].
    pub e: [[C; 2]; 2],
}

impl Mat2 {
    pub fn new(a: C, b: C, c: C, d: C) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Mat2::diag(C::new(1.0, 0.0), C::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Mat2::diag(C::new(0.0, 0.0), C::new(0.0, 0.0))
    }

    pub fn diag(a: C, d: C) -> Self {
        Mat2::new(a, C::new(0.0, 0.0), C::new(0.0, 0.0), d)
    }

    pub fn trace(&self) -> C {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> C {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    /// Max-abs entry norm.
    pub fn norm(&self) -> f64 {
        self.e
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let mut m = *self;
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] += o.e[i][j];
            }
        }
        m
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        self.add(&o.scale(C::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C) -> Mat2 {
        let mut m = *self;
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] *= s;
            }
        }
        m
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let mut m = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][0] * o.e[0][j] + self.e[i][1] * o.e[1][j];
            }
        }
        m
    }

    /// Inverse via the adjugate; rejects |det| below `CONJUGATOR_MIN_DET`.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.norm() < consts::CONJUGATOR_MIN_DET {
            return Err(Error::SingularConjugator { det: det.norm() });
        }
        let inv = C::new(1.0, 0.0) / det;
        Ok(Mat2::new(
            self.e[1][1] * inv,
            -self.e[0][1] * inv,
            -self.e[1][0] * inv,
            self.e[0][0] * inv,
        ))
    }
}

/// sinh(mu)/mu, stable through mu = 0.
fn sinhc(mu: C) -> C {
    if mu.norm() < consts::SINHC_SERIES_CUTOFF {
        let m2 = mu * mu;
        C::new(1.0, 0.0) + m2 / 6.0 + m2 * m2 / 120.0 + m2 * m2 * m2 / 5040.0
    } else {
        mu.sinh() / mu
    }
}

/// Closed-form exponential of a trace-zero matrix.
pub fn exp_sl2(m: &Mat2) -> Result<Mat2> {
    let norm = m.norm();
    let tr = m.trace().norm();
    if tr > consts::TRACE_ZERO_FACTOR * norm {
        return Err(Error::NotTraceZero { trace: tr, tol: consts::TRACE_ZERO_FACTOR * norm });
    }
    if norm == 0.0 {
        return Ok(Mat2::identity());
    }
    let mu = (-m.det()).sqrt();
    let cosh = mu.cosh();
    let sc = sinhc(mu);
    Ok(Mat2::new(
        cosh + sc * m.e[0][0],
        sc * m.e[0][1],
        sc * m.e[1][0],
        cosh + sc * m.e[1][1],
    ))
}

/// Scaling-and-squaring exponential with a degree-13 Taylor kernel. Works for
/// any 2x2 matrix; used as an independent oracle for `exp_sl2` and for the
/// final residual checks.
pub fn exp_oracle(m: &Mat2) -> Mat2 {
    let norm = m.norm();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let t = m.scale(C::new(0.5f64.powi(s), 0.0));
    let mut sum = Mat2::identity();
    let mut term = Mat2::identity();
    let mut fact = 1.0;
    for k in 1..=13 {
        fact *= k as f64;
        term = term.mul(&t);
        sum = sum.add(&term.scale(C::new(1.0 / fact, 0.0)));
    }
    let mut r = sum;
    for _ in 0..s {
        r = r.mul(&r);
    }
    r
}

/// Theta M Theta^{-1}.
pub fn conjugate(theta: &Mat2, m: &Mat2) -> Result<Mat2> {
    Ok(theta.mul(m).mul(&theta.inverse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rel_err(a: &Mat2, b: &Mat2) -> f64 {
        a.sub(b).norm() / (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn diag_i_pi_gives_minus_identity() {
        let m = Mat2::diag(c(0.0, std::f64::consts::PI), c(0.0, -std::f64::consts::PI));
        let e = exp_sl2(&m).unwrap();
        let want = Mat2::diag(c(-1.0, 0.0), c(-1.0, 0.0));
        assert!(rel_err(&e, &want) < 1e-14);
    }

    #[test]
    fn nilpotent_exponential_is_i_plus_m() {
        let m = Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let e = exp_sl2(&m).unwrap();
        let want = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(rel_err(&e, &want) < 1e-15);
    }

    #[test]
    fn trace_check_enforced() {
        let m = Mat2::diag(c(1.0, 0.0), c(-0.999, 0.0));
        assert!(matches!(exp_sl2(&m), Err(Error::NotTraceZero { .. })));
    }

    #[test]
    fn oracle_agrees_with_closed_form() {
        // a few deterministic pseudo-random trace-zero matrices
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for _ in 0..200 {
            let a = c(next(), next());
            let b = c(next(), next());
            let d = c(next(), next());
            let m = Mat2::new(a, b, d, -a);
            let e1 = exp_sl2(&m).unwrap();
            let e2 = exp_oracle(&m);
            assert!(rel_err(&e1, &e2) < 1e-12, "disagreement {:.3e}", rel_err(&e1, &e2));
            // det e^M = e^{tr M} = 1
            assert!((e1.det() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn near_nilpotent_regime() {
        for k in 1..=50 {
            let eps = 1e-6 * k as f64 / 50.0;
            let m = Mat2::new(c(eps, eps), c(1.0, 0.0), c(eps * eps, 0.0), c(-eps, -eps));
            let e1 = exp_sl2(&m).unwrap();
            let e2 = exp_oracle(&m);
            assert!(rel_err(&e1, &e2) < 1e-14);
        }
    }

    #[test]
    fn inverse_identity() {
        let m = Mat2::new(c(1.0, 2.0), c(-0.5, 0.1), c(3.0, 0.0), c(0.0, -1.0));
        let id = m.mul(&m.inverse().unwrap());
        assert!(rel_err(&id, &Mat2::identity()) < 1e-14);
        let sing = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(sing.inverse(), Err(Error::SingularConjugator { .. })));
    }

    #[test]
    fn conjugation_swap_reorders_triangular() {
        // ((0,1),(1,0)) . ((a,b),(0,d)) . swap = ((d,0),(b,a))
        let swap = Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let (a, b, d) = (c(1.3, -0.2), c(0.7, 0.9), c(-2.0, 0.4));
        let m = Mat2::new(a, b, c(0.0, 0.0), d);
        let got = conjugate(&swap, &m).unwrap();
        let want = Mat2::new(d, c(0.0, 0.0), b, a);
        assert!(rel_err(&got, &want) < 1e-15);
    }

    #[test]
    fn conjugation_commutes_with_exp() {
        let theta = Mat2::new(c(1.0, 0.3), c(0.2, -0.1), c(0.0, 0.5), c(1.1, 0.0));
        let m = Mat2::new(c(0.4, -0.2), c(1.0, 1.0), c(-0.3, 0.2), c(-0.4, 0.2));
        let lhs = exp_sl2(&conjugate(&theta, &m).unwrap()).unwrap();
        let rhs = conjugate(&theta, &exp_sl2(&m).unwrap()).unwrap();
        assert!(rel_err(&lhs, &rhs) < 1e-12);
    }
}
