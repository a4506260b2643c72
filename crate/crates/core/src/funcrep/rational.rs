//! Rational functions num/den with monic denominators.
//!
//! Attached to a domain, a rational function must have a pole-free closed
//! domain; that is validated once from the denominator's roots, after which
//! in-domain evaluation is a plain division.

use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::consts;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::funcrep::poly::Polynomial;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalFn {
    /// Construct and normalize (monic denominator). A zero denominator is
    /// rejected outright.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("rational function with zero denominator".into()));
        }
        let lead = *den.coeffs.last().expect("nonzero denominator");
        let inv = C::new(1.0, 0.0) / lead;
        Ok(RationalFn { num: num.scalar_mul(inv), den: den.scalar_mul(inv) })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFn { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: C) -> Self {
        RationalFn::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        RationalFn::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalFn::from_poly(Polynomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
            || self.num.scale() <= consts::RATIONAL_ZERO_FACTOR * self.num.scale().max(self.den.scale())
    }

    /// Exact-coefficient test against a constant: num - k*den == 0 within the
    /// zero threshold.
    pub fn is_constant(&self, k: C) -> bool {
        let diff = self.num.sub(&self.den.scalar_mul(k));
        let scale = self.num.scale().max(self.den.scale() * k.norm()).max(1e-300);
        diff.scale() <= consts::RATIONAL_ZERO_FACTOR * scale * 10.0
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFn::new(num, den).expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators")
    }

    /// Reciprocal; errors if the numerator is identically zero.
    pub fn inv(&self) -> Result<RationalFn> {
        if self.num.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn scalar_mul(&self, s: C) -> RationalFn {
        RationalFn { num: self.num.scalar_mul(s), den: self.den.clone() }
    }

    /// Checked evaluation: rejects points within `POLE_PROXIMITY` of a
    /// denominator zero (Newton distance estimate).
    pub fn eval(&self, z: C) -> Result<C> {
        let dv = self.den.eval(z);
        let dd = self.den.derivative().eval(z);
        let dist = if dd.norm() > 0.0 { dv.norm() / dd.norm() } else { f64::INFINITY };
        if dv.norm() == 0.0 || dist <= consts::POLE_PROXIMITY {
            return Err(Error::PoleInDomain { location: z });
        }
        Ok(self.num.eval(z) / dv)
    }

    /// Plain division; callers must know the point is pole-free (e.g. after
    /// `validate_on`).
    pub fn eval_unchecked(&self, z: C) -> C {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Verify the denominator has no zeros in the closed domain (with the
    /// boundary-zone margin).
    pub fn validate_on(&self, d: &Domain) -> Result<()> {
        if self.den.degree().unwrap_or(0) == 0 {
            return Ok(());
        }
        for root in self.den.roots()? {
            if d.signed_membership(root) > -d.boundary_tol() {
                return Err(Error::PoleInDomain { location: root });
            }
        }
        Ok(())
    }

    /// Validate and sample onto the domain grids.
    pub fn sample(&self, d: &Arc<Domain>) -> Result<crate::funcrep::GridFn> {
        self.validate_on(d)?;
        let boundary = d.boundary_points().map(|z| self.eval_unchecked(z)).collect();
        let interior = d.interior.iter().map(|&z| self.eval_unchecked(z)).collect();
        Ok(crate::funcrep::GridFn::from_values(d.clone(), boundary, interior))
    }
}
