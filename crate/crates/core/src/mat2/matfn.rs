//! Matrix-valued functions on a domain, in one of two representations:
//! exact rational entries or grid samples. The rational phase supports exact
//! identity tests (coefficient comparisons) and exact arithmetic; the grid
//! phase is where transcendental factors live.

use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::funcrep::{GridFn, RationalFn};
use crate::mat2::Mat2;

#[derive(Debug, Clone)]
pub enum MatRepr {
    Rational(Box<[[RationalFn; 2]; 2]>),
    Grid(Box<[[GridFn; 2]; 2]>),
}

#[derive(Debug, Clone)]
pub struct MatFn {
    pub domain: Arc<Domain>,
    pub repr: MatRepr,
}

impl MatFn {
    /// Rational matrix; validates every entry against the domain (no poles in
    /// the closed region).
    pub fn from_rational(domain: Arc<Domain>, entries: [[RationalFn; 2]; 2]) -> Result<Self> {
        for row in &entries {
            for e in row {
                e.validate_on(&domain)?;
            }
        }
        Ok(MatFn { domain, repr: MatRepr::Rational(Box::new(entries)) })
    }

    pub fn from_grid(domain: Arc<Domain>, entries: [[GridFn; 2]; 2]) -> Self {
        MatFn { domain, repr: MatRepr::Grid(Box::new(entries)) }
    }

    pub fn identity_rational(domain: Arc<Domain>) -> Self {
        let one = RationalFn::one;
        let zero = RationalFn::zero;
        MatFn {
            domain,
            repr: MatRepr::Rational(Box::new([[one(), zero()], [zero(), one()]])),
        }
    }

    pub fn rational_entries(&self) -> Option<&[[RationalFn; 2]; 2]> {
        match &self.repr {
            MatRepr::Rational(e) => Some(e),
            MatRepr::Grid(_) => None,
        }
    }

    pub fn grid_entries(&self) -> Option<&[[GridFn; 2]; 2]> {
        match &self.repr {
            MatRepr::Grid(e) => Some(e),
            MatRepr::Rational(_) => None,
        }
    }

    /// Sample rational entries onto the grids (grid input is returned as-is).
    pub fn to_grid(&self) -> Result<MatFn> {
        match &self.repr {
            MatRepr::Grid(_) => Ok(self.clone()),
            MatRepr::Rational(e) => {
                let g = |i: usize, j: usize| e[i][j].sample(&self.domain);
                Ok(MatFn::from_grid(
                    self.domain.clone(),
                    [[g(0, 0)?, g(0, 1)?], [g(1, 0)?, g(1, 1)?]],
                ))
            }
        }
    }

    /// Pointwise value at an arbitrary point (rational representation only).
    pub fn eval_rational(&self, z: C) -> Option<Mat2> {
        let e = self.rational_entries()?;
        Some(Mat2::new(
            e[0][0].eval_unchecked(z),
            e[0][1].eval_unchecked(z),
            e[1][0].eval_unchecked(z),
            e[1][1].eval_unchecked(z),
        ))
    }

    /// Value at boundary grid point `i` (flat index).
    pub fn at_boundary(&self, i: usize) -> Mat2 {
        match &self.repr {
            MatRepr::Grid(e) => Mat2::new(
                e[0][0].boundary[i],
                e[0][1].boundary[i],
                e[1][0].boundary[i],
                e[1][1].boundary[i],
            ),
            MatRepr::Rational(_) => {
                let z = self.domain.boundary_points().nth(i).expect("boundary index");
                self.eval_rational(z).expect("rational repr")
            }
        }
    }

    /// Value at interior grid point `i`.
    pub fn at_interior(&self, i: usize) -> Mat2 {
        match &self.repr {
            MatRepr::Grid(e) => Mat2::new(
                e[0][0].interior[i],
                e[0][1].interior[i],
                e[1][0].interior[i],
                e[1][1].interior[i],
            ),
            MatRepr::Rational(_) => {
                let z = self.domain.interior[i];
                self.eval_rational(z).expect("rational repr")
            }
        }
    }

    /// Rational matrix product (rational representations only).
    pub fn mul_rational(&self, other: &MatFn) -> Result<MatFn> {
        let (a, b) = match (self.rational_entries(), other.rational_entries()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidInput("rational matrix product needs rational operands".into())),
        };
        let mut out: [[RationalFn; 2]; 2] =
            [[RationalFn::zero(), RationalFn::zero()], [RationalFn::zero(), RationalFn::zero()]];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
            }
        }
        Ok(MatFn { domain: self.domain.clone(), repr: MatRepr::Rational(Box::new(out)) })
    }

    /// Conjugate by a constant matrix: Theta A Theta^{-1}, staying in the
    /// current representation.
    pub fn conjugate_const(&self, theta: &Mat2) -> Result<MatFn> {
        let inv = theta.inverse()?;
        match &self.repr {
            MatRepr::Rational(e) => {
                let lift = |m: &Mat2| -> [[RationalFn; 2]; 2] {
                    [
                        [RationalFn::constant(m.e[0][0]), RationalFn::constant(m.e[0][1])],
                        [RationalFn::constant(m.e[1][0]), RationalFn::constant(m.e[1][1])],
                    ]
                };
                let t = MatFn { domain: self.domain.clone(), repr: MatRepr::Rational(Box::new(lift(theta))) };
                let ti = MatFn { domain: self.domain.clone(), repr: MatRepr::Rational(Box::new(lift(&inv))) };
                let a = MatFn { domain: self.domain.clone(), repr: MatRepr::Rational(e.clone()) };
                t.mul_rational(&a)?.mul_rational(&ti)
            }
            MatRepr::Grid(e) => {
                let combine = |i: usize, j: usize| -> GridFn {
                    // (Theta A Theta^{-1})_{ij} = sum_{k,l} Theta_{ik} A_{kl} inv_{lj}
                    let mut acc = GridFn::zero(&self.domain);
                    for k in 0..2 {
                        for l in 0..2 {
                            let coef = theta.e[i][k] * inv.e[l][j];
                            if coef.norm() > 0.0 {
                                acc = acc.add(&e[k][l].scalar_mul(coef));
                            }
                        }
                    }
                    acc
                };
                Ok(MatFn::from_grid(
                    self.domain.clone(),
                    [[combine(0, 0), combine(0, 1)], [combine(1, 0), combine(1, 1)]],
                ))
            }
        }
    }

    /// Determinant in the current representation.
    pub fn det_rational(&self) -> Option<RationalFn> {
        let e = self.rational_entries()?;
        Some(e[0][0].mul(&e[1][1]).sub(&e[0][1].mul(&e[1][0])))
    }

    pub fn det_grid(&self) -> Result<GridFn> {
        let g = self.to_grid()?;
        let e = g.grid_entries().expect("grid repr");
        Ok(e[0][0].mul(&e[1][1]).sub(&e[0][1].mul(&e[1][0])))
    }

    pub fn trace_rational(&self) -> Option<RationalFn> {
        let e = self.rational_entries()?;
        Some(e[0][0].add(&e[1][1]))
    }

    /// det A = 1 as a rational identity (coefficient defect of num - den).
    pub fn unimodular_defect(&self) -> Option<f64> {
        let det = self.det_rational()?;
        let diff = det.num.sub(&det.den);
        let scale = det.num.scale().max(det.den.scale()).max(1e-300);
        Some(diff.scale() / scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::Polynomial;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rz() -> RationalFn {
        RationalFn::from_poly(Polynomial::z())
    }

    #[test]
    fn rational_product_and_det() {
        let d = Domain::unit_disk();
        // A = ((1, z), (0, 1)) * ((1, 0), (z, 1)) = ((1 + z^2, z), (z, 1))
        let u = MatFn::from_rational(
            d.clone(),
            [[RationalFn::one(), rz()], [RationalFn::zero(), RationalFn::one()]],
        )
        .unwrap();
        let l = MatFn::from_rational(
            d.clone(),
            [[RationalFn::one(), RationalFn::zero()], [rz(), RationalFn::one()]],
        )
        .unwrap();
        let a = u.mul_rational(&l).unwrap();
        let z = c(0.3, 0.5);
        let m = a.eval_rational(z).unwrap();
        assert!((m.e[0][0] - (1.0 + z * z)).norm() < 1e-14);
        assert!((m.e[0][1] - z).norm() < 1e-14);
        assert!((m.e[1][0] - z).norm() < 1e-14);
        assert!((m.e[1][1] - 1.0).norm() < 1e-14);
        assert!(a.unimodular_defect().unwrap() < 1e-14);
    }

    #[test]
    fn sampling_matches_rational_eval() {
        let d = Domain::unit_disk();
        let a = MatFn::from_rational(
            d.clone(),
            [[rz(), RationalFn::one()], [RationalFn::constant(c(0.0, 2.0)), rz()]],
        )
        .unwrap();
        let g = a.to_grid().unwrap();
        for i in [0usize, 7, 100] {
            let want = a.at_interior(i);
            let got = g.at_interior(i);
            assert!(want.sub(&got).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_conjugation_matches_pointwise() {
        let d = Domain::unit_disk();
        let a = MatFn::from_rational(
            d.clone(),
            [[rz(), RationalFn::one()], [RationalFn::zero(), rz()]],
        )
        .unwrap();
        let theta = Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let conj = a.conjugate_const(&theta).unwrap();
        let z = c(-0.2, 0.4);
        let want = theta.mul(&a.eval_rational(z).unwrap()).mul(&theta.inverse().unwrap());
        let got = conj.eval_rational(z).unwrap();
        assert!(want.sub(&got).norm() < 1e-13);
    }
}
