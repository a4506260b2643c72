//! Circular planar domains: a closed disk, optionally with circular holes.
//!
//! A domain carries two precomputed grids that the rest of the engine works
//! on: boundary samples (uniform in arclength on every component, outer
//! circle counterclockwise, hole circles clockwise, so the union is the
//! positively-oriented boundary of the region) and an interior square
//! lattice. Grid construction is a pure function of the descriptor, so equal
//! descriptors give bit-identical grids.

use std::sync::Arc;

use num_complex::Complex64;

use crate::consts;
use crate::error::{Error, Result};

pub type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: C,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: C, radius: f64) -> Self {
        Circle { center, radius }
    }

    /// Signed distance of `z` to the circle, positive inside.
    pub fn signed_inside(&self, z: C) -> f64 {
        self.radius - (z - self.center).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

/// One sampled boundary circle.
#[derive(Debug, Clone)]
pub struct BoundaryComponent {
    pub circle: Circle,
    pub orientation: Orientation,
    /// Sample points, uniform in arclength along the traversal direction.
    pub points: Vec<C>,
    /// Tangent times trapezoid weight: summing `f(points[k]) * dz[k]`
    /// approximates the contour integral of f over this component.
    pub dz: Vec<C>,
    /// Unit-speed (arclength) parameter of each sample.
    pub arclen: Vec<f64>,
}

/// A disk or disk-with-holes together with its boundary and interior grids.
#[derive(Debug, Clone)]
pub struct Domain {
    pub outer: Circle,
    pub holes: Vec<Circle>,
    pub boundary_n: usize,
    pub interior_spacing: f64,
    pub components: Vec<BoundaryComponent>,
    pub interior: Vec<C>,
    /// Lattice coordinates of each interior point (same order), used for
    /// grid adjacency when continuing logarithms.
    pub interior_ij: Vec<(i64, i64)>,
}

impl Domain {
    /// Build a domain with explicit grid parameters.
    pub fn new(outer: Circle, holes: Vec<Circle>, boundary_n: usize, interior_spacing: f64) -> Result<Arc<Domain>> {
        if !(outer.radius.is_finite() && outer.radius > 0.0) {
            return Err(Error::DegenerateRadius { index: 0, radius: outer.radius });
        }
        for (i, h) in holes.iter().enumerate() {
            if !(h.radius.is_finite() && h.radius > 0.0) {
                return Err(Error::DegenerateRadius { index: i + 1, radius: h.radius });
            }
        }
        let clearance = consts::HOLE_CLEARANCE_FACTOR * outer.radius;
        for (i, h) in holes.iter().enumerate() {
            if (h.center - outer.center).norm() + h.radius > outer.radius - clearance {
                return Err(Error::HoleOutsideOuter { index: i });
            }
        }
        for i in 0..holes.len() {
            for j in (i + 1)..holes.len() {
                let d = (holes[i].center - holes[j].center).norm();
                if d < holes[i].radius + holes[j].radius + clearance {
                    return Err(Error::OverlappingHoles { first: i, second: j });
                }
            }
        }
        if boundary_n < 16 {
            return Err(Error::InvalidInput(format!("boundary_n = {boundary_n} below minimum 16")));
        }
        if !(interior_spacing.is_finite() && interior_spacing > 0.0) {
            return Err(Error::InvalidInput(format!("interior_spacing = {interior_spacing} must be positive")));
        }
        let est = (2.0 * outer.radius / interior_spacing + 1.0).powi(2);
        if est > 4e6 {
            return Err(Error::InvalidInput(format!("interior grid would hold ~{est:.0} points")));
        }

        let mut components = Vec::with_capacity(1 + holes.len());
        components.push(sample_circle(outer, boundary_n, Orientation::Counterclockwise));
        for h in &holes {
            components.push(sample_circle(*h, boundary_n, Orientation::Clockwise));
        }

        let mut d = Domain {
            outer,
            holes,
            boundary_n,
            interior_spacing,
            components,
            interior: Vec::new(),
            interior_ij: Vec::new(),
        };
        d.fill_interior();
        d.check_quadrature()?;
        Ok(Arc::new(d))
    }

    /// Build with the default grids: 512 boundary samples per component and
    /// interior spacing = outer radius / 64.
    pub fn with_defaults(outer: Circle, holes: Vec<Circle>) -> Result<Arc<Domain>> {
        let spacing = outer.radius * consts::DEFAULT_SPACING_FACTOR;
        Domain::new(outer, holes, consts::DEFAULT_BOUNDARY_N, spacing)
    }

    /// The closed unit disk with default grids (test convenience).
    pub fn unit_disk() -> Arc<Domain> {
        Domain::with_defaults(Circle::new(C::new(0.0, 0.0), 1.0), vec![]).expect("unit disk is valid")
    }

    fn fill_interior(&mut self) {
        let s = self.interior_spacing;
        let c = self.outer.center;
        let m = (self.outer.radius / s).ceil() as i64 + 1;
        for i in -m..=m {
            for j in -m..=m {
                let z = c + C::new(i as f64 * s, j as f64 * s);
                if self.signed_membership(z) >= s {
                    self.interior.push(z);
                    self.interior_ij.push((i, j));
                }
            }
        }
    }

    fn check_quadrature(&self) -> Result<()> {
        for comp in &self.components {
            let sum: C = comp.dz.iter().sum();
            let tol = consts::BOUNDARY_CLOSURE_TOL * comp.circle.radius * comp.points.len() as f64;
            if sum.norm() > tol {
                return Err(Error::InvalidInput(format!(
                    "boundary component fails closure: |sum dz| = {:.3e} > {:.3e}",
                    sum.norm(),
                    tol
                )));
            }
            // Trapezoid winding of 1/(z - center) over its own circle.
            let w: C = comp
                .points
                .iter()
                .zip(&comp.dz)
                .map(|(&z, &dz)| dz / (z - comp.circle.center))
                .sum();
            let expect = match comp.orientation {
                Orientation::Counterclockwise => C::new(0.0, std::f64::consts::TAU),
                Orientation::Clockwise => C::new(0.0, -std::f64::consts::TAU),
            };
            if (w - expect).norm() > consts::UNIT_WINDING_TOL * std::f64::consts::TAU {
                return Err(Error::InvalidInput(format!(
                    "boundary component winding check failed: {:.3e}",
                    (w - expect).norm()
                )));
            }
        }
        Ok(())
    }

    /// Signed membership function: positive inside the domain, negative
    /// outside, approximately the distance to the nearest boundary circle.
    pub fn signed_membership(&self, z: C) -> f64 {
        let mut m = self.outer.signed_inside(z);
        for h in &self.holes {
            m = m.min((z - h.center).norm() - h.radius);
        }
        m
    }

    /// Distance from the boundary under which points count as "on" it.
    pub fn boundary_tol(&self) -> f64 {
        consts::BOUNDARY_ZONE_FACTOR * self.outer.radius
    }

    /// Margin used when evaluating boundary Cauchy integrals at interior
    /// points.
    pub fn cauchy_margin(&self) -> f64 {
        consts::CAUCHY_MARGIN_CELLS * self.interior_spacing
    }

    pub fn num_boundary_points(&self) -> usize {
        self.components.iter().map(|c| c.points.len()).sum()
    }

    /// All boundary points, outer component first.
    pub fn boundary_points(&self) -> impl Iterator<Item = C> + '_ {
        self.components.iter().flat_map(|c| c.points.iter().copied())
    }

    /// Interior points that clear the Cauchy evaluation margin.
    pub fn margin_interior(&self) -> impl Iterator<Item = C> + '_ {
        let margin = self.cauchy_margin();
        self.interior.iter().copied().filter(move |&z| self.signed_membership(z) >= margin)
    }
}

fn sample_circle(circle: Circle, n: usize, orientation: Orientation) -> BoundaryComponent {
    let h = std::f64::consts::TAU / n as f64;
    let sign = match orientation {
        Orientation::Counterclockwise => 1.0,
        Orientation::Clockwise => -1.0,
    };
    let mut points = Vec::with_capacity(n);
    let mut dz = Vec::with_capacity(n);
    let mut arclen = Vec::with_capacity(n);
    for k in 0..n {
        let t = sign * h * k as f64;
        let e = C::new(0.0, t).exp();
        points.push(circle.center + circle.radius * e);
        dz.push(C::new(0.0, sign * h * circle.radius) * e);
        arclen.push(circle.radius * h * k as f64);
    }
    BoundaryComponent { circle, orientation, points, dz, arclen }
}
