//! Function representations: polynomials, rational functions, grid samples,
//! and zero sets, with the boundary-integral operations the factorization
//! pipeline is built from.

mod contour;
mod gridfn;
mod poly;
mod rational;

pub use contour::{circle_points, contour_coeffs, taylor_coeffs};
pub use gridfn::GridFn;
pub use poly::{cluster_points, Polynomial};
pub use rational::RationalFn;

use num_complex::Complex64 as C;

use crate::domain::Domain;
use crate::error::{Error, Result};

/// Interior zeros of a function with multiplicities and the residual bound
/// certifying them.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub zeros: Vec<(C, usize)>,
    /// max |num(zero)| / coefficient scale over the reported zeros.
    pub residual_bound: f64,
}

impl ZeroSet {
    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|&(_, m)| m).sum()
    }
}

/// Interior zeros of a rational function on a domain.
///
/// Numerator roots are clustered into multiplicities; roots inside the domain
/// with margin are kept, roots within the boundary zone are rejected
/// (`BoundaryZero`), and roots outside (or in holes) are discarded. The
/// identically-zero function is an error.
pub fn zeros_in_domain(f: &RationalFn, d: &Domain) -> Result<ZeroSet> {
    if f.num.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let tol = d.boundary_tol();
    let scale = f.num.scale().max(1e-300);
    let mut zeros = Vec::new();
    let mut residual_bound = 0.0f64;
    for (root, mult) in f.num.roots_clustered()? {
        let m = d.signed_membership(root);
        if m.abs() <= tol {
            return Err(Error::BoundaryZero { location: root, distance: m.abs() });
        }
        if m > tol {
            residual_bound = residual_bound.max(f.num.eval(root).norm() / scale);
            zeros.push((root, mult));
        }
    }
    Ok(ZeroSet { zeros, residual_bound })
}
