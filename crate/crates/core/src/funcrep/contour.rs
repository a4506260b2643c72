//! Laurent coefficient extraction on small circles.
//!
//! For f sampled at n uniform counterclockwise points z_j = xi + r e^(2 pi i j/n),
//! the trapezoid rule for the Laurent coefficient of order m collapses to
//!
//! ```text
//!     a_m = (1/2 pi i) contour integral f(z) (z - xi)^(-m-1) dz
//!         = (1/n) sum_j f_j (z_j - xi)^(-m)
//! ```
//!
//! exact up to the aliasing tail, which decays geometrically with n for f
//! analytic in a neighborhood of the circle.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

/// Uniform counterclockwise samples of the circle |z - center| = radius.
pub fn circle_points(center: C, radius: f64, n: usize) -> Vec<C> {
    (0..n)
        .map(|j| center + C::from_polar(radius, std::f64::consts::TAU * j as f64 / n as f64))
        .collect()
}

/// Laurent coefficient of order `m` (m < 0 are principal-part orders).
fn laurent_coeff(values: &[C], radius: f64, m: i64) -> C {
    let n = values.len();
    let rp = radius.powi((-m) as i32);
    let mut sum = C::new(0.0, 0.0);
    for (j, &f) in values.iter().enumerate() {
        // (z_j - xi)^(-m) with the angle reduced exactly mod n to avoid drift
        let k = ((j as i64 * (-m)).rem_euclid(n as i64)) as f64;
        sum += f * C::from_polar(rp, std::f64::consts::TAU * k / n as f64);
    }
    sum / n as f64
}

/// Principal-part coefficients c_{-1} .. c_{-max_order} of f at the circle
/// center, from `values` sampled by [`circle_points`]. Requires at least 64
/// samples.
pub fn contour_coeffs(values: &[C], radius: f64, max_order: usize) -> Result<Vec<C>> {
    if values.len() < 64 {
        return Err(Error::InvalidInput(format!(
            "contour extraction needs >= 64 samples, got {}",
            values.len()
        )));
    }
    Ok((1..=max_order as i64).map(|k| laurent_coeff(values, radius, -k)).collect())
}

/// Taylor (regular-part) coefficients a_0 .. a_{terms-1} on the same samples.
pub fn taylor_coeffs(values: &[C], radius: f64, terms: usize) -> Result<Vec<C>> {
    if values.len() < 64 {
        return Err(Error::InvalidInput(format!(
            "contour extraction needs >= 64 samples, got {}",
            values.len()
        )));
    }
    Ok((0..terms as i64).map(|k| laurent_coeff(values, radius, k)).collect())
}
