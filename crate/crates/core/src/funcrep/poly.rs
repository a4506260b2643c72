//! Dense complex polynomials (ascending coefficients) and a simultaneous
//! root finder.

use num_complex::Complex64 as C;

use crate::consts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    /// Coefficients in ascending order; trailing entry nonzero after
    /// normalization (the zero polynomial stores an empty vector).
    pub coeffs: Vec<C>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![C::new(1.0, 0.0)] }
    }

    pub fn constant(c: C) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial z.
    pub fn z() -> Self {
        Polynomial { coeffs: vec![C::new(0.0, 0.0), C::new(1.0, 0.0)] }
    }

    pub fn from_roots(roots: &[C]) -> Self {
        let mut p = Polynomial::one();
        for &r in roots {
            p = p.mul(&Polynomial { coeffs: vec![-r, C::new(1.0, 0.0)] });
        }
        p
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Trim trailing coefficients at or below `POLY_TRIM_FACTOR` x scale.
    fn normalize(&mut self) {
        let s = self.scale();
        let tol = consts::POLY_TRIM_FACTOR * s;
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= tol {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, z: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![C::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Polynomial::new(coeffs)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }

    pub fn scalar_mul(&self, s: C) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![C::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    /// Evaluation-error floor: eps x sum |a_i| |z|^i, used as a backward-error
    /// stopping criterion for roots.
    fn eval_floor(&self, z: C) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        let mut p = 1.0;
        for c in &self.coeffs {
            acc += c.norm() * p;
            p *= r;
        }
        4.0 * self.coeffs.len() as f64 * f64::EPSILON * acc
    }

    /// All complex roots by Aberth-Ehrlich simultaneous iteration from a
    /// perturbed-circle start. A root is accepted once its update falls below
    /// `ABERTH_TOL` x root scale or its value reaches the evaluation-error
    /// floor (multiple roots stall above the update tolerance but sit on the
    /// floor).
    pub fn roots(&self) -> Result<Vec<C>> {
        let n = match self.degree() {
            None | Some(0) => return Ok(vec![]),
            Some(n) => n,
        };
        let lead = self.coeffs[n];
        let radius = (self.coeffs[0].norm() / lead.norm()).powf(1.0 / n as f64).clamp(1e-6, 1e6);
        let mut z: Vec<C> = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
                C::from_polar(radius * (1.0 + 1e-3 * (k as f64 + 1.0) / n as f64), t)
            })
            .collect();
        let deriv = self.derivative();
        let mut last_update = f64::INFINITY;
        for _ in 0..consts::ABERTH_MAX_ITER {
            let root_scale = z.iter().map(|w| w.norm()).fold(1.0, f64::max);
            let mut max_update = 0.0f64;
            for k in 0..n {
                let pv = self.eval(z[k]);
                if pv.norm() <= self.eval_floor(z[k]) {
                    continue; // at the attainable accuracy for this root
                }
                let dv = deriv.eval(z[k]);
                let newton = if dv.norm() == 0.0 {
                    // flat spot: nudge off it
                    C::new(1e-8 * (1.0 + z[k].norm()), 1e-8)
                } else {
                    pv / dv
                };
                let mut s = C::new(0.0, 0.0);
                for j in 0..n {
                    if j != k {
                        let d = z[k] - z[j];
                        if d.norm() > 0.0 {
                            s += 1.0 / d;
                        }
                    }
                }
                let denom = C::new(1.0, 0.0) - newton * s;
                let w = if denom.norm() < 1e-300 { newton } else { newton / denom };
                z[k] -= w;
                max_update = max_update.max(w.norm());
            }
            last_update = max_update;
            if max_update <= consts::ABERTH_TOL * root_scale {
                return Ok(z);
            }
        }
        // All residuals on the evaluation floor also counts as converged.
        if z.iter().all(|&w| self.eval(w).norm() <= self.eval_floor(w)) {
            return Ok(z);
        }
        Err(Error::NoConvergence { iters: consts::ABERTH_MAX_ITER, update: last_update })
    }

    /// Roots merged into clusters of radius `ROOT_CLUSTER_RADIUS`:
    /// (centroid, multiplicity).
    pub fn roots_clustered(&self) -> Result<Vec<(C, usize)>> {
        let raw = self.roots()?;
        Ok(cluster_points(&raw, consts::ROOT_CLUSTER_RADIUS))
    }
}

/// Merge points within `radius` of each other (transitively) into clusters
/// and return (centroid, size), in first-seen order.
pub fn cluster_points(points: &[C], radius: f64) -> Vec<(C, usize)> {
    let n = points.len();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        // breadth-first sweep of the proximity graph
        let mut members = vec![i];
        assigned[i] = true;
        let mut cursor = 0;
        while cursor < members.len() {
            let p = points[members[cursor]];
            cursor += 1;
            for j in 0..n {
                if !assigned[j] && (points[j] - p).norm() <= radius {
                    assigned[j] = true;
                    members.push(j);
                }
            }
        }
        let centroid = members.iter().map(|&j| points[j]).sum::<C>() / members.len() as f64;
        out.push((centroid, members.len()));
    }
    out
}
