//! Functions known by their values on a domain's grids.
//!
//! The boundary values feed a reproducing Cauchy integral
//!
//! ```text
//!     f(w) = (1/2 pi i) sum over components of  integral f(z) dz / (z - w)
//! ```
//!
//! which holds exactly for functions holomorphic on the closed domain (hole
//! components traverse clockwise, so every component contributes with the
//! right sign). The defect of that identity over the interior grid is the
//! *holomorphy certificate* used throughout the engine.

use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::consts;
use crate::domain::Domain;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GridFn {
    pub domain: Arc<Domain>,
    /// Values on boundary points, concatenated in component order.
    pub boundary: Vec<C>,
    /// Values on interior lattice points (same order as `domain.interior`).
    pub interior: Vec<C>,
}

impl GridFn {
    pub fn from_values(domain: Arc<Domain>, boundary: Vec<C>, interior: Vec<C>) -> Self {
        assert_eq!(boundary.len(), domain.num_boundary_points());
        assert_eq!(interior.len(), domain.interior.len());
        GridFn { domain, boundary, interior }
    }

    pub fn from_fn(domain: &Arc<Domain>, f: impl Fn(C) -> C) -> Self {
        let boundary = domain.boundary_points().map(&f).collect();
        let interior = domain.interior.iter().map(|&z| f(z)).collect();
        GridFn { domain: domain.clone(), boundary, interior }
    }

    pub fn constant(domain: &Arc<Domain>, value: C) -> Self {
        GridFn::from_fn(domain, |_| value)
    }

    pub fn zero(domain: &Arc<Domain>) -> Self {
        GridFn::constant(domain, C::new(0.0, 0.0))
    }

    fn compatible(&self, other: &GridFn) {
        assert!(
            Arc::ptr_eq(&self.domain, &other.domain)
                || (self.boundary.len() == other.boundary.len()
                    && self.interior.len() == other.interior.len()),
            "grid functions live on different grids"
        );
    }

    pub fn map(&self, f: impl Fn(C) -> C) -> GridFn {
        GridFn {
            domain: self.domain.clone(),
            boundary: self.boundary.iter().map(|&v| f(v)).collect(),
            interior: self.interior.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination with the matching point of `other`.
    pub fn zip(&self, other: &GridFn, f: impl Fn(C, C) -> C) -> GridFn {
        self.compatible(other);
        GridFn {
            domain: self.domain.clone(),
            boundary: self.boundary.iter().zip(&other.boundary).map(|(&a, &b)| f(a, b)).collect(),
            interior: self.interior.iter().zip(&other.interior).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Pointwise combination of two grid functions that also sees the grid point.
    pub fn zip_with_point(&self, other: &GridFn, f: impl Fn(C, C, C) -> C) -> GridFn {
        self.compatible(other);
        let d = &self.domain;
        let boundary = d
            .boundary_points()
            .zip(&self.boundary)
            .zip(&other.boundary)
            .map(|((z, &a), &b)| f(z, a, b))
            .collect();
        let interior = d
            .interior
            .iter()
            .zip(&self.interior)
            .zip(&other.interior)
            .map(|((&z, &a), &b)| f(z, a, b))
            .collect();
        GridFn { domain: d.clone(), boundary, interior }
    }

    /// Pointwise combination that also sees the grid point itself.
    pub fn map_with_point(&self, f: impl Fn(C, C) -> C) -> GridFn {
        let d = &self.domain;
        let boundary = d.boundary_points().zip(&self.boundary).map(|(z, &v)| f(z, v)).collect();
        let interior = d.interior.iter().zip(&self.interior).map(|(&z, &v)| f(z, v)).collect();
        GridFn { domain: d.clone(), boundary, interior }
    }

    pub fn add(&self, other: &GridFn) -> GridFn {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFn) -> GridFn {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &GridFn) -> GridFn {
        self.zip(other, |a, b| a * b)
    }

    pub fn scalar_mul(&self, s: C) -> GridFn {
        self.map(|v| v * s)
    }

    pub fn values(&self) -> impl Iterator<Item = C> + '_ {
        self.boundary.iter().chain(self.interior.iter()).copied()
    }

    /// Grid points and values, boundary first.
    pub fn points_values(&self) -> impl Iterator<Item = (C, C)> + '_ {
        self.domain
            .boundary_points()
            .zip(self.boundary.iter().copied())
            .chain(self.domain.interior.iter().copied().zip(self.interior.iter().copied()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs(&self) -> f64 {
        self.values().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Boundary values of one component.
    pub fn component_values(&self, k: usize) -> &[C] {
        let n = self.domain.components[k].points.len();
        let start: usize = self.domain.components[..k].iter().map(|c| c.points.len()).sum();
        &self.boundary[start..start + n]
    }

    /// Boundary Cauchy integral at an interior point (margin-checked).
    pub fn cauchy_eval(&self, w: C) -> Result<C> {
        let margin = self.domain.cauchy_margin();
        if self.domain.signed_membership(w) < margin {
            return Err(Error::TooCloseToBoundary { location: w, margin });
        }
        Ok(self.cauchy_eval_unchecked(w))
    }

    pub fn cauchy_eval_unchecked(&self, w: C) -> C {
        let mut sum = C::new(0.0, 0.0);
        let mut idx = 0;
        for comp in &self.domain.components {
            for (k, &z) in comp.points.iter().enumerate() {
                sum += self.boundary[idx + k] * comp.dz[k] / (z - w);
            }
            idx += comp.points.len();
        }
        sum / C::new(0.0, std::f64::consts::TAU)
    }

    /// Holomorphy certificate: the maximum defect of the reproducing Cauchy
    /// identity over margin-filtered interior points, normalized by
    /// (1 + max |f|).
    pub fn holomorphy_residual(&self) -> f64 {
        self.holomorphy_residual_where(|_| true)
    }

    /// Same, restricted to interior points satisfying `keep`.
    pub fn holomorphy_residual_where(&self, keep: impl Fn(C) -> bool) -> f64 {
        let margin = self.domain.cauchy_margin();
        let norm = 1.0 + self.max_abs();
        let mut worst = 0.0f64;
        for (i, &w) in self.domain.interior.iter().enumerate() {
            if self.domain.signed_membership(w) < margin || !keep(w) {
                continue;
            }
            let defect = (self.interior[i] - self.cauchy_eval_unchecked(w)).norm();
            worst = worst.max(defect);
        }
        worst / norm
    }

    /// Winding number of the boundary values around 0 on each component, in
    /// stored traversal order (outer counterclockwise, holes clockwise).
    pub fn winding_numbers(&self) -> Result<Vec<i64>> {
        let bmax = self.boundary.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let bmin = self.boundary.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if bmax == 0.0 || bmin <= consts::WINDING_MIN_MODULUS_FACTOR * bmax {
            return Err(Error::VanishesOnBoundary { ratio: if bmax == 0.0 { 0.0 } else { bmin / bmax } });
        }
        let mut out = Vec::with_capacity(self.domain.components.len());
        for k in 0..self.domain.components.len() {
            let vals = self.component_values(k);
            let mut total = 0.0;
            for i in 0..vals.len() {
                let a = vals[i];
                let b = vals[(i + 1) % vals.len()];
                let step = (b / a).arg();
                if step.abs() > consts::WINDING_MAX_STEP {
                    return Err(Error::Undersampled { step });
                }
                total += step;
            }
            let w = total / std::f64::consts::TAU;
            let rounded = w.round();
            debug_assert!((w - rounded).abs() < 1e-6, "winding sum {w} far from integer");
            out.push(rounded as i64);
        }
        Ok(out)
    }

    /// A single-valued logarithm of `self` over the grids, continued from the
    /// first interior point by breadth-first search over grid adjacency.
    /// Every non-tree edge must close up (defect below `LOG_LOOP_TOL`).
    pub fn log_continuation(&self) -> Result<GridFn> {
        let windings = self.winding_numbers()?;
        for (k, &w) in windings.iter().enumerate() {
            if w != 0 {
                return Err(Error::NonzeroWinding { component: k, winding: w });
            }
        }
        let fmax = self.max_abs();
        for (z, v) in self.points_values() {
            if v.norm() <= 1e-13 * fmax {
                return Err(Error::VanishingValue { location: z, modulus: v.norm() });
            }
        }

        let d = &self.domain;
        let nb = self.boundary.len();
        let n = nb + self.interior.len();
        let value = |i: usize| if i < nb { self.boundary[i] } else { self.interior[i - nb] };

        let edges = grid_adjacency(d);
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }

        // BFS from the first interior point.
        let mut eta = vec![C::new(0.0, 0.0); n];
        let mut seen = vec![false; n];
        let base = nb;
        if self.interior.is_empty() {
            return Err(Error::InvalidInput("domain has no interior grid points".into()));
        }
        eta[base] = value(base).ln();
        seen[base] = true;
        let mut queue = std::collections::VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    eta[v] = eta[u] + (value(v) / value(u)).ln();
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidInput("grid graph is disconnected; cannot continue logarithm".into()));
        }
        // Loop closure on every edge (tree edges close to rounding).
        let mut worst = 0.0f64;
        for &(u, v) in &edges {
            let defect = (eta[v] - eta[u] - (value(v) / value(u)).ln()).norm();
            worst = worst.max(defect);
        }
        if worst > consts::LOG_LOOP_TOL {
            return Err(Error::LoopClosureFailure { defect: worst });
        }
        Ok(GridFn {
            domain: d.clone(),
            boundary: eta[..nb].to_vec(),
            interior: eta[nb..].to_vec(),
        })
    }
}

/// Undirected adjacency over all grid points: consecutive boundary samples,
/// 4-neighbor interior lattice links, and stitches between each boundary
/// sample and its nearest interior point.
fn grid_adjacency(d: &Domain) -> Vec<(usize, usize)> {
    let nb = d.num_boundary_points();
    let mut edges = Vec::new();
    // boundary rings
    let mut start = 0;
    for comp in &d.components {
        let n = comp.points.len();
        for k in 0..n {
            edges.push((start + k, start + (k + 1) % n));
        }
        start += n;
    }
    // interior lattice
    let mut lattice = std::collections::HashMap::new();
    for (i, &ij) in d.interior_ij.iter().enumerate() {
        lattice.insert(ij, i);
    }
    for (i, &(a, b)) in d.interior_ij.iter().enumerate() {
        for nbr in [(a + 1, b), (a, b + 1)] {
            if let Some(&j) = lattice.get(&nbr) {
                edges.push((nb + i, nb + j));
            }
        }
    }
    // stitch boundary to interior
    let s = d.interior_spacing;
    let reach = 2.5 * s;
    for (bi, p) in d.boundary_points().enumerate() {
        let ci = ((p.re - d.outer.center.re) / s).round() as i64;
        let cj = ((p.im - d.outer.center.im) / s).round() as i64;
        let mut best: Option<(f64, usize)> = None;
        for di in -3..=3i64 {
            for dj in -3..=3i64 {
                if let Some(&idx) = lattice.get(&(ci + di, cj + dj)) {
                    let dist = (d.interior[idx] - p).norm();
                    if dist <= reach && best.map_or(true, |(bd, _)| dist < bd) {
                        best = Some((dist, idx));
                    }
                }
            }
        }
        if let Some((_, idx)) = best {
            edges.push((bi, nb + idx));
        }
    }
    edges
}
