//! Seeded random SL(2) instances: products of unit-triangular elementaries
//! with polynomial data and diagonal factors nonvanishing on the closed
//! domain, optionally composed so the lower-left entry picks up prescribed
//! simple interior zeros. Everything is drawn from a counter-mode stream
//! cipher, so a (seed, domain, plan) triple always reproduces bit-identical
//! output.

use std::sync::Arc;

use num_complex::Complex64 as C;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::consts;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::funcrep::{zeros_in_domain, Polynomial, RationalFn};
use crate::mat2::MatFn;

/// What the lower-left entry's interior zero set should look like.
#[derive(Debug, Clone)]
pub enum ZeroPlan {
    /// No constraint on the zeros of the lower-left entry.
    None,
    /// Force exactly this many simple interior zeros at generator-chosen
    /// points.
    Count(usize),
    /// Force simple zeros at exactly these interior points.
    At(Vec<C>),
}

const MAX_ATTEMPTS: usize = 64;
/// Forced zeros keep this fraction of the outer radius clear of the boundary
/// and the holes, so the working disks around them have room.
const POINT_MARGIN: f64 = 0.18;
const POINT_SEPARATION: f64 = 0.22;

fn rand_c(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn rand_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Polynomial {
    let deg = rng.gen_range(0..=max_deg);
    Polynomial::new((0..=deg).map(|_| rand_c(rng)).collect())
}

/// A polynomial nonvanishing on the closed domain: a constant times linear
/// factors rooted either well outside the outer circle or inside a hole.
fn rand_invertible_poly(rng: &mut ChaCha8Rng, d: &Domain) -> Polynomial {
    let n_roots = rng.gen_range(0..=2);
    let mut roots = Vec::with_capacity(n_roots);
    for _ in 0..n_roots {
        let dir = C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let root = if !d.holes.is_empty() && rng.gen_bool(0.5) {
            let hole = d.holes[rng.gen_range(0..d.holes.len())];
            hole.center + dir * (hole.radius * rng.gen_range(0.0..0.5))
        } else {
            d.outer.center + dir * (d.outer.radius * rng.gen_range(1.3..2.5))
        };
        roots.push(root);
    }
    let lead = C::from_polar(rng.gen_range(0.6..1.6), rng.gen_range(0.0..std::f64::consts::TAU));
    Polynomial::from_roots(&roots).scalar_mul(lead)
}

fn elementary(rng: &mut ChaCha8Rng, d: &Arc<Domain>) -> Result<MatFn> {
    let one = RationalFn::one;
    let zero = RationalFn::zero;
    match rng.gen_range(0..3u8) {
        0 => {
            let p = RationalFn::from_poly(rand_poly(rng, 3));
            MatFn::from_rational(d.clone(), [[one(), p], [zero(), one()]])
        }
        1 => {
            let q = RationalFn::from_poly(rand_poly(rng, 3));
            MatFn::from_rational(d.clone(), [[one(), zero()], [q, one()]])
        }
        _ => {
            let u = RationalFn::from_poly(rand_invertible_poly(rng, d));
            let ui = u.inv()?;
            MatFn::from_rational(d.clone(), [[u, zero()], [zero(), ui]])
        }
    }
}

fn lagrange(points: &[C], values: &[C]) -> Polynomial {
    let mut q = Polynomial::zero();
    for (i, (&xi, &yi)) in points.iter().zip(values).enumerate() {
        let others: Vec<C> =
            points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let mut denom = C::new(1.0, 0.0);
        for &xj in &others {
            denom *= xi - xj;
        }
        q = q.add(&Polynomial::from_roots(&others).scalar_mul(yi / denom));
    }
    q
}

fn pick_points(rng: &mut ChaCha8Rng, d: &Domain, k: usize) -> Option<Vec<C>> {
    let margin = POINT_MARGIN * d.outer.radius;
    let sep = POINT_SEPARATION * d.outer.radius;
    let mut pts: Vec<C> = Vec::with_capacity(k);
    let mut draws = 0;
    while pts.len() < k {
        draws += 1;
        if draws > 400 {
            return None;
        }
        let rho = d.outer.radius * rng.gen::<f64>().sqrt();
        let z = d.outer.center + C::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU));
        if d.signed_membership(z) < margin || pts.iter().any(|&p| (p - z).norm() < sep) {
            continue;
        }
        pts.push(z);
    }
    Some(pts)
}

/// Compose with a lower elementary so the lower-left entry vanishes at the
/// prescribed points: (M L_q) has lower-left c + d q, and q interpolates
/// -c/d there.
fn force_zeros(m: &MatFn, pts: &[C]) -> Option<MatFn> {
    let e = m.rational_entries().expect("rational instance");
    let mut values = Vec::with_capacity(pts.len());
    for &xi in pts {
        let dv = e[1][1].eval_unchecked(xi);
        let cv = e[1][0].eval_unchecked(xi);
        if dv.norm() < 1e-6 * (1.0 + cv.norm()) {
            return None;
        }
        values.push(-cv / dv);
    }
    let q = RationalFn::from_poly(lagrange(pts, &values));
    let one = RationalFn::one;
    let zero = RationalFn::zero;
    let t = MatFn::from_rational(m.domain.clone(), [[one(), zero()], [q, one()]]).ok()?;
    m.mul_rational(&t).ok()
}

/// The lower-left entry has exactly the prescribed zero set: one simple zero
/// within 1e-8 of each point, nothing else in the interior, and no zeros in
/// the boundary zone.
fn zeros_match(m: &MatFn, pts: &[C], d: &Domain) -> bool {
    let cf = &m.rational_entries().expect("rational instance")[1][0];
    let Ok(zs) = zeros_in_domain(cf, d) else { return false };
    if zs.zeros.len() != pts.len() || zs.total_multiplicity() != pts.len() {
        return false;
    }
    pts.iter().all(|&p| zs.zeros.iter().any(|&(z, mult)| mult == 1 && (z - p).norm() < 1e-8))
}

/// Deterministic seeded instance: a product of 2-4 elementaries, degrees
/// <= 3, unimodular by construction (and re-verified), with the zero plan
/// realized exactly or the draw retried on a fresh stretch of the stream.
pub fn random_instance(seed: u64, d: &Arc<Domain>, plan: &ZeroPlan) -> Result<MatFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let n = rng.gen_range(2..=4);
        let mut m = elementary(&mut rng, d)?;
        for _ in 1..n {
            m = m.mul_rational(&elementary(&mut rng, d)?)?;
        }
        let m = match plan {
            ZeroPlan::None => m,
            ZeroPlan::Count(0) => m,
            ZeroPlan::Count(k) => {
                let Some(pts) = pick_points(&mut rng, d, *k) else { continue };
                let Some(forced) = force_zeros(&m, &pts) else { continue };
                if !zeros_match(&forced, &pts, d) {
                    continue;
                }
                forced
            }
            ZeroPlan::At(pts) if pts.is_empty() => m,
            ZeroPlan::At(pts) => {
                let Some(forced) = force_zeros(&m, pts) else { continue };
                if !zeros_match(&forced, pts, d) {
                    continue;
                }
                forced
            }
        };
        if m.unimodular_defect().expect("rational instance") > consts::UNIMODULAR_TOL {
            continue;
        }
        return Ok(m);
    }
    Err(Error::InvalidInput(format!(
        "no instance for seed {seed} realizes the zero plan after {MAX_ATTEMPTS} attempts"
    )))
}
