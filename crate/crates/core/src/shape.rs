//! Numerical certification of the order `p` and the convexity direction.
//!
//! `g ∈ D^p` is tested by watching `|Δ^p g(n)|` shrink along
//! `n ∈ {n_max/4, n_max/2, n_max}`. Eventual `p`-convexity is tested by the
//! sign of order-`(p+1)` divided differences on random node sets inside a
//! window that is pushed outward until it certifies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfunc::{GFunction, Shape};
use crate::numerics::{divided_difference_values, forward_diff};

/// Largest order tried by [`dp_degree`].
pub const MAX_P: usize = 6;

#[derive(Debug, Clone)]
pub struct ShapeConfig {
    pub n_max: usize,
    pub eta: f64,
    pub samples: usize,
    pub eps_rel: f64,
    pub window_width: f64,
    pub seed: u64,
}

impl Default for ShapeConfig {
    fn default() -> Self {
        Self {
            n_max: 16_384,
            eta: 1e-3,
            samples: 200,
            eps_rel: 1e-10,
            window_width: 64.0,
            seed: 0,
        }
    }
}

/// Outcome of a divided-difference sign test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    Neither,
}

impl Convexity {
    pub fn shape(self) -> Option<Shape> {
        match self {
            Convexity::Convex => Some(Shape::Convex),
            Convexity::Concave => Some(Shape::Concave),
            Convexity::Neither => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeReport {
    pub p: usize,
    /// Largest `|Δ^p g(n)|` over the sampled tail.
    pub dp_margin: f64,
    pub shape: Shape,
    pub window: (f64, f64),
    /// Whether `Δ^{p-1} g(n)` failed to decay (always true for `p = 0`).
    pub minimal_p: bool,
}

/// Decay test for `Δ^p g(n)`; returns `(decays, margin)`.
pub fn dp_decays<F>(g: F, p: usize, n_max: usize, eta: f64) -> Result<(bool, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let ns = [n_max / 4, n_max / 2, n_max].map(|n| n as f64);
    let mut v = [0.0; 3];
    let mut noise: f64 = 0.0;
    for (slot, &n) in v.iter_mut().zip(&ns) {
        *slot = forward_diff(&g, n, p)?.abs();
        for i in 0..=p {
            noise = noise.max(g(n + i as f64)?.abs());
        }
    }
    let margin = v.iter().copied().fold(0.0, f64::max);
    // differences lost in roundoff count as zero
    let noise = 64.0 * f64::EPSILON * 2f64.powi(p as i32) * noise;
    if margin <= noise {
        return Ok((true, margin));
    }
    let decreasing = v[0] > v[1] && v[1] > v[2];
    Ok((decreasing && v[2] < eta && v[2] / v[1] < 1.0, margin))
}

/// Smallest `p <= 6` for which `Δ^p g(n)` visibly decays to zero.
pub fn dp_degree<F>(g: F, n_max: usize) -> Result<usize>
where
    F: Fn(f64) -> Result<f64>,
{
    dp_degree_with(g, n_max, ShapeConfig::default().eta)
}

pub fn dp_degree_with<F>(g: F, n_max: usize, eta: f64) -> Result<usize>
where
    F: Fn(f64) -> Result<f64>,
{
    if n_max < 64 {
        return Err(Error::OutOfRange(format!("n_max = {n_max} must be at least 64")));
    }
    for p in 0..=MAX_P {
        if dp_decays(&g, p, n_max, eta)?.0 {
            return Ok(p);
        }
    }
    Err(Error::Unclassifiable(format!(
        "no p <= {MAX_P} with Δ^p g(n) -> 0"
    )))
}

/// Sign test of order-`(p+1)` divided differences on random node sets in
/// `window`; ties (all differences negligible) resolve to convex.
pub fn kp_check<F, R>(g: F, p: usize, window: (f64, f64), rng: &mut R, cfg: &ShapeConfig) -> Result<Convexity>
where
    F: Fn(f64) -> Result<f64>,
    R: Rng,
{
    let (lo, hi) = window;
    let k = p + 2;
    if !(lo > 0.0 && hi - lo >= k as f64) {
        return Err(Error::OutOfRange(format!(
            "window [{lo}, {hi}] too narrow for order {p}"
        )));
    }
    let min_gap = (hi - lo) / (10 * k) as f64;
    let mut lowest = f64::INFINITY;
    let mut highest = f64::NEG_INFINITY;
    let mut scale: f64 = 0.0;
    let mut nodes = vec![0.0; k];
    for _ in 0..cfg.samples {
        loop {
            for t in nodes.iter_mut() {
                *t = rng.random_range(lo..=hi);
            }
            nodes.sort_by(f64::total_cmp);
            if nodes.windows(2).all(|w| w[1] - w[0] >= min_gap) {
                break;
            }
        }
        let values = nodes.iter().map(|&t| g(t)).collect::<Result<Vec<_>>>()?;
        let dd = divided_difference_values(&nodes, &values)?;
        lowest = lowest.min(dd);
        highest = highest.max(dd);
        // size of the terms the divided difference is assembled from
        for (i, &xi) in nodes.iter().enumerate() {
            let denom: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| (xi - xj).abs())
                .product();
            scale = scale.max(values[i].abs() / denom);
        }
    }
    let eps = cfg.eps_rel * scale;
    Ok(if lowest >= -eps {
        Convexity::Convex
    } else if highest <= eps {
        Convexity::Concave
    } else {
        Convexity::Neither
    })
}

fn windows(width: f64) -> impl Iterator<Item = (f64, f64)> {
    (0..=10).map(move |i| {
        let x0 = (1u32 << i) as f64;
        (x0.max(1.0), x0 + width)
    })
}

/// First window `[x0, x0 + width]`, `x0 ∈ {1, 2, 4, ..., 1024}`, on which
/// `g` is certified `order`-convex or `order`-concave.
pub fn certify_window<F>(g: F, order: usize, cfg: &ShapeConfig) -> Result<Option<Certificate>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for w in windows(cfg.window_width) {
        if let Some(shape) = kp_check(&g, order, w, &mut rng, cfg)?.shape() {
            return Ok(Some((w, shape)));
        }
    }
    Ok(None)
}

pub fn classify(g: &GFunction) -> Result<ShapeReport> {
    classify_with(g, &ShapeConfig::default())
}

pub fn classify_with(g: &GFunction, cfg: &ShapeConfig) -> Result<ShapeReport> {
    let f = |t: f64| g.eval(t);
    let p = dp_degree_with(f, cfg.n_max, cfg.eta)?;
    let (_, dp_margin) = dp_decays(f, p, cfg.n_max, cfg.eta)?;
    let minimal_p = p == 0 || !dp_decays(f, p - 1, cfg.n_max, cfg.eta)?.0;
    let (window, shape) = certify_window(f, p, cfg)?.ok_or_else(|| {
        Error::Unclassifiable(format!("{}: no window certifies order-{p} convexity", g.name()))
    })?;
    Ok(ShapeReport {
        p,
        dp_margin,
        shape,
        window,
        minimal_p,
    })
}

/// A certified window and the direction found on it.
pub type Certificate = ((f64, f64), Shape);

/// For each order in `orders`, the first window certifying a direction, if any.
pub fn convexity_profile(
    g: &GFunction,
    orders: impl IntoIterator<Item = usize>,
    cfg: &ShapeConfig,
) -> Result<Vec<(usize, Option<Certificate>)>> {
    orders
        .into_iter()
        .map(|k| Ok((k, certify_window(|t| g.eval(t), k, cfg)?)))
        .collect()
}
