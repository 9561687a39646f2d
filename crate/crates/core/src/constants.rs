//! Asymptotic constant `σ[g] = ∫_1^2 Σg` and generalized Euler constant
//! `γ[g] = σ[g] - Σ_{j=1}^p G_j Δ^{j-1} g(1)`.

use std::cell::Cell;

use crate::catalog::{LN_2PI, LN_GLAISHER};
use crate::error::{Error, Result};
use crate::gfunc::{GFunction, Shape};
use crate::numerics::{
    forward_diffs_from_values, gregory_coeff, integrate, CompensatedSum, QuadResult, Richardson,
    MAX_DIFF_ORDER,
};
use crate::shape;
use crate::sigma::{self, LIMIT_TOL};

/// Quadrature tolerance used when `σ[g]` is filled on demand.
pub const SIGMA_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsReport {
    pub p: usize,
    pub shape: Shape,
    pub sigma: f64,
    pub gamma_gen: f64,
    pub err: f64,
    pub method: String,
}

/// `∫_1^2 Σg` by adaptive quadrature of the Eulerian route, not cached.
///
/// The error estimate includes the worst extrapolation error seen at any node.
pub fn sigma_quadrature(g: &GFunction, tol: f64) -> Result<QuadResult> {
    let worst = Cell::new(0.0f64);
    let p = g.p();
    let mut q = integrate(
        |t| {
            let r = sigma::sigma_eulerian(g, p, t, LIMIT_TOL)?;
            worst.set(worst.get().max(r.err_estimate));
            Ok(r.value)
        },
        1.0,
        2.0,
        tol,
    )?;
    q.err_estimate += worst.get();
    if q.err_estimate > 1e3 * tol.max(1e-12) {
        return Err(Error::NoConvergence {
            best: q.value,
            err_estimate: q.err_estimate,
        });
    }
    Ok(q)
}

/// `σ[g]`, computed once per function and cached in its slot.
pub fn asymptotic_constant(g: &GFunction, tol: f64) -> Result<f64> {
    if let Some(s) = g.cached_sigma() {
        return Ok(s);
    }
    let q = sigma_quadrature(g, tol)?;
    Ok(g.set_sigma(q.value))
}

/// `Σ_{j=1}^p G_j Δ^{j-1} g(x)`.
pub fn gregory_head(g: &GFunction, p: usize, x: f64) -> Result<f64> {
    if p == 0 {
        return Ok(0.0);
    }
    let values = (0..p).map(|i| g.eval(x + i as f64)).collect::<Result<Vec<_>>>()?;
    let d = forward_diffs_from_values(&values);
    Ok((1..=p).map(|j| gregory_coeff(j) * d[j - 1]).sum())
}

/// `γ[g]`, refusing when `p` is not minimal (`Δ^{p-1} g(n)` still decays).
pub fn euler_constant_gen(g: &GFunction) -> Result<f64> {
    let p = g.p();
    if p > 0 {
        let cfg = shape::ShapeConfig::default();
        if shape::dp_decays(|t| g.eval(t), p - 1, cfg.n_max, cfg.eta)?.0 {
            return Err(Error::Unclassifiable(format!(
                "{}: p = {p} is not minimal, the generalized Euler constant is undefined",
                g.name()
            )));
        }
    }
    euler_constant_gen_unchecked(g)
}

/// `γ[g]` without the minimality check.
pub fn euler_constant_gen_unchecked(g: &GFunction) -> Result<f64> {
    let sigma = asymptotic_constant(g, SIGMA_TOL)?;
    Ok(sigma - gregory_head(g, g.p(), 1.0)?)
}

pub fn constants_report(g: &GFunction) -> Result<ConstantsReport> {
    let (sigma, err, method) = match g.cached_sigma() {
        Some(s) => (s, 0.0, "cached"),
        None => {
            let q = sigma_quadrature(g, SIGMA_TOL)?;
            (g.set_sigma(q.value), q.err_estimate, "eulerian-quadrature")
        }
    };
    let gamma_gen = sigma - gregory_head(g, g.p(), 1.0)?;
    Ok(ConstantsReport {
        p: g.p(),
        shape: g.shape(),
        sigma,
        gamma_gen,
        err,
        method: method.to_string(),
    })
}

/// Partial sums of a series of per-interval terms `term(k)`, `k = start..`,
/// sampled at `start + m` terms for `m = m0 · 2^i` and extrapolated in `1/m`.
pub(crate) fn extrapolated_series<F>(start: usize, m0: usize, levels: usize, term: F) -> Result<(f64, Vec<(usize, f64)>)>
where
    F: Fn(usize) -> Result<f64>,
{
    let mut sum = CompensatedSum::new();
    let mut r = Richardson::new();
    let mut partials = Vec::with_capacity(levels);
    let mut k = start;
    let mut est = 0.0;
    for i in 0..levels {
        let m = m0 << i;
        while k < start + m {
            sum.add(term(k)?);
            k += 1;
        }
        partials.push((m, sum.value()));
        est = r.push(sum.value());
    }
    Ok((est, partials))
}

/// `γ[g] = ∫_1^∞ (P̄_p[g] - g)`, where `P̄_p[g]` interpolates `g` at
/// `k, ..., k+p` on each `[k, k+1]`. Integrates over `[1, n]` interval by
/// interval and extrapolates the tail.
pub fn gamma_piecewise_interp(g: &GFunction, p: usize, n: usize) -> Result<f64> {
    if n < 10 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 10")));
    }
    if p > MAX_DIFF_ORDER {
        return Err(Error::OutOfRange(format!("p = {p} exceeds {MAX_DIFF_ORDER}")));
    }
    let term = |k: usize| -> Result<f64> {
        let k = k as f64;
        let values = (0..=p).map(|i| g.eval(k + i as f64)).collect::<Result<Vec<_>>>()?;
        let d = forward_diffs_from_values(&values);
        let interp: f64 = (0..=p).map(|j| gregory_coeff(j) * d[j]).sum();
        let exact = integrate(|t| g.eval(t), k, k + 1.0, 1e-15 * (1.0 + values[0].abs()))?.value;
        Ok(interp - exact)
    };
    // samples at n/8, n/4, n/2, n - 1 intervals
    let levels = 4;
    let m0 = ((n - 1) >> (levels - 1)).max(1);
    let (est, _) = extrapolated_series(1, m0, levels, term)?;
    Ok(est)
}

fn bernoulli2(u: f64) -> f64 {
    u * u - u + 1.0 / 6.0
}

/// Unit-interval pieces `∫_0^1 B_2(u) / (c + u) du`.
///
/// For `c >= 4` the geometric series `Σ_j (-1)^j μ_j / c^{j+1}` in the
/// moments `μ_j = ∫_0^1 u^j B_2(u) du` is used; its first two terms vanish.
pub(crate) fn b2_piece(c: f64) -> Result<f64> {
    if c < 4.0 {
        return Ok(integrate(|u| Ok(bernoulli2(u) / (c + u)), 0.0, 1.0, 1e-15)?.value);
    }
    let inv = 1.0 / c;
    let mut pow = inv * inv * inv;
    let mut sum = 0.0;
    for j in 2..80 {
        let jf = j as f64;
        let mu = 1.0 / (jf + 3.0) - 1.0 / (jf + 2.0) + 1.0 / (6.0 * (jf + 1.0));
        let term = if j % 2 == 0 { mu * pow } else { -mu * pow };
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        pow *= inv;
    }
    Ok(sum)
}

/// Partial values `½ g(1) - ½ Σ_{k=1}^{m} ∫_k^{k+1} B_2({t})/t dt` for the
/// Stirling-core function, at `m = 8 · 2^i`, `i < levels`, and their
/// extrapolated limit `σ`.
pub fn sigma_integral_rep_psi2_partials(levels: usize) -> Result<(f64, Vec<(usize, f64)>)> {
    let half_g1 = 0.5 * (-1.0 + 0.5 * LN_2PI);
    let (est, partials) = extrapolated_series(1, 8, levels, |k| b2_piece(k as f64))?;
    Ok((
        half_g1 - 0.5 * est,
        partials.into_iter().map(|(m, s)| (m, half_g1 - 0.5 * s)).collect(),
    ))
}

/// `σ` of the Stirling-core function from its Bernoulli-polynomial integral.
pub fn sigma_integral_rep_psi2() -> Result<f64> {
    Ok(sigma_integral_rep_psi2_partials(10)?.0)
}

/// `S_n = Σ_{k=1}^{n} G_k Δ^{k-1} g(x)` for `n = 1..=n_max`, `n_max <= 12`.
pub fn fontana_partial(g: &GFunction, x: f64, n_max: usize) -> Result<Vec<f64>> {
    if n_max > MAX_DIFF_ORDER {
        return Err(Error::OutOfRange(format!("n = {n_max} exceeds {MAX_DIFF_ORDER}")));
    }
    let values = (0..n_max).map(|i| g.eval(x + i as f64)).collect::<Result<Vec<_>>>()?;
    let d = forward_diffs_from_values(&values);
    let mut acc = 0.0;
    Ok((1..=n_max)
        .map(|k| {
            acc += gregory_coeff(k) * d[k - 1];
            acc
        })
        .collect())
}

/// Euler's constant from `H_n - ln n`, extrapolated over `n = 16 · 2^i`.
pub fn euler_gamma_limit(levels: usize) -> f64 {
    let mut r = Richardson::new();
    let mut h = CompensatedSum::new();
    let mut next = 1usize;
    let mut est = f64::NAN;
    for i in 0..levels {
        let n = 16usize << i;
        while next <= n {
            h.add(1.0 / next as f64);
            next += 1;
        }
        est = r.push(h.value() - (n as f64).ln());
    }
    est
}

/// `ln A` recovered from `σ` of the Stirling-core function.
pub fn ln_glaisher_from_sigma(sigma_psi2g: f64) -> f64 {
    sigma_psi2g + 0.75 - 0.25 * LN_2PI
}

/// Closed-form `σ` of the Stirling-core function.
pub fn sigma_psi2g_closed() -> f64 {
    LN_GLAISHER + 0.25 * LN_2PI - 0.75
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, EULER_GAMMA, LN_2};
    use crate::expr::parse;

    #[test]
    fn sigma_of_catalog() {
        let ln = builtin("ln").unwrap().g;
        let s = sigma_quadrature(&ln, SIGMA_TOL).unwrap().value;
        assert!((s - (-1.0 + 0.5 * LN_2PI)).abs() < 1e-10);
        let psi = builtin("psi2g").unwrap().g;
        let s = sigma_quadrature(&psi, SIGMA_TOL).unwrap().value;
        assert!((s - sigma_psi2g_closed()).abs() < 1e-9);
        let zero = GFunction::new("zero", parse("0").unwrap(), 0, Shape::Convex);
        assert_eq!(asymptotic_constant(&zero, SIGMA_TOL).unwrap(), 0.0);
    }

    #[test]
    fn euler_constants() {
        let ln = builtin("ln").unwrap().g;
        let g = euler_constant_gen(&ln).unwrap();
        assert!((g - asymptotic_constant(&ln, SIGMA_TOL).unwrap()).abs() < 1e-15);
        assert!(g < 0.0);
        let psi = builtin("psi2g").unwrap().g;
        let g = euler_constant_gen(&psi).unwrap();
        assert!((g - (LN_GLAISHER + LN_2 / 6.0 - 1.0 / 3.0)).abs() < 1e-9);
        assert!(g > 0.0);
        let recip = builtin("recip").unwrap().g;
        assert!((euler_constant_gen(&recip).unwrap() - EULER_GAMMA).abs() < 1e-9);
        let padded = ln.clone().with_order(2, Shape::Concave);
        assert!(euler_constant_gen(&padded).is_err());
    }

    #[test]
    fn piecewise_interpolation_route() {
        let ln = builtin("ln").unwrap().g;
        let v = gamma_piecewise_interp(&ln, 1, 10_000).unwrap();
        assert!((v - (-0.0810614667953272)).abs() < 1e-5);
        let psi = builtin("psi2g").unwrap().g;
        let v = gamma_piecewise_interp(&psi, 2, 10_000).unwrap();
        assert!((v - 0.0309).abs() < 1e-4);
        let quad = GFunction::new("q", parse("3*x^2 - x + 2").unwrap(), 3, Shape::Convex);
        // interpolation is exact; what remains is roundoff in values of size 3e4
        assert!(gamma_piecewise_interp(&quad, 2, 100).unwrap().abs() < 1e-9);
        assert!(gamma_piecewise_interp(&quad, 2, 5).is_err());
    }

    #[test]
    fn integral_representation() {
        for c in [1.0, 3.9, 4.0, 7.5, 300.0] {
            let piece = b2_piece(c).unwrap();
            let direct = integrate(|u| Ok(bernoulli2(u) / (c + u)), 0.0, 1.0, 1e-15).unwrap().value;
            assert!((piece - direct).abs() < 1e-15 + 1e-12 * direct.abs(), "c = {c}");
        }
        let (v, partials) = sigma_integral_rep_psi2_partials(10).unwrap();
        assert!((v - sigma_psi2g_closed()).abs() < 1e-9);
        // the pieces share one sign, so the partial values approach monotonically
        let errs: Vec<f64> = partials.iter().map(|(_, s)| s - v).collect();
        assert!(errs.iter().all(|e| *e > 0.0) || errs.iter().all(|e| *e < 0.0));
        assert!(errs.windows(2).all(|w| w[1].abs() < w[0].abs()));
    }

    #[test]
    fn fontana_sums() {
        let zero = GFunction::new("zero", parse("0").unwrap(), 0, Shape::Convex);
        assert!(fontana_partial(&zero, 1.0, 10).unwrap().iter().all(|v| *v == 0.0));
        let ln = builtin("ln").unwrap().g;
        let s = fontana_partial(&ln, 1.0, 10).unwrap();
        let sigma = -1.0 + 0.5 * LN_2PI;
        assert!((s[9] - sigma).abs() < (s[4] - sigma).abs());
        assert!(fontana_partial(&ln, 1.0, 13).is_err());
    }

    #[test]
    fn constant_derivations() {
        assert!((euler_gamma_limit(12) - EULER_GAMMA).abs() < 1e-12);
        assert!((ln_glaisher_from_sigma(sigma_psi2g_closed()) - LN_GLAISHER).abs() < 1e-16);
    }
}
