//! Evaluation of `Σg` and its derivatives.
//!
//! Three independent routes:
//!
//! * **direct**: the defining limit of `f^p_n[g](x)` as `n → ∞`;
//! * **eulerian**: the series form, accumulated term by term;
//! * **gregory**: shift `x` to `y = x + N` and apply the truncated Gregory
//!   series there, which needs the asymptotic constant `σ[g]`.
//!
//! Both limit routes first move `x` into `[1, 2)` with the exact recurrence
//! `Σg(x+1) = Σg(x) + g(x)`, sample at `n = 16 · 2^k` and extrapolate in `1/n`.

use std::fmt;

use crate::constants;
use crate::error::{Error, Result};
use crate::gfunc::GFunction;
use crate::numerics::{
    extrapolate, forward_diffs_from_values, gen_binomial, gen_binomial_deriv, gregory_coeff,
    CompensatedSum, MAX_DIFF_ORDER,
};

/// Default Gregory truncation order.
pub const GREGORY_ORDER: usize = 8;
/// Default lower bound for the Gregory anchor `y = x + N`.
pub const GREGORY_ANCHOR: f64 = 40.0;
/// Default tolerance of the limit strategies.
pub const LIMIT_TOL: f64 = 1e-12;
/// Largest derivative order accepted by [`sigma_deriv`].
pub const MAX_DERIV: usize = 4;

const N0: usize = 16;
// n = 16 · 2^20 = 2^24 at the last sample
const MAX_SAMPLES: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Direct,
    Eulerian,
    Gregory,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Direct => "direct",
            Strategy::Eulerian => "eulerian",
            Strategy::Gregory => "gregory",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaResult {
    pub value: f64,
    pub err_estimate: f64,
    pub strategy: Strategy,
    pub terms_used: usize,
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { op: "sigma", arg: x })
    }
}

/// `f^p_n[g](x) = Σ_{k=1}^{n-1} g(k) - Σ_{k=0}^{n-1} g(x+k) + Σ_{j=1}^p C(x,j) Δ^{j-1} g(n)`.
pub fn f_pn(g: &GFunction, p: usize, n: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let mut s = CompensatedSum::new();
    for k in 1..n {
        s.add(g.eval(k as f64)? - g.eval(x + k as f64)?);
    }
    s.add(-g.eval(x)?);
    s.add(newton_head(|t| g.eval(t), p, n as f64, x)?);
    Ok(s.value())
}

/// `Σ_{j=1}^p C(x,j) Δ^{j-1} f(n)`.
fn newton_head<F: Fn(f64) -> Result<f64>>(f: F, p: usize, n: f64, x: f64) -> Result<f64> {
    if p == 0 {
        return Ok(0.0);
    }
    let values = (0..p).map(|i| f(n + i as f64)).collect::<Result<Vec<_>>>()?;
    let d = forward_diffs_from_values(&values);
    Ok((1..=p).map(|j| gen_binomial(x, j) * d[j - 1]).sum())
}

/// Move `x` into `[1, 2)`: `Σh(x) = Σh(base) + correction` for any `h`
/// satisfying the same recurrence.
fn reduce<F: Fn(f64) -> Result<f64>>(h: F, x: f64) -> Result<(f64, f64)> {
    if x < 1.0 {
        return Ok((x + 1.0, -h(x)?));
    }
    let k = x.floor() as usize - 1;
    if k == 0 {
        return Ok((x, 0.0));
    }
    let base = x - k as f64;
    let mut s = CompensatedSum::new();
    for i in 0..k {
        s.add(h(base + i as f64)?);
    }
    Ok((base, s.value()))
}

/// `Σg(x)` through the extrapolated limit of `f^p_n[g](x)`.
///
/// Never fails for lack of convergence: the best estimate is returned and a
/// shortfall shows up as `err_estimate > tol`.
pub fn sigma_direct(g: &GFunction, p: usize, x: f64, tol: f64) -> Result<SigmaResult> {
    check_x(x)?;
    let f = |t: f64| g.eval(t);
    let (b, correction) = reduce(f, x)?;
    let mut sum = CompensatedSum::new();
    let mut next = 1;
    let gb = f(b)?;
    let mut last_n = 0;
    let out = extrapolate(
        |k| {
            let n = N0 << k;
            while next < n {
                sum.add(f(next as f64)? - f(b + next as f64)?);
                next += 1;
            }
            last_n = n;
            Ok(sum.value() - gb + newton_head(f, p, n as f64, b)?)
        },
        tol,
        MAX_SAMPLES,
    )?;
    Ok(SigmaResult {
        value: out.value + correction,
        err_estimate: out.err,
        strategy: Strategy::Direct,
        terms_used: last_n,
    })
}

/// Partial sums of the Eulerian series for `D^r Σg` at `b`, sampled at
/// `M = 16 · 2^k` terms and extrapolated.
fn eulerian_at(g: &GFunction, p: usize, b: f64, r: usize, tol: f64) -> Result<(f64, f64, usize)> {
    if p > MAX_DIFF_ORDER {
        return Err(Error::OutOfRange(format!("p = {p} exceeds {MAX_DIFF_ORDER}")));
    }
    let f = |t: f64| g.eval(t);
    let dr = |t: f64| g.derivative(t, r);
    let binom: Vec<f64> = (0..=p).map(|j| gen_binomial_deriv(b, j, r)).collect();
    let head_values = (1..=p).map(|i| f(i as f64)).collect::<Result<Vec<_>>>()?;
    let head_diffs = forward_diffs_from_values(&head_values);
    let mut head = -dr(b)?;
    for j in 1..=p {
        head += binom[j] * head_diffs[j - 1];
    }
    // sliding window g(n), ..., g(n+p)
    let mut window = (1..=p + 1).map(|i| f(i as f64)).collect::<Result<Vec<_>>>()?;
    let mut diffs = vec![0.0; p + 1];
    let mut sum = CompensatedSum::new();
    let mut next = 1usize;
    let mut last_m = 0;
    let out = extrapolate(
        |k| {
            let m = N0 << k;
            while next < m {
                diffs.copy_from_slice(&window);
                for level in 1..=p {
                    for i in (level..=p).rev() {
                        diffs[i] -= diffs[i - 1];
                    }
                }
                // diffs[j] now holds Δ^j g(next) at index j
                let mut interp = 0.0;
                for j in 0..=p {
                    interp += binom[j] * diffs[j];
                }
                sum.add(dr(b + next as f64)? - interp);
                window.rotate_left(1);
                window[p] = f((next + p + 1) as f64)?;
                next += 1;
            }
            last_m = m;
            Ok(head - sum.value())
        },
        tol,
        MAX_SAMPLES,
    )?;
    Ok((out.value, out.err, last_m))
}

/// `Σg(x)` through the Eulerian series
/// `-g(x) + Σ_{j=1}^p C(x,j) Δ^{j-1} g(1) - Σ_{n>=1} (g(x+n) - Σ_{j=0}^p C(x,j) Δ^j g(n))`.
pub fn sigma_eulerian(g: &GFunction, p: usize, x: f64, tol: f64) -> Result<SigmaResult> {
    check_x(x)?;
    let (b, correction) = reduce(|t| g.eval(t), x)?;
    let (value, err, terms) = eulerian_at(g, p, b, 0, tol)?;
    Ok(SigmaResult {
        value: value + correction,
        err_estimate: err,
        strategy: Strategy::Eulerian,
        terms_used: terms,
    })
}

/// Smallest shift `N` with `x + N >= anchor`.
pub fn default_shift(x: f64, anchor: f64) -> usize {
    if x >= anchor {
        0
    } else {
        (anchor - x).ceil() as usize
    }
}

/// Gregory head values `Δ^{n-1} h(y)` for `n = 1..=order`.
fn gregory_diffs<F: Fn(f64) -> Result<f64>>(h: F, y: f64, order: usize) -> Result<Vec<f64>> {
    let values = (0..order).map(|i| h(y + i as f64)).collect::<Result<Vec<_>>>()?;
    Ok(forward_diffs_from_values(&values))
}

fn check_order(p: usize, order: usize) -> Result<()> {
    if order == 0 || order > MAX_DIFF_ORDER || order < p {
        return Err(Error::OutOfRange(format!(
            "Gregory order {order} must lie in {}..={MAX_DIFF_ORDER}",
            p.max(1)
        )));
    }
    Ok(())
}

/// `Σg(x) = σ[g] + ∫_1^y g - Σ_{n=1}^J G_n Δ^{n-1} g(y) - Σ_{k<N} g(x+k)` with
/// `y = x + N`. `shift = None` picks the smallest `N` with `y >= 40`.
pub fn sigma_gregory(g: &GFunction, p: usize, x: f64, shift: Option<usize>, order: usize) -> Result<SigmaResult> {
    check_x(x)?;
    check_order(p, order)?;
    let sigma = g
        .cached_sigma()
        .ok_or_else(|| Error::MissingSigma(g.name().to_string()))?;
    let n = shift.unwrap_or_else(|| default_shift(x, GREGORY_ANCHOR));
    let y = x + n as f64;
    let d = gregory_diffs(|t| g.eval(t), y, order)?;
    let mut s = CompensatedSum::new();
    s.add(sigma);
    s.add(g.integral(1.0, y)?);
    for (j, dj) in d.iter().enumerate() {
        s.add(-gregory_coeff(j + 1) * dj);
    }
    for k in 0..n {
        s.add(-g.eval(x + k as f64)?);
    }
    Ok(SigmaResult {
        value: s.value(),
        err_estimate: (gregory_coeff(order) * d[order - 1]).abs(),
        strategy: Strategy::Gregory,
        terms_used: n + order,
    })
}

/// `Σg(x)` by the fastest available route: Gregory (computing and caching
/// `σ[g]` on first use), then Eulerian, then direct.
pub fn sigma(g: &GFunction, x: f64) -> Result<SigmaResult> {
    sigma_with(g, x, LIMIT_TOL)
}

pub fn sigma_with(g: &GFunction, x: f64, tol: f64) -> Result<SigmaResult> {
    check_x(x)?;
    let p = g.p();
    let gregory = constants::asymptotic_constant(g, constants::SIGMA_TOL)
        .and_then(|_| sigma_gregory(g, p, x, None, GREGORY_ORDER.max(p)));
    let first_err = match gregory {
        Ok(r) => return Ok(r),
        Err(e) => e,
    };
    if let Ok(r) = sigma_eulerian(g, p, x, tol) {
        return Ok(r);
    }
    sigma_direct(g, p, x, tol).map_err(|_| first_err)
}

/// `D^r Σg(x)` for `r <= 4`; `r = 0` is [`sigma`].
///
/// Differentiates the Gregory representation termwise (the constant `σ[g]`
/// drops out), falling back to the differentiated Eulerian series.
pub fn sigma_deriv(g: &GFunction, p: usize, x: f64, r: usize) -> Result<SigmaResult> {
    check_x(x)?;
    if r == 0 {
        return sigma(g, x);
    }
    if r > MAX_DERIV {
        return Err(Error::OutOfRange(format!("derivative order {r} exceeds {MAX_DERIV}")));
    }
    sigma_deriv_gregory(g, p, x, r, None, GREGORY_ORDER.max(p))
        .or_else(|_| sigma_deriv_eulerian(g, p, x, r, LIMIT_TOL))
}

pub fn sigma_deriv_gregory(
    g: &GFunction,
    p: usize,
    x: f64,
    r: usize,
    shift: Option<usize>,
    order: usize,
) -> Result<SigmaResult> {
    check_x(x)?;
    check_order(p, order)?;
    if r == 0 || r > MAX_DERIV {
        return Err(Error::OutOfRange(format!("derivative order {r} outside 1..={MAX_DERIV}")));
    }
    let n = shift.unwrap_or_else(|| default_shift(x, GREGORY_ANCHOR));
    let y = x + n as f64;
    let dr = |t: f64| g.derivative(t, r);
    let d = gregory_diffs(dr, y, order)?;
    let mut s = CompensatedSum::new();
    s.add(g.derivative(y, r - 1)?);
    for (j, dj) in d.iter().enumerate() {
        s.add(-gregory_coeff(j + 1) * dj);
    }
    for k in 0..n {
        s.add(-dr(x + k as f64)?);
    }
    Ok(SigmaResult {
        value: s.value(),
        err_estimate: (gregory_coeff(order) * d[order - 1]).abs(),
        strategy: Strategy::Gregory,
        terms_used: n + order,
    })
}

pub fn sigma_deriv_eulerian(g: &GFunction, p: usize, x: f64, r: usize, tol: f64) -> Result<SigmaResult> {
    check_x(x)?;
    if r > MAX_DERIV {
        return Err(Error::OutOfRange(format!("derivative order {r} exceeds {MAX_DERIV}")));
    }
    let (b, correction) = reduce(|t| g.derivative(t, r), x)?;
    let (value, err, terms) = eulerian_at(g, p, b, r, tol)?;
    Ok(SigmaResult {
        value: value + correction,
        err_estimate: err,
        strategy: Strategy::Eulerian,
        terms_used: terms,
    })
}
