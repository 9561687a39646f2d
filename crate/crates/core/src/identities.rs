//! Residuals of functional identities and inequality chains.
//!
//! The generic identities (Raabe, multiplication) take any [`GFunction`]; the
//! rest are specific to `ψ_{-2} = ∫_0^x ln Γ`, evaluated through the engine as
//! `Σg + ½ ln 2π` with `g(x) = x ln x - x + ½ ln 2π`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::catalog::{builtin, DIGAMMA_ZERO, EULER_GAMMA, LN_2, LN_2PI, LN_GLAISHER, LN_PI};
use crate::constants::{asymptotic_constant, SIGMA_TOL};
use crate::error::{Error, Result};
use crate::gfunc::GFunction;
use crate::numerics::{
    gen_binomial, integrate, integrate_singular, zeta_int, zeta_int_minus_one, CompensatedSum,
    Endpoint, Richardson,
};
use crate::sigma::sigma;

/// Both sides of an identity at one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub identity: String,
    pub points: Vec<Vec<f64>>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_abs: f64,
}

impl ResidualReport {
    pub fn new(identity: impl Into<String>, rows: Vec<(Vec<f64>, Sides)>) -> Self {
        let mut report = ResidualReport {
            identity: identity.into(),
            points: Vec::with_capacity(rows.len()),
            lhs: Vec::with_capacity(rows.len()),
            rhs: Vec::with_capacity(rows.len()),
            residuals: Vec::with_capacity(rows.len()),
            max_abs: 0.0,
        };
        for (point, s) in rows {
            let r = s.residual();
            report.max_abs = report.max_abs.max(r.abs());
            report.points.push(point);
            report.lhs.push(s.lhs);
            report.rhs.push(s.rhs);
            report.residuals.push(r);
        }
        report
    }
}

fn psi2g() -> Result<GFunction> {
    Ok(builtin("psi2g")?.g)
}

/// Engine `ψ_{-2}(x)`.
pub fn psi2(x: f64) -> Result<f64> {
    Ok(sigma(&psi2g()?, x)?.value + 0.5 * LN_2PI)
}

/// Engine `ln Γ(x) = Σ ln (x)`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    Ok(sigma(&builtin("ln")?.g, x)?.value)
}

fn g_psi2(x: f64) -> f64 {
    x * x.ln() - x + 0.5 * LN_2PI
}

fn dg_psi2(x: f64) -> f64 {
    g_psi2(x + 1.0) - g_psi2(x)
}

fn check_positive(x: f64, op: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { op, arg: x })
    }
}

/// `∫_x^{x+1} Σg` against `σ[g] + ∫_1^x g`.
pub fn raabe_sides(g: &GFunction, x: f64) -> Result<Sides> {
    check_positive(x, "raabe")?;
    let lhs = integrate(|t| Ok(sigma(g, t)?.value), x, x + 1.0, 1e-11 * (1.0 + x))?.value;
    let rhs = asymptotic_constant(g, SIGMA_TOL)? + g.integral(1.0, x)?;
    Ok(Sides { lhs, rhs })
}

pub fn raabe_residual(g: &GFunction, x: f64) -> Result<f64> {
    Ok(raabe_sides(g, x)?.residual())
}

/// `∫_x^{x+1} ψ_{-2} = ½x² ln x - ¾x² + ¼(2x+1) ln 2π + ln A`.
pub fn raabe_closed_psi2(x: f64) -> f64 {
    0.5 * x * x * x.ln() - 0.75 * x * x + 0.25 * (2.0 * x + 1.0) * LN_2PI + LN_GLAISHER
}

/// `g_m(x) = g(x/m)`, memoized so its asymptotic constant is computed once.
fn rescaled(g: &GFunction, m: u32) -> GFunction {
    static CACHE: OnceLock<Mutex<HashMap<String, GFunction>>> = OnceLock::new();
    let key = format!("{}|{}|{}|{m}", g.name(), g.expr(), g.p());
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    cache.entry(key).or_insert_with(|| g.rescaled(m)).clone()
}

/// `Σ_{j<m} Σg((x+j)/m)` against `Σg_m(x) + m σ[g] - σ[g_m] - ∫_1^m g_m`.
pub fn mult_sides(g: &GFunction, m: u32, x: f64) -> Result<Sides> {
    check_positive(x, "mult")?;
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let mut lhs = CompensatedSum::new();
    for j in 0..m {
        lhs.add(sigma(g, (x + j as f64) / m as f64)?.value);
    }
    if m == 1 {
        let s = sigma(g, x)?.value;
        return Ok(Sides { lhs: lhs.value(), rhs: s });
    }
    let gm = rescaled(g, m);
    let mut rhs = CompensatedSum::new();
    rhs.add(sigma(&gm, x)?.value);
    rhs.add(m as f64 * asymptotic_constant(g, SIGMA_TOL)?);
    rhs.add(-asymptotic_constant(&gm, SIGMA_TOL)?);
    rhs.add(-gm.integral(1.0, m as f64)?);
    Ok(Sides {
        lhs: lhs.value(),
        rhs: rhs.value(),
    })
}

pub fn mult_residual(g: &GFunction, m: u32, x: f64) -> Result<f64> {
    Ok(mult_sides(g, m, x)?.residual())
}

/// `Σ_{j<m} ψ_{-2}((x+j)/m)` against its closed form.
pub fn mult_psi2_sides(m: u32, x: f64) -> Result<Sides> {
    check_positive(x, "mult")?;
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let mf = m as f64;
    let mut lhs = CompensatedSum::new();
    for j in 0..m {
        lhs.add(psi2((x + j as f64) / mf)?);
    }
    let rhs = psi2(x)? / mf - (6.0 * x * x - 6.0 * x + 1.0) * mf.ln() / (12.0 * mf)
        + (mf - 1.0) * LN_2PI * (x / (2.0 * mf) + 0.25)
        + (mf - 1.0 / mf) * LN_GLAISHER;
    Ok(Sides { lhs: lhs.value(), rhs })
}

/// `Σ_{j=1}^{m-1} ψ_{-2}(j/m)` against
/// `-(1/12m) ln m + ¼(m-1) ln 2π + (m - 1/m) ln A`.
pub fn psi2_finite_sum(m: u32) -> Result<Sides> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let mf = m as f64;
    let mut lhs = CompensatedSum::new();
    for j in 1..m {
        lhs.add(psi2(j as f64 / mf)?);
    }
    let rhs = -mf.ln() / (12.0 * mf) + 0.25 * (mf - 1.0) * LN_2PI + (mf - 1.0 / mf) * LN_GLAISHER;
    Ok(Sides { lhs: lhs.value(), rhs })
}

/// `ψ_{-2}(mx)/m² - ½x² ln m` for each `m`; tends to `½x² ln x - ¾x²`.
pub fn mult_scaling_limit_psi2(x: f64, ms: &[u32]) -> Result<Vec<f64>> {
    check_positive(x, "mult_scaling_limit")?;
    ms.iter()
        .map(|&m| {
            let mf = m as f64;
            Ok(psi2(mf * x)? / (mf * mf) - 0.5 * x * x * mf.ln())
        })
        .collect()
}

pub fn mult_scaling_limit_value(x: f64) -> f64 {
    0.5 * x * x * x.ln() - 0.75 * x * x
}

/// `Σ_{j<m} f(x + j/m)` against `g(x)` for `f(t) = ψ_{-2}(t + 1/m) - ψ_{-2}(t)`.
pub fn webster_sides(m: u32, x: f64) -> Result<Sides> {
    check_positive(x, "webster")?;
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let h = 1.0 / m as f64;
    let mut lhs = CompensatedSum::new();
    for j in 0..m {
        let t = x + j as f64 * h;
        lhs.add(psi2(t + h)? - psi2(t)?);
    }
    Ok(Sides {
        lhs: lhs.value(),
        rhs: g_psi2(x),
    })
}

pub fn webster_check(m: u32, x: f64) -> Result<f64> {
    Ok(webster_sides(m, x)?.residual())
}

/// `(h_1(n) + Σ_{k≤2n} (-1)^{k-1} g(k), h_2(n) + Σ_{k≤2n} (-1)^{k-1} ψ_{-2}(k))`.
///
/// `ψ_{-2}` at the integers is accumulated from the engine value at 1 via
/// `ψ_{-2}(k+1) = ψ_{-2}(k) + g(k)`.
pub fn wallis_partial_psi2(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 2")));
    }
    let nf = n as f64;
    let mut first = CompensatedSum::new();
    let mut second = CompensatedSum::new();
    let mut psi_k = psi2(1.0)?;
    for k in 1..=2 * n {
        let gk = g_psi2(k as f64);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        first.add(sign * gk);
        second.add(sign * psi_k);
        psi_k += gk;
    }
    let h1 = (nf + 0.25) * nf.ln() - nf * (1.0 - LN_2);
    let h2 = nf * nf * (2.0 * nf).ln() - 1.5 * nf * nf + 0.5 * nf * LN_2PI - nf.ln() / 12.0;
    first.add(h1);
    second.add(h2);
    Ok((first.value(), second.value()))
}

/// The Wallis sequences sampled at `n/8, n/4, n/2, n` and extrapolated in `1/n`.
pub fn wallis_extrapolated_psi2(n: usize) -> Result<(f64, f64)> {
    if n < 16 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 16")));
    }
    let mut r1 = Richardson::new();
    let mut r2 = Richardson::new();
    let mut est = (0.0, 0.0);
    for shift in (0..4).rev() {
        let (a, b) = wallis_partial_psi2(n >> shift)?;
        est = (r1.push(a), r2.push(b));
    }
    Ok(est)
}

pub fn wallis_limits_psi2() -> (f64, f64) {
    (LN_2 / 12.0 - 3.0 * LN_GLAISHER, LN_GLAISHER - LN_2 / 12.0)
}

/// `ψ_{-2}(x) - ψ_{-2}(1-x)` against `x ln π - ½ ln 2π - ∫_0^x ln sin(πt) dt`.
pub fn reflection_sides_psi2(x: f64) -> Result<Sides> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { op: "reflection", arg: x });
    }
    let lhs = psi2(x)? - psi2(1.0 - x)?;
    let pi = std::f64::consts::PI;
    let log_sine = integrate_singular(|t| Ok((pi * t).sin().ln()), 0.0, x, 1e-13, Endpoint::Left)?.value;
    Ok(Sides {
        lhs,
        rhs: x * LN_PI - 0.5 * LN_2PI - log_sine,
    })
}

pub fn reflection_residual_psi2(x: f64) -> Result<f64> {
    Ok(reflection_sides_psi2(x)?.residual())
}

fn zeta_at(n: usize) -> f64 {
    if n <= 60 {
        zeta_int(n)
    } else {
        1.0 + 0.5f64.powi(n as i32)
    }
}

/// Partial sum through `x^N` of the Taylor series of `ψ_{-2}(x+1)` at 0, and a
/// bound on the omitted tail.
pub fn taylor_psi2(x: f64, n: usize) -> Result<(f64, f64)> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain { op: "taylor_psi2", arg: x });
    }
    if n > 200 {
        return Err(Error::OutOfRange(format!("N = {n} exceeds 200")));
    }
    let mut s = CompensatedSum::new();
    s.add(0.5 * LN_2PI);
    s.add(-EULER_GAMMA * x * x / 2.0);
    let mut pow = x * x;
    for k in 3..=n {
        pow *= x;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        s.add(sign * zeta_at(k - 1) / (k * (k - 1)) as f64 * pow);
    }
    let last = n.max(2);
    let ax = x.abs();
    let tail = zeta_at(last) * ax.powi(last as i32 + 1) / ((last * (last + 1)) as f64 * (1.0 - ax));
    Ok((s.value(), tail))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerSeries {
    /// `Σ_{n=2}^N (-1)^n ζ(n) / (n(n+1)(n+2))`.
    pub raw: f64,
    /// Same truncation applied to `ζ(n) - 1` only, plus the exact value
    /// `17/12 - 2 ln 2` of the series with `ζ` replaced by 1.
    pub accelerated: f64,
    /// `γ/6 - ¾ + ¼ ln 2π + ln A`.
    pub closed_form: f64,
}

pub fn euler_series_analogue(n: usize) -> Result<EulerSeries> {
    if !(2..=60).contains(&n) {
        return Err(Error::OutOfRange(format!("N = {n} outside 2..=60")));
    }
    let mut raw = CompensatedSum::new();
    let mut fast = CompensatedSum::new();
    fast.add(17.0 / 12.0 - 2.0 * LN_2);
    for k in 2..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign / (k * (k + 1) * (k + 2)) as f64;
        raw.add(w * zeta_int(k));
        fast.add(w * zeta_int_minus_one(k));
    }
    Ok(EulerSeries {
        raw: raw.value(),
        accelerated: fast.value(),
        closed_form: EULER_GAMMA / 6.0 - 0.75 + 0.25 * LN_2PI + LN_GLAISHER,
    })
}

/// One inequality chain `members[0] <= members[1] <= ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCheck {
    pub family: &'static str,
    pub applicable: bool,
    pub members: Vec<f64>,
    /// Largest `members[i] - members[i+1]` relative to the chain's scale.
    pub violation: f64,
}

/// Relative violation beyond which a chain is reported as failing.
pub const CHAIN_TOL: f64 = 1e-9;

impl ChainCheck {
    fn new(family: &'static str, members: Vec<f64>) -> Self {
        let scale = members.iter().fold(1.0f64, |s, m| s.max(m.abs()));
        let violation = members
            .windows(2)
            .map(|w| (w[0] - w[1]) / scale)
            .fold(0.0, f64::max);
        ChainCheck {
            family,
            applicable: true,
            members,
            violation,
        }
    }

    fn not_applicable(family: &'static str) -> Self {
        ChainCheck {
            family,
            applicable: false,
            members: Vec::new(),
            violation: 0.0,
        }
    }

    pub fn holds(&self) -> bool {
        !self.applicable || self.violation <= CHAIN_TOL
    }
}

/// The Wendel, Webster, Gautschi and Stirling-type chains for `ψ_{-2}` at `(x, a)`.
pub fn inequality_report_psi2(x: f64, a: f64) -> Result<Vec<ChainCheck>> {
    check_positive(x, "inequalities")?;
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::Domain { op: "inequalities", arg: a });
    }
    let psi_x = psi2(x)?;
    let psi_xa = psi2(x + a)?;
    let fl = a.floor();
    let ce = a.ceil();
    let frac = a - fl;

    let prod = a * (a - 1.0) * (a - 2.0);
    let sign = if prod > 0.0 {
        1.0
    } else if prod < 0.0 {
        -1.0
    } else {
        0.0
    };
    let c = gen_binomial(a - 1.0, 2).abs();
    let d2 = dg_psi2(x + 1.0) - dg_psi2(x);
    let wendel = ChainCheck::new(
        "wendel",
        vec![
            0.0,
            sign * (psi_xa - psi_x - a * g_psi2(x) - gen_binomial(a, 2) * dg_psi2(x)),
            c * (dg_psi2(x + a) - dg_psi2(x)),
            ce * c * d2,
        ],
    );

    let y = x + fl + 1.0;
    let webster = ChainCheck::new(
        "webster",
        vec![
            0.0,
            psi2(x + a + 1.0)? - psi2(y)? - frac * g_psi2(y) - gen_binomial(frac, 2) * dg_psi2(y),
            0.5 * frac * (g_psi2(x + a) - g_psi2(y) - (frac - 1.0) * dg_psi2(y)),
        ],
    );

    let gautschi = if x + fl >= DIGAMMA_ZERO {
        ChainCheck::new(
            "gautschi",
            vec![
                (a - ce) * ln_gamma(x + ce)?,
                psi_xa - psi2(x + ce)?,
                (a - ce) * g_psi2(x + fl),
            ],
        )
    } else {
        ChainCheck::not_applicable("gautschi")
    };

    let psi = psi2g()?;
    let j3 = crate::asymptotics::binet(&psi, x)?;
    let dgx = dg_psi2(x);
    let middle = integrate(
        |t| Ok(gen_binomial(t - 1.0, 2) * (dg_psi2(x + t) - dgx)),
        0.0,
        1.0,
        1e-14,
    )?
    .value;
    let stirling = ChainCheck::new("stirling", vec![0.0, -j3, middle, 5.0 / 12.0 * d2]);

    Ok(vec![wendel, webster, gautschi, stirling])
}

/// Closed-form `α(x) <= ψ_{-2}(x) <= β(x)`.
pub fn bounds_alpha_beta(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let alpha = LN_GLAISHER - 5.0 / 18.0 + x / 24.0 - 5.0 / 6.0 * x2 + 0.5 * x * LN_2PI
        - x * (x2 + 12.0) * x.ln() / 12.0
        + (x + 1.0) * (x2 + 5.0 * x + 1.0) * (x + 1.0).ln() / 12.0;
    let beta = LN_GLAISHER - 1.0 / 3.0 - 0.75 * x2 + 0.5 * x * LN_2PI - x * x.ln()
        + (x + 1.0) * (6.0 * x - 1.0) * (x + 1.0).ln() / 12.0
        + (x + 2.0) * (x + 2.0).ln() / 12.0;
    (alpha, beta)
}

/// `sup (β - α)` over a log-spaced grid of `points` abscissas in `[lo, hi]`.
pub fn alpha_beta_sup_gap(lo: f64, hi: f64, points: usize) -> f64 {
    let (l, h) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            let x = (l + (h - l) * i as f64 / (points.max(2) - 1) as f64).exp();
            let (a, b) = bounds_alpha_beta(x);
            b - a
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `(3 ln 2 - 1)/18`, the limit of `β - α` at `0⁺`.
pub fn alpha_beta_gap_limit() -> f64 {
    (3.0 * LN_2 - 1.0) / 18.0
}

/// `f(x+n) - f(n) - x ln Γ(n) - (x²/2) ln n` with `f = ψ_{-2}`.
pub fn characterization_limit_psi2(x: f64, n: usize) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain { op: "characterization", arg: x });
    }
    if n < 2 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 2")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let psi = psi2g()?;
    let mut s = CompensatedSum::new();
    s.add(sigma(&psi, x + nf)?.value);
    s.add(-sigma(&psi, nf)?.value);
    s.add(-x * ln_gamma(nf)?);
    s.add(-0.5 * x * x * nf.ln());
    Ok(s.value())
}
