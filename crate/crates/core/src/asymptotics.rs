//! Interpolation errors, generalized Binet functions and asymptotic expansions.

use crate::catalog::{LN_2PI, LN_GLAISHER};
use crate::constants::{self, b2_piece, extrapolated_series, gregory_head, SIGMA_TOL};
use crate::error::{Error, Result};
use crate::gfunc::GFunction;
use crate::numerics::{
    bernoulli_number, forward_diffs_from_values, gen_binomial, integrate, CompensatedSum,
};
use crate::sigma::sigma;

/// Largest expansion order accepted by [`asym_expansion`].
pub const MAX_EXPANSION_ORDER: usize = 8;

/// `ρ^p_a[f](x) = f(x+a) - Σ_{j=0}^{p-1} C(x,j) Δ^j f(a)`: the error at
/// `x + a` of the interpolant of `f` through `a, a+1, ..., a+p-1`.
pub fn rho<F>(f: F, p: usize, a: f64, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let values = (0..p).map(|i| f(a + i as f64)).collect::<Result<Vec<_>>>()?;
    let d = forward_diffs_from_values(&values);
    let mut s = CompensatedSum::new();
    s.add(f(x + a)?);
    for (j, dj) in d.iter().enumerate() {
        s.add(-gen_binomial(x, j) * dj);
    }
    Ok(s.value())
}

/// `Σg(x+a) - Σg(x)`, exact in the integer part of `a`.
fn sigma_increment(g: &GFunction, a: f64, x: f64) -> Result<f64> {
    let whole = a.floor();
    let frac = a - whole;
    let mut s = CompensatedSum::new();
    if frac > 0.0 {
        s.add(sigma(g, x + frac)?.value);
        s.add(-sigma(g, x)?.value);
    }
    for k in 0..whole as usize {
        s.add(g.eval(x + frac + k as f64)?);
    }
    Ok(s.value())
}

/// `Σg(x+a) - Σg(x) - Σ_{j=1}^p C(a,j) Δ^{j-1} g(x)`, which is
/// `ρ^{p+1}_x[Σg](a)` and tends to zero as `x → ∞`.
pub fn wendel_residual(g: &GFunction, p: usize, a: f64, x: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::Domain { op: "wendel_residual", arg: a });
    }
    let values = (0..p).map(|i| g.eval(x + i as f64)).collect::<Result<Vec<_>>>()?;
    let d = forward_diffs_from_values(&values);
    let mut s = CompensatedSum::new();
    s.add(sigma_increment(g, a, x)?);
    for (j, dj) in d.iter().enumerate() {
        s.add(-gen_binomial(a, j + 1) * dj);
    }
    Ok(s.value())
}

/// `ψ_{-2}(x+a) - ψ_{-2}(x) - a ln Γ(x) - (a²/2) ln x` from the engine.
pub fn wendel_limit_form_psi2(a: f64, x: f64) -> Result<f64> {
    let psi = crate::catalog::builtin("psi2g")?.g;
    let ln = crate::catalog::builtin("ln")?.g;
    Ok(sigma_increment(&psi, a, x)? - a * sigma(&ln, x)?.value - 0.5 * a * a * x.ln())
}

/// `J^{p+1}[Σg](x) = Σg(x) - σ[g] - ∫_1^x g + Σ_{j=1}^p G_j Δ^{j-1} g(x)`.
pub fn binet(g: &GFunction, x: f64) -> Result<f64> {
    let sigma_g = constants::asymptotic_constant(g, SIGMA_TOL)?;
    let mut s = CompensatedSum::new();
    s.add(sigma(g, x)?.value);
    s.add(-sigma_g);
    s.add(-g.integral(1.0, x)?);
    s.add(gregory_head(g, g.p(), x)?);
    Ok(s.value())
}

/// `J^{p+1}[Σg](x) = -∫_0^1 ρ^{p+1}_x[Σg](t) dt`.
pub fn binet_integral(g: &GFunction, x: f64) -> Result<f64> {
    let q = integrate(|t| wendel_residual(g, g.p(), t, x), 0.0, 1.0, 1e-11)?;
    Ok(-q.value)
}

/// Closed form of `J^3` for the Stirling-core function.
pub fn binet_closed_psi2(x: f64) -> Result<f64> {
    let psi = crate::identities::psi2(x)?;
    Ok(psi - (x + 1.0) * (x + 1.0).ln() / 12.0 + (3.0 * x - 1.0).powi(2) / 12.0
        - x * (6.0 * x - 7.0) * x.ln() / 12.0
        - 0.5 * x * LN_2PI
        - LN_GLAISHER)
}

/// The generalized Stirling residual; same as [`binet`].
pub fn stirling_residual(g: &GFunction, x: f64) -> Result<f64> {
    binet(g, x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StirlingDecay {
    /// `(x, J(x))` along `x = 2^k`.
    pub points: Vec<(f64, f64)>,
    /// Whether `|J|` strictly decreases along the points.
    pub monotone: bool,
}

pub fn stirling_decay(g: &GFunction, ks: impl IntoIterator<Item = i32>) -> Result<StirlingDecay> {
    let points = ks
        .into_iter()
        .map(|k| {
            let x = 2f64.powi(k);
            Ok((x, binet(g, x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = points.windows(2).all(|w| w[1].1.abs() < w[0].1.abs());
    Ok(StirlingDecay { points, monotone })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub k: usize,
    /// `B_k / (m^k k!)`.
    pub coefficient: f64,
    /// `coefficient · g^{(k-1)}(x)`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymExpansion {
    pub x: f64,
    pub q: usize,
    pub m: usize,
    /// `σ[g] + ∫_1^x g`.
    pub main: f64,
    pub terms: Vec<ExpansionTerm>,
    pub total: f64,
    /// `(1/m) Σ_{j<m} Σg(x + j/m)`, the quantity being approximated.
    pub target: f64,
    /// Largest error estimate among the `Σg` evaluations behind `target`.
    pub target_err: f64,
}

impl AsymExpansion {
    pub fn remainder(&self) -> f64 {
        self.target - self.total
    }
}

/// `(1/m) Σ_{j<m} Σg(x + j/m) ≈ σ[g] + ∫_1^x g + Σ_{k=1}^q B_k/(m^k k!) g^{(k-1)}(x)`.
pub fn asym_expansion(g: &GFunction, x: f64, q: usize, m: usize) -> Result<AsymExpansion> {
    if q > MAX_EXPANSION_ORDER {
        return Err(Error::OutOfRange(format!("q = {q} exceeds {MAX_EXPANSION_ORDER}")));
    }
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let main = constants::asymptotic_constant(g, SIGMA_TOL)? + g.integral(1.0, x)?;
    let jet = if q > 0 { Some(g.jet(x, q - 1)?) } else { None };
    let mut factorial = 1.0;
    let mut terms = Vec::with_capacity(q);
    for k in 1..=q {
        factorial *= k as f64;
        let coefficient = bernoulli_number(k) / ((m as f64).powi(k as i32) * factorial);
        let dk = jet.as_ref().map_or(0.0, |j| j.derivative(k - 1));
        terms.push(ExpansionTerm {
            k,
            coefficient,
            value: coefficient * dk,
        });
    }
    let mut total = CompensatedSum::new();
    total.add(main);
    for t in &terms {
        total.add(t.value);
    }
    let mut target = CompensatedSum::new();
    let mut target_err: f64 = 0.0;
    for j in 0..m {
        let r = sigma(g, x + j as f64 / m as f64)?;
        target.add(r.value);
        target_err = target_err.max(r.err_estimate);
    }
    Ok(AsymExpansion {
        x,
        q,
        m,
        main,
        terms,
        total: total.value(),
        target: target.value() / m as f64,
        target_err,
    })
}

/// `(1/12)(6x² - 6x + 1) ln x - ¼(3x - 2)x + ½x ln 2π + ln A`.
pub fn liu_main_psi2(x: f64) -> f64 {
    (6.0 * x * x - 6.0 * x + 1.0) * x.ln() / 12.0 - 0.25 * (3.0 * x - 2.0) * x
        + 0.5 * x * LN_2PI
        + LN_GLAISHER
}

/// `ψ_{-2}(x)` as the closed part of the generalized Liu formula plus
/// `½ ∫_0^∞ B_2({t}) / (x+t) dt`, summed over unit intervals with an
/// extrapolated tail.
pub fn liu_formula_psi2(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain { op: "liu_formula_psi2", arg: x });
    }
    let (tail, _) = extrapolated_series(0, 8, 10, |k| b2_piece(x + k as f64))?;
    Ok(liu_main_psi2(x) + 0.5 * tail)
}

/// Engine `ψ_{-2}(x)` minus [`liu_main_psi2`]; behaves like
/// `1/(720x²) - 1/(5040x⁴) + 1/(10080x⁶)` for large `x`.
pub fn expansion_remainder_psi2(x: f64) -> Result<f64> {
    Ok(crate::identities::psi2(x)? - liu_main_psi2(x))
}
