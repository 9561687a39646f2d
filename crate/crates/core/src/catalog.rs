//! Built-in functions, named constants and classical reference implementations.
//!
//! The `reference_*` functions are deliberately independent of the
//! indefinite-sum machinery: they use shifted Stirling series and plain
//! quadrature only, so they can serve as oracles.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::expr::parse;
use crate::gfunc::{GFunction, Shape};
use crate::numerics::integrate;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const LN_GLAISHER: f64 = 0.248_754_477_033_784_3;
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;
pub const LN_PI: f64 = 1.144_729_885_849_400_2;
pub const LN_2: f64 = std::f64::consts::LN_2;
/// Positive zero of the digamma function.
pub const DIGAMMA_ZERO: f64 = 1.461_632_144_968_362;

/// Names accepted by [`builtin`], in display order.
pub const NAMES: [&str; 4] = ["ln", "psi2g", "xlnx", "recip"];

pub fn named_constant(name: &str) -> Result<f64> {
    match name {
        "euler_gamma" => Ok(EULER_GAMMA),
        "ln_glaisher" => Ok(LN_GLAISHER),
        "ln_2pi" => Ok(LN_2PI),
        "ln_pi" => Ok(LN_PI),
        "ln_2" => Ok(LN_2),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// A catalog function with its known closed forms.
///
/// `Σg(x) + offset` is the classical function named by `target`, and
/// `reference` evaluates that function independently.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub target: &'static str,
    pub g: GFunction,
    pub sigma_closed: Option<f64>,
    pub gamma_closed: Option<f64>,
    pub offset: f64,
    pub reference: fn(f64) -> Result<f64>,
}

impl CatalogEntry {
    /// `reference(x) - offset`, the expected value of `Σg(x)`.
    pub fn expected_sigma(&self, x: f64) -> Result<f64> {
        Ok((self.reference)(x)? - self.offset)
    }
}

fn build(name: &str) -> Result<CatalogEntry> {
    let e = |s: &str| parse(s).expect("catalog expression parses");
    let half_ln_2pi = 0.5 * LN_2PI;
    Ok(match name {
        "ln" => CatalogEntry {
            name: "ln",
            target: "ln_gamma",
            g: GFunction::new("ln", e("ln(x)"), 1, Shape::Concave).with_primitive(e("x*ln(x) - x")),
            sigma_closed: Some(-1.0 + half_ln_2pi),
            gamma_closed: Some(-1.0 + half_ln_2pi),
            offset: 0.0,
            reference: reference_lgamma,
        },
        "psi2g" => CatalogEntry {
            name: "psi2g",
            target: "psi_minus2",
            g: GFunction::new("psi2g", e("x*ln(x) - x + ln(2*pi)/2"), 2, Shape::Concave)
                .with_primitive(e("x^2*ln(x)/2 - 3*x^2/4 + x*ln(2*pi)/2")),
            sigma_closed: Some(LN_GLAISHER + 0.25 * LN_2PI - 0.75),
            gamma_closed: Some(LN_GLAISHER + LN_2 / 6.0 - 1.0 / 3.0),
            offset: half_ln_2pi,
            reference: reference_psi2,
        },
        "xlnx" => CatalogEntry {
            name: "xlnx",
            target: "ln_hyperfactorial",
            g: GFunction::new("xlnx", e("x*ln(x)"), 2, Shape::Concave)
                .with_primitive(e("x^2*ln(x)/2 - x^2/4")),
            sigma_closed: Some(LN_GLAISHER - 1.0 / 3.0),
            gamma_closed: Some(LN_GLAISHER + LN_2 / 6.0 - 1.0 / 3.0),
            offset: 0.0,
            reference: reference_ln_hyperfactorial,
        },
        "recip" => CatalogEntry {
            name: "recip",
            target: "digamma",
            g: GFunction::new("recip", e("1/x"), 0, Shape::Concave).with_primitive(e("ln(x)")),
            sigma_closed: Some(EULER_GAMMA),
            gamma_closed: Some(EULER_GAMMA),
            offset: -EULER_GAMMA,
            reference: reference_digamma,
        },
        other => return Err(Error::UnknownName(other.to_string())),
    })
}

/// Look up a catalog entry. Entries are built once per process, so the
/// asymptotic constant computed through one handle is visible through all.
pub fn builtin(name: &str) -> Result<CatalogEntry> {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    let entries = ENTRIES.get_or_init(|| NAMES.iter().map(|n| build(n).expect("known name")).collect());
    entries
        .iter()
        .find(|c| c.name == name)
        .cloned()
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

const SHIFT: f64 = 15.0;

fn positive(x: f64, op: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { op, arg: x })
    }
}

/// `ln Γ(x)` by upward shift to `x >= 15` and the Stirling series through `B_10`.
pub fn reference_lgamma(x: f64) -> Result<f64> {
    positive(x, "ln_gamma")?;
    let mut shift = 0.0;
    let mut t = x;
    while t < SHIFT {
        shift += t.ln();
        t += 1.0;
    }
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 / 1188.0))));
    Ok((t - 0.5) * t.ln() - t + 0.5 * LN_2PI + series - shift)
}

/// Digamma `ψ(x)` by upward shift to `x >= 15` and its asymptotic series.
pub fn reference_digamma(x: f64) -> Result<f64> {
    positive(x, "digamma")?;
    let mut shift = 0.0;
    let mut t = x;
    while t < SHIFT {
        shift += 1.0 / t;
        t += 1.0;
    }
    let inv2 = 1.0 / (t * t);
    let series = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    Ok(t.ln() - 0.5 / t - series - shift)
}

/// `ψ_{-2}(x) = ∫_0^x ln Γ`, integrating the smooth `ln Γ(1+t)` and the
/// `-ln t` part exactly.
pub fn reference_psi2(x: f64) -> Result<f64> {
    positive(x, "psi_minus2")?;
    let q = integrate(|t| reference_lgamma(1.0 + t), 0.0, x, 1e-13 * (1.0 + x))?;
    Ok(q.value - (x * x.ln() - x))
}

/// `ln K(x) = C(x, 2) + ψ_{-2}(x) - x ψ_{-2}(1)`.
pub fn reference_ln_hyperfactorial(x: f64) -> Result<f64> {
    Ok(0.5 * x * (x - 1.0) + reference_psi2(x)? - 0.5 * x * LN_2PI)
}
