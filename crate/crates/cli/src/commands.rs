use std::io::Write;

use indefsum::asymptotics::{asym_expansion, binet, MAX_EXPANSION_ORDER};
use indefsum::catalog::{builtin, NAMES};
use indefsum::constants::{asymptotic_constant, constants_report, SIGMA_TOL};
use indefsum::identities::bounds_alpha_beta;
use indefsum::sigma::sigma_with;
use indefsum::{Error, Shape};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{exit_code, CliError, Format, OffsetMode, RunConfig, Target};
use crate::output::{num, write_json, Cell, Table};

fn shape_name(s: Shape) -> &'static str {
    match s {
        Shape::Convex => "convex",
        Shape::Concave => "concave",
    }
}

/// Fill the asymptotic-constant cache once before fanning out; failures
/// surface again, per point, from the evaluations themselves.
fn warm(target: &Target) {
    let _ = asymptotic_constant(&target.g, SIGMA_TOL);
}

fn check_points(xs: &[f64]) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(CliError::input("--x needs at least one point"));
    }
    if let Some(bad) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(CliError::input(format!("--x values must be positive, got {bad}")));
    }
    Ok(())
}

/// Rows `(x, sigma, err_estimate, strategy, status)`; failed points are kept
/// with their error message and determine the exit code.
pub fn eval(cfg: &RunConfig, xs: &[f64], offset: OffsetMode, out: impl Write) -> Result<u8, CliError> {
    check_points(xs)?;
    let target = cfg.resolve()?;
    warm(&target);
    let shift = target.offset(offset);
    let results: Vec<_> = xs.par_iter().map(|&x| sigma_with(&target.g, x, cfg.tol)).collect();
    let mut table = Table::new(vec!["x", "sigma", "err_estimate", "strategy", "status"]);
    let mut code = 0;
    for (&x, r) in xs.iter().zip(results) {
        match r {
            Ok(r) => table.push(vec![
                Cell::Num(x),
                Cell::Num(r.value + shift),
                Cell::Num(r.err_estimate),
                Cell::Text(r.strategy.to_string()),
                Cell::Text("ok".into()),
            ]),
            Err(e) => {
                code = code.max(exit_code(&e));
                table.push(vec![Cell::Num(x), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Text(e.to_string())]);
            }
        }
    }
    table.emit(cfg.format_or(Format::Csv), out)?;
    Ok(code)
}

pub fn constants(cfg: &RunConfig, mut out: impl Write) -> Result<u8, CliError> {
    let target = cfg.resolve()?;
    let r = constants_report(&target.g)?;
    let function = target.catalog_name().map_or_else(|| target.g.name().to_string(), str::to_string);
    match cfg.format_or(Format::Json) {
        Format::Json => write_json(
            &json!({
                "function": function,
                "p": r.p,
                "shape": shape_name(r.shape),
                "sigma": num(r.sigma),
                "gamma": num(r.gamma_gen),
                "err": num(r.err),
                "method": r.method,
            }),
            &mut out,
        )?,
        Format::Csv => {
            let mut t = Table::new(vec!["function", "p", "shape", "sigma", "gamma", "err", "method"]);
            t.push(vec![
                Cell::Text(function),
                Cell::Int(r.p as i64),
                Cell::Text(shape_name(r.shape).into()),
                Cell::Num(r.sigma),
                Cell::Num(r.gamma_gen),
                Cell::Num(r.err),
                Cell::Text(r.method),
            ]);
            t.write_csv(out)?;
        }
    }
    Ok(0)
}

pub fn expand(cfg: &RunConfig, x: f64, q: usize, m: usize, offset: OffsetMode, mut out: impl Write) -> Result<u8, CliError> {
    check_points(&[x])?;
    if q > MAX_EXPANSION_ORDER {
        return Err(CliError::input(format!("--q must be at most {MAX_EXPANSION_ORDER}")));
    }
    let target = cfg.resolve()?;
    let e = asym_expansion(&target.g, x, q, m)?;
    let shift = target.offset(offset);
    match cfg.format_or(Format::Csv) {
        Format::Json => write_json(
            &json!({
                "x": num(e.x),
                "q": e.q,
                "m": e.m,
                "main": num(e.main + shift),
                "terms": e.terms.iter().map(|t| json!({
                    "k": t.k,
                    "coefficient": num(t.coefficient),
                    "value": num(t.value),
                })).collect::<Vec<_>>(),
                "total": num(e.total + shift),
                "target": num(e.target + shift),
                "remainder": num(e.remainder()),
            }),
            &mut out,
        )?,
        Format::Csv => {
            let mut t = Table::new(vec!["k", "coefficient", "value"]);
            t.push(vec![Cell::Text("main".into()), Cell::Empty, Cell::Num(e.main + shift)]);
            for term in &e.terms {
                t.push(vec![Cell::Int(term.k as i64), Cell::Num(term.coefficient), Cell::Num(term.value)]);
            }
            t.push(vec![Cell::Text("total".into()), Cell::Empty, Cell::Num(e.total + shift)]);
            t.push(vec![Cell::Text("target".into()), Cell::Empty, Cell::Num(e.target + shift)]);
            t.push(vec![Cell::Text("remainder".into()), Cell::Empty, Cell::Num(e.remainder())]);
            t.write_csv(out)?;
        }
    }
    Ok(0)
}

/// Grid `from, from + step, ...` up to `to`, tolerant of rounding at the end.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && step.is_finite() && from.is_finite() && to.is_finite()) {
        return Err(CliError::input("--step must be positive and the range finite"));
    }
    if to < from {
        return Ok(Vec::new());
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    // strip accumulated representation error, e.g. 0.30000000000000004 -> 0.3
    Ok((0..n).map(|i| round_sig(from + i as f64 * step)).collect())
}

fn round_sig(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let digits = 12 - v.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    (v * scale).round() / scale
}

/// Columns `x, sigma, binet, alpha, beta`. `alpha` and `beta` bound the
/// `sigma` column as printed and are given for `psi2g` only.
pub fn tabulate(cfg: &RunConfig, xs: &[f64], offset: OffsetMode, out: impl Write) -> Result<u8, CliError> {
    if let Some(bad) = xs.iter().find(|x| **x <= 0.0) {
        return Err(CliError::input(format!("range must lie in x > 0, got {bad}")));
    }
    let target = cfg.resolve()?;
    warm(&target);
    let shift = target.offset(offset);
    let bounds_shift = target.entry.as_ref().map(|e| e.offset - shift);
    let with_bounds = target.catalog_name() == Some("psi2g");
    let rows: Vec<Result<Vec<Cell>, Error>> = xs
        .par_iter()
        .map(|&x| {
            let s = sigma_with(&target.g, x, cfg.tol)?.value;
            let j = binet(&target.g, x)?;
            let (alpha, beta) = match (with_bounds, bounds_shift) {
                (true, Some(d)) => {
                    let (a, b) = bounds_alpha_beta(x);
                    (Some(a - d), Some(b - d))
                }
                _ => (None, None),
            };
            Ok(vec![Cell::Num(x), Cell::Num(s + shift), Cell::Num(j), Cell::opt(alpha), Cell::opt(beta)])
        })
        .collect();
    let mut table = Table::new(vec!["x", "sigma", "binet", "alpha", "beta"]);
    for r in rows {
        table.push(r?);
    }
    table.emit(cfg.format_or(Format::Csv), out)?;
    Ok(0)
}

pub fn catalog(format: Format, out: impl Write) -> Result<u8, CliError> {
    let mut t = Table::new(vec!["name", "target", "expr", "p", "shape", "sigma_closed", "gamma_closed", "offset"]);
    for name in NAMES {
        let e = builtin(name)?;
        t.push(vec![
            Cell::Text(e.name.into()),
            Cell::Text(e.target.into()),
            Cell::Text(e.g.expr().to_string()),
            Cell::Int(e.g.p() as i64),
            Cell::Text(shape_name(e.g.shape()).into()),
            Cell::opt(e.sigma_closed),
            Cell::opt(e.gamma_closed),
            Cell::Num(e.offset),
        ]);
    }
    t.emit(format, out)?;
    Ok(0)
}
