use clap::ValueEnum;
use indefsum::asymptotics::{binet, binet_closed_psi2, binet_integral, wendel_residual};
use indefsum::identities::{
    bounds_alpha_beta, euler_series_analogue, inequality_report_psi2, mult_psi2_sides, mult_sides, psi2,
    psi2_finite_sum, raabe_closed_psi2, raabe_sides, reflection_sides_psi2, taylor_psi2, wallis_extrapolated_psi2,
    wallis_limits_psi2, webster_sides, Sides, CHAIN_TOL,
};
use indefsum::numerics::{forward_diff, gen_binomial};
use indefsum::ResidualReport;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{CliError, Target};
use crate::output::{num, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Raabe,
    Mult,
    Webster,
    Wallis,
    Reflection,
    Taylor,
    EulerSeries,
    Inequalities,
    Stirling,
    Wendel,
    All,
}

impl Suite {
    const EACH: [Suite; 10] = [
        Suite::Raabe,
        Suite::Mult,
        Suite::Webster,
        Suite::Wallis,
        Suite::Reflection,
        Suite::Taylor,
        Suite::EulerSeries,
        Suite::Inequalities,
        Suite::Stirling,
        Suite::Wendel,
    ];

    /// Suites that are statements about `ψ_{-2}` rather than about any `Σg`.
    fn psi2_only(self) -> bool {
        matches!(
            self,
            Suite::Webster | Suite::Wallis | Suite::Reflection | Suite::Taylor | Suite::EulerSeries | Suite::Inequalities
        )
    }

    fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

const TOL_IDENTITY: f64 = 1e-7;
const TOL_BINET_CLOSED: f64 = 1e-8;
const TOL_TAYLOR: f64 = 1e-9;
const TOL_EULER_SERIES: f64 = 1e-12;
const TOL_WALLIS: f64 = 1e-3;
const TOL_WENDEL: f64 = 1e-10;

/// Grid overrides from the command line.
#[derive(Debug, Clone, Default)]
pub struct Grid {
    pub x: Option<Vec<f64>>,
    pub m: Option<Vec<u32>>,
    pub a: Option<Vec<f64>>,
    pub n: Option<usize>,
}

impl Grid {
    fn x_or(&self, default: &[f64]) -> Vec<f64> {
        self.x.clone().unwrap_or_else(|| default.to_vec())
    }

    fn a_or(&self, default: Vec<f64>) -> Vec<f64> {
        self.a.clone().unwrap_or(default)
    }

    fn m_or(&self, default: &[u32]) -> Vec<u32> {
        self.m.clone().unwrap_or_else(|| default.to_vec())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub report: ResidualReport,
    pub tolerance: f64,
    /// `lhs <= rhs` up to the tolerance, instead of `lhs = rhs`.
    pub one_sided: bool,
    pub pass: bool,
}

impl SuiteReport {
    fn equality(suite: Suite, report: ResidualReport, tolerance: f64) -> Self {
        let pass = report.max_abs <= tolerance;
        Self {
            suite: suite.name(),
            report,
            tolerance,
            one_sided: false,
            pass,
        }
    }

    /// `lhs <= rhs + tolerance · max(1, |lhs|, |rhs|)` on every row.
    fn inequality(suite: Suite, report: ResidualReport, tolerance: f64) -> Self {
        let pass = report
            .lhs
            .iter()
            .zip(&report.rhs)
            .all(|(l, r)| l - r <= tolerance * 1f64.max(l.abs()).max(r.abs()));
        Self {
            suite: suite.name(),
            report,
            tolerance,
            one_sided: true,
            pass,
        }
    }

    /// Largest `|lhs - rhs|` for equalities, largest `lhs - rhs` for inequalities.
    pub fn worst(&self) -> f64 {
        let r = &self.report;
        if self.one_sided {
            r.residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            r.max_abs
        }
    }

    pub fn to_json(&self) -> Value {
        let r = &self.report;
        let rows: Vec<Value> = (0..r.points.len())
            .map(|i| {
                json!({
                    "point": r.points[i].iter().map(|v| num(*v)).collect::<Vec<_>>(),
                    "lhs": num(r.lhs[i]),
                    "rhs": num(r.rhs[i]),
                    "residual": num(r.residuals[i]),
                })
            })
            .collect();
        json!({
            "suite": self.suite,
            "identity": r.identity,
            "relation": if self.one_sided { "le" } else { "eq" },
            "tolerance": num(self.tolerance),
            "max_abs": num(r.max_abs),
            "worst": num(self.worst()),
            "pass": self.pass,
            "rows": rows,
        })
    }
}

pub fn reports_table(reports: &[SuiteReport]) -> Table {
    let mut t = Table::new(vec!["suite", "identity", "point", "lhs", "rhs", "residual", "tolerance", "pass"]);
    for s in reports {
        let r = &s.report;
        for i in 0..r.points.len() {
            let point = r.points[i].iter().map(|v| crate::output::fmt_num(*v)).collect::<Vec<_>>().join(" ");
            t.push(vec![
                Cell::Text(s.suite.clone()),
                Cell::Text(r.identity.clone()),
                Cell::Text(point),
                Cell::Num(r.lhs[i]),
                Cell::Num(r.rhs[i]),
                Cell::Num(r.residuals[i]),
                Cell::Num(s.tolerance),
                Cell::Bool(s.pass),
            ]);
        }
    }
    t
}

type Rows = Vec<(Vec<f64>, Sides)>;

/// Evaluate `f` at every point concurrently, keeping input order.
fn rows<P, F>(points: Vec<P>, f: F) -> Result<Rows, CliError>
where
    P: Send + Sync,
    F: Fn(&P) -> indefsum::Result<(Vec<f64>, Sides)> + Sync + Send,
{
    let out: indefsum::Result<Rows> = points.par_iter().map(f).collect();
    Ok(out?)
}

fn pairs<A: Copy + Send + Sync, B: Copy + Send + Sync>(xs: &[A], ys: &[B]) -> Vec<(A, B)> {
    xs.iter().flat_map(|&a| ys.iter().map(move |&b| (a, b))).collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn is_psi2(t: &Target) -> bool {
    t.catalog_name() == Some("psi2g")
}

pub fn run(target: &Target, suite: Suite, grid: &Grid) -> Result<Vec<SuiteReport>, CliError> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::EACH {
            if !s.psi2_only() || is_psi2(target) {
                out.extend(run(target, s, grid)?);
            }
        }
        return Ok(out);
    }
    if suite.psi2_only() && !is_psi2(target) {
        return Err(CliError::input(format!("suite `{}` applies to --fn psi2g only", suite.name())));
    }
    let g = &target.g;
    let offset = target.entry.as_ref().map_or(0.0, |e| e.offset);
    let eq = |identity: &str, rows: Rows, tol: f64| SuiteReport::equality(suite, ResidualReport::new(identity, rows), tol);
    let le = |identity: &str, rows: Rows, tol: f64| SuiteReport::inequality(suite, ResidualReport::new(identity, rows), tol);
    let mut out = Vec::new();
    match suite {
        Suite::Raabe => {
            let xs = grid.x_or(&[0.5, 1.0, 2.0, 5.0, 10.0]);
            let r = rows(xs, |&x| Ok((vec![x], raabe_sides(g, x)?)))?;
            if is_psi2(target) {
                let closed = r
                    .iter()
                    .map(|(p, s)| {
                        let sides = Sides {
                            lhs: s.lhs + offset,
                            rhs: raabe_closed_psi2(p[0]),
                        };
                        (p.clone(), sides)
                    })
                    .collect();
                out.push(eq("raabe", r, TOL_IDENTITY));
                out.push(eq("raabe-closed-form", closed, TOL_IDENTITY));
            } else {
                out.push(eq("raabe", r, TOL_IDENTITY));
            }
        }
        Suite::Mult => {
            let grid_points = pairs(&grid.m_or(&[2, 3, 5]), &grid.x_or(&[0.3, 1.0, 2.7, 8.0]));
            let r = rows(grid_points.clone(), |&(m, x)| Ok((vec![m as f64, x], mult_sides(g, m, x)?)))?;
            out.push(eq("multiplication", r, TOL_IDENTITY));
            if is_psi2(target) {
                let r = rows(grid_points, |&(m, x)| Ok((vec![m as f64, x], mult_psi2_sides(m, x)?)))?;
                out.push(eq("multiplication-closed-form", r, TOL_IDENTITY));
                let r = rows(grid.m_or(&[2, 3, 5]), |&m| Ok((vec![m as f64], psi2_finite_sum(m)?)))?;
                out.push(eq("finite-sum", r, TOL_IDENTITY));
            }
        }
        Suite::Webster => {
            let grid_points = pairs(&grid.m_or(&[2, 3, 4]), &grid.x_or(&[0.5, 1.0, 2.7, 8.0]));
            let r = rows(grid_points, |&(m, x)| Ok((vec![m as f64, x], webster_sides(m, x)?)))?;
            out.push(eq("webster-equation", r, TOL_IDENTITY));
        }
        Suite::Wallis => {
            let n = grid.n.unwrap_or(10_000);
            let (a, b) = wallis_extrapolated_psi2(n)?;
            let (la, lb) = wallis_limits_psi2();
            out.push(eq("wallis-g", vec![(vec![n as f64], Sides { lhs: a, rhs: la })], TOL_WALLIS));
            out.push(eq("wallis-psi2", vec![(vec![n as f64], Sides { lhs: b, rhs: lb })], TOL_WALLIS));
        }
        Suite::Reflection => {
            let xs = grid.x_or(&[0.1, 0.25, 0.5, 0.75, 0.9]);
            let r = rows(xs, |&x| Ok((vec![x], reflection_sides_psi2(x)?)))?;
            out.push(eq("reflection", r, TOL_IDENTITY));
        }
        Suite::Taylor => {
            let n = grid.n.unwrap_or(60);
            let xs = grid.x_or(&[-0.5, -0.25, 0.25, 0.5]);
            let r = rows(xs, |&x| {
                let (partial, _) = taylor_psi2(x, n)?;
                Ok((vec![x, n as f64], Sides { lhs: partial, rhs: psi2(1.0 + x)? }))
            })?;
            out.push(eq("taylor", r, TOL_TAYLOR));
        }
        Suite::EulerSeries => {
            let n = grid.n.unwrap_or(50);
            let e = euler_series_analogue(n)?;
            let sides = Sides {
                lhs: e.accelerated,
                rhs: e.closed_form,
            };
            out.push(eq("euler-series", vec![(vec![n as f64], sides)], TOL_EULER_SERIES));
        }
        Suite::Inequalities => {
            let xs = grid.x_or(&logspace(0.1, 50.0, 20));
            let a_s = grid.a_or((1..=10).map(|j| 0.35 * j as f64).collect());
            let chains: indefsum::Result<Vec<_>> = pairs(&xs, &a_s)
                .par_iter()
                .map(|&(x, a)| Ok(((x, a), inequality_report_psi2(x, a)?)))
                .collect();
            let chains = chains?;
            for family in ["wendel", "webster", "gautschi", "stirling"] {
                let mut r = Rows::new();
                for ((x, a), checks) in &chains {
                    for c in checks.iter().filter(|c| c.family == family && c.applicable) {
                        for (i, w) in c.members.windows(2).enumerate() {
                            r.push((vec![*x, *a, i as f64], Sides { lhs: w[0], rhs: w[1] }));
                        }
                    }
                }
                let mut report = le(family, r, CHAIN_TOL);
                report.pass = chains.iter().flat_map(|(_, c)| c).filter(|c| c.family == family).all(|c| c.holds());
                out.push(report);
            }
            let xs = grid.x_or(&logspace(0.1, 50.0, 60));
            let values = rows(xs, |&x| Ok((vec![x], Sides { lhs: psi2(x)?, rhs: 0.0 })))?;
            let lower = values
                .iter()
                .map(|(p, s)| (p.clone(), Sides { lhs: bounds_alpha_beta(p[0]).0, rhs: s.lhs }))
                .collect();
            let upper = values
                .iter()
                .map(|(p, s)| (p.clone(), Sides { lhs: s.lhs, rhs: bounds_alpha_beta(p[0]).1 }))
                .collect();
            out.push(le("alpha-lower-bound", lower, CHAIN_TOL));
            out.push(le("beta-upper-bound", upper, CHAIN_TOL));
        }
        Suite::Stirling => {
            let xs = grid.x_or(&[1.0, 2.5, 10.0]);
            let r = rows(xs.clone(), |&x| Ok((vec![x], Sides { lhs: binet(g, x)?, rhs: binet_integral(g, x)? })))?;
            out.push(eq("binet-integral-form", r, TOL_IDENTITY));
            if is_psi2(target) {
                let r = rows(xs, |&x| Ok((vec![x], Sides { lhs: binet(g, x)?, rhs: binet_closed_psi2(x)? })))?;
                out.push(eq("binet-closed-form", r, TOL_BINET_CLOSED));
            }
        }
        Suite::Wendel => {
            // |ρ| <= ⌈a⌉ |C(a-1, p)| |Δ^p g(x)|
            let p = g.p();
            let grid_points = pairs(&grid.x_or(&[1.0, 10.0, 100.0]), &grid.a_or(vec![0.25, 0.5, 0.75, 1.5, 2.5]));
            let r = rows(grid_points, |&(x, a)| {
                let rho = wendel_residual(g, p, a, x)?;
                let bound = a.ceil() * gen_binomial(a - 1.0, p).abs() * forward_diff(|t| g.eval(t), x, p)?.abs();
                Ok((vec![x, a], Sides { lhs: rho.abs(), rhs: bound }))
            })?;
            out.push(le("wendel-bound", r, TOL_WENDEL));
        }
        Suite::All => unreachable!("expanded above"),
    }
    Ok(out)
}
