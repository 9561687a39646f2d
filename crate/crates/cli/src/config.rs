use std::fmt;

use clap::{Args, ValueEnum};
use indefsum::catalog::builtin;
use indefsum::shape::{certify_window, classify_with, ShapeConfig};
use indefsum::{parse, CatalogEntry, Error, GFunction, Shape};

/// Process exit codes.
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;
pub const EXIT_VIOLATION: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } | Error::MissingSigma(_) => EXIT_CONVERGENCE,
        _ => EXIT_INPUT,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Convex,
    Concave,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Convex => Shape::Convex,
            ShapeArg::Concave => Shape::Concave,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OffsetMode {
    #[default]
    None,
    /// Add the catalog offset, giving the named classical function.
    Named,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Catalog function name (see `catalog`).
    #[arg(long = "fn", value_name = "NAME", global = true)]
    pub function: Option<String>,
    /// Expression in `x`, e.g. "x*ln(x) - x".
    #[arg(long, value_name = "TEXT", global = true)]
    pub expr: Option<String>,
    /// Override the convexity order.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Override the eventual shape.
    #[arg(long, value_enum, global = true)]
    pub shape: Option<ShapeArg>,
    /// Target accuracy for evaluations.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Seed for randomized classification.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Catalog(String),
    Expr(String),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub p: Option<usize>,
    pub shape: Option<Shape>,
    pub tol: f64,
    pub format: Option<Format>,
    pub seed: u64,
}

/// The function to work on, with its catalog entry when it has one.
#[derive(Debug, Clone)]
pub struct Target {
    pub g: GFunction,
    pub entry: Option<CatalogEntry>,
}

impl Target {
    pub fn offset(&self, mode: OffsetMode) -> f64 {
        match (mode, &self.entry) {
            (OffsetMode::Named, Some(e)) => e.offset,
            _ => 0.0,
        }
    }

    pub fn catalog_name(&self) -> Option<&'static str> {
        self.entry.as_ref().map(|e| e.name)
    }
}

impl RunConfig {
    pub fn from_args(args: &GlobalArgs) -> Result<Self, CliError> {
        let source = match (&args.function, &args.expr) {
            (Some(name), None) => Source::Catalog(name.clone()),
            (None, Some(text)) => Source::Expr(text.clone()),
            (Some(_), Some(_)) => return Err(CliError::input("give either --fn or --expr, not both")),
            (None, None) => return Err(CliError::input("a function is required: --fn NAME or --expr TEXT")),
        };
        if !(args.tol >= 1e-12 && args.tol.is_finite()) {
            return Err(CliError::input(format!("--tol must be at least 1e-12, got {}", args.tol)));
        }
        Ok(Self {
            source,
            p: args.p,
            shape: args.shape.map(Shape::from),
            tol: args.tol,
            format: args.format,
            seed: args.seed,
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn shape_config(&self) -> ShapeConfig {
        ShapeConfig {
            seed: self.seed,
            ..ShapeConfig::default()
        }
    }

    /// Build the function, classifying it for whatever was not overridden.
    pub fn resolve(&self) -> Result<Target, CliError> {
        let (g, entry) = match &self.source {
            Source::Catalog(name) => {
                let entry = builtin(name)?;
                if self.p.is_none() && self.shape.is_none() {
                    return Ok(Target {
                        g: entry.g.clone(),
                        entry: Some(entry),
                    });
                }
                (entry.g.clone(), Some(entry))
            }
            Source::Expr(text) => (GFunction::new(text.as_str(), parse(text)?, 0, Shape::Convex), None),
        };
        let (p, shape) = match (self.p, self.shape) {
            (Some(p), Some(shape)) => (p, shape),
            (None, shape) => {
                let report = classify_with(&g, &self.shape_config())?;
                (report.p, shape.unwrap_or(report.shape))
            }
            (Some(p), None) => {
                let found = certify_window(|t| g.eval(t), p, &self.shape_config())?;
                let (_, shape) = found.ok_or_else(|| {
                    CliError::input(format!("no window certifies order-{p} convexity; pass --shape"))
                })?;
                (p, shape)
            }
        };
        // an entry whose order was changed no longer matches its closed forms
        let entry = entry.filter(|e| e.g.p() == p && e.g.shape() == shape);
        Ok(Target {
            g: g.with_order(p, shape),
            entry,
        })
    }
}
