use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::expr::{BinaryOp, Expr, Jet};
use crate::numerics::integrate;

/// Direction of eventual `p`-convexity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Convex,
    Concave,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Convex => "convex",
            Shape::Concave => "concave",
        })
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(Shape::Convex),
            "concave" => Ok(Shape::Concave),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// A function `g` on the positive reals together with its order `p` and the
/// direction of eventual `p`-convexity.
///
/// Clones share the cached asymptotic constant.
#[derive(Debug, Clone)]
pub struct GFunction {
    name: String,
    expr: Expr,
    primitive: Option<Expr>,
    p: usize,
    shape: Shape,
    sigma: Arc<OnceLock<f64>>,
}

impl GFunction {
    pub fn new(name: impl Into<String>, expr: Expr, p: usize, shape: Shape) -> Self {
        Self {
            name: name.into(),
            expr,
            primitive: None,
            p,
            shape,
            sigma: Arc::new(OnceLock::new()),
        }
    }

    /// Parse `src`, classify it and wrap it.
    pub fn from_text(src: &str) -> Result<Self> {
        let expr = crate::expr::parse(src)?;
        let probe = Self::new(src, expr, 0, Shape::Convex);
        let report = crate::shape::classify(&probe)?;
        Ok(probe.with_order(report.p, report.shape))
    }

    /// Attach any antiderivative `F` of `g`; integrals use `F(b) - F(a)`.
    pub fn with_primitive(mut self, primitive: Expr) -> Self {
        self.primitive = Some(primitive);
        self
    }

    /// Replace `(p, shape)`, dropping any cached constant.
    pub fn with_order(mut self, p: usize, shape: Shape) -> Self {
        self.p = p;
        self.shape = shape;
        self.sigma = Arc::new(OnceLock::new());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn primitive(&self) -> Option<&Expr> {
        self.primitive.as_ref()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.expr.eval(x)
    }

    pub fn jet(&self, x: f64, r: usize) -> Result<Jet> {
        self.expr.eval_jet(x, r)
    }

    /// `g^(k)(x)`.
    pub fn derivative(&self, x: f64, k: usize) -> Result<f64> {
        if k == 0 {
            return self.eval(x);
        }
        Ok(self.jet(x, k)?.derivative(k))
    }

    /// `∫_a^b g`, in closed form when a primitive is attached.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if let Some(f) = &self.primitive {
            return Ok(f.eval(b)? - f.eval(a)?);
        }
        if a == b {
            return Ok(0.0);
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let scale = 1e-13 * (1.0 + (hi - lo));
        Ok(sign * integrate(|t| self.eval(t), lo, hi, scale)?.value)
    }

    /// `g_m(x) = g(x/m)`, same order and shape, primitive `m F(x/m)`.
    pub fn rescaled(&self, m: u32) -> GFunction {
        let inner = Expr::binary(BinaryOp::Div, Expr::Var, Expr::Literal(m as f64));
        let mut out = GFunction::new(
            format!("{}(x/{m})", self.name),
            self.expr.compose(&inner),
            self.p,
            self.shape,
        );
        if let Some(f) = &self.primitive {
            out.primitive = Some(Expr::binary(
                BinaryOp::Mul,
                Expr::Literal(m as f64),
                f.compose(&inner),
            ));
        }
        out
    }

    pub fn cached_sigma(&self) -> Option<f64> {
        self.sigma.get().copied()
    }

    /// Fill the asymptotic-constant slot; later writers are ignored.
    pub fn set_sigma(&self, value: f64) -> f64 {
        *self.sigma.get_or_init(|| value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn primitive_and_quadrature_agree() {
        let with = GFunction::new("xlnx", parse("x*ln(x)").unwrap(), 2, Shape::Convex)
            .with_primitive(parse("x^2*ln(x)/2 - x^2/4").unwrap());
        let without = GFunction::new("xlnx", parse("x*ln(x)").unwrap(), 2, Shape::Convex);
        for (a, b) in [(1.0, 2.0), (0.5, 7.3), (3.0, 1.5)] {
            let c = with.integral(a, b).unwrap();
            let q = without.integral(a, b).unwrap();
            assert!((c - q).abs() < 1e-11 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn rescaling_keeps_primitive_consistent() {
        let g = GFunction::new("ln", parse("ln(x)").unwrap(), 1, Shape::Concave)
            .with_primitive(parse("x*ln(x) - x").unwrap());
        let g3 = g.rescaled(3);
        assert!((g3.eval(6.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        let exact = g3.integral(1.0, 3.0).unwrap();
        let plain = GFunction::new("ln3", g3.expr().clone(), 1, Shape::Concave);
        assert!((exact - plain.integral(1.0, 3.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn sigma_slot_is_write_once() {
        let g = GFunction::new("zero", parse("0").unwrap(), 0, Shape::Convex);
        assert_eq!(g.cached_sigma(), None);
        let shared = g.clone();
        assert_eq!(g.set_sigma(1.5), 1.5);
        assert_eq!(shared.set_sigma(2.5), 1.5);
        assert_eq!(shared.cached_sigma(), Some(1.5));
        assert_eq!(g.with_order(1, Shape::Convex).cached_sigma(), None);
    }
}
