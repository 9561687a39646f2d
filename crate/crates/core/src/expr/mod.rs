//! A small expression language for user-defined `g(x)`.
//!
//! Expressions are immutable after parsing. Plain evaluation and Taylor-jet
//! evaluation walk the same tree; the jet path yields `g^(k)(x)/k!` for all
//! `k <= r` in one pass.

mod jet;
mod parse;

use std::fmt;

pub use jet::{Jet, MAX_ORDER};
pub use parse::parse;

use crate::catalog::{EULER_GAMMA, LN_GLAISHER};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
    EulerGamma,
    LnGlaisher,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
            Constant::EulerGamma => EULER_GAMMA,
            Constant::LnGlaisher => LN_GLAISHER,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
            Constant::EulerGamma => "euler_gamma",
            Constant::LnGlaisher => "ln_glaisher",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Ln,
    Exp,
    Sin,
    Cos,
    Sqrt,
}

impl UnaryOp {
    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Ln => "ln",
            UnaryOp::Exp => "exp",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

/// Parsed expression tree in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(f64),
    Constant(Constant),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

fn check(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

impl Expr {
    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// True when the tree never references `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Var => false,
            Expr::Literal(_) | Expr::Constant(_) => true,
            Expr::Unary(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Number of unary and binary operator nodes.
    pub fn operator_count(&self) -> usize {
        match self {
            Expr::Literal(_) | Expr::Constant(_) | Expr::Var => 0,
            Expr::Unary(_, a) => 1 + a.operator_count(),
            Expr::Binary(_, a, b) => 1 + a.operator_count() + b.operator_count(),
        }
    }

    /// Replace every occurrence of `x` with `inner`.
    pub fn compose(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Var => inner.clone(),
            Expr::Literal(_) | Expr::Constant(_) => self.clone(),
            Expr::Unary(op, a) => Expr::unary(*op, a.compose(inner)),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.compose(inner), b.compose(inner)),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Expr::Literal(v) => Ok(*v),
            Expr::Constant(c) => Ok(c.value()),
            Expr::Var => Ok(x),
            Expr::Unary(op, a) => {
                let v = a.eval(x)?;
                let r = match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Ln => {
                        if v <= 0.0 {
                            return Err(Error::Domain { op: "ln", arg: v });
                        }
                        v.ln()
                    }
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Sin => v.sin(),
                    UnaryOp::Cos => v.cos(),
                    UnaryOp::Sqrt => {
                        if v < 0.0 {
                            return Err(Error::Domain { op: "sqrt", arg: v });
                        }
                        v.sqrt()
                    }
                };
                check(r)
            }
            Expr::Binary(op, a, b) => {
                let u = a.eval(x)?;
                let v = b.eval(x)?;
                let r = match op {
                    BinaryOp::Add => u + v,
                    BinaryOp::Sub => u - v,
                    BinaryOp::Mul => u * v,
                    BinaryOp::Div => {
                        if v == 0.0 {
                            return Err(Error::DivisionByZero);
                        }
                        u / v
                    }
                    BinaryOp::Pow => pow_scalar(u, v)?,
                };
                check(r)
            }
        }
    }

    /// Taylor jet of order `r` at `x`.
    pub fn eval_jet(&self, x: f64, r: usize) -> Result<Jet> {
        if r > MAX_ORDER {
            return Err(Error::OutOfRange(format!(
                "jet order {r} exceeds {MAX_ORDER}"
            )));
        }
        let coeffs = self.jet_coeffs(x, r)?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Overflow);
        }
        Ok(Jet { center: x, coeffs })
    }

    fn jet_coeffs(&self, x: f64, r: usize) -> Result<Vec<f64>> {
        Ok(match self {
            Expr::Literal(v) => jet::constant(*v, r),
            Expr::Constant(c) => jet::constant(c.value(), r),
            Expr::Var => jet::variable(x, r),
            Expr::Unary(op, a) => {
                let v = a.jet_coeffs(x, r)?;
                match op {
                    UnaryOp::Neg => jet::neg(&v),
                    UnaryOp::Ln => jet::ln(&v)?,
                    UnaryOp::Exp => jet::exp(&v),
                    UnaryOp::Sin => jet::sin_cos(&v).0,
                    UnaryOp::Cos => jet::sin_cos(&v).1,
                    UnaryOp::Sqrt => jet::sqrt(&v)?,
                }
            }
            Expr::Binary(BinaryOp::Pow, a, b) => {
                let base = a.jet_coeffs(x, r)?;
                jet::powf(&base, b.eval(x)?)?
            }
            Expr::Binary(op, a, b) => {
                let u = a.jet_coeffs(x, r)?;
                let v = b.jet_coeffs(x, r)?;
                match op {
                    BinaryOp::Add => jet::add(&u, &v),
                    BinaryOp::Sub => jet::sub(&u, &v),
                    BinaryOp::Mul => jet::mul(&u, &v),
                    BinaryOp::Div => jet::div(&u, &v)?,
                    BinaryOp::Pow => unreachable!("handled above"),
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Literal(v) if *v < 0.0 => 3,
            Expr::Binary(BinaryOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn pow_scalar(u: f64, v: f64) -> Result<f64> {
    let is_int = v.fract() == 0.0;
    if u == 0.0 && v < 0.0 {
        return Err(Error::DivisionByZero);
    }
    if u < 0.0 && !is_int {
        return Err(Error::Domain { op: "pow", arg: u });
    }
    Ok(if is_int && v.abs() <= i32::MAX as f64 {
        u.powi(v as i32)
    } else {
        u.powf(v)
    })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Literal(v) if *v < 0.0 => write!(f, "-{}", -v),
            Expr::Literal(v) => write!(f, "{v}"),
            Expr::Constant(c) => f.write_str(c.name()),
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, a) => {
                f.write_str("-")?;
                child(f, a, a.precedence() < 4)
            }
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                let (lp, rp) = match op {
                    BinaryOp::Pow => (a.precedence() <= p, b.precedence() < 3),
                    _ => (a.precedence() < p, b.precedence() <= p),
                };
                child(f, a, lp)?;
                write!(f, " {} ", op.symbol())?;
                child(f, b, rp)
            }
        }
    }
}
