//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := ("-")? power
//! power  := atom ("^" factor)?
//! atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
//! ```

use super::{BinaryOp, Constant, Expr, UnaryOp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn syntax(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let len = bytes[start..]
                .iter()
                .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                .count();
            self.pos += len;
            return Ok((Tok::Ident(self.src[start..start + len].to_string()), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(self.syntax(start, format!("unexpected character `{ch}`")))
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let mut n = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            n += digits(&mut i);
        }
        if n == 0 {
            return Err(self.syntax(start, "malformed number"));
        }
        // exponent only if followed by digits, so `2e` stays `2` then `e`
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                i = j;
                digits(&mut i);
            }
        }
        let text = &self.src[start..i];
        let v: f64 = text
            .parse()
            .map_err(|_| self.syntax(start, format!("malformed number `{text}`")))?;
        self.pos = i;
        Ok((Tok::Num(v), start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (t, at) = self.lexer.next()?;
        self.tok = t;
        self.at = at;
        Ok(())
    }

    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.at,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.tok == want {
            self.bump()
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(Expr::unary(UnaryOp::Neg, self.power()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let exp_at = self.at;
        let exponent = self.factor()?;
        if !exponent.is_constant() {
            return Err(Error::Syntax {
                offset: exp_at,
                message: "exponent must not depend on x; write exp(b*ln(a))".into(),
            });
        }
        Ok(Expr::binary(BinaryOp::Pow, base, exponent))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Literal(v))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                self.ident(name, at)
            }
            Tok::End => Err(self.syntax("unexpected end of input")),
            _ => Err(self.syntax("expected a number, identifier or `(`")),
        }
    }

    fn ident(&mut self, name: String, at: usize) -> Result<Expr> {
        let func = match name.as_str() {
            "ln" => Some(UnaryOp::Ln),
            "exp" => Some(UnaryOp::Exp),
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "sqrt" => Some(UnaryOp::Sqrt),
            _ => None,
        };
        let leaf = match name.as_str() {
            "x" => Some(Expr::Var),
            "pi" => Some(Expr::Constant(Constant::Pi)),
            "e" => Some(Expr::Constant(Constant::E)),
            "euler_gamma" => Some(Expr::Constant(Constant::EulerGamma)),
            "ln_glaisher" => Some(Expr::Constant(Constant::LnGlaisher)),
            _ => None,
        };
        let arity = |message: &str| Error::Arity {
            name: name.clone(),
            offset: at,
            message: message.to_string(),
        };
        match (func, leaf) {
            (Some(op), _) => {
                if self.tok != Tok::LParen {
                    return Err(arity("function takes exactly one argument in parentheses"));
                }
                self.bump()?;
                if self.tok == Tok::RParen {
                    return Err(arity("function takes exactly one argument, got none"));
                }
                let arg = self.expr()?;
                if self.tok == Tok::Comma {
                    return Err(arity("function takes exactly one argument"));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::unary(op, arg))
            }
            (None, Some(e)) => {
                if self.tok == Tok::LParen {
                    return Err(arity("not a function"));
                }
                Ok(e)
            }
            (None, None) => Err(Error::UnknownIdentifier { name, offset: at }),
        }
    }
}

/// Parse the text of `g(x)` into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    if src.trim().is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        lexer: Lexer { src, pos: 0 },
        tok: Tok::End,
        at: 0,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(r: Result<Expr>) -> usize {
        match r {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unbalanced_paren_reports_end_offset() {
        assert_eq!(offset(parse("ln(x")), 4);
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("2^3^2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 512.0);
        assert_eq!(parse("-x^2").unwrap().eval(3.0).unwrap(), -9.0);
        assert_eq!(parse("1 - 2 - 3").unwrap().eval(0.0).unwrap(), -4.0);
        assert_eq!(parse("8/4/2").unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(parse("2*-x").unwrap().eval(1.5).unwrap(), -3.0);
        assert_eq!(parse("2^-1").unwrap().eval(0.0).unwrap(), 0.5);
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e2").unwrap(), Expr::Literal(150.0));
        assert_eq!(parse(".25").unwrap(), Expr::Literal(0.25));
        assert_eq!(parse("3.").unwrap(), Expr::Literal(3.0));
        assert_eq!(parse(" 2E-1 ").unwrap(), Expr::Literal(0.2));
        // `2e` is the literal 2 followed by the constant e
        assert_eq!(offset(parse("2e")), 1);
        assert_eq!(offset(parse(".")), 0);
    }

    #[test]
    fn identifiers() {
        assert!(matches!(
            parse("foo(x)"),
            Err(Error::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(parse("ln x"), Err(Error::Arity { .. })));
        assert!(matches!(parse("ln(x, 2)"), Err(Error::Arity { .. })));
        assert!(matches!(parse("ln()"), Err(Error::Arity { .. })));
        assert!(matches!(parse("x(2)"), Err(Error::Arity { .. })));
        assert!(parse("euler_gamma + ln_glaisher * e - pi").is_ok());
    }

    #[test]
    fn rejects_variable_exponent() {
        assert_eq!(offset(parse("2^x")), 2);
        assert!(parse("x^(1/2)").is_ok());
    }

    #[test]
    fn other_syntax_errors() {
        assert_eq!(offset(parse("")), 0);
        assert_eq!(offset(parse("x +")), 3);
        assert_eq!(offset(parse("x )")), 2);
        assert_eq!(offset(parse("--x")), 1);
        assert_eq!(offset(parse("x $ 2")), 2);
    }
}
