//! Truncated Taylor series arithmetic.
//!
//! A [`Jet`] of order `r` stores `c_k = f^(k)(center) / k!` for `k = 0..=r`.
//! All operations below propagate the full truncated series in one pass, so a
//! single walk over an expression tree yields every derivative up to `r`.

use crate::error::{Error, Result};

/// Highest jet order the expression engine will produce.
pub const MAX_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub center: f64,
    pub coeffs: Vec<f64>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `k`-th derivative at the center, `k! * c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k] * factorial(k)
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

pub(crate) fn constant(v: f64, r: usize) -> Vec<f64> {
    let mut c = vec![0.0; r + 1];
    c[0] = v;
    c
}

pub(crate) fn variable(x: f64, r: usize) -> Vec<f64> {
    let mut c = constant(x, r);
    if r >= 1 {
        c[1] = 1.0;
    }
    c
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

pub(crate) fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

pub(crate) fn div(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if b[0] == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let n = a.len();
    let mut q = vec![0.0; n];
    for k in 0..n {
        let s: f64 = (1..=k).map(|j| b[j] * q[k - j]).sum();
        q[k] = (a[k] - s) / b[0];
    }
    Ok(q)
}

pub(crate) fn exp(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut e = vec![0.0; n];
    e[0] = a[0].exp();
    for k in 1..n {
        let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
        e[k] = s / k as f64;
    }
    e
}

pub(crate) fn ln(a: &[f64]) -> Result<Vec<f64>> {
    if a[0] <= 0.0 {
        return Err(Error::Domain { op: "ln", arg: a[0] });
    }
    let n = a.len();
    let mut l = vec![0.0; n];
    l[0] = a[0].ln();
    for k in 1..n {
        let s: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
        l[k] = (a[k] - s / k as f64) / a[0];
    }
    Ok(l)
}

pub(crate) fn sin_cos(a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut s = vec![0.0; n];
    let mut c = vec![0.0; n];
    s[0] = a[0].sin();
    c[0] = a[0].cos();
    for k in 1..n {
        let mut ss = 0.0;
        let mut cc = 0.0;
        for j in 1..=k {
            let w = j as f64 * a[j];
            ss += w * c[k - j];
            cc += w * s[k - j];
        }
        s[k] = ss / k as f64;
        c[k] = -cc / k as f64;
    }
    (s, c)
}

pub(crate) fn sqrt(a: &[f64]) -> Result<Vec<f64>> {
    if a[0] < 0.0 {
        return Err(Error::Domain { op: "sqrt", arg: a[0] });
    }
    let n = a.len();
    let mut s = vec![0.0; n];
    s[0] = a[0].sqrt();
    if n > 1 && s[0] == 0.0 {
        return Err(Error::Domain { op: "sqrt", arg: a[0] });
    }
    for k in 1..n {
        let t: f64 = (1..k).map(|j| s[j] * s[k - j]).sum();
        s[k] = (a[k] - t) / (2.0 * s[0]);
    }
    Ok(s)
}

/// `a^c` for a constant exponent `c`.
pub(crate) fn powf(a: &[f64], c: f64) -> Result<Vec<f64>> {
    let n = a.len();
    let is_int = c.fract() == 0.0 && c.abs() < 1e9;
    if is_int && c >= 0.0 {
        // exact for polynomial bases, including a[0] == 0
        let mut e = c as u64;
        let mut base = a.to_vec();
        let mut acc = constant(1.0, n - 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = mul(&base, &base);
            }
        }
        return Ok(acc);
    }
    if a[0] == 0.0 {
        return Err(if c < 0.0 {
            Error::DivisionByZero
        } else {
            Error::Domain { op: "pow", arg: a[0] }
        });
    }
    if a[0] < 0.0 && !is_int {
        return Err(Error::Domain { op: "pow", arg: a[0] });
    }
    let mut p = vec![0.0; n];
    p[0] = if is_int {
        a[0].powi(c as i32)
    } else {
        a[0].powf(c)
    };
    for k in 1..n {
        let s: f64 = (1..=k)
            .map(|j| (c * j as f64 - (k - j) as f64) * a[j] * p[k - j])
            .sum();
        p[k] = s / (k as f64 * a[0]);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_of_variable_at_zero() {
        let e = exp(&variable(0.0, 4));
        for (k, v) in e.iter().enumerate() {
            assert_relative_eq!(*v, 1.0 / factorial(k), epsilon = 1e-15);
        }
    }

    #[test]
    fn ln_inverts_exp() {
        let a = variable(0.7, 6);
        let back = ln(&exp(&a)).unwrap();
        for (x, y) in back.iter().zip(&a) {
            assert_relative_eq!(*x, *y, epsilon = 1e-14);
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let a = variable(2.5, 6);
        let s = sqrt(&a).unwrap();
        let sq = mul(&s, &s);
        for (x, y) in sq.iter().zip(&a) {
            assert_relative_eq!(*x, *y, epsilon = 1e-14);
        }
    }

    #[test]
    fn pow_negative_base_integer_exponent() {
        // (x)^-2 at x = -2: 1/4, derivative -2 x^-3 = 1/4
        let p = powf(&variable(-2.0, 2), -2.0).unwrap();
        assert_relative_eq!(p[0], 0.25, epsilon = 1e-15);
        assert_relative_eq!(p[1], 0.25, epsilon = 1e-15);
        assert!(powf(&variable(-2.0, 2), 0.5).is_err());
    }

    #[test]
    fn division_by_zero_jet() {
        assert_eq!(
            div(&constant(1.0, 2), &constant(0.0, 2)),
            Err(Error::DivisionByZero)
        );
    }
}
