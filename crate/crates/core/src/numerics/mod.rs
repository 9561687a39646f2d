//! Numeric kernels shared by every other module.
//!
//! Functions that consume `g` take any `Fn(f64) -> Result<f64>` so they work
//! equally on a [`GFunction`](crate::GFunction), an oracle or a closure.

mod accel;
mod coeffs;
mod quad;

pub use accel::{CompensatedSum, Richardson};
pub(crate) use accel::extrapolate;
pub use coeffs::{bernoulli_exact, bernoulli_number, gregory_coeff, gregory_exact};
pub use quad::{integrate, integrate_capped, integrate_singular, Endpoint, QuadResult, MAX_PANELS};

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Highest difference order accepted by [`forward_diff`].
pub const MAX_DIFF_ORDER: usize = 12;

/// Generalized binomial coefficient `C(x, j) = x(x-1)...(x-j+1)/j!`.
pub fn gen_binomial(x: f64, j: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..j {
        c *= (x - i as f64) / (i + 1) as f64;
    }
    c
}

/// `r`-th derivative in `x` of `C(x, j)`.
pub fn gen_binomial_deriv(x: f64, j: usize, r: usize) -> f64 {
    if r == 0 {
        return gen_binomial(x, j);
    }
    if r > j {
        return 0.0;
    }
    // ascending coefficients of the degree-j polynomial
    let mut c = vec![1.0];
    for i in 0..j {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &a) in c.iter().enumerate() {
            next[k + 1] += a / (i + 1) as f64;
            next[k] -= a * i as f64 / (i + 1) as f64;
        }
        c = next;
    }
    for _ in 0..r {
        c = c.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect();
    }
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// `Δ^j f(x)` as the direct binomial-weighted sum of `j + 1` evaluations.
pub fn forward_diff<F>(f: F, x: f64, j: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if j > MAX_DIFF_ORDER {
        return Err(Error::OutOfRange(format!(
            "difference order {j} exceeds {MAX_DIFF_ORDER}"
        )));
    }
    let mut sum = CompensatedSum::new();
    let mut w = 1.0;
    for i in 0..=j {
        // weight (-1)^(j-i) C(j, i), built incrementally from the i = 0 end
        let sign = if (j - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        sum.add(sign * w * f(x + i as f64)?);
        w = w * (j - i) as f64 / (i + 1) as f64;
    }
    Ok(sum.value())
}

/// All of `Δ^0 f(x), ..., Δ^j f(x)` from the `j + 1` values `f(x), ..., f(x+j)`.
pub fn forward_diffs_from_values(values: &[f64]) -> Vec<f64> {
    let mut row = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    while let Some(&head) = row.first() {
        out.push(head);
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

/// Divided difference `f[x_0, ..., x_k]` by the Newton recursion.
pub fn divided_difference<F>(f: F, nodes: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if nodes.is_empty() {
        return Err(Error::OutOfRange("divided difference needs at least one node".into()));
    }
    let values = nodes.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    divided_difference_values(nodes, &values)
}

/// Divided difference from precomputed values `f(nodes[i])`.
pub fn divided_difference_values(nodes: &[f64], values: &[f64]) -> Result<f64> {
    let n = nodes.len();
    for i in 0..n {
        for j in i + 1..n {
            if nodes[i] == nodes[j] {
                return Err(Error::DuplicateNodes);
            }
        }
    }
    let mut table = values.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            table[i] = (table[i + 1] - table[i]) / (nodes[i + level] - nodes[i]);
        }
    }
    Ok(table[0])
}

/// Value at `x` of the polynomial of degree `< p` interpolating `f` at
/// `a, a+1, ..., a+p-1`, in Newton form.
pub fn interp_poly_eval<F>(f: F, a: f64, p: usize, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if p == 0 {
        return Err(Error::OutOfRange("interpolation needs p >= 1".into()));
    }
    let nodes: Vec<f64> = (0..p).map(|i| a + i as f64).collect();
    let values = nodes.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    let mut acc = 0.0;
    let mut basis = 1.0;
    for k in 0..p {
        acc += basis * divided_difference_values(&nodes[..=k], &values[..=k])?;
        basis *= x - nodes[k];
    }
    Ok(acc)
}

const ZETA_MAX: usize = 60;

/// `ζ(n) - 1` for integer `2 <= n <= 60`, absolute error below `1e-16`.
///
/// # Panics
/// If `n` is outside `2..=60`.
pub fn zeta_int_minus_one(n: usize) -> f64 {
    assert!((2..=ZETA_MAX).contains(&n), "zeta_int: n = {n} outside 2..=60");
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    CACHE.get_or_init(|| (0..=ZETA_MAX).map(zeta_tail_from_two).collect())[n]
}

/// Riemann zeta at an integer `2 <= n <= 60`.
///
/// # Panics
/// If `n` is outside `2..=60`.
pub fn zeta_int(n: usize) -> f64 {
    1.0 + zeta_int_minus_one(n)
}

// Σ_{k>=2} k^-n: direct sum to K = 20, then Euler-Maclaurin for the tail.
fn zeta_tail_from_two(n: usize) -> f64 {
    if n < 2 {
        return f64::NAN;
    }
    const K: usize = 20;
    let s = n as f64;
    let mut direct = CompensatedSum::new();
    for k in (2..K).rev() {
        direct.add((k as f64).powf(-s));
    }
    // Σ_{k>=K} k^-s = K^{1-s}/(s-1) + K^-s/2 + Σ_j B_2j/(2j)! s(s+1)...(s+2j-2) K^{-s-2j+1}
    let kf = K as f64;
    let mut tail = kf.powf(1.0 - s) / (s - 1.0) + 0.5 * kf.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    for j in 1..=6 {
        let b = bernoulli_number(2 * j);
        tail += b / fact * rising * kf.powf(-s - 2.0 * j as f64 + 1.0);
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
    }
    direct.add(tail);
    direct.value()
}
