//! Gregory coefficients and Bernoulli numbers, exact then rounded once.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const MAX_INDEX: usize = 30;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients (ascending powers of t) of `C(t, j)`.
fn binomial_poly(j: usize) -> Vec<BigRational> {
    let mut c = vec![BigRational::one()];
    for i in 0..j {
        // multiply by (t - i) / (i + 1)
        let mut next = vec![BigRational::zero(); c.len() + 1];
        let scale = rat(1, (i + 1) as i64);
        for (k, a) in c.iter().enumerate() {
            let a = a * &scale;
            next[k + 1] += &a;
            next[k] -= a * BigInt::from(i);
        }
        c = next;
    }
    c
}

fn gregory_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_INDEX)
            .map(|j| {
                binomial_poly(j)
                    .into_iter()
                    .enumerate()
                    .map(|(k, a)| a * rat(1, k as i64 + 1))
                    .sum()
            })
            .collect()
    })
}

fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0, which gives B_1 = -1/2
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for m in 1..=MAX_INDEX {
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-acc / BigInt::from(m + 1));
        }
        b
    })
}

/// Exact Gregory coefficient `G_j = ∫_0^1 C(t, j) dt`, with `G_0 = 1`.
///
/// # Panics
/// If `j > 30`.
pub fn gregory_exact(j: usize) -> BigRational {
    assert!(j <= MAX_INDEX, "gregory coefficient index {j} exceeds {MAX_INDEX}");
    gregory_table()[j].clone()
}

/// Gregory coefficient `G_j` as a float: 1/2, -1/12, 1/24, -19/720, ...
///
/// # Panics
/// If `j > 30`.
pub fn gregory_coeff(j: usize) -> f64 {
    static FLOATS: OnceLock<Vec<f64>> = OnceLock::new();
    assert!(j <= MAX_INDEX, "gregory coefficient index {j} exceeds {MAX_INDEX}");
    FLOATS.get_or_init(|| gregory_table().iter().map(to_f64).collect())[j]
}

/// Exact Bernoulli number with `B_1 = -1/2`.
///
/// # Panics
/// If `k > 30`.
pub fn bernoulli_exact(k: usize) -> BigRational {
    assert!(k <= MAX_INDEX, "bernoulli index {k} exceeds {MAX_INDEX}");
    bernoulli_table()[k].clone()
}

/// Bernoulli number `B_k` as a float, `B_1 = -1/2`.
///
/// # Panics
/// If `k > 30`.
pub fn bernoulli_number(k: usize) -> f64 {
    static FLOATS: OnceLock<Vec<f64>> = OnceLock::new();
    assert!(k <= MAX_INDEX, "bernoulli index {k} exceeds {MAX_INDEX}");
    FLOATS.get_or_init(|| bernoulli_table().iter().map(to_f64).collect())[k]
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("coefficient representable as f64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{gen_binomial, integrate};

    #[test]
    fn leading_gregory_coefficients() {
        let expect = [(1, 1, 2), (2, -1, 12), (3, 1, 24), (4, -19, 720), (5, 3, 160), (6, -863, 60480), (7, 275, 24192)];
        for (j, n, d) in expect {
            assert_eq!(gregory_exact(j), rat(n, d), "G_{j}");
        }
        assert_eq!(gregory_coeff(0), 1.0);
    }

    #[test]
    fn gregory_matches_quadrature() {
        for j in 1..=10 {
            let q = integrate(|t| Ok(gen_binomial(t, j)), 0.0, 1.0, 1e-15).unwrap();
            assert!((q.value - gregory_coeff(j)).abs() < 1e-15, "G_{j}");
        }
    }

    #[test]
    fn gregory_signs_alternate_and_shrink() {
        for j in 1..=MAX_INDEX {
            let g = gregory_coeff(j);
            assert_eq!(g > 0.0, j % 2 == 1, "sign of G_{j}");
            if j >= 2 {
                assert!(g.abs() < gregory_coeff(j - 1).abs());
            }
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_exact(0), rat(1, 1));
        assert_eq!(bernoulli_exact(1), rat(-1, 2));
        assert_eq!(bernoulli_exact(2), rat(1, 6));
        assert_eq!(bernoulli_exact(4), rat(-1, 30));
        assert_eq!(bernoulli_exact(12), rat(-691, 2730));
        for k in (3..=MAX_INDEX).step_by(2) {
            assert!(bernoulli_exact(k).is_zero());
        }
        assert_eq!(bernoulli_number(30), 8615841276005.0 / 14322.0);
    }
}
