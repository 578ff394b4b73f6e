use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{int, Poly, Rational};

/// Triangular table grown on demand. Readers share the lock; growth takes
/// the write lock once per new row block.
struct Triangle {
    rows: RwLock<Vec<Vec<BigInt>>>,
    next: fn(&[BigInt], usize) -> Vec<BigInt>,
}

impl Triangle {
    const fn new(next: fn(&[BigInt], usize) -> Vec<BigInt>) -> Self {
        Triangle {
            rows: RwLock::new(Vec::new()),
            next,
        }
    }

    fn get(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        {
            let rows = self.rows.read().expect("memo table poisoned");
            if let Some(row) = rows.get(n) {
                return row[k].clone();
            }
        }
        let mut rows = self.rows.write().expect("memo table poisoned");
        if rows.is_empty() {
            rows.push(vec![BigInt::one()]);
        }
        while rows.len() <= n {
            let m = rows.len();
            let row = (self.next)(&rows[m - 1], m);
            rows.push(row);
        }
        rows[n][k].clone()
    }
}

// [n k] = (n-1)[n-1 k] + [n-1 k-1]
fn next_first(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    (0..=n)
        .map(|k| {
            let a = if k < n { &prev[k] * BigInt::from(n - 1) } else { BigInt::zero() };
            let b = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
            a + b
        })
        .collect()
}

// {n k} = k{n-1 k} + {n-1 k-1}
fn next_second(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    (0..=n)
        .map(|k| {
            let a = if k < n { &prev[k] * BigInt::from(k) } else { BigInt::zero() };
            let b = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
            a + b
        })
        .collect()
}

fn next_pascal(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    (0..=n)
        .map(|k| {
            let a = if k < n { prev[k].clone() } else { BigInt::zero() };
            let b = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
            a + b
        })
        .collect()
}

static STIRLING_FIRST: Triangle = Triangle::new(next_first);
static STIRLING_SECOND: Triangle = Triangle::new(next_second);
static PASCAL: Triangle = Triangle::new(next_pascal);
static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Unsigned Stirling number of the first kind: coefficient of `x^k` in the
/// rising factorial `x (x+1) ... (x+n-1)`.
pub fn stirling_first_unsigned(n: usize, k: usize) -> BigInt {
    STIRLING_FIRST.get(n, k)
}

/// Stirling number of the second kind: partitions of an `n`-set into `k`
/// nonempty blocks.
pub fn stirling_second(n: usize, k: usize) -> BigInt {
    STIRLING_SECOND.get(n, k)
}

/// `binom(n, k)` for an arbitrary integer `n`, zero for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        return PASCAL.get(n as usize, k as usize);
    }
    // binom(-a, k) = (-1)^k binom(a+k-1, k)
    let b = PASCAL.get((-n + k - 1) as usize, k as usize);
    if k % 2 == 0 {
        b
    } else {
        -b
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Bernoulli numbers with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    {
        let table = BERNOULLI.read().expect("memo table poisoned");
        if let Some(b) = table.get(n) {
            return b.clone();
        }
    }
    let mut table = BERNOULLI.write().expect("memo table poisoned");
    while table.len() <= n {
        let m = table.len();
        if m == 0 {
            table.push(Rational::one());
            continue;
        }
        if m > 1 && m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from_integer(binomial(m as i64 + 1, j as i64)) * b;
        }
        table.push(-acc / int(m as i64 + 1));
    }
    table[n].clone()
}

/// `binom(arg, n)` as a polynomial, for a polynomial argument such as `x + c`.
pub fn binom_poly(arg: &Poly, n: usize) -> Poly {
    arg.binom(n)
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer_poly(n: usize) -> Poly {
    let mut acc = Poly::from_coeffs(vec![Rational::one()]);
    for i in 0..n {
        acc = &acc * &Poly::from_coeffs(vec![int(i as i64), Rational::one()]);
    }
    acc
}

/// First `(n, k)` with `Σ_j (-1)^{n-j} S(n,j) s(j,k) ≠ δ_{nk}`, `n ≤ n_max`.
pub fn stirling_duality_witness(n_max: usize) -> Option<(usize, usize)> {
    for n in 0..=n_max {
        for k in 0..=n {
            let mut s = BigInt::zero();
            for j in k..=n {
                let t = stirling_second(n, j) * stirling_first_unsigned(j, k);
                if (n - j) % 2 == 0 {
                    s += t;
                } else {
                    s -= t;
                }
            }
            if s != BigInt::from((n == k) as i64) {
                return Some((n, k));
            }
        }
    }
    None
}

/// First `n ≤ n_max` with `Σ_{j≤n} binom(n+1, j) B_j ≠ 0`.
pub fn bernoulli_recurrence_witness(n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| {
        let s: Rational = (0..=n)
            .map(|j| Rational::from_integer(binomial(n as i64 + 1, j as i64)) * bernoulli(j))
            .sum();
        !s.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn stirling_values() {
        assert_eq!(stirling_first_unsigned(0, 0), BigInt::from(1));
        assert_eq!(stirling_first_unsigned(3, 1), BigInt::from(2));
        assert_eq!(stirling_first_unsigned(4, 2), BigInt::from(11));
        assert_eq!(stirling_first_unsigned(2, 5), BigInt::from(0));
        assert_eq!(stirling_second(3, 2), BigInt::from(3));
        assert_eq!(stirling_second(4, 2), BigInt::from(7));
        for n in 0..=8 {
            assert_eq!(stirling_second(n, n), BigInt::from(1));
        }
        assert_eq!(stirling_second(3, 0), BigInt::from(0));
    }

    #[test]
    fn stirling_duality() {
        assert_eq!(stirling_duality_witness(12), None);
    }

    #[test]
    fn pochhammer_matches_stirling() {
        for n in 0..=10 {
            let p = pochhammer_poly(n);
            for k in 0..=n {
                assert_eq!(p.coeff(k), Rational::from_integer(stirling_first_unsigned(n, k)));
            }
        }
    }

    #[test]
    fn second_kind_from_falling_factorials() {
        // x^n = sum_k {n k} x(x-1)...(x-k+1)
        for n in 0..=8 {
            let mut acc = Poly::from_coeffs(vec![]);
            for k in 0..=n {
                let ff = Poly::x().binom(k).scale(&Rational::from_integer(factorial(k)));
                acc = &acc + &ff.scale(&Rational::from_integer(stirling_second(n, k)));
            }
            assert_eq!(acc, Poly::monomial(Rational::one(), n));
        }
    }

    #[test]
    fn bernoulli_values_and_recurrence() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli_recurrence_witness(20), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(3, -1), BigInt::from(0));
        assert_eq!(binom_poly(&Poly::constant(int(0)), 0), Poly::constant(int(1)));
        let b = binom_poly(&Poly::x(), 2);
        assert_eq!(b.eval(&int(3)), int(3));
    }
}
