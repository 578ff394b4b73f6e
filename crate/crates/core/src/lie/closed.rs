//! Known closed forms for structure constants.

use num_traits::Zero;

use super::max_k;
use crate::exact::{binomial, int, rat, stirling_second, Rational};

/// One closed-form prediction for `c_{m,2k,n,2ℓ,2h}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub rule: &'static str,
    pub value: Rational,
    /// A second reading of the same formula, when the printed one is
    /// ambiguous.
    pub alternative: Option<Rational>,
}

fn delta(a: i64, b: i64) -> Rational {
    if a == b {
        int(1)
    } else {
        Rational::zero()
    }
}

fn binom_r(n: i64, k: i64) -> Rational {
    Rational::from_integer(binomial(n, k))
}

fn s2(n: i64, k: i64) -> Rational {
    if n < 0 || k < 0 {
        Rational::zero()
    } else {
        Rational::from_integer(stirling_second(n as usize, k as usize))
    }
}

/// Rules stated with the left operator fixed.
fn left_rules(m: i64, k: i64, n: i64, l: i64, h: i64) -> Vec<ClosedForm> {
    let mut out = Vec::new();
    let mut push = |rule, value, alternative| out.push(ClosedForm { rule, value, alternative });
    if k == 0 && l == 0 && h <= max_k(m + n) as i64 {
        push("k = l = 0: (m-n) delta(h,0)", int(m - n) * delta(h, 0), None);
    }
    if m == -1 && l <= h && h <= n / 2 {
        push("m = -1: -(n+1) delta(h,l)", -int(n + 1) * delta(h, l), None);
    }
    if m == 0 && l <= h && h <= (n + 1) / 2 {
        push("m = 0: -n delta(h,l)", -int(n) * delta(h, l), None);
    }
    if m == 1 && k == 0 && l <= h && h <= (n + 2) / 2 {
        let base = if l == 0 {
            Rational::zero()
        } else {
            -int(2) * int(2 * h - 4 * l + 3) * binom_r(2 * h, 2 * l - 2) / (int(n + 2) * int(2 * l - 1))
        };
        push(
            "m = 1, k = 0: Kronecker term printed as delta(h,2l)",
            &base - int(n - 1) * delta(h, 2 * l),
            Some(&base - int(n - 1) * delta(h, l)),
        );
    }
    if k >= 1 && m == 2 * k - 1 && k + l <= h && h <= (n + 2 * k) / 2 {
        let value = int(2) / binom_r(n + 2 * k, n + 1)
            * s2(2 * h - 2 * l, 2 * k - 1)
            * binom_r(2 * h, 2 * l);
        push("m = 2k-1: commuting generator bracket", value, None);
    }
    out
}

/// Rules stated with the right operator fixed (`L_{1,0}`, `L_{1,2}`,
/// `L_{-1,0}`, `L_{0,0}`).
fn right_rules(m: i64, k: i64, n: i64, l: i64, h: i64) -> Vec<ClosedForm> {
    let mut out = Vec::new();
    if h > max_k(m + n) as i64 {
        return out;
    }
    let mut push = |rule, value| out.push(ClosedForm { rule, value, alternative: None });
    if n == 1 && l == 0 {
        let tail = if k == 0 || h < k {
            Rational::zero()
        } else {
            int(2) * int(2 * h - 4 * k + 3) * binom_r(2 * h, 2 * k - 2) / (int(m + 2) * int(2 * k - 1))
        };
        push("bracket with L_(1,0)", int(m - 1) * delta(h, k) + tail);
    }
    if n == 1 && l == 1 {
        let value = if h > k {
            rat(-2, 1) / int(m + 2) * binom_r(2 * h, 2 * k)
        } else {
            Rational::zero()
        };
        push("bracket with L_(1,2)", value);
    }
    if n == -1 && l == 0 {
        push("bracket with L_(-1,0)", int(m + 1) * delta(h, k));
    }
    if n == 0 && l == 0 {
        push("bracket with L_(0,0)", int(m) * delta(h, k));
    }
    out
}

/// Every closed form covering the tuple, including those obtained through
/// antisymmetry `c_{m,2k,n,2ℓ,2h} = -c_{n,2ℓ,m,2k,2h}`. Empty when none
/// applies.
pub fn closed_form_constants(m: i64, k: usize, n: i64, l: usize, h: usize) -> Vec<ClosedForm> {
    let (k, l, h) = (k as i64, l as i64, h as i64);
    let mut out = left_rules(m, k, n, l, h);
    out.extend(right_rules(m, k, n, l, h));
    for mut c in left_rules(n, l, m, k, h).into_iter().chain(right_rules(n, l, m, k, h)) {
        c.value = -c.value;
        c.alternative = c.alternative.map(|a| -a);
        c.rule = swapped(c.rule);
        out.push(c);
    }
    out
}

fn swapped(rule: &'static str) -> &'static str {
    match rule {
        "k = l = 0: (m-n) delta(h,0)" => "k = l = 0 (swapped)",
        "m = -1: -(n+1) delta(h,l)" => "m = -1 (swapped)",
        "m = 0: -n delta(h,l)" => "m = 0 (swapped)",
        "m = 1, k = 0: Kronecker term printed as delta(h,2l)" => "m = 1, k = 0 (swapped)",
        "m = 2k-1: commuting generator bracket" => "m = 2k-1 (swapped)",
        "bracket with L_(1,0)" => "bracket with L_(1,0) (swapped)",
        "bracket with L_(1,2)" => "bracket with L_(1,2) (swapped)",
        "bracket with L_(-1,0)" => "bracket with L_(-1,0) (swapped)",
        "bracket with L_(0,0)" => "bracket with L_(0,0) (swapped)",
        other => other,
    }
}

/// The identity coefficient of `[L_{m,2k}, L_{n,2ℓ}]` for `l` bosons.
pub fn central_closed_form(m: i64, k: usize, n: i64, l: usize, dim: usize) -> Rational {
    let half_l = rat(dim as i64, 2);
    if m == 1 && n == -1 && k == 1 && l == 0 {
        -half_l
    } else if m == -1 && n == 1 && k == 0 && l == 1 {
        half_l
    } else {
        Rational::zero()
    }
}
