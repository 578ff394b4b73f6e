//! Generating-function descriptions of the structure constants and the
//! Stirling/logarithm identities behind them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::max_k;
use crate::error::{Error, Result};
use crate::exact::{
    binomial, factorial, int, rat, solve_linear_exact, stirling_first_unsigned, Monomial, MPoly, NuMatrix, Poly,
    Rational, RationalMatrix,
};
use crate::spectrum::SpectrumData;

/// Outcome of one exact series or polynomial identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesCheck {
    pub identity: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl SeriesCheck {
    fn new(identity: String, witness: Option<String>) -> Self {
        SeriesCheck {
            identity,
            passed: witness.is_none(),
            witness,
        }
    }
}

fn ratio(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn big(n: num_bigint::BigInt) -> Rational {
    Rational::from_integer(n)
}

fn stirling1(n: usize, k: usize) -> Rational {
    big(stirling_first_unsigned(n, k))
}

// ---------------------------------------------------------------------------
// generating formula in (ν, ν̃, x)

const NU: usize = 0;
const NUT: usize = 1;
const X: usize = 2;

/// `binom(s·v + x + shift, n)` with `v` the variable `var`.
fn binom_linear(var: usize, sign: i64, shift: i64, n: i64) -> MPoly {
    let mut acc = MPoly::constant(3, Rational::one());
    for i in 0..n {
        let mut f = MPoly::var(3, X);
        f.add_term(Monomial::var(3, var), int(sign));
        f.add_term(Monomial::one(3), int(shift - i));
        acc = acc.mul(&f).scale(&ratio(1, i + 1));
    }
    acc
}

fn even_binom(var: usize, shift: i64, n: i64) -> MPoly {
    binom_linear(var, 1, shift, n).add(&binom_linear(var, -1, shift, n))
}

/// `P_h(x) = Σ_{b=2h}^{N} (-1)^b/b! [b, 2h] binom(x, N-b)` with `N = m+n+1`.
fn basis_poly(total: i64, h: usize) -> Poly {
    let mut acc = Poly::zero();
    for b in (2 * h as i64)..=total {
        let c = ratio(if b % 2 == 0 { 1 } else { -1 }, 1) / big(factorial(b as usize))
            * stirling1(b as usize, 2 * h);
        acc = &acc + &Poly::x().binom((total - b) as usize).scale(&c);
    }
    acc
}

/// Solves the generating formula for every `c_{m,2k,n,2ℓ,2h}` at fixed
/// `(m, n)`, keyed by `(k, ℓ, h)`. The identity is expanded over monomials
/// in `(ν, ν̃, x)`; for each `(k, ℓ)` the coefficient of `ν^{2k} ν̃^{2ℓ}`
/// gives a triangular system in the basis `P_h(x)`.
pub fn generating_formula_constants(m: i64, n: i64) -> Result<BTreeMap<(usize, usize, usize), Rational>> {
    if m < -1 || n < -1 {
        return Err(Error::IndexRange(format!("levels ({m}, {n}) must be at least -1")));
    }
    let bracket = even_binom(NU, 0, m + 1)
        .mul(&even_binom(NUT, -m, n + 1))
        .sub(&even_binom(NUT, 0, n + 1).mul(&even_binom(NU, -n, m + 1)));
    let total = m + n + 1;
    if total < 0 {
        if !bracket.is_zero() {
            return Err(Error::Inconsistent { row: 0 });
        }
        return Ok(BTreeMap::new());
    }
    let prefactor = -big(factorial((m + 1) as usize)) * big(factorial((n + 1) as usize))
        / (int(4) * big(factorial(total as usize)));
    let rhs = bracket.scale(&prefactor);

    let mut groups: BTreeMap<(u16, u16), Vec<Rational>> = BTreeMap::new();
    for (mono, c) in rhs.terms() {
        let (a, b, e) = (mono.exponent(NU), mono.exponent(NUT), mono.exponent(X) as usize);
        let g = groups.entry((a, b)).or_default();
        if g.len() <= e {
            g.resize(e + 1, Rational::zero());
        }
        g[e] += c;
    }
    for &(a, b) in groups.keys() {
        if a % 2 == 1 || b % 2 == 1 || a as usize > 2 * max_k(m) || b as usize > 2 * max_k(n) {
            return Err(Error::Inconsistent { row: 0 });
        }
    }

    let hs = max_k(m + n);
    let basis: Vec<Poly> = (0..=hs).map(|h| basis_poly(total, h)).collect();
    let rows = total as usize + 1;
    let a = RationalMatrix::from_fn(rows, hs + 1, |i, h| basis[h].coeff(i));
    let mut out = BTreeMap::new();
    for k in 0..=max_k(m) {
        for l in 0..=max_k(n) {
            let mut target = groups.get(&((2 * k) as u16, (2 * l) as u16)).cloned().unwrap_or_default();
            if target.len() > rows {
                return Err(Error::Inconsistent { row: rows });
            }
            target.resize(rows, Rational::zero());
            let c = solve_linear_exact(&a, &target)?;
            for (h, v) in c.into_iter().enumerate() {
                out.insert((k, l, h), v);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// series in y with polynomial coefficients in x

type YSeries = Vec<Poly>;

fn log1p_series(len: usize) -> Vec<Rational> {
    (0..len)
        .map(|j| {
            if j == 0 {
                Rational::zero()
            } else {
                ratio(if j % 2 == 1 { 1 } else { -1 }, j as i64)
            }
        })
        .collect()
}

fn mul_scalar_series(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len();
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `A_{k,x+shift}(y) = (1+y)^{x+shift} log^k(1+y) / k!`, coefficients of
/// `y^0 .. y^{len-1}`.
pub fn series_a(k: usize, shift: i64, len: usize) -> YSeries {
    let log = log1p_series(len);
    let mut power = vec![Rational::zero(); len];
    power[0] = Rational::one();
    for _ in 0..k {
        power = mul_scalar_series(&power, &log);
    }
    let kf = big(factorial(k));
    let arg = &Poly::x() + &Poly::constant(int(shift));
    let binoms: Vec<Poly> = (0..len).map(|j| arg.binom(j)).collect();
    let mut out = vec![Poly::zero(); len];
    for (i, c) in power.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = c / &kf;
        for j in 0..len - i {
            out[i + j] = &out[i + j] + &binoms[j].scale(&c);
        }
    }
    out
}

fn s_add(a: &YSeries, b: &YSeries) -> YSeries {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn s_scale(a: &YSeries, p: &Poly) -> YSeries {
    a.iter().map(|x| x * p).collect()
}

fn s_shift_up(a: &YSeries, j: usize) -> YSeries {
    let mut out = vec![Poly::zero(); a.len()];
    for i in 0..a.len().saturating_sub(j) {
        out[i + j] = a[i].clone();
    }
    out
}

fn s_div_y(a: &YSeries) -> YSeries {
    let mut out: YSeries = a[1..].to_vec();
    out.push(Poly::zero());
    out
}

fn s_deriv(a: &YSeries) -> YSeries {
    let mut out: YSeries = (1..a.len()).map(|i| a[i].scale(&int(i as i64))).collect();
    out.push(Poly::zero());
    out
}

fn first_difference(a: &YSeries, b: &YSeries, upto: usize) -> Option<String> {
    (0..=upto).find(|&i| a[i] != b[i]).map(|i| format!("y^{i}: {} vs {}", a[i], b[i]))
}

fn xp(coeffs: &[i64]) -> Poly {
    Poly::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
}

/// `a_{m,k}(x) = Σ_{k1=k}^{m+1} (-1)^{k1-k}/k1! [k1, k] binom(x, m+1-k1)`.
fn a_mk(m: i64, k: usize) -> Poly {
    let mut acc = Poly::zero();
    for k1 in k..=((m + 1).max(0) as usize) {
        let sign = if (k1 - k) % 2 == 0 { 1 } else { -1 };
        let c = ratio(sign, 1) / big(factorial(k1)) * stirling1(k1, k);
        acc = &acc + &Poly::x().binom((m + 1) as usize - k1).scale(&c);
    }
    acc
}

/// The logarithmic generating function agrees with its Stirling-number
/// coefficients, and the two second-order identities hold, for
/// `k ≤ k_max` and powers of `y` up to `y_deg`.
pub fn check_generating_identities(k_max: usize, y_deg: usize) -> Vec<SeriesCheck> {
    let len = y_deg + 3;
    let mut out = Vec::new();
    let a: Vec<YSeries> = (0..=2 * k_max + y_deg + 2).map(|j| series_a(j, 0, len)).collect();
    let a_shift: Vec<YSeries> = (0..=2 * k_max).map(|j| series_a(j, -1, len)).collect();
    for j in 0..=2 * k_max {
        let w = (-1..y_deg as i64).find_map(|m| {
            let def = a_mk(m, j);
            (def != a[j][(m + 1) as usize]).then(|| format!("m={m}: {def} vs {}", a[j][(m + 1) as usize]))
        });
        out.push(SeriesCheck::new(format!("Stirling coefficients of A_{j}"), w));
    }
    for k in 0..=k_max {
        let a2k = &a[2 * k];
        let d1 = s_deriv(a2k);
        let d2 = s_deriv(&d1);
        let lhs = [
            s_scale(a2k, &xp(&[0, -1, -1])),
            s_scale(&s_shift_up(&d2, 2), &xp(&[-1])),
            s_scale(&s_shift_up(&d1, 1), &xp(&[0, 2])),
            s_scale(&a_shift[2 * k], &xp(&[0, -1, 1])),
        ]
        .iter()
        .fold(vec![Poly::zero(); len], |acc, s| s_add(&acc, s));
        let mut rhs = s_add(&s_shift_up(&d2, 1), &s_scale(&d1, &xp(&[-2])));
        for h in k.max(1)..=(a.len() - 1) / 2 {
            let c = int(2) * int(2 * h as i64 - 4 * k as i64 + 3) * big(binomial(2 * h as i64, 2 * k as i64 - 2))
                / int(2 * k as i64 - 1);
            if !c.is_zero() {
                rhs = s_add(&rhs, &s_scale(&s_div_y(&a[2 * h]), &Poly::constant(c)));
            }
        }
        out.push(SeriesCheck::new(
            format!("second-order identity with L_(1,0), k={k}"),
            first_difference(&lhs, &rhs, y_deg),
        ));

        let lhs = s_scale(&s_add(a2k, &s_scale(&a_shift[2 * k], &xp(&[-1]))), &xp(&[-1]));
        let mut rhs = vec![Poly::zero(); len];
        for h in (k + 1)..=(a.len() - 1) / 2 {
            let c = int(-2) * big(binomial(2 * h as i64, 2 * k as i64));
            rhs = s_add(&rhs, &s_scale(&s_div_y(&a[2 * h]), &Poly::constant(c)));
        }
        out.push(SeriesCheck::new(
            format!("difference identity with L_(1,2), k={k}"),
            first_difference(&lhs, &rhs, y_deg),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// R-deformed series: matrix coefficients with entries polynomial in x

type MSeries = Vec<NuMatrix>;

fn r_power(s: &SpectrumData, beta: u32, t: u32) -> NuMatrix {
    let l = s.dim();
    s.graded_power(beta)
        .part(t)
        .cloned()
        .unwrap_or_else(|| RationalMatrix::zeros(l, l))
        .to_nu()
}

fn lift(a: &YSeries, m: &NuMatrix) -> MSeries {
    a.iter().map(|p| m.map(|e| e * p)).collect()
}

fn m_add(a: &MSeries, b: &MSeries) -> MSeries {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn m_scale(a: &MSeries, p: &Poly) -> MSeries {
    a.iter().map(|x| x.map(|e| e * p)).collect()
}

fn m_right(a: &MSeries, m: &NuMatrix) -> MSeries {
    a.iter().map(|x| x * m).collect()
}

fn m_shift_up(a: &MSeries, j: usize) -> MSeries {
    let z = a[0].map(|_| Poly::zero());
    (0..a.len()).map(|i| if i >= j { a[i - j].clone() } else { z.clone() }).collect()
}

fn m_div_y(a: &MSeries) -> MSeries {
    let mut out = a[1..].to_vec();
    out.push(a[0].map(|_| Poly::zero()));
    out
}

fn m_deriv(a: &MSeries) -> MSeries {
    let mut out: MSeries = (1..a.len()).map(|i| a[i].map(|e| e.scale(&int(i as i64)))).collect();
    out.push(a[0].map(|_| Poly::zero()));
    out
}

fn m_zero(l: usize, len: usize) -> MSeries {
    vec![NuMatrix::zeros(l, l); len]
}

fn m_first_difference(a: &MSeries, b: &MSeries, upto: usize) -> Option<String> {
    (0..=upto).find(|&i| a[i] != b[i]).map(|i| {
        let d = &a[i] - &b[i];
        let (r, c) = (0..d.rows())
            .flat_map(|r| (0..d.cols()).map(move |c| (r, c)))
            .find(|&(r, c)| !d.get(r, c).is_zero())
            .unwrap_or((0, 0));
        format!("y^{i} entry ({r},{c}): {} vs {}", a[i].get(r, c), b[i].get(r, c))
    })
}

/// `A_{x+shift,k,t}(y) = Σ_β binom(k+β, β) A_{k+β,x+shift}(y) (R^β)_t`.
fn deformed_a(s: &SpectrumData, k: usize, shift: i64, t: u32, len: usize) -> MSeries {
    let mut acc = m_zero(s.dim(), len);
    for beta in 0..len.saturating_sub(k) {
        let rb = r_power(s, beta as u32, t);
        if rb.is_zero() {
            continue;
        }
        let c = big(binomial((k + beta) as i64, beta as i64));
        let term = lift(&series_a(k + beta, shift, len), &rb.map(|e| e.scale(&c)));
        acc = m_add(&acc, &term);
    }
    acc
}

/// The coefficientwise definition of `A_{x,k,t}` through unsigned Stirling
/// numbers agrees with the closed form `(1+y)^x log^k(1+y) ((1+y)^R)_t / k!`.
pub fn check_deformed_generating_function(
    s: &SpectrumData,
    k_max: usize,
    t_max: u32,
    y_deg: usize,
) -> Vec<SeriesCheck> {
    let len = y_deg + 1;
    let mut out = Vec::new();
    for k in 0..=k_max {
        for t in 0..=t_max {
            let closed = deformed_a(s, k, 0, t, len);
            let explicit: MSeries = (0..len)
                .map(|i| {
                    let m = i as i64 - 1;
                    let mut acc = NuMatrix::zeros(s.dim(), s.dim());
                    for k1 in k..=i {
                        let c = Poly::constant(big(binomial(k1 as i64, k as i64)));
                        let coeff = &a_mk(m, k1) * &c;
                        acc = &acc + &r_power(s, (k1 - k) as u32, t).map(|e| e * &coeff);
                    }
                    acc
                })
                .collect();
            out.push(SeriesCheck::new(
                format!("deformed generating function, k={k}, t={t}"),
                m_first_difference(&explicit, &closed, y_deg),
            ));
        }
    }
    out
}

/// The two R-deformed identities behind the brackets with `L_{1,0}` and
/// `L_{1,2}`, for `k ≤ k_max`, `t ≤ t_max`.
pub fn check_deformed_identities(s: &SpectrumData, k_max: usize, t_max: u32, y_deg: usize) -> Vec<SeriesCheck> {
    let len = y_deg + 3;
    let l = s.dim();
    let h_max = (y_deg + 2) / 2;
    let mut out = Vec::new();
    let r1 = |u: u32| r_power(s, 1, u);
    let r2 = |u: u32| r_power(s, 2, u);
    for k in 0..=k_max {
        let a: Vec<MSeries> = (0..=t_max).map(|t| deformed_a(s, 2 * k, 0, t, len)).collect();
        let a1: Vec<MSeries> = (0..=t_max).map(|t| deformed_a(s, 2 * k, -1, t, len)).collect();
        for t in 0..=t_max {
            let high: Vec<MSeries> = (0..=h_max).map(|h| deformed_a(s, 2 * h, 0, t, len)).collect();
            let at = &a[t as usize];
            let d1 = m_deriv(at);
            let d2 = m_deriv(&d1);

            let conv = |f: &dyn Fn(u32) -> NuMatrix, src: &[MSeries], deriv: bool| {
                let mut acc = m_zero(l, len);
                for r in 0..=t {
                    let piece = if deriv { m_deriv(&src[r as usize]) } else { src[r as usize].clone() };
                    acc = m_add(&acc, &m_right(&piece, &f(t - r)));
                }
                acc
            };
            let lhs = [
                m_scale(&m_shift_up(&d2, 2), &xp(&[-1])),
                m_scale(&m_shift_up(&d1, 1), &xp(&[0, 2])),
                m_scale(&m_shift_up(&conv(&r1, &a, true), 1), &xp(&[2])),
                m_scale(at, &xp(&[0, -1, -1])),
                m_scale(&conv(&r1, &a, false), &xp(&[-1, -2])),
                m_scale(&conv(&r2, &a, false), &xp(&[-1])),
                m_scale(&a1[t as usize], &xp(&[0, -1, 1])),
                m_scale(&conv(&r1, &a1, false), &xp(&[-1, 2])),
                conv(&r2, &a1, false),
            ]
            .iter()
            .fold(m_zero(l, len), |acc, x| m_add(&acc, x));
            let mut rhs = m_add(&m_shift_up(&d2, 1), &m_scale(&d1, &xp(&[-2])));
            for h in k.max(1)..=h_max {
                let c = int(2) * int(2 * h as i64 - 4 * k as i64 + 3) * big(binomial(2 * h as i64, 2 * k as i64 - 2))
                    / int(2 * k as i64 - 1);
                rhs = m_add(&rhs, &m_scale(&m_div_y(&high[h]), &Poly::constant(c)));
            }
            out.push(SeriesCheck::new(
                format!("deformed second-order identity, k={k}, t={t}"),
                m_first_difference(&lhs, &rhs, y_deg),
            ));

            let lhs = m_scale(&m_add(at, &m_scale(&a1[t as usize], &xp(&[-1]))), &Poly::constant(rat(1, 2)));
            let mut rhs = m_zero(l, len);
            for h in (k + 1)..=h_max {
                let c = big(binomial(2 * h as i64, 2 * k as i64));
                rhs = m_add(&rhs, &m_scale(&m_div_y(&high[h]), &Poly::constant(c)));
            }
            out.push(SeriesCheck::new(
                format!("deformed difference identity, k={k}, t={t}"),
                m_first_difference(&lhs, &rhs, y_deg),
            ));
        }
    }
    out
}

/// Expansion of `(e^{R∂_ν})_r binom(ν + μ + p + r, m+1)` over powers of
/// `ν` through unsigned Stirling numbers, as an identity of matrices with
/// entries polynomial in `ν`, for `-1 ≤ m ≤ m_max`, `r ≤ r_max` and the
/// given half-integers `p`.
pub fn check_stirling_expansion(s: &SpectrumData, m_max: i64, r_max: u32, ps: &[Rational]) -> Vec<SeriesCheck> {
    let l = s.dim();
    let mu = s.mu();
    let mut out = Vec::new();
    for m in -1..=m_max {
        let top = (m + 1) as usize;
        for r in 0..=r_max {
            for p in ps {
                let mut lhs = NuMatrix::zeros(l, l);
                for j in 0..=top {
                    let rj = r_power(s, j as u32, r);
                    if rj.is_zero() {
                        continue;
                    }
                    let jf = big(factorial(j));
                    let d = NuMatrix::diagonal(
                        &(0..l)
                            .map(|b| {
                                Poly::x()
                                    .shift(&(&mu[b] + p + int(r as i64)))
                                    .binom(top)
                                    .nth_derivative(j)
                                    .scale(&(Rational::one() / &jf))
                            })
                            .collect::<Vec<_>>(),
                    );
                    lhs = &lhs + &(&rj * &d);
                }
                let mut rhs = NuMatrix::zeros(l, l);
                for k in 0..=top {
                    for a in k..=top {
                        let ra = r_power(s, (a - k) as u32, r);
                        if ra.is_zero() {
                            continue;
                        }
                        let diag: Vec<Poly> = (0..l)
                            .map(|al| {
                                let x = &mu[al] + p;
                                let mut acc = Rational::zero();
                                for b in a..=top {
                                    let sign = if (b - a) % 2 == 0 { 1 } else { -1 };
                                    let bx = Poly::constant(x.clone()).binom(top - b).coeff(0);
                                    acc += ratio(sign, 1) / big(factorial(b)) * stirling1(b, a) * bx;
                                }
                                Poly::monomial(acc * big(binomial(a as i64, k as i64)), k)
                            })
                            .collect();
                        rhs = &rhs + &(&NuMatrix::diagonal(&diag) * &ra);
                    }
                }
                out.push(SeriesCheck::new(
                    format!("Stirling expansion, m={m}, r={r}, p={}", crate::exact::format_rational(p)),
                    m_first_difference(&vec![lhs], &vec![rhs], 0),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::catalog;

    #[test]
    fn formula_reproduces_virasoro_row() {
        let c = generating_formula_constants(2, 1).unwrap();
        assert_eq!(c[&(0, 0, 0)], int(1));
        assert!(c[&(0, 0, 1)].is_zero());
        // c_{-1,0,n,2l,2h} = -(n+1) delta(h,l)
        let c = generating_formula_constants(-1, 3).unwrap();
        assert_eq!(c[&(0, 1, 1)], int(-4));
        assert!(c[&(0, 1, 0)].is_zero());
    }

    #[test]
    fn series_identities_hold() {
        for c in check_generating_identities(3, 10) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn deformed_series_on_p1() {
        let s = catalog("p1").unwrap();
        for c in check_deformed_generating_function(&s, 3, 3, 8) {
            assert!(c.passed, "{c:?}");
        }
        for c in check_deformed_identities(&s, 2, 3, 8) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn stirling_expansion_on_catalog() {
        let ps = [rat(1, 2), rat(-3, 2), rat(5, 2)];
        for name in ["dim1", "a2", "p1"] {
            let s = catalog(name).unwrap();
            for c in check_stirling_expansion(&s, 4, 3, &ps) {
                assert!(c.passed, "{name}: {c:?}");
            }
        }
    }
}
