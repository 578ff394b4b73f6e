//! Power series in the time variables `t^{α,k}`, `0 ≤ k ≤ K`, truncated at
//! a total degree `D`.

use num_traits::{One, Zero};

use crate::exact::{MPoly, Monomial, Rational};

/// Truncated multivariate series. Variable `t^{α,k}` (0-based `α`) has
/// index `α (K+1) + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    dim: usize,
    cap: u32,
    degree: u32,
    poly: MPoly,
}

impl TruncatedSeries {
    pub fn zero(dim: usize, cap: u32, degree: u32) -> Self {
        TruncatedSeries {
            dim,
            cap,
            degree,
            poly: MPoly::zero(dim * (cap as usize + 1)),
        }
    }

    /// Wraps a polynomial in the time variables, dropping terms above the
    /// degree cap.
    pub fn from_poly(dim: usize, cap: u32, degree: u32, poly: MPoly) -> Self {
        assert_eq!(poly.nvars(), dim * (cap as usize + 1), "variable count");
        TruncatedSeries {
            dim,
            cap,
            degree,
            poly: poly.truncate(degree),
        }
    }

    pub fn constant(dim: usize, cap: u32, degree: u32, c: Rational) -> Self {
        let n = dim * (cap as usize + 1);
        TruncatedSeries::from_poly(dim, cap, degree, MPoly::constant(n, c))
    }

    pub fn nvars(&self) -> usize {
        self.dim * (self.cap as usize + 1)
    }

    pub fn var_index(&self, alpha: usize, k: u32) -> usize {
        alpha * (self.cap as usize + 1) + k as usize
    }

    /// `t^{α,k}`.
    pub fn var(dim: usize, cap: u32, degree: u32, alpha: usize, k: u32) -> Self {
        let mut s = TruncatedSeries::zero(dim, cap, degree);
        let i = s.var_index(alpha, k);
        s.poly = MPoly::var(s.nvars(), i);
        s
    }

    /// `t̃^{α,k} = t^{α,k} - δ^{α,1} δ^{k,1}` (the unit direction is `α = 0`).
    pub fn shifted_var(dim: usize, cap: u32, degree: u32, alpha: usize, k: u32) -> Self {
        let mut s = TruncatedSeries::var(dim, cap, degree, alpha, k);
        if alpha == 0 && k == 1 {
            let n = s.nvars();
            s.poly.add_term(Monomial::one(n), -Rational::one());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn like(&self, poly: MPoly) -> Self {
        TruncatedSeries {
            dim: self.dim,
            cap: self.cap,
            degree: self.degree,
            poly,
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Self {
        self.like(self.poly.add(&other.poly))
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Self {
        self.like(self.poly.sub(&other.poly))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.like(self.poly.scale(c))
    }

    pub fn add_assign_scaled(&mut self, other: &TruncatedSeries, c: &Rational) {
        self.poly.add_assign_scaled(&other.poly, c);
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Self {
        self.like(self.poly.mul_trunc(&other.poly, self.degree))
    }

    pub fn derivative(&self, alpha: usize, k: u32) -> Self {
        self.like(self.poly.derivative(self.var_index(alpha, k)))
    }

    /// Terms of total degree at most `d`.
    pub fn truncate(&self, d: u32) -> Self {
        self.like(self.poly.truncate(d))
    }

    /// Coefficient of `Π (t^{α,k})^e` given as `((α, k), e)` factors.
    pub fn coeff(&self, factors: &[((usize, u32), u16)]) -> Rational {
        let mut m = Monomial::one(self.nvars());
        for &((a, k), e) in factors {
            m.0[self.var_index(a, k)] += e;
        }
        self.poly.coeff(&m)
    }

    /// Lowest total degree of a nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        self.poly.terms().map(|(m, _)| m.degree()).min()
    }

    /// Terms of degree at most `d` that are nonzero, as readable strings.
    pub fn nonzero_terms_up_to(&self, d: u32) -> Vec<String> {
        self.poly
            .terms()
            .filter(|(m, c)| m.degree() <= d && !c.is_zero())
            .map(|(m, c)| format!("{} * {}", crate::exact::format_rational(c), self.describe(m)))
            .collect()
    }

    fn describe(&self, m: &Monomial) -> String {
        let k1 = self.cap as usize + 1;
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let (a, k) = (i / k1 + 1, i % k1);
                if e == 1 {
                    format!("t{a}_{k}")
                } else {
                    format!("t{a}_{k}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn shift_and_truncation() {
        let t11 = TruncatedSeries::shifted_var(2, 3, 2, 0, 1);
        assert_eq!(t11.coeff(&[]), int(-1));
        let sq = t11.mul(&t11);
        assert_eq!(sq.coeff(&[((0, 1), 1)]), int(-2));
        let cube = sq.mul(&t11);
        assert_eq!(cube.coeff(&[((0, 1), 3)]), int(0));
        assert_eq!(cube.coeff(&[((0, 1), 2)]), int(-3));
        assert_eq!(cube.derivative(0, 1).coeff(&[]), int(3));
    }
}
