use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{format_rational, int, Rational};

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Sparse multivariate polynomial with rational coefficients over a fixed
/// number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        MPoly::term(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        MPoly::term(nvars, Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Maximal total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &MPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        out.add_assign_scaled(self, c);
        out
    }

    /// Product, keeping only monomials accepted by `keep`.
    pub fn mul_with(&self, other: &MPoly, keep: impl Fn(&Monomial) -> bool) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let m = ma.mul(mb);
                if keep(&m) {
                    out.add_term(m, a * b);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.mul_with(other, |_| true)
    }

    /// Product truncated at total degree `max_deg`.
    pub fn mul_trunc(&self, other: &MPoly, max_deg: u32) -> MPoly {
        self.mul_with(other, |m| m.degree() <= max_deg)
    }

    pub fn pow_trunc(&self, n: u32, max_deg: u32) -> MPoly {
        let mut acc = MPoly::constant(self.nvars, Rational::one());
        for _ in 0..n {
            acc = acc.mul_trunc(self, max_deg);
        }
        acc
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_deg: u32) -> MPoly {
        self.filter(|m| m.degree() <= max_deg)
    }

    pub fn homogeneous_part(&self, d: u32) -> MPoly {
        self.filter(|m| m.degree() == d)
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * int(i64::from(e)));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum()
    }

    /// Substitutes `values[i]` for variable `i`, truncating the result at
    /// total degree `max_deg`. All substituted values must share one
    /// variable count.
    pub fn substitute(&self, values: &[MPoly], max_deg: u32) -> MPoly {
        assert_eq!(values.len(), self.nvars, "one value per variable");
        let target = values.first().map_or(0, MPoly::nvars);
        // lowest degree of each value bounds which monomials can survive
        let low: Vec<u32> = values
            .iter()
            .map(|v| v.terms.keys().map(Monomial::degree).min().unwrap_or(u32::MAX))
            .collect();
        let mut powers: Vec<Vec<MPoly>> = vec![vec![MPoly::constant(target, Rational::one())]; self.nvars];
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let min_deg: u64 = m
                .0
                .iter()
                .zip(&low)
                .map(|(&e, &l)| u64::from(e) * u64::from(l.min(max_deg + 1)))
                .sum();
            if min_deg > u64::from(max_deg) {
                continue;
            }
            let mut acc = MPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_trunc(&values[i], max_deg);
                    powers[i].push(next);
                }
                acc = acc.mul_trunc(&powers[i][e as usize], max_deg);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign_scaled(&acc, &Rational::one());
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                    .collect();
                if vars.is_empty() {
                    format_rational(c)
                } else {
                    format!("{}*{}", format_rational(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn product_and_derivative() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&Monomial(vec![1, 1])), int(2));
        assert_eq!(sq.derivative(0), s.scale(&int(2)));
        assert!(s.sub(&s).is_zero());
        assert_eq!(sq.eval(&[int(2), rat(1, 2)]), rat(25, 4));
    }

    #[test]
    fn substitution_truncates() {
        // (x+y)^3 with x -> t, y -> t^2, kept to degree 4
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.add(&y).pow_trunc(3, 10);
        let t = MPoly::var(1, 0);
        let t2 = t.mul(&t);
        let r = p.substitute(&[t.clone(), t2], 4);
        assert_eq!(r.coeff(&Monomial(vec![3])), int(1));
        assert_eq!(r.coeff(&Monomial(vec![4])), int(3));
        assert_eq!(r.degree(), Some(4));
    }
}
