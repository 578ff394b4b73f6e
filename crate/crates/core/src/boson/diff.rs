use std::collections::BTreeMap;

use num_traits::Zero;

use super::QuadraticOperator;
use crate::series::TruncatedSeries;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, HalfInt, Rational};

/// The time variable `t^{α,k}` (0-based `α`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeVar {
    pub alpha: usize,
    pub k: u32,
}

impl TimeVar {
    pub fn new(alpha: usize, k: u32) -> Self {
        TimeVar { alpha, k }
    }

    /// `t^{α,|p|-1/2}` for a boson index `p`.
    fn of(alpha: usize, p: HalfInt) -> Self {
        TimeVar::new(alpha, ((p.abs().twice() - 1) / 2) as u32)
    }
}

/// A quadratic operator written in the time variables:
///
/// ```text
/// Σ_{u≤v} A_{uv} ε² ∂_u ∂_v + Σ B_{uv} t̃_u ∂_v + Σ_{u≤v} C_{uv} ε⁻² t̃_u t̃_v + c
/// ```
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiffOperator {
    pub second_order: BTreeMap<(TimeVar, TimeVar), Rational>,
    pub first_order: BTreeMap<(TimeVar, TimeVar), Rational>,
    pub multiplication: BTreeMap<(TimeVar, TimeVar), Rational>,
    pub constant: Rational,
}

fn bump(map: &mut BTreeMap<(TimeVar, TimeVar), Rational>, key: (TimeVar, TimeVar), c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(key).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&key);
    }
}

fn sorted(u: TimeVar, v: TimeVar) -> (TimeVar, TimeVar) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl DiffOperator {
    pub fn add_second_order(&mut self, u: TimeVar, v: TimeVar, c: Rational) {
        bump(&mut self.second_order, sorted(u, v), c);
    }

    pub fn add_first_order(&mut self, mult: TimeVar, deriv: TimeVar, c: Rational) {
        bump(&mut self.first_order, (mult, deriv), c);
    }

    pub fn add_multiplication(&mut self, u: TimeVar, v: TimeVar, c: Rational) {
        bump(&mut self.multiplication, sorted(u, v), c);
    }

    /// Translates through `a_{α,p} = ε ∂/∂t^{α,p-1/2}` for `p > 0` and
    /// `a_{α,p} = ε⁻¹ (-1)^{p+1/2} η_{αβ} t̃^{β,-p-1/2}` for `p < 0`.
    pub fn from_quadratic(op: &QuadraticOperator) -> Result<DiffOperator> {
        let s = op.symmetric_blocks()?;
        let eta = op.spectrum().eta();
        let l = op.spectrum().dim();
        let half = Rational::new(1.into(), 2.into());
        let mut out = DiffOperator {
            constant: op.constant().clone(),
            ..Default::default()
        };
        // -(−1)^{p-1/2} = (−1)^{p+1/2}
        let creation_sign = |p: HalfInt| int(-super::contraction_sign(p));
        for (&(p, q), m) in &s {
            for b in 0..l {
                for e in 0..l {
                    let sv = m.get(b, e);
                    if sv.is_zero() {
                        continue;
                    }
                    let w = sv * &half;
                    match (p.twice() > 0, q.twice() > 0) {
                        (true, true) => {
                            out.add_second_order(TimeVar::of(b, p), TimeVar::of(e, q), w);
                        }
                        (false, true) => {
                            for g in 0..l {
                                let c = &w * creation_sign(p) * eta.get(b, g);
                                out.add_first_order(TimeVar::of(g, p), TimeVar::of(e, q), c);
                            }
                        }
                        (true, false) => {
                            for g in 0..l {
                                let c = &w * creation_sign(q) * eta.get(e, g);
                                out.add_first_order(TimeVar::of(g, q), TimeVar::of(b, p), c);
                            }
                        }
                        (false, false) => {
                            for g in 0..l {
                                for d in 0..l {
                                    let c = &w
                                        * creation_sign(p)
                                        * creation_sign(q)
                                        * eta.get(b, g)
                                        * eta.get(e, d);
                                    out.add_multiplication(TimeVar::of(g, p), TimeVar::of(d, q), c);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest time index appearing anywhere.
    pub fn max_index(&self) -> u32 {
        self.second_order
            .keys()
            .chain(self.first_order.keys())
            .chain(self.multiplication.keys())
            .map(|(u, v)| u.k.max(v.k))
            .max()
            .unwrap_or(0)
    }

    pub fn restrict(&self, max_k: u32) -> DiffOperator {
        let keep = |m: &BTreeMap<(TimeVar, TimeVar), Rational>| {
            m.iter()
                .filter(|((u, v), _)| u.k <= max_k && v.k <= max_k)
                .map(|(k, c)| (*k, c.clone()))
                .collect()
        };
        DiffOperator {
            second_order: keep(&self.second_order),
            first_order: keep(&self.first_order),
            multiplication: keep(&self.multiplication),
            constant: self.constant.clone(),
        }
    }

    /// First differing entry, as a readable description.
    pub fn first_difference(&self, other: &DiffOperator) -> Option<String> {
        if self.constant != other.constant {
            return Some(format!(
                "constant: {} vs {}",
                format_rational(&self.constant),
                format_rational(&other.constant)
            ));
        }
        let blocks = [
            ("second-order", &self.second_order, &other.second_order),
            ("first-order", &self.first_order, &other.first_order),
            ("multiplication", &self.multiplication, &other.multiplication),
        ];
        for (name, a, b) in blocks {
            for key in a.keys().chain(b.keys()) {
                let x = a.get(key).cloned().unwrap_or_else(Rational::zero);
                let y = b.get(key).cloned().unwrap_or_else(Rational::zero);
                if x != y {
                    return Some(format!(
                        "{name} ({}, {}; {}, {}): {} vs {}",
                        key.0.alpha + 1,
                        key.0.k,
                        key.1.alpha + 1,
                        key.1.k,
                        format_rational(&x),
                        format_rational(&y)
                    ));
                }
            }
        }
        None
    }
}

/// The graded pieces of an operator applied to a series `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct AppliedPieces {
    /// `Σ A_{uv} ∂_u F ∂_v F`
    pub quadratic_derivative: TruncatedSeries,
    /// `Σ B_{uv} t̃_u ∂_v F`
    pub first_order: TruncatedSeries,
    /// `Σ C_{uv} t̃_u t̃_v`
    pub multiplication: TruncatedSeries,
    /// `Σ A_{uv} ∂_u ∂_v F`
    pub second_derivative: TruncatedSeries,
    /// `c F`
    pub constant: TruncatedSeries,
}

impl AppliedPieces {
    /// The `ε⁻²` coefficient of `e^{-F/ε²} L e^{F/ε²}`.
    pub fn epsilon_minus_two(&self) -> TruncatedSeries {
        self.quadratic_derivative
            .add(&self.first_order)
            .add(&self.multiplication)
    }
}

/// Applies `op` to `F` through the differential dictionary. The operator may
/// only involve time indices within the cap of `F`.
pub fn apply_first_order(op: &QuadraticOperator, f: &TruncatedSeries) -> Result<AppliedPieces> {
    if op.spectrum().dim() != f.dim() {
        return Err(Error::Dimension(format!(
            "operator on {} bosons, series in {} families",
            op.spectrum().dim(),
            f.dim()
        )));
    }
    let d = DiffOperator::from_quadratic(op)?;
    if d.max_index() > f.cap() {
        return Err(Error::CapExceeded(format!(
            "operator reaches t^(.,{}) but the series stops at index {}",
            d.max_index(),
            f.cap()
        )));
    }
    let (dim, cap, deg) = (f.dim(), f.cap(), f.degree_cap());
    let tt = |v: TimeVar| TruncatedSeries::shifted_var(dim, cap, deg, v.alpha, v.k);

    let mut derivs: BTreeMap<TimeVar, TruncatedSeries> = BTreeMap::new();
    let mut deriv = |v: TimeVar| {
        derivs
            .entry(v)
            .or_insert_with(|| f.derivative(v.alpha, v.k))
            .clone()
    };

    let mut quad = TruncatedSeries::zero(dim, cap, deg);
    let mut second = TruncatedSeries::zero(dim, cap, deg);
    for ((u, v), c) in &d.second_order {
        let du = deriv(*u);
        let dv = deriv(*v);
        quad.add_assign_scaled(&du.mul(&dv), c);
        second.add_assign_scaled(&du.derivative(v.alpha, v.k), c);
    }
    let mut first = TruncatedSeries::zero(dim, cap, deg);
    for ((u, v), c) in &d.first_order {
        first.add_assign_scaled(&tt(*u).mul(&deriv(*v)), c);
    }
    let mut mult = TruncatedSeries::zero(dim, cap, deg);
    for ((u, v), c) in &d.multiplication {
        mult.add_assign_scaled(&tt(*u).mul(&tt(*v)), c);
    }
    Ok(AppliedPieces {
        quadratic_derivative: quad,
        first_order: first,
        multiplication: mult,
        second_derivative: second,
        constant: f.scale(&d.constant),
    })
}

impl QuadraticOperator {
    pub fn to_diff(&self) -> Result<DiffOperator> {
        DiffOperator::from_quadratic(self)
    }

    pub fn apply_first_order(&self, f: &TruncatedSeries) -> Result<AppliedPieces> {
        apply_first_order(self, f)
    }
}
