//! Matrix coefficients `N^p_q(r, ν)`, `M^p_q(r, ν)` of the regularized stress
//! tensor and the ν-polynomial operators `L_m(ν)`.
//!
//! The Gamma-function definition
//!
//! ```text
//! N^p_q(r,ν) = (1/π) (e^{R∂_ν})_r [Γ(μ+ν+p+r+1) cos π(μ+ν) Γ(-μ-ν+q+1)]
//! ```
//!
//! reduces by the reflection formula, for `m = p+q+r ≥ -1`, to the
//! polynomial
//!
//! ```text
//! N^p_q(r,ν) = (-1)^{q+1/2} (m+1)! Σ_k (R^k)_r / k! ∂_ν^k binom(ν+μ+p+r, m+1)
//! ```
//!
//! with `(R^k)_r` multiplying from the left, so entry `(α, β)` carries
//! `μ_β`. The sign is pinned against [`gamma_oracle`] in the tests.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use statrs::function::gamma::gamma;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::boson::{DiffOperator, QuadraticOperator, TimeVar};
use crate::error::{Error, Result};
use crate::exact::{int, rat, HalfInt, NuMatrix, Poly, Rational, RationalMatrix};
use crate::exact::factorial;
use crate::report::{CheckRecord, Status, Verified};
use crate::spectrum::{trace_quarter_minus_mu_sq, SpectrumData};

/// `(p, q, r)` contributing to the level `m = p + q + r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoefficientKey {
    pub p: HalfInt,
    pub q: HalfInt,
    pub r: u32,
}

impl CoefficientKey {
    pub fn new(p: HalfInt, q: HalfInt, r: u32) -> Self {
        CoefficientKey { p, q, r }
    }

    pub fn level(&self) -> i64 {
        (self.p + self.q).to_int().expect("half-odd indices") + i64::from(self.r)
    }

    fn check(&self) -> Result<i64> {
        if !self.p.is_half_odd() || !self.q.is_half_odd() {
            return Err(Error::IndexRange(format!(
                "p = {}, q = {} must be half-odd",
                self.p, self.q
            )));
        }
        let m = self.level();
        if m < -1 {
            return Err(Error::IndexRange(format!("level {m} below -1")));
        }
        Ok(m)
    }
}

/// `N^p_q(r, ν)` in closed polynomial form.
pub fn n_matrix(s: &SpectrumData, key: CoefficientKey) -> Result<NuMatrix> {
    let m = key.check()?;
    let l = s.dim();
    let power = s.graded_power(0);
    let mut out = NuMatrix::zeros(l, l);
    let degree = (m + 1) as usize;
    let sign = int(-key.q.sign_minus_half());
    let scale = Rational::from_integer(factorial(degree)) * sign;
    let shift = key.p.to_rational() + int(i64::from(key.r));
    // the graded parts (R^k)_r vanish for k > r
    for k in 0..=key.r {
        let rk = if k == 0 { power.clone() } else { s.graded_power(k) };
        let Some(part) = rk.part(key.r) else { continue };
        let inv_fact = Rational::new(BigInt::from(1), factorial(k as usize));
        for beta in 0..l {
            let arg = &Poly::x() + &Poly::constant(&s.mu()[beta] + &shift);
            let d = arg.binom(degree).nth_derivative(k as usize).scale(&(&scale * &inv_fact));
            if d.is_zero() {
                continue;
            }
            for alpha in 0..l {
                let c = part.get(alpha, beta);
                if c.is_zero() {
                    continue;
                }
                let v = out.get(alpha, beta) + &d.scale(c);
                out.set(alpha, beta, v);
            }
        }
    }
    Ok(out)
}

/// `M^p_q(r, ν) = (N^p_q(r, ν) + N^p_q(r, -ν)) / 2`.
pub fn m_matrix(s: &SpectrumData, key: CoefficientKey) -> Result<NuMatrix> {
    let n = n_matrix(s, key)?;
    Ok((&n + &n.reflect()).map(|p| p.scale(&rat(1, 2))))
}

/// Direct floating-point evaluation of the Gamma/cosine definition of
/// `N^p_q(0, ν)` for spectra with `R = 0`. Used only to pin the closed form.
pub fn gamma_oracle(s: &SpectrumData, key: CoefficientKey, nu: f64) -> Result<Vec<Vec<f64>>> {
    key.check()?;
    if s.has_r() {
        return Err(Error::Unsupported("the Gamma oracle requires R = 0".into()));
    }
    let l = s.dim();
    let mut out = vec![vec![0.0; l]; l];
    if key.r > 0 {
        return Ok(out);
    }
    for (beta, row) in out.iter_mut().enumerate() {
        let y = s.mu()[beta].to_f64().unwrap_or(f64::NAN) + nu;
        let a1 = y + key.p.to_f64() + 1.0;
        let a2 = -y + key.q.to_f64() + 1.0;
        for a in [a1, a2] {
            let nearest = a.round();
            if nearest <= 0.0 && (a - nearest).abs() < 1e-6 {
                return Err(Error::GammaPole {
                    argument: a,
                    p: key.p,
                    q: key.q,
                });
            }
        }
        row[beta] = gamma(a1) * (std::f64::consts::PI * y).cos() * gamma(a2) / std::f64::consts::PI;
    }
    Ok(out)
}

/// `L_m(ν)` as a list of operators indexed by the power of ν.
#[derive(Clone, Debug, PartialEq)]
pub struct NuOperator {
    pub level: i64,
    pub coefficients: Vec<QuadraticOperator>,
}

impl NuOperator {
    pub fn window(&self) -> u32 {
        self.coefficients[0].window()
    }

    /// Highest power of ν with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    /// Powers of ν with odd exponent and a nonzero coefficient.
    pub fn odd_powers(&self) -> Vec<usize> {
        (1..self.coefficients.len())
            .step_by(2)
            .filter(|&i| !self.coefficients[i].is_zero())
            .collect()
    }

    /// `L_{m,2k}`, zero outside `0 ≤ k ≤ ⌊(m+1)/2⌋`.
    pub fn extract(&self, k: usize) -> QuadraticOperator {
        match self.coefficients.get(2 * k) {
            Some(op) => op.clone(),
            None => {
                let c = &self.coefficients[0];
                QuadraticOperator::zero(c.spectrum().clone(), c.window())
            }
        }
    }

    /// `L_m(ν)` at a rational ν.
    pub fn evaluate(&self, nu: &Rational) -> QuadraticOperator {
        let first = &self.coefficients[0];
        let mut acc = QuadraticOperator::zero(first.spectrum().clone(), first.window());
        let mut power = Rational::from_integer(1.into());
        for c in &self.coefficients {
            acc = acc.add_scaled(c, &power).expect("same spectrum and window");
            power *= nu;
        }
        if let Some(span) = first.level_span() {
            acc.declare_levels(span.0, span.1);
        }
        acc
    }
}

/// Smallest window accepted for level `m`.
pub fn min_window(s: &SpectrumData, m: i64) -> u32 {
    (m.unsigned_abs() as u32) + s.r_max() + 2
}

/// Assembles `L_m(ν) = ½ Σ_{p+q+r=m} :a_p M^p_q(r,ν) a^q: + δ_{m,0} tr(1/4-μ²)/4`
/// with `|p|, |q| ≤ W + 1/2`.
pub fn build_l_of_nu(s: &Arc<SpectrumData>, m: i64, window: u32) -> Result<NuOperator> {
    if m < -1 {
        return Err(Error::IndexRange(format!("level {m} below -1")));
    }
    let need = min_window(s, m);
    if window < need {
        return Err(Error::WindowTooSmall {
            window,
            reason: format!("level {m} needs a window of at least {need}"),
        });
    }
    s.require_valid()?;
    let degree = (m + 1) as usize;
    let mut coefficients: Vec<QuadraticOperator> =
        (0..=degree).map(|_| QuadraticOperator::zero(s.clone(), window)).collect();
    let w2 = 2 * i64::from(window) + 1;
    let half = rat(1, 2);
    for r in 0..=s.r_max() {
        for p2 in (-w2..=w2).step_by(2) {
            let p = HalfInt::from_twice(p2);
            let q = HalfInt::from_int(m - i64::from(r)) - p;
            if q.abs().twice() > w2 {
                continue;
            }
            let mm = m_matrix(s, CoefficientKey::new(p, q, r))?;
            for (j, op) in coefficients.iter_mut().enumerate() {
                let c: RationalMatrix = mm.coeff(j);
                if !c.is_zero() {
                    op.add_term(p, q, &c.scale(&half))?;
                }
            }
        }
    }
    if m == 0 {
        coefficients[0].add_constant(&(trace_quarter_minus_mu_sq(s) / int(4)));
    }
    for op in &mut coefficients {
        op.declare_levels(m - i64::from(s.r_max()), m);
    }
    Ok(NuOperator { level: m, coefficients })
}

/// `L_{m,2k}` at window `W`.
pub fn virasoro_like(s: &Arc<SpectrumData>, m: i64, k: usize, window: u32) -> Result<QuadraticOperator> {
    Ok(build_l_of_nu(s, m, window)?.extract(k))
}

/// `L_m(1/2) = Σ_k L_{m,2k} / 4^k`.
pub fn half_twist(s: &Arc<SpectrumData>, m: i64, window: u32) -> Result<QuadraticOperator> {
    Ok(build_l_of_nu(s, m, window)?.evaluate(&rat(1, 2)))
}

/// Evenness in ν and ν-degree `2⌊(m+1)/2⌋` of `L_m(ν)`.
pub fn check_evenness(s: &Arc<SpectrumData>, m: i64, window: u32) -> CheckRecord {
    let rec = CheckRecord::new("L_m(nu) even with degree 2[(m+1)/2]", format!("m={m}"), Some(window));
    let l = match build_l_of_nu(s, m, window) {
        Ok(l) => l,
        Err(e) => return rec.from_outcome(Err(e)),
    };
    let expected = 2 * ((m + 1) / 2) as usize;
    let odd = l.odd_powers();
    if !odd.is_empty() {
        rec.with_status(Status::Fail, Verified::Exact)
            .with_detail(format!("odd powers {odd:?}"))
    } else if l.degree() != Some(expected) {
        rec.with_status(Status::Fail, Verified::Exact)
            .with_detail(format!("degree {:?}, expected {expected}", l.degree()))
    } else {
        rec.with_status(Status::Pass, Verified::Exact)
    }
}

/// `Σ_m t̃^{α,m} ∂_{α,m+2k-1} - ε²/2 Σ_{m=0}^{2k-2} (-1)^m η^{αγ} ∂_{α,m} ∂_{γ,2k-2-m}`
/// with time indices `≤ cap`.
pub fn commuting_generator_form(s: &SpectrumData, k: u32, cap: u32) -> Result<DiffOperator> {
    if k == 0 {
        return Err(Error::IndexRange("commuting generators start at k = 1".into()));
    }
    let eta_inv = s.eta_inv()?;
    let l = s.dim();
    let mut d = DiffOperator::default();
    for a in 0..l {
        for m in 0..=cap.saturating_sub(2 * k - 1) {
            d.add_first_order(TimeVar::new(a, m), TimeVar::new(a, m + 2 * k - 1), int(1));
        }
        for g in 0..l {
            for m in 0..=(2 * k - 2) {
                let sign = if m % 2 == 0 { rat(-1, 2) } else { rat(1, 2) };
                d.add_second_order(TimeVar::new(a, m), TimeVar::new(g, 2 * k - 2 - m), sign * eta_inv.get(a, g));
            }
        }
    }
    Ok(d)
}

/// The constructed `L_{2k-1,2k}` against [`commuting_generator_form`],
/// coefficient by coefficient for time indices `< window`.
pub fn check_commuting_generator_form(s: &Arc<SpectrumData>, k: u32, window: u32) -> CheckRecord {
    let rec = CheckRecord::new("L_(2k-1,2k) differential form", format!("k={k}"), Some(window));
    let cap = window.saturating_sub(1);
    let run = || -> Result<Option<String>> {
        let built = virasoro_like(s, 2 * i64::from(k) - 1, k as usize, window)?.to_diff()?.restrict(cap);
        Ok(built.first_difference(&commuting_generator_form(s, k, cap)?))
    };
    match run() {
        Ok(None) => rec.with_status(Status::Pass, Verified::Radius(cap)),
        Ok(Some(d)) => rec.with_status(Status::Fail, Verified::Radius(cap)).with_detail(d),
        Err(e) => rec.from_outcome(Err(e)),
    }
}

/// Compares the closed form of `N^p_q(0, ν)` with [`gamma_oracle`] at
/// `samples` seeded random keys and values of ν, to relative error
/// `tolerance`. Keys hitting a Gamma pole are redrawn.
pub fn check_gamma_oracle(s: &SpectrumData, samples: usize, seed: u64, tolerance: f64) -> CheckRecord {
    let rec = CheckRecord::new("closed form vs Gamma oracle", format!("{samples} keys, seed {seed}"), None);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    let mut attempts = 0;
    while done < samples {
        attempts += 1;
        if attempts > 100 * samples {
            return rec.from_outcome(Err(Error::Unsupported("could not draw pole-free keys".into())));
        }
        let p2 = 2 * rng.gen_range(-6i64..6) + 1;
        let q2 = 2 * rng.gen_range(-6i64..6) + 1;
        if p2 + q2 < -2 {
            continue;
        }
        let key = CoefficientKey::new(HalfInt::from_twice(p2), HalfInt::from_twice(q2), 0);
        let nu: f64 = rng.gen_range(-0.95..0.95);
        let g = match gamma_oracle(s, key, nu) {
            Ok(g) => g,
            Err(Error::GammaPole { .. }) => continue,
            Err(e) => return rec.from_outcome(Err(e)),
        };
        let n = match n_matrix(s, key) {
            Ok(n) => n,
            Err(e) => return rec.from_outcome(Err(e)),
        };
        for (a, row) in g.iter().enumerate() {
            for (b, gv) in row.iter().enumerate() {
                let c = n.get(a, b).eval_f64(nu);
                let scale = c.abs().max(gv.abs());
                let err = if scale == 0.0 { 0.0 } else { (c - gv).abs() / scale };
                if err.is_nan() || err > tolerance {
                    return rec
                        .with_status(Status::Fail, Verified::None)
                        .with_detail(format!("{key:?} nu={nu} entry ({a},{b}): {c} vs {gv}"));
                }
                worst = worst.max(err);
            }
        }
        done += 1;
    }
    rec.with_status(Status::Pass, Verified::Exact)
        .with_detail(format!("largest relative error {worst:.3e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::catalog;

    fn key(p2: i64, q2: i64, r: u32) -> CoefficientKey {
        CoefficientKey::new(HalfInt::from_twice(p2), HalfInt::from_twice(q2), r)
    }

    #[test]
    fn dim1_anchor_values() {
        let s = catalog("dim1").unwrap();
        let m = m_matrix(&s, key(1, 1, 0)).unwrap();
        let expected = Poly::from_coeffs(vec![rat(1, 4), int(0), int(-1)]);
        assert_eq!(m.get(0, 0), &expected);
        let m = m_matrix(&s, key(-1, -1, 0)).unwrap();
        assert_eq!(m.get(0, 0), &Poly::constant(int(1)));
    }

    #[test]
    fn closed_form_matches_gamma() {
        for name in ["dim1", "a2"] {
            let s = catalog(name).unwrap();
            for (p2, q2) in [(1, 1), (3, -1), (-1, 5), (5, 3), (-3, 7), (7, -7)] {
                let k = key(p2, q2, 0);
                let n = n_matrix(&s, k).unwrap();
                for nu in [0.3141, 0.27, -0.4] {
                    let g = gamma_oracle(&s, k, nu).unwrap();
                    for (a, row) in g.iter().enumerate() {
                        for (b, gv) in row.iter().enumerate() {
                            let c = n.get(a, b).eval_f64(nu);
                            let scale = c.abs().max(gv.abs()).max(1e-300);
                            assert!((c - gv).abs() / scale < 1e-9, "{name} {k:?} {nu}: {c} vs {gv}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_oracle_sweep() {
        for name in ["dim1", "a2"] {
            let r = check_gamma_oracle(&catalog(name).unwrap(), 20, 7, 1e-9);
            assert!(r.passed(), "{r:?}");
        }
        let r = check_gamma_oracle(&catalog("p1").unwrap(), 5, 7, 1e-9);
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn commuting_generators_differential_form() {
        for name in ["dim1", "a2", "p1"] {
            for k in 1..=2 {
                let r = check_commuting_generator_form(&catalog(name).unwrap(), k, 9);
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn oracle_rejects_poles() {
        let s = catalog("dim1").unwrap();
        // Γ(-ν + q + 1) at ν = 1/2, q = -3/2 hits Γ(-1)
        assert!(matches!(
            gamma_oracle(&s, key(1, -3, 0), 0.5),
            Err(Error::GammaPole { .. })
        ));
    }

    #[test]
    fn n_symmetry_with_r() {
        let s = catalog("p1").unwrap();
        let ei = s.eta_inv().unwrap().to_nu();
        let eta = s.eta().to_nu();
        for (p2, q2, r) in [(1, 1, 0), (1, -1, 1), (3, -5, 1), (-3, 1, 1), (5, 1, 1)] {
            let n = n_matrix(&s, key(p2, q2, r)).unwrap();
            let lhs = &(&ei * &n.transpose()) * &eta;
            let rhs = n_matrix(&s, key(q2, p2, r)).unwrap().reflect();
            assert_eq!(lhs, rhs, "({p2}/2, {q2}/2, {r})");
        }
    }

    #[test]
    fn l_of_nu_even_with_expected_degree() {
        for name in ["dim1", "p1"] {
            let s = catalog(name).unwrap();
            for m in -1..=4 {
                let l = build_l_of_nu(&s, m, 8).unwrap();
                assert!(l.odd_powers().is_empty(), "{name} m={m}");
                assert_eq!(l.degree(), Some(2 * ((m + 1) / 2) as usize), "{name} m={m}");
            }
        }
        let s = catalog("dim1").unwrap();
        assert!(matches!(build_l_of_nu(&s, 4, 5), Err(Error::WindowTooSmall { .. })));
    }
}
