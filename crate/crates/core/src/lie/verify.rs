//! Bracket identities checked directly on constructed operators.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{
    central_closed_form, check_indices, closed_form_constants, fit_structure_constants, fit_table,
    generating_formula_constants, max_k, Family, StructureConstantTable,
};
use crate::boson::{Mismatch, OperatorWithValidity, QuadraticOperator};
use crate::error::Result;
use crate::exact::{format_rational, int, rat, Rational};
use crate::report::{CheckRecord, Status, Verified};
use crate::spectrum::SpectrumData;

/// Compares two operators on the largest radius where both are exact.
pub fn compare_operators(
    lhs: &OperatorWithValidity,
    rhs: &OperatorWithValidity,
) -> Result<(Verified, Vec<Mismatch>)> {
    let radius = lhs.exact_radius.min(rhs.exact_radius);
    let mismatches = lhs.mismatches(rhs, radius)?;
    Ok((Verified::Radius(radius), mismatches))
}

fn zero_like(family: &Family) -> OperatorWithValidity {
    OperatorWithValidity::exact(QuadraticOperator::zero(family.spectrum().clone(), family.window()))
}

/// `Σ_h c_h L_{level,2h} + constant`, with the zero operator when the level
/// is below -1.
fn combination_or_zero(
    family: &Family,
    level: i64,
    coefficients: &BTreeMap<usize, Rational>,
    constant: &Rational,
) -> Result<OperatorWithValidity> {
    if level < -1 {
        let mut z = zero_like(family);
        z.op.add_constant(constant);
        return Ok(z);
    }
    family.combination(level, coefficients, constant)
}

fn record(identity: &str, indices: String, family: &Family, outcome: Result<(Verified, Vec<Mismatch>)>) -> CheckRecord {
    CheckRecord::new(identity, indices, Some(family.window())).from_outcome(outcome)
}

/// `[L_{m,0}, L_{n,0}] = (m-n) L_{m+n,0}`.
pub fn verify_virasoro(family: &Family, m: i64, n: i64) -> CheckRecord {
    let outcome = (|| {
        let lhs = family.l(m, 0)?.commutator(&family.l(n, 0)?)?;
        let rhs = combination_or_zero(family, m + n, &BTreeMap::from([(0, int(m - n))]), &Rational::zero())?;
        compare_operators(&lhs, &rhs)
    })();
    record("[L_(m,0), L_(n,0)] = (m-n) L_(m+n,0)", format!("m={m} n={n}"), family, outcome)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniversalBracket {
    /// `[L_{m,2k}, L_{1,0}]`
    L10,
    /// `[L_{m,2k}, L_{1,2}]`
    L12,
}

/// `[L_{m,2k}, L_{1,0}]` or `[L_{m,2k}, L_{1,2}]` against the universal
/// right-hand sides.
pub fn verify_prop_univ(family: &Family, m: i64, k: usize, which: UniversalBracket) -> CheckRecord {
    let (l, name, identity) = match which {
        UniversalBracket::L10 => (0, "bracket with L_(1,0)", "[L_(m,2k), L_(1,0)]"),
        UniversalBracket::L12 => (1, "bracket with L_(1,2)", "[L_(m,2k), L_(1,2)]"),
    };
    let indices = format!("m={m} k={k}");
    let outcome = (|| {
        check_indices(m, k, 1, l)?;
        let lhs = family.l(m, k)?.commutator(&family.l(1, l)?)?;
        let mut coefficients = BTreeMap::new();
        for h in 0..=max_k(m + 1) {
            let c = closed_form_constants(m, k, 1, l, h)
                .into_iter()
                .find(|c| c.rule == name)
                .map(|c| c.value)
                .unwrap_or_else(Rational::zero);
            coefficients.insert(h, c);
        }
        let central = central_closed_form(m, k, 1, l, family.spectrum().dim());
        let rhs = family.combination(m + 1, &coefficients, &central)?;
        compare_operators(&lhs, &rhs)
    })();
    record(identity, indices, family, outcome)
}

/// `[L_m(1/2), L_n(1/2)] = (m-n) L_{m+n}(1/2) - δ_{m,1}δ_{n,-1} l/8 + δ_{m,-1}δ_{n,1} l/8`.
pub fn verify_half_twist(family: &Family, m: i64, n: i64) -> CheckRecord {
    let outcome = (|| {
        let lhs = family.half_twist(m)?.commutator(&family.half_twist(n)?)?;
        let eighth = rat(family.spectrum().dim() as i64, 8);
        let central = if m == 1 && n == -1 {
            -eighth
        } else if m == -1 && n == 1 {
            eighth
        } else {
            Rational::zero()
        };
        let mut rhs = if m + n >= -1 {
            family.half_twist(m + n)?.scale(&int(m - n))
        } else {
            zero_like(family)
        };
        rhs.op.add_constant(&central);
        compare_operators(&lhs, &rhs)
    })();
    record("[L_m(1/2), L_n(1/2)]", format!("m={m} n={n}"), family, outcome)
}

/// `[L_{2k-1,2k}, L_{2j-1,2j}] = 0`.
pub fn verify_commutative_family(family: &Family, k: usize, j: usize) -> CheckRecord {
    let outcome = (|| {
        let a = family.l(2 * k as i64 - 1, k)?;
        let b = family.l(2 * j as i64 - 1, j)?;
        let lhs = a.commutator(&b)?;
        compare_operators(&lhs, &zero_like(family))
    })();
    record("[L_(2k-1,2k), L_(2j-1,2j)] = 0", format!("k={k} j={j}"), family, outcome)
}

/// `[L_{m,2k}, L_{-1,0}] = (m+1) L_{m-1,2k} - δ_{m,1}δ_{k,1} l/2` and
/// `[L_{m,2k}, L_{0,0}] = m L_{m,2k}` for admissible `m ≤ m_max`.
pub fn verify_constant_brackets(family: &Family, m_max: i64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (m, k) in super::admissible(m_max) {
        let outcome = (|| {
            let lhs = family.l(m, k)?.commutator(&family.l(-1, 0)?)?;
            let central = if m == 1 && k == 1 {
                -rat(family.spectrum().dim() as i64, 2)
            } else {
                Rational::zero()
            };
            let coefficients = if m >= 0 && k <= max_k(m - 1) {
                BTreeMap::from([(k, int(m + 1))])
            } else {
                BTreeMap::new()
            };
            let rhs = combination_or_zero(family, m - 1, &coefficients, &central)?;
            compare_operators(&lhs, &rhs)
        })();
        out.push(record("[L_(m,2k), L_(-1,0)]", format!("m={m} k={k}"), family, outcome));

        let outcome = (|| {
            let lhs = family.l(m, k)?.commutator(&family.l(0, 0)?)?;
            let rhs = family.l(m, k)?.scale(&int(m));
            compare_operators(&lhs, &rhs)
        })();
        out.push(record("[L_(m,2k), L_(0,0)]", format!("m={m} k={k}"), family, outcome));
    }
    out
}

/// Fits one bracket on several spectra and checks that the structure
/// constants agree and that the identity coefficient is proportional to `l`.
pub fn verify_independence(
    spectra: &[(String, Arc<SpectrumData>)],
    window: u32,
    m: i64,
    k: usize,
    n: i64,
    l: usize,
) -> CheckRecord {
    let indices = format!("m={m} k={k} n={n} l={l}");
    let base = CheckRecord::new("independence of the spectrum", indices, Some(window));
    let mut fits = Vec::new();
    for (name, s) in spectra {
        match fit_structure_constants(&Family::new(s.clone(), window), m, k, n, l) {
            Ok(f) => fits.push((name, s.dim(), f)),
            Err(e) => {
                return base
                    .from_outcome(Err(e))
                    .with_detail(format!("fit failed on {name}"));
            }
        }
    }
    let radius = fits.iter().map(|f| f.2.exact_radius).min().unwrap_or(0);
    let Some((first_name, first_dim, first)) = fits.first() else {
        return base.with_status(Status::Pass, Verified::Exact);
    };
    for (name, dim, f) in &fits[1..] {
        if f.coefficients != first.coefficients {
            return base
                .with_status(Status::Fail, Verified::Radius(radius))
                .with_detail(format!("structure constants on {name} differ from {first_name}"));
        }
        let scaled = &first.central / int(*first_dim as i64) * int(*dim as i64);
        if f.central != scaled {
            return base.with_status(Status::Fail, Verified::Radius(radius)).with_detail(format!(
                "identity coefficient {} on {name} is not {} scaled by dimension",
                format_rational(&f.central),
                format_rational(&first.central)
            ));
        }
    }
    base.with_status(Status::Pass, Verified::Radius(radius))
}

/// Fits every admissible bracket with `m, n ≤ m_max` and compares the table
/// with the generating formula, the closed forms, the vanishing below the
/// diagonal and the identity coefficients.
pub fn verify_structure_table(family: &Family, m_max: i64) -> (Option<StructureConstantTable>, Vec<CheckRecord>) {
    let window = Some(family.window());
    let table = match fit_table(family, m_max) {
        Ok(t) => t,
        Err(e) => {
            let rec = CheckRecord::new("exact fit", format!("m,n <= {m_max}"), window).from_outcome(Err(e));
            return (None, vec![rec]);
        }
    };
    let mut out = Vec::new();
    let range = format!("m,n <= {m_max}");

    let viol = table.below_diagonal_violations();
    let mut rec = CheckRecord::new("c vanishes for h < k + l", range.clone(), window);
    rec = if viol.is_empty() {
        rec.with_status(Status::Pass, Verified::Exact)
    } else {
        rec.with_status(Status::Fail, Verified::Exact)
            .with_detail(format!("nonzero at {:?}", viol[0]))
    };
    out.push(rec);

    for m in -1..=m_max {
        for n in -1..=m_max {
            let indices = format!("m={m} n={n}");
            let rec = CheckRecord::new("generating formula", indices, window);
            let rec = match generating_formula_constants(m, n) {
                Ok(gen) => {
                    let zero = Rational::zero();
                    let bad = table
                        .entries
                        .iter()
                        .filter(|((a, _, b, _, _), _)| *a == m && *b == n)
                        .find(|((_, k, _, l, h), c)| gen.get(&(*k, *l, *h)).unwrap_or(&zero) != *c);
                    match bad {
                        None => rec.with_status(Status::Pass, Verified::Exact),
                        Some((key, c)) => rec.with_status(Status::Fail, Verified::Exact).with_detail(format!(
                            "{key:?}: fit {} vs formula {}",
                            format_rational(c),
                            format_rational(gen.get(&(key.1, key.3, key.4)).unwrap_or(&zero))
                        )),
                    }
                }
                Err(e) => rec.from_outcome(Err(e)),
            };
            out.push(rec);
        }
    }

    let mut checked = 0usize;
    let mut flagged = Vec::new();
    let mut failures = Vec::new();
    for (&(m, k, n, l, h), c) in &table.entries {
        for form in closed_form_constants(m, k, n, l, h) {
            checked += 1;
            if &form.value == c {
                continue;
            }
            if form.alternative.as_ref() == Some(c) {
                flagged.push(format!("({m},{k},{n},{l},{h}) [{}]", form.rule));
            } else {
                failures.push(format!(
                    "({m},{k},{n},{l},{h}) [{}]: fit {} vs {}",
                    form.rule,
                    format_rational(c),
                    format_rational(&form.value)
                ));
            }
        }
    }
    let mut rec = CheckRecord::new("closed forms", range.clone(), window);
    rec = if failures.is_empty() {
        rec.with_status(Status::Pass, Verified::Exact)
    } else {
        rec.with_status(Status::Fail, Verified::Exact).with_detail(failures.join("; "))
    };
    if !flagged.is_empty() && failures.is_empty() {
        rec = rec.with_detail(format!(
            "{checked} comparisons; {} match only the delta(h,l) reading of the Kronecker term: {}",
            flagged.len(),
            flagged.join(", ")
        ));
    }
    out.push(rec);

    let dim = family.spectrum().dim();
    let bad = table
        .central
        .iter()
        .find(|(&(m, k, n, l), c)| central_closed_form(m, k, n, l, dim) != **c);
    let mut rec = CheckRecord::new("identity coefficients", range, window);
    rec = match bad {
        None => rec.with_status(Status::Pass, Verified::Exact),
        Some((key, c)) => rec
            .with_status(Status::Fail, Verified::Exact)
            .with_detail(format!("{key:?}: fit {}", format_rational(c))),
    };
    out.push(rec);
    (Some(table), out)
}
