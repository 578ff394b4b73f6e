//! Structure constants of the algebra spanned by `id` and the `L_{m,2k}`,
//! obtained by exact fitting of commutators, and the identities they obey.

mod closed;
mod generating;
mod verify;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::boson::OperatorWithValidity;
use crate::error::{Error, Result};
use crate::exact::{format_rational, solve_linear_exact, Rational, RationalMatrix};
use crate::spectrum::SpectrumData;
use crate::stress_tensor::{build_l_of_nu, NuOperator};

pub use closed::{central_closed_form, closed_form_constants, ClosedForm};
pub use generating::{
    check_deformed_generating_function, check_deformed_identities, check_generating_identities,
    check_stirling_expansion, generating_formula_constants, series_a, SeriesCheck,
};
pub use verify::{
    compare_operators, verify_commutative_family, verify_constant_brackets, verify_half_twist,
    verify_independence, verify_prop_univ, verify_structure_table, verify_virasoro, UniversalBracket,
};

/// `⌊(m+1)/2⌋`, the largest `k` with `L_{m,2k}` defined.
pub fn max_k(m: i64) -> usize {
    if m < -1 {
        0
    } else {
        ((m + 1) / 2) as usize
    }
}

/// Lazily built `L_m(ν)` for one spectrum at one window.
pub struct Family {
    spectrum: Arc<SpectrumData>,
    window: u32,
    cache: Mutex<BTreeMap<i64, Arc<NuOperator>>>,
}

impl Family {
    pub fn new(spectrum: Arc<SpectrumData>, window: u32) -> Self {
        Family {
            spectrum,
            window,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn spectrum(&self) -> &Arc<SpectrumData> {
        &self.spectrum
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn l_of_nu(&self, m: i64) -> Result<Arc<NuOperator>> {
        if let Some(op) = self.cache.lock().expect("cache poisoned").get(&m) {
            return Ok(op.clone());
        }
        let built = Arc::new(build_l_of_nu(&self.spectrum, m, self.window)?);
        let mut cache = self.cache.lock().expect("cache poisoned");
        Ok(cache.entry(m).or_insert(built).clone())
    }

    /// `L_{m,2k}`, exact on the whole window; zero when `k > ⌊(m+1)/2⌋`.
    pub fn l(&self, m: i64, k: usize) -> Result<OperatorWithValidity> {
        Ok(OperatorWithValidity::exact(self.l_of_nu(m)?.extract(k)))
    }

    /// `L_m(1/2)`.
    pub fn half_twist(&self, m: i64) -> Result<OperatorWithValidity> {
        Ok(OperatorWithValidity::exact(
            self.l_of_nu(m)?.evaluate(&Rational::new(1.into(), 2.into())),
        ))
    }

    /// `Σ_h c_h L_{level,2h} + constant·id`.
    pub fn combination(
        &self,
        level: i64,
        coefficients: &BTreeMap<usize, Rational>,
        constant: &Rational,
    ) -> Result<OperatorWithValidity> {
        let mut acc = self.l(level.max(-1), 0)?.scale(&Rational::zero());
        for (h, c) in coefficients {
            if !c.is_zero() {
                acc = acc.add_scaled(&self.l(level, *h)?, c)?;
            }
        }
        acc.op.add_constant(constant);
        Ok(acc)
    }
}

/// Result of fitting `[L_{m,2k}, L_{n,2ℓ}]` against `{L_{m+n,2h}} ∪ {id}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub m: i64,
    pub k: usize,
    pub n: i64,
    pub l: usize,
    /// `c_{m,2k,n,2ℓ,2h}` keyed by `h`.
    pub coefficients: BTreeMap<usize, Rational>,
    pub central: Rational,
    pub exact_radius: u32,
    pub equations: usize,
}

fn check_indices(m: i64, k: usize, n: i64, l: usize) -> Result<()> {
    if m < -1 || n < -1 {
        return Err(Error::IndexRange(format!("levels ({m}, {n}) must be at least -1")));
    }
    if k > max_k(m) || l > max_k(n) {
        return Err(Error::IndexRange(format!(
            "L_({m},{}) or L_({n},{}) is not a Virasoro-like operator",
            2 * k,
            2 * l
        )));
    }
    Ok(())
}

/// Admissible `(m, k)` with `-1 ≤ m ≤ m_max`.
pub fn admissible(m_max: i64) -> Vec<(i64, usize)> {
    (-1..=m_max)
        .flat_map(|m| (0..=max_k(m)).map(move |k| (m, k)))
        .collect()
}

/// Fits the bracket exactly. The linear system has one equation per matrix
/// entry of every coefficient inside the exact radius plus one for the
/// constant; it must have full column rank and zero residual.
pub fn fit_structure_constants(family: &Family, m: i64, k: usize, n: i64, l: usize) -> Result<FitResult> {
    check_indices(m, k, n, l)?;
    let bracket = family.l(m, k)?.commutator(&family.l(n, l)?)?;
    let radius = bracket.exact_radius;
    let level = m + n;
    let hs: Vec<usize> = if level >= -1 { (0..=max_k(level)).collect() } else { Vec::new() };
    let basis: Vec<OperatorWithValidity> = hs
        .iter()
        .map(|&h| family.l(level, h))
        .collect::<Result<_>>()?;

    let target = bracket.op.restrict(radius);
    let mut keys: Vec<_> = target.terms().map(|(key, _)| *key).collect();
    for b in &basis {
        keys.extend(b.op.restrict(radius).terms().map(|(key, _)| *key));
    }
    keys.sort();
    keys.dedup();

    let dim = family.spectrum.dim();
    let cols = hs.len() + 1;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for &(p, q) in &keys {
        let t = target.coefficient(p, q);
        let bs: Vec<RationalMatrix> = basis.iter().map(|b| b.op.coefficient(p, q)).collect();
        for a in 0..dim {
            for c in 0..dim {
                let mut row: Vec<Rational> = bs.iter().map(|bm| bm.get(a, c).clone()).collect();
                row.push(Rational::zero());
                rows.push(row);
                rhs.push(t.get(a, c).clone());
            }
        }
    }
    let mut row: Vec<Rational> = basis.iter().map(|b| b.op.constant().clone()).collect();
    row.push(Rational::one());
    rows.push(row);
    rhs.push(bracket.op.constant().clone());

    let equations = rows.len();
    let data: Vec<Rational> = rows.into_iter().flatten().collect();
    let a = RationalMatrix::new(equations, cols, data)?;
    let x = solve_linear_exact(&a, &rhs).map_err(|e| match e {
        Error::Inconsistent { row } => {
            let what = if row + 1 == equations {
                "constant term".to_string()
            } else {
                let key = keys[row / (dim * dim)];
                format!("coefficient ({}, {})", key.0, key.1)
            };
            Error::NonzeroResidual(format!(
                "[L_({m},{}), L_({n},{})] is not in the span at {what}",
                2 * k,
                2 * l
            ))
        }
        other => other,
    })?;
    let central = x[cols - 1].clone();
    let coefficients = hs.iter().zip(x).map(|(&h, c)| (h, c)).collect();
    Ok(FitResult {
        m,
        k,
        n,
        l,
        coefficients,
        central,
        exact_radius: radius,
        equations,
    })
}

/// Convenience wrapper building a fresh family.
pub fn fit_structure_constants_at(
    s: &Arc<SpectrumData>,
    m: i64,
    k: usize,
    n: i64,
    l: usize,
    window: u32,
) -> Result<FitResult> {
    fit_structure_constants(&Family::new(s.clone(), window), m, k, n, l)
}

pub type ConstantKey = (i64, usize, i64, usize, usize);
pub type CentralKey = (i64, usize, i64, usize);

/// `c_{m,2k,n,2ℓ,2h}` keyed by `(m, k, n, ℓ, h)` and the identity
/// coefficients keyed by `(m, k, n, ℓ)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureConstantTable {
    pub entries: BTreeMap<ConstantKey, Rational>,
    pub central: BTreeMap<CentralKey, Rational>,
}

impl StructureConstantTable {
    pub fn insert_fit(&mut self, fit: &FitResult) {
        for (h, c) in &fit.coefficients {
            self.entries.insert((fit.m, fit.k, fit.n, fit.l, *h), c.clone());
        }
        self.central.insert((fit.m, fit.k, fit.n, fit.l), fit.central.clone());
    }

    pub fn get(&self, key: ConstantKey) -> Option<&Rational> {
        self.entries.get(&key)
    }

    /// Entries with `h < k + ℓ` that are nonzero.
    pub fn below_diagonal_violations(&self) -> Vec<ConstantKey> {
        self.entries
            .iter()
            .filter(|((_, k, _, l, h), c)| *h < k + l && !c.is_zero())
            .map(|(key, _)| *key)
            .collect()
    }

    /// First key where the two tables differ, central terms excluded.
    pub fn first_difference(&self, other: &StructureConstantTable) -> Option<ConstantKey> {
        let zero = Rational::zero();
        self.entries
            .keys()
            .chain(other.entries.keys())
            .find(|key| self.entries.get(key).unwrap_or(&zero) != other.entries.get(key).unwrap_or(&zero))
            .copied()
    }

    /// CSV with columns `m,k,n,l,h,value`; identity coefficients appear with
    /// `h` equal to `central`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,k,n,l,h,value\n");
        for ((m, k, n, l, h), c) in &self.entries {
            out.push_str(&format!("{m},{k},{n},{l},{h},{}\n", format_rational(c)));
        }
        for ((m, k, n, l), c) in &self.central {
            out.push_str(&format!("{m},{k},{n},{l},central,{}\n", format_rational(c)));
        }
        out
    }
}

/// Fits every admissible bracket with `m, n ≤ m_max`, in parallel.
pub fn fit_table(family: &Family, m_max: i64) -> Result<StructureConstantTable> {
    let adm = admissible(m_max);
    let tuples: Vec<(i64, usize, i64, usize)> = adm
        .iter()
        .flat_map(|&(m, k)| adm.iter().map(move |&(n, l)| (m, k, n, l)))
        .collect();
    // build the operators up front so workers only read the cache
    for m in -1..=(2 * m_max).max(-1) {
        family.l_of_nu(m)?;
    }
    let fits: Vec<FitResult> = tuples
        .par_iter()
        .map(|&(m, k, n, l)| fit_structure_constants(family, m, k, n, l))
        .collect::<Result<_>>()?;
    let mut table = StructureConstantTable::default();
    for f in &fits {
        table.insert_fit(f);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::spectrum::catalog;

    #[test]
    fn virasoro_constants() {
        let fam = Family::new(catalog("dim1").unwrap(), 10);
        let f = fit_structure_constants(&fam, 2, 0, 1, 0).unwrap();
        assert_eq!(f.coefficients[&0], int(1));
        assert!(f.coefficients[&1].is_zero());
        assert!(f.central.is_zero());
        let f = fit_structure_constants(&fam, 1, 0, -1, 0).unwrap();
        assert_eq!(f.coefficients[&0], int(2));
        assert!(f.central.is_zero());
    }

    #[test]
    fn central_terms() {
        let fam = Family::new(catalog("a2").unwrap(), 10);
        let f = fit_structure_constants(&fam, 1, 1, -1, 0).unwrap();
        assert_eq!(f.central, int(-1));
        let f = fit_structure_constants(&fam, -1, 0, 1, 1).unwrap();
        assert_eq!(f.central, int(1));
        let f = fit_structure_constants(&fam, -1, 0, -1, 0).unwrap();
        assert!(f.coefficients.is_empty() && f.central.is_zero());
    }

    #[test]
    fn rejects_bad_indices() {
        let fam = Family::new(catalog("dim1").unwrap(), 8);
        assert!(matches!(
            fit_structure_constants(&fam, 0, 1, 1, 0),
            Err(Error::IndexRange(_))
        ));
    }

    #[test]
    fn csv_is_sorted() {
        let fam = Family::new(catalog("dim1").unwrap(), 8);
        let t = fit_table(&fam, 1).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("m,k,n,l,h,value\n-1,0,0,0,0,-1\n"));
        assert!(csv.contains("1,0,1,0,0,0\n"));
        assert!(csv.contains("1,1,-1,0,central,-1/2\n"));
    }
}
