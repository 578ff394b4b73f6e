//! Spectrum data `(η, μ, R)` at infinity, its validation, graded powers of
//! `R` and a small catalog of examples.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, rat, Rational, RationalMatrix};

/// The triple `(η, μ, R)`. `μ` is diagonal and stored as its diagonal;
/// `R = Σ_s R_s` with `R_s` raising μ-eigenvalues by `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumData {
    eta: RationalMatrix,
    eta_inv: Option<RationalMatrix>,
    mu: Vec<Rational>,
    r_parts: BTreeMap<u32, RationalMatrix>,
    charge: Option<Rational>,
}

/// One checked property with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<PropertyCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Graded decomposition of a matrix polynomial in `R`: part `r` satisfies
/// `[μ, P_r] = r P_r`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GradedMatrixPoly {
    pub parts: BTreeMap<u32, RationalMatrix>,
}

impl GradedMatrixPoly {
    pub fn part(&self, r: u32) -> Option<&RationalMatrix> {
        self.parts.get(&r)
    }

    pub fn total(&self, dim: usize) -> RationalMatrix {
        self.parts
            .values()
            .fold(RationalMatrix::zeros(dim, dim), |acc, p| &acc + p)
    }
}

impl SpectrumData {
    /// Builds spectrum data after structural checks only; the algebraic
    /// axioms are checked by [`SpectrumData::validate`].
    pub fn new(
        eta: RationalMatrix,
        mu: Vec<Rational>,
        r_parts: BTreeMap<u32, RationalMatrix>,
        charge: Option<Rational>,
    ) -> Result<Self> {
        let l = eta.rows();
        if l == 0 || !eta.is_square() {
            return Err(Error::Dimension(format!(
                "eta must be a nonempty square matrix, got {}x{}",
                eta.rows(),
                eta.cols()
            )));
        }
        if mu.len() != l {
            return Err(Error::Dimension(format!("mu has {} entries for dimension {l}", mu.len())));
        }
        for (s, r) in &r_parts {
            if *s == 0 {
                return Err(Error::InvalidSpectrum("R grades must be positive".into()));
            }
            if r.rows() != l || r.cols() != l {
                return Err(Error::Dimension(format!("R_{s} is {}x{}, expected {l}x{l}", r.rows(), r.cols())));
            }
        }
        let r_parts = r_parts.into_iter().filter(|(_, r)| !r.is_zero()).collect();
        let eta_inv = eta.inverse().ok();
        Ok(SpectrumData {
            eta,
            eta_inv,
            mu,
            r_parts,
            charge,
        })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn eta(&self) -> &RationalMatrix {
        &self.eta
    }

    pub fn eta_inv(&self) -> Result<&RationalMatrix> {
        self.eta_inv
            .as_ref()
            .ok_or_else(|| Error::InvalidSpectrum("eta is degenerate".into()))
    }

    pub fn mu(&self) -> &[Rational] {
        &self.mu
    }

    pub fn mu_matrix(&self) -> RationalMatrix {
        RationalMatrix::diagonal(&self.mu)
    }

    pub fn r_parts(&self) -> &BTreeMap<u32, RationalMatrix> {
        &self.r_parts
    }

    pub fn r_max(&self) -> u32 {
        self.r_parts.keys().copied().max().unwrap_or(0)
    }

    pub fn has_r(&self) -> bool {
        !self.r_parts.is_empty()
    }

    pub fn charge(&self) -> Option<&Rational> {
        self.charge.as_ref()
    }

    /// Same spectrum with every `R_s` multiplied by `c`. The axioms are
    /// linear in `R`, so admissibility is preserved.
    pub fn rescaled_r(&self, c: &Rational) -> SpectrumData {
        let mut out = self.clone();
        out.r_parts = self
            .r_parts
            .iter()
            .map(|(s, r)| (*s, r.scale(c)))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        out
    }

    /// `η⁻¹ Aᵀ η`, the adjoint with respect to η.
    pub fn eta_adjoint(&self, a: &RationalMatrix) -> Result<RationalMatrix> {
        let ei = self.eta_inv()?;
        Ok(&(ei * &a.transpose()) * &self.eta)
    }

    pub fn validate(&self) -> ValidationReport {
        let l = self.dim();
        let mut checks = Vec::new();
        let mut push = |property: &str, witness: Option<String>| {
            checks.push(PropertyCheck {
                property: property.to_string(),
                passed: witness.is_none(),
                witness,
            })
        };

        let asym = (0..l)
            .flat_map(|a| (0..l).map(move |b| (a, b)))
            .find(|&(a, b)| self.eta.get(a, b) != self.eta.get(b, a));
        push(
            "eta symmetric",
            asym.map(|(a, b)| format!("eta[{a}][{b}] != eta[{b}][{a}]")),
        );

        let det = self.eta.determinant().unwrap_or_else(|_| Rational::zero());
        push(
            "eta nondegenerate",
            det.is_zero().then(|| "det(eta) = 0".to_string()),
        );

        // η⁻¹ μᵀ η = -μ  <=>  (μ_α + μ_β) η_{αβ} = 0
        let bad_mu = (0..l)
            .flat_map(|a| (0..l).map(move |b| (a, b)))
            .find(|&(a, b)| !(&self.mu[a] + &self.mu[b]).is_zero() && !self.eta.get(a, b).is_zero());
        push(
            "mu antisymmetric w.r.t. eta",
            bad_mu.map(|(a, b)| {
                format!(
                    "eta[{a}][{b}] = {} but mu_{a} + mu_{b} = {}",
                    format_rational(self.eta.get(a, b)),
                    format_rational(&(&self.mu[a] + &self.mu[b]))
                )
            }),
        );

        for (s, r) in &self.r_parts {
            // η⁻¹ R_sᵀ η = (-1)^{s+1} R_s  <=>  R_sᵀ η = (-1)^{s+1} η R_s
            let lhs = &r.transpose() * &self.eta;
            let mut rhs = &self.eta * r;
            if s % 2 == 0 {
                rhs = -&rhs;
            }
            let bad = (0..l)
                .flat_map(|a| (0..l).map(move |b| (a, b)))
                .find(|&(a, b)| lhs.get(a, b) != rhs.get(a, b));
            push(
                &format!("R_{s} symmetry"),
                bad.map(|(a, b)| format!("(R_{s}^T eta)[{a}][{b}] violates the sign rule")),
            );

            let s_rat = int(i64::from(*s));
            let bad = (0..l)
                .flat_map(|a| (0..l).map(move |b| (a, b)))
                .find(|&(a, b)| !r.get(a, b).is_zero() && &self.mu[a] - &self.mu[b] != s_rat);
            push(
                &format!("R_{s} grading"),
                bad.map(|(a, b)| {
                    format!(
                        "(R_{s})[{a}][{b}] = {} but mu_{a} - mu_{b} = {}",
                        format_rational(r.get(a, b)),
                        format_rational(&(&self.mu[a] - &self.mu[b]))
                    )
                }),
            );
        }

        let spread = match (self.mu.iter().max(), self.mu.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => Rational::zero(),
        };
        let r_max = int(i64::from(self.r_max()));
        push(
            "R grade bound",
            (r_max > spread).then(|| {
                format!("r_max = {} exceeds mu spread {}", r_max, format_rational(&spread))
            }),
        );

        ValidationReport { checks }
    }

    /// Errors unless every axiom holds.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        let result = match report.failures().next() {
            None => Ok(()),
            Some(f) => Err(Error::InvalidSpectrum(format!(
                "{}: {}",
                f.property,
                f.witness.clone().unwrap_or_default()
            ))),
        };
        result
    }

    /// Graded parts `(R^k)_r` of the `k`-th power of `R`.
    pub fn graded_power(&self, k: u32) -> GradedMatrixPoly {
        let l = self.dim();
        let mut acc: BTreeMap<u32, RationalMatrix> = BTreeMap::from([(0, RationalMatrix::identity(l))]);
        for _ in 0..k {
            let mut next: BTreeMap<u32, RationalMatrix> = BTreeMap::new();
            for (g, p) in &acc {
                for (s, r) in &self.r_parts {
                    let prod = p * r;
                    let slot = next
                        .entry(g + s)
                        .or_insert_with(|| RationalMatrix::zeros(l, l));
                    *slot = &*slot + &prod;
                }
            }
            acc = next.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        }
        GradedMatrixPoly { parts: acc }
    }

    pub fn to_json(&self) -> String {
        let file = SpectrumFile {
            dim: self.dim(),
            eta: self.eta.to_strings(),
            mu: self.mu.iter().map(format_rational).collect(),
            r: self
                .r_parts
                .iter()
                .map(|(s, m)| (s.to_string(), m.to_strings()))
                .collect(),
            charge: self.charge.as_ref().map(format_rational),
        };
        serde_json::to_string_pretty(&file).expect("spectrum serializes")
    }

    pub fn from_json(text: &str) -> Result<SpectrumData> {
        let file: SpectrumFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("spectrum JSON: {e}")))?;
        let eta = RationalMatrix::from_strings(&file.eta)?;
        if eta.rows() != file.dim {
            return Err(Error::Dimension(format!(
                "dim = {} but eta has {} rows",
                file.dim,
                eta.rows()
            )));
        }
        let mu = file
            .mu
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let mut r_parts = BTreeMap::new();
        for (key, m) in &file.r {
            let s: u32 = key
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("R grade `{key}` is not a positive integer")))?;
            r_parts.insert(s, RationalMatrix::from_strings(m)?);
        }
        let charge = file.charge.as_deref().map(parse_rational).transpose()?;
        SpectrumData::new(eta, mu, r_parts, charge)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumFile {
    dim: usize,
    eta: Vec<Vec<String>>,
    mu: Vec<String>,
    #[serde(rename = "R", default)]
    r: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    charge: Option<String>,
}

pub const CATALOG_NAMES: [&str; 3] = ["dim1", "a2", "p1"];

fn antidiagonal() -> RationalMatrix {
    RationalMatrix::new(2, 2, vec![int(0), int(1), int(1), int(0)]).expect("2x2")
}

/// Shipped examples: the one-dimensional manifold, the A₂ singularity and a
/// P¹-type spectrum with a nonzero `R_1`.
pub fn catalog(name: &str) -> Result<Arc<SpectrumData>> {
    let s = match name {
        "dim1" => SpectrumData::new(
            RationalMatrix::identity(1),
            vec![Rational::zero()],
            BTreeMap::new(),
            Some(Rational::zero()),
        ),
        "a2" => SpectrumData::new(
            antidiagonal(),
            vec![rat(-1, 6), rat(1, 6)],
            BTreeMap::new(),
            Some(rat(1, 3)),
        ),
        "p1" => {
            // the value 2 is a normalization convention; any nonzero entry
            // in this slot satisfies the axioms
            let mut r1 = RationalMatrix::zeros(2, 2);
            r1.set(1, 0, int(2));
            SpectrumData::new(
                antidiagonal(),
                vec![rat(-1, 2), rat(1, 2)],
                BTreeMap::from([(1, r1)]),
                Some(Rational::one()),
            )
        }
        other => return Err(Error::UnknownCatalog(other.to_string())),
    }?;
    Ok(Arc::new(s))
}

/// Trace of `1/4 - μ²`, the scalar entering the level-zero operator.
pub fn trace_quarter_minus_mu_sq(s: &SpectrumData) -> Rational {
    s.mu()
        .iter()
        .map(|m| rat(1, 4) - m * m)
        .fold(Rational::zero(), |a, b| a + b)
}

/// Largest absolute value among the μ-eigenvalues.
pub fn mu_abs_max(s: &SpectrumData) -> Rational {
    s.mu().iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_validate() {
        for name in CATALOG_NAMES {
            let s = catalog(name).unwrap();
            let report = s.validate();
            assert!(report.passed(), "{name}: {:?}", report.failures().collect::<Vec<_>>());
        }
        assert_eq!(catalog("k3"), Err(Error::UnknownCatalog("k3".into())));
    }

    #[test]
    fn corrupted_grading_fails() {
        let s = catalog("a2").unwrap();
        let mut r1 = RationalMatrix::zeros(2, 2);
        r1.set(0, 1, int(1));
        let bad = SpectrumData::new(
            s.eta().clone(),
            vec![rat(-1, 2), rat(1, 2)],
            BTreeMap::from([(1, r1)]),
            None,
        )
        .unwrap();
        let report = bad.validate();
        let failed: Vec<_> = report.failures().map(|c| c.property.as_str()).collect();
        assert!(failed.contains(&"R_1 grading"), "{failed:?}");
        assert!(report.checks.iter().find(|c| c.property == "R_1 grading").unwrap().witness.is_some());
    }

    #[test]
    fn structural_errors() {
        let eta = RationalMatrix::identity(2);
        assert!(matches!(
            SpectrumData::new(eta, vec![int(0)], BTreeMap::new(), None),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn graded_powers() {
        let p1 = catalog("p1").unwrap();
        let g0 = p1.graded_power(0);
        assert_eq!(g0.parts.len(), 1);
        assert_eq!(g0.part(0), Some(&RationalMatrix::identity(2)));
        assert_eq!(p1.graded_power(1).parts, p1.r_parts().clone());
        assert!(p1.graded_power(2).parts.is_empty());
        assert!(catalog("a2").unwrap().graded_power(3).parts.is_empty());
    }

    #[test]
    fn json_roundtrip() {
        for name in CATALOG_NAMES {
            let s = catalog(name).unwrap();
            let back = SpectrumData::from_json(&s.to_json()).unwrap();
            assert_eq!(&back, s.as_ref());
        }
        assert!(matches!(SpectrumData::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn rescaling_keeps_axioms() {
        let s = catalog("p1").unwrap().rescaled_r(&rat(-3, 7));
        assert!(s.validate().passed());
        assert_eq!(s.r_parts()[&1].get(1, 0), &rat(-6, 7));
    }
}
