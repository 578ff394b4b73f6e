//! Windowed normal-ordered quadratic forms in the boson operators
//! `a_{α,p}`, `p ∈ ℤ+1/2`, with
//! `[a_{α,p}, a_{β,q}] = (-1)^{p-1/2} η_{αβ} δ_{p+q,0}`.
//!
//! # Windows and exact radius
//!
//! An operator built at window `W` stores every coefficient with
//! `|p|, |q| ≤ W + 1/2`; coefficients outside are simply absent even though
//! the infinite operator has them. An [`OperatorWithValidity`] records the
//! radius `ρ` such that all coefficients with `|p|, |q| ≤ ρ + 1/2` agree with
//! the infinite operator.
//!
//! Every operator also tracks the hull `[lo, hi]` of the levels `p + q` it
//! may contain, and its spread `σ = max(|lo|, |hi|)`. In the bracket
//! `[A, B]` the coefficient at `(p, q)` is a sum over contractions at an
//! intermediate index `j` with `p + j` a level of `A` and `q - j` a level of
//! `B`, so `|j| ≤ min(|p| + σ_A, |q| + σ_B)`. All contributions are therefore
//! exact when
//!
//! ```text
//! ρ_[A,B] = min(ρ_A, ρ_B) - min(σ_A, σ_B)
//! ```
//!
//! and the central term, a sum over pairs of annihilation indices with
//! `|p| + |q| ≤ min(σ_A, σ_B)`, is exact whenever this is nonnegative. A
//! negative value is reported as [`Error::WindowTooSmall`].

mod diff;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, rat, HalfInt, Rational, RationalMatrix};
use crate::spectrum::SpectrumData;

pub use diff::{apply_first_order, AppliedPieces, DiffOperator, TimeVar};

/// Index pair `(p, q)` with `p ≤ q`.
pub type Key = (HalfInt, HalfInt);

/// `(-1)^{p-1/2}`, the sign in `[a_p, a_{-p}]`.
pub(crate) fn contraction_sign(p: HalfInt) -> i64 {
    p.sign_minus_half()
}

/// `Σ_{p ≤ q} :a_p A_{pq} a^q: + c` with `a^q = η⁻¹ a_qᵀ`. Each unordered
/// pair is stored once, using `:a_p A a^q: = :a_q (η⁻¹Aᵀη) a^p:`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticOperator {
    spectrum: Arc<SpectrumData>,
    window: u32,
    quad: BTreeMap<Key, RationalMatrix>,
    constant: Rational,
    levels: Option<(i64, i64)>,
}

impl QuadraticOperator {
    pub fn zero(spectrum: Arc<SpectrumData>, window: u32) -> Self {
        QuadraticOperator {
            spectrum,
            window,
            quad: BTreeMap::new(),
            constant: Rational::zero(),
            levels: None,
        }
    }

    /// The identity operator (a pure constant).
    pub fn identity(spectrum: Arc<SpectrumData>, window: u32) -> Self {
        let mut op = QuadraticOperator::zero(spectrum, window);
        op.constant = Rational::one();
        op
    }

    pub fn spectrum(&self) -> &Arc<SpectrumData> {
        &self.spectrum
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn set_constant(&mut self, c: Rational) {
        self.constant = c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &RationalMatrix)> {
        self.quad.iter()
    }

    pub fn len(&self) -> usize {
        self.quad.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quad.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.quad.is_empty() && self.constant.is_zero()
    }

    /// Hull of the levels `p + q` the operator may contain.
    pub fn level_span(&self) -> Option<(i64, i64)> {
        self.levels
    }

    pub fn level_spread(&self) -> u32 {
        self.levels
            .map_or(0, |(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()) as u32)
    }

    /// Declares that the (infinite) operator has levels in `[lo, hi]`.
    pub fn declare_levels(&mut self, lo: i64, hi: i64) {
        self.levels = Some(merge_span(self.levels, (lo, hi)));
    }

    fn check_index(&self, p: HalfInt) -> Result<()> {
        if !p.is_half_odd() {
            return Err(Error::IndexRange(format!("boson index {p} is not half-odd")));
        }
        if p.abs().twice() > 2 * i64::from(self.window) + 1 {
            return Err(Error::IndexRange(format!(
                "index {p} outside window {}",
                self.window
            )));
        }
        Ok(())
    }

    /// Adds `:a_p A a^q:`.
    pub fn add_term(&mut self, p: HalfInt, q: HalfInt, a: &RationalMatrix) -> Result<()> {
        self.check_index(p)?;
        self.check_index(q)?;
        let l = self.spectrum.dim();
        if a.rows() != l || a.cols() != l {
            return Err(Error::Dimension(format!("coefficient must be {l}x{l}")));
        }
        if a.is_zero() {
            return Ok(());
        }
        let level = (p + q).to_int().expect("sum of half-odd indices");
        self.levels = Some(merge_span(self.levels, (level, level)));
        let (key, m) = match p.cmp(&q) {
            std::cmp::Ordering::Less => ((p, q), a.clone()),
            std::cmp::Ordering::Greater => ((q, p), self.spectrum.eta_adjoint(a)?),
            std::cmp::Ordering::Equal => {
                let adj = self.spectrum.eta_adjoint(a)?;
                ((p, p), (a + &adj).scale(&rat(1, 2)))
            }
        };
        self.accumulate(key, m);
        Ok(())
    }

    fn accumulate(&mut self, key: Key, m: RationalMatrix) {
        use std::collections::btree_map::Entry;
        match self.quad.entry(key) {
            Entry::Vacant(e) => {
                if !m.is_zero() {
                    e.insert(m);
                }
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &m;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Stored coefficient for the canonical pair.
    pub fn get(&self, p: HalfInt, q: HalfInt) -> Option<&RationalMatrix> {
        self.quad.get(&(p.min(q), p.max(q)))
    }

    /// Coefficient `A` in the writing `:a_p A a^q:`, in either order.
    pub fn coefficient(&self, p: HalfInt, q: HalfInt) -> RationalMatrix {
        let l = self.spectrum.dim();
        match self.get(p, q) {
            None => RationalMatrix::zeros(l, l),
            Some(a) if p <= q => a.clone(),
            Some(a) => self.spectrum.eta_adjoint(a).expect("validated spectrum"),
        }
    }

    fn compatible(&self, other: &QuadraticOperator) -> Result<()> {
        if !Arc::ptr_eq(&self.spectrum, &other.spectrum) && self.spectrum != other.spectrum {
            return Err(Error::SpectrumMismatch);
        }
        if self.window != other.window {
            return Err(Error::WindowMismatch(self.window, other.window));
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadraticOperator) -> Result<QuadraticOperator> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &QuadraticOperator) -> Result<QuadraticOperator> {
        self.add_scaled(other, &-Rational::one())
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &QuadraticOperator, c: &Rational) -> Result<QuadraticOperator> {
        self.compatible(other)?;
        let mut out = self.clone();
        if c.is_zero() {
            return Ok(out);
        }
        for (k, m) in &other.quad {
            out.accumulate(*k, m.scale(c));
        }
        out.constant += &other.constant * c;
        if let Some(span) = other.levels {
            out.levels = Some(merge_span(out.levels, span));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> QuadraticOperator {
        let mut out = QuadraticOperator::zero(self.spectrum.clone(), self.window);
        if c.is_zero() {
            return out;
        }
        out.quad = self.quad.iter().map(|(k, m)| (*k, m.scale(c))).collect();
        out.constant = &self.constant * c;
        out.levels = self.levels;
        out
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    /// Drops every coefficient with an index outside `radius`.
    pub fn restrict(&self, radius: u32) -> QuadraticOperator {
        let mut out = self.clone();
        out.quad.retain(|(p, q), _| in_radius(*p, radius) && in_radius(*q, radius));
        out
    }

    /// Full symmetric blocks `S[p][q]` with `Q = ½ Σ S_{pq} :a_p a_q:`
    /// (row index of `S` contracts with `a_p`).
    fn symmetric_blocks(&self) -> Result<HashMap<Key, RationalMatrix>> {
        let ei = self.spectrum.eta_inv()?;
        let mut s = HashMap::with_capacity(2 * self.quad.len());
        for (&(p, q), a) in &self.quad {
            let b = a * ei;
            if p == q {
                s.insert((p, p), b.scale(&int(2)));
            } else {
                s.insert((q, p), b.transpose());
                s.insert((p, q), b);
            }
        }
        Ok(s)
    }

    /// `[self, other]` assuming both are exact on their whole window.
    pub fn commutator(&self, other: &QuadraticOperator) -> Result<OperatorWithValidity> {
        OperatorWithValidity::exact(self.clone()).commutator(&OperatorWithValidity::exact(other.clone()))
    }

    fn bracket_raw(&self, other: &QuadraticOperator) -> Result<QuadraticOperator> {
        self.compatible(other)?;
        let eta = self.spectrum.eta();
        let sa = self.symmetric_blocks()?;
        let sb = other.symmetric_blocks()?;

        let mut b_rows: HashMap<HalfInt, Vec<(HalfInt, &RationalMatrix)>> = HashMap::new();
        for ((j, q), m) in &sb {
            b_rows.entry(*j).or_default().push((*q, m));
        }

        // D[p][q] = Σ_j sgn(j) S_A[p][j] η S_B[-j][q]
        let mut d: HashMap<Key, RationalMatrix> = HashMap::new();
        for ((p, j), ma) in &sa {
            let Some(rows) = b_rows.get(&-*j) else { continue };
            let left = &(ma * eta).scale(&int(contraction_sign(*j)));
            for (q, mb) in rows {
                let prod = left * *mb;
                match d.get_mut(&(*p, *q)) {
                    Some(acc) => *acc = &*acc + &prod,
                    None => {
                        d.insert((*p, *q), prod);
                    }
                }
            }
        }

        // S' = D + Dᵀ, then back to canonical coefficients
        let mut out = QuadraticOperator::zero(self.spectrum.clone(), self.window);
        let mut keys: Vec<Key> = d.keys().map(|&(p, q)| (p.min(q), p.max(q))).collect();
        keys.sort();
        keys.dedup();
        let l = self.spectrum.dim();
        for (p, q) in keys {
            let zero = RationalMatrix::zeros(l, l);
            let s = d.get(&(p, q)).unwrap_or(&zero) + &d.get(&(q, p)).unwrap_or(&zero).transpose();
            let a = if p == q {
                (&s * eta).scale(&rat(1, 2))
            } else {
                &s * eta
            };
            out.accumulate((p, q), a);
        }

        // double contractions between pairs of annihilation indices
        let mut c = Rational::zero();
        let half_trace = |x: &HashMap<Key, RationalMatrix>, y: &HashMap<Key, RationalMatrix>| {
            let mut acc = Rational::zero();
            for (&(p, q), mx) in x {
                if p.twice() < 0 || q.twice() < 0 {
                    continue;
                }
                if let Some(my) = y.get(&(-q, -p)) {
                    let t = (&(&(mx * eta) * my) * eta).trace();
                    acc += t * int(contraction_sign(p) * contraction_sign(q));
                }
            }
            acc
        };
        c += half_trace(&sa, &sb);
        c -= half_trace(&sb, &sa);
        out.constant = c / int(2);

        out.levels = match (self.levels, other.levels) {
            (Some((a0, a1)), Some((b0, b1))) => Some((a0 + b0, a1 + b1)),
            _ => None,
        };
        Ok(out)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms = self
            .quad
            .iter()
            .map(|((p, q), m)| TermJson {
                p: p.to_string(),
                q: q.to_string(),
                matrix: m.to_strings(),
            })
            .collect();
        serde_json::to_value(OperatorJson {
            window: self.window,
            constant: format_rational(&self.constant),
            terms,
        })
        .expect("operator serializes")
    }

    pub fn from_json_value(spectrum: Arc<SpectrumData>, value: &serde_json::Value) -> Result<Self> {
        let j: OperatorJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("operator JSON: {e}")))?;
        let mut op = QuadraticOperator::zero(spectrum, j.window);
        op.constant = parse_rational(&j.constant)?;
        for t in &j.terms {
            let p = HalfInt::parse(&t.p)?;
            let q = HalfInt::parse(&t.q)?;
            op.add_term(p, q, &RationalMatrix::from_strings(&t.matrix)?)?;
        }
        Ok(op)
    }
}

impl fmt::Display for QuadraticOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "window {} constant {}", self.window, format_rational(&self.constant))?;
        for ((p, q), m) in &self.quad {
            writeln!(f, "  ({p}, {q}): {:?}", m.to_strings())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    window: u32,
    constant: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    p: String,
    q: String,
    matrix: Vec<Vec<String>>,
}

fn merge_span(a: Option<(i64, i64)>, b: (i64, i64)) -> (i64, i64) {
    match a {
        None => b,
        Some((lo, hi)) => (lo.min(b.0), hi.max(b.1)),
    }
}

pub(crate) fn in_radius(p: HalfInt, radius: u32) -> bool {
    p.abs().twice() <= 2 * i64::from(radius) + 1
}

/// An operator together with the radius within which its coefficients are
/// known to be exact.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorWithValidity {
    pub op: QuadraticOperator,
    pub exact_radius: u32,
}

/// First coefficient where two operators differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    /// `None` for the constant term.
    pub key: Option<(String, String)>,
    pub left: Vec<Vec<String>>,
    pub right: Vec<Vec<String>>,
}

impl OperatorWithValidity {
    /// An operator exact on its whole window.
    pub fn exact(op: QuadraticOperator) -> Self {
        let exact_radius = op.window;
        OperatorWithValidity { op, exact_radius }
    }

    pub fn with_radius(op: QuadraticOperator, exact_radius: u32) -> Self {
        OperatorWithValidity {
            exact_radius: exact_radius.min(op.window),
            op,
        }
    }

    pub fn commutator(&self, other: &OperatorWithValidity) -> Result<OperatorWithValidity> {
        let shrink = self.op.level_spread().min(other.op.level_spread());
        let base = self.exact_radius.min(other.exact_radius);
        let radius = base.checked_sub(shrink).ok_or_else(|| Error::WindowTooSmall {
            window: self.op.window,
            reason: format!(
                "bracket needs exact radius {shrink} but operands are exact only to {base}"
            ),
        })?;
        Ok(OperatorWithValidity {
            op: self.op.bracket_raw(&other.op)?,
            exact_radius: radius,
        })
    }

    pub fn add_scaled(&self, other: &OperatorWithValidity, c: &Rational) -> Result<OperatorWithValidity> {
        Ok(OperatorWithValidity {
            op: self.op.add_scaled(&other.op, c)?,
            exact_radius: self.exact_radius.min(other.exact_radius),
        })
    }

    pub fn add(&self, other: &OperatorWithValidity) -> Result<OperatorWithValidity> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &OperatorWithValidity) -> Result<OperatorWithValidity> {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> OperatorWithValidity {
        OperatorWithValidity {
            op: self.op.scale(c),
            exact_radius: self.exact_radius,
        }
    }

    /// All differing coefficients with indices inside `radius`, the constant
    /// first.
    pub fn mismatches(&self, other: &OperatorWithValidity, radius: u32) -> Result<Vec<Mismatch>> {
        let available = self.exact_radius.min(other.exact_radius);
        if radius > available {
            return Err(Error::RadiusTooLarge {
                requested: radius,
                available,
            });
        }
        self.op.compatible(&other.op)?;
        let mut out = Vec::new();
        if self.op.constant != other.op.constant {
            out.push(Mismatch {
                key: None,
                left: vec![vec![format_rational(&self.op.constant)]],
                right: vec![vec![format_rational(&other.op.constant)]],
            });
        }
        let keys: std::collections::BTreeSet<&Key> = self
            .op
            .quad
            .keys()
            .chain(other.op.quad.keys())
            .filter(|(p, q)| in_radius(*p, radius) && in_radius(*q, radius))
            .collect();
        let l = self.op.spectrum.dim();
        let zero = RationalMatrix::zeros(l, l);
        for k in keys {
            let a = self.op.quad.get(k).unwrap_or(&zero);
            let b = other.op.quad.get(k).unwrap_or(&zero);
            if a != b {
                out.push(Mismatch {
                    key: Some((k.0.to_string(), k.1.to_string())),
                    left: a.to_strings(),
                    right: b.to_strings(),
                });
            }
        }
        Ok(out)
    }

    /// Equality of constants and of all coefficients inside `radius`; on
    /// failure the first differing key is returned.
    pub fn equal_within(&self, other: &OperatorWithValidity, radius: u32) -> Result<Option<Mismatch>> {
        Ok(self.mismatches(other, radius)?.into_iter().next())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::catalog;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let s = catalog("a2").unwrap();
        let a = RationalMatrix::new(2, 2, vec![int(1), int(2), int(3), int(4)]).unwrap();
        let mut x = QuadraticOperator::zero(s.clone(), 4);
        x.add_term(h(3), h(-1), &a).unwrap();
        let mut y = QuadraticOperator::zero(s.clone(), 4);
        y.add_term(h(-1), h(3), &s.eta_adjoint(&a).unwrap()).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.coefficient(h(3), h(-1)), a);

        let mut d = QuadraticOperator::zero(s.clone(), 4);
        d.add_term(h(1), h(1), &a).unwrap();
        let stored = d.get(h(1), h(1)).unwrap().clone();
        let mut e = QuadraticOperator::zero(s, 4);
        e.add_term(h(1), h(1), &stored).unwrap();
        assert_eq!(d, e);
    }

    #[test]
    fn window_is_enforced() {
        let s = catalog("dim1").unwrap();
        let mut x = QuadraticOperator::zero(s, 2);
        let one = RationalMatrix::identity(1);
        assert!(x.add_term(h(5), h(-3), &one).is_ok());
        assert!(matches!(x.add_term(h(7), h(1), &one), Err(Error::IndexRange(_))));
        assert!(matches!(x.add_term(h(2), h(1), &one), Err(Error::IndexRange(_))));
    }

    #[test]
    fn self_bracket_vanishes() {
        let s = catalog("dim1").unwrap();
        let mut x = QuadraticOperator::zero(s, 6);
        x.add_term(h(1), h(-3), &RationalMatrix::identity(1).scale(&int(3))).unwrap();
        x.add_term(h(5), h(3), &RationalMatrix::identity(1)).unwrap();
        x.declare_levels(-1, 4);
        let c = x.commutator(&x).unwrap();
        assert!(c.op.is_zero());
        assert_eq!(c.exact_radius, 2);
    }

    #[test]
    fn single_contraction_constant() {
        // [a a, b b] = 4 b a + 2 for a = a_{1/2}, b = a_{-1/2}, [a, b] = 1
        let s = catalog("dim1").unwrap();
        let one = RationalMatrix::identity(1);
        let mut x = QuadraticOperator::zero(s.clone(), 2);
        x.add_term(h(1), h(1), &one).unwrap();
        let mut y = QuadraticOperator::zero(s, 2);
        y.add_term(h(-1), h(-1), &one).unwrap();
        let c = x.commutator(&y).unwrap().op;
        assert_eq!(c.constant(), &int(2));
        assert_eq!(c.get(h(-1), h(1)), Some(&one.scale(&int(4))));
    }

    #[test]
    fn json_roundtrip() {
        let s = catalog("p1").unwrap();
        let mut x = QuadraticOperator::zero(s.clone(), 3);
        x.add_term(h(1), h(-5), &RationalMatrix::identity(2).scale(&rat(-2, 3))).unwrap();
        x.set_constant(rat(1, 7));
        let back = QuadraticOperator::from_json_value(s, &x.to_json_value()).unwrap();
        assert_eq!(back.terms().collect::<Vec<_>>(), x.terms().collect::<Vec<_>>());
        assert_eq!(back.constant(), x.constant());
    }
}
