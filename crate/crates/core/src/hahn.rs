//! Finite-support Hahn series `ℚ((t^G))` over an ordered exponent group.
//!
//! The valuation is the least exponent of the support, and a series is
//! positive when its coefficient there is; so smaller exponents dominate and
//! `t^g` with `g > 0` is a positive infinitesimal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::archgroup::{ArchError, OrderedVectorGroup};
use crate::reductions::{OdagElement, OdagGroup, ReductionError};
use crate::symreal::{parse_rational, Rational, Registry, SymError};
use crate::zmodule::split_top_level;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HahnError {
    #[error("series are over different exponent groups")]
    ExponentGroupMismatch,
    #[error("the zero series has no valuation")]
    ZeroSeries,
    #[error("bad series term `{0}`")]
    Parse(String),
    #[error("exponent comparison failed: {0}")]
    Exponent(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

impl From<ArchError> for HahnError {
    fn from(e: ArchError) -> Self {
        match e {
            ArchError::Sym(s) => HahnError::Sym(s),
            other => HahnError::Exponent(other.to_string()),
        }
    }
}

impl From<ReductionError> for HahnError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Sym(s) => HahnError::Sym(s),
            other => HahnError::Exponent(other.to_string()),
        }
    }
}

/// An ordered abelian group usable as exponents. `Elem` values must be in a
/// canonical form, so that structural and group equality agree.
pub trait ExponentGroup: PartialEq + fmt::Debug {
    type Elem: Clone + Ord + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Ordering, HahnError>;
}

/// An [`OrderedVectorGroup`] together with the registry that evaluates its
/// type entries.
#[derive(Clone, Debug)]
pub struct VectorExponents {
    pub group: OrderedVectorGroup,
    pub reg: Registry,
}

impl PartialEq for VectorExponents {
    fn eq(&self, o: &Self) -> bool {
        self.group == o.group
    }
}

impl ExponentGroup for VectorExponents {
    type Elem = Vec<Rational>;

    fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.group.rank()]
    }

    fn add(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn compare(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Result<Ordering, HahnError> {
        Ok(self.group.compare(&self.reg, a, b)?)
    }
}

impl ExponentGroup for OdagGroup {
    type Elem = OdagElement;

    fn zero(&self) -> OdagElement {
        OdagElement::zero()
    }

    fn add(&self, a: &OdagElement, b: &OdagElement) -> OdagElement {
        a.add(b)
    }

    fn compare(&self, a: &OdagElement, b: &OdagElement) -> Result<Ordering, HahnError> {
        Ok(OdagGroup::compare(self, a, b)?)
    }
}

/// `Σ a_g t^g` with finitely many nonzero rational coefficients.
#[derive(Debug)]
pub struct HahnSeries<G: ExponentGroup> {
    group: Arc<G>,
    terms: BTreeMap<G::Elem, Rational>,
}

impl<G: ExponentGroup> Clone for HahnSeries<G> {
    fn clone(&self) -> Self {
        HahnSeries {
            group: Arc::clone(&self.group),
            terms: self.terms.clone(),
        }
    }
}

impl<G: ExponentGroup> PartialEq for HahnSeries<G> {
    fn eq(&self, o: &Self) -> bool {
        self.same_group(o) && self.terms == o.terms
    }
}

impl<G: ExponentGroup> HahnSeries<G> {
    pub fn zero(group: Arc<G>) -> Self {
        HahnSeries {
            group,
            terms: BTreeMap::new(),
        }
    }

    /// `c·t^g`.
    pub fn monomial(group: Arc<G>, g: G::Elem, c: Rational) -> Self {
        let mut s = HahnSeries::zero(group);
        s.add_term(g, c);
        s
    }

    /// The constant `c = c·t^0`.
    pub fn constant(group: Arc<G>, c: Rational) -> Self {
        let z = group.zero();
        HahnSeries::monomial(group, z, c)
    }

    pub fn from_terms(group: Arc<G>, terms: impl IntoIterator<Item = (G::Elem, Rational)>) -> Self {
        let mut s = HahnSeries::zero(group);
        for (g, c) in terms {
            s.add_term(g, c);
        }
        s
    }

    fn add_term(&mut self, g: G::Elem, c: Rational) {
        let e = self.terms.entry(g.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn group(&self) -> &Arc<G> {
        &self.group
    }

    pub fn terms(&self) -> &BTreeMap<G::Elem, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_group(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.group, &o.group) || *self.group == *o.group
    }

    fn check(&self, o: &Self) -> Result<(), HahnError> {
        if self.same_group(o) {
            Ok(())
        } else {
            Err(HahnError::ExponentGroupMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, HahnError> {
        self.check(o)?;
        let mut out = self.clone();
        for (g, c) in &o.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        HahnSeries {
            group: Arc::clone(&self.group),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, HahnError> {
        self.add(&o.neg())
    }

    /// Convolution with `t^g·t^h = t^{g+h}`.
    pub fn mul(&self, o: &Self) -> Result<Self, HahnError> {
        self.check(o)?;
        let mut out = HahnSeries::zero(Arc::clone(&self.group));
        for (g, a) in &self.terms {
            for (h, b) in &o.terms {
                out.add_term(self.group.add(g, h), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return HahnSeries::zero(Arc::clone(&self.group));
        }
        HahnSeries {
            group: Arc::clone(&self.group),
            terms: self.terms.iter().map(|(g, a)| (g.clone(), a * c)).collect(),
        }
    }

    /// The least exponent of the support.
    pub fn valuation(&self) -> Result<G::Elem, HahnError> {
        let mut it = self.terms.keys();
        let mut best = it.next().ok_or(HahnError::ZeroSeries)?;
        for g in it {
            if self.group.compare(g, best)? == Ordering::Less {
                best = g;
            }
        }
        Ok(best.clone())
    }

    /// The coefficient at the valuation.
    pub fn leading_coefficient(&self) -> Result<Rational, HahnError> {
        let v = self.valuation()?;
        Ok(self.terms[&v].clone())
    }

    pub fn signum(&self) -> Result<Ordering, HahnError> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        let c = self.leading_coefficient()?;
        Ok(if c.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    pub fn compare(&self, o: &Self) -> Result<Ordering, HahnError> {
        self.sub(o)?.signum()
    }

    /// Renders `c*t^(g) + …` in increasing exponent order.
    pub fn render(&self, elem: impl Fn(&G::Elem) -> String) -> Result<String, HahnError> {
        if self.is_zero() {
            return Ok("0".into());
        }
        let mut items: Vec<(&G::Elem, &Rational)> = self.terms.iter().collect();
        let mut err = None;
        items.sort_by(|a, b| {
            self.group.compare(a.0, b.0).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mut out = String::new();
        for (i, (g, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&format!("{}*t^({})", c.abs(), elem(g)));
        }
        Ok(out)
    }

    /// Parses terms `c*t^(g)`, `t^(g)` or a bare rational `c`, joined by
    /// `+`/`-`; `elem` parses the text inside the parentheses.
    pub fn parse(
        group: Arc<G>,
        text: &str,
        elem: impl Fn(&str) -> Result<G::Elem, String>,
    ) -> Result<Self, HahnError> {
        let mut out = HahnSeries::zero(Arc::clone(&group));
        for (negative, term) in split_terms(text)? {
            let (coef, exp) = match term.find("t^") {
                None => (term.as_str(), None),
                Some(at) => {
                    let c = term[..at].trim().trim_end_matches('*').trim();
                    let e = term[at + 2..].trim();
                    let inner = e
                        .strip_prefix('(')
                        .and_then(|e| e.strip_suffix(')'))
                        .ok_or_else(|| HahnError::Parse(term.clone()))?;
                    (c, Some(inner))
                }
            };
            let mut c = if coef.is_empty() {
                Rational::from_integer(1.into())
            } else {
                parse_rational(coef).map_err(|_| HahnError::Parse(term.clone()))?
            };
            if negative {
                c = -c;
            }
            let g = match exp {
                None => group.zero(),
                Some(e) => elem(e).map_err(|m| HahnError::Parse(format!("{term}: {m}")))?,
            };
            out.add_term(g, c);
        }
        Ok(out)
    }
}

/// Splits on top-level `+`/`-`, keeping each term's sign.
fn split_terms(text: &str) -> Result<Vec<(bool, String)>, HahnError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in text.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() {
                    neg ^= ch == '-';
                } else {
                    out.push((neg, cur.trim().to_string()));
                    cur.clear();
                    neg = ch == '-';
                }
                continue;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(HahnError::Parse(text.to_string()));
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(HahnError::Parse(text.to_string()));
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur.trim().to_string()));
    } else if !out.is_empty() || neg {
        return Err(HahnError::Parse(text.to_string()));
    }
    Ok(out)
}

/// Parses `(x1, x2, ...)` as a rational vector.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>, String> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .or_else(|| t.strip_prefix('[').and_then(|t| t.strip_suffix(']')))
        .unwrap_or(t);
    split_top_level(inner)
        .into_iter()
        .map(|x| parse_rational(x).map_err(|e| e.to_string()))
        .collect()
}

pub fn format_vector(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", items.join(", "))
}
