//! Finitely generated additive subgroups of ℝ.
//!
//! Elements are [`SymbolicReal`]s. A family of elements is turned into
//! coordinates by writing every element over a common denominator `D` (the
//! lcm of their denominators) and reading off the numerator coefficients in
//! the monomial basis, columns sorted from the largest monomial down. ℚ-spans
//! are normalized by reduced row echelon form and ℤ-spans by the Hermite
//! normal form after clearing rational denominators, so two subgroups are
//! equal exactly when their canonical bases are.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg;
use crate::symreal::{Monomial, Poly, Rational, Registry, SymError, SymbolicReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpanMode {
    /// ℤ-span.
    Z,
    /// ℚ-span (a divisible group).
    Q,
}

impl fmt::Display for SpanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanMode::Z => write!(f, "z"),
            SpanMode::Q => write!(f, "q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a subgroup needs at least one generator")]
    NoGenerators,
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("{0} is not an element of the group")]
    NotAMember(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// A finitely generated subgroup of (ℝ, +) with its canonical basis.
#[derive(Clone, Debug)]
pub struct Subgroup {
    mode: SpanMode,
    generators: Vec<SymbolicReal>,
    basis: Vec<SymbolicReal>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.basis == other.basis
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mode.hash(state);
        self.basis.hash(state);
    }
}

/// Numerators over a common denominator, as rows over shared monomial
/// columns.
struct Coordinates {
    denominator: Poly,
    columns: Vec<Monomial>,
    rows: Vec<Vec<Rational>>,
}

fn coordinates(elems: &[SymbolicReal]) -> Coordinates {
    let denominator = elems
        .iter()
        .fold(Poly::one(), |acc, e| Poly::lcm(&acc, e.denominator()));
    let numerators: Vec<Poly> = elems
        .iter()
        .map(|e| {
            let cofactor = denominator
                .div_exact(e.denominator())
                .expect("lcm is divisible by each denominator");
            e.numerator() * &cofactor
        })
        .collect();
    let mut cols: BTreeSet<Monomial> = BTreeSet::new();
    for n in &numerators {
        cols.extend(n.terms().map(|(m, _)| m.clone()));
    }
    let columns: Vec<Monomial> = cols.into_iter().rev().collect();
    let rows = numerators
        .iter()
        .map(|n| columns.iter().map(|m| n.coefficient(m)).collect())
        .collect();
    Coordinates {
        denominator,
        columns,
        rows,
    }
}

/// Coordinate rows of `elems` over a shared denominator.
pub(crate) fn coordinates_of(elems: &[SymbolicReal]) -> Vec<Vec<Rational>> {
    coordinates(elems).rows
}

fn from_coordinates(row: &[Rational], columns: &[Monomial], denominator: &Poly) -> SymbolicReal {
    let mut num = Poly::zero();
    for (c, m) in row.iter().zip(columns) {
        num.add_term(m.clone(), c.clone());
    }
    SymbolicReal::from_polys(num, denominator.clone()).expect("denominator is nonzero")
}

impl Subgroup {
    pub fn new(generators: Vec<SymbolicReal>, mode: SpanMode) -> Result<Subgroup, GroupError> {
        if generators.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        if let Some(i) = generators.iter().position(SymbolicReal::is_zero) {
            return Err(GroupError::ZeroGenerator(i));
        }
        let basis = canonical_basis(&generators, mode);
        Ok(Subgroup {
            mode,
            generators,
            basis,
        })
    }

    pub fn z(generators: Vec<SymbolicReal>) -> Result<Subgroup, GroupError> {
        Subgroup::new(generators, SpanMode::Z)
    }

    pub fn q(generators: Vec<SymbolicReal>) -> Result<Subgroup, GroupError> {
        Subgroup::new(generators, SpanMode::Q)
    }

    pub fn mode(&self) -> SpanMode {
        self.mode
    }

    /// The generators as supplied.
    pub fn generators(&self) -> &[SymbolicReal] {
        &self.generators
    }

    /// Canonical basis (HNF for ℤ-spans, RREF for ℚ-spans).
    pub fn basis(&self) -> &[SymbolicReal] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coefficients of `x` over [`Subgroup::basis`], integral for ℤ-spans;
    /// `None` if `x` is not in the group.
    pub fn member(&self, x: &SymbolicReal) -> Option<Vec<Rational>> {
        if x.is_zero() {
            return Some(vec![Rational::zero(); self.basis.len()]);
        }
        let mut all = self.basis.clone();
        all.push(x.clone());
        let coords = coordinates(&all);
        let (target, rows) = coords.rows.split_last().expect("nonempty");
        let sol = linalg::solve_left(rows, target)?;
        if self.mode == SpanMode::Z && !sol.iter().all(Rational::is_integer) {
            return None;
        }
        Some(sol)
    }

    pub fn contains(&self, x: &SymbolicReal) -> bool {
        self.member(x).is_some()
    }

    /// True iff every basis element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        (self.mode == SpanMode::Z || other.mode == SpanMode::Q)
            && self.basis.iter().all(|b| other.contains(b))
    }

    /// `λ·G`.
    pub fn scale(&self, lambda: &SymbolicReal) -> Result<Subgroup, GroupError> {
        if lambda.is_zero() {
            return Err(SymError::DivisionByZero.into());
        }
        let gens = self
            .basis
            .iter()
            .map(|g| lambda.mul(g))
            .collect::<Result<Vec<_>, _>>()?;
        Subgroup::new(gens, self.mode)
    }

    /// `G/r`, the slice of the rescaling invariant at `r`.
    pub fn divide(&self, r: &SymbolicReal) -> Result<Subgroup, GroupError> {
        let gens = self
            .basis
            .iter()
            .map(|g| g.div(r))
            .collect::<Result<Vec<_>, _>>()?;
        Subgroup::new(gens, self.mode)
    }

    /// Combination of the basis with the given coefficients.
    pub fn combine(&self, coeffs: &[Rational]) -> SymbolicReal {
        self.basis
            .iter()
            .zip(coeffs)
            .fold(SymbolicReal::zero(), |acc, (b, c)| acc.add(&b.scale(c)))
    }

    /// Coefficient vectors enumerated by [`Subgroup::element_enum`].
    pub fn coefficient_enum(&self, height: u32) -> Vec<Vec<Rational>> {
        let values = coefficient_values(self.mode, height);
        let rank = self.basis.len();
        let mut out: Vec<(u32, Vec<usize>)> = Vec::new();
        let mut idx = vec![0usize; rank];
        loop {
            let h = idx.iter().map(|&i| values[i].1).max().unwrap_or(0);
            out.push((h, idx.clone()));
            let mut k = rank;
            loop {
                if k == 0 {
                    out.sort();
                    return out
                        .into_iter()
                        .map(|(_, ix)| ix.into_iter().map(|i| values[i].0.clone()).collect())
                        .collect();
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < values.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// All combinations of the basis with coefficients of height ≤ `height`
    /// (integers `|c| ≤ height` for ℤ-spans, `p/q` with `|p|, q ≤ height` for
    /// ℚ-spans), ordered by the largest coefficient height and then
    /// lexicographically by coefficient value.
    pub fn element_enum(&self, height: u32) -> Vec<SymbolicReal> {
        self.coefficient_enum(height)
            .iter()
            .map(|c| self.combine(c))
            .collect()
    }

    /// `z[g1, g2, ...]` with the canonical basis.
    pub fn display(&self, reg: &Registry) -> String {
        let items: Vec<String> = self.basis.iter().map(|g| reg.format(g)).collect();
        format!("{}[{}]", self.mode, items.join(", "))
    }

    /// Parses `z[g1, ...]` or `q[g1, ...]` (a space after the mode letter is
    /// allowed).
    pub fn parse(text: &str, reg: &Registry) -> Result<Subgroup, GroupError> {
        let t = text.trim();
        let bad = |msg: &str| {
            GroupError::Sym(SymError::Parse {
                pos: 0,
                msg: format!("{msg} in group literal `{t}`"),
            })
        };
        let mode = match t.chars().next() {
            Some('z') | Some('Z') => SpanMode::Z,
            Some('q') | Some('Q') => SpanMode::Q,
            _ => return Err(bad("expected `z[` or `q[`")),
        };
        let rest = t[1..].trim_start();
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("expected brackets"))?;
        let gens = split_top_level(inner)
            .into_iter()
            .map(|g| reg.parse(g))
            .collect::<Result<Vec<_>, _>>()?;
        Subgroup::new(gens, mode)
    }
}

/// Splits on commas not nested in parentheses or brackets.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

/// Admissible coefficient values with their heights, sorted by value.
fn coefficient_values(mode: SpanMode, height: u32) -> Vec<(Rational, u32)> {
    let h = height as i64;
    let mut vals: Vec<(Rational, u32)> = match mode {
        SpanMode::Z => (-h..=h)
            .map(|c| (Rational::from_integer(BigInt::from(c)), c.unsigned_abs() as u32))
            .collect(),
        SpanMode::Q => {
            let mut set = BTreeSet::new();
            for q in 1..=h {
                for p in -h..=h {
                    set.insert(Rational::new(BigInt::from(p), BigInt::from(q)));
                }
            }
            set.into_iter()
                .map(|r| {
                    let hp = r.numer().magnitude().clone();
                    let hq = r.denom().magnitude().clone();
                    let ht: u32 = hp.max(hq).try_into().unwrap_or(u32::MAX);
                    let ht = if r.is_zero() { 0 } else { ht };
                    (r, ht)
                })
                .collect()
        }
    };
    vals.sort();
    vals
}

fn canonical_basis(gens: &[SymbolicReal], mode: SpanMode) -> Vec<SymbolicReal> {
    let coords = coordinates(gens);
    let reduced: Vec<Vec<Rational>> = match mode {
        SpanMode::Q => linalg::rref(coords.rows),
        SpanMode::Z => {
            let l = linalg::lcm_of_denominators(coords.rows.iter().flatten());
            let ints: Vec<Vec<BigInt>> = coords
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                        .collect()
                })
                .collect();
            let lq = Rational::from_integer(l);
            linalg::hnf(ints)
                .into_iter()
                .map(|r| r.into_iter().map(|x| Rational::from_integer(x) / &lq).collect())
                .collect()
        }
    };
    reduced
        .iter()
        .map(|row| from_coordinates(row, &coords.columns, &coords.denominator))
        .collect()
}

impl From<GroupError> for SymError {
    fn from(e: GroupError) -> SymError {
        match e {
            GroupError::Sym(s) => s,
            other => SymError::ModeViolation(other.to_string()),
        }
    }
}
