//! Archimedean orders on ℤⁿ/ℚⁿ given by type vectors, and the realization
//! of an Archimedean ordered group inside ℝ by Dedekind cuts.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::symreal::{Interval, Rational, Registry, SymError, SymbolicReal};
use crate::zmodule::{SpanMode, Subgroup};

/// Doublings allowed while bracketing a cut; a larger ratio `t/u` means the
/// oracle is not Archimedean (or absurdly skewed).
const MAX_BRACKET_DOUBLINGS: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchError {
    #[error("a type vector needs at least one entry")]
    EmptyType,
    #[error("the first type entry must be 1 or -1")]
    FirstEntryNotUnit,
    #[error("type entries are not linearly independent over Q")]
    DependentEntries,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector entry {0} is not an integer")]
    NotInScalarField(String),
    #[error("the unit is not strictly positive")]
    UnitNotPositive,
    #[error("no bracket found after {0} doublings; the order is not Archimedean")]
    BracketOverflow(u32),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// A Teh type `(α₁, …, αₙ)` with `α₁ = ±1` and ℚ-independent entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeVector {
    entries: Vec<SymbolicReal>,
}

impl TypeVector {
    pub fn new(entries: Vec<SymbolicReal>) -> Result<TypeVector, ArchError> {
        let first = entries.first().ok_or(ArchError::EmptyType)?;
        let unit = first.as_rational().map(|q| q.abs());
        if unit != Some(Rational::one()) {
            return Err(ArchError::FirstEntryNotUnit);
        }
        if entries.iter().any(SymbolicReal::is_zero) {
            return Err(ArchError::DependentEntries);
        }
        let span = Subgroup::q(entries.clone()).expect("nonempty, no zeros");
        if span.rank() != entries.len() {
            return Err(ArchError::DependentEntries);
        }
        Ok(TypeVector { entries })
    }

    pub fn entries(&self) -> &[SymbolicReal] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ xᵢ αᵢ`, the real number realizing `x`.
    pub fn realize(&self, x: &[Rational]) -> SymbolicReal {
        self.entries
            .iter()
            .zip(x)
            .fold(SymbolicReal::zero(), |acc, (a, c)| acc.add(&a.scale(c)))
    }
}

/// `ℤⁿ` or `ℚⁿ` ordered by a type vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedVectorGroup {
    ty: TypeVector,
    field: SpanMode,
}

impl OrderedVectorGroup {
    pub fn new(ty: TypeVector, field: SpanMode) -> OrderedVectorGroup {
        OrderedVectorGroup { ty, field }
    }

    pub fn rank(&self) -> usize {
        self.ty.len()
    }

    pub fn type_vector(&self) -> &TypeVector {
        &self.ty
    }

    pub fn scalar_field(&self) -> SpanMode {
        self.field
    }

    pub fn check(&self, x: &[Rational]) -> Result<(), ArchError> {
        if x.len() != self.rank() {
            return Err(ArchError::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        if self.field == SpanMode::Z {
            if let Some(bad) = x.iter().find(|c| !c.is_integer()) {
                return Err(ArchError::NotInScalarField(bad.to_string()));
            }
        }
        Ok(())
    }

    /// Compares `x` against `y`: `Less` iff `Σ xᵢαᵢ < Σ yᵢαᵢ`.
    pub fn compare(&self, reg: &Registry, x: &[Rational], y: &[Rational]) -> Result<Ordering, ArchError> {
        self.check(x)?;
        self.check(y)?;
        let diff: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        Ok(reg.sign(&self.ty.realize(&diff))?.to_ordering())
    }

    /// `z[1, a2, ...]` or `q[...]`.
    pub fn display(&self, reg: &Registry) -> String {
        let items: Vec<String> = self.ty.entries.iter().map(|a| reg.format(a)).collect();
        format!("{}[{}]", self.field, items.join(", "))
    }

    /// Parses [`OrderedVectorGroup::display`] output; a bare `[...]` means
    /// `z[...]`.
    pub fn parse(text: &str, reg: &Registry) -> Result<OrderedVectorGroup, ArchError> {
        let t = text.trim();
        let (field, rest) = match t.chars().next() {
            Some('z') | Some('Z') => (SpanMode::Z, t[1..].trim_start()),
            Some('q') | Some('Q') => (SpanMode::Q, t[1..].trim_start()),
            _ => (SpanMode::Z, t),
        };
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| SymError::Parse {
                pos: 0,
                msg: format!("expected `[a1, ...]` in type literal `{t}`"),
            })?;
        let entries = crate::zmodule::split_top_level(inner)
            .into_iter()
            .map(|a| reg.parse(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OrderedVectorGroup::new(TypeVector::new(entries)?, field))
    }

    /// This group as a comparison oracle.
    pub fn oracle<'a>(&'a self, reg: &'a Registry) -> TypeOrder<'a> {
        TypeOrder { group: self, reg }
    }
}

/// An ordered abelian group accessed only through its operations and
/// comparison.
pub trait OrderedGroupOracle {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Ordering, ArchError>;
}

/// [`OrderedVectorGroup`] bound to a registry.
#[derive(Clone, Copy, Debug)]
pub struct TypeOrder<'a> {
    group: &'a OrderedVectorGroup,
    reg: &'a Registry,
}

impl OrderedGroupOracle for TypeOrder<'_> {
    type Elem = Vec<Rational>;

    fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.group.rank()]
    }

    fn add(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn neg(&self, a: &Vec<Rational>) -> Vec<Rational> {
        a.iter().map(|x| -x).collect()
    }

    fn compare(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Result<Ordering, ArchError> {
        self.group.compare(self.reg, a, b)
    }
}

/// `m·x` for `m ≥ 0` by binary doubling.
pub fn multiple<O: OrderedGroupOracle>(o: &O, x: &O::Elem, m: &BigInt) -> O::Elem {
    let mut acc = o.zero();
    let mut pow = x.clone();
    let mut k = m.clone();
    let two = BigInt::from(2);
    while k.is_positive() {
        if (&k % &two).is_one() {
            acc = o.add(&acc, &pow);
        }
        k >>= 1;
        if k.is_positive() {
            pow = o.add(&pow, &pow);
        }
    }
    acc
}

/// Encloses `x(t) = sup{m/n : m·u < n·t}` in an interval of width ≤ `eps`.
///
/// With `u > 0` fixed as the unit this is the Hölder embedding of the group
/// into ℝ. The search runs over dyadic probes `m/2^j`, each decided by one
/// comparison of `m·u` against `2^j·t`.
pub fn holder_cut<O: OrderedGroupOracle>(
    o: &O,
    u: &O::Elem,
    t: &O::Elem,
    eps: &Rational,
) -> Result<Interval, ArchError> {
    if !eps.is_positive() {
        return Err(SymError::InvalidEpsilon.into());
    }
    let zero = o.zero();
    if o.compare(u, &zero)? != Ordering::Greater {
        return Err(ArchError::UnitNotPositive);
    }
    match o.compare(t, &zero)? {
        Ordering::Equal => Ok(Interval::point(Rational::zero())),
        Ordering::Less => {
            let iv = positive_cut(o, u, &o.neg(t), eps)?;
            Ok(iv.neg())
        }
        Ordering::Greater => positive_cut(o, u, t, eps),
    }
}

fn positive_cut<O: OrderedGroupOracle>(
    o: &O,
    u: &O::Elem,
    t: &O::Elem,
    eps: &Rational,
) -> Result<Interval, ArchError> {
    if o.compare(t, u)? == Ordering::Equal {
        return Ok(Interval::point(Rational::one()));
    }
    // bracket: 0 ∈ L_t, find k with 2^k·u ≥ t
    let mut k = 0u32;
    let mut p = u.clone();
    while o.compare(&p, t)? == Ordering::Less {
        if k == MAX_BRACKET_DOUBLINGS {
            return Err(ArchError::BracketOverflow(k));
        }
        p = o.add(&p, &p);
        k += 1;
    }
    // invariant: lo/2^j < x(t) ≤ hi/2^j
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() << k;
    let mut j = 0u32;
    let mut t_mult = t.clone(); // 2^j · t
    let width = |lo: &BigInt, hi: &BigInt, j: u32| Rational::new(hi - lo, BigInt::one() << j);
    while &width(&lo, &hi, j) > eps {
        lo <<= 1;
        hi <<= 1;
        j += 1;
        t_mult = o.add(&t_mult, &t_mult);
        let mid: BigInt = (&lo + &hi) >> 1;
        let m_u = multiple(o, u, &mid);
        if o.compare(&m_u, &t_mult)? == Ordering::Less {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let den = BigInt::one() << j;
    Ok(Interval::new(
        Rational::new(lo, den.clone()),
        Rational::new(hi, den),
    ))
}

/// Encloses the Teh type `φ(eᵢ)/|φ(e₁)|` of an Archimedean order on ℤⁿ.
pub fn extract_type<O>(o: &O, n: usize, eps: &Rational) -> Result<Vec<Interval>, ArchError>
where
    O: OrderedGroupOracle<Elem = Vec<Rational>>,
{
    if n == 0 {
        return Err(ArchError::EmptyType);
    }
    let basis = |i: usize| -> Vec<Rational> {
        (0..n)
            .map(|k| if k == i { Rational::one() } else { Rational::zero() })
            .collect()
    };
    let e1 = basis(0);
    let u = match o.compare(&e1, &o.zero())? {
        Ordering::Greater => e1,
        Ordering::Less => o.neg(&e1),
        Ordering::Equal => return Err(ArchError::UnitNotPositive),
    };
    (0..n).map(|i| holder_cut(o, &u, &basis(i), eps)).collect()
}

/// True iff `x` lies in the closed interval, decided exactly.
pub fn encloses(reg: &Registry, iv: &Interval, x: &SymbolicReal) -> Result<bool, SymError> {
    let lo = SymbolicReal::from_rational(iv.lo.clone());
    let hi = SymbolicReal::from_rational(iv.hi.clone());
    Ok(reg.compare(&lo, x)? != Ordering::Greater && reg.compare(x, &hi)? != Ordering::Greater)
}
