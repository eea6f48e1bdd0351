//! Exact real numbers as rational functions over ℚ in declared symbols.
//!
//! A [`SymbolicReal`] is a pair of polynomials kept in canonical form: the
//! numerator and denominator are coprime, the denominator is monic with
//! respect to the graded lexicographic order, and zero is `0/1`. Because the
//! symbols are asserted to be independent, structural equality coincides with
//! equality of values and [`SymbolicReal::is_zero`] is exact.
//!
//! Numeric questions (sign, enclosures, floor) go through a [`Registry`],
//! which owns the symbol bindings.

mod constants;
mod interval;
mod parse;
mod poly;
mod registry;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use constants::NamedConstant;
pub use interval::{rational_to_f64, Interval};
pub use parse::parse_rational;
pub use poly::{Monomial, Poly, Var};
pub use registry::{Binding, DyadicOracle, RefineConfig, Registry, SymbolInfo};

pub type Rational = BigRational;

/// Which independence assumption a symbol's binding is asserted to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// `{1} ∪ symbols` is ℚ-linearly independent; only ℚ-linear combinations
    /// of such symbols are formed.
    Linear,
    /// The symbols are algebraically independent; full field arithmetic.
    Algebraic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Linear => write!(f, "linear"),
            Mode::Algebraic => write!(f, "algebraic"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Mode::Linear),
            "algebraic" => Ok(Mode::Algebraic),
            other => Err(SymError::Parse {
                pos: 0,
                msg: format!("unknown mode `{other}` (expected linear|algebraic)"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mode violation: {0}")]
    ModeViolation(String),
    #[error("refinement budget exceeded after {rounds} rounds (probable binding contract violation)")]
    RefinementBudgetExceeded { rounds: u32 },
    #[error("binding of `{symbol}` has only {digits} fractional digits; more precision was requested")]
    PrecisionExhausted { symbol: String, digits: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is already declared")]
    DuplicateSymbol(String),
    #[error("epsilon must be a positive rational")]
    InvalidEpsilon,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl SymError {
    /// Budget-style failures, as opposed to contract or input errors.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            SymError::RefinementBudgetExceeded { .. } | SymError::PrecisionExhausted { .. }
        )
    }
}

/// Sign of a real number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(q: &Rational) -> Sign {
        if q.is_positive() {
            Sign::Positive
        } else if q.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn to_ordering(self) -> std::cmp::Ordering {
        self.as_i8().cmp(&0)
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    fn times(self, other: Sign) -> Sign {
        match self.as_i8() * other.as_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

/// Canonical rational function `num / den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicReal {
    num: Poly,
    den: Poly,
}

impl SymbolicReal {
    pub fn zero() -> Self {
        SymbolicReal {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        SymbolicReal::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        SymbolicReal {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        SymbolicReal::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        SymbolicReal::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub(crate) fn from_var(v: Var) -> Self {
        SymbolicReal {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    /// Builds the canonical form of `num / den`.
    pub fn from_polys(num: Poly, den: Poly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(canonical(num, den))
    }

    /// Polynomial with denominator one.
    pub fn from_poly(num: Poly) -> Self {
        SymbolicReal {
            num,
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        // canonical form has a constant denominator only when it is 1
        if self.den.as_constant().is_some() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    /// Variables occurring in numerator or denominator.
    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn has_linear_vars(&self) -> bool {
        self.num.has_linear_vars() || self.den.has_linear_vars()
    }

    pub fn add(&self, o: &SymbolicReal) -> SymbolicReal {
        if self.den == o.den {
            return canonical(&self.num + &o.num, self.den.clone());
        }
        // with g = gcd(b, d), only g can share factors with the new numerator
        let g = Poly::gcd(&self.den, &o.den);
        let b = self.den.div_exact(&g).expect("gcd divides");
        let d = o.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d) + &(&o.num * &b);
        if num.is_zero() {
            return SymbolicReal::zero();
        }
        let h = Poly::gcd(&num, &g);
        let (num, g) = if h.is_constant() {
            (num, g)
        } else {
            (num.div_exact(&h).expect("gcd divides"), g.div_exact(&h).expect("gcd divides"))
        };
        let den = &(&b * &d) * &g;
        let lc = den.leading().expect("nonzero denominator").1.recip();
        SymbolicReal {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn sub(&self, o: &SymbolicReal) -> SymbolicReal {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SymbolicReal {
        SymbolicReal {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, q: &Rational) -> SymbolicReal {
        if q.is_zero() {
            return SymbolicReal::zero();
        }
        SymbolicReal {
            num: self.num.scale(q),
            den: self.den.clone(),
        }
    }

    /// Product. Outside algebraic mode only products with a rational factor
    /// are formed.
    pub fn mul(&self, o: &SymbolicReal) -> Result<SymbolicReal, SymError> {
        if let Some(q) = o.as_rational() {
            return Ok(self.scale(&q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(o.scale(&q));
        }
        if self.has_linear_vars() || o.has_linear_vars() {
            return Err(SymError::ModeViolation(
                "product of two non-constant values involving linear-mode symbols".into(),
            ));
        }
        Ok(self.mul_unchecked(o))
    }

    /// Quotient. Outside algebraic mode the divisor must be rational or the
    /// quotient must itself be rational.
    pub fn div(&self, o: &SymbolicReal) -> Result<SymbolicReal, SymError> {
        if o.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if let Some(q) = o.as_rational() {
            return Ok(self.scale(&q.recip()));
        }
        let out = reduced_product(&self.num, &self.den, &o.den, &o.num);
        if (self.has_linear_vars() || o.has_linear_vars()) && out.as_rational().is_none() {
            return Err(SymError::ModeViolation(
                "quotient of non-proportional values involving linear-mode symbols".into(),
            ));
        }
        Ok(out)
    }

    pub fn recip(&self) -> Result<SymbolicReal, SymError> {
        SymbolicReal::one().div(self)
    }

    pub fn pow(&self, e: u32) -> Result<SymbolicReal, SymError> {
        let mut acc = SymbolicReal::one();
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn mul_unchecked(&self, o: &SymbolicReal) -> SymbolicReal {
        reduced_product(&self.num, &self.den, &o.num, &o.den)
    }

    /// Degree-one polynomial with denominator one (the shape every
    /// linear-mode value has).
    pub fn is_affine(&self) -> bool {
        self.is_polynomial() && self.num.total_degree() <= 1
    }
}

impl From<Rational> for SymbolicReal {
    fn from(q: Rational) -> Self {
        SymbolicReal::from_rational(q)
    }
}

impl From<i64> for SymbolicReal {
    fn from(n: i64) -> Self {
        SymbolicReal::from_int(n)
    }
}

/// `(a/b)·(c/d)` for coprime pairs `(a, b)` and `(c, d)`: cancelling across
/// the pairs leaves a reduced fraction, so the gcd of the full products is
/// never needed.
fn reduced_product(a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> SymbolicReal {
    if a.is_zero() || c.is_zero() {
        return SymbolicReal::zero();
    }
    let cancel = |x: &Poly, y: &Poly| {
        let g = Poly::gcd(x, y);
        if g.is_constant() {
            (x.clone(), y.clone())
        } else {
            (
                x.div_exact(&g).expect("gcd divides"),
                y.div_exact(&g).expect("gcd divides"),
            )
        }
    };
    let (a, d) = cancel(a, d);
    let (c, b) = cancel(c, b);
    let num = &a * &c;
    let den = &b * &d;
    let lc = den.leading().expect("nonzero denominator").1.recip();
    SymbolicReal {
        num: num.scale(&lc),
        den: den.scale(&lc),
    }
}

fn canonical(num: Poly, den: Poly) -> SymbolicReal {
    if num.is_zero() {
        return SymbolicReal::zero();
    }
    if let Some(c) = den.as_constant() {
        return SymbolicReal {
            num: num.scale(&c.recip()),
            den: Poly::one(),
        };
    }
    let g = Poly::gcd(&num, &den);
    let (num, den) = if g.is_constant() {
        (num, den)
    } else {
        (
            num.div_exact(&g).expect("gcd divides numerator"),
            den.div_exact(&g).expect("gcd divides denominator"),
        )
    };
    let lc = den.leading().expect("nonzero denominator").1.recip();
    let num = num.scale(&lc);
    let den = den.scale(&lc);
    if let Some(c) = den.as_constant() {
        // den became 1 after normalization
        debug_assert!(c.is_one());
    }
    SymbolicReal { num, den }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> (Registry, SymbolicReal, SymbolicReal, SymbolicReal) {
        let r = Registry::new();
        let s1 = r.declare("s1", Mode::Linear, Binding::decimal("1.41421356237309504880").unwrap()).unwrap();
        let s2 = r.declare("s2", Mode::Linear, Binding::decimal("3.14159265358979323846").unwrap()).unwrap();
        let t = r.declare("t", Mode::Algebraic, Binding::Constant(NamedConstant::Pi)).unwrap();
        (r, s1, s2, t)
    }

    #[test]
    fn additive_inverse_is_zero() {
        let (_, s1, _, _) = reg();
        assert!(s1.add(&s1.neg()).is_zero());
        assert!(s1.sub(&s1).is_zero());
    }

    #[test]
    fn square_of_algebraic_symbol() {
        let (r, _, _, t) = reg();
        let tt = t.mul(&t).unwrap();
        assert_eq!(r.format(&tt), "t^2");
        assert_eq!(tt, r.parse("t^2").unwrap());
    }

    #[test]
    fn gcd_reduction_of_quotient() {
        // (t^2 - 1)/(t - 1) = t + 1
        let (_, _, _, t) = reg();
        let num = t.mul(&t).unwrap().add(&SymbolicReal::from_int(-1));
        let den = t.add(&SymbolicReal::from_int(-1));
        assert_eq!(num.div(&den).unwrap(), t.add(&SymbolicReal::one()));
    }

    #[test]
    fn zero_tests() {
        let (_, s1, s2, t) = reg();
        assert!(!s1.scale(&Rational::from_integer(3.into())).sub(&s2).is_zero());
        assert!(!t.mul(&t).unwrap().sub(&SymbolicReal::from_int(2)).is_zero());
    }

    #[test]
    fn linear_mode_rejects_products() {
        let (_, s1, s2, t) = reg();
        assert!(matches!(s1.mul(&s2), Err(SymError::ModeViolation(_))));
        assert!(matches!(s1.mul(&t), Err(SymError::ModeViolation(_))));
        assert!(matches!(s1.div(&s2), Err(SymError::ModeViolation(_))));
        // proportional quotient is a rational and allowed
        let two_s1 = s1.scale(&Rational::from_integer(2.into()));
        assert_eq!(two_s1.div(&s1).unwrap().as_rational(), Some(Rational::from_integer(2.into())));
        assert!(s1.mul(&SymbolicReal::ratio(1, 3)).is_ok());
    }

    #[test]
    fn division_by_zero() {
        let (_, s1, _, _) = reg();
        assert_eq!(s1.div(&SymbolicReal::zero()), Err(SymError::DivisionByZero));
    }

    #[test]
    fn as_rational_cases() {
        let (_, s1, _, t) = reg();
        assert_eq!(SymbolicReal::ratio(5, 2).as_rational(), Some(Rational::new(5.into(), 2.into())));
        assert_eq!(s1.as_rational(), None);
        let two_t = t.scale(&Rational::from_integer(2.into()));
        assert_eq!(two_t.div(&t).unwrap().as_rational(), Some(Rational::from_integer(2.into())));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let (_, _, _, t) = reg();
        let x = SymbolicReal::one().div(&t.scale(&Rational::from_integer(3.into()))).unwrap();
        assert_eq!(x.denominator(), &Poly::var(*t.vars().iter().next().unwrap()));
        assert_eq!(x.numerator().as_constant(), Some(Rational::new(1.into(), 3.into())));
    }
}
