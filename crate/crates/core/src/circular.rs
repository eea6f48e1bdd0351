//! Circularly ordered subgroups of the circle and the central extension by ℤ
//! that linearizes them.
//!
//! A circle element is an angle `θ ∈ [0, 1)` standing for `e^{2πiθ}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::symreal::{Rational, Registry, Sign, SymError, SymbolicReal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircularError {
    #[error("expected 0 <= alpha < beta < 1")]
    NotIncreasing,
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircleElem {
    theta: SymbolicReal,
}

impl CircleElem {
    /// Reduces `theta` modulo 1.
    pub fn new(reg: &Registry, theta: SymbolicReal) -> Result<CircleElem, SymError> {
        let fl = reg.floor(&theta)?;
        let theta = if fl.is_zero() {
            theta
        } else {
            theta.sub(&SymbolicReal::from_rational(Rational::from_integer(fl)))
        };
        Ok(CircleElem { theta })
    }

    pub fn identity() -> CircleElem {
        CircleElem {
            theta: SymbolicReal::zero(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> CircleElem {
        let q = Rational::new(n.into(), d.into());
        CircleElem {
            theta: SymbolicReal::from_rational(&q - q.floor()),
        }
    }

    pub fn theta(&self) -> &SymbolicReal {
        &self.theta
    }

    pub fn is_identity(&self) -> bool {
        self.theta.is_zero()
    }

    pub fn inverse(&self) -> CircleElem {
        if self.is_identity() {
            return self.clone();
        }
        CircleElem {
            theta: SymbolicReal::one().sub(&self.theta),
        }
    }
}

/// Angle addition modulo 1.
pub fn circle_mul(reg: &Registry, x: &CircleElem, y: &CircleElem) -> Result<CircleElem, SymError> {
    let s = x.theta.add(&y.theta);
    let theta = if reg.compare(&s, &SymbolicReal::one())? == Ordering::Less {
        s
    } else {
        s.sub(&SymbolicReal::one())
    };
    Ok(CircleElem { theta })
}

/// `d mod 1` for `d ∈ (-1, 1)`.
fn wrap(reg: &Registry, d: SymbolicReal) -> Result<SymbolicReal, SymError> {
    Ok(if reg.sign(&d)? == Sign::Negative {
        d.add(&SymbolicReal::one())
    } else {
        d
    })
}

/// Orientation cocycle: 0 on degenerate triples, +1 when `x, y, z` are
/// met in that order going anticlockwise from `x`, else -1.
pub fn cocycle(reg: &Registry, x: &CircleElem, y: &CircleElem, z: &CircleElem) -> Result<i8, SymError> {
    if x == y || y == z || x == z {
        return Ok(0);
    }
    let dy = wrap(reg, y.theta.sub(&x.theta))?;
    let dz = wrap(reg, z.theta.sub(&x.theta))?;
    Ok(match reg.compare(&dy, &dz)? {
        Ordering::Less => 1,
        _ => -1,
    })
}

/// An element `(g, n)` of the central extension `G × ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZelevaElement {
    pub g: CircleElem,
    pub n: BigInt,
}

impl ZelevaElement {
    pub fn new(g: CircleElem, n: impl Into<BigInt>) -> ZelevaElement {
        ZelevaElement { g, n: n.into() }
    }

    pub fn identity() -> ZelevaElement {
        ZelevaElement::new(CircleElem::identity(), 0)
    }
}

/// The twisting cocycle `ε(a, b) ∈ {0, 1}`.
pub fn epsilon(reg: &Registry, a: &CircleElem, b: &CircleElem) -> Result<u8, SymError> {
    if a.is_identity() || b.is_identity() {
        return Ok(0);
    }
    let one = CircleElem::identity();
    let ab = circle_mul(reg, a, b)?;
    if cocycle(reg, &one, a, &ab)? == 1 {
        return Ok(0);
    }
    if ab.is_identity() {
        return Ok(1);
    }
    debug_assert_eq!(cocycle(reg, &one, &ab, a)?, 1);
    Ok(1)
}

/// `(a, n)(b, m) = (ab, n + m + ε(a, b))`.
pub fn zeleva_mul(reg: &Registry, p: &ZelevaElement, q: &ZelevaElement) -> Result<ZelevaElement, SymError> {
    let e = epsilon(reg, &p.g, &q.g)?;
    Ok(ZelevaElement {
        g: circle_mul(reg, &p.g, &q.g)?,
        n: &p.n + &q.n + BigInt::from(e),
    })
}

pub fn zeleva_inverse(p: &ZelevaElement) -> ZelevaElement {
    if p.g.is_identity() {
        ZelevaElement::new(p.g.clone(), -&p.n)
    } else {
        ZelevaElement::new(p.g.inverse(), -&p.n - BigInt::one())
    }
}

/// Integer part first; within a slice, `a < b` iff `c(1, a, b) = 1`, with
/// the identity below every other angle.
pub fn zeleva_compare(reg: &Registry, p: &ZelevaElement, q: &ZelevaElement) -> Result<Ordering, SymError> {
    match p.n.cmp(&q.n) {
        Ordering::Equal => {}
        other => return Ok(other),
    }
    if p.g == q.g {
        return Ok(Ordering::Equal);
    }
    if p.g.is_identity() {
        return Ok(Ordering::Less);
    }
    if q.g.is_identity() {
        return Ok(Ordering::Greater);
    }
    Ok(match cocycle(reg, &CircleElem::identity(), &p.g, &q.g)? {
        1 => Ordering::Less,
        _ => Ordering::Greater,
    })
}

/// `pᵏ` by repeated multiplication; negative `k` uses the inverse.
pub fn zeleva_pow(reg: &Registry, p: &ZelevaElement, k: i64) -> Result<ZelevaElement, SymError> {
    let base = if k < 0 { zeleva_inverse(p) } else { p.clone() };
    let mut acc = ZelevaElement::identity();
    for _ in 0..k.unsigned_abs() {
        acc = zeleva_mul(reg, &acc, &base)?;
    }
    Ok(acc)
}

/// Least `n ≤ cap` with `⌊nα⌋ < ⌊nβ⌋`, returned with `k = ⌊nα⌋`.
///
/// For such `n`, `(e^{2πiα}, 0)ⁿ = (·, k)` while `(e^{2πiβ}, 0)ⁿ = (·, k+1)`,
/// which rules out an order-preserving map sending one angle to the other.
pub fn find_separating_power(
    reg: &Registry,
    alpha: &SymbolicReal,
    beta: &SymbolicReal,
    cap: u64,
) -> Result<Option<(u64, BigInt)>, CircularError> {
    let ok = reg.sign(alpha)? != Sign::Negative
        && reg.compare(alpha, beta)? == Ordering::Less
        && reg.compare(beta, &SymbolicReal::one())? == Ordering::Less;
    if !ok {
        return Err(CircularError::NotIncreasing);
    }
    for n in 1..=cap {
        let r = Rational::from_integer(n.into());
        let ka = reg.floor(&alpha.scale(&r))?;
        let kb = reg.floor(&beta.scale(&r))?;
        if ka < kb {
            return Ok(Some((n, ka)));
        }
    }
    Ok(None)
}
