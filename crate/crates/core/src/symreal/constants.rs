//! Named real constants with rigorous fixed-point enclosures.
//!
//! Every constant answers `enclose(p)`: integers `(lo, hi)` with
//! `lo ≤ v·2^p ≤ hi`. Series are summed with truncating integer division and
//! the accumulated truncation plus tail error is added to the bracket.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    Pi,
    E,
    Ln2,
    /// The golden ratio (1 + √5)/2.
    Phi,
    /// √n for a non-square positive integer n.
    Sqrt(u32),
}

impl NamedConstant {
    pub fn enclose(&self, p: u32) -> (BigInt, BigInt) {
        match *self {
            NamedConstant::Pi => pi(p),
            NamedConstant::E => e(p),
            NamedConstant::Ln2 => ln2(p),
            NamedConstant::Phi => {
                // (1 + √5)/2 · 2^p = (2^p + √(5·4^p)) / 2
                let s = isqrt(&(BigUint::from(5u32) << (2 * p as usize)));
                let base = BigInt::from(BigUint::one() << p as usize) + BigInt::from(s);
                let lo = &base >> 1usize;
                (lo.clone(), lo + 1)
            }
            NamedConstant::Sqrt(n) => {
                let s = BigInt::from(isqrt(&(BigUint::from(n) << (2 * p as usize))));
                (s.clone(), s + 1)
            }
        }
    }
}

impl fmt::Display for NamedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedConstant::Pi => write!(f, "pi"),
            NamedConstant::E => write!(f, "e"),
            NamedConstant::Ln2 => write!(f, "ln2"),
            NamedConstant::Phi => write!(f, "phi"),
            NamedConstant::Sqrt(n) => write!(f, "sqrt{n}"),
        }
    }
}

impl FromStr for NamedConstant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pi" => Ok(NamedConstant::Pi),
            "e" => Ok(NamedConstant::E),
            "ln2" => Ok(NamedConstant::Ln2),
            "phi" | "golden" => Ok(NamedConstant::Phi),
            _ => {
                let n: u32 = s
                    .strip_prefix("sqrt")
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| format!("unknown constant `{s}`"))?;
                let r = isqrt(&BigUint::from(n));
                if n == 0 || &r * &r == BigUint::from(n) {
                    return Err(format!("sqrt{n} is rational"));
                }
                Ok(NamedConstant::Sqrt(n))
            }
        }
    }
}

pub(crate) fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

const GUARD: u32 = 16;

fn e(p: u32) -> (BigInt, BigInt) {
    let w = p + GUARD;
    let mut term = BigInt::one() << w as usize;
    let mut sum = term.clone();
    let mut k = 1u32;
    while !term.is_zero() {
        term /= k;
        sum += &term;
        k += 1;
    }
    // each term is short by < 2 ulps; the tail after the first vanishing
    // term is below 6 ulps
    let err = BigInt::from(2 * k + 8);
    shrink(&sum - &err, sum + err, GUARD)
}

fn ln2(p: u32) -> (BigInt, BigInt) {
    // ln 2 = Σ_{k≥1} 1 / (k·2^k)
    let w = p + GUARD;
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    loop {
        let pow = BigInt::one() << w as usize;
        let t = (pow >> k as usize) / k;
        if t.is_zero() {
            break;
        }
        sum += t;
        k += 1;
    }
    let err = BigInt::from(k + 4);
    shrink(sum.clone(), sum + err, GUARD)
}

/// `atan(1/x)·2^w` with an error bound in ulps.
fn atan_inv(x: u32, w: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::one() << w as usize) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let t = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        power /= &x2;
        k += 1;
    }
    (sum, BigInt::from(3 * k + 6))
}

fn pi(p: u32) -> (BigInt, BigInt) {
    // Machin: π = 16·atan(1/5) − 4·atan(1/239)
    let w = p + GUARD;
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    let c = a * 16 - b * 4;
    let err = ea * 16 + eb * 4;
    shrink(&c - &err, c + err, GUARD)
}

/// Drops `g` guard bits, rounding the bracket outward.
fn shrink(lo: BigInt, hi: BigInt, g: u32) -> (BigInt, BigInt) {
    use num_integer::Integer;
    let d = BigInt::one() << g as usize;
    (lo.div_floor(&d), hi.div_ceil(&d))
}
