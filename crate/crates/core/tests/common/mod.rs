//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use archord::symreal::{Binding, Mode, NamedConstant, Rational, Registry, SymbolicReal};
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SQRT2: &str = "1.41421356237309504880168872420969807856967187537694";
pub const SQRT3: &str = "1.73205080756887729352744634150587236694280525381038";
pub const SQRT5: &str = "2.23606797749978969640917366873127623544061835961152";
pub const SQRT7: &str = "2.64575131106459059050161575363926042571025918308245";
pub const GOLDEN: &str = "1.61803398874989484820458683436563811772030917980576";
pub const PI: &str = "3.14159265358979323846264338327950288419716939937510";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> SymbolicReal {
    SymbolicReal::from_int(n)
}

/// Registry with linear-mode `s1..s4` (decimal square roots).
pub fn linear_registry() -> (Registry, Vec<SymbolicReal>) {
    let reg = Registry::new();
    let syms = [SQRT2, SQRT3, SQRT5, SQRT7]
        .iter()
        .enumerate()
        .map(|(i, d)| {
            reg.declare(&format!("s{}", i + 1), Mode::Linear, Binding::decimal(d).unwrap())
                .unwrap()
        })
        .collect();
    (reg, syms)
}

/// Registry with algebraic-mode `t1..tn` bound to named constants.
pub fn algebraic_registry(n: usize) -> (Registry, Vec<SymbolicReal>) {
    let reg = Registry::new();
    let consts = [
        NamedConstant::Pi,
        NamedConstant::E,
        NamedConstant::Ln2,
        NamedConstant::Sqrt(2),
        NamedConstant::Sqrt(3),
        NamedConstant::Sqrt(5),
        NamedConstant::Sqrt(7),
        NamedConstant::Sqrt(11),
        NamedConstant::Sqrt(13),
        NamedConstant::Phi,
    ];
    let syms = consts[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            reg.declare(&format!("t{}", i + 1), Mode::Algebraic, Binding::Constant(*c))
                .unwrap()
        })
        .collect();
    (reg, syms)
}

pub fn small_rational(r: &mut impl Rng, h: i64) -> Rational {
    qq(r.gen_range(-h..=h), r.gen_range(1..=h))
}

/// A random polynomial of total degree ≤ `deg` in `syms` with small
/// integer coefficients.
pub fn random_poly(r: &mut impl Rng, syms: &[SymbolicReal], deg: u32, terms: usize) -> SymbolicReal {
    let mut acc = SymbolicReal::zero();
    for _ in 0..terms {
        let mut m = SymbolicReal::from_int(r.gen_range(-4..=4));
        let d = r.gen_range(0..=deg);
        for _ in 0..d {
            let s = &syms[r.gen_range(0..syms.len())];
            m = m.mul(s).unwrap();
        }
        acc = acc.add(&m);
    }
    acc
}

/// A random rational function: a polynomial over a monic-ish polynomial.
pub fn random_rational_function(r: &mut impl Rng, syms: &[SymbolicReal], deg: u32) -> SymbolicReal {
    let num = random_poly(r, syms, deg, 3);
    loop {
        let den = random_poly(r, syms, deg.min(2), 2);
        if !den.is_zero() {
            return num.div(&den).unwrap();
        }
    }
}

pub fn bigint(n: i64) -> BigInt {
    BigInt::from(n)
}
