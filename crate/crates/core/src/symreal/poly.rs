//! Sparse multivariate polynomials over ℚ.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`] under the graded
//! lexicographic order, so the leading term is always the last entry. The gcd
//! is the classical recursive primitive polynomial remainder sequence: the
//! smallest variable present is the main variable and coefficients live in
//! ℚ[remaining variables].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Mode, Rational};

/// A registered symbol as it appears inside polynomials.
///
/// The independence mode travels with the variable so arithmetic can enforce
/// the linear-mode restriction without consulting the registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub(crate) index: u32,
    pub(crate) mode: Mode,
}

impl Var {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
}

/// Power product of variables; exponents are strictly positive and the list
/// is sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn pow_of(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                    Ordering::Less => {
                        out.push((a, ea));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((b, eb));
                        j += 1;
                    }
                    Ordering::Equal => {
                        out.push((a, ea + eb));
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&t), None) => {
                    out.push(t);
                    i += 1;
                }
                (None, Some(&t)) => {
                    out.push(t);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if let Some(&(w, f)) = other.0.get(j) {
                if w < v {
                    return None;
                }
                if w == v {
                    j += 1;
                    match e.cmp(&f) {
                        Ordering::Less => return None,
                        Ordering::Equal => continue,
                        Ordering::Greater => {
                            out.push((v, e - f));
                            continue;
                        }
                    }
                }
            }
            out.push((v, e));
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes `v` from the monomial, returning its exponent and the rest.
    fn split(&self, v: Var) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut e = 0;
        for &(w, f) in &self.0 {
            if w == v {
                e = f;
            } else {
                rest.push((w, f));
            }
        }
        (e, Monomial(rest))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// smallest variable is most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if va > vb {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`; entry `i` multiplies `v^i`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    fn leading_coeff_in(&self, v: Var) -> Poly {
        let d = self.degree_in(v);
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e == d {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(lm)?;
            let c = rc / lc;
            rem = &rem - &d.mul_monomial(&m, &c);
            quo.add_term(m, c);
        }
        Some(quo)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `v`.
    fn prem(&self, b: &Poly, v: Var) -> Poly {
        let db = b.degree_in(v);
        let lcb = b.leading_coeff_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lcr = r.leading_coeff_in(v);
            let shift = Monomial::pow_of(v, dr - db);
            let sub = &lcr * &b.mul_monomial(&shift, &Rational::one());
            r = &(&lcb * &r) - &sub;
        }
        r
    }

    /// Gcd of the coefficients with respect to `v` (a polynomial free of `v`).
    pub fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = Poly::gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    fn primitive_in(&self, v: Var) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c)
            .expect("content always divides the polynomial")
            .integral_primitive()
    }

    /// Scaled to coprime integer coefficients with a positive leading one;
    /// keeps pseudo-remainder sequences from swelling.
    fn integral_primitive(&self) -> Poly {
        let Some((_, lc)) = self.leading() else {
            return Poly::zero();
        };
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c * Rational::from_integer(den.clone())).to_integer()));
        let mut f = Rational::new(den, num);
        if lc.is_negative() {
            f = -f;
        }
        self.scale(&f)
    }

    /// Monic greatest common divisor (`gcd(0, 0) = 0`).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        // degree-one polynomials are irreducible
        for (x, y) in [(a, b), (b, a)] {
            if x.total_degree() == 1 {
                return match y.div_exact(x) {
                    Some(_) => x.monic(),
                    None => Poly::one(),
                };
            }
        }
        let va = a.vars();
        let vb = b.vars();
        let main = *va.iter().chain(vb.iter()).min().expect("non-constant");
        if !va.contains(&main) {
            return Poly::gcd(a, &b.content_in(main));
        }
        if !vb.contains(&main) {
            return Poly::gcd(&a.content_in(main), b);
        }
        let ca = a.content_in(main);
        let cb = b.content_in(main);
        let c = Poly::gcd(&ca, &cb);
        let mut p = a.div_exact(&ca).expect("content divides");
        let mut q = b.div_exact(&cb).expect("content divides");
        if p.degree_in(main) < q.degree_in(main) {
            std::mem::swap(&mut p, &mut q);
        }
        let mut p = p.integral_primitive();
        let mut q = q.integral_primitive();
        let g = loop {
            let r = p.prem(&q, main);
            if r.is_zero() {
                break q;
            }
            if r.degree_in(main) == 0 {
                break Poly::one();
            }
            p = q;
            q = r.primitive_in(main);
        };
        (&c * &g.primitive_in(main)).monic()
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(a, b);
        (&a.div_exact(&g).expect("gcd divides") * b).monic()
    }

    /// True iff some variable of linear mode occurs.
    pub fn has_linear_vars(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.vars().any(|v| v.mode == Mode::Linear))
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn x() -> Var {
        Var { index: 0, mode: Mode::Algebraic }
    }

    fn y() -> Var {
        Var { index: 1, mode: Mode::Algebraic }
    }

    fn p(terms: &[(i64, u32, u32)]) -> Poly {
        let mut out = Poly::zero();
        for &(c, ex, ey) in terms {
            let m = Monomial::pow_of(x(), ex).mul(&Monomial::pow_of(y(), ey));
            out.add_term(m, q(c));
        }
        out
    }

    #[test]
    fn graded_lex_prefers_degree_then_first_variable() {
        let xy = Monomial::var(x()).mul(&Monomial::var(y()));
        let x2 = Monomial::pow_of(x(), 2);
        let y3 = Monomial::pow_of(y(), 3);
        assert!(y3 > x2);
        assert!(x2 > xy);
        assert!(Monomial::var(x()) > Monomial::var(y()));
        assert!(Monomial::var(y()) > Monomial::one());
    }

    #[test]
    fn exact_division_and_failure() {
        // (x^2 - y^2) / (x - y) = x + y
        let num = p(&[(1, 2, 0), (-1, 0, 2)]);
        let den = p(&[(1, 1, 0), (-1, 0, 1)]);
        assert_eq!(num.div_exact(&den), Some(p(&[(1, 1, 0), (1, 0, 1)])));
        assert_eq!(p(&[(1, 2, 0), (1, 0, 0)]).div_exact(&den), None);
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let common = p(&[(1, 1, 1), (3, 0, 0)]);
        let a = &common * &p(&[(2, 1, 0), (-1, 0, 1)]);
        let b = &common * &p(&[(1, 0, 2), (5, 0, 0)]);
        assert_eq!(Poly::gcd(&a, &b), common.monic());
        assert_eq!(Poly::gcd(&a, &Poly::zero()), a.monic());
        let coprime = Poly::gcd(&p(&[(1, 1, 0), (1, 0, 0)]), &p(&[(1, 1, 0), (-1, 0, 0)]));
        assert_eq!(coprime, Poly::one());
    }

    #[test]
    fn lcm_of_univariate_factors() {
        let a = p(&[(1, 2, 0), (-1, 0, 0)]);
        let b = p(&[(1, 1, 0), (-1, 0, 0)]);
        assert_eq!(Poly::lcm(&a, &b), a.monic());
    }
}
