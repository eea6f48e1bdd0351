//! Constructions that turn one classification problem into another:
//! fractional-linear action of GL₂(ℤ) on unit spans, sets of independent
//! reals to fields, and colored linear orders to ordered divisible groups.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::classify::{self, Direction, FieldDescriptor};
use crate::symreal::{Binding, Mode, NamedConstant, Rational, Registry, SymError, SymbolicReal};
use crate::zmodule::{GroupError, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("matrix has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("cx + d vanishes at the input")]
    PoleAtInput,
    #[error("the unit span of a rational number is not rank 2")]
    RationalAlpha,
    #[error("invalid colored linear order: {0}")]
    InvalidOrder(String),
    #[error("invalid injection: {0}")]
    InvalidInjection(String),
    #[error("position {0} is outside the order")]
    PositionOutOfRange(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// An integer matrix `(a b; c d)` with determinant ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gl2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Gl2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Gl2Matrix, ReductionError> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(ReductionError::NotUnimodular(det));
        }
        Ok(Gl2Matrix { a, b, c, d })
    }

    pub fn identity() -> Gl2Matrix {
        Gl2Matrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Gl2Matrix) -> Gl2Matrix {
        Gl2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl fmt::Display for Gl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

/// `(a·x + b)/(c·x + d)`.
pub fn gl2_apply(m: &Gl2Matrix, x: &SymbolicReal) -> Result<SymbolicReal, ReductionError> {
    let r = |n: i64| Rational::from_integer(n.into());
    let num = x.scale(&r(m.a)).add(&SymbolicReal::from_int(m.b));
    let den = x.scale(&r(m.c)).add(&SymbolicReal::from_int(m.d));
    if den.is_zero() {
        return Err(ReductionError::PoleAtInput);
    }
    Ok(num.div(&den)?)
}

/// `span_ℚ{1, α}`.
pub fn unit_span_group(alpha: &SymbolicReal) -> Result<Subgroup, ReductionError> {
    if alpha.as_rational().is_some() {
        return Err(ReductionError::RationalAlpha);
    }
    Ok(Subgroup::q(vec![SymbolicReal::one(), alpha.clone()])?)
}

/// `ℚ(S)` for a set of declared algebraic-mode symbols.
pub fn countable_set_to_field(reg: &Registry, names: &[&str]) -> Result<FieldDescriptor, ReductionError> {
    for name in names {
        let s = reg.symbol(name)?;
        if s.has_linear_vars() {
            return Err(SymError::ModeViolation(format!(
                "`{name}` is linear-mode; fields need algebraically independent symbols"
            ))
            .into());
        }
    }
    Ok(FieldDescriptor::new(names.iter().copied()))
}

/// A finite linear order on positions `0..size` with a color per position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredLinearOrder {
    /// `rank[p]` is the place of position `p` in the order, smallest first.
    rank: Vec<usize>,
    colors: Vec<usize>,
}

impl ColoredLinearOrder {
    pub fn new(rank: Vec<usize>, colors: Vec<usize>) -> Result<Self, ReductionError> {
        if rank.len() != colors.len() {
            return Err(ReductionError::InvalidOrder(format!(
                "{} ranks but {} colors",
                rank.len(),
                colors.len()
            )));
        }
        let distinct: BTreeSet<usize> = rank.iter().copied().collect();
        if distinct.len() != rank.len() || rank.iter().any(|&r| r >= rank.len()) {
            return Err(ReductionError::InvalidOrder("ranks are not a permutation".into()));
        }
        Ok(ColoredLinearOrder { rank, colors })
    }

    /// Builds the order listing `positions` from smallest to largest.
    pub fn from_sequence(positions: &[usize], colors: Vec<usize>) -> Result<Self, ReductionError> {
        let mut rank = vec![usize::MAX; positions.len()];
        for (i, &p) in positions.iter().enumerate() {
            if p >= positions.len() || rank[p] != usize::MAX {
                return Err(ReductionError::InvalidOrder(format!(
                    "`{p}` is repeated or out of range"
                )));
            }
            rank[p] = i;
        }
        ColoredLinearOrder::new(rank, colors)
    }

    /// Positions `0 < 1 < … < n-1` colored by `word`.
    pub fn from_word(word: &[usize]) -> Self {
        ColoredLinearOrder {
            rank: (0..word.len()).collect(),
            colors: word.to_vec(),
        }
    }

    /// Parses `--order "2<0<1"` and `--colors "0,1,0"` (colors by position).
    pub fn parse(order: &str, colors: &str) -> Result<Self, ReductionError> {
        let bad = |m: String| ReductionError::InvalidOrder(m);
        let seq: Vec<usize> = if order.trim().is_empty() {
            Vec::new()
        } else {
            order
                .split('<')
                .map(|p| p.trim().parse().map_err(|_| bad(format!("bad position `{p}`"))))
                .collect::<Result<_, _>>()?
        };
        let cols: Vec<usize> = if colors.trim().is_empty() {
            Vec::new()
        } else {
            colors
                .split(',')
                .map(|c| c.trim().parse().map_err(|_| bad(format!("bad color `{c}`"))))
                .collect::<Result<_, _>>()?
        };
        ColoredLinearOrder::from_sequence(&seq, cols)
    }

    pub fn size(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self, p: usize) -> usize {
        self.rank[p]
    }

    pub fn color(&self, p: usize) -> usize {
        self.colors[p]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn less(&self, p: usize, q: usize) -> bool {
        self.rank[p] < self.rank[q]
    }

    /// Positions from smallest to largest.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = (0..self.size()).collect();
        seq.sort_by_key(|&p| self.rank[p]);
        seq
    }

    /// Colors read along the order.
    pub fn word(&self) -> Vec<usize> {
        self.sequence().into_iter().map(|p| self.colors[p]).collect()
    }

    pub fn order_string(&self) -> String {
        let s: Vec<String> = self.sequence().iter().map(usize::to_string).collect();
        s.join("<")
    }

    pub fn colors_string(&self) -> String {
        let s: Vec<String> = self.colors.iter().map(usize::to_string).collect();
        s.join(",")
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c + 1)
    }
}

impl fmt::Display for ColoredLinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order {:?} colors {:?}", self.order_string(), self.colors_string())
    }
}

/// Checks that `j` maps `K` into `L` preserving order and colors.
pub fn is_clo_embedding(j: &[usize], k: &ColoredLinearOrder, l: &ColoredLinearOrder) -> Result<(), String> {
    if j.len() != k.size() {
        return Err(format!("map has {} entries, order has {}", j.len(), k.size()));
    }
    if let Some(&bad) = j.iter().find(|&&t| t >= l.size()) {
        return Err(format!("target {bad} is outside the order"));
    }
    for p in 0..k.size() {
        if k.color(p) != l.color(j[p]) {
            return Err(format!("color of {p} is not preserved"));
        }
        for q in 0..k.size() {
            if k.less(p, q) && !l.less(j[p], j[q]) {
                return Err(format!("order between {p} and {q} is not preserved"));
            }
        }
    }
    Ok(())
}

/// The lexicographically least order- and color-preserving injection
/// `K → L`, found by backtracking over positions `0, 1, …` of `K`.
pub fn clo_embed_bruteforce(k: &ColoredLinearOrder, l: &ColoredLinearOrder) -> Option<Vec<usize>> {
    fn go(k: &ColoredLinearOrder, l: &ColoredLinearOrder, j: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let p = j.len();
        if p == k.size() {
            return true;
        }
        for t in 0..l.size() {
            if used[t] || l.color(t) != k.color(p) {
                continue;
            }
            let consistent = (0..p).all(|q| k.less(q, p) == l.less(j[q], t));
            if !consistent {
                continue;
            }
            used[t] = true;
            j.push(t);
            if go(k, l, j, used) {
                return true;
            }
            j.pop();
            used[t] = false;
        }
        false
    }
    let mut j = Vec::with_capacity(k.size());
    let mut used = vec![false; l.size()];
    go(k, l, &mut j, &mut used).then_some(j)
}

/// Coefficient groups `H_c = span_ℚ{1, σ_c}` for each color `c`.
#[derive(Clone, Debug)]
pub struct ColorFamily {
    sigmas: Vec<SymbolicReal>,
}

/// Bindings for the reserved color symbols `sigma0, sigma1, …`.
fn default_color_binding(c: usize) -> NamedConstant {
    match c {
        0 => NamedConstant::Pi,
        1 => NamedConstant::E,
        2 => NamedConstant::Ln2,
        _ => {
            let mut n = 2u32;
            let mut k = 3;
            loop {
                if (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0) {
                    if k == c {
                        return NamedConstant::Sqrt(n);
                    }
                    k += 1;
                }
                n += 1;
            }
        }
    }
}

impl ColorFamily {
    /// Uses (declaring if needed) `sigma0 … sigma{n-1}` as algebraic-mode
    /// symbols.
    pub fn default_for(reg: &Registry, colors: usize) -> Result<ColorFamily, SymError> {
        let sigmas = (0..colors)
            .map(|c| {
                let name = format!("sigma{c}");
                match reg.symbol(&name) {
                    Ok(s) => Ok(s),
                    Err(SymError::UnknownSymbol(_)) => {
                        reg.declare(&name, Mode::Algebraic, Binding::Constant(default_color_binding(c)))
                    }
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(ColorFamily { sigmas })
    }

    pub fn from_symbols(sigmas: Vec<SymbolicReal>) -> ColorFamily {
        ColorFamily { sigmas }
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    pub fn sigma(&self, c: usize) -> &SymbolicReal {
        &self.sigmas[c]
    }

    /// `H_c` as a subgroup of ℝ.
    pub fn group(&self, c: usize) -> Subgroup {
        unit_span_group(&self.sigmas[c]).expect("color symbols are irrational")
    }
}

/// Finite-support map from positions to `H_{color}`; a coordinate `(q₀, q₁)`
/// stands for `q₀ + q₁·σ_{color}`. Zero coordinates are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OdagElement {
    coords: BTreeMap<usize, (Rational, Rational)>,
}

impl OdagElement {
    pub fn zero() -> OdagElement {
        OdagElement::default()
    }

    pub fn from_coords(items: impl IntoIterator<Item = (usize, (Rational, Rational))>) -> OdagElement {
        let mut out = OdagElement::zero();
        for (p, c) in items {
            out.add_at(p, &c);
        }
        out
    }

    /// The element `q₀ + q₁σ` at a single position.
    pub fn single(p: usize, q0: Rational, q1: Rational) -> OdagElement {
        OdagElement::from_coords([(p, (q0, q1))])
    }

    fn add_at(&mut self, p: usize, c: &(Rational, Rational)) {
        let e = self
            .coords
            .entry(p)
            .or_insert_with(|| (Rational::zero(), Rational::zero()));
        e.0 += &c.0;
        e.1 += &c.1;
        if e.0.is_zero() && e.1.is_zero() {
            self.coords.remove(&p);
        }
    }

    pub fn coords(&self) -> &BTreeMap<usize, (Rational, Rational)> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.keys().copied()
    }

    pub fn add(&self, o: &OdagElement) -> OdagElement {
        let mut out = self.clone();
        for (&p, c) in &o.coords {
            out.add_at(p, c);
        }
        out
    }

    pub fn neg(&self) -> OdagElement {
        OdagElement {
            coords: self.coords.iter().map(|(&p, (a, b))| (p, (-a, -b))).collect(),
        }
    }

    pub fn sub(&self, o: &OdagElement) -> OdagElement {
        self.add(&o.neg())
    }
}

/// `G_L`: finite-support functions on a colored linear order with values in
/// the color groups, ordered reverse-lexicographically.
#[derive(Clone, Debug)]
pub struct OdagGroup {
    order: ColoredLinearOrder,
    family: ColorFamily,
    reg: Registry,
}

impl PartialEq for OdagGroup {
    fn eq(&self, o: &Self) -> bool {
        self.order == o.order && self.family.sigmas == o.family.sigmas
    }
}

impl Eq for OdagGroup {}

/// `G_L` over the default color family.
pub fn clo_to_odag(reg: &Registry, l: &ColoredLinearOrder) -> Result<OdagGroup, SymError> {
    let family = ColorFamily::default_for(reg, l.color_count())?;
    Ok(OdagGroup::new(reg, l.clone(), family))
}

impl OdagGroup {
    pub fn new(reg: &Registry, order: ColoredLinearOrder, family: ColorFamily) -> OdagGroup {
        assert!(family.len() >= order.color_count(), "color family too small");
        OdagGroup {
            order,
            family,
            reg: reg.clone(),
        }
    }

    pub fn order(&self) -> &ColoredLinearOrder {
        &self.order
    }

    pub fn family(&self) -> &ColorFamily {
        &self.family
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn check(&self, f: &OdagElement) -> Result<(), ReductionError> {
        match f.support().find(|&p| p >= self.order.size()) {
            Some(p) => Err(ReductionError::PositionOutOfRange(p)),
            None => Ok(()),
        }
    }

    /// The real number at position `p`.
    pub fn value_at(&self, f: &OdagElement, p: usize) -> SymbolicReal {
        match f.coords.get(&p) {
            None => SymbolicReal::zero(),
            Some((a, b)) => SymbolicReal::from_rational(a.clone())
                .add(&self.family.sigma(self.order.color(p)).scale(b)),
        }
    }

    /// Reverse-lexicographic comparison: the largest position where `f` and
    /// `g` differ decides.
    pub fn compare(&self, f: &OdagElement, g: &OdagElement) -> Result<Ordering, ReductionError> {
        self.check(f)?;
        self.check(g)?;
        let d = f.sub(g);
        let Some(top) = d.support().max_by_key(|&p| self.order.rank(p)) else {
            return Ok(Ordering::Equal);
        };
        Ok(self.reg.sign(&self.value_at(&d, top))?.to_ordering())
    }

    /// The position with the largest rank in the support (the Archimedean
    /// class of `f`), `None` for zero.
    pub fn leading_position(&self, f: &OdagElement) -> Option<usize> {
        f.support().max_by_key(|&p| self.order.rank(p))
    }
}

/// `odag_compare`.
pub fn odag_compare(g: &OdagGroup, a: &OdagElement, b: &OdagElement) -> Result<Ordering, ReductionError> {
    g.compare(a, b)
}

/// The group embedding `G_K → G_L` induced by a CLO embedding `j`:
/// `f ↦ g` with `g(j(n)) = f(n)` and zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdagEmbedding {
    map: Vec<usize>,
}

impl OdagEmbedding {
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, f: &OdagElement) -> OdagElement {
        OdagElement::from_coords(f.coords.iter().map(|(&p, c)| (self.map[p], c.clone())))
    }
}

pub fn odag_embed_from_clo(
    j: &[usize],
    k: &ColoredLinearOrder,
    l: &ColoredLinearOrder,
) -> Result<OdagEmbedding, ReductionError> {
    is_clo_embedding(j, k, l).map_err(ReductionError::InvalidInjection)?;
    Ok(OdagEmbedding { map: j.to_vec() })
}

/// Which color groups embed into which, with the certifying scalar.
pub type ColorTable = Vec<Vec<Option<SymbolicReal>>>;

/// Embeddability between the color groups, decided exactly through the
/// unit-span family.
pub fn color_embedding_table(reg: &Registry, family: &ColorFamily) -> Result<ColorTable, ReductionError> {
    let n = family.len();
    let mut table = vec![vec![None; n]; n];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let d = classify::decide(reg, &family.group(a), &family.group(b), Direction::Embed, 1)
                .map_err(|e| match e {
                    classify::ClassifyError::Sym(s) => ReductionError::Sym(s),
                    classify::ClassifyError::Group(g) => ReductionError::Group(g),
                    other => ReductionError::InvalidOrder(other.to_string()),
                })?;
            *cell = d.witness.map(|w| w.lambda);
        }
    }
    Ok(table)
}

/// A group map that sends the class of position `n` to the class of
/// `psi[n]`, scaling that coordinate by `scalars[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredMap {
    pub psi: Vec<usize>,
    pub scalars: Vec<SymbolicReal>,
}

impl StructuredMap {
    pub fn apply(&self, k: &OdagGroup, l: &OdagGroup, f: &OdagElement) -> Result<OdagElement, ReductionError> {
        let mut out = OdagElement::zero();
        for p in f.support() {
            let x = k.value_at(f, p).mul(&self.scalars[p])?;
            let target = self.psi[p];
            let h = l.family.group(l.order.color(target));
            let c = h
                .member(&x)
                .ok_or_else(|| ReductionError::InvalidInjection(format!("scaled coordinate at {p} leaves its color group")))?;
            // basis of span_ℚ{1, σ} is [σ, 1]
            out.add_at(target, &(c[1].clone(), c[0].clone()));
        }
        Ok(out)
    }
}

/// Searches maps `ψ: K → L` that are strictly increasing and send each
/// color to a color it embeds into. These are the maps an order-embedding
/// `G_K → G_L` induces on Archimedean classes.
pub fn structured_embedding(k: &ColoredLinearOrder, l: &ColoredLinearOrder, table: &ColorTable) -> Option<StructuredMap> {
    let n = k.size();
    let seq = k.sequence();
    let mut psi = vec![0usize; n];
    fn go(
        i: usize,
        seq: &[usize],
        k: &ColoredLinearOrder,
        l: &ColoredLinearOrder,
        table: &ColorTable,
        psi: &mut [usize],
    ) -> bool {
        if i == seq.len() {
            return true;
        }
        let p = seq[i];
        for t in 0..l.size() {
            if i > 0 && !l.less(psi[seq[i - 1]], t) {
                continue;
            }
            if table[k.color(p)][l.color(t)].is_none() {
                continue;
            }
            psi[p] = t;
            if go(i + 1, seq, k, l, table, psi) {
                return true;
            }
        }
        false
    }
    if !go(0, &seq, k, l, table, &mut psi) {
        return None;
    }
    let scalars = (0..n)
        .map(|p| table[k.color(p)][l.color(psi[p])].clone().expect("checked"))
        .collect();
    Some(StructuredMap { psi, scalars })
}
