//! Isomorphism and embeddability of Archimedean groups.
//!
//! Every order-preserving homomorphism between subgroups of ℝ is
//! multiplication by a positive scalar λ, so all deciders here reduce to
//! finding λ and checking `λ·G ⊆ H` (and `H ⊆ λ·G` for isomorphism) by
//! exact membership. Exact deciders cover pointed groups, rank-1 groups,
//! unit spans `span_ℚ{1, α}` and fields `ℚ(S)`; anything else goes through a
//! bounded candidate search and may end in [`Answer::Unknown`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;
use crate::symreal::{Rational, Registry, Sign, SymError, SymbolicReal};
use crate::zmodule::{GroupError, SpanMode, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("scalar must be strictly positive")]
    NonPositiveScalar,
    #[error("the distinguished point must be strictly positive")]
    PointNotPositive,
    #[error("{0} is not an element of the group")]
    NotAMember(String),
    #[error("expected an irrational value, got the rational {0}")]
    RationalInput(String),
    #[error("bad rank-1 characteristic: {0}")]
    BadCharacteristic(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

impl ClassifyError {
    /// The underlying symbolic error, if any.
    pub fn sym(&self) -> Option<&SymError> {
        match self {
            ClassifyError::Sym(e) | ClassifyError::Group(GroupError::Sym(e)) => Some(e),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Iso,
    Embed,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Iso => "iso",
            Direction::Embed => "embed",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iso" => Ok(Direction::Iso),
            "embed" => Ok(Direction::Embed),
            _ => Err(format!("unknown direction `{s}` (expected iso or embed)")),
        }
    }
}

/// A scalar certifying `x ↦ λx` as an embedding or isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub lambda: SymbolicReal,
    pub direction: Direction,
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        })
    }
}

/// Which procedure produced an answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// An exact decider for a structured family.
    Exact(&'static str),
    /// Bounded candidate search at the given height.
    Search { height: u32 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Exact(family) => write!(f, "exact:{family}"),
            Provenance::Search { height } => write!(f, "search:height={height}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: Answer,
    pub witness: Option<Witness>,
    pub unit_span: Option<UnitSpanSolution>,
    pub provenance: Provenance,
}

/// Checks `λ·G ⊆ H`, and for isomorphism also `H ⊆ λ·G`.
pub fn verify_scaling(
    reg: &Registry,
    g: &Subgroup,
    h: &Subgroup,
    lambda: &SymbolicReal,
    direction: Direction,
) -> Result<bool, ClassifyError> {
    if reg.sign(lambda)? != Sign::Positive {
        return Err(ClassifyError::NonPositiveScalar);
    }
    let scaled = g.scale(lambda)?;
    if !scaled.is_subgroup_of(h) {
        return Ok(false);
    }
    Ok(direction == Direction::Embed || h.is_subgroup_of(&scaled))
}

fn witness(
    reg: &Registry,
    g: &Subgroup,
    h: &Subgroup,
    lambda: SymbolicReal,
    direction: Direction,
) -> Result<Option<Witness>, ClassifyError> {
    Ok(verify_scaling(reg, g, h, &lambda, direction)?.then_some(Witness {
        lambda,
        direction,
        verified: true,
    }))
}

/// A group with a distinguished positive element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedGroup {
    group: Subgroup,
    point: SymbolicReal,
}

impl PointedGroup {
    pub fn new(reg: &Registry, group: Subgroup, point: SymbolicReal) -> Result<PointedGroup, ClassifyError> {
        if reg.sign(&point)? != Sign::Positive {
            return Err(ClassifyError::PointNotPositive);
        }
        if !group.contains(&point) {
            return Err(ClassifyError::NotAMember(reg.format(&point)));
        }
        Ok(PointedGroup { group, point })
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn point(&self) -> &SymbolicReal {
        &self.point
    }
}

/// The only candidate scalar is `B.point / A.point`.
pub fn decide_pointed(
    reg: &Registry,
    a: &PointedGroup,
    b: &PointedGroup,
    direction: Direction,
) -> Result<Option<Witness>, ClassifyError> {
    let lambda = b.point.div(&a.point)?;
    witness(reg, &a.group, &b.group, lambda, direction)
}

pub fn decide_pointed_iso(reg: &Registry, a: &PointedGroup, b: &PointedGroup) -> Result<Option<Witness>, ClassifyError> {
    decide_pointed(reg, a, b, Direction::Iso)
}

pub fn decide_pointed_embed(reg: &Registry, a: &PointedGroup, b: &PointedGroup) -> Result<Option<Witness>, ClassifyError> {
    decide_pointed(reg, a, b, Direction::Embed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Height {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(n) => write!(f, "{n}"),
            Height::Infinite => write!(f, "inf"),
        }
    }
}

/// Prime heights of a rank-1 group containing 1: the group of all `a/b`
/// where each prime `p` divides `b` at most `heights[p]` times. Unlisted
/// primes have height 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rank1Characteristic {
    heights: BTreeMap<u64, Height>,
}

impl Rank1Characteristic {
    pub fn new(entries: impl IntoIterator<Item = (u64, Height)>) -> Result<Self, ClassifyError> {
        let mut heights = BTreeMap::new();
        for (p, h) in entries {
            if !is_prime(p) {
                return Err(ClassifyError::BadCharacteristic(format!("{p} is not prime")));
            }
            if h != Height::Finite(0) {
                heights.insert(p, h);
            }
        }
        Ok(Rank1Characteristic { heights })
    }

    pub fn height(&self, p: u64) -> Height {
        self.heights.get(&p).copied().unwrap_or(Height::Finite(0))
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, Height)> + '_ {
        self.heights.iter().map(|(&p, &h)| (p, h))
    }

    pub fn infinite_primes(&self) -> BTreeSet<u64> {
        self.entries()
            .filter(|(_, h)| *h == Height::Infinite)
            .map(|(p, _)| p)
            .collect()
    }

    /// Whether the rational `x` belongs to the group.
    pub fn contains(&self, x: &Rational) -> bool {
        let mut d = x.denom().magnitude().clone();
        let mut p = 2u64;
        while d > num_bigint::BigUint::one() {
            let mut k = 0u32;
            while (&d % p).is_zero() {
                d /= p;
                k += 1;
            }
            if k > 0 {
                match self.height(p) {
                    Height::Infinite => {}
                    Height::Finite(h) if k <= h => {}
                    _ => return false,
                }
            }
            p += 1;
        }
        true
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl fmt::Display for Rank1Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().map(|(p, h)| format!("{p}:{h}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for Rank1Characteristic {
    type Err = ClassifyError;

    /// `{2:inf,3:1}`; braces optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let bad = |m: String| ClassifyError::BadCharacteristic(m);
        let mut entries = Vec::new();
        for item in body.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (p, h) = item
                .split_once(':')
                .ok_or_else(|| bad(format!("`{item}` is not `prime:height`")))?;
            let p: u64 = p.trim().parse().map_err(|_| bad(format!("bad prime `{p}`")))?;
            let h = match h.trim() {
                "inf" | "∞" => Height::Infinite,
                n => Height::Finite(n.parse().map_err(|_| bad(format!("bad height `{n}`")))?),
            };
            entries.push((p, h));
        }
        Rank1Characteristic::new(entries)
    }
}

/// Two characteristics describe isomorphic groups iff they differ at only
/// finitely many primes, always at finite heights. With finitely many
/// recorded entries that leaves the infinite-height sets.
pub fn decide_rank1_iso(c1: &Rank1Characteristic, c2: &Rank1Characteristic) -> bool {
    c1.infinite_primes() == c2.infinite_primes()
}

/// Any embedding is `x ↦ λx` with `λ = λ·1` rational; a suitable product
/// of prime powers absorbs every finite height of `c1`, so only the
/// infinite-height primes matter.
pub fn decide_rank1_embed(c1: &Rank1Characteristic, c2: &Rank1Characteristic) -> bool {
    c1.infinite_primes().is_subset(&c2.infinite_primes())
}

/// `α = (kβ + ℓ)/(mβ + n)`, primitive integral, first nonzero entry
/// positive; `lambda = |mβ + n|` maps `span_ℚ{1, α}` into `span_ℚ{1, β}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSpanSolution {
    pub k: BigInt,
    pub l: BigInt,
    pub m: BigInt,
    pub n: BigInt,
    pub lambda: SymbolicReal,
}

impl UnitSpanSolution {
    pub fn matrix(&self) -> [[BigInt; 2]; 2] {
        [[self.k.clone(), self.l.clone()], [self.m.clone(), self.n.clone()]]
    }
}

/// Exact decider for `span_ℚ{1, α}` versus `span_ℚ{1, β}`.
///
/// Solves `m·αβ + n·α − k·β − ℓ = 0` over ℚ; the solution space has
/// dimension at most 2, and the side conditions (`(m, n) ≠ 0`, plus
/// `kn − ℓm ≠ 0` for isomorphism) cut out a proper algebraic subset of
/// degree ≤ 2, so small integer combinations of a kernel basis suffice.
pub fn decide_unit_span(
    reg: &Registry,
    alpha: &SymbolicReal,
    beta: &SymbolicReal,
    direction: Direction,
) -> Result<Option<UnitSpanSolution>, ClassifyError> {
    for x in [alpha, beta] {
        if let Some(q) = x.as_rational() {
            return Err(ClassifyError::RationalInput(q.to_string()));
        }
    }
    let ab = alpha.mul(beta)?;
    let family = [ab, alpha.clone(), beta.clone(), SymbolicReal::one()];
    let coords = crate::zmodule::coordinates_of(&family);
    let kernel = linalg::left_kernel(&coords);
    if kernel.is_empty() {
        return Ok(None);
    }
    let d = kernel.len() as u32;
    let mut combos: Vec<Vec<i64>> = (1..5i64.pow(d))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let digit = code % 5 - 2;
                    code /= 5;
                    digit
                })
                .collect()
        })
        .filter(|c: &Vec<i64>| c.iter().any(|&x| x != 0))
        .collect();
    combos.sort_by_key(|c| (c.iter().map(|x| x.abs()).max(), c.clone()));
    for combo in combos {
        let mut v = vec![Rational::zero(); 4];
        for (coef, kv) in combo.iter().zip(&kernel) {
            for (acc, x) in v.iter_mut().zip(kv) {
                *acc += x * Rational::from_integer((*coef).into());
            }
        }
        let (m, n, k, l) = (v[0].clone(), v[1].clone(), -v[2].clone(), -v[3].clone());
        if m.is_zero() && n.is_zero() {
            continue;
        }
        if direction == Direction::Iso && (&k * &n - &l * &m).is_zero() {
            continue;
        }
        let [k, l, m, n] = primitive([k, l, m, n]);
        let mb = beta
            .scale(&Rational::from_integer(m.clone()))
            .add(&SymbolicReal::from_rational(Rational::from_integer(n.clone())));
        let lambda = match reg.sign(&mb)? {
            Sign::Negative => mb.neg(),
            _ => mb,
        };
        return Ok(Some(UnitSpanSolution { k, l, m, n, lambda }));
    }
    Ok(None)
}

fn primitive(v: [Rational; 4]) -> [BigInt; 4] {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let out: Vec<BigInt> = ints.into_iter().map(|x| x / &g * &sign).collect();
    [out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()]
}

/// `ℚ(S)` for a finite set `S` of algebraically independent symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    symbols: BTreeSet<String>,
}

impl FieldDescriptor {
    pub fn new<I, S>(symbols: I) -> FieldDescriptor
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FieldDescriptor {
            symbols: symbols.into_iter().map(Into::into).collect(),
        }
    }

    pub fn symbols(&self) -> &BTreeSet<String> {
        &self.symbols
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("Q");
        }
        let names: Vec<&str> = self.symbols.iter().map(String::as_str).collect();
        write!(f, "Q({})", names.join(", "))
    }
}

/// Subfields of ℝ embed as ordered groups exactly when they are included.
pub fn decide_field_embed(f1: &FieldDescriptor, f2: &FieldDescriptor) -> bool {
    f1.symbols.is_subset(&f2.symbols)
}

/// Tries `λ = h/g₁` for `h` enumerated from `H` up to `height`.
///
/// Candidates whose quotient cannot be formed in linear mode are skipped:
/// such a λ could never be verified there.
pub fn search_embed(
    reg: &Registry,
    g: &Subgroup,
    h: &Subgroup,
    height: u32,
    direction: Direction,
) -> Result<Option<Witness>, ClassifyError> {
    let g1 = &g.basis()[0];
    for cand in h.element_enum(height) {
        if cand.is_zero() {
            continue;
        }
        let lambda = match cand.div(g1) {
            Ok(l) => l,
            Err(SymError::ModeViolation(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        if reg.sign(&lambda)? != Sign::Positive {
            continue;
        }
        match witness(reg, g, h, lambda, direction) {
            Ok(Some(w)) => return Ok(Some(w)),
            Ok(None) => {}
            Err(e) if matches!(e.sym(), Some(SymError::ModeViolation(_))) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// `G/r` for a nonzero `r ∈ G`.
pub fn invariant_slice(reg: &Registry, g: &Subgroup, r: &SymbolicReal) -> Result<Subgroup, ClassifyError> {
    if r.is_zero() {
        return Err(SymError::DivisionByZero.into());
    }
    if !g.contains(r) {
        return Err(ClassifyError::NotAMember(reg.format(r)));
    }
    Ok(g.divide(r)?)
}

/// A finite fragment of the rescaling invariant `{G/r : r ∈ G∖{0}}` with the
/// relation `R(X, Y, r) ⇔ r ∈ X∖{0} ∧ Y = X/r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFragment {
    /// Distinct slices with the first element `r` (in enumeration order) that
    /// produced each.
    pub slices: Vec<(Subgroup, SymbolicReal)>,
    /// `(i, j, r)` with `slices[j] = slices[i] / r`, for `r > 0`.
    pub triples: Vec<(usize, usize, SymbolicReal)>,
}

impl InvariantFragment {
    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.slices.iter().position(|(x, _)| x == s)
    }

    /// Plain-text serialization:
    ///
    /// ```text
    /// slices <count>
    /// slice <index> <group literal> ; r = <expr>
    /// triples <count>
    /// triple <i> <j> <r>
    /// ```
    ///
    /// Only `r > 0` is listed in triples since `X/r = X/(-r)`.
    pub fn render(&self, reg: &Registry) -> String {
        let mut out = format!("slices {}\n", self.slices.len());
        for (i, (s, r)) in self.slices.iter().enumerate() {
            out.push_str(&format!("slice {i} {} ; r = {}\n", s.display(reg), reg.format(r)));
        }
        out.push_str(&format!("triples {}\n", self.triples.len()));
        for (i, j, r) in &self.triples {
            out.push_str(&format!("triple {i} {j} {}\n", reg.format(r)));
        }
        out
    }
}

/// Slices `G/r` for `r` in `element_enum(G, height)`, merged when equal, and
/// the triples `(G/r, G/(r·r′), r′)` with `r·r′` in the same enumeration.
///
/// Since `(G/r)/r′ = G/(r·r′)`, every triple target is already a slice; no
/// further division of groups is needed.
pub fn emit_invariant(reg: &Registry, g: &Subgroup, height: u32) -> Result<InvariantFragment, ClassifyError> {
    let mut slices: Vec<(Subgroup, SymbolicReal)> = Vec::new();
    let mut elems: Vec<(SymbolicReal, usize, Sign)> = Vec::new();
    for r in g.element_enum(height) {
        if r.is_zero() {
            continue;
        }
        let s = g.divide(&r)?;
        let idx = match slices.iter().position(|(x, _)| *x == s) {
            Some(i) => i,
            None => {
                slices.push((s, r.clone()));
                slices.len() - 1
            }
        };
        let sign = reg.sign(&r)?;
        elems.push((r, idx, sign));
    }
    let mut triples = Vec::new();
    for (i, (_, ri)) in slices.iter().enumerate() {
        let si = reg.sign(ri)?;
        for (rr, j, sr) in &elems {
            // r′ = (r·r′)/r, kept only when positive
            if *sr == si {
                triples.push((i, *j, rr.div(ri)?));
            }
        }
    }
    Ok(InvariantFragment { slices, triples })
}

/// A rank-2 ℚ-span `span{a, b}` is `a·span{1, b/a}`.
fn unit_span_form(g: &Subgroup) -> Result<Option<(SymbolicReal, SymbolicReal)>, SymError> {
    if g.mode() != SpanMode::Q || g.rank() != 2 {
        return Ok(None);
    }
    let (a, b) = (&g.basis()[0], &g.basis()[1]);
    let (scale, ratio) = if a.as_rational().is_some() {
        (a.clone(), b.div(a)?)
    } else {
        (b.clone(), a.div(b)?)
    };
    Ok(Some((scale, ratio)))
}

/// Exact answers from invariants and structured families, else bounded
/// search.
pub fn decide(
    reg: &Registry,
    g: &Subgroup,
    h: &Subgroup,
    direction: Direction,
    height: u32,
) -> Result<Decision, ClassifyError> {
    let no = |family| Decision {
        answer: Answer::No,
        witness: None,
        unit_span: None,
        provenance: Provenance::Exact(family),
    };
    match direction {
        Direction::Iso => {
            if g.mode() != h.mode() {
                return Ok(no("divisibility"));
            }
            if g.rank() != h.rank() {
                return Ok(no("rank"));
            }
        }
        Direction::Embed => {
            if g.mode() == SpanMode::Q && h.mode() == SpanMode::Z {
                return Ok(no("divisibility"));
            }
            if g.rank() > h.rank() {
                return Ok(no("rank"));
            }
        }
    }
    if let Some(d) = decide_by_unit_span(reg, g, h, direction)? {
        return Ok(d);
    }
    let w = search_embed(reg, g, h, height, direction)?;
    Ok(Decision {
        answer: if w.is_some() { Answer::Yes } else { Answer::Unknown },
        witness: w,
        unit_span: None,
        provenance: Provenance::Search { height },
    })
}

/// The unit-span decider applied to rank-2 ℚ-spans; `None` when either
/// group is not of that form or the ratio needs algebraic mode.
pub fn decide_by_unit_span(
    reg: &Registry,
    g: &Subgroup,
    h: &Subgroup,
    direction: Direction,
) -> Result<Option<Decision>, ClassifyError> {
    let forms = (|| Ok::<_, SymError>((unit_span_form(g)?, unit_span_form(h)?)))();
    let (Some((ga, alpha)), Some((hb, beta))) = (match forms {
        Ok(f) => f,
        Err(SymError::ModeViolation(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    }) else {
        return Ok(None);
    };
    let sol = match decide_unit_span(reg, &alpha, &beta, direction) {
        Ok(s) => s,
        Err(e) if matches!(e.sym(), Some(SymError::ModeViolation(_))) => return Ok(None),
        Err(e) => return Err(e),
    };
    let provenance = Provenance::Exact("unit-span");
    let Some(sol) = sol else {
        return Ok(Some(Decision {
            answer: Answer::No,
            witness: None,
            unit_span: None,
            provenance,
        }));
    };
    // G = ga·U_α → U_β → H = hb·U_β, scalars compose
    let lambda = hb.mul(&sol.lambda)?.div(&ga)?;
    let lambda = if reg.sign(&lambda)? == Sign::Negative {
        lambda.neg()
    } else {
        lambda
    };
    let w = witness(reg, g, h, lambda, direction)?;
    debug_assert!(w.is_some(), "unit-span scalar failed verification");
    Ok(Some(Decision {
        answer: if w.is_some() { Answer::Yes } else { Answer::Unknown },
        witness: w,
        unit_span: Some(sol),
        provenance,
    }))
}

/// Equality of rescaling invariants, which holds iff `G ≅ H`.
pub fn invariant_equal(reg: &Registry, g: &Subgroup, h: &Subgroup, height: u32) -> Result<Answer, ClassifyError> {
    Ok(decide(reg, g, h, Direction::Iso, height)?.answer)
}
