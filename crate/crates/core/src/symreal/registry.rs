use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::constants::NamedConstant;
use super::interval::Interval;
use super::parse;
use super::poly::{Poly, Var};
use super::{Mode, Rational, Sign, SymError, SymbolicReal};

/// Extra bits kept below the requested level when rounding intermediate
/// interval results outward.
const GUARD_BITS: u32 = 32;

/// Source of rigorous dyadic enclosures: `lo ≤ v·2^p ≤ hi`.
pub trait DyadicOracle: Send + Sync + fmt::Debug {
    fn enclose(&self, p: u32) -> (BigInt, BigInt);
}

/// How a symbol's real value is supplied.
#[derive(Clone, Debug)]
pub enum Binding {
    /// A decimal prefix of the value's expansion; precision beyond the given
    /// digits is unavailable.
    Decimal {
        negative: bool,
        /// All digits (integer and fractional part) as one integer.
        digits: BigUint,
        frac_len: usize,
    },
    /// An exact rational. Violates independence by construction; useful only
    /// to exercise the contract-violation path.
    Rational(Rational),
    Constant(NamedConstant),
    Oracle(Arc<dyn DyadicOracle>),
}

impl Binding {
    /// Parses `[-]ddd[.ddd]`.
    pub fn decimal(text: &str) -> Result<Binding, SymError> {
        let bad = || SymError::Parse {
            pos: 0,
            msg: format!("invalid decimal digit string `{text}`"),
        };
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int, frac) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigUint = format!("{int}{frac}").parse().map_err(|_| bad())?;
        Ok(Binding::Decimal {
            negative,
            digits,
            frac_len: frac.len(),
        })
    }

    /// Parses a binding spec: `decimal:<digits>`, `rat:<p>/<q>` or
    /// `const:<name>`.
    pub fn parse_spec(spec: &str) -> Result<Binding, SymError> {
        let (kind, body) = spec.split_once(':').ok_or_else(|| SymError::Parse {
            pos: 0,
            msg: format!("binding spec `{spec}` lacks a `kind:` prefix"),
        })?;
        match kind {
            "decimal" => Binding::decimal(body),
            "rat" => Ok(Binding::Rational(parse::parse_rational(body)?)),
            "const" => body
                .parse::<NamedConstant>()
                .map(Binding::Constant)
                .map_err(|msg| SymError::Parse { pos: 0, msg }),
            other => Err(SymError::Parse {
                pos: 0,
                msg: format!("unknown binding kind `{other}`"),
            }),
        }
    }

    /// Inverse of [`Binding::parse_spec`]; `None` for programmatic oracles.
    pub fn spec(&self) -> Option<String> {
        match self {
            Binding::Decimal {
                negative,
                digits,
                frac_len,
            } => {
                let s = format!("{:0>width$}", digits.to_string(), width = frac_len + 1);
                let (i, f) = s.split_at(s.len() - frac_len);
                let sign = if *negative { "-" } else { "" };
                if *frac_len == 0 {
                    Some(format!("decimal:{sign}{i}"))
                } else {
                    Some(format!("decimal:{sign}{i}.{f}"))
                }
            }
            Binding::Rational(q) => Some(format!("rat:{q}")),
            Binding::Constant(c) => Some(format!("const:{c}")),
            Binding::Oracle(_) => None,
        }
    }

    /// Canonical enclosure of width ≤ 2^-level. Enclosures at increasing
    /// levels are nested.
    fn interval_at(&self, name: &str, level: u32) -> Result<Interval, SymError> {
        match self {
            Binding::Rational(q) => Ok(Interval::point(q.clone())),
            Binding::Decimal {
                negative,
                digits,
                frac_len,
            } => {
                let d = decimal_digits_for_level(level);
                if d > *frac_len {
                    return Err(SymError::PrecisionExhausted {
                        symbol: name.to_string(),
                        digits: *frac_len,
                    });
                }
                let t = BigInt::from(digits / BigUint::from(10u32).pow((frac_len - d) as u32));
                let scale = BigInt::from(10u32).pow(d as u32);
                let lo = Rational::new(t.clone(), scale.clone());
                let hi = Rational::new(t + 1, scale);
                Ok(if *negative {
                    Interval::new(-hi, -lo)
                } else {
                    Interval::new(lo, hi)
                })
            }
            Binding::Constant(c) => dyadic_floor_interval(|p| c.enclose(p), level),
            Binding::Oracle(o) => dyadic_floor_interval(|p| o.enclose(p), level),
        }
    }
}

/// Smallest `d` with `10^-d ≤ 2^-level` (possibly one more).
fn decimal_digits_for_level(level: u32) -> usize {
    // 30103/100000 slightly exceeds log10(2)
    ((level as u64 * 30103 + 99_999) / 100_000) as usize
}

/// `[f, f+1]·2^-level` with `f = ⌊v·2^level⌋`, resolved by widening the
/// guard until the enclosure pins the floor down.
fn dyadic_floor_interval(
    enclose: impl Fn(u32) -> (BigInt, BigInt),
    level: u32,
) -> Result<Interval, SymError> {
    let mut guard = 8u32;
    while guard <= 4096 {
        let (lo, hi) = enclose(level + guard);
        let d = BigInt::one() << guard as usize;
        let a = lo.div_floor(&d);
        let b = hi.div_floor(&d);
        if a == b {
            let scale = BigInt::one() << level as usize;
            return Ok(Interval::new(
                Rational::new(a.clone(), scale.clone()),
                Rational::new(a + 1, scale),
            ));
        }
        guard *= 2;
    }
    Err(SymError::RefinementBudgetExceeded { rounds: 0 })
}

/// Refinement schedule: the level (precision `2^-level`) starts at
/// `start_level` and grows by one per round, for at most `max_rounds` rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefineConfig {
    pub max_rounds: u32,
    pub start_level: u32,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            max_rounds: 1_000_000,
            start_level: 8,
        }
    }
}

#[derive(Debug)]
struct SymbolEntry {
    name: String,
    mode: Mode,
    binding: Binding,
    cache: Mutex<HashMap<u32, Interval>>,
}

/// Public view of a declared symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolInfo {
    pub name: String,
    pub mode: Mode,
    /// `None` for programmatic oracles.
    pub binding_spec: Option<String>,
}

/// Symbol table plus refinement configuration. Cloning shares the table.
#[derive(Clone)]
pub struct Registry {
    symbols: Arc<RwLock<Vec<Arc<SymbolEntry>>>>,
    config: RefineConfig,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new()
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.symbols().into_iter().map(|s| s.name).collect();
        f.debug_struct("Registry")
            .field("symbols", &names)
            .field("config", &self.config)
            .finish()
    }
}

impl Registry {
    pub fn new() -> Registry {
        Registry {
            symbols: Arc::new(RwLock::new(Vec::new())),
            config: RefineConfig::default(),
        }
    }

    /// A handle on the same symbol table with a different refinement
    /// configuration.
    pub fn with_config(&self, config: RefineConfig) -> Registry {
        Registry {
            symbols: Arc::clone(&self.symbols),
            config,
        }
    }

    pub fn config(&self) -> RefineConfig {
        self.config
    }

    pub fn declare(&self, name: &str, mode: Mode, binding: Binding) -> Result<SymbolicReal, SymError> {
        if !parse::is_identifier(name) {
            return Err(SymError::Parse {
                pos: 0,
                msg: format!("`{name}` is not a valid symbol name"),
            });
        }
        let mut table = self.symbols.write().expect("registry lock poisoned");
        if table.iter().any(|s| s.name == name) {
            return Err(SymError::DuplicateSymbol(name.to_string()));
        }
        let index = table.len() as u32;
        table.push(Arc::new(SymbolEntry {
            name: name.to_string(),
            mode,
            binding,
            cache: Mutex::new(HashMap::new()),
        }));
        Ok(SymbolicReal::from_var(Var { index, mode }))
    }

    /// Looks up a declared symbol by name.
    pub fn symbol(&self, name: &str) -> Result<SymbolicReal, SymError> {
        let table = self.symbols.read().expect("registry lock poisoned");
        table
            .iter()
            .enumerate()
            .find(|(_, s)| s.name == name)
            .map(|(i, s)| {
                SymbolicReal::from_var(Var {
                    index: i as u32,
                    mode: s.mode,
                })
            })
            .ok_or_else(|| SymError::UnknownSymbol(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbol(name).is_ok()
    }

    pub fn symbols(&self) -> Vec<SymbolInfo> {
        let table = self.symbols.read().expect("registry lock poisoned");
        table
            .iter()
            .map(|s| SymbolInfo {
                name: s.name.clone(),
                mode: s.mode,
                binding_spec: s.binding.spec(),
            })
            .collect()
    }

    fn entry(&self, v: Var) -> Arc<SymbolEntry> {
        let table = self.symbols.read().expect("registry lock poisoned");
        Arc::clone(&table[v.index as usize])
    }

    pub fn name(&self, v: Var) -> String {
        self.entry(v).name.clone()
    }

    pub fn parse(&self, text: &str) -> Result<SymbolicReal, SymError> {
        parse::parse_expr(text, |name| self.symbol(name))
    }

    pub fn format(&self, x: &SymbolicReal) -> String {
        parse::format_expr(x, |v| self.name(v))
    }

    /// Canonical enclosure of a symbol at `level` (width ≤ 2^-level).
    pub fn symbol_interval(&self, v: Var, level: u32) -> Result<Interval, SymError> {
        let entry = self.entry(v);
        if let Some(hit) = entry.cache.lock().expect("cache lock poisoned").get(&level) {
            return Ok(hit.clone());
        }
        let iv = entry.binding.interval_at(&entry.name, level)?;
        entry
            .cache
            .lock()
            .expect("cache lock poisoned")
            .insert(level, iv.clone());
        Ok(iv)
    }

    fn is_exact(&self, p: &Poly) -> bool {
        p.vars()
            .into_iter()
            .all(|v| matches!(self.entry(v).binding, Binding::Rational(_)))
    }

    /// Outward-rounded interval evaluation of a polynomial at `level`.
    pub fn eval_poly(&self, p: &Poly, level: u32) -> Result<Interval, SymError> {
        let bits = level.saturating_add(GUARD_BITS);
        let mut cache: HashMap<Var, Interval> = HashMap::new();
        let mut acc = Interval::point(Rational::zero());
        for (m, c) in p.terms() {
            let mut t = Interval::point(c.clone());
            for &(v, e) in m.factors() {
                let base = match cache.get(&v) {
                    Some(i) => i.clone(),
                    None => {
                        let i = self.symbol_interval(v, level)?;
                        cache.insert(v, i.clone());
                        i
                    }
                };
                t = t.mul(&base.powi(e)).round_outward(bits);
            }
            acc = acc.add(&t);
        }
        Ok(acc.round_outward(bits))
    }

    /// Interval for `x` at `level`, or `None` while the denominator's
    /// enclosure still straddles zero.
    pub fn eval(&self, x: &SymbolicReal, level: u32) -> Result<Option<Interval>, SymError> {
        let n = self.eval_poly(x.numerator(), level)?;
        if x.is_polynomial() {
            return Ok(Some(n));
        }
        let d = self.eval_poly(x.denominator(), level)?;
        Ok(n
            .div(&d)
            .map(|q| q.round_outward(level.saturating_add(GUARD_BITS))))
    }

    fn sign_poly(&self, p: &Poly) -> Result<Sign, SymError> {
        if let Some(c) = p.as_constant() {
            return Ok(Sign::of_rational(&c));
        }
        let exact = self.is_exact(p);
        for round in 0..self.config.max_rounds {
            let level = self.config.start_level.saturating_add(round);
            let iv = self.eval_poly(p, level)?;
            if iv.lo.is_positive() {
                return Ok(Sign::Positive);
            }
            if iv.hi.is_negative() {
                return Ok(Sign::Negative);
            }
            if exact {
                // point bindings cannot be refined further
                return Err(SymError::RefinementBudgetExceeded { rounds: round + 1 });
            }
        }
        Err(SymError::RefinementBudgetExceeded {
            rounds: self.config.max_rounds,
        })
    }

    /// Exact sign, by refinement for non-rational values.
    pub fn sign(&self, x: &SymbolicReal) -> Result<Sign, SymError> {
        if x.is_zero() {
            return Ok(Sign::Zero);
        }
        if let Some(q) = x.as_rational() {
            return Ok(Sign::of_rational(&q));
        }
        let sn = self.sign_poly(x.numerator())?;
        let sd = self.sign_poly(x.denominator())?;
        Ok(sn.times(sd))
    }

    pub fn compare(&self, x: &SymbolicReal, y: &SymbolicReal) -> Result<std::cmp::Ordering, SymError> {
        Ok(self.sign(&x.sub(y))?.to_ordering())
    }

    /// An enclosure of width ≤ `eps`. Results for decreasing `eps` are
    /// nested.
    pub fn approx(&self, x: &SymbolicReal, eps: &Rational) -> Result<Interval, SymError> {
        if !eps.is_positive() {
            return Err(SymError::InvalidEpsilon);
        }
        if let Some(q) = x.as_rational() {
            return Ok(Interval::point(q));
        }
        let first = self.config.start_level.max(level_for_eps(eps));
        for round in 0..self.config.max_rounds {
            let level = first.saturating_add(round);
            if let Some(iv) = self.eval(x, level)? {
                if &iv.width() <= eps {
                    return Ok(iv);
                }
            }
        }
        Err(SymError::RefinementBudgetExceeded {
            rounds: self.config.max_rounds,
        })
    }

    pub fn floor(&self, x: &SymbolicReal) -> Result<BigInt, SymError> {
        if let Some(q) = x.as_rational() {
            return Ok(q.floor().to_integer());
        }
        for round in 0..self.config.max_rounds {
            let level = self.config.start_level.saturating_add(round);
            if let Some(iv) = self.eval(x, level)? {
                let a = iv.lo.floor().to_integer();
                let b = iv.hi.floor().to_integer();
                if a == b {
                    return Ok(a);
                }
            }
        }
        Err(SymError::RefinementBudgetExceeded {
            rounds: self.config.max_rounds,
        })
    }

    /// Midpoint of a tight enclosure, for display.
    pub fn to_f64(&self, x: &SymbolicReal) -> Result<f64, SymError> {
        let eps = Rational::new(BigInt::one(), BigInt::one() << 60usize);
        let iv = self.approx(x, &eps)?;
        Ok(super::rational_to_f64(&iv.midpoint()))
    }
}

/// Smallest `k` with `2^-k ≤ eps`.
pub(crate) fn level_for_eps(eps: &Rational) -> u32 {
    let m = (eps.denom() + eps.numer() - BigInt::one()) / eps.numer();
    if m <= BigInt::one() {
        return 0;
    }
    (m - BigInt::one()).bits() as u32
}
