use std::cmp::Ordering;
use std::fs;
use std::sync::Arc;

use archord::archgroup::{holder_cut, OrderedVectorGroup};
use archord::circular::{
    cocycle, find_separating_power, zeleva_compare, zeleva_mul, zeleva_pow, CircleElem, ZelevaElement,
};
use archord::classify::{
    self, decide_field_embed, decide_rank1_embed, decide_rank1_iso, Answer, Decision, Direction, FieldDescriptor,
    PointedGroup, Provenance, Rank1Characteristic, Witness,
};
use archord::hahn::{format_vector, parse_vector, HahnSeries, VectorExponents};
use archord::reductions::{
    clo_embed_bruteforce, clo_to_odag, gl2_apply, ColoredLinearOrder, Gl2Matrix, OdagElement, OdagGroup,
};
use archord::symreal::{parse_rational, Binding, Mode, Rational, SymbolicReal};
use archord::zmodule::Subgroup;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cli::*;
use crate::report::{CliError, Report};
use crate::session::{Object, Session};

/// Global settings after defaults.
pub struct Settings {
    pub height: u32,
    pub eps: Rational,
    pub cap: u64,
}

pub const DEFAULT_HEIGHT: u32 = 2;
pub const DEFAULT_EPS: &str = "1/1000000";
pub const DEFAULT_CAP: u64 = 1000;

pub fn run(s: &mut Session, cmd: &Command, opts: &Settings) -> Result<Report, CliError> {
    if cmd.is_declaration() {
        return declare(s, cmd);
    }
    match cmd {
        Command::Sym(SymCmd::List) => sym_list(s),
        Command::Group(GroupCmd::Show { group }) => Ok(group_report("group show", s, &s.group(group)?)),
        Command::Type(TypeCmd::Show { ty }) => Ok(type_report("type show", s, &s.ordered_group(ty)?)),
        Command::Clo(CloCmd::Show { clo }) => Ok(clo_report("clo show", &s.clo(clo)?)),
        Command::Order(OrderCmd::Cmp { ty, x, y }) => order_cmp(s, ty, x, y),
        Command::Holder(a) => holder(s, a, opts),
        Command::Decide(a) => decide(s, a, opts),
        Command::Invariant(InvariantCmd::Emit { group, out }) => invariant_emit(s, group, out.as_deref(), opts),
        Command::Gl2(Gl2Cmd::Apply { a, b, c, d, expr }) => gl2(s, [*a, *b, *c, *d], expr),
        Command::Clo(CloCmd::Embed { k, l }) => clo_embed(s, k, l),
        Command::Odag(OdagCmd::Cmp { clo, f, g }) => odag_cmp(s, clo, f, g),
        Command::Circ(CircCmd::Cocycle { t1, t2, t3 }) => circ_cocycle(s, [t1, t2, t3]),
        Command::Circ(CircCmd::Separate { alpha, beta }) => circ_separate(s, alpha, beta, opts),
        Command::Zeleva(z) => zeleva(s, z),
        Command::Hahn(HahnCmd::Eval { exponents, series }) => hahn_eval(s, exponents, series),
        _ => unreachable!("declarations handled above"),
    }
}

/// Executes a declaration and records its canonical form.
pub fn declare(s: &mut Session, cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Sym(SymCmd::Declare { name, mode, binding }) => {
            let mode: Mode = mode.parse()?;
            let b = Binding::parse_spec(binding)?;
            let spec = b.spec().expect("parsed bindings have a spec");
            if s.get(name).is_some() {
                return Err(CliError::Contract(format!("name `{name}` is already in use")));
            }
            s.reg.declare(name, mode, b)?;
            s.record(&["sym", "declare", name, &mode.to_string(), &spec])?;
            let mut r = Report::new("sym declare");
            r.set("symbol", name.as_str()).set("mode", mode.to_string()).set("binding", spec);
            Ok(r)
        }
        Command::Group(GroupCmd::New { name, literal }) => {
            let g = Subgroup::parse(literal, &s.reg)?;
            s.insert(name, Object::Group(g.clone()))?;
            s.record(&["group", "new", name, &g.display(&s.reg)])?;
            let mut r = group_report("group new", s, &g);
            r.set("name", name.as_str());
            Ok(r)
        }
        Command::Type(TypeCmd::New { name, literal }) => {
            let t = OrderedVectorGroup::parse(literal, &s.reg)?;
            s.insert(name, Object::Type(t.clone()))?;
            s.record(&["type", "new", name, &t.display(&s.reg)])?;
            let mut r = type_report("type new", s, &t);
            r.set("name", name.as_str());
            Ok(r)
        }
        Command::Clo(CloCmd::New { name, order, colors }) => {
            let k = ColoredLinearOrder::parse(order, colors)?;
            s.insert(name, Object::Clo(k.clone()))?;
            let (o, c) = (k.order_string(), k.colors_string());
            s.record(&["clo", "new", name, "--order", &o, "--colors", &c])?;
            let mut r = clo_report("clo new", &k);
            r.set("name", name.as_str());
            Ok(r)
        }
        _ => unreachable!("not a declaration"),
    }
}

fn sym_list(s: &Session) -> Result<Report, CliError> {
    let syms: Vec<Value> = s
        .reg
        .symbols()
        .into_iter()
        .map(|i| json!({"name": i.name, "mode": i.mode.to_string(), "binding": i.binding_spec}))
        .collect();
    let mut r = Report::new("sym list");
    r.set("symbols", syms);
    Ok(r)
}

fn group_report(command: &str, s: &Session, g: &Subgroup) -> Report {
    let mut r = Report::new(command);
    let basis: Vec<String> = g.basis().iter().map(|b| s.reg.format(b)).collect();
    r.set("group", g.display(&s.reg))
        .set("span", g.mode().to_string())
        .set("rank", g.rank())
        .set("basis", basis);
    r
}

fn type_report(command: &str, s: &Session, t: &OrderedVectorGroup) -> Report {
    let mut r = Report::new(command);
    r.set("type", t.display(&s.reg)).set("rank", t.rank());
    r
}

fn clo_report(command: &str, k: &ColoredLinearOrder) -> Report {
    let mut r = Report::new(command);
    r.set("order", k.order_string())
        .set("colors", k.colors_string())
        .set("size", k.size());
    r
}

fn expr(s: &Session, text: &str) -> Result<SymbolicReal, CliError> {
    Ok(s.reg.parse(text)?)
}

fn rational(text: &str) -> Result<Rational, CliError> {
    Ok(parse_rational(text.trim())?)
}

fn vector(text: &str) -> Result<Vec<Rational>, CliError> {
    parse_vector(text).map_err(|m| CliError::Parse(format!("bad vector `{text}`: {m}")))
}

fn ordering_str(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

fn ordering_int(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn int_json(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn order_cmp(s: &Session, ty: &str, x: &str, y: &str) -> Result<Report, CliError> {
    let t = s.ordered_group(ty)?;
    let (xv, yv) = (vector(x)?, vector(y)?);
    let o = t.compare(&s.reg, &xv, &yv)?;
    let mut r = Report::new("order cmp");
    r.set("type", t.display(&s.reg))
        .set("x", format_vector(&xv))
        .set("y", format_vector(&yv))
        .set("relation", ordering_str(o))
        .set("sign", ordering_int(o));
    Ok(r)
}

fn holder(s: &Session, a: &HolderArgs, opts: &Settings) -> Result<Report, CliError> {
    let t = s.ordered_group(&a.ty)?;
    let oracle = t.oracle(&s.reg);
    let tv = vector(&a.t)?;
    t.check(&tv)?;
    let unit = match &a.unit {
        Some(u) => vector(u)?,
        None => {
            let mut e1 = vec![Rational::zero(); t.rank()];
            e1[0] = Rational::one();
            let zero = vec![Rational::zero(); t.rank()];
            if t.compare(&s.reg, &e1, &zero)? == Ordering::Less {
                e1[0] = -Rational::one();
            }
            e1
        }
    };
    t.check(&unit)?;
    let iv = holder_cut(&oracle, &unit, &tv, &opts.eps)?;
    let mut r = Report::new("holder");
    r.set("type", t.display(&s.reg))
        .set("unit", format_vector(&unit))
        .set("t", format_vector(&tv))
        .set("lo", iv.lo.to_string())
        .set("hi", iv.hi.to_string())
        .set("width", iv.width().to_string())
        .set("eps", opts.eps.to_string());
    Ok(r)
}

fn decide(s: &Session, a: &DecideArgs, opts: &Settings) -> Result<Report, CliError> {
    let direction: Direction = a.direction.parse().map_err(CliError::Parse)?;
    let mut r = Report::new("decide");
    r.set("direction", direction.to_string());
    let exact = |r: &mut Report, family: &'static str, yes: bool| {
        r.set("status", if yes { "yes" } else { "no" })
            .set("provenance", Provenance::Exact(family).to_string());
    };
    match a.family.as_deref() {
        None | Some("unit-span") | Some("pointed") => {
            let g = s.group(&a.g)?;
            let h = s.group(&a.h)?;
            r.set("g", g.display(&s.reg)).set("h", h.display(&s.reg));
            let d = match a.family.as_deref() {
                None => classify::decide(&s.reg, &g, &h, direction, opts.height)?,
                Some("unit-span") => classify::decide_by_unit_span(&s.reg, &g, &h, direction)?.ok_or_else(|| {
                    CliError::Contract(
                        "the unit-span family needs two rank-2 q-spans whose ratios are available (algebraic mode)"
                            .into(),
                    )
                })?,
                _ => {
                    let pts = a
                        .points
                        .as_ref()
                        .ok_or_else(|| CliError::Parse("the pointed family needs --points <g> <h>".into()))?;
                    let pg = PointedGroup::new(&s.reg, g, expr(s, &pts[0])?)?;
                    let ph = PointedGroup::new(&s.reg, h, expr(s, &pts[1])?)?;
                    let w = classify::decide_pointed(&s.reg, &pg, &ph, direction)?;
                    r.set("points", vec![s.reg.format(pg.point()), s.reg.format(ph.point())]);
                    Decision {
                        answer: if w.is_some() { Answer::Yes } else { Answer::No },
                        witness: w,
                        unit_span: None,
                        provenance: Provenance::Exact("pointed"),
                    }
                }
            };
            decision_fields(&mut r, s, &d);
        }
        Some("field") => {
            let f = field(s, &a.g)?;
            let g = field(s, &a.h)?;
            r.set("g", f.to_string()).set("h", g.to_string());
            let yes = match direction {
                Direction::Iso => f == g,
                Direction::Embed => decide_field_embed(&f, &g),
            };
            exact(&mut r, "field", yes);
        }
        Some("rank1") => {
            let c1: Rank1Characteristic = a.g.parse()?;
            let c2: Rank1Characteristic = a.h.parse()?;
            r.set("g", c1.to_string()).set("h", c2.to_string());
            let yes = match direction {
                Direction::Iso => decide_rank1_iso(&c1, &c2),
                Direction::Embed => decide_rank1_embed(&c1, &c2),
            };
            exact(&mut r, "rank1", yes);
        }
        Some(other) => {
            return Err(CliError::Parse(format!(
                "unknown family `{other}` (expected unit-span, field, rank1 or pointed)"
            )))
        }
    }
    Ok(r)
}

fn decision_fields(r: &mut Report, s: &Session, d: &Decision) {
    r.set("status", d.answer.to_string()).set("provenance", d.provenance.to_string());
    if let Provenance::Search { height } = d.provenance {
        r.set("height", height);
    }
    if let Some(Witness { lambda, verified, .. }) = &d.witness {
        r.set("lambda", s.reg.format(lambda)).set("verified", *verified);
    }
    if let Some(u) = &d.unit_span {
        let m = u.matrix();
        r.set("matrix", format!("({},{};{},{})", m[0][0], m[0][1], m[1][0], m[1][1]))
            .set(
                "matrix_entries",
                json!([[int_json(&m[0][0]), int_json(&m[0][1])], [int_json(&m[1][0]), int_json(&m[1][1])]]),
            );
    }
}

/// `Q`, `Q()` or `Q(s1, s2)`; every symbol must be declared.
fn field(s: &Session, text: &str) -> Result<FieldDescriptor, CliError> {
    let t = text.trim();
    let body = t
        .strip_prefix('Q')
        .map(str::trim)
        .map(|b| b.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(b))
        .ok_or_else(|| CliError::Parse(format!("expected a field literal `Q(s1, ...)`, got `{t}`")))?;
    let names: Vec<&str> = body.split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
    for n in &names {
        s.reg.symbol(n)?;
    }
    Ok(FieldDescriptor::new(names))
}

fn invariant_emit(
    s: &Session,
    group: &str,
    out: Option<&std::path::Path>,
    opts: &Settings,
) -> Result<Report, CliError> {
    let g = s.group(group)?;
    let frag = classify::emit_invariant(&s.reg, &g, opts.height)?;
    let text = frag.render(&s.reg);
    let mut r = Report::new("invariant emit");
    r.set("group", g.display(&s.reg))
        .set("height", opts.height)
        .set("slices", frag.slices.len())
        .set("triples", frag.triples.len());
    match out {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::Contract(format!("cannot write {}: {e}", path.display())))?;
            r.set("out", path.display().to_string());
        }
        None => {
            r.set("fragment", text);
        }
    }
    Ok(r)
}

fn gl2(s: &Session, m: [i64; 4], text: &str) -> Result<Report, CliError> {
    let m = Gl2Matrix::new(m[0], m[1], m[2], m[3])?;
    let x = expr(s, text)?;
    let y = gl2_apply(&m, &x)?;
    let mut r = Report::new("gl2 apply");
    r.set("matrix", m.to_string())
        .set("input", s.reg.format(&x))
        .set("result", s.reg.format(&y));
    Ok(r)
}

fn clo_embed(s: &Session, k: &str, l: &str) -> Result<Report, CliError> {
    let (kk, ll) = (s.clo(k)?, s.clo(l)?);
    let j = clo_embed_bruteforce(&kk, &ll);
    let mut r = Report::new("clo embed");
    r.set("k", kk.order_string())
        .set("l", ll.order_string())
        .set("status", if j.is_some() { "yes" } else { "no" })
        .set("provenance", "exact:brute-force");
    if let Some(j) = j {
        r.set("injection", j);
    }
    Ok(r)
}

/// `{"pos": [q0, q1]}`: the coordinate `q0 + q1·σ` at position `pos`;
/// rationals may be JSON numbers or strings such as `"1/3"`.
pub fn parse_odag_element(text: &str) -> Result<OdagElement, CliError> {
    let bad = |m: String| CliError::Parse(format!("bad element `{text}`: {m}"));
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| bad("expected a JSON object".into()))?;
    let mut coords = Vec::new();
    for (k, v) in obj {
        let p: usize = k.parse().map_err(|_| bad(format!("position `{k}` is not an index")))?;
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad(format!("value at {p} is not a pair")))?;
        let q = |x: &Value| -> Result<Rational, CliError> {
            match x {
                Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
                Value::String(t) => rational(t),
                other => Err(bad(format!("`{other}` is not an integer or rational string"))),
            }
        };
        coords.push((p, (q(&pair[0])?, q(&pair[1])?)));
    }
    Ok(OdagElement::from_coords(coords))
}

pub fn format_odag_element(f: &OdagElement) -> String {
    let items: Vec<String> = f
        .coords()
        .iter()
        .map(|(p, (a, b))| format!("\"{p}\":[{},{}]", rational_json(a), rational_json(b)))
        .collect();
    format!("{{{}}}", items.join(","))
}

fn rational_json(q: &Rational) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("\"{q}\"")
    }
}

fn odag_cmp(s: &Session, clo: &str, f: &str, g: &str) -> Result<Report, CliError> {
    let grp = clo_to_odag(&s.reg, &s.clo(clo)?)?;
    let (ef, eg) = (parse_odag_element(f)?, parse_odag_element(g)?);
    grp.check(&ef)?;
    grp.check(&eg)?;
    let o = grp.compare(&ef, &eg)?;
    let mut r = Report::new("odag cmp");
    r.set("f", format_odag_element(&ef))
        .set("g", format_odag_element(&eg))
        .set("relation", ordering_str(o))
        .set("sign", ordering_int(o));
    Ok(r)
}

fn circ_cocycle(s: &Session, ts: [&String; 3]) -> Result<Report, CliError> {
    let els = ts
        .iter()
        .map(|t| Ok(CircleElem::new(&s.reg, expr(s, t)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let c = cocycle(&s.reg, &els[0], &els[1], &els[2])?;
    let mut r = Report::new("circ cocycle");
    let angles: Vec<String> = els.iter().map(|e| s.reg.format(e.theta())).collect();
    r.set("angles", angles).set("orientation", c);
    Ok(r)
}

fn circ_separate(s: &Session, alpha: &str, beta: &str, opts: &Settings) -> Result<Report, CliError> {
    let (a, b) = (expr(s, alpha)?, expr(s, beta)?);
    let found = find_separating_power(&s.reg, &a, &b, opts.cap)?;
    let mut r = Report::new("circ separate");
    r.set("alpha", s.reg.format(&a))
        .set("beta", s.reg.format(&b))
        .set("cap", opts.cap);
    match found {
        Some((n, k)) => {
            r.set("status", "found").set("n", n).set("k", int_json(&k));
        }
        None => {
            r.set("status", "unknown");
        }
    }
    Ok(r)
}

/// `(theta, n)`, with `theta` reduced mod 1.
pub fn parse_zeleva(s: &Session, text: &str) -> Result<ZelevaElement, CliError> {
    let bad = || CliError::Parse(format!("expected `(theta, n)`, got `{text}`"));
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (theta, n) = inner.rsplit_once(',').ok_or_else(bad)?;
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    Ok(ZelevaElement::new(CircleElem::new(&s.reg, expr(s, theta)?)?, n))
}

pub fn format_zeleva(s: &Session, z: &ZelevaElement) -> String {
    format!("({}, {})", s.reg.format(z.g.theta()), z.n)
}

fn zeleva(s: &Session, z: &ZelevaCmd) -> Result<Report, CliError> {
    let mut r;
    match z {
        ZelevaCmd::Mul { p, q } => {
            let (a, b) = (parse_zeleva(s, p)?, parse_zeleva(s, q)?);
            r = Report::new("zeleva mul");
            r.set("result", format_zeleva(s, &zeleva_mul(&s.reg, &a, &b)?));
        }
        ZelevaCmd::Cmp { p, q } => {
            let (a, b) = (parse_zeleva(s, p)?, parse_zeleva(s, q)?);
            let o = zeleva_compare(&s.reg, &a, &b)?;
            r = Report::new("zeleva cmp");
            r.set("relation", ordering_str(o)).set("sign", ordering_int(o));
        }
        ZelevaCmd::Pow { p, k } => {
            let a = parse_zeleva(s, p)?;
            r = Report::new("zeleva pow");
            r.set("result", format_zeleva(s, &zeleva_pow(&s.reg, &a, *k)?));
        }
    }
    Ok(r)
}

fn hahn_eval(s: &Session, exponents: &str, series: &str) -> Result<Report, CliError> {
    let mut r = Report::new("hahn eval");
    if let Some(Object::Clo(k)) = s.get(exponents) {
        let grp: Arc<OdagGroup> = Arc::new(clo_to_odag(&s.reg, k)?);
        let check = Arc::clone(&grp);
        let f = HahnSeries::parse(grp, series, |e| {
            let el = parse_odag_element(e).map_err(|e| e.message().to_string())?;
            check.check(&el).map_err(|e| e.to_string())?;
            Ok(el)
        })?;
        series_fields(&mut r, &f, format_odag_element)?;
    } else {
        let group = s.ordered_group(exponents)?;
        let rank = group.rank();
        let exps = Arc::new(VectorExponents {
            group,
            reg: s.reg.clone(),
        });
        let f = HahnSeries::parse(exps, series, |e| {
            let v = parse_vector(e)?;
            if v.len() != rank {
                return Err(format!("expected {rank} coordinates, got {}", v.len()));
            }
            Ok(v)
        })?;
        series_fields(&mut r, &f, |v| format_vector(v))?;
    }
    Ok(r)
}

fn series_fields<G: archord::hahn::ExponentGroup>(
    r: &mut Report,
    f: &HahnSeries<G>,
    elem: impl Fn(&G::Elem) -> String + Copy,
) -> Result<(), CliError> {
    r.set("series", f.render(elem)?).set("terms", f.terms().len());
    let sign = ordering_int(f.signum()?);
    r.set("sign", sign);
    if !f.is_zero() {
        let lc = f.leading_coefficient()?;
        r.set("valuation", elem(&f.valuation()?))
            .set("leading_coefficient", lc.to_string());
        debug_assert_eq!(lc.is_positive(), sign > 0);
    }
    Ok(())
}

/// Settings from the global flags.
pub fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let eps = rational(cli.eps.as_deref().unwrap_or(DEFAULT_EPS))?;
    if !eps.is_positive() {
        return Err(CliError::Contract("--eps must be positive".into()));
    }
    let height = cli.height.unwrap_or(DEFAULT_HEIGHT);
    if height == 0 {
        return Err(CliError::Contract("--height must be at least 1".into()));
    }
    Ok(Settings {
        height,
        eps,
        cap: cli.cap.unwrap_or(DEFAULT_CAP),
    })
}
