//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use archord::archgroup::{encloses, extract_type, OrderedVectorGroup, TypeVector};
use archord::circular::{
    circle_mul, cocycle, find_separating_power, zeleva_mul, zeleva_pow, CircleElem, ZelevaElement,
};
use archord::classify::{
    decide, decide_pointed_iso, decide_unit_span, emit_invariant, invariant_equal, invariant_slice, verify_scaling,
    Answer, Direction, PointedGroup,
};
use archord::hahn::{ExponentGroup, HahnSeries, VectorExponents};
use archord::reductions::{
    clo_embed_bruteforce, clo_to_odag, color_embedding_table, gl2_apply, odag_embed_from_clo, structured_embedding,
    unit_span_group, ColorFamily, ColoredLinearOrder, Gl2Matrix, OdagElement, OdagGroup,
};
use archord::symreal::{Rational, Registry, Sign, SymbolicReal};
use archord::zmodule::{SpanMode, Subgroup};
use common::*;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Debug>(x: E) -> String {
    format!("{x:?}")
}

/// Values of the algebraic-mode test symbols `t1, t2, t3, …`.
const T_VALUES: [f64; 5] = [
    std::f64::consts::PI,
    std::f64::consts::E,
    std::f64::consts::LN_2,
    std::f64::consts::SQRT_2,
    1.732_050_807_568_877_2,
];

// ---------------------------------------------------------------------------
// Affine forms `c₀ + Σ cᵢ tᵢ`, tracked independently of the kernel.

#[derive(Clone, Debug, PartialEq)]
struct Affine(Vec<Rational>);

impl Affine {
    fn random(r: &mut ChaCha8Rng, nsyms: usize) -> Affine {
        loop {
            let v: Vec<Rational> = (0..=nsyms).map(|_| q(r.gen_range(-3..=3))).collect();
            if v.iter().any(|x| !x.is_zero()) {
                return Affine(v);
            }
        }
    }

    fn to_sym(&self, t: &[SymbolicReal]) -> SymbolicReal {
        let mut acc = SymbolicReal::from_rational(self.0[0].clone());
        for (c, s) in self.0[1..].iter().zip(t) {
            acc = acc.add(&s.scale(c));
        }
        acc
    }

    fn value(&self) -> f64 {
        let mut v = self.0[0].to_f64().unwrap();
        for (c, t) in self.0[1..].iter().zip(T_VALUES) {
            v += c.to_f64().unwrap() * t;
        }
        v
    }

    fn combine(forms: &[Affine], coeffs: &[Rational]) -> Affine {
        let mut out = vec![Rational::zero(); forms[0].0.len()];
        for (f, c) in forms.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(&f.0) {
                *o += x * c;
            }
        }
        Affine(out)
    }

    /// Coefficients of the product in the monomials `xᵢxⱼ` (`i ≤ j`, `x₀ = 1`).
    fn product(&self, o: &Affine) -> Vec<Rational> {
        let n = self.0.len();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let key = (i.min(j), i.max(j));
                *out.entry(key).or_insert_with(Rational::zero) += &self.0[i] * &o.0[j];
            }
        }
        out.into_values().collect()
    }
}

/// Unique solution of `Σ cⱼ colsⱼ = target`, if any (columns independent).
fn solve_columns(cols: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = cols.len();
    let rows = target.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).chain([target[i].clone()]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=k {
                    let d = &f * &m[row][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][k].clone();
    }
    Some(sol)
}

fn independent(forms: &[Affine]) -> bool {
    // rank via elimination on the transposed system
    let cols: Vec<Vec<Rational>> = forms.iter().map(|f| f.0.clone()).collect();
    (0..forms.len()).all(|i| {
        let others: Vec<Vec<Rational>> = cols.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()).collect();
        others.is_empty() || solve_columns(&others, &cols[i]).is_none()
    })
}

fn random_forms(r: &mut ChaCha8Rng, nsyms: usize) -> Vec<Affine> {
    loop {
        let k = r.gen_range(1..=3);
        let forms: Vec<Affine> = (0..k).map(|_| Affine::random(r, nsyms)).collect();
        if independent(&forms) {
            return forms;
        }
    }
}

fn random_coeffs(r: &mut ChaCha8Rng, k: usize, mode: SpanMode) -> Vec<Rational> {
    (0..k)
        .map(|_| match mode {
            SpanMode::Z => q(r.gen_range(-3..=3)),
            SpanMode::Q => qq(r.gen_range(-3..=3), r.gen_range(1..=3)),
        })
        .collect()
}

/// Whether `(a/b)·G ⊆ G` for `G` spanned by `forms`.
fn ratio_maps_into(forms: &[Affine], mode: SpanMode, a: &Affine, b: &Affine) -> bool {
    let cols: Vec<Vec<Rational>> = forms.iter().map(|f| b.product(f)).collect();
    forms.iter().all(|f| match solve_columns(&cols, &a.product(f)) {
        None => false,
        Some(c) => mode == SpanMode::Q || c.iter().all(|x| x.is_integer()),
    })
}

fn random_mode(r: &mut ChaCha8Rng) -> SpanMode {
    if r.gen_bool(0.5) {
        SpanMode::Z
    } else {
        SpanMode::Q
    }
}

fn random_scalar(r: &mut ChaCha8Rng) -> Rational {
    qq(r.gen_range(1..=10), r.gen_range(1..=10))
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let (reg, t) = algebraic_registry(3);
    let mut r = rng(1);
    let (mut yes, mut no, mut perturbed_true) = (0, 0, 0);
    for i in 0..200 {
        let mode = random_mode(&mut r);
        let forms = random_forms(&mut r, 3);
        let gens: Vec<SymbolicReal> = forms.iter().map(|f| f.to_sym(&t)).collect();
        let g = Subgroup::new(gens, mode).map_err(e)?;
        let point = loop {
            let p = Affine::combine(&forms, &random_coeffs(&mut r, forms.len(), mode));
            if p.value().abs() > 1e-6 {
                break if p.value() > 0.0 { p } else { Affine(p.0.iter().map(|x| -x).collect()) };
            }
        };
        let other = if i % 2 == 0 {
            point.clone()
        } else {
            loop {
                let h = Affine::combine(&forms, &random_coeffs(&mut r, forms.len(), mode));
                let p = Affine::combine(&[point.clone(), h], &[q(1), q(1)]);
                if p != point && p.value() > 1e-6 {
                    break p;
                }
            }
        };
        let truth = ratio_maps_into(&forms, mode, &other, &point) && ratio_maps_into(&forms, mode, &point, &other);
        let lambda = SymbolicReal::from_rational(random_scalar(&mut r));
        let a = PointedGroup::new(&reg, g.clone(), point.to_sym(&t)).map_err(e)?;
        let scaled = g.scale(&lambda).map_err(e)?;
        let b = PointedGroup::new(&reg, scaled, lambda.mul(&other.to_sym(&t)).map_err(e)?).map_err(e)?;
        let got = decide_pointed_iso(&reg, &a, &b).map_err(e)?;
        ensure(got.is_some() == truth, || format!("instance {i}: expected {truth}, got {got:?}"))?;
        if let Some(w) = got {
            ensure(w.verified, || format!("instance {i}: unverified witness"))?;
            ensure(verify_scaling(&reg, a.group(), b.group(), &w.lambda, Direction::Iso).map_err(e)?, || {
                format!("instance {i}: witness does not verify")
            })?;
            if i % 2 == 0 {
                ensure(w.lambda == lambda, || format!("instance {i}: wrong scalar"))?;
            } else {
                perturbed_true += 1;
            }
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("200 instances: {yes} witnessed, {no} absent ({perturbed_true} perturbed points still isomorphic)"))
}

fn random_gl2(r: &mut ChaCha8Rng) -> Gl2Matrix {
    loop {
        let v: Vec<i64> = (0..4).map(|_| r.gen_range(-5..=5)).collect();
        if let Ok(m) = Gl2Matrix::new(v[0], v[1], v[2], v[3]) {
            return m;
        }
    }
}

fn criterion_2() -> Outcome {
    let (reg, t) = algebraic_registry(5);
    let mut r = rng(2);
    for i in 0..100 {
        let m = random_gl2(&mut r);
        let k = r.gen_range(0..t.len());
        let alpha = &t[k];
        let beta = gl2_apply(&m, alpha).map_err(e)?;
        let sol = decide_unit_span(&reg, alpha, &beta, Direction::Iso)
            .map_err(e)?
            .ok_or_else(|| format!("matrix {i} {m}: no solution"))?;
        let denom = alpha.scale(&q(m.c)).add(&int(m.d));
        let dv = m.c as f64 * T_VALUES[k] + m.d as f64;
        let expected = if dv > 0.0 { denom.recip() } else { denom.neg().recip() }.map_err(e)?;
        ensure(sol.lambda == expected, || format!("matrix {i} {m}: λ = {}", reg.format(&sol.lambda)))?;
        let (g, h) = (unit_span_group(alpha).map_err(e)?, unit_span_group(&beta).map_err(e)?);
        ensure(verify_scaling(&reg, &g, &h, &sol.lambda, Direction::Iso).map_err(e)?, || {
            format!("matrix {i} {m}: witness does not verify")
        })?;
    }
    for i in 0..50 {
        let a = r.gen_range(0..t.len());
        let b = (a + r.gen_range(1..t.len())) % t.len();
        let m = random_gl2(&mut r);
        let beta = gl2_apply(&m, &t[b]).map_err(e)?;
        for dir in [Direction::Iso, Direction::Embed] {
            let got = decide_unit_span(&reg, &t[a], &beta, dir).map_err(e)?;
            ensure(got.is_none(), || format!("pair {i} ({dir}): unexpected solution {got:?}"))?;
        }
    }
    Ok("100 GL2 images solved with λ = 1/|cα+d|; 50 distinct-symbol pairs absent".into())
}

/// Exact bounds on `a·s + b` from the symbol's decimal expansion.
fn decimal_bounds(digits: &str, a: &Rational, b: &Rational) -> (Rational, Rational) {
    let (int_part, frac) = digits.split_once('.').unwrap();
    let scale = BigInt::from(10).pow(frac.len() as u32);
    let n: BigInt = format!("{int_part}{frac}").parse().unwrap();
    let lo = Rational::new(n.clone(), scale.clone());
    let hi = Rational::new(n + 1, scale);
    let (x, y) = (a * &lo + b, a * &hi + b);
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

fn criterion_3() -> Outcome {
    let (reg, s) = linear_registry();
    let digits = [SQRT2, SQRT3, SQRT5, SQRT7];
    let eps = qq(1, 1 << 20);
    let mut r = rng(3);
    let mut entries_checked = 0;
    for i in 0..25 {
        let rank = r.gen_range(1..=3);
        let mut idx: Vec<usize> = (0..4).collect();
        idx.shuffle(&mut r);
        let mut entries = vec![SymbolicReal::one()];
        let mut bounds = vec![(q(1), q(1))];
        for &k in &idx[..rank - 1] {
            let a = loop {
                let a = small_rational(&mut r, 4);
                if !a.is_zero() {
                    break a;
                }
            };
            let b = small_rational(&mut r, 4);
            entries.push(s[k].scale(&a).add(&SymbolicReal::from_rational(b.clone())));
            bounds.push(decimal_bounds(digits[k], &a, &b));
        }
        let g = OrderedVectorGroup::new(TypeVector::new(entries.clone()).map_err(e)?, random_mode(&mut r));
        let ivs = extract_type(&g.oracle(&reg), rank, &eps).map_err(e)?;
        for ((iv, x), (lo, hi)) in ivs.iter().zip(&entries).zip(&bounds) {
            ensure(iv.width() <= eps, || format!("vector {i}: width {} > 2^-20", iv.width()))?;
            ensure(encloses(&reg, iv, x).map_err(e)?, || format!("vector {i}: entry not enclosed"))?;
            ensure(!(hi < &iv.lo || &iv.hi < lo), || format!("vector {i}: decimal value outside {iv:?}"))?;
            let ap = reg.approx(x, &qq(1, 1 << 30)).map_err(e)?;
            ensure(!(ap.hi < iv.lo || iv.hi < ap.lo), || format!("vector {i}: approx disjoint"))?;
            entries_checked += 1;
        }
    }
    Ok(format!("25 type vectors, {entries_checked} entries enclosed at width ≤ 2^-20"))
}

fn criterion_4() -> Outcome {
    let (reg, t) = algebraic_registry(5);
    let mut r = rng(4);
    let mut slices_matched = 0;
    for i in 0..50 {
        let mode = random_mode(&mut r);
        let forms = random_forms(&mut r, 3);
        let g = Subgroup::new(forms.iter().map(|f| f.to_sym(&t[..3])).collect(), mode).map_err(e)?;
        let qv = SymbolicReal::from_rational(random_scalar(&mut r));
        let h = g.scale(&qv).map_err(e)?;
        let ans = invariant_equal(&reg, &g, &h, 2).map_err(e)?;
        ensure(ans == Answer::Yes, || format!("pair {i}: invariant_equal = {ans}"))?;
        let d = decide(&reg, &g, &h, Direction::Iso, 2).map_err(e)?;
        let lambda = d.witness.ok_or_else(|| format!("pair {i}: no witness"))?.lambda;
        let (fg, fh) = (emit_invariant(&reg, &g, 2).map_err(e)?, emit_invariant(&reg, &h, 2).map_err(e)?);
        for (sl, rep) in &fg.slices {
            let image = invariant_slice(&reg, &h, &lambda.mul(rep).map_err(e)?).map_err(e)?;
            ensure(&image == sl, || format!("pair {i}: slice of G at {} has no match", reg.format(rep)))?;
        }
        for (sl, rep) in &fh.slices {
            let image = invariant_slice(&reg, &g, &rep.div(&lambda).map_err(e)?).map_err(e)?;
            ensure(&image == sl, || format!("pair {i}: slice of H at {} has no match", reg.format(rep)))?;
        }
        for (a, b, rr) in fg.triples.iter().chain(&fh.triples).take(50) {
            let frag = if fg.triples.iter().any(|x| x.0 == *a && x.1 == *b && &x.2 == rr) { &fg } else { &fh };
            ensure(frag.slices[*a].0.divide(rr).map_err(e)? == frag.slices[*b].0, || {
                format!("pair {i}: bad triple ({a}, {b})")
            })?;
        }
        slices_matched += fg.slices.len() + fh.slices.len();
    }
    for i in 0..20 {
        let a = r.gen_range(0..t.len());
        let b = (a + r.gen_range(1..t.len())) % t.len();
        let m = random_gl2(&mut r);
        let g = unit_span_group(&t[a]).map_err(e)?;
        let h = unit_span_group(&gl2_apply(&m, &t[b]).map_err(e)?).map_err(e)?;
        let ans = invariant_equal(&reg, &g, &h, 2).map_err(e)?;
        ensure(ans == Answer::No, || format!("unit-span pair {i}: invariant_equal = {ans}"))?;
    }
    Ok(format!("50 scaled pairs yes ({slices_matched} slices matched under λ); 20 unit-span pairs no"))
}

fn all_words(max_len: usize, colors: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..colors).map(move |c| {
                    let mut x = w.clone();
                    x.push(c);
                    x
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// The word with its positions relabelled at random.
fn relabel(r: &mut ChaCha8Rng, word: &[usize]) -> ColoredLinearOrder {
    let n = word.len();
    let mut positions: Vec<usize> = (0..n).collect();
    positions.shuffle(r);
    let mut colors = vec![0; n];
    for (i, &p) in positions.iter().enumerate() {
        colors[p] = word[i];
    }
    ColoredLinearOrder::from_sequence(&positions, colors).unwrap()
}

fn random_odag_element(r: &mut ChaCha8Rng, size: usize) -> OdagElement {
    let support: Vec<usize> = (0..size).filter(|_| r.gen_bool(0.6)).collect();
    OdagElement::from_coords(
        support
            .into_iter()
            .map(|p| (p, (qq(r.gen_range(-4..=4), r.gen_range(1..=3)), q(r.gen_range(-2..=2))))),
    )
}

/// Generators `1` and `σ` at each position, and their negatives.
fn basis_elements(size: usize) -> Vec<OdagElement> {
    (0..size)
        .flat_map(|p| {
            [(q(1), q(0)), (q(0), q(1)), (q(-1), q(0)), (q(0), q(-1))]
                .into_iter()
                .map(move |(a, b)| OdagElement::single(p, a, b))
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let reg = Registry::new();
    let family = ColorFamily::default_for(&reg, 3).map_err(e)?;
    let table = color_embedding_table(&reg, &family).map_err(e)?;
    let mut r = rng(5);
    let words = all_words(4, 3);
    let orders: Vec<ColoredLinearOrder> = words.iter().map(|w| relabel(&mut r, w)).collect();
    let groups: Vec<OdagGroup> = orders.iter().map(|o| OdagGroup::new(&reg, o.clone(), family.clone())).collect();
    let (mut present, mut absent) = (0usize, 0usize);
    let mut embedded = Vec::new();
    for (ki, k) in orders.iter().enumerate() {
        for (li, l) in orders.iter().enumerate() {
            let brute = clo_embed_bruteforce(k, l);
            let structured = structured_embedding(k, l, &table);
            ensure(brute.is_some() == structured.is_some(), || {
                format!("K = {k}, L = {l}: bruteforce {brute:?} vs structured {structured:?}")
            })?;
            if let Some(map) = structured {
                // the structured map is a verified order-preserving group map
                let (gk, gl) = (&groups[ki], &groups[li]);
                let elems = basis_elements(k.size());
                let images: Vec<OdagElement> =
                    elems.iter().map(|f| map.apply(gk, gl, f)).collect::<Result<_, _>>().map_err(e)?;
                for (a, fa) in elems.iter().zip(&images) {
                    ensure(gk.compare(a, &OdagElement::zero()).map_err(e)? == gl.compare(fa, &OdagElement::zero()).map_err(e)?, || {
                        format!("K = {k}, L = {l}: structured map flips a sign")
                    })?;
                }
                for i in 0..elems.len() {
                    for j in (i + 1)..elems.len() {
                        let x = gk.compare(&elems[i], &elems[j]).map_err(e)?;
                        let y = gl.compare(&images[i], &images[j]).map_err(e)?;
                        ensure(x == y, || format!("K = {k}, L = {l}: structured map not monotone"))?;
                    }
                }
                present += 1;
                embedded.push((ki, li, brute.unwrap()));
            } else {
                absent += 1;
            }
        }
    }
    embedded.shuffle(&mut r);
    for (ki, li, j) in embedded.iter().take(200) {
        let (k, l) = (&orders[*ki], &orders[*li]);
        let phi = odag_embed_from_clo(j, k, l).map_err(e)?;
        let (gk, gl) = (clo_to_odag(&reg, k).map_err(e)?, clo_to_odag(&reg, l).map_err(e)?);
        for _ in 0..100 {
            let (a, b) = (random_odag_element(&mut r, k.size()), random_odag_element(&mut r, k.size()));
            let x = gk.compare(&a, &b).map_err(e)?;
            let y = gl.compare(&phi.apply(&a), &phi.apply(&b)).map_err(e)?;
            ensure(x == y, || format!("K = {k}, L = {l}: induced map not order-preserving"))?;
        }
    }
    Ok(format!(
        "{} orders, {} pairs: {present} embeddable, {absent} not; 200 sampled embeddings × 100 element pairs preserved",
        orders.len(),
        orders.len() * orders.len()
    ))
}

/// An angle together with exact bounds on `θ ∈ [0, 1)`.
struct Angle {
    elem: CircleElem,
    lo: Rational,
    hi: Rational,
}

fn random_angle(r: &mut ChaCha8Rng, reg: &Registry, s: &[SymbolicReal]) -> Angle {
    let digits = [SQRT2, SQRT3, SQRT5, SQRT7];
    if r.gen_bool(0.7) {
        let d = r.gen_range(1..=12);
        let x = qq(r.gen_range(0..d), d);
        Angle { elem: CircleElem::from_ratio(x.numer().to_i64().unwrap(), x.denom().to_i64().unwrap()), lo: x.clone(), hi: x }
    } else {
        let k = r.gen_range(0..4);
        let a = qq(r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 }, r.gen_range(1..=3));
        let b = small_rational(r, 3);
        let (lo, hi) = decimal_bounds(digits[k], &a, &b);
        let fl = Rational::from_integer(lo.floor().to_integer());
        assert_eq!(lo.floor(), hi.floor());
        let theta = s[k].scale(&a).add(&SymbolicReal::from_rational(b));
        Angle { elem: CircleElem::new(reg, theta).unwrap(), lo: lo - &fl, hi: hi - fl }
    }
}

/// Cyclic orientation of three points of `[0, 1)` known exactly or to
/// within disjoint bounds.
fn orientation(x: &Angle, y: &Angle, z: &Angle) -> Option<i8> {
    let key = |a: &Angle| (a.lo.clone(), a.hi.clone());
    let (kx, ky, kz) = (key(x), key(y), key(z));
    if x.elem == y.elem || y.elem == z.elem || x.elem == z.elem {
        return Some(0);
    }
    let sep = |a: &(Rational, Rational), b: &(Rational, Rational)| a.1 < b.0 || b.1 < a.0;
    if !(sep(&kx, &ky) && sep(&ky, &kz) && sep(&kx, &kz)) {
        return None;
    }
    let lt = |a: &(Rational, Rational), b: &(Rational, Rational)| a.1 < b.0;
    let (a, b, c) = (lt(&kx, &ky), lt(&ky, &kz), lt(&kx, &kz));
    // positive iff (x, y, z) is a rotation of an increasing triple
    Some(if (a && b) || (b && !c) || (a && !c) { 1 } else { -1 })
}

fn criterion_6() -> Outcome {
    let (reg, s) = linear_registry();
    let mut r = rng(6);
    let mut oracle_checked = 0;
    for i in 0..1000 {
        let xs: Vec<Angle> = (0..4).map(|_| random_angle(&mut r, &reg, &s)).collect();
        let c = |a: &CircleElem, b: &CircleElem, d: &CircleElem| cocycle(&reg, a, b, d).map(|v| v as i32).map_err(e);
        let (x1, x2, x3, x4) = (&xs[0].elem, &xs[1].elem, &xs[2].elem, &xs[3].elem);
        let sum = c(x2, x3, x4)? - c(x1, x3, x4)? + c(x1, x2, x4)? - c(x1, x2, x3)?;
        ensure(sum == 0, || format!("tuple {i}: coboundary {sum}"))?;
        let v = c(x1, x2, x3)?;
        ensure(v == c(x2, x3, x1)?, || format!("tuple {i}: not cyclic"))?;
        ensure(v == -c(x2, x1, x3)?, || format!("tuple {i}: not antisymmetric"))?;
        let g = random_angle(&mut r, &reg, &s).elem;
        let moved: Vec<CircleElem> = [x1, x2, x3].iter().map(|x| circle_mul(&reg, &g, x)).collect::<Result<_, _>>().map_err(e)?;
        ensure(v == c(&moved[0], &moved[1], &moved[2])?, || format!("tuple {i}: not left-invariant"))?;
        if let Some(o) = orientation(&xs[0], &xs[1], &xs[2]) {
            ensure(v == o as i32, || format!("tuple {i}: orientation {v}, expected {o}"))?;
            oracle_checked += 1;
        }
    }
    for i in 0..50 {
        let a = random_angle(&mut r, &reg, &s);
        let base = ZelevaElement::new(a.elem.clone(), 0);
        let mut acc = ZelevaElement::identity();
        for n in 1..=50i64 {
            acc = zeleva_mul(&reg, &acc, &base).map_err(e)?;
            let nq = Rational::from_integer(n.into());
            let (lo, hi) = (&a.lo * &nq, &a.hi * &nq);
            let fl = lo.floor().to_integer();
            ensure(fl == hi.floor().to_integer(), || format!("angle {i}: oracle bounds too wide"))?;
            let expected = CircleElem::new(&reg, a.elem.theta().scale(&nq)).map_err(e)?;
            ensure(acc.g == expected && acc.n == fl, || format!("angle {i}: (g,0)^{n} = {acc:?}"))?;
        }
        ensure(zeleva_pow(&reg, &base, 50).map_err(e)? == acc, || format!("angle {i}: zeleva_pow disagrees"))?;
    }
    for i in 0..100 {
        let d = r.gen_range(2..=50);
        let x = r.gen_range(0..d - 1);
        let y = r.gen_range(x + 1..d);
        let d2 = r.gen_range(2..=50);
        let (alpha, beta) = (qq(x, d), qq(y, d).max(qq(r.gen_range(0..d2), d2)));
        if alpha >= beta {
            continue;
        }
        let got = find_separating_power(&reg, &SymbolicReal::from_rational(alpha.clone()), &SymbolicReal::from_rational(beta.clone()), 10_000)
            .map_err(e)?;
        let scan = (1..=10_000u64).find_map(|n| {
            let nq = Rational::from_integer(n.into());
            let (fa, fb) = ((&alpha * &nq).floor().to_integer(), (&beta * &nq).floor().to_integer());
            (fa < fb).then_some((n, fa))
        });
        ensure(got == scan, || format!("pair {i} ({alpha}, {beta}): {got:?} vs scan {scan:?}"))?;
    }
    Ok(format!("1000 tuples ({oracle_checked} against exact orientation), 50 angles × n ≤ 50, 100 separating scans"))
}

fn vector_exponents() -> Arc<VectorExponents> {
    let (reg, s) = linear_registry();
    let ty = TypeVector::new(vec![SymbolicReal::one(), s[0].clone()]).unwrap();
    Arc::new(VectorExponents { group: OrderedVectorGroup::new(ty, SpanMode::Q), reg })
}

fn random_series<G: ExponentGroup>(
    r: &mut ChaCha8Rng,
    g: &Arc<G>,
    exp: &mut impl FnMut(&mut ChaCha8Rng) -> G::Elem,
) -> HahnSeries<G> {
    let n = r.gen_range(0..=4);
    let terms: Vec<(G::Elem, Rational)> = (0..n).map(|_| (exp(r), small_rational(r, 5))).collect();
    HahnSeries::from_terms(g.clone(), terms)
}

fn hahn_laws<G: ExponentGroup>(
    i: usize,
    a: &HahnSeries<G>,
    b: &HahnSeries<G>,
    c: &HahnSeries<G>,
    gh: (&G::Elem, &G::Elem),
) -> Result<(), String> {
    let w = |x: Result<HahnSeries<G>, archord::hahn::HahnError>| x.map_err(e);
    let ab = w(a.mul(b))?;
    ensure(ab == w(b.mul(a))?, || format!("series {i}: not commutative"))?;
    ensure(w(ab.mul(c))? == w(a.mul(&w(b.mul(c))?))?, || format!("series {i}: not associative"))?;
    ensure(w(a.mul(&w(b.add(c))?))? == w(ab.add(&w(a.mul(c))?))?, || format!("series {i}: not distributive"))?;
    let cmp = a.compare(b).map_err(e)?;
    ensure(cmp == b.compare(a).map_err(e)?.reverse(), || format!("series {i}: order not antisymmetric"))?;
    ensure((cmp == Ordering::Equal) == (a == b), || format!("series {i}: order not strict"))?;
    ensure(cmp == w(a.add(c))?.compare(&w(b.add(c))?).map_err(e)?, || format!("series {i}: translation"))?;
    let sc = c.signum().map_err(e)?;
    if sc != Ordering::Equal {
        let mc = w(a.mul(c))?.compare(&w(b.mul(c))?).map_err(e)?;
        let expected = if sc == Ordering::Greater { cmp } else { cmp.reverse() };
        ensure(mc == expected, || format!("series {i}: multiplication by sign {sc:?}"))?;
    }
    ensure(w(a.mul(a))?.signum().map_err(e)? != Ordering::Less, || format!("series {i}: negative square"))?;
    if cmp == Ordering::Less && b.compare(c).map_err(e)? == Ordering::Less {
        ensure(a.compare(c).map_err(e)? == Ordering::Less, || format!("series {i}: not transitive"))?;
    }
    if !a.is_zero() && !b.is_zero() {
        let grp = a.group();
        let vab = ab.valuation().map_err(e)?;
        let sum = grp.add(&a.valuation().map_err(e)?, &b.valuation().map_err(e)?);
        ensure(grp.compare(&vab, &sum).map_err(e)? == Ordering::Equal, || format!("series {i}: v(ab) ≠ v(a) + v(b)"))?;
    }
    let (g, h) = gh;
    let grp = a.group();
    let mg = HahnSeries::monomial(grp.clone(), g.clone(), q(1));
    let mh = HahnSeries::monomial(grp.clone(), h.clone(), q(1));
    let gsum = HahnSeries::monomial(grp.clone(), grp.add(g, h), q(1));
    ensure(w(mg.mul(&mh))? == gsum, || format!("series {i}: monomial rule"))?;
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let vg = vector_exponents();
    let mut vexp = |r: &mut ChaCha8Rng| vec![q(r.gen_range(-3..=3)), q(r.gen_range(-3..=3))];
    let mut valuations = 0;
    for i in 0..500 {
        let (a, b, c) = (random_series(&mut r, &vg, &mut vexp), random_series(&mut r, &vg, &mut vexp), random_series(&mut r, &vg, &mut vexp));
        let (g, h) = (vexp(&mut r), vexp(&mut r));
        hahn_laws(i, &a, &b, &c, (&g, &h))?;
        // the valuation realizes to the least real exponent
        if !a.is_zero() {
            let real = |v: &Vec<Rational>| v[0].to_f64().unwrap() + v[1].to_f64().unwrap() * std::f64::consts::SQRT_2;
            let least = a.terms().keys().min_by(|x, y| real(x).partial_cmp(&real(y)).unwrap()).unwrap();
            ensure(&a.valuation().map_err(e)? == least, || format!("series {i}: valuation"))?;
            valuations += 1;
        }
    }
    let reg = Registry::new();
    let order = ColoredLinearOrder::parse("2<0<1", "0,1,0").map_err(e)?;
    let og = Arc::new(clo_to_odag(&reg, &order).map_err(e)?);
    let mut oexp = |r: &mut ChaCha8Rng| random_odag_element(r, 3);
    for i in 0..500 {
        let (a, b, c) = (random_series(&mut r, &og, &mut oexp), random_series(&mut r, &og, &mut oexp), random_series(&mut r, &og, &mut oexp));
        let (g, h) = (oexp(&mut r), oexp(&mut r));
        hahn_laws(i, &a, &b, &c, (&g, &h))?;
    }
    Ok(format!("500 vector-exponent and 500 odag-exponent triples; {valuations} valuations matched the realization"))
}

/// A random rational function in `t1..t3` with its floating-point value.
fn random_value(r: &mut ChaCha8Rng, t: &[SymbolicReal]) -> (SymbolicReal, f64) {
    let poly = |r: &mut ChaCha8Rng, terms: usize| {
        let mut acc = (SymbolicReal::zero(), 0.0f64);
        for _ in 0..terms {
            let c = r.gen_range(-5..=5);
            let mut m = (SymbolicReal::from_int(c), c as f64);
            for _ in 0..r.gen_range(0..=2) {
                let k = r.gen_range(0..t.len());
                m = (m.0.mul(&t[k]).unwrap(), m.1 * T_VALUES[k]);
            }
            acc = (acc.0.add(&m.0), acc.1 + m.1);
        }
        acc
    };
    let num = poly(r, 3);
    if r.gen_bool(0.3) {
        return num;
    }
    loop {
        let den = poly(r, 2);
        if !den.0.is_zero() {
            return (num.0.div(&den.0).unwrap(), num.1 / den.1);
        }
    }
}

fn criterion_8() -> Outcome {
    let (reg, t) = algebraic_registry(3);
    let mut r = rng(8);
    for i in 0..1000 {
        let (a, b, c) = (random_value(&mut r, &t).0, random_value(&mut r, &t).0, random_value(&mut r, &t).0);
        let m = |x: &SymbolicReal, y: &SymbolicReal| x.mul(y).map_err(e);
        ensure(a.add(&b).add(&c) == a.add(&b.add(&c)), || format!("sample {i}: + not associative"))?;
        ensure(a.add(&b) == b.add(&a), || format!("sample {i}: + not commutative"))?;
        ensure(m(&a, &b)? == m(&b, &a)?, || format!("sample {i}: × not commutative"))?;
        ensure(m(&m(&a, &b)?, &c)? == m(&a, &m(&b, &c)?)?, || format!("sample {i}: × not associative"))?;
        ensure(m(&a, &b.add(&c))? == m(&a, &b)?.add(&m(&a, &c)?), || format!("sample {i}: not distributive"))?;
        ensure(a.sub(&a).is_zero(), || format!("sample {i}: a − a ≠ 0"))?;
        if !a.is_zero() {
            ensure(m(&a, &a.recip().map_err(e)?)? == SymbolicReal::one(), || format!("sample {i}: a·a⁻¹ ≠ 1"))?;
        }
    }
    let eps = qq(1, 1 << 30);
    let mut sign_oracle = 0;
    for i in 0..1000 {
        let (x, v) = random_value(&mut r, &t);
        let s = reg.sign(&x).map_err(e)?;
        let iv = reg.approx(&x, &eps).map_err(e)?;
        ensure(iv.width() <= eps, || format!("sample {i}: approx too wide"))?;
        let tol = 1e-9 * v.abs().max(1.0);
        let (lo, hi) = iv.to_f64_pair();
        ensure(lo - tol <= v && v <= hi + tol, || format!("sample {i}: {v} outside [{lo}, {hi}]"))?;
        let coherent = match s {
            Sign::Zero => x.is_zero() && iv.contains_zero(),
            Sign::Positive => iv.hi.is_positive(),
            Sign::Negative => iv.lo.is_negative(),
        };
        ensure(coherent, || format!("sample {i}: sign {s:?} vs {iv:?}"))?;
        if v.abs() > tol {
            let expected = if v > 0.0 { Sign::Positive } else { Sign::Negative };
            ensure(s == expected, || format!("sample {i}: sign {s:?}, value {v}"))?;
            sign_oracle += 1;
        }
    }
    let mut floor_oracle = 0;
    for i in 0..1000 {
        let (x, v) = random_value(&mut r, &t);
        let fl = reg.floor(&x).map_err(e)?;
        let flr = SymbolicReal::from_rational(Rational::from_integer(fl.clone()));
        ensure(reg.sign(&x.sub(&flr)).map_err(e)? != Sign::Negative, || format!("sample {i}: floor above value"))?;
        ensure(reg.sign(&flr.add(&SymbolicReal::one()).sub(&x)).map_err(e)? == Sign::Positive, || {
            format!("sample {i}: floor + 1 not above value")
        })?;
        let tol = 1e-9 * v.abs().max(1.0);
        if (v - v.round()).abs() > tol && v.abs() < 1e15 {
            ensure(fl == BigInt::from(v.floor() as i64), || format!("sample {i}: floor {fl}, value {v}"))?;
            floor_oracle += 1;
        }
        if let Some(qx) = x.as_rational() {
            ensure(fl == qx.floor().to_integer(), || format!("sample {i}: rational floor"))?;
        }
    }
    Ok(format!("1000 ring-law samples; 1000 sign/approx ({sign_oracle} against floats); 1000 floors ({floor_oracle} against floats)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("pointed completeness", criterion_1, Duration::from_secs(10)),
        ("unit-span mechanism", criterion_2, Duration::from_secs(30)),
        ("type round trip", criterion_3, Duration::from_secs(60)),
        ("invariant calculus", criterion_4, Duration::from_secs(60)),
        ("colored orders vs groups", criterion_5, Duration::from_secs(300)),
        ("circular suite", criterion_6, Duration::from_secs(30)),
        ("Hahn suite", criterion_7, Duration::from_secs(30)),
        ("kernel soundness", criterion_8, Duration::from_secs(30)),
    ];
    // `ACCEPTANCE_ONLY=4,5` runs a subset
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (n, (name, run, budget)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(n + 1))) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; over budget {}s", budget.as_secs())),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {} [{name}]: {status} ({:.2}s) {detail}", n + 1, elapsed.as_secs_f64());
        if outcome.is_err() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
