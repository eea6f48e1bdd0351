//! WebAssembly entry points for the static demo page in `www/`.
//!
//! Every export takes plain strings and returns a JSON document: either the
//! result fields or `{"error": "..."}`. Symbols are declared per call from
//! lines `name mode binding`, e.g. `a algebraic const:pi`.

use std::cmp::Ordering;

use archord::archgroup::{extract_type, holder_cut, OrderedVectorGroup};
use archord::circular::{find_separating_power, zeleva_pow, CircleElem, ZelevaElement};
use archord::hahn::{format_vector, parse_vector};
use archord::reductions::{clo_embed_bruteforce, ColoredLinearOrder};
use archord::symreal::{parse_rational, Binding, Rational, Registry};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn registry(decls: &str) -> Result<Registry, String> {
    let reg = Registry::new();
    for line in decls.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [name, mode, binding] = parts[..] else {
            return Err(format!("expected `name mode binding`, got `{line}`"));
        };
        let mode = mode.parse().map_err(|e: archord::symreal::SymError| e.to_string())?;
        let binding = Binding::parse_spec(binding).map_err(|e| e.to_string())?;
        reg.declare(name, mode, binding).map_err(|e| e.to_string())?;
    }
    Ok(reg)
}

fn finish(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Encloses the real value of `t` in the group `Z^n` ordered by `ty`, with
/// the unit `±e1`, and the full type when `t` is empty.
#[wasm_bindgen]
pub fn holder(decls: &str, ty: &str, t: &str, eps: &str) -> String {
    finish((|| {
        let reg = registry(decls)?;
        let g = OrderedVectorGroup::parse(ty, &reg).map_err(|e| e.to_string())?;
        let eps = parse_rational(eps).map_err(|e| e.to_string())?;
        let oracle = g.oracle(&reg);
        let ivs = extract_type(&oracle, g.rank(), &eps).map_err(|e| e.to_string())?;
        let ty_out: Vec<Value> = ivs
            .iter()
            .map(|iv| json!({"lo": iv.lo.to_string(), "hi": iv.hi.to_string()}))
            .collect();
        let mut out = json!({"type": g.display(&reg), "extracted": ty_out});
        if !t.trim().is_empty() {
            let tv = parse_vector(t)?;
            g.check(&tv).map_err(|e| e.to_string())?;
            let mut u = vec![Rational::from_integer(0.into()); g.rank()];
            u[0] = Rational::from_integer(1.into());
            let zero = vec![Rational::from_integer(0.into()); g.rank()];
            if g.compare(&reg, &u, &zero).map_err(|e| e.to_string())? == Ordering::Less {
                u[0] = -u[0].clone();
            }
            let iv = holder_cut(&oracle, &u, &tv, &eps).map_err(|e| e.to_string())?;
            out["unit"] = format_vector(&u).into();
            out["t"] = format_vector(&tv).into();
            out["lo"] = iv.lo.to_string().into();
            out["hi"] = iv.hi.to_string().into();
            out["approx"] = ((archord::symreal::rational_to_f64(&iv.lo) + archord::symreal::rational_to_f64(&iv.hi))
                / 2.0)
                .into();
        }
        Ok(out)
    })())
}

/// Least `n ≤ cap` with `⌊nα⌋ < ⌊nβ⌋`, plus the two powers of `(α, 0)` and
/// `(β, 0)` in the ordered extension of the circle that it separates.
#[wasm_bindgen]
pub fn separating_power(decls: &str, alpha: &str, beta: &str, cap: u32) -> String {
    finish((|| {
        let reg = registry(decls)?;
        let a = reg.parse(alpha).map_err(|e| e.to_string())?;
        let b = reg.parse(beta).map_err(|e| e.to_string())?;
        let found = find_separating_power(&reg, &a, &b, cap as u64).map_err(|e| e.to_string())?;
        let Some((n, k)) = found else {
            return Ok(json!({"found": false, "cap": cap}));
        };
        let pow = |x| -> Result<String, String> {
            let g = CircleElem::new(&reg, x).map_err(|e| e.to_string())?;
            let p = zeleva_pow(&reg, &ZelevaElement::new(g, 0), n as i64).map_err(|e| e.to_string())?;
            Ok(format!("({}, {})", reg.format(p.g.theta()), p.n))
        };
        Ok(json!({
            "found": true,
            "n": n,
            "k": k.to_string(),
            "alpha_power": pow(a.clone())?,
            "beta_power": pow(b.clone())?,
        }))
    })())
}

/// Lexicographically least order- and color-preserving injection `K → L`.
#[wasm_bindgen]
pub fn clo_embed(k_order: &str, k_colors: &str, l_order: &str, l_colors: &str) -> String {
    finish((|| {
        let k = ColoredLinearOrder::parse(k_order, k_colors).map_err(|e| e.to_string())?;
        let l = ColoredLinearOrder::parse(l_order, l_colors).map_err(|e| e.to_string())?;
        Ok(match clo_embed_bruteforce(&k, &l) {
            Some(j) => json!({"embeds": true, "injection": j}),
            None => json!({"embeds": false}),
        })
    })())
}
