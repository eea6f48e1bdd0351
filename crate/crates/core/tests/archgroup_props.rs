mod common;

use std::cmp::Ordering;

use archord::archgroup::{encloses, extract_type, holder_cut, OrderedGroupOracle, OrderedVectorGroup, TypeVector};
use archord::symreal::{Interval, Rational, SymbolicReal};
use archord::zmodule::SpanMode;
use common::*;
use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

fn group(s: &[SymbolicReal]) -> OrderedVectorGroup {
    let mut entries = vec![SymbolicReal::one()];
    entries.extend(s.iter().cloned());
    OrderedVectorGroup::new(TypeVector::new(entries).unwrap(), SpanMode::Z)
}

fn vec3(r: &mut impl Rng) -> Vec<Rational> {
    (0..3).map(|_| q(r.gen_range(-20..=20))).collect()
}

fn eps() -> Rational {
    qq(1, 1 << 16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cuts_are_coherent(seed in any::<u64>()) {
        let (reg, s) = linear_registry();
        let g = group(&s[..2]);
        let o = g.oracle(&reg);
        let mut r = rng(seed);
        let t = vec3(&mut r);
        let u = vec![q(1), q(0), q(0)];
        let x = g.type_vector().realize(&t);
        // m/n ∈ L_t iff m·u < n·t; downward closed
        let (m, n) = (r.gen_range(-60..60), r.gen_range(1..10));
        let lower = |m: i64, n: i64| -> bool {
            let mu: Vec<Rational> = u.iter().map(|c| c * q(m)).collect();
            let nt: Vec<Rational> = t.iter().map(|c| c * q(n)).collect();
            o.compare(&mu, &nt).unwrap() == Ordering::Less
        };
        if lower(m, n) {
            let (m2, n2) = (m - r.gen_range(1..5), n);
            prop_assert!(lower(m2, n2));
            prop_assert_eq!(reg.compare(&SymbolicReal::from_rational(qq(m, n)), &x).unwrap(), Ordering::Less);
        } else {
            prop_assert!(!lower(m + r.gen_range(1..5), n));
        }
    }

    #[test]
    fn realization_is_additive_and_monotone(seed in any::<u64>()) {
        let (reg, s) = linear_registry();
        let g = group(&s[..2]);
        let o = g.oracle(&reg);
        let mut r = rng(seed);
        let u = vec![q(1), q(0), q(0)];
        let (t1, t2) = (vec3(&mut r), vec3(&mut r));
        let e = eps();
        let c1 = holder_cut(&o, &u, &t1, &e).unwrap();
        let c2 = holder_cut(&o, &u, &t2, &e).unwrap();
        let c12 = holder_cut(&o, &u, &o.add(&t1, &t2), &e).unwrap();
        let sum = c1.add(&c2);
        let gap = (c12.midpoint() - sum.midpoint()).abs();
        prop_assert!(gap <= &e * q(3));
        if o.compare(&t1, &t2).unwrap() == Ordering::Less {
            prop_assert!(c1.hi <= &c2.lo + &e * q(2));
        }
    }

    #[test]
    fn extraction_recovers_type(seed in any::<u64>()) {
        let (reg, s) = linear_registry();
        let mut r = rng(seed);
        let a = s[0].scale(&small_rational(&mut r, 5)).add(&SymbolicReal::from_rational(small_rational(&mut r, 5)));
        let entries = vec![SymbolicReal::one(), a, s[1].clone()];
        prop_assume!(TypeVector::new(entries.clone()).is_ok());
        let g = OrderedVectorGroup::new(TypeVector::new(entries.clone()).unwrap(), SpanMode::Z);
        let ivs = extract_type(&g.oracle(&reg), 3, &eps()).unwrap();
        for (iv, a) in ivs.iter().zip(&entries) {
            prop_assert!(encloses(&reg, iv, a).unwrap());
            let ap = reg.approx(a, &eps()).unwrap();
            prop_assert!(!(ap.hi < iv.lo || iv.hi < ap.lo));
        }
    }

    #[test]
    fn type_order_is_a_translation_invariant_total_order(seed in any::<u64>()) {
        let (reg, s) = linear_registry();
        let g = group(&s[..2]);
        let mut r = rng(seed);
        let (x, y, z) = (vec3(&mut r), vec3(&mut r), vec3(&mut r));
        let c = |a: &[Rational], b: &[Rational]| g.compare(&reg, a, b).unwrap();
        prop_assert_eq!(c(&x, &y), c(&y, &x).reverse());
        prop_assert_eq!(c(&x, &y) == Ordering::Equal, x == y);
        if c(&x, &y) == Ordering::Less && c(&y, &z) == Ordering::Less {
            prop_assert_eq!(c(&x, &z), Ordering::Less);
        }
        let o = g.oracle(&reg);
        prop_assert_eq!(c(&x, &y), c(&o.add(&x, &z), &o.add(&y, &z)));
    }
}

#[test]
fn negative_unit_gives_negative_first_entry() {
    let (reg, s) = linear_registry();
    let g = OrderedVectorGroup::new(
        TypeVector::new(vec![int(-1), s[0].clone()]).unwrap(),
        SpanMode::Z,
    );
    let ivs = extract_type(&g.oracle(&reg), 2, &eps()).unwrap();
    assert_eq!(ivs[0], Interval::point(q(-1)));
    assert!(encloses(&reg, &ivs[1], &s[0]).unwrap());
}
