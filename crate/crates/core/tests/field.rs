use std::collections::BTreeSet;

use drinfeld_core::field::parse_field_spec;
use drinfeld_core::{Elem, FiniteField};
use proptest::prelude::*;

fn small_fields() -> Vec<FiniteField> {
    let mut out = Vec::new();
    for (p, d) in [
        (2, 1),
        (2, 2),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 6),
        (3, 1),
        (3, 2),
        (3, 3),
        (5, 2),
        (7, 2),
    ] {
        out.push(FiniteField::new(p, d, None).unwrap());
    }
    let f4 = FiniteField::base(2, 2).unwrap();
    out.push(f4.extension(2).unwrap());
    out.push(f4.extension(3).unwrap());
    out.push(FiniteField::base(3, 2).unwrap());
    out
}

/// Product of coefficient vectors modulo the field's modulus, schoolbook.
fn mul_oracle(f: &FiniteField, x: &Elem, y: &Elem) -> Vec<u32> {
    let p = f.p();
    let n = f.degree();
    let m: Vec<u32> = f.modulus().iter().map(|&c| c as u32).collect();
    let mut acc = vec![0u32; 2 * n];
    for (i, &a) in x.coeffs().iter().enumerate() {
        for (j, &b) in y.coeffs().iter().enumerate() {
            acc[i + j] = (acc[i + j] + a as u32 * b as u32) % p;
        }
    }
    for k in (n..2 * n).rev() {
        let c = acc[k];
        if c == 0 {
            continue;
        }
        // modulus is monic
        for (i, &mi) in m.iter().enumerate() {
            acc[k - n + i] = (acc[k - n + i] + (p - c) * mi) % p;
        }
    }
    acc.truncate(n);
    acc
}

#[test]
fn enumeration_has_declared_size_and_no_repeats() {
    for f in small_fields() {
        let els = f.elements(1 << 12).unwrap();
        assert_eq!(els.len() as u128, f.cardinality().unwrap());
        let set: BTreeSet<_> = els.iter().cloned().collect();
        assert_eq!(set.len(), els.len());
    }
}

#[test]
fn multiplication_matches_schoolbook_exhaustively() {
    for f in small_fields().into_iter().filter(|f| f.cardinality().unwrap() <= 64) {
        let els = f.elements(64).unwrap();
        for x in &els {
            for y in &els {
                let got: Vec<u32> = f.mul(x, y).coeffs().iter().map(|&c| c as u32).collect();
                assert_eq!(got, mul_oracle(&f, x, y));
            }
        }
    }
}

#[test]
fn field_axioms_exhaustive_up_to_64() {
    for f in small_fields().into_iter().filter(|f| f.cardinality().unwrap() <= 64) {
        let els = f.elements(64).unwrap();
        for x in &els {
            assert_eq!(f.add(x, &f.neg(x)), f.zero());
            if !f.is_zero(x) {
                assert_eq!(f.mul(x, &f.inv(x).unwrap()), f.one());
            }
            for y in &els {
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.sub(&f.add(x, y), y), *x);
            }
        }
        assert!(f.inv(&f.zero()).is_none());
    }
}

#[test]
fn frobenius_is_automorphism_fixing_exactly_fq() {
    for f in small_fields().into_iter().filter(|f| f.cardinality().unwrap() <= 64) {
        let els = f.elements(64).unwrap();
        let q = f.q() as u128;
        let mut fixed = 0;
        let mut image = BTreeSet::new();
        for x in &els {
            let fx = f.frobenius(x, 1);
            assert_eq!(fx, f.pow(x, q));
            image.insert(fx.clone());
            if fx == *x {
                fixed += 1;
                assert!(f.to_base(x).is_some());
            }
            for y in &els {
                assert_eq!(f.frobenius(&f.mul(x, y), 1), f.mul(&fx, &f.frobenius(y, 1)));
                assert_eq!(f.frobenius(&f.add(x, y), 1), f.add(&fx, &f.frobenius(y, 1)));
            }
        }
        assert_eq!(fixed as u128, q);
        assert_eq!(image.len(), els.len());
    }
}

#[test]
fn tower_embedding_is_a_ring_map() {
    let f4 = FiniteField::base(2, 2).unwrap();
    let f16 = f4.extension(2).unwrap();
    let f256 = f16.extension(2).unwrap();
    for x in f4.elements(4).unwrap() {
        for y in f4.elements(4).unwrap() {
            let ex = f256.embed(&x, &f4).unwrap();
            let ey = f256.embed(&y, &f4).unwrap();
            assert_eq!(f256.embed(&f4.mul(&x, &y), &f4).unwrap(), f256.mul(&ex, &ey));
            assert_eq!(f256.embed(&f4.add(&x, &y), &f4).unwrap(), f256.add(&ex, &ey));
        }
    }
    for x in f16.elements(16).unwrap() {
        let via = f256.embed(&x, &f16).unwrap();
        assert_eq!(f256.frobenius(&via, 2), via, "F_16 lands in the q^2-fixed field");
    }
    assert!(f256.embed(&f16.one(), &FiniteField::new(2, 3, None).unwrap()).is_err());
}

#[test]
fn field_spec_text_round_trip() {
    let f = parse_field_spec("p=2 deg=2 mod=[1,1,1]").unwrap();
    assert_eq!(f.cardinality(), Some(4));
    assert_eq!(parse_field_spec(&format!("p={} deg={}", f.p(), f.degree())).unwrap(), f);
    assert!(parse_field_spec("p=2 deg=2 mod=[1,0,1]").is_err(), "reducible modulus");
    assert!(parse_field_spec("p=4 deg=1").is_err());
    assert!(parse_field_spec("deg=2").is_err());
}

fn field_and_elems(n: usize) -> impl Strategy<Value = (FiniteField, Vec<Elem>)> {
    (0..small_fields().len(), prop::collection::vec(any::<u64>(), n)).prop_map(|(i, raw)| {
        let f = small_fields().swap_remove(i);
        let c = f.cardinality().unwrap();
        let xs = raw.into_iter().map(|r| f.from_index(r as u128 % c)).collect();
        (f, xs)
    })
}

proptest! {
    #[test]
    fn ring_axioms_random((f, xs) in field_and_elems(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(f.mul(&f.mul(x, y), z), f.mul(x, &f.mul(y, z)));
        prop_assert_eq!(f.mul(x, &f.add(y, z)), f.add(&f.mul(x, y), &f.mul(x, z)));
        prop_assert_eq!(f.add(&f.add(x, y), z), f.add(x, &f.add(y, z)));
        let got: Vec<u32> = f.mul(x, y).coeffs().iter().map(|&c| c as u32).collect();
        prop_assert_eq!(got, mul_oracle(&f, x, y));
    }

    #[test]
    fn pow_matches_repeated_multiplication((f, xs) in field_and_elems(1), e in 0u128..40) {
        let x = &xs[0];
        let slow = (0..e).fold(f.one(), |acc, _| f.mul(&acc, x));
        prop_assert_eq!(f.pow(x, e), slow);
    }

    #[test]
    fn index_encoding_round_trips((f, xs) in field_and_elems(1)) {
        prop_assert_eq!(f.from_index(f.index_of(&xs[0])), xs[0].clone());
    }
}
