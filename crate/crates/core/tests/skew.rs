use std::collections::BTreeSet;

use drinfeld_core::skew::{fq_span, parse_skew, parse_skew_dual};
use drinfeld_core::{DualRing, Elem, FiniteField, SkewPolynomial, Standardize};
use proptest::prelude::*;

fn f4() -> FiniteField {
    FiniteField::base(2, 2).unwrap()
}

fn skew_over(f: &FiniteField, raw: &[u64]) -> SkewPolynomial<FiniteField> {
    let c = f.cardinality().unwrap();
    SkewPolynomial::new(f, raw.iter().map(|r| f.from_index(*r as u128 % c)).collect())
}

/// sum c_i x^(q^i) with plain powers.
fn eval_oracle(f: &FiniteField, g: &SkewPolynomial<FiniteField>, x: &Elem) -> Elem {
    let q = f.q() as u128;
    g.coeffs().iter().enumerate().fold(f.zero(), |acc, (i, c)| {
        f.add(&acc, &f.mul(c, &f.pow(x, q.pow(i as u32))))
    })
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn right_division_recomposes(a in coeffs(7), b in coeffs(4)) {
        let f = f4();
        let (a, b) = (skew_over(&f, &a), skew_over(&f, &b));
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.right_divide(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn left_division_recomposes(a in coeffs(7), b in coeffs(4)) {
        let f = f4();
        let (a, b) = (skew_over(&f, &a), skew_over(&f, &b));
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.left_divide(&b).unwrap();
        prop_assert_eq!(&(&b * &quo) + &rem, a);
        prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn evaluation_is_additive_and_composes(a in coeffs(4), b in coeffs(4), x in any::<u64>(), y in any::<u64>()) {
        let f = FiniteField::base(2, 2).unwrap().extension(3).unwrap();
        let (a, b) = (skew_over(&f, &a), skew_over(&f, &b));
        let c = f.cardinality().unwrap();
        let (x, y) = (f.from_index(x as u128 % c), f.from_index(y as u128 % c));
        prop_assert_eq!(a.eval(&f.add(&x, &y)), f.add(&a.eval(&x), &a.eval(&y)));
        prop_assert_eq!(a.eval(&x), eval_oracle(&f, &a, &x));
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&b.eval(&x)));
    }

    #[test]
    fn rank_and_height_of_sums(a in coeffs(5), b in coeffs(5)) {
        let f = f4();
        let (a, b) = (skew_over(&f, &a), skew_over(&f, &b));
        let s = &a + &b;
        prop_assume!(!a.is_zero() && !b.is_zero() && !s.is_zero());
        prop_assert!(s.rank().unwrap() <= a.rank().unwrap().max(b.rank().unwrap()));
        prop_assert!(s.height().unwrap() >= a.height().unwrap().min(b.height().unwrap()));
    }

    #[test]
    fn standardize_is_identity_over_a_field(a in coeffs(5)) {
        let f = f4();
        let a = skew_over(&f, &a);
        prop_assume!(!a.is_zero());
        let (sigma, std) = a.standardize().unwrap();
        prop_assert_eq!(sigma, SkewPolynomial::one(&f));
        prop_assert_eq!(std, a);
    }

    #[test]
    fn dual_standardize_conjugates(raw in prop::collection::vec((any::<u8>(), any::<u8>()), 1..=5), n in 1usize..=3) {
        let f = f4();
        let r = DualRing::new(f.clone());
        let mut cs: Vec<_> = raw.iter().map(|&(a, b)| r.make(f.from_index(a as u128 % 4), f.from_index(b as u128 % 4))).collect();
        // rank index n: unit at n, nilpotent above
        cs.resize(n.max(cs.len() - 1) + 1, r.make(f.zero(), f.zero()));
        cs[n] = r.make(f.one(), cs[n].b.clone());
        for c in cs.iter_mut().skip(n + 1) {
            c.a = f.zero();
        }
        let xi = SkewPolynomial::new(&r, cs);
        let (sigma, std) = xi.standardize().unwrap();
        let inv = sigma.unipotent_inverse().unwrap();
        prop_assert_eq!(&(&inv * &xi) * &sigma, std.clone());
        prop_assert_eq!(std.degree(), Some(n));
        prop_assert_eq!(std.reduce(), xi.reduce());
    }
}

#[test]
fn kernel_basis_matches_root_scan() {
    let f4 = f4();
    let targets = [f4.extension(2).unwrap(), f4.extension(4).unwrap()];
    let mut seen = 0;
    for raw in [
        vec![1u64, 1],
        vec![0, 1, 1],
        vec![2, 3, 1],
        vec![1, 0, 1],
        vec![3, 2, 0, 1],
        vec![0, 0, 1],
        vec![2, 1, 1, 1],
    ] {
        let g = skew_over(&f4, &raw);
        for l in &targets {
            let gl = g.base_change(l).unwrap();
            let scan: BTreeSet<Elem> = l
                .elements(256)
                .unwrap()
                .into_iter()
                .filter(|x| l.is_zero(&eval_oracle(l, &gl, x)))
                .collect();
            let basis = g.kernel_basis(l).unwrap();
            let span: BTreeSet<Elem> = fq_span(l, &basis).into_iter().collect();
            assert_eq!(
                span,
                scan,
                "kernel of {raw:?} over {} elements",
                l.cardinality().unwrap()
            );
            assert_eq!(scan.len() as u64, 4u64.pow(basis.len() as u32));
            seen += 1;
        }
    }
    assert_eq!(seen, 14);
}

#[test]
fn text_forms() {
    let f = f4();
    let g = parse_skew("[[0,1], 1, [1,1]]", &f).unwrap();
    assert_eq!(g.degree(), Some(2));
    assert_eq!(g.coeff(0), f.generator());
    assert!(parse_skew("[0,1", &f).is_err());
    assert!(parse_skew("[2]", &f).is_err());
    let r = DualRing::new(f.clone());
    let d = parse_skew_dual("[(1|0), ([0,1]|1)]", &r).unwrap();
    assert_eq!(d.coeff(1), r.make(f.generator(), f.one()));
    assert!(d.rank_index() == Some(1));
    // eps tau alone is not finite
    let e = parse_skew_dual("[(0|1), (0|1)]", &r).unwrap();
    assert_eq!(e.rank_index(), None);
    assert!(e.rank().is_none());
    assert!(e.standardize().is_err());
}
