use std::collections::{BTreeMap, BTreeSet};

use drinfeld_core::level::{enumerate_gamma0, enumerate_gamma1, enumerate_gamma_full, gamma1_to_gamma0, gl2_act};
use drinfeld_core::{BaseElement, BaseIdeal, BaseRing, DrinfeldModule, Elem, FiniteField};

fn grid(a: &BaseRing, k: &FiniteField) -> Vec<DrinfeldModule> {
    let el = k.elements(64).unwrap();
    let mut out = Vec::new();
    for g in &el {
        for a1 in &el {
            for a2 in el.iter().filter(|x| !k.is_zero(x)) {
                out.push(DrinfeldModule::new(a, k, g.clone(), vec![a1.clone(), a2.clone()]).unwrap());
            }
        }
    }
    out
}

fn primes(a: &BaseRing, max_deg: usize) -> Vec<BaseIdeal> {
    (1..=max_deg)
        .flat_map(|d| a.monic_of_degree(d))
        .filter(|g| a.is_irreducible(g))
        .map(|g| a.ideal(&g).unwrap())
        .collect()
}

#[test]
fn gamma0_counts_at_primes() {
    for p in [2, 3] {
        let a = BaseRing::over(p, 1).unwrap();
        let k = a.fq().clone();
        let q = a.q() as usize;
        for e in grid(&a, &k) {
            let ch = e.characteristic();
            let ss = e.is_supersingular().unwrap();
            for n in primes(&a, 2) {
                if p == 3 && n.degree() == 2 && n != a.ideal(&a.parse("T^2+1").unwrap()).unwrap() {
                    continue;
                }
                let l = e.splitting_field(&n, 256).unwrap();
                let count = enumerate_gamma0(&e, &n, &l).unwrap().len();
                let expected = match (n == ch, ss) {
                    (false, _) => q.pow(n.degree() as u32) + 1,
                    (true, false) => 2,
                    (true, true) => 1,
                };
                assert_eq!(count, expected, "q={q} n={n} {:?}", e.coeffs());
            }
        }
    }
}

#[test]
fn gamma1_fibres_over_gamma0_at_good_primes() {
    let a = BaseRing::over(2, 1).unwrap();
    let k = a.fq().clone();
    for e in grid(&a, &k) {
        for n in primes(&a, 2).into_iter().filter(|n| *n != e.characteristic()) {
            let l = e.splitting_field(&n, 256).unwrap();
            let mut fibres: BTreeMap<Vec<Elem>, usize> = BTreeMap::new();
            for s in enumerate_gamma1(&e, &n, &l).unwrap() {
                let g = gamma1_to_gamma0(&e, &s).unwrap();
                *fibres.entry(g.points).or_default() += 1;
            }
            let g0: BTreeSet<Vec<Elem>> = enumerate_gamma0(&e, &n, &l)
                .unwrap()
                .into_iter()
                .map(|g| g.points)
                .collect();
            assert_eq!(fibres.keys().cloned().collect::<BTreeSet<_>>(), g0);
            let units = 2usize.pow(n.degree() as u32) - 1;
            assert!(fibres.values().all(|&c| c == units));
        }
    }
}

#[test]
fn gamma0_of_a_product_is_the_product_of_parts() {
    let a = BaseRing::over(2, 1).unwrap();
    let k = a.fq().clone();
    let parts = ["T", "T+1", "T^2+T+1"];
    let n = a.ideal(&a.parse("T^4+T").unwrap()).unwrap(); // T (T+1) (T^2+T+1)
    for e in grid(&a, &k) {
        let l = e.splitting_field(&n, 256).unwrap();
        let whole = enumerate_gamma0(&e, &n, &l).unwrap();
        // per part: the p-torsion points and the (points, local exponent) of each structure
        let per: Vec<(BTreeSet<Elem>, Vec<(Vec<Elem>, usize)>)> = parts
            .iter()
            .map(|s| {
                let p = a.ideal(&a.parse(s).unwrap()).unwrap();
                let torsion = e.torsion_structure(&p, &l).unwrap().points().into_iter().collect();
                let gs = enumerate_gamma0(&e, &p, &l)
                    .unwrap()
                    .into_iter()
                    .map(|g| (g.points, g.local_exponent))
                    .collect();
                (torsion, gs)
            })
            .collect();
        assert_eq!(whole.len(), per.iter().map(|(_, gs)| gs.len()).product::<usize>());
        // each structure restricts to exactly one structure per part
        let mut seen = BTreeSet::new();
        for g in &whole {
            let mut key = Vec::new();
            let mut local = 0;
            for (torsion, gs) in &per {
                let restricted: Vec<Elem> = g.points.iter().filter(|x| torsion.contains(*x)).cloned().collect();
                let idx = gs
                    .iter()
                    .position(|(pts, _)| *pts == restricted)
                    .expect("restriction is a structure");
                local += gs[idx].1;
                key.push(idx);
            }
            assert_eq!(local, g.local_exponent);
            assert!(seen.insert(key), "two structures with the same restrictions");
        }
    }
}

fn gl2_f2() -> Vec<[[BaseElement; 2]; 2]> {
    let a = BaseRing::over(2, 1).unwrap();
    let c = [a.zero(), a.one()];
    let mut out = Vec::new();
    for bits in 0..16u32 {
        let m = [
            [c[(bits & 1) as usize].clone(), c[(bits >> 1 & 1) as usize].clone()],
            [c[(bits >> 2 & 1) as usize].clone(), c[(bits >> 3 & 1) as usize].clone()],
        ];
        let det = ((bits & 1) * (bits >> 3 & 1)) ^ ((bits >> 1 & 1) * (bits >> 2 & 1));
        if det == 1 {
            out.push(m);
        }
    }
    out
}

#[test]
fn full_level_structures_form_a_gl2_torsor() {
    let a = BaseRing::over(2, 1).unwrap();
    let k = a.fq().clone();
    let n = a.ideal(&a.parse("T+1").unwrap()).unwrap();
    let group = gl2_f2();
    assert_eq!(group.len(), 6);
    for e in grid(&a, &k).into_iter().filter(|e| e.characteristic() != n) {
        let l = e.splitting_field(&n, 256).unwrap();
        let all = enumerate_gamma_full(&e, &n, &l).unwrap();
        assert_eq!(all.len(), 6);
        let orbit: BTreeSet<[Elem; 2]> = group.iter().map(|m| gl2_act(&e, m, &all[0]).unwrap().images).collect();
        assert_eq!(orbit, all.iter().map(|s| s.images.clone()).collect());
    }
}

#[test]
fn json_form_of_a_structure() {
    let a = BaseRing::over(2, 1).unwrap();
    let k = a.fq().clone();
    let e = DrinfeldModule::new(&a, &k, k.zero(), vec![k.one(), k.one()]).unwrap();
    let n = a.ideal(&a.t()).unwrap();
    let l = e.splitting_field(&n, 256).unwrap();
    let gs = enumerate_gamma0(&e, &n, &l).unwrap();
    let local = gs.iter().find(|g| g.is_local()).unwrap().to_json(&a);
    assert_eq!((local.n.as_str(), local.etale_size, local.local_mult), ("T", 1, 1));
    let etale = gs.iter().find(|g| !g.is_local()).unwrap().to_json(&a);
    assert_eq!((etale.etale_size, etale.local_mult), (2, 0));
}
