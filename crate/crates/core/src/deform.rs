//! Lifts of modules and level structures from k to the dual numbers k[eps],
//! counted by exhaustive search over small k.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::base::{BaseElement, BaseIdeal};
use crate::drinfeld::DrinfeldModule;
use crate::dual::{DualElem, DualRing};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::level::{enumerate_gamma0, enumerate_gamma1, enumerate_gamma_full, Gamma0Structure};
use crate::ring::CoeffRing;
use crate::skew::SkewPolynomial;
use crate::upoly;

/// Largest |k| scanned exhaustively.
pub const MAX_SCAN_FIELD: u64 = 16;

/// `gamma(T) + eps c` and coefficients `a_i + eps b_i` over a module E/k.
#[derive(Clone, Debug, PartialEq)]
pub struct DualLift {
    pub base: DrinfeldModule,
    pub c: Elem,
    pub b: Vec<Elem>,
}

impl DualLift {
    pub fn new(base: &DrinfeldModule, c: Elem, b: Vec<Elem>) -> Result<Self> {
        if b.len() != base.rank() {
            return Err(Error::WrongRank {
                expected: base.rank(),
                got: b.len(),
            });
        }
        Ok(DualLift {
            base: base.clone(),
            c,
            b,
        })
    }

    pub fn trivial(base: &DrinfeldModule) -> Self {
        let f = base.field();
        DualLift {
            base: base.clone(),
            c: f.zero(),
            b: vec![f.zero(); base.rank()],
        }
    }

    pub fn ring(&self) -> DualRing {
        DualRing::new(self.base.field().clone())
    }

    pub fn is_trivial(&self) -> bool {
        let f = self.base.field();
        f.is_zero(&self.c) && self.b.iter().all(|x| f.is_zero(x))
    }

    /// The lifted module over k[eps].
    pub fn module(&self) -> DrinfeldModule<DualRing> {
        let r = self.ring();
        let coeffs = self
            .base
            .coeffs()
            .iter()
            .zip(&self.b)
            .map(|(a, b)| r.make(a.clone(), b.clone()))
            .collect();
        DrinfeldModule::new(
            self.base.base(),
            &r,
            r.make(self.base.gamma_t().clone(), self.c.clone()),
            coeffs,
        )
        .expect("lift of a module has a unit top coefficient")
    }

    /// Setting eps = 0.
    pub fn reduce(&self) -> DrinfeldModule {
        let m = self.module();
        let r = self.ring();
        DrinfeldModule::new(
            self.base.base(),
            self.base.field(),
            r.reduce(m.gamma_t()),
            m.coeffs().iter().map(|x| r.reduce(x)).collect(),
        )
        .expect("reduction of a lift is a module")
    }

    /// The lift conjugated by the scalar `1 + eps s`.
    pub fn conjugate_scalar(&self, s: &Elem) -> Self {
        let r = self.ring();
        let sigma = SkewPolynomial::constant(&r, r.make(r.field().one(), s.clone()));
        let phi = self.module().phi_t().conjugate(&sigma).expect("1 + eps s is unipotent");
        // sigma^-1 phi sigma; the inverse direction gives the same orbits
        DualLift {
            base: self.base.clone(),
            c: phi.coeff(0).b,
            b: (1..=self.base.rank()).map(|i| phi.coeff(i).b).collect(),
        }
    }

    /// Orbit representative under all `1 + eps s`.
    pub fn class_key(&self) -> Result<Vec<Elem>> {
        let f = self.base.field();
        let mut best: Option<Vec<Elem>> = None;
        for s in f.elements(MAX_SCAN_FIELD)? {
            let conj = self.conjugate_scalar(&s);
            let mut key = vec![conj.c.clone()];
            key.extend(conj.b);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        Ok(best.expect("k is nonempty"))
    }

    /// Dense additive polynomial of `phi_a` over k[eps].
    pub fn additive(&self, a: &BaseElement) -> Vec<DualElem> {
        self.module().phi(a).to_additive()
    }
}

/// Every lift with the given `c`, one per `b` in k^r.
pub fn enumerate_lifts(e: &DrinfeldModule, c: &Elem) -> Result<Vec<DualLift>> {
    let f = e.field();
    let elems = f.elements(MAX_SCAN_FIELD)?;
    let mut out = vec![Vec::new()];
    for _ in 0..e.rank() {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Elem>| {
                elems.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|b| DualLift::new(e, c.clone(), b)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleLiftRow {
    pub c: Vec<u8>,
    pub lifts: usize,
    pub classes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleLiftReport {
    pub operation: &'static str,
    pub field_size: u128,
    pub rows: Vec<ModuleLiftRow>,
    /// |k|: a one-dimensional space of classes.
    pub expected_classes: u128,
    pub pass: bool,
}

/// Lift classes of a rank-2 module for each fixed lift of gamma, grouped
/// under conjugation by units reducing to 1.
pub fn enumerate_module_lifts(e: &DrinfeldModule, c: &Elem) -> Result<ModuleLiftRow> {
    if e.rank() != 2 {
        return Err(Error::WrongRank {
            expected: 2,
            got: e.rank(),
        });
    }
    let lifts = enumerate_lifts(e, c)?;
    let mut classes = BTreeSet::new();
    for l in &lifts {
        classes.insert(l.class_key()?);
    }
    Ok(ModuleLiftRow {
        c: c.coeffs().to_vec(),
        lifts: lifts.len(),
        classes: classes.len(),
    })
}

pub fn module_lift_report(e: &DrinfeldModule) -> Result<ModuleLiftReport> {
    let f = e.field();
    let size = f.cardinality().unwrap_or(0);
    let rows = f
        .elements(MAX_SCAN_FIELD)?
        .iter()
        .map(|c| enumerate_module_lifts(e, c))
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.iter().all(|r| r.classes as u128 == size);
    Ok(ModuleLiftReport {
        operation: "deform::enumerate_module_lifts",
        field_size: size,
        rows,
        expected_classes: size,
        pass,
    })
}

/// The unique lift `u + eps v` of an n-torsion point for n prime to the
/// characteristic: `v = -(eps part of f(u)) / gamma(n)`.
pub fn lift_point_good(lift: &DualLift, n: &BaseIdeal, u: &Elem) -> Result<DualElem> {
    let e = &lift.base;
    let f = e.field();
    let ch = e.characteristic();
    let a = e.base();
    if a.gcd(ch.generator(), n.generator()) != a.one() {
        return Err(Error::NotCoprime {
            level: a.display(n.generator()),
            other: a.display(ch.generator()),
        });
    }
    let r = lift.ring();
    let fbar = lift.additive(n.generator());
    let lin = fbar[1].a.clone();
    let value = upoly::eval(&r, &fbar, &r.lift(u));
    if !f.is_zero(&value.a) {
        return Err(Error::Invariant(format!("{u} is not an n-torsion point")));
    }
    let v = f.neg(
        &f.div(&value.b, &lin)
            .ok_or(Error::Invariant("zero linear term".into()))?,
    );
    Ok(r.make(u.clone(), v))
}

/// Lifts of a Gamma(n)-structure given by two images.
pub fn lift_gamma_full_good(lift: &DualLift, n: &BaseIdeal, images: &[Elem; 2]) -> Result<[DualElem; 2]> {
    Ok([
        lift_point_good(lift, n, &images[0])?,
        lift_point_good(lift, n, &images[1])?,
    ])
}

/// Lift of a Gamma0(n)-structure: its points lifted one by one.
pub fn lift_gamma0_good(lift: &DualLift, g: &Gamma0Structure) -> Result<Vec<DualElem>> {
    if g.field != *lift.base.field() {
        return Err(Error::RingMismatch);
    }
    g.points.iter().map(|u| lift_point_good(lift, &g.n, u)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    GammaFull,
    Gamma1,
    Gamma0,
}

impl LevelKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gamma" | "gamma-full" | "gamma_full" | "full" => Some(LevelKind::GammaFull),
            "gamma1" => Some(LevelKind::Gamma1),
            "gamma0" => Some(LevelKind::Gamma0),
            _ => None,
        }
    }
}

/// One lift (c, b) of (gamma, E) against one level structure.
#[derive(Clone, Debug, Serialize)]
pub struct CharLiftRow {
    pub c: Vec<u8>,
    pub b: Vec<Vec<u8>>,
    pub class_key: Vec<Vec<u8>>,
    pub trivial_class: bool,
    pub structure: usize,
    pub case: String,
    pub lifts: usize,
    /// Gamma1 only: lifts whose full divisor divides the torsion divisor.
    pub strict_lifts: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseCheck {
    pub case: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharLiftReport {
    pub operation: &'static str,
    pub kind: LevelKind,
    pub q: u64,
    pub field_size: u128,
    pub supersingular: bool,
    pub structures: usize,
    pub rows: Vec<CharLiftRow>,
    pub cases: Vec<CaseCheck>,
    pub pass: bool,
}

fn dual_of(r: &DualRing, x: &Elem, y: &Elem) -> DualElem {
    r.make(x.clone(), y.clone())
}

/// Monic additive polynomial of `phi_p` over k[eps].
fn monic_torsion(lift: &DualLift, p: &BaseIdeal) -> Vec<DualElem> {
    let r = lift.ring();
    upoly::monic(&r, &lift.additive(p.generator())).expect("phi_p has unit leading coefficient")
}

fn vectors(f: &FiniteField, len: usize) -> Result<Vec<Vec<Elem>>> {
    let elems = f.elements(MAX_SCAN_FIELD)?;
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Elem>| {
                elems.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    Ok(out)
}

/// Count of (v1, v2) with `prod_x (X - alpha_bar(x)) = f_bar`.
fn gamma_full_lifts(lift: &DualLift, fbar: &[DualElem], images: &[Elem; 2]) -> Result<usize> {
    let f = lift.base.field();
    let r = lift.ring();
    let fq: Vec<Elem> = f
        .base_field()
        .elements(MAX_SCAN_FIELD)?
        .iter()
        .map(|c| f.from_base(c))
        .collect();
    let mut count = 0;
    for v in vectors(f, 2)? {
        let u1 = dual_of(&r, &images[0], &v[0]);
        let u2 = dual_of(&r, &images[1], &v[1]);
        let mut roots = Vec::new();
        for l1 in &fq {
            for l2 in &fq {
                let x = r.add(&r.mul(&r.lift(l1), &u1), &r.mul(&r.lift(l2), &u2));
                roots.push(x);
            }
        }
        if upoly::from_roots(&r, &roots) == fbar {
            count += 1;
        }
    }
    Ok(count)
}

/// Gamma1: `(all v with f_bar(u + eps v) = 0, those whose divisor divides)`.
fn gamma1_lifts(lift: &DualLift, fbar: &[DualElem], u: &Elem) -> Result<(usize, usize)> {
    let f = lift.base.field();
    let r = lift.ring();
    let fq: Vec<Elem> = f
        .base_field()
        .elements(MAX_SCAN_FIELD)?
        .iter()
        .map(|c| f.from_base(c))
        .collect();
    let (mut weak, mut strict) = (0, 0);
    for v in f.elements(MAX_SCAN_FIELD)? {
        let ubar = dual_of(&r, u, &v);
        if upoly::eval(&r, fbar, &ubar) != r.zero() {
            continue;
        }
        weak += 1;
        let roots: Vec<DualElem> = fq.iter().map(|l| r.mul(&r.lift(l), &ubar)).collect();
        let div = upoly::from_roots(&r, &roots);
        if upoly::rem(&r, fbar, &div).is_some_and(|rem| rem.is_empty()) {
            strict += 1;
        }
    }
    Ok((weak, strict))
}

/// Gamma0: monic additive lifts `h + eps sum d_i X^(q^i)` (i below deg_q h)
/// dividing f_bar.
fn gamma0_lifts(lift: &DualLift, fbar: &[DualElem], h: &[Elem]) -> Result<usize> {
    let f = lift.base.field();
    let r = lift.ring();
    let q = f.q() as usize;
    let deg = h.len() - 1;
    let mut exps = Vec::new();
    let mut pw = 1;
    while pw < deg {
        exps.push(pw);
        pw *= q;
    }
    let mut count = 0;
    for d in vectors(f, exps.len())? {
        let mut hbar: Vec<DualElem> = h.iter().map(|c| r.lift(c)).collect();
        for (i, di) in exps.iter().zip(&d) {
            hbar[*i] = dual_of(&r, &hbar[*i].a, di);
        }
        if upoly::rem(&r, fbar, &hbar).is_some_and(|rem| rem.is_empty()) {
            count += 1;
        }
    }
    Ok(count)
}

fn key_bytes(key: &[Elem]) -> Vec<Vec<u8>> {
    key.iter().map(|x| x.coeffs().to_vec()).collect()
}

/// Exhaustive lift table at the characteristic p (degree 1, level p) for
/// every lift (c, b) of (gamma, E) and every structure of the given kind
/// rational over k, checked against the expected case analysis.
pub fn check_char_lifts(kind: LevelKind, e: &DrinfeldModule) -> Result<CharLiftReport> {
    if e.rank() != 2 {
        return Err(Error::WrongRank {
            expected: 2,
            got: e.rank(),
        });
    }
    let p = e.characteristic();
    if p.degree() != 1 {
        return Err(Error::Unsupported(
            "the lift tables treat characteristics of degree 1".into(),
        ));
    }
    let f = e.field();
    let size = f.cardinality().unwrap_or(0);
    if size > MAX_SCAN_FIELD as u128 {
        return Err(Error::Unsupported(format!(
            "exhaustive lift scans need |k| <= {MAX_SCAN_FIELD}"
        )));
    }
    let ss = e.is_supersingular()?;
    let zero = f.zero();
    let mut rows = Vec::new();

    for c in f.elements(MAX_SCAN_FIELD)? {
        for lift in enumerate_lifts(e, &c)? {
            let key = lift.class_key()?;
            let trivial = key.iter().all(|x| f.is_zero(x));
            let fbar = monic_torsion(&lift, &p);
            let mut push = |idx: usize, case: &str, lifts: usize, strict: Option<usize>| {
                rows.push(CharLiftRow {
                    c: lift.c.coeffs().to_vec(),
                    b: key_bytes(&lift.b),
                    class_key: key_bytes(&key),
                    trivial_class: trivial,
                    structure: idx,
                    case: case.to_string(),
                    lifts,
                    strict_lifts: strict,
                })
            };
            match kind {
                LevelKind::GammaFull => {
                    let all = enumerate_gamma_full(e, &p, f)?;
                    for (i, s) in all.iter().enumerate() {
                        push(i, "full", gamma_full_lifts(&lift, &fbar, &s.images)?, None);
                    }
                }
                LevelKind::Gamma1 => {
                    let all = enumerate_gamma1(e, &p, f)?;
                    for (i, s) in all.iter().enumerate() {
                        let case = if s.generator == zero { "local" } else { "etale" };
                        let (w, st) = gamma1_lifts(&lift, &fbar, &s.generator)?;
                        push(i, case, w, Some(st));
                    }
                }
                LevelKind::Gamma0 => {
                    let all = enumerate_gamma0(e, &p, f)?;
                    for (i, s) in all.iter().enumerate() {
                        let case = match (ss, s.is_local()) {
                            (true, _) => "supersingular",
                            (false, true) => "local",
                            (false, false) => "reduced",
                        };
                        let h = crate::isogeny::kernel_polynomial(&s.kernel())?.to_additive();
                        push(i, case, gamma0_lifts(&lift, &fbar, &h)?, None);
                    }
                }
            }
        }
    }
    let structures = rows.iter().map(|r| r.structure + 1).max().unwrap_or(0);
    let cases = summarize(kind, size, &rows);
    let pass = !cases.is_empty() && cases.iter().all(|c| c.pass);
    Ok(CharLiftReport {
        operation: "deform::check_char_lifts",
        kind,
        q: e.base().q(),
        field_size: size,
        supersingular: ss,
        structures,
        rows,
        cases,
        pass,
    })
}

fn summarize(kind: LevelKind, size: u128, rows: &[CharLiftRow]) -> Vec<CaseCheck> {
    let k = size as usize;
    let mut out = Vec::new();
    let mut by_case: BTreeMap<&str, Vec<&CharLiftRow>> = BTreeMap::new();
    for r in rows {
        by_case.entry(r.case.as_str()).or_default().push(r);
    }
    for (case, rs) in by_case {
        match (kind, case) {
            (LevelKind::GammaFull, _) => {
                let trivial: BTreeSet<usize> = rs.iter().filter(|r| r.trivial_class).map(|r| r.lifts).collect();
                let other: BTreeSet<usize> = rs.iter().filter(|r| !r.trivial_class).map(|r| r.lifts).collect();
                out.push(CaseCheck {
                    case: "full: trivial class".into(),
                    expected: format!("{}", k * k),
                    observed: format!("{trivial:?}"),
                    pass: trivial == BTreeSet::from([k * k]),
                });
                out.push(CaseCheck {
                    case: "full: nontrivial classes".into(),
                    expected: "0".into(),
                    observed: format!("{other:?}"),
                    pass: other.iter().all(|&n| n == 0),
                });
            }
            (_, "etale") | (_, "reduced") => {
                // per (structure, c): exactly one class admits lifts, with |k| each
                let mut per: BTreeMap<(usize, Vec<u8>), BTreeSet<Vec<Vec<u8>>>> = BTreeMap::new();
                let mut counts = BTreeSet::new();
                for r in &rs {
                    let slot = per.entry((r.structure, r.c.clone())).or_default();
                    if r.lifts > 0 {
                        slot.insert(r.class_key.clone());
                        counts.insert(r.lifts);
                    }
                }
                let classes: BTreeSet<usize> = per.values().map(|s| s.len()).collect();
                out.push(CaseCheck {
                    case: format!("{case}: classes admitting lifts per gamma lift"),
                    expected: "1".into(),
                    observed: format!("{classes:?}"),
                    pass: classes == BTreeSet::from([1]),
                });
                out.push(CaseCheck {
                    case: format!("{case}: lifts on an admitting class"),
                    expected: format!("{k}"),
                    observed: format!("{counts:?}"),
                    pass: counts == BTreeSet::from([k]),
                });
            }
            (LevelKind::Gamma1, "local") => {
                let counts: BTreeSet<usize> = rs.iter().map(|r| r.lifts).collect();
                out.push(CaseCheck {
                    case: "local: lifts for every lift of the module".into(),
                    expected: format!("{k}"),
                    observed: format!("{counts:?}"),
                    pass: counts == BTreeSet::from([k]),
                });
            }
            (LevelKind::Gamma0, "local") => {
                let counts: BTreeSet<usize> = rs.iter().map(|r| r.lifts).collect();
                out.push(CaseCheck {
                    case: "local: lifts for every lift of the module".into(),
                    expected: "1".into(),
                    observed: format!("{counts:?}"),
                    pass: counts == BTreeSet::from([1]),
                });
            }
            (_, "supersingular") => {
                let zero_c = |r: &&&CharLiftRow| r.c.iter().all(|&x| x == 0);
                let trivial_gamma: BTreeSet<usize> = rs.iter().filter(zero_c).map(|r| r.lifts).collect();
                let other: BTreeSet<usize> = rs
                    .iter()
                    .filter(|r| !r.c.iter().all(|&x| x == 0))
                    .map(|r| r.lifts)
                    .collect();
                out.push(CaseCheck {
                    case: "supersingular: trivial gamma lift".into(),
                    expected: format!("{k}"),
                    observed: format!("{trivial_gamma:?}"),
                    pass: trivial_gamma == BTreeSet::from([k]),
                });
                out.push(CaseCheck {
                    case: "supersingular: nontrivial gamma lift".into(),
                    expected: "0".into(),
                    observed: format!("{other:?}"),
                    pass: other.iter().all(|&n| n == 0),
                });
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseRing;

    #[test]
    fn module_lifts_over_f2() {
        let a = BaseRing::over(2, 1).unwrap();
        let f = a.fq().clone();
        let e = DrinfeldModule::new(&a, &f, f.zero(), vec![f.one(), f.one()]).unwrap();
        let row = enumerate_module_lifts(&e, &f.zero()).unwrap();
        assert_eq!((row.lifts, row.classes), (4, 2));
        let t = DualLift::trivial(&e);
        assert!(t.is_trivial());
        assert_eq!(t.reduce(), e);
    }

    #[test]
    fn good_point_lift_kills_torsion() {
        let a = BaseRing::over(2, 1).unwrap();
        let f2 = a.fq().clone();
        let n = a.ideal(&a.parse("T+1").unwrap()).unwrap();
        let e = DrinfeldModule::new(&a, &f2, f2.zero(), vec![f2.one(), f2.one()]).unwrap();
        let f4 = e.splitting_field(&n, 8).unwrap();
        let e = e.base_change(&f4).unwrap();
        let lift = DualLift::new(&e, f4.one(), vec![f4.generator(), f4.zero()]).unwrap();
        let r = lift.ring();
        let fbar = lift.additive(n.generator());
        for u in e.torsion_structure(&n, &f4).unwrap().points() {
            let ubar = lift_point_good(&lift, &n, &u).unwrap();
            assert_eq!(upoly::eval(&r, &fbar, &ubar), r.zero());
        }
    }
}
