//! Points of Y0(n) in characteristic p, the maps f1 and f2 on Y0(np), and
//! the supersingular point count.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::base::{BaseIdeal, BaseRing};
use crate::drinfeld::{DrinfeldModule, DEFAULT_SPLITTING_CAP};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::isogeny::{quotient_by, KernelSubgroup};
use crate::level::{enumerate_gamma0, enumerate_gamma1, induced_structure_on_quotient, Gamma0Structure};

/// Fields and parameters for counting points of Y0(n) over F_Q, Q = q^(m k).
#[derive(Clone, Debug)]
pub struct Y0Setup {
    pub a: BaseRing,
    pub p: BaseIdeal,
    pub n: BaseIdeal,
    /// deg p.
    pub m: usize,
    pub k: usize,
    /// F_Q.
    pub rational: FiniteField,
    /// Image of T in F_Q.
    pub gamma_t: Elem,
    /// Common splitting field standing in for the algebraic closure.
    pub closure: FiniteField,
}

impl Y0Setup {
    /// `closure_multiplier` enlarges the closure approximation by that factor.
    pub fn new(a: &BaseRing, p: &BaseIdeal, n: &BaseIdeal, k: usize, closure_multiplier: usize) -> Result<Self> {
        if a.gcd(p.generator(), n.generator()) != a.one() {
            return Err(Error::NotCoprime {
                level: a.display(n.generator()),
                other: a.display(p.generator()),
            });
        }
        if !a.is_irreducible(p.generator()) {
            return Err(Error::NotPrimeIdeal(a.display(p.generator())));
        }
        let m = p.degree();
        let rational = a.fq().extension(m * k)?;
        let lifted: Vec<Elem> = p.generator().coeffs().iter().map(|c| rational.from_base(c)).collect();
        let gamma_t = rational.roots(&lifted).into_iter().next().ok_or(Error::NoEmbedding)?;
        let mut setup = Y0Setup {
            a: a.clone(),
            p: p.clone(),
            n: n.clone(),
            m,
            k,
            rational: rational.clone(),
            gamma_t,
            closure: rational.clone(),
        };
        // lcm of splitting degrees of E[n] over all rational j, and room for
        // the automorphisms of j = 0, which live in F_(q^2)
        let mut deg = if (m * k).is_multiple_of(2) { 1 } else { 2 };
        for j in rational.elements(1 << 20)? {
            let e = setup.model(&j)?;
            let mult = e.torsion_polynomial(n).splitting_multiplier(DEFAULT_SPLITTING_CAP)?;
            deg = lcm(deg, mult);
        }
        setup.closure = rational.extension(deg * closure_multiplier)?;
        Ok(setup)
    }

    pub fn q(&self) -> u64 {
        self.a.q()
    }

    /// `Q = q^(m k)`.
    pub fn big_q_exponent(&self) -> usize {
        self.m * self.k
    }

    /// The model over F_Q with the given j: (1, 1/j), or (0, 1) for j = 0.
    pub fn model(&self, j: &Elem) -> Result<DrinfeldModule> {
        let f = &self.rational;
        let coeffs = if f.is_zero(j) {
            vec![f.zero(), f.one()]
        } else {
            vec![f.one(), f.inv(j).unwrap()]
        };
        DrinfeldModule::new(&self.a, f, self.gamma_t.clone(), coeffs)
    }

    /// Scalars u with `u phi u^-1 = phi` for a module over the closure.
    pub fn automorphisms(&self, e: &DrinfeldModule) -> Result<Vec<Elem>> {
        e.isomorphisms(e, &self.closure)
    }

    fn frobenius_points(&self, pts: &[Elem], iterations: usize) -> Vec<Elem> {
        let mut v: Vec<Elem> = pts.iter().map(|x| self.closure.frobenius(x, iterations)).collect();
        v.sort();
        v
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// A geometric point of Y0(n): a module with j-invariant j and a Gamma0(n)
/// structure, up to isomorphism.
#[derive(Clone, Debug)]
pub struct Y0Point {
    pub j: Elem,
    pub module: DrinfeldModule,
    pub structure: Gamma0Structure,
    pub supersingular: bool,
    /// Size of the automorphism orbit of the structure.
    pub orbit_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Y0PointJson {
    pub j: Vec<u8>,
    pub etale_generator: Vec<u8>,
    pub supersingular: bool,
    pub orbit_size: usize,
}

impl Y0Point {
    pub fn to_json(&self) -> Y0PointJson {
        Y0PointJson {
            j: self.j.coeffs().to_vec(),
            etale_generator: self.structure.generator.coeffs().to_vec(),
            supersingular: self.supersingular,
            orbit_size: self.orbit_size,
        }
    }
}

/// Canonical point set of the orbit of `points` under multiplication by `auts`.
fn orbit_key(l: &FiniteField, auts: &[Elem], points: &[Elem]) -> Vec<Elem> {
    auts.iter()
        .map(|u| {
            let mut v: Vec<Elem> = points.iter().map(|x| l.mul(u, x)).collect();
            v.sort();
            v
        })
        .min()
        .unwrap_or_else(|| points.to_vec())
}

/// All Gamma0(n) pairs over the closure, grouped into isomorphism classes,
/// with rational j. Returns (point, rational?) per class.
fn classes(setup: &Y0Setup) -> Result<Vec<(Y0Point, bool)>> {
    let l = &setup.closure;
    let mut out = Vec::new();
    for j in setup.rational.elements(1 << 20)? {
        let e = setup.model(&j)?.base_change(l)?;
        let ss = e.is_supersingular()?;
        let auts = setup.automorphisms(&e)?;
        let mut seen = BTreeSet::new();
        for g in enumerate_gamma0(&e, &setup.n, l)? {
            let key = orbit_key(l, &auts, &g.points);
            if !seen.insert(key.clone()) {
                continue;
            }
            let orbit: BTreeSet<Vec<Elem>> = auts
                .iter()
                .map(|u| {
                    let mut v: Vec<Elem> = g.points.iter().map(|x| l.mul(u, x)).collect();
                    v.sort();
                    v
                })
                .collect();
            let moved = setup.frobenius_points(&g.points, setup.big_q_exponent());
            let rational = orbit_key(l, &auts, &moved) == key;
            out.push((
                Y0Point {
                    j: j.clone(),
                    module: e.clone(),
                    structure: g,
                    supersingular: ss,
                    orbit_size: orbit.len(),
                },
                rational,
            ));
        }
    }
    Ok(out)
}

/// Iso classes of pairs (E, G) over the closure whose class is fixed by the
/// Q-power Frobenius, Q = q^(m k).
pub fn enumerate_y0(setup: &Y0Setup) -> Result<Vec<Y0Point>> {
    Ok(classes(setup)?
        .into_iter()
        .filter_map(|(pt, rational)| rational.then_some(pt))
        .collect())
}

/// Rational classes with supersingular module.
pub fn special_points(setup: &Y0Setup) -> Result<Vec<Y0Point>> {
    Ok(enumerate_y0(setup)?.into_iter().filter(|p| p.supersingular).collect())
}

/// Number of supersingular classes with rational j, rational or not.
pub fn supersingular_class_count(setup: &Y0Setup) -> Result<usize> {
    Ok(classes(setup)?.iter().filter(|(p, _)| p.supersingular).count())
}

/// Whether `u phi u^-1 = phi'` and `u G = G'` for some u in the closure.
pub fn pairs_isomorphic(
    l: &FiniteField,
    e: &DrinfeldModule,
    g: &[Elem],
    e2: &DrinfeldModule,
    g2: &[Elem],
) -> Result<bool> {
    let mut target = g2.to_vec();
    target.sort();
    for u in e.isomorphisms(e2, l)? {
        let mut img: Vec<Elem> = g.iter().map(|x| l.mul(&u, x)).collect();
        img.sort();
        if img == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A pair (module, Gamma0 structure) over the closure.
#[derive(Clone, Debug)]
pub struct Pair {
    pub module: DrinfeldModule,
    pub structure: Gamma0Structure,
}

impl Pair {
    /// Coefficients and points raised to the q^i power.
    pub fn twist(&self, i: usize) -> Pair {
        let l = &self.structure.field;
        let mut pts: Vec<Elem> = self.structure.points.iter().map(|x| l.frobenius(x, i)).collect();
        pts.sort();
        Pair {
            module: self.module.frobenius_twist(i),
            structure: Gamma0Structure {
                points: pts,
                generator: l.frobenius(&self.structure.generator, i),
                ..self.structure.clone()
            },
        }
    }

    pub fn isomorphic(&self, other: &Pair) -> Result<bool> {
        pairs_isomorphic(
            &self.structure.field,
            &self.module,
            &self.structure.points,
            &other.module,
            &other.structure.points,
        )
    }
}

/// Forget the Gamma0(p) part: the class of (E, G).
pub fn f1(e: &DrinfeldModule, g: &Gamma0Structure, _h: &Gamma0Structure) -> Pair {
    Pair {
        module: e.clone(),
        structure: g.clone(),
    }
}

/// `(E/H, xi(G))`.
pub fn f2(e: &DrinfeldModule, g: &Gamma0Structure, h: &Gamma0Structure) -> Result<Pair> {
    let (target, iso) = quotient_by(e, &h.kernel())?;
    let image = induced_structure_on_quotient(g, &iso)?;
    Ok(Pair {
        module: target,
        structure: image,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleCheck {
    pub j: Vec<u8>,
    pub g_generator: Vec<u8>,
    pub h_local: bool,
    pub supersingular: bool,
    /// f2 is the q^m-twist of f1.
    pub on_pi: bool,
    /// f1 is the q^m-twist of f2.
    pub on_pi_transpose: bool,
    pub branch_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub triples: Vec<TripleCheck>,
    pub failures: usize,
}

/// For every module with rational j, every Gamma0(n) structure G and every
/// Gamma0(p) structure H: (f1, f2) lies on the graph of the q^m-Frobenius or
/// its transpose, on the branch dictated by H being local or reduced.
pub fn verify_reduction_is_union_of_graphs(setup: &Y0Setup) -> Result<ReductionReport> {
    let l = &setup.closure;
    let m = setup.m;
    let mut triples = Vec::new();
    for j in setup.rational.elements(1 << 20)? {
        let e = setup.model(&j)?.base_change(l)?;
        let ss = e.is_supersingular()?;
        let hs = enumerate_gamma0(&e, &setup.p, l)?;
        for g in enumerate_gamma0(&e, &setup.n, l)? {
            for h in &hs {
                let x = f1(&e, &g, h);
                let y = f2(&e, &g, h)?;
                let on_pi = y.isomorphic(&x.twist(m))?;
                let on_pit = x.isomorphic(&y.twist(m))?;
                let local = h.is_local();
                let branch_ok = if local { on_pi } else { on_pit };
                triples.push(TripleCheck {
                    j: j.coeffs().to_vec(),
                    g_generator: g.generator.coeffs().to_vec(),
                    h_local: local,
                    supersingular: ss,
                    on_pi,
                    on_pi_transpose: on_pit,
                    branch_ok,
                });
            }
        }
    }
    let failures = triples.iter().filter(|t| !t.branch_ok).count();
    Ok(ReductionReport { triples, failures })
}

/// A triple on which the transpose branch holds for Gamma0 but not for Gamma1.
#[derive(Clone, Debug, Serialize)]
pub struct Gamma1Witness {
    pub j: Vec<u8>,
    /// u, the image of 1 under the Gamma1(n) structure.
    pub generator: Vec<u8>,
    /// Generator of the reduced Gamma0(p) structure H.
    pub h_generator: Vec<u8>,
    /// (E, A u) is the q^m-twist of (E/H, A xi(u)).
    pub gamma0_on_pi_transpose: bool,
    /// (E, u) is the q^m-twist of (E/H, xi(u)).
    pub gamma1_on_pi_transpose: bool,
}

/// Searches ordinary modules with rational j for a Gamma1(n) structure u and
/// a reduced H where the transpose branch fails for the pair (E, u) while it
/// holds for the induced Gamma0 pair. The dual of E -> E/H carries xi(u) to
/// phi_p(u), which generates the same submodule as u but differs from u
/// whenever p is not 1 modulo n up to automorphisms.
pub fn gamma1_transpose_failure(setup: &Y0Setup) -> Result<Option<Gamma1Witness>> {
    let l = &setup.closure;
    let m = setup.m;
    for j in setup.rational.elements(1 << 20)? {
        let e = setup.model(&j)?.base_change(l)?;
        if e.is_supersingular()? {
            continue;
        }
        let gs = enumerate_gamma0(&e, &setup.n, l)?;
        for h in enumerate_gamma0(&e, &setup.p, l)?.iter().filter(|h| !h.is_local()) {
            let (target, iso) = quotient_by(&e, &h.kernel())?;
            let back = target.frobenius_twist(m);
            let isos = e.isomorphisms(&back, l)?;
            for u in enumerate_gamma1(&e, &setup.n, l)? {
                let v = l.frobenius(&iso.xi.eval(&u.generator), m);
                if isos.iter().any(|c| l.mul(c, &u.generator) == v) {
                    continue;
                }
                let g = gs
                    .iter()
                    .find(|g| g.points.contains(&u.generator))
                    .ok_or_else(|| Error::Invariant("Gamma1 generator outside every Gamma0 structure".into()))?;
                let gamma0 = f1(&e, g, h).isomorphic(&f2(&e, g, h)?.twist(m))?;
                if gamma0 {
                    return Ok(Some(Gamma1Witness {
                        j: j.coeffs().to_vec(),
                        generator: u.generator.coeffs().to_vec(),
                        h_generator: h.generator.coeffs().to_vec(),
                        gamma0_on_pi_transpose: true,
                        gamma1_on_pi_transpose: false,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct IharaReport {
    pub operation: &'static str,
    pub q: u64,
    pub p: String,
    pub m: usize,
    pub n: String,
    /// Affine points of Y0(n) over F_(q^(2m)); cusps are not counted.
    #[serde(rename = "N2")]
    pub n2_affine: usize,
    pub n2_label: &'static str,
    #[serde(rename = "S")]
    pub special: usize,
    pub special_le_n2: bool,
    pub genus: Option<i64>,
    /// `(q^m - 1)(g - 1)`.
    pub bound: Option<i64>,
    /// `2(g - 1) + S`.
    pub g0_minus_1: Option<i64>,
    /// `(q^m + 1)(g - 1)`.
    pub hurwitz_lower: Option<i64>,
    pub margin: Option<i64>,
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Y0PointJson>,
}

pub fn ihara_report(setup: &Y0Setup, genus: Option<i64>) -> Result<IharaReport> {
    if setup.k != 2 {
        return Err(Error::Unsupported(
            "the report counts points over F_(q^(2m)); use k = 2".into(),
        ));
    }
    let pts = enumerate_y0(setup)?;
    let n2 = pts.len();
    let s = pts.iter().filter(|p| p.supersingular).count();
    let qm = (setup.q() as i64).pow(setup.m as u32);
    let bound = genus.map(|g| (qm - 1) * (g - 1));
    let g0 = genus.map(|g| 2 * (g - 1) + s as i64);
    let hurwitz = genus.map(|g| (qm + 1) * (g - 1));
    let pass = bound.map(|b| n2 >= s && s as i64 >= b);
    Ok(IharaReport {
        operation: "moduli::ihara_report",
        q: setup.q(),
        p: setup.a.display(setup.p.generator()),
        m: setup.m,
        n: setup.a.display(setup.n.generator()),
        n2_affine: n2,
        n2_label: "affine points (cusps excluded)",
        special: s,
        special_le_n2: s <= n2,
        genus,
        bound,
        g0_minus_1: g0,
        hurwitz_lower: hurwitz,
        margin: bound.map(|b| s as i64 - b),
        pass,
        points: pts.iter().map(|p| p.to_json()).collect(),
    })
}

/// The Gamma0(p) structures on a module: the local one and, when ordinary,
/// the reduced part of E[p].
pub fn gamma0_at_p(setup: &Y0Setup, e: &DrinfeldModule) -> Result<Vec<Gamma0Structure>> {
    enumerate_gamma0(e, &setup.p, &setup.closure)
}

/// The local subgroup of order q^m.
pub fn local_kernel(setup: &Y0Setup) -> KernelSubgroup {
    KernelSubgroup::local(&setup.closure, setup.m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_counts_j_line() {
        let a = BaseRing::over(2, 1).unwrap();
        let p = a.ideal(&a.t()).unwrap();
        let one = a.ideal(&a.one()).unwrap();
        let setup = Y0Setup::new(&a, &p, &one, 2, 1).unwrap();
        let pts = enumerate_y0(&setup).unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts.iter().filter(|p| p.supersingular).count(), 1);
    }
}
