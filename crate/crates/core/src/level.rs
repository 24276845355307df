//! Level structures Gamma(n), Gamma1(n), Gamma0(n) on rank-2 modules over a
//! splitting field, the GL2(A/n) action and induced structures on quotients.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::base::{BaseElement, BaseIdeal, BaseRing};
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::isogeny::{Isogeny, KernelSubgroup};
use crate::skew::{self, SkewPolynomial};

/// A cyclic A/n-submodule datum: reduced points plus local order q^e.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gamma0Structure {
    pub n: BaseIdeal,
    pub field: FiniteField,
    pub points: Vec<Elem>,
    pub local_exponent: usize,
    /// A generator of the reduced part.
    pub generator: Elem,
}

impl Gamma0Structure {
    pub fn kernel(&self) -> KernelSubgroup {
        KernelSubgroup::new(&self.field, self.points.clone(), self.local_exponent)
    }

    pub fn is_local(&self) -> bool {
        self.points.len() == 1
    }

    /// `|H_et| q^e`.
    pub fn order(&self) -> u128 {
        self.kernel().order()
    }
}

/// An injection A/n -> E[n] given by the image of 1 (zero at the
/// characteristic when the structure is the local one).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gamma1Structure {
    pub n: BaseIdeal,
    pub field: FiniteField,
    pub generator: Elem,
}

/// A map (A/n)^2 -> E[n] given by the images of the standard basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaFullStructure {
    pub n: BaseIdeal,
    pub field: FiniteField,
    pub images: [Elem; 2],
}

/// Serializable summary of a Gamma0 structure.
#[derive(Clone, Debug, Serialize)]
pub struct Gamma0Json {
    pub n: String,
    pub etale_generator: Vec<u8>,
    pub etale_size: usize,
    pub local_mult: usize,
}

impl Gamma0Structure {
    pub fn to_json(&self, a: &BaseRing) -> Gamma0Json {
        Gamma0Json {
            n: a.display(self.n.generator()),
            etale_generator: self.generator.coeffs().to_vec(),
            etale_size: self.points.len(),
            local_mult: self.local_exponent,
        }
    }
}

/// The A-submodule generated by `gens`, as a sorted point list.
pub fn a_span(phi_t: &SkewPolynomial<FiniteField>, gens: &[Elem], l: &FiniteField) -> Vec<Elem> {
    let mut vectors = Vec::new();
    for g in gens {
        let mut x = g.clone();
        // phi_T-orbit until it stops growing the span
        loop {
            let mut trial = vectors.clone();
            trial.push(x.clone());
            if skew::fq_basis(l, &trial).len() == vectors.len() {
                break;
            }
            vectors = skew::fq_basis(l, &trial);
            x = phi_t.eval(&x);
        }
    }
    skew::fq_span(l, &vectors)
}

/// One prime-power factor of the level, with its points over L.
struct Part {
    prime: BaseIdeal,
    at_characteristic: bool,
    /// E[prime^exponent](L)
    torsion: Vec<Elem>,
    /// Points killed by prime^(exponent-1)
    lower: BTreeSet<Elem>,
    degree: usize,
}

struct LevelContext {
    phi_t: SkewPolynomial<FiniteField>,
    l: FiniteField,
    ordinary: Option<bool>,
    parts: Vec<Part>,
}

fn context(e: &DrinfeldModule, n: &BaseIdeal, l: &FiniteField) -> Result<LevelContext> {
    if e.rank() != 2 {
        return Err(Error::WrongRank {
            expected: 2,
            got: e.rank(),
        });
    }
    let e = e.base_change(l)?;
    let a = e.base().clone();
    let char_p = e.characteristic();
    let mut parts = Vec::new();
    let mut ordinary = None;
    for (prime, exponent) in a.factor(n) {
        let at_char = prime == char_p;
        if at_char && exponent > 1 {
            return Err(Error::Unsupported(
                "level structures at higher powers of the characteristic".into(),
            ));
        }
        if at_char {
            ordinary = Some(e.height_at_characteristic()? == 1);
        }
        let full = a.ideal(&a.pow(prime.generator(), exponent))?;
        let tors = e.torsion_structure(&full, l)?;
        let lower: BTreeSet<Elem> = if exponent > 1 {
            let low = a.ideal(&a.pow(prime.generator(), exponent - 1))?;
            e.torsion_structure(&low, l)?.points().into_iter().collect()
        } else {
            [l.zero()].into_iter().collect()
        };
        parts.push(Part {
            degree: prime.degree() * exponent as usize,
            prime,
            at_characteristic: at_char,
            torsion: tors.points(),
            lower,
        });
    }
    Ok(LevelContext {
        phi_t: e.phi_t(),
        l: l.clone(),
        ordinary,
        parts,
    })
}

fn cartesian<T: Clone>(lists: Vec<Vec<T>>) -> Vec<Vec<T>> {
    lists.into_iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

fn sum_set(l: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let set: BTreeSet<Elem> = a.iter().flat_map(|x| b.iter().map(move |y| l.add(x, y))).collect();
    set.into_iter().collect()
}

/// Per-part Gamma0 data: (points, local exponent, generator).
fn gamma0_part(ctx: &LevelContext, part: &Part) -> Vec<(Vec<Elem>, usize, Elem)> {
    let l = &ctx.l;
    if part.at_characteristic {
        let mut out = vec![(vec![l.zero()], part.prime.degree(), l.zero())];
        if ctx.ordinary == Some(true) {
            let gen = part
                .torsion
                .iter()
                .find(|x| !l.is_zero(x))
                .cloned()
                .unwrap_or_else(|| l.zero());
            out.push((part.torsion.clone(), 0, gen));
        }
        return out;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in &part.torsion {
        if part.lower.contains(x) {
            continue;
        }
        let span = a_span(&ctx.phi_t, std::slice::from_ref(x), l);
        if span.len() as u128 != (l.q() as u128).pow(part.degree as u32) {
            continue;
        }
        if seen.insert(span.clone()) {
            out.push((span, 0, x.clone()));
        }
    }
    out
}

pub fn enumerate_gamma0(e: &DrinfeldModule, n: &BaseIdeal, l: &FiniteField) -> Result<Vec<Gamma0Structure>> {
    let ctx = context(e, n, l)?;
    let per_part: Vec<_> = ctx.parts.iter().map(|p| gamma0_part(&ctx, p)).collect();
    let mut out: Vec<Gamma0Structure> = cartesian(per_part)
        .into_iter()
        .map(|choice| {
            let mut points = vec![l.zero()];
            let mut local = 0;
            let mut gen = l.zero();
            for (pts, e, g) in choice {
                points = sum_set(l, &points, &pts);
                local += e;
                gen = l.add(&gen, &g);
            }
            Gamma0Structure {
                n: n.clone(),
                field: l.clone(),
                points,
                local_exponent: local,
                generator: gen,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.local_exponent, &a.points).cmp(&(b.local_exponent, &b.points)));
    Ok(out)
}

/// Per-part generators of Gamma1 structures.
fn gamma1_part(ctx: &LevelContext, part: &Part) -> Vec<Elem> {
    let l = &ctx.l;
    if part.at_characteristic {
        let mut out = vec![l.zero()];
        if ctx.ordinary == Some(true) {
            out.extend(part.torsion.iter().filter(|x| !l.is_zero(x)).cloned());
        }
        return out;
    }
    part.torsion
        .iter()
        .filter(|x| !part.lower.contains(*x))
        .filter(|x| {
            a_span(&ctx.phi_t, std::slice::from_ref(*x), l).len() as u128 == (l.q() as u128).pow(part.degree as u32)
        })
        .cloned()
        .collect()
}

pub fn enumerate_gamma1(e: &DrinfeldModule, n: &BaseIdeal, l: &FiniteField) -> Result<Vec<Gamma1Structure>> {
    let ctx = context(e, n, l)?;
    let per_part: Vec<_> = ctx.parts.iter().map(|p| gamma1_part(&ctx, p)).collect();
    let mut out: Vec<Gamma1Structure> = cartesian(per_part)
        .into_iter()
        .map(|gens| Gamma1Structure {
            n: n.clone(),
            field: l.clone(),
            generator: gens.iter().fold(l.zero(), |acc, g| l.add(&acc, g)),
        })
        .collect();
    out.sort_by(|a, b| a.generator.cmp(&b.generator));
    Ok(out)
}

fn gamma_full_part(ctx: &LevelContext, part: &Part) -> Vec<[Elem; 2]> {
    let l = &ctx.l;
    let target = part.torsion.len();
    if part.at_characteristic && ctx.ordinary != Some(true) {
        return vec![[l.zero(), l.zero()]];
    }
    let mut out = Vec::new();
    for x in &part.torsion {
        for y in &part.torsion {
            if a_span(&ctx.phi_t, &[x.clone(), y.clone()], l).len() == target {
                out.push([x.clone(), y.clone()]);
            }
        }
    }
    out
}

pub fn enumerate_gamma_full(e: &DrinfeldModule, n: &BaseIdeal, l: &FiniteField) -> Result<Vec<GammaFullStructure>> {
    let ctx = context(e, n, l)?;
    let per_part: Vec<_> = ctx.parts.iter().map(|p| gamma_full_part(&ctx, p)).collect();
    let mut out: Vec<GammaFullStructure> = cartesian(per_part)
        .into_iter()
        .map(|imgs| {
            let mut pair = [l.zero(), l.zero()];
            for im in imgs {
                pair[0] = l.add(&pair[0], &im[0]);
                pair[1] = l.add(&pair[1], &im[1]);
            }
            GammaFullStructure {
                n: n.clone(),
                field: l.clone(),
                images: pair,
            }
        })
        .collect();
    out.sort_by(|a, b| a.images.cmp(&b.images));
    Ok(out)
}

/// `alpha ∘ m`: the new image of e_j is `sum_i phi_(m_ij)(alpha(e_i))`.
pub fn gl2_act(
    e: &DrinfeldModule,
    m: &[[BaseElement; 2]; 2],
    alpha: &GammaFullStructure,
) -> Result<GammaFullStructure> {
    let a = e.base();
    let det = a.sub(&a.mul(&m[0][0], &m[1][1]), &a.mul(&m[0][1], &m[1][0]));
    let g = a.gcd(&det, alpha.n.generator());
    if g != a.one() {
        return Err(Error::SingularMatrix);
    }
    let l = &alpha.field;
    let el = e.base_change(l)?;
    let image =
        |j: usize| -> Elem { (0..2).fold(l.zero(), |acc, i| l.add(&acc, &el.phi(&m[i][j]).eval(&alpha.images[i]))) };
    Ok(GammaFullStructure {
        n: alpha.n.clone(),
        field: l.clone(),
        images: [image(0), image(1)],
    })
}

/// The submodule generated by a Gamma1 generator (local part at the
/// characteristic when the generator vanishes there).
pub fn gamma1_to_gamma0(e: &DrinfeldModule, s: &Gamma1Structure) -> Result<Gamma0Structure> {
    let l = &s.field;
    let el = e.base_change(l)?;
    let a = e.base();
    let char_p = el.characteristic();
    let mut local = 0;
    for (prime, _) in a.factor(&s.n) {
        if prime == char_p {
            // the char component of the generator is its image under the
            // idempotent; it vanishes exactly for the local structure
            let crt = a.module_crt(&s.n);
            let idx = crt.parts.iter().position(|(p, _, _)| *p == prime).unwrap();
            let comp = el.phi(&crt.idempotents[idx]).eval(&s.generator);
            if l.is_zero(&comp) {
                local += prime.degree();
            }
        }
    }
    let points = a_span(&el.phi_t(), std::slice::from_ref(&s.generator), l);
    Ok(Gamma0Structure {
        n: s.n.clone(),
        field: l.clone(),
        points,
        local_exponent: local,
        generator: s.generator.clone(),
    })
}

/// `xi(G)` on the target of the isogeny, for G prime to its kernel.
pub fn induced_structure_on_quotient(g: &Gamma0Structure, iso: &Isogeny) -> Result<Gamma0Structure> {
    let l = &g.field;
    let xi = iso.xi.base_change(l)?;
    let image: BTreeSet<Elem> = g.points.iter().map(|x| xi.eval(x)).collect();
    if image.len() != g.points.len() {
        return Err(Error::Invariant(format!(
            "isogeny is not injective on the level structure ({} -> {} points)",
            g.points.len(),
            image.len()
        )));
    }
    Ok(Gamma0Structure {
        n: g.n.clone(),
        field: l.clone(),
        points: image.into_iter().collect(),
        local_exponent: g.local_exponent,
        generator: xi.eval(&g.generator),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_at_q2() {
        let a = BaseRing::over(2, 1).unwrap();
        let f2 = a.fq().clone();
        let ord = DrinfeldModule::new(&a, &f2, f2.zero(), vec![f2.one(), f2.one()]).unwrap();
        let ss = DrinfeldModule::new(&a, &f2, f2.zero(), vec![f2.zero(), f2.one()]).unwrap();
        let t = a.ideal(&a.t()).unwrap();
        let t1 = a.ideal(&a.parse("T+1").unwrap()).unwrap();
        let l = ord.splitting_field(&t1, 24).unwrap();
        assert_eq!(enumerate_gamma0(&ord, &t1, &l).unwrap().len(), 3);
        assert_eq!(enumerate_gamma0(&ord, &t, &l).unwrap().len(), 2);
        assert_eq!(enumerate_gamma0(&ss, &t, &l).unwrap().len(), 1);
        assert_eq!(enumerate_gamma1(&ss, &t, &l).unwrap().len(), 1);
        assert_eq!(enumerate_gamma1(&ord, &t1, &l).unwrap().len(), 3);
        assert_eq!(enumerate_gamma_full(&ord, &t1, &l).unwrap().len(), 6);
    }
}
