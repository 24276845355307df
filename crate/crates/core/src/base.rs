//! The polynomial ring A = F_q[T], its ideals, residue fields and CRT data.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::ring::CoeffRing;
use crate::upoly;

/// Element of A, coefficients in F_q constant first, trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BaseElement {
    coeffs: Vec<Elem>,
}

impl Ord for BaseElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for BaseElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BaseElement {
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// A = F_q[T] over a fixed constant field.
#[derive(Clone, PartialEq, Debug)]
pub struct BaseRing {
    fq: FiniteField,
}

impl BaseRing {
    pub fn new(fq: FiniteField) -> Self {
        debug_assert_eq!(fq.ext_degree(), 1);
        BaseRing { fq }
    }

    /// A over F_q with q = p^e.
    pub fn over(p: u32, e: usize) -> Result<Self> {
        Ok(Self::new(FiniteField::base(p, e)?))
    }

    pub fn fq(&self) -> &FiniteField {
        &self.fq
    }

    pub fn q(&self) -> u64 {
        self.fq.q()
    }

    pub fn elem(&self, coeffs: Vec<Elem>) -> BaseElement {
        BaseElement {
            coeffs: upoly::trim(&self.fq, coeffs),
        }
    }

    /// Element from integer coefficients (reduced into the prime field).
    pub fn from_ints(&self, coeffs: &[i64]) -> BaseElement {
        self.elem(coeffs.iter().map(|&c| self.fq.from_int(c)).collect())
    }

    pub fn zero(&self) -> BaseElement {
        self.elem(Vec::new())
    }

    pub fn one(&self) -> BaseElement {
        self.elem(vec![self.fq.one()])
    }

    pub fn t(&self) -> BaseElement {
        self.elem(vec![self.fq.zero(), self.fq.one()])
    }

    pub fn constant(&self, c: Elem) -> BaseElement {
        self.elem(vec![c])
    }

    pub fn add(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.elem(upoly::add(&self.fq, &a.coeffs, &b.coeffs))
    }

    pub fn sub(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.elem(upoly::sub(&self.fq, &a.coeffs, &b.coeffs))
    }

    pub fn mul(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.elem(upoly::mul(&self.fq, &a.coeffs, &b.coeffs))
    }

    pub fn scale(&self, a: &BaseElement, c: &Elem) -> BaseElement {
        self.elem(upoly::scale(&self.fq, &a.coeffs, c))
    }

    pub fn pow(&self, a: &BaseElement, e: u32) -> BaseElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn div_rem(&self, a: &BaseElement, b: &BaseElement) -> Result<(BaseElement, BaseElement)> {
        let (q, r) = upoly::div_rem(&self.fq, &a.coeffs, &b.coeffs).ok_or(Error::ZeroIdeal)?;
        Ok((self.elem(q), self.elem(r)))
    }

    pub fn rem(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.div_rem(a, b).expect("nonzero divisor").1
    }

    pub fn divides(&self, d: &BaseElement, a: &BaseElement) -> bool {
        !d.is_zero() && self.rem(a, d).is_zero()
    }

    pub fn monic(&self, a: &BaseElement) -> Option<BaseElement> {
        upoly::monic(&self.fq, &a.coeffs).map(|c| self.elem(c))
    }

    pub fn gcd(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.elem(upoly::gcd(&self.fq, &a.coeffs, &b.coeffs))
    }

    /// `(g, s, t)` with `s a + t b = g`, g monic (or zero).
    pub fn xgcd(&self, a: &BaseElement, b: &BaseElement) -> (BaseElement, BaseElement, BaseElement) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (qt, r) = self.div_rem(&r0, &r1).unwrap();
            let s = self.sub(&s0, &self.mul(&qt, &s1));
            let t = self.sub(&t0, &self.mul(&qt, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.coeffs.last() {
            None => (r0, s0, t0),
            Some(lead) => {
                let inv = self.fq.inv(lead).unwrap();
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    /// Evaluate at `t` in any coefficient ring containing F_q.
    pub fn eval<R: CoeffRing>(&self, a: &BaseElement, ring: &R, t: &R::Elem) -> R::Elem {
        a.coeffs
            .iter()
            .rev()
            .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, t), &ring.from_base(c)))
    }

    /// All polynomials of degree < d, in encoding order.
    pub fn all_below(&self, d: usize) -> Vec<BaseElement> {
        let q = self.q() as u128;
        let total = q.pow(d as u32);
        (0..total)
            .map(|mut idx| {
                let cs = (0..d)
                    .map(|_| {
                        let c = self.fq.from_index(idx % q);
                        idx /= q;
                        c
                    })
                    .collect();
                self.elem(cs)
            })
            .collect()
    }

    /// All monic polynomials of degree exactly d.
    pub fn monic_of_degree(&self, d: usize) -> Vec<BaseElement> {
        self.all_below(d)
            .into_iter()
            .map(|mut a| {
                a.coeffs.resize(d, self.fq.zero());
                a.coeffs.push(self.fq.one());
                a
            })
            .collect()
    }

    /// Trial division by every monic polynomial of degree at most deg/2.
    pub fn is_irreducible(&self, a: &BaseElement) -> bool {
        let Some(d) = a.degree() else { return false };
        if d == 0 {
            return false;
        }
        (1..=d / 2).all(|k| self.monic_of_degree(k).iter().all(|g| !self.divides(g, a)))
    }

    pub fn ideal(&self, generator: &BaseElement) -> Result<BaseIdeal> {
        let g = self.monic(generator).ok_or(Error::ZeroIdeal)?;
        Ok(BaseIdeal { generator: g })
    }

    /// Complete factorization, primes in increasing generator order.
    pub fn factor(&self, n: &BaseIdeal) -> Vec<(BaseIdeal, u32)> {
        let mut rest = n.generator.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap_or(0) > 0 {
            if 2 * d > rest.degree().unwrap() {
                // what remains is irreducible
                out.push((
                    BaseIdeal {
                        generator: rest.clone(),
                    },
                    1,
                ));
                break;
            }
            for g in self.monic_of_degree(d) {
                let mut e = 0;
                while self.divides(&g, &rest) {
                    rest = self.div_rem(&rest, &g).unwrap().0;
                    e += 1;
                }
                if e > 0 {
                    out.push((BaseIdeal { generator: g }, e));
                }
            }
            d += 1;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        // merge a trailing prime found twice (only possible via the early exit)
        let mut merged: Vec<(BaseIdeal, u32)> = Vec::new();
        for (p, e) in out {
            match merged.last_mut() {
                Some((lp, le)) if *lp == p => *le += e,
                _ => merged.push((p, e)),
            }
        }
        merged
    }

    /// At least two distinct prime factors.
    pub fn is_admissible(&self, n: &BaseIdeal) -> bool {
        self.factor(n).len() >= 2
    }

    pub fn residue_field(&self, p: &BaseIdeal) -> Result<ResidueField> {
        if !self.is_irreducible(&p.generator) {
            return Err(Error::NotPrimeIdeal(self.display(&p.generator)));
        }
        let m = p.degree();
        let field = self.fq.extension(m)?;
        let lifted: Vec<Elem> = p.generator.coeffs.iter().map(|c| field.from_base(c)).collect();
        let t_image = field
            .roots(&lifted)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Invariant("irreducible prime has no root in its residue field".into()))?;
        Ok(ResidueField {
            a: self.clone(),
            prime: p.clone(),
            field,
            t_image,
        })
    }

    /// Monic minimal polynomial over F_q of an element of a finite field.
    pub fn minimal_polynomial(&self, field: &FiniteField, x: &Elem) -> BaseElement {
        let mut conj = vec![x.clone()];
        loop {
            let next = field.frobenius(conj.last().unwrap(), 1);
            if next == conj[0] {
                break;
            }
            conj.push(next);
        }
        let poly = upoly::from_roots(field, &conj);
        self.elem(
            poly.iter()
                .map(|c| field.to_base(c).expect("conjugate product has F_q coefficients"))
                .collect(),
        )
    }

    pub fn module_crt(&self, n: &BaseIdeal) -> CrtData {
        let parts: Vec<(BaseIdeal, u32, BaseElement)> = self
            .factor(n)
            .into_iter()
            .map(|(p, e)| {
                let pe = self.pow(&p.generator, e);
                (p, e, pe)
            })
            .collect();
        let idempotents = parts
            .iter()
            .map(|(_, _, m)| {
                let cofactor = self.div_rem(&n.generator, m).unwrap().0;
                let (_, s, _) = self.xgcd(&cofactor, m);
                self.rem(&self.mul(&cofactor, &s), &n.generator)
            })
            .collect();
        CrtData {
            a: self.clone(),
            n: n.clone(),
            parts,
            idempotents,
        }
    }

    pub fn display(&self, a: &BaseElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate().rev() {
            if self.fq.is_zero(c) {
                continue;
            }
            let coef = if self.fq.degree() == 1 {
                format!("{}", c.coeffs()[0])
            } else {
                format!("{c}")
            };
            let is_one = *c == self.fq.one();
            terms.push(match (i, is_one) {
                (0, _) => coef,
                (1, true) => "T".into(),
                (1, false) => format!("{coef}*T"),
                (_, true) => format!("T^{i}"),
                (_, false) => format!("{coef}*T^{i}"),
            });
        }
        terms.join("+")
    }

    /// Parse `T^2+T+1`, `2*T+1`, `[0,1]*T^3+1`.
    pub fn parse(&self, text: &str) -> Result<BaseElement> {
        let mut acc = self.zero();
        let bytes = text.as_bytes();
        let mut pos = 0;
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let read_int = |pos: &mut usize| -> Option<u64> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            text[start..*pos].parse().ok()
        };
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(err(0, "empty polynomial"));
        }
        let mut sign_neg = false;
        loop {
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'-' {
                sign_neg = !sign_neg;
                pos += 1;
                skip_ws(&mut pos);
            }
            // coefficient
            let mut coef = self.fq.one();
            let mut had_coef = false;
            if pos < bytes.len() && bytes[pos] == b'[' {
                let end = text[pos..].find(']').ok_or(err(pos, "unclosed `[`"))? + pos;
                coef = crate::skew::parse_elem(&text[pos..=end], &self.fq).map_err(|e| match e {
                    Error::Parse { pos: p2, msg } => Error::Parse { pos: pos + p2, msg },
                    other => other,
                })?;
                pos = end + 1;
                had_coef = true;
            } else if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                let start = pos;
                let c = read_int(&mut pos).ok_or(err(start, "bad integer"))?;
                coef = self.fq.from_int((c % self.fq.p() as u64) as i64);
                had_coef = true;
            }
            skip_ws(&mut pos);
            if had_coef && pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
                if pos >= bytes.len() || bytes[pos] != b'T' {
                    return Err(err(pos, "expected `T` after `*`"));
                }
            }
            let mut exp = 0u32;
            if pos < bytes.len() && bytes[pos] == b'T' {
                pos += 1;
                exp = 1;
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let start = pos;
                    exp = read_int(&mut pos).ok_or(err(start, "expected exponent"))? as u32;
                }
            } else if !had_coef {
                return Err(err(pos, "expected a term"));
            }
            if sign_neg {
                coef = self.fq.neg(&coef);
            }
            let mut term = vec![self.fq.zero(); exp as usize + 1];
            term[exp as usize] = coef;
            acc = self.add(&acc, &self.elem(term));
            skip_ws(&mut pos);
            sign_neg = false;
            match bytes.get(pos) {
                None => return Ok(acc),
                Some(b'+') => pos += 1,
                Some(b'-') => {}
                Some(_) => return Err(err(pos, "expected `+`, `-` or end of input")),
            }
        }
    }
}

/// Nonzero ideal of A, stored by its monic generator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BaseIdeal {
    generator: BaseElement,
}

impl BaseIdeal {
    pub fn generator(&self) -> &BaseElement {
        &self.generator
    }

    /// dim_{F_q} A / n.
    pub fn degree(&self) -> usize {
        self.generator.degree().unwrap_or(0)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.degree() == 0
    }
}

impl fmt::Display for BaseIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.generator.coeffs)
    }
}

/// kappa(p) = A / p with the reduction map.
#[derive(Clone, Debug)]
pub struct ResidueField {
    a: BaseRing,
    pub prime: BaseIdeal,
    pub field: FiniteField,
    /// Image of T.
    pub t_image: Elem,
}

impl ResidueField {
    pub fn reduce(&self, x: &BaseElement) -> Elem {
        self.a.eval(x, &self.field, &self.t_image)
    }
}

/// A/n as a product of prime-power quotients.
#[derive(Clone, Debug)]
pub struct CrtData {
    a: BaseRing,
    pub n: BaseIdeal,
    /// (prime, exponent, prime^exponent).
    pub parts: Vec<(BaseIdeal, u32, BaseElement)>,
    /// e_i = 1 mod part i, 0 mod the others.
    pub idempotents: Vec<BaseElement>,
}

impl CrtData {
    pub fn split(&self, x: &BaseElement) -> Vec<BaseElement> {
        self.parts.iter().map(|(_, _, m)| self.a.rem(x, m)).collect()
    }

    pub fn combine(&self, parts: &[BaseElement]) -> BaseElement {
        let sum = parts
            .iter()
            .zip(&self.idempotents)
            .fold(self.a.zero(), |acc, (x, e)| self.a.add(&acc, &self.a.mul(x, e)));
        self.a.rem(&sum, &self.n.generator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> BaseRing {
        BaseRing::over(2, 1).unwrap()
    }

    #[test]
    fn factor_examples() {
        let a = a2();
        let n = a.ideal(&a.parse("T^2+T").unwrap()).unwrap();
        let f = a.factor(&n);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0.generator(), &a.t());
        assert_eq!(f[1].0.generator(), &a.parse("T+1").unwrap());
        let n = a.ideal(&a.parse("T^2+T+1").unwrap()).unwrap();
        assert_eq!(a.factor(&n), vec![(n.clone(), 1)]);
        let n = a.ideal(&a.parse("T^3").unwrap()).unwrap();
        assert_eq!(a.factor(&n)[0].1, 3);
    }

    #[test]
    fn residue_field_examples() {
        let a = a2();
        let p = a.ideal(&a.parse("T^2+T+1").unwrap()).unwrap();
        let k = a.residue_field(&p).unwrap();
        assert_eq!(k.field.cardinality(), Some(4));
        assert_eq!(k.t_image, k.field.generator());
        let p = a.ideal(&a.t()).unwrap();
        let k = a.residue_field(&p).unwrap();
        assert!(k.field.is_zero(&k.t_image));
        assert!(a.residue_field(&a.ideal(&a.parse("T^2+1").unwrap()).unwrap()).is_err());
    }

    #[test]
    fn crt_round_trip() {
        let a = a2();
        let n = a.ideal(&a.parse("T^2+T").unwrap()).unwrap();
        let crt = a.module_crt(&n);
        for x in a.all_below(2) {
            assert_eq!(crt.combine(&crt.split(&x)), x);
        }
    }

    #[test]
    fn parse_and_display() {
        let a = BaseRing::over(3, 1).unwrap();
        let x = a.parse("2*T^2 + T - 1").unwrap();
        assert_eq!(a.display(&x), "2*T^2+T+2");
        assert!(matches!(a.parse("T^^2"), Err(Error::Parse { pos: 2, .. })));
        let a4 = BaseRing::over(2, 2).unwrap();
        let y = a4.parse("[0,1]*T+1").unwrap();
        assert_eq!(a4.parse(&a4.display(&y)).unwrap(), y);
    }
}
