//! Skew polynomials R{tau} with tau r = r^q tau.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::dual::{DualElem, DualRing};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg;
use crate::ring::CoeffRing;
use crate::upoly;

/// `sum x_i tau^i`, coefficients constant first, trailing zeros trimmed.
#[derive(Clone, PartialEq)]
pub struct SkewPolynomial<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> fmt::Debug for SkewPolynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Skew{:?}", self.coeffs)
    }
}

impl<R: CoeffRing> SkewPolynomial<R> {
    pub fn new(ring: &R, coeffs: Vec<R::Elem>) -> Self {
        SkewPolynomial {
            coeffs: upoly::trim(ring, coeffs),
            ring: ring.clone(),
        }
    }

    pub fn zero(ring: &R) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn one(ring: &R) -> Self {
        Self::constant(ring, ring.one())
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        Self::new(ring, vec![c])
    }

    /// `c tau^i`.
    pub fn monomial(ring: &R, c: R::Elem, i: usize) -> Self {
        let mut v = vec![ring.zero(); i + 1];
        v[i] = c;
        Self::new(ring, v)
    }

    pub fn tau(ring: &R) -> Self {
        Self::monomial(ring, ring.one(), 1)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// Coefficient of tau^i (zero past the end).
    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// tau-degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(
            &self.ring,
            upoly::add(&self.ring, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(
            &self.ring,
            upoly::sub(&self.ring, &self.coeffs, &other.coeffs),
        ))
    }

    /// Product using `(a tau^i)(b tau^j) = a b^(q^i) tau^(i+j)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let r = &self.ring;
        let mut out = vec![r.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if r.is_zero(b) {
                    continue;
                }
                let t = r.mul(a, &r.frob(b, i));
                out[i + j] = r.add(&out[i + j], &t);
            }
        }
        Ok(Self::new(r, out))
    }

    pub fn scale_left(&self, c: &R::Elem) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|x| self.ring.mul(c, x)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.ring), |acc, _| &acc * self)
    }

    /// Right division: `f = quotient * g + remainder`, `deg remainder < deg g`.
    pub fn right_divide(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g)?;
        let r = &self.ring;
        let n = g.degree().ok_or(Error::NonUnitLeading)?;
        let gn = &g.coeffs[n];
        if !r.is_unit(gn) {
            return Err(Error::NonUnitLeading);
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![r.zero(); rem.len().saturating_sub(n)];
        while rem.len() > n {
            let m = rem.len() - 1;
            let c = r
                .div(&rem[m], &r.frob(gn, m - n))
                .expect("frobenius of a unit is a unit");
            // subtract c tau^(m-n) g
            for (j, gj) in g.coeffs.iter().enumerate() {
                let t = r.mul(&c, &r.frob(gj, m - n));
                rem[m - n + j] = r.sub(&rem[m - n + j], &t);
            }
            debug_assert!(r.is_zero(&rem[m]));
            quot[m - n] = c;
            rem = upoly::trim(r, rem);
        }
        Ok((Self::new(r, quot), Self::new(r, rem)))
    }

    /// Left division: `f = g * quotient + remainder`, `deg remainder < deg g`.
    ///
    /// Needs q^n-th roots of the coefficients produced along the way.
    pub fn left_divide(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g)?;
        let r = &self.ring;
        let n = g.degree().ok_or(Error::NonUnitLeading)?;
        let gn_inv = r.inv(&g.coeffs[n]).ok_or(Error::NonUnitLeading)?;
        let mut rem = self.clone();
        let mut quot = vec![r.zero(); self.coeffs.len().saturating_sub(n)];
        while rem.coeffs.len() > n {
            let m = rem.coeffs.len() - 1;
            let target = r.mul(&rem.coeffs[m], &gn_inv);
            let c = r
                .frob_root(&target, n)
                .ok_or_else(|| Error::NoFrobeniusRoot(format!("{target:?}")))?;
            let step = g.try_mul(&Self::monomial(r, c.clone(), m - n))?;
            rem = rem.try_sub(&step)?;
            quot[m - n] = r.add(&quot[m - n], &c);
        }
        Ok((Self::new(r, quot), rem))
    }

    /// Index n of the highest unit coefficient, provided everything above is
    /// nilpotent. `None` when no coefficient is a unit.
    pub fn rank_index(&self) -> Option<usize> {
        let n = self.coeffs.iter().rposition(|c| self.ring.is_unit(c))?;
        self.coeffs[n + 1..]
            .iter()
            .all(|c| self.ring.is_nilpotent(c))
            .then_some(n)
    }

    /// `q^n` for the rank index n; `None` if the polynomial is not finite.
    pub fn rank(&self) -> Option<u64> {
        let n = self.rank_index()?;
        Some(self.ring.q().pow(n as u32))
    }

    /// Least index with a non-nilpotent coefficient.
    pub fn height(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_nilpotent(c))
    }

    pub fn derivative0(&self) -> R::Elem {
        self.coeff(0)
    }

    /// `sum x_i X^(q^i)` as a dense polynomial, constant term first.
    pub fn to_additive(&self) -> Vec<R::Elem> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        let q = self.ring.q() as usize;
        let mut out = vec![self.ring.zero(); q.pow(d as u32) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[q.pow(i as u32)] = c.clone();
        }
        upoly::trim(&self.ring, out)
    }

    /// Evaluate the additive polynomial at an element of the coefficient ring.
    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let r = &self.ring;
        let mut acc = r.zero();
        let mut xp = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = r.frob(&xp, 1);
            }
            if !r.is_zero(c) {
                acc = r.add(&acc, &r.mul(c, &xp));
            }
        }
        acc
    }

    pub fn map_coeffs<S: CoeffRing>(
        &self,
        target: &S,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem>,
    ) -> Result<SkewPolynomial<S>> {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(SkewPolynomial::new(target, coeffs))
    }
}

impl<R: CoeffRing> Add for &SkewPolynomial<R> {
    type Output = SkewPolynomial<R>;
    fn add(self, rhs: Self) -> SkewPolynomial<R> {
        self.try_add(rhs).expect("skew operands over the same ring")
    }
}

impl<R: CoeffRing> Sub for &SkewPolynomial<R> {
    type Output = SkewPolynomial<R>;
    fn sub(self, rhs: Self) -> SkewPolynomial<R> {
        self.try_sub(rhs).expect("skew operands over the same ring")
    }
}

impl<R: CoeffRing> Mul for &SkewPolynomial<R> {
    type Output = SkewPolynomial<R>;
    fn mul(self, rhs: Self) -> SkewPolynomial<R> {
        self.try_mul(rhs).expect("skew operands over the same ring")
    }
}

impl<R: CoeffRing> Neg for &SkewPolynomial<R> {
    type Output = SkewPolynomial<R>;
    fn neg(self) -> SkewPolynomial<R> {
        SkewPolynomial::new(&self.ring, self.coeffs.iter().map(|c| self.ring.neg(c)).collect())
    }
}

/// Conjugation into standard form: `sigma^-1 xi sigma` with no terms above
/// the rank index.
pub trait Standardize: Sized {
    fn standardize(&self) -> Result<(Self, Self)>;
}

impl Standardize for SkewPolynomial<FiniteField> {
    fn standardize(&self) -> Result<(Self, Self)> {
        self.rank_index().ok_or(Error::NotFinite)?;
        Ok((Self::one(&self.ring), self.clone()))
    }
}

impl SkewPolynomial<DualRing> {
    /// Inverse of `1 + N` with N having nilpotent coefficients: `1 - N`,
    /// since all products of two such terms vanish.
    pub fn unipotent_inverse(&self) -> Option<Self> {
        let r = &self.ring;
        let tail = self - &Self::one(r);
        if tail.coeffs.iter().any(|c| !r.is_nilpotent(c)) {
            return None;
        }
        let two = r.add(&r.one(), &r.one());
        let shifted = Self::constant(r, two);
        Some(&shifted - self)
    }

    pub fn reduce(&self) -> SkewPolynomial<FiniteField> {
        SkewPolynomial::new(self.ring.field(), self.coeffs.iter().map(|c| c.a.clone()).collect())
    }

    pub fn lift(ring: &DualRing, f: &SkewPolynomial<FiniteField>) -> Self {
        Self::new(ring, f.coeffs.iter().map(|c| ring.lift(c)).collect())
    }

    /// `sigma^-1 self sigma`.
    pub fn conjugate(&self, sigma: &Self) -> Option<Self> {
        let inv = sigma.unipotent_inverse()?;
        Some(&(&inv * self) * sigma)
    }
}

impl Standardize for SkewPolynomial<DualRing> {
    fn standardize(&self) -> Result<(Self, Self)> {
        let r = &self.ring;
        let f = r.field();
        let n = self.rank_index().ok_or(Error::NotFinite)?;
        let top = self.degree().unwrap_or(0);
        let a: Vec<Elem> = (0..=n).map(|i| self.coeff(i).a).collect();
        let b: Vec<Elem> = (0..=top).map(|i| self.coeff(i).b).collect();
        // sigma = 1 + eps sum_{j>=1} t_j tau^j. The eps-part of the
        // conjugate at degree d > n is
        //   b_d + (a_0 - a_0^(q^d)) t_d - sum_{i=1..n} a_i^(q^(d-i)) t_(d-i),
        // which is solved from the top degree down.
        let mut t = vec![f.zero(); top + 1];
        if n == 0 {
            // each t_d appears alone, with coefficient a_0 - a_0^(q^d)
            for d in 1..=top {
                if f.is_zero(&b[d]) {
                    continue;
                }
                let diag = f.sub(&a[0], &f.frobenius(&a[0], d));
                let Some(v) = f.div(&b[d], &diag) else {
                    return Err(Error::NotNormalizable(format!(
                        "constant term {} is fixed by the q^{d}-Frobenius but the tau^{d} coefficient is nonzero",
                        a[0]
                    )));
                };
                t[d] = f.neg(&v);
            }
        } else {
            for d in (n + 1..=top).rev() {
                let diag = f.sub(&a[0], &f.frobenius(&a[0], d));
                let mut rhs = f.add(&b[d], &f.mul(&diag, &t[d]));
                for i in 1..n {
                    rhs = f.sub(&rhs, &f.mul(&f.frobenius(&a[i], d - i), &t[d - i]));
                }
                let an = f.frobenius(&a[n], d - n);
                t[d - n] = f.div(&rhs, &an).expect("unit leading coefficient");
            }
        }
        let mut sigma_coeffs = vec![r.one()];
        sigma_coeffs.extend(t.iter().skip(1).map(|tj| r.make(f.zero(), tj.clone())));
        let sigma = Self::new(r, sigma_coeffs);
        let conj = self.conjugate(&sigma).expect("unipotent by construction");
        if conj.degree().unwrap_or(0) > n {
            return Err(Error::Invariant(format!(
                "standardize left terms above index {n}: {conj:?}"
            )));
        }
        Ok((sigma, conj))
    }
}

impl SkewPolynomial<FiniteField> {
    /// Evaluate at `x` in an extension `target` of the coefficient field.
    pub fn eval_in(&self, x: &Elem, target: &FiniteField) -> Result<Elem> {
        let embedded = self.base_change(target)?;
        Ok(embedded.eval(x))
    }

    /// Coefficients pushed into `target` along the declared tower.
    pub fn base_change(&self, target: &FiniteField) -> Result<Self> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        self.map_coeffs(target, |c| target.embed(c, &self.ring))
    }

    /// Coefficientwise q^k-Frobenius.
    pub fn frobenius_twist(&self, k: usize) -> Self {
        Self::new(
            &self.ring,
            self.coeffs.iter().map(|c| self.ring.frobenius(c, k)).collect(),
        )
    }

    /// An F_q-basis of `{x in target : f(x) = 0}`.
    pub fn kernel_basis(&self, target: &FiniteField) -> Result<Vec<Elem>> {
        let f = self.base_change(target)?;
        let p = target.p();
        let n = target.degree();
        if f.is_zero() {
            return Err(Error::InvalidKernel("zero polynomial has no finite kernel".into()));
        }
        // columns: images of the F_p-basis; rows of M are coordinates
        let images: Vec<Elem> = (0..n)
            .map(|i| {
                let mut v = vec![0u32; n];
                v[i] = 1;
                f.eval(&target.from_coeffs(&v).expect("basis vector"))
            })
            .collect();
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|r| images.iter().map(|img| img.coeffs()[r]).collect())
            .collect();
        let fp_kernel = linalg::fp_kernel(p, &rows, n);
        let kernel: Vec<Elem> = fp_kernel
            .iter()
            .map(|v| {
                target
                    .from_coeffs(&v.iter().map(|&c| c as u32).collect::<Vec<_>>())
                    .unwrap()
            })
            .collect();
        Ok(fq_basis(target, &kernel))
    }

    /// Least N with all roots of the separable part in F_(q^(kN)), where k is
    /// the degree of the coefficient field over F_q. Searches up to `cap`.
    pub fn splitting_multiplier(&self, cap: usize) -> Result<usize> {
        let h = self.height().ok_or(Error::InvalidKernel("zero polynomial".into()))?;
        let sep = Self::new(&self.ring, self.coeffs[h..].to_vec());
        if sep.degree() == Some(0) {
            return Ok(1);
        }
        let k = self.ring.ext_degree();
        let step = Self::monomial(&self.ring, self.ring.one(), k);
        let one = Self::one(&self.ring);
        let mut rem = one.clone();
        for nn in 1..=cap {
            rem = (&step * &rem).right_divide(&sep)?.1;
            if rem == one {
                return Ok(nn);
            }
        }
        Err(Error::SplittingCapExceeded { cap })
    }
}

/// A subset of `vectors` forming an F_q-basis of their F_q-span.
pub fn fq_basis(field: &FiniteField, vectors: &[Elem]) -> Vec<Elem> {
    let fq = field.base_field();
    let scalars: Vec<Elem> = if fq.degree() == 1 {
        vec![field.one()]
    } else {
        // F_p-basis of F_q inside `field`
        (0..fq.degree())
            .map(|i| {
                let mut v = vec![0u32; fq.degree()];
                v[i] = 1;
                field.from_base(&fq.from_coeffs(&v).unwrap())
            })
            .collect()
    };
    let mut span_rows: Vec<Vec<u8>> = Vec::new();
    let mut chosen = Vec::new();
    let p = field.p();
    for v in vectors {
        let mut trial = span_rows.clone();
        trial.push(v.coeffs().to_vec());
        let before = linalg::fp_rref(p, &mut span_rows.clone()).len();
        let after = linalg::fp_rref(p, &mut trial).len();
        if after > before {
            for s in &scalars {
                span_rows.push(field.mul(s, v).coeffs().to_vec());
            }
            chosen.push(v.clone());
        }
    }
    chosen
}

/// All F_q-linear combinations of `basis` (q^len elements), encoding order.
pub fn fq_span(field: &FiniteField, basis: &[Elem]) -> Vec<Elem> {
    let fq = field.base_field();
    let scalars: Vec<Elem> = (0..fq.q() as u128)
        .map(|i| field.from_base(&fq.from_index(i)))
        .collect();
    let mut out = vec![field.zero()];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * scalars.len());
        for x in &out {
            for c in &scalars {
                next.push(field.add(x, &field.mul(c, b)));
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Text forms: elements as `[c0,c1,..]` or a bare prime-field integer,
// skew polynomials as `[x0,x1,..]`, dual numbers as `(a|b)`.

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer out of range"))
    }

    fn elem(&mut self, field: &FiniteField) -> Result<Elem> {
        self.ws();
        let start = self.pos;
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let mut cs = Vec::new();
            if self.peek() != Some(b']') {
                loop {
                    cs.push(self.int()?);
                    if self.peek() == Some(b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(b']')?;
            field.from_coeffs(&cs).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: start + pos, msg },
                other => other,
            })
        } else {
            let c = self.int()?;
            if c >= field.p() {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("constant {c} not reduced modulo {}", field.p()),
                });
            }
            Ok(field.from_u8(c as u8))
        }
    }

    fn dual(&mut self, ring: &DualRing) -> Result<DualElem> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let a = self.elem(ring.field())?;
            self.expect(b'|')?;
            let b = self.elem(ring.field())?;
            self.expect(b')')?;
            Ok(ring.make(a, b))
        } else {
            Ok(ring.lift(&self.elem(ring.field())?))
        }
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.err("expected `,` or `]`"),
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }
}

pub fn parse_elem(text: &str, field: &FiniteField) -> Result<Elem> {
    let mut p = Parser::new(text);
    let e = p.elem(field)?;
    p.finish()?;
    Ok(e)
}

pub fn parse_elem_list(text: &str, field: &FiniteField) -> Result<Vec<Elem>> {
    let mut p = Parser::new(text);
    let v = p.list(|p| p.elem(field))?;
    p.finish()?;
    Ok(v)
}

pub fn parse_skew(text: &str, field: &FiniteField) -> Result<SkewPolynomial<FiniteField>> {
    Ok(SkewPolynomial::new(field, parse_elem_list(text, field)?))
}

pub fn parse_skew_dual(text: &str, ring: &DualRing) -> Result<SkewPolynomial<DualRing>> {
    let mut p = Parser::new(text);
    let v = p.list(|p| p.dual(ring))?;
    p.finish()?;
    Ok(SkewPolynomial::new(ring, v))
}
