//! Dense univariate polynomials over a [`CoeffRing`], stored constant term
//! first with trailing zeros trimmed.

use crate::ring::CoeffRing;

pub fn trim<R: CoeffRing>(ring: &R, mut f: Vec<R::Elem>) -> Vec<R::Elem> {
    while f.last().is_some_and(|c| ring.is_zero(c)) {
        f.pop();
    }
    f
}

/// Degree, `None` for the zero polynomial. Assumes trimmed input.
pub fn degree<T>(f: &[T]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn add<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let n = f.len().max(g.len());
    let zero = ring.zero();
    let out = (0..n)
        .map(|i| ring.add(f.get(i).unwrap_or(&zero), g.get(i).unwrap_or(&zero)))
        .collect();
    trim(ring, out)
}

pub fn sub<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let n = f.len().max(g.len());
    let zero = ring.zero();
    let out = (0..n)
        .map(|i| ring.sub(f.get(i).unwrap_or(&zero), g.get(i).unwrap_or(&zero)))
        .collect();
    trim(ring, out)
}

pub fn scale<R: CoeffRing>(ring: &R, f: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
    trim(ring, f.iter().map(|x| ring.mul(x, c)).collect())
}

pub fn mul<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if ring.is_zero(a) {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            let t = ring.mul(a, b);
            out[i + j] = ring.add(&out[i + j], &t);
        }
    }
    trim(ring, out)
}

/// Division with remainder by a polynomial whose leading coefficient is a unit.
pub fn div_rem<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Option<(Vec<R::Elem>, Vec<R::Elem>)> {
    let dg = degree(g)?;
    let lead_inv = ring.inv(&g[dg])?;
    let mut rem: Vec<R::Elem> = f.to_vec();
    if rem.len() <= dg {
        return Some((Vec::new(), trim(ring, rem)));
    }
    let mut quot = vec![ring.zero(); rem.len() - dg];
    for i in (dg..rem.len()).rev() {
        let c = ring.mul(&rem[i], &lead_inv);
        if ring.is_zero(&c) {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            let t = ring.mul(&c, gj);
            rem[i - dg + j] = ring.sub(&rem[i - dg + j], &t);
        }
        quot[i - dg] = c;
    }
    rem.truncate(dg);
    Some((trim(ring, quot), trim(ring, rem)))
}

pub fn rem<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Option<Vec<R::Elem>> {
    div_rem(ring, f, g).map(|(_, r)| r)
}

pub fn monic<R: CoeffRing>(ring: &R, f: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let lead = f.last()?;
    let inv = ring.inv(lead)?;
    Some(scale(ring, f, &inv))
}

/// Monic gcd over a field.
pub fn gcd<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let mut a = trim(ring, f.to_vec());
    let mut b = trim(ring, g.to_vec());
    while !b.is_empty() {
        let r = rem(ring, &a, &b).expect("field coefficients are units");
        a = b;
        b = r;
    }
    monic(ring, &a).unwrap_or_default()
}

pub fn eval<R: CoeffRing>(ring: &R, f: &[R::Elem], x: &R::Elem) -> R::Elem {
    f.iter()
        .rev()
        .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

/// `prod (X - r)` over the given roots.
pub fn from_roots<R: CoeffRing>(ring: &R, roots: &[R::Elem]) -> Vec<R::Elem> {
    roots
        .iter()
        .fold(vec![ring.one()], |acc, r| mul(ring, &acc, &[ring.neg(r), ring.one()]))
}

pub fn mul_mod<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem], modulus: &[R::Elem]) -> Vec<R::Elem> {
    rem(ring, &mul(ring, f, g), modulus).expect("monic modulus")
}

/// Apply the coefficientwise q-Frobenius and substitute `X -> X^q`, i.e.
/// raise `f` to the q-th power, then reduce.
pub fn frob_mod<R: CoeffRing>(ring: &R, f: &[R::Elem], modulus: &[R::Elem]) -> Vec<R::Elem> {
    if f.is_empty() {
        return Vec::new();
    }
    let q = ring.q() as usize;
    let mut out = vec![ring.zero(); (f.len() - 1) * q + 1];
    for (i, c) in f.iter().enumerate() {
        out[i * q] = ring.frob(c, 1);
    }
    rem(ring, &trim(ring, out), modulus).expect("monic modulus")
}
