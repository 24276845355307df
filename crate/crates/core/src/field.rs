//! Finite fields F_{p^(e k)} as quotients F_p[X]/(m(X)), with declared
//! embeddings along towers.
//!
//! A field records the base constant field F_q (q = p^e) it is built over
//! and, optionally, a parent field together with the image of the parent's
//! generator. Embedding from any ancestor follows that chain.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ring::CoeffRing;
use crate::upoly;

type Coeffs = SmallVec<[u8; 16]>;

/// Element of a finite field: coefficient vector over F_p of fixed length
/// `[F:F_p]`, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem(Coeffs);

impl Elem {
    pub fn coeffs(&self) -> &[u8] {
        &self.0
    }
}

// Order by the integer encoding sum c_i p^i, i.e. highest coefficient first.
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Textual field description, `p=2 deg=2 mod=[1,1,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub degree: usize,
    pub modulus: Vec<u32>,
}

struct FieldInner {
    p: u32,
    e: usize,
    k: usize,
    modulus: Vec<u8>,
    frob_p: Vec<Coeffs>,
    frob_q: Vec<Coeffs>,
    parent: Option<(FiniteField, Elem)>,
    tables: OnceLock<Option<Tables>>,
}

/// Log/exp and q-Frobenius tables for fields with at most
/// [`TABLE_LIMIT`] elements, indexed by element encoding.
struct Tables {
    log: Vec<u16>,
    exp: Vec<u16>,
    frob: Vec<u16>,
}

const TABLE_LIMIT: u128 = 256;

/// A finite field descriptor. Cheap to clone.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldInner>);

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{} (q={}^{}, mod={:?})",
            self.0.p,
            self.degree(),
            self.0.p,
            self.0.e,
            self.0.modulus
        )
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.e == other.0.e
                && self.0.k == other.0.k
                && self.0.modulus == other.0.modulus
                && self.0.parent == other.0.parent)
    }
}

impl Eq for FiniteField {}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

// ---------------------------------------------------------------------------
// Polynomials over F_p with u8 coefficients (modulus search and inversion).

fn fp_trim(mut f: Vec<u8>) -> Vec<u8> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn fp_mul(p: u32, f: &[u8], g: &[u8]) -> Vec<u8> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            acc[i + j] += a as u32 * b as u32;
            if acc[i + j] >= 1 << 30 {
                acc[i + j] %= p;
            }
        }
    }
    fp_trim(acc.into_iter().map(|c| (c % p) as u8).collect())
}

fn fp_inv_scalar(p: u32, a: u8) -> u8 {
    let mut r = 1u32;
    let mut b = a as u32;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r as u8
}

fn fp_divrem(p: u32, f: &[u8], g: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let dg = g.len() - 1;
    let inv = fp_inv_scalar(p, g[dg]) as u32;
    let mut r: Vec<u32> = f.iter().map(|&c| c as u32).collect();
    if r.len() <= dg {
        return (Vec::new(), fp_trim(f.to_vec()));
    }
    let mut quot = vec![0u8; r.len() - dg];
    for i in (dg..r.len()).rev() {
        let c = r[i] % p * inv % p;
        if c == 0 {
            continue;
        }
        quot[i - dg] = c as u8;
        for (j, &gj) in g.iter().enumerate() {
            r[i - dg + j] = (r[i - dg + j] + (p - c) * gj as u32) % p;
        }
    }
    r.truncate(dg);
    (fp_trim(quot), fp_trim(r.into_iter().map(|c| (c % p) as u8).collect()))
}

fn fp_sub(p: u32, f: &[u8], g: &[u8]) -> Vec<u8> {
    let n = f.len().max(g.len());
    fp_trim(
        (0..n)
            .map(|i| {
                let a = *f.get(i).unwrap_or(&0) as u32;
                let b = *g.get(i).unwrap_or(&0) as u32;
                ((a + p - b) % p) as u8
            })
            .collect(),
    )
}

fn fp_gcd(p: u32, f: &[u8], g: &[u8]) -> Vec<u8> {
    let mut a = fp_trim(f.to_vec());
    let mut b = fp_trim(g.to_vec());
    while !b.is_empty() {
        let (_, r) = fp_divrem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn fp_pow_mod(p: u32, base: &[u8], mut exp: u64, m: &[u8]) -> Vec<u8> {
    let mut acc = vec![1u8];
    let mut b = fp_divrem(p, base, m).1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_divrem(p, &fp_mul(p, &acc, &b), m).1;
        }
        b = fp_divrem(p, &fp_mul(p, &b, &b), m).1;
        exp >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test for a monic polynomial over F_p.
pub(crate) fn fp_is_irreducible(p: u32, f: &[u8]) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0u8, 1];
    let mut h = x.clone();
    for _ in 0..n / 2 {
        h = fp_pow_mod(p, &h, p as u64, f);
        let g = fp_gcd(p, f, &fp_sub(p, &h, &x));
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn modulus_cache() -> &'static Mutex<HashMap<(u32, usize), Vec<u8>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Vec<u8>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Smallest monic irreducible polynomial of the given degree over F_p, in
/// the order of the integer encoding `sum c_i p^i` of its lower coefficients.
pub fn least_irreducible(p: u32, degree: usize) -> Vec<u8> {
    if let Some(m) = modulus_cache().lock().unwrap().get(&(p, degree)) {
        return m.clone();
    }
    let mut lower = vec![0u8; degree];
    let found = loop {
        let mut cand = lower.clone();
        cand.push(1);
        if fp_is_irreducible(p, &cand) {
            break cand;
        }
        // increment the base-p counter, constant term least significant
        let mut i = 0;
        loop {
            lower[i] += 1;
            if (lower[i] as u32) < p {
                break;
            }
            lower[i] = 0;
            i += 1;
        }
    };
    modulus_cache().lock().unwrap().insert((p, degree), found.clone());
    found
}

// ---------------------------------------------------------------------------

impl FiniteField {
    fn build(p: u32, e: usize, k: usize, modulus: Vec<u8>, parent: Option<(FiniteField, Elem)>) -> Self {
        let n = modulus.len() - 1;
        let mut inner = FieldInner {
            p,
            e,
            k,
            modulus,
            frob_p: Vec::new(),
            frob_q: Vec::new(),
            parent,
            tables: OnceLock::new(),
        };
        // rows[i] = (X^i)^p
        let xp = fp_pow_mod(p, &[0, 1], p as u64, &inner.modulus);
        let mut rows = Vec::with_capacity(n);
        let mut cur = vec![1u8];
        for _ in 0..n {
            rows.push(pad(&cur, n));
            cur = fp_divrem(p, &fp_mul(p, &cur, &xp), &inner.modulus).1;
        }
        inner.frob_p = rows;
        let mut fq = FiniteField(Arc::new(inner));
        let q_rows: Vec<Coeffs> = (0..n)
            .map(|i| {
                let mut x = fq.basis_vector(i);
                for _ in 0..e {
                    x = fq.frob_p(&x);
                }
                x.0
            })
            .collect();
        Arc::get_mut(&mut fq.0).expect("unique").frob_q = q_rows;
        fq
    }

    /// Prime-field based construction: F_{p^degree} over F_p.
    ///
    /// Without a modulus, the least irreducible polynomial is chosen.
    pub fn new(p: u32, degree: usize, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) || p > 251 {
            return Err(Error::NotPrime(p));
        }
        let m = checked_modulus(p, degree, modulus)?;
        Ok(Self::build(p, 1, degree, m, None))
    }

    /// The constant field F_q with q = p^e.
    pub fn base(p: u32, e: usize) -> Result<Self> {
        if !is_prime(p) || p > 251 {
            return Err(Error::NotPrime(p));
        }
        let m = checked_modulus(p, e, None)?;
        Ok(Self::build(p, e, 1, m, None))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::new(spec.p, spec.degree, Some(&spec.modulus))
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            degree: self.degree(),
            modulus: self.0.modulus.iter().map(|&c| c as u32).collect(),
        }
    }

    /// Extension of degree `k` over `self`, with the least irreducible modulus
    /// over F_p and the embedding of `self` declared.
    pub fn extension(&self, k: usize) -> Result<Self> {
        if k == 1 {
            return Ok(self.clone());
        }
        let n = self.degree() * k;
        let m = least_irreducible(self.0.p, n);
        self.extension_with_modulus(k, &m.iter().map(|&c| c as u32).collect::<Vec<_>>())
    }

    /// Extension with an explicit modulus over F_p of degree `[self:F_p] * k`.
    pub fn extension_with_modulus(&self, k: usize, modulus: &[u32]) -> Result<Self> {
        let n = self.degree() * k;
        let m = checked_modulus(self.0.p, n, Some(modulus))?;
        // provisional field without parent, used to locate the generator image
        let bare = Self::build(self.0.p, 1, n, m.clone(), None);
        let src_mod: Vec<Elem> = self.0.modulus.iter().map(|&c| bare.from_u8(c)).collect();
        let roots = bare.roots(&src_mod);
        let image = roots.into_iter().next().ok_or(Error::NoEmbedding)?;
        Ok(Self::build(
            self.0.p,
            self.0.e,
            self.0.k * k,
            m,
            Some((self.clone(), image)),
        ))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// e with q = p^e.
    pub fn base_degree(&self) -> usize {
        self.0.e
    }

    /// Degree over F_q.
    pub fn ext_degree(&self) -> usize {
        self.0.k
    }

    /// Degree over F_p.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    pub fn parent(&self) -> Option<&(FiniteField, Elem)> {
        self.0.parent.as_ref()
    }

    /// `p^degree`, if it fits into a u128.
    pub fn cardinality(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.degree() as u32)
    }

    pub fn zero(&self) -> Elem {
        Elem(SmallVec::from_elem(0, self.degree()))
    }

    pub fn one(&self) -> Elem {
        self.from_u8(1)
    }

    pub fn from_u8(&self, c: u8) -> Elem {
        let mut v = self.zero();
        if !v.0.is_empty() {
            v.0[0] = (c as u32 % self.0.p) as u8;
        }
        v
    }

    pub fn from_int(&self, c: i64) -> Elem {
        self.from_u8(c.rem_euclid(self.0.p as i64) as u8)
    }

    /// The class of X, which generates the field over F_p.
    pub fn generator(&self) -> Elem {
        if self.degree() == 1 {
            // F_p[X]/(X + c): X = -c
            return self.from_int(-(self.0.modulus[0] as i64));
        }
        self.basis_vector(1)
    }

    fn basis_vector(&self, i: usize) -> Elem {
        let mut v = self.zero();
        v.0[i] = 1;
        v
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.degree() {
            return Err(Error::Parse {
                pos: 0,
                msg: format!(
                    "element has {} coefficients, field degree is {}",
                    coeffs.len(),
                    self.degree()
                ),
            });
        }
        let mut v = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.0.p {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("coefficient {c} is not reduced modulo {}", self.0.p),
                });
            }
            v.0[i] = c as u8;
        }
        Ok(v)
    }

    /// Element with integer encoding `sum c_i p^i = index`.
    pub fn from_index(&self, mut index: u128) -> Elem {
        let mut v = self.zero();
        for c in v.0.iter_mut() {
            *c = (index % self.0.p as u128) as u8;
            index /= self.0.p as u128;
        }
        v
    }

    pub fn index_of(&self, x: &Elem) -> u128 {
        x.0.iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.0.p as u128 + c as u128)
    }

    /// All elements in encoding order, if there are at most `budget`.
    pub fn elements(&self, budget: u64) -> Result<Vec<Elem>> {
        match self.cardinality() {
            Some(c) if c <= budget as u128 => Ok((0..c).map(|i| self.from_index(i)).collect()),
            _ => Err(Error::BudgetExceeded {
                p: self.0.p,
                degree: self.degree(),
                budget,
            }),
        }
    }

    pub fn random<G: Rng>(&self, rng: &mut G) -> Elem {
        let mut v = self.zero();
        for c in v.0.iter_mut() {
            *c = rng.gen_range(0..self.0.p) as u8;
        }
        v
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        let p = self.0.p as u8;
        let mut out = x.0.clone();
        if p == 2 {
            for (a, &b) in out.iter_mut().zip(y.0.iter()) {
                *a ^= b;
            }
        } else {
            for (a, &b) in out.iter_mut().zip(y.0.iter()) {
                let t = *a as u16 + b as u16;
                *a = if t >= p as u16 { (t - p as u16) as u8 } else { t as u8 };
            }
        }
        Elem(out)
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        let p = self.0.p as u8;
        let mut out = x.0.clone();
        if p == 2 {
            for (a, &b) in out.iter_mut().zip(y.0.iter()) {
                *a ^= b;
            }
        } else {
            for (a, &b) in out.iter_mut().zip(y.0.iter()) {
                *a = if *a >= b {
                    *a - b
                } else {
                    (*a as u16 + p as u16 - b as u16) as u8
                };
            }
        }
        Elem(out)
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        let p = self.0.p as u16;
        Elem(x.0.iter().map(|&a| ((p - a as u16) % p) as u8).collect())
    }

    pub fn scalar_mul(&self, c: u8, x: &Elem) -> Elem {
        let p = self.0.p as u16;
        Elem(x.0.iter().map(|&a| (a as u16 * c as u16 % p) as u8).collect())
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        if let Some(t) = self.tables() {
            let (i, j) = (self.small_index(x), self.small_index(y));
            if i == 0 || j == 0 {
                return self.zero();
            }
            let order = t.exp.len();
            let l = (t.log[i] as usize + t.log[j] as usize) % order;
            return self.from_small(t.exp[l] as usize);
        }
        self.mul_schoolbook(x, y)
    }

    fn mul_schoolbook(&self, x: &Elem, y: &Elem) -> Elem {
        let n = self.degree();
        let p = self.0.p;
        if p == 2 {
            return self.mul_gf2(x, y);
        }
        let mut acc: SmallVec<[u32; 32]> = SmallVec::from_elem(0, 2 * n - 1);
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                acc[i + j] += a as u32 * b as u32;
            }
        }
        let m = &self.0.modulus;
        for i in (n..acc.len()).rev() {
            let c = acc[i] % p;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for j in 0..n {
                acc[i - n + j] = (acc[i - n + j] + neg * m[j] as u32) % p;
            }
        }
        Elem(acc[..n].iter().map(|&c| (c % p) as u8).collect())
    }

    fn mul_gf2(&self, x: &Elem, y: &Elem) -> Elem {
        let n = self.degree();
        let mut acc: SmallVec<[u8; 32]> = SmallVec::from_elem(0, 2 * n - 1);
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                acc[i + j] ^= b;
            }
        }
        let m = &self.0.modulus;
        for i in (n..acc.len()).rev() {
            if acc[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc[i - n + j] ^= m[j];
            }
        }
        Elem(acc[..n].iter().copied().collect())
    }

    fn from_small(&self, mut index: usize) -> Elem {
        let p = self.0.p as usize;
        let n = self.degree();
        let mut v: Coeffs = SmallVec::with_capacity(n);
        if p == 2 {
            for i in 0..n {
                v.push(((index >> i) & 1) as u8);
            }
        } else {
            for _ in 0..n {
                v.push((index % p) as u8);
                index /= p;
            }
        }
        Elem(v)
    }

    fn small_index(&self, x: &Elem) -> usize {
        let p = self.0.p as usize;
        x.0.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize)
    }

    fn tables(&self) -> Option<&Tables> {
        self.0
            .tables
            .get_or_init(|| {
                let size = self.cardinality().filter(|&c| c <= TABLE_LIMIT)? as usize;
                let order = size - 1;
                // least generator of the multiplicative group
                let pows = (1..size).find_map(|gi| {
                    let g = self.from_index(gi as u128);
                    let mut pows = Vec::with_capacity(order);
                    let mut x = self.one();
                    for _ in 0..order {
                        pows.push(self.small_index(&x) as u16);
                        x = self.mul_schoolbook(&x, &g);
                        if self.small_index(&x) == 1 && pows.len() < order {
                            return None;
                        }
                    }
                    Some(pows)
                })?;
                let mut log = vec![0u16; size];
                for (l, &i) in pows.iter().enumerate() {
                    log[i as usize] = l as u16;
                }
                let frob = (0..size)
                    .map(|i| self.small_index(&self.apply(&self.0.frob_q, &self.from_index(i as u128))) as u16)
                    .collect();
                Some(Tables { log, exp: pows, frob })
            })
            .as_ref()
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn inv(&self, x: &Elem) -> Option<Elem> {
        if self.is_zero(x) {
            return None;
        }
        if let Some(t) = self.tables() {
            let order = t.exp.len();
            let l = (order - t.log[self.small_index(x)] as usize) % order;
            return Some(self.from_small(t.exp[l] as usize));
        }
        let p = self.0.p;
        // extended Euclid on (x, modulus)
        let mut r0 = self.0.modulus.clone();
        let mut r1 = fp_trim(x.0.to_vec());
        let mut s0: Vec<u8> = Vec::new();
        let mut s1: Vec<u8> = vec![1];
        while r1.len() > 1 {
            let (qt, r) = fp_divrem(p, &r0, &r1);
            let s = fp_sub(p, &s0, &fp_mul(p, &qt, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let c = fp_inv_scalar(p, r1[0]);
        let s: Vec<u8> = s1.iter().map(|&a| (a as u32 * c as u32 % p) as u8).collect();
        Some(Elem(pad(&fp_divrem(p, &s, &self.0.modulus).1, self.degree())))
    }

    pub fn div(&self, x: &Elem, y: &Elem) -> Option<Elem> {
        self.inv(y).map(|yi| self.mul(x, &yi))
    }

    pub fn pow(&self, x: &Elem, mut exp: u128) -> Elem {
        let mut base = x.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    fn apply(&self, rows: &[Coeffs], x: &Elem) -> Elem {
        let p = self.0.p;
        let n = self.degree();
        let mut acc: SmallVec<[u32; 32]> = SmallVec::from_elem(0, n);
        for (i, &c) in x.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, &r) in acc.iter_mut().zip(rows[i].iter()) {
                *a += c as u32 * r as u32;
            }
        }
        Elem(acc.into_iter().map(|a| (a % p) as u8).collect())
    }

    /// `x^p`.
    pub fn frob_p(&self, x: &Elem) -> Elem {
        self.apply(&self.0.frob_p, x)
    }

    /// `x^(q^iterations)`, q the base cardinality.
    pub fn frobenius(&self, x: &Elem, iterations: usize) -> Elem {
        let t = iterations % self.0.k;
        if t == 0 {
            return x.clone();
        }
        if let Some(tab) = self.tables() {
            let mut i = self.small_index(x);
            for _ in 0..t {
                i = tab.frob[i] as usize;
            }
            return self.from_small(i);
        }
        let mut y = x.clone();
        for _ in 0..t {
            y = self.apply(&self.0.frob_q, &y);
        }
        y
    }

    /// Number of elements in the constant field F_q.
    pub fn q(&self) -> u64 {
        (self.0.p as u64).pow(self.0.e as u32)
    }

    /// The constant field F_q, as a standalone field.
    pub fn base_field(&self) -> FiniteField {
        if self.0.e == 1 {
            return FiniteField::new(self.0.p, 1, None).expect("prime field");
        }
        let mut f = self.clone();
        while let Some((parent, _)) = f.parent() {
            f = parent.clone();
        }
        debug_assert_eq!(f.0.k, 1);
        f
    }

    /// Image of an element of F_q.
    pub fn from_base(&self, c: &Elem) -> Elem {
        if self.0.e == 1 {
            return self.from_u8(c.0[0]);
        }
        self.embed(c, &self.base_field())
            .expect("F_q is the root of every tower")
    }

    /// The element of F_q mapping to `x`, if `x` lies in the constant field.
    pub fn to_base(&self, x: &Elem) -> Option<Elem> {
        let fq = self.base_field();
        if self.0.e == 1 {
            return (x.0[1..].iter().all(|&c| c == 0)).then(|| fq.from_u8(x.0[0]));
        }
        let q = fq.q();
        (0..q as u128)
            .map(|i| fq.from_index(i))
            .find(|c| self.from_base(c) == *x)
    }

    /// Whether a declared embedding from `source` into `self` exists.
    pub fn has_subfield(&self, source: &FiniteField) -> bool {
        let mut f = Some(self);
        while let Some(cur) = f {
            if cur == source {
                return true;
            }
            f = cur.parent().map(|(p, _)| p);
        }
        source.degree() == 1 && source.0.p == self.0.p
    }

    /// Image of `x` (an element of `source`) along the declared tower.
    pub fn embed(&self, x: &Elem, source: &FiniteField) -> Result<Elem> {
        if source == self {
            return Ok(x.clone());
        }
        if !self.degree().is_multiple_of(source.degree()) {
            return Err(Error::DegreeMismatch {
                source_degree: source.degree(),
                target_degree: self.degree(),
            });
        }
        if source.degree() == 1 && source.0.p == self.0.p && source.0.e == 1 {
            return Ok(self.from_u8(x.0[0]));
        }
        let (parent, image) = self.parent().ok_or(Error::NoEmbedding)?;
        let y = parent.embed(x, source)?;
        // y = sum y_i g^i with g the parent generator; g maps to `image`
        let gen_img = if parent.degree() == 1 {
            self.from_u8(parent.generator().0[0])
        } else {
            image.clone()
        };
        Ok(y.0.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, &gen_img), &self.from_u8(c))
        }))
    }

    /// Roots in `self` of a polynomial with coefficients in `self`,
    /// sorted in encoding order, without multiplicity.
    pub fn roots(&self, f: &[Elem]) -> Vec<Elem> {
        let f = upoly::trim(self, f.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        let f = upoly::monic(self, &f).expect("nonzero lead");
        // g = gcd(f, X^|F| - X)
        let x = vec![self.zero(), self.one()];
        let mut h = upoly::rem(self, &x, &f).unwrap();
        for _ in 0..self.0.k {
            h = upoly::frob_mod(self, &h, &f);
        }
        let g = upoly::gcd(self, &f, &upoly::sub(self, &h, &x));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        self.split_roots(g, &mut rng, &mut out);
        out.sort();
        out
    }

    fn split_roots(&self, g: Vec<Elem>, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) {
        match g.len() {
            0 | 1 => {}
            2 => out.push(self.neg(&g[0])),
            _ => {
                let fq = self.base_field();
                loop {
                    // trace map Tr(delta X) mod g takes F_q values on the roots
                    let delta = self.random(rng);
                    let dx = vec![self.zero(), delta];
                    let mut term = upoly::rem(self, &dx, &g).unwrap();
                    let mut tr = term.clone();
                    for _ in 1..self.0.k {
                        term = upoly::frob_mod(self, &term, &g);
                        tr = upoly::add(self, &tr, &term);
                    }
                    let mut parts = Vec::new();
                    let mut rest = g.clone();
                    for c in 0..fq.q() as u128 {
                        let cc = self.from_base(&fq.from_index(c));
                        let shifted = upoly::sub(self, &tr, &[cc]);
                        let d = upoly::gcd(self, &rest, &shifted);
                        if d.len() > 1 {
                            rest = upoly::div_rem(self, &rest, &d).unwrap().0;
                            parts.push(d);
                        }
                    }
                    if parts.len() > 1 {
                        for part in parts {
                            self.split_roots(part, rng, out);
                        }
                        return;
                    }
                }
            }
        }
    }
}

fn pad(v: &[u8], n: usize) -> Coeffs {
    let mut out: Coeffs = SmallVec::from_elem(0, n);
    out[..v.len().min(n)].copy_from_slice(&v[..v.len().min(n)]);
    out
}

fn checked_modulus(p: u32, degree: usize, modulus: Option<&[u32]>) -> Result<Vec<u8>> {
    if degree == 0 {
        return Err(Error::BadModulus {
            expected: 0,
            got: modulus.map(|m| m.to_vec()).unwrap_or_default(),
        });
    }
    match modulus {
        None => Ok(least_irreducible(p, degree)),
        Some(m) => {
            if m.len() != degree + 1 || m[degree] != 1 || m.iter().any(|&c| c >= p) {
                return Err(Error::BadModulus {
                    expected: degree,
                    got: m.to_vec(),
                });
            }
            let mm: Vec<u8> = m.iter().map(|&c| c as u8).collect();
            if !fp_is_irreducible(p, &mm) {
                return Err(Error::ReducibleModulus(m.to_vec()));
            }
            Ok(mm)
        }
    }
}

/// Parse `p=2 deg=2 mod=[1,1,1]`; the modulus part is optional.
pub fn parse_field_spec(text: &str) -> Result<FiniteField> {
    let mut p = None;
    let mut deg = None;
    let mut modulus = None;
    let mut pos = 0;
    for tok in text.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or(Error::Parse {
            pos,
            msg: format!("expected key=value, got `{tok}`"),
        })?;
        let bad = |msg: String| Error::Parse { pos, msg };
        match key {
            "p" => p = Some(val.parse::<u32>().map_err(|e| bad(e.to_string()))?),
            "deg" => deg = Some(val.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "mod" => modulus = Some(parse_u32_list(val).map_err(&bad)?),
            _ => return Err(bad(format!("unknown key `{key}`"))),
        }
        pos += tok.len() + 1;
    }
    let p = p.ok_or(Error::Parse {
        pos: 0,
        msg: "missing p".into(),
    })?;
    let deg = deg.unwrap_or(1);
    FiniteField::new(p, deg, modulus.as_deref())
}

pub(crate) fn parse_u32_list(text: &str) -> std::result::Result<Vec<u32>, String> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("expected a bracketed list, got `{text}`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

impl CoeffRing for FiniteField {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        FiniteField::zero(self)
    }
    fn one(&self) -> Elem {
        FiniteField::one(self)
    }
    fn add(&self, x: &Elem, y: &Elem) -> Elem {
        FiniteField::add(self, x, y)
    }
    fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        FiniteField::sub(self, x, y)
    }
    fn neg(&self, x: &Elem) -> Elem {
        FiniteField::neg(self, x)
    }
    fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        FiniteField::mul(self, x, y)
    }
    fn is_zero(&self, x: &Elem) -> bool {
        FiniteField::is_zero(self, x)
    }
    fn is_unit(&self, x: &Elem) -> bool {
        !self.is_zero(x)
    }
    fn is_nilpotent(&self, x: &Elem) -> bool {
        self.is_zero(x)
    }
    fn inv(&self, x: &Elem) -> Option<Elem> {
        FiniteField::inv(self, x)
    }
    fn frob(&self, x: &Elem, i: usize) -> Elem {
        self.frobenius(x, i)
    }
    fn frob_root(&self, x: &Elem, i: usize) -> Option<Elem> {
        let k = self.0.k;
        Some(self.frobenius(x, (k - i % k) % k))
    }
    fn q(&self) -> u64 {
        FiniteField::q(self)
    }
    fn base_field(&self) -> FiniteField {
        FiniteField::base_field(self)
    }
    fn from_base(&self, c: &Elem) -> Elem {
        FiniteField::from_base(self, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(p: u32, f: &[u8]) -> bool {
        // trial division by every monic polynomial of degree 1..=deg/2
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut t = idx;
                for _ in 0..d {
                    g.push((t % p as u64) as u8);
                    t /= p as u64;
                }
                g.push(1);
                if fp_divrem(p, f, &g).1.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for &p in &[2u32, 3, 5] {
            for n in 1..=5usize {
                let total = (p as u64).pow(n as u32);
                for idx in 0..total.min(800) {
                    let mut f = Vec::new();
                    let mut t = idx;
                    for _ in 0..n {
                        f.push((t % p as u64) as u8);
                        t /= p as u64;
                    }
                    f.push(1);
                    assert_eq!(fp_is_irreducible(p, &f), brute_irreducible(p, &f), "{p} {f:?}");
                }
            }
        }
    }

    #[test]
    fn prime_field_and_f4() {
        let f2 = FiniteField::new(2, 1, None).unwrap();
        assert_eq!(f2.elements(10).unwrap().len(), 2);
        let f4 = FiniteField::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let w = f4.generator();
        let w2 = f4.mul(&w, &w);
        assert_eq!(w2, f4.add(&w, &f4.one()));
        let els = f4.elements(10).unwrap();
        assert_eq!(els, vec![f4.zero(), f4.one(), w.clone(), f4.add(&w, &f4.one())]);
    }

    #[test]
    fn f9_uses_least_irreducible_quadratic() {
        // enumerate monic quadratics over F_3 by encoding, pick the first without roots
        let mut expected = None;
        'outer: for idx in 0..9u32 {
            let (c0, c1) = (idx % 3, idx / 3);
            for x in 0..3u32 {
                if (x * x + c1 * x + c0) % 3 == 0 {
                    continue 'outer;
                }
            }
            expected = Some(vec![c0, c1, 1]);
            break;
        }
        let f9 = FiniteField::new(3, 2, None).unwrap();
        assert_eq!(f9.spec().modulus, expected.unwrap());
        let els = f9.elements(100).unwrap();
        let set: std::collections::BTreeSet<_> = els.iter().cloned().collect();
        assert_eq!(set.len(), 9);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(
            FiniteField::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            FiniteField::new(2, 3, Some(&[1, 1, 1])),
            Err(Error::BadModulus { .. })
        ));
        assert!(matches!(FiniteField::new(4, 1, None), Err(Error::NotPrime(4))));
    }

    #[test]
    fn frobenius_examples() {
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let w = f4.generator();
        assert_eq!(f4.frobenius(&w, 1), f4.add(&w, &f4.one()));
        assert_eq!(f4.frobenius(&w, 0), w);
        assert_eq!(f4.frobenius(&w, 2), w);
    }

    #[test]
    fn frobenius_uses_q_not_p() {
        // F_16 over q = 4: frobenius(x, 1) = x^4
        let f4 = FiniteField::base(2, 2).unwrap();
        let f16 = f4.extension(2).unwrap();
        assert_eq!(f16.q(), 4);
        for x in f16.elements(16).unwrap() {
            assert_eq!(f16.frobenius(&x, 1), f16.pow(&x, 4));
        }
        // fixed points of x -> x^4 are exactly the image of F_4
        let fixed: Vec<_> = f16
            .elements(16)
            .unwrap()
            .into_iter()
            .filter(|x| f16.frobenius(x, 1) == *x)
            .collect();
        assert_eq!(fixed.len(), 4);
        for c in f4.elements(4).unwrap() {
            assert!(fixed.contains(&f16.from_base(&c)));
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, d) in [(2u32, 3usize), (3, 2), (2, 4), (5, 2), (2, 6)] {
            let f = FiniteField::new(p, d, None).unwrap();
            let els = f.elements(64).unwrap();
            for x in &els {
                assert_eq!(f.pow(x, f.cardinality().unwrap()), *x);
                if !f.is_zero(x) {
                    assert_eq!(f.mul(x, &f.inv(x).unwrap()), f.one());
                }
                for y in &els {
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(f.sub(&f.add(x, y), y), *x);
                    // frobenius is additive and multiplicative
                    assert_eq!(f.frob_p(&f.add(x, y)), f.add(&f.frob_p(x), &f.frob_p(y)));
                    assert_eq!(f.frob_p(&f.mul(x, y)), f.mul(&f.frob_p(x), &f.frob_p(y)));
                }
            }
            let fixed = els.iter().filter(|x| f.frobenius(x, 1) == **x).count();
            assert_eq!(fixed as u64, f.q());
        }
    }

    #[test]
    fn tower_embeddings() {
        let f2 = FiniteField::new(2, 1, None).unwrap();
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let f16 = f4.extension(2).unwrap();
        assert_eq!(f4.embed(&f2.one(), &f2).unwrap(), f4.one());
        let w = f4.generator();
        let img = f16.embed(&w, &f4).unwrap();
        let check = f16.add(&f16.add(&f16.mul(&img, &img), &img), &f16.one());
        assert!(f16.is_zero(&check));
        // embedding respects frobenius and arithmetic
        let f256 = f16.extension(2).unwrap();
        for x in f4.elements(4).unwrap() {
            let direct = f256.embed(&x, &f4).unwrap();
            let via = f256.embed(&f16.embed(&x, &f4).unwrap(), &f16).unwrap();
            assert_eq!(direct, via);
            assert_eq!(
                f16.embed(&f4.frobenius(&x, 1), &f4).unwrap(),
                f16.frobenius(&f16.embed(&x, &f4).unwrap(), 1)
            );
            for y in f4.elements(4).unwrap() {
                assert_eq!(
                    f16.embed(&f4.mul(&x, &y), &f4).unwrap(),
                    f16.mul(&f16.embed(&x, &f4).unwrap(), &f16.embed(&y, &f4).unwrap())
                );
            }
        }
        let f8 = FiniteField::new(2, 3, None).unwrap();
        assert!(matches!(f16.embed(&f8.one(), &f8), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn roots_match_enumeration() {
        let f = FiniteField::new(3, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let poly: Vec<Elem> = (0..4).map(|_| f.random(&mut rng)).chain([f.one()]).collect();
            let brute: Vec<Elem> = f
                .elements(27)
                .unwrap()
                .into_iter()
                .filter(|x| f.is_zero(&upoly::eval(&f, &poly, x)))
                .collect();
            assert_eq!(f.roots(&poly), brute);
        }
    }

    #[test]
    fn spec_text_round_trip() {
        let f = parse_field_spec("p=2 deg=2 mod=[1,1,1]").unwrap();
        assert_eq!(
            f.spec(),
            FieldSpec {
                p: 2,
                degree: 2,
                modulus: vec![1, 1, 1]
            }
        );
        assert!(parse_field_spec("p=2 deg=2 mod=[1,0,1]").is_err());
    }
}
