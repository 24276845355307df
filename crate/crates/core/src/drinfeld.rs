//! Drinfeld modules phi: A -> K{tau} in standard form.

use crate::base::{BaseElement, BaseIdeal, BaseRing};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, FqSpace, Matrix};
use crate::ring::CoeffRing;
use crate::skew::{self, SkewPolynomial};
use crate::upoly;

/// Default cap on [L : K] when growing splitting fields.
pub const DEFAULT_SPLITTING_CAP: usize = 256;

/// `phi_T = gamma(T) + a_1 tau + ... + a_r tau^r`, `a_r` a unit.
#[derive(Clone, PartialEq, Debug)]
pub struct DrinfeldModule<R: CoeffRing = FiniteField> {
    a: BaseRing,
    ring: R,
    gamma_t: R::Elem,
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> DrinfeldModule<R> {
    pub fn new(a: &BaseRing, ring: &R, gamma_t: R::Elem, coeffs: Vec<R::Elem>) -> Result<Self> {
        if ring.q() != a.q() {
            return Err(Error::InvalidModule(format!(
                "coefficient ring has q = {}, A has q = {}",
                ring.q(),
                a.q()
            )));
        }
        match coeffs.last() {
            None => return Err(Error::InvalidModule("rank must be at least 1".into())),
            Some(top) if !ring.is_unit(top) => {
                return Err(Error::InvalidModule("top coefficient a_r is not a unit".into()))
            }
            _ => {}
        }
        Ok(DrinfeldModule {
            a: a.clone(),
            ring: ring.clone(),
            gamma_t,
            coeffs,
        })
    }

    pub fn base(&self) -> &BaseRing {
        &self.a
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn gamma_t(&self) -> &R::Elem {
        &self.gamma_t
    }

    /// (a_1, ..., a_r).
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn phi_t(&self) -> SkewPolynomial<R> {
        let mut c = vec![self.gamma_t.clone()];
        c.extend(self.coeffs.iter().cloned());
        SkewPolynomial::new(&self.ring, c)
    }

    /// `phi_a` by Horner's rule in `phi_T`.
    pub fn phi(&self, a: &BaseElement) -> SkewPolynomial<R> {
        let phi_t = self.phi_t();
        a.coeffs()
            .iter()
            .rev()
            .fold(SkewPolynomial::zero(&self.ring), |acc, c| {
                let c = SkewPolynomial::constant(&self.ring, self.ring.from_base(c));
                &(&acc * &phi_t) + &c
            })
    }

    /// `gamma(a)`.
    pub fn gamma(&self, a: &BaseElement) -> R::Elem {
        self.a.eval(a, &self.ring, &self.gamma_t)
    }

    /// `phi_a` for the monic generator of n.
    pub fn torsion_polynomial(&self, n: &BaseIdeal) -> SkewPolynomial<R> {
        self.phi(n.generator())
    }
}

/// E[n](L) with its A/n-module structure.
#[derive(Clone, Debug)]
pub struct TorsionModule {
    pub ideal: BaseIdeal,
    pub field: FiniteField,
    /// F_q-basis of E[n](L).
    pub basis: Vec<Elem>,
    /// Matrix over F_q of phi_T on the basis (column j = phi_T(b_j)).
    pub t_action: Matrix,
    /// For each prime dividing n, the exponents e with A/prime^e a summand.
    pub elementary_divisors: Vec<(BaseIdeal, Vec<u32>)>,
}

impl TorsionModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `q^dim`.
    pub fn point_count(&self, q: u64) -> u128 {
        (q as u128).pow(self.dim() as u32)
    }

    /// All points of E[n](L), in encoding order.
    pub fn points(&self) -> Vec<Elem> {
        skew::fq_span(&self.field, &self.basis)
    }

    pub fn space(&self) -> FqSpace {
        FqSpace::new(&self.field, self.basis.clone())
    }

    /// Number of cyclic summands A/prime^e with e >= 1 for the given prime.
    pub fn rank_at(&self, prime: &BaseIdeal) -> usize {
        self.elementary_divisors
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, es)| es.len())
    }
}

impl DrinfeldModule<FiniteField> {
    pub fn field(&self) -> &FiniteField {
        &self.ring
    }

    /// The characteristic: minimal polynomial of gamma(T) over F_q.
    pub fn characteristic(&self) -> BaseIdeal {
        let g = self.a.minimal_polynomial(&self.ring, &self.gamma_t);
        self.a.ideal(&g).expect("minimal polynomial is nonzero")
    }

    /// Least extension of K containing E[n](closure).
    pub fn splitting_field(&self, n: &BaseIdeal, cap: usize) -> Result<FiniteField> {
        let f = self.torsion_polynomial(n);
        let mult = f.splitting_multiplier(cap)?;
        self.ring.extension(mult)
    }

    /// F_q-dimension of E[n] over an algebraic closure.
    pub fn torsion_dimension(&self, n: &BaseIdeal) -> usize {
        let f = self.torsion_polynomial(n);
        f.degree().unwrap_or(0) - f.height().unwrap_or(0)
    }

    pub fn torsion_structure(&self, n: &BaseIdeal, l: &FiniteField) -> Result<TorsionModule> {
        let f = self.torsion_polynomial(n);
        let basis = f.kernel_basis(l)?;
        let expected = self.torsion_dimension(n);
        if basis.len() < expected {
            return Err(Error::ExtensionTooSmall {
                found: basis.len(),
                expected,
            });
        }
        let phi_t = self.phi_t().base_change(l)?;
        let space = FqSpace::new(l, basis.clone());
        let t_action = space
            .matrix_of(|x| phi_t.eval(x))
            .ok_or_else(|| Error::Invariant("torsion is not stable under phi_T".into()))?;
        let elementary_divisors = elementary_divisors(&self.a, n, &t_action);
        Ok(TorsionModule {
            ideal: n.clone(),
            field: l.clone(),
            basis,
            t_action,
            elementary_divisors,
        })
    }

    /// Splitting field with the default cap, then the torsion structure.
    pub fn torsion(&self, n: &BaseIdeal) -> Result<TorsionModule> {
        let l = self.splitting_field(n, DEFAULT_SPLITTING_CAP)?;
        self.torsion_structure(n, &l)
    }

    /// `h = r - hgt(phi_pi) / m` at the characteristic pi of degree m.
    pub fn height_at_characteristic(&self) -> Result<usize> {
        let p = self.characteristic();
        let m = p.degree();
        if m == 0 {
            return Err(Error::GenericCharacteristic);
        }
        let hgt = self
            .phi(p.generator())
            .height()
            .ok_or_else(|| Error::Invariant("phi_pi is zero".into()))?;
        if hgt % m != 0 || hgt / m > self.rank() || hgt == 0 {
            return Err(Error::Invariant(format!(
                "height {hgt} of phi_pi is not a positive multiple of deg p = {m}"
            )));
        }
        Ok(self.rank() - hgt / m)
    }

    pub fn is_supersingular(&self) -> Result<bool> {
        Ok(self.height_at_characteristic()? == 0)
    }

    fn require_rank2(&self) -> Result<()> {
        if self.rank() == 2 {
            Ok(())
        } else {
            Err(Error::WrongRank {
                expected: 2,
                got: self.rank(),
            })
        }
    }

    /// `a_1^(q+1) / a_2`.
    pub fn j_invariant(&self) -> Result<Elem> {
        self.require_rank2()?;
        let f = &self.ring;
        let q = f.q() as u128;
        Ok(f.div(&f.pow(&self.coeffs[0], q + 1), &self.coeffs[1])
            .expect("a_2 is a unit"))
    }

    /// `u phi u^-1`: coefficients `u^(1 - q^i) a_i`.
    pub fn conjugate_by(&self, u: &Elem) -> Result<Self> {
        let f = &self.ring;
        let ui = f
            .inv(u)
            .ok_or_else(|| Error::InvalidModule("conjugation by zero".into()))?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f.mul(&f.mul(u, c), &f.frobenius(&ui, i + 1)))
            .collect();
        Self::new(&self.a, f, self.gamma_t.clone(), coeffs)
    }

    /// Scalars `u` in `l` with `u phi u^-1 = other`, in encoding order.
    pub fn isomorphisms(&self, other: &Self, l: &FiniteField) -> Result<Vec<Elem>> {
        if self.rank() != other.rank() {
            return Ok(Vec::new());
        }
        let e = self.base_change(l)?;
        let o = other.base_change(l)?;
        if e.gamma_t != o.gamma_t {
            return Ok(Vec::new());
        }
        let Some(i) = e.coeffs.iter().position(|c| !l.is_zero(c)) else {
            return Ok(Vec::new());
        };
        if l.is_zero(&o.coeffs[i]) {
            return Ok(Vec::new());
        }
        // u^(q^(i+1) - 1) = a_i / b_i
        let exp = (l.q() as usize).pow(i as u32 + 1) - 1;
        let ratio = l.div(&e.coeffs[i], &o.coeffs[i]).unwrap();
        let mut poly = vec![l.zero(); exp + 1];
        poly[0] = l.neg(&ratio);
        poly[exp] = l.one();
        let mut out = Vec::new();
        for u in l.roots(&poly) {
            if e.conjugate_by(&u)?.coeffs == o.coeffs {
                out.push(u);
            }
        }
        Ok(out)
    }

    /// Some isomorphism over `l`, the least in encoding order.
    pub fn are_isomorphic(&self, other: &Self, l: &FiniteField) -> Result<Option<Elem>> {
        Ok(self.isomorphisms(other, l)?.into_iter().next())
    }

    /// gamma(T) and every a_i raised to the q^k power.
    pub fn frobenius_twist(&self, k: usize) -> Self {
        let f = &self.ring;
        DrinfeldModule {
            a: self.a.clone(),
            ring: f.clone(),
            gamma_t: f.frobenius(&self.gamma_t, k),
            coeffs: self.coeffs.iter().map(|c| f.frobenius(c, k)).collect(),
        }
    }

    pub fn base_change(&self, l: &FiniteField) -> Result<Self> {
        if &self.ring == l {
            return Ok(self.clone());
        }
        let src = &self.ring;
        Ok(DrinfeldModule {
            a: self.a.clone(),
            ring: l.clone(),
            gamma_t: l.embed(&self.gamma_t, src)?,
            coeffs: self.coeffs.iter().map(|c| l.embed(c, src)).collect::<Result<_>>()?,
        })
    }
}

/// Exponents of the cyclic summands of an A/n-module given by the F_q-matrix
/// of T, computed from `dim ker pi(M)^j`.
pub fn elementary_divisors(a: &BaseRing, n: &BaseIdeal, t: &Matrix) -> Vec<(BaseIdeal, Vec<u32>)> {
    let fq = a.fq();
    let d = t.len();
    let mut out = Vec::new();
    for (prime, mult) in a.factor(n) {
        let m = prime.degree();
        let pi_m = eval_matrix(a, prime.generator(), t);
        let mut power = linalg::identity(fq, d);
        let mut kernel_dims = vec![0usize];
        for _ in 0..mult {
            power = linalg::mat_mul(fq, &power, &pi_m);
            kernel_dims.push(d - linalg::rank(fq, &power));
        }
        // number of summands of exponent >= j is (k_j - k_{j-1}) / m
        let at_least: Vec<usize> = (1..kernel_dims.len())
            .map(|j| (kernel_dims[j] - kernel_dims[j - 1]) / m)
            .collect();
        let mut exps = Vec::new();
        for (j, &c) in at_least.iter().enumerate() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..c - next {
                exps.push(j as u32 + 1);
            }
        }
        exps.sort_unstable_by(|x, y| y.cmp(x));
        if !exps.is_empty() {
            out.push((prime, exps));
        }
    }
    out
}

/// `f(M)` for a polynomial f over F_q.
pub fn eval_matrix(a: &BaseRing, f: &BaseElement, m: &Matrix) -> Matrix {
    let fq = a.fq();
    let d = m.len();
    f.coeffs()
        .iter()
        .rev()
        .fold((0..d).map(|_| vec![fq.zero(); d]).collect::<Matrix>(), |acc, c| {
            let mut next = linalg::mat_mul(fq, &acc, m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] = fq.add(&row[i], c);
            }
            next
        })
}

/// Roots of the additive polynomial of `f` in `l` by direct enumeration
/// (for cross-checks).
pub fn brute_force_kernel(f: &SkewPolynomial<FiniteField>, l: &FiniteField, budget: u64) -> Result<Vec<Elem>> {
    let g = f.base_change(l)?;
    Ok(l.elements(budget)?
        .into_iter()
        .filter(|x| l.is_zero(&g.eval(x)))
        .collect())
}

/// Roots via the dense additive polynomial and root finding in `l`.
pub fn additive_roots(f: &SkewPolynomial<FiniteField>, l: &FiniteField) -> Result<Vec<Elem>> {
    let g = f.base_change(l)?;
    let dense = g.to_additive();
    Ok(l.roots(&upoly::trim(l, dense)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_t_squared_rank1() {
        let a = BaseRing::over(2, 1).unwrap();
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let w = f4.generator();
        let e = DrinfeldModule::new(&a, &f4, w.clone(), vec![f4.one()]).unwrap();
        let t2 = e.phi(&a.parse("T^2").unwrap());
        assert_eq!(t2.coeffs(), &[f4.mul(&w, &w), f4.one(), f4.one()]);
        assert_eq!(e.phi(&a.one()), SkewPolynomial::one(&f4));
        assert!(e.phi(&a.zero()).is_zero());
    }

    #[test]
    fn torsion_examples() {
        let a = BaseRing::over(2, 1).unwrap();
        let f2 = FiniteField::new(2, 1, None).unwrap();
        let e = DrinfeldModule::new(&a, &f2, f2.zero(), vec![f2.one(), f2.one()]).unwrap();
        let t = a.ideal(&a.t()).unwrap();
        let tors = e.torsion(&t).unwrap();
        assert_eq!(tors.points().len(), 2);
        assert_eq!(tors.elementary_divisors, vec![(t.clone(), vec![1])]);
        assert_eq!(e.height_at_characteristic().unwrap(), 1);
        let t1 = a.ideal(&a.parse("T+1").unwrap()).unwrap();
        let tors = e.torsion(&t1).unwrap();
        assert_eq!(tors.points().len(), 4);
        assert_eq!(tors.elementary_divisors, vec![(t1, vec![1, 1])]);
        let ss = DrinfeldModule::new(&a, &f2, f2.zero(), vec![f2.zero(), f2.one()]).unwrap();
        assert_eq!(ss.torsion(&t).unwrap().dim(), 0);
        assert_eq!(ss.height_at_characteristic().unwrap(), 0);
        assert_eq!(ss.j_invariant().unwrap(), f2.zero());
        assert_eq!(e.j_invariant().unwrap(), f2.one());
    }

    #[test]
    fn isomorphism_examples() {
        let a = BaseRing::over(2, 1).unwrap();
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let e = DrinfeldModule::new(&a, &f4, f4.zero(), vec![f4.one(), f4.one()]).unwrap();
        for u in f4.elements(4).unwrap().into_iter().skip(1) {
            let c = e.conjugate_by(&u).unwrap();
            assert_eq!(c.j_invariant().unwrap(), f4.one());
            assert!(e.isomorphisms(&c, &f4).unwrap().contains(&u));
        }
        let ss = DrinfeldModule::new(&a, &f4, f4.zero(), vec![f4.zero(), f4.one()]).unwrap();
        let f16 = f4.extension(2).unwrap();
        assert!(e.are_isomorphic(&ss, &f16).unwrap().is_none());
    }
}
