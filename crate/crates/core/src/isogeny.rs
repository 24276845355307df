//! Kernel polynomials, quotients by finite submodules and isogenies.

use std::collections::BTreeSet;

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::skew::SkewPolynomial;
use crate::upoly;

/// A finite A-submodule of E over a field L: its reduced points plus a
/// local part of order q^e concentrated at 0.
#[derive(Clone, PartialEq, Debug)]
pub struct KernelSubgroup {
    pub field: FiniteField,
    /// Points of the reduced part, sorted, including 0.
    pub points: Vec<Elem>,
    pub local_exponent: usize,
}

impl KernelSubgroup {
    pub fn new(field: &FiniteField, points: Vec<Elem>, local_exponent: usize) -> Self {
        let mut pts: Vec<Elem> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if !pts.contains(&field.zero()) {
            pts.insert(0, field.zero());
        }
        pts.sort();
        KernelSubgroup {
            field: field.clone(),
            points: pts,
            local_exponent,
        }
    }

    pub fn trivial(field: &FiniteField) -> Self {
        Self::new(field, vec![field.zero()], 0)
    }

    /// The purely local subgroup of order q^e.
    pub fn local(field: &FiniteField, e: usize) -> Self {
        Self::new(field, vec![field.zero()], e)
    }

    /// `|H| = |H_et| q^e`.
    pub fn order(&self) -> u128 {
        self.points.len() as u128 * (self.field.q() as u128).pow(self.local_exponent as u32)
    }

    /// Closed under addition and F_q-scaling.
    pub fn check_group(&self) -> Result<()> {
        let f = &self.field;
        let set: BTreeSet<&Elem> = self.points.iter().collect();
        for x in &self.points {
            for y in &self.points {
                if !set.contains(&f.add(x, y)) {
                    return Err(Error::InvalidKernel(format!("{x} + {y} is missing")));
                }
            }
        }
        let fq = f.base_field();
        for c in fq.elements(fq.q())? {
            let c = f.from_base(&c);
            for x in &self.points {
                if !set.contains(&f.mul(&c, x)) {
                    return Err(Error::InvalidKernel(format!("{x} is not F_q-stable")));
                }
            }
        }
        Ok(())
    }

    /// Stable under `phi_T` of a module over the same field.
    pub fn check_stable(&self, e: &DrinfeldModule) -> Result<()> {
        let phi_t = e.phi_t();
        let set: BTreeSet<&Elem> = self.points.iter().collect();
        for x in &self.points {
            if !set.contains(&phi_t.eval(x)) {
                return Err(Error::InvalidKernel(format!("phi_T({x}) leaves the subgroup")));
            }
        }
        Ok(())
    }
}

/// `tau^e * P` with `P(X) = prod_{x in H_et} (X - x)`, as a skew polynomial
/// over the subgroup's field.
pub fn kernel_polynomial(h: &KernelSubgroup) -> Result<SkewPolynomial<FiniteField>> {
    h.check_group()?;
    let f = &h.field;
    let dense = upoly::from_roots(f, &h.points);
    let q = f.q() as usize;
    let mut skew = Vec::new();
    for (i, c) in dense.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        // only exponents q^j may occur
        let mut e = 0;
        let mut pw = 1;
        while pw < i {
            pw *= q;
            e += 1;
        }
        if pw != i {
            return Err(Error::InvalidKernel(format!(
                "prod (X - x) has a monomial X^{i} that is not a q-power"
            )));
        }
        if skew.len() <= e {
            skew.resize(e + 1, f.zero());
        }
        skew[e] = c.clone();
    }
    let p = SkewPolynomial::new(f, skew);
    let local = SkewPolynomial::monomial(f, f.one(), h.local_exponent);
    Ok(&local * &p)
}

/// `xi : E -> F` with `xi phi_T = psi_T xi`.
#[derive(Clone, PartialEq, Debug)]
pub struct Isogeny {
    pub source: DrinfeldModule,
    pub target: DrinfeldModule,
    pub xi: SkewPolynomial<FiniteField>,
}

impl Isogeny {
    pub fn identity(e: &DrinfeldModule) -> Self {
        Isogeny {
            source: e.clone(),
            target: e.clone(),
            xi: SkewPolynomial::one(e.field()),
        }
    }

    /// `q^(deg xi)`.
    pub fn degree(&self) -> u64 {
        self.xi.rank().unwrap_or(0)
    }

    /// Commuting condition on T, equal ranks, xi nonzero.
    pub fn verify(&self) -> bool {
        !self.xi.is_zero()
            && self.source.rank() == self.target.rank()
            && self.source.gamma_t() == self.target.gamma_t()
            && &self.xi * &self.source.phi_t() == &self.target.phi_t() * &self.xi
    }

    /// `self ∘ f`.
    pub fn compose_after(&self, f: &Isogeny) -> Result<Isogeny> {
        compose(self, f)
    }

    /// Points of the kernel over `l`.
    pub fn kernel_points(&self, l: &FiniteField) -> Result<Vec<Elem>> {
        let basis = self.xi.kernel_basis(l)?;
        Ok(crate::skew::fq_span(l, &basis))
    }
}

pub fn verify_isogeny(f: &Isogeny) -> bool {
    f.verify()
}

/// `g ∘ f`, requiring `target(f) = source(g)`.
pub fn compose(g: &Isogeny, f: &Isogeny) -> Result<Isogeny> {
    if f.target != g.source {
        return Err(Error::EndpointMismatch);
    }
    Ok(Isogeny {
        source: f.source.clone(),
        target: g.target.clone(),
        xi: &g.xi * &f.xi,
    })
}

/// `E -> E/H`, with E base-changed to the field of H.
pub fn quotient_by(e: &DrinfeldModule, h: &KernelSubgroup) -> Result<(DrinfeldModule, Isogeny)> {
    let l = &h.field;
    let e = e.base_change(l)?;
    h.check_stable(&e)?;
    let xi = kernel_polynomial(h)?;
    let height = xi.height().expect("kernel polynomial is nonzero");
    let g = e.gamma_t();
    if l.frobenius(g, height) != *g {
        return Err(Error::HeightCondition(format!(
            "gamma(T) = {g} is not fixed by the q^{height}-Frobenius"
        )));
    }
    let (psi_t, rem) = (&xi * &e.phi_t()).right_divide(&xi)?;
    if !rem.is_zero() {
        return Err(Error::Invariant(format!(
            "xi phi_T is not right-divisible by xi (remainder {rem:?})"
        )));
    }
    if psi_t.derivative0() != *g || psi_t.degree() != Some(e.rank()) {
        return Err(Error::Invariant(format!(
            "quotient phi_T {psi_t:?} is not of rank {}",
            e.rank()
        )));
    }
    let target = DrinfeldModule::new(e.base(), l, g.clone(), psi_t.coeffs()[1..].to_vec())?;
    let iso = Isogeny {
        source: e,
        target: target.clone(),
        xi,
    };
    Ok((target, iso))
}

/// `tau^m : E -> E^(q^m)` with m the degree of the characteristic.
pub fn frobenius_isogeny(e: &DrinfeldModule) -> Result<Isogeny> {
    let m = e.characteristic().degree();
    if m == 0 {
        return Err(Error::GenericCharacteristic);
    }
    Ok(Isogeny {
        source: e.clone(),
        target: e.frobenius_twist(m),
        xi: SkewPolynomial::monomial(e.field(), e.field().one(), m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseRing;

    fn setup() -> (BaseRing, FiniteField) {
        (BaseRing::over(2, 1).unwrap(), FiniteField::new(2, 1, None).unwrap())
    }

    #[test]
    fn kernel_polynomial_examples() {
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let h = KernelSubgroup::new(&f4, vec![f4.zero(), f4.one()], 0);
        let xi = kernel_polynomial(&h).unwrap();
        assert_eq!(xi.coeffs(), &[f4.one(), f4.one()]);
        assert_eq!(
            kernel_polynomial(&KernelSubgroup::trivial(&f4)).unwrap(),
            SkewPolynomial::one(&f4)
        );
        assert_eq!(
            kernel_polynomial(&KernelSubgroup::local(&f4, 2)).unwrap(),
            SkewPolynomial::monomial(&f4, f4.one(), 2)
        );
        let bad = KernelSubgroup::new(&f4, vec![f4.one()], 0);
        assert!(kernel_polynomial(&bad).is_ok());
        // over q = 4, {0, w} is not F_q-stable
        let fq4 = FiniteField::base(2, 2).unwrap();
        let bad = KernelSubgroup::new(&fq4, vec![fq4.generator()], 0);
        assert!(matches!(kernel_polynomial(&bad), Err(Error::InvalidKernel(_))));
    }

    #[test]
    fn quotient_examples() {
        let (a, f2) = setup();
        let ss = DrinfeldModule::new(&a, &f2, f2.zero(), vec![f2.zero(), f2.one()]).unwrap();
        let (t, iso) = quotient_by(&ss, &KernelSubgroup::local(&f2, 1)).unwrap();
        assert_eq!(t, ss);
        assert!(iso.verify());
        let e = DrinfeldModule::new(&a, &f2, f2.zero(), vec![f2.one(), f2.one()]).unwrap();
        let h = KernelSubgroup::new(&f2, vec![f2.zero(), f2.one()], 0);
        let (t, iso) = quotient_by(&e, &h).unwrap();
        assert_eq!(t.rank(), 2);
        assert!(iso.verify());
        assert_eq!(iso.xi.coeffs(), &[f2.one(), f2.one()]);
        let (t, iso) = quotient_by(&e, &KernelSubgroup::trivial(&f2)).unwrap();
        assert_eq!(t, e);
        assert_eq!(iso.xi, SkewPolynomial::one(&f2));
    }

    #[test]
    fn frobenius_isogeny_example() {
        let a = BaseRing::over(2, 1).unwrap();
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let w = f4.generator();
        let e = DrinfeldModule::new(&a, &f4, f4.zero(), vec![w.clone(), f4.one()]).unwrap();
        let fr = frobenius_isogeny(&e).unwrap();
        assert_eq!(fr.target.coeffs()[0], f4.mul(&w, &w));
        assert!(fr.verify());
        let fr2 = frobenius_isogeny(&fr.target).unwrap();
        let both = compose(&fr2, &fr).unwrap();
        assert_eq!(both.degree(), 4);
        assert!(both.verify());
        assert!(compose(&fr, &fr).is_err());
    }

    #[test]
    fn height_condition_rejects() {
        let a = BaseRing::over(2, 1).unwrap();
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let e = DrinfeldModule::new(&a, &f4, f4.generator(), vec![f4.one(), f4.one()]).unwrap();
        assert!(matches!(
            quotient_by(&e, &KernelSubgroup::local(&f4, 1)),
            Err(Error::HeightCondition(_))
        ));
    }
}
