//! Dual numbers F[eps] / (eps^2) over a finite field.

use crate::field::{Elem, FiniteField};
use crate::ring::CoeffRing;

/// `a + b eps`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DualElem {
    pub a: Elem,
    pub b: Elem,
}

#[derive(Clone, PartialEq, Debug)]
pub struct DualRing {
    field: FiniteField,
}

impl DualRing {
    pub fn new(field: FiniteField) -> Self {
        DualRing { field }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn make(&self, a: Elem, b: Elem) -> DualElem {
        DualElem { a, b }
    }

    /// `a + 0 eps`.
    pub fn lift(&self, a: &Elem) -> DualElem {
        DualElem {
            a: a.clone(),
            b: self.field.zero(),
        }
    }

    pub fn eps(&self) -> DualElem {
        DualElem {
            a: self.field.zero(),
            b: self.field.one(),
        }
    }

    /// Reduction modulo eps.
    pub fn reduce(&self, x: &DualElem) -> Elem {
        x.a.clone()
    }
}

impl CoeffRing for DualRing {
    type Elem = DualElem;

    fn zero(&self) -> DualElem {
        self.lift(&self.field.zero())
    }
    fn one(&self) -> DualElem {
        self.lift(&self.field.one())
    }
    fn add(&self, x: &DualElem, y: &DualElem) -> DualElem {
        DualElem {
            a: self.field.add(&x.a, &y.a),
            b: self.field.add(&x.b, &y.b),
        }
    }
    fn sub(&self, x: &DualElem, y: &DualElem) -> DualElem {
        DualElem {
            a: self.field.sub(&x.a, &y.a),
            b: self.field.sub(&x.b, &y.b),
        }
    }
    fn neg(&self, x: &DualElem) -> DualElem {
        DualElem {
            a: self.field.neg(&x.a),
            b: self.field.neg(&x.b),
        }
    }
    fn mul(&self, x: &DualElem, y: &DualElem) -> DualElem {
        let f = &self.field;
        let b = match (f.is_zero(&x.b), f.is_zero(&y.b)) {
            (true, true) => f.zero(),
            (true, false) => f.mul(&x.a, &y.b),
            (false, true) => f.mul(&x.b, &y.a),
            (false, false) => f.add(&f.mul(&x.a, &y.b), &f.mul(&x.b, &y.a)),
        };
        DualElem {
            a: f.mul(&x.a, &y.a),
            b,
        }
    }
    fn is_zero(&self, x: &DualElem) -> bool {
        self.field.is_zero(&x.a) && self.field.is_zero(&x.b)
    }
    fn is_unit(&self, x: &DualElem) -> bool {
        !self.field.is_zero(&x.a)
    }
    fn is_nilpotent(&self, x: &DualElem) -> bool {
        self.field.is_zero(&x.a)
    }
    fn inv(&self, x: &DualElem) -> Option<DualElem> {
        // (a + b eps)^-1 = a^-1 - b a^-2 eps
        let f = &self.field;
        let ai = f.inv(&x.a)?;
        Some(DualElem {
            b: f.neg(&f.mul(&x.b, &f.mul(&ai, &ai))),
            a: ai,
        })
    }
    fn frob(&self, x: &DualElem, i: usize) -> DualElem {
        if i == 0 {
            return x.clone();
        }
        self.lift(&self.field.frobenius(&x.a, i))
    }
    fn frob_root(&self, x: &DualElem, i: usize) -> Option<DualElem> {
        if i == 0 {
            return Some(x.clone());
        }
        if !self.field.is_zero(&x.b) {
            return None;
        }
        self.field.frob_root(&x.a, i).map(|a| self.lift(&a))
    }
    fn q(&self) -> u64 {
        self.field.q()
    }
    fn base_field(&self) -> FiniteField {
        self.field.base_field()
    }
    fn from_base(&self, c: &Elem) -> DualElem {
        self.lift(&self.field.from_base(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_squares_to_zero_and_frobenius_kills_eps() {
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let r = DualRing::new(f4.clone());
        let e = r.eps();
        assert!(r.is_zero(&r.mul(&e, &e)));
        let x = r.make(f4.generator(), f4.one());
        assert_eq!(r.frob(&x, 1), r.pow(&x, 2));
        assert_eq!(r.mul(&x, &r.inv(&x).unwrap()), r.one());
        assert!(r.frob_root(&x, 1).is_none());
        assert!(r.is_nilpotent(&e) && !r.is_unit(&e));
    }
}
