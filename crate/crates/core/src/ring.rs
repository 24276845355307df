//! The coefficient-ring interface shared by finite fields and dual numbers.

use std::fmt::Debug;
use std::hash::Hash;

use crate::field::{Elem, FiniteField};

/// A commutative F_q-algebra that can carry skew polynomial coefficients.
///
/// Implemented by [`FiniteField`] and [`crate::dual::DualRing`]. Every
/// element of these rings is either a unit or nilpotent.
pub trait CoeffRing: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn is_unit(&self, x: &Self::Elem) -> bool;
    fn is_nilpotent(&self, x: &Self::Elem) -> bool;
    /// Inverse of a unit, `None` otherwise.
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;
    /// `x^(q^i)`.
    fn frob(&self, x: &Self::Elem, i: usize) -> Self::Elem;
    /// Some `y` with `y^(q^i) = x`, if one exists.
    fn frob_root(&self, x: &Self::Elem, i: usize) -> Option<Self::Elem>;
    /// Cardinality q of the constant field F_q.
    fn q(&self) -> u64;
    /// The constant field F_q.
    fn base_field(&self) -> FiniteField;
    /// Image of an element of F_q.
    fn from_base(&self, c: &Elem) -> Self::Elem;

    fn is_one(&self, x: &Self::Elem) -> bool {
        *x == self.one()
    }

    fn pow(&self, x: &Self::Elem, mut exp: u64) -> Self::Elem {
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

    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem> {
        self.inv(y).map(|yi| self.mul(x, &yi))
    }
}
