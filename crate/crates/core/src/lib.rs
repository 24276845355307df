//! Computational toolkit for Drinfeld modules over A = F_q[T].
//!
//! ```
//! use drinfeld_core::{BaseRing, DrinfeldModule};
//!
//! // phi_T = tau + tau^2 over F_2, with gamma(T) = 0
//! let a = BaseRing::over(2, 1)?;
//! let k = a.fq().clone();
//! let e = DrinfeldModule::new(&a, &k, k.zero(), vec![k.one(), k.one()])?;
//! assert_eq!(e.height_at_characteristic()?, 1);
//! assert_eq!(e.j_invariant()?, k.one());
//!
//! let n = a.ideal(&a.parse("T^2+T+1")?)?;
//! let l = e.splitting_field(&n, 64)?;
//! assert_eq!(e.torsion_structure(&n, &l)?.dim(), 4);
//! # Ok::<(), drinfeld_core::Error>(())
//! ```

pub mod base;
pub mod deform;
pub mod drinfeld;
pub mod dual;
pub mod error;
pub mod field;
pub mod isogeny;
pub mod level;
pub mod linalg;
pub mod moduli;
pub mod ring;
pub mod skew;
pub mod upoly;

pub use base::{BaseElement, BaseIdeal, BaseRing, CrtData, ResidueField};
pub use drinfeld::{DrinfeldModule, TorsionModule};
pub use dual::{DualElem, DualRing};
pub use error::{Error, Result};
pub use field::{Elem, FieldSpec, FiniteField};
pub use isogeny::{Isogeny, KernelSubgroup};
pub use level::{Gamma0Structure, Gamma1Structure, GammaFullStructure};
pub use ring::CoeffRing;
pub use skew::{SkewPolynomial, Standardize};
