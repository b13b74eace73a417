use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{inv_mod, mul_mod, sub_mod, Field, FieldElement};

/// Coefficient arithmetic specialised per field, so the engine avoids the
/// tag checks and enum dispatch of [`FieldElement`].
pub(crate) trait Coeffs: Sync + Send {
    type E: Clone + Debug + PartialEq + Send + Sync;

    fn field(&self) -> Field;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_one(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn import(&self, a: &FieldElement) -> Self::E;
    fn export(&self, a: &Self::E) -> FieldElement;
}

pub(crate) struct ModP {
    pub p: u64,
}

impl Coeffs for ModP {
    type E = u64;

    fn field(&self) -> Field {
        Field::Prime(self.p)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.p)
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        sub_mod(0, *a, self.p)
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.p)
    }
    fn import(&self, a: &FieldElement) -> u64 {
        a.residue().expect("prime field element")
    }
    fn export(&self, a: &u64) -> FieldElement {
        Field::Prime(self.p).from_u64(*a)
    }
}

pub(crate) struct Rationals;

impl Coeffs for Rationals {
    type E = BigRational;

    fn field(&self) -> Field {
        Field::Rationals
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn import(&self, a: &FieldElement) -> BigRational {
        a.as_rational().expect("rational element").clone()
    }
    fn export(&self, a: &BigRational) -> FieldElement {
        FieldElement::Rational(a.clone())
    }
}
