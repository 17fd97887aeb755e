//! Elements of Z[ξ_ℓ] in the power basis 1, ξ, …, ξ^{ℓ-2}.
//!
//! Reduction uses ξ^ℓ = 1 and 1 + ξ + ⋯ + ξ^{ℓ-1} = 0. For ℓ = 2 the ring
//! degenerates to Z with ξ = -1.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    coeffs: Vec<BigInt>,
}

impl Cyclo {
    pub fn zero(ell: u32) -> Self {
        Cyclo { coeffs: vec![BigInt::zero(); (ell - 1) as usize] }
    }

    pub fn one(ell: u32) -> Self {
        Self::from_int(ell, BigInt::one())
    }

    pub fn from_int(ell: u32, n: impl Into<BigInt>) -> Self {
        let mut c = Self::zero(ell);
        c.coeffs[0] = n.into();
        c
    }

    /// ξ^k for any integer k.
    pub fn root_power(ell: u32, k: i64) -> Self {
        let k = k.rem_euclid(ell as i64) as usize;
        let mut c = Self::zero(ell);
        if k < c.coeffs.len() {
            c.coeffs[k] = BigInt::one();
        } else {
            c.coeffs.iter_mut().for_each(|x| *x = -BigInt::one());
        }
        c
    }

    /// Σ_{i=1}^{ℓ-1} ξ^{i·a}: ℓ-1 when ℓ | a, else -1.
    pub fn root_sum(ell: u32, a: i64) -> Self {
        (1..ell as i64).fold(Self::zero(ell), |acc, i| acc + Self::root_power(ell, i * a))
    }

    pub fn ell(&self) -> u32 {
        self.coeffs.len() as u32 + 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "Z[ξ_ℓ] has rank ℓ-1 ≥ 1");
        Cyclo { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if its ξ-components vanish.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Cyclo { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Exact division by a rational integer, when every component divides.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !(c % k).is_zero() {
                return None;
            }
            out.push(c / k);
        }
        Some(Cyclo { coeffs: out })
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ell());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(mut self, rhs: Cyclo) -> Cyclo {
        self += &rhs;
        self
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        debug_assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Cyclo) -> Cyclo {
        self + (-rhs)
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        let ell = self.ell() as usize;
        let n = self.coeffs.len();
        if n == 1 {
            return Cyclo { coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        // Product modulo ξ^ℓ - 1 first, then fold ξ^{ℓ-1} = -(1 + ⋯ + ξ^{ℓ-2}).
        let mut wide = vec![BigInt::zero(); ell];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                wide[(i + j) % ell] += a * b;
            }
        }
        let top = wide.pop().unwrap();
        Cyclo { coeffs: wide.into_iter().map(|c| c - &top).collect() }
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Cyclo) -> Cyclo {
        &self * &rhs
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roots_of_unity() {
        for ell in [2u32, 3, 5, 7] {
            let xi = Cyclo::root_power(ell, 1);
            assert_eq!(xi.pow(ell as u64), Cyclo::one(ell));
            for k in 1..ell as u64 {
                assert_ne!(xi.pow(k), Cyclo::one(ell));
            }
            let total = (0..ell as i64).fold(Cyclo::zero(ell), |acc, k| acc + Cyclo::root_power(ell, k));
            assert!(total.is_zero());
        }
        assert_eq!(Cyclo::root_power(2, 1), Cyclo::from_int(2, -1));
    }

    #[test]
    fn root_sums() {
        assert_eq!(Cyclo::root_sum(3, 3), Cyclo::from_int(3, 2));
        assert_eq!(Cyclo::root_sum(3, 1), Cyclo::from_int(3, -1));
        assert_eq!(Cyclo::root_sum(3, 2), Cyclo::from_int(3, -1));
        assert_eq!(Cyclo::root_sum(5, 10), Cyclo::from_int(5, 4));
    }

    fn arb_cyclo(ell: u32) -> impl Strategy<Value = Cyclo> {
        proptest::collection::vec(-50i64..50, (ell - 1) as usize)
            .prop_map(|v| Cyclo::from_coeffs(v.into_iter().map(BigInt::from).collect()))
    }

    proptest! {
        #[test]
        fn ring_axioms_ell5(a in arb_cyclo(5), b in arb_cyclo(5), c in arb_cyclo(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &Cyclo::one(5), a.clone());
        }
    }
}
