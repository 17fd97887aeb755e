//! Places of K = F_q(X), ℓ-th power residue symbols, and the Dirichlet
//! characters built from them.
//!
//! Complex roots of unity never appear numerically: a character value is an
//! exponent k ∈ Z/ℓ standing for ρ_ℓ^k, where ρ_ℓ = σ(b_ℓ) and σ is pinned to
//! σ(b_ℓ^k) = ρ_ℓ^k.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::algebra::field::FieldSpec;
use crate::algebra::poly::{irreducibles_up_to, monic_polys, parse_poly, Poly};
use crate::arith::{divisors, mobius};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};

/// A place of F_q(X). `Infinity` sorts first; finite places sort by
/// (degree, lexicographic).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Finite(Poly),
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(v) => v.deg(),
        }
    }

    /// Nv = q^{deg v}.
    pub fn norm(&self, q: u32) -> u128 {
        (q as u128).pow(self.degree() as u32)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Place::Infinity => None,
            Place::Finite(v) => Some(v),
        }
    }

    /// Parses `inf` or a monic irreducible polynomial in X.
    pub fn parse(s: &str, fs: &FieldSpec) -> Result<Place> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Place::Infinity);
        }
        let v = parse_poly(t, fs)?;
        if !v.is_monic() || !v.is_irreducible(fs) {
            return Err(Error::InvalidPlace(format!("{t} is not a monic irreducible polynomial")));
        }
        Ok(Place::Finite(v))
    }

    pub fn render(&self, fs: &FieldSpec) -> String {
        match self {
            Place::Infinity => "inf".into(),
            Place::Finite(v) => v.render(fs),
        }
    }
}

/// Value of a Dirichlet character: zero, or ρ_ℓ^k stored as k mod ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Exp(u32),
}

impl CharValue {
    pub fn mul(self, other: CharValue, ell: u32) -> CharValue {
        match (self, other) {
            (CharValue::Exp(a), CharValue::Exp(b)) => CharValue::Exp((a + b) % ell),
            _ => CharValue::Zero,
        }
    }

    pub fn pow(self, k: u32, ell: u32) -> CharValue {
        match self {
            CharValue::Exp(a) => CharValue::Exp((a as u64 * k as u64 % ell as u64) as u32),
            CharValue::Zero if k == 0 => CharValue::Exp(0),
            CharValue::Zero => CharValue::Zero,
        }
    }

    pub fn exponent(self) -> Option<u32> {
        match self {
            CharValue::Exp(k) => Some(k),
            CharValue::Zero => None,
        }
    }

    /// The value as an element of Z[ξ_ℓ].
    pub fn to_cyclo(self, ell: u32) -> Cyclo {
        match self {
            CharValue::Zero => Cyclo::zero(ell),
            CharValue::Exp(k) => Cyclo::root_power(ell, k as i64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplittingType {
    Ramified,
    Split,
    Inert,
}

impl SplittingType {
    /// Ramification index e(v).
    pub fn ramification_index(self, ell: u32) -> u32 {
        match self {
            SplittingType::Ramified => ell,
            _ => 1,
        }
    }

    /// Inertia degree f(v).
    pub fn inertia_degree(self, ell: u32) -> u32 {
        match self {
            SplittingType::Inert => ell,
            _ => 1,
        }
    }

    /// Number of places above v, r(v).
    pub fn places_above(self, ell: u32) -> u32 {
        match self {
            SplittingType::Split => ell,
            _ => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            SplittingType::Ramified => 'R',
            SplittingType::Split => 'S',
            SplittingType::Inert => 'I',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'R' => Some(SplittingType::Ramified),
            'S' => Some(SplittingType::Split),
            'I' => Some(SplittingType::Inert),
            _ => None,
        }
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingType::Ramified => "ramified",
            SplittingType::Split => "split",
            SplittingType::Inert => "inert",
        })
    }
}

/// ∞ followed by every finite place of degree ≤ `max_degree`, in place order.
pub fn places_up_to(max_degree: usize, fs: &FieldSpec) -> Result<Vec<Place>> {
    let levels = irreducibles_up_to(max_degree, fs)?;
    let mut out = vec![Place::Infinity];
    out.extend(levels.into_iter().flatten().map(Place::Finite));
    Ok(out)
}

/// Number of monic irreducibles of degree d: (1/d) Σ_{e|d} μ(e) q^{d/e}.
pub fn finite_places_of_degree(d: usize, q: u32) -> BigUint {
    assert!(d >= 1);
    let mut total = BigInt::zero();
    for e in divisors(d as u64) {
        let m = mobius(e);
        if m != 0 {
            total += BigInt::from(m) * BigInt::from(q).pow((d as u64 / e) as u32);
        }
    }
    (total / BigInt::from(d)).to_biguint().expect("necklace counts are nonnegative")
}

/// Number of places of degree d, counting ∞ in degree 1.
pub fn count_places_of_degree(d: usize, q: u32) -> BigUint {
    let finite = finite_places_of_degree(d, q);
    if d == 1 {
        finite + BigUint::one()
    } else {
        finite
    }
}

/// The ℓ-th power residue symbol (f/v)_ℓ ≡ f^{(Nv-1)/ℓ} (mod v) as an
/// exponent of b_ℓ; `Zero` when v | f. `v` must be monic irreducible.
pub fn residue_symbol(f: &Poly, v: &Poly, fs: &FieldSpec) -> CharValue {
    if v.deg() == 1 {
        // v = X + c: reduce by evaluation at the root -c.
        let root = fs.neg(v.coeffs()[0]);
        return match f.eval(fs, root) {
            0 => CharValue::Zero,
            a => CharValue::Exp(fs.ell_class(a).expect("nonzero")),
        };
    }
    let r = f.rem(v, fs);
    if r.is_zero() {
        return CharValue::Zero;
    }
    if r.is_constant() {
        // A constant c has symbol b_ℓ^{log(c)·deg v}: (q^d-1)/(q-1) ≡ d (mod ℓ).
        let k = fs.ell_class(r.leading()).expect("nonzero") as u64 * v.deg() as u64;
        return CharValue::Exp((k % fs.ell() as u64) as u32);
    }
    let nv = (fs.q() as u128).pow(v.deg() as u32);
    let z = r.powmod((nv - 1) / fs.ell() as u128, v, fs);
    debug_assert!(z.is_constant());
    let k = fs.root_of_unity_exponent(z.leading()).expect("the power residue is an ℓ-th root of unity");
    CharValue::Exp(k)
}

/// χ_{v_∞,ℓ}(f): σ of the leading coefficient when ℓ | deg f, else zero.
pub fn char_infinity(f: &Poly, fs: &FieldSpec) -> Result<CharValue> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !f.deg().is_multiple_of(fs.ell() as usize) {
        return Ok(CharValue::Zero);
    }
    Ok(CharValue::Exp(fs.ell_class(f.leading())?))
}

/// Exponent ε with b_ℓ^ε = (-1)^{(q-1)/ℓ}; the reciprocity law reads
/// (v₀/v)_ℓ = b_ℓ^{ε·deg v₀·deg v} (v/v₀)_ℓ for distinct monic irreducibles.
pub fn reciprocity_sign_exponent(fs: &FieldSpec) -> u32 {
    let minus_one = fs.neg(1);
    let z = fs.pow(minus_one, fs.cofactor() as u128);
    fs.root_of_unity_exponent(z).expect("(-1)^{(q-1)/ℓ} is an ℓ-th root of unity")
}

/// The character χ_v^power, with χ_v = σ ∘ (·/v)_ℓ, of modulus v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCharacter {
    pub modulus: Poly,
    pub power: u32,
}

impl ResidueCharacter {
    pub fn new(modulus: Poly, power: u32, fs: &FieldSpec) -> Result<Self> {
        if !modulus.is_monic() || !modulus.is_irreducible(fs) {
            return Err(Error::InvalidPlace(modulus.render(fs)));
        }
        Ok(ResidueCharacter { modulus, power: power % fs.ell() })
    }

    pub fn is_trivial(&self) -> bool {
        self.power == 0
    }

    pub fn value(&self, f: &Poly, fs: &FieldSpec) -> CharValue {
        residue_symbol(f, &self.modulus, fs).pow(self.power, fs.ell())
    }

    /// A(n, χ) = Σ_{monic f, deg f = n} χ(f) in Z[ξ_ℓ].
    pub fn character_sum(&self, n: usize, fs: &FieldSpec) -> Cyclo {
        let ell = fs.ell();
        let mut counts = vec![0i64; ell as usize];
        for f in monic_polys(n, fs.q()) {
            if let CharValue::Exp(k) = self.value(&f, fs) {
                counts[k as usize] += 1;
            }
        }
        counts
            .iter()
            .enumerate()
            .fold(Cyclo::zero(ell), |acc, (k, &c)| acc + Cyclo::root_power(ell, k as i64).scale(&BigInt::from(c)))
    }
}

/// Coefficients of the finite L-polynomial L(u, χ) = Σ_n A(n, χ) u^n for a
/// nontrivial residue character; the sums vanish from n = deg(modulus) on, so
/// only indices below the modulus degree are evaluated. Trailing zeros are
/// trimmed.
pub fn l_polynomial(chi: &ResidueCharacter, fs: &FieldSpec) -> Result<Vec<Cyclo>> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let mut out: Vec<Cyclo> = (0..chi.modulus.deg()).map(|n| chi.character_sum(n, fs)).collect();
    while out.last().is_some_and(Cyclo::is_zero) {
        out.pop();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    #[test]
    fn place_lists() {
        let f3 = FieldSpec::new(3, 1, 2).unwrap();
        let d1 = places_up_to(1, &f3).unwrap();
        assert_eq!(
            d1,
            vec![Place::Infinity, Place::Finite(p(&[0, 1])), Place::Finite(p(&[1, 1])), Place::Finite(p(&[2, 1]))]
        );
        let d2 = places_up_to(2, &f3).unwrap();
        assert_eq!(d2.len(), 7);
        assert_eq!(
            &d2[4..],
            &[Place::Finite(p(&[1, 0, 1])), Place::Finite(p(&[2, 1, 1])), Place::Finite(p(&[2, 2, 1]))]
        );
        assert!(d2.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn place_counts() {
        assert_eq!(count_places_of_degree(1, 3), BigUint::from(4u32));
        assert_eq!(count_places_of_degree(2, 3), BigUint::from(3u32));
        assert_eq!(count_places_of_degree(3, 3), BigUint::from(8u32));
        // q = 2: necklace counts 2, 1, 2 plus ∞.
        let total: BigUint = (1..=3).map(|d| count_places_of_degree(d, 2)).sum();
        assert_eq!(total, BigUint::from(6u32));
        for (pp, e, ell) in [(3u64, 1u32, 2u64), (2, 2, 3), (7, 1, 3)] {
            let fs = FieldSpec::new(pp, e, ell).unwrap();
            let max_d = if fs.q() > 4 { 4 } else { 6 };
            let places = places_up_to(max_d, &fs).unwrap();
            for d in 1..=max_d {
                let listed = places.iter().filter(|v| v.degree() == d).count();
                assert_eq!(BigUint::from(listed), count_places_of_degree(d, fs.q()), "q={} d={d}", fs.q());
            }
        }
    }

    #[test]
    fn residue_symbol_examples() {
        let f7 = FieldSpec::new(7, 1, 3).unwrap();
        let x = Poly::x();
        assert_eq!(residue_symbol(&p(&[1, 1]), &x, &f7), CharValue::Exp(0));
        assert_eq!(residue_symbol(&p(&[2, 1]), &x, &f7), CharValue::Exp(2));
        assert_eq!(residue_symbol(&x, &x, &f7), CharValue::Zero);
    }

    #[test]
    fn residue_symbol_general_path_agrees_with_direct_power() {
        let f3 = FieldSpec::new(3, 1, 2).unwrap();
        let v = p(&[1, 0, 1]);
        // (X^3 - X)^4 ≡ 1 mod X^2+1
        assert_eq!(residue_symbol(&p(&[0, 2, 0, 1]), &v, &f3), CharValue::Exp(0));
        for f in monic_polys(3, 3) {
            let direct = f.powmod(4, &v, &f3);
            let expected = if direct.is_zero() {
                CharValue::Zero
            } else {
                CharValue::Exp(f3.root_of_unity_exponent(direct.leading()).unwrap())
            };
            assert_eq!(residue_symbol(&f, &v, &f3), expected);
        }
    }

    #[test]
    fn infinity_character() {
        let f3 = FieldSpec::new(3, 1, 2).unwrap();
        assert_eq!(char_infinity(&p(&[1, 0, 2, 0, 1]), &f3).unwrap(), CharValue::Exp(0));
        assert_eq!(char_infinity(&p(&[0, 0, 2]), &f3).unwrap(), CharValue::Exp(1));
        assert_eq!(char_infinity(&Poly::zero(), &f3), Err(Error::ZeroInput));
        let f4 = FieldSpec::new(2, 2, 3).unwrap();
        assert_eq!(char_infinity(&p(&[1, 0, 1]), &f4).unwrap(), CharValue::Zero);
    }

    #[test]
    fn l_polynomials() {
        let f3 = FieldSpec::new(3, 1, 2).unwrap();
        let chi = ResidueCharacter::new(p(&[1, 0, 1]), 1, &f3).unwrap();
        assert_eq!(l_polynomial(&chi, &f3).unwrap(), vec![Cyclo::one(2), Cyclo::from_int(2, -1)]);
        let lin = ResidueCharacter::new(p(&[1, 1]), 1, &f3).unwrap();
        assert_eq!(l_polynomial(&lin, &f3).unwrap(), vec![Cyclo::one(2)]);
        let trivial = ResidueCharacter::new(p(&[1, 1]), 2, &f3).unwrap();
        assert_eq!(l_polynomial(&trivial, &f3), Err(Error::TrivialCharacter));

        let other = ResidueCharacter::new(p(&[2, 1, 1]), 1, &f3).unwrap();
        let lp = l_polynomial(&other, &f3).unwrap();
        assert!(lp.len() <= 2);
        for n in 2..=4 {
            assert!(other.character_sum(n, &f3).is_zero());
        }
    }

    #[test]
    fn reciprocity_sign() {
        // q ≡ 3 mod 4: -1 is a non-square.
        assert_eq!(reciprocity_sign_exponent(&FieldSpec::new(3, 1, 2).unwrap()), 1);
        assert_eq!(reciprocity_sign_exponent(&FieldSpec::new(5, 1, 2).unwrap()), 0);
        assert_eq!(reciprocity_sign_exponent(&FieldSpec::new(7, 1, 3).unwrap()), 0);
    }

    #[test]
    fn parse_places() {
        let f3 = FieldSpec::new(3, 1, 2).unwrap();
        assert_eq!(Place::parse("inf", &f3).unwrap(), Place::Infinity);
        assert_eq!(Place::parse("X^2+1", &f3).unwrap(), Place::Finite(p(&[1, 0, 1])));
        assert!(Place::parse("X^2-1", &f3).is_err());
        assert!(Place::parse("2X+1", &f3).is_err());
    }
}
