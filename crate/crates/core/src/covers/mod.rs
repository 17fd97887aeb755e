//! Kummer classes Y^ℓ = β f₁ f₂² ⋯ f_{ℓ-1}^{ℓ-1}, their conductors,
//! splitting behaviour and point counts, and exhaustive enumeration of the
//! ℓ-cyclic extensions of F_q(X) by conductor degree.

mod cache;
mod enumerate;

pub use cache::{OrbitCache, OrbitRecord, CACHE_VERSION};
pub use enumerate::{
    admissible_degree_tuples, candidate_count, collect_records, count_conditioned, count_tuples, enumerate_extensions,
    extension_counts, point_distribution, point_distribution_from_records, ConditionedCount, Conditions, EnumConfig,
    Enumeration, ExtensionCounts, PointDistribution, DEFAULT_BUDGET,
};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::poly::irreducibles_of_degree;
use crate::algebra::{FieldSpec, Poly};
use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::places::{residue_symbol, CharValue, Place, SplittingType};

/// Largest genus accepted by [`zeta_numerator`].
pub const ZETA_GENUS_BUDGET: u64 = 8;

/// The class of β·f₁·f₂²⋯f_{ℓ-1}^{ℓ-1} in K^×/(K^×)^ℓ with β = μ^{beta_exp}.
///
/// Ordered by (beta_exp, factor tuple); the smallest member of an orbit
/// under powering is its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KummerClass {
    beta_exp: u32,
    factors: Vec<Poly>,
}

impl KummerClass {
    /// Validates monic, square-free, pairwise coprime factors and rejects
    /// the trivial class.
    pub fn new(beta_exp: u32, factors: Vec<Poly>, fs: &FieldSpec) -> Result<Self> {
        let ell = fs.ell();
        if factors.len() != ell as usize - 1 {
            return Err(Error::InvalidClass(format!("expected {} factors, got {}", ell - 1, factors.len())));
        }
        for (i, f) in factors.iter().enumerate() {
            if !f.is_monic() || !f.is_squarefree(fs)? {
                return Err(Error::InvalidClass(format!("f{} = {} is not monic square-free", i + 1, f.render(fs))));
            }
            for g in &factors[..i] {
                if !f.is_coprime(g, fs) {
                    return Err(Error::InvalidClass(format!(
                        "factors {} and {} share a root",
                        g.render(fs),
                        f.render(fs)
                    )));
                }
            }
        }
        let class = KummerClass { beta_exp: beta_exp % ell, factors };
        if class.beta_exp == 0 && class.is_constant_field() {
            return Err(Error::InvalidClass("trivial class".into()));
        }
        Ok(class)
    }

    pub(crate) fn from_parts(beta_exp: u32, factors: Vec<Poly>) -> Self {
        KummerClass { beta_exp, factors }
    }

    pub fn beta_exp(&self) -> u32 {
        self.beta_exp
    }

    /// f₁, …, f_{ℓ-1}.
    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn ell(&self) -> u32 {
        self.factors.len() as u32 + 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(Poly::deg).collect()
    }

    /// All f_i equal 1: the class comes from the constant field.
    pub fn is_constant_field(&self) -> bool {
        self.factors.iter().all(Poly::is_one)
    }

    /// F^k: f_i moves to slot i·k mod ℓ and β to β^k.
    pub fn power(&self, k: u32) -> KummerClass {
        let ell = self.ell();
        assert!(!k.is_multiple_of(ell), "power must be a unit mod ell");
        let mut factors = vec![Poly::one(); self.factors.len()];
        for (i, f) in self.factors.iter().enumerate() {
            let j = ((i as u64 + 1) * k as u64 % ell as u64) as usize;
            factors[j - 1] = f.clone();
        }
        KummerClass { beta_exp: (self.beta_exp as u64 * k as u64 % ell as u64) as u32, factors }
    }

    pub fn canonical(&self) -> KummerClass {
        (2..self.ell()).map(|k| self.power(k)).fold(self.clone(), |best, c| best.min(c))
    }

    pub fn is_canonical(&self) -> bool {
        (2..self.ell()).all(|k| self.power(k) >= *self)
    }

    pub fn orbit(&self) -> FieldOrbit {
        FieldOrbit { canonical: self.canonical(), orbit_size: self.ell() - 1 }
    }

    /// ∞ ramifies iff Σ i·d_i ≢ 0 (mod ℓ).
    pub fn infinity_ramified(&self) -> bool {
        let ell = self.ell() as usize;
        self.factors.iter().enumerate().map(|(i, f)| (i + 1) * f.deg()).sum::<usize>() % ell != 0
    }

    /// Σ d_i, plus one when ∞ ramifies.
    pub fn conductor_degree(&self) -> usize {
        self.factors.iter().map(Poly::deg).sum::<usize>() + usize::from(self.infinity_ramified())
    }

    /// β·∏ f_i^i.
    pub fn representative(&self, fs: &FieldSpec) -> Poly {
        let mut acc = Poly::constant(fs.exp(self.beta_exp as u64));
        for (i, f) in self.factors.iter().enumerate() {
            for _ in 0..=i {
                acc = acc.mul(f, fs);
            }
        }
        acc
    }

    /// The value at v of the character cut out by the class: zero at
    /// ramified places, otherwise an exponent of ρ_ℓ.
    pub fn character_at(&self, v: &Place, fs: &FieldSpec) -> CharValue {
        let ell = fs.ell() as u64;
        match v {
            Place::Infinity if self.infinity_ramified() => CharValue::Zero,
            Place::Infinity => CharValue::Exp(self.beta_exp),
            Place::Finite(v) => {
                let mut k = self.beta_exp as u64 * v.deg() as u64;
                for (i, f) in self.factors.iter().enumerate() {
                    if f.is_one() {
                        continue;
                    }
                    match residue_symbol(f, v, fs) {
                        CharValue::Zero => return CharValue::Zero,
                        CharValue::Exp(e) => k += (i as u64 + 1) * e as u64,
                    }
                }
                CharValue::Exp((k % ell) as u32)
            }
        }
    }

    pub fn splitting_type(&self, v: &Place, fs: &FieldSpec) -> SplittingType {
        splitting_from_value(self.character_at(v, fs))
    }

    /// Splitting types at the q+1 rational places, ∞ first.
    pub fn rational_splitting(&self, fs: &FieldSpec) -> Vec<SplittingType> {
        let q = fs.q();
        let mut out = Vec::with_capacity(q as usize + 1);
        out.push(self.splitting_type(&Place::Infinity, fs));
        let ell = fs.ell() as u64;
        for c in 0..q {
            let root = fs.neg(c);
            let mut k = self.beta_exp as u64;
            let mut ramified = false;
            for (i, f) in self.factors.iter().enumerate() {
                match f.eval(fs, root) {
                    0 => {
                        ramified = true;
                        break;
                    }
                    a => k += (i as u64 + 1) * fs.ell_class(a).expect("nonzero") as u64,
                }
            }
            out.push(if ramified {
                SplittingType::Ramified
            } else {
                splitting_from_value(CharValue::Exp((k % ell) as u32))
            });
        }
        out
    }

    /// #C(F_q) = ℓ·#split + #ramified over the rational places.
    pub fn rational_point_count(&self, fs: &FieldSpec) -> u64 {
        points_from_splitting(&self.rational_splitting(fs), fs.ell())
    }

    /// Compact form `beta|f1;f2;…` with coefficient-list factors.
    pub fn to_record(&self) -> String {
        let fs: Vec<String> = self.factors.iter().map(Poly::to_record).collect();
        format!("{}|{}", self.beta_exp, fs.join(";"))
    }

    pub fn from_record(s: &str, fs: &FieldSpec) -> Result<Self> {
        let (beta, rest) = s.split_once('|').ok_or_else(|| Error::Cache(format!("bad class record {s:?}")))?;
        let beta_exp = beta.parse::<u32>().map_err(|_| Error::Cache(format!("bad beta {beta:?}")))?;
        let factors = rest.split(';').map(|t| Poly::from_record(t, fs)).collect::<Result<Vec<_>>>()?;
        KummerClass::new(beta_exp, factors, fs).map_err(|e| Error::Cache(e.to_string()))
    }

    /// Human-readable `Y^ℓ = μ^b·(f1)·(f2)^2…`.
    pub fn render(&self, fs: &FieldSpec) -> String {
        let mut parts = vec![format!("mu^{}", self.beta_exp)];
        for (i, f) in self.factors.iter().enumerate() {
            if f.is_one() {
                continue;
            }
            if i == 0 {
                parts.push(format!("({})", f.render(fs)));
            } else {
                parts.push(format!("({})^{}", f.render(fs), i + 1));
            }
        }
        format!("Y^{} = {}", fs.ell(), parts.join("*"))
    }
}

fn splitting_from_value(v: CharValue) -> SplittingType {
    match v {
        CharValue::Zero => SplittingType::Ramified,
        CharValue::Exp(0) => SplittingType::Split,
        CharValue::Exp(_) => SplittingType::Inert,
    }
}

pub(crate) fn points_from_splitting(types: &[SplittingType], ell: u32) -> u64 {
    types
        .iter()
        .map(|t| match t {
            SplittingType::Split => ell as u64,
            SplittingType::Ramified => 1,
            SplittingType::Inert => 0,
        })
        .sum()
}

/// One ℓ-cyclic extension: the orbit {F^k} of a Kummer class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldOrbit {
    pub canonical: KummerClass,
    pub orbit_size: u32,
}

impl FieldOrbit {
    pub fn members(&self) -> Vec<KummerClass> {
        (1..self.canonical.ell()).map(|k| self.canonical.power(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conductor {
    pub finite_support: Vec<Place>,
    pub infinity_ramified: bool,
    pub degree: usize,
}

impl Conductor {
    /// Degree of the discriminant, (ℓ-1)·𝔫.
    pub fn disc_degree(&self, ell: u32) -> usize {
        (ell as usize - 1) * self.degree
    }
}

pub fn conductor_of(f: &KummerClass, fs: &FieldSpec) -> Result<Conductor> {
    if f.is_constant_field() {
        return Err(Error::TrivialClass);
    }
    let mut support = Vec::new();
    for g in f.factors() {
        if g.is_one() {
            continue;
        }
        support.extend(g.factor(fs)?.factors.into_iter().map(|(v, _)| Place::Finite(v)));
    }
    support.sort();
    Ok(Conductor { finite_support: support, infinity_ramified: f.infinity_ramified(), degree: f.conductor_degree() })
}

/// g = (ℓ-1)(𝔫-2)/2.
pub fn genus_from_conductor(n: usize, ell: u32) -> Result<u64> {
    let twice = (ell as u64 - 1)
        * (n as u64)
            .checked_sub(2)
            .ok_or_else(|| Error::InvalidArgument(format!("conductor degree {n} is below 2")))?;
    if !twice.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("(ell-1)(n-2) is odd for n = {n}")));
    }
    Ok(twice / 2)
}

/// 𝔫 = 2g/(ℓ-1) + 2, rejecting non-integral values.
pub fn conductor_from_genus(g: u64, ell: u32) -> Result<usize> {
    let l1 = ell as u64 - 1;
    if !(2 * g).is_multiple_of(l1) {
        return Err(Error::InvalidArgument(format!("2g/(ell-1) is not an integer for g = {g}, ell = {ell}")));
    }
    Ok((2 * g / l1 + 2) as usize)
}

pub fn genus_of(f: &KummerClass) -> Result<u64> {
    if f.is_constant_field() {
        return Err(Error::TrivialClass);
    }
    let g = genus_from_conductor(f.conductor_degree(), f.ell());
    assert!(g.is_ok(), "valid classes have integral genus");
    g
}

/// #C(F_{q^m}) = Σ r(v)·f(v)·deg v over places with f(v)·deg v | m.
pub fn point_count(f: &KummerClass, m: usize, fs: &FieldSpec) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let ell = fs.ell() as u64;
    let mut total = 0u64;
    for d in divisors(m as u64) {
        let d = d as usize;
        let mut places: Vec<Place> = irreducibles_of_degree(d, fs)?.into_iter().map(Place::Finite).collect();
        if d == 1 {
            places.insert(0, Place::Infinity);
        }
        for v in &places {
            total += match f.splitting_type(v, fs) {
                SplittingType::Ramified => d as u64,
                SplittingType::Split => ell * d as u64,
                SplittingType::Inert if m.is_multiple_of(ell as usize * d) => ell * d as u64,
                SplittingType::Inert => 0,
            };
        }
    }
    Ok(total)
}

/// Coefficients a_0..a_{2g} of P_C(u), where Z_C(u) = P_C(u)/((1-u)(1-qu)),
/// from the point counts over F_{q^m} for m = 1..2g.
pub fn zeta_numerator(f: &KummerClass, fs: &FieldSpec) -> Result<Vec<BigInt>> {
    let g = genus_of(f)?;
    if g > ZETA_GENUS_BUDGET {
        return Err(Error::Budget(format!("zeta numerator for genus {g} > {ZETA_GENUS_BUDGET}")));
    }
    let top = 2 * g as usize;
    let q = BigInt::from(fs.q());
    let ell = fs.ell() as usize;
    let levels = crate::algebra::poly::irreducibles_up_to(top, fs)?;
    // counts[d] = (#ramified, #split, #inert) among places of degree d
    let mut counts = vec![[0u64; 3]; top + 1];
    for (d, level) in levels.iter().enumerate().skip(1) {
        let extra = (d == 1).then_some(Place::Infinity);
        for v in extra.into_iter().chain(level.iter().cloned().map(Place::Finite)) {
            let slot = match f.splitting_type(&v, fs) {
                SplittingType::Ramified => 0,
                SplittingType::Split => 1,
                SplittingType::Inert => 2,
            };
            counts[d][slot] += 1;
        }
    }
    let mut s = vec![BigInt::zero(); top + 1];
    for (m, s_m) in s.iter_mut().enumerate().skip(1) {
        let mut n_m = 0u64;
        for d in divisors(m as u64) {
            let d = d as usize;
            let [r, sp, i] = counts[d];
            n_m += d as u64 * (r + ell as u64 * sp);
            if m.is_multiple_of(ell * d) {
                n_m += (ell * d) as u64 * i;
            }
        }
        *s_m = BigInt::from(n_m) - 1 - q.pow(m as u32);
    }
    let mut a = vec![BigInt::from(1)];
    for k in 1..=top {
        let acc = (1..=k).fold(BigInt::zero(), |acc, i| acc + &s[i] * &a[k - i]);
        let kk = BigInt::from(k);
        assert!((&acc % &kk).is_zero(), "Newton identity produced a non-integer coefficient");
        a.push(acc / kk);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    fn f3() -> FieldSpec {
        FieldSpec::new(3, 1, 2).unwrap()
    }

    fn f4() -> FieldSpec {
        FieldSpec::new(2, 2, 3).unwrap()
    }

    #[test]
    fn class_validation() {
        let fs = f3();
        assert!(KummerClass::new(0, vec![p(&[0, 0, 1])], &fs).is_err());
        assert!(KummerClass::new(0, vec![p(&[0, 2])], &fs).is_err());
        assert!(KummerClass::new(0, vec![Poly::one()], &fs).is_err());
        assert!(KummerClass::new(1, vec![Poly::one()], &fs).is_ok());
        let f4 = f4();
        assert!(KummerClass::new(0, vec![Poly::x(), Poly::x()], &f4).is_err());
        assert!(KummerClass::new(0, vec![Poly::x()], &f4).is_err());
    }

    #[test]
    fn conductor_examples() {
        let fs = f3();
        let e = KummerClass::new(1, vec![p(&[0, 2, 0, 1])], &fs).unwrap();
        let c = conductor_of(&e, &fs).unwrap();
        assert_eq!(c.finite_support.len(), 3);
        assert!(c.infinity_ramified);
        assert_eq!(c.degree, 4);
        assert_eq!(c.disc_degree(2), 4);
        assert_eq!(genus_of(&e).unwrap(), 1);

        let f4 = f4();
        let a = KummerClass::new(0, vec![Poly::x(), Poly::linear(1)], &f4).unwrap();
        let ca = conductor_of(&a, &f4).unwrap();
        assert_eq!((ca.finite_support.len(), ca.infinity_ramified, ca.degree), (2, false, 2));
        let b = KummerClass::new(0, vec![Poly::x(), Poly::one()], &f4).unwrap();
        let cb = conductor_of(&b, &f4).unwrap();
        assert_eq!((cb.finite_support.len(), cb.infinity_ramified, cb.degree), (1, true, 2));
        assert_eq!(genus_of(&b).unwrap(), 0);

        let constant = KummerClass::new(1, vec![Poly::one()], &fs).unwrap();
        assert_eq!(conductor_of(&constant, &fs), Err(Error::TrivialClass));
    }

    #[test]
    fn genus_conversions() {
        assert_eq!(genus_from_conductor(4, 2).unwrap(), 1);
        assert_eq!(genus_from_conductor(2, 3).unwrap(), 0);
        assert_eq!(genus_from_conductor(12, 2).unwrap(), 5);
        assert_eq!(conductor_from_genus(5, 2).unwrap(), 12);
        assert!(conductor_from_genus(1, 5).is_err());
        assert!(genus_from_conductor(1, 2).is_err());
    }

    #[test]
    fn powering_permutes_factors() {
        let fs = f4();
        let a = KummerClass::new(1, vec![Poly::x(), Poly::linear(1)], &fs).unwrap();
        let sq = a.power(2);
        assert_eq!(sq.beta_exp(), 2);
        assert_eq!(sq.factors(), &[Poly::linear(1), Poly::x()]);
        assert_eq!(sq.power(2), a);
        assert_eq!(a.canonical(), a);
        assert!(!sq.is_canonical());
        assert_eq!(sq.orbit(), a.orbit());
        assert_eq!(a.orbit().members().len(), 2);
        assert_eq!(a.conductor_degree(), sq.conductor_degree());
    }

    #[test]
    fn splitting_examples() {
        let fs = f3();
        let e = KummerClass::new(0, vec![p(&[0, 2, 0, 1])], &fs).unwrap();
        assert_eq!(e.splitting_type(&Place::Finite(Poly::x()), &fs), SplittingType::Ramified);
        assert_eq!(e.splitting_type(&Place::Infinity, &fs), SplittingType::Ramified);
        assert_eq!(e.splitting_type(&Place::Finite(p(&[1, 0, 1])), &fs), SplittingType::Split);
    }

    #[test]
    fn rational_fast_path_agrees() {
        let fs = f4();
        let places = crate::places::places_up_to(1, &fs).unwrap();
        for f1 in crate::algebra::poly::monic_squarefree(2, &fs) {
            for beta in 0..3 {
                let c = KummerClass::new(beta, vec![f1.clone(), Poly::linear(3)], &fs);
                let Ok(c) = c else { continue };
                let slow: Vec<_> = places.iter().map(|v| c.splitting_type(v, &fs)).collect();
                assert_eq!(c.rational_splitting(&fs), slow);
                assert_eq!(c.rational_point_count(&fs), point_count(&c, 1, &fs).unwrap());
            }
        }
    }

    #[test]
    fn point_counts_and_zeta() {
        let fs = f3();
        let e = KummerClass::new(1, vec![p(&[0, 2, 0, 1])], &fs).unwrap();
        assert_eq!(point_count(&e, 1, &fs).unwrap(), 4);
        assert_eq!(point_count(&e, 2, &fs).unwrap(), 16);
        let z = zeta_numerator(&e, &fs).unwrap();
        assert_eq!(z, vec![BigInt::from(1), BigInt::from(0), BigInt::from(3)]);
        let f4 = f4();
        let g0 = KummerClass::new(0, vec![Poly::x(), Poly::one()], &f4).unwrap();
        assert_eq!(zeta_numerator(&g0, &f4).unwrap(), vec![BigInt::from(1)]);
        assert_eq!(point_count(&g0, 1, &f4).unwrap(), 5);
    }

    #[test]
    fn record_round_trip() {
        let fs = f4();
        let a = KummerClass::new(2, vec![p(&[0, 1]), p(&[2, 3, 1])], &fs).unwrap();
        assert_eq!(a.to_record(), "2|0,1;2,3,1");
        assert_eq!(KummerClass::from_record(&a.to_record(), &fs).unwrap(), a);
        assert!(KummerClass::from_record("0|1", &f3()).is_err());
        assert_eq!(a.representative(&fs).deg(), 5);
    }
}
