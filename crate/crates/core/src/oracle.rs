//! Independent count of ℓ-cyclic extensions through local data.
//!
//! A map is a finite support S of places (∞ allowed), values r_v ∈ {1,…,ℓ-1}
//! on S, and a free ψ = ψ_∞(π_∞) ∈ Z/ℓ, subject to Σ_{v∈S} r_v·deg v ≡ 0.
//! At a finite place v₀ ∉ S the extension splits iff
//! -deg v₀·ψ + Σ_{finite w∈S} r_w·n_w ≡ 0, where π_{v₀} ≡ g_w^{n_w} in the
//! residue field at w; at ∞ ∉ S it splits iff ψ = 0.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::poly::irreducibles_up_to;
use crate::algebra::{FieldSpec, Poly};
use crate::arith::{gcd_u64, inv_mod, prime_factors};
use crate::covers::{extension_counts, Conditions, EnumConfig, KummerClass};
use crate::error::{Error, Result};
use crate::places::{reciprocity_sign_exponent, CharValue, Place, SplittingType};

/// Largest residue field with a discrete-log table.
pub const RESIDUE_FIELD_BUDGET: u64 = 1 << 20;

/// F_q[X]/(v) with a generator g satisfying g^{(Nv-1)/(q-1)} = μ and its
/// discrete-log table.
#[derive(Debug, Clone)]
pub struct ResidueField {
    modulus: Poly,
    q: u32,
    norm: u64,
    generator: Poly,
    log: Vec<u32>,
}

impl ResidueField {
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn generator(&self) -> &Poly {
        &self.generator
    }

    /// log_g of f mod v; `None` when v | f.
    pub fn dlog(&self, f: &Poly, fs: &FieldSpec) -> Option<u64> {
        let r = f.rem(&self.modulus, fs);
        (!r.is_zero()).then(|| self.log[r.residue_index(self.q) as usize] as u64)
    }
}

/// The smallest generator of (F_q[X]/v)^× compatible with μ, obtained by
/// raising the smallest generator h to a unit exponent.
pub fn residue_generator(v: &Poly, fs: &FieldSpec) -> Result<ResidueField> {
    let q = fs.q();
    let d = v.deg();
    if d == 0 || !v.is_monic() || !v.is_irreducible(fs) {
        return Err(Error::InvalidPlace(v.render(fs)));
    }
    let norm = (q as u64)
        .checked_pow(d as u32)
        .filter(|&n| n <= RESIDUE_FIELD_BUDGET)
        .ok_or_else(|| Error::Budget(format!("residue field of {} exceeds {RESIDUE_FIELD_BUDGET}", v.render(fs))))?;
    let order = norm - 1;
    let primes = prime_factors(order);
    let one = Poly::one();
    let h = (1..norm)
        .map(|i| Poly::from_residue_index(i, q))
        .find(|h| primes.iter().all(|&r| h.powmod((order / r) as u128, v, fs) != one))
        .expect("cyclic group has a generator");
    let mut log_h = vec![0u32; norm as usize];
    let mut cur = one;
    for a in 0..order {
        log_h[cur.residue_index(q) as usize] = a as u32;
        cur = cur.mul(&h, fs).rem(v, fs);
    }
    let cofactor = order / (q as u64 - 1);
    let norm_h = h.powmod(cofactor as u128, v, fs);
    let t = fs.log(norm_h.leading()).expect("norm of a unit is nonzero") as u64;
    let qm1 = q as u64 - 1;
    let (g_index, a_g) = (1..norm)
        .map(|i| (i, log_h[i as usize] as u64))
        .find(|&(_, a)| gcd_u64(a, order) == 1 && a * t % qm1 == 1 % qm1)
        .expect("a compatible generator exists");
    let inv = inv_mod(a_g, order).expect("unit exponent");
    let log = log_h.iter().map(|&a| ((a as u128 * inv as u128) % order as u128) as u32).collect();
    Ok(ResidueField { modulus: v.clone(), q, norm, generator: Poly::from_residue_index(g_index, q), log })
}

/// Local data (S, r, ψ) of one character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdeleMap {
    /// Support with values r_v, sorted by place.
    pub support: Vec<(Place, u32)>,
    pub psi: u32,
}

impl IdeleMap {
    pub fn conductor_degree(&self) -> usize {
        self.support.iter().map(|(v, _)| v.degree()).sum()
    }

    pub fn is_compatible(&self, ell: u32) -> bool {
        self.support.iter().map(|(v, r)| *r as usize * v.degree()).sum::<usize>() % ell as usize == 0
    }

    pub fn value_at(&self, v: &Place) -> Option<u32> {
        self.support.iter().find(|(w, _)| w == v).map(|(_, r)| *r)
    }

    /// Multiplies every r_v and ψ by k.
    pub fn scaled(&self, k: u32, ell: u32) -> IdeleMap {
        IdeleMap {
            support: self.support.iter().map(|(v, r)| (v.clone(), r * k % ell)).collect(),
            psi: self.psi * k % ell,
        }
    }
}

/// Residue fields of the finite places a map may touch.
#[derive(Debug, Clone, Default)]
pub struct OracleContext {
    fields: BTreeMap<Poly, ResidueField>,
}

impl OracleContext {
    /// Tables for every finite place of degree ≤ d.
    pub fn up_to(d: usize, fs: &FieldSpec) -> Result<Self> {
        let mut fields = BTreeMap::new();
        for v in irreducibles_up_to(d, fs)?.into_iter().flatten() {
            let rf = residue_generator(&v, fs)?;
            fields.insert(v, rf);
        }
        Ok(OracleContext { fields })
    }

    pub fn field(&self, v: &Poly) -> Option<&ResidueField> {
        self.fields.get(v)
    }
}

/// The value -deg v₀·ψ + Σ r_w·n_w at an unramified place (with v₀ = ∞
/// read as -ψ), or zero on the support.
pub fn map_character_at(map: &IdeleMap, v0: &Place, ctx: &OracleContext, fs: &FieldSpec) -> Result<CharValue> {
    let ell = fs.ell() as u64;
    if map.value_at(v0).is_some() {
        return Ok(CharValue::Zero);
    }
    let mut c = (ell - map.psi as u64 % ell) % ell * v0.degree() as u64;
    if let Place::Finite(p0) = v0 {
        for (w, r) in &map.support {
            let Place::Finite(w) = w else { continue };
            let rf = ctx.field(w).ok_or_else(|| Error::Budget(format!("no residue table for {}", w.render(fs))))?;
            let n_w = rf.dlog(p0, fs).expect("distinct places are coprime");
            c += *r as u64 * (n_w % ell);
        }
    }
    Ok(CharValue::Exp((c % ell) as u32))
}

pub fn map_splitting_type(map: &IdeleMap, v0: &Place, ctx: &OracleContext, fs: &FieldSpec) -> Result<SplittingType> {
    if map.value_at(v0).is_some() {
        return Ok(SplittingType::Ramified);
    }
    if v0.is_infinite() {
        return Ok(if map.psi == 0 { SplittingType::Split } else { SplittingType::Inert });
    }
    Ok(match map_character_at(map, v0, ctx, fs)? {
        CharValue::Exp(0) => SplittingType::Split,
        _ => SplittingType::Inert,
    })
}

/// Sets of distinct places with total degree n, each as indices into `places`.
fn supports(places: &[Place], n: usize) -> Vec<Vec<usize>> {
    fn go(places: &[Place], start: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..places.len() {
            let d = places[i].degree();
            if d > rest {
                break;
            }
            cur.push(i);
            go(places, i + 1, rest - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(places, 0, n, &mut Vec::new(), &mut out);
    out
}

fn for_each_map(support: &[Place], ell: u32, emit: &mut impl FnMut(IdeleMap)) {
    let k = support.len();
    let total = (ell as u64 - 1).pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let mut values = Vec::with_capacity(k);
        for _ in 0..k {
            values.push((c % (ell as u64 - 1)) as u32 + 1);
            c /= ell as u64 - 1;
        }
        let weight: usize = support.iter().zip(&values).map(|(v, r)| *r as usize * v.degree()).sum();
        if !weight.is_multiple_of(ell as usize) {
            continue;
        }
        for psi in 0..ell {
            emit(IdeleMap { support: support.iter().cloned().zip(values.iter().copied()).collect(), psi });
        }
    }
}

fn map_units(n: usize, fs: &FieldSpec) -> Result<(Vec<Place>, Vec<Vec<usize>>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("conductor degree must be at least 1".into()));
    }
    let mut places = vec![Place::Infinity];
    places.extend(irreducibles_up_to(n, fs)?.into_iter().flatten().map(Place::Finite));
    let sets = supports(&places, n);
    Ok((places, sets))
}

/// Every compatible map of conductor degree n, ordered by support then
/// values then ψ.
pub fn enumerate_maps(n: usize, fs: &FieldSpec, cfg: &EnumConfig) -> Result<Vec<IdeleMap>> {
    let (places, sets) = map_units(n, fs)?;
    let ell = fs.ell();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.shards.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let parts: Vec<Vec<IdeleMap>> = pool.install(|| {
        sets.par_iter()
            .map(|s| {
                let support: Vec<Place> = s.iter().map(|&i| places[i].clone()).collect();
                let mut out = Vec::new();
                for_each_map(&support, ell, &mut |m| out.push(m));
                out
            })
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Maps of conductor degree n meeting the conditions.
pub fn count_maps(n: usize, conds: &Conditions, fs: &FieldSpec, cfg: &EnumConfig) -> Result<u64> {
    let maps = enumerate_maps(n, fs, cfg)?;
    if conds.is_empty() {
        return Ok(maps.len() as u64);
    }
    let max_deg = conds.entries().iter().map(|(v, _)| v.degree()).max().unwrap_or(1);
    let ctx = OracleContext::up_to(n.max(max_deg), fs)?;
    let mut count = 0;
    for m in &maps {
        let mut ok = true;
        for (v, t) in conds.entries() {
            if map_splitting_type(m, v, &ctx, fs)? != *t {
                ok = false;
                break;
            }
        }
        count += u64::from(ok);
    }
    Ok(count)
}

/// The Kummer class with the same character: f_i = ∏_{r_w = i} w and
/// β = μ^{-ψ + ε·r_∞}.
pub fn map_to_class(map: &IdeleMap, fs: &FieldSpec) -> Result<KummerClass> {
    let ell = fs.ell();
    let mut factors = vec![Poly::one(); ell as usize - 1];
    let mut r_inf = 0;
    for (w, r) in &map.support {
        match w {
            Place::Infinity => r_inf = *r,
            Place::Finite(w) => factors[*r as usize - 1] = factors[*r as usize - 1].mul(w, fs),
        }
    }
    let eps = reciprocity_sign_exponent(fs);
    let beta = (ell - map.psi % ell + eps * r_inf % ell) % ell;
    KummerClass::new(beta, factors, fs)
}

/// Inverse of [`map_to_class`].
pub fn class_to_map(class: &KummerClass, fs: &FieldSpec) -> Result<IdeleMap> {
    let ell = fs.ell();
    let mut support = Vec::new();
    let mut weight = 0usize;
    for (i, f) in class.factors().iter().enumerate() {
        if f.is_one() {
            continue;
        }
        for (w, _) in f.factor(fs)?.factors {
            weight += (i + 1) * w.deg();
            support.push((Place::Finite(w), i as u32 + 1));
        }
    }
    let r_inf = ((ell as usize - weight % ell as usize) % ell as usize) as u32;
    if r_inf != 0 {
        support.push((Place::Infinity, r_inf));
    }
    support.sort();
    let eps = reciprocity_sign_exponent(fs);
    let psi = (eps * r_inf % ell + ell - class.beta_exp()) % ell;
    Ok(IdeleMap { support, psi })
}

/// Finds the class whose character agrees with the map at every place of
/// degree ≤ bound, raising the bound (up to `max_bound`) while several
/// candidates remain.
pub fn match_by_character<'a>(
    map: &IdeleMap,
    candidates: &'a [KummerClass],
    bound: usize,
    max_bound: usize,
    ctx: &OracleContext,
    fs: &FieldSpec,
) -> Result<Option<&'a KummerClass>> {
    let mut pool: Vec<&KummerClass> = candidates.iter().collect();
    for d in 1..=max_bound {
        let mut places: Vec<Place> = irreducibles_up_to(d, fs)?[d].iter().cloned().map(Place::Finite).collect();
        if d == 1 {
            places.insert(0, Place::Infinity);
        }
        for v in &places {
            let want = map_character_at(map, v, ctx, fs)?;
            pool.retain(|c| c.character_at(v, fs) == want);
        }
        if d >= bound && pool.len() <= 1 {
            return Ok(pool.first().copied());
        }
    }
    Err(Error::Budget(format!("{} classes still agree at degree {max_bound}", pool.len())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub n: usize,
    pub conditions: String,
    pub covers_characters: u64,
    pub map_count: u64,
    pub matches: bool,
}

/// Conditioned counts from the Kummer enumeration and from maps; the two
/// numbers are reported side by side.
pub fn crosscheck_counts(n: usize, conds: &Conditions, fs: &FieldSpec, cfg: &EnumConfig) -> Result<CrosscheckReport> {
    let covers_characters = if conds.is_empty() {
        extension_counts(n, fs, cfg)?.characters
    } else {
        crate::covers::count_conditioned(n, conds, fs, cfg)?.matched.characters
    };
    let map_count = count_maps(n, conds, fs, cfg)?;
    Ok(CrosscheckReport {
        n,
        conditions: conds.render(fs),
        covers_characters,
        map_count,
        matches: covers_characters == map_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3, 1, 2).unwrap()
    }

    fn f4() -> FieldSpec {
        FieldSpec::new(2, 2, 3).unwrap()
    }

    #[test]
    fn generators() {
        let fs = f3();
        let rf = residue_generator(&Poly::x(), &fs).unwrap();
        assert_eq!(rf.generator(), &Poly::constant(2));
        let v = Poly::from_coeffs(vec![1, 0, 1]);
        let rf = residue_generator(&v, &fs).unwrap();
        assert_eq!(rf.generator().powmod(4, &v, &fs), Poly::constant(fs.multiplicative_generator()));
        for r in prime_factors(8) {
            assert!(!rf.generator().powmod((8 / r) as u128, &v, &fs).is_one());
        }
        assert_eq!(rf.dlog(rf.generator(), &fs), Some(1));
    }

    #[test]
    fn discrete_logs_match_residue_symbols() {
        for fs in [f3(), f4(), FieldSpec::new(7, 1, 3).unwrap()] {
            let ctx = OracleContext::up_to(2, &fs).unwrap();
            let places = irreducibles_up_to(2, &fs).unwrap();
            for w in places.iter().flatten() {
                let rf = ctx.field(w).unwrap();
                for v in places.iter().flatten().filter(|v| *v != w) {
                    let n = rf.dlog(v, &fs).unwrap() % fs.ell() as u64;
                    let res = crate::places::residue_symbol(v, w, &fs).exponent().unwrap() as u64;
                    assert_eq!(n, res);
                }
            }
        }
    }

    #[test]
    fn map_counts() {
        let cfg = EnumConfig::with_shards(2);
        assert_eq!(enumerate_maps(2, &f4(), &cfg).unwrap().len(), 60);
        assert_eq!(enumerate_maps(1, &f4(), &cfg).unwrap().len(), 0);
        assert_eq!(enumerate_maps(2, &f3(), &cfg).unwrap().len(), 18);
        assert!(enumerate_maps(2, &f4(), &cfg).unwrap().iter().all(|m| m.is_compatible(3)));
    }

    #[test]
    fn bijection_round_trip() {
        let fs = f4();
        let cfg = EnumConfig::with_shards(1);
        for m in enumerate_maps(3, &fs, &cfg).unwrap() {
            let c = map_to_class(&m, &fs).unwrap();
            assert_eq!(class_to_map(&c, &fs).unwrap(), m);
            assert_eq!(c.conductor_degree(), 3);
        }
    }

    #[test]
    fn example_split_at_degree_two() {
        let fs = f3();
        let class = KummerClass::new(1, vec![Poly::from_coeffs(vec![0, 2, 0, 1])], &fs).unwrap();
        let map = class_to_map(&class, &fs).unwrap();
        let ctx = OracleContext::up_to(2, &fs).unwrap();
        let v0 = Place::Finite(Poly::from_coeffs(vec![1, 0, 1]));
        assert_eq!(map_splitting_type(&map, &v0, &ctx, &fs).unwrap(), SplittingType::Split);
        assert_eq!(map_splitting_type(&map, &Place::Infinity, &ctx, &fs).unwrap(), SplittingType::Ramified);
    }

    #[test]
    fn crosscheck_small() {
        let fs = f3();
        let cfg = EnumConfig::with_shards(2);
        let x = Place::Finite(Poly::x());
        let r = crosscheck_counts(4, &Conditions::new(std::slice::from_ref(&x), &[], &[]).unwrap(), &fs, &cfg).unwrap();
        assert!(r.matches);
        assert_eq!(r.map_count, 36);
        let s = crosscheck_counts(4, &Conditions::new(&[], &[x], &[]).unwrap(), &fs, &cfg).unwrap();
        assert!(s.matches);
    }
}
