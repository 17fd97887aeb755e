use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{conductor_from_genus, points_from_splitting, FieldOrbit, KummerClass, OrbitRecord};
use crate::algebra::poly::monic_polys;
use crate::algebra::{FieldSpec, Poly};
use crate::error::{Error, Result};
use crate::model::{DistVector, Provenance};
use crate::places::{Place, SplittingType};
use crate::rational::ratio;

/// Default cap on ℓ·Σ_tuples ∏ q^{d_i}, the number of candidate classes.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Worker threads; results do not depend on this.
    pub shards: usize,
    pub budget: u128,
    /// Ignore the budget.
    pub force: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        let shards = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        EnumConfig { shards, budget: DEFAULT_BUDGET, force: false }
    }
}

impl EnumConfig {
    pub fn with_shards(shards: usize) -> Self {
        EnumConfig { shards: shards.max(1), ..Self::default() }
    }
}

/// Degree tuples (d₁,…,d_{ℓ-1}) of conductor degree n: Σd_i = n with
/// Σ i·d_i ≡ 0, then Σd_i = n-1 with Σ i·d_i ≢ 0 (mod ℓ).
pub fn admissible_degree_tuples(n: usize, ell: u32) -> Vec<Vec<usize>> {
    let slots = ell as usize - 1;
    let mut out = Vec::new();
    for (sum, want_zero) in [(n, true), (n.wrapping_sub(1), false)] {
        if n == 0 && !want_zero {
            continue;
        }
        let mut cur = vec![0usize; slots];
        compositions(sum, 0, &mut cur, &mut |t| {
            let w: usize = t.iter().enumerate().map(|(i, d)| (i + 1) * d).sum();
            if w.is_multiple_of(ell as usize) == want_zero {
                out.push(t.to_vec());
            }
        });
    }
    out
}

fn compositions(rest: usize, slot: usize, cur: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if slot + 1 == cur.len() {
        cur[slot] = rest;
        emit(cur);
        return;
    }
    for d in 0..=rest {
        cur[slot] = d;
        compositions(rest - d, slot + 1, cur, emit);
    }
}

/// Number of candidate classes examined for conductor degree n.
pub fn candidate_count(n: usize, fs: &FieldSpec) -> u128 {
    let q = fs.q() as u128;
    admissible_degree_tuples(n, fs.ell())
        .iter()
        .map(|t| t.iter().fold(1u128, |acc, &d| acc.saturating_mul(q.saturating_pow(d as u32))))
        .fold(0u128, u128::saturating_add)
        .saturating_mul(fs.ell() as u128)
}

fn check_budget(n: usize, fs: &FieldSpec, cfg: &EnumConfig) -> Result<()> {
    let c = candidate_count(n, fs);
    if !cfg.force && c > cfg.budget {
        return Err(Error::Budget(format!(
            "q={} ell={} n={n} needs {c} candidates (budget {})",
            fs.q(),
            fs.ell(),
            cfg.budget
        )));
    }
    Ok(())
}

fn pool(cfg: &EnumConfig) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.shards.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

/// Square-free monic lists for every degree used by the tuples.
fn squarefree_lists(tuples: &[Vec<usize>], fs: &FieldSpec) -> BTreeMap<usize, Vec<Poly>> {
    let mut degrees: Vec<usize> = tuples.iter().flatten().copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .into_iter()
        .map(|d| {
            let all: Vec<Poly> = monic_polys(d, fs.q()).collect();
            let sf: Vec<Poly> = all.into_par_iter().filter(|f| f.is_squarefree(fs).unwrap_or(false)).collect();
            (d, sf)
        })
        .collect()
}

/// Walks every pairwise-coprime tuple (f₁, f₂, …) with f₁ fixed.
fn walk_tuples(
    degrees: &[usize],
    lists: &BTreeMap<usize, Vec<Poly>>,
    first: &Poly,
    fs: &FieldSpec,
    emit: &mut impl FnMut(&[Poly]),
) {
    let mut chosen = vec![first.clone()];
    let product = first.clone();
    extend_tuple(degrees, lists, &mut chosen, &product, fs, emit);
}

fn extend_tuple(
    degrees: &[usize],
    lists: &BTreeMap<usize, Vec<Poly>>,
    chosen: &mut Vec<Poly>,
    product: &Poly,
    fs: &FieldSpec,
    emit: &mut impl FnMut(&[Poly]),
) {
    let slot = chosen.len();
    if slot == degrees.len() {
        emit(chosen);
        return;
    }
    for f in &lists[&degrees[slot]] {
        if !f.is_one() && !f.is_coprime(product, fs) {
            continue;
        }
        let next = if f.is_one() { product.clone() } else { product.mul(f, fs) };
        chosen.push(f.clone());
        extend_tuple(degrees, lists, chosen, &next, fs, emit);
        chosen.pop();
    }
}

/// Runs `visit` on every canonical class of conductor degree n, one
/// accumulator per work unit (degree tuple, first factor), returned in
/// unit order so merged results are independent of the shard count.
fn fold_classes<A, I, V>(n: usize, fs: &FieldSpec, cfg: &EnumConfig, init: I, visit: V) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &KummerClass) + Sync,
{
    if n == 0 {
        return Err(Error::InvalidArgument("conductor degree must be at least 1".into()));
    }
    check_budget(n, fs, cfg)?;
    let ell = fs.ell();
    let tuples = admissible_degree_tuples(n, ell);
    pool(cfg)?.install(|| {
        let lists = squarefree_lists(&tuples, fs);
        let units: Vec<(usize, usize)> =
            tuples.iter().enumerate().flat_map(|(t, dv)| (0..lists[&dv[0]].len()).map(move |i| (t, i))).collect();
        Ok(units
            .par_iter()
            .map(|&(t, i)| {
                let mut acc = init();
                walk_tuples(&tuples[t], &lists, &lists[&tuples[t][0]][i], fs, &mut |factors| {
                    for beta in 0..ell {
                        let class = KummerClass::from_parts(beta, factors.to_vec());
                        if class.is_canonical() {
                            visit(&mut acc, &class);
                        }
                    }
                });
                acc
            })
            .collect())
    })
}

/// Exact |𝓕_{(d₁,…,d_{ℓ-1})}|: monic square-free pairwise coprime tuples.
pub fn count_tuples(dvec: &[usize], fs: &FieldSpec) -> Result<u64> {
    if dvec.len() != fs.ell() as usize - 1 {
        return Err(Error::InvalidArgument(format!("degree vector must have {} entries", fs.ell() - 1)));
    }
    let lists = squarefree_lists(&[dvec.to_vec()], fs);
    let mut total = 0u64;
    for first in &lists[&dvec[0]] {
        walk_tuples(dvec, &lists, first, fs, &mut |_| total += 1);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionCounts {
    pub n: usize,
    /// Distinct extensions L/K.
    pub fields: u64,
    /// Extensions with a distinguished isomorphism: (ℓ-1)·fields.
    pub characters: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub counts: ExtensionCounts,
    pub orbits: Vec<FieldOrbit>,
}

pub fn enumerate_extensions(n: usize, fs: &FieldSpec, cfg: &EnumConfig) -> Result<Enumeration> {
    let parts = fold_classes(n, fs, cfg, Vec::new, |acc: &mut Vec<FieldOrbit>, c| {
        acc.push(FieldOrbit { canonical: c.clone(), orbit_size: fs.ell() - 1 })
    })?;
    let orbits: Vec<FieldOrbit> = parts.into_iter().flatten().collect();
    let fields = orbits.len() as u64;
    Ok(Enumeration { counts: counts_of(n, fields, fs), orbits })
}

fn counts_of(n: usize, fields: u64, fs: &FieldSpec) -> ExtensionCounts {
    ExtensionCounts { n, fields, characters: fields * (fs.ell() as u64 - 1) }
}

pub fn extension_counts(n: usize, fs: &FieldSpec, cfg: &EnumConfig) -> Result<ExtensionCounts> {
    let parts = fold_classes(n, fs, cfg, || 0u64, |acc, _| *acc += 1)?;
    Ok(counts_of(n, parts.into_iter().sum(), fs))
}

/// Prescribed splitting types at finitely many places.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Conditions {
    entries: Vec<(Place, SplittingType)>,
}

impl Conditions {
    pub fn new(ramified: &[Place], split: &[Place], inert: &[Place]) -> Result<Self> {
        let pairs = ramified
            .iter()
            .map(|v| (v.clone(), SplittingType::Ramified))
            .chain(split.iter().map(|v| (v.clone(), SplittingType::Split)))
            .chain(inert.iter().map(|v| (v.clone(), SplittingType::Inert)));
        Self::from_pairs(pairs)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Place, SplittingType)>) -> Result<Self> {
        let mut map: BTreeMap<Place, SplittingType> = BTreeMap::new();
        for (v, t) in pairs {
            if let Some(&old) = map.get(&v) {
                let name = match &v {
                    Place::Infinity => "inf".to_string(),
                    Place::Finite(f) => f.to_record(),
                };
                return Err(if old == t { Error::DuplicatePlace(name) } else { Error::OverlappingConditions(name) });
            }
            map.insert(v, t);
        }
        Ok(Conditions { entries: map.into_iter().collect() })
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorted by place.
    pub fn entries(&self) -> &[(Place, SplittingType)] {
        &self.entries
    }

    pub fn places_of(&self, t: SplittingType) -> Vec<Place> {
        self.entries.iter().filter(|(_, s)| *s == t).map(|(v, _)| v.clone()).collect()
    }

    pub fn matches(&self, class: &KummerClass, fs: &FieldSpec) -> bool {
        self.entries.iter().all(|(v, t)| class.splitting_type(v, fs) == *t)
    }

    /// `place:R;place:S…` with places in record form; empty when unconditioned.
    pub fn canonical_string(&self) -> String {
        self.entries
            .iter()
            .map(|(v, t)| {
                let p = match v {
                    Place::Infinity => "inf".to_string(),
                    Place::Finite(f) => f.to_record(),
                };
                format!("{p}:{}", t.symbol())
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// First 16 hex digits of SHA-256 of the canonical string.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.canonical_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn render(&self, fs: &FieldSpec) -> String {
        self.entries.iter().map(|(v, t)| format!("{}:{t}", v.render(fs))).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionedCount {
    pub matched: ExtensionCounts,
    pub total: ExtensionCounts,
    /// matched/total; `None` when nothing has conductor degree n.
    pub density: Option<BigRational>,
}

impl ConditionedCount {
    pub(crate) fn from_fields(n: usize, matched: u64, total: u64, fs: &FieldSpec) -> Self {
        ConditionedCount {
            matched: counts_of(n, matched, fs),
            total: counts_of(n, total, fs),
            density: (total > 0).then(|| ratio(matched, total)),
        }
    }
}

pub fn count_conditioned(n: usize, conds: &Conditions, fs: &FieldSpec, cfg: &EnumConfig) -> Result<ConditionedCount> {
    let parts = fold_classes(
        n,
        fs,
        cfg,
        || (0u64, 0u64),
        |acc, c| {
            acc.1 += 1;
            if conds.matches(c, fs) {
                acc.0 += 1;
            }
        },
    )?;
    let (m, t) = parts.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ConditionedCount::from_fields(n, m, t, fs))
}

/// Records of every orbit of conductor degree n satisfying the conditions,
/// in enumeration order.
pub fn collect_records(n: usize, conds: &Conditions, fs: &FieldSpec, cfg: &EnumConfig) -> Result<Vec<OrbitRecord>> {
    let parts = fold_classes(n, fs, cfg, Vec::new, |acc: &mut Vec<OrbitRecord>, c| {
        if conds.matches(c, fs) {
            acc.push(OrbitRecord::of(c, fs));
        }
    })?;
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDistribution {
    pub genus: u64,
    pub conductor_degree: usize,
    pub fields: u64,
    /// histogram[m] = #fields with #C(F_q) = m, m = 0..=ℓ(q+1).
    pub histogram: Vec<u64>,
    /// Per rational place (∞ first): counts of (ramified, split, inert).
    pub marginals: Vec<(Place, [u64; 3])>,
    pub dist: DistVector,
}

#[derive(Clone)]
struct DistAcc {
    histogram: Vec<u64>,
    marginals: Vec<[u64; 3]>,
}

impl DistAcc {
    fn new(fs: &FieldSpec) -> Self {
        let q = fs.q() as usize;
        DistAcc { histogram: vec![0; fs.ell() as usize * (q + 1) + 1], marginals: vec![[0; 3]; q + 1] }
    }

    fn add(&mut self, types: &[SplittingType], ell: u32) {
        self.histogram[points_from_splitting(types, ell) as usize] += 1;
        for (slot, t) in self.marginals.iter_mut().zip(types) {
            slot[*t as usize] += 1;
        }
    }

    fn merge(mut self, other: DistAcc) -> DistAcc {
        self.histogram.iter_mut().zip(other.histogram).for_each(|(a, b)| *a += b);
        for (a, b) in self.marginals.iter_mut().zip(other.marginals) {
            (0..3).for_each(|i| a[i] += b[i]);
        }
        self
    }

    fn finish(self, genus: u64, n: usize, fs: &FieldSpec) -> Result<PointDistribution> {
        let fields: u64 = self.histogram.iter().sum();
        if fields == 0 {
            return Err(Error::InvalidArgument(format!("no extensions of conductor degree {n}")));
        }
        let rational = std::iter::once(Place::Infinity).chain((0..fs.q()).map(|c| Place::Finite(Poly::linear(c))));
        Ok(PointDistribution {
            genus,
            conductor_degree: n,
            fields,
            dist: DistVector::from_counts(&self.histogram, Provenance::Empirical),
            marginals: rational.zip(self.marginals).collect(),
            histogram: self.histogram,
        })
    }
}

/// Frequencies of #C(F_q) over all fields of genus g, each field weighted once.
pub fn point_distribution(g: u64, fs: &FieldSpec, cfg: &EnumConfig) -> Result<PointDistribution> {
    let n = conductor_from_genus(g, fs.ell())?;
    let ell = fs.ell();
    let parts = fold_classes(n, fs, cfg, || DistAcc::new(fs), |acc, c| acc.add(&c.rational_splitting(fs), ell))?;
    parts.into_iter().fold(DistAcc::new(fs), DistAcc::merge).finish(g, n, fs)
}

/// The same distribution rebuilt from unconditioned cache records.
pub fn point_distribution_from_records(g: u64, records: &[OrbitRecord], fs: &FieldSpec) -> Result<PointDistribution> {
    let n = conductor_from_genus(g, fs.ell())?;
    let mut acc = DistAcc::new(fs);
    for r in records {
        if r.conductor_degree != n {
            return Err(Error::Cache(format!("record of conductor degree {} in a degree-{n} set", r.conductor_degree)));
        }
        acc.add(&r.splitting, fs.ell());
    }
    acc.finish(g, n, fs)
}
