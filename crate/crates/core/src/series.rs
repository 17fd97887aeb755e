//! Truncated power series in u = q^{-(ℓ-1)s} with Z[ξ_ℓ] coefficients: the
//! Euler products 𝒜 and ℬ, conditioned counting series, the ℓ = 2 closed
//! forms, the constant C_ℓ and main-term diagnostics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::poly::irreducibles_up_to;
use crate::algebra::FieldSpec;
use crate::arith::{binomial_big, factorial};
use crate::covers::Conditions;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::places::{count_places_of_degree, residue_symbol, Place, SplittingType};
use crate::rational::{int, inv_power, ratio, to_f64};

/// Truncation cap for conditioned series whose local factors depend on the
/// individual place.
pub const CONDITIONED_CAP: usize = 14;

/// a₀ + a₁u + ⋯ + a_N u^N modulo u^{N+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloSeries {
    ell: u32,
    coeffs: Vec<Cyclo>,
}

impl CycloSeries {
    pub fn zero(ell: u32, n: usize) -> Self {
        CycloSeries { ell, coeffs: vec![Cyclo::zero(ell); n + 1] }
    }

    pub fn one(ell: u32, n: usize) -> Self {
        let mut s = Self::zero(ell, n);
        s.coeffs[0] = Cyclo::one(ell);
        s
    }

    pub fn from_coeffs(ell: u32, coeffs: Vec<Cyclo>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(coeffs.iter().all(|c| c.ell() == ell));
        CycloSeries { ell, coeffs }
    }

    pub fn from_integers(ell: u32, coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(ell, coeffs.iter().map(|c| Cyclo::from_int(ell, c.clone())).collect())
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// N, the highest retained power.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Cyclo {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Cyclo] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Cyclo) {
        self.coeffs[k] = c;
    }

    pub fn truncate(&self, n: usize) -> Self {
        CycloSeries { ell: self.ell, coeffs: self.coeffs[..=n.min(self.truncation())].to_vec() }
    }

    /// The coefficients as rational integers, if every ξ-component vanishes.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.as_integer().cloned()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        CycloSeries { ell: self.ell, coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn neg(&self) -> Self {
        CycloSeries { ell: self.ell, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycloSeries { ell: self.ell, coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut out = Self::zero(self.ell, n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }

    /// Multiplicative inverse when the constant term is ±1.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0]
            .as_integer()
            .filter(|c| c.abs().is_one())
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("series constant term is not a unit".into()))?;
        let n = self.truncation();
        let mut inv = Self::zero(self.ell, n);
        inv.coeffs[0] = Cyclo::from_int(self.ell, c0.clone());
        for k in 1..=n {
            let mut acc = Cyclo::zero(self.ell);
            for i in 1..=k {
                acc += &(&self.coeffs[i] * &inv.coeffs[k - i]);
            }
            inv.coeffs[k] = (-acc).scale(&c0);
        }
        Ok(inv)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Multiplies in place by (1 + b·u^d)^c.
    pub fn mul_factor_power(&mut self, d: usize, b: &Cyclo, c: &BigUint) {
        assert!(d >= 1);
        let n = self.truncation();
        if b.is_zero() || c.is_zero() || d > n {
            return;
        }
        let mut terms = Vec::new();
        let mut bk = Cyclo::one(self.ell);
        for k in 1..=n / d {
            bk = &bk * b;
            let binom = binomial_big(c, k);
            if binom.is_zero() {
                break;
            }
            terms.push((d * k, bk.scale(&BigInt::from(binom))));
        }
        for i in (1..=n).rev() {
            let mut acc = Cyclo::zero(self.ell);
            for (shift, t) in &terms {
                if *shift > i {
                    break;
                }
                let src = &self.coeffs[i - shift];
                if !src.is_zero() {
                    acc += &(t * src);
                }
            }
            self.coeffs[i] += &acc;
        }
    }

    /// Multiplies by b·u^d.
    pub fn mul_monomial(&self, d: usize, b: &Cyclo) -> Self {
        let n = self.truncation();
        let mut out = Self::zero(self.ell, n);
        for i in d..=n {
            out.coeffs[i] = b * &self.coeffs[i - d];
        }
        out
    }
}

/// ∏_{d ≤ N} (1 + (ℓ-1)u^d)^{π(d)}, π(1) counting ∞.
pub fn series_a(n: usize, fs: &FieldSpec) -> CycloSeries {
    grouped_product(n, fs, |_| Cyclo::from_int(fs.ell(), fs.ell() as i64 - 1))
}

/// ∏_{d ≤ N} (1 + b_d u^d)^{π(d)} with b_d = ℓ-1 if ℓ | d, else -1.
pub fn series_b(n: usize, fs: &FieldSpec) -> CycloSeries {
    grouped_product(n, fs, |d| Cyclo::root_sum(fs.ell(), d as i64))
}

fn grouped_product(n: usize, fs: &FieldSpec, b: impl Fn(usize) -> Cyclo) -> CycloSeries {
    let mut s = CycloSeries::one(fs.ell(), n);
    for d in 1..=n {
        s.mul_factor_power(d, &b(d), &count_places_of_degree(d, fs.q()));
    }
    s
}

/// 𝒜 + (ℓ-1)ℬ - ℓ: the u^n coefficient counts characters of conductor degree n.
pub fn character_count_series(n: usize, fs: &FieldSpec) -> CycloSeries {
    let ell = fs.ell();
    let mut s = series_a(n, fs).add(&series_b(n, fs).scale(&BigInt::from(ell - 1)));
    let c0 = s.coeff(0) + &Cyclo::from_int(ell, -(ell as i64));
    s.set_coeff(0, c0);
    assert!(s.integer_coeffs().is_some(), "counting series must have rational-integer coefficients");
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionedSeries {
    /// Coefficient of u^n = characters of conductor degree n meeting the
    /// conditions; constant term 0.
    pub series: CycloSeries,
    /// Constant-field characters (trivial one included) meeting the
    /// conditions, removed from the constant term.
    pub constant_classes: u64,
}

impl ConditionedSeries {
    pub fn coefficient(&self, n: usize) -> BigInt {
        self.series.coeff(n).as_integer().expect("asserted integral").clone()
    }
}

/// Counting series for characters with prescribed splitting at finitely
/// many places. Split conditions are expanded with additive characters of
/// Z/ℓ, inert ones by inclusion-exclusion over split; when a finite place is
/// split or inert the local factors depend on residue symbols, so places are
/// enumerated individually and N is capped at [`CONDITIONED_CAP`].
pub fn conditioned_series(n: usize, conds: &Conditions, fs: &FieldSpec) -> Result<ConditionedSeries> {
    let ell = fs.ell();
    let ramified = conds.places_of(SplittingType::Ramified);
    let split = conds.places_of(SplittingType::Split);
    let inert = conds.places_of(SplittingType::Inert);
    // Condition places where the split test is applied, split first.
    let tests: Vec<Place> = split.iter().chain(&inert).cloned().collect();
    let twisted = tests.iter().any(|v| !v.is_infinite());
    if twisted && n > CONDITIONED_CAP {
        return Err(Error::Budget(format!("conditioned series at N = {n} > {CONDITIONED_CAP}")));
    }
    let excluded: Vec<&Place> = conds.entries().iter().map(|(v, _)| v).collect();
    let evec = |w: &Place| -> Vec<u32> {
        tests
            .iter()
            .map(|v| match (v, w) {
                (Place::Finite(v), Place::Finite(w)) => residue_symbol(v, w, fs).exponent().expect("distinct places"),
                _ => 0,
            })
            .collect()
    };

    // (degree, exponent vector) -> number of free places
    let mut groups: BTreeMap<(usize, Vec<u32>), BigUint> = BTreeMap::new();
    if twisted {
        let levels = irreducibles_up_to(n, fs)?;
        let all = std::iter::once(Place::Infinity).chain(levels.into_iter().flatten().map(Place::Finite));
        for w in all.filter(|w| w.degree() <= n && !excluded.contains(&w)) {
            *groups.entry((w.degree(), evec(&w))).or_default() += 1u32;
        }
    } else {
        for d in 1..=n {
            let taken = excluded.iter().filter(|v| v.degree() == d).count();
            let free = count_places_of_degree(d, fs.q()) - BigUint::from(taken);
            groups.insert((d, vec![0; tests.len()]), free);
        }
    }
    let forced: Vec<(usize, Vec<u32>)> = ramified.iter().map(|w| (w.degree(), evec(w))).collect();

    let mut total = CycloSeries::zero(ell, n);
    for mask in 0u32..(1 << inert.len()) {
        // Q = split ∪ T, T ⊆ inert selected by mask
        let active: Vec<usize> =
            (0..tests.len()).filter(|&h| h < split.len() || mask >> (h - split.len()) & 1 == 1).collect();
        let mut part = CycloSeries::zero(ell, n);
        let combos = (ell as u64).pow(active.len() as u32);
        for j in 0..ell as u64 {
            for code in 0..combos {
                let mut k = vec![0u64; tests.len()];
                let mut c = code;
                for &h in &active {
                    k[h] = c % ell as u64;
                    c /= ell as u64;
                }
                let psi_weight: u64 = active.iter().map(|&h| k[h] * tests[h].degree() as u64).sum();
                if !psi_weight.is_multiple_of(ell as u64) {
                    continue;
                }
                let b_of = |d: usize, e: &[u32]| {
                    let a = j * d as u64 + active.iter().map(|&h| k[h] * e[h] as u64).sum::<u64>();
                    Cyclo::root_sum(ell, (a % ell as u64) as i64)
                };
                let mut prod = CycloSeries::one(ell, n);
                for ((d, e), count) in &groups {
                    prod.mul_factor_power(*d, &b_of(*d, e), count);
                }
                for (d, e) in &forced {
                    prod = prod.mul_monomial(*d, &b_of(*d, e));
                }
                part = part.add(&prod);
            }
        }
        let scale = BigInt::from(ell).pow(active.len() as u32);
        let coeffs =
            part.coeffs().iter().map(|c| c.div_exact(&scale).expect("character sum divisible by ell^|Q|")).collect();
        let part = CycloSeries::from_coeffs(ell, coeffs);
        let t_size = active.len() - split.len();
        total = if t_size.is_multiple_of(2) { total.add(&part) } else { total.sub(&part) };
    }

    let constant_classes = constant_character_count(conds, fs);
    assert_eq!(
        total.coeff(0),
        &Cyclo::from_int(ell, constant_classes),
        "constant term counts the constant-field characters"
    );
    total.set_coeff(0, Cyclo::zero(ell));
    assert!(total.integer_coeffs().is_some(), "conditioned counting series must be integral");
    Ok(ConditionedSeries { series: total, constant_classes })
}

/// Constant-field characters ψ ∈ Z/ℓ meeting the conditions: none when a
/// place must ramify; a place v splits iff deg v·ψ ≡ 0.
pub fn constant_character_count(conds: &Conditions, fs: &FieldSpec) -> u64 {
    let ell = fs.ell() as u64;
    (0..ell)
        .filter(|psi| {
            conds.entries().iter().all(|(v, t)| {
                let splits = (psi * v.degree() as u64).is_multiple_of(ell);
                match t {
                    SplittingType::Ramified => false,
                    SplittingType::Split => splits,
                    SplittingType::Inert => !splits,
                }
            })
        })
        .count() as u64
}

fn require_quadratic(fs: &FieldSpec) -> Result<()> {
    if fs.ell() != 2 {
        return Err(Error::InvalidArgument(format!("closed forms need ell = 2, got {}", fs.ell())));
    }
    Ok(())
}

/// Coefficients of A(u) = (1-qu²)(1+u)/(1-qu) up to u^n.
pub fn quadratic_a_coeffs(n: usize, q: u32) -> Vec<BigInt> {
    let q = BigInt::from(q);
    let numer = [BigInt::one(), BigInt::one(), -q.clone(), -q.clone()];
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = BigInt::zero();
    for k in 0..=n {
        // a_k = q·a_{k-1} + numer_k
        let cur = &q * &prev + numer.get(k).cloned().unwrap_or_default();
        out.push(cur.clone());
        prev = cur;
    }
    out
}

/// u^n coefficient of A(u) + A(-u) - 2.
pub fn quadratic_exact(n: usize, fs: &FieldSpec) -> Result<BigInt> {
    require_quadratic(fs)?;
    let a = quadratic_a_coeffs(n, fs.q());
    let mut c = &a[n] * BigInt::from(1 + (-1i32).pow(n as u32));
    if n == 0 {
        c -= 2;
    }
    Ok(c)
}

/// u^n coefficient of F_R(u) = u^d/(1+u^d)·A(u) + (-1)^d u^d/(1+(-1)^d u^d)·A(-u),
/// the characters ramified at a fixed place of degree d.
pub fn quadratic_ramified_exact(n: usize, d: usize, fs: &FieldSpec) -> Result<BigInt> {
    require_quadratic(fs)?;
    if d == 0 {
        return Err(Error::InvalidArgument("place degree must be positive".into()));
    }
    let a = quadratic_a_coeffs(n, fs.q());
    let mut total = BigInt::zero();
    let mut m = 1;
    while d * m <= n {
        let k = n - d * m;
        let sign = if m % 2 == 1 { 1 } else { -1 };
        let twist = if (d * m + k).is_multiple_of(2) { 1 } else { -1 };
        total += &a[k] * BigInt::from(sign * (1 + twist));
        m += 1;
    }
    Ok(total)
}

/// (1-q^{-2})/(1+q^{-d})·q^{n-d}, the displayed ramified main term.
pub fn quadratic_ramified_display(n: usize, d: usize, fs: &FieldSpec) -> Result<BigRational> {
    require_quadratic(fs)?;
    let q = fs.q();
    let main = (int(1) - inv_power(q, 2)) / (int(1) + inv_power(q, d));
    let scale = if n >= d { int(BigInt::from(q).pow((n - d) as u32)) } else { inv_power(q, d - n) };
    Ok(main * scale)
}

/// Theorem-style local density c_v at a place of degree d.
pub fn local_density(d: usize, t: SplittingType, fs: &FieldSpec) -> BigRational {
    let ell = fs.ell() as i64;
    let x = inv_power(fs.q(), d) * BigInt::from(ell - 1);
    let denom = int(1) + &x;
    match t {
        SplittingType::Ramified => &x / &denom,
        SplittingType::Split => int(1) / (denom * BigInt::from(ell)),
        SplittingType::Inert => ratio(ell - 1, ell) / denom,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantReport {
    pub cutoff: usize,
    pub value: f64,
    /// Exact value when the place product is empty (ℓ = 2).
    pub exact: Option<BigRational>,
    /// |C(D) - C(D+2)|.
    pub defect: f64,
    /// C(D)·Σ_{d>D} π(d)·Σ_j j·q^{-2d}/(1-q^{-d})².
    pub tail_bound: f64,
}

fn constant_log(d_max: usize, fs: &FieldSpec) -> f64 {
    let ell = fs.ell() as usize;
    let q = fs.q() as f64;
    let fact = factorial(ell as u64 - 2).to_f64().expect("small factorial");
    let mut log = (ell as f64 - 1.0) * (-q.powi(-2)).ln_1p() - fact.ln();
    for d in 1..=d_max {
        let pi = count_places_of_degree(d, fs.q()).to_f64().unwrap_or(f64::INFINITY);
        let x = q.powi(-(d as i32));
        for j in 1..=ell.saturating_sub(2) {
            let j = j as f64;
            log += pi * (-(j * x * x) / ((1.0 + x) * (1.0 + j * x))).ln_1p();
        }
    }
    log
}

/// C_ℓ truncated to places of degree ≤ D.
pub fn constant_c(d: usize, fs: &FieldSpec) -> Result<ConstantReport> {
    if d == 0 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    let ell = fs.ell() as usize;
    let value = constant_log(d, fs).exp();
    let next = constant_log(d + 2, fs).exp();
    let exact = (ell == 2).then(|| int(1) - inv_power(fs.q(), 2));
    let q = fs.q() as f64;
    let jsum: f64 = (1..=ell.saturating_sub(2)).map(|j| j as f64).sum();
    let mut tail = 0.0;
    for dd in d + 1..d + 400 {
        let x = q.powi(-(dd as i32));
        if x == 0.0 {
            break;
        }
        let pi = count_places_of_degree(dd, fs.q()).to_f64().unwrap_or(f64::INFINITY);
        tail += pi * x * x / ((1.0 - x) * (1.0 - x));
    }
    Ok(ConstantReport { cutoff: d, value, exact, defect: (value - next).abs(), tail_bound: value * jsum * tail })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MainTermReport {
    pub n: usize,
    pub coefficient: BigInt,
    pub main_term: f64,
    pub ratio: f64,
    /// coefficient / (C₂·q^n), exact for ℓ = 2.
    pub exact_ratio: Option<BigRational>,
}

/// Series coefficient at u^n over C_ℓ(D)·q^n·n^{ℓ-2}.
pub fn main_term_ratio(n: usize, d: usize, fs: &FieldSpec) -> Result<MainTermReport> {
    let series = character_count_series(n, fs);
    main_term_ratio_from(&series, n, d, fs)
}

/// As [`main_term_ratio`] with a precomputed counting series.
pub fn main_term_ratio_from(series: &CycloSeries, n: usize, d: usize, fs: &FieldSpec) -> Result<MainTermReport> {
    if n == 0 || n > series.truncation() {
        return Err(Error::InvalidArgument(format!("n = {n} outside 1..={}", series.truncation())));
    }
    let coefficient = series.coeff(n).as_integer().expect("integral counting series").clone();
    let c = constant_c(d, fs)?;
    let qn = BigInt::from(fs.q()).pow(n as u32);
    let poly = (n as f64).powi(fs.ell() as i32 - 2);
    let main_term = c.value * to_f64(&int(qn.clone())) * poly;
    let exact_ratio = c.exact.as_ref().map(|c2| BigRational::from_integer(coefficient.clone()) / (c2 * qn));
    let ratio = match &exact_ratio {
        Some(r) => to_f64(r),
        None => to_f64(&BigRational::from_integer(coefficient.clone())) / main_term,
    };
    Ok(MainTermReport { n, coefficient, main_term, ratio, exact_ratio })
}

/// Text dump: a `# lcyclic-series v1 …` header, then `k c` lines where c is
/// an integer or a bracketed coefficient vector.
pub fn write_dump(series: &CycloSeries, fs: &FieldSpec, construction: &str) -> String {
    let mut out = format!(
        "# lcyclic-series v1 q={} ell={} N={} construction={construction}\n",
        fs.q(),
        fs.ell(),
        series.truncation()
    );
    for (k, c) in series.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{k} {c}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DumpHeader {
    pub q: u32,
    pub ell: u32,
    pub truncation: usize,
    pub construction: String,
}

pub fn parse_dump(text: &str) -> Result<(DumpHeader, CycloSeries)> {
    let bad = |m: &str| Error::InvalidArgument(format!("series dump: {m}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty"))?;
    let rest = header.strip_prefix("# lcyclic-series v1 ").ok_or_else(|| bad("missing header"))?;
    let mut fields = BTreeMap::new();
    for kv in rest.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad("malformed header"))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(&format!("header lacks {k}")));
    let num = |k: &str| get(k)?.parse::<u64>().map_err(|_| bad(&format!("bad {k}")));
    let h = DumpHeader {
        q: num("q")? as u32,
        ell: num("ell")? as u32,
        truncation: num("N")? as usize,
        construction: get("construction")?.to_string(),
    };
    let mut coeffs = Vec::new();
    for (i, line) in lines.enumerate() {
        let (k, c) = line.split_once(' ').ok_or_else(|| bad("malformed line"))?;
        if k.parse::<usize>().ok() != Some(i) {
            return Err(bad("out-of-order index"));
        }
        let parse_int = |s: &str| s.parse::<BigInt>().map_err(|_| bad("bad integer"));
        let value = match c.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            Some(inner) => Cyclo::from_coeffs(inner.split(',').map(parse_int).collect::<Result<_>>()?),
            None => Cyclo::from_int(h.ell, parse_int(c)?),
        };
        if value.ell() != h.ell {
            return Err(bad("coefficient rank mismatch"));
        }
        coeffs.push(value);
    }
    if coeffs.len() != h.truncation + 1 {
        return Err(bad("coefficient count does not match N"));
    }
    let s = CycloSeries::from_coeffs(h.ell, coeffs);
    Ok((h, s))
}
