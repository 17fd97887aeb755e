//! The coefficient field F_q, q = p^e, with q ≡ 1 (mod ℓ).
//!
//! Elements are encoded as integers `0..q`: the element
//! c_0 + c_1 T + ... + c_{e-1} T^{e-1} of F_p[T]/(modulus) is stored as
//! Σ c_i p^i. Integer order on the encoding is the fixed total order on
//! field elements used for every deterministic choice (modulus, generator).

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// A field element in its integer encoding.
pub type Elem = u32;

/// Default upper bound on q for the dense log/exp tables.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 16;

/// Add tables are precomputed up to this field size.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    ell: u32,
    /// Monic irreducible modulus over F_p, low coefficient first (length e+1).
    modulus: Vec<u32>,
    mu: Elem,
    b_ell: Elem,
    exp_table: Vec<Elem>,
    log_table: Vec<u32>,
    add_table: Option<Vec<Elem>>,
    neg_table: Vec<Elem>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.ell == other.ell
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds F_{p^e} for the prime ℓ with the default table budget.
    pub fn new(p: u64, e: u32, ell: u64) -> Result<Self> {
        Self::with_budget(p, e, ell, DEFAULT_FIELD_BUDGET)
    }

    pub fn with_budget(p: u64, e: u32, ell: u64, budget: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= budget)
            .ok_or(Error::FieldTooLarge { q: p.saturating_pow(e), limit: budget })?;
        if q % ell != 1 {
            return Err(Error::BadCongruence { q, ell });
        }
        let (p32, q32) = (p as u32, q as u32);
        let modulus = if e == 1 { vec![0, 1] } else { smallest_irreducible(p32, e) };

        let mut spec = FieldSpec {
            p: p32,
            e,
            q: q32,
            ell: ell as u32,
            modulus,
            mu: 0,
            b_ell: 0,
            exp_table: Vec::new(),
            log_table: Vec::new(),
            add_table: None,
            neg_table: Vec::new(),
        };
        spec.neg_table = (0..q32).map(|a| spec.neg_slow(a)).collect();
        if q32 <= ADD_TABLE_LIMIT {
            let mut table = vec![0; (q32 * q32) as usize];
            for a in 0..q32 {
                for b in 0..q32 {
                    table[(a * q32 + b) as usize] = spec.add_slow(a, b);
                }
            }
            spec.add_table = Some(table);
        }

        let order = q32 - 1;
        let factors = prime_factors(order as u64);
        let mu = (1..q32)
            .find(|&g| factors.iter().all(|&r| spec.pow_slow(g, (order as u64) / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp_table = Vec::with_capacity(order as usize);
        let mut log_table = vec![u32::MAX; q32 as usize];
        let mut x: Elem = 1;
        for k in 0..order {
            exp_table.push(x);
            log_table[x as usize] = k;
            x = spec.mul_slow(x, mu);
        }
        debug_assert_eq!(x, 1);
        spec.mu = mu;
        spec.exp_table = exp_table;
        spec.log_table = log_table;
        spec.b_ell = spec.exp((order / spec.ell) as u64);
        Ok(spec)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// The defining modulus over F_p, low coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The fixed generator μ of F_q^×: the smallest element of order q-1.
    pub fn multiplicative_generator(&self) -> Elem {
        self.mu
    }

    /// b_ℓ = μ^{(q-1)/ℓ}, the fixed primitive ℓ-th root of unity.
    pub fn b_ell(&self) -> Elem {
        self.b_ell
    }

    /// (q-1)/ℓ.
    pub fn cofactor(&self) -> u32 {
        (self.q - 1) / self.ell
    }

    /// Coordinates of an element over F_p, low first.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut x = a;
        for _ in 0..self.e {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    pub fn from_coords(&self, coords: &[u32]) -> Elem {
        coords.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    /// The image of an integer under Z → F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log_table[a as usize] + self.log_table[b as usize];
        let order = self.q - 1;
        self.exp_table[(if s >= order { s - order } else { s }) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInput);
        }
        let order = self.q - 1;
        let l = self.log_table[a as usize];
        Ok(self.exp_table[((order - l) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u128) -> Elem {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let order = (self.q - 1) as u128;
        let l = self.log_table[a as usize] as u128;
        self.exp_table[((l * (k % order)) % order) as usize]
    }

    /// μ^k.
    pub fn exp(&self, k: u64) -> Elem {
        self.exp_table[(k % (self.q as u64 - 1)) as usize]
    }

    /// Discrete logarithm base μ; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log_table[a as usize])
    }

    /// Whether a nonzero element lies in (F_q^×)^ℓ.
    pub fn is_ell_power(&self, a: Elem) -> Result<bool> {
        let l = self.log(a).ok_or(Error::ZeroInput)?;
        Ok(l % self.ell == 0)
    }

    /// The exponent k with a^{(q-1)/ℓ} = b_ℓ^k, i.e. the class of a in
    /// F_q^× / (F_q^×)^ℓ read through μ.
    pub fn ell_class(&self, a: Elem) -> Result<u32> {
        let l = self.log(a).ok_or(Error::ZeroInput)?;
        Ok(l % self.ell)
    }

    /// Exponent k with b_ℓ^k = z, for z an ℓ-th root of unity.
    pub fn root_of_unity_exponent(&self, z: Elem) -> Option<u32> {
        let l = self.log(z)?;
        let c = self.cofactor();
        (l % c == 0).then(|| l / c)
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut x, mut y, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.e {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let coords: Vec<u32> = self.coords(a).iter().map(|&c| (self.p - c) % self.p).collect();
        self.from_coords(&coords)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as Elem;
        }
        let prod = fp_poly_mulmod(&self.coords(a), &self.coords(b), &self.modulus, self.p);
        self.from_coords(&prod)
    }

    fn pow_slow(&self, a: Elem, mut k: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }
}

/// Product of two F_p polynomials of degree < e reduced modulo a monic
/// modulus of degree e; output has length e.
fn fp_poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus.iter().enumerate().take(e) {
            prod[k - e + i] = (prod[k - e + i] + (p64 - c) * m as u64) % p64;
        }
    }
    prod.truncate(e);
    prod.resize(e, 0);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Smallest monic irreducible of degree e over F_p in the integer encoding
/// of its lower coefficients.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let total = (p as u64).pow(e);
    (0..total)
        .map(|idx| {
            let mut coeffs = Vec::with_capacity(e as usize + 1);
            let mut x = idx;
            for _ in 0..e {
                coeffs.push((x % p as u64) as u32);
                x /= p as u64;
            }
            coeffs.push(1);
            coeffs
        })
        .find(|m| fp_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Irreducibility over F_p by trial division with all monic polynomials of
/// degree ≤ deg/2. Only used for the small field-defining moduli.
fn fp_irreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut x = idx;
            for _ in 0..k {
                g.push((x % p as u64) as u32);
                x /= p as u64;
            }
            g.push(1);
            if fp_rem_is_zero(m, &g, p) {
                return false;
            }
        }
    }
    true
}

fn fp_rem_is_zero(a: &[u32], monic: &[u32], p: u32) -> bool {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let k = monic.len() - 1;
    for top in (k..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in monic.iter().enumerate() {
            r[top - k + i] = (r[top - k + i] + (p64 - c) * m as u64) % p64;
        }
    }
    r.iter().take(k).all(|&c| c == 0)
}
