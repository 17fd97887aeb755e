//! Polynomials over F_q in canonical form.
//!
//! Coefficients are stored low degree first with no trailing zeros; the zero
//! polynomial is the empty vector. Polynomials are ordered by degree and
//! then lexicographically from the leading coefficient down, which is also
//! the order of the monic enumeration index (see [`Poly::monic_from_index`]).

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::algebra::field::{Elem, FieldSpec};
use crate::arith::prime_factors;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Elem>);

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![1])
    }

    pub fn constant(c: Elem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial X.
    pub fn x() -> Self {
        Poly(vec![0, 1])
    }

    /// X + c.
    pub fn linear(c: Elem) -> Self {
        Poly(vec![c, 1])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    /// Degree, with the zero polynomial mapped to `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with deg 0 := 0 for the zero polynomial; convenient where the
    /// zero polynomial cannot occur.
    pub fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// The monic polynomial of degree d whose lower coefficients are the
    /// base-q digits of `index` (coefficient of X^k is digit k).
    pub fn monic_from_index(d: usize, mut index: u64, q: u32) -> Self {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((index % q as u64) as Elem);
            index /= q as u64;
        }
        coeffs.push(1);
        Poly(coeffs)
    }

    /// Inverse of [`Poly::monic_from_index`] for monic polynomials.
    pub fn monic_index(&self, q: u32) -> u64 {
        self.0[..self.deg()].iter().rev().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }

    /// Index of a polynomial of degree < d as an element of F_q[X]/(v),
    /// deg v = d: Σ c_k q^k.
    pub fn residue_index(&self, q: u32) -> u64 {
        self.0.iter().rev().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }

    pub fn from_residue_index(mut index: u64, q: u32) -> Self {
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push((index % q as u64) as Elem);
            index /= q as u64;
        }
        Poly(coeffs)
    }

    pub fn eval(&self, fs: &FieldSpec, a: Elem) -> Elem {
        self.0.iter().rev().fold(0, |acc, &c| fs.add(fs.mul(acc, a), c))
    }

    pub fn add(&self, other: &Poly, fs: &FieldSpec) -> Poly {
        let n = self.0.len().max(other.0.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(0);
                let b = other.0.get(i).copied().unwrap_or(0);
                fs.add(a, b)
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self, fs: &FieldSpec) -> Poly {
        Poly(self.0.iter().map(|&c| fs.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly, fs: &FieldSpec) -> Poly {
        self.add(&other.neg(fs), fs)
    }

    pub fn scale(&self, c: Elem, fs: &FieldSpec) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|&a| fs.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, fs: &FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = fs.add(out[i + j], fs.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn divrem(&self, divisor: &Poly, fs: &FieldSpec) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), Poly::from_coeffs(rem));
        }
        let lead_inv = fs.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut quot = vec![0; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = fs.mul(c, lead_inv);
            quot[top - dd] = factor;
            for (i, &m) in divisor.0.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = fs.sub(rem[idx], fs.mul(factor, m));
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly, fs: &FieldSpec) -> Poly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.0.len() <= dd {
            return self.clone();
        }
        let lead_inv = fs.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.0.clone();
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = fs.mul(c, lead_inv);
            for (i, &m) in divisor.0.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = fs.sub(rem[idx], fs.mul(factor, m));
            }
        }
        rem.truncate(dd);
        Poly::from_coeffs(rem)
    }

    pub fn divides(&self, other: &Poly, fs: &FieldSpec) -> bool {
        other.rem(self, fs).is_zero()
    }

    pub fn make_monic(&self, fs: &FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = fs.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv, fs)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly, fs: &FieldSpec) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, fs);
            a = b;
            b = r;
        }
        a.make_monic(fs)
    }

    pub fn is_coprime(&self, other: &Poly, fs: &FieldSpec) -> bool {
        self.gcd(other, fs).is_one()
    }

    pub fn derivative(&self, fs: &FieldSpec) -> Poly {
        let coeffs = self.0.iter().enumerate().skip(1).map(|(i, &c)| fs.mul(fs.from_int(i as i64), c)).collect();
        Poly::from_coeffs(coeffs)
    }

    /// self^k mod m.
    pub fn powmod(&self, mut k: u128, m: &Poly, fs: &FieldSpec) -> Poly {
        let mut base = self.rem(m, fs);
        let mut acc = Poly::one().rem(m, fs);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, fs).rem(m, fs);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, fs).rem(m, fs);
            }
        }
        acc
    }

    pub fn is_squarefree(&self, fs: &FieldSpec) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.is_constant() {
            return Ok(true);
        }
        Ok(self.gcd(&self.derivative(fs), fs).is_constant())
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, fs: &FieldSpec) -> bool {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        if d == 1 {
            return true;
        }
        let f = self.make_monic(fs);
        let q = fs.q() as u128;
        let x = Poly::x();
        let mut frob = vec![x.rem(&f, fs)];
        for _ in 0..d {
            let next = frob.last().unwrap().powmod(q, &f, fs);
            frob.push(next);
        }
        if frob[d] != x.rem(&f, fs) {
            return false;
        }
        prime_factors(d as u64).into_iter().all(|r| {
            let h = frob[d / r as usize].sub(&x, fs);
            h.gcd(&f, fs).is_one()
        })
    }

    /// Factorization into monic irreducibles with multiplicities, ordered by
    /// (degree, lexicographic). Distinct-degree splitting followed by trial
    /// division by the monic polynomials of each degree.
    pub fn factor(&self, fs: &FieldSpec) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let unit = self.leading();
        let mut rem = self.make_monic(fs);
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        let q = fs.q();
        let x = Poly::x();
        let mut frob = x.clone();
        let mut k = 0usize;
        while rem.deg() > 0 {
            k += 1;
            if 2 * k > rem.deg() {
                factors.push((rem.clone(), 1));
                break;
            }
            frob = frob.powmod(q as u128, &rem, fs);
            let g = frob.sub(&x, fs).gcd(&rem, fs);
            if g.is_one() {
                continue;
            }
            // g is the product of the distinct degree-k irreducible factors.
            let mut g_rem = g;
            let candidates = q as u64;
            let total = candidates.pow(k as u32);
            for idx in 0..total {
                if g_rem.is_one() {
                    break;
                }
                let cand = Poly::monic_from_index(k, idx, q);
                if cand.divides(&g_rem, fs) {
                    g_rem = g_rem.divrem(&cand, fs).0;
                    let mut mult = 0;
                    while cand.divides(&rem, fs) {
                        rem = rem.divrem(&cand, fs).0;
                        mult += 1;
                    }
                    factors.push((cand, mult));
                }
            }
            frob = frob.rem(&rem, fs);
        }
        factors.sort();
        Ok(Factorization { unit, factors })
    }

    /// Human-readable form in the variable X; extension-field coefficients
    /// are written as parenthesized polynomials in t.
    pub fn render(&self, fs: &FieldSpec) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            let coef = render_elem(c, fs);
            match (k, c == 1) {
                (0, _) => out.push_str(&coef),
                (1, true) => out.push('X'),
                (_, true) => {
                    let _ = write!(out, "X^{k}");
                }
                (1, false) => {
                    let _ = write!(out, "{coef}X");
                }
                (_, false) => {
                    let _ = write!(out, "{coef}X^{k}");
                }
            }
        }
        out
    }

    /// Compact machine form used in cache records: comma-separated integer
    /// coefficient encodings, low degree first.
    pub fn to_record(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn from_record(s: &str, fs: &FieldSpec) -> Result<Poly> {
        if s.is_empty() {
            return Ok(Poly::zero());
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.parse::<Elem>()
                    .ok()
                    .filter(|&c| c < fs.q())
                    .ok_or_else(|| Error::Cache(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

fn render_elem(c: Elem, fs: &FieldSpec) -> String {
    if fs.e() == 1 {
        return c.to_string();
    }
    let coords = fs.coords(c);
    let mut terms = Vec::new();
    for (k, &a) in coords.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let t = match (k, a) {
            (0, _) => a.to_string(),
            (1, 1) => "t".to_string(),
            (1, _) => format!("{a}t"),
            (_, 1) => format!("t^{k}"),
            _ => format!("{a}t^{k}"),
        };
        terms.push(t);
    }
    if terms.len() == 1 && (!terms[0].contains('t') || terms[0].starts_with('t')) {
        terms.remove(0)
    } else {
        format!("({})", terms.join("+"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, fs: &FieldSpec) -> Poly {
        self.factors.iter().fold(Poly::constant(self.unit), |acc, (f, m)| (0..*m).fold(acc, |a, _| a.mul(f, fs)))
    }
}

/// Iterator over the monic polynomials of degree d in index order.
pub fn monic_polys(d: usize, q: u32) -> impl Iterator<Item = Poly> {
    let total = (q as u64).pow(d as u32);
    (0..total).map(move |idx| Poly::monic_from_index(d, idx, q))
}

/// The monic square-free polynomials of degree d, in index order.
pub fn monic_squarefree(d: usize, fs: &FieldSpec) -> impl Iterator<Item = Poly> + '_ {
    monic_polys(d, fs.q()).filter(move |f| f.is_squarefree(fs).unwrap_or(false))
}

/// q^d - q^{d-1} for d ≥ 2, q for d = 1, 1 for d = 0.
pub fn squarefree_count(d: usize, q: u64) -> u64 {
    match d {
        0 => 1,
        1 => q,
        _ => q.pow(d as u32) - q.pow(d as u32 - 1),
    }
}

/// Upper bound on q^d for the irreducible sieve.
pub const SIEVE_BUDGET: u64 = 1 << 26;

/// All monic irreducibles of degree d in index order, by sieving out the
/// products of an irreducible of degree a ≤ d/2 with a monic of degree d-a.
pub fn irreducibles_of_degree(d: usize, fs: &FieldSpec) -> Result<Vec<Poly>> {
    let mut cache: Vec<Vec<Poly>> = vec![Vec::new()];
    for k in 1..=d {
        let level = sieve_level(k, fs, &cache)?;
        cache.push(level);
    }
    Ok(cache.pop().unwrap_or_default())
}

/// Irreducibles of every degree 1..=d; entry k holds degree k (entry 0 empty).
pub fn irreducibles_up_to(d: usize, fs: &FieldSpec) -> Result<Vec<Vec<Poly>>> {
    let mut cache: Vec<Vec<Poly>> = vec![Vec::new()];
    for k in 1..=d {
        let level = sieve_level(k, fs, &cache)?;
        cache.push(level);
    }
    Ok(cache)
}

fn sieve_level(d: usize, fs: &FieldSpec, lower: &[Vec<Poly>]) -> Result<Vec<Poly>> {
    let q = fs.q();
    let total = (q as u64)
        .checked_pow(d as u32)
        .filter(|&t| t <= SIEVE_BUDGET)
        .ok_or_else(|| Error::Budget(format!("irreducible sieve over q^{d} polynomials")))?;
    if d == 1 {
        return Ok((0..q).map(Poly::linear).collect());
    }
    let mut composite = vec![false; total as usize];
    for (a, irr) in lower.iter().enumerate().take(d / 2 + 1).skip(1) {
        for g in irr {
            for h in monic_polys(d - a, q) {
                composite[g.mul(&h, fs).monic_index(q) as usize] = true;
            }
        }
    }
    Ok(composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(idx, _)| Poly::monic_from_index(d, idx as u64, q))
        .collect())
}

/// Parses a polynomial in X such as `X^2+1`, `2X+1`, `(t+1)X^3+t`.
/// Integer coefficients are reduced modulo p; `t` denotes the generator of
/// F_q over F_p (the class of T in F_p[T]/(modulus)).
pub fn parse_poly(input: &str, fs: &FieldSpec) -> Result<Poly> {
    let s: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::InvalidPlace(input.to_string()));
    }
    let mut parser = PolyParser { s: &s, pos: 0, fs, src: input };
    let p = parser.sum('X')?;
    if parser.pos != s.len() {
        return Err(parser.error());
    }
    let coeffs = p.into_iter().map(|c| fs.from_coords(&c)).collect::<Vec<_>>();
    Ok(Poly::from_coeffs(coeffs))
}

struct PolyParser<'a> {
    s: &'a [char],
    pos: usize,
    fs: &'a FieldSpec,
    src: &'a str,
}

/// Coefficient vectors during parsing: outer index is the power of the
/// variable, inner is the F_p-coordinate vector (power of t).
type Dense = Vec<Vec<u32>>;

impl PolyParser<'_> {
    fn error(&self) -> Error {
        Error::InvalidPlace(self.src.to_string())
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.s[start..self.pos].iter().collect::<String>().parse().unwrap_or(u64::MAX))
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.number().ok_or_else(|| self.error())?;
            if n > 64 {
                return Err(self.error());
            }
            Ok(n as usize)
        } else {
            Ok(1)
        }
    }

    /// sum := ['-'] term (('+'|'-') term)*
    fn sum(&mut self, var: char) -> Result<Dense> {
        let mut acc: Dense = Vec::new();
        let mut negate = false;
        if self.peek() == Some('-') {
            negate = true;
            self.pos += 1;
        }
        loop {
            let term = self.term(var)?;
            self.accumulate(&mut acc, term, negate);
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(acc)
    }

    fn accumulate(&self, acc: &mut Dense, term: Dense, negate: bool) {
        let p = self.fs.p();
        let e = self.fs.e() as usize;
        if acc.len() < term.len() {
            acc.resize(term.len(), vec![0; e]);
        }
        for (k, c) in term.into_iter().enumerate() {
            for (i, v) in c.into_iter().enumerate() {
                let v = if negate { (p - v % p) % p } else { v % p };
                acc[k][i] = (acc[k][i] + v) % p;
            }
        }
    }

    /// term := [coef ['*']] [var ['^' n]]
    fn term(&mut self, var: char) -> Result<Dense> {
        let e = self.fs.e() as usize;
        let p = self.fs.p() as u64;
        let start = self.pos;
        let mut coef = {
            let mut c = vec![0u32; e];
            c[0] = 1;
            c
        };
        if let Some(n) = self.number() {
            coef = vec![0; e];
            coef[0] = (n % p) as u32;
        } else if self.peek() == Some('(') && var == 'X' {
            self.pos += 1;
            let inner = self.sum('t')?;
            if self.peek() != Some(')') {
                return Err(self.error());
            }
            self.pos += 1;
            coef = self.reduce_t(inner)?;
        } else if self.peek() == Some('t') && var == 'X' {
            self.pos += 1;
            let k = self.exponent()?;
            let mut dense = vec![vec![0u32]; k + 1];
            dense[k] = vec![1];
            coef = self.reduce_t(dense)?;
        }
        if self.peek() == Some('*') {
            self.pos += 1;
        }
        let power = if matches!(self.peek(), Some(c) if c == var || c.to_ascii_uppercase() == var) {
            self.pos += 1;
            Some(self.exponent()?)
        } else {
            None
        };
        if self.pos == start {
            return Err(self.error());
        }
        let k = power.unwrap_or(0);
        if var == 't' {
            // Inside a t-polynomial the "coordinates" are just F_p scalars.
            let mut dense = vec![vec![0u32]; k + 1];
            dense[k] = vec![coef[0]];
            return Ok(dense);
        }
        let mut dense = vec![vec![0u32; e]; k + 1];
        dense[k] = coef;
        Ok(dense)
    }

    /// Reduces a polynomial in t (scalar coefficients) modulo the field's
    /// defining modulus, returning the coordinate vector.
    fn reduce_t(&self, dense: Dense) -> Result<Vec<u32>> {
        let p = self.fs.p() as u64;
        let m = self.fs.modulus();
        let e = self.fs.e() as usize;
        let mut c: Vec<u64> = dense.iter().map(|v| v.first().copied().unwrap_or(0) as u64).collect();
        for top in (e..c.len()).rev() {
            let lead = c[top] % p;
            if lead == 0 {
                continue;
            }
            for (i, &mi) in m.iter().enumerate() {
                c[top - e + i] = (c[top - e + i] + (p - lead) * mi as u64) % p;
            }
        }
        c.resize(e.max(c.len()), 0);
        Ok(c.into_iter().take(e).map(|v| (v % p) as u32).collect())
    }
}
