//! The i.i.d. model for #C(F_q): a sum of q+1 independent copies of a
//! variable taking the values 0, 1, ℓ, and exact comparison metrics for
//! point-count distributions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::FieldSpec;
use crate::rational::{ratio, to_f64};

/// Law of one summand: P(0) = p0, P(1) = p1, P(ℓ) = p_ell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RVSpec {
    pub ell: u32,
    pub p0: BigRational,
    pub p1: BigRational,
    pub p_ell: BigRational,
}

impl RVSpec {
    pub fn mass(&self) -> Vec<(usize, BigRational)> {
        vec![(0, self.p0.clone()), (1, self.p1.clone()), (self.ell as usize, self.p_ell.clone())]
    }

    pub fn mean(&self) -> BigRational {
        &self.p1 + &self.p_ell * BigInt::from(self.ell)
    }
}

pub fn rv_distribution(fs: &FieldSpec) -> RVSpec {
    let (q, ell) = (fs.q() as i64, fs.ell() as i64);
    let denom = q + ell - 1;
    RVSpec {
        ell: fs.ell(),
        p0: ratio((ell - 1) * q, ell * denom),
        p1: ratio(ell - 1, denom),
        p_ell: ratio(q, ell * denom),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Model,
    Empirical,
}

/// Exact probability vector indexed by m = 0, 1, 2, ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistVector {
    pub probs: Vec<BigRational>,
    pub provenance: Provenance,
}

impl DistVector {
    pub fn point_mass(m: usize, len: usize, provenance: Provenance) -> Self {
        let mut probs = vec![BigRational::zero(); len.max(m + 1)];
        probs[m] = BigRational::one();
        DistVector { probs, provenance }
    }

    /// Normalized histogram; panics on an all-zero histogram.
    pub fn from_counts(counts: &[u64], provenance: Provenance) -> Self {
        let total: u64 = counts.iter().sum();
        assert!(total > 0, "empty histogram");
        let probs = counts.iter().map(|&c| ratio(c, total)).collect();
        DistVector { probs, provenance }
    }

    pub fn get(&self, m: usize) -> BigRational {
        self.probs.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn mean(&self) -> BigRational {
        self.probs.iter().enumerate().fold(BigRational::zero(), |acc, (m, p)| acc + p * BigInt::from(m))
    }

    pub fn max_support(&self) -> Option<usize> {
        self.probs.iter().rposition(|p| !p.is_zero())
    }

    pub fn convolve(&self, other: &DistVector) -> DistVector {
        let mut probs = vec![BigRational::zero(); self.probs.len() + other.probs.len() - 1];
        for (i, a) in self.probs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.probs.iter().enumerate() {
                probs[i + j] += a * b;
            }
        }
        DistVector { probs, provenance: self.provenance }
    }

    /// Pads with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> DistVector {
        let mut probs = self.probs.clone();
        if probs.len() < len {
            probs.resize(len, BigRational::zero());
        }
        DistVector { probs, provenance: self.provenance }
    }
}

/// The k-fold convolution of the model law.
pub fn sum_distribution(k: usize, fs: &FieldSpec) -> DistVector {
    let rv = rv_distribution(fs);
    let mut single = vec![BigRational::zero(); rv.ell as usize + 1];
    for (m, p) in rv.mass() {
        single[m] += p;
    }
    let single = DistVector { probs: single, provenance: Provenance::Model };
    (0..k).fold(DistVector::point_mass(0, 1, Provenance::Model), |acc, _| acc.convolve(&single))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub total_variation: BigRational,
    pub sup_distance: BigRational,
    pub mean_a: BigRational,
    pub mean_b: BigRational,
}

impl Comparison {
    pub fn total_variation_f64(&self) -> f64 {
        to_f64(&self.total_variation)
    }
}

pub fn compare_distributions(a: &DistVector, b: &DistVector) -> Comparison {
    let len = a.probs.len().max(b.probs.len());
    let (a, b) = (a.padded(len), b.padded(len));
    let mut l1 = BigRational::zero();
    let mut sup = BigRational::zero();
    for (x, y) in a.probs.iter().zip(&b.probs) {
        let d = (x - y).abs();
        if d > sup {
            sup = d.clone();
        }
        l1 += d;
    }
    Comparison { total_variation: l1 / BigInt::from(2), sup_distance: sup, mean_a: a.mean(), mean_b: b.mean() }
}
