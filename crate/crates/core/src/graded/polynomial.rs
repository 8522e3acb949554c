//! Weighted polynomial rings `Q[x_1, …, x_n]`, a small concrete oracle used
//! for tests and as a reference algebra.

use std::sync::Arc;

use super::slice::{BasisRef, Combination, DegreeSlice, Label};
use super::traits::{GradedAlgebra, SliceCache, SliceFamily};
use super::GradedError;
use crate::lattice::IntVector;

/// Basis of slice `m`: exponent vectors of weighted degree `m`.
#[derive(Debug)]
pub struct PolynomialRing {
    weights: Vec<i64>,
    cache: SliceCache,
}

impl PolynomialRing {
    /// Panics unless all weights are positive.
    pub fn new(weights: Vec<i64>) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        PolynomialRing {
            weights,
            cache: SliceCache::default(),
        }
    }

    pub fn standard(n: usize) -> Self {
        Self::new(vec![1; n])
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    fn monomials(&self, degree: i64) -> Vec<Label> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.weights.len()];
        fill(&self.weights, 0, degree, &mut cur, &mut out);
        out
    }

    fn exponent(&self, r: BasisRef) -> Result<IntVector, GradedError> {
        match self.slice(r.degree)?.basis().get(r.index) {
            Some(Label::Point(p)) => Ok(p.clone()),
            _ => Err(GradedError::InvalidBasisRef {
                degree: r.degree,
                index: r.index,
            }),
        }
    }
}

fn fill(weights: &[i64], i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Label>) {
    if i == weights.len() {
        if left == 0 {
            out.push(Label::Point(IntVector::from_i64s(cur)));
        }
        return;
    }
    for e in 0..=left / weights[i] {
        cur[i] = e;
        fill(weights, i + 1, left - e * weights[i], cur, out);
    }
    cur[i] = 0;
}

impl GradedAlgebra for PolynomialRing {
    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        self.cache.get_or_try_insert(degree, || {
            if degree < 0 {
                return Ok(DegreeSlice::empty(degree));
            }
            DegreeSlice::new(degree, self.monomials(degree))
        })
    }

    fn multiply_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError> {
        let p = &self.exponent(a)? + &self.exponent(b)?;
        let target = self.slice(a.degree + b.degree)?;
        let i = target.index_of(&Label::Point(p)).ok_or_else(|| {
            GradedError::Oracle("product monomial missing from target slice".into())
        })?;
        Ok(Combination::basis(i))
    }

    fn unit(&self) -> Result<Combination, GradedError> {
        Ok(Combination::basis(0))
    }
}

/// The twisted module `R(s)`: slice `m` is `R_{m+s}`.
pub struct Twist {
    ring: Arc<PolynomialRing>,
    shift: i64,
}

impl Twist {
    pub fn new(ring: Arc<PolynomialRing>, shift: i64) -> Self {
        Twist { ring, shift }
    }
}

impl SliceFamily for Twist {
    fn lowest_degree(&self) -> Option<i64> {
        None
    }

    fn family_slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        Ok(Arc::new(
            self.ring.slice(degree + self.shift)?.with_degree(degree),
        ))
    }

    fn family_act(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        self.ring
            .multiply_basis(r, BasisRef::new(x.degree + self.shift, x.index))
    }
}
