//! Dimension-level arguments: the counting inequality
//! `Σ_i h_R(m − n_i) ≥ h_M(m)` satisfied by any module generated in degrees
//! `n_i`, refutations built from it, and growth-exponent estimates.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::traits::{GradedAlgebra, GradedModule};
use super::GradedError;
use crate::lattice::Rat;

/// A degree → dimension table.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HilbertFunction {
    values: BTreeMap<i64, u64>,
}

impl HilbertFunction {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        HilbertFunction {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn from_fn(range: RangeInclusive<i64>, f: impl Fn(i64) -> u64) -> Self {
        Self::from_pairs(range.map(|m| (m, f(m))))
    }

    pub fn of_module(
        m: &dyn GradedModule,
        range: RangeInclusive<i64>,
    ) -> Result<Self, GradedError> {
        let mut values = BTreeMap::new();
        for k in range {
            values.insert(k, m.slice(k)?.dimension() as u64);
        }
        Ok(HilbertFunction { values })
    }

    pub fn of_algebra(
        r: &dyn GradedAlgebra,
        range: RangeInclusive<i64>,
    ) -> Result<Self, GradedError> {
        let mut values = BTreeMap::new();
        for k in range {
            values.insert(k, r.slice(k)?.dimension() as u64);
        }
        Ok(HilbertFunction { values })
    }

    pub fn get(&self, m: i64) -> Option<u64> {
        self.values.get(&m).copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.values.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.values.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.values.iter().map(|(&m, &d)| (m, d))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn require(&self, m: i64) -> Result<u64, GradedError> {
        self.get(m)
            .ok_or(GradedError::InsufficientRange { degree: m })
    }

    /// Algebra convention: zero in negative degrees.
    fn algebra_value(&self, m: i64) -> Result<u64, GradedError> {
        if m < 0 {
            Ok(0)
        } else {
            self.require(m)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingRow {
    pub degree: i64,
    #[serde(serialize_with = "crate::serde_rat::serialize_int")]
    pub generated_bound: BigInt,
    pub module_dimension: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingCheck {
    pub holds: bool,
    pub first_failure: Option<i64>,
    pub rows: Vec<CountingRow>,
}

/// Checks `Σ_i h_alg(m − n_i) ≥ h_mod(m)` for every `m` in `range`.
pub fn counting_bound_check(
    generator_degrees: &[i64],
    h_alg: &HilbertFunction,
    h_mod: &HilbertFunction,
    range: RangeInclusive<i64>,
) -> Result<CountingCheck, GradedError> {
    let mut rows = Vec::new();
    let mut first_failure = None;
    for m in range {
        let rhs = h_mod.require(m)?;
        let mut lhs = BigInt::zero();
        for &n in generator_degrees {
            lhs += h_alg.algebra_value(m - n)?;
        }
        if lhs < BigInt::from(rhs) && first_failure.is_none() {
            first_failure = Some(m);
        }
        rows.push(CountingRow {
            degree: m,
            generated_bound: lhs,
            module_dimension: rhs,
        });
    }
    Ok(CountingCheck {
        holds: first_failure.is_none(),
        first_failure,
        rows,
    })
}

/// For one generator-degree bound `e`: the first degree where even the
/// largest possible submodule generated in degrees `≤ e` is too small.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingFailure {
    pub generator_degree_bound: i64,
    pub degree: i64,
    #[serde(serialize_with = "crate::serde_rat::serialize_int")]
    pub generated_bound: BigInt,
    pub module_dimension: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingWitness {
    /// The bounding sum, e.g. `Σ_{d=p}^{e} dim M_d · dim R_{m−d}`.
    pub bound_formula: String,
    pub max_generator_degree: i64,
    pub failures: Vec<CountingFailure>,
    pub algebra_growth: Option<u32>,
    pub module_growth: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingProbe {
    pub per_bound: Vec<(i64, Option<CountingFailure>)>,
    pub algebra_growth: Option<u32>,
    pub module_growth: Option<u32>,
    pub witness: Option<CountingWitness>,
}

/// Tries to refute finite generation of a module from dimensions alone.
///
/// A generating set with degrees `≤ e` can be shrunk to at most `dim M_d`
/// elements in each degree `d`, so `Σ_{d=p}^{e} dim M_d · h_R(m − d)` bounds
/// the degree-`m` part of anything generated in degrees `≤ e`; it dominates
/// every generator multiset with degrees `≤ e`. If that bound fails somewhere
/// in `range` for every `e ≤ max_generator_degree`, and the module grows with
/// a strictly larger exponent than the algebra (so the same failure recurs for
/// every `e`), a witness is emitted.
pub fn counting_refutation(
    h_alg: &HilbertFunction,
    h_mod: &HilbertFunction,
    module_offset: i64,
    max_generator_degree: i64,
    range: RangeInclusive<i64>,
) -> Result<CountingProbe, GradedError> {
    let algebra_growth = growth_degree(h_alg, range.clone())?.exponent;
    let module_growth = growth_degree(h_mod, range.clone())?.exponent;
    let mut per_bound = Vec::new();
    for e in module_offset..=max_generator_degree {
        let caps: Vec<(i64, u64)> = (module_offset..=e)
            .map(|d| Ok((d, h_mod.require(d)?)))
            .collect::<Result<_, GradedError>>()?;
        let mut failure = None;
        for m in range.clone() {
            let rhs = h_mod.require(m)?;
            let mut lhs = BigInt::zero();
            for &(d, c) in &caps {
                lhs += BigInt::from(c) * h_alg.algebra_value(m - d)?;
            }
            if lhs < BigInt::from(rhs) {
                failure = Some(CountingFailure {
                    generator_degree_bound: e,
                    degree: m,
                    generated_bound: lhs,
                    module_dimension: rhs,
                });
                break;
            }
        }
        per_bound.push((e, failure));
    }
    let growth_gap = match (module_growth, algebra_growth) {
        (Some(gm), Some(ga)) => gm > ga,
        (Some(_), None) => true,
        _ => false,
    };
    let all_fail = !per_bound.is_empty() && per_bound.iter().all(|(_, f)| f.is_some());
    let witness = (growth_gap && all_fail).then(|| CountingWitness {
        bound_formula: format!("sum_{{d={module_offset}}}^{{e}} dim M_d * dim R_(m-d)"),
        max_generator_degree,
        failures: per_bound.iter().filter_map(|(_, f)| f.clone()).collect(),
        algebra_growth,
        module_growth,
    });
    Ok(CountingProbe {
        per_bound,
        algebra_growth,
        module_growth,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthEstimate {
    /// `None` when the function vanishes on the sampled tail.
    pub exponent: Option<u32>,
}

const MAX_EXPONENT: u32 = 64;

/// Estimates the exponent `d` with `h(m) ≍ m^d` from the sampled tail.
///
/// The tail (the upper half of the positive sampled degrees) is split into a
/// lower window `A` and an upper window `B`. With `ρ_d` the ratio of
/// `Σ h / Σ m^d` on `B` to the same on `A`, the estimate is the smallest `d`
/// with `ρ_d² ≤ mid(B) / mid(A)`: the normalized function grows by less than
/// `√m` across the tail. All arithmetic is exact.
pub fn growth_degree(
    h: &HilbertFunction,
    range: RangeInclusive<i64>,
) -> Result<GrowthEstimate, GradedError> {
    let samples: Vec<(i64, u64)> = range
        .filter(|&m| m >= 1)
        .map(|m| {
            h.get(m)
                .map(|v| (m, v))
                .ok_or(GradedError::InsufficientRange { degree: m })
        })
        .collect::<Result<_, _>>()?;
    if samples.len() < 8 {
        return Err(GradedError::InsufficientRange {
            degree: samples.last().map_or(0, |s| s.0),
        });
    }
    let tail = &samples[samples.len() / 2..];
    let w = tail.len() / 2;
    let (a, b) = (&tail[..w], &tail[tail.len() - w..]);
    let sum_h = |xs: &[(i64, u64)]| xs.iter().map(|&(_, v)| BigInt::from(v)).sum::<BigInt>();
    let (ha, hb) = (sum_h(a), sum_h(b));
    if hb.is_zero() {
        return Ok(GrowthEstimate { exponent: None });
    }
    if ha.is_zero() {
        return Err(GradedError::GrowthUndetermined);
    }
    let mid = |xs: &[(i64, u64)]| {
        Rat::new(
            xs.iter().map(|&(m, _)| BigInt::from(m)).sum(),
            BigInt::from(xs.len()),
        )
    };
    let (mid_a, mid_b) = (mid(a), mid(b));
    for d in 0..=MAX_EXPONENT {
        let pow_sum = |xs: &[(i64, u64)]| {
            xs.iter()
                .map(|&(m, _)| num_traits::pow(BigInt::from(m), d as usize))
                .sum::<BigInt>()
        };
        let rho = Rat::new(&hb * pow_sum(a), &ha * pow_sum(b));
        if &rho * &rho * &mid_a <= mid_b {
            return Ok(GrowthEstimate { exponent: Some(d) });
        }
    }
    Err(GradedError::GrowthUndetermined)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(f: impl Fn(i64) -> u64) -> HilbertFunction {
        HilbertFunction::from_fn(0..=40, f)
    }

    #[test]
    fn single_generator_in_degree_zero_is_tight() {
        let h = table(|m| (m + 1) as u64);
        let c = counting_bound_check(&[0], &h, &h, 0..=40).unwrap();
        assert!(c.holds);
        assert!(c
            .rows
            .iter()
            .all(|r| r.generated_bound == BigInt::from(r.module_dimension)));
    }

    #[test]
    fn shifted_generators() {
        let alg = table(|m| (m + 1) as u64);
        let module = table(|m| (m + 3) as u64);
        let one = counting_bound_check(&[0], &alg, &module, 0..=40).unwrap();
        assert!(!one.holds);
        assert_eq!(one.first_failure, Some(0));
        // (m+1) + m ≥ m+3 ⇔ m ≥ 2
        let two = counting_bound_check(&[0, 1], &alg, &module, 0..=40).unwrap();
        assert_eq!(two.first_failure, Some(0));
        assert!(
            counting_bound_check(&[0, 1], &alg, &module, 2..=40)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn missing_degrees_are_errors() {
        let h = HilbertFunction::from_fn(0..=5, |_| 1);
        assert!(matches!(
            counting_bound_check(&[0], &h, &h, 0..=6),
            Err(GradedError::InsufficientRange { degree: 6 })
        ));
    }

    #[test]
    fn constant_algebra_quadratic_module_is_refuted() {
        let alg = table(|_| 1);
        let module = table(|m| ((m + 1) * (m + 2) / 2) as u64);
        let probe = counting_refutation(&alg, &module, 0, 5, 0..=40).unwrap();
        let w = probe.witness.expect("witness");
        assert_eq!(w.algebra_growth, Some(0));
        assert_eq!(w.module_growth, Some(2));
        assert_eq!(w.failures.len(), 6);
        // e = 5: cap = 1+3+6+10+15+21 = 56 < h(10) = 66, and h(9) = 55.
        let last = w.failures.last().unwrap();
        assert_eq!(last.generated_bound, BigInt::from(56));
        assert_eq!(last.degree, 10);
    }

    #[test]
    fn algebra_itself_is_not_refuted() {
        let alg = table(|m| (m + 1) as u64);
        let probe = counting_refutation(&alg, &alg, 0, 5, 0..=40).unwrap();
        assert!(probe.witness.is_none());
        assert!(probe.per_bound.iter().all(|(_, f)| f.is_none()));
    }

    #[test]
    fn growth_exponents() {
        let r = 0..=40;
        assert_eq!(
            growth_degree(&table(|m| (m + 1) as u64), r.clone())
                .unwrap()
                .exponent,
            Some(1)
        );
        assert_eq!(
            growth_degree(&table(|m| ((m + 1) * (m + 2) / 2) as u64), r.clone())
                .unwrap()
                .exponent,
            Some(2)
        );
        assert_eq!(
            growth_degree(&table(|_| 1), r.clone()).unwrap().exponent,
            Some(0)
        );
        assert_eq!(
            growth_degree(&table(|_| 0), r.clone()).unwrap().exponent,
            None
        );
        let cubic = table(|m| ((m + 1) * (m + 2) * (m + 3) / 6) as u64);
        assert_eq!(growth_degree(&cubic, r).unwrap().exponent, Some(3));
    }

    #[test]
    fn growth_needs_eight_samples() {
        let h = HilbertFunction::from_fn(0..=6, |m| m as u64);
        assert!(matches!(
            growth_degree(&h, 0..=6),
            Err(GradedError::InsufficientRange { .. })
        ));
        let h8 = HilbertFunction::from_fn(0..=8, |m| (m + 1) as u64);
        assert_eq!(growth_degree(&h8, 0..=8).unwrap().exponent, Some(1));
    }
}
