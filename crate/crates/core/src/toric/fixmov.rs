//! Fixed and movable parts of toric linear systems.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::sections::{h0, SectionPolytopeFamily};
use super::{CartierDivisor, ToricError, ToricVariety};
use crate::graded::{growth_degree, GrowthEstimate, HilbertFunction};
use crate::lattice::{IntVector, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixMov {
    pub fix: CartierDivisor,
    pub mov: CartierDivisor,
}

fn sections(x: &ToricVariety, d: &CartierDivisor) -> Result<Vec<IntVector>, ToricError> {
    SectionPolytopeFamily::for_divisors(x, d, &CartierDivisor::zero(x))?.lattice_points(0)
}

/// `Fix D` has coefficient `min_u (⟨u, v_ρ⟩ + a_ρ)` along `D_ρ`, the minimum
/// over lattice points of `P_D`; `Mov D = D − Fix D`.
pub fn fix_mov(x: &ToricVariety, d: &CartierDivisor) -> Result<FixMov, ToricError> {
    let pts = sections(x, d)?;
    if pts.is_empty() {
        return Err(ToricError::NoSections(d.to_string()));
    }
    let coeffs: Vec<BigInt> = x
        .fan()
        .rays()
        .iter()
        .zip(d.coeffs())
        .map(|(v, a)| pts.iter().map(|u| u.dot(v) + a).min().expect("nonempty"))
        .collect();
    let fix = CartierDivisor::q_cartier(x, coeffs)?;
    let mov = d.sub(&fix).recheck(x);
    Ok(FixMov { fix, mov })
}

/// Each maximal cone's local functional `m_σ` is a lattice point of `P_D`.
pub fn is_base_point_free(x: &ToricVariety, d: &CartierDivisor) -> Result<bool, ToricError> {
    let fam = SectionPolytopeFamily::for_divisors(x, d, &CartierDivisor::zero(x))?;
    let poly = fam.member(0);
    for c in 0..x.fan().max_cones().len() {
        let m = d.local_functional(x, c);
        if !m.iter().all(Rat::is_integer) {
            return Ok(false);
        }
        let m = IntVector::from(m.iter().map(|q| q.to_integer()).collect::<Vec<_>>());
        if !poly.contains(&m) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Strict convexity of the support function: `⟨m_σ, v_ρ⟩ > −a_ρ` for every
/// maximal cone `σ` and every ray `ρ ∉ σ`.
pub fn is_ample(x: &ToricVariety, d: &CartierDivisor) -> Result<bool, ToricError> {
    let fan = x.fan();
    for (c, cone) in fan.max_cones().iter().enumerate() {
        let m = d.local_functional(x, c);
        for (i, v) in fan.rays().iter().enumerate() {
            if cone.contains(&i) {
                continue;
            }
            if v.dot_rational(&m) <= Rat::from_integer(-d.coeff(i).clone()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityRow {
    pub m: i64,
    pub fix: CartierDivisor,
    pub mov: CartierDivisor,
    pub fix_stable: bool,
    pub mov_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixStabilityReport {
    pub j: i64,
    /// `E = Fix(JL)`
    pub fixed_part: CartierDivisor,
    /// `F = Mov(JL)`
    pub movable_part: CartierDivisor,
    pub movable_base_point_free: bool,
    pub rows: Vec<StabilityRow>,
    pub first_failure: Option<i64>,
    pub holds: bool,
}

/// Checks `Fix(mJL) = m·Fix(JL)` and `Mov(mJL) = m·Mov(JL)` for `m = 1..=m_max`
/// and base-point-freeness of `Mov(JL)`.
pub fn fix_stability_check(
    x: &ToricVariety,
    l: &CartierDivisor,
    j: i64,
    m_max: i64,
) -> Result<FixStabilityReport, ToricError> {
    x.require_smooth()?;
    if j < 1 {
        return Err(ToricError::InvalidParameter(format!(
            "J must be positive, got {j}"
        )));
    }
    let jl = l.scale_i64(j);
    let base = fix_mov(x, &jl)?;
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let fm = fix_mov(x, &jl.scale_i64(m))?;
        let fix_stable = fm.fix == base.fix.scale_i64(m);
        let mov_stable = fm.mov == base.mov.scale_i64(m);
        rows.push(StabilityRow {
            m,
            fix: fm.fix,
            mov: fm.mov,
            fix_stable,
            mov_stable,
        });
    }
    let first_failure = rows
        .iter()
        .find(|r| !(r.fix_stable && r.mov_stable))
        .map(|r| r.m);
    let movable_base_point_free = is_base_point_free(x, &base.mov)?;
    Ok(FixStabilityReport {
        j,
        holds: first_failure.is_none() && movable_base_point_free,
        fixed_part: base.fix,
        movable_part: base.mov,
        movable_base_point_free,
        rows,
        first_failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuppFixRow {
    pub m: i64,
    /// `None` when the divisor has no sections.
    pub support: Option<Vec<usize>>,
    pub equals_target: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuppFixReport {
    /// `Supp E` for `E = Fix(JL)`.
    pub target_support: Vec<usize>,
    pub rows: Vec<SuppFixRow>,
    /// Least `m` in the range from which every row matches the target.
    pub stable_from: Option<i64>,
}

fn positive_support(d: &CartierDivisor) -> Vec<usize> {
    d.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_positive())
        .map(|(i, _)| i)
        .collect()
}

/// `Supp Fix(m(JL + rF) + G)` for each `m`, with `F = Mov(JL)` and `G` ample.
pub fn supp_fix_with_ample(
    x: &ToricVariety,
    l: &CartierDivisor,
    j: i64,
    r: i64,
    g: &CartierDivisor,
    m_range: RangeInclusive<i64>,
) -> Result<SuppFixReport, ToricError> {
    x.require_smooth()?;
    if r < 0 {
        return Err(ToricError::InvalidParameter(format!(
            "r must be nonnegative, got {r}"
        )));
    }
    if !is_ample(x, g)? {
        return Err(ToricError::NotAmple(g.to_string()));
    }
    let jl = l.scale_i64(j);
    let base = fix_mov(x, &jl)?;
    let target_support = positive_support(&base.fix);
    let step = jl.add(&base.mov.scale_i64(r));
    let mut rows = Vec::new();
    for m in m_range {
        let div = step.scale_i64(m).add(g);
        let support = match fix_mov(x, &div) {
            Ok(fm) => Some(positive_support(&fm.fix)),
            Err(ToricError::NoSections(_)) => None,
            Err(e) => return Err(e),
        };
        let equals_target = support.as_ref() == Some(&target_support);
        rows.push(SuppFixRow {
            m,
            support,
            equals_target,
        });
    }
    let stable_from = match rows.iter().rposition(|r| !r.equals_target) {
        None => rows.first().map(|r| r.m),
        Some(i) => rows.get(i + 1).map(|r| r.m),
    };
    Ok(SuppFixReport {
        target_support,
        rows,
        stable_from,
    })
}

/// Growth exponent of `m ↦ h⁰(X, m·J·L + G)` over `range` (`G = 0` gives `κ(L)`).
pub fn section_growth(
    x: &ToricVariety,
    l: &CartierDivisor,
    j: i64,
    g: &CartierDivisor,
    range: RangeInclusive<i64>,
) -> Result<(HilbertFunction, GrowthEstimate), ToricError> {
    let jl = l.scale_i64(j);
    let mut pairs = Vec::new();
    for m in range.clone() {
        pairs.push((m, h0(x, &jl.scale_i64(m).add(g))? as u64));
    }
    let h = HilbertFunction::from_pairs(pairs);
    let est = growth_degree(&h, range)?;
    Ok((h, est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::examples::{self, BLOWUP_EXCEPTIONAL, BLOWUP_LINE};

    fn blowup() -> ToricVariety {
        examples::blowup_p2()
    }

    fn e(x: &ToricVariety) -> CartierDivisor {
        CartierDivisor::prime(x, BLOWUP_EXCEPTIONAL).unwrap()
    }

    fn h(x: &ToricVariety) -> CartierDivisor {
        CartierDivisor::prime(x, BLOWUP_LINE).unwrap()
    }

    #[test]
    fn exceptional_multiples_are_fixed() {
        let x = blowup();
        for m in 1..=6 {
            let d = e(&x).scale_i64(m);
            let fm = fix_mov(&x, &d).unwrap();
            assert_eq!(fm.fix, d);
            assert!(fm.mov.is_zero());
        }
    }

    #[test]
    fn base_point_free_has_no_fixed_part() {
        let x = blowup();
        let fm = fix_mov(&x, &h(&x)).unwrap();
        assert!(fm.fix.is_zero());
        assert!(is_base_point_free(&x, &h(&x)).unwrap());
        let g = h(&x).scale_i64(2).sub(&e(&x));
        assert!(fix_mov(&x, &g).unwrap().fix.is_zero());
        assert!(is_ample(&x, &g).unwrap());
        assert!(!is_ample(&x, &h(&x)).unwrap());
        assert!(!is_base_point_free(&x, &e(&x)).unwrap());
    }

    #[test]
    fn mov_keeps_sections() {
        let x = blowup();
        let d = h(&x).add(&e(&x).scale_i64(3));
        let fm = fix_mov(&x, &d).unwrap();
        assert_eq!(h0(&x, &fm.mov).unwrap(), h0(&x, &d).unwrap());
    }

    #[test]
    fn no_sections() {
        let x = blowup();
        assert!(matches!(
            fix_mov(&x, &e(&x).scale_i64(-1)),
            Err(ToricError::NoSections(_))
        ));
    }

    #[test]
    fn stability_for_exceptional_curve() {
        let x = blowup();
        let rep = fix_stability_check(&x, &e(&x), 1, 8).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.fixed_part, e(&x));
        assert!(rep.movable_part.is_zero());
        let rep = fix_stability_check(&x, &h(&x), 1, 8).unwrap();
        assert!(rep.holds);
        assert!(rep.fixed_part.is_zero());
    }

    #[test]
    fn supp_fix_reaches_exceptional_curve() {
        let x = blowup();
        let g = h(&x).scale_i64(2).sub(&e(&x));
        let rep = supp_fix_with_ample(&x, &e(&x), 1, 0, &g, 1..=10).unwrap();
        assert_eq!(rep.target_support, vec![BLOWUP_EXCEPTIONAL]);
        assert_eq!(rep.stable_from, Some(2));
        assert!(matches!(
            supp_fix_with_ample(&x, &e(&x), 1, 0, &h(&x), 1..=3),
            Err(ToricError::NotAmple(_))
        ));
    }

    #[test]
    fn growth_of_sections() {
        let x = blowup();
        let zero = CartierDivisor::zero(&x);
        assert_eq!(
            section_growth(&x, &h(&x), 1, &zero, 0..=20)
                .unwrap()
                .1
                .exponent,
            Some(2)
        );
        assert_eq!(
            section_growth(&x, &e(&x), 1, &zero, 0..=20)
                .unwrap()
                .1
                .exponent,
            Some(0)
        );
        let g = h(&x).scale_i64(2).sub(&e(&x));
        // Fix(mE + G) = (m−1)E, so h⁰(mE + G) = h⁰(2H) stays constant.
        assert_eq!(
            section_growth(&x, &e(&x), 1, &g, 0..=20)
                .unwrap()
                .1
                .exponent,
            Some(0)
        );
        let big = h(&x).add(&e(&x));
        assert_eq!(
            section_growth(&x, &big, 1, &g, 0..=20).unwrap().1.exponent,
            Some(2)
        );
    }
}
