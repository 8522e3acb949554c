use std::sync::Arc;

use serde::Serialize;

use super::InductionError;
use crate::graded::{
    find_algebra_generators_seeded, first_unspanned_degree, multiply, verify_sub_basis, BasisRef,
    Combination, DegreeSlice, Echelon, Element, GeneratorSet, GradedAlgebra, GradedError,
    GradedModule,
};

/// `dim A_m`, `dim K_m`, `dim R_m` where `A` is the subalgebra generated by
/// the lifted quotient generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitRow {
    pub degree: i64,
    pub lifted_subalgebra: usize,
    pub kernel: usize,
    pub total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma32Outcome {
    pub generators: GeneratorSet,
    pub lifted: usize,
    pub kernel: usize,
    pub split: Vec<SplitRow>,
}

/// Algebra generators of `R` from generators of a quotient `T = R/K` and of
/// the kernel `K` as an `R`-module.
///
/// Quotient generators are lifted by label. Degree by degree the lifts must
/// generate a subalgebra `A` with `R_m = A_m + K_m`; the union of lifts and
/// kernel generators is then checked to generate `R` up to `bound`.
pub fn lemma32_reconstruct(
    r: &dyn GradedAlgebra,
    t_gens: &GeneratorSet,
    kernel: &dyn GradedModule,
    k_gens: &GeneratorSet,
    bound: i64,
) -> Result<Lemma32Outcome, InductionError> {
    if !kernel.slice(0)?.is_zero() {
        return Err(InductionError::DegreeZeroKernel { degree: 0 });
    }
    if let Some(g) = k_gens.entries.iter().find(|g| g.degree <= 0) {
        return Err(InductionError::DegreeZeroKernel { degree: g.degree });
    }
    verify_sub_basis(&AlgebraAsModule(r), kernel, 0, bound).map_err(|e| {
        InductionError::ExactnessFailure {
            degree: 0,
            detail: e.to_string(),
        }
    })?;

    let lifts: Vec<(i64, Combination)> = t_gens
        .entries
        .iter()
        .map(|g| Ok((g.degree, g.to_combination(&*r.slice(g.degree)?)?)))
        .collect::<Result<_, InductionError>>()?;

    // Bases of the subalgebra generated by the lifts, degree by degree.
    let mut sub: Vec<Vec<Combination>> = vec![vec![r.unit()?]];
    let mut split = Vec::new();
    for m in 1..=bound {
        let rm = r.slice(m)?;
        let km = kernel.slice(m)?;
        let mut ech = Echelon::new();
        let mut basis = Vec::new();
        for (d, g) in lifts.iter().filter(|(d, _)| *d <= m) {
            for a in &sub[(m - d) as usize] {
                let v = multiply(r, *d, g, m - d, a)?;
                if ech.insert(&v) {
                    basis.push(v);
                }
            }
        }
        let lifted_subalgebra = ech.rank();
        for l in km.basis() {
            ech.insert(&Combination::basis(
                rm.index_of(l).expect("checked sub-basis"),
            ));
        }
        if ech.rank() != rm.dimension() {
            return Err(InductionError::SpanFailure { degree: m });
        }
        split.push(SplitRow {
            degree: m,
            lifted_subalgebra,
            kernel: km.dimension(),
            total: rm.dimension(),
        });
        sub.push(basis);
    }

    let mut generators = t_gens.clone();
    generators.extend(k_gens);
    let check = find_algebra_generators_seeded(r, bound, &generators)?;
    if let Some(d) = check.first_degree_with_new_generators() {
        return Err(InductionError::SpanFailure { degree: d });
    }
    Ok(Lemma32Outcome {
        generators,
        lifted: t_gens.len(),
        kernel: k_gens.len(),
        split,
    })
}

struct AlgebraAsModule<'a>(&'a dyn GradedAlgebra);

impl GradedModule for AlgebraAsModule<'_> {
    fn offset(&self) -> i64 {
        0
    }

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        self.0.slice(degree)
    }

    fn act_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError> {
        self.0.multiply_basis(a, b)
    }
}

/// Generators of a middle module `M` from generators of a label-spanned
/// submodule `M'` and of `M'' = M/M'` (given by labels of `M` outside `M'`).
pub fn lemma33_extend(
    middle: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    sub: &dyn GradedModule,
    sub_gens: &GeneratorSet,
    quotient_gens: &GeneratorSet,
    bound: i64,
) -> Result<GeneratorSet, InductionError> {
    for m in middle.offset()..=bound {
        let (a, s) = (middle.slice(m)?, sub.slice(m)?);
        if let Some(l) = s.basis().iter().find(|l| !a.contains(l)) {
            return Err(InductionError::ExactnessFailure {
                degree: m,
                detail: format!("{l} lies in the submodule but not in the middle module"),
            });
        }
    }
    for g in &quotient_gens.entries {
        let s = sub.slice(g.degree)?;
        if g.terms.keys().all(|l| s.contains(l)) && !g.is_zero() {
            return Err(InductionError::ExactnessFailure {
                degree: g.degree,
                detail: "quotient generator lifts into the submodule".into(),
            });
        }
    }
    let mut generators = quotient_gens.clone();
    generators.extend(sub_gens);
    dedup(&mut generators);
    if let Some(d) = first_unspanned_degree(middle, r, &generators, bound)? {
        return Err(InductionError::SpanFailure { degree: d });
    }
    Ok(generators)
}

pub(crate) fn dedup(g: &mut GeneratorSet) {
    let mut seen: Vec<Element> = Vec::new();
    g.entries.retain(|e| {
        if seen.contains(e) {
            false
        } else {
            seen.push(e.clone());
            true
        }
    });
}
