use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::counting::CountingWitness;
use super::echelon::Echelon;
use super::slice::{BasisRef, Combination, DegreeSlice, Element};
use super::traits::{act, multiply, GradedAlgebra, GradedModule};
use super::GradedError;
use crate::lattice::IntVector;

/// Homogeneous generators, in the order they were found (nondecreasing degree).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GeneratorSet {
    pub entries: Vec<Element>,
}

impl GeneratorSet {
    pub fn new(entries: Vec<Element>) -> Self {
        GeneratorSet { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.degree).collect()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries.iter().map(|e| e.degree).max()
    }

    /// Generator count per degree.
    pub fn degree_table(&self) -> BTreeMap<i64, usize> {
        let mut t = BTreeMap::new();
        for e in &self.entries {
            *t.entry(e.degree).or_insert(0) += 1;
        }
        t
    }

    pub fn extend(&mut self, other: &GeneratorSet) {
        self.entries.extend(other.entries.iter().cloned());
        self.entries.sort_by_key(|e| e.degree);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Backed by an exact decision procedure.
    Exact,
    /// No new generators up to a stated bound; not a proof.
    BoundedSearch,
    /// Refutation of finite generation.
    NonFgWitness,
    Inconclusive,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::Exact => "exact",
            CertificateKind::BoundedSearch => "bounded-search",
            CertificateKind::NonFgWitness => "non-fg-witness",
            CertificateKind::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// A recession direction of the module polyhedron outside the algebra cone.
    RecessionDirection {
        direction: IntVector,
    },
    Counting(CountingWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FGCertificate {
    pub kind: CertificateKind,
    pub generators: GeneratorSet,
    pub stabilization_degree: i64,
    /// Probe bound of a bounded search.
    pub bound: Option<i64>,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl FGCertificate {
    pub fn bounded(generators: GeneratorSet, stabilization_degree: i64, bound: i64) -> Self {
        FGCertificate {
            kind: CertificateKind::BoundedSearch,
            generators,
            stabilization_degree,
            bound: Some(bound),
            witness: None,
            notes: vec![format!(
                "no new generators in degrees {}..={bound}",
                stabilization_degree + 1
            )],
        }
    }

    /// For a bounded search: the last generator sits strictly below the bound,
    /// so at least one probed degree produced nothing new.
    pub fn stabilized(&self) -> bool {
        match self.kind {
            CertificateKind::Exact => true,
            CertificateKind::BoundedSearch => {
                self.bound.is_some_and(|b| self.stabilization_degree < b)
            }
            _ => false,
        }
    }

    /// Whether the certificate asserts finite generation (only exact ones may).
    pub fn proves_finite_generation(&self) -> bool {
        self.kind == CertificateKind::Exact
    }
}

/// Output of a bounded generator search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    /// Seed generators followed by the newly found ones.
    pub generators: GeneratorSet,
    pub new_generators_per_degree: BTreeMap<i64, usize>,
    pub certificate: FGCertificate,
}

impl SearchOutcome {
    pub fn new_generator_count(&self) -> usize {
        self.new_generators_per_degree.values().sum()
    }

    pub fn first_degree_with_new_generators(&self) -> Option<i64> {
        self.new_generators_per_degree
            .iter()
            .find(|(_, &c)| c > 0)
            .map(|(&d, _)| d)
    }
}

/// Subspace of slice `m` spanned by `R_{m−d}·g` over the given generators.
fn spanned_part(
    slice_m: &DegreeSlice,
    gens: &[(i64, Combination)],
    alg: &dyn GradedAlgebra,
    apply: &dyn Fn(BasisRef, i64, &Combination) -> Result<Combination, GradedError>,
) -> Result<Echelon, GradedError> {
    let m = slice_m.degree();
    let dim = slice_m.dimension();
    let mut ech = Echelon::new();
    for (d, g) in gens.iter().filter(|(d, _)| *d <= m) {
        let rs = alg.slice(m - d)?;
        for ri in 0..rs.dimension() {
            if ech.rank() == dim {
                return Ok(ech);
            }
            ech.insert(&apply(rs.basis_ref(ri), *d, g)?);
        }
    }
    Ok(ech)
}

/// Degree-by-degree span-and-extend. `apply(r, d, g)` computes `r·g`.
fn search(
    alg: &dyn GradedAlgebra,
    target_slice: &dyn Fn(i64) -> Result<Arc<DegreeSlice>, GradedError>,
    apply: &dyn Fn(BasisRef, i64, &Combination) -> Result<Combination, GradedError>,
    degrees: std::ops::RangeInclusive<i64>,
    seed: &GeneratorSet,
) -> Result<(GeneratorSet, BTreeMap<i64, usize>), GradedError> {
    let mut gens: Vec<(i64, Combination)> = Vec::new();
    for e in &seed.entries {
        let s = target_slice(e.degree)?;
        gens.push((e.degree, e.to_combination(&s)?));
    }
    let mut found = seed.entries.clone();
    let mut counts = BTreeMap::new();
    let r0 = alg.slice(0)?;
    for m in degrees {
        let slice = target_slice(m)?;
        let dim = slice.dimension();
        let mut ech = spanned_part(&slice, &gens, alg, apply)?;
        let mut new_here = 0;
        for &j in slice.lex_order() {
            if ech.rank() == dim {
                break;
            }
            let e = Combination::basis(j);
            if ech.contains(&e) {
                continue;
            }
            for ri in 0..r0.dimension() {
                ech.insert(&apply(r0.basis_ref(ri), m, &e)?);
            }
            // R_0 contains 1, so e itself is now spanned.
            debug_assert!(ech.contains(&e));
            found.push(Element::from_combination(&slice, &e));
            gens.push((m, e));
            new_here += 1;
        }
        counts.insert(m, new_here);
    }
    Ok((GeneratorSet::new(found), counts))
}

/// Bounded generator search for an algebra over `R_0`, degrees `1..=bound`.
pub fn find_algebra_generators(
    r: &dyn GradedAlgebra,
    bound: i64,
) -> Result<SearchOutcome, GradedError> {
    find_algebra_generators_seeded(r, bound, &GeneratorSet::default())
}

/// As [`find_algebra_generators`], starting from known generators.
pub fn find_algebra_generators_seeded(
    r: &dyn GradedAlgebra,
    bound: i64,
    seed: &GeneratorSet,
) -> Result<SearchOutcome, GradedError> {
    if bound < 1 {
        return Err(GradedError::InvalidBound { bound, lowest: 1 });
    }
    if let Some(e) = seed.entries.iter().find(|e| e.degree < 1) {
        return Err(GradedError::InvalidBound {
            bound: e.degree,
            lowest: 1,
        });
    }
    let apply = |rb: BasisRef, d: i64, g: &Combination| {
        multiply(r, rb.degree, &Combination::basis(rb.index), d, g)
    };
    let slice = |m: i64| r.slice(m);
    let (generators, counts) = search(r, &slice, &apply, 1..=bound, seed)?;
    let stab = generators.max_degree().unwrap_or(0);
    let certificate = FGCertificate::bounded(generators.clone(), stab, bound);
    Ok(SearchOutcome {
        generators,
        new_generators_per_degree: counts,
        certificate,
    })
}

/// Bounded generator search for a module over `r`, degrees `offset..=bound`.
pub fn find_module_generators(
    m: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    bound: i64,
) -> Result<SearchOutcome, GradedError> {
    find_module_generators_seeded(m, r, bound, &GeneratorSet::default())
}

pub fn find_module_generators_seeded(
    m: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    bound: i64,
    seed: &GeneratorSet,
) -> Result<SearchOutcome, GradedError> {
    let offset = m.offset();
    if bound < offset {
        return Err(GradedError::InvalidBound {
            bound,
            lowest: offset,
        });
    }
    let apply = |rb: BasisRef, d: i64, g: &Combination| act(m, rb, d, g);
    let slice = |k: i64| m.slice(k);
    let (generators, counts) = search(r, &slice, &apply, offset..=bound, seed)?;
    let stab = generators.max_degree().unwrap_or(offset);
    let certificate = FGCertificate::bounded(generators.clone(), stab, bound);
    Ok(SearchOutcome {
        generators,
        new_generators_per_degree: counts,
        certificate,
    })
}

/// Degreewise check that `gens` generate `m` up to `bound`; returns the first
/// degree whose slice is not spanned.
pub fn first_unspanned_degree(
    m: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    gens: &GeneratorSet,
    bound: i64,
) -> Result<Option<i64>, GradedError> {
    let outcome = find_module_generators_seeded(m, r, bound, gens)?;
    Ok(outcome.first_degree_with_new_generators())
}

/// Rank of the degree-`m` part of the submodule generated by `gens`.
pub fn generated_rank(
    m: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    gens: &GeneratorSet,
    degree: i64,
) -> Result<usize, GradedError> {
    let slice = m.slice(degree)?;
    let mut cs = Vec::new();
    for e in &gens.entries {
        cs.push((e.degree, e.to_combination(&*m.slice(e.degree)?)?));
    }
    let apply = |rb: BasisRef, d: i64, g: &Combination| act(m, rb, d, g);
    Ok(spanned_part(&slice, &cs, r, &apply)?.rank())
}

/// Echelon form of the degree-`m` part of the submodule generated by `gens`.
pub(crate) fn generated_span(
    m: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    gens: &GeneratorSet,
    degree: i64,
) -> Result<Vec<Combination>, GradedError> {
    let mut out = Vec::new();
    for e in gens.entries.iter().filter(|e| e.degree <= degree) {
        let g = e.to_combination(&*m.slice(e.degree)?)?;
        let rs = r.slice(degree - e.degree)?;
        for ri in 0..rs.dimension() {
            out.push(act(m, rs.basis_ref(ri), e.degree, &g)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{veronese, Label, OffsetModule, PolynomialRing, SliceFamily, Twist};

    #[test]
    fn polynomial_ring_generators() {
        let r = PolynomialRing::standard(2);
        let out = find_algebra_generators(&r, 5).unwrap();
        assert_eq!(out.generators.degrees(), vec![1, 1]);
        assert_eq!(out.certificate.kind, CertificateKind::BoundedSearch);
        assert_eq!(out.certificate.stabilization_degree, 1);
        assert!(out.certificate.stabilized());
        assert!(!out.certificate.proves_finite_generation());
    }

    #[test]
    fn weighted_and_veronese_generators() {
        let w = PolynomialRing::new(vec![1, 2]);
        assert_eq!(
            find_algebra_generators(&w, 6).unwrap().generators.degrees(),
            vec![1, 2]
        );
        let v = veronese(Arc::new(PolynomialRing::standard(2)), 2).unwrap();
        assert_eq!(
            find_algebra_generators(&v, 4).unwrap().generators.degrees(),
            vec![1, 1, 1]
        );
    }

    #[test]
    fn invalid_bounds() {
        let r = PolynomialRing::standard(1);
        assert!(matches!(
            find_algebra_generators(&r, 0),
            Err(GradedError::InvalidBound { .. })
        ));
        let fam: Arc<dyn SliceFamily> =
            Arc::new(Twist::new(Arc::new(PolynomialRing::standard(1)), 0));
        let m = OffsetModule::new(fam, 3).unwrap();
        assert!(matches!(
            find_module_generators(&m, &r, 2),
            Err(GradedError::InvalidBound {
                bound: 2,
                lowest: 3
            })
        ));
    }

    #[test]
    fn twisted_module_generated_in_lowest_degree() {
        let r = Arc::new(PolynomialRing::standard(2));
        let fam: Arc<dyn SliceFamily> = Arc::new(Twist::new(r.clone(), 2));
        let m = OffsetModule::new(fam, 0).unwrap();
        let out = find_module_generators(&m, &*r, 5).unwrap();
        // M_0 = R_2 has dimension 3 and R_0 = Q, so all three are needed.
        assert_eq!(out.generators.degree_table(), BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn seeded_checks() {
        let r = Arc::new(PolynomialRing::standard(2));
        let fam: Arc<dyn SliceFamily> = Arc::new(Twist::new(r.clone(), 0));
        let ideal = OffsetModule::new(fam, 1).unwrap();
        let x = Element::basis(1, Label::Point(IntVector::from_i64s(&[1, 0])));
        let only_x = GeneratorSet::new(vec![x.clone()]);
        assert_eq!(
            first_unspanned_degree(&ideal, &*r, &only_x, 4).unwrap(),
            Some(1)
        );
        assert_eq!(generated_rank(&ideal, &*r, &only_x, 3).unwrap(), 3);
        let y = Element::basis(1, Label::Point(IntVector::from_i64s(&[0, 1])));
        let both = GeneratorSet::new(vec![x, y]);
        assert_eq!(first_unspanned_degree(&ideal, &*r, &both, 4).unwrap(), None);
        assert_eq!(generated_span(&ideal, &*r, &both, 2).unwrap().len(), 4);
    }
}
