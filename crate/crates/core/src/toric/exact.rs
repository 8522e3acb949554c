//! Exact finite-generation decisions for toric algebras and modules.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::sections::SectionPolytopeFamily;
use super::{CartierDivisor, ToricError, ToricVariety};
use crate::graded::{CertificateKind, Element, FGCertificate, GeneratorSet, Label, Witness};
use crate::lattice::{cone_contains, Cone, IntVector, Rat};

fn to_i64(n: &BigInt) -> Result<i64, ToricError> {
    n.to_i64()
        .ok_or_else(|| ToricError::Overflow(n.to_string()))
}

/// `(t, u) ↦` the basis element `u` of degree `t`.
fn element_of(p: &IntVector) -> Result<Element, ToricError> {
    let degree = to_i64(p.first())?;
    let u = p.tail().expect("lifted points have a tail");
    Ok(Element::basis(degree, Label::Point(u)))
}

/// Semigroup data of a family's algebra cone.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraCone {
    pub cone: Cone,
    pub hilbert_basis: Vec<IntVector>,
}

pub fn algebra_cone(family: &SectionPolytopeFamily) -> Result<AlgebraCone, ToricError> {
    let cone = family.algebra_cone();
    let hb = cone.hilbert_basis()?;
    Ok(AlgebraCone {
        cone,
        hilbert_basis: hb.elements,
    })
}

/// Exact generators of the algebra of a zero-base family: the Hilbert basis
/// of the cone over `{1} × P_1`, each element `(t, u)` read as the monomial
/// `u` in degree `t`.
pub fn exact_fg_algebra_family(
    family: &SectionPolytopeFamily,
) -> Result<FGCertificate, ToricError> {
    if !family.has_zero_base() {
        return Err(ToricError::InvalidFamily(
            "an algebra family must have zero base offsets".into(),
        ));
    }
    let ac = algebra_cone(family)?;
    let mut gens: Vec<Element> = ac
        .hilbert_basis
        .iter()
        .map(element_of)
        .collect::<Result<_, _>>()?;
    sort_elements(&mut gens);
    let generators = GeneratorSet::new(gens);
    Ok(FGCertificate {
        kind: CertificateKind::Exact,
        stabilization_degree: generators.max_degree().unwrap_or(0),
        generators,
        bound: None,
        witness: None,
        notes: vec!["Hilbert basis of the cone over {1} x P_L".into()],
    })
}

pub fn exact_fg_algebra(x: &ToricVariety, l: &CartierDivisor) -> Result<FGCertificate, ToricError> {
    exact_fg_algebra_family(&SectionPolytopeFamily::for_divisors(
        x,
        &CartierDivisor::zero(x),
        l,
    )?)
}

fn sort_elements(v: &mut [Element]) {
    v.sort_by(|a, b| (a.degree, a.terms.keys().next()).cmp(&(b.degree, b.terms.keys().next())));
}

/// Exact module generators of `{(m, u) : m ≥ p, u ∈ P_m}` over the semigroup
/// of the algebra cone.
///
/// The module is finitely generated iff the recession cone of that polyhedron
/// lies in the algebra cone; otherwise a violating direction is returned as
/// the witness. Generators are the lattice points `q` for which no Hilbert
/// basis element `h` leaves `q − h` in the polyhedron. A point of the form
/// vertex-hull + Σ λ_i g_i with some `λ_i ≥ 1` is reducible by the extreme
/// ray `g_i`, so generators sit in degree at most
/// `max vertex degree + sum of the n+1 largest extreme-ray degrees`.
pub fn exact_fg_module_family(
    family: &SectionPolytopeFamily,
    p: i64,
) -> Result<FGCertificate, ToricError> {
    let q = family.total_polyhedron(p);
    if q.is_empty() {
        return Ok(FGCertificate {
            kind: CertificateKind::Exact,
            generators: GeneratorSet::default(),
            stabilization_degree: p,
            bound: None,
            witness: None,
            notes: vec!["zero module".into()],
        });
    }
    let base_algebra = family.with_base(vec![Rat::zero(); family.normals().len()])?;
    let ac = algebra_cone(&base_algebra)?;
    let rec = q.recession_cone()?;
    if !cone_contains(&ac.cone, &rec)? {
        let direction = rec
            .generators()
            .iter()
            .find(|g| !ac.cone.contains(g))
            .cloned()
            .expect("some generator escapes");
        return Ok(FGCertificate {
            kind: CertificateKind::NonFgWitness,
            generators: GeneratorSet::default(),
            stabilization_degree: p,
            bound: None,
            notes: vec![format!(
                "recession direction {direction} is not in the algebra cone"
            )],
            witness: Some(Witness::RecessionDirection { direction }),
        });
    }
    let vmax = q
        .vertices()?
        .iter()
        .map(|v| v[0].ceil().to_integer())
        .max()
        .unwrap_or_else(|| BigInt::from(p));
    let mut ray_degrees: Vec<BigInt> = ac
        .cone
        .generators()
        .iter()
        .map(|g| g.first().clone())
        .collect();
    ray_degrees.sort_by(|a, b| b.cmp(a));
    let bound = vmax + ray_degrees.iter().take(family.dim() + 1).sum::<BigInt>();
    let bound = to_i64(&bound)?.max(p);
    let capped = q.with_constraints([crate::lattice::HalfSpace::new(
        -&IntVector::unit(family.dim() + 1, 0),
        Rat::from_integer(bound.into()),
    )?]);
    let hb: Vec<&IntVector> = ac.hilbert_basis.iter().filter(|h| !h.is_zero()).collect();
    let mut gens = Vec::new();
    for pt in capped.lattice_points()? {
        if !hb.iter().any(|h| q.contains(&(&pt - h))) {
            gens.push(element_of(&pt)?);
        }
    }
    sort_elements(&mut gens);
    let generators = GeneratorSet::new(gens);
    Ok(FGCertificate {
        kind: CertificateKind::Exact,
        stabilization_degree: generators.max_degree().unwrap_or(p),
        generators,
        bound: None,
        witness: None,
        notes: vec![format!("reachability scan up to degree {bound}")],
    })
}

pub fn exact_fg_module(
    x: &ToricVariety,
    d: &CartierDivisor,
    l: &CartierDivisor,
    p: i64,
) -> Result<FGCertificate, ToricError> {
    exact_fg_module_family(&SectionPolytopeFamily::for_divisors(x, d, l)?, p)
}
