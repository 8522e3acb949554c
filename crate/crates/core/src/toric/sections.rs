use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{CartierDivisor, ToricError, ToricVariety};
use crate::graded::{
    BasisRef, Combination, DegreeSlice, GradedAlgebra, GradedError, GradedModule, Label,
    OffsetModule, QuotientModule, SliceCache, SliceFamily,
};
use crate::lattice::{Cone, HalfSpace, IntVector, Rat, RationalPolyhedron};

/// The polytopes `P_m = {u : ⟨u, n_i⟩ ≥ −b_i − m·s_i}`.
///
/// For divisors `D = Σ a_ρ D_ρ` and `L`, taking `n_i = v_ρ`, `b = a(D)` and
/// `s = a(L)` gives `P_{D+mL}`, whose lattice points index `H⁰(X, D + mL)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionPolytopeFamily {
    dim: usize,
    normals: Vec<IntVector>,
    base: Vec<Rat>,
    step: Vec<Rat>,
}

fn to_rats(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|a| Rat::from_integer(a.clone())).collect()
}

impl SectionPolytopeFamily {
    pub fn new(
        dim: usize,
        normals: Vec<IntVector>,
        base: Vec<Rat>,
        step: Vec<Rat>,
    ) -> Result<Self, ToricError> {
        if base.len() != normals.len() || step.len() != normals.len() {
            return Err(ToricError::DimensionMismatch {
                expected: normals.len(),
                found: base.len().min(step.len()),
            });
        }
        if let Some(n) = normals.iter().find(|n| n.dim() != dim) {
            return Err(ToricError::DimensionMismatch {
                expected: dim,
                found: n.dim(),
            });
        }
        Ok(SectionPolytopeFamily {
            dim,
            normals,
            base,
            step,
        })
    }

    /// `m ↦ P_{D + mL}`.
    pub fn for_divisors(
        x: &ToricVariety,
        d: &CartierDivisor,
        l: &CartierDivisor,
    ) -> Result<Self, ToricError> {
        for div in [d, l] {
            if div.coeffs().len() != x.num_rays() {
                return Err(ToricError::DimensionMismatch {
                    expected: x.num_rays(),
                    found: div.coeffs().len(),
                });
            }
        }
        Self::new(
            x.dim(),
            x.fan().rays().to_vec(),
            to_rats(d.coeffs()),
            to_rats(l.coeffs()),
        )
    }

    /// `m ↦ m·P` for a polytope `P`.
    pub fn dilations(p: &RationalPolyhedron) -> Self {
        let normals = p.constraints().iter().map(|h| h.normal().clone()).collect();
        let step = p.constraints().iter().map(|h| h.offset().clone()).collect();
        SectionPolytopeFamily {
            dim: p.dim(),
            normals,
            base: vec![Rat::zero(); p.constraints().len()],
            step,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[IntVector] {
        &self.normals
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    pub fn step(&self) -> &[Rat] {
        &self.step
    }

    /// Same normals and step, different base offsets.
    pub fn with_base(&self, base: Vec<Rat>) -> Result<Self, ToricError> {
        Self::new(self.dim, self.normals.clone(), base, self.step.clone())
    }

    pub fn has_zero_base(&self) -> bool {
        self.base.iter().all(Zero::is_zero)
    }

    pub fn member(&self, m: i64) -> RationalPolyhedron {
        let m = Rat::from_integer(m.into());
        let cs = self
            .normals
            .iter()
            .zip(self.base.iter().zip(&self.step))
            .map(|(n, (b, s))| HalfSpace::new(n.clone(), b + &m * s).expect("fan rays are nonzero"))
            .collect();
        RationalPolyhedron::new(self.dim, cs).expect("positive dimension")
    }

    pub fn lattice_points(&self, m: i64) -> Result<Vec<IntVector>, ToricError> {
        Ok(self.member(m).lattice_points()?)
    }

    /// `(s_i, n_i)` scaled to integers: the cone `{(t, u) : t ≥ 0, ⟨u, n_i⟩ + t·s_i ≥ 0}`
    /// is cut out by these rows together with `t ≥ 0`.
    fn lifted_rows(&self) -> Vec<(IntVector, BigInt)> {
        self.normals
            .iter()
            .zip(&self.step)
            .map(|(n, s)| {
                let den = s.denom().clone();
                (
                    n.scale(&den)
                        .prepend((s * Rat::from_integer(den.clone())).to_integer()),
                    den,
                )
            })
            .collect()
    }

    /// The cone over `{1} × P_1`, i.e. the closure of `⋃_t {t} × P_t` for a zero base.
    pub fn algebra_cone(&self) -> Cone {
        let mut rows: Vec<IntVector> = self.lifted_rows().into_iter().map(|(r, _)| r).collect();
        rows.push(IntVector::unit(self.dim + 1, 0));
        Cone::from_inequalities(self.dim + 1, &rows)
    }

    /// `{(m, u) : m ≥ p, u ∈ P_m}` in `Q^{1+n}`.
    pub fn total_polyhedron(&self, p: i64) -> RationalPolyhedron {
        let mut cs: Vec<HalfSpace> = self
            .lifted_rows()
            .into_iter()
            .zip(&self.base)
            .map(|((row, den), b)| {
                HalfSpace::new(row, b * Rat::from_integer(den)).expect("fan rays are nonzero")
            })
            .collect();
        cs.push(
            HalfSpace::new(
                IntVector::unit(self.dim + 1, 0),
                Rat::from_integer((-p).into()),
            )
            .unwrap(),
        );
        RationalPolyhedron::new(self.dim + 1, cs).expect("positive dimension")
    }
}

fn slice_of(points: Vec<IntVector>, degree: i64) -> Result<DegreeSlice, GradedError> {
    DegreeSlice::new(degree, points.into_iter().map(Label::Point).collect())
}

fn point(slice: &DegreeSlice, r: BasisRef) -> Result<&IntVector, GradedError> {
    match slice.basis().get(r.index) {
        Some(Label::Point(p)) => Ok(p),
        _ => Err(GradedError::InvalidBasisRef {
            degree: r.degree,
            index: r.index,
        }),
    }
}

fn lookup(slice: &DegreeSlice, p: IntVector) -> Result<Combination, GradedError> {
    let label = Label::Point(p);
    slice
        .index_of(&label)
        .map(Combination::basis)
        .ok_or_else(|| {
            GradedError::Oracle(format!("{label} missing from slice {}", slice.degree()))
        })
}

/// The semigroup algebra `⊕_m Q·(P_m ∩ M)` of a family with zero base:
/// `R(L)` for a divisor, or the Ehrhart ring of a rational polytope.
#[derive(Debug)]
pub struct ToricAlgebra {
    family: SectionPolytopeFamily,
    cache: SliceCache,
}

impl ToricAlgebra {
    pub fn new(family: SectionPolytopeFamily) -> Result<Self, ToricError> {
        if !family.has_zero_base() {
            return Err(ToricError::InvalidFamily(
                "an algebra family must have zero base offsets".into(),
            ));
        }
        Ok(ToricAlgebra {
            family,
            cache: SliceCache::default(),
        })
    }

    pub fn from_polytope(p: &RationalPolyhedron) -> Self {
        ToricAlgebra {
            family: SectionPolytopeFamily::dilations(p),
            cache: SliceCache::default(),
        }
    }

    pub fn family(&self) -> &SectionPolytopeFamily {
        &self.family
    }
}

impl GradedAlgebra for ToricAlgebra {
    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        self.cache.get_or_try_insert(degree, || {
            if degree < 0 {
                return Ok(DegreeSlice::empty(degree));
            }
            slice_of(self.family.member(degree).lattice_points()?, degree)
        })
    }

    fn multiply_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError> {
        let (sa, sb) = (self.slice(a.degree)?, self.slice(b.degree)?);
        let sum = point(&sa, a)? + point(&sb, b)?;
        lookup(&*self.slice(a.degree + b.degree)?, sum)
    }

    fn unit(&self) -> Result<Combination, GradedError> {
        lookup(&*self.slice(0)?, IntVector::zero(self.family.dim))
    }
}

/// `m ↦ P_{D+mL} ∩ M` as a family of slices acted on by a [`ToricAlgebra`]
/// with the same normals and step.
#[derive(Debug)]
pub struct ToricModuleFamily {
    algebra: Arc<ToricAlgebra>,
    family: SectionPolytopeFamily,
    cache: SliceCache,
}

impl ToricModuleFamily {
    pub fn new(algebra: Arc<ToricAlgebra>, base: Vec<Rat>) -> Result<Self, ToricError> {
        let family = algebra.family.with_base(base)?;
        Ok(ToricModuleFamily {
            algebra,
            family,
            cache: SliceCache::default(),
        })
    }

    pub fn family(&self) -> &SectionPolytopeFamily {
        &self.family
    }

    pub fn algebra(&self) -> &Arc<ToricAlgebra> {
        &self.algebra
    }
}

impl SliceFamily for ToricModuleFamily {
    fn lowest_degree(&self) -> Option<i64> {
        None
    }

    fn family_slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        self.cache.get_or_try_insert(degree, || {
            slice_of(self.family.member(degree).lattice_points()?, degree)
        })
    }

    fn family_act(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        let (sr, sx) = (self.algebra.slice(r.degree)?, self.family_slice(x.degree)?);
        let sum = point(&sr, r)? + point(&sx, x)?;
        lookup(&*self.family_slice(r.degree + x.degree)?, sum)
    }
}

/// `dim H⁰(X, D)`.
pub fn h0(x: &ToricVariety, d: &CartierDivisor) -> Result<usize, ToricError> {
    let fam = SectionPolytopeFamily::for_divisors(x, d, &CartierDivisor::zero(x))?;
    Ok(fam.member(0).count_lattice_points()?)
}

/// `R(L)`.
pub fn divisorial_algebra(
    x: &ToricVariety,
    l: &CartierDivisor,
) -> Result<Arc<ToricAlgebra>, ToricError> {
    let fam = SectionPolytopeFamily::for_divisors(x, &CartierDivisor::zero(x), l)?;
    Ok(Arc::new(ToricAlgebra::new(fam)?))
}

/// The slices `H⁰(X, D + mL)` for all `m`, over `R(L)`.
pub fn divisorial_family(
    x: &ToricVariety,
    d: &CartierDivisor,
    l: &CartierDivisor,
) -> Result<Arc<ToricModuleFamily>, ToricError> {
    let alg = divisorial_algebra(x, l)?;
    Ok(Arc::new(ToricModuleFamily::new(alg, to_rats(d.coeffs()))?))
}

/// `M^p_D(L)`: degrees `m ≥ p` of `m ↦ H⁰(X, D + mL)`.
pub fn divisorial_module(
    x: &ToricVariety,
    d: &CartierDivisor,
    l: &CartierDivisor,
    p: i64,
) -> Result<OffsetModule, ToricError> {
    let fam: Arc<dyn SliceFamily> = divisorial_family(x, d, l)?;
    Ok(OffsetModule::new(fam, p)?)
}

fn require_effective(c: &CartierDivisor) -> Result<(), ToricError> {
    if c.is_effective() {
        Ok(())
    } else {
        Err(ToricError::NotEffective(c.to_string()))
    }
}

/// Sections of `M^p_0(L)` vanishing to order `≥ c_ρ` along each `D_ρ`:
/// slice `m` is `H⁰(X, mL − C)`.
pub fn restriction_kernel(
    x: &ToricVariety,
    l: &CartierDivisor,
    c: &CartierDivisor,
    p: i64,
) -> Result<OffsetModule, ToricError> {
    restriction_kernel_twisted(x, &CartierDivisor::zero(x), l, c, p)
}

/// As [`restriction_kernel`] inside `M^p_D(L)`: slice `m` is `H⁰(X, D + mL − C)`.
pub fn restriction_kernel_twisted(
    x: &ToricVariety,
    d: &CartierDivisor,
    l: &CartierDivisor,
    c: &CartierDivisor,
    p: i64,
) -> Result<OffsetModule, ToricError> {
    require_effective(c)?;
    divisorial_module(x, &d.sub(c), l, p)
}

/// The image of restriction: `M` modulo the vanishing submodule `K`.
pub fn restriction_image(m: Arc<dyn GradedModule>, k: Arc<dyn GradedModule>) -> QuotientModule {
    QuotientModule::new(m, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{slice_dims, verify_sub_basis, AlgebraModule};
    use crate::lattice::linalg::rat;
    use crate::toric::examples;

    fn dims(m: &dyn GradedModule, lo: i64, hi: i64) -> Vec<usize> {
        slice_dims(m, lo, hi)
            .unwrap()
            .into_iter()
            .map(|(_, d)| d)
            .collect()
    }

    #[test]
    fn h0_examples() {
        let p1 = examples::projective_space(1);
        assert_eq!(
            h0(&p1, &CartierDivisor::from_i64s(&p1, &[1, 0]).unwrap()).unwrap(),
            2
        );
        let p2 = examples::projective_space(2);
        assert_eq!(
            h0(&p2, &CartierDivisor::from_i64s(&p2, &[0, 0, 4]).unwrap()).unwrap(),
            15
        );
        assert_eq!(h0(&p2, &CartierDivisor::zero(&p2)).unwrap(), 1);
        assert_eq!(
            h0(&p2, &CartierDivisor::from_i64s(&p2, &[0, 0, -1]).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn algebra_slices_and_products() {
        let p1 = examples::projective_space(1);
        let l = CartierDivisor::from_i64s(&p1, &[1, 0]).unwrap();
        let r = divisorial_algebra(&p1, &l).unwrap();
        let d: Vec<usize> = (0..5).map(|m| r.slice(m).unwrap().dimension()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 5]);
        // P_{mL} = [−m, 0]; the product of (−1) and (−2) is (−3).
        let s1 = r.slice(1).unwrap();
        let s2 = r.slice(2).unwrap();
        let a = s1
            .index_of(&Label::Point(IntVector::from_i64s(&[-1])))
            .unwrap();
        let b = s2
            .index_of(&Label::Point(IntVector::from_i64s(&[-2])))
            .unwrap();
        let prod = r
            .multiply_basis(BasisRef::new(1, a), BasisRef::new(2, b))
            .unwrap();
        let s3 = r.slice(3).unwrap();
        assert_eq!(
            prod,
            Combination::basis(
                s3.index_of(&Label::Point(IntVector::from_i64s(&[-3])))
                    .unwrap()
            )
        );
        assert_eq!(r.unit().unwrap(), Combination::basis(0));
    }

    #[test]
    fn zero_divisor_algebra_is_constant() {
        let p2 = examples::projective_space(2);
        let r = divisorial_algebra(&p2, &CartierDivisor::zero(&p2)).unwrap();
        assert!((0..6).all(|m| r.slice(m).unwrap().dimension() == 1));
    }

    #[test]
    fn module_offsets() {
        let p1 = examples::projective_space(1);
        let l = CartierDivisor::from_i64s(&p1, &[1, 0]).unwrap();
        let d = l.scale_i64(2);
        assert_eq!(
            dims(&divisorial_module(&p1, &d, &l, 0).unwrap(), 0, 3),
            vec![3, 4, 5, 6]
        );
        assert_eq!(
            dims(&divisorial_module(&p1, &d, &l, 2).unwrap(), 0, 3),
            vec![0, 0, 5, 6]
        );
        let plain = divisorial_module(&p1, &CartierDivisor::zero(&p1), &l, 0).unwrap();
        let alg = AlgebraModule(divisorial_algebra(&p1, &l).unwrap());
        assert_eq!(dims(&plain, 0, 6), dims(&alg, 0, 6));
    }

    #[test]
    fn kernel_and_image_on_the_plane() {
        let p2 = examples::projective_space(2);
        let h = CartierDivisor::prime(&p2, 0).unwrap();
        let k = restriction_kernel(&p2, &h, &h, 0).unwrap();
        let m = divisorial_module(&p2, &CartierDivisor::zero(&p2), &h, 0).unwrap();
        verify_sub_basis(&m, &k, 0, 8).unwrap();
        for (deg, dim) in slice_dims(&k, 0, 8).unwrap() {
            assert_eq!(dim as i64, deg * (deg + 1) / 2);
        }
        let im = restriction_image(Arc::new(m), Arc::new(k));
        for (deg, dim) in slice_dims(&im, 0, 8).unwrap() {
            assert_eq!(dim as i64, deg + 1);
        }
    }

    #[test]
    fn negative_kernel_divisor_rejected() {
        let p1 = examples::projective_space(1);
        let l = CartierDivisor::from_i64s(&p1, &[1, 0]).unwrap();
        let c = CartierDivisor::from_i64s(&p1, &[-1, 0]).unwrap();
        assert!(matches!(
            restriction_kernel(&p1, &l, &c, 0),
            Err(ToricError::NotEffective(_))
        ));
    }

    #[test]
    fn rational_segment_algebra() {
        let seg = RationalPolyhedron::from_rows(
            1,
            &[(vec![1], rat(0)), (vec![-1], Rat::new(3.into(), 2.into()))],
        )
        .unwrap();
        let r = ToricAlgebra::from_polytope(&seg);
        let d: Vec<usize> = (0..5).map(|m| r.slice(m).unwrap().dimension()).collect();
        assert_eq!(d, vec![1, 2, 4, 5, 7]);
    }
}
