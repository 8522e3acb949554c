//! Derived graded objects: truncations, Veronese subrings, residue-class
//! components, re-indexed components, offset changes and coordinate
//! quotients. Every view shares basis labels with the object it wraps.

use std::sync::Arc;

use super::slice::{BasisRef, Combination, DegreeSlice, Label};
use super::traits::{GradedAlgebra, GradedModule, SliceCache, SliceFamily};
use super::GradedError;

fn check_period(period: i64) -> Result<(), GradedError> {
    if period < 1 {
        return Err(GradedError::InvalidPeriod(period));
    }
    Ok(())
}

/// `R^{[I]}`: keeps the slices of degree divisible by `I`, with the original
/// degrees (so slice `m` is `R_m` when `I | m` and zero otherwise).
pub struct Truncation {
    inner: Arc<dyn GradedAlgebra>,
    period: i64,
}

pub fn truncate(r: Arc<dyn GradedAlgebra>, period: i64) -> Result<Truncation, GradedError> {
    check_period(period)?;
    Ok(Truncation { inner: r, period })
}

impl Truncation {
    pub fn period(&self) -> i64 {
        self.period
    }
}

impl GradedAlgebra for Truncation {
    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        if degree.rem_euclid(self.period) == 0 {
            self.inner.slice(degree)
        } else {
            Ok(Arc::new(DegreeSlice::empty(degree)))
        }
    }

    fn multiply_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError> {
        if a.degree.rem_euclid(self.period) != 0 || b.degree.rem_euclid(self.period) != 0 {
            return Err(GradedError::InvalidBasisRef {
                degree: a.degree,
                index: a.index,
            });
        }
        self.inner.multiply_basis(a, b)
    }

    fn unit(&self) -> Result<Combination, GradedError> {
        self.inner.unit()
    }

    fn base_ring(&self) -> String {
        self.inner.base_ring()
    }
}

/// `R(IL)` seen inside `R(L)`: slice `n` is `R_{nI}`.
pub struct Veronese {
    inner: Arc<dyn GradedAlgebra>,
    period: i64,
}

pub fn veronese(r: Arc<dyn GradedAlgebra>, period: i64) -> Result<Veronese, GradedError> {
    check_period(period)?;
    Ok(Veronese { inner: r, period })
}

impl GradedAlgebra for Veronese {
    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        Ok(Arc::new(
            self.inner.slice(degree * self.period)?.with_degree(degree),
        ))
    }

    fn multiply_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError> {
        let k = self.period;
        self.inner.multiply_basis(
            BasisRef::new(a.degree * k, a.index),
            BasisRef::new(b.degree * k, b.index),
        )
    }

    fn unit(&self) -> Result<Combination, GradedError> {
        self.inner.unit()
    }

    fn base_ring(&self) -> String {
        self.inner.base_ring()
    }
}

/// `N_i`: the degrees `m ≡ i (mod I)` of a module, as a module over `R^{[I]}`.
pub struct ResidueComponent {
    inner: Arc<dyn GradedModule>,
    period: i64,
    residue: i64,
}

impl ResidueComponent {
    pub fn residue(&self) -> i64 {
        self.residue
    }

    pub fn period(&self) -> i64 {
        self.period
    }
}

/// `M ≅ N_0 ⊕ … ⊕ N_{I−1}` over `R^{[I]}`.
pub fn decompose(
    m: Arc<dyn GradedModule>,
    period: i64,
) -> Result<Vec<ResidueComponent>, GradedError> {
    check_period(period)?;
    Ok((0..period)
        .map(|i| ResidueComponent {
            inner: Arc::clone(&m),
            period,
            residue: i,
        })
        .collect())
}

impl GradedModule for ResidueComponent {
    fn offset(&self) -> i64 {
        self.inner.offset()
    }

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        if degree.rem_euclid(self.period) == self.residue {
            self.inner.slice(degree)
        } else {
            Ok(Arc::new(DegreeSlice::empty(degree)))
        }
    }

    fn act_basis(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        if r.degree.rem_euclid(self.period) != 0 || x.degree.rem_euclid(self.period) != self.residue
        {
            return Err(GradedError::InvalidBasisRef {
                degree: x.degree,
                index: x.index,
            });
        }
        self.inner.act_basis(r, x)
    }
}

/// `N_i'`: slice `n` is slice `nI + i` of the wrapped module, as a module over
/// the Veronese algebra `R(IL)`, with offset `q_i`.
pub struct Reindexed {
    inner: Arc<dyn GradedModule>,
    period: i64,
    residue: i64,
    offset: i64,
}

/// Smallest `q` with `q·I + i ≥ p`.
pub fn reindexed_offset(period: i64, residue: i64, p: i64) -> i64 {
    (p - residue).div_euclid(period) + i64::from((p - residue).rem_euclid(period) != 0)
}

pub fn reindex_component(
    component: Arc<dyn GradedModule>,
    period: i64,
    residue: i64,
    p: i64,
) -> Result<Reindexed, GradedError> {
    check_period(period)?;
    if !(0..period).contains(&residue) {
        return Err(GradedError::InvalidResidue { residue, period });
    }
    Ok(Reindexed {
        inner: component,
        period,
        residue,
        offset: reindexed_offset(period, residue, p),
    })
}

impl Reindexed {
    /// Degree in the wrapped module corresponding to degree `n` here.
    pub fn original_degree(&self, n: i64) -> i64 {
        n * self.period + self.residue
    }
}

impl GradedModule for Reindexed {
    fn offset(&self) -> i64 {
        self.offset
    }

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        if degree < self.offset {
            return Ok(Arc::new(DegreeSlice::empty(degree)));
        }
        Ok(Arc::new(
            self.inner
                .slice(self.original_degree(degree))?
                .with_degree(degree),
        ))
    }

    fn act_basis(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        self.inner.act_basis(
            BasisRef::new(r.degree * self.period, r.index),
            BasisRef::new(self.original_degree(x.degree), x.index),
        )
    }
}

/// The degrees `m ≥ offset` of a [`SliceFamily`].
#[derive(Clone)]
pub struct OffsetModule {
    family: Arc<dyn SliceFamily>,
    offset: i64,
}

impl OffsetModule {
    pub fn new(family: Arc<dyn SliceFamily>, offset: i64) -> Result<Self, GradedError> {
        if let Some(lo) = family.lowest_degree() {
            if offset < lo {
                return Err(GradedError::OracleRangeExceeded {
                    requested: offset,
                    lowest: lo,
                });
            }
        }
        Ok(OffsetModule { family, offset })
    }

    pub fn family(&self) -> &Arc<dyn SliceFamily> {
        &self.family
    }
}

/// Same family, new offset `q`. Lowering the offset appends the slices in
/// `[q, p)` from the oracle; raising it drops slices.
pub fn change_offset(m: &OffsetModule, q: i64) -> Result<OffsetModule, GradedError> {
    OffsetModule::new(Arc::clone(&m.family), q)
}

impl GradedModule for OffsetModule {
    fn offset(&self) -> i64 {
        self.offset
    }

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        if degree < self.offset {
            return Ok(Arc::new(DegreeSlice::empty(degree)));
        }
        self.family.family_slice(degree)
    }

    fn act_basis(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        if x.degree < self.offset {
            return Err(GradedError::InvalidBasisRef {
                degree: x.degree,
                index: x.index,
            });
        }
        self.family.family_act(r, x)
    }
}

/// An algebra regarded as a module over itself (offset 0).
pub struct AlgebraModule(pub Arc<dyn GradedAlgebra>);

impl GradedModule for AlgebraModule {
    fn offset(&self) -> i64 {
        0
    }

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        self.0.slice(degree)
    }

    fn act_basis(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        self.0.multiply_basis(r, x)
    }
}

/// Checks that every label of `sub` in degrees `lo..=hi` is a label of `ambient`.
pub fn verify_sub_basis(
    ambient: &dyn GradedModule,
    sub: &dyn GradedModule,
    lo: i64,
    hi: i64,
) -> Result<(), GradedError> {
    for m in lo..=hi {
        let a = ambient.slice(m)?;
        let s = sub.slice(m)?;
        if let Some(l) = s.basis().iter().find(|l| !a.contains(l)) {
            return Err(GradedError::NotASubmodule {
                degree: m,
                label: l.to_string(),
            });
        }
    }
    Ok(())
}

fn quotient_slice(ambient: &DegreeSlice, sub: &DegreeSlice) -> Result<DegreeSlice, GradedError> {
    if let Some(l) = sub.basis().iter().find(|l| !ambient.contains(l)) {
        return Err(GradedError::NotASubmodule {
            degree: ambient.degree(),
            label: l.to_string(),
        });
    }
    let labels: Vec<Label> = ambient
        .basis()
        .iter()
        .filter(|l| !sub.contains(l))
        .cloned()
        .collect();
    DegreeSlice::new(ambient.degree(), labels)
}

/// Reduces an ambient combination modulo a coordinate subspace and rewrites it
/// in quotient coordinates.
fn project(c: &Combination, ambient: &DegreeSlice, quotient: &DegreeSlice) -> Combination {
    c.reindex(|i| quotient.index_of(ambient.label(i)))
}

/// `M / K` where `K` is spanned, degreewise, by a subset of `M`'s basis labels.
pub struct QuotientModule {
    ambient: Arc<dyn GradedModule>,
    sub: Arc<dyn GradedModule>,
    cache: SliceCache,
}

impl QuotientModule {
    pub fn new(ambient: Arc<dyn GradedModule>, sub: Arc<dyn GradedModule>) -> Self {
        QuotientModule {
            ambient,
            sub,
            cache: SliceCache::default(),
        }
    }

    pub fn ambient(&self) -> &Arc<dyn GradedModule> {
        &self.ambient
    }

    pub fn sub(&self) -> &Arc<dyn GradedModule> {
        &self.sub
    }
}

impl GradedModule for QuotientModule {
    fn offset(&self) -> i64 {
        self.ambient.offset()
    }

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        self.cache.get_or_try_insert(degree, || {
            quotient_slice(&*self.ambient.slice(degree)?, &*self.sub.slice(degree)?)
        })
    }

    fn act_basis(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        let q_src = self.slice(x.degree)?;
        let a_src = self.ambient.slice(x.degree)?;
        let label = q_src
            .basis()
            .get(x.index)
            .ok_or(GradedError::InvalidBasisRef {
                degree: x.degree,
                index: x.index,
            })?;
        let ai = a_src
            .index_of(label)
            .expect("quotient labels come from the ambient slice");
        let prod = self.ambient.act_basis(r, BasisRef::new(x.degree, ai))?;
        let target = r.degree + x.degree;
        Ok(project(
            &prod,
            &*self.ambient.slice(target)?,
            &*self.slice(target)?,
        ))
    }
}

/// `R / K` for an ideal `K` spanned degreewise by a subset of `R`'s labels.
pub struct QuotientAlgebra {
    ambient: Arc<dyn GradedAlgebra>,
    ideal: Arc<dyn GradedModule>,
    cache: SliceCache,
}

impl QuotientAlgebra {
    pub fn new(ambient: Arc<dyn GradedAlgebra>, ideal: Arc<dyn GradedModule>) -> Self {
        QuotientAlgebra {
            ambient,
            ideal,
            cache: SliceCache::default(),
        }
    }

    pub fn ambient(&self) -> &Arc<dyn GradedAlgebra> {
        &self.ambient
    }

    pub fn ideal(&self) -> &Arc<dyn GradedModule> {
        &self.ideal
    }
}

impl GradedAlgebra for QuotientAlgebra {
    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        self.cache.get_or_try_insert(degree, || {
            quotient_slice(&*self.ambient.slice(degree)?, &*self.ideal.slice(degree)?)
        })
    }

    fn multiply_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError> {
        let lift = |x: BasisRef| -> Result<BasisRef, GradedError> {
            let q = self.slice(x.degree)?;
            let label = q.basis().get(x.index).ok_or(GradedError::InvalidBasisRef {
                degree: x.degree,
                index: x.index,
            })?;
            let i = self
                .ambient
                .slice(x.degree)?
                .index_of(label)
                .expect("quotient labels come from the ambient slice");
            Ok(BasisRef::new(x.degree, i))
        };
        let prod = self.ambient.multiply_basis(lift(a)?, lift(b)?)?;
        let target = a.degree + b.degree;
        Ok(project(
            &prod,
            &*self.ambient.slice(target)?,
            &*self.slice(target)?,
        ))
    }

    fn unit(&self) -> Result<Combination, GradedError> {
        Ok(project(
            &self.ambient.unit()?,
            &*self.ambient.slice(0)?,
            &*self.slice(0)?,
        ))
    }

    fn base_ring(&self) -> String {
        self.ambient.base_ring()
    }
}
