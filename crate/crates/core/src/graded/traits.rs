use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::slice::{BasisRef, Combination, DegreeSlice};
use super::GradedError;

/// A commutative graded `Q`-algebra `⊕_{m≥0} R_m` presented by oracles.
///
/// Negative degrees must return empty slices. Products of basis vectors are
/// combinations in the slice of the summed degree; a product the oracle
/// cannot produce is an error, never an implicit zero.
pub trait GradedAlgebra: Send + Sync {
    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError>;

    fn multiply_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError>;

    /// The unit as a combination in slice 0.
    fn unit(&self) -> Result<Combination, GradedError>;

    /// Description of `R_0` / the base ring.
    fn base_ring(&self) -> String {
        "Q".to_string()
    }
}

/// A graded module `⊕_{m≥p} M_m` over some [`GradedAlgebra`], presented by
/// oracles. Slices below `offset()` are empty.
pub trait GradedModule: Send + Sync {
    fn offset(&self) -> i64;

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError>;

    /// `r · x` for `r` a basis vector of the algebra and `x` one of the module.
    fn act_basis(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError>;
}

/// An oracle that knows the would-be slices of a module in every degree it
/// supports, independent of any offset. Divisorial modules come from such a
/// family: `M^p_F(L)` keeps the degrees `m ≥ p` of `m ↦ H⁰(X, F(mL))`.
pub trait SliceFamily: Send + Sync {
    /// Lowest degree the oracle can produce; `None` if unbounded below.
    fn lowest_degree(&self) -> Option<i64>;

    fn family_slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError>;

    fn family_act(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError>;
}

/// Product of two homogeneous combinations.
pub fn multiply(
    alg: &dyn GradedAlgebra,
    a_degree: i64,
    a: &Combination,
    b_degree: i64,
    b: &Combination,
) -> Result<Combination, GradedError> {
    let mut out = Combination::zero();
    for (i, x) in a.iter() {
        for (j, y) in b.iter() {
            let p = alg.multiply_basis(BasisRef::new(a_degree, i), BasisRef::new(b_degree, j))?;
            out.add_scaled(&p, &(x * y));
        }
    }
    Ok(out)
}

/// `r · x` for a basis vector `r` of the algebra and a homogeneous module combination.
pub fn act(
    module: &dyn GradedModule,
    r: BasisRef,
    x_degree: i64,
    x: &Combination,
) -> Result<Combination, GradedError> {
    let mut out = Combination::zero();
    for (j, y) in x.iter() {
        let p = module.act_basis(r, BasisRef::new(x_degree, j))?;
        out.add_scaled(&p, y);
    }
    Ok(out)
}

/// Memo table for slices. Oracles are deterministic, so caching is
/// observationally pure.
#[derive(Default)]
pub struct SliceCache {
    slices: Mutex<HashMap<i64, Arc<DegreeSlice>>>,
}

impl SliceCache {
    pub fn get_or_try_insert(
        &self,
        degree: i64,
        make: impl FnOnce() -> Result<DegreeSlice, GradedError>,
    ) -> Result<Arc<DegreeSlice>, GradedError> {
        if let Some(s) = self.slices.lock().unwrap().get(&degree) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(make()?);
        self.slices.lock().unwrap().insert(degree, Arc::clone(&s));
        Ok(s)
    }
}

impl std::fmt::Debug for SliceCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SliceCache")
            .field("cached", &self.slices.lock().unwrap().len())
            .finish()
    }
}

/// Slice dimensions for degrees `lo..=hi`.
pub fn slice_dims(
    module: &dyn GradedModule,
    lo: i64,
    hi: i64,
) -> Result<Vec<(i64, usize)>, GradedError> {
    (lo..=hi)
        .map(|m| Ok((m, module.slice(m)?.dimension())))
        .collect()
}

pub fn algebra_dims(
    alg: &dyn GradedAlgebra,
    lo: i64,
    hi: i64,
) -> Result<Vec<(i64, usize)>, GradedError> {
    (lo..=hi)
        .map(|m| Ok((m, alg.slice(m)?.dimension())))
        .collect()
}
