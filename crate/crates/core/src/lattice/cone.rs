use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::linalg::{nullspace, rank, Rat};
use super::polyhedron::{HalfSpace, RationalPolyhedron};
use super::{GeometryError, IntVector};

/// A rational polyhedral cone in ray-generator form.
///
/// A lineality space, when present, is carried as `±` pairs of generators.
/// The zero cone has no generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    dim: usize,
    generators: Vec<IntVector>,
}

impl Cone {
    /// Generators are replaced by their primitive vectors; zero vectors and
    /// duplicates are dropped.
    pub fn new(dim: usize, generators: Vec<IntVector>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        let mut gens: Vec<IntVector> = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive())
            .collect();
        gens.sort();
        gens.dedup();
        Ok(Cone {
            dim,
            generators: gens,
        })
    }

    pub fn from_i64s(dim: usize, gens: &[&[i64]]) -> Result<Self, GeometryError> {
        Self::new(dim, gens.iter().map(|g| IntVector::from_i64s(g)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Cone {
            dim,
            generators: Vec::new(),
        }
    }

    /// `{d : ⟨row, d⟩ ≥ 0 for every row}` converted to generators.
    pub fn from_inequalities(dim: usize, rows: &[IntVector]) -> Self {
        let (lineality, rays) = extreme_rays(dim, rows);
        let mut generators = rays;
        for l in lineality {
            generators.push(-&l);
            generators.push(l);
        }
        generators.sort();
        generators.dedup();
        Cone { dim, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Inequality description: primitive `w` with `⟨w, x⟩ ≥ 0` on the cone.
    /// Equalities appear as `±` pairs.
    pub fn facets(&self) -> Vec<IntVector> {
        Cone::from_inequalities(self.dim, &self.generators).generators
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.facets().iter().all(|w| !w.dot(x).is_negative())
    }

    /// A cone is pointed iff its dual is full-dimensional.
    pub fn is_pointed(&self) -> bool {
        let dual = self.facets();
        let rows: Vec<Vec<Rat>> = dual.iter().map(IntVector::to_rational).collect();
        rank(&rows, self.dim) == self.dim
    }

    /// The cone as a polyhedron `{x : ⟨w, x⟩ ≥ 0}`.
    pub fn to_polyhedron(&self) -> RationalPolyhedron {
        let cs = self
            .facets()
            .into_iter()
            .map(|w| HalfSpace::new(w, Rat::zero()).unwrap())
            .collect();
        RationalPolyhedron::new(self.dim, cs).unwrap()
    }

    /// Minimal generating set of the semigroup `C ∩ Z^n`.
    ///
    /// Every irreducible element lies in some simplicial subcone spanned by at
    /// most `n` generators, and there it sits in the half-open parallelepiped
    /// or on a ray, so its degree is at most the sum of the `n` largest
    /// generator degrees. All points up to that degree are enumerated and the
    /// reducible ones removed.
    pub fn hilbert_basis(&self) -> Result<HilbertBasisResult, GeometryError> {
        if !self.is_pointed() {
            return Err(GeometryError::NotPointed);
        }
        let graded_by_first =
            !self.generators.is_empty() && self.generators.iter().all(|g| g.first().is_positive());
        let facets = self.facets();
        let grading = if graded_by_first {
            IntVector::unit(self.dim, 0)
        } else {
            facets
                .iter()
                .fold(IntVector::zero(self.dim), |acc, w| &acc + w)
        };
        if self.generators.is_empty() {
            return Ok(HilbertBasisResult {
                elements: Vec::new(),
                grading,
                graded_by_first_coordinate: graded_by_first,
                max_degree: BigInt::zero(),
                degree_bound: BigInt::zero(),
            });
        }
        let mut gen_degrees: Vec<BigInt> = self.generators.iter().map(|g| grading.dot(g)).collect();
        gen_degrees.sort_by(|a, b| b.cmp(a));
        let degree_bound: BigInt = gen_degrees.iter().take(self.dim).sum();

        let mut cs: Vec<HalfSpace> = facets
            .iter()
            .map(|w| HalfSpace::new(w.clone(), Rat::zero()).unwrap())
            .collect();
        cs.push(HalfSpace::new(
            -&grading,
            Rat::from_integer(degree_bound.clone()),
        )?);
        let region = RationalPolyhedron::new(self.dim, cs)?;
        let mut points: Vec<(BigInt, IntVector)> = region
            .lattice_points()?
            .into_iter()
            .filter(|p| !p.is_zero())
            .map(|p| (grading.dot(&p), p))
            .collect();
        points.sort();

        let in_cone = |x: &IntVector| facets.iter().all(|w| !w.dot(x).is_negative());
        let mut irreducible: Vec<(BigInt, IntVector)> = Vec::new();
        for (d, x) in points {
            let reducible = irreducible
                .iter()
                .any(|(dh, h)| *dh < d && in_cone(&(&x - h)));
            if !reducible {
                irreducible.push((d, x));
            }
        }
        let max_degree = irreducible
            .iter()
            .map(|(d, _)| d.clone())
            .max()
            .unwrap_or_default();
        let mut elements: Vec<IntVector> = irreducible.into_iter().map(|(_, x)| x).collect();
        elements.sort();
        Ok(HilbertBasisResult {
            elements,
            grading,
            graded_by_first_coordinate: graded_by_first,
            max_degree,
            degree_bound,
        })
    }
}

/// Outcome of [`Cone::hilbert_basis`]. `max_degree` is measured in `grading`,
/// which is the first coordinate whenever every generator has positive first
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertBasisResult {
    pub elements: Vec<IntVector>,
    pub grading: IntVector,
    pub graded_by_first_coordinate: bool,
    #[serde(serialize_with = "crate::serde_rat::serialize_int")]
    pub max_degree: BigInt,
    #[serde(serialize_with = "crate::serde_rat::serialize_int")]
    pub degree_bound: BigInt,
}

/// True iff every generator of `inner` satisfies every facet inequality of `outer`.
pub fn cone_contains(outer: &Cone, inner: &Cone) -> Result<bool, GeometryError> {
    if outer.dim != inner.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: outer.dim,
            found: inner.dim,
        });
    }
    let facets = outer.facets();
    Ok(inner
        .generators
        .iter()
        .all(|g| facets.iter().all(|w| !w.dot(g).is_negative())))
}

/// Lineality basis and extreme rays (of the part orthogonal to the lineality
/// space) of `{d ∈ Q^n : ⟨row, d⟩ ≥ 0}`.
///
/// Rays are found by brute force over subsets of tight rows; fine for the
/// handful of constraints met in practice.
pub fn extreme_rays(n: usize, rows: &[IntVector]) -> (Vec<IntVector>, Vec<IntVector>) {
    let qrows: Vec<Vec<Rat>> = rows.iter().map(IntVector::to_rational).collect();
    let lineality: Vec<IntVector> = nullspace(&qrows, n)
        .iter()
        .filter_map(|v| IntVector::primitive_from_rational(v))
        .collect();
    if lineality.len() == n {
        return (lineality, Vec::new());
    }
    let k = n - 1 - lineality.len();
    let lin_rows: Vec<Vec<Rat>> = lineality.iter().map(IntVector::to_rational).collect();
    let feasible = |d: &IntVector| rows.iter().all(|r| !r.dot(d).is_negative());
    let mut rays = Vec::new();
    for subset in combinations(rows.len(), k) {
        let mut m: Vec<Vec<Rat>> = subset.iter().map(|&i| qrows[i].clone()).collect();
        m.extend(lin_rows.iter().cloned());
        if rank(&m, n) != n - 1 {
            continue;
        }
        let ns = nullspace(&m, n);
        let Some(d) = IntVector::primitive_from_rational(&ns[0]) else {
            continue;
        };
        if feasible(&d) {
            rays.push(d);
        } else {
            let nd = -&d;
            if feasible(&nd) {
                rays.push(nd);
            }
        }
    }
    rays.sort();
    rays.dedup();
    (lineality, rays)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::linalg::rat;

    fn v(c: &[i64]) -> IntVector {
        IntVector::from_i64s(c)
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn bounded_polyhedron_has_zero_recession() {
        let sq = RationalPolyhedron::unit_box(2, 0, 1);
        assert!(sq.recession_cone().unwrap().is_zero());
    }

    #[test]
    fn recession_of_wedge() {
        // {y ≥ 0, y ≥ x}: extreme rays are (-1,0) and (1,1).
        let p = RationalPolyhedron::from_rows(2, &[(vec![0, 1], rat(0)), (vec![-1, 1], rat(0))])
            .unwrap();
        let c = p.recession_cone().unwrap();
        assert_eq!(c.generators(), &[v(&[-1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn recession_of_half_line() {
        let p = RationalPolyhedron::from_rows(1, &[(vec![1], rat(-1))]).unwrap();
        assert_eq!(p.recession_cone().unwrap().generators(), &[v(&[1])]);
    }

    #[test]
    fn recession_of_empty_is_error() {
        let p =
            RationalPolyhedron::from_rows(1, &[(vec![1], rat(-2)), (vec![-1], rat(1))]).unwrap();
        assert!(matches!(
            p.recession_cone(),
            Err(GeometryError::EmptyPolyhedron)
        ));
    }

    #[test]
    fn strip_has_lineality() {
        // 0 ≤ y ≤ 1: recession cone is the x-axis line.
        let p = RationalPolyhedron::from_rows(2, &[(vec![0, 1], rat(0)), (vec![0, -1], rat(1))])
            .unwrap();
        let c = p.recession_cone().unwrap();
        assert_eq!(c.generators(), &[v(&[-1, 0]), v(&[1, 0])]);
        assert!(!c.is_pointed());
        assert!(matches!(c.hilbert_basis(), Err(GeometryError::NotPointed)));
    }

    #[test]
    fn smooth_cone_basis() {
        let c = Cone::from_i64s(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(
            c.hilbert_basis().unwrap().elements,
            vec![v(&[0, 1]), v(&[1, 0])]
        );
    }

    #[test]
    fn singular_cones() {
        let c = Cone::from_i64s(2, &[&[1, 0], &[1, 2]]).unwrap();
        let hb = c.hilbert_basis().unwrap();
        assert_eq!(hb.elements, vec![v(&[1, 0]), v(&[1, 1]), v(&[1, 2])]);
        assert!(hb.graded_by_first_coordinate);
        assert_eq!(hb.max_degree, BigInt::from(1));

        let c3 = Cone::from_i64s(2, &[&[1, 0], &[1, 3]]).unwrap();
        assert_eq!(
            c3.hilbert_basis().unwrap().elements,
            vec![v(&[1, 0]), v(&[1, 1]), v(&[1, 2]), v(&[1, 3])]
        );

        // cone over the segment [0, 3/2]
        let seg = Cone::from_i64s(2, &[&[1, 0], &[2, 3]]).unwrap();
        let hb = seg.hilbert_basis().unwrap();
        assert_eq!(hb.elements, vec![v(&[1, 0]), v(&[1, 1]), v(&[2, 3])]);
        assert_eq!(hb.max_degree, BigInt::from(2));
    }

    #[test]
    fn containment() {
        let quad = Cone::from_i64s(2, &[&[1, 0], &[0, 1]]).unwrap();
        let diag = Cone::from_i64s(2, &[&[1, 1]]).unwrap();
        assert!(cone_contains(&quad, &quad).unwrap());
        assert!(cone_contains(&quad, &diag).unwrap());
        let wedge = Cone::from_i64s(2, &[&[1, 0], &[1, 2]]).unwrap();
        assert!(!cone_contains(&wedge, &Cone::from_i64s(2, &[&[0, 1]]).unwrap()).unwrap());
        // The facet that cuts (0,1) off is ⟨(2,-1), ·⟩ ≥ 0.
        assert!(wedge.facets().contains(&v(&[2, -1])));
        let line = Cone::from_i64s(1, &[&[1]]).unwrap();
        assert!(matches!(
            cone_contains(&quad, &line),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_first_coordinate_grading() {
        let c = Cone::from_i64s(2, &[&[-1, 2], &[1, 0]]).unwrap();
        let hb = c.hilbert_basis().unwrap();
        assert!(!hb.graded_by_first_coordinate);
        assert_eq!(hb.elements, vec![v(&[-1, 2]), v(&[0, 1]), v(&[1, 0])]);
    }
}
