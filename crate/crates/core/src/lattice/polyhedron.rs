use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::cone::{extreme_rays, Cone};
use super::linalg::Rat;
use super::{GeometryError, IntVector};

/// The closed half-space `⟨normal, x⟩ ≥ −offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HalfSpace {
    normal: IntVector,
    #[serde(with = "crate::serde_rat")]
    offset: Rat,
}

impl HalfSpace {
    /// Builds the half-space, dividing out the content of `normal` so that the
    /// stored normal is primitive.
    pub fn new(normal: IntVector, offset: Rat) -> Result<Self, GeometryError> {
        let g = normal.content();
        if g.is_zero() {
            return Err(GeometryError::ZeroNormal);
        }
        let offset = offset / Rat::from_integer(g.clone());
        Ok(HalfSpace {
            normal: normal.primitive(),
            offset,
        })
    }

    pub fn normal(&self) -> &IntVector {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        Rat::from_integer(self.normal.dot(x)) >= -self.offset.clone()
    }

    pub fn contains_rational(&self, x: &[Rat]) -> bool {
        self.normal.dot_rational(x) >= -self.offset.clone()
    }
}

/// A polyhedron `{x ∈ Q^n : ⟨a_i, x⟩ ≥ −b_i}` given by half-spaces with
/// primitive integer normals and rational offsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalPolyhedron {
    dim: usize,
    constraints: Vec<HalfSpace>,
}

impl RationalPolyhedron {
    pub fn new(dim: usize, constraints: Vec<HalfSpace>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if let Some(h) = constraints.iter().find(|h| h.normal.dim() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: h.normal.dim(),
            });
        }
        Ok(RationalPolyhedron { dim, constraints })
    }

    /// Convenience constructor from `(normal, offset)` pairs.
    pub fn from_rows(dim: usize, rows: &[(Vec<i64>, Rat)]) -> Result<Self, GeometryError> {
        let constraints = rows
            .iter()
            .map(|(n, b)| HalfSpace::new(IntVector::from_i64s(n), b.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dim, constraints)
    }

    /// The axis-parallel box `∏ [lo_i, hi_i]`.
    pub fn unit_box(dim: usize, lo: i64, hi: i64) -> Self {
        let mut cs = Vec::new();
        for i in 0..dim {
            let e = IntVector::unit(dim, i);
            cs.push(HalfSpace::new(e.clone(), Rat::from_integer((-lo).into())).unwrap());
            cs.push(HalfSpace::new(-&e, Rat::from_integer(hi.into())).unwrap());
        }
        RationalPolyhedron {
            dim,
            constraints: cs,
        }
    }

    /// The standard simplex `conv{0, e_1, …, e_n}` scaled by `m`.
    pub fn standard_simplex(dim: usize, m: i64) -> Self {
        let mut cs: Vec<HalfSpace> = (0..dim)
            .map(|i| HalfSpace::new(IntVector::unit(dim, i), Rat::zero()).unwrap())
            .collect();
        let all = IntVector::from_i64s(&vec![-1; dim]);
        cs.push(HalfSpace::new(all, Rat::from_integer(m.into())).unwrap());
        RationalPolyhedron {
            dim,
            constraints: cs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.constraints.iter().all(|h| h.contains(x))
    }

    pub fn contains_rational(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|h| h.contains_rational(x))
    }

    /// `m·P`: offsets scale linearly, normals are unchanged.
    pub fn dilate(&self, m: &Rat) -> RationalPolyhedron {
        assert!(!m.is_negative(), "dilation factor must be nonnegative");
        let constraints = self
            .constraints
            .iter()
            .map(|h| HalfSpace {
                normal: h.normal.clone(),
                offset: &h.offset * m,
            })
            .collect();
        RationalPolyhedron {
            dim: self.dim,
            constraints,
        }
    }

    /// `P + t`.
    pub fn translate(&self, t: &IntVector) -> RationalPolyhedron {
        let constraints = self
            .constraints
            .iter()
            .map(|h| HalfSpace {
                normal: h.normal.clone(),
                offset: &h.offset - Rat::from_integer(h.normal.dot(t)),
            })
            .collect();
        RationalPolyhedron {
            dim: self.dim,
            constraints,
        }
    }

    /// Intersection with extra half-spaces.
    pub fn with_constraints(
        &self,
        extra: impl IntoIterator<Item = HalfSpace>,
    ) -> RationalPolyhedron {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra);
        RationalPolyhedron {
            dim: self.dim,
            constraints,
        }
    }

    fn rows(&self) -> Vec<Row> {
        self.constraints
            .iter()
            .map(|h| Row {
                coeffs: h.normal.coords().to_vec(),
                constant: h.offset.clone(),
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        !ProjectionChain::build(self.dim, self.rows()).feasible
    }

    pub fn is_bounded(&self) -> bool {
        let chain = ProjectionChain::build(self.dim, self.rows());
        !chain.feasible || chain.bounded()
    }

    /// All integer points of a bounded polyhedron in lexicographic order.
    ///
    /// Enumeration walks a Fourier–Motzkin projection chain: the range of
    /// coordinate `k` given a prefix is read off the projection onto the first
    /// `k + 1` coordinates, so no partial prefix is ever a dead end over `Q`.
    pub fn lattice_points(&self) -> Result<Vec<IntVector>, GeometryError> {
        let chain = ProjectionChain::build(self.dim, self.rows());
        if !chain.feasible {
            return Ok(Vec::new());
        }
        if !chain.bounded() {
            return Err(GeometryError::UnboundedPolyhedron);
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.dim);
        chain.enumerate(&mut prefix, &mut out);
        Ok(out.into_iter().map(IntVector::from).collect())
    }

    pub fn count_lattice_points(&self) -> Result<usize, GeometryError> {
        Ok(self.lattice_points()?.len())
    }

    /// Integer range `[⌈min x_i⌉, ⌊max x_i⌋]` of one coordinate over `P`.
    /// `None` when the projection is empty or contains no integer.
    pub fn coordinate_range(&self, axis: usize) -> Result<Option<(BigInt, BigInt)>, GeometryError> {
        // Move `axis` to the front and project everything else away.
        let rows: Vec<Row> = self
            .rows()
            .into_iter()
            .map(|r| {
                let mut coeffs = r.coeffs.clone();
                coeffs.swap(0, axis);
                Row {
                    coeffs,
                    constant: r.constant,
                }
            })
            .collect();
        let chain = ProjectionChain::build(self.dim, rows);
        if !chain.feasible {
            return Ok(None);
        }
        match chain.range(0, &[]) {
            Bound::Range(lo, hi) if lo <= hi => Ok(Some((lo, hi))),
            Bound::Range(..) => Ok(None),
            Bound::Unbounded => Err(GeometryError::UnboundedPolyhedron),
        }
    }

    /// Reference enumerator: bounding box from per-axis projections, then a
    /// filter over every box point. Slow; used to cross-check `lattice_points`.
    pub fn lattice_points_box_scan(&self) -> Result<Vec<IntVector>, GeometryError> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let mut ranges = Vec::with_capacity(self.dim);
        for axis in 0..self.dim {
            match self.coordinate_range(axis)? {
                Some(r) => ranges.push(r),
                None => return Ok(Vec::new()),
            }
        }
        let mut out = Vec::new();
        let mut cur: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
        loop {
            let p = IntVector::from(cur.clone());
            if self.contains(&p) {
                out.push(p);
            }
            // Odometer increment, last axis fastest, so output is lexicographic.
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if cur[k] < ranges[k].1 {
                    cur[k] += 1;
                    for (j, r) in ranges.iter().enumerate().skip(k + 1) {
                        cur[j] = r.0.clone();
                    }
                    break;
                }
            }
        }
    }

    /// Directions `d` with `⟨a_i, d⟩ ≥ 0` for every constraint, in ray form.
    pub fn recession_cone(&self) -> Result<Cone, GeometryError> {
        if self.is_empty() {
            return Err(GeometryError::EmptyPolyhedron);
        }
        let rows: Vec<IntVector> = self.constraints.iter().map(|h| h.normal.clone()).collect();
        Ok(Cone::from_inequalities(self.dim, &rows))
    }

    /// Vertices (rational) and recession rays via the homogenized cone
    /// `{(t, x) : t ≥ 0, ⟨a_i, x⟩ + b_i t ≥ 0}`.
    pub fn vertices(&self) -> Result<Vec<Vec<Rat>>, GeometryError> {
        if self.is_empty() {
            return Err(GeometryError::EmptyPolyhedron);
        }
        let n = self.dim + 1;
        let mut rows: Vec<IntVector> = Vec::new();
        for h in &self.constraints {
            // Scale to clear the offset's denominator.
            let den = h.offset.denom().clone();
            let head = (&h.offset * Rat::from_integer(den.clone())).to_integer();
            rows.push(h.normal.scale(&den).prepend(head));
        }
        rows.push(IntVector::unit(n, 0));
        let (lineality, rays) = extreme_rays(n, &rows);
        if !lineality.is_empty() {
            // Polyhedron contains a line, so it has no vertices.
            return Ok(Vec::new());
        }
        let mut verts: Vec<Vec<Rat>> = rays
            .iter()
            .filter(|r| r.first().is_positive())
            .map(|r| {
                let t = Rat::from_integer(r.first().clone());
                r.coords()[1..]
                    .iter()
                    .map(|c| Rat::from_integer(c.clone()) / &t)
                    .collect()
            })
            .collect();
        verts.sort();
        Ok(verts)
    }
}

/// `coeffs · x + constant ≥ 0`, with primitive integer coefficients.
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<BigInt>,
    constant: Rat,
}

impl Row {
    fn normalized(mut self) -> Row {
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && g != BigInt::from(1) {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &g;
            }
            self.constant /= Rat::from_integer(g);
        }
        self
    }
}

enum Bound {
    Range(BigInt, BigInt),
    Unbounded,
}

/// `levels[k]` holds the projection of `P` onto coordinates `0..=k`.
struct ProjectionChain {
    levels: Vec<Vec<Row>>,
    feasible: bool,
}

impl ProjectionChain {
    fn build(dim: usize, rows: Vec<Row>) -> Self {
        let mut levels = vec![Vec::new(); dim];
        let mut current: Vec<Row> = dedup(rows.into_iter().map(Row::normalized).collect());
        let mut feasible = true;
        for k in (0..dim).rev() {
            let (next, ok) = eliminate_last(&current, k);
            levels[k] = current;
            feasible &= ok;
            current = next;
        }
        // Rows left over are constant-only.
        feasible &= current.iter().all(|r| !r.constant.is_negative());
        ProjectionChain { levels, feasible }
    }

    fn bounded(&self) -> bool {
        self.levels.iter().enumerate().all(|(k, rows)| {
            rows.iter().any(|r| r.coeffs[k].is_positive())
                && rows.iter().any(|r| r.coeffs[k].is_negative())
        })
    }

    fn range(&self, k: usize, prefix: &[BigInt]) -> Bound {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for r in &self.levels[k] {
            let c = &r.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let s: Rat = r.coeffs[..k]
                .iter()
                .zip(prefix)
                .fold(r.constant.clone(), |acc, (a, x)| {
                    acc + Rat::from_integer(a * x)
                });
            let bound = -s / Rat::from_integer(c.clone());
            if c.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) => Bound::Range(l.ceil().to_integer(), h.floor().to_integer()),
            _ => Bound::Unbounded,
        }
    }

    fn enumerate(&self, prefix: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) {
        let k = prefix.len();
        if k == self.levels.len() {
            out.push(prefix.clone());
            return;
        }
        let Bound::Range(lo, hi) = self.range(k, prefix) else {
            unreachable!("boundedness checked before enumeration");
        };
        let mut x = lo;
        while x <= hi {
            prefix.push(x.clone());
            self.enumerate(prefix, out);
            prefix.pop();
            x += 1;
        }
    }
}

/// Keeps the tightest constant per coefficient vector.
fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut best: BTreeMap<Vec<BigInt>, Rat> = BTreeMap::new();
    for r in rows {
        best.entry(r.coeffs)
            .and_modify(|c| {
                if r.constant < *c {
                    *c = r.constant.clone();
                }
            })
            .or_insert(r.constant);
    }
    best.into_iter()
        .map(|(coeffs, constant)| Row { coeffs, constant })
        .collect()
}

/// Fourier–Motzkin elimination of variable `k` (the last live one). Returns
/// rows over `0..k` and `false` if a constant-only row is violated.
fn eliminate_last(rows: &[Row], k: usize) -> (Vec<Row>, bool) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    let mut ok = true;
    let drop_last = |r: &Row| Row {
        coeffs: r.coeffs[..k].to_vec(),
        constant: r.constant.clone(),
    };
    for r in rows {
        let c = &r.coeffs[k];
        if c.is_positive() {
            pos.push(r);
        } else if c.is_negative() {
            neg.push(r);
        } else {
            out.push(drop_last(r));
        }
    }
    for p in &pos {
        for q in &neg {
            let a = -&q.coeffs[k];
            let b = p.coeffs[k].clone();
            let coeffs: Vec<BigInt> = (0..k)
                .map(|j| &p.coeffs[j] * &a + &q.coeffs[j] * &b)
                .collect();
            let constant =
                &p.constant * Rat::from_integer(a.clone()) + &q.constant * Rat::from_integer(b);
            out.push(Row { coeffs, constant }.normalized());
        }
    }
    let mut kept = Vec::with_capacity(out.len());
    for r in out {
        if r.coeffs.iter().all(Zero::is_zero) {
            ok &= !r.constant.is_negative();
            if k == 0 {
                kept.push(r);
            }
        } else {
            kept.push(r);
        }
    }
    (dedup(kept), ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::linalg::rat;

    fn half(n: i64) -> Rat {
        Rat::new(n.into(), 2.into())
    }

    #[test]
    fn unit_square_has_four_points() {
        let sq = RationalPolyhedron::unit_box(2, 0, 1);
        assert_eq!(sq.lattice_points().unwrap().len(), 4);
        assert_eq!(sq.dilate(&rat(2)).lattice_points().unwrap().len(), 9);
        assert_eq!(sq.dilate(&rat(3)).lattice_points().unwrap().len(), 16);
    }

    #[test]
    fn dilated_triangle_matches_scan() {
        let t = RationalPolyhedron::standard_simplex(2, 1).dilate(&rat(5));
        let pts = t.lattice_points().unwrap();
        // Brute-force box scan over [0,5]^2.
        let mut oracle = 0;
        for x in 0..=5 {
            for y in 0..=5 {
                if x + y <= 5 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(pts.len(), oracle);
        assert_eq!(pts.len(), 21);
        assert_eq!(pts, t.lattice_points_box_scan().unwrap());
    }

    #[test]
    fn rational_segment_dilation() {
        // segment [0, 3/2]
        let seg =
            RationalPolyhedron::from_rows(1, &[(vec![1], rat(0)), (vec![-1], half(3))]).unwrap();
        let d = seg.dilate(&rat(2));
        assert_eq!(d.constraints()[1].offset(), &rat(3));
        assert_eq!(seg.lattice_points().unwrap().len(), 2);
        assert_eq!(d.lattice_points().unwrap().len(), 4);
        assert_eq!(seg.vertices().unwrap(), vec![vec![rat(0)], vec![half(3)]]);
    }

    #[test]
    fn zero_dilation_collapses_to_apex() {
        let sq = RationalPolyhedron::unit_box(2, -1, 2);
        let z = sq.dilate(&rat(0));
        assert_eq!(z.lattice_points().unwrap(), vec![IntVector::zero(2)]);
    }

    #[test]
    fn unbounded_and_empty() {
        let half_line = RationalPolyhedron::from_rows(1, &[(vec![1], rat(-1))]).unwrap();
        assert!(matches!(
            half_line.lattice_points(),
            Err(GeometryError::UnboundedPolyhedron)
        ));
        assert!(!half_line.is_bounded());
        let empty =
            RationalPolyhedron::from_rows(1, &[(vec![1], rat(-2)), (vec![-1], rat(1))]).unwrap();
        assert!(empty.is_empty());
        assert!(empty.lattice_points().unwrap().is_empty());
        // rationally nonempty, integrally empty: 1/3 ≤ x ≤ 2/3
        let thin =
            RationalPolyhedron::from_rows(1, &[(vec![3], rat(-1)), (vec![-3], rat(2))]).unwrap();
        assert!(!thin.is_empty());
        assert!(thin.lattice_points().unwrap().is_empty());
    }

    #[test]
    fn non_primitive_normals_are_reduced() {
        let h = HalfSpace::new(IntVector::from_i64s(&[2, 4]), rat(3)).unwrap();
        assert_eq!(h.normal(), &IntVector::from_i64s(&[1, 2]));
        assert_eq!(h.offset(), &half(3));
        assert!(matches!(
            HalfSpace::new(IntVector::zero(2), rat(1)),
            Err(GeometryError::ZeroNormal)
        ));
    }

    #[test]
    fn vertices_of_triangle() {
        let t = RationalPolyhedron::standard_simplex(2, 2);
        assert_eq!(
            t.vertices().unwrap(),
            vec![
                vec![rat(0), rat(0)],
                vec![rat(0), rat(2)],
                vec![rat(2), rat(0)]
            ]
        );
    }

    #[test]
    fn translation_preserves_count() {
        let t = RationalPolyhedron::standard_simplex(3, 3);
        let moved = t.translate(&IntVector::from_i64s(&[5, -2, 7]));
        assert_eq!(
            t.count_lattice_points().unwrap(),
            moved.count_lattice_points().unwrap()
        );
        assert!(moved.contains(&IntVector::from_i64s(&[5, -2, 7])));
    }
}
