use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{schema, TabulatedError};
use crate::graded::{
    BasisRef, Combination, DegreeSlice, GradedAlgebra, GradedError, GradedModule, Label,
};
use crate::serde_rat;

/// One structure constant row: `left · right = Σ coeff · basis[index]`.
///
/// Basis references are `[degree, index]`. For a module table `left` refers
/// to the algebra and `right` to the module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: [i64; 2],
    pub right: [i64; 2],
    /// `(index, "p/q")` pairs in the slice of the summed degree.
    pub result: Vec<(usize, String)>,
}

/// Bases (by name) and multiplication or action tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableStructure {
    pub basis: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub product: Vec<ProductEntry>,
}

type Table = HashMap<(BasisRef, BasisRef), Combination>;

impl TableStructure {
    pub(super) fn validate(&self, entries: &BTreeMap<i64, u64>) -> Result<(), TabulatedError> {
        self.slices(entries).map(|_| ())
    }

    fn slices(
        &self,
        entries: &BTreeMap<i64, u64>,
    ) -> Result<BTreeMap<i64, Arc<DegreeSlice>>, TabulatedError> {
        let mut out = BTreeMap::new();
        for (key, names) in &self.basis {
            let loc = format!("structure.basis.{key}");
            let m: i64 = key
                .trim()
                .parse()
                .map_err(|_| schema(&loc, "degree is not an integer"))?;
            match entries.get(&m) {
                Some(&d) if d == names.len() as u64 => {}
                Some(&d) => {
                    return Err(schema(
                        loc,
                        format!("{} names for dimension {d}", names.len()),
                    ))
                }
                None => return Err(schema(loc, "degree not in the dimension table")),
            }
            let labels = names.iter().map(|n| Label::Name(n.clone())).collect();
            out.insert(
                m,
                Arc::new(DegreeSlice::new(m, labels).map_err(|e| schema(&loc, e.to_string()))?),
            );
        }
        if let Some((&m, _)) = entries.iter().find(|(m, _)| !out.contains_key(m)) {
            return Err(schema(format!("structure.basis.{m}"), "missing basis"));
        }
        Ok(out)
    }

    fn table(
        &self,
        left_dims: impl Fn(i64) -> Option<usize>,
        right_dims: impl Fn(i64) -> Option<usize>,
        target_dims: impl Fn(i64) -> Option<usize>,
    ) -> Result<Table, TabulatedError> {
        let mut table = HashMap::new();
        for (i, e) in self.product.iter().enumerate() {
            let loc = format!("structure.product[{i}]");
            for (side, [m, j], dims) in [
                ("left", e.left, &left_dims as &dyn Fn(i64) -> Option<usize>),
                ("right", e.right, &right_dims),
            ] {
                if j < 0 || dims(m).is_none_or(|d| j as usize >= d) {
                    return Err(schema(
                        &loc,
                        format!("{side} reference [{m}, {j}] out of range"),
                    ));
                }
            }
            let target = e.left[0] + e.right[0];
            let dim = target_dims(target)
                .ok_or_else(|| schema(&loc, format!("degree {target} is not tabulated")))?;
            let mut c = Combination::zero();
            for (idx, coeff) in &e.result {
                if *idx >= dim {
                    return Err(schema(&loc, format!("result index {idx} out of range")));
                }
                let q = serde_rat::parse(coeff)
                    .ok_or_else(|| schema(&loc, format!("bad coefficient {coeff:?}")))?;
                c.add_term(*idx, &q);
            }
            let key = (
                BasisRef::new(e.left[0], e.left[1] as usize),
                BasisRef::new(e.right[0], e.right[1] as usize),
            );
            if table.insert(key, c).is_some() {
                return Err(schema(loc, "product given twice"));
            }
        }
        Ok(table)
    }
}

fn slice_at(
    slices: &BTreeMap<i64, Arc<DegreeSlice>>,
    degree: i64,
    empty_below: i64,
) -> Result<Arc<DegreeSlice>, GradedError> {
    if let Some(s) = slices.get(&degree) {
        return Ok(s.clone());
    }
    if degree < empty_below {
        return Ok(Arc::new(DegreeSlice::empty(degree)));
    }
    Err(GradedError::InsufficientRange { degree })
}

/// Algebra given by structure tables. Basis vector 0 in degree 0 is the unit;
/// its products need not be listed. Products are commutative, so either
/// order of a pair may be listed.
#[derive(Debug)]
pub struct TabulatedAlgebra {
    slices: BTreeMap<i64, Arc<DegreeSlice>>,
    table: Table,
}

impl TabulatedAlgebra {
    pub(super) fn new(
        s: TableStructure,
        entries: &BTreeMap<i64, u64>,
    ) -> Result<Self, TabulatedError> {
        let slices = s.slices(entries)?;
        if slices.keys().next() != Some(&0) || slices[&0].is_zero() {
            return Err(schema(
                "structure.basis.0",
                "an algebra table starts in degree 0 with the unit",
            ));
        }
        let dims = |m: i64| slices.get(&m).map(|s| s.dimension());
        let table = s.table(dims, dims, dims)?;
        Ok(TabulatedAlgebra { slices, table })
    }
}

impl GradedAlgebra for TabulatedAlgebra {
    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        slice_at(&self.slices, degree, 0)
    }

    fn multiply_basis(&self, a: BasisRef, b: BasisRef) -> Result<Combination, GradedError> {
        let unit = BasisRef::new(0, 0);
        if a == unit {
            return Ok(Combination::basis(b.index));
        }
        if b == unit {
            return Ok(Combination::basis(a.index));
        }
        self.table
            .get(&(a, b))
            .or_else(|| self.table.get(&(b, a)))
            .cloned()
            .ok_or_else(|| {
                GradedError::Oracle(format!("product of {a:?} and {b:?} is not tabulated"))
            })
    }

    fn unit(&self) -> Result<Combination, GradedError> {
        Ok(Combination::basis(0))
    }
}

/// Module given by structure tables over an algebra.
pub struct TabulatedModule {
    slices: BTreeMap<i64, Arc<DegreeSlice>>,
    table: Table,
    offset: i64,
    algebra: Arc<dyn GradedAlgebra>,
}

impl TabulatedModule {
    pub(super) fn new(
        s: TableStructure,
        entries: &BTreeMap<i64, u64>,
        algebra: Arc<dyn GradedAlgebra>,
    ) -> Result<Self, TabulatedError> {
        let slices = s.slices(entries)?;
        let offset = *slices.keys().next().expect("validated nonempty");
        let mdims = |m: i64| slices.get(&m).map(|s| s.dimension());
        let adims = |m: i64| algebra.slice(m).ok().map(|s| s.dimension());
        let table = s.table(adims, mdims, mdims)?;
        Ok(TabulatedModule {
            slices,
            table,
            offset,
            algebra,
        })
    }

    pub fn algebra(&self) -> &Arc<dyn GradedAlgebra> {
        &self.algebra
    }
}

impl GradedModule for TabulatedModule {
    fn offset(&self) -> i64 {
        self.offset
    }

    fn slice(&self, degree: i64) -> Result<Arc<DegreeSlice>, GradedError> {
        slice_at(&self.slices, degree, self.offset)
    }

    fn act_basis(&self, r: BasisRef, x: BasisRef) -> Result<Combination, GradedError> {
        if r == BasisRef::new(0, 0) {
            return Ok(Combination::basis(x.index));
        }
        self.table.get(&(r, x)).cloned().ok_or_else(|| {
            GradedError::Oracle(format!("action of {r:?} on {x:?} is not tabulated"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::load_table;
    use super::*;
    use crate::graded::{find_algebra_generators, find_module_generators};

    const POLY: &str = r#"
label = "Q[t]"
[dimensions]
"0" = 1
"1" = 1
"2" = 1
"3" = 1
[structure.basis]
"0" = ["1"]
"1" = ["t"]
"2" = ["t2"]
"3" = ["t3"]
[[structure.product]]
left = [1, 0]
right = [1, 0]
result = [[0, "1"]]
[[structure.product]]
left = [1, 0]
right = [2, 0]
result = [[0, "1"]]
"#;

    #[test]
    fn polynomial_ring_in_one_variable() {
        let t = load_table(POLY).unwrap();
        let r = t.algebra().unwrap();
        let out = find_algebra_generators(&r, 2).unwrap();
        assert_eq!(out.generators.degree_table(), BTreeMap::from([(1, 1)]));
        assert!(r
            .multiply_basis(BasisRef::new(1, 0), BasisRef::new(3, 0))
            .is_err());
    }

    #[test]
    fn module_over_a_table() {
        let r: Arc<dyn GradedAlgebra> = Arc::new(load_table(POLY).unwrap().algebra().unwrap());
        let m = load_table(
            r#"
label = "shift"
[dimensions]
"1" = 1
"2" = 1
[structure.basis]
"1" = ["e"]
"2" = ["te"]
[[structure.product]]
left = [1, 0]
right = [1, 0]
result = [[0, "1"]]
"#,
        )
        .unwrap()
        .module(r.clone())
        .unwrap();
        assert_eq!(m.offset(), 1);
        let out = find_module_generators(&m, &*r, 1).unwrap();
        assert_eq!(out.generators.degree_table(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn inconsistent_structure_rejected() {
        let bad = POLY.replace("\"1\" = [\"t\"]", "\"1\" = [\"t\", \"u\"]");
        assert!(load_table(&bad).is_err());
        let bad = POLY.replace("right = [2, 0]", "right = [2, 3]");
        assert!(load_table(&bad).unwrap().algebra().is_err());
    }
}
