use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::GradedError;
use crate::lattice::{IntVector, Rat};

/// Opaque name of a basis vector in a degree slice.
///
/// Toric slices use lattice points; tabulated slices use free-form names.
/// Ordering is lexicographic (points before names).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Label {
    Point(IntVector),
    Name(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Point(p) => write!(f, "{p}"),
            Label::Name(n) => f.write_str(n),
        }
    }
}

impl From<IntVector> for Label {
    fn from(p: IntVector) -> Self {
        Label::Point(p)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Name(s.to_string())
    }
}

#[derive(Debug)]
struct BasisIndex {
    labels: Vec<Label>,
    position: HashMap<Label, usize>,
    /// basis positions sorted by label
    lex_order: Vec<usize>,
}

/// One homogeneous piece of a graded object: an explicit basis of a
/// finite-dimensional vector space over `Q`.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    degree: i64,
    basis: Arc<BasisIndex>,
}

impl DegreeSlice {
    pub fn new(degree: i64, labels: Vec<Label>) -> Result<Self, GradedError> {
        let mut position = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if position.insert(l.clone(), i).is_some() {
                return Err(GradedError::DuplicateLabel {
                    degree,
                    label: l.to_string(),
                });
            }
        }
        let mut lex_order: Vec<usize> = (0..labels.len()).collect();
        lex_order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        Ok(DegreeSlice {
            degree,
            basis: Arc::new(BasisIndex {
                labels,
                position,
                lex_order,
            }),
        })
    }

    pub fn empty(degree: i64) -> Self {
        DegreeSlice::new(degree, Vec::new()).unwrap()
    }

    /// Same basis, re-graded.
    pub fn with_degree(&self, degree: i64) -> Self {
        DegreeSlice {
            degree,
            basis: Arc::clone(&self.basis),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.basis.labels.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.labels.is_empty()
    }

    pub fn basis(&self) -> &[Label] {
        &self.basis.labels
    }

    pub fn label(&self, index: usize) -> &Label {
        &self.basis.labels[index]
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.basis.position.get(label).copied()
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.basis.position.contains_key(label)
    }

    /// Basis positions in increasing label order.
    pub fn lex_order(&self) -> &[usize] {
        &self.basis.lex_order
    }

    pub fn basis_ref(&self, index: usize) -> BasisRef {
        BasisRef {
            degree: self.degree,
            index,
        }
    }
}

/// A basis vector of a specific slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisRef {
    pub degree: i64,
    pub index: usize,
}

impl BasisRef {
    pub fn new(degree: i64, index: usize) -> Self {
        BasisRef { degree, index }
    }
}

/// A vector in one slice as a sparse map from basis position to coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination(BTreeMap<usize, Rat>);

impl Combination {
    pub fn zero() -> Self {
        Combination(BTreeMap::new())
    }

    pub fn basis(index: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(index, Rat::one());
        Combination(m)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rat)>) -> Self {
        let mut c = Combination::zero();
        for (i, x) in pairs {
            c.add_term(i, &x);
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, index: usize, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        let e = self.0.entry(index).or_insert_with(Rat::zero);
        *e += coeff;
        if e.is_zero() {
            self.0.remove(&index);
        }
    }

    /// `self += factor · other`
    pub fn add_scaled(&mut self, other: &Combination, factor: &Rat) {
        for (i, x) in &other.0 {
            self.add_term(*i, &(x * factor));
        }
    }

    pub fn scaled(&self, factor: &Rat) -> Combination {
        if factor.is_zero() {
            return Combination::zero();
        }
        Combination(self.0.iter().map(|(i, x)| (*i, x * factor)).collect())
    }

    pub fn get(&self, index: usize) -> Rat {
        self.0.get(&index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.0.iter().map(|(i, x)| (*i, x))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rewrites indices through `map`; entries mapped to `None` are dropped.
    pub fn reindex(&self, mut map: impl FnMut(usize) -> Option<usize>) -> Combination {
        let mut out = Combination::zero();
        for (i, x) in &self.0 {
            if let Some(j) = map(*i) {
                out.add_term(j, x);
            }
        }
        out
    }
}

/// A homogeneous element, keyed by basis label so that it stays meaningful
/// across views that share labels (submodules, quotients, truncations).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub degree: i64,
    pub terms: BTreeMap<Label, Rat>,
}

impl Element {
    pub fn basis(degree: i64, label: Label) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(label, Rat::one());
        Element { degree, terms }
    }

    pub fn from_combination(slice: &DegreeSlice, c: &Combination) -> Self {
        let terms = c
            .iter()
            .map(|(i, x)| (slice.label(i).clone(), x.clone()))
            .collect();
        Element {
            degree: slice.degree(),
            terms,
        }
    }

    pub fn to_combination(&self, slice: &DegreeSlice) -> Result<Combination, GradedError> {
        let mut c = Combination::zero();
        for (l, x) in &self.terms {
            let i = slice.index_of(l).ok_or_else(|| GradedError::UnknownLabel {
                degree: slice.degree(),
                label: l.to_string(),
            })?;
            c.add_term(i, x);
        }
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Zero::is_zero)
    }

    /// The single label of a basis element, if this is one.
    pub fn as_basis_label(&self) -> Option<&Label> {
        match self.terms.iter().next() {
            Some((l, x)) if self.terms.len() == 1 && x.is_one() => Some(l),
            _ => None,
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            label: &'a Label,
            coefficient: String,
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("degree", &self.degree)?;
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(l, x)| Term {
                label: l,
                coefficient: crate::serde_rat::render(x),
            })
            .collect();
        m.serialize_entry("terms", &terms)?;
        m.end()
    }
}

/// Multiplies through by the lcm of denominators; returns the integer vector
/// and the factor used.
pub(crate) fn clear_denominators(c: &Combination) -> (BTreeMap<usize, BigInt>, BigInt) {
    use num_integer::Integer;
    let lcm = c.iter().fold(BigInt::one(), |l, (_, x)| l.lcm(x.denom()));
    let ints = c
        .iter()
        .map(|(i, x)| (i, (x * Rat::from_integer(lcm.clone())).to_integer()))
        .collect();
    (ints, lcm)
}
