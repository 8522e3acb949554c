//! Hilbert data supplied as tables, for scenarios without a polyhedral model.
//!
//! A dimension-only table supports counting arguments and nothing else:
//! finite generation can be refuted from it, never certified. Tables that
//! also carry bases and structure constants become ordinary graded
//! algebras and modules.

mod structure;
mod witness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{GradedAlgebra, GradedError, GradedModule, HilbertFunction};

pub use structure::{ProductEntry, TableStructure, TabulatedAlgebra, TabulatedModule};
pub use witness::{example26_dataset, nonfg_witness, NonFgVerdict, EXAMPLE26_PROVENANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TabulatedError {
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("ambient dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> TabulatedError {
    TabulatedError::Schema {
        location: location.into(),
        message: message.into(),
    }
}

/// Tabulated `degree → dimension` data, optionally with bases and
/// structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertTable {
    pub label: String,
    entries: BTreeMap<i64, u64>,
    structure: Option<TableStructure>,
    pub provenance: String,
}

/// On-disk form. Degrees are string keys so that negative degrees work.
#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TableDocument {
    label: String,
    #[serde(default)]
    provenance: String,
    dimensions: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    structure: Option<TableStructure>,
}

impl HilbertTable {
    /// A table covering a contiguous, nonempty range of degrees.
    pub fn new(
        label: impl Into<String>,
        entries: BTreeMap<i64, u64>,
        provenance: impl Into<String>,
    ) -> Result<Self, TabulatedError> {
        let (Some(&lo), Some(&hi)) = (entries.keys().next(), entries.keys().next_back()) else {
            return Err(schema("dimensions", "no degrees given"));
        };
        if let Some(gap) = (lo..=hi).find(|m| !entries.contains_key(m)) {
            return Err(schema(format!("dimensions.{gap}"), "missing degree"));
        }
        Ok(HilbertTable {
            label: label.into(),
            entries,
            structure: None,
            provenance: provenance.into(),
        })
    }

    pub fn with_structure(mut self, structure: TableStructure) -> Result<Self, TabulatedError> {
        structure.validate(&self.entries)?;
        self.structure = Some(structure);
        Ok(self)
    }

    /// Exports the dimensions of a module for `range`.
    pub fn from_module(
        label: impl Into<String>,
        m: &dyn GradedModule,
        range: std::ops::RangeInclusive<i64>,
        provenance: impl Into<String>,
    ) -> Result<Self, TabulatedError> {
        let h = HilbertFunction::of_module(m, range)?;
        HilbertTable::new(label, h.iter().collect(), provenance)
    }

    pub fn from_algebra(
        label: impl Into<String>,
        r: &dyn GradedAlgebra,
        range: std::ops::RangeInclusive<i64>,
        provenance: impl Into<String>,
    ) -> Result<Self, TabulatedError> {
        let h = HilbertFunction::of_algebra(r, range)?;
        HilbertTable::new(label, h.iter().collect(), provenance)
    }

    pub fn entries(&self) -> &BTreeMap<i64, u64> {
        &self.entries
    }

    pub fn structure(&self) -> Option<&TableStructure> {
        self.structure.as_ref()
    }

    pub fn get(&self, m: i64) -> Option<u64> {
        self.entries.get(&m).copied()
    }

    pub fn min_degree(&self) -> i64 {
        *self.entries.keys().next().expect("nonempty")
    }

    pub fn max_degree(&self) -> i64 {
        *self.entries.keys().next_back().expect("nonempty")
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo >= self.min_degree() && hi <= self.max_degree()
    }

    pub fn hilbert_function(&self) -> HilbertFunction {
        HilbertFunction::from_pairs(self.entries.iter().map(|(&m, &d)| (m, d)))
    }

    /// The graded algebra described by the structure tables.
    pub fn algebra(&self) -> Result<TabulatedAlgebra, TabulatedError> {
        let s = self.require_structure("algebra")?;
        TabulatedAlgebra::new(s.clone(), &self.entries)
    }

    /// The graded module described by the structure tables, over `r`.
    pub fn module(
        &self,
        r: std::sync::Arc<dyn GradedAlgebra>,
    ) -> Result<TabulatedModule, TabulatedError> {
        let s = self.require_structure("module")?;
        TabulatedModule::new(s.clone(), &self.entries, r)
    }

    fn require_structure(&self, what: &str) -> Result<&TableStructure, TabulatedError> {
        self.structure.as_ref().ok_or_else(|| {
            GradedError::StructureMissing(format!(
                "table {:?} has dimensions only; cannot build a {what}",
                self.label
            ))
            .into()
        })
    }

    pub fn to_toml(&self) -> String {
        let doc = TableDocument {
            label: self.label.clone(),
            provenance: self.provenance.clone(),
            dimensions: self
                .entries
                .iter()
                .map(|(m, d)| (m.to_string(), *d as i64))
                .collect(),
            structure: self.structure.clone(),
        };
        toml::to_string(&doc).expect("tables serialize")
    }

    /// CSV with a `degree,dimension` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,dimension\n");
        for (m, d) in &self.entries {
            out.push_str(&format!("{m},{d}\n"));
        }
        out
    }
}

/// Parses a table document (TOML).
pub fn load_table(source: &str) -> Result<HilbertTable, TabulatedError> {
    let doc: TableDocument = toml::from_str(source).map_err(|e| {
        let location = match e.span() {
            Some(span) => {
                let line = source[..span.start].matches('\n').count() + 1;
                format!("line {line}")
            }
            None => "document".to_string(),
        };
        schema(location, e.message().to_string())
    })?;
    let mut entries = BTreeMap::new();
    for (key, &dim) in &doc.dimensions {
        let loc = format!("dimensions.{key}");
        let m: i64 = key
            .trim()
            .parse()
            .map_err(|_| schema(&loc, "degree is not an integer"))?;
        if dim < 0 {
            return Err(schema(loc, format!("negative dimension {dim}")));
        }
        if entries.insert(m, dim as u64).is_some() {
            return Err(schema(loc, "degree given twice"));
        }
    }
    let table = HilbertTable::new(doc.label, entries, doc.provenance)?;
    match doc.structure {
        Some(s) => table.with_structure(s),
        None => Ok(table),
    }
}

/// Parses a CSV dimension table with header `degree,dimension`.
pub fn load_table_csv(label: &str, source: &str) -> Result<HilbertTable, TabulatedError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| schema("line 1", e.to_string()))?;
    if header.iter().ne(["degree", "dimension"]) {
        return Err(schema("line 1", "expected header `degree,dimension`"));
    }
    let mut entries = BTreeMap::new();
    for row in reader.deserialize::<(i64, i64)>() {
        let row = row.map_err(|e| {
            let loc = e
                .position()
                .map_or("document".to_string(), |p| format!("line {}", p.line()));
            schema(loc, e.to_string())
        })?;
        let (m, d) = row;
        if d < 0 {
            return Err(schema(
                format!("dimensions.{m}"),
                format!("negative dimension {d}"),
            ));
        }
        if entries.insert(m, d as u64).is_some() {
            return Err(schema(format!("dimensions.{m}"), "degree given twice"));
        }
    }
    HilbertTable::new(label, entries, "")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_small_table() {
        let t =
            load_table("label = \"R\"\n[dimensions]\n\"0\" = 1\n\"1\" = 2\n\"2\" = 3\n").unwrap();
        assert_eq!(t.entries(), &BTreeMap::from([(0, 1), (1, 2), (2, 3)]));
        assert!(t.structure().is_none());
    }

    #[test]
    fn negative_dimension_is_a_schema_error() {
        let err = load_table("label = \"R\"\n[dimensions]\n\"0\" = 1\n\"1\" = -2\n").unwrap_err();
        assert!(
            matches!(err, TabulatedError::Schema { ref location, .. } if location == "dimensions.1")
        );
    }

    #[test]
    fn missing_degree_is_an_error() {
        let err = load_table("label = \"R\"\n[dimensions]\n\"0\" = 1\n\"2\" = 3\n").unwrap_err();
        assert!(
            matches!(err, TabulatedError::Schema { ref location, .. } if location == "dimensions.1")
        );
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = load_table("label = \"R\"\n[dimensions\n").unwrap_err();
        assert!(
            matches!(err, TabulatedError::Schema { ref location, .. } if location.starts_with("line"))
        );
    }

    #[test]
    fn toml_and_csv_round_trip() {
        let t = HilbertTable::new("M", BTreeMap::from([(-1, 0), (0, 4), (1, 9)]), "test").unwrap();
        assert_eq!(load_table(&t.to_toml()).unwrap(), t);
        let c = load_table_csv("M", &t.to_csv()).unwrap();
        assert_eq!(c.entries(), t.entries());
        assert!(load_table_csv("M", "deg,dim\n0,1\n").is_err());
        assert!(load_table_csv("M", "degree,dimension\n0,-1\n").is_err());
    }

    #[test]
    fn dimension_only_tables_refuse_span_search() {
        let t = HilbertTable::new("R", BTreeMap::from([(0, 1)]), "").unwrap();
        assert!(matches!(
            t.algebra(),
            Err(TabulatedError::Graded(GradedError::StructureMissing(_)))
        ));
    }
}
