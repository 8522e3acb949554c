//! Job configuration: one TOML document describing the backend, the
//! geometry or tables, named divisors, and a list of tasks.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use divalg_core::tabulated::{example26_dataset, load_table, load_table_csv, HilbertTable};
use divalg_core::{CartierDivisor, Fan, IntVector, ToricVariety};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Toric,
    Tabulated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TaskKind {
    Hilbert,
    FgAlgebra,
    FgModule,
    Truncate,
    Decompose,
    Restrict,
    Induct34,
    Induct35,
    Induct36,
    Fixmov,
    FixStability,
    SuppFix,
    Kappa,
    Nonfg,
}

const TASK_NAMES: [(TaskKind, &str); 14] = [
    (TaskKind::Hilbert, "hilbert"),
    (TaskKind::FgAlgebra, "fg-algebra"),
    (TaskKind::FgModule, "fg-module"),
    (TaskKind::Truncate, "truncate"),
    (TaskKind::Decompose, "decompose"),
    (TaskKind::Restrict, "restrict"),
    (TaskKind::Induct34, "induct-34"),
    (TaskKind::Induct35, "induct-35"),
    (TaskKind::Induct36, "induct-36"),
    (TaskKind::Fixmov, "fixmov"),
    (TaskKind::FixStability, "fix-stability"),
    (TaskKind::SuppFix, "supp-fix"),
    (TaskKind::Kappa, "kappa"),
    (TaskKind::Nonfg, "nonfg"),
];

impl TaskKind {
    pub fn as_str(self) -> &'static str {
        TASK_NAMES
            .iter()
            .find(|(k, _)| *k == self)
            .expect("every kind is named")
            .1
    }

    /// Tasks that make sense for dimension tables.
    pub fn supports_tabulated(self) -> bool {
        matches!(
            self,
            TaskKind::Hilbert | TaskKind::FgAlgebra | TaskKind::FgModule | TaskKind::Nonfg
        )
    }

    /// Fields a toric task cannot run without.
    fn required(self) -> &'static [&'static str] {
        match self {
            TaskKind::Hilbert | TaskKind::FgAlgebra | TaskKind::FgModule | TaskKind::Truncate => {
                &["divisor"]
            }
            TaskKind::Decompose | TaskKind::Kappa | TaskKind::FixStability | TaskKind::Fixmov => {
                &["divisor"]
            }
            TaskKind::Restrict => &["divisor", "restrict"],
            TaskKind::Induct34 | TaskKind::Induct35 => &["components"],
            TaskKind::Induct36 => &["components", "ample"],
            TaskKind::SuppFix => &["divisor", "ample"],
            TaskKind::Nonfg => &[],
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        TASK_NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(k, _)| *k)
            .ok_or_else(|| {
                let names: Vec<&str> = TASK_NAMES.iter().map(|(_, n)| *n).collect();
                format!("unknown task {s:?}; expected one of {}", names.join(", "))
            })
    }
}

impl TryFrom<String> for TaskKind {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<TaskKind> for String {
    fn from(k: TaskKind) -> String {
        k.as_str().to_string()
    }
}

/// One task. Unset parameters take the defaults documented in the README.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub kind: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// The divisor `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    /// The twist `D` (or `F`) of a module; zero when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<String>,
    /// Module offset `p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<i64>,
    /// Truncation / decomposition period `I`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<i64>,
    /// Divisor `C` restricted to in a `restrict` task.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restrict: Option<String>,
    /// `L = Σ l_i L_i` as `[[l_i, "name"], …]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<(i64, String)>>,
    /// Index of `L_1` in `components`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_values: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
}

impl TaskSpec {
    pub fn new(kind: TaskKind) -> Self {
        TaskSpec {
            kind,
            name: None,
            divisor: None,
            twist: None,
            offset: None,
            period: None,
            bound: None,
            min_degree: None,
            max_degree: None,
            probe: None,
            restrict: None,
            components: None,
            first: None,
            order: None,
            exhaustive: None,
            ample: None,
            l_values: None,
            j: None,
            r: None,
        }
    }

    fn has(&self, field: &str) -> bool {
        match field {
            "divisor" => self.divisor.is_some(),
            "restrict" => self.restrict.is_some(),
            "components" => self.components.is_some(),
            "ample" => self.ample.is_some(),
            _ => true,
        }
    }

    /// Divisor names the task refers to.
    fn divisor_refs(&self) -> Vec<(&'static str, &str)> {
        let mut out = Vec::new();
        for (field, v) in [
            ("divisor", &self.divisor),
            ("twist", &self.twist),
            ("restrict", &self.restrict),
            ("ample", &self.ample),
        ] {
            if let Some(v) = v {
                out.push((field, v.as_str()));
            }
        }
        for (_, n) in self.components.iter().flatten() {
            out.push(("components", n.as_str()));
        }
        out
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryDoc {
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

/// A divisor as a full coefficient list or as `{ ray index = coefficient }`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DivisorDoc {
    List(Vec<i64>),
    Map(BTreeMap<String, i64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TablesDoc {
    algebra: Option<PathBuf>,
    module: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Example26Doc {
    n: usize,
    degrees: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    backend: Backend,
    geometry: Option<GeometryDoc>,
    #[serde(default)]
    divisors: BTreeMap<String, DivisorDoc>,
    tables: Option<TablesDoc>,
    example26: Option<Example26Doc>,
    #[serde(default)]
    task: Vec<TaskSpec>,
}

/// Tables of the tabulated backend.
#[derive(Debug, Clone)]
pub struct Tables {
    pub algebra: Option<HilbertTable>,
    pub module: Option<HilbertTable>,
}

#[derive(Debug, Clone)]
pub enum Geometry {
    Toric {
        variety: ToricVariety,
        divisors: BTreeMap<String, CartierDivisor>,
    },
    Tabulated(Tables),
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct JobConfig {
    /// File name of the config, echoed into reports.
    pub source: String,
    pub backend: Backend,
    pub geometry: Geometry,
    pub tasks: Vec<TaskSpec>,
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema {
        location: location.into(),
        message: message.into(),
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<JobConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let source = path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        JobConfig::parse(&text, source, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses a config; table paths are resolved against `base_dir`.
    pub fn parse(text: &str, source: String, base_dir: &Path) -> Result<JobConfig, CliError> {
        let doc: ConfigDoc = toml::from_str(text).map_err(|e| {
            let loc = e.span().map_or("document".to_string(), |s| {
                format!("line {}", text[..s.start].matches('\n').count() + 1)
            });
            schema(loc, e.message())
        })?;
        let geometry = match doc.backend {
            Backend::Toric => {
                if doc.tables.is_some() || doc.example26.is_some() {
                    return Err(schema(
                        "tables",
                        "the toric backend takes [geometry], not tables",
                    ));
                }
                let g = doc
                    .geometry
                    .ok_or_else(|| schema("geometry", "missing [geometry] section"))?;
                let rays = g.rays.iter().map(|r| IntVector::from_i64s(r)).collect();
                let fan = Fan::new(rays, g.cones).map_err(|e| schema("geometry", e.to_string()))?;
                let variety = ToricVariety::new(fan);
                let mut divisors = BTreeMap::new();
                for (name, d) in &doc.divisors {
                    divisors.insert(name.clone(), divisor(&variety, name, d)?);
                }
                Geometry::Toric { variety, divisors }
            }
            Backend::Tabulated => {
                if doc.geometry.is_some() || !doc.divisors.is_empty() {
                    return Err(schema(
                        "geometry",
                        "the tabulated backend takes tables, not geometry or divisors",
                    ));
                }
                Geometry::Tabulated(tables(doc.tables, doc.example26, base_dir)?)
            }
        };
        let cfg = JobConfig {
            source,
            backend: doc.backend,
            geometry,
            tasks: doc.task,
        };
        cfg.validate_tasks(&cfg.tasks)?;
        Ok(cfg)
    }

    pub fn validate_tasks(&self, tasks: &[TaskSpec]) -> Result<(), CliError> {
        for (i, t) in tasks.iter().enumerate() {
            let loc = format!("task[{i}] ({})", t.kind);
            match &self.geometry {
                Geometry::Toric { divisors, .. } => {
                    if let Some(f) = t.kind.required().iter().find(|f| !t.has(f)) {
                        return Err(schema(loc, format!("missing required field `{f}`")));
                    }
                    if let Some((field, name)) = t
                        .divisor_refs()
                        .into_iter()
                        .find(|(_, n)| !divisors.contains_key(*n))
                    {
                        return Err(schema(
                            loc,
                            format!("{field} refers to undefined divisor {name:?}"),
                        ));
                    }
                }
                Geometry::Tabulated(_) => {
                    if !t.kind.supports_tabulated() {
                        return Err(schema(loc, "this task requires the toric backend"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn divisor(x: &ToricVariety, name: &str, d: &DivisorDoc) -> Result<CartierDivisor, CliError> {
    let loc = format!("divisors.{name}");
    let coeffs: Vec<BigInt> = match d {
        DivisorDoc::List(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
        DivisorDoc::Map(m) => {
            let mut v = vec![BigInt::from(0); x.num_rays()];
            for (k, &c) in m {
                let idx: usize = k
                    .trim_start_matches('D')
                    .parse()
                    .ok()
                    .filter(|&i| i < x.num_rays())
                    .ok_or_else(|| schema(&loc, format!("{k:?} is not a ray index")))?;
                v[idx] = BigInt::from(c);
            }
            v
        }
    };
    CartierDivisor::q_cartier(x, coeffs).map_err(|e| schema(loc, e.to_string()))
}

fn read_table(base: &Path, path: &Path, label: &str) -> Result<HilbertTable, CliError> {
    let full = base.join(path);
    let text = std::fs::read_to_string(&full).map_err(|e| CliError::Io {
        path: full.clone(),
        source: e,
    })?;
    let parsed = if full.extension().is_some_and(|e| e == "csv") {
        load_table_csv(label, &text)
    } else {
        load_table(&text)
    };
    parsed.map_err(|e| {
        schema(
            format!("tables.{label} ({})", path.display()),
            e.to_string(),
        )
    })
}

fn tables(t: Option<TablesDoc>, ex: Option<Example26Doc>, base: &Path) -> Result<Tables, CliError> {
    match (t, ex) {
        (Some(_), Some(_)) => Err(schema(
            "example26",
            "give either [tables] or [example26], not both",
        )),
        (None, None) => Err(schema(
            "tables",
            "the tabulated backend needs [tables] or [example26]",
        )),
        (Some(t), None) => Ok(Tables {
            algebra: t
                .algebra
                .as_deref()
                .map(|p| read_table(base, p, "algebra"))
                .transpose()?,
            module: t
                .module
                .as_deref()
                .map(|p| read_table(base, p, "module"))
                .transpose()?,
        }),
        (None, Some(e)) => {
            let (a, m) = example26_dataset(e.n, e.degrees)
                .map_err(|err| schema("example26", err.to_string()))?;
            Ok(Tables {
                algebra: Some(a),
                module: Some(m),
            })
        }
    }
}
