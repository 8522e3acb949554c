//! The `divalg` batch front-end: read a job config, run its tasks, and
//! write one JSON report per task.

pub mod config;
pub mod report;
pub mod tasks;

use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use config::{JobConfig, TaskKind, TaskSpec};
use report::{Report, Status, SCHEMA_VERSION};
use tasks::Verdict;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    /// Task kinds overriding the config's task list.
    pub tasks: Vec<String>,
    pub divisor: Option<String>,
    pub max_degree: Option<i64>,
    pub bound: Option<i64>,
    pub probe: Option<i64>,
    pub strict: bool,
    pub parallel: bool,
    pub out: PathBuf,
    pub timing: bool,
}

pub struct RunSummary {
    pub reports: Vec<Report>,
    pub written: Vec<PathBuf>,
    pub exit_code: i32,
}

/// Selects the tasks to run: with `--task`, every config task of each named
/// kind, or a fresh task of that kind when the config has none. Flag values
/// override task fields.
fn select_tasks(cfg: &JobConfig, opts: &RunOptions) -> Result<Vec<TaskSpec>, CliError> {
    let mut tasks = if opts.tasks.is_empty() {
        cfg.tasks.clone()
    } else {
        let mut out = Vec::new();
        for name in &opts.tasks {
            let kind: TaskKind = name.parse().map_err(|message| CliError::Schema {
                location: "--task".into(),
                message,
            })?;
            let matching: Vec<TaskSpec> = cfg
                .tasks
                .iter()
                .filter(|t| t.kind == kind)
                .cloned()
                .collect();
            if matching.is_empty() {
                out.push(TaskSpec::new(kind));
            } else {
                out.extend(matching);
            }
        }
        out
    };
    for t in &mut tasks {
        if opts.divisor.is_some() {
            t.divisor = opts.divisor.clone();
        }
        t.max_degree = opts.max_degree.or(t.max_degree);
        t.bound = opts.bound.or(t.bound);
        t.probe = opts.probe.or(t.probe);
    }
    cfg.validate_tasks(&tasks)?;
    Ok(tasks)
}

fn run_task(cfg: &JobConfig, index: usize, task: TaskSpec, timing: bool) -> Report {
    let start = Instant::now();
    let outcome = tasks::execute(cfg, &task);
    let elapsed = timing.then(|| start.elapsed().as_millis());
    let base = |status, verdict, summary, error, result| Report {
        schema: SCHEMA_VERSION,
        config: cfg.source.clone(),
        index,
        task: task.clone(),
        backend: cfg.backend,
        status,
        verdict,
        summary,
        error,
        result,
        timing_ms: elapsed,
    };
    match outcome {
        Ok(o) => base(Status::Complete, o.verdict, o.summary, None, o.result),
        Err(e) => {
            let msg = format!("{e:#}");
            base(
                Status::Error,
                Verdict::Error,
                msg.clone(),
                Some(msg),
                serde_json::Value::Null,
            )
        }
    }
}

/// Runs a job. Config and schema problems are returned as errors (exit 2);
/// task failures are embedded in the reports.
pub fn run(opts: &RunOptions) -> Result<RunSummary, CliError> {
    let cfg = JobConfig::load(&opts.config)?;
    let tasks = select_tasks(&cfg, opts)?;
    let reports: Vec<Report> = if opts.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = tasks
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    let cfg = &cfg;
                    s.spawn(move || run_task(cfg, i + 1, t, opts.timing))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("task thread panicked"))
                .collect()
        })
    } else {
        tasks
            .into_iter()
            .enumerate()
            .map(|(i, t)| run_task(&cfg, i + 1, t, opts.timing))
            .collect()
    };
    std::fs::create_dir_all(&opts.out).map_err(|e| CliError::Io {
        path: opts.out.clone(),
        source: e,
    })?;
    let mut written = Vec::new();
    for r in &reports {
        let path = opts.out.join(r.file_name());
        std::fs::write(&path, r.render()).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?;
        written.push(path);
    }
    let failed = reports
        .iter()
        .any(|r| r.verdict.is_failure() || r.status == Status::Error);
    let exit_code = if opts.strict && failed { 1 } else { 0 };
    Ok(RunSummary {
        reports,
        written,
        exit_code,
    })
}

/// Text shown on stdout: one line per task, plus dimension tables.
pub fn render_human(summary: &RunSummary) -> String {
    let mut s = String::new();
    for r in &summary.reports {
        let name = r
            .task
            .name
            .as_deref()
            .or(r.task.divisor.as_deref())
            .unwrap_or("-");
        s.push_str(&format!(
            "[{:02}] {} {}: {} ({})\n",
            r.index,
            r.task.kind,
            name,
            r.verdict.as_str(),
            r.summary
        ));
        if let Some(rows) = r.result.get("dimensions").and_then(|v| v.as_array()) {
            s.push_str("     degree  dimension\n");
            for row in rows {
                s.push_str(&format!(
                    "     {:>6}  {:>9}\n",
                    row["degree"], row["dimension"]
                ));
            }
        }
    }
    s
}
