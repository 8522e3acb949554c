//! One function per task kind. Each returns a verdict, a one-line summary
//! and a JSON payload; errors are embedded in the report by the caller.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use divalg_core::graded::{
    decompose, find_algebra_generators, find_algebra_generators_seeded, find_module_generators,
    reindex_component, reindexed_offset, truncate, veronese, HilbertFunction,
};
use divalg_core::induction::{
    theorem34_pipeline, theorem35_pipeline, theorem36_pipeline, Decomposition, PipelineOptions,
};
use divalg_core::tabulated::{nonfg_witness, HilbertTable};
use divalg_core::toric::{
    divisorial_algebra, divisorial_module, exact_fg_algebra, exact_fg_module, fix_mov,
    fix_stability_check, h0, is_ample, is_base_point_free, restriction_image,
    restriction_kernel_twisted, section_growth, supp_fix_with_ample,
};
use divalg_core::{
    CartierDivisor, CertificateKind, FGCertificate, GradedAlgebra, GradedModule, ToricVariety,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Geometry, JobConfig, Tables, TaskKind, TaskSpec};

pub const DEFAULT_BOUND: i64 = 10;
pub const DEFAULT_MAX_DEGREE: i64 = 10;
pub const DEFAULT_PROBE: i64 = 40;
pub const DEFAULT_PERIOD: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    Pass,
    Fail,
    FinitelyGenerated,
    BoundedSearch,
    NonFgWitness,
    Inconclusive,
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Ok => "ok",
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::FinitelyGenerated => "finitely-generated",
            Verdict::BoundedSearch => "bounded-search",
            Verdict::NonFgWitness => "non-fg-witness",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Error => "error",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Error)
    }

    fn check(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn of_certificate(c: &FGCertificate) -> Verdict {
        match c.kind {
            CertificateKind::Exact => Verdict::FinitelyGenerated,
            CertificateKind::BoundedSearch => Verdict::BoundedSearch,
            CertificateKind::NonFgWitness => Verdict::NonFgWitness,
            CertificateKind::Inconclusive => Verdict::Inconclusive,
        }
    }
}

pub struct TaskOutcome {
    pub verdict: Verdict,
    pub summary: String,
    pub result: Value,
    /// Dimension table for the human-readable output.
    pub table: Option<Vec<(i64, u64)>>,
}

impl TaskOutcome {
    fn new(verdict: Verdict, summary: impl Into<String>, result: Value) -> Self {
        TaskOutcome {
            verdict,
            summary: summary.into(),
            result,
            table: None,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report payloads serialize")
}

fn dims_rows(h: &HilbertFunction) -> Value {
    Value::Array(
        h.iter()
            .map(|(m, d)| json!({ "degree": m, "dimension": d }))
            .collect(),
    )
}

fn describe(c: &FGCertificate) -> String {
    let mut s = format!(
        "{}, {} generators, stabilization {}",
        c.kind.as_str(),
        c.generators.len(),
        c.stabilization_degree
    );
    if let Some(b) = c.bound {
        s.push_str(&format!(", bound {b}"));
    }
    s
}

struct Toric<'a> {
    x: &'a ToricVariety,
    divisors: &'a BTreeMap<String, CartierDivisor>,
}

impl Toric<'_> {
    fn div(&self, name: &Option<String>, field: &str) -> Result<CartierDivisor> {
        let n = name.as_ref().ok_or_else(|| anyhow!("missing `{field}`"))?;
        self.divisors
            .get(n)
            .cloned()
            .ok_or_else(|| anyhow!("undefined divisor {n:?}"))
    }

    fn twist(&self, t: &TaskSpec) -> Result<CartierDivisor> {
        match &t.twist {
            Some(_) => self.div(&t.twist, "twist"),
            None => Ok(CartierDivisor::zero(self.x)),
        }
    }

    fn decomposition(&self, t: &TaskSpec) -> Result<Decomposition> {
        let parts = t
            .components
            .as_ref()
            .ok_or_else(|| anyhow!("missing `components`"))?;
        let parts = parts
            .iter()
            .map(|(l, n)| Ok((*l, self.div(&Some(n.clone()), "components")?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition::new(self.x, parts)?)
    }
}

fn options(t: &TaskSpec) -> PipelineOptions {
    PipelineOptions {
        bound: t.bound.unwrap_or(DEFAULT_BOUND),
        order: t.order.clone(),
        exhaustive: t.exhaustive.unwrap_or(false),
    }
}

pub fn execute(cfg: &JobConfig, t: &TaskSpec) -> Result<TaskOutcome> {
    match &cfg.geometry {
        Geometry::Toric { variety, divisors } => toric_task(
            &Toric {
                x: variety,
                divisors,
            },
            t,
        ),
        Geometry::Tabulated(tables) => tabulated_task(tables, t),
    }
}

fn toric_task(g: &Toric, t: &TaskSpec) -> Result<TaskOutcome> {
    let x = g.x;
    let bound = t.bound.unwrap_or(DEFAULT_BOUND);
    let max_degree = t.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    let p = t.offset.unwrap_or(0);
    match t.kind {
        TaskKind::Hilbert => {
            let l = g.div(&t.divisor, "divisor")?;
            let h = if t.twist.is_some() {
                let m = divisorial_module(x, &g.twist(t)?, &l, p)?;
                HilbertFunction::of_module(&m, p..=max_degree)?
            } else {
                HilbertFunction::of_algebra(&*divisorial_algebra(x, &l)?, 0..=max_degree)?
            };
            let last = h.iter().last().map_or(0, |(_, d)| d);
            let mut out = TaskOutcome::new(
                Verdict::Ok,
                format!("{} degrees, last dimension {last}", h.len()),
                json!({ "dimensions": dims_rows(&h) }),
            );
            out.table = Some(h.iter().collect());
            Ok(out)
        }
        TaskKind::FgAlgebra => {
            let l = g.div(&t.divisor, "divisor")?;
            let exact = exact_fg_algebra(x, &l)?;
            let r = divisorial_algebra(x, &l)?;
            let seeded = find_algebra_generators_seeded(&*r, bound, &exact.generators)?;
            let direct = find_algebra_generators(&*r, bound)?;
            let agrees = seeded.new_generator_count() == 0
                && direct.generators.degree_table() == exact.generators.degree_table();
            let verdict = if agrees {
                Verdict::of_certificate(&exact)
            } else {
                Verdict::Fail
            };
            Ok(TaskOutcome::new(
                verdict,
                describe(&exact),
                json!({
                    "certificate": to_value(&exact),
                    "bounded_check": { "bound": bound, "certificate": to_value(&direct.certificate), "agrees": agrees },
                }),
            ))
        }
        TaskKind::FgModule => {
            let l = g.div(&t.divisor, "divisor")?;
            let d = g.twist(t)?;
            let exact = exact_fg_module(x, &d, &l, p)?;
            let mut result = json!({ "certificate": to_value(&exact) });
            let mut verdict = Verdict::of_certificate(&exact);
            if exact.kind == CertificateKind::Exact {
                let r = divisorial_algebra(x, &l)?;
                let m = divisorial_module(x, &d, &l, p)?;
                let direct = find_module_generators(&m, &*r, bound)?;
                let agrees = direct.generators.degree_table() == exact.generators.degree_table();
                if !agrees {
                    verdict = Verdict::Fail;
                }
                result["bounded_check"] = json!({ "bound": bound, "certificate": to_value(&direct.certificate), "agrees": agrees });
            }
            Ok(TaskOutcome::new(verdict, describe(&exact), result))
        }
        TaskKind::Truncate => {
            let l = g.div(&t.divisor, "divisor")?;
            let period = t.period.unwrap_or(DEFAULT_PERIOD);
            let r = divisorial_algebra(x, &l)?;
            let base = find_algebra_generators(&*r, bound)?.certificate;
            let trunc_bound = period * (base.stabilization_degree + 2);
            let tr =
                find_algebra_generators(&truncate(r.clone(), period)?, trunc_bound)?.certificate;
            let limit = period * base.stabilization_degree + period;
            let holds = base.stabilized() && tr.stabilized() && tr.stabilization_degree <= limit;
            Ok(TaskOutcome::new(
                Verdict::check(holds),
                format!(
                    "R stabilizes at {}, R^[{period}] at {} (limit {limit})",
                    base.stabilization_degree, tr.stabilization_degree
                ),
                json!({
                    "period": period,
                    "algebra": to_value(&base),
                    "truncation": to_value(&tr),
                    "truncation_bound": trunc_bound,
                    "limit": limit,
                    "holds": holds,
                }),
            ))
        }
        TaskKind::Decompose => {
            let l = g.div(&t.divisor, "divisor")?;
            let period = t.period.unwrap_or(DEFAULT_PERIOD);
            let r = divisorial_algebra(x, &l)?;
            let m: Arc<dyn GradedModule> = Arc::new(divisorial_module(x, &g.twist(t)?, &l, p)?);
            let comps = decompose(m.clone(), period)?;
            let mut sums_match = true;
            let mut rows = Vec::new();
            for k in p..=max_degree {
                let total = m.slice(k)?.dimension();
                let parts: Vec<usize> = comps
                    .iter()
                    .map(|c| c.slice(k).map(|s| s.dimension()))
                    .collect::<Result<_, _>>()?;
                sums_match &= parts.iter().sum::<usize>() == total;
                rows.push(json!({ "degree": k, "dimension": total, "components": parts }));
            }
            let ver: Arc<dyn GradedAlgebra> = Arc::new(veronese(r.clone(), period)?);
            let mut components = Vec::new();
            let mut all_stable = true;
            for (i, c) in comps.into_iter().enumerate() {
                let re = reindex_component(Arc::new(c), period, i as i64, p)?;
                let cert = find_module_generators(&re, &*ver, re.offset() + bound)?.certificate;
                all_stable &= cert.stabilized();
                components.push(json!({
                    "residue": i,
                    "offset": re.offset(),
                    "expected_offset": reindexed_offset(period, i as i64, p),
                    "certificate": to_value(&cert),
                }));
            }
            Ok(TaskOutcome::new(
                Verdict::check(sums_match && all_stable),
                format!(
                    "{period} components, dimension sums {}",
                    if sums_match { "match" } else { "differ" }
                ),
                json!({ "period": period, "rows": rows, "components": components }),
            ))
        }
        TaskKind::Restrict => {
            let l = g.div(&t.divisor, "divisor")?;
            let c = g.div(&t.restrict, "restrict")?;
            let d = g.twist(t)?;
            let r = divisorial_algebra(x, &l)?;
            let m: Arc<dyn GradedModule> = Arc::new(divisorial_module(x, &d, &l, p)?);
            let k: Arc<dyn GradedModule> = Arc::new(restriction_kernel_twisted(x, &d, &l, &c, p)?);
            let image = restriction_image(m.clone(), k.clone());
            let mut exact = true;
            let mut rows = Vec::new();
            for deg in p..=max_degree {
                let (a, b, i) = (
                    m.slice(deg)?.dimension(),
                    k.slice(deg)?.dimension(),
                    image.slice(deg)?.dimension(),
                );
                exact &= a == b + i;
                rows.push(json!({ "degree": deg, "middle": a, "kernel": b, "image": i }));
            }
            let cert = find_module_generators(&image, &*r, bound)?.certificate;
            Ok(TaskOutcome::new(
                Verdict::check(exact),
                format!(
                    "exactness {} up to degree {max_degree}; image {}",
                    if exact { "holds" } else { "fails" },
                    describe(&cert)
                ),
                json!({ "exactness": rows, "image_certificate": to_value(&cert) }),
            ))
        }
        TaskKind::Induct34 => {
            let dec = g.decomposition(t)?;
            let trace = theorem34_pipeline(x, &dec, &g.twist(t)?, p, &options(t))?;
            Ok(TaskOutcome::new(
                Verdict::check(trace.matches_direct),
                format!(
                    "{} steps; {}",
                    trace.steps.len(),
                    describe(&trace.certificate)
                ),
                to_value(&trace),
            ))
        }
        TaskKind::Induct35 => {
            let dec = g.decomposition(t)?;
            let out = theorem35_pipeline(x, &dec, t.first.unwrap_or(0), &options(t))?;
            Ok(TaskOutcome::new(
                Verdict::check(out.matches_exact),
                describe(&out.certificate),
                to_value(&out),
            ))
        }
        TaskKind::Induct36 => {
            let dec = g.decomposition(t)?;
            let a = g.div(&t.ample, "ample")?;
            let ls = t.l_values.clone().unwrap_or_else(|| vec![0, 1]);
            let out = theorem36_pipeline(x, &dec, t.first.unwrap_or(0), &a, &ls, p, &options(t))?;
            let ok = out.algebra.matches_exact && out.modules.iter().all(|(_, m)| m.matches_direct);
            Ok(TaskOutcome::new(
                Verdict::check(ok),
                format!(
                    "algebra {}; {} modules",
                    describe(&out.algebra.certificate),
                    out.modules.len()
                ),
                to_value(&out),
            ))
        }
        TaskKind::Fixmov => {
            let d = g.div(&t.divisor, "divisor")?;
            let fm = fix_mov(x, &d)?;
            let (hd, hm) = (h0(x, &d)?, h0(x, &fm.mov)?);
            let result = json!({
                "fix": to_value(&fm.fix),
                "mov": to_value(&fm.mov),
                "h0_divisor": hd,
                "h0_movable": hm,
                "movable_base_point_free": is_base_point_free(x, &fm.mov)?,
                "ample": is_ample(x, &d)?,
            });
            Ok(TaskOutcome::new(
                Verdict::check(hd == hm),
                format!("Fix = {}, Mov = {}", fm.fix, fm.mov),
                result,
            ))
        }
        TaskKind::FixStability => {
            let l = g.div(&t.divisor, "divisor")?;
            let rep = fix_stability_check(x, &l, t.j.unwrap_or(1), max_degree)?;
            Ok(TaskOutcome::new(
                Verdict::check(rep.holds),
                format!("J = {}, Fix stable: {}", rep.j, rep.holds),
                to_value(&rep),
            ))
        }
        TaskKind::SuppFix => {
            let l = g.div(&t.divisor, "divisor")?;
            let a = g.div(&t.ample, "ample")?;
            let (j, r) = (t.j.unwrap_or(1), t.r.unwrap_or(0));
            let lo = t.min_degree.unwrap_or(1);
            let rep = supp_fix_with_ample(x, &l, j, r, &a, lo..=max_degree)?;
            let doubled = supp_fix_with_ample(x, &l, j, r, &a, lo..=2 * max_degree)?;
            let stable = rep.stable_from.is_some() && rep.stable_from == doubled.stable_from;
            Ok(TaskOutcome::new(
                Verdict::check(stable),
                format!(
                    "stable from {:?} (doubled range: {:?})",
                    rep.stable_from, doubled.stable_from
                ),
                json!({ "report": to_value(&rep), "doubled_stable_from": doubled.stable_from, "stable_under_doubling": stable }),
            ))
        }
        TaskKind::Kappa => {
            let l = g.div(&t.divisor, "divisor")?;
            let a = match &t.ample {
                Some(_) => g.div(&t.ample, "ample")?,
                None => CartierDivisor::zero(x),
            };
            let (h, est) = section_growth(x, &l, t.j.unwrap_or(1), &a, 0..=max_degree)?;
            let summary = match est.exponent {
                Some(e) => format!("growth exponent {e}"),
                None => "no sections on the sampled tail".to_string(),
            };
            Ok(TaskOutcome::new(
                Verdict::Ok,
                summary,
                json!({ "dimensions": dims_rows(&h), "growth": to_value(&est) }),
            ))
        }
        TaskKind::Nonfg => {
            let l = g.div(&t.divisor, "divisor")?;
            let probe = t.probe.unwrap_or(DEFAULT_PROBE);
            let r = divisorial_algebra(x, &l)?;
            let alg = HilbertTable::from_algebra(
                "R(L)",
                &*r,
                0..=probe - 1 - p.min(0),
                "exported from the toric backend",
            )?;
            let m = divisorial_module(x, &g.twist(t)?, &l, p)?;
            let module = HilbertTable::from_module(
                "M(L)",
                &m,
                p..=probe - 1,
                "exported from the toric backend",
            )?;
            nonfg(&alg, &module, probe)
        }
    }
}

fn nonfg(alg: &HilbertTable, module: &HilbertTable, probe: i64) -> Result<TaskOutcome> {
    let v = nonfg_witness(alg, module, probe)?;
    Ok(TaskOutcome::new(
        Verdict::of_certificate(&v.certificate),
        format!(
            "{} (generator degrees <= {}, degrees {}..={})",
            v.certificate.kind.as_str(),
            v.generator_degree_bound,
            v.probe_range.0,
            v.probe_range.1
        ),
        to_value(&v),
    ))
}

fn tabulated_task(tables: &Tables, t: &TaskSpec) -> Result<TaskOutcome> {
    let bound = t.bound.unwrap_or(DEFAULT_BOUND);
    let need = |t: &Option<HilbertTable>, which: &str| {
        t.clone()
            .with_context(|| format!("no {which} table configured"))
    };
    match t.kind {
        TaskKind::Hilbert => {
            let table = tables
                .module
                .as_ref()
                .or(tables.algebra.as_ref())
                .context("no tables configured")?;
            let h = table.hilbert_function();
            let mut out = TaskOutcome::new(
                Verdict::Ok,
                format!("{}: {} degrees", table.label, h.len()),
                json!({ "label": table.label, "provenance": table.provenance, "dimensions": dims_rows(&h) }),
            );
            out.table = Some(h.iter().collect());
            Ok(out)
        }
        TaskKind::FgAlgebra => {
            let r = need(&tables.algebra, "algebra")?.algebra()?;
            let cert = find_algebra_generators(&r, bound)?.certificate;
            Ok(TaskOutcome::new(
                Verdict::of_certificate(&cert),
                describe(&cert),
                json!({ "certificate": to_value(&cert) }),
            ))
        }
        TaskKind::FgModule => {
            let r: Arc<dyn GradedAlgebra> = Arc::new(need(&tables.algebra, "algebra")?.algebra()?);
            let m = need(&tables.module, "module")?.module(r.clone())?;
            let cert = find_module_generators(&m, &*r, bound)?.certificate;
            Ok(TaskOutcome::new(
                Verdict::of_certificate(&cert),
                describe(&cert),
                json!({ "certificate": to_value(&cert) }),
            ))
        }
        TaskKind::Nonfg => {
            let probe = t.probe.unwrap_or(DEFAULT_PROBE);
            nonfg(
                &need(&tables.algebra, "algebra")?,
                &need(&tables.module, "module")?,
                probe,
            )
        }
        other => bail!("task {other} requires the toric backend"),
    }
}
