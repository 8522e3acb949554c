use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::lemmas::{dedup, lemma32_reconstruct, lemma33_extend, SplitRow};
use super::InductionError;
use crate::graded::{
    find_algebra_generators, find_algebra_generators_seeded, find_module_generators,
    find_module_generators_seeded, first_unspanned_degree, generated_rank, generated_span,
    Combination, DegreeSlice, Echelon, Element, FGCertificate, GeneratorSet, GradedAlgebra,
    GradedModule, Label, QuotientAlgebra, QuotientModule,
};
use crate::lattice::IntVector;
use crate::toric::{
    divisorial_algebra, divisorial_module, exact_fg_algebra, exact_fg_module, h0, is_ample,
    restriction_kernel, restriction_kernel_twisted, CartierDivisor, ToricAlgebra, ToricVariety,
};

/// `L = Σ l_i L_i` with `l_i > 0` and `L_i` effective and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub parts: Vec<(i64, CartierDivisor)>,
}

impl Decomposition {
    pub fn new(
        x: &ToricVariety,
        parts: Vec<(i64, CartierDivisor)>,
    ) -> Result<Self, InductionError> {
        if parts.is_empty() {
            return Err(InductionError::InvalidDecomposition("no components".into()));
        }
        for (i, (l, d)) in parts.iter().enumerate() {
            if *l <= 0 {
                return Err(InductionError::InvalidDecomposition(format!(
                    "multiplicity of component {i} is {l}"
                )));
            }
            if d.coeffs().len() != x.num_rays() {
                return Err(InductionError::InvalidDecomposition(format!(
                    "component {i} has the wrong length"
                )));
            }
            if !d.is_effective() || d.is_zero() {
                return Err(InductionError::InvalidDecomposition(format!(
                    "component {i} = {d} is not effective and nonzero"
                )));
            }
        }
        Ok(Decomposition { parts })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<i64> {
        self.parts.iter().map(|(l, _)| *l).collect()
    }

    /// `Σ c_i L_i`.
    pub fn accumulated(&self, x: &ToricVariety, c: &[i64]) -> CartierDivisor {
        self.parts
            .iter()
            .zip(c)
            .fold(CartierDivisor::zero(x), |acc, ((_, d), &ci)| {
                acc.add(&d.scale_i64(ci))
            })
            .recheck(x)
    }

    pub fn total(&self, x: &ToricVariety) -> CartierDivisor {
        self.accumulated(x, &self.multiplicities())
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub bound: i64,
    /// Priority order of components when choosing `S`; default `0, 1, …`.
    pub order: Option<Vec<usize>>,
    /// Also check finite generation of every restriction `M_{−C}|_{L_j}`
    /// with `c_j < l_j`, not only those on the visited chain.
    pub exhaustive: bool,
}

impl PipelineOptions {
    pub fn new(bound: i64) -> Self {
        PipelineOptions {
            bound,
            order: None,
            exhaustive: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessRow {
    pub degree: i64,
    pub middle: usize,
    pub kernel: usize,
    pub image: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionStep {
    /// Coefficients `c_i` before the step.
    pub c: Vec<i64>,
    /// Index of the component `S = L_j`.
    pub s: usize,
    pub kernel_generators: GeneratorSet,
    pub image_generators: GeneratorSet,
    pub image_certificate: FGCertificate,
    pub exactness: Vec<ExactnessRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub elements: usize,
    pub max_steps: i64,
    pub generators_added_at_offset: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineTrace {
    pub multiplicities: Vec<i64>,
    pub steps: Vec<RestrictionStep>,
    pub final_generators: GeneratorSet,
    pub certificate: FGCertificate,
    /// Degree-one element realizing multiplication by the section of `L`.
    pub alpha: Element,
    pub descent: Option<DescentReport>,
    pub direct_generator_degrees: BTreeMap<i64, usize>,
    pub matches_direct: bool,
    /// Number of `(C, S)` restrictions checked in exhaustive mode.
    pub exhaustive_checks: Option<usize>,
    pub notes: Vec<String>,
}

fn choose(c: &[i64], ls: &[i64], order: &[usize]) -> Option<usize> {
    order.iter().copied().find(|&j| c[j] < ls[j])
}

fn resolve_order(
    dec: &Decomposition,
    opts: &PipelineOptions,
) -> Result<Vec<usize>, InductionError> {
    let order = opts
        .order
        .clone()
        .unwrap_or_else(|| (0..dec.len()).collect());
    let mut seen = order.clone();
    seen.sort_unstable();
    if seen != (0..dec.len()).collect::<Vec<_>>() {
        return Err(InductionError::InvalidDecomposition(format!(
            "order {order:?} is not a permutation"
        )));
    }
    Ok(order)
}

fn alpha(x: &ToricVariety) -> Element {
    Element::basis(1, Label::Point(IntVector::zero(x.dim())))
}

/// Exactness rows and the sub-basis check for `0 → K → M → M/K → 0`.
fn exactness(
    middle: &dyn GradedModule,
    kernel: &dyn GradedModule,
    image: &dyn GradedModule,
    lo: i64,
    hi: i64,
) -> Result<Vec<ExactnessRow>, InductionError> {
    let mut rows = Vec::new();
    for m in lo..=hi {
        let (a, k) = (middle.slice(m)?, kernel.slice(m)?);
        if let Some(l) = k.basis().iter().find(|l| !a.contains(l)) {
            return Err(InductionError::ExactnessFailure {
                degree: m,
                detail: format!("{l} is not in the middle"),
            });
        }
        let row = ExactnessRow {
            degree: m,
            middle: a.dimension(),
            kernel: k.dimension(),
            image: image.slice(m)?.dimension(),
        };
        if row.middle != row.kernel + row.image {
            return Err(InductionError::ExactnessFailure {
                degree: m,
                detail: format!("{row:?}"),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

struct StepData {
    middle: Arc<dyn GradedModule>,
    kernel: Arc<dyn GradedModule>,
    image: QuotientModule,
}

fn step_modules(
    x: &ToricVariety,
    dec: &Decomposition,
    d: &CartierDivisor,
    l: &CartierDivisor,
    c: &[i64],
    j: usize,
    p: i64,
) -> Result<StepData, InductionError> {
    let mut next = c.to_vec();
    next[j] += 1;
    let middle: Arc<dyn GradedModule> = Arc::new(restriction_kernel_twisted(
        x,
        d,
        l,
        &dec.accumulated(x, c),
        p,
    )?);
    let kernel: Arc<dyn GradedModule> = Arc::new(restriction_kernel_twisted(
        x,
        d,
        l,
        &dec.accumulated(x, &next),
        p,
    )?);
    let image = QuotientModule::new(middle.clone(), kernel.clone());
    Ok(StepData {
        middle,
        kernel,
        image,
    })
}

/// Bounded search on the image; new generators at the bound abort the step.
fn image_generators(
    image: &QuotientModule,
    r: &ToricAlgebra,
    bound: i64,
    c: &[i64],
    s: usize,
) -> Result<(GeneratorSet, FGCertificate), InductionError> {
    let out = find_module_generators(image, r, bound)?;
    if out
        .new_generators_per_degree
        .get(&bound)
        .copied()
        .unwrap_or(0)
        > 0
    {
        return Err(InductionError::StepNotFG {
            c: c.to_vec(),
            s,
            bound,
        });
    }
    Ok((out.generators, out.certificate))
}

fn check_bound(p: i64, bound: i64) -> Result<(), InductionError> {
    if bound <= p {
        return Err(InductionError::Graded(
            crate::graded::GradedError::InvalidBound {
                bound,
                lowest: p + 1,
            },
        ));
    }
    Ok(())
}

fn all_coefficient_vectors(ls: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &l in ls {
        out = out
            .into_iter()
            .flat_map(|v| (0..=l).map(move |c| [v.clone(), vec![c]].concat()))
            .collect();
    }
    out
}

/// Generators of `M^p_D(L)` by successive restriction to the components of
/// `L`, followed by descent along multiplication by `α`.
///
/// Starting from `C = 0`, each step restricts `M^p_{D−C}(L)` to `S = L_j`
/// (bounded search on the image), and extends the generators of
/// `M/M_{D−C}` to generators of `M/M_{D−C−S}`. Once `C = L`, the collected
/// elements `γ` generate `M` modulo `α·M`. Every basis element of degree
/// `m > p` is then written as an element of the span of `γ` plus `α` times an
/// element of degree `m − 1`, recursively, down to degree `p`, whose leftover
/// part is added to the generators.
pub fn theorem34_pipeline(
    x: &ToricVariety,
    dec: &Decomposition,
    d: &CartierDivisor,
    p: i64,
    opts: &PipelineOptions,
) -> Result<PipelineTrace, InductionError> {
    let bound = opts.bound;
    check_bound(p, bound)?;
    let order = resolve_order(dec, opts)?;
    let ls = dec.multiplicities();
    let l = dec.total(x);
    let r = divisorial_algebra(x, &l)?;
    let full: Arc<dyn GradedModule> = Arc::new(divisorial_module(x, d, &l, p)?);

    let mut c = vec![0i64; dec.len()];
    let mut collected = GeneratorSet::default();
    let mut steps = Vec::new();
    while let Some(j) = choose(&c, &ls, &order) {
        let sd = step_modules(x, dec, d, &l, &c, j, p)?;
        let rows = exactness(&*sd.middle, &*sd.kernel, &sd.image, p, bound)?;
        let (img_gens, cert) = image_generators(&sd.image, &r, bound, &c, j)?;
        // 0 → M_{D−C}/M_{D−C−S} → M/M_{D−C−S} → M/M_{D−C} → 0
        let whole_mod_next = QuotientModule::new(full.clone(), sd.kernel.clone());
        collected = lemma33_extend(
            &whole_mod_next,
            &*r,
            &sd.image,
            &img_gens,
            &collected,
            bound,
        )?;
        let mut next = c.clone();
        next[j] += 1;
        let kernel_generators =
            exact_fg_module(x, &d.sub(&dec.accumulated(x, &next)), &l, p)?.generators;
        steps.push(RestrictionStep {
            c: c.clone(),
            s: j,
            kernel_generators,
            image_generators: img_gens,
            image_certificate: cert,
            exactness: rows,
        });
        c = next;
    }

    let exhaustive_checks = if opts.exhaustive {
        Some(exhaustive_check(x, dec, d, &l, &r, p, bound)?)
    } else {
        None
    };

    // Descent along α.
    let gamma = collected;
    let seeded = find_module_generators_seeded(&*full, &*r, p, &gamma)?;
    let mut final_generators = seeded.generators.clone();
    dedup(&mut final_generators);
    let added = final_generators.len() - gamma.len();
    let beneath: Arc<dyn GradedModule> = Arc::new(restriction_kernel_twisted(x, d, &l, &l, p)?);
    let descent = descend(
        &*full,
        &*beneath,
        &*r,
        &gamma,
        &final_generators,
        p,
        bound,
        added,
    )?;

    if let Some(deg) = first_unspanned_degree(&*full, &*r, &final_generators, bound)? {
        return Err(InductionError::SpanFailure { degree: deg });
    }
    let direct = find_module_generators(&*full, &*r, bound)?.generators;
    let matches_direct = spans_agree(&*full, &*r, &final_generators, &direct, p, bound)?;
    let stab = final_generators.max_degree().unwrap_or(p);
    let mut certificate = FGCertificate::bounded(final_generators.clone(), stab, bound);
    certificate.notes.push(
        "generators assembled by restriction along the components and descent along alpha".into(),
    );
    Ok(PipelineTrace {
        multiplicities: ls,
        steps,
        final_generators,
        certificate,
        alpha: alpha(x),
        descent: Some(descent),
        direct_generator_degrees: direct.degree_table(),
        matches_direct,
        exhaustive_checks,
        notes: chain_notes(opts.exhaustive),
    })
}

fn chain_notes(exhaustive: bool) -> Vec<String> {
    let mut notes =
        vec!["torus-invariant representatives; no lattice translation applied".to_string()];
    if !exhaustive {
        notes.push("only the visited chain of C was checked, not every C with c_j < l_j".into());
    }
    notes
}

#[allow(clippy::too_many_arguments)]
fn exhaustive_check(
    x: &ToricVariety,
    dec: &Decomposition,
    d: &CartierDivisor,
    l: &CartierDivisor,
    r: &ToricAlgebra,
    p: i64,
    bound: i64,
) -> Result<usize, InductionError> {
    let ls = dec.multiplicities();
    let mut count = 0;
    for c in all_coefficient_vectors(&ls) {
        for j in (0..ls.len()).filter(|&j| c[j] < ls[j]) {
            let sd = step_modules(x, dec, d, l, &c, j, p)?;
            image_generators(&sd.image, r, bound, &c, j)?;
            count += 1;
        }
    }
    Ok(count)
}

struct DegreeData {
    slice: Arc<DegreeSlice>,
    /// Projections onto coordinates outside `α·M`, with full vectors as payload.
    projected: Echelon,
    /// Full span of the final generators (used at the offset).
    full: Echelon,
    beneath: HashSet<usize>,
}

#[allow(clippy::too_many_arguments)]
fn descend(
    m: &dyn GradedModule,
    beneath: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    gamma: &GeneratorSet,
    final_gens: &GeneratorSet,
    p: i64,
    bound: i64,
    added: usize,
) -> Result<DescentReport, InductionError> {
    let mut data: BTreeMap<i64, DegreeData> = BTreeMap::new();
    for k in p..=bound {
        let slice = m.slice(k)?;
        let below = beneath.slice(k)?;
        let beneath_idx: HashSet<usize> = below
            .basis()
            .iter()
            .map(|lab| {
                slice
                    .index_of(lab)
                    .ok_or_else(|| InductionError::ExactnessFailure {
                        degree: k,
                        detail: format!("{lab} is in alpha*M but not in M"),
                    })
            })
            .collect::<Result<_, _>>()?;
        let mut projected = Echelon::new();
        for v in generated_span(m, r, gamma, k)? {
            let proj = v.reindex(|i| (!beneath_idx.contains(&i)).then_some(i));
            projected.insert_with_payload(&proj, Some(v));
        }
        let mut full = Echelon::new();
        if k == p {
            for v in generated_span(m, r, final_gens, k)? {
                full.insert(&v);
            }
        }
        data.insert(
            k,
            DegreeData {
                slice,
                projected,
                full,
                beneath: beneath_idx,
            },
        );
    }

    let mut elements = 0;
    let mut max_steps = 0;
    for top in p..=bound {
        let dim = data[&top].slice.dimension();
        for j in 0..dim {
            elements += 1;
            let mut cur = Combination::basis(j);
            let mut deg = top;
            let mut steps = 0;
            loop {
                let dd = &data[&deg];
                if deg == p {
                    if !dd.full.contains(&cur) {
                        return Err(InductionError::SpanFailure { degree: p });
                    }
                    break;
                }
                let proj = cur.reindex(|i| (!dd.beneath.contains(&i)).then_some(i));
                let red = dd.projected.reduce(&proj, Some(cur.clone()));
                if !red.remainder.is_empty() {
                    return Err(InductionError::SpanFailure { degree: deg });
                }
                // β₂ = β − β₁ lies in α·M; read it in degree deg − 1.
                let beta2 = red
                    .payload
                    .expect("payload requested")
                    .scaled(&red.scale.recip());
                if beta2.is_zero() {
                    break;
                }
                let lower = &data[&(deg - 1)].slice;
                let mut beta3 = Combination::zero();
                for (i, x) in beta2.iter() {
                    if !dd.beneath.contains(&i) {
                        return Err(InductionError::SpanFailure { degree: deg });
                    }
                    let idx = lower.index_of(dd.slice.label(i)).ok_or_else(|| {
                        InductionError::ExactnessFailure {
                            degree: deg - 1,
                            detail: format!("{} has no preimage under alpha", dd.slice.label(i)),
                        }
                    })?;
                    beta3.add_term(idx, x);
                }
                cur = beta3;
                deg -= 1;
                steps += 1;
            }
            debug_assert!(steps <= top - p);
            max_steps = max_steps.max(steps);
        }
    }
    Ok(DescentReport {
        elements,
        max_steps,
        generators_added_at_offset: added,
    })
}

fn spans_agree(
    m: &dyn GradedModule,
    r: &dyn GradedAlgebra,
    a: &GeneratorSet,
    b: &GeneratorSet,
    lo: i64,
    hi: i64,
) -> Result<bool, InductionError> {
    for k in lo..=hi {
        let dim = m.slice(k)?.dimension();
        if generated_rank(m, r, a, k)? != dim || generated_rank(m, r, b, k)? != dim {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem35Outcome {
    pub certificate: FGCertificate,
    pub trace: PipelineTrace,
    pub first_component: usize,
    pub restricted_algebra_generators: GeneratorSet,
    pub kernel_generators: GeneratorSet,
    pub split: Vec<SplitRow>,
    /// The chain of equivalences `M_{−L_1} fg ⇔ … ⇔ M_{−L} fg`.
    pub chain: Vec<String>,
    pub exact_generator_degrees: BTreeMap<i64, usize>,
    pub matches_exact: bool,
}

/// Algebra generators of `R(L)` from the restriction `R(L)|_{L_1}` and the
/// chain of kernels `M^0_{−C}(L)` from `C = L_1` up to `C = L`, where
/// `M^0_{−L}(L)` is generated by `1` in degree one.
pub fn theorem35_pipeline(
    x: &ToricVariety,
    dec: &Decomposition,
    j1: usize,
    opts: &PipelineOptions,
) -> Result<Theorem35Outcome, InductionError> {
    let bound = opts.bound;
    check_bound(0, bound)?;
    if j1 >= dec.len() {
        return Err(InductionError::InvalidDecomposition(format!(
            "no component {j1}"
        )));
    }
    let order = resolve_order(dec, opts)?;
    let l1 = &dec.parts[j1].1;
    let minus = l1.scale(&BigInt::from(-1));
    let h = h0(x, &minus)?;
    if h != 0 {
        return Err(InductionError::HypothesisFailure(format!(
            "h0(-L_1) = {h}, expected 0"
        )));
    }
    let ls = dec.multiplicities();
    let l = dec.total(x);
    let r = divisorial_algebra(x, &l)?;
    let zero = CartierDivisor::zero(x);

    let k1: Arc<dyn GradedModule> = Arc::new(restriction_kernel(x, &l, l1, 0)?);
    let t = QuotientAlgebra::new(r.clone(), k1.clone());
    let t_search = find_algebra_generators(&t, bound)?;
    if t_search
        .new_generators_per_degree
        .get(&bound)
        .copied()
        .unwrap_or(0)
        > 0
    {
        return Err(InductionError::StepNotFG {
            c: vec![0; dec.len()],
            s: j1,
            bound,
        });
    }
    let t_gens = t_search.generators;

    let mut c = vec![0i64; dec.len()];
    c[j1] = 1;
    let mut steps = Vec::new();
    let mut chain = Vec::new();
    while let Some(j) = choose(&c, &ls, &order) {
        let sd = step_modules(x, dec, &zero, &l, &c, j, 0)?;
        let rows = exactness(&*sd.middle, &*sd.kernel, &sd.image, 0, bound)?;
        let (img_gens, cert) = image_generators(&sd.image, &r, bound, &c, j)?;
        let mut next = c.clone();
        next[j] += 1;
        chain.push(format!(
            "fg M^0_(-C)(L) <=> fg M^0_(-C-S)(L) for C = {c:?}, S = L_{j}"
        ));
        let kernel_generators =
            exact_fg_module(x, &zero.sub(&dec.accumulated(x, &next)), &l, 0)?.generators;
        steps.push(RestrictionStep {
            c: c.clone(),
            s: j,
            kernel_generators,
            image_generators: img_gens,
            image_certificate: cert,
            exactness: rows,
        });
        c = next;
    }
    chain.push("M^0_(-L)(L) is generated by 1 in degree 1".into());

    let one = GeneratorSet::new(vec![alpha(x)]);
    let bottom = restriction_kernel(x, &l, &l, 0)?;
    if let Some(deg) = first_unspanned_degree(&bottom, &*r, &one, bound)? {
        return Err(InductionError::SpanFailure { degree: deg });
    }
    // Climb back up the chain.
    let mut gens = one;
    for step in steps.iter().rev() {
        let sd = step_modules(x, dec, &zero, &l, &step.c, step.s, 0)?;
        gens = lemma33_extend(
            &*sd.middle,
            &*r,
            &*sd.kernel,
            &gens,
            &step.image_generators,
            bound,
        )?;
    }
    let kernel_generators = gens;
    let rec = lemma32_reconstruct(&*r, &t_gens, &*k1, &kernel_generators, bound)?;

    let exact = exact_fg_algebra(x, &l)?;
    let exact_check = find_algebra_generators_seeded(&*r, bound, &exact.generators)?;
    let matches_exact = exact_check.first_degree_with_new_generators().is_none();
    let stab = rec.generators.max_degree().unwrap_or(0);
    let mut certificate = FGCertificate::bounded(rec.generators.clone(), stab, bound);
    certificate
        .notes
        .push("algebra generators from the restricted algebra and the kernel chain".into());
    let trace = PipelineTrace {
        multiplicities: ls,
        steps,
        final_generators: rec.generators,
        certificate: certificate.clone(),
        alpha: alpha(x),
        descent: None,
        direct_generator_degrees: find_algebra_generators(&*r, bound)?
            .generators
            .degree_table(),
        matches_direct: matches_exact,
        exhaustive_checks: None,
        notes: chain_notes(false),
    };
    Ok(Theorem35Outcome {
        certificate,
        trace,
        first_component: j1,
        restricted_algebra_generators: t_gens,
        kernel_generators,
        split: rec.split,
        chain,
        exact_generator_degrees: exact.generators.degree_table(),
        matches_exact,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem36Outcome {
    pub algebra: Theorem35Outcome,
    /// `(l, trace for M^p_{lA}(L))`
    pub modules: Vec<(i64, PipelineTrace)>,
}

/// The algebra pipeline followed by the module pipeline for each twist
/// `O_X(l) = lA` of an ample invariant divisor `A`.
pub fn theorem36_pipeline(
    x: &ToricVariety,
    dec: &Decomposition,
    j1: usize,
    ample: &CartierDivisor,
    l_values: &[i64],
    p: i64,
    opts: &PipelineOptions,
) -> Result<Theorem36Outcome, InductionError> {
    if !is_ample(x, ample)? {
        return Err(InductionError::HypothesisFailure(format!(
            "{ample} is not ample"
        )));
    }
    let algebra = theorem35_pipeline(x, dec, j1, opts)?;
    let mut modules = Vec::new();
    for &lv in l_values {
        modules.push((
            lv,
            theorem34_pipeline(x, dec, &ample.scale_i64(lv), p, opts)?,
        ));
    }
    Ok(Theorem36Outcome { algebra, modules })
}
