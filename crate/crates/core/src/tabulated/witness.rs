use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{HilbertTable, TabulatedError};
use crate::graded::{
    counting_refutation, CertificateKind, CountingProbe, FGCertificate, GeneratorSet, GradedError,
    Witness,
};

pub const EXAMPLE26_PROVENANCE: &str =
    "synthetic stand-in: constant algebra; module dimensions count lattice points \
     of m times the standard (n-1)-simplex, growing like m^(n-1)";

/// A constant algebra `Q ⊕ Q ⊕ ⋯` and a module whose dimension in degree
/// `m` is the number of lattice points of `m·Δ_{n−1}`, i.e.
/// `binomial(m + n − 1, n − 1)`, for `m` in `0..degrees`.
///
/// The numbers are synthetic: only their growth order is meaningful.
pub fn example26_dataset(
    n: usize,
    degrees: usize,
) -> Result<(HilbertTable, HilbertTable), TabulatedError> {
    if n < 2 {
        return Err(TabulatedError::InvalidDimension(n));
    }
    let alg = (0..degrees as i64).map(|m| (m, 1)).collect();
    let mut module = BTreeMap::new();
    for m in 0..degrees as u64 {
        let d = num_integer::binomial(BigInt::from(m + n as u64 - 1), BigInt::from(n - 1));
        let d = d
            .to_u64()
            .ok_or_else(|| super::schema(format!("dimensions.{m}"), "dimension overflows u64"))?;
        module.insert(m as i64, d);
    }
    Ok((
        HilbertTable::new(format!("R(L), n = {n}"), alg, EXAMPLE26_PROVENANCE)?,
        HilbertTable::new(format!("M0_F(L), n = {n}"), module, EXAMPLE26_PROVENANCE)?,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct NonFgVerdict {
    /// Either a non-fg witness or inconclusive; dimension data never certifies.
    pub certificate: FGCertificate,
    pub probe: CountingProbe,
    /// Candidate generators of every degree up to this bound were considered.
    pub generator_degree_bound: i64,
    pub probe_range: (i64, i64),
    pub provenance: Vec<String>,
}

/// Counting refutation over degrees `offset..probe_bound`, where `offset` is
/// the lowest degree of the module table. The algebra table must cover
/// `0..probe_bound − min(offset, 0)`.
///
/// Candidate generating sets have degrees at most `max(offset, (probe_bound − 1) / 8)`.
/// A set with at most `dim M_d` generators in each degree `d ≤ e` produces at
/// most `Σ_{d ≤ e} dim M_d · dim R_{m−d}` dimensions in degree `m`; this cap
/// dominates every multiset of generators of degree `≤ e` and any size.
pub fn nonfg_witness(
    alg: &HilbertTable,
    module: &HilbertTable,
    probe_bound: i64,
) -> Result<NonFgVerdict, TabulatedError> {
    let offset = module.min_degree();
    let hi = probe_bound - 1;
    // The cap reads dim R_(m−d) for d ≥ offset, so a negative offset needs
    // algebra data beyond the probe.
    for (t, lo, top) in [(alg, 0, hi - offset.min(0)), (module, offset, hi)] {
        if let Some(m) = (lo..=top).find(|&m| t.get(m).is_none()) {
            return Err(GradedError::InsufficientRange { degree: m }.into());
        }
    }
    let e_max = offset.max(hi / 8);
    let probe = counting_refutation(
        &alg.hilbert_function(),
        &module.hilbert_function(),
        offset,
        e_max,
        offset..=hi,
    )?;
    let mut certificate = FGCertificate {
        kind: CertificateKind::Inconclusive,
        generators: GeneratorSet::default(),
        stabilization_degree: e_max,
        bound: Some(hi),
        witness: None,
        notes: Vec::new(),
    };
    match &probe.witness {
        Some(w) => {
            certificate.kind = CertificateKind::NonFgWitness;
            certificate.notes.push(format!(
                "for every e <= {e_max}, the cap {} falls below dim M_m for some m <= {hi}",
                w.bound_formula
            ));
            certificate.witness = Some(Witness::Counting(w.clone()));
        }
        None => certificate
            .notes
            .push("dimension data cannot certify finite generation".into()),
    }
    let provenance = [alg, module]
        .iter()
        .filter(|t| !t.provenance.is_empty())
        .map(|t| format!("{}: {}", t.label, t.provenance))
        .collect();
    Ok(NonFgVerdict {
        certificate,
        probe,
        generator_degree_bound: e_max,
        probe_range: (offset, hi),
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::growth_degree;

    #[test]
    fn dataset_dimensions() {
        let (a, m) = example26_dataset(2, 40).unwrap();
        assert_eq!(a.entries().len(), 40);
        assert!(a.entries().values().all(|&d| d == 1));
        assert!(m.entries().iter().all(|(&k, &d)| d == k as u64 + 1));
        let (_, m) = example26_dataset(3, 10).unwrap();
        assert!(m
            .entries()
            .iter()
            .all(|(&k, &d)| d == ((k + 1) * (k + 2) / 2) as u64));
        assert!(example26_dataset(1, 10).is_err());
    }

    #[test]
    fn witness_fires_with_growth_gap() {
        for n in 2..=4 {
            let (a, m) = example26_dataset(n, 40).unwrap();
            let v = nonfg_witness(&a, &m, 40).unwrap();
            assert_eq!(v.certificate.kind, CertificateKind::NonFgWitness, "n = {n}");
            assert_eq!(
                growth_degree(&m.hilbert_function(), 0..=39)
                    .unwrap()
                    .exponent,
                Some(n as u32 - 1)
            );
            assert!(!v.provenance.is_empty());
        }
    }

    #[test]
    fn algebra_over_itself_has_no_witness() {
        let (a, _) = example26_dataset(3, 40).unwrap();
        let v = nonfg_witness(&a, &a, 40).unwrap();
        assert_eq!(v.certificate.kind, CertificateKind::Inconclusive);
        assert!(v.probe.per_bound.iter().all(|(_, f)| f.is_none()));
    }

    #[test]
    fn negative_offsets_need_a_longer_algebra_table() {
        let (a, _) = example26_dataset(2, 40).unwrap();
        let m = HilbertTable::new("M", (-2..40).map(|k| (k, 1)).collect(), "").unwrap();
        assert!(matches!(
            nonfg_witness(&a, &m, 40),
            Err(TabulatedError::Graded(GradedError::InsufficientRange {
                degree: 40
            }))
        ));
        let (a, _) = example26_dataset(2, 42).unwrap();
        assert_eq!(
            nonfg_witness(&a, &m, 40).unwrap().certificate.kind,
            CertificateKind::Inconclusive
        );
    }

    #[test]
    fn short_tables_are_rejected() {
        let (a, m) = example26_dataset(3, 20).unwrap();
        assert!(matches!(
            nonfg_witness(&a, &m, 40),
            Err(TabulatedError::Graded(GradedError::InsufficientRange {
                degree: 20
            }))
        ));
    }
}
