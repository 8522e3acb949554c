use std::sync::Arc;

use divalg_core::graded::{
    algebra_dims, change_offset, counting_bound_check, decompose, find_algebra_generators,
    find_algebra_generators_seeded, find_module_generators, reindex_component, slice_dims,
    truncate, veronese, GradedAlgebra, GradedModule, HilbertFunction,
};
use divalg_core::toric::{divisorial_algebra, divisorial_module, examples};
use divalg_core::CartierDivisor;
use proptest::prelude::*;

fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

fn p2_algebra() -> Arc<dyn GradedAlgebra> {
    let x = examples::projective_space(2);
    divisorial_algebra(&x, &CartierDivisor::from_i64s(&x, &[0, 0, 1]).unwrap()).unwrap()
}

#[test]
fn truncation_and_veronese_generated_in_degree_period() {
    for period in 1..=3 {
        let t = truncate(p2_algebra(), period).unwrap();
        let out = find_algebra_generators(&t, 4 * period).unwrap();
        // the Veronese of a polynomial ring is generated by the monomials of degree I
        assert_eq!(
            out.generators.degrees(),
            vec![period; binomial(period + 2, 2)]
        );
        assert!(out.certificate.stabilized());

        let v = veronese(p2_algebra(), period).unwrap();
        let out = find_algebra_generators(&v, 4).unwrap();
        assert_eq!(out.generators.degrees(), vec![1; binomial(period + 2, 2)]);
    }
}

#[test]
fn truncation_of_a_non_standard_algebra() {
    // P(1,1,2) with the weight-2 divisor: generators in degrees 1 and 2 before truncation
    let x = examples::weighted_p112();
    let r: Arc<dyn GradedAlgebra> = divisorial_algebra(
        &x,
        &CartierDivisor::q_cartier(&x, vec![0.into(), 0.into(), 1.into()]).unwrap(),
    )
    .unwrap();
    let full = find_algebra_generators(&*r, 8).unwrap();
    assert!(full.certificate.stabilized());
    let stab = full.certificate.stabilization_degree;
    assert_eq!(stab, 2);
    for period in 1..=6 {
        let t = truncate(Arc::clone(&r), period).unwrap();
        let out = find_algebra_generators(&t, period * stab + 2 * period).unwrap();
        assert!(out.certificate.stabilized(), "period {period}");
        assert!(out.generators.degrees().iter().all(|d| d % period == 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_preserves_slices(a in 0i64..=3, p in -2i64..=2, period in 1i64..=3) {
        let x = examples::projective_space(2);
        let d = CartierDivisor::from_i64s(&x, &[0, 0, a]).unwrap();
        let l = CartierDivisor::from_i64s(&x, &[0, 0, 1]).unwrap();
        let m: Arc<dyn GradedModule> = Arc::new(divisorial_module(&x, &d, &l, p).unwrap());
        let parts = decompose(Arc::clone(&m), period).unwrap();
        for k in p - 1..=p + 8 {
            let total: usize = parts.iter().map(|c| c.slice(k).unwrap().dimension()).sum();
            let expected = if k >= p { binomial(a + k + 2, 2) } else { 0 };
            prop_assert_eq!(total, expected);
            prop_assert_eq!(m.slice(k).unwrap().dimension(), expected);
        }
        for (i, c) in parts.into_iter().enumerate() {
            let i = i as i64;
            let r = reindex_component(Arc::new(c), period, i, p).unwrap();
            // smallest q with q·I + i ≥ p, by search
            let q = (-20..).find(|q| q * period + i >= p).unwrap();
            prop_assert_eq!(r.offset(), q);
            for n in q..=q + 4 {
                prop_assert_eq!(
                    r.slice(n).unwrap().dimension(),
                    m.slice(n * period + i).unwrap().dimension()
                );
            }
            prop_assert_eq!(r.slice(q - 1).unwrap().dimension(), 0);
        }
    }

    #[test]
    fn seeded_search_is_idempotent(c0 in 0i64..=2, c1 in 0i64..=2, c2 in 1i64..=2) {
        let x = examples::p1_x_p1();
        let l = CartierDivisor::from_i64s(&x, &[c0, c1, c2, 0]).unwrap();
        let r = divisorial_algebra(&x, &l).unwrap();
        let first = find_algebra_generators(&*r, 5).unwrap();
        let again = find_algebra_generators_seeded(&*r, 5, &first.generators).unwrap();
        prop_assert_eq!(again.new_generator_count(), 0);
        prop_assert_eq!(again.generators.len(), first.generators.len());
    }

    #[test]
    fn offset_changes_keep_slices_and_verdicts(a in -1i64..=2, p in -1i64..=2, q in -1i64..=2) {
        let x = examples::projective_space(2);
        let d = CartierDivisor::from_i64s(&x, &[a, 0, 0]).unwrap();
        let l = CartierDivisor::from_i64s(&x, &[0, 0, 1]).unwrap();
        let r = divisorial_algebra(&x, &l).unwrap();
        let m = divisorial_module(&x, &d, &l, p).unwrap();
        let n = change_offset(&m, q).unwrap();
        prop_assert_eq!(n.offset(), q);
        let hi = p.max(q) + 5;
        for k in p.max(q)..=hi {
            prop_assert_eq!(m.slice(k).unwrap().dimension(), n.slice(k).unwrap().dimension());
        }
        // over a polynomial ring, M^q is generated in degree max(q, first nonzero degree)
        let bound = hi + 2;
        let gm = find_module_generators(&m, &*r, bound).unwrap();
        let gn = find_module_generators(&n, &*r, bound).unwrap();
        prop_assert!(gm.certificate.stabilized());
        prop_assert!(gn.certificate.stabilized());
        let first = (q..).find(|&k| binomial(a + k + 2, 2) > 0).unwrap();
        prop_assert_eq!(gn.generators.degrees(), vec![first; binomial(a + first + 2, 2)]);
    }

    #[test]
    fn found_generators_satisfy_the_counting_bound(a in 0i64..=2, b in 0i64..=2, p in 0i64..=2) {
        let x = examples::blowup_p2();
        let d = CartierDivisor::from_i64s(&x, &[a, 0, b, 0]).unwrap();
        let l = CartierDivisor::from_i64s(&x, &[0, 0, 1, 1]).unwrap();
        let r = divisorial_algebra(&x, &l).unwrap();
        let m = divisorial_module(&x, &d, &l, p).unwrap();
        let bound = p + 5;
        let out = find_module_generators(&m, &*r, bound).unwrap();
        let h_alg = HilbertFunction::from_pairs(
            algebra_dims(&*r, 0, bound).unwrap().into_iter().map(|(k, n)| (k, n as u64)),
        );
        let h_mod = HilbertFunction::from_pairs(
            slice_dims(&m, p, bound).unwrap().into_iter().map(|(k, n)| (k, n as u64)),
        );
        let check = counting_bound_check(&out.generators.degrees(), &h_alg, &h_mod, p..=bound).unwrap();
        prop_assert!(check.holds, "{:?}", check.first_failure);
    }
}
