use divalg_core::graded::{
    find_algebra_generators_seeded, find_module_generators, find_module_generators_seeded,
};
use divalg_core::toric::{
    divisorial_algebra, divisorial_module, exact_fg_algebra, exact_fg_module, examples, fix_mov, h0,
};
use divalg_core::{CartierDivisor, CertificateKind, ToricVariety};
use proptest::prelude::*;

fn varieties() -> Vec<(&'static str, ToricVariety)> {
    vec![
        ("P2", examples::projective_space(2)),
        ("P1xP1", examples::p1_x_p1()),
        ("Bl P2", examples::blowup_p2()),
        ("F2", examples::hirzebruch(2)),
    ]
}

fn divisor(x: &ToricVariety, coeffs: &[i64]) -> CartierDivisor {
    CartierDivisor::from_i64s(x, &coeffs[..x.num_rays()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fix_is_monotone_and_mov_keeps_sections(
        which in 0usize..4,
        d in prop::array::uniform4(-1i64..=3),
        e in prop::array::uniform4(0i64..=2),
    ) {
        let (_, x) = &varieties()[which];
        let d = divisor(x, &d);
        let e = divisor(x, &e);
        prop_assume!(h0(x, &d).unwrap() > 0);
        let fd = fix_mov(x, &d).unwrap();
        prop_assert!(fd.fix.is_effective());
        prop_assert_eq!(h0(x, &fd.mov).unwrap(), h0(x, &d).unwrap());
        // |D| + E ⊆ |D + E|, so the fixed part can only shrink relative to Fix D + E
        let fde = fix_mov(x, &d.add(&e)).unwrap();
        prop_assert!(fde.fix.le(&fd.fix.add(&e)), "{} vs {} + {}", fde.fix, fd.fix, e);
        for m in 2..=4 {
            let fm = fix_mov(x, &d.scale_i64(m)).unwrap();
            prop_assert!(fm.fix.le(&fd.fix.scale_i64(m)), "Fix({m}D) = {}", fm.fix);
        }
        // Mov has no fixed part
        prop_assert!(fix_mov(x, &fd.mov).unwrap().fix.is_zero());
    }

    #[test]
    fn effective_nonzero_divisors_have_no_negative_sections(
        which in 0usize..4,
        l in prop::array::uniform4(0i64..=3),
    ) {
        let (_, x) = &varieties()[which];
        let l = divisor(x, &l);
        prop_assume!(!l.is_zero());
        prop_assert_eq!(h0(x, &l.scale_i64(-1)).unwrap(), 0);
    }

    #[test]
    fn exact_algebra_generators_are_complete(
        which in 0usize..4,
        l in prop::array::uniform4(0i64..=2),
    ) {
        let (_, x) = &varieties()[which];
        let l = divisor(x, &l);
        prop_assume!(!l.is_zero());
        let cert = exact_fg_algebra(x, &l).unwrap();
        prop_assert_eq!(cert.kind, CertificateKind::Exact);
        let r = divisorial_algebra(x, &l).unwrap();
        let bound = 2 * cert.stabilization_degree.max(1);
        let out = find_algebra_generators_seeded(&*r, bound, &cert.generators).unwrap();
        prop_assert_eq!(out.new_generator_count(), 0);
    }

    #[test]
    fn exact_module_generators_match_bounded_search(
        which in 0usize..4,
        d in prop::array::uniform4(-1i64..=2),
        l in prop::array::uniform4(0i64..=1),
        p in 0i64..=2,
    ) {
        let (_, x) = &varieties()[which];
        let d = divisor(x, &d);
        let l = divisor(x, &l);
        prop_assume!(!l.is_zero());
        let cert = exact_fg_module(x, &d, &l, p).unwrap();
        prop_assert_eq!(cert.kind, CertificateKind::Exact);
        let r = divisorial_algebra(x, &l).unwrap();
        let m = divisorial_module(x, &d, &l, p).unwrap();
        let bound = 2 * cert.stabilization_degree.max(p + 1);
        let seeded = find_module_generators_seeded(&m, &*r, bound, &cert.generators).unwrap();
        prop_assert_eq!(seeded.new_generator_count(), 0);
        let direct = find_module_generators(&m, &*r, bound).unwrap();
        prop_assert!(direct.certificate.stabilized());
        prop_assert!(direct.generators.max_degree() <= cert.generators.max_degree());
        // monomial generators of a monomial module: the minimal counts coincide
        prop_assert_eq!(direct.generators.len(), cert.generators.len());
    }
}
