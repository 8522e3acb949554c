use divalg_core::induction::{theorem34_pipeline, Decomposition, PipelineOptions};
use divalg_core::toric::examples;
use divalg_core::{CartierDivisor, ToricVariety};
use proptest::prelude::*;

fn prime(x: &ToricVariety, i: usize) -> CartierDivisor {
    CartierDivisor::prime(x, i).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

#[test]
fn every_order_gives_the_same_module() {
    let x = examples::projective_space(2);
    let dec = Decomposition::new(
        &x,
        vec![(1, prime(&x, 0)), (1, prime(&x, 1)), (1, prime(&x, 2))],
    )
    .unwrap();
    let d = prime(&x, 0);
    let perms = permutations(3);
    assert_eq!(perms.len(), 6);
    let mut reference = None;
    for order in perms {
        let mut opts = PipelineOptions::new(4);
        opts.order = Some(order.clone());
        let trace = theorem34_pipeline(&x, &dec, &d, 0, &opts).unwrap();
        assert!(trace.matches_direct, "order {order:?}");
        let first = trace.steps.iter().map(|s| s.s).next();
        assert_eq!(first, Some(order[0]));
        match &reference {
            None => reference = Some(trace.direct_generator_degrees.clone()),
            Some(r) => assert_eq!(r, &trace.direct_generator_degrees),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn steps_are_exact_and_descent_is_short(
        which in 0usize..3,
        l0 in 1i64..=2,
        l1 in 0i64..=1,
        d0 in 0i64..=1,
        p in 0i64..=1,
    ) {
        let (x, a, b) = match which {
            0 => (examples::projective_space(2), 0, 1),
            1 => (examples::p1_x_p1(), 0, 1),
            _ => (examples::blowup_p2(), examples::BLOWUP_LINE, examples::BLOWUP_EXCEPTIONAL),
        };
        let mut parts = vec![(l0, prime(&x, a))];
        if l1 > 0 {
            parts.push((l1, prime(&x, b)));
        }
        let dec = Decomposition::new(&x, parts).unwrap();
        let d = prime(&x, a).scale_i64(d0);
        let bound = p + 3;
        let trace = theorem34_pipeline(&x, &dec, &d, p, &PipelineOptions::new(bound)).unwrap();
        prop_assert_eq!(trace.steps.len() as i64, l0 + l1);
        for step in &trace.steps {
            for row in &step.exactness {
                prop_assert_eq!(row.middle, row.kernel + row.image, "degree {}", row.degree);
            }
        }
        prop_assert!(trace.matches_direct);
        let desc = trace.descent.as_ref().expect("descent report");
        prop_assert!(desc.max_steps <= bound - p);
    }
}
