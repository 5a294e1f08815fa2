//! Property suites for the invariants the crate is built on: canonical
//! tower arithmetic that agrees with plain floats wherever floats exist,
//! grammar round trips, strictly increasing maximum modulus, rigorous
//! series enclosures, and inverse round trips.

use proptest::collection::vec;
use proptest::prelude::*;

use pqgrowth::{
    comparison_metric, inverse_max_modulus, parse::parse, pq_order, EntireExpr, EstimatorParams,
    GrowthClass, GrowthObject, MaxModulus, OracleParams, SeriesOracle, TowerReal,
};

/// Positive constants whose `Display` text reparses to the same bits (any
/// finite f64 qualifies; these keep the printed sources short).
fn clean_const() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.125),
        Just(0.5),
        Just(1.0),
        Just(1.5),
        Just(2.0),
        Just(2.5),
        Just(3.0),
        Just(7.25),
        Just(10.0),
        0.001..1000.0,
    ]
}

/// ASTs in the parser's structural image: no `Scale` (its printed form
/// reparses as a `Product`), child lists of length >= 2, and every node
/// non-constant so the trees double as valid growth objects.
fn parser_image_expr() -> impl Strategy<Value = EntireExpr> {
    let leaf = prop_oneof![
        Just(EntireExpr::Var),
        (1u32..=9).prop_map(EntireExpr::Monomial),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        let constant = clean_const().prop_map(EntireExpr::Const);
        // First child always non-constant; the rest may be constants.
        let extra = prop_oneof![3 => inner.clone(), 1 => constant];
        prop_oneof![
            (inner.clone(), vec(extra.clone(), 1..3)).prop_map(|(first, rest)| {
                let mut children = vec![first];
                children.extend(rest);
                EntireExpr::Sum(children)
            }),
            (inner.clone(), vec(extra, 1..3)).prop_map(|(first, rest)| {
                let mut children = vec![first];
                children.extend(rest);
                EntireExpr::Product(children)
            }),
            (1u32..=3, inner.clone())
                .prop_map(|(k, child)| EntireExpr::ExpIter(k, Box::new(child))),
            (inner.clone(), inner).prop_map(|(f, g)| EntireExpr::compose(f, g)),
        ]
    })
}

/// Shallow expressions the series oracle handles comfortably at small radii.
fn oracle_expr() -> impl Strategy<Value = EntireExpr> {
    let leaf = prop_oneof![
        Just(EntireExpr::Var),
        (1u32..=4).prop_map(EntireExpr::Monomial),
    ];
    leaf.prop_recursive(2, 12, 3, |inner| {
        let constant = clean_const().prop_map(EntireExpr::Const);
        let extra = prop_oneof![3 => inner.clone(), 1 => constant];
        prop_oneof![
            (inner.clone(), vec(extra.clone(), 1..3)).prop_map(|(first, rest)| {
                let mut children = vec![first];
                children.extend(rest);
                EntireExpr::Sum(children)
            }),
            (inner.clone(), vec(extra, 1..3)).prop_map(|(first, rest)| {
                let mut children = vec![first];
                children.extend(rest);
                EntireExpr::Product(children)
            }),
            inner.prop_map(|child| EntireExpr::ExpIter(1, Box::new(child))),
        ]
    })
}

#[derive(Clone, Debug)]
enum TowerOp {
    Add(f64),
    Mul(f64),
    Pow(f64),
    Exp,
    Log,
}

fn tower_op() -> impl Strategy<Value = TowerOp> {
    prop_oneof![
        (0.01f64..1.0e4).prop_map(TowerOp::Add),
        (0.01f64..1.0e4).prop_map(TowerOp::Mul),
        (0.3f64..2.5).prop_map(TowerOp::Pow),
        Just(TowerOp::Exp),
        Just(TowerOp::Log),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn printed_expressions_reparse_to_the_same_tree(e in parser_image_expr()) {
        let text = e.to_string();
        let back = parse(&text);
        prop_assert_eq!(back.as_ref().ok(), Some(&e), "printed source: {}", text);
    }

    #[test]
    fn exp_log_round_trips_preserve_the_value(
        seed in 0.001f64..1.0e8,
        lift in 0u32..=2,
        k in 0u32..=3,
    ) {
        let t = TowerReal::from_f64(seed).unwrap().exp_k(lift);
        let back = t.exp_k(k).log_k(k).unwrap();
        prop_assert!(
            comparison_metric(&t, &back) <= 1.0e-9,
            "exp_k/log_k drifted: {} vs {}",
            t,
            back
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn tower_arithmetic_agrees_with_floats(
        start in 0.5f64..1.0e6,
        ops in vec(tower_op(), 1..24),
    ) {
        let mut t = TowerReal::from_f64(start).unwrap();
        let mut x = start;
        for op in &ops {
            // Keep the float shadow well inside f64 range; an op that would
            // leave it is skipped on both sides.
            let next = match op {
                TowerOp::Add(v) => x + v,
                TowerOp::Mul(v) => x * v,
                TowerOp::Pow(s) => x.powf(*s),
                TowerOp::Exp => x.exp(),
                TowerOp::Log => x.ln(),
            };
            if !next.is_finite() || !(1.0e-12..1.0e290).contains(&next) {
                continue;
            }
            t = match op {
                TowerOp::Add(v) => t.add(&TowerReal::from_f64(*v).unwrap()).unwrap(),
                TowerOp::Mul(v) => t.mul(&TowerReal::from_f64(*v).unwrap()).unwrap(),
                TowerOp::Pow(s) => t.pow_scalar(*s).unwrap(),
                TowerOp::Exp => t.exp1(),
                TowerOp::Log => t.log1().unwrap(),
            };
            x = next;
        }
        let got = t.to_real().unwrap();
        prop_assert!(
            (got - x).abs() <= 1.0e-12 * x.abs().max(1.0),
            "tower gave {got}, floats gave {x}"
        );
    }

    #[test]
    fn canonical_form_is_idempotent_and_banded(
        level in 0u32..=4,
        mantissa in -4.0f64..12.0,
    ) {
        let t = TowerReal::new(level, mantissa).unwrap();
        if t.level() >= 1 {
            prop_assert!(t.mantissa() >= 1.0 && t.mantissa() < std::f64::consts::E);
        }
        let again = TowerReal::new(t.level(), t.mantissa()).unwrap();
        prop_assert_eq!(t.level(), again.level());
        prop_assert_eq!(t.mantissa(), again.mantissa());
        // The float image, when it exists, reconstructs the same canonical form.
        if let Some(v) = t.float() {
            let back = TowerReal::from_f64(v).unwrap();
            prop_assert!(
                comparison_metric(&t, &back) <= 1.0e-9,
                "float image {} disagrees with {}",
                v,
                t
            );
        }
    }

    #[test]
    fn order_matches_float_order_and_survives_exp(
        a in 1.0e-6f64..1.0e12,
        b in 1.0e-6f64..1.0e12,
        k in 0u32..=3,
    ) {
        let ta = TowerReal::from_f64(a).unwrap().exp_k(k);
        let tb = TowerReal::from_f64(b).unwrap().exp_k(k);
        prop_assert_eq!(ta.partial_cmp(&tb), a.partial_cmp(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn max_modulus_is_strictly_increasing(
        e in parser_image_expr(),
        r1 in 0.5f64..20.0,
        factor in 1.02f64..3.0,
    ) {
        let obj = GrowthObject::from_expr(e).unwrap();
        let lo = obj.max_modulus(&TowerReal::from_f64(r1).unwrap()).unwrap();
        let hi = obj.max_modulus(&TowerReal::from_f64(r1 * factor).unwrap()).unwrap();
        prop_assert!(lo < hi, "M({r1}) = {lo} !< M({}) = {hi}", r1 * factor);
    }

    #[test]
    fn scale_nodes_print_to_an_equivalent_function(
        c in 0.125f64..10.0,
        e in parser_image_expr(),
        r in 0.5f64..8.0,
    ) {
        let scaled = EntireExpr::Scale(c, Box::new(e));
        let text = scaled.to_string();
        let reparsed = parse(&text).unwrap();
        let direct = GrowthObject::from_expr(scaled).unwrap();
        let round = GrowthObject::from_expr(reparsed).unwrap();
        let radius = TowerReal::from_f64(r).unwrap();
        let a = direct.max_modulus(&radius).unwrap();
        let b = round.max_modulus(&radius).unwrap();
        prop_assert!(
            comparison_metric(&a, &b) <= 1.0e-12,
            "printed source: {} gave {} vs {}",
            text,
            a,
            b
        );
    }

    #[test]
    fn inverse_round_trips_within_tolerance(
        e in parser_image_expr(),
        u in 3.0f64..40.0,
        lift in 0u32..=2,
    ) {
        let obj = GrowthObject::from_expr(e).unwrap();
        let target = TowerReal::from_f64(u).unwrap().exp_k(lift);
        match inverse_max_modulus(&obj, &target, 1.0e-9) {
            Ok(radius) => {
                let back = obj.max_modulus(&radius).unwrap();
                prop_assert!(
                    comparison_metric(&back, &target) <= 1.0e-9,
                    "M(M^-1({})) = {}",
                    target,
                    back
                );
            }
            // Targets at or below the value at the origin have no preimage;
            // nothing to check for this draw.
            Err(pqgrowth::Error::Domain(_)) => {}
            Err(other) => return Err(TestCaseError::fail(format!("inverse failed: {other}"))),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_interval_contains_the_exact_value(
        e in oracle_expr(),
        r in 0.3f64..1.2,
    ) {
        let exact = GrowthObject::from_expr(e.clone())
            .unwrap()
            .max_modulus(&TowerReal::from_f64(r).unwrap())
            .unwrap()
            .to_real()
            .unwrap();
        let oracle = SeriesOracle::new(e, OracleParams::default()).unwrap();
        match oracle.max_modulus_interval(r) {
            Ok(interval) => {
                let slack = 1.0e-12 * exact.max(1.0);
                prop_assert!(
                    interval.lo - slack <= exact && exact <= interval.hi + slack,
                    "M({r}) = {exact} outside [{}, {}]",
                    interval.lo,
                    interval.hi
                );
            }
            // The draw sits outside the oracle's guard radius; nothing to
            // compare against.
            Err(pqgrowth::Error::GuardRadius(_)) => {}
            Err(other) => return Err(TestCaseError::fail(format!("oracle failed: {other}"))),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn order_estimates_are_stable_under_grid_shifts(
        k in 1u32..=2,
        n in 2u32..=6,
        stretch in 1.0f64..2.5,
    ) {
        let obj = GrowthObject::from_expr(EntireExpr::ExpIter(
            k,
            Box::new(EntireExpr::Monomial(n)),
        ))
        .unwrap();
        let base = EstimatorParams::default();
        let mut shifted = base.clone();
        shifted.grid.t0 *= stretch;
        for params in [&base, &shifted] {
            let est = pq_order(&obj, k + 1, 1, params).unwrap();
            prop_assert_eq!(est.class, GrowthClass::Finite);
            prop_assert!(
                (est.limsup - n as f64).abs() <= 1.0e-6,
                "rho = {} for exp^[{k}](z^{n}) with t0 = {}",
                est.limsup,
                params.grid.t0
            );
        }
    }
}
