use proptest::prelude::*;

use sbfs::domains::InstanceSpec;
use sbfs::dsl::{parse_problem, parse_problem_bytes, serialize_plan, serialize_problem};
use sbfs::model::{
    Action, Cmp, Constraint, ControlValuation, ControlVarSpec, Decision, Effect, Expr, Problem, State, VarRef,
};

const NUMS: usize = 3;
const CONTROLS: usize = 2;
const BOOLS: usize = 2;

fn constant() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-1000i32..1000).prop_map(f64::from),
        (-1e6f64..1e6),
        Just(1e-7),
        Just(0.1),
        Just(-2.5e12),
    ]
}

/// Expressions over state variables, and over controls when `controls`.
fn expr(controls: bool) -> impl Strategy<Value = Expr> {
    let ctl = if controls { CONTROLS } else { NUMS };
    let leaf = prop_oneof![
        constant().prop_map(Expr::Const),
        (0..NUMS).prop_map(|i| Expr::Var(VarRef::Num(i))),
        (0..ctl).prop_map(move |i| if controls { Expr::Var(VarRef::Control(i)) } else { Expr::Var(VarRef::Num(i)) }),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            inner.clone().prop_map(Expr::neg),
            (inner, 2u32..4).prop_map(|(a, k)| Expr::pow(a, k)),
        ]
    })
}

fn cmp() -> impl Strategy<Value = Cmp> {
    prop_oneof![Just(Cmp::Lt), Just(Cmp::Le), Just(Cmp::Eq), Just(Cmp::Ge), Just(Cmp::Gt)]
}

fn constraint(controls: bool) -> impl Strategy<Value = Constraint> {
    let leaf = prop_oneof![
        (0..BOOLS, any::<bool>()).prop_map(|(i, v)| Constraint::BoolEq(i, v)),
        (expr(controls), cmp()).prop_map(|(e, c)| Constraint::compare(e, c)),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..3).prop_map(Constraint::And),
            prop::collection::vec(inner.clone(), 1..3).prop_map(Constraint::Or),
            inner.prop_map(Constraint::not),
        ]
    })
}

fn action(i: usize) -> impl Strategy<Value = Action> {
    (
        constraint(true),
        prop::collection::btree_map(0..BOOLS, any::<bool>(), 0..2),
        prop::collection::btree_map(0..NUMS, expr(true), 0..3),
    )
        .prop_map(move |(pre, bools, nums)| {
            Action::new(
                format!("act-{i}"),
                pre,
                Effect { bools: bools.into_iter().collect(), nums: nums.into_iter().collect() },
            )
        })
}

fn problem() -> impl Strategy<Value = Problem> {
    (
        prop::collection::vec(any::<bool>(), BOOLS),
        prop::collection::vec(constant(), NUMS),
        prop::collection::vec((-50i64..0, 0i64..50), CONTROLS),
        (action(0), action(1), action(2)),
        constraint(false),
    )
        .prop_map(|(bools, nums, ctl, (a0, a1, a2), goal)| Problem {
            name: "random".into(),
            bools: (0..BOOLS).map(|i| format!("b{i}")).collect(),
            nums: (0..NUMS).map(|i| format!("x{i}")).collect(),
            controls: ctl.iter().enumerate().map(|(i, (l, u))| ControlVarSpec::new(format!("u{i}"), *l, *u)).collect(),
            actions: vec![a0, a1, a2],
            init: State::new(bools, nums),
            goal,
        })
}

fn spec() -> impl Strategy<Value = String> {
    prop_oneof![
        (2i64..8, 8i64..30, 1i64..4).prop_map(|(n, m, u)| format!("counters n={n} max_val={m} u_max={u}")),
        (1i64..4, 1i64..6, 10i64..120, 0i64..50)
            .prop_map(|(b, p, s, seed)| format!("sailing boats={b} persons={p} spread={s} seed={seed}")),
        (1i64..4, 1i64..6, 1i64..10, 0i64..50).prop_map(|(g, b, grid, seed)| {
            format!("block-grouping blocks={} groups={g} grid={grid} seed={seed}", g + b)
        }),
        (1i64..8, 1i64..6, 0i64..50).prop_map(|(g, p, seed)| format!("drone grid={g} points={p} seed={seed}")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_problems_round_trip(p in problem()) {
        let text = serialize_problem(&p);
        let back = parse_problem(&text).map_err(|d| TestCaseError::fail(format!("{d:?}\n{text}")))?;
        prop_assert_eq!(serialize_problem(&back), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn generated_instances_round_trip(s in spec()) {
        let spec: InstanceSpec = s.parse().unwrap();
        let p = spec.generate().unwrap();
        prop_assert_eq!(parse_problem(&serialize_problem(&p)).unwrap(), p.clone());
        prop_assert_eq!(spec.generate().unwrap(), p);
        let id: InstanceSpec = InstanceSpec::from_id(&spec.id()).unwrap();
        prop_assert_eq!(id, spec);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        match parse_problem_bytes(&bytes) {
            Ok(p) => prop_assert_eq!(parse_problem(&serialize_problem(&p)).unwrap(), p),
            Err(d) => prop_assert!(!d.is_empty()),
        }
    }

    #[test]
    fn plan_text_lists_every_step(steps in prop::collection::vec((0usize..3, -50.0f64..50.0, -50.0f64..50.0), 0..20)) {
        let p = parse_problem(include_str!("../../../problems/counters-2.problem")).unwrap();
        let plan: Vec<Decision> = steps
            .iter()
            .map(|&(a, u, _)| Decision { action: a, controls: ControlValuation(vec![u]) })
            .collect();
        let text = serialize_plan(&plan, &p);
        let lines: Vec<&str> = text.lines().collect();
        prop_assert_eq!(lines[0], format!("; plan steps={}", plan.len()));
        prop_assert_eq!(lines.len(), plan.len() + 1);
        for (i, (line, d)) in lines[1..].iter().zip(&plan).enumerate() {
            let prefix = format!("{i}: {} u=", p.actions[d.action].name);
            prop_assert!(line.starts_with(&prefix));
            let v: f64 = line[prefix.len()..].parse().unwrap();
            prop_assert_eq!(v, d.controls.0[0]);
        }
    }
}
