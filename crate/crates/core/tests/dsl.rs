use std::fs;

use proptest::prelude::*;

use profend::dsl::{
    load, parse, ActionExpr, AnalysisKind, Arg, DslError, GroupExpr, HomExpr, Pos, Scenario, Stmt,
    StmtKind, ValidateConfig, Value, Word, OPTION_KEYS,
};
use profend::group::cyclic;
use profend::report::{demo_scenario, run, RunConfig, Status};
use profend::tower::TowerKind;

const NAMES: [&str; 7] = ["G", "H", "K", "f", "phi", "Lam", "T2"];

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES.to_vec()).prop_map(String::from)
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(
        (0usize..4, (-3i64..5).prop_filter("non-zero", |e| *e != 0)),
        0..3,
    )
    .prop_map(Word)
}

fn group_expr() -> impl Strategy<Value = GroupExpr> {
    let leaf = prop_oneof![
        (1u64..50).prop_map(GroupExpr::Cyclic),
        (prop::sample::select(vec![2u64, 3, 5]), 1u32..4)
            .prop_map(|(p, k)| GroupExpr::UnitsMod(p, k)),
        (1u64..10).prop_map(GroupExpr::Dihedral),
        (1u64..5).prop_map(GroupExpr::Symmetric),
        (1u64..5).prop_map(GroupExpr::Alternating),
        Just(GroupExpr::Quaternion),
        Just(GroupExpr::Table("tables/z6.txt".into())),
        (name(), prop::collection::vec(word(), 0..3)).prop_map(|(n, w)| GroupExpr::Subgroup(n, w)),
        name().prop_map(GroupExpr::Named),
    ];
    let action = prop_oneof![
        Just(ActionExpr::Invert),
        Just(ActionExpr::MultAction),
        Just(ActionExpr::Trivial),
        prop::collection::vec((0usize..3, name()), 1..3).prop_map(ActionExpr::Map),
    ];
    leaf.prop_recursive(2, 6, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| GroupExpr::Product(Box::new(a), Box::new(b))),
            (inner.clone(), inner, action.clone()).prop_map(|(a, b, act)| GroupExpr::Semidirect(
                Box::new(a),
                Box::new(b),
                act
            )),
        ]
    })
}

fn hom_expr() -> impl Strategy<Value = HomExpr> {
    prop_oneof![
        Just(HomExpr::Identity),
        Just(HomExpr::Trivial),
        (-9i64..10).prop_map(HomExpr::ScaleFirst),
        (0usize..3, -9i64..10).prop_map(|(c, m)| HomExpr::Scale(c, m)),
        (0usize..3).prop_map(HomExpr::ProjectAway),
        word().prop_map(HomExpr::Conj),
        prop::collection::vec((0usize..3, word()), 1..4).prop_map(HomExpr::Map),
        prop::collection::vec(name(), 2..4).prop_map(HomExpr::Compose),
    ]
}

fn tower_kind() -> impl Strategy<Value = TowerKind> {
    let leaf = prop_oneof![
        (2u64..8).prop_map(TowerKind::Zp),
        (2u64..8, 1usize..4).prop_map(|(p, n)| TowerKind::Zpn(p, n)),
        (2u64..8).prop_map(TowerKind::UnitsSemidirect),
        Just(TowerKind::S3TimesZ2),
        Just(TowerKind::Trivial),
        Just(TowerKind::ConstantS3),
    ];
    leaf.prop_recursive(1, 2, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| TowerKind::Product(Box::new(a), Box::new(b)))
    })
}

fn arg() -> impl Strategy<Value = Arg> {
    prop_oneof![
        name().prop_map(Arg::Name),
        (0i64..100).prop_map(Arg::Int),
        Just(Arg::None)
    ]
}

fn value() -> impl Strategy<Value = Value> {
    prop_oneof![
        (-5i64..5000).prop_map(Value::Int),
        "[a-z0-9 =.-]{0,12}".prop_map(Value::Str),
        name().prop_map(Value::Name),
    ]
}

fn stmt() -> impl Strategy<Value = StmtKind> {
    prop_oneof![
        (name(), group_expr()).prop_map(|(name, expr)| StmtKind::Group { name, expr }),
        (name(), name(), hom_expr()).prop_map(|(name, group, expr)| StmtKind::Endo {
            name,
            group,
            expr
        }),
        (
            name(),
            name(),
            prop::collection::vec(name(), 1..4),
            any::<bool>()
        )
            .prop_map(|(name, group, members, commutative)| StmtKind::Semigroup {
                name,
                group,
                members,
                commutative
            }),
        (name(), tower_kind(), 1usize..6).prop_map(|(name, builder, depth)| StmtKind::Tower {
            name,
            builder,
            depth
        }),
        (
            prop::sample::select(AnalysisKind::ALL.to_vec()),
            prop::collection::vec(arg(), 0..4)
        )
            .prop_map(|(kind, args)| StmtKind::Analyze { kind, args }),
        (prop::sample::select(OPTION_KEYS.to_vec()), value()).prop_map(|(key, value)| {
            StmtKind::Set {
                key: key.into(),
                value,
            }
        }),
    ]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    prop::collection::vec(stmt(), 0..12).prop_map(|kinds| Scenario {
        statements: kinds
            .into_iter()
            .map(|kind| Stmt {
                kind,
                pos: Pos::default(),
            })
            .collect(),
    })
}

proptest! {
    #[test]
    fn display_then_parse_is_identity(s in scenario()) {
        let text = s.to_string();
        let back = parse(&text).map_err(|d| TestCaseError::fail(format!("{text}\n{}", d[0])))?;
        prop_assert_eq!(back, s);
    }

    #[test]
    fn parser_never_panics(src in "[a-z_(){},=>^*0-9 \"\n#-]{0,80}") {
        if let Err(diags) = parse(&src) {
            prop_assert!(!diags.is_empty());
            let lines = src.lines().count().max(1);
            for d in diags {
                prop_assert!(d.pos.line >= 1 && d.pos.line <= lines + 1);
                prop_assert!(d.pos.column >= 1);
            }
        }
    }
}

#[test]
fn table_file_is_read_relative_to_base_dir() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("tables")).unwrap();
    let rows = cyclic(6).unwrap().table_rows();
    let text: String = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect();
    fs::write(dir.path().join("tables/z6.txt"), text).unwrap();

    let src = "group T = table(\"tables/z6.txt\")\nendo f on T = map {g0 -> g0^2}\nanalyze theorem_a(T, f)\n";
    let config = ValidateConfig {
        base_dir: dir.path().to_path_buf(),
        order_guard: None,
    };
    let res = load(src, &config).unwrap();
    assert_eq!(res.group("T").unwrap().order(), 6);
    let report = run(&res, &RunConfig::default());
    assert_eq!(report.analyses[0].status, Status::Pass);
    assert_eq!(report.analyses[0].details["con"], 2);
    assert_eq!(report.analyses[0].details["stable_image"], 3);
}

#[test]
fn missing_table_file_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let src = "\ngroup T = table(\"absent.txt\")\n";
    let config = ValidateConfig {
        base_dir: dir.path().to_path_buf(),
        order_guard: None,
    };
    let err = load(src, &config).unwrap_err();
    assert_eq!(err.pos().map(|p| p.line), Some(2));
    assert!(matches!(err, DslError::Invalid { .. }), "{err:?}");
}

#[test]
fn non_group_table_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "0 1\n0 1\n").unwrap();
    let config = ValidateConfig {
        base_dir: dir.path().to_path_buf(),
        order_guard: None,
    };
    let err = load("group B = table(\"bad.txt\")", &config).unwrap_err();
    assert!(matches!(err, DslError::Group { .. }), "{err:?}");
}

fn without_version(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("version");
    v
}

#[test]
fn demo_matches_golden_report() {
    let res = load(&demo_scenario(3, 3), &ValidateConfig::default()).unwrap();
    let json = run(&res, &RunConfig::default()).to_json();
    let golden = include_str!("golden/demo_p3_d3.json");
    assert_eq!(without_version(&json), without_version(golden));
}

#[test]
fn seed_is_recorded_and_output_is_stable() {
    let src = "set seed = 11\ngroup D = dihedral(5)\nanalyze shrinkind(D, 300)\n";
    let res = load(src, &ValidateConfig::default()).unwrap();
    let a = run(&res, &RunConfig::default());
    let b = run(
        &res,
        &RunConfig {
            jobs: 3,
            ..RunConfig::default()
        },
    );
    assert_eq!(a.seed, 11);
    assert_eq!(a.to_json(), b.to_json());
    let c = run(
        &res,
        &RunConfig {
            seed: Some(12),
            ..RunConfig::default()
        },
    );
    assert_eq!(c.seed, 12);
}
