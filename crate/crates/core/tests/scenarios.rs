mod common;

use analogic_core::confirmation::{confirm, Strictness};
use analogic_core::exec::Execution;
use analogic_core::model::{ConstraintKind, ConstraintSet, ProbConstraint, SearchConfig, Term};
use analogic_core::prob::{JointDistribution, Proposition, WorldSpace};
use analogic_core::scenario::*;
use common::{dist, mass, weights};
use proptest::prelude::*;

fn corpus(name: &str) -> Scenario {
    load_corpus()
        .unwrap()
        .into_iter()
        .find(|s| s.name() == name)
        .unwrap()
}

fn solve(s: &Scenario) -> JointDistribution {
    s.solve(&SolveOptions::default()).unwrap().distribution
}

fn report(s: &Scenario) -> SchemaReport {
    evaluate_schema(s, &solve(s), Strictness::default()).unwrap()
}

#[test]
fn corpus_contract() {
    let all = load_corpus().unwrap();
    assert_eq!(all.len(), CORPUS_SIZE);
    assert_eq!(all.len(), 6);
    let rw = corpus("riemann_weil");
    let f = &rw.file().roles;
    assert_eq!(
        (
            f.hypothesis.as_str(),
            f.evidence.as_str(),
            f.bridge.as_str()
        ),
        ("R", "W", "G")
    );
    for s in &all {
        assert!(!s.notes().is_empty());
        let r = report(s);
        assert!(r.coherent, "{}", s.name());
        let direct = confirm(&solve(s), &s.roles().evidence, &s.roles().hypothesis, 0.0).unwrap();
        assert_eq!(r.overall.as_ref().unwrap(), &direct, "{}", s.name());
    }
}

#[test]
fn corpus_dir_matches_embedded_corpus() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let from_disk = load_corpus_dir(dir).unwrap();
    let mut a: Vec<_> = from_disk.iter().map(|s| s.file().clone()).collect();
    let mut b: Vec<_> = load_corpus()
        .unwrap()
        .iter()
        .map(|s| s.file().clone())
        .collect();
    a.sort_by(|x, y| x.name.cmp(&y.name));
    b.sort_by(|x, y| x.name.cmp(&y.name));
    assert_eq!(a, b);
}

#[test]
fn riemann_weil_confirms_through_the_bridge() {
    let s = corpus("riemann_weil");
    let d = solve(&s);
    let r = evaluate_schema(&s, &d, Strictness::default()).unwrap();
    assert_eq!(r.analogical, AnalogicalVerdict::Established);
    // R, W, G are bits 0, 1, 2; recompute P(R|W) - P(R) from the weights.
    let w = d.weights();
    let degree = mass(w, 0b1000_1000) / mass(w, 0b1100_1100) - mass(w, 0b1010_1010);
    assert!(degree >= 0.01, "{degree}");
    assert!((r.overall.unwrap().degree - degree).abs() < 1e-12);
    for c in &r.conditions {
        assert!(c.check.established(), "{}", c.label);
    }
}

#[test]
fn dead_bridge_with_irrelevance_gives_zero_degree() {
    let s = corpus("riemann_weil");
    let d = solve(&s).with_marginal(&s.roles().bridge, 0.0).unwrap();
    let r = evaluate_schema(&s, &d, Strictness::default()).unwrap();
    assert_eq!(r.analogical, AnalogicalVerdict::Degenerate);
    assert!(r.overall.unwrap().degree.abs() <= 1e-9);
}

#[test]
fn polya_argument_is_withheld_at_n() {
    let r = report(&corpus("euler_polya"));
    assert_eq!(
        r.analogical,
        AnalogicalVerdict::Withheld {
            failing: vec!["n".into()]
        }
    );
    let degree = r.overall.unwrap().degree;
    assert!(degree > 0.0 && degree <= 0.01, "{degree}");
}

#[test]
fn cauchy_argument_is_established() {
    let r = report(&corpus("euler_cauchy"));
    assert_eq!(r.analogical, AnalogicalVerdict::Established);
    assert!(r.overall.unwrap().confirms);
    assert_eq!(
        r.conditions
            .iter()
            .map(|c| c.label.as_str())
            .collect::<Vec<_>>(),
        ["i", "j", "k", "l"]
    );
}

#[test]
fn baseline_cannot_tell_volume_from_volume_starstar() {
    let (v, vv) = (corpus("area_volume"), corpus("area_volume_starstar"));
    assert_eq!(v.baseline_inputs(), vv.baseline_inputs());
    let (q, delta) = v.baseline_inputs().unwrap();
    assert_eq!(
        symmetry_baseline(q, delta).unwrap(),
        v.baseline_value().unwrap()
    );
    assert_eq!(v.baseline_value(), vv.baseline_value());
    let (rv, rvv) = (report(&v), report(&vv));
    assert_eq!(rv.baseline, rvv.baseline);
    assert!(rv.overall.unwrap().confirms);
    assert!(!rvv.overall.unwrap().confirms);
    assert!(rv.analogical.is_established());
    assert!(!rvv.analogical.is_established());
}

#[test]
fn taylor_series_extension_confirms() {
    let s = corpus("taylor_series");
    let solved = s.solve(&SolveOptions::default()).unwrap();
    let j = &s.roles().bridge;
    assert!((solved.distribution.probability(j).unwrap() - 0.3).abs() <= MARGINAL_TOLERANCE);
    let summary = s.extension_summary(&solved).unwrap();
    assert_eq!(summary.mode, ExtensionMode::Revisionary);
    let r = evaluate_schema(&s, &solved.distribution, Strictness::default()).unwrap();
    assert!(r.analogical.is_established());
    assert!(r.overall.unwrap().confirms);
    assert_eq!(r.conditions[0].label, "e");
}

#[test]
fn entailing_variant_makes_c_trivial() {
    let s = entailing_variant().unwrap();
    let d = solve(&s);
    let r = evaluate_schema(&s, &d, Strictness::default()).unwrap();
    let g_not_r = Proposition::parse(s.space(), "G & !R").unwrap();
    assert_eq!(d.probability(&g_not_r).unwrap(), 0.0);
    assert!(r.conditions[2].check.margin.unwrap().abs() < 1e-12);
    assert!(r.analogical.is_established());
}

#[test]
fn platonic_solids_have_characteristic_two() {
    for s in PLATONIC_SOLIDS {
        assert_eq!(
            euler_characteristic(s.vertices, s.edges, s.faces),
            2,
            "{}",
            s.name
        );
    }
    assert_eq!(euler_characteristic(8, 12, 6), 2);
    assert_eq!(euler_characteristic(4, 6, 4), 2);
    assert_eq!(euler_characteristic(4, 4, 1), 1);
}

#[test]
fn bridge_prior_sweep_endpoints() {
    let s = corpus("riemann_weil");
    let range: SweepRange = "0:1:0.25".parse().unwrap();
    let rows = sweep(
        &s,
        &SweepParam::BridgePrior,
        &range,
        &SolveOptions::default(),
        Strictness::default(),
    )
    .unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0].status, RowStatus::Degenerate);
    assert!(rows[0].degree.unwrap().abs() <= 1e-9);
    assert_eq!(rows[4].status, RowStatus::Degenerate);
    assert!(rows[1..4].iter().all(|r| r.bridge_prior.is_some()));
    let single: SweepRange = "0.2:0.3:5".parse().unwrap();
    assert_eq!(
        sweep(
            &s,
            &SweepParam::BridgePrior,
            &single,
            &SolveOptions::default(),
            Strictness::default()
        )
        .unwrap()
        .len(),
        1
    );
}

#[test]
fn margin_sweep_reports_infeasible_rows() {
    let s = corpus("riemann_weil");
    let opts = SolveOptions {
        max_samples: Some(1_000),
        ..SolveOptions::default()
    };
    let range: SweepRange = "0.05:1:0.95".parse().unwrap();
    let rows = sweep(
        &s,
        &SweepParam::Margin("a".into()),
        &range,
        &opts,
        Strictness::default(),
    )
    .unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].status, RowStatus::Established);
    assert_eq!(rows[1].status, RowStatus::Infeasible);
    assert!(rows[1].degree.is_none());
    assert!(sweep(
        &s,
        &SweepParam::Margin("zz".into()),
        &range,
        &opts,
        Strictness::default()
    )
    .is_err());
}

#[test]
fn errors_name_file_and_field() {
    let text = include_str!("../corpus/riemann_weil.json")
        .replace(r#""hypothesis": "R""#, r#""hypothesis": "Q""#);
    let e = Scenario::from_json_str(&text, "bad.json").unwrap_err();
    assert!(
        matches!(&e, ScenarioError::Field { file, field, .. } if file == "bad.json" && field == "roles.hypothesis"),
        "{e}"
    );

    let text = include_str!("../corpus/riemann_weil.json")
        .replace(r#""condition": "b""#, r#""condition": "z""#);
    let e = Scenario::from_json_str(&text, "bad.json").unwrap_err();
    assert!(e.to_string().contains("distribution.constraints[1]"), "{e}");

    let text = include_str!("../corpus/riemann_weil.json").replace(r#""a": 0.05"#, r#""q": 0.05"#);
    let e = Scenario::from_json_str(&text, "bad.json").unwrap_err();
    assert!(e.to_string().contains("distribution.margins"), "{e}");

    let e = Scenario::from_json_str(r#"{"name": "x", "atoms": 3}"#, "bad.json").unwrap_err();
    assert!(
        matches!(&e, ScenarioError::Json { message, .. } if message.contains("atoms")),
        "{e}"
    );

    let text =
        include_str!("../corpus/riemann_weil.json").replace(r#""bridge": "G""#, r#""bridge": "R""#);
    assert!(Scenario::from_json_str(&text, "bad.json").is_err());

    let e = Scenario::load("/nonexistent/scenario.json").unwrap_err();
    assert!(matches!(e, ScenarioError::Io { .. }));
}

#[test]
fn inline_margins_yield_to_the_margin_map() {
    let text = include_str!("../corpus/riemann_weil.json").replace(
        r#"{ "condition": "a" }"#,
        r#"{ "condition": "a", "margin": 0.3 }"#,
    );
    let s = Scenario::from_json_str(&text, "m.json").unwrap();
    let a = s.constraint_sets()[0]
        .constraints()
        .iter()
        .find(|c| c.label() == Some("a"))
        .unwrap();
    assert_eq!(a.margin(), 0.05);
    let s = s.with_margin("a", 0.2).unwrap();
    let a = s.constraint_sets()[0]
        .constraints()
        .iter()
        .find(|c| c.label() == Some("a"))
        .unwrap();
    assert_eq!(a.margin(), 0.2);
}

/// R, W, G over bits 0, 1, 2.
fn rwg() -> Scenario {
    corpus("riemann_weil")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn established_schema_implies_direct_confirmation(w in weights(8)) {
        let s = rwg();
        let d = dist(s.space(), w);
        let r = evaluate_schema(&s, &d, Strictness::with_margin(1e-9)).unwrap();
        prop_assert!(r.coherent);
        if r.analogical.is_established() {
            prop_assert!(r.overall.unwrap().degree > 0.0);
        }
    }

    #[test]
    fn irrelevance_under_dead_bridge_is_stable(w in weights(8), share in 0.01..0.99f64) {
        let s = rwg();
        let d = dist(s.space(), w);
        let (r, g) = (&s.roles().hypothesis, &s.roles().bridge);
        let ng = g.not();
        let p_ng = d.probability(&ng).unwrap();
        prop_assume!(p_ng > 1e-3);
        let p_r = d.conditional(r, &ng).unwrap();
        // Rebuild the !G block with R independent of W, and P(W | !G) = share.
        let mut nw = d.weights().to_vec();
        for (i, x) in nw.iter_mut().enumerate().take(4) {
            let pr = if i & 1 == 1 { p_r } else { 1.0 - p_r };
            let pw = if i & 2 == 2 { share } else { 1.0 - share };
            *x = p_ng * pr * pw;
        }
        let d2 = JointDistribution::from_unnormalized(s.space(), nw).unwrap();
        let rep = evaluate_schema(&s, &d2, Strictness::default()).unwrap();
        prop_assert!(rep.conditions[3].check.margin.unwrap().abs() <= 1e-10);
    }

    #[test]
    fn conservative_extension_preserves_marginals(w in weights(4), prior in 0.0..=1.0f64) {
        let base = WorldSpace::new(["a", "b"]).unwrap();
        let d = dist(&base, w);
        let spec = BridgeSpec { new_atom: "g".into(), prior, constraints: None, mode: ExtensionMode::Conservative };
        let ext = extend_with_bridge(&d, &spec, &SearchConfig::default(), Execution::Sequential).unwrap();
        let back = ext.distribution.marginal_over(&base).unwrap();
        for (x, y) in back.weights().iter().zip(d.weights()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
        let g = Proposition::atom(ext.distribution.space(), "g").unwrap();
        prop_assert!((ext.distribution.probability(&g).unwrap() - prior).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constrained_conservative_extension_preserves_marginals(w in weights(4), prior in 0.2..0.8f64) {
        let base = WorldSpace::new(["a", "b"]).unwrap();
        let d = dist(&base, w);
        let pa = d.probability(&Proposition::atom(&base, "a").unwrap()).unwrap();
        prop_assume!(pa > 0.1 && pa < 0.9);
        let ext_space = base.extended("g").unwrap();
        let (a, g) = (Proposition::atom(&ext_space, "a").unwrap(), Proposition::atom(&ext_space, "g").unwrap());
        let c = ProbConstraint::new(ConstraintKind::CondGtProb, Term::cond(&a, &g).unwrap(), Term::prob(&a), 0.01).unwrap();
        let spec = BridgeSpec {
            new_atom: "g".into(),
            prior,
            constraints: Some(ConstraintSet::new(vec![c.clone()]).unwrap()),
            mode: ExtensionMode::Conservative,
        };
        let ext = extend_with_bridge(&d, &spec, &SearchConfig::default(), Execution::Parallel).unwrap();
        prop_assert!(c.is_satisfied(&ext.distribution));
        prop_assert!(ext.marginal_shift <= 1e-10);
        prop_assert!((ext.distribution.probability(&g).unwrap() - prior).abs() <= 1e-10);
    }
}
