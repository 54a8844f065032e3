use std::fmt::Write;

use analogic_core::confirmation::ConditionCheck;
use analogic_core::prob::DistributionRecord;

use crate::report::*;

fn num(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:+.6}"),
        None => "undefined".into(),
    }
}

fn status(c: &ConditionCheck) -> &'static str {
    match (c.applicable, c.holds, c.at_boundary) {
        (false, _, _) => "undefined",
        (true, true, true) => "holds (boundary)",
        (true, true, false) => "holds",
        (true, false, _) => "fails",
    }
}

/// `A !B C`-style label of world `w`; atom `i` is bit `i`.
fn world(atoms: &[String], w: usize) -> String {
    atoms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if w >> i & 1 == 1 {
                a.clone()
            } else {
                format!("!{a}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn distribution(s: &mut String, d: &DistributionRecord) {
    let labels: Vec<String> = (0..d.weights.len()).map(|w| world(&d.atoms, w)).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(0);
    for (l, p) in labels.iter().zip(&d.weights) {
        let _ = writeln!(s, "  {l:<width$}  {p:.9}");
    }
}

pub(crate) fn check(r: &RunReport<CheckResult>) -> String {
    let rep = &r.results.report;
    let mut s = String::new();
    let _ = writeln!(s, "scenario {} ({})", rep.scenario, rep.schema);
    let _ = writeln!(
        s,
        "roles: hypothesis {}, evidence {}, bridge {}",
        rep.roles.hypothesis, rep.roles.evidence, rep.roles.bridge
    );
    if let Some(seed) = r.results.seed {
        let _ = writeln!(s, "solved with seed {seed}");
    }
    if let Some(x) = &r.results.extension {
        let _ = writeln!(
            s,
            "extension: {} with prior {} ({:?}, marginal shift {:.1e})",
            x.atom, x.prior, x.mode, x.marginal_shift
        );
    }
    let width = rep
        .conditions
        .iter()
        .map(|c| c.statement.len())
        .max()
        .unwrap_or(0);
    let _ = writeln!(
        s,
        "\n  {:<5} {:<width$}  {:>10}  status",
        "cond", "statement", "margin"
    );
    for c in &rep.conditions {
        let _ = writeln!(
            s,
            "  {:<5} {:<width$}  {:>10}  {}",
            c.label,
            c.statement,
            num(c.check.margin),
            status(&c.check)
        );
    }
    let _ = writeln!(s, "\nP({}) = {:.6}", rep.roles.bridge, rep.bridge_prior);
    match &rep.overall {
        Some(v) => {
            let _ = writeln!(
                s,
                "direct: P({h} | {e}) - P({h}) = {:+.6}, {}",
                v.degree,
                if v.confirms {
                    "confirms"
                } else {
                    "does not confirm"
                },
                h = rep.roles.hypothesis,
                e = rep.roles.evidence,
            );
        }
        None => {
            let _ = writeln!(s, "direct: undefined, the evidence has probability 0");
        }
    }
    let _ = write!(s, "analogy: {}", rep.analogical.status());
    if let analogic_core::scenario::AnalogicalVerdict::Withheld { failing } = &rep.analogical {
        let _ = write!(s, " (failing: {})", failing.join(", "));
    }
    let _ = writeln!(s);
    if !rep.extremal_roles.is_empty() {
        let _ = writeln!(s, "extremal roles: {}", rep.extremal_roles.join(", "));
    }
    if let Some(b) = rep.baseline {
        let _ = writeln!(s, "symmetry baseline quotient: {b}");
    }
    s
}

pub(crate) fn fuzz(r: &RunReport<FuzzResult>) -> String {
    let f = &r.results.summary;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "suite {} (seed {}, margin {})",
        r.results.suite,
        r.config.seed.unwrap_or_default(),
        r.config.margin.unwrap_or_default()
    );
    let _ = writeln!(s, "  samples         {}", f.samples);
    let _ = writeln!(s, "  antecedent held {}", f.filtered);
    let _ = writeln!(s, "  violations      {}", f.violations);
    let _ = writeln!(s, "  boundary cases  {}", f.boundary_cases);
    if let Some(m) = f.min_conclusion_margin {
        let _ = writeln!(s, "  min conclusion margin {m:.3e}");
    }
    if let Some(i) = f.first_violation {
        let _ = writeln!(s, "  first violation at sample {i}");
    }
    let _ = writeln!(s, "conclusion judged as {}", r.results.conclusion_relation);
    s
}

pub(crate) fn sweep(r: &RunReport<SweepResult>) -> String {
    let res = &r.results;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "sweep {} over {} = {}",
        res.scenario,
        r.config.param.as_deref().unwrap_or(""),
        r.config.range.as_deref().unwrap_or("")
    );
    let _ = write!(s, "  {:>8}  {:<12}", "value", "status");
    for l in &res.labels {
        let _ = write!(s, "  {l:>10}");
    }
    let _ = writeln!(s, "  {:>10}", "degree");
    for row in &res.rows {
        let _ = write!(s, "  {:>8.4}  {:<12}", row.value, row.status.to_string());
        for c in &row.conditions {
            let _ = write!(
                s,
                "  {:>10}",
                c.map(|x| format!("{x:+.4}")).unwrap_or_else(|| "-".into())
            );
        }
        let _ = writeln!(
            s,
            "  {:>10}",
            row.degree
                .map(|x| format!("{x:+.6}"))
                .unwrap_or_else(|| "-".into())
        );
    }
    let _ = writeln!(s, "wrote {}", res.output);
    s
}

pub(crate) fn counterexample(r: &RunReport<CounterexampleResult>) -> String {
    let c = &r.results;
    let mut s = String::new();
    let _ = writeln!(s, "counterexample at sample {}", c.sample_index);
    distribution(&mut s, &c.distribution);
    for (name, v) in [
        ("P(B | A) - P(B)", &c.a_confirms_b),
        ("P(C | B) - P(C)", &c.b_confirms_c),
        ("P(C | A) - P(C)", &c.a_confirms_c),
    ] {
        let _ = writeln!(s, "{name} = {:+.6}", v.degree);
    }
    let _ = writeln!(s, "\ntransitivity conditions with X = A, Y = B, Z = C:");
    for (name, chk) in c.transitivity.conditions() {
        let _ = writeln!(s, "  ({name:<3}) {:>10}  {}", num(chk.margin), status(chk));
    }
    let _ = writeln!(s, "failing: {}", c.failing_conditions.join(", "));
    s
}

pub(crate) fn find_model(r: &RunReport<FindModelResult>) -> String {
    let res = &r.results;
    let mut s = String::new();
    let _ = writeln!(s, "scenario {}", res.scenario);
    if res.stages.is_empty() {
        let _ = writeln!(s, "no constraints to solve; weights taken from the file");
    }
    for st in &res.stages {
        let origin = match st.winning_sample {
            Some(i) => format!("restart {i}"),
            None => "grid point".into(),
        };
        let _ = writeln!(
            s,
            "\n{} stage: seed {}, {} samples, from {}{}, penalty {:.3e}",
            st.stage,
            st.seed,
            st.samples_used,
            origin,
            if st.refined { " (refined)" } else { "" },
            st.penalty
        );
        let width = st
            .outcomes
            .iter()
            .map(|o| o.statement.len())
            .max()
            .unwrap_or(0);
        for o in &st.outcomes {
            let _ = writeln!(
                s,
                "  {:<width$}  slack {:>10}  {}",
                o.statement,
                num(o.slack),
                if o.satisfied { "ok" } else { "violated" }
            );
        }
    }
    let _ = writeln!(s, "\ndistribution:");
    distribution(&mut s, &res.distribution);
    s
}
