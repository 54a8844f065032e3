use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use analogic_core::confirmation::{
    fuzz_corollary, fuzz_theorem, mine_with, EventMode, FuzzConfig, MinerThresholds, Strictness,
    CONCLUSION_RELATION, DEFAULT_WEAK_TOLERANCE,
};
use analogic_core::exec::Execution;
use analogic_core::model::Model;
use analogic_core::prob::DistributionRecord;
use analogic_core::scenario::file::{DistributionSpec, RolesSpec};
use analogic_core::scenario::{
    evaluate_schema, sweep, Scenario, ScenarioFile, SchemaType, SolveOptions, SweepParam,
    SweepRange, SweepRow,
};
use serde::Serialize;

use crate::report::*;
use crate::{
    render, CheckArgs, CliError, Command, CounterexampleArgs, FindModelArgs, FuzzArgs, SolveArgs,
    SweepArgs,
};

/// First line of every sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "# analogic-sweep v1";

pub(crate) fn dispatch(
    cmd: &Command,
    exec: Execution,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match cmd {
        Command::Check(a) => emit(out, a.json, &cmd_check(a, exec)?, render::check),
        Command::FuzzTheorem(a) => emit(out, a.json, &cmd_fuzz_theorem(a, exec)?, render::fuzz),
        Command::Sweep(a) => emit(out, a.json, &cmd_sweep(a, exec)?, render::sweep),
        Command::Counterexample(a) => emit(
            out,
            a.json,
            &cmd_counterexample(a, exec)?,
            render::counterexample,
        ),
        Command::FindModel(a) => emit(out, a.json, &cmd_find_model(a, exec)?, render::find_model),
    }
}

fn emit<R: Serialize>(
    out: &mut dyn Write,
    json: bool,
    report: &RunReport<R>,
    human: fn(&RunReport<R>) -> String,
) -> Result<(), CliError> {
    let text = if json {
        let mut s =
            serde_json::to_string_pretty(report).map_err(|e| CliError::Invalid(e.to_string()))?;
        s.push('\n');
        s
    } else {
        human(report)
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn check_margin(margin: f64) -> Result<(), CliError> {
    if margin.is_finite() && margin >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--margin must be finite and nonnegative, got {margin}"
        )))
    }
}

fn solve_options(a: &SolveArgs, exec: Execution) -> SolveOptions {
    SolveOptions {
        seed: a.seed,
        max_samples: a.max_samples,
        execution: exec,
    }
}

fn input(path: &Path) -> Option<String> {
    Some(path.display().to_string())
}

pub fn cmd_check(a: &CheckArgs, exec: Execution) -> Result<RunReport<CheckResult>, CliError> {
    check_margin(a.margin)?;
    let scenario = Scenario::load(&a.file)?;
    let solved = scenario.solve(&solve_options(&a.solve, exec))?;
    let report = evaluate_schema(
        &scenario,
        &solved.distribution,
        Strictness::with_margin(a.margin),
    )?;
    let config = RunConfig {
        input: input(&a.file),
        seed: a.solve.seed,
        margin: Some(a.margin),
        weak_tolerance: Some(DEFAULT_WEAK_TOLERANCE),
        max_samples: a.solve.max_samples,
        ..RunConfig::default()
    };
    let result = CheckResult {
        seed: solved.base_seed.or(solved.extension_seed),
        extension: scenario.extension_summary(&solved),
        report,
    };
    Ok(RunReport::new("check", config, result))
}

pub fn cmd_fuzz_theorem(a: &FuzzArgs, exec: Execution) -> Result<RunReport<FuzzResult>, CliError> {
    if a.samples < 1 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    check_margin(a.margin)?;
    let events = if a.events {
        EventMode::Events
    } else {
        EventMode::Atoms
    };
    let cfg = FuzzConfig {
        samples: a.samples,
        seed: a.seed,
        margin: a.margin,
        events,
    };
    let (suite, summary) = if a.corollary {
        ("corollary", fuzz_corollary(&cfg, exec))
    } else if a.events {
        ("theorem_events", fuzz_theorem(&cfg, exec))
    } else {
        ("theorem", fuzz_theorem(&cfg, exec))
    };
    let config = RunConfig {
        seed: Some(a.seed),
        margin: Some(a.margin),
        samples: Some(a.samples),
        events: Some(suite.to_string()),
        ..RunConfig::default()
    };
    let result = FuzzResult {
        suite: suite.to_string(),
        conclusion_relation: CONCLUSION_RELATION.to_string(),
        summary,
    };
    Ok(RunReport::new("fuzz-theorem", config, result))
}

/// Shortest round-trip form; empty when undefined.
fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// Write sweep rows as CSV after the versioned comment line.
pub fn write_sweep_csv(
    path: &Path,
    labels: &[String; 4],
    rows: &[SweepRow],
) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut file = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(file, "{SWEEP_CSV_HEADER}").map_err(io)?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut header = vec!["value".to_string(), "status".to_string()];
    header.extend(labels.iter().cloned());
    header.extend(["degree".to_string(), "bridge_prior".to_string()]);
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![cell(Some(r.value)), r.status.to_string()];
        rec.extend(r.conditions.iter().map(|c| cell(*c)));
        rec.extend([cell(r.degree), cell(r.bridge_prior)]);
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io)
}

pub fn cmd_sweep(a: &SweepArgs, exec: Execution) -> Result<RunReport<SweepResult>, CliError> {
    check_margin(a.margin)?;
    let param: SweepParam = a.param.parse().map_err(CliError::Usage)?;
    let range: SweepRange = a.range.parse().map_err(CliError::Usage)?;
    let scenario = Scenario::load(&a.file)?;
    let rows = sweep(
        &scenario,
        &param,
        &range,
        &solve_options(&a.solve, exec),
        Strictness::with_margin(a.margin),
    )?;
    write_sweep_csv(&a.output, scenario.labels(), &rows)?;
    let config = RunConfig {
        input: input(&a.file),
        seed: a.solve.seed,
        margin: Some(a.margin),
        weak_tolerance: Some(DEFAULT_WEAK_TOLERANCE),
        max_samples: a.solve.max_samples,
        param: Some(param.to_string()),
        range: Some(a.range.clone()),
        ..RunConfig::default()
    };
    let result = SweepResult {
        scenario: scenario.name().to_string(),
        labels: scenario.labels().clone(),
        output: a.output.display().to_string(),
        rows,
    };
    Ok(RunReport::new("sweep", config, result))
}

/// A type-1 scenario over A, B, C with hypothesis C, evidence A, bridge B.
pub fn counterexample_scenario(seed: u64, weights: Vec<f64>) -> ScenarioFile {
    ScenarioFile {
        name: format!("counterexample_seed_{seed}"),
        title: None,
        atoms: ["A", "B", "C"].map(String::from).to_vec(),
        schema: SchemaType::Type1,
        labels: Some(["i", "ii", "iii", "iv"].map(String::from)),
        roles: RolesSpec {
            hypothesis: "C".into(),
            evidence: "A".into(),
            bridge: "B".into(),
        },
        distribution: DistributionSpec::Weights { weights },
        extension: None,
        baseline: None,
        notes: "A confirms B and B confirms C, yet A disconfirms C.".into(),
    }
}

pub fn cmd_counterexample(
    a: &CounterexampleArgs,
    exec: Execution,
) -> Result<RunReport<CounterexampleResult>, CliError> {
    if a.budget < 1 {
        return Err(CliError::Usage("--budget must be at least 1".into()));
    }
    let cx = mine_with(a.seed, a.budget, &MinerThresholds::default(), exec)?;
    if let Some(path) = &a.save {
        let file = counterexample_scenario(a.seed, cx.distribution.weights().to_vec());
        let text =
            serde_json::to_string_pretty(&file).map_err(|e| CliError::Invalid(e.to_string()))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let config = RunConfig {
        seed: Some(a.seed),
        budget: Some(a.budget),
        ..RunConfig::default()
    };
    let result = CounterexampleResult {
        sample_index: cx.sample_index,
        distribution: DistributionRecord::from(&cx.distribution),
        failing_conditions: cx
            .report
            .failing_conditions()
            .into_iter()
            .map(String::from)
            .collect(),
        a_confirms_b: cx.a_confirms_b,
        b_confirms_c: cx.b_confirms_c,
        a_confirms_c: cx.a_confirms_c,
        transitivity: cx.report,
    };
    Ok(RunReport::new("counterexample", config, result))
}

fn stage(name: &str, seed: u64, m: &Model) -> StageRecord {
    StageRecord {
        stage: name.to_string(),
        seed,
        penalty: m.penalty,
        samples_used: m.samples_used,
        winning_sample: m.winning_sample,
        refined: m.refined,
        outcomes: m.outcomes.clone(),
        distribution: DistributionRecord::from(&m.distribution),
    }
}

pub fn cmd_find_model(
    a: &FindModelArgs,
    exec: Execution,
) -> Result<RunReport<FindModelResult>, CliError> {
    let scenario = Scenario::load(&a.file)?;
    let solved = scenario.solve(&solve_options(&a.solve, exec))?;
    let mut stages = Vec::new();
    if let (Some(m), Some(seed)) = (&solved.base_model, solved.base_seed) {
        stages.push(stage("base", seed, m));
    }
    if let (Some(m), Some(seed)) = (
        solved.extension.as_ref().and_then(|x| x.model.as_ref()),
        solved.extension_seed,
    ) {
        stages.push(stage("extension", seed, m));
    }
    let config = RunConfig {
        input: input(&a.file),
        seed: a.solve.seed,
        max_samples: a.solve.max_samples,
        ..RunConfig::default()
    };
    let result = FindModelResult {
        scenario: scenario.name().to_string(),
        stages,
        distribution: DistributionRecord::from(&solved.distribution),
    };
    Ok(RunReport::new("find-model", config, result))
}
