use std::path::Path;

use super::{Scenario, ScenarioError};

pub const CORPUS_SIZE: usize = 6;

const CORPUS: [(&str, &str); CORPUS_SIZE] = [
    (
        "riemann_weil.json",
        include_str!("../../corpus/riemann_weil.json"),
    ),
    (
        "taylor_series.json",
        include_str!("../../corpus/taylor_series.json"),
    ),
    (
        "euler_cauchy.json",
        include_str!("../../corpus/euler_cauchy.json"),
    ),
    (
        "euler_polya.json",
        include_str!("../../corpus/euler_polya.json"),
    ),
    (
        "area_volume.json",
        include_str!("../../corpus/area_volume.json"),
    ),
    (
        "area_volume_starstar.json",
        include_str!("../../corpus/area_volume_starstar.json"),
    ),
];

const ENTAILING: (&str, &str) = (
    "variants/riemann_weil_entailing.json",
    include_str!("../../corpus/variants/riemann_weil_entailing.json"),
);

/// File names of the built-in corpus, in load order.
pub fn corpus_names() -> Vec<&'static str> {
    CORPUS.iter().map(|(n, _)| *n).collect()
}

/// The built-in corpus, embedded at compile time.
pub fn load_corpus() -> Result<Vec<Scenario>, ScenarioError> {
    CORPUS
        .iter()
        .map(|(name, text)| Scenario::from_json_str(text, &format!("corpus/{name}")))
        .collect()
}

/// Every `*.json` directly inside `dir`, sorted by file name.
pub fn load_corpus_dir(dir: impl AsRef<Path>) -> Result<Vec<Scenario>, ScenarioError> {
    let dir = dir.as_ref();
    let io = |e: std::io::Error| ScenarioError::Io {
        file: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let p = entry.map_err(io)?.path();
        if p.is_file() && p.extension().is_some_and(|x| x == "json") {
            paths.push(p);
        }
    }
    paths.sort();
    paths.iter().map(Scenario::load).collect()
}

/// The Riemann–Weil variant whose bridge credence entails the hypothesis.
pub fn entailing_variant() -> Result<Scenario, ScenarioError> {
    Scenario::from_json_str(ENTAILING.1, &format!("corpus/{}", ENTAILING.0))
}
