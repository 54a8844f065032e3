use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{evaluate_schema, Scenario, ScenarioError, SolveOptions};
use crate::confirmation::Strictness;
use crate::model::SearchError;

/// What a sweep varies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SweepParam {
    /// `bridge.prior`: force the bridge's marginal by Jeffrey reweighting of
    /// the solved distribution.
    BridgePrior,
    /// `margins.<label>`: re-solve with one constraint margin replaced.
    Margin(String),
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bridge.prior" => Ok(SweepParam::BridgePrior),
            _ => match s.strip_prefix("margins.") {
                Some(l) if !l.is_empty() => Ok(SweepParam::Margin(l.to_string())),
                _ => Err(format!(
                    "unknown sweep parameter `{s}`; use `bridge.prior` or `margins.<label>`"
                )),
            },
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepParam::BridgePrior => f.write_str("bridge.prior"),
            SweepParam::Margin(l) => write!(f, "margins.{l}"),
        }
    }
}

impl From<SweepParam> for String {
    fn from(p: SweepParam) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for SweepParam {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// `lo:hi:step`, inclusive of `hi` up to float noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl SweepRange {
    /// `lo + k * step` for every `k` with the value at most `hi + 1e-9`.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let v = self.lo + k as f64 * self.step;
            if v > self.hi + 1e-9 {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("range `{s}` is not of the form lo:hi:step"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` in range `{s}` is not a number"))
        };
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(format!("range `{s}` must be finite"));
        }
        if step <= 0.0 {
            return Err(format!("step in range `{s}` must be positive"));
        }
        if hi < lo {
            return Err(format!("range `{s}` has hi below lo"));
        }
        Ok(SweepRange { lo, hi, step })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Established,
    Withheld,
    Degenerate,
    /// The model finder exhausted its budget at this value.
    Infeasible,
    /// The forced value cannot be reached by reweighting.
    Undefined,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Established => "established",
            RowStatus::Withheld => "withheld",
            RowStatus::Degenerate => "degenerate",
            RowStatus::Infeasible => "infeasible",
            RowStatus::Undefined => "undefined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub status: RowStatus,
    /// Margins of the four schema conditions; `None` where undefined.
    pub conditions: [Option<f64>; 4],
    pub degree: Option<f64>,
    pub bridge_prior: Option<f64>,
}

impl SweepRow {
    fn blank(value: f64, status: RowStatus) -> Self {
        SweepRow {
            value,
            status,
            conditions: [None; 4],
            degree: None,
            bridge_prior: None,
        }
    }
}

fn row_from(
    scenario: &Scenario,
    value: f64,
    dist: &crate::prob::JointDistribution,
    strictness: Strictness,
) -> Result<SweepRow, ScenarioError> {
    let r = evaluate_schema(scenario, dist, strictness)?;
    let status = match r.analogical.status() {
        "established" => RowStatus::Established,
        "withheld" => RowStatus::Withheld,
        _ => RowStatus::Degenerate,
    };
    let mut conditions = [None; 4];
    for (slot, c) in conditions.iter_mut().zip(&r.conditions) {
        *slot = c.check.margin;
    }
    Ok(SweepRow {
        value,
        status,
        conditions,
        degree: r.overall.map(|v| v.degree),
        bridge_prior: Some(r.bridge_prior),
    })
}

/// One row per value. Values the finder cannot solve become `infeasible`
/// rows rather than errors.
pub fn sweep(
    scenario: &Scenario,
    param: &SweepParam,
    range: &SweepRange,
    opts: &SolveOptions,
    strictness: Strictness,
) -> Result<Vec<SweepRow>, ScenarioError> {
    let values = range.values();
    match param {
        SweepParam::BridgePrior => {
            let solved = scenario.solve(opts)?;
            let bridge = &scenario.roles().bridge;
            values
                .iter()
                .map(|&v| match solved.distribution.with_marginal(bridge, v) {
                    Ok(d) => row_from(scenario, v, &d, strictness),
                    Err(e) if e.is_undefined_conditional() => {
                        Ok(SweepRow::blank(v, RowStatus::Undefined))
                    }
                    Err(e) => Err(e.into()),
                })
                .collect()
        }
        SweepParam::Margin(label) => {
            // Surface an unknown label before solving anything.
            let variants: Vec<Scenario> = values
                .iter()
                .map(|&v| scenario.with_margin(label, v))
                .collect::<Result<_, _>>()?;
            let rows = opts
                .execution
                .map_slice(&variants, |s| match s.solve(opts) {
                    Ok(solved) => Ok(Some(solved.distribution)),
                    Err(ScenarioError::Search(SearchError::Infeasible(_))) => Ok(None),
                    Err(e) => Err(e),
                });
            values
                .iter()
                .zip(&variants)
                .zip(rows)
                .map(|((&v, s), r)| match r? {
                    Some(d) => row_from(s, v, &d, strictness),
                    None => Ok(SweepRow::blank(v, RowStatus::Infeasible)),
                })
                .collect()
        }
    }
}
