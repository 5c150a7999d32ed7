//! On-disk JSON documents: game files and result files.
//!
//! Rationals are always strings (`"p/q"` or `"n"`), filtrations are explicit
//! cell lists per time, and processes are per-time maps from outcome id to
//! value.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{EquilibriumResult, IterationState};
use crate::error::{Error, Result};
use crate::game::{GameMeta, GameSpec};
use crate::prob::{AdaptedProcess, Filtration, Partition, SampleSpace, StoppingTime};
use crate::rational::{format_rational, parse_rational};
use crate::verify::{Method, VerificationReport};

pub type ProcessRows = Vec<BTreeMap<String, String>>;
pub type TimeMap = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeEntry {
    pub id: String,
    pub prob: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub outcomes: Vec<OutcomeEntry>,
    #[serde(rename = "filtration_F")]
    pub filtration_f: Vec<Vec<Vec<String>>>,
    #[serde(rename = "filtration_G")]
    pub filtration_g: Vec<Vec<Vec<String>>>,
    #[serde(rename = "X1")]
    pub x1: ProcessRows,
    #[serde(rename = "Y1")]
    pub y1: ProcessRows,
    #[serde(rename = "X2")]
    pub x2: ProcessRows,
    #[serde(rename = "Y2")]
    pub y2: ProcessRows,
}

/// Outcome of checking a game file: hard errors, warnings, and the parsed
/// game when there were no errors.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    pub game: Option<GameSpec>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

fn filtration_to_ids(space: &SampleSpace, h: &Filtration) -> Vec<Vec<Vec<String>>> {
    h.parts()
        .iter()
        .map(|p| {
            p.cells()
                .iter()
                .map(|c| c.iter().map(|&w| space.id(w).to_string()).collect())
                .collect()
        })
        .collect()
}

fn process_to_rows(space: &SampleSpace, p: &AdaptedProcess) -> ProcessRows {
    p.rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(w, v)| (space.id(w).to_string(), format_rational(v)))
                .collect()
        })
        .collect()
}

pub fn time_map(space: &SampleSpace, s: &StoppingTime) -> TimeMap {
    (0..space.len())
        .map(|w| (space.id(w).to_string(), s.at(w)))
        .collect()
}

pub fn stopping_time_from_map(space: &SampleSpace, map: &TimeMap) -> Result<StoppingTime> {
    for id in map.keys() {
        if space.index_of(id).is_none() {
            return Err(Error::UnknownOutcome(id.clone()));
        }
    }
    let times = space
        .ids()
        .iter()
        .map(|id| {
            map.get(id)
                .copied()
                .ok_or_else(|| Error::Format(format!("no time for outcome {id:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StoppingTime::new(times))
}

impl GameFile {
    pub fn from_game(game: &GameSpec) -> Self {
        let space = game.space();
        GameFile {
            name: game.meta.name.clone(),
            seed: game.meta.seed,
            horizon: game.horizon(),
            outcomes: (0..space.len())
                .map(|w| OutcomeEntry {
                    id: space.id(w).to_string(),
                    prob: format_rational(space.prob(w)),
                })
                .collect(),
            filtration_f: filtration_to_ids(space, game.f()),
            filtration_g: filtration_to_ids(space, game.g()),
            x1: process_to_rows(space, game.x1()),
            y1: process_to_rows(space, game.y1()),
            x2: process_to_rows(space, game.x2()),
            y2: process_to_rows(space, game.y2()),
        }
    }

    pub fn to_game(&self) -> Result<GameSpec> {
        let diag = self.diagnose();
        match diag.game {
            Some(g) => Ok(g),
            None => Err(Error::Format(diag.errors.join("; "))),
        }
    }

    /// Collects every violation it can find instead of stopping at the first.
    pub fn diagnose(&self) -> Diagnostics {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        let horizon = self.horizon;
        if horizon == 0 {
            errors.push(Error::ZeroHorizon.to_string());
        }

        let ids: Vec<String> = self.outcomes.iter().map(|o| o.id.clone()).collect();
        let mut probs = Vec::new();
        for o in &self.outcomes {
            match parse_rational(&o.prob) {
                Ok(p) => probs.push(p),
                Err(e) => errors.push(format!("outcome {:?}: {e}", o.id)),
            }
        }
        let space = if probs.len() == ids.len() {
            match SampleSpace::new(ids.clone(), probs) {
                Ok(s) => Some(s),
                Err(e) => {
                    errors.push(e.to_string());
                    None
                }
            }
        } else {
            None
        };
        let unique_ids = {
            let mut sorted = ids.clone();
            sorted.sort();
            sorted.dedup();
            sorted.len() == ids.len() && !ids.is_empty()
        };
        if !unique_ids {
            if errors.is_empty() {
                errors.push("outcome ids must be nonempty and unique".into());
            }
            return Diagnostics {
                errors,
                warnings,
                game: None,
            };
        }
        let index: BTreeMap<&str, usize> =
            ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let n = ids.len();

        let f = parse_filtration("F", &self.filtration_f, horizon, n, &index, &mut errors);
        let g = parse_filtration("G", &self.filtration_g, horizon, n, &index, &mut errors);
        let procs: Vec<Option<AdaptedProcess>> = [
            ("X1", &self.x1),
            ("Y1", &self.y1),
            ("X2", &self.x2),
            ("Y2", &self.y2),
        ]
        .into_iter()
        .map(|(name, rows)| parse_process(name, rows, horizon, &ids, &mut errors))
        .collect();

        let mut game = None;
        if let (Some(space), Some(f), Some(g), [Some(x1), Some(y1), Some(x2), Some(y2)]) =
            (space, f, g, procs.as_slice())
        {
            let mut candidate =
                GameSpec::unchecked(space, f, g, x1.clone(), y1.clone(), x2.clone(), y2.clone());
            let violations = candidate.violations();
            if violations.is_empty() && errors.is_empty() {
                candidate.meta = GameMeta {
                    name: self.name.clone(),
                    seed: self.seed,
                };
                game = Some(candidate);
            } else {
                errors.extend(violations.iter().map(Error::to_string));
            }
        }
        if let Some(game) = &game {
            let bad = game.condition9_violations();
            if !bad.is_empty() {
                let (t, w) = bad[0];
                warnings.push(format!(
                    "condition X1 >= Y1 violated at {} point(s), first at t={t}, outcome {:?}",
                    bad.len(),
                    game.space().id(w)
                ));
            }
        }
        Diagnostics {
            errors,
            warnings,
            game,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

fn parse_filtration(
    name: &str,
    raw: &[Vec<Vec<String>>],
    horizon: usize,
    n: usize,
    index: &BTreeMap<&str, usize>,
    errors: &mut Vec<String>,
) -> Option<Filtration> {
    if raw.len() != horizon + 1 {
        errors.push(format!(
            "filtration_{name} has {} partitions, expected T+1 = {}",
            raw.len(),
            horizon + 1
        ));
        return None;
    }
    let mut parts = Vec::with_capacity(raw.len());
    let mut ok = true;
    for (t, cells) in raw.iter().enumerate() {
        let mut idx_cells = Vec::with_capacity(cells.len());
        for cell in cells {
            let mut c = Vec::with_capacity(cell.len());
            for id in cell {
                match index.get(id.as_str()) {
                    Some(&w) => c.push(w),
                    None => {
                        errors.push(format!("filtration_{name} at t={t}: unknown outcome {id:?}"));
                        ok = false;
                    }
                }
            }
            idx_cells.push(c);
        }
        match Partition::new(n, idx_cells) {
            Ok(p) => parts.push(p),
            Err(e) => {
                errors.push(format!("filtration_{name} at t={t}: {e}"));
                ok = false;
            }
        }
    }
    if !ok {
        return None;
    }
    match Filtration::named(name, parts) {
        Ok(h) => Some(h),
        Err(e) => {
            errors.push(e.to_string());
            None
        }
    }
}

fn parse_process(
    name: &str,
    rows: &ProcessRows,
    horizon: usize,
    ids: &[String],
    errors: &mut Vec<String>,
) -> Option<AdaptedProcess> {
    if rows.len() != horizon + 1 {
        errors.push(format!(
            "{name} has {} time rows, expected T+1 = {}",
            rows.len(),
            horizon + 1
        ));
        return None;
    }
    let mut ok = true;
    let mut values = Vec::with_capacity(rows.len());
    for (t, row) in rows.iter().enumerate() {
        for key in row.keys() {
            if !ids.contains(key) {
                errors.push(format!("{name} at t={t}: unknown outcome {key:?}"));
                ok = false;
            }
        }
        let mut r = Vec::with_capacity(ids.len());
        for id in ids {
            match row.get(id).map(|s| parse_rational(s)) {
                Some(Ok(v)) => r.push(v),
                Some(Err(e)) => {
                    errors.push(format!("{name} at t={t}, outcome {id:?}: {e}"));
                    ok = false;
                }
                None => {
                    errors.push(format!("{name} at t={t}: missing outcome {id:?}"));
                    ok = false;
                }
            }
        }
        values.push(r);
    }
    if !ok {
        return None;
    }
    AdaptedProcess::new(values).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub j1_achieved: String,
    pub j2_achieved: String,
    pub j1_best: String,
    pub j2_best: String,
    pub p1_deviation: Option<TimeMap>,
    pub p2_deviation: Option<TimeMap>,
    pub is_nash: bool,
    pub method: Method,
}

impl ReportFile {
    pub fn from_report(space: &SampleSpace, r: &VerificationReport) -> Self {
        ReportFile {
            j1_achieved: format_rational(&r.j1_achieved),
            j2_achieved: format_rational(&r.j2_achieved),
            j1_best: format_rational(&r.j1_best),
            j2_best: format_rational(&r.j2_best),
            p1_deviation: r.p1_deviation.as_ref().map(|s| time_map(space, s)),
            p2_deviation: r.p2_deviation.as_ref().map(|s| time_map(space, s)),
            is_nash: r.is_nash,
            method: r.method,
        }
    }

    pub fn to_report(&self, space: &SampleSpace) -> Result<VerificationReport> {
        let dev = |m: &Option<TimeMap>| {
            m.as_ref()
                .map(|m| stopping_time_from_map(space, m))
                .transpose()
        };
        Ok(VerificationReport {
            j1_achieved: parse_rational(&self.j1_achieved)?,
            j2_achieved: parse_rational(&self.j2_achieved)?,
            j1_best: parse_rational(&self.j1_best)?,
            j2_best: parse_rational(&self.j2_best)?,
            p1_deviation: dev(&self.p1_deviation)?,
            p2_deviation: dev(&self.p2_deviation)?,
            is_nash: self.is_nash,
            method: self.method,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub n: usize,
    pub tau: TimeMap,
    pub nu: TimeMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<TimeMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_tilde: Option<TimeMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_tilde: Option<TimeMap>,
}

impl TraceEntry {
    pub fn from_state(space: &SampleSpace, s: &IterationState) -> Self {
        TraceEntry {
            n: s.n,
            tau: time_map(space, &s.tau),
            nu: time_map(space, &s.nu),
            theta: s.theta().map(|th| time_map(space, th)),
            tau_tilde: s.tau_tilde.as_ref().map(|x| time_map(space, x)),
            nu_tilde: s.nu_tilde.as_ref().map(|x| time_map(space, x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub tau_star: TimeMap,
    pub nu_star: TimeMap,
    pub theta_star: TimeMap,
    pub iterations: usize,
    /// `J1(tau*, theta*)` and `J2(tau*, theta*)`.
    pub j1: String,
    pub j2: String,
    pub condition9: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_report: Option<ReportFile>,
}

impl ResultFile {
    pub fn new(game: &GameSpec, res: &EquilibriumResult, with_trace: bool) -> Self {
        let space = game.space();
        ResultFile {
            tau_star: time_map(space, &res.tau_star),
            nu_star: time_map(space, &res.nu_star),
            theta_star: time_map(space, &res.theta_star),
            iterations: res.iterations,
            j1: format_rational(&crate::verify::j1(game, &res.tau_star, &res.theta_star)),
            j2: format_rational(&crate::verify::j2(game, &res.tau_star, &res.theta_star)),
            condition9: game.satisfies_condition9(),
            trace: if with_trace {
                res.trace
                    .iter()
                    .map(|s| TraceEntry::from_state(space, s))
                    .collect()
            } else {
                Vec::new()
            },
            report: None,
            oracle_report: None,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
