//! Report types. Each serializes with a fixed key order and renders as text.

use std::fmt::Write as _;

use digitop::fixpoint::{TheoremReport, TheoremVerdict};
use digitop::search::{SearchOutcome, SearchStatus, SuiteReport};
use digitop::{ConditionReport, DigitalMetricSpace, MinimalConstant, OrbitClass, OrbitReport, Scalar};
use serde::Serialize;

pub trait Report: Serialize {
    fn text(&self) -> String;

    /// False when the report records a failed check, a refutation or a
    /// counterexample.
    fn passed(&self) -> bool {
        true
    }
}

#[derive(Debug, Serialize)]
pub struct SpaceSummary {
    pub points: usize,
    pub dimension: usize,
    pub adjacency: String,
    pub metric: String,
    pub arithmetic: &'static str,
}

impl SpaceSummary {
    pub fn of(space: &DigitalMetricSpace) -> Self {
        SpaceSummary {
            points: space.len(),
            dimension: space.image().dim(),
            adjacency: format!("c_{}", space.image().adjacency().u()),
            metric: space.metric().to_string(),
            arithmetic: if space.metric().is_exact() { "exact" } else { "f64" },
        }
    }

    fn line(&self) -> String {
        format!(
            "space: {} points in Z^{}, {}, {} ({})",
            self.points, self.dimension, self.adjacency, self.metric, self.arithmetic
        )
    }
}

#[derive(Debug, Serialize)]
pub struct ConditionRow {
    pub condition: String,
    pub holds: bool,
    pub minimal_constant: Option<String>,
    pub minimal_constant_approx: Option<f64>,
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub undefined_pairs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConditionRow {
    pub fn from_report<S: Scalar>(r: &ConditionReport<S>) -> Self {
        let (minimal_constant, minimal_constant_approx) = match &r.minimal_constant {
            MinimalConstant::NotApplicable => (None, None),
            MinimalConstant::Value(v) => (Some(v.to_string()), Some(v.to_f64())),
            MinimalConstant::NonePossible => (Some("none possible".to_string()), None),
        };
        ConditionRow {
            condition: r.kind.to_string(),
            holds: r.holds,
            minimal_constant,
            minimal_constant_approx,
            witness: r.witness.as_ref().map(ToString::to_string),
            undefined_pairs: r.undefined_pairs.iter().map(|(x, y)| format!("({x}, {y})")).collect(),
            note: r
                .finite_space_reduction
                .then(|| "decided by commuting at coincidence points (finite-space reduction)".to_string()),
        }
    }

    pub fn simple(condition: impl Into<String>, holds: bool, witness: Option<String>) -> Self {
        ConditionRow {
            condition: condition.into(),
            holds,
            minimal_constant: None,
            minimal_constant_approx: None,
            witness,
            undefined_pairs: Vec::new(),
            note: None,
        }
    }

    fn line(&self) -> String {
        let mut s = format!("{:<34} {}", self.condition, if self.holds { "holds" } else { "fails" });
        if let Some(c) = &self.minimal_constant {
            let _ = write!(s, "  min constant {c}");
            if let Some(x) = self.minimal_constant_approx {
                if c.contains("sqrt") {
                    let _ = write!(s, " ~ {x:.6}");
                }
            }
        }
        if let Some(w) = &self.witness {
            let _ = write!(s, "  witness {w}");
        }
        if !self.undefined_pairs.is_empty() {
            let _ = write!(s, "  undefined (0/0) at {}", self.undefined_pairs.join(" "));
        }
        if let Some(n) = &self.note {
            let _ = write!(s, "  [{n}]");
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct CheckMapReport {
    pub space: Option<SpaceSummary>,
    pub map: String,
    pub definition: String,
    pub continuous: Option<bool>,
    pub discontinuity: Option<String>,
    pub fixed_points: String,
}

impl Report for CheckMapReport {
    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.space {
            let _ = writeln!(out, "{}", s.line());
        }
        let _ = writeln!(out, "map {}: {}", self.map, self.definition);
        if let Some(c) = self.continuous {
            let _ = writeln!(out, "continuous: {}", if c { "yes" } else { "no" });
        }
        if let Some(d) = &self.discontinuity {
            let _ = writeln!(out, "adjacent pair with non-adjacent images: {d}");
        }
        let _ = writeln!(out, "fixed points: {}", self.fixed_points);
        out
    }

    fn passed(&self) -> bool {
        self.continuous != Some(false)
    }
}

#[derive(Debug, Serialize)]
pub struct Parameter {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub space: Option<SpaceSummary>,
    pub maps: Vec<String>,
    pub parameters: Vec<Parameter>,
    pub conditions: Vec<ConditionRow>,
}

impl Report for ClassifyReport {
    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.space {
            let _ = writeln!(out, "{}", s.line());
        }
        let _ = writeln!(out, "maps: {}", self.maps.join(", "));
        let params: Vec<String> = self.parameters.iter().map(|p| format!("{}={}", p.name, p.value)).collect();
        let _ = writeln!(out, "parameters: {}", params.join(", "));
        for row in &self.conditions {
            let _ = writeln!(out, "  {}", row.line());
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct OrbitOut {
    pub start: String,
    pub orbit: Vec<String>,
    pub classification: &'static str,
    pub settle_index: Option<usize>,
    pub limit: Option<String>,
    pub cycle_start: Option<usize>,
    pub period: Option<usize>,
}

impl OrbitOut {
    pub fn from_report(r: &OrbitReport) -> Self {
        let orbit = r.orbit.iter().map(ToString::to_string).collect::<Vec<_>>();
        let mut out = OrbitOut {
            start: orbit[0].clone(),
            orbit,
            classification: "truncated",
            settle_index: None,
            limit: None,
            cycle_start: None,
            period: None,
        };
        match &r.classification {
            OrbitClass::EventuallyConstant { settle_index, value } => {
                out.classification = "eventually_constant";
                out.settle_index = Some(*settle_index);
                out.limit = Some(value.to_string());
            }
            OrbitClass::EventuallyPeriodic { start_index, period } => {
                out.classification = "eventually_periodic";
                out.cycle_start = Some(*start_index);
                out.period = Some(*period);
            }
            OrbitClass::Truncated => {}
        }
        out
    }

    fn line(&self) -> String {
        let path = self.orbit.join(" -> ");
        match self.classification {
            "eventually_constant" => format!(
                "from {}: {path}  (constant {} from step {})",
                self.start,
                self.limit.as_deref().unwrap_or("?"),
                self.settle_index.unwrap_or(0)
            ),
            "eventually_periodic" => format!(
                "from {}: {path}  (period {} from step {})",
                self.start,
                self.period.unwrap_or(0),
                self.cycle_start.unwrap_or(0)
            ),
            _ => format!("from {}: {path}  (truncated)", self.start),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OrbitCommandReport {
    pub space: SpaceSummary,
    pub maps: Vec<String>,
    pub scheme: &'static str,
    pub orbit: OrbitOut,
}

impl Report for OrbitCommandReport {
    fn text(&self) -> String {
        format!("{}\n{} iteration of {}\n{}\n", self.space.line(), self.scheme, self.maps.join(", "), self.orbit.line())
    }

    fn passed(&self) -> bool {
        self.orbit.classification != "truncated"
    }
}

#[derive(Debug, Serialize)]
pub struct TheoremCommandReport {
    pub space: SpaceSummary,
    pub map: String,
    pub theorem: String,
    pub hypothesis: ConditionRow,
    pub fixed_points: Vec<String>,
    pub limit: Option<String>,
    pub unique: bool,
    pub verdict: String,
    pub orbits: Vec<OrbitOut>,
    #[serde(skip)]
    pub refuted: bool,
}

impl TheoremCommandReport {
    pub fn new<S: Scalar>(space: &DigitalMetricSpace, map: &str, theorem: String, r: &TheoremReport<S>) -> Self {
        TheoremCommandReport {
            space: SpaceSummary::of(space),
            map: map.to_string(),
            theorem,
            hypothesis: ConditionRow::from_report(&r.hypothesis),
            fixed_points: r.fixed_points.iter().map(ToString::to_string).collect(),
            limit: r.fixed_point.as_ref().map(ToString::to_string),
            unique: r.unique,
            verdict: r.verdict.to_string(),
            orbits: r.orbits.iter().map(OrbitOut::from_report).collect(),
            refuted: matches!(r.verdict, TheoremVerdict::RefutesAssertion(_)),
        }
    }
}

impl Report for TheoremCommandReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.space.line());
        let _ = writeln!(out, "{} for map {}", self.theorem, self.map);
        let _ = writeln!(out, "hypothesis: {}", self.hypothesis.line());
        let _ = writeln!(out, "fixed points: {{{}}}", self.fixed_points.join(", "));
        let _ = writeln!(out, "verdict: {}", self.verdict);
        for o in &self.orbits {
            let _ = writeln!(out, "  {}", o.line());
        }
        out
    }

    fn passed(&self) -> bool {
        !self.refuted
    }
}

#[derive(Debug, Serialize)]
pub struct AffineFixReport {
    pub map: String,
    pub definition: String,
    pub fixed_points: String,
}

impl Report for AffineFixReport {
    fn text(&self) -> String {
        format!("map {} on Z: {}\nfixed points: {}\n", self.map, self.definition, self.fixed_points)
    }
}

#[derive(Debug, Serialize)]
pub struct HausdorffReport {
    pub space: SpaceSummary,
    pub set_a: Vec<String>,
    pub set_b: Vec<String>,
    pub distance: String,
    pub distance_approx: f64,
}

impl Report for HausdorffReport {
    fn text(&self) -> String {
        format!(
            "{}\nH({{{}}}, {{{}}}) = {} ~ {:.6}\n",
            self.space.line(),
            self.set_a.join(", "),
            self.set_b.join(", "),
            self.distance,
            self.distance_approx
        )
    }
}

#[derive(Debug, Serialize)]
pub struct FppReport {
    pub space: SpaceSummary,
    pub continuous_only: bool,
    pub has_fpp: bool,
    pub maps_examined: u64,
    pub fixed_point_free_map: Option<String>,
}

impl Report for FppReport {
    fn text(&self) -> String {
        let scope = if self.continuous_only { "continuous self-maps" } else { "self-maps" };
        let mut out = format!(
            "{}\nfixed point property over {scope}: {} ({} maps examined)\n",
            self.space.line(),
            if self.has_fpp { "yes" } else { "no" },
            self.maps_examined
        );
        if let Some(w) = &self.fixed_point_free_map {
            let _ = writeln!(out, "fixed-point-free map: {w}");
        }
        out
    }

    fn passed(&self) -> bool {
        self.has_fpp
    }
}

#[derive(Debug, Serialize)]
pub struct NamedMap {
    pub name: String,
    pub map: String,
}

#[derive(Debug, Serialize)]
pub struct SearchStatsOut {
    pub spaces_scanned: u64,
    pub maps_scanned: u64,
    pub hypothesis_hits: u64,
}

#[derive(Debug, Serialize)]
pub struct ReplayOut {
    pub hypothesis: bool,
    pub conclusion: bool,
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub assertion: String,
    pub conclusion: String,
    pub size_bound: usize,
    pub parameter: Option<String>,
    pub param_grid: Vec<String>,
    pub status: &'static str,
    pub space: Option<String>,
    pub maps: Vec<NamedMap>,
    pub parameter_value: Option<String>,
    pub replay: Option<ReplayOut>,
    pub statistics: SearchStatsOut,
    #[serde(skip)]
    pub summary: String,
}

impl SearchReport {
    pub fn new(outcome: &SearchOutcome, size_bound: usize, grid: Vec<String>, replay: Option<ReplayOut>) -> Self {
        let id = outcome.assertion;
        let (status, space, maps, parameter_value) = match &outcome.status {
            SearchStatus::CounterexampleFound(c) => (
                "counterexample",
                Some(c.space.to_string()),
                id.map_names()
                    .iter()
                    .zip(&c.maps)
                    .map(|(n, m)| NamedMap { name: n.to_string(), map: m.to_string() })
                    .collect(),
                c.param.as_ref().map(digitop::scalar::format_rational),
            ),
            SearchStatus::ExhaustedNoCounterexample { .. } => ("exhausted", None, Vec::new(), None),
        };
        SearchReport {
            assertion: id.name().to_string(),
            conclusion: id.conclusion_text().to_string(),
            size_bound,
            parameter: id.parameter().map(str::to_string),
            param_grid: grid,
            status,
            space,
            maps,
            parameter_value,
            replay,
            statistics: SearchStatsOut {
                spaces_scanned: outcome.stats.spaces_scanned,
                maps_scanned: outcome.stats.maps_scanned,
                hypothesis_hits: outcome.stats.hypothesis_hits,
            },
            summary: outcome.to_string(),
        }
    }
}

impl Report for SearchReport {
    fn text(&self) -> String {
        let mut out = format!("{}\n", self.summary);
        let _ = writeln!(out, "conclusion under test: {}", self.conclusion);
        if let Some(r) = &self.replay {
            let _ = writeln!(out, "replay: hypothesis {}, conclusion {}", r.hypothesis, r.conclusion);
        }
        out
    }

    fn passed(&self) -> bool {
        self.status == "exhausted"
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteEntryOut {
    pub id: String,
    pub anchor: String,
    pub status: String,
    pub evidence: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SuiteOut {
    pub entries: Vec<SuiteEntryOut>,
    pub passed: usize,
    pub total: usize,
    #[serde(skip)]
    pub rendered: String,
}

impl SuiteOut {
    pub fn new(r: &SuiteReport) -> Self {
        let entries: Vec<SuiteEntryOut> = r
            .entries
            .iter()
            .map(|e| SuiteEntryOut {
                id: e.id.to_string(),
                anchor: e.anchor.to_string(),
                status: e.status.to_string(),
                evidence: e.evidence.clone(),
            })
            .collect();
        SuiteOut {
            passed: entries.iter().filter(|e| e.status == "PASS").count(),
            total: entries.len(),
            entries,
            rendered: r.to_string(),
        }
    }
}

impl Report for SuiteOut {
    fn text(&self) -> String {
        self.rendered.clone()
    }

    fn passed(&self) -> bool {
        self.passed == self.total
    }
}
