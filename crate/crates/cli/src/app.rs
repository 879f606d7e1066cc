use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use digitop::contracts::{
    check_banach, check_ciric5, check_kannan, check_pair_domination, check_quasi, check_saluja, compatible,
    parv_rational_check, weakly_commutative,
};
use digitop::fixpoint::{alternating_orbit, banach_verify, contraction_hypothesis, kannan_verify};
use digitop::mapkit::{affine_analyze, affine_dominates, has_fpp, AffineFixedPoints, AffineMapZ};
use digitop::scalar::{format_rational, parse_rational};
use digitop::search::{find_counterexample, replay, verify_paper_suite, AssertionId};
use digitop::{DigitalMetricSpace, Point, Rational, Scalar, SelfMap, Surd};

use crate::document::{LoadedDocument, LoadedMap, SpaceDocument};
use crate::error::CliError;
use crate::report::{
    AffineFixReport, CheckMapReport, ClassifyReport, ConditionRow, FppReport, HausdorffReport, OrbitCommandReport,
    OrbitOut, Parameter, ReplayOut, Report, SearchReport, SpaceSummary, SuiteOut, TheoremCommandReport,
};

#[derive(Debug, Parser)]
#[command(name = "digitop", version, about = "Exact fixed-point checks on digital metric spaces")]
pub struct Cli {
    /// Space description (JSON).
    #[arg(long, global = true)]
    pub space: Option<PathBuf>,
    /// Name of the map to use.
    #[arg(long, global = true)]
    pub map: Option<String>,
    /// Name of the second map, for pair conditions.
    #[arg(long, global = true)]
    pub map2: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Orbit length limit.
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    /// Exit with status 1 when the report records a failure or a
    /// counterexample.
    #[arg(long, global = true)]
    pub expect_pass: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a map and decide its continuity.
    CheckMap,
    /// Evaluate every contractive condition, with minimal constants.
    Classify {
        /// Parameters as `name=n/d` pairs, e.g. `k=1/2,a=1/8`.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
    },
    /// Picard (or alternating, with --map2) orbit from --start; without
    /// --start, verify a fixed-point theorem over every start.
    Fix {
        #[arg(long)]
        start: Option<String>,
        #[arg(long, value_enum, default_value_t = Theorem::Banach)]
        theorem: Theorem,
        /// Kannan constants as `a=n/d,b=n/d`.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
    },
    /// Hausdorff distance between two point sets, written `x;y;...` with
    /// coordinates separated by commas.
    Hausdorff {
        #[arg(long)]
        set_a: String,
        #[arg(long)]
        set_b: String,
    },
    /// Decide the fixed point property by enumeration.
    Fpp {
        /// Only consider continuous self-maps.
        #[arg(long)]
        continuous: bool,
    },
    /// Bounded counterexample search for an assertion.
    Search {
        #[arg(long)]
        assertion: String,
        #[arg(long, default_value_t = 3)]
        size_bound: usize,
        /// Parameter grid, e.g. `1/4,1/2,3/4`.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
    },
    /// Run the full replication suite.
    VerifyPaper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Banach,
    Kannan,
}

/// What a finished run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput { code, stdout: text, stderr: String::new() }
            } else {
                RunOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((stdout, passed)) => {
            let must_pass = cli.expect_pass || matches!(cli.command, Command::VerifyPaper);
            RunOutput { code: if passed || !must_pass { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => RunOutput { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn render<R: Report>(cli: &Cli, report: &R) -> (String, bool) {
    let text = match cli.format {
        Format::Text => report.text(),
        Format::Json => serde_json::to_string_pretty(report).expect("reports always serialize") + "\n",
    };
    (text, report.passed())
}

fn execute(cli: &Cli) -> Result<(String, bool), CliError> {
    match &cli.command {
        Command::CheckMap => {
            let doc = load(cli)?;
            let name = required(&cli.map, "--map")?;
            Ok(render(cli, &check_map(&doc, name)?))
        }
        Command::Classify { params } => {
            let doc = load(cli)?;
            let params = Params::parse(params)?;
            Ok(render(cli, &classify(&doc, required(&cli.map, "--map")?, cli.map2.as_deref(), &params)?))
        }
        Command::Fix { start, theorem, params } => {
            let doc = load(cli)?;
            let name = required(&cli.map, "--map")?;
            if let LoadedMap::Affine(m) = doc.map(name)? {
                if start.is_some() || cli.map2.is_some() {
                    return Err(CliError::input("orbits of affine maps on Z are not tabulated; drop --start/--map2"));
                }
                let report = AffineFixReport {
                    map: name.to_string(),
                    definition: m.to_string(),
                    fixed_points: affine_fixed_text(*m),
                };
                return Ok(render(cli, &report));
            }
            let space = doc.finite_space()?;
            match start {
                Some(start) => Ok(render(cli, &orbit(cli, &doc, space, name, start)?)),
                None => {
                    let params = Params::parse(params)?;
                    Ok(render(cli, &dispatch_theorem(space, doc.table_map(name)?, name, *theorem, &params)?))
                }
            }
        }
        Command::Hausdorff { set_a, set_b } => {
            let doc = load(cli)?;
            let space = doc.finite_space()?;
            let a = parse_point_set(set_a, "--set-a")?;
            let b = parse_point_set(set_b, "--set-b")?;
            let (distance, approx) = if space.metric().is_exact() {
                let d = space.hausdorff::<Surd>(&a, &b)?;
                (d.to_string(), d.to_f64())
            } else {
                let d = space.hausdorff::<f64>(&a, &b)?;
                (format!("{d}"), d)
            };
            let report = HausdorffReport {
                space: SpaceSummary::of(space),
                set_a: a.iter().map(ToString::to_string).collect(),
                set_b: b.iter().map(ToString::to_string).collect(),
                distance,
                distance_approx: approx,
            };
            Ok(render(cli, &report))
        }
        Command::Fpp { continuous } => {
            let doc = load(cli)?;
            let space = doc.finite_space()?;
            let verdict = has_fpp(space.image_arc(), *continuous)?;
            let report = FppReport {
                space: SpaceSummary::of(space),
                continuous_only: *continuous,
                has_fpp: verdict.has_fpp,
                maps_examined: verdict.maps_examined,
                fixed_point_free_map: verdict.witness.as_ref().map(ToString::to_string),
            };
            Ok(render(cli, &report))
        }
        Command::Search { assertion, size_bound, params } => {
            let id: AssertionId = assertion.parse().map_err(|_| {
                let known: Vec<&str> = AssertionId::ALL.iter().map(|a| a.name()).collect();
                CliError::input(format!("unknown assertion {assertion:?}; expected one of {}", known.join(", ")))
            })?;
            let grid = params
                .iter()
                .map(|t| parse_rational(t).ok_or_else(|| CliError::input(format!("--params: {t:?} is not a rational \"n/d\""))))
                .collect::<Result<Vec<_>, _>>()?;
            let outcome = find_counterexample(id, *size_bound, &grid)?;
            let replayed = match outcome.counterexample() {
                Some(c) => {
                    let r = replay(id, c)?;
                    Some(ReplayOut { hypothesis: r.hypothesis, conclusion: r.conclusion })
                }
                None => None,
            };
            let grid_text = grid.iter().map(format_rational).collect();
            Ok(render(cli, &SearchReport::new(&outcome, *size_bound, grid_text, replayed)))
        }
        Command::VerifyPaper => Ok(render(cli, &SuiteOut::new(&verify_paper_suite()))),
    }
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    value.as_deref().ok_or_else(|| CliError::input(format!("{flag} is required for this command")))
}

fn load(cli: &Cli) -> Result<LoadedDocument, CliError> {
    let path = cli.space.as_ref().ok_or_else(|| CliError::input("--space is required for this command"))?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    SpaceDocument::parse(&text)
        .and_then(|d| d.load())
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Parses `3`, `3,4` or `(3,4)`.
fn parse_point(text: &str, what: &str) -> Result<Point, CliError> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::input(format!("{what}: {text:?} is not an integer point")))?;
    Point::new(coords).map_err(|e| CliError::input(format!("{what}: {e}")))
}

fn parse_point_set(text: &str, what: &str) -> Result<Vec<Point>, CliError> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_point(s, what)).collect()
}

/// Named rational parameters with defaults.
struct Params(Vec<(String, Rational)>);

impl Params {
    const DEFAULTS: [(&'static str, (i64, i64)); 6] =
        [("k", (1, 2)), ("a", (1, 8)), ("b", (1, 8)), ("r", (1, 2)), ("rho", (1, 2)), ("xi", (1, 2))];

    fn parse(items: &[String]) -> Result<Self, CliError> {
        let mut values: Vec<(String, Rational)> = Self::DEFAULTS
            .iter()
            .map(|(k, (n, d))| (k.to_string(), Rational::new(*n, *d)))
            .collect();
        for item in items {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("--params: expected name=n/d, got {item:?}")))?;
            let q = parse_rational(value).ok_or_else(|| CliError::input(format!("--params: {value:?} is not a rational \"n/d\"")))?;
            let slot = values
                .iter_mut()
                .find(|(k, _)| k == key.trim())
                .ok_or_else(|| CliError::input(format!("--params: unknown parameter {key:?} (known: k, a, b, r, rho, xi)")))?;
            slot.1 = q;
        }
        Ok(Params(values))
    }

    fn get(&self, key: &str) -> Rational {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| *v).expect("known parameter")
    }

    fn listed(&self, keys: &[&str]) -> Vec<Parameter> {
        keys.iter().map(|k| Parameter { name: k.to_string(), value: format_rational(&self.get(k)) }).collect()
    }
}

fn affine_fixed_text(m: AffineMapZ) -> String {
    match affine_analyze(m) {
        AffineFixedPoints::None => "none".to_string(),
        AffineFixedPoints::All => "all of Z".to_string(),
        AffineFixedPoints::Single(x) => format!("{{{x}}}"),
    }
}

fn check_map(doc: &LoadedDocument, name: &str) -> Result<CheckMapReport, CliError> {
    Ok(match doc.map(name)? {
        LoadedMap::Affine(m) => CheckMapReport {
            space: None,
            map: name.to_string(),
            definition: m.to_string(),
            // x -> px + q moves neighbours |p| apart.
            continuous: Some(m.p.abs() <= 1),
            discontinuity: (m.p.abs() > 1).then(|| format!("(0, 1) -> ({}, {})", m.apply(0), m.apply(1))),
            fixed_points: affine_fixed_text(*m),
        },
        LoadedMap::Table(f) => {
            let verdict = f.is_continuous();
            let fixed: Vec<String> = f.fixed_points().iter().map(ToString::to_string).collect();
            CheckMapReport {
                space: Some(SpaceSummary::of(doc.finite_space()?)),
                map: name.to_string(),
                definition: f.to_string(),
                continuous: Some(verdict.continuous),
                discontinuity: verdict.witness.map(|(x, y)| format!("({x}, {y})")),
                fixed_points: format!("{{{}}}", fixed.join(", ")),
            }
        }
    })
}

fn classify(doc: &LoadedDocument, name: &str, second: Option<&str>, params: &Params) -> Result<ClassifyReport, CliError> {
    let first = doc.map(name)?;
    if let LoadedMap::Affine(g) = first {
        return classify_affine(doc, name, *g, second, params);
    }
    let space = doc.finite_space()?;
    let f = doc.table_map(name)?;
    let g = second.map(|n| doc.table_map(n)).transpose()?;
    let mut maps = vec![name.to_string()];
    maps.extend(second.map(str::to_string));
    let keys: &[&str] = if g.is_some() { &["k", "a", "b", "r", "rho", "xi"] } else { &["k", "a", "b", "r"] };
    let conditions = if space.metric().is_exact() {
        condition_rows::<Surd>(space, f, g, params)?
    } else {
        condition_rows::<f64>(space, f, g, params)?
    };
    Ok(ClassifyReport { space: Some(SpaceSummary::of(space)), maps, parameters: params.listed(keys), conditions })
}

fn classify_affine(
    doc: &LoadedDocument,
    name: &str,
    g: AffineMapZ,
    second: Option<&str>,
    params: &Params,
) -> Result<ClassifyReport, CliError> {
    let mut conditions = vec![fixed_row(name, g)];
    let mut maps = vec![name.to_string()];
    if let Some(hn) = second {
        let LoadedMap::Affine(h) = doc.map(hn)? else {
            return Err(CliError::input("--map and --map2 must both be affine or both be tables"));
        };
        maps.push(hn.to_string());
        let rho = params.get("rho");
        let dom = affine_dominates(*h, g, rho)?;
        conditions.push(ConditionRow::simple(
            format!("|{hn}x - {hn}y| <= rho |{name}x - {name}y|"),
            dom.dominates,
            None,
        ));
        conditions.push(ConditionRow::simple(format!("{hn}(Z) ⊆ {name}(Z)"), dom.range_inclusion, None));
        conditions.push(fixed_row(hn, *h));
    }
    Ok(ClassifyReport { space: None, maps, parameters: params.listed(&["rho"]), conditions })
}

fn fixed_row(name: &str, m: AffineMapZ) -> ConditionRow {
    let fixed = affine_analyze(m);
    let mut row = ConditionRow::simple(format!("{name} has a fixed point"), fixed != AffineFixedPoints::None, None);
    row.note = Some(format!("fixed points: {}", affine_fixed_text(m)));
    row
}

fn condition_rows<S: Scalar>(
    space: &DigitalMetricSpace,
    f: &SelfMap,
    g: Option<&SelfMap>,
    p: &Params,
) -> Result<Vec<ConditionRow>, CliError> {
    let continuity = f.is_continuous();
    let mut rows = vec![
        ConditionRow::simple("continuous", continuity.continuous, continuity.witness.map(|(x, y)| format!("({x}, {y})"))),
        ConditionRow::from_report(&contraction_hypothesis::<S>(space, f)?),
        ConditionRow::from_report(&check_banach::<S>(space, f, p.get("k"))?),
        ConditionRow::from_report(&check_kannan::<S>(space, f, p.get("a"), p.get("b"))?),
        ConditionRow::from_report(&check_quasi::<S>(space, f, p.get("r"))?),
        ConditionRow::from_report(&check_ciric5::<S>(space, f, p.get("r"))?),
    ];
    if let Some(g) = g {
        let dom = check_pair_domination::<S>(space, f, g, p.get("rho"))?;
        rows.push(ConditionRow::from_report(&dom.condition));
        rows.push(ConditionRow::simple("range inclusion (map2 into map)", dom.range_inclusion, None));
        let sal = check_saluja::<S>(space, f, g, p.get("xi"))?;
        rows.push(ConditionRow::from_report(&sal.condition));
        rows.push(ConditionRow::from_report(&parv_rational_check::<S>(space, f, g)?));
        rows.push(ConditionRow::from_report(&weakly_commutative::<S>(space, f, g)?));
        rows.push(ConditionRow::from_report(&compatible::<S>(space, f, g)?));
    }
    Ok(rows)
}

fn orbit(cli: &Cli, doc: &LoadedDocument, space: &DigitalMetricSpace, name: &str, start: &str) -> Result<OrbitCommandReport, CliError> {
    let t = doc.table_map(name)?;
    let x0 = parse_point(start, "--start")?;
    let (report, scheme, maps) = match &cli.map2 {
        None => {
            let steps = cli.max_steps.unwrap_or(space.len() + 1);
            (t.orbit(&x0, steps)?, "Picard", vec![name.to_string()])
        }
        Some(sname) => {
            let s = doc.table_map(sname)?;
            let steps = cli.max_steps.unwrap_or(2 * space.len() + 1);
            (alternating_orbit(s, t, &x0, steps)?, "alternating", vec![name.to_string(), sname.clone()])
        }
    };
    Ok(OrbitCommandReport { space: SpaceSummary::of(space), maps, scheme, orbit: OrbitOut::from_report(&report) })
}

fn dispatch_theorem(space: &DigitalMetricSpace, f: &SelfMap, name: &str, theorem: Theorem, p: &Params) -> Result<TheoremCommandReport, CliError> {
    if space.metric().is_exact() {
        theorem_report::<Surd>(space, f, name, theorem, p)
    } else {
        theorem_report::<f64>(space, f, name, theorem, p)
    }
}

fn theorem_report<S: Scalar>(space: &DigitalMetricSpace, f: &SelfMap, name: &str, theorem: Theorem, p: &Params) -> Result<TheoremCommandReport, CliError> {
    Ok(match theorem {
        Theorem::Banach => TheoremCommandReport::new(space, name, "Banach contraction principle".into(), &banach_verify::<S>(space, f)?),
        Theorem::Kannan => {
            let (a, b) = (p.get("a"), p.get("b"));
            let title = format!("Kannan theorem (a={}, b={})", format_rational(&a), format_rational(&b));
            TheoremCommandReport::new(space, name, title, &kannan_verify::<S>(space, f, a, b)?)
        }
    })
}
