//! Command-line front end. Each `cmd_*` function returns a [`Report`];
//! [`run`] parses arguments, prints and maps failures to exit codes:
//! 0 success, 2 bad input, 3 model inconsistency, 4 not certified,
//! 5 empty search space.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::cft::{certify_tower, genus_from_conductors};
use crate::config::{self, ConfigError, Workspace, BUILTIN};
use crate::cover::{assemble_spectrum, brute_force_compositum_count};
use crate::curve::{spectrum_from_counts, zeta_check, PlaceSpectrum};
use crate::report::{certificate_record, matches_expectation, parse_rational, render_rational, Record, Report};
use crate::search::{compare_methods, optimize, MethodComparison, MethodComparisonInput, SearchError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MODEL: i32 = 3;
pub const EXIT_NOT_CERTIFIED: i32 = 4;
pub const EXIT_EMPTY_SEARCH: i32 = 5;

/// Largest field for the brute-force compositum count.
const ORACLE_FIELD_LIMIT: u64 = 1 << 12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(String),
    #[error("model inconsistency: {0}")]
    Model(String),
    #[error("{0}")]
    EmptySearch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Model(_) => EXIT_MODEL,
            CliError::EmptySearch(_) => EXIT_EMPTY_SEARCH,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::EmptySpace { .. } => CliError::EmptySearch(e.to_string()),
            SearchError::Cft(c) => CliError::Model(c.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// A builtin config name or a path.
pub fn load_workspace(source: &str) -> Result<Workspace, CliError> {
    let text = match config::builtin(source) {
        Some(t) => t.to_string(),
        None => std::fs::read_to_string(source)
            .map_err(|e| CliError::Input(format!("cannot read `{source}`: {e} (builtin configs: {})", builtin_names())))?,
    };
    Ok(Workspace::parse(&text)?)
}

fn builtin_names() -> String {
    BUILTIN.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
}

/// A workspace with memoised spectra.
pub struct Session {
    pub workspace: Workspace,
    spectra: RefCell<BTreeMap<String, PlaceSpectrum>>,
}

impl Session {
    pub fn new(workspace: Workspace) -> Self {
        Session { workspace, spectra: RefCell::new(BTreeMap::new()) }
    }

    pub fn load(source: &str) -> Result<Self, CliError> {
        Ok(Session::new(load_workspace(source)?))
    }

    fn is_cover(&self, name: &str) -> Result<bool, CliError> {
        if self.workspace.curves.contains_key(name) {
            Ok(false)
        } else if self.workspace.covers.contains_key(name) {
            Ok(true)
        } else {
            Err(ConfigError::Unresolved { kind: "curve or cover", name: name.into() }.into())
        }
    }

    /// Spectrum of a curve (point counting) or cover (assembly) up to `dmax`.
    pub fn spectrum(&self, name: &str, dmax: u32) -> Result<PlaceSpectrum, CliError> {
        if dmax == 0 {
            return Err(CliError::Input("dmax must be positive".into()));
        }
        let cover = self.is_cover(name)?;
        if let Some(s) = self.spectra.borrow().get(name) {
            if s.max_degree() >= dmax as usize {
                return Ok(PlaceSpectrum::from_places(s.q(), s.genus(), s.places()[..dmax as usize].to_vec()));
            }
        }
        let s = if cover {
            assemble_spectrum(&self.workspace.covers[name], dmax as usize).map_err(|e| CliError::Model(e.to_string()))?
        } else {
            spectrum_from_counts(&self.workspace.curves[name], dmax as usize).map_err(|e| CliError::Model(e.to_string()))?
        };
        self.spectra.borrow_mut().insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn expected_places(&self, name: &str) -> Option<&Vec<u64>> {
        let doc = &self.workspace.document;
        doc.curves
            .iter()
            .find(|c| c.name == name)
            .and_then(|c| c.expect_places.as_ref())
            .or_else(|| doc.covers.iter().find(|c| c.name == name).and_then(|c| c.expect_places.as_ref()))
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Place and point counts, the zeta check (curves of genus at most 2) and
/// the brute-force compositum residuals (covers over small fields).
pub fn cmd_spectrum(session: &Session, name: &str, dmax: Option<u32>) -> Result<Report, CliError> {
    let dmax = dmax.or_else(|| session.expected_places(name).map(|e| e.len() as u32)).unwrap_or(5);
    let spectrum = session.spectrum(name, dmax)?;
    let cover = session.is_cover(name)?;
    let mut report = Report::default();
    let q = spectrum.q();
    report.line(format!("{} {name} over F_{q}, genus {}", if cover { "cover" } else { "curve" }, spectrum.genus()));
    report.line(format!("{:>4} {:>12} {:>14}", "d", "a_d", "N_d"));
    for d in 1..=dmax as usize {
        let (a, n) = (spectrum.places_of_degree(d), spectrum.point_count(d).unwrap_or(0));
        report.line(format!("{d:>4} {a:>12} {n:>14}"));
        report.record(Record::new("spectrum").with("name", name).with("d", d as u64).with("a_d", a).with("n_d", n));
    }
    report.line(format!("a_d = ({})", join(spectrum.places())));
    report.record(
        Record::new("spectrum_summary")
            .with("name", name)
            .with("q", q)
            .with("genus", spectrum.genus())
            .with("dmax", dmax)
            .with("places", join(spectrum.places())),
    );
    if let Err(e) = spectrum.check_weil() {
        return Err(CliError::Model(e.to_string()));
    }
    if cover {
        let spec = &session.workspace.covers[name];
        report.warn(format!(
            "cover {name}: fibres above infinity and above the conductor support are declared, not computed; \
             independence of the {} components is assumed",
            spec.rank()
        ));
        for n in 1..=2u32.min(dmax) {
            if q.checked_pow(n).map_or(true, |size| size > ORACLE_FIELD_LIMIT) {
                break;
            }
            let c = brute_force_compositum_count(spec, n).map_err(|e| CliError::Model(e.to_string()))?;
            report.line(format!(
                "oracle n={n}: {} affine points with A ≠ 0, {} on A = 0, N_n = {} of which {} declared, residual {}",
                c.regular_points, c.singular_points, c.spectrum_points, c.declared_points, c.residual
            ));
            report.record(
                Record::new("oracle")
                    .with("name", name)
                    .with("n", n)
                    .with("regular_points", c.regular_points)
                    .with("singular_points", c.singular_points)
                    .with("spectrum_points", c.spectrum_points)
                    .with("declared_points", c.declared_points)
                    .with_int("residual", c.residual),
            );
            if c.residual != 0 {
                report.warn(format!("oracle residual {} at n = {n}", c.residual));
                report.status = EXIT_MODEL;
            }
        }
    } else if spectrum.genus() <= 2 && dmax as u64 >= (2 * spectrum.genus()).max(1) {
        let z = zeta_check(&spectrum).map_err(|e| CliError::Model(e.to_string()))?;
        report.line(format!("L(T) coefficients: ({})", join(&z.l_coefficients)));
        report.line(format!("zeta check: {} predictions, max discrepancy {}", z.predictions.len(), z.max_discrepancy()));
        report.record(
            Record::new("zeta")
                .with("name", name)
                .with("l_coefficients", join(&z.l_coefficients))
                .with("predictions", z.predictions.len() as u64)
                .with_int("max_discrepancy", z.max_discrepancy()),
        );
    }
    Ok(report)
}

fn certify_one(session: &Session, name: &str) -> Result<Report, CliError> {
    let resolved = session.workspace.plan(name)?;
    let plan = &resolved.plan;
    if let Some(over) = &resolved.over {
        let dmax = plan.entries().iter().map(|e| e.degree).max().unwrap_or(1);
        let spectrum = session.spectrum(over, dmax)?;
        plan.validate_against(&spectrum).map_err(|e| CliError::Input(format!("plan `{name}`: {e}")))?;
    }
    let cert = certify_tower(resolved.genus, plan).map_err(|e| CliError::Input(format!("plan `{name}`: {e}")))?;
    let mut report = Report::default();
    report.line(format!("plan {name}: {plan}, base genus {}", resolved.genus));
    report.line(format!("  d ≥ {}, r - d ≤ {}", cert.d_lower, cert.rd_upper));
    report.line(format!(
        "  side condition t ≤ {}: {}",
        cert.side_condition_cap,
        if cert.side_condition { "holds" } else { "fails" }
    ));
    report.line(format!("  Golod–Shafarevich margin d² - 4d - 4(r - d) = {}", cert.gs_margin));
    if cert.infinite {
        report.line("  tower is infinite");
        if let (Some(b), Some(br)) = (&cert.bound, &cert.bound_refined) {
            report.line(format!("  A(q) ≥ {}", render_rational(b)));
            report.line(format!("  A(q) ≥ {} (refined)", render_rational(br)));
        }
    } else {
        let why = if !cert.side_condition {
            format!("t = {} exceeds {}", plan.t(), cert.side_condition_cap)
        } else if cert.d_lower < 2 {
            format!("d ≥ {} leaves no room for the inequality", cert.d_lower)
        } else {
            format!("{}² - 4·{} - 4·{} = {} < 0", cert.d_lower, cert.d_lower, cert.rd_upper, cert.gs_margin)
        };
        report.line(format!("  not certified: {why}"));
        report.status = EXIT_NOT_CERTIFIED;
    }
    if cert.refinement_exponent_differs {
        report.warn(format!(
            "plan {name}: the refined bound damps each place of degree f by 1 - q^(-f), \
             although its local unit rank exceeds f"
        ));
    }
    report.record(certificate_record(name, resolved.genus, plan, &cert));
    Ok(report)
}

/// Certifies one plan, or every plan of the workspace.
pub fn cmd_certify(session: &Session, name: Option<&str>) -> Result<Report, CliError> {
    let names: Vec<String> = match name {
        Some(n) => vec![n.to_string()],
        None => session.workspace.plans.keys().cloned().collect(),
    };
    if names.is_empty() {
        return Err(CliError::Input("no plans configured".into()));
    }
    let mut report = Report::default();
    for n in names {
        report.merge(certify_one(session, &n)?);
    }
    Ok(report)
}

/// Runs the configured search; `t_sweep` widens `t` to `1..=a_1`.
pub fn cmd_optimize(session: &Session, top: Option<usize>, t_sweep: bool) -> Result<Report, CliError> {
    let search = session.workspace.search.as_ref().ok_or_else(|| CliError::Input("no [search] section".into()))?;
    let spectrum = session.spectrum(&search.over, search.dmax)?;
    let a1 = spectrum.places_of_degree(1);
    let mut space = session.workspace.search_space(spectrum)?;
    if t_sweep {
        space = space.with_t_values((1..=a1).collect());
    }
    if let Some(n) = top {
        space = space.with_top_n(n);
    }
    let outcome = optimize(&space)?;
    let mut report = Report::default();
    report.line(format!(
        "search over {} (genus {}): {} candidates, {} infeasible, {} certified",
        search.over, search.genus, outcome.evaluated, outcome.infeasible, outcome.certified
    ));
    report.record(
        Record::new("search")
            .with("over", search.over.as_str())
            .with("genus", search.genus)
            .with("evaluated", outcome.evaluated)
            .with("infeasible", outcome.infeasible)
            .with("certified", outcome.certified),
    );
    for (i, r) in outcome.ranked.iter().enumerate() {
        let cert = &r.certificate;
        let marker = if i == 0 { "best" } else { "    " };
        report.line(format!(
            "{marker} #{:<3} {}  margin {:>6}  {}{}",
            i + 1,
            render_rational(r.bound_refined()),
            cert.gs_margin,
            r.plan,
            if r.injected { "  [injected]" } else { "" }
        ));
        report.record(
            certificate_record(&format!("rank{}", i + 1), search.genus, &r.plan, cert)
                .with("rank", i as u64 + 1)
                .with("injected", r.injected),
        );
        if cert.refinement_exponent_differs && i == 0 {
            report.warn("top plan: the refined bound uses damping 1 - q^(-f) although the local unit rank exceeds f");
        }
    }
    Ok(report)
}

fn comparison_report(name: &str, c: &MethodComparison) -> Report {
    let mut report = Report::default();
    let i = &c.input;
    report.line(format!(
        "{name}: s = {}, l = {}, t = {}, s' = {}, |T| = {}, p = {}",
        i.s, i.l, i.t, i.s_prime, i.t_size, i.p
    ));
    for (label, pair) in [("usual", &c.usual), ("ours", &c.ours)] {
        report.line(format!(
            "  {label:<5} d ≥ {}, r - d ≤ {}  ({})",
            pair.d_lower,
            pair.rd_upper,
            if pair.infinite { "infinite" } else { "inconclusive" }
        ));
    }
    report.record(
        Record::new("comparison")
            .with("name", name)
            .with("s", i.s)
            .with("l", i.l)
            .with("t", i.t)
            .with("s_prime", i.s_prime)
            .with("t_size", i.t_size)
            .with("p", i.p)
            .with_int("usual_d_lower", c.usual.d_lower)
            .with_int("usual_rd_upper", c.usual.rd_upper)
            .with("usual_infinite", c.usual.infinite)
            .with_int("ours_d_lower", c.ours.d_lower)
            .with_int("ours_rd_upper", c.ours.rd_upper)
            .with("ours_infinite", c.ours.infinite),
    );
    report
}

/// Compares the two inequality systems for an inline input or for the
/// configured comparisons.
pub fn cmd_compare(
    session: Option<&Session>,
    name: Option<&str>,
    inline: Option<MethodComparisonInput>,
) -> Result<Report, CliError> {
    if let Some(input) = inline {
        return Ok(comparison_report(name.unwrap_or("inline"), &compare_methods(input)));
    }
    let session = session.ok_or_else(|| CliError::Input("compare needs --config or all of --s --l --t --s-prime --t-size --p".into()))?;
    let all = &session.workspace.comparisons;
    let chosen: Vec<(&String, &MethodComparisonInput)> = match name {
        Some(n) => vec![all
            .get_key_value(n)
            .ok_or_else(|| ConfigError::Unresolved { kind: "comparison", name: n.into() })?],
        None => all.iter().collect(),
    };
    if chosen.is_empty() {
        return Err(CliError::Input("no comparisons configured".into()));
    }
    let mut report = Report::default();
    for (n, input) in chosen {
        report.merge(comparison_report(n, &compare_methods(*input)));
    }
    Ok(report)
}

struct Checks<'a> {
    report: &'a mut Report,
    config: &'a str,
}

impl Checks<'_> {
    fn check(&mut self, what: String, ok: bool, detail: String) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        self.report.line(format!("{verdict} {}: {what}{}", self.config, if ok { String::new() } else { format!(" ({detail})") }));
        self.report.record(
            Record::new("selftest").with("config", self.config).with("check", what).with("pass", ok).with("detail", detail),
        );
        if !ok {
            self.report.status = EXIT_MODEL;
        }
    }

    fn check_result<T>(&mut self, what: String, r: Result<T, CliError>, f: impl FnOnce(T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (ok, detail) = f(v);
                self.check(what, ok, detail);
            }
            Err(e) => self.check(what, false, e.to_string()),
        }
    }
}

fn selftest_session(session: &Session, checks: &mut Checks<'_>) {
    let doc = &session.workspace.document;
    let targets = doc
        .curves
        .iter()
        .map(|c| (c.name.as_str(), c.expect_places.as_ref(), false))
        .chain(doc.covers.iter().map(|c| (c.name.as_str(), c.expect_places.as_ref(), true)));
    for (name, expected, cover) in targets {
        if let Some(exp) = expected {
            checks.check_result(format!("spectrum {name}"), session.spectrum(name, exp.len() as u32), |s| {
                (s.places() == exp.as_slice(), format!("got ({})", join(s.places())))
            });
        }
        if cover {
            let spec = &session.workspace.covers[name];
            for n in 1..=2 {
                let r = brute_force_compositum_count(spec, n).map_err(|e| CliError::Model(e.to_string()));
                checks.check_result(format!("oracle residual {name} n={n}"), r, |c| (c.residual == 0, format!("residual {}", c.residual)));
            }
        } else {
            let genus = session.workspace.curves[name].genus();
            if genus <= 2 {
                let dmax = expected.map_or(0, |e| e.len() as u32).max(4).max(2 * genus as u32);
                let r = session
                    .spectrum(name, dmax)
                    .and_then(|s| zeta_check(&s).map_err(|e| CliError::Model(e.to_string())));
                checks.check_result(format!("zeta {name}"), r, |z| (z.max_discrepancy() == 0, format!("discrepancy {}", z.max_discrepancy())));
            }
        }
    }
    for pr in &doc.profiles {
        if let Some(exp) = pr.expect_genus {
            let (profile, base_genus) = &session.workspace.profiles[&pr.name];
            let r = genus_from_conductors(*base_genus, profile).map_err(|e| CliError::Model(e.to_string()));
            checks.check_result(format!("genus {}", pr.name), r, |g| (g == exp, format!("got {g}")));
        }
    }
    for pl in &doc.plans {
        let rp = &session.workspace.plans[&pl.name];
        let cert = certify_tower(rp.genus, &rp.plan);
        let cert = match cert {
            Ok(c) => c,
            Err(e) => {
                checks.check(format!("certify {}", pl.name), false, e.to_string());
                continue;
            }
        };
        if let Some(m) = pl.expect_margin {
            checks.check(format!("margin {}", pl.name), cert.gs_margin == m as i128, format!("got {}", cert.gs_margin));
            checks.check(format!("side condition {}", pl.name), cert.side_condition, format!("cap {}", cert.side_condition_cap));
        }
        if let Some(inf) = pl.expect_infinite {
            checks.check(format!("infinite {}", pl.name), cert.infinite == inf, format!("got {}", cert.infinite));
        }
        for (label, exp, got) in [
            ("bound", &pl.expect_bound, &cert.bound),
            ("refined bound", &pl.expect_bound_refined, &cert.bound_refined),
        ] {
            if let Some(exp) = exp {
                let ok = got.as_ref().is_some_and(|b| matches_expectation(b, exp));
                let detail = got.as_ref().map_or("none".into(), render_rational);
                checks.check(format!("{label} {}", pl.name), ok, detail);
            }
        }
    }
    if let (Some(s), Some(rs)) = (&doc.search, &session.workspace.search) {
        if let Some(exp) = &s.expect_top_at_least {
            let r = session
                .spectrum(&rs.over, rs.dmax)
                .and_then(|sp| Ok(session.workspace.search_space(sp)?))
                .and_then(|space| Ok(optimize(&space)?));
            checks.check_result(format!("search {}", rs.over), r, |o| {
                let best = o.best().bound_refined();
                let ok = parse_rational(exp).is_some_and(|e| *best >= e) || matches_expectation(best, exp);
                (ok, format!("best {}", render_rational(best)))
            });
        }
    }
    for c in &doc.comparisons {
        let out = compare_methods(session.workspace.comparisons[&c.name]);
        for (label, exp, pair) in [("usual", c.expect_usual, out.usual), ("ours", c.expect_ours, out.ours)] {
            if let Some((d, rd)) = exp {
                let ok = pair.d_lower == d as i128 && pair.rd_upper == rd as i128;
                checks.check(format!("compare {} {label}", c.name), ok, format!("got ({}, {})", pair.d_lower, pair.rd_upper));
            }
        }
    }
}

/// Re-derives every expectation recorded in the builtin configs.
pub fn cmd_selftest() -> Result<Report, CliError> {
    let mut report = Report::default();
    for (name, _) in BUILTIN {
        let session = Session::load(name)?;
        let mut checks = Checks { report: &mut report, config: name };
        selftest_session(&session, &mut checks);
    }
    let failed = report.records.iter().filter(|r| r.get("pass").and_then(|v| v.as_bool()) == Some(false)).count();
    report.line(format!("{} checks, {failed} failed", report.records.len()));
    Ok(report)
}

#[derive(Debug, Parser)]
#[command(name = "ihara", version, about = "Certified class field towers and lower bounds for Ihara's constant")]
pub struct Cli {
    /// Configuration file, or one of the builtin names.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Emit JSON lines instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Place spectrum of a curve or cover.
    Spectrum {
        #[arg(long)]
        name: String,
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Certify a plan (all plans when no name is given).
    Certify {
        #[arg(long)]
        name: Option<String>,
    },
    /// Search ramification plans for the best bound.
    Optimize {
        #[arg(long)]
        top: Option<usize>,
        /// Also vary the number of split places.
        #[arg(long)]
        t_sweep: bool,
    },
    /// Generator and relation bounds of the two tower constructions.
    Compare {
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        inline: InlineComparison,
    },
    /// Check every expectation of the builtin configs.
    Selftest,
}

#[derive(Debug, Args)]
pub struct InlineComparison {
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub l: Option<u64>,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub s_prime: Option<u64>,
    #[arg(long)]
    pub t_size: Option<u64>,
    #[arg(long)]
    pub p: Option<u32>,
}

impl InlineComparison {
    fn resolve(&self) -> Result<Option<MethodComparisonInput>, CliError> {
        match (self.s, self.l, self.t, self.s_prime, self.t_size, self.p) {
            (None, None, None, None, None, None) => Ok(None),
            (Some(s), Some(l), Some(t), Some(s_prime), Some(t_size), Some(p)) => {
                Ok(Some(MethodComparisonInput { s, l, t, s_prime, t_size, p }))
            }
            _ => Err(CliError::Input("inline comparison needs all of --s --l --t --s-prime --t-size --p".into())),
        }
    }
}

fn session_for(cli: &Cli) -> Result<Session, CliError> {
    let source = cli.config.as_deref().ok_or_else(|| CliError::Input(format!("--config is required (builtin: {})", builtin_names())))?;
    Session::load(source)
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Spectrum { name, dmax } => cmd_spectrum(&session_for(cli)?, name, *dmax),
        Command::Certify { name } => cmd_certify(&session_for(cli)?, name.as_deref()),
        Command::Optimize { top, t_sweep } => cmd_optimize(&session_for(cli)?, *top, *t_sweep),
        Command::Compare { name, inline } => {
            let inline = inline.resolve()?;
            let session = if inline.is_none() { Some(session_for(cli)?) } else { None };
            cmd_compare(session.as_ref(), name.as_deref(), inline)
        }
        Command::Selftest => cmd_selftest(),
    }
}

/// Parses `args`, runs the command and writes its output; returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(CliError::Input("--jobs must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Input(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result {
        Ok(report) => {
            let text = if cli.json { report.render_json() } else { report.render_text() };
            let _ = out.write_all(text.as_bytes());
            report.status
        }
        Err(e) => {
            if cli.json {
                let rec = Record::new("error").with("message", e.to_string()).with("exit_code", e.exit_code());
                let _ = writeln!(out, "{}", rec.to_json_line());
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

