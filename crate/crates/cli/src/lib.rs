//! Command-line front end for `jetspace`.

pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jetspace_core::analysis::{
    btr_check, divisorial_arc, embdim_arc, embdim_jet, fiber_dim_formula, jet_codim,
    mather_discrepancy_check, omega_at_infinity, DimSource, Options, StabilizationReport, Verdict,
    DEFAULT_N_MAX, DEFAULT_WINDOW,
};
use jetspace_core::arc::FormalArc;
use jetspace_core::catalog;
use jetspace_core::document::{ArcHome, DivisorVar, Problem, TaskSpec};
use jetspace_core::invariants::{profile_of_omega, InvariantProfile, Level, DEFAULT_PRECISION_CAP};
use jetspace_core::jets::{jet_ideal, jet_jacobian_corank, jet_variable_names};
use jetspace_core::series::OrderValue;
use jetspace_core::{Error, Result};

pub use report::*;

pub const PRECISION_CAP_ENV: &str = "JETSPACE_PRECISION_CAP";
/// Highest level `oracle-check` visits when no `--n-max` is given.
pub const DEFAULT_ORACLE_LEVEL: usize = 6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PRECISION_LIMITED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "jetspace",
    version,
    about = "Arc-space and jet-scheme invariants in exact arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hasse-Schmidt equations of the n-jet scheme
    JetIdeal(DocArgs),
    /// Invariant factors and Fitting invariants of Omega along an arc
    Profile(DocArgs),
    /// Fiber dimension at level n, cross-checked against the jet Jacobian
    FiberDim(DocArgs),
    /// Embedding dimension of the jet scheme at the n-th truncation
    EmbdimJet(DocArgs),
    /// Embedding dimension of the arc space, by stabilization
    EmbdimArc(DocArgs),
    /// Jet codimension, by stabilization
    JetCodim(DocArgs),
    /// Birational transformation rule along an arc on the morphism source
    Btr(DocArgs),
    /// Maximal divisorial arc of contact order q
    Divisorial(DocArgs),
    /// Mather discrepancy check for the divisorial arc
    MatherCheck(DocArgs),
    /// Fiber-dimension formula against the jet-Jacobian corank
    OracleCheck(DocArgs),
    /// Built-in regression catalog
    Catalog(OutputArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exit with status 2 when a result is precision-limited
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DocArgs {
    /// Problem document (JSON)
    pub document: PathBuf,
    #[arg(long)]
    pub arc: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub precision: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Divisor variable of the morphism source, by name or 1-based index
    #[arg(long)]
    pub divisor_var: Option<String>,
    #[arg(long, value_enum)]
    pub dim_source: Option<DimSourceArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DimSourceArg {
    Declared,
    Betti,
}

impl From<DimSourceArg> for DimSource {
    fn from(d: DimSourceArg) -> Self {
        match d {
            DimSourceArg::Declared => DimSource::Declared,
            DimSourceArg::Betti => DimSource::Betti,
        }
    }
}

/// What a run printed and how it exits.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub format: Format,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self) -> String {
        match self.format {
            Format::Json => {
                let mut s = self.report.to_json();
                s.push('\n');
                s
            }
            Format::Text => self.report.to_text(),
        }
    }
}

pub fn error_report(e: &Error) -> Report {
    Report::Error(ErrorReport {
        kind: e.name().to_string(),
        module: e.module().to_string(),
        message: e.to_string(),
    })
}

/// Refinement cap from the environment, or the default.
pub fn options_from_env() -> Result<Options> {
    match std::env::var(PRECISION_CAP_ENV) {
        Ok(v) => {
            let cap = v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&c| c > 0)
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "{PRECISION_CAP_ENV}={v:?} is not a positive integer"
                    ))
                })?;
            Ok(Options { precision_cap: cap })
        }
        Err(_) => Ok(Options {
            precision_cap: DEFAULT_PRECISION_CAP,
        }),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> std::result::Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(execute(&cli))
}

pub fn execute(cli: &Cli) -> Outcome {
    let output = match &cli.command {
        Command::Catalog(o) => o.clone(),
        Command::JetIdeal(a)
        | Command::Profile(a)
        | Command::FiberDim(a)
        | Command::EmbdimJet(a)
        | Command::EmbdimArc(a)
        | Command::JetCodim(a)
        | Command::Btr(a)
        | Command::Divisorial(a)
        | Command::MatherCheck(a)
        | Command::OracleCheck(a) => a.output.clone(),
    };
    let result = options_from_env().and_then(|opts| dispatch(&cli.command, &opts));
    let (report, exit_code) = match result {
        Ok(report) => {
            let code = if output.strict && report.precision_limited() {
                EXIT_PRECISION_LIMITED
            } else if report.check_failed() {
                EXIT_FAILURE
            } else {
                EXIT_OK
            };
            (report, code)
        }
        Err(e) => {
            let code = if output.strict && matches!(e, Error::PrecisionLimited(_)) {
                EXIT_PRECISION_LIMITED
            } else {
                EXIT_FAILURE
            };
            (error_report(&e), code)
        }
    };
    Outcome {
        report,
        format: output.format,
        exit_code,
    }
}

fn dispatch(command: &Command, opts: &Options) -> Result<Report> {
    let (name, args) = match command {
        Command::Catalog(_) => return Ok(Report::Catalog(catalog::run(opts))),
        Command::JetIdeal(a) => ("jet-ideal", a),
        Command::Profile(a) => ("profile", a),
        Command::FiberDim(a) => ("fiber-dim", a),
        Command::EmbdimJet(a) => ("embdim-jet", a),
        Command::EmbdimArc(a) => ("embdim-arc", a),
        Command::JetCodim(a) => ("jet-codim", a),
        Command::Btr(a) => ("btr", a),
        Command::Divisorial(a) => ("divisorial", a),
        Command::MatherCheck(a) => ("mather-check", a),
        Command::OracleCheck(a) => ("oracle-check", a),
    };
    let src = std::fs::read_to_string(&args.document).map_err(|e| {
        Error::InvalidInput(format!("cannot read {}: {e}", args.document.display()))
    })?;
    let problem = Problem::from_json(&src)?;
    let ctx = Ctx::new(&problem, name, args);
    match command {
        Command::JetIdeal(_) => ctx.jet_ideal(),
        Command::Profile(_) => ctx.profile(opts),
        Command::FiberDim(_) => ctx.fiber_dim(opts),
        Command::EmbdimJet(_) => ctx.embdim_jet(opts),
        Command::EmbdimArc(_) => ctx.stabilization(opts, None),
        Command::JetCodim(_) => ctx.stabilization(opts, Some(ctx.dim_source())),
        Command::Btr(_) => ctx.btr(opts),
        Command::Divisorial(_) => ctx.divisorial(),
        Command::MatherCheck(_) => ctx.mather(opts),
        Command::OracleCheck(_) => ctx.oracle_check(opts),
        Command::Catalog(_) => unreachable!(),
    }
}

/// Flags merged with the first task of the document naming the command.
struct Ctx<'a> {
    problem: &'a Problem,
    args: &'a DocArgs,
    task: TaskSpec,
}

impl<'a> Ctx<'a> {
    fn new(problem: &'a Problem, command: &str, args: &'a DocArgs) -> Self {
        let task = problem.task(command).cloned().unwrap_or_default();
        Ctx {
            problem,
            args,
            task,
        }
    }

    fn precision(&self) -> usize {
        self.args
            .precision
            .or(self.task.precision)
            .unwrap_or_else(|| self.problem.precision())
    }

    fn n(&self) -> Result<usize> {
        self.args
            .n
            .or(self.task.n)
            .ok_or_else(|| Error::InvalidInput("a level is required (--n or a task entry)".into()))
    }

    fn n_max(&self, default: usize) -> usize {
        self.args.n_max.or(self.task.n_max).unwrap_or(default)
    }

    fn window(&self) -> usize {
        self.args
            .window
            .or(self.task.window)
            .unwrap_or(DEFAULT_WINDOW)
    }

    fn q(&self) -> usize {
        self.args.q.or(self.task.q).unwrap_or(1)
    }

    fn dim_source(&self) -> DimSource {
        self.args
            .dim_source
            .map(Into::into)
            .or(self.task.dim_source)
            .unwrap_or(if self.problem.variety.declared_dim().is_some() {
                DimSource::Declared
            } else {
                DimSource::Betti
            })
    }

    fn divisor_index(&self) -> Result<usize> {
        let var = match &self.args.divisor_var {
            Some(s) => match s.parse::<usize>() {
                Ok(i) => DivisorVar::Index(i),
                Err(_) => DivisorVar::Name(s.clone()),
            },
            None => self
                .task
                .divisor_var
                .clone()
                .unwrap_or(DivisorVar::Index(1)),
        };
        self.problem.divisor_index(&var)
    }

    fn arc_name(&self, home: ArcHome) -> Result<String> {
        if let Some(a) = self.args.arc.as_ref().or(self.task.arc.as_ref()) {
            return Ok(a.clone());
        }
        self.problem
            .document
            .arcs
            .iter()
            .find(|a| a.on == home)
            .map(|a| a.name.clone())
            .ok_or_else(|| {
                Error::InvalidInput("the document has no suitable arc; pass --arc".into())
            })
    }

    fn arc(&self, home: ArcHome) -> Result<(String, FormalArc)> {
        let name = self.arc_name(home)?;
        let spec = self.problem.arc_spec(&name)?;
        if spec.on != home {
            let want = match home {
                ArcHome::Variety => "the variety",
                ArcHome::Source => "the morphism source",
            };
            return Err(Error::InvalidInput(format!(
                "arc `{name}` does not live on {want}"
            )));
        }
        let arc = self.problem.arc(&name, self.precision())?;
        Ok((name, arc))
    }

    fn morphism(&self) -> Result<&jetspace_core::geometry::MorphismPresentation> {
        self.problem
            .morphism
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("the document has no morphism".into()))
    }

    fn jet_ideal(&self) -> Result<Report> {
        let n = self.n()?;
        let x = &self.problem.variety;
        let ideal = jet_ideal(x, n);
        Ok(Report::JetIdeal(JetIdealReport {
            level: n,
            variables: jet_variable_names(x, n),
            generators: ideal
                .flat()
                .map(|(j, p, g)| JetGenerator {
                    generator: j + 1,
                    power: p,
                    polynomial: g.to_string(),
                })
                .collect(),
        }))
    }

    fn profile(&self, opts: &Options) -> Result<Report> {
        let (name, arc) = self.arc(ArcHome::Variety)?;
        let profile = match self.args.n.or(self.task.n) {
            Some(n) => profile_of_omega(&arc, Level::Finite(n))?,
            None => omega_at_infinity(&arc, opts, None)?.profile,
        };
        let precision = profile_block(&profile);
        Ok(Report::Profile(ProfileReport {
            arc: name,
            profile,
            precision,
        }))
    }

    fn fiber_dim(&self, opts: &Options) -> Result<Report> {
        let (name, arc) = self.arc(ArcHome::Variety)?;
        let n = self.n()?;
        let f = fiber_dim_formula(&arc, n, opts)?;
        let oracle = jet_jacobian_corank(arc.variety(), n, &arc.truncate(n)?.coordinates)? as u64;
        Ok(Report::FiberDim(FiberDimReport {
            arc: name,
            level: n,
            betti: f.betti,
            value: f.value,
            oracle_corank: oracle,
            oracle_agrees: oracle == f.value,
            precision: block(f.precision, [(format!("c_{}", f.betti), f.fitting_order)]),
        }))
    }

    fn embdim_jet(&self, opts: &Options) -> Result<Report> {
        let (name, arc) = self.arc(ArcHome::Variety)?;
        let n = self.n()?;
        let e = embdim_jet(&arc, n, opts)?;
        Ok(Report::EmbdimJet(EmbdimJetReport {
            arc: name,
            level: n,
            fiber_dim: e.fiber.value,
            residue_dim: e.residue_dim.value,
            char_p_jacobian: e.residue_dim.char_p_jacobian,
            value: e.value,
            precision: block(
                e.fiber.precision,
                [(format!("c_{}", e.fiber.betti), e.fiber.fitting_order)],
            ),
        }))
    }

    /// `embdim-arc` when `source` is `None`, `jet-codim` otherwise.
    fn stabilization(&self, opts: &Options, source: Option<DimSource>) -> Result<Report> {
        let (name, arc) = self.arc(ArcHome::Variety)?;
        let (n_max, window) = (self.n_max(DEFAULT_N_MAX), self.window());
        let report = match source {
            None => embdim_arc(&arc, n_max, window, opts)?,
            Some(s) => jet_codim(&arc, s, n_max, window, opts)?,
        };
        let inf = omega_at_infinity(&arc, opts, None)?;
        let out = StabilizationOut {
            arc: name,
            interpretation: interpret(&report),
            precision: profile_block(&inf.profile),
            report,
        };
        Ok(match source {
            None => Report::EmbdimArc(out),
            Some(_) => Report::JetCodim(out),
        })
    }

    fn btr(&self, opts: &Options) -> Result<Report> {
        let f = self.morphism()?;
        let (name, beta) = self.arc(ArcHome::Source)?;
        let r = btr_check(f, &beta, self.n_max(DEFAULT_N_MAX), self.window(), opts)?;
        let mut precision = block(
            r.jacobian_precision,
            [("ord_jac_f".to_string(), r.jacobian_order)],
        );
        precision.precision_limited =
            r.precision_limited || r.source.precision_limited || r.target.precision_limited;
        Ok(Report::Btr(BtrOut {
            arc: name,
            report: r,
            precision,
        }))
    }

    fn divisorial(&self) -> Result<Report> {
        let f = self.morphism()?;
        let j = self.divisor_index()?;
        let (q, p) = (self.q(), self.precision());
        let (beta, alpha) = divisorial_arc(f, j, q, p)?;
        let show = |a: &FormalArc| -> Vec<String> {
            match a.expressions() {
                Some(es) => es.iter().map(ToString::to_string).collect(),
                None => a.components().iter().map(ToString::to_string).collect(),
            }
        };
        Ok(Report::Divisorial(DivisorialOut {
            divisor_var: f.source().ambient_vars()[j].clone(),
            q,
            working_precision: p,
            transcendentals: beta.field().transcendentals().len(),
            source_arc: show(&beta),
            target_arc: show(&alpha),
        }))
    }

    fn mather(&self, opts: &Options) -> Result<Report> {
        let f = self.morphism()?;
        let j = self.divisor_index()?;
        let p = self.precision();
        let r = mather_discrepancy_check(
            f,
            j,
            self.q(),
            p,
            self.n_max(DEFAULT_N_MAX),
            self.window(),
            opts,
        )?;
        let precision = PrecisionBlock {
            working_precision: r.embdim.precision,
            orders: BTreeMap::from([(
                "ord_jac_f".to_string(),
                OrderValue::Finite(r.jacobian_order),
            )]),
            precision_limited: r.embdim.precision_limited,
        };
        Ok(Report::MatherCheck(MatherOut {
            report: r,
            precision,
        }))
    }

    fn oracle_check(&self, opts: &Options) -> Result<Report> {
        let names: Vec<String> = match self.args.arc.as_ref().or(self.task.arc.as_ref()) {
            Some(a) => vec![a.clone()],
            None => self
                .problem
                .document
                .arcs
                .iter()
                .filter(|a| a.on == ArcHome::Variety)
                .map(|a| a.name.clone())
                .collect(),
        };
        let n_max = self.n_max(DEFAULT_ORACLE_LEVEL);
        let p = self.precision();
        let mut rows = Vec::new();
        let mut orders = BTreeMap::new();
        for name in names {
            let arc = self.problem.arc(&name, p)?;
            for n in 0..=n_max {
                let f = fiber_dim_formula(&arc, n, opts)?;
                let o =
                    jet_jacobian_corank(arc.variety(), n, &arc.truncate(n)?.coordinates)? as u64;
                orders.insert(format!("{name}/n={n}/c_{}", f.betti), f.fitting_order);
                rows.push(OracleRow {
                    arc: name.clone(),
                    level: n,
                    formula: f.value,
                    oracle: o,
                    agrees: f.value == o,
                });
            }
        }
        Ok(Report::OracleCheck(OracleOut {
            all_agree: rows.iter().all(|r| r.agrees),
            rows,
            precision: PrecisionBlock {
                working_precision: p,
                orders,
                precision_limited: false,
            },
        }))
    }
}

fn block(
    precision: usize,
    orders: impl IntoIterator<Item = (String, OrderValue)>,
) -> PrecisionBlock {
    let orders: BTreeMap<String, OrderValue> = orders.into_iter().collect();
    PrecisionBlock {
        working_precision: precision,
        precision_limited: orders.values().any(|o| !o.is_finite()),
        orders,
    }
}

/// The invariant factors behind a profile's Betti number.
fn profile_block(p: &InvariantProfile) -> PrecisionBlock {
    PrecisionBlock {
        working_precision: p.precision,
        orders: p
            .factors
            .iter()
            .enumerate()
            .map(|(i, e)| (format!("e_{i:02}"), *e))
            .collect(),
        precision_limited: p.precision_limited,
    }
}

fn interpret(r: &StabilizationReport) -> String {
    match r.verdict {
        Verdict::Stabilized(v) => format!("stabilized at {v}"),
        Verdict::NotStabilizedUpTo(n) => {
            format!("suspected infinite: no stabilization up to n={n}")
        }
    }
}
