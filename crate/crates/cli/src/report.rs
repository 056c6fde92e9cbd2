//! Machine-readable reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use jetspace_core::analysis::{BtrReport, MatherReport, StabilizationReport, Verdict};
use jetspace_core::catalog::CatalogReport;
use jetspace_core::invariants::{InvariantProfile, Level};
use jetspace_core::series::OrderValue;
use serde::{Deserialize, Serialize};

/// Orders that fed a numeric answer, with the precision they were read at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionBlock {
    pub working_precision: usize,
    pub orders: BTreeMap<String, OrderValue>,
    pub precision_limited: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetGenerator {
    pub generator: usize,
    pub power: usize,
    pub polynomial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetIdealReport {
    pub level: usize,
    pub variables: Vec<String>,
    pub generators: Vec<JetGenerator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub arc: String,
    pub profile: InvariantProfile,
    pub precision: PrecisionBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDimReport {
    pub arc: String,
    pub level: usize,
    pub betti: usize,
    pub value: u64,
    pub oracle_corank: u64,
    pub oracle_agrees: bool,
    pub precision: PrecisionBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbdimJetReport {
    pub arc: String,
    pub level: usize,
    pub fiber_dim: u64,
    pub residue_dim: usize,
    pub char_p_jacobian: bool,
    pub value: u64,
    pub precision: PrecisionBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationOut {
    pub arc: String,
    pub interpretation: String,
    pub report: StabilizationReport,
    pub precision: PrecisionBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BtrOut {
    pub arc: String,
    pub report: BtrReport,
    pub precision: PrecisionBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorialOut {
    pub divisor_var: String,
    pub q: usize,
    pub working_precision: usize,
    pub transcendentals: usize,
    pub source_arc: Vec<String>,
    pub target_arc: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatherOut {
    pub report: MatherReport,
    pub precision: PrecisionBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub arc: String,
    pub level: usize,
    pub formula: u64,
    pub oracle: u64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOut {
    pub rows: Vec<OracleRow>,
    pub all_agree: bool,
    pub precision: PrecisionBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub module: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "kebab-case")]
pub enum Report {
    JetIdeal(JetIdealReport),
    Profile(ProfileReport),
    FiberDim(FiberDimReport),
    EmbdimJet(EmbdimJetReport),
    EmbdimArc(StabilizationOut),
    JetCodim(StabilizationOut),
    Btr(BtrOut),
    Divisorial(DivisorialOut),
    MatherCheck(MatherOut),
    OracleCheck(OracleOut),
    Catalog(CatalogReport),
    Error(ErrorReport),
}

impl Report {
    pub fn precision_limited(&self) -> bool {
        match self {
            Report::Profile(r) => r.precision.precision_limited,
            Report::FiberDim(r) => r.precision.precision_limited,
            Report::EmbdimJet(r) => r.precision.precision_limited,
            Report::EmbdimArc(r) | Report::JetCodim(r) => r.precision.precision_limited,
            Report::Btr(r) => r.precision.precision_limited,
            Report::MatherCheck(r) => r.precision.precision_limited,
            Report::OracleCheck(r) => r.precision.precision_limited,
            Report::JetIdeal(_) | Report::Divisorial(_) | Report::Catalog(_) | Report::Error(_) => {
                false
            }
        }
    }

    /// Whether a check carried by the report failed.
    pub fn check_failed(&self) -> bool {
        match self {
            Report::FiberDim(r) => !r.oracle_agrees,
            Report::Btr(r) => !r.report.inequalities_hold || r.report.equality_holds == Some(false),
            Report::MatherCheck(r) => {
                !r.report.embdim_matches || r.report.bound_holds == Some(false)
            }
            Report::OracleCheck(r) => !r.all_agree,
            Report::Catalog(r) => !r.all_passed(),
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Report::JetIdeal(r) => {
                let _ = writeln!(
                    s,
                    "jet ideal at level {} in {} variables",
                    r.level,
                    r.variables.len()
                );
                for g in &r.generators {
                    let _ = writeln!(s, "  F[{},{}] = {}", g.generator, g.power, g.polynomial);
                }
            }
            Report::Profile(r) => {
                let p = &r.profile;
                let level = match p.level {
                    Level::Finite(n) => n.to_string(),
                    Level::Infinite => "inf".into(),
                };
                let _ = writeln!(s, "arc {} level {level} precision {}", r.arc, p.precision);
                let _ = writeln!(s, "  betti      {}", p.betti);
                let _ = writeln!(s, "  factors    [{}]", join(&p.factors));
                let _ = writeln!(s, "  fitting    [{}]", join(&p.fitting));
                if p.precision_limited {
                    let _ = writeln!(s, "  precision-limited: betti is an upper bound");
                }
            }
            Report::FiberDim(r) => {
                let _ = writeln!(s, "arc {} level {}", r.arc, r.level);
                let _ = writeln!(s, "  fiber dimension  {}", r.value);
                let _ = writeln!(s, "  betti d_n        {}", r.betti);
                let _ = writeln!(
                    s,
                    "  oracle corank    {} ({})",
                    r.oracle_corank,
                    agree(r.oracle_agrees)
                );
                write_orders(&mut s, &r.precision);
            }
            Report::EmbdimJet(r) => {
                let _ = writeln!(s, "arc {} level {}", r.arc, r.level);
                let _ = writeln!(s, "  embedding dimension  {}", r.value);
                let _ = writeln!(s, "  fiber dimension      {}", r.fiber_dim);
                let _ = writeln!(s, "  residue dimension    {}", r.residue_dim);
                write_orders(&mut s, &r.precision);
            }
            Report::EmbdimArc(r) | Report::JetCodim(r) => {
                write_stabilization(&mut s, &r.arc, &r.report);
                let _ = writeln!(s, "  {}", r.interpretation);
            }
            Report::Btr(r) => {
                let b = &r.report;
                let _ = writeln!(s, "arc {}", r.arc);
                let _ = writeln!(s, "  ord Jac_f          {}", b.jacobian_order);
                let _ = writeln!(s, "  embdim source      {}", opt(b.embdim_source));
                let _ = writeln!(s, "  embdim target      {}", opt(b.embdim_target));
                let _ = writeln!(s, "  smooth at center   {}", b.smooth_at_center);
                let _ = writeln!(s, "  inequalities       {}", agree(b.inequalities_hold));
                if let Some(e) = b.equality_holds {
                    let _ = writeln!(s, "  equality           {}", agree(e));
                }
            }
            Report::Divisorial(r) => {
                let _ = writeln!(
                    s,
                    "contact order {} along {} = 0, precision {}, {} transcendentals",
                    r.q, r.divisor_var, r.working_precision, r.transcendentals
                );
                for (i, c) in r.source_arc.iter().enumerate() {
                    let _ = writeln!(s, "  beta[{i}]  = {c}");
                }
                for (i, c) in r.target_arc.iter().enumerate() {
                    let _ = writeln!(s, "  alpha[{i}] = {c}");
                }
            }
            Report::MatherCheck(r) => {
                let m = &r.report;
                let _ = writeln!(s, "contact order {} along {} = 0", m.q, m.divisor_var);
                let _ = writeln!(s, "  ord Jac_f          {}", m.jacobian_order);
                let _ = writeln!(s, "  discrepancy        {}", m.discrepancy);
                let _ = writeln!(s, "  expected embdim    {}", m.expected_embdim);
                let _ = writeln!(s, "  computed embdim    {}", verdict(&m.embdim.verdict));
                let _ = writeln!(s, "  match              {}", agree(m.embdim_matches));
                if let Some(b) = m.bound_holds {
                    let _ = writeln!(s, "  k+1 >= dim X ({})   {}", m.dim_x, agree(b));
                }
            }
            Report::OracleCheck(r) => {
                let _ = writeln!(
                    s,
                    "{:<20} {:>5} {:>8} {:>8}",
                    "arc", "n", "formula", "oracle"
                );
                for row in &r.rows {
                    let _ = writeln!(
                        s,
                        "{:<20} {:>5} {:>8} {:>8}{}",
                        row.arc,
                        row.level,
                        row.formula,
                        row.oracle,
                        if row.agrees { "" } else { "  MISMATCH" }
                    );
                }
            }
            Report::Catalog(r) => {
                let _ = writeln!(
                    s,
                    "{:<14} {:<22} {:>7}  failed checks",
                    "case", "arc", "checks"
                );
                for c in &r.cases {
                    let failed: Vec<&str> = c
                        .checks
                        .iter()
                        .filter(|k| !k.passed)
                        .map(|k| k.check.as_str())
                        .collect();
                    let _ = writeln!(
                        s,
                        "{:<14} {:<22} {:>7}  {}",
                        c.case,
                        c.arc,
                        c.checks.len(),
                        failed.join(" ")
                    );
                }
                let _ = writeln!(s, "{} checks, {} failed", r.total_checks, r.failed_checks);
            }
            Report::Error(e) => {
                let _ = writeln!(s, "error[{}] ({}): {}", e.kind, e.module, e.message);
            }
        }
        s
    }
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn agree(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "not stabilized".into(), |x| x.to_string())
}

fn verdict(v: &Verdict) -> String {
    match v {
        Verdict::Stabilized(x) => format!("stabilized at {x}"),
        Verdict::NotStabilizedUpTo(n) => format!("not stabilized up to n={n}"),
    }
}

fn write_orders(s: &mut String, p: &PrecisionBlock) {
    for (k, v) in &p.orders {
        let _ = writeln!(s, "  {k:<16} {v} (precision {})", p.working_precision);
    }
}

fn write_stabilization(s: &mut String, arc: &str, r: &StabilizationReport) {
    let _ = writeln!(
        s,
        "arc {arc}: D = {} ({:?}), betti at infinity {}{}",
        r.dimension,
        r.dimension_source,
        r.betti_at_infinity,
        if r.precision_limited {
            " (precision-limited)"
        } else {
            ""
        }
    );
    let _ = writeln!(s, "  {:>3} {:>5} {:>8} {:>6}", "n", "d_n", "dim a_n", "s_n");
    for row in &r.sequence {
        let _ = writeln!(
            s,
            "  {:>3} {:>5} {:>8} {:>6}",
            row.n, row.betti, row.residue_dim, row.value
        );
    }
    let _ = writeln!(
        s,
        "  verdict: {} (window {})",
        verdict(&r.verdict),
        r.window
    );
}
