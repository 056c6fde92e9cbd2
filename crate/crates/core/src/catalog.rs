//! Built-in regression catalog: small varieties with hand-picked arcs, and
//! blow-up charts for the divisorial checks. Every closed formula is
//! compared against its brute-force counterpart.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::BaseField;
use crate::analysis::{
    btr_check, divisorial_arc, embdim_arc, fiber_dim_formula, jet_codim, mather_discrepancy_check,
    DimSource, Options, StabilizationReport, Verdict, DEFAULT_N_MAX, DEFAULT_WINDOW,
};
use crate::arc::FormalArc;
use crate::document::{
    ArcSpec, GenericSeries, MorphismSpec, Problem, ProblemDocument, VarietySpec,
};
use crate::error::Result;
use crate::invariants::{profile_of_omega, Level};
use crate::jets::jet_jacobian_corank;

/// Working precision of catalog arcs; generic series carry this many
/// coefficients.
pub const CATALOG_PRECISION: usize = 16;
pub const ORACLE_MAX_LEVEL: usize = 6;
pub const TRUNCATION_MAX_LEVEL: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Expected {
    Stabilized(u64),
    /// Not stabilized, with `s_n` strictly increasing throughout.
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct CatalogArc {
    pub name: String,
    pub expected: Expected,
}

#[derive(Debug, Clone)]
pub struct CatalogVariety {
    pub name: String,
    pub problem: Problem,
    pub arcs: Vec<CatalogArc>,
}

#[derive(Debug, Clone)]
pub struct CatalogMorphism {
    pub name: String,
    pub problem: Problem,
    pub divisor_var: usize,
    pub contact_orders: Vec<usize>,
}

struct ArcDef {
    name: &'static str,
    comps: Vec<String>,
    generic: Vec<(&'static str, &'static str, usize)>,
    expected: Expected,
}

fn def(
    name: &'static str,
    comps: &[&str],
    generic: &[(&'static str, &'static str, usize)],
    expected: Expected,
) -> ArcDef {
    ArcDef {
        name,
        comps: comps.iter().map(|s| s.to_string()).collect(),
        generic: generic.to_vec(),
        expected,
    }
}

fn variety(
    name: String,
    field: BaseField,
    transcendentals: &[&str],
    vars: &[&str],
    gens: &[String],
    dim: usize,
    arcs: Vec<ArcDef>,
) -> CatalogVariety {
    let document = ProblemDocument {
        field,
        transcendentals: transcendentals.iter().map(|s| s.to_string()).collect(),
        variety: VarietySpec {
            variables: vars.iter().map(|s| s.to_string()).collect(),
            generators: gens.to_vec(),
            declared_dim: Some(dim),
        },
        arcs: arcs
            .iter()
            .map(|a| ArcSpec {
                name: a.name.to_string(),
                components: a.comps.clone(),
                generic: a
                    .generic
                    .iter()
                    .map(|&(symbol, prefix, from)| GenericSeries {
                        symbol: symbol.into(),
                        prefix: prefix.into(),
                        from,
                    })
                    .collect(),
                on: Default::default(),
            })
            .collect(),
        morphism: None,
        precision: Some(CATALOG_PRECISION),
        tasks: Vec::new(),
    };
    CatalogVariety {
        name,
        problem: Problem::new(document).expect("catalog documents are valid"),
        arcs: arcs
            .into_iter()
            .map(|a| CatalogArc {
                name: a.name.to_string(),
                expected: a.expected,
            })
            .collect(),
    }
}

pub fn varieties() -> Vec<CatalogVariety> {
    use Expected::*;
    let q = BaseField::Rationals;
    let mut out = vec![
        variety(
            "A1".into(),
            q,
            &[],
            &["x"],
            &[],
            1,
            vec![
                def("origin", &["0"], &[], Unbounded),
                def("generic", &["s"], &[("s", "a", 0)], Stabilized(0)),
                def("t2-t3", &["t^2 + t^3"], &[], Unbounded),
            ],
        ),
        variety(
            "A2".into(),
            q,
            &[],
            &["x", "y"],
            &[],
            2,
            vec![
                def(
                    "generic",
                    &["r", "s"],
                    &[("r", "a", 0), ("s", "b", 0)],
                    Stabilized(0),
                ),
                def("line", &["t", "2*t"], &[], Unbounded),
                def(
                    "through-origin",
                    &["r", "s"],
                    &[("r", "a", 1), ("s", "b", 1)],
                    Stabilized(2),
                ),
            ],
        ),
        variety(
            "cusp".into(),
            q,
            &[],
            &["x", "y"],
            &["y^2 - x^3".into()],
            1,
            vec![
                def("t2-t3", &["t^2", "t^3"], &[], Unbounded),
                def(
                    "through-singular",
                    &["s^2", "s^3"],
                    &[("s", "a", 1)],
                    Stabilized(2),
                ),
                def(
                    "smooth-generic",
                    &["s^2", "s^3"],
                    &[("s", "a", 0)],
                    Stabilized(0),
                ),
            ],
        ),
        variety(
            "node".into(),
            q,
            &[],
            &["x", "y"],
            &["y^2 - x^2*(x + 1)".into()],
            1,
            vec![
                def(
                    "branch",
                    &["(1 + t)^2 - 1", "(1 + t)*((1 + t)^2 - 1)"],
                    &[],
                    Unbounded,
                ),
                def(
                    "through-node",
                    &["(1 + s)^2 - 1", "(1 + s)*((1 + s)^2 - 1)"],
                    &[("s", "a", 1)],
                    Stabilized(1),
                ),
                def(
                    "generic",
                    &["m^2 - 1", "m*(m^2 - 1)"],
                    &[("m", "a", 0)],
                    Stabilized(0),
                ),
            ],
        ),
        variety(
            "whitney".into(),
            q,
            &[],
            &["x", "y", "z"],
            &["x*y^2 - z^2".into()],
            2,
            vec![
                def("line", &["t", "0", "0"], &[], Unbounded),
                def(
                    "singular-generic",
                    &["s", "0", "0"],
                    &[("s", "a", 0)],
                    Unbounded,
                ),
                def(
                    "generic",
                    &["w^2", "v", "w*v"],
                    &[("w", "a", 0), ("v", "b", 0)],
                    Stabilized(0),
                ),
                def("special", &["t^2", "t", "t^2"], &[], Unbounded),
            ],
        ),
    ];
    for k in 1..=3u32 {
        let e = k + 1;
        out.push(variety(
            format!("A{k}"),
            q,
            &["c"],
            &["x", "y", "z"],
            &[format!("x*y - z^{e}")],
            2,
            vec![
                def("monomial", &[&format!("t^{e}"), "1", "t"], &[], Unbounded),
                def(
                    "unit-twist",
                    &[&format!("(1 + c*t)*t^{e}"), "1/(1 + c*t)", "t"],
                    &[],
                    Unbounded,
                ),
                def(
                    "generic",
                    &[&format!("r^{e}"), &format!("s^{e}"), "r*s"],
                    &[("r", "a", 0), ("s", "b", 0)],
                    Stabilized(0),
                ),
            ],
        ));
    }
    for p in [2u64, 3] {
        out.push(variety(
            format!("whitney-F{p}"),
            BaseField::prime(p).expect("prime"),
            &[],
            &["x", "y", "z"],
            &[format!("x*y^{p} - z^{p}")],
            2,
            vec![
                def("line", &["t", "0", "0"], &[], Unbounded),
                def(
                    "generic",
                    &[&format!("w^{p}"), "v", "w*v"],
                    &[("w", "a", 0), ("v", "b", 0)],
                    Stabilized(0),
                ),
                def("special", &[&format!("t^{p}"), "t", "t^2"], &[], Unbounded),
            ],
        ));
    }
    out
}

/// Chart `(u, v, ...) -> (u, u v, ...)` of the blow-up of the origin in
/// `A^dim`.
pub fn blowup_chart(dim: usize) -> Problem {
    assert!((1..=3).contains(&dim));
    let src = ["u", "v", "w"];
    let tgt = ["x", "y", "z"];
    let mut comps = vec!["u".to_string()];
    comps.extend(src[1..dim].iter().map(|v| format!("u*{v}")));
    Problem::new(ProblemDocument {
        field: BaseField::Rationals,
        transcendentals: Vec::new(),
        variety: VarietySpec {
            variables: tgt[..dim].iter().map(|s| s.to_string()).collect(),
            generators: Vec::new(),
            declared_dim: Some(dim),
        },
        arcs: Vec::new(),
        morphism: Some(MorphismSpec {
            source: VarietySpec {
                variables: src[..dim].iter().map(|s| s.to_string()).collect(),
                generators: Vec::new(),
                declared_dim: Some(dim),
            },
            components: comps,
        }),
        precision: Some(CATALOG_PRECISION),
        tasks: Vec::new(),
    })
    .expect("blow-up chart is valid")
}

pub fn morphisms() -> Vec<CatalogMorphism> {
    vec![
        CatalogMorphism {
            name: "A2-blowup".into(),
            problem: blowup_chart(2),
            divisor_var: 0,
            contact_orders: vec![1, 2, 3, 4],
        },
        CatalogMorphism {
            name: "A3-blowup".into(),
            problem: blowup_chart(3),
            divisor_var: 0,
            contact_orders: vec![1, 2],
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case: String,
    pub arc: String,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub precision: usize,
    pub cases: Vec<CaseResult>,
    pub total_checks: usize,
    pub failed_checks: usize,
}

impl CatalogReport {
    pub fn all_passed(&self) -> bool {
        self.failed_checks == 0
    }
}

fn check(name: &str, r: Result<(bool, String)>) -> CheckResult {
    let (passed, detail) = r.unwrap_or_else(|e| (false, format!("{}: {e}", e.name())));
    CheckResult {
        check: name.to_string(),
        passed,
        detail,
    }
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `fiber_dim_formula` against the jet-Jacobian corank for `n <= n_max`.
pub fn oracle_pairs(arc: &FormalArc, n_max: usize, opts: &Options) -> Result<Vec<(u64, u64)>> {
    (0..=n_max)
        .map(|n| {
            let f = fiber_dim_formula(arc, n, opts)?.value;
            let o = jet_jacobian_corank(arc.variety(), n, &arc.truncate(n)?.coordinates)? as u64;
            Ok((f, o))
        })
        .collect()
}

/// Invariant factors `e_0..e_{N-1}` at every level `0..=m_max`.
pub fn factor_table(arc: &FormalArc, m_max: usize) -> Result<Vec<Vec<u64>>> {
    (0..=m_max)
        .map(|n| {
            let p = profile_of_omega(arc, Level::Finite(n))?;
            Ok(p.invariant_factors().iter().map(|e| e.bound()).collect())
        })
        .collect()
}

/// First violation of `e_i(alpha_n) = min(n+1, e_i(alpha_m))`, if any.
pub fn truncation_violation(table: &[Vec<u64>]) -> Option<(usize, usize, usize)> {
    for m in 0..table.len() {
        for n in 0..m {
            for (i, (&e, &f)) in table[n].iter().zip(&table[m]).enumerate() {
                if e != (n as u64 + 1).min(f) {
                    return Some((n, m, i));
                }
            }
        }
    }
    None
}

fn strictly_increasing(r: &StabilizationReport) -> bool {
    r.sequence.windows(2).all(|w| w[1].value > w[0].value)
}

fn same_answer(a: &StabilizationReport, b: &StabilizationReport) -> bool {
    a.verdict == b.verdict && a.values() == b.values()
}

fn run_arc(v: &CatalogVariety, a: &CatalogArc, opts: &Options) -> CaseResult {
    let mut checks = Vec::new();
    let arc = match v.problem.arc(&a.name, v.problem.precision()) {
        Ok(arc) => arc,
        Err(e) => {
            checks.push(check("build", Err(e)));
            return CaseResult {
                case: v.name.clone(),
                arc: a.name.clone(),
                checks,
            };
        }
    };
    checks.push(check(
        "fiber-dim-oracle",
        oracle_pairs(&arc, ORACLE_MAX_LEVEL, opts).map(|pairs| {
            let ok = pairs.iter().all(|(f, o)| f == o);
            (
                ok,
                format!(
                    "formula={} oracle={}",
                    join(pairs.iter().map(|p| p.0)),
                    join(pairs.iter().map(|p| p.1))
                ),
            )
        }),
    ));
    let table = factor_table(&arc, TRUNCATION_MAX_LEVEL);
    checks.push(check(
        "truncation",
        table
            .as_ref()
            .map_err(Clone::clone)
            .map(|t| match truncation_violation(t) {
                None => (true, format!("levels 0..={TRUNCATION_MAX_LEVEL}")),
                Some((n, m, i)) => (false, format!("e_{i} differs between n={n} and m={m}")),
            }),
    ));
    checks.push(check(
        "betti-monotone",
        table.map(|t| {
            // free summands are exactly the entries equal to the cap n+1
            let d: Vec<usize> = (0..t.len())
                .map(|n| t[n].iter().filter(|&&e| e == n as u64 + 1).count())
                .collect();
            (
                d.windows(2).all(|w| w[0] >= w[1]),
                format!("d_n={}", join(&d)),
            )
        }),
    ));
    let embdim = embdim_arc(&arc, DEFAULT_N_MAX, DEFAULT_WINDOW, opts);
    checks.push(check(
        "embdim-arc",
        embdim.as_ref().map_err(Clone::clone).map(|r| {
            let ok = match a.expected {
                Expected::Stabilized(v) => r.verdict == Verdict::Stabilized(v),
                Expected::Unbounded => {
                    r.verdict == Verdict::NotStabilizedUpTo(DEFAULT_N_MAX) && strictly_increasing(r)
                }
            };
            (
                ok,
                format!(
                    "D={} s_n={} verdict={:?}",
                    r.dimension,
                    join(r.values()),
                    r.verdict
                ),
            )
        }),
    ));
    if let Ok(r) = &embdim {
        checks.push(check(
            "jet-codim-betti",
            jet_codim(&arc, DimSource::Betti, DEFAULT_N_MAX, DEFAULT_WINDOW, opts)
                .map(|c| (same_answer(r, &c), format!("verdict={:?}", c.verdict))),
        ));
        let off_singular =
            !r.precision_limited && Some(r.betti_at_infinity) == arc.variety().declared_dim();
        if off_singular {
            checks.push(check(
                "jet-codim-declared",
                jet_codim(
                    &arc,
                    DimSource::Declared,
                    DEFAULT_N_MAX,
                    DEFAULT_WINDOW,
                    opts,
                )
                .map(|c| (same_answer(r, &c), format!("verdict={:?}", c.verdict))),
            ));
        }
    }
    CaseResult {
        case: v.name.clone(),
        arc: a.name.clone(),
        checks,
    }
}

fn run_morphism(m: &CatalogMorphism, q: usize, opts: &Options) -> CaseResult {
    let f = m
        .problem
        .morphism
        .as_ref()
        .expect("catalog morphisms have a morphism");
    let p = m.problem.precision();
    let mut checks = Vec::new();
    checks.push(check(
        "mather",
        mather_discrepancy_check(f, m.divisor_var, q, p, DEFAULT_N_MAX, DEFAULT_WINDOW, opts).map(
            |r| {
                let ok = r.embdim_matches && r.bound_holds != Some(false);
                (
                    ok,
                    format!(
                        "k={} expected={} embdim={:?} bound={:?}",
                        r.discrepancy, r.expected_embdim, r.embdim.verdict, r.bound_holds
                    ),
                )
            },
        ),
    ));
    checks.push(check(
        "btr",
        divisorial_arc(f, m.divisor_var, q, p)
            .and_then(|(beta, _)| btr_check(f, &beta, DEFAULT_N_MAX, DEFAULT_WINDOW, opts))
            .map(|r| {
                let ok = r.inequalities_hold
                    && r.equality_holds != Some(false)
                    && r.embdim_source == Some(q as u64);
                (
                    ok,
                    format!(
                        "ord_jac={} source={:?} target={:?} smooth={}",
                        r.jacobian_order, r.embdim_source, r.embdim_target, r.smooth_at_center
                    ),
                )
            }),
    ));
    CaseResult {
        case: m.name.clone(),
        arc: format!("divisorial q={q}"),
        checks,
    }
}

/// Runs every catalog case; cases run concurrently, results keep catalog
/// order.
pub fn run(opts: &Options) -> CatalogReport {
    let vs = varieties();
    let ms = morphisms();
    let mut jobs: Vec<Box<dyn Fn() -> CaseResult + Send + Sync + '_>> = Vec::new();
    for v in &vs {
        for a in &v.arcs {
            jobs.push(Box::new(move || run_arc(v, a, opts)));
        }
    }
    for m in &ms {
        for &q in &m.contact_orders {
            jobs.push(Box::new(move || run_morphism(m, q, opts)));
        }
    }
    let cases: Vec<CaseResult> = jobs.par_iter().map(|job| job()).collect();
    let total_checks = cases.iter().map(|c| c.checks.len()).sum();
    let failed_checks = cases
        .iter()
        .flat_map(|c| &c.checks)
        .filter(|c| !c.passed)
        .count();
    CatalogReport {
        precision: CATALOG_PRECISION,
        cases,
        total_checks,
        failed_checks,
    }
}
