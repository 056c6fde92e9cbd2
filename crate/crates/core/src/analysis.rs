//! Fiber dimensions of jet schemes, embedding dimensions and jet
//! codimensions along arcs, the transformation rule under a morphism, and
//! maximal divisorial arcs.

use serde::{Deserialize, Serialize};

use crate::algebra::{matrix_rank, FieldElement, FunctionField, TranscendenceDegree};
use crate::arc::{compose, make_arc, validate_morphism_on_arc, FormalArc};
use crate::error::{Error, Result};
use crate::geometry::{omega_presentation, relative_omega_presentation, MorphismPresentation};
use crate::invariants::{
    profile_of_omega, refined_profile, InvariantProfile, Level, Refined, DEFAULT_PRECISION_CAP,
};
use crate::series::{OrderValue, SeriesExpression};

pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_N_MAX: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Highest precision the level-infinity refinement may reach.
    pub precision_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            precision_cap: DEFAULT_PRECISION_CAP,
        }
    }
}

/// Level-infinity profile of `Omega_X` along the arc, refined as needed.
pub fn omega_at_infinity(arc: &FormalArc, opts: &Options, need: Option<usize>) -> Result<Refined> {
    refined_profile(
        &omega_presentation(arc.variety()),
        arc,
        opts.precision_cap,
        need,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDimension {
    pub level: usize,
    /// Betti number `d_n` at level `n`.
    pub betti: usize,
    /// `ord_alpha` of the `d_n`-th Fitting ideal on the full arc.
    pub fitting_order: OrderValue,
    /// Precision at which `fitting_order` was determined.
    pub precision: usize,
    pub value: u64,
}

/// `(n+1) d_n + ord_alpha(Fitt^{d_n}(Omega))`.
pub fn fiber_dim_formula(arc: &FormalArc, n: usize, opts: &Options) -> Result<FiberDimension> {
    let at_n = profile_of_omega(arc, Level::Finite(n))?;
    let d = at_n.betti;
    let inf = omega_at_infinity(arc, opts, Some(d))?;
    let c = inf.profile.fitting_invariant(d);
    let Some(order) = c.finite() else {
        return Err(Error::PrecisionLimited(format!(
            "Fitting invariant c_{d} is {c} at precision {}",
            inf.arc.precision()
        )));
    };
    Ok(FiberDimension {
        level: n,
        betti: d,
        fitting_order: c,
        precision: inf.arc.precision(),
        value: (n as u64 + 1) * d as u64 + order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetEmbeddingDimension {
    pub fiber: FiberDimension,
    pub residue_dim: TranscendenceDegree,
    pub value: u64,
}

/// Embedding dimension of `X_n` at `alpha_n`.
pub fn embdim_jet(arc: &FormalArc, n: usize, opts: &Options) -> Result<JetEmbeddingDimension> {
    let fiber = fiber_dim_formula(arc, n, opts)?;
    let residue_dim = arc.truncate(n)?.residue_dim;
    let value = fiber
        .value
        .checked_sub(residue_dim.value as u64)
        .ok_or_else(|| {
            Error::InvariantViolation(format!(
                "fiber dimension {} is below the residue dimension {}",
                fiber.value, residue_dim.value
            ))
        })?;
    Ok(JetEmbeddingDimension {
        fiber,
        residue_dim,
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimSource {
    Declared,
    Betti,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Verdict {
    Stabilized(u64),
    NotStabilizedUpTo(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: usize,
    pub betti: usize,
    pub residue_dim: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    /// The `D` in `(n+1) D - dim(alpha_n)`.
    pub dimension: usize,
    pub dimension_source: DimSource,
    pub betti_at_infinity: usize,
    /// Precision of the level-infinity profile.
    pub precision: usize,
    pub precision_limited: bool,
    pub char_p_jacobian: bool,
    pub window: usize,
    pub sequence: Vec<LevelRow>,
    pub verdict: Verdict,
}

impl StabilizationReport {
    pub fn value(&self) -> Option<u64> {
        match self.verdict {
            Verdict::Stabilized(v) => Some(v),
            Verdict::NotStabilizedUpTo(_) => None,
        }
    }

    pub fn values(&self) -> Vec<i64> {
        self.sequence.iter().map(|r| r.value).collect()
    }
}

fn stabilize(
    arc: &FormalArc,
    inf: &InvariantProfile,
    dimension: usize,
    source: DimSource,
    n_max: usize,
    window: usize,
) -> Result<StabilizationReport> {
    if window == 0 {
        return Err(Error::InvalidInput(
            "stabilization window must be positive".into(),
        ));
    }
    let arc = if arc.precision() <= n_max {
        arc.with_precision(n_max + 1)?
    } else {
        arc.clone()
    };
    let dims = arc.residue_dims(n_max)?;
    let mut sequence = Vec::with_capacity(n_max + 1);
    for (n, r) in dims.iter().enumerate() {
        let betti = profile_of_omega(&arc, Level::Finite(n))?.betti;
        sequence.push(LevelRow {
            n,
            betti,
            residue_dim: r.value,
            value: (n as i64 + 1) * dimension as i64 - r.value as i64,
        });
    }
    let floor = dimension as i64 - dims[0].value as i64;
    for w in sequence.windows(2) {
        if w[1].value < w[0].value {
            return Err(Error::InvariantViolation(format!(
                "sequence decreases from {} at n={} to {} at n={}",
                w[0].value, w[0].n, w[1].value, w[1].n
            )));
        }
    }
    if let Some(r) = sequence.iter().find(|r| r.value < floor) {
        return Err(Error::InvariantViolation(format!(
            "value {} at n={} is below the lower bound {floor}",
            r.value, r.n
        )));
    }
    let tail = &sequence[sequence.len().saturating_sub(window)..];
    let stable = tail.len() == window
        && tail
            .iter()
            .all(|r| r.value == tail[0].value && r.betti == inf.betti)
        && tail[0].value >= 0;
    let verdict = if stable {
        Verdict::Stabilized(tail[0].value as u64)
    } else {
        Verdict::NotStabilizedUpTo(n_max)
    };
    Ok(StabilizationReport {
        dimension,
        dimension_source: source,
        betti_at_infinity: inf.betti,
        precision: inf.precision,
        precision_limited: inf.precision_limited,
        char_p_jacobian: dims.last().is_some_and(|d| d.char_p_jacobian),
        window,
        sequence,
        verdict,
    })
}

/// `(n+1) d - dim(alpha_n)` for `n <= n_max`, `d` the Betti number of
/// `Omega_X` along the arc.
pub fn embdim_arc(
    arc: &FormalArc,
    n_max: usize,
    window: usize,
    opts: &Options,
) -> Result<StabilizationReport> {
    let inf = omega_at_infinity(arc, opts, None)?;
    stabilize(
        arc,
        &inf.profile,
        inf.profile.betti,
        DimSource::Betti,
        n_max,
        window,
    )
}

/// `(n+1) dim X - dim(alpha_n)` with `dim X` declared or taken from the
/// Betti number.
pub fn jet_codim(
    arc: &FormalArc,
    source: DimSource,
    n_max: usize,
    window: usize,
    opts: &Options,
) -> Result<StabilizationReport> {
    let inf = omega_at_infinity(arc, opts, None)?;
    let dimension = match source {
        DimSource::Declared => arc
            .variety()
            .declared_dim()
            .ok_or(Error::MissingDeclaredDim)?,
        DimSource::Betti => inf.profile.betti,
    };
    stabilize(arc, &inf.profile, dimension, source, n_max, window)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BtrReport {
    /// `ord_beta(Jac_f)`; `AtLeast` is read as infinite.
    pub jacobian_order: OrderValue,
    pub jacobian_precision: usize,
    pub precision_limited: bool,
    pub source: StabilizationReport,
    pub target: StabilizationReport,
    pub embdim_source: Option<u64>,
    pub embdim_target: Option<u64>,
    pub smooth_at_center: bool,
    pub inequalities_hold: bool,
    /// Checked only when the source is smooth at the center.
    pub equality_holds: Option<bool>,
}

/// `ord_beta(Jac_f)` as `c_0` of `Omega_{Y/X}` pulled back along `beta`.
pub fn jacobian_order(
    f: &MorphismPresentation,
    beta: &FormalArc,
    opts: &Options,
) -> Result<Refined> {
    refined_profile(
        &relative_omega_presentation(f),
        beta,
        opts.precision_cap,
        Some(0),
    )
}

fn smooth_at_center(f: &MorphismPresentation, beta: &FormalArc, opts: &Options) -> Result<bool> {
    let y = f.source();
    if y.is_affine_space() {
        return Ok(true);
    }
    let dim_y = match y.declared_dim() {
        Some(d) => d,
        None => omega_at_infinity(beta, opts, None)?.profile.betti,
    };
    let center: Vec<FieldElement> = beta
        .components()
        .iter()
        .map(|s| s.coeff(0).clone())
        .collect();
    let one = beta.field().one();
    let rows: Vec<Vec<FieldElement>> = y
        .generators()
        .iter()
        .map(|g| {
            (0..y.ambient_dim())
                .map(|i| g.derivative(i).evaluate(&center, &one))
                .collect()
        })
        .collect();
    Ok(matrix_rank(&rows) + dim_y == y.ambient_dim())
}

fn le(a: Option<u64>, b: Option<u64>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

pub fn btr_check(
    f: &MorphismPresentation,
    beta: &FormalArc,
    n_max: usize,
    window: usize,
    opts: &Options,
) -> Result<BtrReport> {
    validate_morphism_on_arc(f, beta)?;
    let alpha = compose(f, beta)?;
    let jac = jacobian_order(f, beta, opts)?;
    let ord = jac.profile.fitting_invariant(0);
    let source = embdim_arc(beta, n_max, window, opts)?;
    let target = embdim_arc(&alpha, n_max, window, opts)?;
    let (s, t) = (source.value(), target.value());
    let sum = match (s, ord.finite()) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let smooth = smooth_at_center(f, beta, opts)?;
    // an unstabilized side counts as infinite
    let equality_holds = smooth.then(|| t == sum);
    Ok(BtrReport {
        jacobian_order: ord,
        jacobian_precision: jac.arc.precision(),
        precision_limited: !ord.is_finite() || jac.profile.precision_limited,
        embdim_source: s,
        embdim_target: t,
        source,
        target,
        smooth_at_center: smooth,
        inequalities_hold: le(s, t) && le(t, sum),
        equality_holds,
    })
}

/// The generic arc of `Cont^{>=q}(y_j = 0)` on an affine-space source, to
/// precision `P`, and its image under `f`. Transcendentals are named
/// `{var}_{p}`.
pub fn divisorial_arc(
    f: &MorphismPresentation,
    divisor_var: usize,
    q: usize,
    precision: usize,
) -> Result<(FormalArc, FormalArc)> {
    let y = f.source();
    if !y.is_affine_space() {
        return Err(Error::InvalidInput(
            "divisorial arcs need an affine-space source".into(),
        ));
    }
    if divisor_var >= y.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "divisor variable index {divisor_var} is out of range"
        )));
    }
    if q == 0 || q >= precision {
        return Err(Error::InvalidInput(format!(
            "contact order q = {q} must satisfy 1 <= q < P = {precision}"
        )));
    }
    let start = |i: usize| if i == divisor_var { q } else { 0 };
    let names: Vec<String> = y
        .ambient_vars()
        .iter()
        .enumerate()
        .flat_map(|(i, v)| (start(i)..precision).map(move |p| format!("{v}_{p}")))
        .collect();
    let field = FunctionField::new(y.base(), names);
    let mut next = 0;
    let mut comps = Vec::with_capacity(y.ambient_dim());
    for i in 0..y.ambient_dim() {
        let mut coeffs = vec![field.zero(); precision];
        for c in coeffs.iter_mut().skip(start(i)) {
            *c = field.transcendental(next);
            next += 1;
        }
        comps.push(SeriesExpression::polynomial(&field, coeffs));
    }
    let beta = make_arc(y, comps, precision)?;
    let alpha = compose(f, &beta)?;
    Ok((beta, alpha))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatherReport {
    pub q: usize,
    pub divisor_var: String,
    pub jacobian_order: u64,
    /// `ord_E(Jac_f)`.
    pub discrepancy: u64,
    /// `q (k + 1)`.
    pub expected_embdim: u64,
    pub embdim: StabilizationReport,
    pub embdim_matches: bool,
    pub center_is_point: bool,
    pub dim_x: usize,
    pub dim_x_source: DimSource,
    /// `k + 1 >= dim X`, checked when the center is a closed point.
    pub bound_holds: Option<bool>,
}

pub fn mather_discrepancy_check(
    f: &MorphismPresentation,
    divisor_var: usize,
    q: usize,
    precision: usize,
    n_max: usize,
    window: usize,
    opts: &Options,
) -> Result<MatherReport> {
    let (beta, alpha) = divisorial_arc(f, divisor_var, q, precision)?;
    let jac = jacobian_order(f, &beta, opts)?;
    let ord = jac.profile.fitting_invariant(0);
    let Some(order) = ord.finite() else {
        return Err(Error::PrecisionLimited(format!(
            "ord of the Jacobian ideal is {ord} at precision {}",
            jac.arc.precision()
        )));
    };
    if order % q as u64 != 0 {
        return Err(Error::NonDivisibleJacobianOrder { order, q: q as u64 });
    }
    let k = order / q as u64;
    let expected = q as u64 * (k + 1);
    let embdim = embdim_arc(&alpha, n_max, window, opts)?;
    let x = f.target();
    let (dim_x, dim_x_source) = match x.declared_dim() {
        Some(d) => (d, DimSource::Declared),
        None => (embdim.betti_at_infinity, DimSource::Betti),
    };
    let center_is_point = f.image_of_hyperplane_is_point(divisor_var);
    Ok(MatherReport {
        q,
        divisor_var: f.source().ambient_vars()[divisor_var].clone(),
        jacobian_order: order,
        discrepancy: k,
        expected_embdim: expected,
        embdim_matches: embdim.value() == Some(expected),
        embdim,
        center_is_point,
        dim_x,
        dim_x_source,
        bound_holds: center_is_point.then_some(k + 1 >= dim_x as u64),
    })
}
