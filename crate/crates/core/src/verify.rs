//! Mechanical checks of the composition growth statements: measured orders
//! of `f o g` against the windows predicted from the factor orders, and
//! measured comparator ratios against the chains predicted from relative
//! orders.
//!
//! Every statement is decomposed into displayed inequalities. One
//! inequality becomes one [`IneqRow`]: a predicted window `[lo, hi]`
//! (either side may be unbounded), a measured value (an interval when the
//! measurement itself runs over the two envelope curves), and a verdict.
//! A row only *fails* when the measurement certainly escapes the window;
//! it only *passes* when the measurement certainly sits inside; anything
//! else is inconclusive. Tolerances are the estimator's convergence
//! tolerance plus a 1% relative slack.
//!
//! Compositions of two expressions are measured literally. As soon as a
//! profile is involved there is no literal composite, and measurements run
//! over the envelope
//!
//! ```text
//! M_f(M_g(r/2)/8 - |g(0)|)  <=  M_{f o g}(r)  <=  M_f(M_g(r))
//! ```
//!
//! whose two sides are [`BoundCurve`]s; the true value is then only known
//! to live between the two curve measurements, and verdicts account for
//! that width.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funfam::{BlockSchedule, EntireExpr, GrowthObject, GrowthProfile, MaxModulus};
use crate::growth::{
    self, grid_points, order_on_grid, pq_order, ratio_saturating, relative_pq_order,
    relative_quotients_on_grid, CellCheck, EstimatorParams, GrowthClass, GrowthEstimate,
    IndexPairReport,
};
use crate::oracle::Verdict;
use crate::tower::TowerReal;

/// Fractional slack granted on top of the convergence tolerance when a
/// measured value is compared against a predicted window.
const RELATIVE_SLACK: f64 = 1.0e-2;

/// How the outer factor's lower scale index `q` compares with the inner
/// factor's upper scale index `m`: the three branches every composition
/// statement splits into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    QEqualsM,
    QGreaterM,
    QLessM,
}

impl CaseTag {
    pub fn from_indices(q: u32, m: u32) -> CaseTag {
        use std::cmp::Ordering::*;
        match q.cmp(&m) {
            Equal => CaseTag::QEqualsM,
            Greater => CaseTag::QGreaterM,
            Less => CaseTag::QLessM,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::QEqualsM => "q = m",
            CaseTag::QGreaterM => "q > m",
            CaseTag::QLessM => "q < m",
        }
    }
}

/// A composition instance: both factors with their detected index pairs,
/// the literal composite when both factors are expressions, and the scale
/// case the pair falls under.
#[derive(Clone, Debug)]
pub struct CompositionCase {
    pub f: GrowthObject,
    pub g: GrowthObject,
    /// `f o g` as an expression, when both factors are expressions.
    pub composite: Option<GrowthObject>,
    /// Detected pair `(p, q)` of the outer factor with its order data.
    pub f_pair: IndexPairReport,
    /// Detected pair `(m, n)` of the inner factor with its order data.
    pub g_pair: IndexPairReport,
    pub case: CaseTag,
}

impl CompositionCase {
    /// Detect both factors' index pairs and build the literal composite
    /// when the factors admit one.
    pub fn analyze(f: GrowthObject, g: GrowthObject, params: &EstimatorParams) -> Result<Self> {
        let f_pair = growth::detect_index_pair(&f, params)?;
        let g_pair = growth::detect_index_pair(&g, params)?;
        let composite = match (f.expr(), g.expr()) {
            (Some(fe), Some(ge)) => Some(GrowthObject::from_expr(EntireExpr::compose(
                fe.clone(),
                ge.clone(),
            ))?),
            _ => None,
        };
        let case = CaseTag::from_indices(f_pair.q, g_pair.p);
        Ok(CompositionCase {
            f,
            g,
            composite,
            f_pair,
            g_pair,
            case,
        })
    }

    pub fn description(&self) -> String {
        format!(
            "f = {}, g = {}",
            self.f.description(),
            self.g.description()
        )
    }

    /// `(p, q)` of the outer factor.
    pub fn pq(&self) -> (u32, u32) {
        (self.f_pair.p, self.f_pair.q)
    }

    /// `(m, n)` of the inner factor.
    pub fn mn(&self) -> (u32, u32) {
        (self.g_pair.p, self.g_pair.q)
    }

    /// The scale pair predicted for `f o g`: `(p, n)` when `q = m`,
    /// `(p, q+n-m)` when `q > m`, `(p+m-q, n)` when `q < m`.
    pub fn predicted_pair(&self) -> (u32, u32) {
        let (p, q) = self.pq();
        let (m, n) = self.mn();
        match self.case {
            CaseTag::QEqualsM => (p, n),
            CaseTag::QGreaterM => (p, q + n - m),
            CaseTag::QLessM => (p + m - q, n),
        }
    }
}

/// Which side of the composition envelope a curve tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// One side of the composition envelope, usable anywhere a maximum
/// modulus is expected. The upper side is `M_f(M_g(r))`; the lower side is
/// `M_f(M_g(r/2)/8 - |g(0)|)` and is undefined (nonpositive inner
/// argument) at small radii.
pub struct BoundCurve<'a> {
    f: &'a GrowthObject,
    g: &'a GrowthObject,
    side: BoundSide,
}

impl<'a> BoundCurve<'a> {
    pub fn upper(f: &'a GrowthObject, g: &'a GrowthObject) -> Self {
        BoundCurve {
            f,
            g,
            side: BoundSide::Upper,
        }
    }

    pub fn lower(f: &'a GrowthObject, g: &'a GrowthObject) -> Self {
        BoundCurve {
            f,
            g,
            side: BoundSide::Lower,
        }
    }
}

impl MaxModulus for BoundCurve<'_> {
    fn max_modulus(&self, r: &TowerReal) -> Result<TowerReal> {
        match self.side {
            BoundSide::Upper => self.f.max_modulus(&self.g.max_modulus(r)?),
            BoundSide::Lower => self.f.max_modulus(&lower_curve_argument(self.g, r)?),
        }
    }

    fn min_radius(&self) -> TowerReal {
        self.g.min_radius()
    }
}

/// Inner argument of the envelope's lower side, `M_g(r/2)/8 - |g(0)|`.
fn lower_curve_argument(g: &GrowthObject, r: &TowerReal) -> Result<TowerReal> {
    let half = r.mul(&TowerReal::from_f64(0.5)?)?;
    let scaled = g.max_modulus(&half)?.mul(&TowerReal::from_f64(0.125)?)?;
    if g.anchor().is_zero() {
        return Ok(scaled);
    }
    scaled.sub_guarded(&g.anchor()).map_err(|_| {
        Error::NonpositiveArgument(format!(
            "M_g(r/2)/8 does not exceed the anchor {} at r = {r}",
            g.anchor()
        ))
    })
}

/// Both envelope values at one radius, plus the literal composition's
/// maximum modulus when both factors are expressions (checked to lie
/// inside the envelope).
#[derive(Clone, Debug)]
pub struct BoundSample {
    pub lower: TowerReal,
    pub upper: TowerReal,
    pub exact: Option<TowerReal>,
}

pub fn composite_bound_curves(
    f: &GrowthObject,
    g: &GrowthObject,
    r: &TowerReal,
) -> Result<BoundSample> {
    let lower = BoundCurve::lower(f, g).max_modulus(r)?;
    let upper = BoundCurve::upper(f, g).max_modulus(r)?;
    let exact = match (f.expr(), g.expr()) {
        (Some(fe), Some(ge)) => {
            let c = GrowthObject::from_expr(EntireExpr::compose(fe.clone(), ge.clone()))?;
            Some(c.max_modulus(r)?)
        }
        _ => None,
    };
    if let Some(e) = &exact {
        if *e < lower || upper < *e {
            return Err(Error::Indeterminate(format!(
                "composition value {e} escaped its envelope [{lower}, {upper}] at r = {r}"
            )));
        }
    }
    Ok(BoundSample {
        lower,
        upper,
        exact,
    })
}

/// Verdict space of a whole report, folding hypothesis screening into the
/// pass/fail scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Inconclusive,
    Fail,
    HypothesisViolated,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Fail => "fail",
            Outcome::HypothesisViolated => "hypothesis-violated",
        }
    }

    fn from_verdict(v: Verdict) -> Outcome {
        match v {
            Verdict::Pass => Outcome::Pass,
            Verdict::Inconclusive => Outcome::Inconclusive,
            Verdict::Fail => Outcome::Fail,
        }
    }
}

/// One displayed inequality `lo <= value <= hi`, the measured value (an
/// interval `[measured_lo, measured_hi]` when the measurement runs over
/// the envelope curves), and the margin to the nearest predicted edge.
#[derive(Clone, Debug)]
pub struct IneqRow {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub measured_lo: f64,
    pub measured_hi: f64,
    pub tolerance: f64,
    /// Smallest signed distance from the measured interval to a predicted
    /// edge; nonnegative means the window holds as measured.
    pub margin: f64,
    pub converged: bool,
    pub verdict: Verdict,
}

fn make_row(
    name: String,
    lo: f64,
    hi: f64,
    measured_lo: f64,
    measured_hi: f64,
    converged: bool,
    conv_tol: f64,
) -> IneqRow {
    let scale = [lo, hi, measured_lo, measured_hi]
        .iter()
        .filter(|v| v.is_finite())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let tolerance = conv_tol + RELATIVE_SLACK * scale;
    let lo_margin = if lo == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        measured_lo - lo
    };
    let hi_margin = if hi == f64::INFINITY {
        f64::INFINITY
    } else {
        hi - measured_hi
    };
    let margin = lo_margin.min(hi_margin);
    let verdict = if measured_lo.is_nan() || measured_hi.is_nan() {
        Verdict::Inconclusive
    } else if !converged {
        Verdict::Inconclusive
    } else if measured_hi < lo - tolerance || measured_lo > hi + tolerance {
        Verdict::Fail
    } else if measured_lo >= lo - tolerance && measured_hi <= hi + tolerance {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    IneqRow {
        name,
        lo,
        hi,
        measured_lo,
        measured_hi,
        tolerance,
        margin,
        converged,
        verdict,
    }
}

/// Outcome of checking one composition statement against one instance.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Which composition statement (1-8) was checked.
    pub theorem: u8,
    pub case: CaseTag,
    pub instance: String,
    /// Scale pair predicted for the composition, when the statement pins
    /// one.
    pub predicted_pair: Option<(u32, u32)>,
    /// Scale pair found by scanning the composition (its upper envelope
    /// curve when no literal composite exists); `None` if the scan found
    /// no admissible cell.
    pub detected_pair: Option<(u32, u32)>,
    /// One row per displayed inequality.
    pub rows: Vec<IneqRow>,
    /// Limit-class checks at scale cells neighbouring the detected pair.
    pub cells: Vec<CellCheck>,
    /// Why the instance fails the statement's hypotheses, when it does.
    pub hypothesis_violation: Option<String>,
    pub outcome: Outcome,
}

fn cell_verdict(c: &CellCheck) -> Verdict {
    if c.ok {
        Verdict::Pass
    } else if c.estimate.converged {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

/// Order estimate of the composition at one scale cell: equal endpoints
/// for a literal composite, the two envelope-curve estimates otherwise
/// (the lower curve bounds the true value from below, the upper from
/// above).
#[derive(Clone, Debug)]
struct EnvelopeEstimate {
    lo: GrowthEstimate,
    hi: GrowthEstimate,
}

impl EnvelopeEstimate {
    fn point(est: GrowthEstimate) -> Self {
        EnvelopeEstimate {
            lo: est.clone(),
            hi: est,
        }
    }

    fn converged(&self) -> bool {
        self.lo.converged && self.hi.converged
    }
}

/// Snapping/windowing hints for measuring an envelope curve at cell
/// `(p, q)`: a profile factor living on the same `q`-scale donates its
/// block schedule, and its oscillation window when `p` matches too.
fn curve_hints(case: &CompositionCase, p: u32, q: u32) -> (Option<BlockSchedule>, Option<f64>) {
    for factor in [&case.f, &case.g] {
        if let Some(prof) = factor.profile() {
            if prof.q() == q {
                let snap = factor.block_schedule().copied();
                let windowed = snap.filter(|_| prof.p() == p).map(|s| s.gamma);
                return (snap, windowed);
            }
        }
    }
    (None, None)
}

/// Like `curve_hints` but with the relative-order windowing rule: the
/// window applies whenever the `q`-scale matches, independent of `p`.
fn curve_relative_hints(case: &CompositionCase, q: u32) -> (Option<BlockSchedule>, Option<f64>) {
    for factor in [&case.f, &case.g] {
        if let Some(prof) = factor.profile() {
            if prof.q() == q {
                let snap = factor.block_schedule().copied();
                let windowed = snap.map(|s| s.gamma);
                return (snap, windowed);
            }
        }
    }
    (None, None)
}

/// First grid index where the lower envelope curve is defined.
fn lower_curve_start(lower: &BoundCurve, q: u32, ts: &[f64]) -> Option<usize> {
    ts.iter().position(|&t| {
        TowerReal::from_f64(t)
            .map(|tt| tt.exp_k(q))
            .map_or(false, |r| lower.max_modulus(&r).is_ok())
    })
}

/// Measure the composition's order at `(p, q)`: literally when a
/// composite expression exists, over both envelope curves otherwise.
fn composite_order(
    case: &CompositionCase,
    p: u32,
    q: u32,
    params: &EstimatorParams,
) -> Result<EnvelopeEstimate> {
    if let Some(c) = &case.composite {
        return Ok(EnvelopeEstimate::point(pq_order(c, p, q, params)?));
    }
    let (snap, windowed) = curve_hints(case, p, q);
    let ts = grid_points(params, snap.as_ref());
    let upper = BoundCurve::upper(&case.f, &case.g);
    let hi = order_on_grid(&upper, p, q, &ts, windowed, params)?;
    let lower = BoundCurve::lower(&case.f, &case.g);
    let lo = match lower_curve_start(&lower, q, &ts) {
        Some(i) if ts.len() - i >= params.window + 2 => {
            order_on_grid(&lower, p, q, &ts[i..], windowed, params)?
        }
        // the lower side never becomes measurable on this grid; the upper
        // estimate alone cannot certify anything
        _ => GrowthEstimate {
            converged: false,
            ..hi.clone()
        },
    };
    Ok(EnvelopeEstimate { lo, hi })
}

/// Measure the composition's relative order with respect to `h` at the
/// relative cell `(p, q)`.
fn composite_relative_order(
    case: &CompositionCase,
    h: &GrowthObject,
    p: u32,
    q: u32,
    params: &EstimatorParams,
) -> Result<EnvelopeEstimate> {
    if let Some(c) = &case.composite {
        return Ok(EnvelopeEstimate::point(relative_pq_order(
            c, h, p, q, params,
        )?));
    }
    let (snap, windowed) = curve_relative_hints(case, q);
    let ts = grid_points(params, snap.as_ref());
    let upper = BoundCurve::upper(&case.f, &case.g);
    let (vs, absorbed) =
        relative_quotients_on_grid(&upper, h, p, q, &ts, params.inverse_rel_tol)?;
    let hi = growth::classify(&ts, &vs, windowed, absorbed, params);
    let lower = BoundCurve::lower(&case.f, &case.g);
    let lo = match lower_curve_start(&lower, q, &ts) {
        Some(i) if ts.len() - i >= params.window + 2 => {
            let (vs, absorbed) =
                relative_quotients_on_grid(&lower, h, p, q, &ts[i..], params.inverse_rel_tol)?;
            growth::classify(&ts[i..], &vs, windowed, absorbed, params)
        }
        _ => GrowthEstimate {
            converged: false,
            ..hi.clone()
        },
    };
    Ok(EnvelopeEstimate { lo, hi })
}

/// Scan the composition (or its upper envelope curve) for its index pair;
/// `None` when the scan exhausts its range.
fn composite_detection(
    case: &CompositionCase,
    params: &EstimatorParams,
) -> Result<Option<IndexPairReport>> {
    let res = match &case.composite {
        Some(c) => growth::detect_index_pair(c, params),
        None => {
            let upper = BoundCurve::upper(&case.f, &case.g);
            growth::detect_index_pair_with(
                &|p, q| {
                    let (snap, windowed) = curve_hints(case, p, q);
                    let ts = grid_points(params, snap.as_ref());
                    order_on_grid(&upper, p, q, &ts, windowed, params)
                },
                params,
            )
        }
    };
    match res {
        Ok(r) => Ok(Some(r)),
        Err(Error::NotFound(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Positive lower order, operationally: a finite converged liminf above
/// the convergence tolerance.
fn positive(value: f64, params: &EstimatorParams) -> bool {
    value.is_finite() && value > params.conv_tol
}

/// Check the composition-order statement: the predicted scale pair of
/// `f o g` per case, the order window rows gated by which factor has
/// positive lower order, and the limit classes of neighbouring cells.
pub fn check_theorem1(case: &CompositionCase, params: &EstimatorParams) -> Result<VerificationReport> {
    let rho_f = case.f_pair.order.limsup;
    let lam_f = case.f_pair.order.liminf;
    let rho_g = case.g_pair.order.limsup;
    let lam_g = case.g_pair.order.liminf;
    let lam_f_pos = positive(lam_f, params);
    let lam_g_pos = positive(lam_g, params);
    let predicted = case.predicted_pair();
    let (pp, qq) = predicted;

    if !lam_f_pos && !lam_g_pos {
        return Ok(VerificationReport {
            theorem: 1,
            case: case.case,
            instance: case.description(),
            predicted_pair: Some(predicted),
            detected_pair: None,
            rows: vec![],
            cells: vec![],
            hypothesis_violation: Some(
                "neither factor has a positive lower order on its scale pair".into(),
            ),
            outcome: Outcome::HypothesisViolated,
        });
    }

    let env = composite_order(case, pp, qq, params)?;
    let conv = env.converged();
    let (m_lo, m_hi) = (env.lo.limsup, env.hi.limsup);
    let tol = params.conv_tol;
    let mut rows = Vec::new();
    match case.case {
        CaseTag::QEqualsM => {
            if lam_f_pos {
                rows.push(make_row(
                    format!("outer route: lam_f*rho_g <= rho(f o g)({pp},{qq}) <= rho_f*rho_g"),
                    lam_f * rho_g,
                    rho_f * rho_g,
                    m_lo,
                    m_hi,
                    conv,
                    tol,
                ));
            }
            if lam_g_pos {
                rows.push(make_row(
                    format!("inner route: lam_f*rho_g <= rho(f o g)({pp},{qq}) <= rho_f*rho_g"),
                    lam_f * rho_g,
                    rho_f * rho_g,
                    m_lo,
                    m_hi,
                    conv,
                    tol,
                ));
                rows.push(make_row(
                    format!("sharpened floor: rho_f*lam_g <= rho(f o g)({pp},{qq}) <= rho_f*rho_g"),
                    rho_f * lam_g,
                    rho_f * rho_g,
                    m_lo,
                    m_hi,
                    conv,
                    tol,
                ));
            }
        }
        CaseTag::QGreaterM => {
            if lam_f_pos {
                rows.push(make_row(
                    format!("lam_f <= rho(f o g)({pp},{qq}) <= rho_f"),
                    lam_f,
                    rho_f,
                    m_lo,
                    m_hi,
                    conv,
                    tol,
                ));
            }
            if lam_g_pos {
                rows.push(make_row(
                    format!("rho(f o g)({pp},{qq}) = rho_f"),
                    rho_f,
                    rho_f,
                    m_lo,
                    m_hi,
                    conv,
                    tol,
                ));
            }
        }
        CaseTag::QLessM => {
            if lam_f_pos {
                rows.push(make_row(
                    format!("rho(f o g)({pp},{qq}) = rho_g"),
                    rho_g,
                    rho_g,
                    m_lo,
                    m_hi,
                    conv,
                    tol,
                ));
            }
            if lam_g_pos {
                rows.push(make_row(
                    format!("lam_g <= rho(f o g)({pp},{qq}) <= rho_g"),
                    lam_g,
                    rho_g,
                    m_lo,
                    m_hi,
                    conv,
                    tol,
                ));
            }
        }
    }

    let detection = composite_detection(case, params)?;
    let detected_pair = detection.as_ref().map(|d| (d.p, d.q));
    let cells = detection.map(|d| d.checks).unwrap_or_default();

    let mut verdict = rows
        .iter()
        .fold(Verdict::Pass, |v, r| v.combine(r.verdict));
    for c in &cells {
        verdict = verdict.combine(cell_verdict(c));
    }
    verdict = verdict.combine(match detected_pair {
        Some(d) if d == predicted => Verdict::Pass,
        Some(_) => Verdict::Fail,
        None => Verdict::Inconclusive,
    });

    Ok(VerificationReport {
        theorem: 1,
        case: case.case,
        instance: case.description(),
        predicted_pair: Some(predicted),
        detected_pair,
        rows,
        cells,
        hypothesis_violation: None,
        outcome: Outcome::from_verdict(verdict),
    })
}

/// Check the lower-order statement: the window for the composition's
/// lower order on the predicted scale pair; requires both factors to have
/// positive lower order.
pub fn check_theorem2(case: &CompositionCase, params: &EstimatorParams) -> Result<VerificationReport> {
    let rho_f = case.f_pair.order.limsup;
    let lam_f = case.f_pair.order.liminf;
    let rho_g = case.g_pair.order.limsup;
    let lam_g = case.g_pair.order.liminf;
    let predicted = case.predicted_pair();
    let (pp, qq) = predicted;

    if !(positive(lam_f, params) && positive(lam_g, params)) {
        return Ok(VerificationReport {
            theorem: 2,
            case: case.case,
            instance: case.description(),
            predicted_pair: Some(predicted),
            detected_pair: None,
            rows: vec![],
            cells: vec![],
            hypothesis_violation: Some(
                "a factor lacks a positive lower order on its scale pair".into(),
            ),
            outcome: Outcome::HypothesisViolated,
        });
    }

    let env = composite_order(case, pp, qq, params)?;
    let conv = env.converged();
    // the lower curve bounds the true liminf from below, the upper from above
    let (m_lo, m_hi) = (env.lo.liminf, env.hi.liminf);
    let tol = params.conv_tol;
    let row = match case.case {
        CaseTag::QEqualsM => make_row(
            format!(
                "lam_f*lam_g <= lam(f o g)({pp},{qq}) <= min(rho_f*lam_g, lam_f*rho_g)"
            ),
            lam_f * lam_g,
            (rho_f * lam_g).min(lam_f * rho_g),
            m_lo,
            m_hi,
            conv,
            tol,
        ),
        CaseTag::QGreaterM => make_row(
            format!("lam(f o g)({pp},{qq}) = lam_f"),
            lam_f,
            lam_f,
            m_lo,
            m_hi,
            conv,
            tol,
        ),
        CaseTag::QLessM => make_row(
            format!("lam(f o g)({pp},{qq}) = lam_g"),
            lam_g,
            lam_g,
            m_lo,
            m_hi,
            conv,
            tol,
        ),
    };
    let verdict = row.verdict;

    Ok(VerificationReport {
        theorem: 2,
        case: case.case,
        instance: case.description(),
        predicted_pair: Some(predicted),
        detected_pair: None,
        rows: vec![row],
        cells: vec![],
        hypothesis_violation: None,
        outcome: Outcome::from_verdict(verdict),
    })
}

/// Which factor a ratio statement's second comparator measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RatioSide {
    /// Statements 3, 5, 7: the comparator `k` measures the outer factor.
    OuterFactor,
    /// Statements 4, 6, 8: the comparator `l` measures the inner factor.
    InnerFactor,
}

/// The chain shape a ratio statement asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RatioShape {
    /// 3, 4: `lam_h/rho_c <= liminf <= lam_h/lam_c <= limsup <= rho_h/lam_c`.
    TwoSided,
    /// 5, 6: `liminf <= rho_h/rho_c <= limsup`.
    PivotOnly,
    /// 7, 8: `liminf <= min(lam_h/lam_c, rho_h/rho_c)` and
    /// `max(lam_h/lam_c, rho_h/rho_c) <= limsup`.
    MinMax,
}

/// The running comparator quotient at radii `r_j = exp^[level](t_j)`:
///
/// ```text
/// Q(r) = log^[b] M_h^-1(M_num(exp^[num_shift] r))
///      / log^[d] M_c^-1(M_den(exp^[den_shift] r))
/// ```
#[allow(clippy::too_many_arguments)]
fn ratio_quotients(
    num: &dyn MaxModulus,
    h: &GrowthObject,
    b: u32,
    num_shift: u32,
    den: &dyn MaxModulus,
    comparator: &GrowthObject,
    d: u32,
    den_shift: u32,
    level: u32,
    ts: &[f64],
    inverse_rel_tol: f64,
) -> Result<(Vec<f64>, bool)> {
    let mut vs = Vec::with_capacity(ts.len());
    let mut absorbed = false;
    for &t in ts {
        let r = TowerReal::from_f64(t)?.exp_k(level);
        let num_value = num.max_modulus(&r.exp_k(num_shift))?;
        let den_value = den.max_modulus(&r.exp_k(den_shift))?;
        absorbed |= num_value.absorbed() | den_value.absorbed();
        let xn = growth::inverse_max_modulus(h, &num_value, inverse_rel_tol)?;
        let xd = growth::inverse_max_modulus(comparator, &den_value, inverse_rel_tol)?;
        absorbed |= xn.absorbed() | xd.absorbed();
        let v = match (xn.log_k(b), xd.log_k(d)) {
            (Ok(a), Ok(bb)) => ratio_saturating(&a, &bb),
            (Err(_), Ok(_)) => 0.0,
            (_, Err(_)) => f64::INFINITY,
        };
        vs.push(v);
    }
    Ok((vs, absorbed))
}

/// A relative order pinned to a point from its envelope, when the two
/// curve estimates agree within tolerance.
fn pinned(lo: f64, hi: f64, conv_tol: f64) -> (f64, bool) {
    let tol = conv_tol + RELATIVE_SLACK * lo.abs().max(hi.abs()).max(1.0);
    (0.5 * (lo + hi), (hi - lo).abs() <= tol)
}

/// Positive-finite-window screening for a relative-order envelope: `Err`
/// message when the hypothesis certainly fails, `Ok(false)` when the
/// estimate cannot certify it, `Ok(true)` when it holds.
fn screen_relative(
    env: &EnvelopeEstimate,
    need_lambda: bool,
    what: &str,
    params: &EstimatorParams,
) -> std::result::Result<bool, String> {
    for est in [&env.lo, &env.hi] {
        if matches!(est.class, GrowthClass::Infinity | GrowthClass::Zero) {
            return Err(format!("{what} is not positive finite"));
        }
    }
    if need_lambda && env.converged() && !positive(env.lo.liminf.min(env.hi.liminf), params) {
        return Err(format!("{what} has no positive lower value"));
    }
    Ok(env.converged())
}

/// Check one of the comparator-ratio statements (3-8) on an instance: the
/// running quotient of the composition's `h`-relative growth against the
/// outer factor's `k`-relative growth (3, 5, 7) or the inner factor's
/// `l`-relative growth (4, 6, 8), measured over the grid and compared
/// against the chain predicted from the relative orders.
pub fn check_ratio_theorem(
    theorem: u8,
    case: &CompositionCase,
    h: &GrowthObject,
    comparator: &GrowthObject,
    params: &EstimatorParams,
) -> Result<VerificationReport> {
    let side = match theorem {
        3 | 5 | 7 => RatioSide::OuterFactor,
        4 | 6 | 8 => RatioSide::InnerFactor,
        _ => {
            return Err(Error::InvalidValue(format!(
                "ratio statements are numbered 3 through 8, got {theorem}"
            )))
        }
    };
    let shape = match theorem {
        3 | 4 => RatioShape::TwoSided,
        5 | 6 => RatioShape::PivotOnly,
        _ => RatioShape::MinMax,
    };
    let comp_name = match side {
        RatioSide::OuterFactor => "k",
        RatioSide::InnerFactor => "l",
    };
    let instance = format!(
        "{}, h = {}, {} = {}",
        case.description(),
        h.description(),
        comp_name,
        comparator.description()
    );
    let violated = |msg: String| -> Result<VerificationReport> {
        Ok(VerificationReport {
            theorem,
            case: case.case,
            instance: instance.clone(),
            predicted_pair: None,
            detected_pair: None,
            rows: vec![],
            cells: vec![],
            hypothesis_violation: Some(msg),
            outcome: Outcome::HypothesisViolated,
        })
    };

    let (p, q) = case.pq();
    let (m, n) = case.mn();
    let h_pair = growth::detect_index_pair(h, params)?;
    let c_pair = growth::detect_index_pair(comparator, params)?;
    let (a, b) = (h_pair.p, h_pair.q);

    // structural side conditions on the comparator scale pairs
    let structure_ok = match (side, case.case) {
        (RatioSide::OuterFactor, CaseTag::QEqualsM) => c_pair.p == p && a == p && q >= n,
        (RatioSide::OuterFactor, CaseTag::QLessM) => {
            c_pair.p == p && a == p + m - q && q >= n
        }
        (RatioSide::OuterFactor, CaseTag::QGreaterM) => c_pair.p == p && a == p,
        (RatioSide::InnerFactor, CaseTag::QEqualsM) => c_pair.p == m && a == p,
        (RatioSide::InnerFactor, CaseTag::QLessM) => c_pair.p == m && a == p + m - q,
        (RatioSide::InnerFactor, CaseTag::QGreaterM) => c_pair.p == m && a == p,
    };
    if !structure_ok {
        return violated(format!(
            "comparator scale pairs h:({a},{b}), {comp_name}:({},{}) do not match the \
             case {} with f:({p},{q}), g:({m},{n})",
            c_pair.p,
            c_pair.q,
            case.case.label()
        ));
    }

    // the factor whose lower order must be positive
    let factor_lam = match side {
        RatioSide::OuterFactor => case.f_pair.order.liminf,
        RatioSide::InnerFactor => case.g_pair.order.liminf,
    };
    if !positive(factor_lam, params) {
        return violated(match side {
            RatioSide::OuterFactor => "the outer factor has no positive lower order".into(),
            RatioSide::InnerFactor => "the inner factor has no positive lower order".into(),
        });
    }

    // relative cell of the composition with respect to h
    let rel_q = match case.case {
        CaseTag::QGreaterM => q + n - m,
        _ => n,
    };
    let need_lambda = shape != RatioShape::PivotOnly;
    let env_h = composite_relative_order(case, h, b, rel_q, params)?;
    let mut constants_ok = match screen_relative(
        &env_h,
        need_lambda,
        "the composition's relative order",
        params,
    ) {
        Ok(ok) => ok,
        Err(msg) => return violated(msg),
    };

    // relative order of the measured factor with respect to the comparator
    let (d, factor_est) = match side {
        RatioSide::OuterFactor => (
            c_pair.q,
            relative_pq_order(&case.f, comparator, c_pair.q, q, params)?,
        ),
        RatioSide::InnerFactor => (
            c_pair.q,
            relative_pq_order(&case.g, comparator, c_pair.q, n, params)?,
        ),
    };
    let env_c = EnvelopeEstimate::point(factor_est);
    match screen_relative(&env_c, need_lambda, "the factor's relative order", params) {
        Ok(ok) => constants_ok &= ok,
        Err(msg) => return violated(msg),
    }

    let (lam_h, lam_h_ok) = pinned(env_h.lo.liminf, env_h.hi.liminf, params.conv_tol);
    let (rho_h, rho_h_ok) = pinned(env_h.lo.limsup, env_h.hi.limsup, params.conv_tol);
    let lam_c = env_c.hi.liminf;
    let rho_c = env_c.hi.limsup;
    constants_ok &= lam_h_ok && rho_h_ok;

    // Quotient grid and argument shifts. The grid radii live on the scale
    // that makes the *unshifted* side grow linearly in t; the shift then
    // moves the other side's argument onto its own natural scale.
    let (level, num_shift, den_shift) = match (side, case.case) {
        (RatioSide::OuterFactor, CaseTag::QGreaterM) => (rel_q, 0, m - n),
        (RatioSide::OuterFactor, _) => (n, 0, q - n),
        (RatioSide::InnerFactor, CaseTag::QGreaterM) => (n, q - m, 0),
        (RatioSide::InnerFactor, _) => (n, 0, 0),
    };
    let den_obj: &GrowthObject = match side {
        RatioSide::OuterFactor => &case.f,
        RatioSide::InnerFactor => &case.g,
    };
    let (snap, windowed) = curve_relative_hints(case, level);
    let ts = grid_points(params, snap.as_ref());

    let ratio_env = match &case.composite {
        Some(c) => {
            let (vs, absorbed) = ratio_quotients(
                c,
                h,
                b,
                num_shift,
                den_obj,
                comparator,
                d,
                den_shift,
                level,
                &ts,
                params.inverse_rel_tol,
            )?;
            EnvelopeEstimate::point(growth::classify(&ts, &vs, windowed, absorbed, params))
        }
        None => {
            let upper = BoundCurve::upper(&case.f, &case.g);
            let (vs, absorbed) = ratio_quotients(
                &upper,
                h,
                b,
                num_shift,
                den_obj,
                comparator,
                d,
                den_shift,
                level,
                &ts,
                params.inverse_rel_tol,
            )?;
            let hi = growth::classify(&ts, &vs, windowed, absorbed, params);
            let lower = BoundCurve::lower(&case.f, &case.g);
            let lo = match lower_curve_start(&lower, level, &ts) {
                Some(i) if ts.len() - i >= params.window + 2 => {
                    let (vs, absorbed) = ratio_quotients(
                        &lower,
                        h,
                        b,
                        num_shift,
                        den_obj,
                        comparator,
                        d,
                        den_shift,
                        level,
                        &ts[i..],
                        params.inverse_rel_tol,
                    )?;
                    growth::classify(&ts[i..], &vs, windowed, absorbed, params)
                }
                _ => GrowthEstimate {
                    converged: false,
                    ..hi.clone()
                },
            };
            EnvelopeEstimate { lo, hi }
        }
    };

    let conv = ratio_env.converged() && constants_ok;
    let tol = params.conv_tol;
    let (inf_lo, inf_hi) = (ratio_env.lo.liminf, ratio_env.hi.liminf);
    let (sup_lo, sup_hi) = (ratio_env.lo.limsup, ratio_env.hi.limsup);
    let hn = "h";
    let cn = comp_name;
    let rows = match shape {
        RatioShape::TwoSided => vec![
            make_row(
                format!("lam_{hn}/rho_{cn} <= liminf(quotient) <= lam_{hn}/lam_{cn}"),
                lam_h / rho_c,
                lam_h / lam_c,
                inf_lo,
                inf_hi,
                conv,
                tol,
            ),
            make_row(
                format!("lam_{hn}/lam_{cn} <= limsup(quotient) <= rho_{hn}/lam_{cn}"),
                lam_h / lam_c,
                rho_h / lam_c,
                sup_lo,
                sup_hi,
                conv,
                tol,
            ),
        ],
        RatioShape::PivotOnly => vec![
            make_row(
                format!("liminf(quotient) <= rho_{hn}/rho_{cn}"),
                f64::NEG_INFINITY,
                rho_h / rho_c,
                inf_lo,
                inf_hi,
                conv,
                tol,
            ),
            make_row(
                format!("rho_{hn}/rho_{cn} <= limsup(quotient)"),
                rho_h / rho_c,
                f64::INFINITY,
                sup_lo,
                sup_hi,
                conv,
                tol,
            ),
        ],
        RatioShape::MinMax => {
            let lo_pivot = (lam_h / lam_c).min(rho_h / rho_c);
            let hi_pivot = (lam_h / lam_c).max(rho_h / rho_c);
            vec![
                make_row(
                    format!("liminf(quotient) <= min(lam_{hn}/lam_{cn}, rho_{hn}/rho_{cn})"),
                    f64::NEG_INFINITY,
                    lo_pivot,
                    inf_lo,
                    inf_hi,
                    conv,
                    tol,
                ),
                make_row(
                    format!("max(lam_{hn}/lam_{cn}, rho_{hn}/rho_{cn}) <= limsup(quotient)"),
                    hi_pivot,
                    f64::INFINITY,
                    sup_lo,
                    sup_hi,
                    conv,
                    tol,
                ),
            ]
        }
    };

    let verdict = rows
        .iter()
        .fold(Verdict::Pass, |v, r| v.combine(r.verdict));

    Ok(VerificationReport {
        theorem,
        case: case.case,
        instance,
        predicted_pair: None,
        detected_pair: None,
        rows,
        cells: vec![],
        hypothesis_violation: None,
        outcome: Outcome::from_verdict(verdict),
    })
}

/// Suite controls. The default runs the full deterministic instance list
/// with no self-test.
#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    /// Truncate the generated instance list (for quick runs).
    pub limit: Option<usize>,
    /// Also corrupt one predicted window on the first instance and record
    /// whether the verdict machinery flags it.
    pub corrupt_self_test: bool,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seed: 7,
            limit: None,
            corrupt_self_test: false,
        }
    }
}

/// All reports of one suite run with the verdict tallies.
#[derive(Clone, Debug)]
pub struct SuiteSummary {
    pub reports: Vec<VerificationReport>,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub hypothesis_violated: usize,
    /// `Some(true)` when the corrupted-window self-test was requested and
    /// correctly produced a failure.
    pub self_test: Option<bool>,
}

struct SuiteInstance {
    f: GrowthObject,
    g: GrowthObject,
    theorems: Vec<u8>,
    comparator_degree: u32,
}

fn monomial_expr(degree: u32) -> EntireExpr {
    if degree <= 1 {
        EntireExpr::Var
    } else {
        EntireExpr::Monomial(degree)
    }
}

/// `exp^[height](inner)` over a decorated monomial; all variants share the
/// scale pair `(height+1, 1)` and order `degree`.
fn decorated_tower(rng: &mut ChaCha8Rng, height: u32, degree: u32) -> Result<GrowthObject> {
    let inner = monomial_expr(degree);
    let expr = match rng.gen_range(0..4u32) {
        0 => EntireExpr::ExpIter(height, Box::new(inner)),
        1 => {
            let c = [0.5, 2.0, 3.0][rng.gen_range(0..3usize)];
            EntireExpr::ExpIter(height, Box::new(EntireExpr::Scale(c, Box::new(inner))))
        }
        2 if degree >= 2 => {
            let s = rng.gen_range(1..degree);
            EntireExpr::ExpIter(
                height,
                Box::new(EntireExpr::Sum(vec![inner, monomial_expr(s)])),
            )
        }
        _ => {
            let s = rng.gen_range(1..=2u32);
            EntireExpr::Product(vec![
                monomial_expr(s),
                EntireExpr::ExpIter(height, Box::new(inner)),
            ])
        }
    };
    GrowthObject::from_expr(expr)
}

/// `exp^[level-1](z^degree)`: scale pair `(level, 1)` with order `degree`.
/// At level 1 the degree is raised to at least 2 so the pair stays
/// detectable above the diagonal threshold.
fn tower_comparator(level: u32, degree: u32) -> Result<GrowthObject> {
    let deg = if level == 1 { degree.max(2) } else { degree };
    let base = monomial_expr(deg);
    let expr = if level <= 1 {
        base
    } else {
        EntireExpr::ExpIter(level - 1, Box::new(base))
    };
    GrowthObject::from_expr(expr)
}

fn regular_profile(p: u32, q: u32, rho: f64) -> Result<GrowthObject> {
    Ok(GrowthObject::from_profile(GrowthProfile::new(
        p, q, rho, rho, None,
    )?))
}

/// The deterministic instance list: literal pairs on both same-scale and
/// nested-scale cases, profile-backed pairs covering the remaining case,
/// and a few oscillating profiles.
fn suite_instances(seed: u64) -> Result<Vec<SuiteInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    // q = m: exponential towers over polynomial inner factors
    for i in 0..16usize {
        let height = 1 + (i % 3) as u32;
        let jf = rng.gen_range(1..=4u32);
        let jg = rng.gen_range(2..=4u32);
        let f = decorated_tower(&mut rng, height, jf)?;
        let g = GrowthObject::from_expr(monomial_expr(jg))?;
        let mut theorems = vec![1, 2];
        theorems.extend(if i % 2 == 0 { [3, 5, 7] } else { [4, 6, 8] });
        out.push(SuiteInstance {
            f,
            g,
            theorems,
            comparator_degree: 1 + (i % 2) as u32,
        });
    }

    // q < m: towers (or polynomials) over exponential towers
    for i in 0..14usize {
        let height_f = (i % 3) as u32; // 0 = polynomial outer factor
        let jf = if height_f == 0 {
            rng.gen_range(2..=4u32)
        } else {
            rng.gen_range(1..=4u32)
        };
        let height_g = 1 + (i % 2) as u32;
        let jg = rng.gen_range(1..=3u32);
        let f = if height_f == 0 {
            GrowthObject::from_expr(monomial_expr(jf))?
        } else {
            decorated_tower(&mut rng, height_f, jf)?
        };
        let g = GrowthObject::from_expr(EntireExpr::ExpIter(
            height_g,
            Box::new(monomial_expr(jg)),
        ))?;
        let mut theorems = vec![1, 2];
        theorems.extend(if i % 2 == 0 { [3, 5, 7] } else { [4, 6, 8] });
        out.push(SuiteInstance {
            f,
            g,
            theorems,
            comparator_degree: 1 + (i % 2) as u32,
        });
    }

    // q > m: regular profiles on the q = 2 scale over polynomials
    for i in 0..12usize {
        let p = 2 + (i % 2) as u32;
        let rho = 1.3 + 2.7 * rng.gen::<f64>();
        let jg = rng.gen_range(2..=3u32);
        let f = regular_profile(p, 2, rho)?;
        let g = GrowthObject::from_expr(monomial_expr(jg))?;
        let mut theorems = vec![1, 2];
        match i % 3 {
            0 => theorems.extend([3, 5, 7]),
            1 => theorems.extend([4, 6, 8]),
            _ => {}
        }
        out.push(SuiteInstance {
            f,
            g,
            theorems,
            comparator_degree: 1 + (i % 2) as u32,
        });
    }

    // q < m with a profile inner factor
    for i in 0..8usize {
        let height_f = 1 + (i % 2) as u32;
        let jf = rng.gen_range(1..=3u32);
        let m = 2 + (i % 2) as u32;
        let rho = 1.5 + 2.0 * rng.gen::<f64>();
        let f = decorated_tower(&mut rng, height_f, jf)?;
        let g = regular_profile(m, 2, rho)?;
        let mut theorems = vec![1, 2];
        if i % 2 == 0 {
            theorems.extend([4, 6, 8]);
        }
        out.push(SuiteInstance {
            f,
            g,
            theorems,
            comparator_degree: 1 + (i % 2) as u32,
        });
    }

    // oscillating profiles: split order and lower order
    for i in 0..4usize {
        let p = 2 + (i % 2) as u32;
        let lambda = 1.3 + 0.5 * rng.gen::<f64>();
        let rho = lambda + 1.0 + rng.gen::<f64>();
        let schedule = BlockSchedule {
            t0: 10.0,
            gamma: 4.0,
        };
        let f = GrowthObject::from_profile(GrowthProfile::new(p, 2, rho, lambda, Some(schedule))?);
        let g = GrowthObject::from_expr(monomial_expr(2 + (i % 2) as u32))?;
        out.push(SuiteInstance {
            f,
            g,
            theorems: vec![1, 2],
            comparator_degree: 1,
        });
    }

    Ok(out)
}

/// Comparators for a ratio statement on one instance: `h` matched to the
/// composition's predicted scale, the second comparator matched to the
/// measured factor's scale.
fn suite_comparators(
    theorem: u8,
    case: &CompositionCase,
    degree: u32,
) -> Result<(GrowthObject, GrowthObject)> {
    let (p, q) = case.pq();
    let (m, _) = case.mn();
    let a = if q < m { p + m - q } else { p };
    let h = tower_comparator(a, 1)?;
    let comparator = if matches!(theorem, 3 | 5 | 7) {
        tower_comparator(p, degree)?
    } else {
        tower_comparator(m, degree)?
    };
    Ok((h, comparator))
}

fn check_instance(
    inst: &SuiteInstance,
    params: &EstimatorParams,
) -> Result<Vec<VerificationReport>> {
    let case = CompositionCase::analyze(inst.f.clone(), inst.g.clone(), params)?;
    let mut out = Vec::with_capacity(inst.theorems.len());
    for &t in &inst.theorems {
        let report = match t {
            1 => check_theorem1(&case, params)?,
            2 => check_theorem2(&case, params)?,
            3..=8 => {
                let (h, comparator) = suite_comparators(t, &case, inst.comparator_degree)?;
                check_ratio_theorem(t, &case, &h, &comparator, params)?
            }
            _ => {
                return Err(Error::InvalidValue(format!(
                    "composition statements are numbered 1 through 8, got {t}"
                )))
            }
        };
        out.push(report);
    }
    Ok(out)
}

/// Corrupt the predicted window of the first instance upward and report
/// whether the verdict machinery correctly fails it.
fn corrupted_probe(inst: &SuiteInstance, params: &EstimatorParams) -> Result<bool> {
    let case = CompositionCase::analyze(inst.f.clone(), inst.g.clone(), params)?;
    let (pp, qq) = case.predicted_pair();
    let env = composite_order(&case, pp, qq, params)?;
    let v = env.hi.limsup;
    let row = make_row(
        "corrupted floor (must fail)".into(),
        2.0 * v + 1.0,
        3.0 * v + 2.0,
        env.lo.limsup,
        env.hi.limsup,
        env.converged(),
        params.conv_tol,
    );
    Ok(row.verdict == Verdict::Fail)
}

/// Run every statement over the generated instance list. Instances are
/// checked in parallel; the report order (and hence any serialization) is
/// deterministic under a fixed seed. Suite runs use at least a 56-point
/// grid regardless of the caller's default.
pub fn run_suite(suite: &SuiteParams, params: &EstimatorParams) -> Result<SuiteSummary> {
    let mut eparams = params.clone();
    eparams.grid.points = eparams.grid.points.max(56);
    let mut instances = suite_instances(suite.seed)?;
    if let Some(limit) = suite.limit {
        instances.truncate(limit);
    }
    if instances.is_empty() {
        return Err(Error::InvalidValue("the suite needs at least one instance".into()));
    }
    let nested: Vec<Vec<VerificationReport>> = instances
        .par_iter()
        .map(|inst| check_instance(inst, &eparams))
        .collect::<Result<_>>()?;
    let reports: Vec<VerificationReport> = nested.into_iter().flatten().collect();
    let self_test = if suite.corrupt_self_test {
        Some(corrupted_probe(&instances[0], &eparams)?)
    } else {
        None
    };
    let mut pass = 0;
    let mut fail = 0;
    let mut inconclusive = 0;
    let mut hypothesis_violated = 0;
    for r in &reports {
        match r.outcome {
            Outcome::Pass => pass += 1,
            Outcome::Fail => fail += 1,
            Outcome::Inconclusive => inconclusive += 1,
            Outcome::HypothesisViolated => hypothesis_violated += 1,
        }
    }
    Ok(SuiteSummary {
        reports,
        pass,
        fail,
        inconclusive,
        hypothesis_violated,
        self_test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(src: &str) -> GrowthObject {
        GrowthObject::from_expr(src.parse().unwrap()).unwrap()
    }

    fn params() -> EstimatorParams {
        EstimatorParams::default()
    }

    #[test]
    fn envelope_brackets_the_literal_composition() {
        let f = obj("exp(z)");
        let g = obj("exp(z)");
        let r = TowerReal::from_f64(5.0).unwrap();
        let sample = composite_bound_curves(&f, &g, &r).unwrap();
        let exact = sample.exact.unwrap();
        assert!(sample.lower < exact);
        // nonnegative coefficients make the upper side exact
        assert_eq!(exact, sample.upper);
    }

    #[test]
    fn lower_curve_needs_a_positive_argument() {
        let f = obj("exp(z)");
        let g = obj("exp(z)");
        let r = TowerReal::from_f64(0.1).unwrap();
        let err = BoundCurve::lower(&f, &g).max_modulus(&r).unwrap_err();
        assert!(matches!(err, Error::NonpositiveArgument(_)), "{err}");
    }

    #[test]
    fn composition_order_statement_on_a_literal_pair() {
        // exp(z^2) o z^3: scale pair (2,1), order exactly 6
        let case = CompositionCase::analyze(obj("exp(z^2)"), obj("z^3"), &params()).unwrap();
        assert_eq!(case.case, CaseTag::QEqualsM);
        assert_eq!(case.predicted_pair(), (2, 1));
        let report = check_theorem1(&case, &params()).unwrap();
        assert_eq!(report.outcome, Outcome::Pass, "report: {report:?}");
        assert_eq!(report.detected_pair, Some((2, 1)));
        assert!(!report.rows.is_empty());
        for row in &report.rows {
            assert_eq!(row.verdict, Verdict::Pass, "row: {row:?}");
            assert!((row.measured_hi - 6.0).abs() < 1e-6);
        }
    }

    #[test]
    fn composition_order_statement_on_nested_towers() {
        // exp(z^2) o exp(z^3): q = 1 < m = 2, pair (3,1), order = inner order 3
        let case =
            CompositionCase::analyze(obj("exp(z^2)"), obj("exp(z^3)"), &params()).unwrap();
        assert_eq!(case.case, CaseTag::QLessM);
        assert_eq!(case.predicted_pair(), (3, 1));
        let report = check_theorem1(&case, &params()).unwrap();
        assert_eq!(report.outcome, Outcome::Pass, "report: {report:?}");
        assert_eq!(report.detected_pair, Some((3, 1)));
        for row in &report.rows {
            assert!((row.measured_hi - 3.0).abs() < 1e-6, "row: {row:?}");
        }
    }

    #[test]
    fn lower_order_statement_tracks_the_inner_factor() {
        let case =
            CompositionCase::analyze(obj("exp(z^2)"), obj("exp(z^3)"), &params()).unwrap();
        let report = check_theorem2(&case, &params()).unwrap();
        assert_eq!(report.outcome, Outcome::Pass, "report: {report:?}");
        let row = &report.rows[0];
        assert_eq!(row.lo, row.hi);
        assert!((row.lo - 3.0).abs() < 1e-6);
    }

    #[test]
    fn profile_composition_verifies_through_the_envelope() {
        // regular profile on the q = 2 scale over a polynomial: q > m
        let f = regular_profile(3, 2, 2.5).unwrap();
        let g = obj("z^2");
        let case = CompositionCase::analyze(f, g, &params()).unwrap();
        assert_eq!(case.case, CaseTag::QGreaterM);
        assert_eq!(case.predicted_pair(), (3, 2));
        assert!(case.composite.is_none());
        let report = check_theorem1(&case, &params()).unwrap();
        assert_eq!(report.outcome, Outcome::Pass, "report: {report:?}");
        assert_eq!(report.detected_pair, Some((3, 2)));
        for row in &report.rows {
            assert!((row.measured_hi - 2.5).abs() < 1e-3, "row: {row:?}");
        }
    }

    #[test]
    fn ratio_statement_collapses_on_a_regular_pair() {
        // f = exp(z^2), g = z^3: with h = exp(z), k = exp(z) every chain
        // member equals 3, and the running quotient settles there
        let case = CompositionCase::analyze(obj("exp(z^2)"), obj("z^3"), &params()).unwrap();
        let h = obj("exp(z)");
        let k = obj("exp(z)");
        for theorem in [3u8, 5, 7] {
            let report = check_ratio_theorem(theorem, &case, &h, &k, &params()).unwrap();
            assert_eq!(report.outcome, Outcome::Pass, "t{theorem}: {report:?}");
        }
    }

    #[test]
    fn inner_ratio_statement_accepts_a_polynomial_comparator() {
        // l = z^2 against g = z^3: relative order 3/2; quotient tends to
        // rho(f o g)/(3/2) = 6/1.5 = 4
        let case = CompositionCase::analyze(obj("exp(z^2)"), obj("z^3"), &params()).unwrap();
        let h = obj("exp(z)");
        let l = obj("z^2");
        for theorem in [4u8, 6, 8] {
            let report = check_ratio_theorem(theorem, &case, &h, &l, &params()).unwrap();
            assert_eq!(report.outcome, Outcome::Pass, "t{theorem}: {report:?}");
            if theorem == 4 {
                let row = &report.rows[0];
                assert!((row.measured_hi - 4.0).abs() < 1e-3, "row: {row:?}");
            }
        }
    }

    #[test]
    fn mismatched_comparator_scale_is_a_hypothesis_violation() {
        // h must live on the composition's scale (a = 2 here); exp[2](z)
        // sits one level too high
        let case = CompositionCase::analyze(obj("exp(z^2)"), obj("z^3"), &params()).unwrap();
        let h = obj("exp[2](z)");
        let k = obj("exp(z)");
        let report = check_ratio_theorem(3, &case, &h, &k, &params()).unwrap();
        assert_eq!(report.outcome, Outcome::HypothesisViolated);
        assert!(report.hypothesis_violation.is_some());
    }

    #[test]
    fn suite_is_deterministic_and_self_tests() {
        let suite = SuiteParams {
            seed: 11,
            limit: Some(3),
            corrupt_self_test: true,
        };
        let a = run_suite(&suite, &params()).unwrap();
        let b = run_suite(&suite, &params()).unwrap();
        assert_eq!(a.self_test, Some(true));
        assert_eq!(a.reports.len(), b.reports.len());
        for (ra, rb) in a.reports.iter().zip(&b.reports) {
            assert_eq!(ra.instance, rb.instance);
            assert_eq!(ra.outcome, rb.outcome);
            let ma: Vec<f64> = ra.rows.iter().map(|r| r.measured_hi).collect();
            let mb: Vec<f64> = rb.rows.iter().map(|r| r.measured_hi).collect();
            assert_eq!(ma, mb);
        }
        assert_eq!(a.fail, 0, "failures: {:?}", a.reports);
    }

    #[test]
    fn full_suite_has_no_failures() {
        let suite = SuiteParams {
            corrupt_self_test: true,
            ..SuiteParams::default()
        };
        let summary = run_suite(&suite, &params()).unwrap();
        println!(
            "suite: {} reports, {} pass, {} fail, {} inconclusive, {} hypothesis-violated",
            summary.reports.len(),
            summary.pass,
            summary.fail,
            summary.inconclusive,
            summary.hypothesis_violated,
        );
        assert_eq!(summary.self_test, Some(true));
        let failures: Vec<_> = summary
            .reports
            .iter()
            .filter(|r| r.outcome == Outcome::Fail)
            .map(|r| format!("t{} {} [{}]", r.theorem, r.instance, r.case.label()))
            .collect();
        assert!(failures.is_empty(), "failing reports: {failures:#?}");
        assert!(
            summary.pass > summary.reports.len() / 2,
            "suspiciously few passes: {} of {} (inconclusive {}, violated {})",
            summary.pass,
            summary.reports.len(),
            summary.inconclusive,
            summary.hypothesis_violated,
        );
    }
}
