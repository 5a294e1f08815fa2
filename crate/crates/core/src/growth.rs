//! Growth-scale estimators: iterated-log order and lower order, index-pair
//! detection, inverse maximum modulus, and relative orders.
//!
//! The central quantity is the quotient sequence
//!
//! ```text
//! v_j = log^[p] M(r_j) / log^[q] r_j      on radii r_j = exp^[q](t_j)
//! ```
//!
//! with `t_j = t0 * beta^j` geometric, so the denominator is exactly `t_j`
//! by construction. The limsup of `v_j` is the (p,q)-order, its liminf the
//! (p,q)-lower order. Classification works on the tail of the sequence:
//!
//! * diverging or vanishing tails are recognized directly (hard thresholds
//!   with a soft monotone-trend backup for slow power-law drifts such as
//!   `sqrt(t)` or `log(t)/t`);
//! * smooth finite tails are extrapolated by a least-squares fit of
//!   `v = a + b/t`, which is exact for the `const + c/t` quotients the
//!   expression family produces, so limits like 3 or 1 are recovered to
//!   floating-point accuracy rather than to grid resolution;
//! * oscillating profiles measured on their own scale get block boundaries
//!   snapped into the grid, and the limsup/liminf are windowed extrema over
//!   the last blocks, hitting the profile's target orders exactly.

use crate::error::{Error, Result};
use crate::funfam::{BlockSchedule, GrowthObject, MaxModulus};
use crate::tower::TowerReal;

/// Geometric measurement grid in the `t = log^[q] r` coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    /// First grid value.
    pub t0: f64,
    /// Geometric step between grid values.
    pub beta: f64,
    /// Number of grid points.
    pub points: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t0: 8.0,
            beta: 1.5,
            points: 40,
        }
    }
}

/// Tunables for the growth estimators. The defaults are what the command
/// line and the verification suite use unless overridden.
#[derive(Clone, Copy, Debug)]
pub struct EstimatorParams {
    pub grid: GridSpec,
    /// Snap radius for merging block boundaries into the grid, as a
    /// fraction of one grid step in log coordinates.
    pub snap_tau: f64,
    /// Tail values above this are classified as diverging outright.
    pub huge: f64,
    /// Tail values below this are classified as vanishing outright.
    pub tiny: f64,
    /// Convergence and classification tolerance for smooth tails.
    pub conv_tol: f64,
    /// Convergence tolerance for windowed oscillating tails.
    pub osc_tol: f64,
    /// Number of tail points in the smooth extrapolation window.
    pub window: usize,
    /// Largest order index scanned by index-pair detection.
    pub p_max: u32,
    /// Relative tolerance for inverse maximum modulus bisection.
    pub inverse_rel_tol: f64,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams {
            grid: GridSpec::default(),
            snap_tau: 0.4,
            huge: 1.0e6,
            tiny: 1.0e-6,
            conv_tol: 1.0e-6,
            osc_tol: 2.0e-2,
            window: 8,
            p_max: 6,
            inverse_rel_tol: 1.0e-9,
        }
    }
}

/// Soft divergence threshold: a monotone tail ending above this that has
/// at least doubled across the window is treated as diverging even though
/// it has not yet crossed `huge` (catches power-law drifts like sqrt(t)).
const SOFT_HUGE: f64 = 1.0e3;
/// Soft vanishing threshold, mirror image of [`SOFT_HUGE`].
const SOFT_TINY: f64 = 1.0e-3;

/// Limit class of a quotient sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    /// Diverges to infinity.
    Infinity,
    /// Vanishes.
    Zero,
    /// Converges to 1 within tolerance.
    Unit,
    /// Converges (or oscillates boundedly) away from 0 and 1.
    Finite,
}

impl GrowthClass {
    pub fn label(self) -> &'static str {
        match self {
            GrowthClass::Infinity => "infinity",
            GrowthClass::Zero => "zero",
            GrowthClass::Unit => "unit",
            GrowthClass::Finite => "finite",
        }
    }
}

/// Result of estimating one (p,q)-cell.
#[derive(Clone, Copy, Debug)]
pub struct GrowthEstimate {
    pub class: GrowthClass,
    /// Tail limsup: the (p,q)-order.
    pub limsup: f64,
    /// Tail liminf: the (p,q)-lower order.
    pub liminf: f64,
    /// Fitted 1/t coefficient of the smooth tail (0 for windowed tails);
    /// a diagnostic for how fast the quotient settles.
    pub slope: f64,
    /// Whether any tower operation along the way absorbed an operand.
    pub absorbed: bool,
    /// Whether the tail passed its stability test.
    pub converged: bool,
}

impl GrowthEstimate {
    fn diverging(absorbed: bool, liminf: f64) -> Self {
        GrowthEstimate {
            class: GrowthClass::Infinity,
            limsup: f64::INFINITY,
            liminf,
            slope: 0.0,
            absorbed,
            converged: true,
        }
    }

    fn vanishing(absorbed: bool) -> Self {
        GrowthEstimate {
            class: GrowthClass::Zero,
            limsup: 0.0,
            liminf: 0.0,
            slope: 0.0,
            absorbed,
            converged: true,
        }
    }
}

/// Saturating ratio of two positive tower values. Within float range this
/// is the plain quotient; astronomically large operands are compared after
/// descending logarithms, saturating to 0, 1, or infinity.
pub fn ratio_saturating(num: &TowerReal, den: &TowerReal) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let mut a = *num;
    let mut b = *den;
    let mut depth = 0u32;
    loop {
        if let (Some(x), Some(y)) = (a.float(), b.float()) {
            return match depth {
                0 => x / y,
                1 => {
                    let d = x - y;
                    if d > 709.0 {
                        f64::INFINITY
                    } else if d < -709.0 {
                        0.0
                    } else {
                        d.exp()
                    }
                }
                // two or more exponentials deep: any visible gap saturates
                _ => {
                    if x - y > 1.0e-9 {
                        f64::INFINITY
                    } else if y - x > 1.0e-9 {
                        0.0
                    } else {
                        1.0
                    }
                }
            };
        }
        if depth >= 8 {
            // equal levels and mantissas would have produced floats by now
            return match a.cmp(&b) {
                std::cmp::Ordering::Greater => f64::INFINITY,
                std::cmp::Ordering::Less => 0.0,
                std::cmp::Ordering::Equal => 1.0,
            };
        }
        a = match a.log1() {
            Ok(v) => v,
            Err(_) => return 0.0, // numerator collapsed to <= 0 first
        };
        b = match b.log1() {
            Ok(v) => v,
            Err(_) => return f64::INFINITY, // denominator collapsed first
        };
        depth += 1;
    }
}

/// The measurement grid in `t = log^[q] r` coordinates. When the object
/// carries an oscillation schedule on the same `q`-scale, block boundaries
/// inside the grid range are snapped in (nearby geometric points within
/// `snap_tau` of a step are replaced by the boundary) so windowed extrema
/// sample the profile's exact targets.
pub fn measurement_grid(obj: &GrowthObject, q: u32, params: &EstimatorParams) -> Vec<f64> {
    let snap_scale = match (obj.block_schedule(), obj.profile()) {
        (Some(schedule), Some(profile)) if profile.q() == q => Some(schedule),
        _ => None,
    };
    grid_points(params, snap_scale)
}

/// Geometric grid in a transformed coordinate, with optional boundary
/// snapping against a block schedule living on the same coordinate.
pub(crate) fn grid_points(params: &EstimatorParams, snap: Option<&BlockSchedule>) -> Vec<f64> {
    let g = &params.grid;
    let mut ts: Vec<f64> = (0..g.points)
        .map(|j| g.t0 * g.beta.powi(j as i32))
        .collect();
    if let Some(schedule) = snap {
        let hi = *ts.last().unwrap();
        let bounds = schedule.boundaries_in(g.t0, hi);
        let tol = params.snap_tau * g.beta.ln();
        ts.retain(|t| {
            bounds
                .iter()
                .all(|b| ((t / b).ln()).abs() >= tol)
        });
        ts.extend_from_slice(&bounds);
        ts.sort_by(f64::total_cmp);
        ts.dedup();
    }
    ts
}

/// The quotient sequence `log^[p] M(r_j) / t_j` on the measurement grid.
/// Returns `(t values, quotients, absorbed flag)`. A maximum modulus too
/// small for `p` logarithms contributes quotient 0.
pub fn quotient_sequence(
    obj: &GrowthObject,
    p: u32,
    q: u32,
    params: &EstimatorParams,
) -> Result<(Vec<f64>, Vec<f64>, bool)> {
    let ts = measurement_grid(obj, q, params);
    let (vs, absorbed) = quotients_on_grid(obj, p, q, &ts)?;
    Ok((ts, vs, absorbed))
}

/// The quotients `log^[p] M(exp^[q] t_j) / t_j` over a prepared grid, for
/// any maximum-modulus carrier.
pub(crate) fn quotients_on_grid(
    m: &dyn MaxModulus,
    p: u32,
    q: u32,
    ts: &[f64],
) -> Result<(Vec<f64>, bool)> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidValue(format!(
            "order indices must satisfy p >= 1 and q >= 1, got ({p},{q})"
        )));
    }
    let mut vs = Vec::with_capacity(ts.len());
    let mut absorbed = false;
    for &t in ts {
        let t_tower = TowerReal::from_f64(t)?;
        let r = t_tower.exp_k(q);
        let value = m.max_modulus(&r)?;
        absorbed |= value.absorbed();
        let v = match value.log_k(p) {
            Ok(num) => {
                absorbed |= num.absorbed();
                ratio_saturating(&num, &t_tower)
            }
            Err(_) => 0.0,
        };
        vs.push(v);
    }
    Ok((vs, absorbed))
}

/// Order estimate of any maximum-modulus carrier over a prepared grid,
/// with an optional windowed (oscillation-aware) classification.
pub(crate) fn order_on_grid(
    m: &dyn MaxModulus,
    p: u32,
    q: u32,
    ts: &[f64],
    windowed: Option<f64>,
    params: &EstimatorParams,
) -> Result<GrowthEstimate> {
    let (vs, absorbed) = quotients_on_grid(m, p, q, ts)?;
    Ok(classify(ts, &vs, windowed, absorbed, params))
}

fn is_nondecreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] <= w[1])
}

fn is_nonincreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] >= w[1])
}

/// Least-squares fit `y = a + b x`; returns `(a, b, max |residual|)`.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let resid = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (a + b * x)).abs())
        .fold(0.0, f64::max);
    (a, b, resid)
}

/// Extrapolate a smooth tail through a `v = a + b/t` fit over `window`
/// points ending at index `end` (exclusive).
fn extrapolated_limit(ts: &[f64], vs: &[f64], end: usize, window: usize) -> (f64, f64, f64) {
    let lo = end.saturating_sub(window);
    let xs: Vec<f64> = ts[lo..end].iter().map(|t| 1.0 / t).collect();
    fit_line(&xs, &vs[lo..end])
}

fn classify_smooth(
    ts: &[f64],
    vs: &[f64],
    absorbed: bool,
    params: &EstimatorParams,
) -> GrowthEstimate {
    let n = vs.len();
    let window = params.window.clamp(3, n.saturating_sub(1).max(3));
    let (a, b, resid) = extrapolated_limit(ts, vs, n, window);
    let (a_prev, _, _) = extrapolated_limit(ts, vs, n - 1, window);
    let scale = a.abs().max(1.0);
    let converged =
        resid <= 10.0 * params.conv_tol * scale && (a - a_prev).abs() <= 10.0 * params.conv_tol * scale;
    let class = if a.abs() <= params.conv_tol {
        GrowthClass::Zero
    } else if (a - 1.0).abs() <= params.conv_tol {
        GrowthClass::Unit
    } else {
        GrowthClass::Finite
    };
    let value = match class {
        GrowthClass::Zero => 0.0,
        GrowthClass::Unit => 1.0,
        _ => a,
    };
    GrowthEstimate {
        class,
        limsup: value,
        liminf: value,
        slope: b,
        absorbed,
        converged,
    }
}

fn classify_windowed(
    ts: &[f64],
    vs: &[f64],
    gamma: f64,
    absorbed: bool,
    params: &EstimatorParams,
) -> GrowthEstimate {
    let t_max = *ts.last().unwrap();
    let span = gamma.powi(3);
    let window_stats = |lo: f64, hi: f64| -> Option<(f64, f64)> {
        let mut sup = f64::NEG_INFINITY;
        let mut inf = f64::INFINITY;
        let mut seen = false;
        for (t, v) in ts.iter().zip(vs) {
            if *t > lo && *t <= hi {
                sup = sup.max(*v);
                inf = inf.min(*v);
                seen = true;
            }
        }
        seen.then_some((sup, inf))
    };
    let last = window_stats(t_max / span, t_max);
    let prev = window_stats(t_max / (span * span), t_max / span);
    let (Some((sup, inf)), Some((sup_p, inf_p))) = (last, prev) else {
        // degenerate grid; fall back to the smooth path
        return classify_smooth(ts, vs, absorbed, params);
    };
    let converged = (sup - sup_p).abs() <= params.osc_tol * sup.abs().max(1.0)
        && (inf - inf_p).abs() <= params.osc_tol * inf.abs().max(1.0);
    let unit = (sup - 1.0).abs() <= params.osc_tol && (inf - 1.0).abs() <= params.osc_tol;
    GrowthEstimate {
        class: if unit { GrowthClass::Unit } else { GrowthClass::Finite },
        limsup: sup,
        liminf: inf,
        slope: 0.0,
        absorbed,
        converged,
    }
}

pub(crate) fn classify(
    ts: &[f64],
    vs: &[f64],
    windowed: Option<f64>,
    absorbed: bool,
    params: &EstimatorParams,
) -> GrowthEstimate {
    let n = vs.len();
    let tail_len = params.window.min(n);
    let tail = &vs[n - tail_len..];
    let tail_max = tail.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let tail_min = tail.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let last = vs[n - 1];
    let first = tail[0];

    if tail_max.is_infinite() || tail_max > params.huge {
        let liminf = if tail_min < params.tiny { 0.0 } else { f64::INFINITY };
        return GrowthEstimate::diverging(absorbed, liminf);
    }
    if is_nondecreasing(tail) && last >= SOFT_HUGE && last >= 2.0 * first {
        return GrowthEstimate::diverging(absorbed, f64::INFINITY);
    }
    if tail_max < params.tiny {
        return GrowthEstimate::vanishing(absorbed);
    }
    if is_nonincreasing(tail) && last <= SOFT_TINY && 2.0 * last <= first {
        return GrowthEstimate::vanishing(absorbed);
    }
    match windowed {
        Some(gamma) => classify_windowed(ts, vs, gamma, absorbed, params),
        None => classify_smooth(ts, vs, absorbed, params),
    }
}

/// Estimate the (p,q)-order (tail limsup) and lower order (tail liminf) of
/// a growth object.
pub fn pq_order(
    obj: &GrowthObject,
    p: u32,
    q: u32,
    params: &EstimatorParams,
) -> Result<GrowthEstimate> {
    let ts = measurement_grid(obj, q, params);
    let windowed = match (obj.block_schedule(), obj.profile()) {
        (Some(schedule), Some(profile)) if profile.q() == q && profile.p() == p => {
            Some(schedule.gamma)
        }
        _ => None,
    };
    order_on_grid(obj, p, q, &ts, windowed, params)
}

/// One consistency cell checked around a detected index pair.
#[derive(Clone, Debug)]
pub struct CellCheck {
    pub p: u32,
    pub q: u32,
    pub expected: GrowthClass,
    pub estimate: GrowthEstimate,
    pub ok: bool,
}

/// A detected index pair with its supporting evidence.
#[derive(Clone, Debug)]
pub struct IndexPairReport {
    pub p: u32,
    pub q: u32,
    /// Estimate at the pair itself; `limsup` is the (p,q)-order.
    pub order: GrowthEstimate,
    /// Estimate one step down the diagonal, when that cell is in range.
    pub predecessor: Option<GrowthEstimate>,
    /// Neighbouring cells with their expected limit classes.
    pub checks: Vec<CellCheck>,
    /// Whether every consistency check passed.
    pub consistent: bool,
    /// Whether the order and lower order coincide (converged estimate with
    /// matching tail limsup and liminf).
    pub regular: bool,
}

/// Margin by which a diagonal order must exceed 1 (and an off-diagonal
/// order must exceed 0) to count as an index-pair candidate.
const CANDIDATE_MARGIN: f64 = 1.0e-3;

/// Scan cells `p >= q >= 1` in increasing `p` (and decreasing `q` within
/// each `p`) for the first cell whose order is finite and above its
/// threshold (1 on the diagonal, 0 off it) while the diagonal predecessor
/// cell diverges or vanishes. Neighbouring cells are then checked for the
/// expected limit classes: diverging to the left, vanishing below, unit
/// one step up the diagonal.
pub fn detect_index_pair(
    obj: &GrowthObject,
    params: &EstimatorParams,
) -> Result<IndexPairReport> {
    detect_index_pair_with(&|p, q| pq_order(obj, p, q, params), params)
}

/// Index-pair scan over an arbitrary cell measurer; `detect_index_pair`
/// wires in `pq_order`, bound curves wire in their own grid measurement.
pub(crate) fn detect_index_pair_with(
    measure: &dyn Fn(u32, u32) -> Result<GrowthEstimate>,
    params: &EstimatorParams,
) -> Result<IndexPairReport> {
    for p in 1..=params.p_max {
        for q in (1..=p).rev() {
            let est = measure(p, q)?;
            if !matches!(est.class, GrowthClass::Finite | GrowthClass::Unit) {
                continue;
            }
            let threshold = if p == q { 1.0 } else { 0.0 };
            if !(est.converged && est.limsup.is_finite() && est.limsup > threshold + CANDIDATE_MARGIN)
            {
                continue;
            }
            let predecessor = if p >= 2 && q >= 2 {
                Some(measure(p - 1, q - 1)?)
            } else {
                None
            };
            if let Some(pred) = &predecessor {
                if !matches!(pred.class, GrowthClass::Infinity | GrowthClass::Zero) {
                    continue;
                }
            }
            let mut checks = Vec::new();
            if p > q {
                let est_left = measure(p - 1, q)?;
                let ok = est_left.class == GrowthClass::Infinity;
                checks.push(CellCheck {
                    p: p - 1,
                    q,
                    expected: GrowthClass::Infinity,
                    estimate: est_left,
                    ok,
                });
            }
            if q >= 2 {
                let est_down = measure(p, q - 1)?;
                let ok = est_down.class == GrowthClass::Zero;
                checks.push(CellCheck {
                    p,
                    q: q - 1,
                    expected: GrowthClass::Zero,
                    estimate: est_down,
                    ok,
                });
            }
            let est_diag = measure(p + 1, q + 1)?;
            let ok_diag = est_diag.class == GrowthClass::Unit;
            checks.push(CellCheck {
                p: p + 1,
                q: q + 1,
                expected: GrowthClass::Unit,
                estimate: est_diag,
                ok: ok_diag,
            });
            let consistent = checks.iter().all(|c| c.ok);
            let spread_tol = params.conv_tol * est.limsup.abs().max(1.0);
            let regular = est.converged && (est.limsup - est.liminf).abs() <= spread_tol;
            return Ok(IndexPairReport {
                p,
                q,
                order: est,
                predecessor,
                checks,
                consistent,
                regular,
            });
        }
    }
    Err(Error::NotFound(params.p_max))
}

/// Relative difference between two positive tower values after reducing
/// both by enough logarithms to reach float scale.
pub fn comparison_metric(a: &TowerReal, b: &TowerReal) -> f64 {
    if a == b {
        return 0.0;
    }
    if let (Some(x), Some(y)) = (a.float(), b.float()) {
        return (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
    }
    let k = a.level().max(b.level());
    let la = match a.log_k(k).map(|v| v.float()) {
        Ok(Some(v)) => v,
        _ => return f64::INFINITY,
    };
    let lb = match b.log_k(k).map(|v| v.float()) {
        Ok(Some(v)) => v,
        _ => return f64::INFINITY,
    };
    (la - lb).abs() / la.abs().max(lb.abs()).max(1.0)
}

/// Smallest radius with `M(r) = s`, for targets strictly above `|f(0)|`.
/// Exact structural inverses (iterated exponentials over monomials,
/// profiles) are used when available; otherwise geometric-mean bisection
/// on the radius, stopping when the comparison metric between `M(r)` and
/// `s` drops below `rel_tol`.
pub fn inverse_max_modulus(
    obj: &GrowthObject,
    s: &TowerReal,
    rel_tol: f64,
) -> Result<TowerReal> {
    let anchor = obj.anchor();
    if *s <= anchor {
        return Err(Error::Domain(format!(
            "target {s} is not above the value at the origin {anchor}"
        )));
    }
    if let Some(exact) = obj.try_exact_inverse(s) {
        return exact;
    }

    // establish a bracket M(lo) < s <= M(hi)
    let min_radius = obj.min_radius();
    let mut lo = TowerReal::from_f64(0.5)?;
    if lo <= min_radius {
        lo = min_radius.add(&TowerReal::one())?;
    }
    let mut steps = 0;
    while obj.max_modulus(&lo)? >= *s {
        // squaring in log space walks toward the minimum radius
        lo = if min_radius.is_zero() {
            lo.pow_scalar(2.0)?
        } else {
            // geometric mean with the domain edge
            lo.mul(&min_radius)?.pow_scalar(0.5)?
        };
        steps += 1;
        if steps > 200 {
            return Err(Error::Indeterminate(
                "could not bracket the inverse from below".into(),
            ));
        }
    }
    let mut hi = TowerReal::from_f64(2.0)?;
    if hi <= lo {
        hi = lo.pow_scalar(2.0)?;
    }
    steps = 0;
    while obj.max_modulus(&hi)? < *s {
        hi = hi.pow_scalar(2.0)?;
        steps += 1;
        if steps > 400 {
            return Err(Error::Indeterminate(
                "could not bracket the inverse from above".into(),
            ));
        }
    }

    for _ in 0..200 {
        let mid = lo.mul(&hi)?.pow_scalar(0.5)?;
        let m = obj.max_modulus(&mid)?;
        if comparison_metric(&m, s) <= rel_tol {
            return Ok(mid);
        }
        if m < *s {
            lo = mid;
        } else {
            hi = mid;
        }
        if comparison_metric(&lo, &hi) <= rel_tol * 1.0e-2 {
            return Ok(lo.mul(&hi)?.pow_scalar(0.5)?);
        }
    }
    Err(Error::Indeterminate(
        "inverse bisection did not converge".into(),
    ))
}

/// Relative (p,q)-order of `f` with respect to `g`: the growth of
/// `M_g^{-1}(M_f(r))` measured against `log^[q] r`, i.e. quotients
/// `log^[p] M_g^{-1}(M_f(r_j)) / t_j`.
pub fn relative_pq_order(
    f: &GrowthObject,
    g: &GrowthObject,
    p: u32,
    q: u32,
    params: &EstimatorParams,
) -> Result<GrowthEstimate> {
    let ts = measurement_grid(f, q, params);
    let (vs, absorbed) = relative_quotients_on_grid(f, g, p, q, &ts, params.inverse_rel_tol)?;
    let windowed = match (f.block_schedule(), f.profile()) {
        (Some(schedule), Some(profile)) if profile.q() == q => Some(schedule.gamma),
        _ => None,
    };
    Ok(classify(&ts, &vs, windowed, absorbed, params))
}

/// The relative quotients `log^[p] M_g^{-1}(M(exp^[q] t_j)) / t_j` over a
/// prepared grid, for any maximum-modulus carrier measured against the
/// comparator `g`.
pub(crate) fn relative_quotients_on_grid(
    m: &dyn MaxModulus,
    g: &GrowthObject,
    p: u32,
    q: u32,
    ts: &[f64],
    inverse_rel_tol: f64,
) -> Result<(Vec<f64>, bool)> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidValue(format!(
            "order indices must satisfy p >= 1 and q >= 1, got ({p},{q})"
        )));
    }
    let mut vs = Vec::with_capacity(ts.len());
    let mut absorbed = false;
    for &t in ts {
        let t_tower = TowerReal::from_f64(t)?;
        let r = t_tower.exp_k(q);
        let value = m.max_modulus(&r)?;
        absorbed |= value.absorbed();
        let x = inverse_max_modulus(g, &value, inverse_rel_tol)?;
        absorbed |= x.absorbed();
        let v = match x.log_k(p) {
            Ok(num) => ratio_saturating(&num, &t_tower),
            Err(_) => 0.0,
        };
        vs.push(v);
    }
    Ok((vs, absorbed))
}
