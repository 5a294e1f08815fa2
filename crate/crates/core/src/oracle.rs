//! Truncated-power-series oracle: an independent numeric check on the
//! tower evaluation of expression maxima, with rigorous enclosures.
//!
//! Coefficients are built bottom-up from the expression tree (convolution
//! for products, the `h' = u' h` recurrence for exponentials, Horner
//! composition for nested functions). Every rule is monotone in the
//! coefficients and truncation only drops nonnegative terms, so each
//! computed coefficient is a lower bound for the true one. That turns the
//! expression itself into a tail majorant:
//!
//! ```text
//! 0 <= sum_{n >= N} c_n r^n  <=  f(r) - p(r)
//! ```
//!
//! where `p` is the computed partial sum and `f(r)` is evaluated directly
//! in floats. The reported maximum-modulus interval combines the sampled
//! circle maximum, a golden-section refinement, a derivative bound for the
//! gap between samples, and the tail bound. A small relative slack covers
//! float rounding in the majorant evaluation; beyond that the enclosure is
//! airtight as long as the tail stays below the guard fraction of the
//! value, which is what [`OracleParams::guard_frac`] enforces.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funfam::EntireExpr;

/// Tuning for the series oracle.
#[derive(Clone, Copy, Debug)]
pub struct OracleParams {
    /// Number of series coefficients kept (degrees `0..n_terms`).
    pub n_terms: usize,
    /// Circle sample count for the maximum search.
    pub samples: usize,
    /// Largest tolerated tail as a fraction of the partial sum; beyond it
    /// the radius is outside the oracle's trustworthy range.
    pub guard_frac: f64,
    /// Ceiling for automatic term-count escalation in the sandwich check
    /// (composed series need far more terms than their factors).
    pub max_terms: usize,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            n_terms: 64,
            samples: 4096,
            guard_frac: 1.0e-6,
            max_terms: 512,
        }
    }
}

/// Relative slack added to the tail bound to absorb float rounding in the
/// majorant evaluation.
const FLOAT_SLACK: f64 = 1.0e-14;

/// A rigorous enclosure of the maximum modulus on `|z| = r`.
#[derive(Clone, Copy, Debug)]
pub struct MaxModInterval {
    pub lo: f64,
    pub hi: f64,
    /// Angle of the refined maximum (usually 0 for nonnegative series).
    pub theta_max: f64,
    /// Tail bound used in the enclosure.
    pub tail: f64,
}

impl MaxModInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Truncated series for one expression, with the expression retained as
/// its own tail majorant.
#[derive(Clone, Debug)]
pub struct SeriesOracle {
    expr: EntireExpr,
    coeffs: Vec<f64>,
    params: OracleParams,
}

fn mul_trunc(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len.min(a.len() + b.len() - 1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 || i >= out.len() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if i + j >= out.len() {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

fn exp_series(u: &[f64], len: usize) -> Vec<f64> {
    let mut h = vec![0.0; len];
    h[0] = u.first().copied().unwrap_or(0.0).exp();
    for n in 1..len {
        let mut acc = 0.0;
        for j in 1..=n.min(u.len() - 1) {
            acc += (j as f64) * u[j] * h[n - j];
        }
        h[n] = acc / n as f64;
    }
    h
}

fn compose_series(outer: &[f64], inner: &[f64], len: usize) -> Vec<f64> {
    // Horner in the inner series; entire outer functions keep this valid
    // for any inner constant term.
    let mut acc = vec![0.0; 1];
    for &c in outer.iter().rev() {
        acc = mul_trunc(&acc, inner, len);
        if acc.is_empty() {
            acc = vec![0.0];
        }
        acc[0] += c;
    }
    acc.resize(len, 0.0);
    acc
}

fn series(expr: &EntireExpr, len: usize) -> Vec<f64> {
    match expr {
        EntireExpr::Var => {
            let mut c = vec![0.0; len.min(2).max(1)];
            if len >= 2 {
                c[1] = 1.0;
            }
            c
        }
        EntireExpr::Const(v) => vec![*v],
        EntireExpr::Monomial(n) => {
            let n = *n as usize;
            if n < len {
                let mut c = vec![0.0; n + 1];
                c[n] = 1.0;
                c
            } else {
                vec![0.0]
            }
        }
        EntireExpr::Sum(children) => {
            let mut out = vec![0.0; 1];
            for child in children {
                let c = series(child, len);
                if c.len() > out.len() {
                    out.resize(c.len(), 0.0);
                }
                for (o, x) in out.iter_mut().zip(&c) {
                    *o += x;
                }
            }
            out
        }
        EntireExpr::Product(children) => {
            let mut out = vec![1.0];
            for child in children {
                out = mul_trunc(&out, &series(child, len), len);
            }
            out
        }
        EntireExpr::Scale(v, inner) => {
            let mut c = series(inner, len);
            for x in &mut c {
                *x *= v;
            }
            c
        }
        EntireExpr::ExpIter(k, inner) => {
            let mut c = series(inner, len);
            for _ in 0..*k {
                c = exp_series(&c, len);
            }
            c
        }
        EntireExpr::Compose(f, g) => {
            let outer = series(f, len);
            let inner = series(g, len);
            compose_series(&outer, &inner, len)
        }
    }
}

impl SeriesOracle {
    pub fn new(expr: EntireExpr, params: OracleParams) -> Result<Self> {
        expr.validate()?;
        if params.n_terms < 2 || params.samples < 8 {
            return Err(Error::InvalidValue(
                "oracle needs at least 2 terms and 8 samples".into(),
            ));
        }
        let mut coeffs = series(&expr, params.n_terms);
        coeffs.resize(params.n_terms, 0.0);
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Overflow(
                "series coefficients overflow float range".into(),
            ));
        }
        Ok(SeriesOracle {
            expr,
            coeffs,
            params,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Partial sum at a complex point (Horner).
    pub fn value_at(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    fn partial_at_radius(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    /// Upper bound on the true series tail past the kept terms at radius
    /// `r`: majorant value minus partial sum, plus float slack.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let full = self.expr.eval_f64(r);
        let partial = self.partial_at_radius(r);
        let raw = (full - partial).max(0.0);
        raw + FLOAT_SLACK * full.abs()
    }

    /// Rigorous enclosure of the maximum modulus on `|z| = r`.
    ///
    /// Fails with a guard error when the tail bound exceeds
    /// `guard_frac * partial`, meaning the kept terms no longer dominate at
    /// this radius.
    pub fn max_modulus_interval(&self, r: f64) -> Result<MaxModInterval> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidValue(format!(
                "oracle radius must be positive and finite, got {r}"
            )));
        }
        let tail = self.tail_bound(r);
        let partial_scale = self.partial_at_radius(r);
        if !tail.is_finite() || tail > self.params.guard_frac * partial_scale {
            return Err(Error::GuardRadius(format!(
                "tail bound {tail:.3e} exceeds the guard fraction of the value at r = {r}"
            )));
        }

        let n = self.params.samples;
        let gap = std::f64::consts::TAU / n as f64;
        let modulus_at = |theta: f64| {
            self.value_at(Complex64::from_polar(r, theta)).norm()
        };
        let mut best_k = 0usize;
        let mut best = f64::NEG_INFINITY;
        for k in 0..n {
            let v = modulus_at(gap * k as f64);
            if v > best {
                best = v;
                best_k = k;
            }
        }
        let sample_max = best;

        // golden-section refinement on the bracket around the best sample
        let mut a = gap * (best_k as f64 - 1.0);
        let mut b = gap * (best_k as f64 + 1.0);
        let inv_phi = 0.618_033_988_749_894_9;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = modulus_at(x1);
        let mut f2 = modulus_at(x2);
        for _ in 0..60 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = modulus_at(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = modulus_at(x1);
            }
        }
        let theta_refined = 0.5 * (a + b);
        let refined_max = modulus_at(theta_refined).max(sample_max);

        // The partial sum moves at most lipschitz * gap/2 between samples.
        // Horner on the weighted coefficients: termwise powers would
        // overflow long before the sum itself does.
        let mut lipschitz = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            lipschitz = lipschitz * r + k as f64 * c;
        }
        let lo = (sample_max - tail).max(0.0);
        let hi = refined_max + lipschitz * gap * 0.5 + tail;
        Ok(MaxModInterval {
            lo,
            hi,
            theta_max: theta_refined.rem_euclid(std::f64::consts::TAU),
            tail,
        })
    }
}

/// Relative tolerance under which two tight, overlapping intervals are
/// treated as the equality case of `<=` (composition chains frequently
/// make two sides of an inequality literally the same quantity). Sized to
/// cover the sampling-gap widening on steep composed series, where the
/// interval width reaches a few percent of the value.
const EQUALITY_TOL: f64 = 5.0e-2;

/// Outcome of an interval inequality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The inequality holds for all points of the intervals, or the
    /// intervals coincide within measurement width.
    Pass,
    /// The intervals overlap too broadly to decide.
    Inconclusive,
    /// The inequality is violated for every point of the intervals.
    Fail,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }

    /// The worse of two verdicts.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Interval test of `a <= b`. Certain orderings decide directly; otherwise
/// two tight intervals whose midpoints agree within [`EQUALITY_TOL`] count
/// as equal (hence Pass), and anything else is Inconclusive.
pub fn interval_leq(a: &MaxModInterval, b: &MaxModInterval) -> Verdict {
    if a.lo > b.hi {
        return Verdict::Fail;
    }
    if a.hi <= b.lo {
        return Verdict::Pass;
    }
    let mid_a = 0.5 * (a.lo + a.hi);
    let mid_b = 0.5 * (b.lo + b.hi);
    let scale = mid_a.abs().max(mid_b.abs()).max(1.0e-300);
    let tight = a.width() <= EQUALITY_TOL * scale && b.width() <= EQUALITY_TOL * scale;
    if tight && mid_a - mid_b <= EQUALITY_TOL * scale {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

/// Argument fed to the lower composition bound: `M_g(r/2)/8 - |g(0)|`.
/// Errs when the bound is vacuous at this radius (the subtraction is not
/// positive), which happens below the "sufficiently large r" threshold.
pub fn lower_bound_argument(g: &EntireExpr, r: f64, params: OracleParams) -> Result<f64> {
    let oracle_g = SeriesOracle::new(g.clone(), params)?;
    let m_half = oracle_g.max_modulus_interval(r / 2.0)?;
    let arg = m_half.lo / 8.0 - g.eval_f64(0.0);
    if arg > 0.0 {
        Ok(arg)
    } else {
        Err(Error::NonpositiveArgument(format!(
            "lower-bound argument {arg:.3e} at r = {r}; the bound only applies for larger radii"
        )))
    }
}

/// Outcome of checking the composition sandwich
/// `M_f(M_g(r/2)/8 - |g(0)|) <= M_{f o g}(r) <= M_f(M_g(r))` at one radius.
#[derive(Clone, Copy, Debug)]
pub struct SandwichRecord {
    pub r: f64,
    pub lower: MaxModInterval,
    pub middle: MaxModInterval,
    pub upper: MaxModInterval,
    /// True when the lower bound's argument was not positive at this
    /// radius, so the trivial bound 0 was used instead.
    pub lower_vacuous: bool,
    pub verdict: Verdict,
}

/// Evaluate an oracle across an interval of radii, producing the interval
/// hull: a containing interval for `M(x)` for the exact `x` inside
/// `[r_lo, r_hi]`.
fn interval_through(oracle: &SeriesOracle, r_lo: f64, r_hi: f64) -> Result<MaxModInterval> {
    let at_lo = oracle.max_modulus_interval(r_lo)?;
    if r_hi <= r_lo {
        return Ok(at_lo);
    }
    let at_hi = oracle.max_modulus_interval(r_hi)?;
    Ok(MaxModInterval {
        lo: at_lo.lo,
        hi: at_hi.hi,
        theta_max: at_hi.theta_max,
        tail: at_hi.tail.max(at_lo.tail),
    })
}

/// Check the composition sandwich at radius `r` with rigorous intervals on
/// all three curves. A nonpositive lower-bound argument degrades the lower
/// curve to the trivial interval `[0, 0]` (the bound only bites for
/// sufficiently large radii); use [`lower_bound_argument`] to surface that
/// condition as an error instead.
///
/// Composed series converge much more slowly than their factors, so when a
/// curve trips the guard the truncation order is doubled (up to
/// `max_terms`) before giving up.
pub fn check_sandwich(
    f: &EntireExpr,
    g: &EntireExpr,
    r: f64,
    params: OracleParams,
) -> Result<SandwichRecord> {
    let mut n = params.n_terms;
    loop {
        let attempt = check_sandwich_at(f, g, r, OracleParams { n_terms: n, ..params });
        match attempt {
            Err(Error::GuardRadius(_)) if n < params.max_terms => {
                n = (n * 2).min(params.max_terms);
            }
            other => return other,
        }
    }
}

fn check_sandwich_at(
    f: &EntireExpr,
    g: &EntireExpr,
    r: f64,
    params: OracleParams,
) -> Result<SandwichRecord> {
    let oracle_f = SeriesOracle::new(f.clone(), params)?;
    let oracle_g = SeriesOracle::new(g.clone(), params)?;
    let composed = EntireExpr::compose(f.clone(), g.clone());
    let oracle_fg = SeriesOracle::new(composed, params)?;

    let middle = oracle_fg.max_modulus_interval(r)?;

    let outer = oracle_g.max_modulus_interval(r)?;
    let upper = interval_through(&oracle_f, outer.lo, outer.hi)?;

    let half = oracle_g.max_modulus_interval(r / 2.0)?;
    let g0 = g.eval_f64(0.0);
    let arg_lo = half.lo / 8.0 - g0;
    let arg_hi = half.hi / 8.0 - g0;
    let (lower, lower_vacuous) = if arg_lo > 0.0 {
        (interval_through(&oracle_f, arg_lo, arg_hi)?, false)
    } else {
        (
            MaxModInterval {
                lo: 0.0,
                hi: 0.0,
                theta_max: 0.0,
                tail: 0.0,
            },
            true,
        )
    };

    let verdict = interval_leq(&lower, &middle).combine(interval_leq(&middle, &upper));
    Ok(SandwichRecord {
        r,
        lower,
        middle,
        upper,
        lower_vacuous,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funfam::{GrowthObject, MaxModulus};
    use crate::parse::parse;
    use crate::tower::TowerReal;

    fn oracle(src: &str) -> SeriesOracle {
        SeriesOracle::new(parse(src).unwrap(), OracleParams::default()).unwrap()
    }

    #[test]
    fn exponential_coefficients_are_reciprocal_factorials() {
        let o = oracle("exp(z)");
        let mut fact = 1.0;
        for (n, c) in o.coefficients().iter().enumerate().take(20) {
            if n > 0 {
                fact *= n as f64;
            }
            assert!(
                (c - 1.0 / fact).abs() <= 1e-15 * (1.0 / fact),
                "n = {n}: {c}"
            );
        }
    }

    #[test]
    fn even_series_for_exp_of_square() {
        let o = oracle("exp(z^2)");
        let c = o.coefficients();
        assert_eq!(c[0], 1.0);
        assert_eq!(c[1], 0.0);
        assert_eq!(c[2], 1.0);
        assert_eq!(c[3], 0.0);
        assert!((c[4] - 0.5).abs() < 1e-15);
        assert!((c[6] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_series_is_exact() {
        let o = oracle("z^3 + 2 * z");
        let iv = o.max_modulus_interval(2.5).unwrap();
        let truth = 2.5f64.powi(3) + 5.0;
        assert!(iv.contains(truth));
        // width is dominated by the sampling-gap term, tail is negligible
        assert!(iv.width() / truth < 1e-2);
        assert!(iv.tail < 1e-12);
    }

    #[test]
    fn interval_encloses_known_values() {
        for (src, r) in [
            ("exp(z)", 2.0),
            ("exp(z^2)", 1.7),
            ("exp(z) o exp(z)", 1.2),
            ("exp(z) + z^4", 2.2),
            ("2 * exp(z^3)", 1.1),
        ] {
            let o = oracle(src);
            let truth = parse(src).unwrap().eval_f64(r);
            let iv = o.max_modulus_interval(r).unwrap();
            assert!(
                iv.lo <= truth * (1.0 + 1e-12) && truth <= iv.hi * (1.0 + 1e-12),
                "{src} at {r}: [{}, {}] vs {truth}",
                iv.lo,
                iv.hi
            );
            assert!(iv.width() <= 1e-2 * truth, "{src}: width {}", iv.width());
        }
    }

    #[test]
    fn tower_evaluation_agrees_with_the_oracle() {
        for (src, r) in [
            ("exp(z^2)", 2.0),
            ("exp(z) o exp(z)", 1.5),
            ("z^5 + exp(z)", 3.0),
        ] {
            let o = oracle(src);
            let obj = GrowthObject::from_expr(parse(src).unwrap()).unwrap();
            let tower = obj
                .max_modulus(&TowerReal::from_f64(r).unwrap())
                .unwrap()
                .to_real()
                .unwrap();
            let iv = o.max_modulus_interval(r).unwrap();
            let slack = 1e-12 * tower;
            assert!(
                iv.lo - slack <= tower && tower <= iv.hi + slack,
                "{src} at {r}: tower {tower} vs [{}, {}]",
                iv.lo,
                iv.hi
            );
        }
    }

    #[test]
    fn maximum_sits_on_the_positive_axis() {
        let o = oracle("exp(z^2) + z^3");
        let iv = o.max_modulus_interval(1.9).unwrap();
        let gap = std::f64::consts::TAU / 4096.0;
        let dist = iv.theta_max.min(std::f64::consts::TAU - iv.theta_max);
        assert!(dist <= gap, "theta_max = {}", iv.theta_max);
    }

    #[test]
    fn guard_radius_rejects_untrustworthy_tails() {
        let o = oracle("exp(z)");
        // r = 80: z^64/64! term is nowhere near converged
        match o.max_modulus_interval(80.0) {
            Err(Error::GuardRadius(_)) => {}
            other => panic!("expected GuardRadius, got {other:?}"),
        }
        // well inside the reliable range it still works
        assert!(o.max_modulus_interval(10.0).is_ok());
    }

    #[test]
    fn sandwich_passes_on_identity_functions() {
        // lower = 5/16 - 0, middle = upper = 5
        let rec = check_sandwich(
            &EntireExpr::Var,
            &EntireExpr::Var,
            5.0,
            OracleParams::default(),
        )
        .unwrap();
        assert_eq!(rec.verdict, Verdict::Pass);
        assert!(!rec.lower_vacuous);
        assert!(rec.lower.contains(0.3125));
        assert!(rec.middle.contains(5.0));
        assert!(rec.upper.contains(5.0));
    }

    #[test]
    fn sandwich_passes_on_nested_exponentials() {
        // the lower-bound argument e/8 - 1 is negative here, so the lower
        // curve degrades to the trivial bound and the verdict rides on
        // middle <= upper, which are the same quantity e^(e^2)
        let f = parse("exp(z)").unwrap();
        let rec = check_sandwich(&f, &f, 2.0, OracleParams::default()).unwrap();
        assert_eq!(rec.verdict, Verdict::Pass);
        assert!(rec.lower_vacuous);
        let truth = 2.0f64.exp().exp();
        assert!(rec.middle.contains(truth));
        assert!(rec.upper.lo <= truth * (1.0 + 1e-9));
    }

    #[test]
    fn sandwich_passes_on_mixed_pair() {
        let f = parse("exp(z^2)").unwrap();
        let g = parse("z + z^3").unwrap();
        let rec = check_sandwich(&f, &g, 1.2, OracleParams::default()).unwrap();
        assert_eq!(rec.verdict, Verdict::Pass);
    }

    #[test]
    fn lower_bound_argument_errors_below_threshold() {
        let g = parse("exp(z)").unwrap();
        match lower_bound_argument(&g, 2.0, OracleParams::default()) {
            Err(Error::NonpositiveArgument(_)) => {}
            other => panic!("expected NonpositiveArgument, got {other:?}"),
        }
        // large enough r gives a positive argument: M_g(15)/8 - 1 > 0
        let arg = lower_bound_argument(&g, 30.0, OracleParams::default()).unwrap();
        assert!(arg > 0.0);
    }

    #[test]
    fn interval_ordering_verdicts() {
        let iv = |lo: f64, hi: f64| MaxModInterval {
            lo,
            hi,
            theta_max: 0.0,
            tail: 0.0,
        };
        assert_eq!(interval_leq(&iv(1.0, 2.0), &iv(3.0, 4.0)), Verdict::Pass);
        assert_eq!(interval_leq(&iv(3.0, 4.0), &iv(1.0, 2.0)), Verdict::Fail);
        // tight overlapping intervals: equality case
        assert_eq!(
            interval_leq(&iv(99.9, 100.1), &iv(99.8, 100.0)),
            Verdict::Pass
        );
        // broad overlap: cannot decide
        assert_eq!(
            interval_leq(&iv(50.0, 150.0), &iv(80.0, 120.0)),
            Verdict::Inconclusive
        );
    }

    #[test]
    fn composed_series_handles_nonzero_inner_constant() {
        // exp(exp(z)): inner constant term is 1, outer series still valid
        let o = oracle("exp(z) o exp(z)");
        let c = o.coefficients();
        let e = std::f64::consts::E;
        assert!((c[0] - e).abs() < 1e-12);
        // d/dz exp(exp(z)) at 0 = e
        assert!((c[1] - e).abs() < 1e-12);
        // second coefficient: e * (1 + 1) / 2 = e
        assert!((c[2] - e).abs() < 1e-12);
    }
}
