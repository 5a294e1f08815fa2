//! Function families with exactly evaluable maximum modulus.
//!
//! Two kinds of growth carriers feed the estimators:
//!
//! * [`EntireExpr`] — an expression tree (variable, nonnegative constants,
//!   monomials, sums, products, scalings, iterated exponentials,
//!   composition). Every coefficient is nonnegative, so on the positive
//!   axis the triangle inequality is an equality: the maximum modulus on
//!   `|z| = r` is the value at `z = r`, computed in tower arithmetic with
//!   no estimation step. Composition of trees composes the maxima exactly.
//! * [`GrowthProfile`] — a synthetic monotone curve `M(r) = exp^[p](E(t))`
//!   over `t = log^[q] r`, with exponent `E(t) = rho * t` or, for separated
//!   limsup/liminf targets, a piecewise-linear oscillation between
//!   `lambda * t` and `rho * t` on geometrically growing blocks. Profiles
//!   realize index pairs with `q >= 2`, which the expression family cannot
//!   reach.
//!
//! [`GrowthObject`] wraps either carrier behind the [`MaxModulus`] trait the
//! estimators consume.

use std::fmt;

use crate::error::{Error, Result};
use crate::tower::TowerReal;

/// Minimum slope kept when an oscillation down-segment would otherwise be
/// decreasing; preserves strict monotonicity of the profile.
const CLAMP_MIN_SLOPE: f64 = 1e-9;

/// Anything that can report its maximum modulus on `|z| = r`.
pub trait MaxModulus: Sync {
    fn max_modulus(&self, r: &TowerReal) -> Result<TowerReal>;

    /// Radii at or below this bound are outside the evaluation domain.
    fn min_radius(&self) -> TowerReal {
        TowerReal::zero()
    }
}

/// Expression tree for entire functions with nonnegative coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum EntireExpr {
    /// The variable `z`.
    Var,
    /// A nonnegative constant.
    Const(f64),
    /// `z^n`, `n >= 1`.
    Monomial(u32),
    Sum(Vec<EntireExpr>),
    Product(Vec<EntireExpr>),
    /// `c * f` with `c > 0`.
    Scale(f64, Box<EntireExpr>),
    /// `exp^[k](f)`, `k >= 1`.
    ExpIter(u32, Box<EntireExpr>),
    /// `f(g(z))`.
    Compose(Box<EntireExpr>, Box<EntireExpr>),
}

impl EntireExpr {
    /// Convenience constructor for `exp^[k](z)` comparator towers; `k = 0`
    /// gives the identity `z`.
    pub fn exp_tower(k: u32) -> EntireExpr {
        if k == 0 {
            EntireExpr::Var
        } else {
            EntireExpr::ExpIter(k, Box::new(EntireExpr::Var))
        }
    }

    /// `f(g(z))` as a tree (validity checked by `GrowthObject::from_expr`).
    pub fn compose(f: EntireExpr, g: EntireExpr) -> EntireExpr {
        EntireExpr::Compose(Box::new(f), Box::new(g))
    }

    /// Structural validity: finite nonnegative coefficients, nonempty node
    /// lists, positive exponential heights and monomial degrees.
    pub fn validate(&self) -> Result<()> {
        match self {
            EntireExpr::Var => Ok(()),
            EntireExpr::Const(c) => {
                if c.is_finite() && *c >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidValue(format!("constant {c} must be finite and >= 0")))
                }
            }
            EntireExpr::Monomial(n) => {
                if *n >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidValue("monomial degree must be >= 1".into()))
                }
            }
            EntireExpr::Sum(children) | EntireExpr::Product(children) => {
                if children.is_empty() {
                    return Err(Error::InvalidValue("empty node list".into()));
                }
                children.iter().try_for_each(EntireExpr::validate)
            }
            EntireExpr::Scale(c, inner) => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(Error::InvalidValue(format!(
                        "scale factor {c} must be finite and > 0"
                    )));
                }
                inner.validate()
            }
            EntireExpr::ExpIter(k, inner) => {
                if *k < 1 {
                    return Err(Error::InvalidValue("exponential height must be >= 1".into()));
                }
                inner.validate()
            }
            EntireExpr::Compose(f, g) => {
                f.validate()?;
                g.validate()
            }
        }
    }

    /// Whether the expression denotes a constant function.
    pub fn is_constant(&self) -> bool {
        match self {
            EntireExpr::Var | EntireExpr::Monomial(_) => false,
            EntireExpr::Const(_) => true,
            EntireExpr::Sum(children) => children.iter().all(EntireExpr::is_constant),
            EntireExpr::Product(children) => {
                children.iter().all(EntireExpr::is_constant)
                    || children.iter().any(|c| matches!(c, EntireExpr::Const(v) if *v == 0.0))
            }
            EntireExpr::Scale(_, inner) | EntireExpr::ExpIter(_, inner) => inner.is_constant(),
            EntireExpr::Compose(f, g) => f.is_constant() || g.is_constant(),
        }
    }

    /// Evaluate at a nonnegative point in tower arithmetic. Nonnegative
    /// coefficients make this the maximum modulus on `|z| = x`.
    pub fn eval_tower(&self, x: &TowerReal) -> Result<TowerReal> {
        match self {
            EntireExpr::Var => Ok(*x),
            EntireExpr::Const(c) => TowerReal::from_f64(*c),
            EntireExpr::Monomial(n) => {
                if x.is_zero() {
                    Ok(TowerReal::zero())
                } else {
                    x.pow_scalar(f64::from(*n))
                }
            }
            EntireExpr::Sum(children) => {
                let mut acc = TowerReal::zero();
                for child in children {
                    acc = acc.add(&child.eval_tower(x)?)?;
                }
                Ok(acc)
            }
            EntireExpr::Product(children) => {
                let mut acc = TowerReal::one();
                for child in children {
                    acc = acc.mul(&child.eval_tower(x)?)?;
                }
                Ok(acc)
            }
            EntireExpr::Scale(c, inner) => {
                TowerReal::from_f64(*c)?.mul(&inner.eval_tower(x)?)
            }
            EntireExpr::ExpIter(k, inner) => Ok(inner.eval_tower(x)?.exp_k(*k)),
            EntireExpr::Compose(f, g) => f.eval_tower(&g.eval_tower(x)?),
        }
    }

    /// Plain-float evaluation at a nonnegative point, saturating to
    /// infinity on overflow. Used as the structural tail majorant by the
    /// series oracle.
    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            EntireExpr::Var => x,
            EntireExpr::Const(c) => *c,
            EntireExpr::Monomial(n) => x.powi(*n as i32),
            EntireExpr::Sum(children) => children.iter().map(|c| c.eval_f64(x)).sum(),
            EntireExpr::Product(children) => {
                children.iter().map(|c| c.eval_f64(x)).product()
            }
            EntireExpr::Scale(c, inner) => c * inner.eval_f64(x),
            EntireExpr::ExpIter(k, inner) => {
                let mut v = inner.eval_f64(x);
                for _ in 0..*k {
                    v = v.exp();
                }
                v
            }
            EntireExpr::Compose(f, g) => f.eval_f64(g.eval_f64(x)),
        }
    }
}

/// Geometric block schedule for an oscillating profile: boundaries at
/// `t0 * gamma^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockSchedule {
    pub t0: f64,
    pub gamma: f64,
}

impl BlockSchedule {
    /// Block boundaries inside `[lo, hi]`.
    pub fn boundaries_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut b = self.t0;
        // skip below the window without accumulating rounding error
        if lo > self.t0 {
            let j = ((lo / self.t0).ln() / self.gamma.ln()).floor().max(0.0);
            b = self.t0 * self.gamma.powi(j as i32);
        }
        while b <= hi {
            if b >= lo {
                out.push(b);
            }
            b *= self.gamma;
        }
        out
    }
}

/// Synthetic growth curve `M(r) = exp^[p](E(t))`, `t = log^[q] r`, with
/// `log^[p] M(r) / log^[q] r` tending to `rho` (and oscillating down to
/// `lambda` on block boundaries when a schedule is present).
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthProfile {
    p: u32,
    q: u32,
    rho: f64,
    lambda: f64,
    oscillation: Option<BlockSchedule>,
}

impl GrowthProfile {
    /// Admissibility: `p >= q >= 1`, `0 < lambda <= rho < inf`, with
    /// `lambda > 1` required on the diagonal `p == q`; a missing schedule
    /// requires `lambda == rho`, a present one requires `t0 > 0, gamma > 1`.
    pub fn new(
        p: u32,
        q: u32,
        rho: f64,
        lambda: f64,
        oscillation: Option<BlockSchedule>,
    ) -> Result<Self> {
        if !(p >= q && q >= 1) {
            return Err(Error::Admissibility(format!(
                "need p >= q >= 1, got ({p},{q})"
            )));
        }
        if !(rho.is_finite() && lambda.is_finite() && 0.0 < lambda && lambda <= rho) {
            return Err(Error::Admissibility(format!(
                "need 0 < lambda <= rho < inf, got lambda={lambda}, rho={rho}"
            )));
        }
        if p == q && lambda <= 1.0 {
            return Err(Error::Admissibility(format!(
                "on the diagonal p == q both orders must exceed 1, got lambda={lambda}"
            )));
        }
        match &oscillation {
            None => {
                if lambda != rho {
                    return Err(Error::Admissibility(
                        "lambda < rho requires an oscillation schedule".into(),
                    ));
                }
            }
            Some(b) => {
                if !(b.t0.is_finite() && b.t0 > 0.0 && b.gamma.is_finite() && b.gamma > 1.0) {
                    return Err(Error::Admissibility(format!(
                        "block schedule needs t0 > 0 and gamma > 1, got t0={}, gamma={}",
                        b.t0, b.gamma
                    )));
                }
            }
        }
        Ok(GrowthProfile {
            p,
            q,
            rho,
            lambda,
            oscillation,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn oscillation(&self) -> Option<&BlockSchedule> {
        self.oscillation.as_ref()
    }

    /// Exponent value at an oscillation block boundary `b_j`.
    ///
    /// Odd boundaries carry the limsup target `rho * b_j`; even boundaries
    /// carry the liminf target `lambda * b_j`, lifted when the preceding
    /// down-segment had to be clamped to keep the profile increasing.
    fn boundary_exponent(&self, schedule: &BlockSchedule, j: i64) -> f64 {
        let b = schedule.t0 * schedule.gamma.powi(j as i32);
        if j % 2 == 1 {
            self.rho * b
        } else {
            let mut e = self.lambda * b;
            if j >= 1 {
                let prev = schedule.t0 * schedule.gamma.powi((j - 1) as i32);
                e = e.max(self.rho * prev + CLAMP_MIN_SLOPE * (b - prev));
            }
            e
        }
    }

    /// The exponent `E(t)`: `log^[p] M` at `t = log^[q] r`.
    pub fn exponent(&self, t: f64) -> f64 {
        let Some(schedule) = &self.oscillation else {
            return self.rho * t;
        };
        if t <= schedule.t0 {
            return self.lambda * t;
        }
        let j = ((t / schedule.t0).ln() / schedule.gamma.ln()).floor().max(0.0) as i64;
        let b_lo = schedule.t0 * schedule.gamma.powi(j as i32);
        let b_hi = b_lo * schedule.gamma;
        let e_lo = self.boundary_exponent(schedule, j);
        let e_hi = self.boundary_exponent(schedule, j + 1);
        if t >= b_hi {
            return e_hi; // float edge at the upper boundary
        }
        e_lo + (e_hi - e_lo) * (t - b_lo) / (b_hi - b_lo)
    }

    /// Exact inverse of the exponent (strictly increasing).
    pub fn exponent_inverse(&self, y: f64) -> f64 {
        let Some(schedule) = &self.oscillation else {
            return y / self.rho;
        };
        if y <= self.lambda * schedule.t0 {
            return y / self.lambda;
        }
        let mut j: i64 = 0;
        let mut b_lo = schedule.t0;
        let mut e_lo = self.lambda * schedule.t0;
        for _ in 0..20_000 {
            let b_hi = b_lo * schedule.gamma;
            let e_hi = self.boundary_exponent(schedule, j + 1);
            if y <= e_hi {
                return b_lo + (y - e_lo) * (b_hi - b_lo) / (e_hi - e_lo);
            }
            j += 1;
            b_lo = b_hi;
            e_lo = e_hi;
        }
        f64::INFINITY
    }
}

impl MaxModulus for GrowthProfile {
    fn max_modulus(&self, r: &TowerReal) -> Result<TowerReal> {
        let tt = r.log_k(self.q)?;
        if let Some(t) = tt.float() {
            let e = self.exponent(t);
            if e.is_finite() {
                return Ok(TowerReal::from_f64(e)?.exp_k(self.p));
            }
        }
        // rho * t stays exact in tower arithmetic at any scale. For an
        // oscillating profile this pins the upper envelope: beyond
        // float-representable t the block position is unresolvable, but E
        // only enters measurements here through quotients taken at other
        // scale cells, whose limits are the same for every slope in
        // [lambda, rho] (the slope washes under one more log, or the
        // quotient diverges regardless). On the profile's own cell the
        // grid t is always float-representable and the exact branch above
        // applies.
        Ok(tt.mul(&TowerReal::from_f64(self.rho)?)?.exp_k(self.p))
    }

    fn min_radius(&self) -> TowerReal {
        // t = 0, i.e. r = exp^[q](0)
        TowerReal::zero().exp_k(self.q)
    }
}

/// A growth carrier: an expression or a profile, plus its cached anchor
/// `|f(0)|` (the infimum of the maximum modulus, left end of the inverse's
/// domain).
#[derive(Clone, Debug)]
pub struct GrowthObject {
    kind: GrowthKind,
    anchor: TowerReal,
}

#[derive(Clone, Debug)]
pub enum GrowthKind {
    Expr(EntireExpr),
    Profile(GrowthProfile),
}

impl GrowthObject {
    /// Wrap an expression; rejects invalid trees and constant functions.
    pub fn from_expr(expr: EntireExpr) -> Result<Self> {
        expr.validate()?;
        if expr.is_constant() {
            return Err(Error::InvalidValue(
                "constant expressions have no growth order".into(),
            ));
        }
        let anchor = expr.eval_tower(&TowerReal::zero())?;
        Ok(GrowthObject {
            kind: GrowthKind::Expr(expr),
            anchor,
        })
    }

    pub fn from_profile(profile: GrowthProfile) -> Self {
        // value at t = 0: exp^[p](0)
        let anchor = TowerReal::zero().exp_k(profile.p());
        GrowthObject {
            kind: GrowthKind::Profile(profile),
            anchor,
        }
    }

    pub fn kind(&self) -> &GrowthKind {
        &self.kind
    }

    pub fn expr(&self) -> Option<&EntireExpr> {
        match &self.kind {
            GrowthKind::Expr(e) => Some(e),
            GrowthKind::Profile(_) => None,
        }
    }

    pub fn profile(&self) -> Option<&GrowthProfile> {
        match &self.kind {
            GrowthKind::Profile(p) => Some(p),
            GrowthKind::Expr(_) => None,
        }
    }

    /// `|f(0)|`: the left end of the inverse maximum modulus domain.
    pub fn anchor(&self) -> TowerReal {
        self.anchor
    }

    pub fn is_oscillating(&self) -> bool {
        self.block_schedule().is_some()
    }

    pub fn block_schedule(&self) -> Option<&BlockSchedule> {
        self.profile().and_then(GrowthProfile::oscillation)
    }

    /// Closed-form inverse maximum modulus where the structure admits one:
    /// chains of iterated exponentials, monomials, scalings, and
    /// compositions for expressions; any profile. `None` means the caller
    /// must bisect.
    pub fn try_exact_inverse(&self, s: &TowerReal) -> Option<Result<TowerReal>> {
        match &self.kind {
            GrowthKind::Expr(e) => invert_expr(e, *s),
            GrowthKind::Profile(p) => Some(invert_profile(p, s)),
        }
    }

    /// Canonical text used in reports and instance ids.
    pub fn description(&self) -> String {
        match &self.kind {
            GrowthKind::Expr(e) => e.to_string(),
            GrowthKind::Profile(p) => match p.oscillation() {
                None => format!("profile(p={},q={},rho={})", p.p(), p.q(), p.rho()),
                Some(b) => format!(
                    "profile(p={},q={},rho={},lambda={},t0={},gamma={})",
                    p.p(),
                    p.q(),
                    p.rho(),
                    p.lambda(),
                    b.t0,
                    b.gamma
                ),
            },
        }
    }
}

impl MaxModulus for GrowthObject {
    fn max_modulus(&self, r: &TowerReal) -> Result<TowerReal> {
        if !r.is_positive() {
            return Err(Error::InvalidValue(format!(
                "maximum modulus needs a positive radius, got {r}"
            )));
        }
        match &self.kind {
            GrowthKind::Expr(e) => e.eval_tower(r),
            GrowthKind::Profile(p) => p.max_modulus(r),
        }
    }

    fn min_radius(&self) -> TowerReal {
        match &self.kind {
            GrowthKind::Expr(_) => TowerReal::zero(),
            GrowthKind::Profile(p) => p.min_radius(),
        }
    }
}

fn invert_expr(e: &EntireExpr, s: TowerReal) -> Option<Result<TowerReal>> {
    match e {
        EntireExpr::Var => Some(Ok(s)),
        EntireExpr::Monomial(n) => Some(s.pow_scalar(1.0 / f64::from(*n))),
        EntireExpr::ExpIter(k, inner) => match s.log_k(*k) {
            Ok(down) => invert_expr(inner, down),
            Err(e) => Some(Err(e)),
        },
        EntireExpr::Scale(c, inner) => match TowerReal::from_f64(1.0 / *c) {
            Ok(inv) => match s.mul(&inv) {
                Ok(scaled) => invert_expr(inner, scaled),
                Err(e) => Some(Err(e)),
            },
            Err(e) => Some(Err(e)),
        },
        EntireExpr::Compose(f, g) => match invert_expr(f, s)? {
            Ok(mid) => invert_expr(g, mid),
            Err(e) => Some(Err(e)),
        },
        _ => None,
    }
}

fn invert_profile(p: &GrowthProfile, s: &TowerReal) -> Result<TowerReal> {
    let down = s.log_k(p.p())?;
    if let Some(y) = down.float() {
        let t = p.exponent_inverse(y);
        if t.is_finite() {
            return Ok(TowerReal::from_f64(t)?.exp_k(p.q()));
        }
    }
    if p.oscillation().is_none() {
        // t = log^[p](s) / rho exactly
        let t = down.mul(&TowerReal::from_f64(1.0 / p.rho())?)?;
        return Ok(t.exp_k(p.q()));
    }
    Err(Error::Domain(
        "oscillating profile target beyond inversion range".into(),
    ))
}

impl fmt::Display for GrowthObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr_obj(e: EntireExpr) -> GrowthObject {
        GrowthObject::from_expr(e).unwrap()
    }

    fn exp_poly(k: u32, n: u32) -> EntireExpr {
        EntireExpr::ExpIter(k, Box::new(EntireExpr::Monomial(n)))
    }

    #[test]
    fn eval_matches_closed_forms() {
        // exp(r^2) at r = 3 -> e^9
        let f = expr_obj(exp_poly(1, 2));
        let m = f.max_modulus(&TowerReal::from_f64(3.0).unwrap()).unwrap();
        let expected = 9.0_f64.exp();
        assert!((m.to_real().unwrap() - expected).abs() / expected < 1e-14);

        // z^5 + 2z^2 at r = 2 -> 32 + 8 = 40
        let g = expr_obj(EntireExpr::Sum(vec![
            EntireExpr::Monomial(5),
            EntireExpr::Scale(2.0, Box::new(EntireExpr::Monomial(2))),
        ]));
        let m = g.max_modulus(&TowerReal::from_f64(2.0).unwrap()).unwrap();
        assert_eq!(m.to_real().unwrap(), 40.0);
    }

    #[test]
    fn composition_maxima_compose_exactly() {
        let f = exp_poly(1, 2);
        let g = exp_poly(1, 3);
        let fg = expr_obj(EntireExpr::compose(f.clone(), g.clone()));
        let fo = expr_obj(f);
        let go = expr_obj(g);
        for r in [0.5, 1.0, 2.0, 7.5, 40.0, 1.0e6] {
            let r = TowerReal::from_f64(r).unwrap();
            let direct = fg.max_modulus(&r).unwrap();
            let nested = fo.max_modulus(&go.max_modulus(&r).unwrap()).unwrap();
            assert_eq!(direct, nested, "r = {r}");
        }
    }

    #[test]
    fn anchors_are_values_at_zero() {
        // exp(z^2): f(0) = 1
        assert_eq!(expr_obj(exp_poly(1, 2)).anchor(), TowerReal::one());
        // exp(exp(z)): f(0) = e
        let f = expr_obj(EntireExpr::ExpIter(2, Box::new(EntireExpr::Var)));
        assert_eq!(f.anchor(), TowerReal::one().exp_k(1));
    }

    #[test]
    fn constant_expressions_are_rejected() {
        assert!(GrowthObject::from_expr(EntireExpr::Const(3.0)).is_err());
        // a zero factor collapses the product to a constant
        let z = EntireExpr::Product(vec![EntireExpr::Const(0.0), EntireExpr::Var]);
        assert!(GrowthObject::from_expr(z).is_err());
        assert!(GrowthObject::from_expr(EntireExpr::Const(-1.0)).is_err());
    }

    #[test]
    fn profile_admissibility() {
        assert!(GrowthProfile::new(2, 1, 3.0, 3.0, None).is_ok());
        // q > p
        assert!(GrowthProfile::new(1, 2, 3.0, 3.0, None).is_err());
        // diagonal needs orders above 1
        assert!(GrowthProfile::new(2, 2, 1.0, 1.0, None).is_err());
        assert!(GrowthProfile::new(2, 2, 2.0, 2.0, None).is_ok());
        // separated orders need a schedule
        assert!(GrowthProfile::new(2, 1, 3.0, 2.0, None).is_err());
        let sched = Some(BlockSchedule { t0: 10.0, gamma: 2.0 });
        assert!(GrowthProfile::new(2, 1, 3.0, 2.0, sched).is_ok());
        assert!(GrowthProfile::new(2, 1, 3.0, 2.0, Some(BlockSchedule { t0: 10.0, gamma: 1.0 })).is_err());
    }

    #[test]
    fn plain_profile_quotient_is_exact() {
        // M(r) = exp^[2](3 log r) = exp(r^3): check against the expression
        let p = GrowthProfile::new(2, 1, 3.0, 3.0, None).unwrap();
        for t in [2.0, 8.0, 100.0, 2.0e5] {
            let r = TowerReal::from_f64(t).unwrap().exp_k(1);
            let m = p.max_modulus(&r).unwrap();
            let top = m.log_k(2).unwrap().to_real().unwrap();
            assert!((top - 3.0 * t).abs() / (3.0 * t) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn oscillating_boundaries_hit_both_targets() {
        let sched = BlockSchedule { t0: 10.0, gamma: 2.0 };
        let p = GrowthProfile::new(2, 2, 2.0, 1.5, Some(sched)).unwrap();
        // even boundaries: quotient = lambda, odd: quotient = rho
        for j in 0..12 {
            let b = 10.0 * 2.0_f64.powi(j);
            let quotient = p.exponent(b) / b;
            let expected = if j % 2 == 1 { 2.0 } else { 1.5 };
            assert!(
                (quotient - expected).abs() < 1e-12,
                "boundary {j}: {quotient} vs {expected}"
            );
        }
        // interior points stay inside [lambda, rho]
        for j in 0..11 {
            let b = 10.0 * 2.0_f64.powi(j);
            for frac in [0.25, 0.5, 0.75] {
                let t = b * (1.0 + frac);
                let quotient = p.exponent(t) / t;
                assert!(quotient >= 1.5 - 1e-12 && quotient <= 2.0 + 1e-12);
            }
        }
    }

    #[test]
    fn exponent_is_strictly_increasing_even_when_clamped() {
        // gamma below rho/lambda forces the clamp
        let sched = BlockSchedule { t0: 10.0, gamma: 1.2 };
        let p = GrowthProfile::new(2, 1, 4.0, 1.1, Some(sched)).unwrap();
        let mut prev = f64::NEG_INFINITY;
        let mut t = 5.0;
        while t < 1.0e4 {
            let e = p.exponent(t);
            assert!(e > prev, "exponent not increasing at t = {t}");
            prev = e;
            t *= 1.01;
        }
    }

    #[test]
    fn exponent_inverse_round_trips() {
        let sched = BlockSchedule { t0: 10.0, gamma: 2.0 };
        let p = GrowthProfile::new(3, 2, 2.0, 1.5, Some(sched)).unwrap();
        for t in [0.5, 5.0, 10.0, 13.0, 20.0, 160.0, 1.0e4, 3.3e6] {
            let y = p.exponent(t);
            let back = p.exponent_inverse(y);
            assert!((back - t).abs() / t < 1e-10, "t = {t}, back = {back}");
        }
    }

    #[test]
    fn profile_inverse_matches_forward() {
        let p = GrowthProfile::new(2, 2, 2.5, 2.5, None).unwrap();
        let obj = GrowthObject::from_profile(p);
        let r = TowerReal::from_f64(50.0).unwrap().exp_k(2);
        let m = obj.max_modulus(&r).unwrap();
        let back = obj.try_exact_inverse(&m).unwrap().unwrap();
        let t_orig = r.log_k(2).unwrap().to_real().unwrap();
        let t_back = back.log_k(2).unwrap().to_real().unwrap();
        assert!((t_back - t_orig).abs() / t_orig < 1e-10);
    }

    #[test]
    fn exact_inverse_handles_nested_chains() {
        // f = exp^[2](z^3): M^{-1}(s) = (log^[2] s)^{1/3}
        let f = expr_obj(exp_poly(2, 3));
        let r = TowerReal::from_f64(7.0).unwrap();
        let s = f.max_modulus(&r).unwrap();
        let back = f.try_exact_inverse(&s).unwrap().unwrap();
        assert!((back.to_real().unwrap() - 7.0).abs() < 1e-9);
        // sums have no closed-form inverse
        let g = expr_obj(EntireExpr::Sum(vec![EntireExpr::Var, EntireExpr::Monomial(2)]));
        assert!(g
            .try_exact_inverse(&TowerReal::from_f64(10.0).unwrap())
            .is_none());
    }
}
