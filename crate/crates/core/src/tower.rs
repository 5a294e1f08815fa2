//! Level-index arithmetic for positive reals far beyond `f64` range.
//!
//! A [`TowerReal`] denotes `exp^[L](x)`: `L` nested exponentials applied to a
//! plain mantissa `x`. The canonical form keeps `x` in `[1, e)` whenever
//! `L >= 1`, so one `log` exactly decrements the level; level 0 admits any
//! finite real (this is where negative values such as `log` of something
//! below 1 live). Canonical forms are unique, which makes comparison a
//! lexicographic check on `(level, mantissa)`.
//!
//! Alongside the canonical fields every value carries its exact `f64` image
//! while one exists. Arithmetic prefers that image — a single native
//! operation — and only falls back to log-space descent once an operand or
//! result leaves `f64` range, so values below ~1.8e308 round-trip through
//! `add`/`mul`/`pow_scalar`/`log_k`/`exp_k` with the precision of the
//! underlying float operations themselves.
//!
//! Beyond `f64` range, `add` and `sub_guarded` first try a one-level
//! log-space correction (`a + b = exp(log a + log1p(exp(log b - log a)))`);
//! when even the logs have no float image the smaller operand is absorbed
//! and the result is tagged (see [`TowerReal::absorbed`]) so growth
//! estimators can widen their tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest level at which `add`/`sub_guarded` are permitted to absorb the
/// smaller operand instead of computing exactly.
///
/// Absorption actually triggers only when an exact float path is impossible,
/// which first happens inside level 3 (level-2 values are all below
/// `exp(exp(e)) < 4e6` and stay exactly computable); below this level it
/// never occurs.
pub const ABSORB_LEVEL: u32 = 2;

/// A positive real (or any finite real at level 0) in level-index form.
#[derive(Clone, Copy, Debug)]
pub struct TowerReal {
    level: u32,
    mantissa: f64,
    /// Exact `f64` image of the value, when one exists.
    value: Option<f64>,
    /// Whether any absorbing operation contributed to this value.
    absorbed: bool,
}

/// Canonicalize `(level, x)` without touching the float image.
fn canonicalize(mut level: u32, mut x: f64) -> (u32, f64) {
    if x == 0.0 {
        x = 0.0; // collapse -0.0 so equality and ordering are well defined
    }
    // Mantissa below the band at level >= 1: push it down (value preserved:
    // exp^[L](x) = exp^[L-1](e^x)). exp of anything below 1 stays below e.
    while level >= 1 && x < 1.0 {
        x = x.exp();
        level -= 1;
    }
    // Mantissa at or above e: lift it. ln of anything >= e stays >= 1.
    while x >= std::f64::consts::E {
        x = x.ln();
        level += 1;
    }
    (level, x)
}

/// `exp^[level](mantissa)` as an `f64`, if finite.
fn float_image(level: u32, mantissa: f64) -> Option<f64> {
    let mut v = mantissa;
    for _ in 0..level {
        v = v.exp();
        if !v.is_finite() {
            return None;
        }
    }
    Some(v)
}

impl TowerReal {
    /// Canonicalize `exp^[level](mantissa)`.
    ///
    /// Fails with `InvalidValue` when the mantissa is not finite. Everything
    /// else normalizes: `(0, 100)` lifts to `(2, ln ln 100)`, `(3, 0.5)`
    /// drops to `(2, e^0.5)`.
    pub fn new(level: u32, mantissa: f64) -> Result<Self> {
        if !mantissa.is_finite() {
            return Err(Error::InvalidValue(format!(
                "non-finite mantissa {mantissa}"
            )));
        }
        // A level-0 input *is* its own float image; keep it bit-exact
        // rather than re-deriving it through ln/exp round trips.
        let exact = (level == 0).then_some(if mantissa == 0.0 { 0.0 } else { mantissa });
        let (level, mantissa) = canonicalize(level, mantissa);
        let value = exact.or_else(|| float_image(level, mantissa));
        Ok(TowerReal {
            level,
            mantissa,
            value,
            absorbed: false,
        })
    }

    /// Shorthand for `new(0, v)`.
    pub fn from_f64(v: f64) -> Result<Self> {
        Self::new(0, v)
    }

    pub fn zero() -> Self {
        Self::from_f64(0.0).expect("finite")
    }

    pub fn one() -> Self {
        Self::from_f64(1.0).expect("finite")
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    /// Whether an absorbing `add`/`sub_guarded` contributed to this value.
    pub fn absorbed(&self) -> bool {
        self.absorbed
    }

    /// The exact `f64` image, when the value is within float range.
    pub fn float(&self) -> Option<f64> {
        self.value
    }

    /// The value as `f64`, or `Overflow` when it has no float image.
    pub fn to_real(&self) -> Result<f64> {
        self.value.ok_or_else(|| {
            Error::Overflow(format!("E^{}({}) has no f64 image", self.level, self.mantissa))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0 && self.mantissa == 0.0
    }

    /// Values at level >= 1 are positive by construction; level 0 is plain.
    pub fn is_positive(&self) -> bool {
        self.level >= 1 || self.mantissa > 0.0
    }

    fn flagged(mut self, absorbed: bool) -> Self {
        self.absorbed = self.absorbed || absorbed;
        self
    }

    fn flag_absorbed(&self) -> Self {
        let mut out = *self;
        out.absorbed = true;
        out
    }

    /// One exact natural log.
    pub fn log1(&self) -> Result<TowerReal> {
        if self.level >= 1 {
            // Exact level decrement; the float image follows the same ln.
            let value = match self.value {
                Some(v) => Some(v.ln()),
                None => float_image(self.level - 1, self.mantissa),
            };
            Ok(TowerReal {
                level: self.level - 1,
                mantissa: self.mantissa,
                value,
                absorbed: self.absorbed,
            })
        } else if self.mantissa > 0.0 {
            Ok(TowerReal::new(0, self.mantissa.ln())?.flagged(self.absorbed))
        } else {
            Err(Error::Domain(format!("log of nonpositive value {self}")))
        }
    }

    /// One exponential. Never leaves the representable set.
    pub fn exp1(&self) -> TowerReal {
        if self.level >= 1 || self.mantissa >= 1.0 {
            // Mantissa is already in [1, e): exact level increment.
            let value = self
                .value
                .and_then(|v| {
                    let e = v.exp();
                    e.is_finite().then_some(e)
                });
            TowerReal {
                level: self.level + 1,
                mantissa: self.mantissa,
                value,
                absorbed: self.absorbed,
            }
        } else {
            // Below the band: exp stays below e, so this remains level 0.
            TowerReal::new(0, self.mantissa.exp())
                .expect("exp of a finite value below 1 is finite")
                .flagged(self.absorbed)
        }
    }

    /// `log^[k]` of the value. Fails once an intermediate leaves `(0, inf)`.
    pub fn log_k(&self, k: u32) -> Result<TowerReal> {
        let mut out = *self;
        for _ in 0..k {
            out = out.log1()?;
        }
        Ok(out)
    }

    /// `exp^[k]` of the value.
    pub fn exp_k(&self, k: u32) -> TowerReal {
        let mut out = *self;
        for _ in 0..k {
            out = out.exp1();
        }
        out
    }

    /// Sum. Exact while both operands and the sum have float images; above
    /// that, a one-level log-space correction; beyond even that, absorption
    /// of the smaller operand (flagged).
    pub fn add(&self, rhs: &TowerReal) -> Result<TowerReal> {
        let absorbed = self.absorbed || rhs.absorbed;
        if let (Some(a), Some(b)) = (self.value, rhs.value) {
            let s = a + b;
            if s.is_finite() {
                return Ok(TowerReal::new(0, s)?.flagged(absorbed));
            }
            if s == f64::NEG_INFINITY {
                return Err(Error::Overflow(
                    "sum of large negative values has no representation".into(),
                ));
            }
        }
        let (hi, lo) = if self.cmp(rhs) == Ordering::Less {
            (rhs, self)
        } else {
            (self, rhs)
        };
        if !hi.is_positive() {
            return Err(Error::Overflow(
                "sum of large negative values has no representation".into(),
            ));
        }
        if !lo.is_positive() {
            // A level-0 addend cannot move a value with no float image.
            return Ok(hi.flag_absorbed());
        }
        let la = hi.log1()?;
        let lb = lo.log1()?;
        if let (Some(xa), Some(xb)) = (la.float(), lb.float()) {
            let geom = (xb - xa).exp(); // b/a <= 1
            let corr = geom.ln_1p();
            return Ok(TowerReal::new(0, xa + corr)?
                .exp1()
                .flagged(absorbed || geom == 0.0));
        }
        Ok(hi.flag_absorbed())
    }

    /// Guarded difference; requires `self > rhs` in the canonical order.
    pub fn sub_guarded(&self, rhs: &TowerReal) -> Result<TowerReal> {
        if self.cmp(rhs) != Ordering::Greater {
            return Err(Error::Domain(format!(
                "sub_guarded requires a > b (got {self} <= {rhs})"
            )));
        }
        let absorbed = self.absorbed || rhs.absorbed;
        if let (Some(a), Some(b)) = (self.value, rhs.value) {
            let d = a - b;
            if d.is_finite() {
                return Ok(TowerReal::new(0, d)?.flagged(absorbed));
            }
        }
        if !rhs.is_positive() {
            // self - (nonpositive rhs) = self + |rhs|; self has no float
            // image here, so the addend is invisible.
            return Ok(self.flag_absorbed());
        }
        let la = self.log1()?;
        let lb = rhs.log1()?;
        match (la.float(), lb.float()) {
            (Some(xa), Some(xb)) => {
                let geom = (xb - xa).exp(); // b/a, mathematically < 1
                if geom >= 1.0 {
                    return Err(Error::Domain(
                        "difference is below representable precision".into(),
                    ));
                }
                let corr = (-geom).ln_1p();
                Ok(TowerReal::new(0, xa + corr)?
                    .exp1()
                    .flagged(absorbed || geom == 0.0))
            }
            _ => Ok(self.flag_absorbed()),
        }
    }

    /// Product, computed as `exp(log a + log b)` once the plain float path
    /// is unavailable.
    pub fn mul(&self, rhs: &TowerReal) -> Result<TowerReal> {
        let absorbed = self.absorbed || rhs.absorbed;
        if self.is_zero() || rhs.is_zero() {
            return Ok(TowerReal::zero().flagged(absorbed));
        }
        if let (Some(a), Some(b)) = (self.value, rhs.value) {
            let p = a * b;
            if p.is_finite() {
                return Ok(TowerReal::new(0, p)?.flagged(absorbed));
            }
            if a < 0.0 || b < 0.0 {
                return Err(Error::Overflow(
                    "negative product beyond float range has no representation".into(),
                ));
            }
        }
        let la = self.log1()?;
        let lb = rhs.log1()?;
        Ok(la.add(&lb)?.exp1())
    }

    /// `self^s` for positive real `s`, via `exp(s log self)` when the plain
    /// float path is unavailable.
    pub fn pow_scalar(&self, s: f64) -> Result<TowerReal> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidValue(format!(
                "pow_scalar exponent must be positive and finite, got {s}"
            )));
        }
        if let Some(v) = self.value {
            let p = v.powf(s);
            if p.is_finite() {
                return Ok(TowerReal::new(0, p)?.flagged(self.absorbed));
            }
            if p.is_nan() {
                return Err(Error::Domain(format!("({v})^({s}) is undefined")));
            }
        }
        let l = self.log1()?;
        Ok(l.mul(&TowerReal::from_f64(s)?)?.exp1())
    }
}

// Equality and order are on the canonical fields only: canonical forms are
// unique and all values below e live at level 0, so (level, mantissa) is
// lexicographically faithful to the value order. Mantissas are finite by
// construction (no NaN), so the order is total.
impl PartialEq for TowerReal {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.mantissa == other.mantissa
    }
}

impl Eq for TowerReal {}

impl PartialOrd for TowerReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.mantissa.total_cmp(&other.mantissa))
    }
}

impl fmt::Display for TowerReal {
    /// Renders as `E^L(x)`. The mantissa uses the shortest decimal form
    /// that parses back to the identical float, so `parse(render(v)) == v`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E^{}({})", self.level, self.mantissa)
    }
}

impl FromStr for TowerReal {
    type Err = Error;

    /// Parses `E^L(x)` as rendered by `Display`; a bare float literal is
    /// accepted as a level-0 value for convenience.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("E^") {
            let open = rest.find('(').ok_or_else(|| Error::InvalidValue(
                format!("malformed tower literal {s:?}: missing '('"),
            ))?;
            let level: u32 = rest[..open].parse().map_err(|_| {
                Error::InvalidValue(format!("malformed tower level in {s:?}"))
            })?;
            let body = &rest[open + 1..];
            let close = body.rfind(')').ok_or_else(|| Error::InvalidValue(
                format!("malformed tower literal {s:?}: missing ')'"),
            ))?;
            if !body[close + 1..].trim().is_empty() {
                return Err(Error::InvalidValue(format!(
                    "trailing input after tower literal {s:?}"
                )));
            }
            let mantissa: f64 = body[..close].trim().parse().map_err(|_| {
                Error::InvalidValue(format!("malformed tower mantissa in {s:?}"))
            })?;
            TowerReal::new(level, mantissa)
        } else {
            let v: f64 = s.parse().map_err(|_| {
                Error::InvalidValue(format!("not a tower literal or float: {s:?}"))
            })?;
            TowerReal::from_f64(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(level: u32, mantissa: f64) -> TowerReal {
        TowerReal::new(level, mantissa).unwrap()
    }

    #[test]
    fn normalizes_level_zero_upwards() {
        let v = t(0, 100.0);
        assert_eq!(v.level(), 2);
        let expected = 100.0_f64.ln().ln();
        assert!((v.mantissa() - expected).abs() < 1e-15);
        // the float image is the original value, bit-exact
        assert_eq!(v.to_real().unwrap(), 100.0);
    }

    #[test]
    fn normalizes_small_mantissa_downwards() {
        let v = t(3, 0.5);
        assert_eq!(v.level(), 2);
        assert!((v.mantissa() - 0.5_f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn level_zero_admits_negatives() {
        let v = t(0, -4.25);
        assert_eq!(v.level(), 0);
        assert_eq!(v.mantissa(), -4.25);
        assert_eq!(v.to_real().unwrap(), -4.25);
        assert!(!v.is_positive());
    }

    #[test]
    fn exp_k_lifts_into_the_band() {
        let v = t(0, 10.0).exp_k(1);
        assert_eq!(v.level(), 2);
        assert!((v.mantissa() - 10.0_f64.ln()).abs() < 1e-15);
        // exp(10) is representable, so the image must match the direct op
        assert_eq!(v.to_real().unwrap(), 10.0_f64.exp());
    }

    #[test]
    fn log_k_is_exact_level_arithmetic() {
        let v = t(5, 1.3);
        let l = v.log_k(3).unwrap();
        assert_eq!(l.level(), 2);
        assert_eq!(l.mantissa(), 1.3);
        // descending past level 0 uses plain logs
        let deep = t(0, 0.5).log_k(1).unwrap();
        assert_eq!(deep.level(), 0);
        assert!((deep.mantissa() - 0.5_f64.ln()).abs() < 1e-16);
        assert!(t(0, -1.0).log_k(1).is_err());
    }

    #[test]
    fn mul_descends_to_level_zero() {
        let a = t(1, 2.0);
        let b = t(1, 2.0);
        let p = a.mul(&b).unwrap();
        // e^2 * e^2 = e^4 -> canonical (2, ln 4)
        assert_eq!(p.level(), 2);
        assert!((p.mantissa() - 4.0_f64.ln()).abs() < 1e-12);
        assert!((p.to_real().unwrap() - 4.0_f64.exp()).abs() / 4.0_f64.exp() < 1e-14);
    }

    #[test]
    fn add_absorbs_at_high_level_and_flags() {
        let big = t(5, 1.3);
        let small = t(0, 10.0);
        let s = big.add(&small).unwrap();
        assert_eq!(s.level(), 5);
        assert_eq!(s.mantissa(), 1.3);
        assert!(s.absorbed());
        // commuted argument order gives the identical result
        let s2 = small.add(&big).unwrap();
        assert_eq!(s, s2);
        assert!(s2.absorbed());
    }

    #[test]
    fn add_is_exact_within_float_range() {
        let a = t(0, 1.0e300);
        let b = t(0, 2.5e299);
        let s = a.add(&b).unwrap();
        assert_eq!(s.to_real().unwrap(), 1.25e300);
        assert!(!s.absorbed());
    }

    #[test]
    fn add_uses_log_space_just_past_float_range() {
        // 1.5e308 + 1.5e308 = 3e308 overflows f64 but is exactly
        // exp(ln(1.5e308) + ln 2) in log space.
        let a = t(0, 1.5e308);
        let s = a.add(&a).unwrap();
        assert!(s.float().is_none());
        assert!(!s.absorbed());
        let expected = 1.5e308_f64.ln() + std::f64::consts::LN_2;
        let back = s.log_k(1).unwrap().to_real().unwrap();
        assert!((back - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn sub_guarded_requires_strict_order() {
        let a = t(0, 5.0);
        let b = t(0, 7.0);
        assert!(a.sub_guarded(&b).is_err());
        assert!(a.sub_guarded(&a).is_err());
        let d = b.sub_guarded(&a).unwrap();
        assert_eq!(d.to_real().unwrap(), 2.0);
    }

    #[test]
    fn pow_scalar_handles_both_regimes() {
        let r = t(0, 10.0);
        assert_eq!(r.pow_scalar(3.0).unwrap().to_real().unwrap(), 1000.0);
        let big = t(3, 1.9); // beyond f64
        let sq = big.pow_scalar(2.0).unwrap();
        // log(x^2) = 2 log x
        let lx = big.log_k(1).unwrap().to_real().unwrap();
        let lsq = sq.log_k(1).unwrap().to_real().unwrap();
        assert!((lsq - 2.0 * lx).abs() / lsq < 1e-12);
    }

    #[test]
    fn to_real_overflows_at_high_level() {
        assert!(matches!(
            t(9, 1.5).to_real(),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn order_is_lexicographic_and_total() {
        let vals = [
            t(0, -3.0),
            t(0, 0.0),
            t(0, 1.0),
            t(0, 2.5),
            t(1, 1.0),  // = e
            t(1, 2.0),
            t(2, 1.1),
            t(5, 1.0001),
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1], "{} < {}", w[0], w[1]);
        }
    }

    #[test]
    fn rendering_round_trips_exactly() {
        for v in [
            t(0, 100.0),
            t(2, 1.5271796960744247),
            t(0, -0.6931471805599453),
            t(7, 2.718281828459045 - 1e-12),
            t(0, 0.0),
        ] {
            let s = v.to_string();
            let back: TowerReal = s.parse().unwrap();
            assert_eq!(v, back, "render {s}");
            assert_eq!(v.level(), back.level());
            assert_eq!(v.mantissa().to_bits(), back.mantissa().to_bits());
        }
        // bare floats parse as level-0 values
        let p: TowerReal = "42.5".parse().unwrap();
        assert_eq!(p, t(0, 42.5));
    }

    #[test]
    fn rejects_non_finite_mantissa() {
        assert!(TowerReal::new(0, f64::NAN).is_err());
        assert!(TowerReal::new(1, f64::INFINITY).is_err());
    }
}
