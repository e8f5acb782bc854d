//! Scalar root finding and finite differences.

use thiserror::Error;

pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;
pub const MAX_DOUBLINGS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("non-finite function value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },
    #[error("root finder did not converge within {iterations} iterations (bracket [{lo}, {hi}])")]
    IterationLimit { iterations: usize, lo: f64, hi: f64 },
    #[error("no sign change captured after {doublings} bracket doublings from seed {seed}")]
    ExpansionLimit { seed: f64, doublings: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericsError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(NumericsError::InvalidArgument(format!("bracket requires finite lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, NumericsError> {
    let value = f(x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(NumericsError::NonFinite { x, value })
    }
}

/// Bracketed root refinement: each iteration tries one false-position step
/// (kept only when it lands strictly inside the bracket) followed by one
/// bisection step, so the bracket at least halves per iteration.
///
/// Convergence requires `|f(x)| <= rel_tol * max(|f(lo)|, |f(hi)|)` of the
/// initial bracket and a bracket width of at most `rel_tol * |x|` (with
/// `|x|` floored at `EPSILON` times the initial width), or an exact zero,
/// or a bracket that can no longer be split in `f64`.
pub fn find_root<F>(f: F, bracket: Bracket, rel_tol: f64) -> Result<RootResult, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut f_lo = eval(&f, lo)?;
    let mut f_hi = eval(&f, hi)?;
    if f_lo == 0.0 {
        return Ok(RootResult { root: lo, residual: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(RootResult { root: hi, residual: 0.0, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let residual_tol = rel_tol * f_lo.abs().max(f_hi.abs());
    // absolute width floor for roots at (or extremely near) the origin
    let x_floor = f64::EPSILON * (hi - lo);

    let mut best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };

    for iteration in 1..=MAX_ITERATIONS {
        // false position
        let candidate = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if candidate > lo && candidate < hi {
            let f_c = eval(&f, candidate)?;
            if f_c == 0.0 {
                return Ok(RootResult { root: candidate, residual: 0.0, iterations: iteration });
            }
            if f_c.signum() == f_lo.signum() {
                lo = candidate;
                f_lo = f_c;
            } else {
                hi = candidate;
                f_hi = f_c;
            }
            if f_c.abs() < best.1.abs() {
                best = (candidate, f_c);
            }
        }

        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            // bracket exhausted at f64 resolution
            return Ok(RootResult { root: best.0, residual: best.1, iterations: iteration });
        }
        let f_mid = eval(&f, mid)?;
        if f_mid == 0.0 {
            return Ok(RootResult { root: mid, residual: 0.0, iterations: iteration });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }

        let x = best.0;
        if best.1.abs() <= residual_tol && hi - lo <= rel_tol * x.abs().max(x_floor) {
            return Ok(RootResult { root: x, residual: best.1, iterations: iteration });
        }
    }
    Err(NumericsError::IterationLimit { iterations: MAX_ITERATIONS, lo, hi })
}

/// Doubles the upper end of `[0, seed]` until `f` changes sign across the
/// last doubling step, returning that step's interval.
pub fn expand_bracket<F>(f: F, seed: f64) -> Result<Bracket, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(seed.is_finite() && seed > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("seed must be positive, got {seed}")));
    }
    let f_zero = eval(&f, 0.0)?;
    let mut lo = 0.0;
    let mut hi = seed;
    for _ in 0..=MAX_DOUBLINGS {
        let f_hi = eval(&f, hi)?;
        if f_hi == 0.0 || f_hi.signum() != f_zero.signum() || f_zero == 0.0 {
            return Bracket::new(lo, hi);
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(NumericsError::ExpansionLimit { seed, doublings: MAX_DOUBLINGS })
}

/// Symmetric difference quotient `(f(x+h) - f(x-h)) / 2h`.
pub fn central_difference<F>(f: F, x: f64, h: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let forward = eval(&f, x + h)?;
    let backward = eval(&f, x - h)?;
    let d = (forward - backward) / (2.0 * h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(NumericsError::NonFinite { x, value: d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quadratic_root() {
        let r = find_root(|x| x * x - 4.0, Bracket::new(0.0, 10.0).unwrap(), 1e-12).unwrap();
        assert!((r.root - 2.0).abs() < 1e-11);
        assert!(r.iterations <= MAX_ITERATIONS);
    }

    #[test]
    fn cubic_root() {
        let r = find_root(|x| x * x * x - 8.0, Bracket::new(0.0, 3.0).unwrap(), 1e-12).unwrap();
        assert!((r.root - 2.0).abs() < 1e-11);
    }

    #[test]
    fn focusing_residual_closed_form() {
        let l: f64 = 0.3008e-6;
        let f = |z: f64| z.sqrt() * z - 2.0 * PI * l.powf(1.5);
        let r = find_root(f, Bracket::new(0.0, 10.0 * l).unwrap(), 1e-12).unwrap();
        let exact = (2.0 * PI).powf(2.0 / 3.0) * l;
        assert!(((r.root - exact) / exact).abs() < 1e-11);
        assert!((r.root - 1.024e-6).abs() < 1e-9);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), 1e-12).unwrap_err();
        assert!(matches!(err, NumericsError::NoSignChange { .. }));
    }

    #[test]
    fn non_finite_evaluation() {
        let err = find_root(|x| 1.0 / x - 1.0 + f64::NAN * (x - 0.5).max(0.0), Bracket::new(0.1, 2.0).unwrap(), 1e-12);
        assert!(matches!(err, Err(NumericsError::NonFinite { .. })));
    }

    #[test]
    fn exact_zero_at_endpoint() {
        let r = find_root(|x| x - 1.0, Bracket::new(1.0, 2.0).unwrap(), 1e-12).unwrap();
        assert_eq!(r.root, 1.0);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn root_at_origin() {
        let r = find_root(|x| x.powi(3), Bracket::new(-1.0, 3.0).unwrap(), 1e-12).unwrap();
        assert!(r.root.abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn bracket_validation() {
        assert!(Bracket::new(1.0, 1.0).is_err());
        assert!(Bracket::new(2.0, 1.0).is_err());
        assert!(Bracket::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn expand_linear() {
        let b = expand_bracket(|x| x - 5.0, 1.0).unwrap();
        assert_eq!(b, Bracket { lo: 4.0, hi: 8.0 });
    }

    #[test]
    fn expand_without_root() {
        let err = expand_bracket(|x| x * x + 1.0, 1.0).unwrap_err();
        assert!(matches!(err, NumericsError::ExpansionLimit { doublings: 64, .. }));
    }

    #[test]
    fn expand_first_interval() {
        let b = expand_bracket(|x| x - 0.5, 1.0).unwrap();
        assert_eq!(b, Bracket { lo: 0.0, hi: 1.0 });
    }

    #[test]
    fn central_difference_sin() {
        let d = central_difference(f64::sin, 0.0, 1e-6).unwrap();
        assert!((d - 1.0).abs() < 1e-10);
    }

    #[test]
    fn central_difference_constant() {
        assert_eq!(central_difference(|_| 3.5, 17.0, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn central_difference_cosine() {
        let dk = 2.0 * PI;
        let d = central_difference(|z| (dk * z).cos(), 0.25, 1e-6).unwrap();
        let exact = -dk * (dk * 0.25).sin();
        assert!((d - exact).abs() < 1e-6);
    }

    #[test]
    fn central_difference_errors() {
        assert!(matches!(central_difference(|x| 1.0 / x, 0.0, 0.0), Err(NumericsError::InvalidArgument(_))));
        assert!(matches!(
            central_difference(|x| if x > 0.0 { f64::INFINITY } else { 0.0 }, 0.0, 1e-3),
            Err(NumericsError::NonFinite { .. })
        ));
    }
}
