//! Log-domain evaluation of the closed-form quantities behind the
//! constructions: the birthday collision bound, the independence-number
//! prediction for dense random graphs, family counts, the threshold size of
//! the planted family, and the second-moment ratio bounds.
//!
//! Values such as family counts are astronomically large, so everything is
//! carried as a natural log plus a sign ([`LogReal`]).

use crate::error::{Error, Result};
use crate::fk::{count_formula_upper, FamilyParams};

pub const LN_2: f64 = std::f64::consts::LN_2;

/// A real number stored as `sign * exp(ln_abs)`.
///
/// Multiplication, division, same-sign addition and comparison are exact up
/// to relative error ~1e-12 per operation on representable magnitudes.
#[derive(Clone, Copy, Debug)]
pub struct LogReal {
    ln_abs: f64,
    sign: i8,
}

impl LogReal {
    pub fn zero() -> Self {
        LogReal { ln_abs: f64::NEG_INFINITY, sign: 0 }
    }

    pub fn one() -> Self {
        LogReal { ln_abs: 0.0, sign: 1 }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else {
            LogReal { ln_abs: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    /// Positive value from its natural log.
    pub fn from_ln(ln: f64) -> Self {
        LogReal { ln_abs: ln, sign: 1 }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of a positive value.
    pub fn ln(&self) -> Option<f64> {
        (self.sign > 0).then_some(self.ln_abs)
    }

    pub fn log2(&self) -> Option<f64> {
        self.ln().map(|l| l / LN_2)
    }

    /// May overflow to ±inf or underflow to ±0.
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    pub fn mul(&self, other: &LogReal) -> LogReal {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        LogReal { ln_abs: self.ln_abs + other.ln_abs, sign: self.sign * other.sign }
    }

    pub fn div(&self, other: &LogReal) -> LogReal {
        assert!(other.sign != 0, "division by zero");
        if self.sign == 0 {
            return Self::zero();
        }
        LogReal { ln_abs: self.ln_abs - other.ln_abs, sign: self.sign * other.sign }
    }

    /// Sum of two values with the same sign (or either zero).
    pub fn add_same_sign(&self, other: &LogReal) -> LogReal {
        if self.sign == 0 {
            return *other;
        }
        if other.sign == 0 {
            return *self;
        }
        assert_eq!(self.sign, other.sign, "add_same_sign requires matching signs");
        let (hi, lo) = if self.ln_abs >= other.ln_abs {
            (self.ln_abs, other.ln_abs)
        } else {
            (other.ln_abs, self.ln_abs)
        };
        LogReal { ln_abs: hi + (lo - hi).exp().ln_1p(), sign: self.sign }
    }
}

impl PartialEq for LogReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(std::cmp::Ordering::Equal)
    }
}

impl PartialOrd for LogReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        match (self.sign, other.sign) {
            (a, b) if a < b => Some(Less),
            (a, b) if a > b => Some(Greater),
            (0, 0) => Some(Equal),
            (1, 1) => self.ln_abs.partial_cmp(&other.ln_abs),
            (-1, -1) => other.ln_abs.partial_cmp(&self.ln_abs),
            _ => unreachable!(),
        }
    }
}

/// ln Γ(x) by the Lanczos approximation (g = 5, 6 terms), accurate to about
/// ten significant digits for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument, got {x}");
    const COEFFS: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let tmp = x + 5.5;
    let log = (x + 0.5) * tmp.ln() - tmp;
    let mut a = 1.000000000190015;
    let mut denom = x;
    for c in &COEFFS {
        denom += 1.0;
        a += c / denom;
    }
    log + (2.5066282746310005 * a / x).ln()
}

pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// ln C(n, k) for real arguments with 0 <= k <= n.
pub fn ln_choose(n: f64, k: f64) -> f64 {
    assert!(k >= 0.0 && k <= n, "ln_choose({n}, {k}) out of range");
    if k == 0.0 || k == n {
        return 0.0;
    }
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// ln C(n - offset, k) where n = 2^log2_n may be far beyond f64 range.
///
/// Computed as sum over ln(n - offset - t); when n is itself representable
/// the terms are exact, otherwise the relative corrections underflow to zero
/// and each term is ln n.
pub fn ln_choose_offset(log2_n: f64, offset: f64, k: u64) -> f64 {
    let ln_n = log2_n * LN_2;
    let mut sum = 0.0;
    if log2_n <= 500.0 {
        let n = log2_n.exp2();
        for t in 0..k {
            sum += (n - offset - t as f64).ln();
        }
    } else {
        sum = k as f64 * ln_n; // (offset + t) / n underflows
    }
    sum - ln_factorial(k)
}

/// Upper bound `exp(-a(a-1)/2b)` on the probability that `a` uniform draws
/// from `b` values are all distinct.
pub fn birthday_upper(a: u64, b: u64) -> Result<f64> {
    if b == 0 {
        return Err(Error::InvalidInput("birthday bound needs b >= 1".into()));
    }
    let a = a as f64;
    Ok((-(a * (a - 1.0)) / (2.0 * b as f64)).exp())
}

/// Predicted independence number `2 log_b n - 2 log_b log_b n` of a dense
/// random graph with edge probability `p`, where `b = 1/(1-p)`. The additive
/// O(1) term is omitted.
pub fn alpha_prediction(n: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if n < 4.0 {
        return Err(Error::InvalidInput("prediction needs n >= 4".into()));
    }
    let ln_b = -(1.0 - p).ln();
    let log_b_n = n.ln() / ln_b;
    Ok(2.0 * log_b_n - 2.0 * (log_b_n.ln() / ln_b))
}

/// Expected number of induced family members over `k`-subsets of an
/// `n`-vertex dense random graph: `C(n,k) * (formula count) * 2^{-C(k,2)}`,
/// with the count taken from [`count_formula_upper`].
pub fn log_h(n: u64, params: &FamilyParams) -> LogReal {
    let k = params.k as f64;
    let ln = ln_choose(n as f64, k) + count_formula_upper(params).ln().expect("count is positive")
        - k * (k - 1.0) / 2.0 * LN_2;
    LogReal::from_ln(ln)
}

/// Continuous-relaxation version of `ln h(k) - k ln 2` at the analysis shape
/// (`r = 0.01k`, `s = 10`), for `n = 2^log2_n` far beyond f64 range.
///
/// `ln C(n,k)` is taken as `k ln n - ln Γ(k+1)`; the neglected corrections
/// vanish in the regime `log2_n >= 100`.
pub fn threshold_condition(log2_n: f64, k: f64) -> f64 {
    let ln_n = log2_n * LN_2;
    let r = 0.01 * k;
    let b = 0.9 * k;
    let ln_choose_nk = k * ln_n - ln_gamma(k + 1.0);
    let ln_formula = ln_gamma(k + 1.0) - ln_gamma(b + 1.0) - r * ln_gamma(11.0)
        - ln_gamma(r + 1.0)
        + b * r * LN_2;
    ln_choose_nk + ln_formula - k * (k - 1.0) / 2.0 * LN_2 - k * LN_2
}

/// Largest (continuous) `k` with expected member count at least `2^k`, found
/// by bisection on the decreasing tail inside `[1.9 log2_n, 2.2 log2_n]`.
pub fn threshold_k(log2_n: f64) -> Result<f64> {
    if log2_n < 100.0 {
        return Err(Error::InvalidInput("threshold needs log2(n) >= 100".into()));
    }
    let mut lo = 1.9 * log2_n;
    let mut hi = 2.2 * log2_n;
    if !(threshold_condition(log2_n, lo) > 0.0 && threshold_condition(log2_n, hi) < 0.0) {
        return Err(Error::InvalidInput("threshold bracket does not straddle the root".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if threshold_condition(log2_n, mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-9 * log2_n {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Pair-correlation ratio for small overlaps:
/// `C(k,i) C(n-k, k-i) / C(n,k) * 2^{C(i,2)}` with `n = 2^log2_n`.
pub fn case1_ratio(log2_n: f64, k: u64, i: u64) -> Result<LogReal> {
    if i < 2 || i >= k {
        return Err(Error::InvalidInput(format!("overlap i={i} must satisfy 2 <= i < k={k}")));
    }
    let ln = ln_choose(k as f64, i as f64) + ln_choose_offset(log2_n, k as f64, k - i)
        - ln_choose_offset(log2_n, 0.0, k)
        + (i * (i - 1) / 2) as f64 * LN_2;
    Ok(LogReal::from_ln(ln))
}

/// Upper bound on the number of joint extensions over an overlap deficit of
/// `j` vertices: `(formula count) * (r + 2^r)^j * 2^{(k-rs) j / s}`.
pub fn claim32_bound(params: &FamilyParams, j: usize) -> LogReal {
    let r = params.r as f64;
    let b = (params.k - params.r * params.s) as f64;
    let ln = count_formula_upper(params).ln().expect("count is positive")
        + j as f64 * (r + (r * LN_2).exp()).ln()
        + b * j as f64 / params.s as f64 * LN_2;
    LogReal::from_ln(ln)
}
