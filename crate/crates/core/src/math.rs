//! Thin wrappers over `libm` so the rest of the crate reads like `std` code.

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// `x ln x` with the `0 ln 0 = 0` convention.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * ln(x)
    }
}

/// Logistic sigmoid `1 / (1 + e^{-t})`.
#[inline]
pub fn logistic(t: f64) -> f64 {
    1.0 / (1.0 + exp(-t))
}

/// `ln(e^a + e^b + ...)` without overflow.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = terms.iter().map(|&t| exp(t - max)).sum();
    max + ln(sum)
}

/// Binary entropy in nats.
#[inline]
pub fn binary_entropy(p: f64) -> f64 {
    -xlogx(p) - xlogx(1.0 - p)
}
