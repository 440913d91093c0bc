//! Closed-form size bounds for t-agreeing families.

use num_bigint::BigUint;
use num_traits::One;

use super::FamilyError;

/// `3^(n-3t+1) * sum_{i<t} C(3t-1, i) 2^i`, the bound on 2-wise t-agreeing
/// families in `[3]^n` for `n >= 3t - 1`.
pub fn ft_ternary_bound(n: u64, t: u64) -> Result<BigUint, FamilyError> {
    if t == 0 {
        return Err(FamilyError::OutOfRange("t must be at least 1".into()));
    }
    if n + 1 < 3 * t {
        return Err(FamilyError::OutOfRange(format!("need n >= 3t - 1, got n = {n}, t = {t}")));
    }
    let m = 3 * t - 1;
    // Running term C(m, i) 2^i, updated by the ratio 2(m - i)/(i + 1).
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 0..t - 1 {
        term = term * (2 * (m - i)) / (i + 1);
        sum += &term;
    }
    let exponent = u32::try_from(n + 1 - 3 * t)
        .map_err(|_| FamilyError::OutOfRange(format!("n = {n} too large")))?;
    Ok(BigUint::from(3u32).pow(exponent) * sum)
}

/// Natural log of [`ft_ternary_bound`], computed from the exact integer.
pub fn ft_ternary_bound_ln(n: u64, t: u64) -> Result<f64, FamilyError> {
    ft_ternary_bound(n, t).map(|b| biguint_ln(&b))
}

pub(crate) fn biguint_ln(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(value).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigUint = value >> shift;
    let mantissa = num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::INFINITY);
    mantissa.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `(sqrt(5) - 1) / 2`.
pub fn golden_ratio_conjugate() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// `2^n ((sqrt(5) - 1)/2)^t`: the size bound for 3-wise t-agreeing (and
/// 3-wise t-intersecting) binary families. Saturates to infinity when the
/// value exceeds the double range; see [`golden_ratio_bound_log2`].
pub fn golden_ratio_bound(n: u64, t: u64) -> f64 {
    let log2 = golden_ratio_bound_log2(n, t);
    if log2 > 1000.0 {
        f64::INFINITY
    } else {
        log2.exp2()
    }
}

pub fn golden_ratio_bound_log2(n: u64, t: u64) -> f64 {
    n as f64 + t as f64 * golden_ratio_conjugate().log2()
}

/// `3^(n - t/10)`, the simplified large-t form of [`ft_ternary_bound`].
pub fn simplified_ternary_bound(n: u64, t: u64) -> Result<f64, FamilyError> {
    if t == 0 {
        return Err(FamilyError::OutOfRange("t must be at least 1".into()));
    }
    Ok(3f64.powf(n as f64 - t as f64 / 10.0))
}

pub fn simplified_ternary_bound_ln(n: u64, t: u64) -> Result<f64, FamilyError> {
    if t == 0 {
        return Err(FamilyError::OutOfRange("t must be at least 1".into()));
    }
    Ok((n as f64 - t as f64 / 10.0) * 3f64.ln())
}
