use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{lit, omega_power, sqrt3, Real};
use crate::{Error, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Narayana number `N(m, k) = C(m,k)·C(m,k−1)/m`: Dyck paths of semilength `m`
/// with `k` peaks.
pub fn narayana(m: u64, k: u64) -> Result<BigUint> {
    if m == 0 || k == 0 || k > m {
        return Err(Error::parameter(
            "k",
            format!("need 1 <= k <= m with m >= 1, got m={m}, k={k}"),
        ));
    }
    Ok(binomial(m, k) * binomial(m, k - 1) / BigUint::from(m))
}

pub fn catalan(m: u64) -> BigUint {
    binomial(2 * m, m) / BigUint::from(m + 1)
}

/// Simple-loop amplitude `g(t)` from the peak-count decomposition of loops.
///
/// A loop of length `t ≥ 4` is a first step out, a final step in, and a Dyck
/// path of semilength `m = (t−2)/2` in between; with `k` peaks it carries
/// `(2a²)^m (−1/2)^{k−1} / (√3)^{t−1}`. `t = 2` is the single out-and-back loop
/// `1/√3`. The peak sum is done in exact integers before scaling.
pub fn g_combinatorial<T: Real>(t: usize) -> Result<Complex<T>> {
    if t < 2 || t % 2 == 1 {
        return Err(Error::parameter("t", format!("need an even t >= 2, got {t}")));
    }
    let s3 = sqrt3::<T>();
    if t == 2 {
        return Ok(Complex::new(T::one() / s3, T::zero()));
    }
    let m = ((t - 2) / 2) as u64;
    // Σ_k (−1/2)^{k−1} N(m,k) = S / 2^{m−1} with S = Σ_k (−1)^{k−1} 2^{m−k} N(m,k).
    let mut s = BigInt::zero();
    for k in 1..=m {
        let term = BigInt::from(narayana(m, k)?) << (m - k);
        if k % 2 == 1 {
            s += term;
        } else {
            s -= term;
        }
    }
    let s = s
        .to_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Domain(format!("peak sum for t={t} exceeds f64 range")))?;
    // (2a²)^m / 2^{m−1} = 2·a^{2m}.
    let magnitude = lit::<T>(2.0 * s) / s3.powi((t - 1) as i32);
    Ok(omega_power::<T>(2 * m as i64) * magnitude)
}
