//! Two-saddle steepest-descent approximation of the root amplitude.
//!
//! Writing `ξ = z²` and `ĝ(ξ)/ξ = ω`, the coefficient integral for `H_n(t)` turns
//! into an integral over `ω` with large parameter `k = τ/2` (`τ = t − n`) and
//! exponent `−k·ln φ(ω)`, where
//! `φ(ω) = a√3 (ω − 1/√3) / ((ω + 1/√3)(ω − 2/√3))`.
//! The saddles `ω = (1 ± i√2)/√3` sit on the unit circle and `|φ| = 1` there,
//! so the amplitude decays only algebraically, as `k^{−3/2}`.
//!
//! This expansion is taken around the closed form of `ĝ` whose `z⁴` coefficient
//! is `−2a²/(3√3)` (see [`LoopKernel::Published`](crate::series::LoopKernel)),
//! and it approximates that series.

use num_complex::Complex;

use crate::scalar::{cube_root_of_unity, lit, omega_power, sqrt3, Real};
use crate::{Error, Result};

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// The substitution map `φ(ω)`.
pub fn phi_map<T: Real>(omega: Complex<T>) -> Result<Complex<T>> {
    let s = T::one() / sqrt3::<T>();
    let d1 = omega + re(s);
    let d2 = omega - re(s + s);
    if d1.norm() == T::zero() || d2.norm() == T::zero() {
        return Err(Error::Domain(format!("φ has a pole at ω = {omega}")));
    }
    Ok(cube_root_of_unity::<T>() * sqrt3::<T>() * (omega - re(s)) / (d1 * d2))
}

fn poles<T: Real>() -> [T; 3] {
    let s = T::one() / sqrt3::<T>();
    [s, -s, s + s]
}

/// `(ln φ)′(ω)`.
pub fn log_phi_prime<T: Real>(omega: Complex<T>) -> Complex<T> {
    let [p0, p1, p2] = poles::<T>();
    let one = re(T::one());
    one / (omega - re(p0)) - one / (omega - re(p1)) - one / (omega - re(p2))
}

/// `(ln φ)″(ω)`.
pub fn log_phi_second<T: Real>(omega: Complex<T>) -> Complex<T> {
    let [p0, p1, p2] = poles::<T>();
    let one = re(T::one());
    let sq = |x: Complex<T>| x * x;
    -one / sq(omega - re(p0)) + one / sq(omega - re(p1)) + one / sq(omega - re(p2))
}

/// Newton iteration on `(ln φ)′ = 0` from `start`.
pub fn polish_saddle<T: Real>(start: Complex<T>) -> Complex<T> {
    let mut w = start;
    for _ in 0..50 {
        let dw = log_phi_prime(w) / log_phi_second(w);
        w = w - dw;
        if dw.norm() <= T::epsilon() * lit(4.0) {
            break;
        }
    }
    w
}

/// Constants of the two saddle contributions; index 0 is `ω = (1 + i√2)/√3`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleData<T> {
    pub omega: [Complex<T>; 2],
    pub phi: [Complex<T>; 2],
    /// `φ_s = e^{iλ_s}` with the branches `λ₁ ∈ (0, π/2)`, `λ₂ ∈ (−π, −π/2)`.
    pub lambda: [T; 2],
    /// `arctan(1/√2)`; `ω_s − √3 = √2·e^{±i(π − γ)}`.
    pub gamma: T,
    /// `sqrt(2 / (ln φ)″(ω_s))`, principal branch.
    pub b: [Complex<T>; 2],
    pub a: [Complex<T>; 2],
    pub d: [Complex<T>; 2],
}

impl<T: Real> Default for SaddleData<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> SaddleData<T> {
    pub fn new() -> Self {
        let s3 = sqrt3::<T>();
        let r2 = lit::<T>(2.0).sqrt();
        let omega = [c(T::one() / s3, r2 / s3), c(T::one() / s3, -r2 / s3)];
        let lambda = [
            ((lit::<T>(9.0) * s3 + lit::<T>(8.0) * r2) / lit(23.0)).atan(),
            ((lit::<T>(9.0) * s3 - lit::<T>(8.0) * r2) / lit(23.0)).atan() - T::PI(),
        ];
        let gamma = (T::one() / r2).atan();
        let sqrt_pi = T::PI().sqrt();
        let two = re(lit::<T>(2.0));
        let mut phi = [Complex::new(T::zero(), T::zero()); 2];
        let mut b = phi;
        let mut a = phi;
        let mut d = phi;
        for s in 0..2 {
            let w = omega[s];
            phi[s] = phi_map(w).expect("saddles are not poles");
            b[s] = (two / log_phi_second(w)).sqrt();
            let denom = re(T::one()) - w * phi[s];
            a[s] = b[s] * phi[s] * sqrt_pi / (denom * denom);
            d[s] = b[s] * sqrt_pi / (denom * (w - re(s3)));
        }
        Self {
            omega,
            phi,
            lambda,
            gamma,
            b,
            a,
            d,
        }
    }

    /// `c_{s,n} = a_s + d_s·n`.
    pub fn c(&self, n: usize) -> [Complex<T>; 2] {
        let nn = re(lit::<T>(n as f64));
        [self.a[0] + self.d[0] * nn, self.a[1] + self.d[1] * nn]
    }
}

/// Saddle labelling and overall sign of the two-term formula.
///
/// The subtraction of the two saddle contributions leaves both unpinned
/// analytically; [`Calibration::FITTED`] is the choice that matches the exact
/// `H_10(t)` of the expanded series over `τ ∈ [100, 300]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Calibration {
    /// Exchange `c₁ ↔ c₂`.
    pub swap: bool,
    /// Multiply the amplitude by −1.
    pub negate: bool,
}

impl Calibration {
    pub const FITTED: Self = Self {
        swap: false,
        negate: true,
    };

    pub const ALL: [Self; 4] = [
        Self { swap: false, negate: false },
        Self { swap: false, negate: true },
        Self { swap: true, negate: false },
        Self { swap: true, negate: true },
    ];
}

fn check_tau(n: usize, t: usize) -> Result<usize> {
    if t <= n {
        return Err(Error::Domain(format!(
            "asymptotics need t > n (got n={n}, t={t})"
        )));
    }
    Ok(t - n)
}

/// Leading-order amplitude `H_n(t)` with the fitted calibration.
pub fn asymptotic_amplitude<T: Real>(n: usize, t: usize) -> Result<Complex<T>> {
    asymptotic_amplitude_with(&SaddleData::new(), Calibration::FITTED, n, t)
}

/// Leading-order amplitude
/// `σ·(−a)ⁿ/(2πi)·2^{−n}(√2)ⁿ(−1)ⁿ·[c₁e^{−iγn}e^{−iλ₁k} − c₂e^{iγn}e^{−iλ₂k}] / k^{3/2}`
/// with `k = (t − n)/2`.
pub fn asymptotic_amplitude_with<T: Real>(
    data: &SaddleData<T>,
    cal: Calibration,
    n: usize,
    t: usize,
) -> Result<Complex<T>> {
    let tau = check_tau(n, t)?;
    let k = lit::<T>(tau as f64) / lit(2.0);
    let nf = lit::<T>(n as f64);
    let [mut c1, mut c2] = data.c(n);
    if cal.swap {
        std::mem::swap(&mut c1, &mut c2);
    }
    // Factor out e^{−iλ₁k} so the relative phase is formed as (λ₁ − λ₂)k, as in
    // the probability form.
    let relative = Complex::from_polar(
        T::one(),
        lit::<T>(2.0) * data.gamma * nf + (data.lambda[0] - data.lambda[1]) * k,
    );
    let bracket = Complex::from_polar(T::one(), -data.gamma * nf - data.lambda[0] * k)
        * (c1 - c2 * relative);
    // (−a)ⁿ(−1)ⁿ = aⁿ and 2^{−n}(√2)ⁿ = 2^{−n/2}.
    let scale = lit::<T>(0.5).sqrt().powi(n as i32) / (lit::<T>(2.0) * T::PI() * k * k.sqrt());
    let mut amp = omega_power::<T>(n as i64) * bracket * scale / c(T::zero(), T::one());
    if cal.negate {
        amp = -amp;
    }
    Ok(amp)
}

/// Leading-order `|H_n(t)|²`:
/// `[C² − 2Re{c₁c₂* e^{−i[2γn + (λ₁−λ₂)k]}}] / (4π²·2ⁿ·k³)`, `C² = |c₁|² + |c₂|²`.
pub fn asymptotic_probability<T: Real>(n: usize, t: usize) -> Result<T> {
    asymptotic_probability_with(&SaddleData::new(), Calibration::FITTED, n, t)
}

pub fn asymptotic_probability_with<T: Real>(
    data: &SaddleData<T>,
    cal: Calibration,
    n: usize,
    t: usize,
) -> Result<T> {
    let tau = check_tau(n, t)?;
    let k = lit::<T>(tau as f64) / lit(2.0);
    let nf = lit::<T>(n as f64);
    let [mut c1, mut c2] = data.c(n);
    if cal.swap {
        std::mem::swap(&mut c1, &mut c2);
    }
    let two = lit::<T>(2.0);
    // With θ = 2γn + (λ₁−λ₂)k and u = c₁c₂*/|c₁c₂|, the bracket C² − 2Re{c₁c₂*e^{−iθ}}
    // equals (|c₁| − |c₂|)² + |c₁c₂|·|e^{iθ} − u|². That form keeps its relative
    // accuracy near the zeros of the oscillation.
    let (m1, m2) = (c1.norm(), c2.norm());
    let theta = two * data.gamma * nf + (data.lambda[0] - data.lambda[1]) * k;
    let cross = c1 * c2.conj();
    let u = cross / cross.norm();
    let gap = (Complex::from_polar(T::one(), theta) - u).norm_sqr();
    let bracket = (m1 - m2) * (m1 - m2) + m1 * m2 * gap;
    let denom = lit::<T>(4.0) * T::PI() * T::PI() * two.powi(n as i32) * k * k * k;
    Ok(bracket / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_basics() {
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(phi_map(Complex::new(s, 0.0)).unwrap().norm(), 0.0);
        assert!(matches!(phi_map(Complex::new(-s, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(phi_map(Complex::new(2.0 * s, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn saddle_constants() {
        let d = SaddleData::<f64>::new();
        for s in 0..2 {
            assert!((d.phi[s].norm() - 1.0).abs() < 1e-12);
            assert!(log_phi_prime(d.omega[s]).norm() < 1e-12);
            assert!((polish_saddle(d.omega[s]) - d.omega[s]).norm() < 1e-12);
            assert!(((d.omega[s] - Complex::new(3f64.sqrt(), 0.0)).norm() - 2f64.sqrt()).abs() < 1e-14);
            let diff = (d.phi[s].arg() - d.lambda[s]).rem_euclid(std::f64::consts::TAU);
            assert!(diff < 1e-10 || (std::f64::consts::TAU - diff) < 1e-10, "saddle {s}");
        }
        assert!((d.omega[0] - Complex::from_polar(1.0, 2f64.sqrt().atan())).norm() < 1e-15);
        assert!((d.gamma - 0.61548).abs() < 1e-5);
        assert!((d.lambda[0] - 0.86344).abs() < 1e-5);
        assert!((d.lambda[1] + 2.95783).abs() < 1e-5);
        let arg = (d.omega[0] - Complex::new(3f64.sqrt(), 0.0)).arg();
        assert!((arg - (std::f64::consts::PI - d.gamma)).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(asymptotic_amplitude::<f64>(5, 5).is_err());
        assert!(asymptotic_probability::<f64>(5, 3).is_err());
    }

    #[test]
    fn forms_agree() {
        let data = SaddleData::<f64>::new();
        for cal in Calibration::ALL {
            for n in [1usize, 7, 30] {
                for t in [n + 2, n + 51, n + 400] {
                    let a = asymptotic_amplitude_with(&data, cal, n, t).unwrap().norm_sqr();
                    let p = asymptotic_probability_with(&data, cal, n, t).unwrap();
                    assert!(((a - p) / p).abs() < 1e-12, "n={n} t={t}");
                }
            }
        }
    }
}
