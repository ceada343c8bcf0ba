//! The classical walk on the tree, projected onto levels.
//!
//! From the root the walker always moves to level 1; from level `ℓ ≥ 1` it moves
//! away from the root with probability `p` and toward it with `q = 1 − p`. For
//! the binary tree `p = 2/3`. `p_t(n, 0)` is the probability to be at the root at
//! time `t` starting from level `n`.

use num_complex::Complex;

use crate::quadrature::AdaptiveGaussLegendre;
use crate::scalar::{lit, neumaier_sum, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams<T> {
    p: T,
    q: T,
}

impl<T: Real> ChainParams<T> {
    /// Requires `1/2 < p < 1`.
    pub fn new(p: T) -> Result<Self> {
        let q = T::one() - p;
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::parameter("p", format!("{p} is outside (0, 1)")));
        }
        if !(p > q) {
            return Err(Error::parameter("p", format!("need p > q, got p = {p}")));
        }
        Ok(Self { p, q })
    }

    /// `p = 2/3`: two children versus one parent.
    pub fn binary_tree() -> Self {
        Self {
            p: lit(2.0 / 3.0),
            q: lit(1.0 / 3.0),
        }
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn q(&self) -> T {
        self.q
    }

    /// `√(pq)`.
    pub fn geometric_mean(&self) -> T {
        (self.p * self.q).sqrt()
    }

    /// `ln(2√(pq))`, the exponential decay rate of `p_t(n, 0)` in `t`.
    pub fn decay_rate(&self) -> T {
        (lit::<T>(2.0) * self.geometric_mean()).ln()
    }
}

/// Roots `ρ₁,₂ = (λ ± √(λ² − 4pq)) / (2p)` of `pρ² − λρ + q = 0`.
pub fn rho_roots<T: Real>(lambda: T, params: &ChainParams<T>) -> (Complex<T>, Complex<T>) {
    let disc = Complex::new(lambda * lambda - lit::<T>(4.0) * params.p * params.q, T::zero()).sqrt();
    let two_p = lit::<T>(2.0) * params.p;
    let l = Complex::new(lambda, T::zero());
    ((l + disc) / two_p, (l - disc) / two_p)
}

/// Spectral density `√(4pq − x²) / (2πq(1 − x²))` on `|x| < 2√(pq)`, zero elsewhere.
pub fn spectral_density<T: Real>(x: T, params: &ChainParams<T>) -> T {
    let r = lit::<T>(4.0) * params.p * params.q - x * x;
    if r <= T::zero() {
        return T::zero();
    }
    r.sqrt() / (lit::<T>(2.0) * T::PI() * params.q * (T::one() - x * x))
}

fn quadrature<T: Real>() -> Result<AdaptiveGaussLegendre<T>> {
    AdaptiveGaussLegendre::new(16, lit(1e-13), T::zero())
}

fn trivially_zero(n: usize, t: usize) -> bool {
    t < n || (t - n) % 2 == 1
}

fn check_imaginary<T: Real>(value: Complex<T>, l1: T, evaluations: usize) -> Result<T> {
    if value.im.abs() > lit::<T>(1e-12) * l1.max(value.re.abs()) {
        return Err(Error::Quadrature {
            estimate: value.re.to_f64().unwrap_or(f64::NAN),
            error: value.im.to_f64().unwrap_or(f64::NAN),
            evaluations,
            reason: "imaginary residual above 1e-12",
        });
    }
    Ok(value.re)
}

/// `p_t(n, 0)` from the spectral integral, on a contour through the saddle.
///
/// With `λ = √(pq)(z + 1/z)` the segment integral over the spectrum becomes
/// `(1/2π)∫ K·wᵗzⁿ(z − 1/z)/(√(q/p)·z − √(pq)·w) dθ`, `w = z + 1/z`,
/// `K = √(pq)^{t+1}(q/p)^{n/2}`, on a circle `z = re^{iθ}`. Any `0 < r < √(p/q)`
/// gives the same value; `r² = (t − n)/(t + n)` removes most of the
/// cancellation. Magnitudes are carried in log form.
pub fn hit_probability<T: Real>(n: usize, t: usize, params: &ChainParams<T>) -> Result<T> {
    if trivially_zero(n, t) {
        return Ok(T::zero());
    }
    let (nf, tf) = (lit::<T>(n as f64), lit::<T>(t as f64));
    let ratio = (tf - nf) / (tf + nf);
    let r = ratio.sqrt().max(lit(0.05)).min(lit(0.95));
    let sq = params.geometric_mean();
    let qp = (params.q / params.p).sqrt();
    let log_k = (tf + T::one()) * sq.ln() + nf * qp.ln();
    let log_peak = tf * (r + r.recip()).ln() + nf * r.ln();
    let two_pi = lit::<T>(2.0) * T::PI();
    let f = |theta: T| {
        let z = Complex::from_polar(r, theta);
        let zi = z.inv();
        let w = z + zi;
        let log_mag = Complex::new(tf, T::zero()) * w.ln()
            + Complex::new(nf * r.ln() - log_peak, nf * theta);
        let g = (z - zi) / (z * qp - w * sq);
        log_mag.exp() * g / two_pi
    };
    let mut quad = quadrature::<T>()?;
    // wᵗ carries a relative rounding error of order t·ε.
    quad.noise = T::epsilon() * lit((4 * (t + n) + 64) as f64);
    let est = quad.integrate(f, -T::PI(), T::PI())?;
    let re = check_imaginary(est.value, est.abs_integral, est.evaluations)?;
    Ok(re * (log_k + log_peak).exp())
}

/// `p_t(n, 0)` from the segment integral
/// `(1/2πi)∫ λᵗ(ρ₂ⁿ/(ρ₂ − λ) − ρ₁ⁿ/(ρ₁ − λ)) dλ` over `(−2√(pq), 2√(pq))`.
///
/// Uses `λ = 2√(pq)·cos θ`, which removes the square-root endpoints. The two
/// terms cancel strongly once `n` is large (≳ 100), so this form is kept for
/// cross-checks only.
pub fn hit_probability_segment<T: Real>(
    n: usize,
    t: usize,
    params: &ChainParams<T>,
) -> Result<T> {
    if trivially_zero(n, t) {
        return Ok(T::zero());
    }
    let edge = lit::<T>(2.0) * params.geometric_mean();
    let two_pi_i = Complex::new(T::zero(), lit::<T>(2.0) * T::PI());
    let f = |theta: T| {
        let lambda = edge * theta.cos();
        let (r1, r2) = rho_roots(lambda, params);
        let l = Complex::new(lambda, T::zero());
        let bracket = r2.powu(n as u32) / (r2 - l) - r1.powu(n as u32) / (r1 - l);
        bracket * (lambda.powi(t as i32) * edge * theta.sin()) / two_pi_i
    };
    let est = quadrature::<T>()?.integrate(f, T::zero(), T::PI())?;
    check_imaginary(est.value, est.abs_integral, est.evaluations)
}

/// Unevaluated sum `hi + lo` used to keep the chain's mass at the rounding floor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Compensated<T> {
    hi: T,
    lo: T,
}

impl<T: Real> Compensated<T> {
    fn new(x: T) -> Self {
        Self { hi: x, lo: T::zero() }
    }

    fn is_zero(&self) -> bool {
        self.hi == T::zero() && self.lo == T::zero()
    }

    fn value(&self) -> T {
        self.hi + self.lo
    }

    /// Adds `other`, keeping the rounding error of the leading parts.
    fn add(&mut self, other: Self) {
        let s = self.hi + other.hi;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (other.hi - bp);
        self.hi = s;
        self.lo += err + other.lo;
    }

    fn scale(&self, c: T) -> Self {
        let p = self.hi * c;
        let err = self.hi.mul_add(c, -p);
        Self {
            hi: p,
            lo: err + self.lo * c,
        }
    }

    fn neg(&self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// Full level distribution of the chain, grown as the walker spreads.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDistribution<T> {
    probs: Vec<Compensated<T>>,
    params: ChainParams<T>,
}

impl<T: Real> ChainDistribution<T> {
    pub fn point_mass(n: usize, params: ChainParams<T>) -> Self {
        let mut probs = vec![Compensated::default(); n + 1];
        probs[n] = Compensated::new(T::one());
        Self { probs, params }
    }

    pub fn step(&mut self) {
        self.step_pruned(usize::MAX);
    }

    /// One step keeping only levels `≤ max_level`.
    fn step_pruned(&mut self, max_level: usize) {
        let len = (self.probs.len() + 1).min(max_level.saturating_add(1));
        let mut next = vec![Compensated::default(); len];
        for (l, x) in self.probs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if l == 0 {
                if len > 1 {
                    next[1].add(*x);
                }
                continue;
            }
            // Splitting as (xq, x − xq) keeps the two parts summing to x.
            let toward = x.scale(self.params.q);
            next[l - 1].add(toward);
            if l + 1 < len {
                let mut away = *x;
                away.add(toward.neg());
                next[l + 1].add(away);
            }
        }
        self.probs = next;
    }

    pub fn root(&self) -> T {
        self.probs[0].value()
    }

    /// Probability of each level.
    pub fn probs(&self) -> Vec<T> {
        self.probs.iter().map(Compensated::value).collect()
    }

    pub fn mass(&self) -> T {
        neumaier_sum(self.probs.iter().flat_map(|c| [c.hi, c.lo]))
    }
}

/// `p_t(n, 0)` for `t = 0..=t_max` by exact forward propagation.
///
/// Levels that cannot reach the root in the remaining steps are dropped.
pub fn chain_dp<T: Real>(n: usize, t_max: usize, params: &ChainParams<T>) -> Vec<T> {
    let mut dist = ChainDistribution::point_mass(n, *params);
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(dist.root());
    for t in 1..=t_max {
        dist.step_pruned(t_max - t);
        out.push(dist.root());
    }
    out
}

/// Time and value of the largest `p_t(n, 0)` for `t ≤ max(4n, n + 600)`.
pub fn classical_peak<T: Real>(n: usize, params: &ChainParams<T>) -> (usize, T) {
    classical_peak_within(n, (4 * n).max(n + 600), params)
}

pub fn classical_peak_within<T: Real>(
    n: usize,
    t_max: usize,
    params: &ChainParams<T>,
) -> (usize, T) {
    let seq = chain_dp(n, t_max, params);
    seq.iter()
        .enumerate()
        .fold((0, T::zero()), |best, (t, &p)| if p > best.1 { (t, p) } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree() -> ChainParams<f64> {
        ChainParams::binary_tree()
    }

    #[test]
    fn params_validated() {
        assert!(ChainParams::new(0.4f64).is_err());
        assert!(ChainParams::new(0.5f64).is_err());
        assert!(ChainParams::new(1.0f64).is_err());
        assert!(ChainParams::new(0.7f64).is_ok());
    }

    #[test]
    fn roots() {
        let p = tree();
        let (a, b) = rho_roots(1.0, &p);
        assert!((a * b - Complex::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(a.im, 0.0);
        for &l in &[-0.9, -0.3, 0.0, 0.5, 0.94] {
            let (a, b) = rho_roots(l, &p);
            assert!((a * b - Complex::new(0.5, 0.0)).norm() < 1e-12);
            assert!((a.norm() - 0.5f64.sqrt()).abs() < 1e-12);
            assert!((b.norm() - 0.5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn density_basics() {
        let p = tree();
        let want = (4.0f64 * 2.0 / 9.0).sqrt() / (2.0 * std::f64::consts::PI / 3.0);
        assert!((spectral_density(0.0, &p) - want).abs() < 1e-15);
        assert_eq!(spectral_density(0.3, &p), spectral_density(-0.3, &p));
        assert_eq!(spectral_density(0.95, &p), 0.0);
    }

    #[test]
    fn dp_small_cases() {
        let p = tree();
        assert_eq!(chain_dp(0, 0, &p), vec![1.0]);
        let s = chain_dp(1, 5, &p);
        assert!((s[1] - 1.0 / 3.0).abs() < 1e-16);
        for n in 0..6 {
            let s = chain_dp(n, 30, &p);
            for (t, x) in s.iter().enumerate() {
                if t < n || (t + n) % 2 == 1 {
                    assert_eq!(*x, 0.0);
                }
            }
        }
    }

    #[test]
    fn integral_trivial_case() {
        let p = tree();
        assert!((hit_probability(0, 0, &p).unwrap() - 1.0).abs() < 1e-13);
        assert_eq!(hit_probability(3, 4, &p).unwrap(), 0.0);
        assert_eq!(hit_probability(5, 3, &p).unwrap(), 0.0);
    }
}
