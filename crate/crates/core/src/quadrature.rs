//! Gauss–Legendre rules and a globally adaptive panel integrator.

use num_complex::Complex;

use crate::scalar::{lit, neumaier_sum, Real};
use crate::{Error, Result};

/// `m`-point Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes are the roots of `P_m`, found by Newton iteration from Chebyshev-like guesses.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::parameter("m", "need at least one node"));
        }
        let mut nodes = vec![T::zero(); m];
        let mut weights = vec![T::zero(); m];
        let mf = lit::<T>(m as f64);
        for i in 0..m.div_ceil(2) {
            let guess = (T::PI() * (lit::<T>(i as f64) + lit(0.75)) / (mf + lit(0.5))).cos();
            let mut x = guess;
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= T::epsilon() {
                    break;
                }
            }
            let (_, d) = legendre(m, x);
            dp = if d.is_finite() { d } else { dp };
            let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = T::zero();
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Applies the rule on `[a, b]`; also returns the rule's estimate of `∫|f|`.
    pub fn integrate<F>(&self, f: &F, a: T, b: T) -> (Complex<T>, T)
    where
        F: Fn(T) -> Complex<T>,
    {
        let half = (b - a) / lit(2.0);
        let mid = (a + b) / lit(2.0);
        let mut re = Vec::with_capacity(self.nodes.len());
        let mut im = Vec::with_capacity(self.nodes.len());
        let mut abs = Vec::with_capacity(self.nodes.len());
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x) * w;
            re.push(v.re);
            im.push(v.im);
            abs.push(v.norm());
        }
        (
            Complex::new(neumaier_sum(re), neumaier_sum(im)) * half,
            neumaier_sum(abs) * half.abs(),
        )
    }
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre<T: Real>(m: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=m {
        let kf = lit::<T>(k as f64);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (T::one(), T::zero());
    }
    let mf = lit::<T>(m as f64);
    (p1, mf * (x * p1 - p0) / (x * x - T::one()))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate<T> {
    pub value: Complex<T>,
    /// Sum over panels of `|Q_2m − Q_m|`.
    pub error: T,
    /// Estimate of `∫|f|`.
    pub abs_integral: T,
    pub evaluations: usize,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    abs: T,
    error: T,
}

/// Globally adaptive Gauss–Legendre integration.
///
/// Each panel is integrated with an `m`-point and a `2m`-point rule; their
/// difference is the panel's error estimate. The panel with the largest error is
/// bisected until the total error is below
/// `max(rel_tol·|I|, abs_tol, max(64·ε, noise)·∫|f|)`, where `noise` is the
/// relative rounding error of one integrand evaluation. Bisection concentrates
/// panels at endpoint singularities of square-root type.
#[derive(Debug, Clone)]
pub struct AdaptiveGaussLegendre<T> {
    low: GaussLegendre<T>,
    high: GaussLegendre<T>,
    pub rel_tol: T,
    pub abs_tol: T,
    /// Relative rounding noise of the integrand; zero means "a few ulps".
    pub noise: T,
    pub max_panels: usize,
}

impl<T: Real> AdaptiveGaussLegendre<T> {
    pub fn new(m: usize, rel_tol: T, abs_tol: T) -> Result<Self> {
        Ok(Self {
            low: GaussLegendre::new(m)?,
            high: GaussLegendre::new(2 * m)?,
            rel_tol,
            abs_tol,
            noise: T::zero(),
            max_panels: 20_000,
        })
    }

    fn panel<F: Fn(T) -> Complex<T>>(&self, f: &F, a: T, b: T) -> Panel<T> {
        let (lo, _) = self.low.integrate(f, a, b);
        let (hi, abs) = self.high.integrate(f, a, b);
        Panel {
            a,
            b,
            value: hi,
            abs,
            error: (hi - lo).norm(),
        }
    }

    pub fn integrate<F>(&self, f: F, a: T, b: T) -> Result<QuadratureEstimate<T>>
    where
        F: Fn(T) -> Complex<T>,
    {
        let per_panel = self.low.nodes.len() + self.high.nodes.len();
        let mut panels = vec![self.panel(&f, a, b)];
        loop {
            let value = Complex::new(
                neumaier_sum(panels.iter().map(|p| p.value.re)),
                neumaier_sum(panels.iter().map(|p| p.value.im)),
            );
            let error = neumaier_sum(panels.iter().map(|p| p.error));
            let abs_integral = neumaier_sum(panels.iter().map(|p| p.abs));
            let floor = (lit::<T>(64.0) * T::epsilon()).max(self.noise) * abs_integral;
            let target = (self.rel_tol * value.norm()).max(self.abs_tol).max(floor);
            let estimate = QuadratureEstimate {
                value,
                error,
                abs_integral,
                evaluations: panels.len() * per_panel,
                panels: panels.len(),
            };
            if error <= target {
                return Ok(estimate);
            }
            if panels.len() >= self.max_panels || !error.is_finite() {
                return Err(Error::Quadrature {
                    estimate: value.re.to_f64().unwrap_or(f64::NAN),
                    error: error.to_f64().unwrap_or(f64::NAN),
                    evaluations: estimate.evaluations,
                    reason: if error.is_finite() {
                        "panel limit reached"
                    } else {
                        "non-finite integrand"
                    },
                });
            }
            let worst = panels
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |acc, (i, p)| {
                    if p.error > acc.1 {
                        (i, p.error)
                    } else {
                        acc
                    }
                })
                .0;
            let p = panels.swap_remove(worst);
            let mid = (p.a + p.b) / lit(2.0);
            if !(mid > p.a && mid < p.b) {
                return Err(Error::Quadrature {
                    estimate: value.re.to_f64().unwrap_or(f64::NAN),
                    error: error.to_f64().unwrap_or(f64::NAN),
                    evaluations: estimate.evaluations,
                    reason: "panel width below resolution",
                });
            }
            panels.push(self.panel(&f, p.a, mid));
            panels.push(self.panel(&f, mid, p.b));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for m in 1..12 {
            let gl = GaussLegendre::<f64>::new(m).unwrap();
            assert!((gl.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * m) {
                let (v, _) = gl.integrate(&|x: f64| Complex::new(x.powi(deg as i32), 0.0), 0.0, 1.0);
                assert!((v.re - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "m={m} deg={deg}");
            }
        }
    }

    #[test]
    fn adaptive_handles_sqrt_endpoints() {
        let q = AdaptiveGaussLegendre::new(16, 1e-13, 0.0).unwrap();
        let est = q
            .integrate(|x: f64| Complex::new((1.0 - x * x).max(0.0).sqrt(), 0.0), -1.0, 1.0)
            .unwrap();
        assert!((est.value.re - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn adaptive_reports_failure() {
        let mut q = AdaptiveGaussLegendre::new(4, 1e-15, 0.0).unwrap();
        q.max_panels = 3;
        let err = q
            .integrate(|x: f64| Complex::new(x.abs().sqrt().recip().min(1e8), 0.0), -1.0, 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
