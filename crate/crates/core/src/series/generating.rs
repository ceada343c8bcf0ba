//! Generating functions of the tree walk's root amplitude.
//!
//! With `u = (az)²` the simple-loop generating function solves a quadratic whose
//! discriminant is `1 − (2/3)u + u²`. The level-drop function `ĥ₁` follows from
//! it, `n` independent drops give `ĥ₁ⁿ`, and the root amplitude from level `n`
//! is `Ĥ_n = ĥ₁ⁿ / (1 − ĝ)`.

use num_complex::Complex;
use num_traits::Zero;

use super::PowerSeries;
use crate::scalar::{cube_root_of_unity, lit, omega_power, sqrt3, Real};
use crate::{Error, Result};

/// Which closed form to use for the simple-loop generating function `ĝ`.
///
/// The two differ by the root of the quadratic they pick:
/// `ĝ_walk + ĝ_published = 2z²/√3`. Only [`LoopKernel::Walk`] reproduces the
/// path sums of the tree walk (`g(4) = 2a²/(3√3)`); [`LoopKernel::Published`]
/// is the other root, which has the opposite sign on every `z^{t≥4}` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LoopKernel {
    #[default]
    Walk,
    Published,
}

impl std::str::FromStr for LoopKernel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "walk" => Ok(Self::Walk),
            "published" => Ok(Self::Published),
            other => Err(Error::parameter(
                "kernel",
                format!("unknown kernel `{other}` (walk|published)"),
            )),
        }
    }
}

/// Simple-loop generating function `ĝ(z)` to order `order ≥ 2`.
pub fn loop_gf<T: Real>(kernel: LoopKernel, order: usize) -> Result<PowerSeries<T>> {
    if order < 2 {
        return Err(Error::parameter("order", "the loop series needs order >= 2"));
    }
    let a2 = omega_power::<T>(2);
    let a4 = omega_power::<T>(4);
    let mut radicand = PowerSeries::zero(order);
    radicand.coeffs[0] = Complex::new(T::one(), T::zero());
    radicand.coeffs[2] = a2 * lit::<T>(-2.0 / 3.0);
    if order >= 4 {
        radicand.coeffs[4] = a4;
    }
    let root = radicand.sqrt()?;
    let prefactor = Complex::new(sqrt3::<T>() / lit(2.0), T::zero()) / a2;
    let third = lit::<T>(1.0 / 3.0);
    let mut g = PowerSeries::zero(order);
    for k in 1..=order {
        let u = if k == 2 { a2 } else { Complex::zero() };
        let bracket = match kernel {
            LoopKernel::Walk => u + root.coeffs[k],
            LoopKernel::Published => u * third - root.coeffs[k],
        };
        g.coeffs[k] = prefactor * bracket;
    }
    // The constant terms cancel exactly; odd terms vanish identically.
    for k in (1..=order).step_by(2) {
        g.coeffs[k] = Complex::zero();
    }
    Ok(g)
}

/// Level-drop generating function `ĥ₁ = (a√3/2)z − (a/2)ĝ/z` to order `order ≥ 1`.
pub fn level_drop_gf<T: Real>(kernel: LoopKernel, order: usize) -> Result<PowerSeries<T>> {
    let g = loop_gf::<T>(kernel, (order + 1).max(2))?;
    Ok(level_drop_from_loop(&g).truncate(order))
}

fn level_drop_from_loop<T: Real>(g: &PowerSeries<T>) -> PowerSeries<T> {
    let a = cube_root_of_unity::<T>();
    let half = lit::<T>(0.5);
    let mut h = g.div_z().expect("ĝ has no constant term").scale(-a * half);
    if h.order() >= 1 {
        h.coeffs[1] = h.coeffs[1] + a * (sqrt3::<T>() * half);
    }
    h
}

/// First-passage generating function `ĥ_n = ĥ₁ⁿ` from level `n` to the root.
pub fn first_passage_gf<T: Real>(
    kernel: LoopKernel,
    n: usize,
    order: usize,
) -> Result<PowerSeries<T>> {
    Ok(level_drop_gf::<T>(kernel, order)?.pow(n))
}

/// Root-to-root generating function `Ĝ = 1/(1 − ĝ)`.
pub fn multi_loop_gf<T: Real>(kernel: LoopKernel, order: usize) -> Result<PowerSeries<T>> {
    let g = loop_gf::<T>(kernel, order.max(2))?;
    Ok((&PowerSeries::one(g.order()) - &g).inv()?.truncate(order))
}

/// Root amplitude generating function `Ĥ_n = ĥ₁ⁿ / (1 − ĝ)`.
pub fn root_amplitude_gf<T: Real>(
    kernel: LoopKernel,
    n: usize,
    order: usize,
) -> Result<PowerSeries<T>> {
    let g_ext = loop_gf::<T>(kernel, (order + 1).max(2))?;
    let g = g_ext.clone().truncate(order.max(1));
    let resolvent = (&PowerSeries::one(g.order()) - &g).inv()?;
    let h = level_drop_from_loop(&g_ext).truncate(order);
    Ok(h.pow(n).mul(&resolvent).truncate(order))
}

/// `Ĥ_n` evaluated as `(−a/2)ⁿ·[(ĝ − √3z²)/z]ⁿ / (1 − ĝ)`.
pub fn root_amplitude_gf_factored<T: Real>(
    kernel: LoopKernel,
    n: usize,
    order: usize,
) -> Result<PowerSeries<T>> {
    let g_ext = loop_gf::<T>(kernel, (order + 1).max(2))?;
    let shifted = &g_ext - &PowerSeries::monomial(2, Complex::new(sqrt3::<T>(), T::zero()), g_ext.order());
    let inner = shifted.div_z()?.truncate(order);
    let factor = -cube_root_of_unity::<T>() * lit::<T>(0.5);
    let g = g_ext.truncate(order.max(1));
    let resolvent = (&PowerSeries::one(g.order()) - &g).inv()?;
    Ok(inner
        .pow(n)
        .scale(factor.powu(n as u32))
        .mul(&resolvent)
        .truncate(order))
}

/// `H_n(t)` for `t = 0..=t_max` by coefficient extraction from `Ĥ_n`.
pub fn amplitude_sequence<T: Real>(
    kernel: LoopKernel,
    n: usize,
    t_max: usize,
) -> Result<Vec<Complex<T>>> {
    Ok(root_amplitude_gf::<T>(kernel, n, t_max)?.into_coeffs())
}
