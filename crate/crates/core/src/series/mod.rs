//! Truncated formal power series with complex coefficients.
//!
//! A series of order `T` stores the coefficients of `z^0 ..= z^T`. Binary
//! operations truncate to the smaller of the two orders.

mod generating;
mod narayana;

pub use generating::{
    amplitude_sequence, first_passage_gf, level_drop_gf, loop_gf, multi_loop_gf,
    root_amplitude_gf, root_amplitude_gf_factored, LoopKernel,
};
pub use narayana::{binomial, catalan, g_combinatorial, narayana};

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> PowerSeries<T> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, Complex::new(T::one(), T::zero()), order)
    }

    /// `c·z^k` truncated at `order`.
    pub fn monomial(k: usize, c: Complex<T>, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Coefficients of `z^0, z^1, ...`; the order is `len − 1`.
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::parameter("coeffs", "need at least the constant term"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`, zero beyond the order.
    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Truncates to a lower order (no-op if already lower).
    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Complex::zero(); order + 1];
        for (i, &x) in self.coeffs.iter().take(order + 1).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in other.coeffs[..=order - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = out[i + j] + x * y;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Principal square root; the constant term must be 1.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if (a0 - Complex::new(T::one(), T::zero())).norm() > T::epsilon() {
            return Err(Error::Branch(format!("{a0}")));
        }
        let order = self.order();
        let two = T::one() + T::one();
        let mut s = vec![Complex::zero(); order + 1];
        s[0] = Complex::new(T::one(), T::zero());
        for k in 1..=order {
            let mut acc = self.coeffs[k];
            for i in 1..k {
                acc = acc - s[i] * s[k - i];
            }
            s[k] = acc / two;
        }
        Ok(Self { coeffs: s })
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::SingularSeries);
        }
        let order = self.order();
        let inv0 = Complex::new(T::one(), T::zero()) / a0;
        let mut r = vec![Complex::zero(); order + 1];
        r[0] = inv0;
        for k in 1..=order {
            let mut acc: Complex<T> = Complex::zero();
            for j in 1..=k {
                let x = self.coeffs[j];
                if !x.is_zero() {
                    acc = acc + x * r[k - j];
                }
            }
            r[k] = -acc * inv0;
        }
        Ok(Self { coeffs: r })
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: usize) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact division by `z`; the constant term must vanish. Order drops by one.
    pub fn div_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(format!(
                "cannot divide by z: constant term is {}",
                self.coeffs[0]
            )));
        }
        if self.order() == 0 {
            return Err(Error::Domain("cannot divide an order-0 series by z".into()));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplication by `z`, keeping the order.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Complex::zero());
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        Self { coeffs }
    }

    /// Substitutes `z ↦ c·z`.
    pub fn rescale_variable(&self, c: Complex<T>) -> Self {
        let mut p = Complex::new(T::one(), T::zero());
        let coeffs = self
            .coeffs
            .iter()
            .map(|&x| {
                let y = x * p;
                p = p * c;
                y
            })
            .collect();
        Self { coeffs }
    }

    /// Largest coefficient modulus of `self − other` over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| (*x - *y).norm())
            .fold(T::zero(), T::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }
}

impl<T: Real> Add for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn add(self, rhs: Self) -> PowerSeries<T> {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl<T: Real> Sub for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn sub(self, rhs: Self) -> PowerSeries<T> {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl<T: Real> Mul for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn mul(self, rhs: Self) -> PowerSeries<T> {
        PowerSeries::mul(self, rhs)
    }
}

impl<T: Real> Neg for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn neg(self) -> PowerSeries<T> {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|&x| -x).collect(),
        }
    }
}

/// Cauchy product truncated to the smaller order.
pub fn series_mul<T: Real>(a: &PowerSeries<T>, b: &PowerSeries<T>) -> PowerSeries<T> {
    a.mul(b)
}

/// Principal square root anchored at constant term 1.
pub fn series_sqrt<T: Real>(a: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    a.sqrt()
}

pub fn series_inv<T: Real>(a: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    a.inv()
}
