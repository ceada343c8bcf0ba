use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the numerics are generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Tolerance for unitarity and stochasticity checks at this precision.
    fn check_tol() -> Self;
}

impl Real for f64 {
    fn check_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn check_tol() -> Self {
        1e-5
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

#[inline]
pub fn sqrt3<T: Real>() -> T {
    lit::<T>(3.0).sqrt()
}

/// `e^{2πi/3}`, stored as the exact pair `(-1/2, √3/2)`.
#[inline]
pub fn cube_root_of_unity<T: Real>() -> Complex<T> {
    Complex::new(lit(-0.5), sqrt3::<T>() / lit(2.0))
}

/// `a^k` for the cube root of unity `a`, reduced modulo 3 so no error builds up.
pub fn omega_power<T: Real>(k: i64) -> Complex<T> {
    match k.rem_euclid(3) {
        0 => Complex::new(T::one(), T::zero()),
        1 => cube_root_of_unity(),
        _ => cube_root_of_unity::<T>().conj(),
    }
}

/// Neumaier-compensated sum.
pub fn neumaier_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_identities() {
        let a = cube_root_of_unity::<f64>();
        let one = Complex::new(1.0, 0.0);
        assert!((one + a + a * a).norm() < 1e-15);
        assert!((a * a * a - one).norm() < 1e-15);
        assert_eq!(omega_power::<f64>(2), a.conj());
        assert_eq!(omega_power::<f64>(-1), a.conj());
        assert_eq!(omega_power::<f64>(4), a);
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut v = vec![1.0f64];
        v.extend(std::iter::repeat_n(1e-17, 1000));
        let s = neumaier_sum(v);
        assert!((s - (1.0 + 1e-14)).abs() < 1e-18);
    }
}
