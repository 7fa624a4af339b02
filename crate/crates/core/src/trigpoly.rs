//! Real trigonometric polynomials
//! `P(theta) = sum_{j=0}^k a_j cos(j theta) + sum_{j=1}^k b_j sin(j theta)`
//! and the finite-difference helpers built on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::golden_section_min;
use crate::scalar::{binomial, Scalar};

/// Largest `k` accepted by [`sin_power_coeffs`]; binomials stay exact in `f64`.
pub const MAX_SIN_POWER: u32 = 15;

/// Grid points per unit of degree used by [`TrigPoly::check_nonnegative`].
const GRID_PER_DEGREE: usize = 1024;

/// Coefficients `a_0..a_k` (cosine) and `b_1..b_k` (sine).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly<T> {
    cos_coeffs: Vec<T>,
    sin_coeffs: Vec<T>,
}

/// Outcome of a non-negativity probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonnegReport<T> {
    pub min_estimate: T,
    pub argmin: T,
    pub ok: bool,
}

impl<T: Scalar> TrigPoly<T> {
    /// `cos_coeffs[j]` multiplies `cos(j theta)`; `sin_coeffs[j - 1]`
    /// multiplies `sin(j theta)`. An empty cosine vector means `a_0 = 0`.
    pub fn new(cos_coeffs: Vec<T>, sin_coeffs: Vec<T>) -> Result<Self> {
        if cos_coeffs.iter().chain(&sin_coeffs).any(|c| !c.is_finite()) {
            return Err(Error::ParameterDomain(
                "trigonometric polynomial coefficients must be finite".into(),
            ));
        }
        Ok(TrigPoly { cos_coeffs, sin_coeffs })
    }

    pub fn cosine(cos_coeffs: Vec<T>) -> Result<Self> {
        Self::new(cos_coeffs, Vec::new())
    }

    pub fn cos_coeffs(&self) -> &[T] {
        &self.cos_coeffs
    }

    pub fn sin_coeffs(&self) -> &[T] {
        &self.sin_coeffs
    }

    /// `a_j`, zero past the stored length.
    pub fn a(&self, j: usize) -> T {
        self.cos_coeffs.get(j).copied().unwrap_or_else(T::zero)
    }

    /// `b_j` for `j >= 1`, zero past the stored length.
    pub fn b(&self, j: usize) -> T {
        if j == 0 {
            return T::zero();
        }
        self.sin_coeffs.get(j - 1).copied().unwrap_or_else(T::zero)
    }

    /// Highest frequency with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        let cos_deg = self.cos_coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let sin_deg = self.sin_coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        cos_deg.max(sin_deg)
    }

    pub fn eval(&self, theta: T) -> T {
        let mut acc = self.a(0);
        for (j, &a) in self.cos_coeffs.iter().enumerate().skip(1) {
            acc = acc + a * (T::lit(j as f64) * theta).cos();
        }
        for (j, &b) in self.sin_coeffs.iter().enumerate() {
            acc = acc + b * (T::lit((j + 1) as f64) * theta).sin();
        }
        acc
    }

    /// Dense sampling over one period followed by golden-section refinement
    /// around the grid minimum.
    pub fn check_nonnegative(&self, tol: T) -> NonnegReport<T> {
        let n = GRID_PER_DEGREE * (self.degree() + 1);
        let two_pi = T::TAU();
        let step = two_pi / T::lit(n as f64);
        let (mut argmin, mut min) = (T::zero(), self.eval(T::zero()));
        for i in 1..n {
            let theta = step * T::lit(i as f64);
            let v = self.eval(theta);
            if v < min {
                min = v;
                argmin = theta;
            }
        }
        let width = T::lit(1e-10).max(T::epsilon() * T::lit(16.0));
        let refined = golden_section_min(|x| self.eval(x), argmin - step, argmin + step, width, 200);
        if refined.value < min {
            min = refined.value;
            argmin = refined.x;
        }
        NonnegReport { min_estimate: min, argmin, ok: min >= -tol }
    }
}

impl<T: Scalar> fmt::Display for TrigPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[T]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "cos=[{}] sin=[{}]", join(&self.cos_coeffs), join(&self.sin_coeffs))
    }
}

/// Expansion of `sin^{2k}(theta)` as a cosine polynomial of degree `2k`:
/// `a_0 = C(2k,k)/4^k`, and the coefficient of `cos(2(k-j) theta)` is
/// `2 (-1)^{k-j} C(2k,j) / 4^k` for `j < k`.
pub fn sin_power_coeffs<T: Scalar>(k: u32) -> Result<TrigPoly<T>> {
    if !(1..=MAX_SIN_POWER).contains(&k) {
        return Err(Error::ParameterDomain(format!(
            "sin power k must lie in 1..={MAX_SIN_POWER}, got {k}"
        )));
    }
    let scale = T::lit(4f64.powi(k as i32));
    let mut a = vec![T::zero(); 2 * k as usize + 1];
    a[0] = binomial::<T>(2 * k, k) / scale;
    for j in 0..k {
        let sign = if (k - j).is_multiple_of(2) { T::one() } else { -T::one() };
        a[2 * (k - j) as usize] = T::lit(2.0) * sign * binomial::<T>(2 * k, j) / scale;
    }
    TrigPoly::cosine(a)
}

/// Central difference of order `order` (even, at least 2) and step `u` at
/// the origin: `sum_{j=0}^{2k} (-1)^j C(2k,j) g((j-k) u)`.
pub fn central_difference<T, G>(g: G, u: T, order: u32) -> Result<T>
where
    T: Scalar,
    G: Fn(T) -> T,
{
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::ParameterDomain(format!(
            "central difference order must be even and at least 2, got {order}"
        )));
    }
    Ok(central_difference_unchecked(&g, u, order / 2))
}

/// `central_difference` of order `2k`, without validation.
pub(crate) fn central_difference_unchecked<T, G>(g: &G, u: T, k: u32) -> T
where
    T: Scalar,
    G: Fn(T) -> T + ?Sized,
{
    let n = 2 * k;
    let mut acc = T::zero();
    for j in 0..=n {
        let w = binomial::<T>(n, j);
        let term = w * g(T::lit(f64::from(j) - f64::from(k)) * u);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn poly(a: &[f64]) -> TrigPoly<f64> {
        TrigPoly::cosine(a.to_vec()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(&[1.0, -1.0]).eval(0.0), 0.0);
        assert_abs_diff_eq!(poly(&[1.0, -1.0]).eval(PI), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(poly(&[0.5, 0.0, -0.5]).eval(FRAC_PI_2), 1.0, epsilon = 1e-15);
        let p = TrigPoly::new(vec![1.0], vec![0.0, 2.0]).unwrap();
        assert_abs_diff_eq!(p.eval(PI / 4.0), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn degree_ignores_trailing_zeros() {
        assert_eq!(poly(&[1.0, -1.0, 0.0]).degree(), 1);
        assert_eq!(TrigPoly::new(vec![1.0], vec![0.0, 0.0, 0.5]).unwrap().degree(), 3);
        assert_eq!(poly(&[]).degree(), 0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(TrigPoly::new(vec![1.0, f64::NAN], vec![]).is_err());
        assert!(TrigPoly::new(vec![1.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn nonnegativity_examples() {
        let r = poly(&[1.0, -1.0]).check_nonnegative(1e-9);
        assert!(r.ok);
        assert_abs_diff_eq!(r.min_estimate, 0.0, epsilon = 1e-12);

        let r = poly(&[1.0, 2.0]).check_nonnegative(1e-9);
        assert!(!r.ok);
        assert_abs_diff_eq!(r.min_estimate, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.argmin, PI, epsilon = 1e-5);

        let r = sin_power_coeffs::<f64>(3).unwrap().check_nonnegative(1e-9);
        assert!(r.ok);
        assert!(r.min_estimate.abs() < 1e-12);
    }

    #[test]
    fn nonnegativity_finds_narrow_dip() {
        // 1 - cos(theta - 1) with a sine part; minimum 0 at theta = 1.
        let p = TrigPoly::new(vec![1.0, -(1.0f64).cos()], vec![-(1.0f64).sin()]).unwrap();
        let r = p.check_nonnegative(1e-12);
        assert!(r.ok);
        assert_abs_diff_eq!(r.argmin, 1.0, epsilon = 1e-5);
        let shifted = TrigPoly::new(vec![0.999, -(1.0f64).cos()], vec![-(1.0f64).sin()]).unwrap();
        assert!(!shifted.check_nonnegative(1e-9).ok);
    }

    #[test]
    fn sin_power_small_k() {
        assert_eq!(sin_power_coeffs::<f64>(1).unwrap().cos_coeffs(), &[0.5, 0.0, -0.5]);
        assert_eq!(
            sin_power_coeffs::<f64>(2).unwrap().cos_coeffs(),
            &[0.375, 0.0, -0.5, 0.0, 0.125]
        );
        assert!(sin_power_coeffs::<f64>(0).is_err());
        assert!(sin_power_coeffs::<f64>(16).is_err());
    }

    #[test]
    fn sin_power_matches_direct_power() {
        // Deterministic pseudo-random angles.
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for k in 1..=MAX_SIN_POWER {
            let p = sin_power_coeffs::<f64>(k).unwrap();
            assert_eq!(p.degree(), 2 * k as usize);
            for _ in 0..64 {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let theta = (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 * PI;
                assert_abs_diff_eq!(p.eval(theta), theta.sin().powi(2 * k as i32), epsilon = 1e-12);
            }
            assert_abs_diff_eq!(p.eval(FRAC_PI_2), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn central_difference_examples() {
        let cauchy = |t: f64| (-t.abs()).exp();
        let v = central_difference(cauchy, 1.0, 2).unwrap();
        assert_abs_diff_eq!(v, 2.0 * (-1.0f64).exp() - 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v, -1.264241, epsilon = 1e-6);

        for order in [2, 4, 6, 12] {
            assert_eq!(central_difference(|_| 1.0, 0.37, order).unwrap(), 0.0);
        }
        assert_abs_diff_eq!(central_difference(|t: f64| t * t, 0.5, 2).unwrap(), 0.5, epsilon = 1e-15);
        // Fourth difference of t^4 is 4! u^4.
        assert_abs_diff_eq!(
            central_difference(|t: f64| t.powi(4), 0.5, 4).unwrap(),
            24.0 * 0.0625,
            epsilon = 1e-13
        );
    }

    #[test]
    fn central_difference_order_validated() {
        assert!(central_difference(|t: f64| t, 1.0, 3).is_err());
        assert!(central_difference(|t: f64| t, 1.0, 0).is_err());
    }
}
