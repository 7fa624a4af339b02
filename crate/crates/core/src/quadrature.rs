//! Globally adaptive Gauss–Kronrod (7/15) integration.
//!
//! Each panel is integrated with the 15-point Kronrod rule; the error
//! estimate is the scaled difference against the embedded 7-point Gauss
//! rule. The panel with the largest estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol * |value|)`. Panels whose
//! estimate is already at rounding level are not split further, so a noisy
//! integrand terminates with an honest (larger) error estimate instead of
//! exhausting the budget.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Evaluation budget for a single integral.
pub const MAX_EVALUATIONS: usize = 1_000_000;

/// Default relative tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Default absolute tolerance.
pub const DEFAULT_ABS_TOL: f64 = 1e-13;

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes KRONROD_NODES[1], [3], [5], [7].
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const RULE_SIZE: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
}

impl<T: Scalar> QuadResult<T> {
    /// `value + error_estimate`.
    pub fn upper(&self) -> T {
        self.value + self.error_estimate
    }

    /// `value - error_estimate`.
    pub fn lower(&self) -> T {
        self.value - self.error_estimate
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Panel<T> {}

impl<T: Scalar> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.lo.partial_cmp(&self.lo).unwrap_or(Ordering::Equal))
    }
}

/// Applies the 7/15 pair on `[lo, hi]`. Returns the panel and whether its
/// error estimate is already at rounding level.
fn kronrod_panel<T, F>(g: &mut F, lo: T, hi: T) -> Result<(Panel<T>, bool)>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let abs_half = half_len.abs();
    let mut call = |x: T| -> Result<T> {
        let v = g(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::IntegrandDomain { at: x.as_f64() })
        }
    };

    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    let fc = call(center)?;
    let mut res_gauss = fc * T::lit(GAUSS_WEIGHTS[3]);
    let mut res_kronrod = fc * T::lit(KRONROD_WEIGHTS[7]);
    let mut res_abs = res_kronrod.abs();
    for j in 0..7 {
        let dx = half_len * T::lit(KRONROD_NODES[j]);
        let f1 = call(center - dx)?;
        let f2 = call(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(KRONROD_WEIGHTS[j]);
        res_kronrod = res_kronrod + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss = res_gauss + T::lit(GAUSS_WEIGHTS[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_kronrod * half;
    let mut res_asc = T::lit(KRONROD_WEIGHTS[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(KRONROD_WEIGHTS[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_kronrod * half_len;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut error = ((res_kronrod - res_gauss) * half_len).abs();
    if !res_asc.is_zero() && !error.is_zero() {
        let ratio = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * ratio.min(T::one());
    }
    let round_floor = T::lit(50.0) * T::epsilon() * res_abs;
    let at_rounding = error <= round_floor;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        error = error.max(round_floor);
    }
    Ok((Panel { lo, hi, value, error }, at_rounding))
}

/// Integrates `g` over `[lo, hi]`.
///
/// Tolerances below the type's rounding level are raised to
/// `50 * epsilon`.
pub fn integrate<T, F>(mut g: F, lo: T, hi: T, rel_tol: T, abs_tol: T) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::ParameterDomain(format!(
            "integration range [{lo}, {hi}] must be finite and ordered"
        )));
    }
    if !(rel_tol > T::zero() && abs_tol > T::zero()) {
        return Err(Error::ParameterDomain("quadrature tolerances must be positive".into()));
    }
    let rel_tol = rel_tol.max(T::lit(50.0) * T::epsilon());

    let mut evaluations = RULE_SIZE;
    let (first, first_done) = kronrod_panel(&mut g, lo, hi)?;
    let mut active = BinaryHeap::new();
    let mut settled: Vec<Panel<T>> = Vec::new();
    let mut value = first.value;
    let mut error = first.error;
    if first_done {
        settled.push(first);
    } else {
        active.push(first);
    }

    loop {
        if error <= abs_tol.max(rel_tol * value.abs()) {
            break;
        }
        let Some(worst) = active.pop() else { break };
        let mid = T::lit(0.5) * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            settled.push(worst);
            continue;
        }
        if evaluations + 2 * RULE_SIZE > MAX_EVALUATIONS {
            return Err(Error::Convergence { evaluations });
        }
        let (left, left_done) = kronrod_panel(&mut g, worst.lo, mid)?;
        let (right, right_done) = kronrod_panel(&mut g, mid, worst.hi)?;
        evaluations += 2 * RULE_SIZE;
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        for (panel, done) in [(left, left_done), (right, right_done)] {
            if done {
                settled.push(panel);
            } else {
                active.push(panel);
            }
        }
    }

    // Re-sum in a fixed order so the result does not depend on heap layout.
    let mut panels: Vec<Panel<T>> = settled.into_iter().chain(active).collect();
    panels.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
    let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
    let error_estimate = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
    Ok(QuadResult { value, error_estimate, evaluations })
}

/// Upper end of the integral's error band: `value + error_estimate`.
pub fn integrate_upper<T, F>(g: F, lo: T, hi: T, rel_tol: T, abs_tol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    integrate(g, lo, hi, rel_tol, abs_tol).map(|r| r.upper())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn q<F: FnMut(f64) -> f64>(g: F, lo: f64, hi: f64) -> QuadResult<f64> {
        integrate(g, lo, hi, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap()
    }

    #[test]
    fn linear_is_exact() {
        let r = q(|u| u, 0.0, 1.0);
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-15);
        assert!(r.error_estimate <= 1e-14);
        assert!(r.evaluations >= RULE_SIZE);
    }

    #[test]
    fn exponential_decay() {
        let r = q(|u| (-u).exp(), 0.0, 1.0);
        assert_abs_diff_eq!(r.value, 1.0 - (-1.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn gaussian_growth_matches_series() {
        // sum_{n>=1} 1 / (2^n n! (2n + 1))
        let mut series = 0.0;
        let mut term = 1.0;
        for n in 1..40 {
            term /= 2.0 * n as f64;
            series += term / (2 * n + 1) as f64;
        }
        let r = q(|u| (u * u / 2.0).exp() - 1.0, 0.0, 1.0);
        assert_abs_diff_eq!(r.value, series, epsilon = 1e-9);
        assert_abs_diff_eq!(r.value, 0.194957, epsilon = 1e-6);
    }

    #[test]
    fn upper_brackets_truth() {
        let up = integrate_upper(|u: f64| u, 0.0, 1.0, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap();
        assert!((0.5..=0.5 + 1e-12).contains(&up));
        let truth = 1.0 - (-1.0f64).exp();
        let up = integrate_upper(|u: f64| (-u).exp(), 0.0, 1.0, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap();
        assert!(up >= truth - 1e-16 && up <= truth + 1e-10, "{up}");
        let up = integrate_upper(f64::cos, 0.0, PI, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap();
        assert!((0.0..=1e-10).contains(&up), "{up}");
    }

    #[test]
    fn empty_range_is_zero() {
        let r = q(|u| u * u, 2.0, 2.0);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // -ln(1 - s) with s close to 1.
        let s = 1.0 - 1e-6;
        let r = q(|u| 1.0 / (1.0 - u), 0.0, s);
        assert_abs_diff_eq!(r.value, -(1e-6f64).ln(), epsilon = 1e-8);
    }

    #[test]
    fn oscillatory_integrand() {
        let r = q(|u| (30.0 * u).cos(), 0.0, 10.0);
        assert_abs_diff_eq!(r.value, (300.0f64).sin() / 30.0, epsilon = 1e-10);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let e = integrate(|u: f64| 1.0 / u, 0.0, 1.0, 1e-10, 1e-13).unwrap_err();
        assert!(matches!(e, Error::IntegrandDomain { .. }));
    }

    #[test]
    fn budget_exhaustion_is_a_convergence_error() {
        // Discontinuous everywhere at fine scale: never settles at 1e-15 tolerance.
        let e = integrate(|u: f64| ((u * 1e7).sin() * 1e3).signum(), 0.0, 1.0, 1e-15, 1e-15);
        assert!(matches!(e, Err(Error::Convergence { .. })), "{e:?}");
    }

    #[test]
    fn invalid_arguments() {
        assert!(integrate(|u: f64| u, 1.0, 0.0, 1e-10, 1e-13).is_err());
        assert!(integrate(|u: f64| u, 0.0, 1.0, 0.0, 1e-13).is_err());
        assert!(integrate(|u: f64| u, 0.0, f64::INFINITY, 1e-10, 1e-13).is_err());
    }

    #[test]
    fn single_precision_works() {
        let r = integrate(|u: f32| (-u).exp(), 0.0, 1.0, 1e-6, 1e-7).unwrap();
        assert!((r.value - (1.0 - (-1.0f32).exp())).abs() < 1e-6);
    }

    #[test]
    fn monotone_error_under_tighter_tolerance() {
        let integrands: Vec<Box<dyn Fn(f64) -> f64>> = vec![
            Box::new(|u| u.sin()),
            Box::new(|u| (-u * u).exp()),
            Box::new(|u| 1.0 / (1.0 + u * u)),
            Box::new(|u| (5.0 * u).cos() * (-u).exp()),
            Box::new(|u| u.sqrt()),
            Box::new(|u| (u * u / 2.0).exp() - 1.0),
            Box::new(|u| (-u.abs()).exp()),
            Box::new(|u| u.powi(7) - u.powi(3)),
            Box::new(|u| (1.0 + u).ln()),
            Box::new(|u| (20.0 * u).sin().powi(2)),
            Box::new(|u| 1.0 / (1.01 - u)),
            Box::new(|u| u.cosh() - 1.0),
            Box::new(|u| (u - 0.3).abs()),
            Box::new(|u| (-(2.0 * u).powf(0.5)).exp()),
            Box::new(|u| 1.0 - (-(2.0 * u).powf(1.5)).exp()),
            Box::new(|u| u.atan()),
            Box::new(|u| (3.0 * u).sin() / (1.0 + u)),
            Box::new(|u| (u * 10.0).tanh()),
            Box::new(|u| u.exp()),
            Box::new(|u| (u.sin() / u.max(1e-300)).max(0.0)),
        ];
        for (i, g) in integrands.iter().enumerate() {
            let loose = integrate(g, 0.0, 1.0, 1e-8, 1e-13).unwrap();
            let tight = integrate(g, 0.0, 1.0, 5e-9, 1e-13).unwrap();
            assert!(
                tight.error_estimate <= 2.0 * loose.error_estimate + 1e-15,
                "integrand {i}: {} vs {}",
                tight.error_estimate,
                loose.error_estimate
            );
        }
    }
}
