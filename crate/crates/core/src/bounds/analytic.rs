use std::cell::Cell;

use crate::cf::CharFn;
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::Scalar;

use super::{require_positive, require_probability, BoundOptions, MethodKind, Side, TailBound};

/// `sinh(x)/x - 1` for `x > 0`, series below 0.5.
fn sinhc_minus_one<T: Scalar>(x: T) -> T {
    if x < T::lit(0.5) {
        let x2 = x * x;
        let mut term = x2 / T::lit(6.0);
        let mut acc = term;
        let mut n = 2.0;
        while term > acc * T::epsilon() {
            term = term * x2 / T::lit((2.0 * n) * (2.0 * n + 1.0));
            acc = acc + term;
            n += 1.0;
        }
        acc
    } else {
        x.sinh() / x - T::one()
    }
}

/// `exp(x) - x - 1` for `x > 0`, series below 0.01.
fn exp_excess<T: Scalar>(x: T) -> T {
    if x < T::lit(0.01) {
        let mut term = x * x / T::lit(2.0);
        let mut acc = term;
        let mut n = 3.0;
        while term > acc * T::epsilon() {
            term = term * x / T::lit(n);
            acc = acc + term;
            n += 1.0;
        }
        acc
    } else {
        x.exp_m1() - x
    }
}

fn require_imag_axis<T: Scalar>(cf: &CharFn<T>, method: &str) -> Result<()> {
    if cf.has_imag_axis() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{method} needs imaginary-axis values of the characteristic function, {} has none",
            cf.label()
        )))
    }
}

fn check_exponent<T: Scalar>(a: T, s: T) -> Result<()> {
    if a * s > T::lit(T::EXP_ARG_CAP) {
        Err(Error::Overflow(format!(
            "s * A = {} exceeds {}; use a smaller s",
            a * s,
            T::EXP_ARG_CAP
        )))
    } else {
        Ok(())
    }
}

fn overflow_hint(e: Error) -> Error {
    match e {
        Error::IntegrandDomain { at } => Error::Overflow(format!(
            "imaginary-axis value is not finite at u = {at}; use a smaller s"
        )),
        other => other,
    }
}

/// Two-sided exponential bound
/// `P(|X| > A) <= int_0^s ((f(iu) + f(-iu))/2 - 1) du / (s (sinh(As)/(As) - 1))`
/// for a CF analytic in `|t| < R`, `0 < s < R`.
pub fn theorem2_bound<T: Scalar>(
    cf: &CharFn<T>,
    a: T,
    s: T,
    opts: &BoundOptions<T>,
) -> Result<TailBound<T>> {
    require_positive("A", a)?;
    require_positive("s", s)?;
    let radius = cf.analyticity_radius();
    if !(s < radius) {
        return Err(Error::AnalyticityDomain {
            s: s.as_f64(),
            limit: radius.as_f64(),
            what: "analyticity radius R",
        });
    }
    require_imag_axis(cf, "theorem2")?;
    check_exponent(a, s)?;

    let denom_core = sinhc_minus_one(a * s);
    let guard = T::lit(1e-300).max(T::min_positive_value());
    if !(denom_core > guard) {
        return Err(Error::ParameterDomain(format!(
            "A * s = {} is too small for a usable denominator",
            a * s
        )));
    }
    if !denom_core.is_finite() {
        return Err(Error::Overflow(format!("sinh(A s) overflowed at A s = {}", a * s)));
    }

    let lowest = Cell::new(T::infinity());
    let half = T::lit(0.5);
    let q = integrate(
        |u| {
            let plus = cf.imag_axis_eval(u).unwrap_or_else(T::nan);
            let minus = cf.imag_axis_eval(-u).unwrap_or_else(T::nan);
            let v = half * ((plus - T::one()) + (minus - T::one()));
            if v < lowest.get() {
                lowest.set(v);
            }
            v
        },
        T::zero(),
        s,
        opts.rel_tol,
        opts.abs_tol,
    )
    .map_err(overflow_hint)?;
    if lowest.get() < T::lit(-1e-12) {
        return Err(Error::InternalConsistency(format!(
            "E cosh(uX) - 1 evaluated to {} < 0 on [0, {s}]",
            lowest.get()
        )));
    }

    let denom = s * denom_core;
    TailBound::new(
        MethodKind::Theorem2,
        Side::TwoSided,
        a,
        s,
        q.upper() / denom,
        q.error_estimate / denom,
        None,
    )
}

/// Right-tail bound
/// `P(X > A) <= A / (e^{sA} - sA - 1) * int_0^s (f(-iu) + c - 1) du`
/// with `c = F(+0) = P(X <= 0)`, valid for `0 < s < b-`.
///
/// `c` defaults to the CF's metadata, and to 1 when unknown (the integrand
/// grows with `c`, so 1 is always safe).
pub fn theorem3_right<T: Scalar>(
    cf: &CharFn<T>,
    a: T,
    s: T,
    f0_plus: Option<T>,
    opts: &BoundOptions<T>,
) -> Result<TailBound<T>> {
    require_positive("A", a)?;
    require_positive("s", s)?;
    let strip = cf.lower_strip();
    if !(s < strip) {
        return Err(Error::AnalyticityDomain {
            s: s.as_f64(),
            limit: strip.as_f64(),
            what: "lower strip width b",
        });
    }
    let c = f0_plus.or(cf.prob_nonpositive()).unwrap_or_else(T::one);
    require_probability("F(+0)", c)?;
    one_sided(cf, a, s, opts, Side::Right, move |cf, u| {
        cf.imag_axis_eval(-u).unwrap_or_else(T::nan) + c - T::one()
    })
}

/// Left-tail bound
/// `P(X < -A) <= A / (e^{sA} - sA - 1) * int_0^s (f(iu) - c) du`
/// with `c = F(-0) = P(X < 0)`, valid for `0 < s < b+`.
///
/// `c` defaults to the CF's metadata, and to 0 when unknown.
pub fn theorem3_left<T: Scalar>(
    cf: &CharFn<T>,
    a: T,
    s: T,
    f0_minus: Option<T>,
    opts: &BoundOptions<T>,
) -> Result<TailBound<T>> {
    require_positive("A", a)?;
    require_positive("s", s)?;
    let strip = cf.upper_strip();
    if !(s < strip) {
        return Err(Error::AnalyticityDomain {
            s: s.as_f64(),
            limit: strip.as_f64(),
            what: "upper strip width b",
        });
    }
    let c = f0_minus.or(cf.prob_negative()).unwrap_or_else(T::zero);
    require_probability("F(-0)", c)?;
    one_sided(cf, a, s, opts, Side::Left, move |cf, u| {
        cf.imag_axis_eval(u).unwrap_or_else(T::nan) - c
    })
}

fn one_sided<T, G>(
    cf: &CharFn<T>,
    a: T,
    s: T,
    opts: &BoundOptions<T>,
    side: Side,
    integrand: G,
) -> Result<TailBound<T>>
where
    T: Scalar,
    G: Fn(&CharFn<T>, T) -> T,
{
    require_imag_axis(cf, "theorem3")?;
    check_exponent(a, s)?;
    let denom = exp_excess(s * a);
    if !(denom > T::zero()) {
        return Err(Error::ParameterDomain(format!(
            "A * s = {} is too small for a usable denominator",
            a * s
        )));
    }
    let q = integrate(|u| integrand(cf, u), T::zero(), s, opts.rel_tol, opts.abs_tol)
        .map_err(overflow_hint)?;
    let factor = a / denom;
    TailBound::new(
        MethodKind::Theorem3,
        side,
        a,
        s,
        factor * q.upper(),
        factor * q.error_estimate,
        None,
    )
}
