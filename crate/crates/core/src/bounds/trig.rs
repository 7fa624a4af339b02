use crate::cf::CharFn;
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::{binomial, Scalar};
use crate::trigpoly::{central_difference_unchecked, sin_power_coeffs, TrigPoly, MAX_SIN_POWER};

use super::{require_positive, BoundOptions, MethodKind, PolyOrK, Side, TailBound};

/// Central and upper values of a trigonometric bound before clamping.
struct TrigParts<T> {
    central: T,
    upper: T,
    budget: T,
}

/// `(2 / (s a0)) * [a0 s + sum_j a_j int Re f(ju) + sum_j b_j int Im f(ju)]`,
/// each integral shifted by its error estimate in the direction of its
/// coefficient's sign.
fn theorem1_parts<T: Scalar>(
    cf: &CharFn<T>,
    p: &TrigPoly<T>,
    s: T,
    opts: &BoundOptions<T>,
) -> Result<TrigParts<T>> {
    let a0 = p.a(0);
    let mut central = a0 * s;
    let mut upper = a0 * s;
    let mut err_sum = T::zero();
    let mut accumulate = |coeff: T, part: fn(&CharFn<T>, T) -> T, j: usize| -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        let freq = T::lit(j as f64);
        let q = integrate(|u| part(cf, freq * u), T::zero(), s, opts.rel_tol, opts.abs_tol)?;
        central = central + coeff * q.value;
        upper = upper + coeff * q.value + coeff.abs() * q.error_estimate;
        err_sum = err_sum + coeff.abs() * q.error_estimate;
        Ok(())
    };
    for j in 1..p.cos_coeffs().len() {
        accumulate(p.a(j), |cf, t| cf.re(t), j)?;
    }
    for j in 1..=p.sin_coeffs().len() {
        accumulate(p.b(j), |cf, t| cf.im(t), j)?;
    }
    let scale = T::lit(2.0) / (s * a0);
    Ok(TrigParts {
        central: scale * central,
        upper: scale * upper,
        budget: scale * err_sum,
    })
}

/// Two-sided bound on `P(|X| > 2 pi / s)` from a non-negative
/// trigonometric polynomial `p`.
pub fn theorem1_bound<T: Scalar>(
    cf: &CharFn<T>,
    p: &TrigPoly<T>,
    s: T,
    opts: &BoundOptions<T>,
) -> Result<TailBound<T>> {
    require_positive("s", s)?;
    let a0 = p.a(0);
    if !(a0 > T::zero()) {
        return Err(Error::DivisionDomain { a0: a0.as_f64() });
    }
    if !opts.allow_unchecked_poly {
        let check = p.check_nonnegative(opts.nonneg_tol);
        if !check.ok {
            return Err(Error::RejectedPolynomial { min_estimate: check.min_estimate.as_f64() });
        }
    }
    let parts = theorem1_parts(cf, p, s, opts)?;
    TailBound::new(
        MethodKind::Theorem1,
        Side::TwoSided,
        T::TAU() / s,
        s,
        parts.upper,
        parts.budget,
        Some(PolyOrK::Poly(p.clone())),
    )
}

/// Both computation routes of the `sin^{2k}` bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Corollary1Forms<T> {
    /// The authoritative bound, via the cosine expansion of `sin^{2k}`.
    pub bound: TailBound<T>,
    /// Central (error-free) value via the cosine expansion.
    pub expansion_value: T,
    /// Central value via `(2 (-1)^k / (s C(2k,k))) int_0^s D_{2u}(Re f, 0) du`.
    pub difference_value: T,
    /// Combined quadrature error of both routes, in bound units.
    pub budget: T,
}

impl<T: Scalar> Corollary1Forms<T> {
    pub fn gap(&self) -> T {
        (self.expansion_value - self.difference_value).abs()
    }
}

fn check_k(k: u32) -> Result<()> {
    if (1..=MAX_SIN_POWER).contains(&k) {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!("k must lie in 1..={MAX_SIN_POWER}, got {k}")))
    }
}

/// Computes the `sin^{2k}` bound both ways without asserting agreement.
pub fn corollary1_forms<T: Scalar>(
    cf: &CharFn<T>,
    k: u32,
    s: T,
    opts: &BoundOptions<T>,
) -> Result<Corollary1Forms<T>> {
    check_k(k)?;
    require_positive("s", s)?;
    let p = sin_power_coeffs::<T>(k)?;
    let parts = theorem1_parts(cf, &p, s, opts)?;

    // sin^{2k}(x) = ((-1)^k / 4^k) sum_j (-1)^j C(2k,j) exp(i (2j - 2k) x),
    // so the difference step is 2u.
    let re = |t: T| cf.re(t);
    let two = T::lit(2.0);
    let q = integrate(
        |u| central_difference_unchecked(&re, two * u, k),
        T::zero(),
        s,
        opts.rel_tol,
        opts.abs_tol,
    )?;
    let sign = if k.is_multiple_of(2) { T::one() } else { -T::one() };
    let factor = two * sign / (s * binomial::<T>(2 * k, k));
    let difference_value = factor * q.value;

    let bound = TailBound::new(
        MethodKind::Corollary1,
        Side::TwoSided,
        T::TAU() / s,
        s,
        parts.upper,
        parts.budget,
        Some(PolyOrK::K(k)),
    )?;
    Ok(Corollary1Forms {
        bound,
        expansion_value: parts.central,
        difference_value,
        budget: parts.budget + factor.abs() * q.error_estimate,
    })
}

/// Two-sided bound on `P(|X| > 2 pi / s)` with the kernel `sin^{2k}`.
///
/// Fails with [`Error::InternalConsistency`] if the expansion and
/// central-difference routes disagree beyond `consistency_tol` plus their
/// quadrature budgets.
pub fn corollary1_bound<T: Scalar>(
    cf: &CharFn<T>,
    k: u32,
    s: T,
    opts: &BoundOptions<T>,
) -> Result<TailBound<T>> {
    let forms = corollary1_forms(cf, k, s, opts)?;
    let allowed = opts.consistency_tol + forms.budget;
    if forms.gap() > allowed {
        return Err(Error::InternalConsistency(format!(
            "sin^{} bound routes disagree at s = {s}: {} vs {} (allowed {})",
            2 * k,
            forms.expansion_value,
            forms.difference_value,
            allowed
        )));
    }
    Ok(forms.bound)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantEntry<T> {
    pub u: T,
    pub difference: T,
    pub majorant: T,
    /// `majorant - |difference|`.
    pub slack: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorantReport<T> {
    pub k: u32,
    pub entries: Vec<MajorantEntry<T>>,
    pub worst_slack: T,
    pub passed: bool,
}

/// Checks `|D_u^{(2k)}(Re f, 0)| <= u^{2k} E X^{2k}` on `u_grid`, allowing
/// `1e-10` of rounding.
pub fn remark1_majorant_check<T: Scalar>(
    cf: &CharFn<T>,
    k: u32,
    u_grid: &[T],
) -> Result<MajorantReport<T>> {
    check_k(k)?;
    let moment = cf.even_moment(k).ok_or_else(|| {
        Error::Unsupported(format!("{} carries no moment E X^{}", cf.label(), 2 * k))
    })?;
    let slack_tol = T::lit(1e-10);
    let re = |t: T| cf.re(t);
    let mut entries = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        require_positive("u", u)?;
        let difference = central_difference_unchecked(&re, u, k);
        let majorant = u.powi(2 * k as i32) * moment;
        entries.push(MajorantEntry { u, difference, majorant, slack: majorant - difference.abs() });
    }
    let worst_slack = entries.iter().map(|e| e.slack).fold(T::infinity(), T::min);
    Ok(MajorantReport { k, passed: worst_slack >= -slack_tol, entries, worst_slack })
}
