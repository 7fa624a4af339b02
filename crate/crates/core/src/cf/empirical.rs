use std::sync::Arc;

use num_complex::Complex;

use super::CharFn;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The characteristic function of the empirical measure of `samples`:
/// `f(t) = (1/n) sum exp(i t x_j)`.
///
/// The empirical measure is a genuine distribution, so every bound applies
/// to it verbatim. Its CF is entire, hence all analyticity limits are
/// infinite; `f(iu) = (1/n) sum exp(-u x_j)` may still overflow to `+inf`.
pub fn empirical_cf<T: Scalar>(samples: &[T]) -> Result<CharFn<T>> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteSample { index });
    }
    let xs: Arc<[T]> = samples.into();
    let n = T::lit(samples.len() as f64);
    let nonpos = T::lit(samples.iter().filter(|&&x| x <= T::zero()).count() as f64) / n;
    let neg = T::lit(samples.iter().filter(|&&x| x < T::zero()).count() as f64) / n;

    let for_eval = Arc::clone(&xs);
    let for_axis = Arc::clone(&xs);
    let inf = T::infinity();
    let mut cf = CharFn::new(format!("empirical(n={})", samples.len()), move |t: T| {
        let mut re = T::zero();
        let mut im = T::zero();
        for &x in for_eval.iter() {
            let (s, c) = (t * x).sin_cos();
            re = re + c;
            im = im + s;
        }
        Complex::new(re / n, im / n)
    })
    .with_imag_axis(move |u| {
        let total = for_axis.iter().fold(T::zero(), |acc, &x| acc + (-u * x).exp());
        total / n
    })
    .with_analyticity(inf, inf, inf)
    .with_mass_at_origin(nonpos, neg);

    for k in 1..=15u32 {
        let m = xs.iter().fold(T::zero(), |acc, &x| acc + x.powi(2 * k as i32)) / n;
        if m.is_finite() {
            cf = cf.with_even_moment(k, m);
        }
    }
    Ok(cf)
}
