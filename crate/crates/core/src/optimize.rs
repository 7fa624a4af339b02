//! One-dimensional minimisation shared by the non-negativity check and the
//! bound optimiser.

use crate::scalar::Scalar;

/// Result of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub x: T,
    pub value: T,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `width_tol` or after
/// `max_iter` shrink steps. NaN values compare as `+inf`. The returned
/// point is the best one evaluated, endpoints included.
pub fn golden_section_min<T, F>(mut f: F, lo: T, hi: T, width_tol: T, max_iter: usize) -> Minimum<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let mut eval = |x: T| {
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };

    let fa = eval(a);
    let fb = eval(b);
    let mut best = if fb < fa { (b, fb) } else { (a, fa) };
    let mut evaluations = 2;

    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    evaluations += 2;

    for _ in 0..max_iter {
        if (b - a).abs() <= width_tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
        evaluations += 1;
        if c >= d {
            break;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    Minimum { x: best.0, value: best.1, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_parabola_vertex() {
        let m = golden_section_min(|x: f64| (x - 0.3).powi(2) + 1.0, -2.0, 3.0, 1e-10, 200);
        assert_abs_diff_eq!(m.x, 0.3, epsilon = 1e-7);
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn endpoint_minimum_is_kept() {
        let m = golden_section_min(|x: f64| x, 0.0, 1.0, 1e-12, 200);
        assert_eq!(m.x, 0.0);
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn nan_is_treated_as_infinite() {
        let m = golden_section_min(|x: f64| if x > 0.5 { f64::NAN } else { (x - 0.2).abs() }, 0.0, 1.0, 1e-9, 200);
        assert_abs_diff_eq!(m.x, 0.2, epsilon = 1e-8);
    }

    #[test]
    fn cosine_minimum_at_pi() {
        let m = golden_section_min(|x: f32| x.cos(), 2.0, 4.0, 1e-5, 100);
        assert!((m.x - std::f32::consts::PI).abs() < 1e-3);
    }
}
