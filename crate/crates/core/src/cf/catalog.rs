use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::CharFn;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Highest `k` for which `E X^{2k}` is recorded on catalog CFs.
const MAX_MOMENT_ORDER: u32 = 15;

/// Closed-form distribution families with known characteristic functions.
///
/// Parsed from and printed as `family:p1,p2`, e.g. `cauchy:0,1`,
/// `exponential:2`, `uniform:-1,1`, `stable:0.5,1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CatalogSpec {
    PointMass { c: f64 },
    Normal { mu: f64, sigma: f64 },
    Cauchy { x0: f64, gamma: f64 },
    Laplace { mu: f64, b: f64 },
    Exponential { lambda: f64 },
    Uniform { lo: f64, hi: f64 },
    /// `f(t) = exp(-|scale t|^alpha)`.
    SymmetricStable { alpha: f64, scale: f64 },
    /// Symmetric Linnik (geometric stable): `f(t) = 1 / (1 + |scale t|^alpha)`.
    Linnik { alpha: f64, scale: f64 },
}

impl CatalogSpec {
    pub fn family(&self) -> &'static str {
        match self {
            CatalogSpec::PointMass { .. } => "point_mass",
            CatalogSpec::Normal { .. } => "normal",
            CatalogSpec::Cauchy { .. } => "cauchy",
            CatalogSpec::Laplace { .. } => "laplace",
            CatalogSpec::Exponential { .. } => "exponential",
            CatalogSpec::Uniform { .. } => "uniform",
            CatalogSpec::SymmetricStable { .. } => "stable",
            CatalogSpec::Linnik { .. } => "linnik",
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            CatalogSpec::PointMass { c } => vec![c],
            CatalogSpec::Normal { mu, sigma } => vec![mu, sigma],
            CatalogSpec::Cauchy { x0, gamma } => vec![x0, gamma],
            CatalogSpec::Laplace { mu, b } => vec![mu, b],
            CatalogSpec::Exponential { lambda } => vec![lambda],
            CatalogSpec::Uniform { lo, hi } => vec![lo, hi],
            CatalogSpec::SymmetricStable { alpha, scale } => vec![alpha, scale],
            CatalogSpec::Linnik { alpha, scale } => vec![alpha, scale],
        }
    }

    /// Checks the usual positivity constraints.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::ParameterDomain(format!("{}: {msg}", self)));
        if self.params().iter().any(|p| !p.is_finite()) {
            return bad("parameters must be finite");
        }
        match *self {
            CatalogSpec::PointMass { .. } => Ok(()),
            CatalogSpec::Normal { sigma, .. } if sigma <= 0.0 => bad("sigma must be positive"),
            CatalogSpec::Cauchy { gamma, .. } if gamma <= 0.0 => bad("gamma must be positive"),
            CatalogSpec::Laplace { b, .. } if b <= 0.0 => bad("b must be positive"),
            CatalogSpec::Exponential { lambda } if lambda <= 0.0 => bad("lambda must be positive"),
            CatalogSpec::Uniform { lo, hi } if lo >= hi => bad("lo must be below hi"),
            CatalogSpec::SymmetricStable { alpha, scale } | CatalogSpec::Linnik { alpha, scale } => {
                if !(alpha > 0.0 && alpha <= 2.0) {
                    bad("alpha must lie in (0, 2]")
                } else if scale <= 0.0 {
                    bad("scale must be positive")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// True when the law is symmetric about the origin.
    pub fn is_symmetric(&self) -> bool {
        match *self {
            CatalogSpec::PointMass { c } => c == 0.0,
            CatalogSpec::Normal { mu, .. } => mu == 0.0,
            CatalogSpec::Cauchy { x0, .. } => x0 == 0.0,
            CatalogSpec::Laplace { mu, .. } => mu == 0.0,
            CatalogSpec::Exponential { .. } => false,
            CatalogSpec::Uniform { lo, hi } => lo == -hi,
            CatalogSpec::SymmetricStable { .. } | CatalogSpec::Linnik { .. } => true,
        }
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|p| p.to_string()).collect();
        write!(f, "{}:{}", self.family(), params.join(","))
    }
}

impl FromStr for CatalogSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let params: Vec<f64> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| {
                    p.trim().parse::<f64>().map_err(|_| {
                        Error::ParameterDomain(format!("cannot parse parameter {p:?} in {s:?}"))
                    })
                })
                .collect::<Result<_>>()?
        };
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::ParameterDomain(format!(
                    "{family} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let spec = match family.trim().to_ascii_lowercase().as_str() {
            "point_mass" | "point" | "dirac" => {
                want(1)?;
                CatalogSpec::PointMass { c: params[0] }
            }
            "normal" | "gaussian" => {
                want(2)?;
                CatalogSpec::Normal { mu: params[0], sigma: params[1] }
            }
            "cauchy" => {
                want(2)?;
                CatalogSpec::Cauchy { x0: params[0], gamma: params[1] }
            }
            "laplace" => {
                want(2)?;
                CatalogSpec::Laplace { mu: params[0], b: params[1] }
            }
            "exponential" | "exp" => {
                want(1)?;
                CatalogSpec::Exponential { lambda: params[0] }
            }
            "uniform" => {
                want(2)?;
                CatalogSpec::Uniform { lo: params[0], hi: params[1] }
            }
            "stable" | "symmetric_stable" => {
                want(2)?;
                CatalogSpec::SymmetricStable { alpha: params[0], scale: params[1] }
            }
            "linnik" => {
                want(2)?;
                CatalogSpec::Linnik { alpha: params[0], scale: params[1] }
            }
            other => {
                return Err(Error::ParameterDomain(format!("unknown distribution family {other:?}")))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `sin(x) / x` without the removable singularity.
fn sinc<T: Scalar>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// `sinh(x) / x`, `+inf` once `sinh` overflows.
fn sinhc<T: Scalar>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() + x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sinh() / x
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn phase<T: Scalar>(shift: T, t: T) -> Complex<T> {
    let (s, c) = (shift * t).sin_cos();
    Complex::new(c, s)
}

/// Raw moments `E X^n`, `n = 0..=2 * MAX_MOMENT_ORDER`, via a recurrence.
fn normal_raw_moments(mu: f64, sigma: f64) -> Vec<f64> {
    let mut m = vec![1.0, mu];
    for n in 2..=(2 * MAX_MOMENT_ORDER as usize) {
        let next = mu * m[n - 1] + (n as f64 - 1.0) * sigma * sigma * m[n - 2];
        m.push(next);
    }
    m
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn attach_moments<T: Scalar>(mut cf: CharFn<T>, moment: impl Fn(u32) -> f64) -> CharFn<T> {
    for k in 1..=MAX_MOMENT_ORDER {
        let m = T::lit(moment(k));
        if m.is_finite() {
            cf = cf.with_even_moment(k, m);
        }
    }
    cf
}

pub(super) fn build<T: Scalar>(spec: &CatalogSpec) -> Result<CharFn<T>> {
    spec.validate()?;
    let label = spec.to_string();
    let inf = T::infinity();
    let cf = match *spec {
        CatalogSpec::PointMass { c } => {
            let ct = T::lit(c);
            let nonpos = if c <= 0.0 { 1.0 } else { 0.0 };
            let neg = if c < 0.0 { 1.0 } else { 0.0 };
            let cf = CharFn::new(label, move |t| phase(ct, t))
                .with_imag_axis(move |u| (-u * ct).exp())
                .with_analyticity(inf, inf, inf)
                .with_mass_at_origin(T::lit(nonpos), T::lit(neg));
            attach_moments(cf, |k| c.powi(2 * k as i32))
        }
        CatalogSpec::Normal { mu, sigma } => {
            let (m, sd) = (T::lit(mu), T::lit(sigma));
            let half = T::lit(0.5);
            let p0 = T::lit(normal_cdf(-mu / sigma));
            let raw = normal_raw_moments(mu, sigma);
            let cf = CharFn::new(label, move |t| {
                phase(m, t) * (-half * sd * sd * t * t).exp()
            })
            .with_imag_axis(move |u| (-m * u + half * sd * sd * u * u).exp())
            .with_analyticity(inf, inf, inf)
            .with_mass_at_origin(p0, p0);
            attach_moments(cf, |k| raw[2 * k as usize])
        }
        CatalogSpec::Cauchy { x0, gamma } => {
            let (m, g) = (T::lit(x0), T::lit(gamma));
            let p0 = T::lit(f64::atan2(1.0, x0 / gamma) / std::f64::consts::PI);
            CharFn::new(label, move |t| phase(m, t) * (-g * t.abs()).exp())
                .with_analyticity(T::zero(), T::zero(), T::zero())
                .with_mass_at_origin(p0, p0)
        }
        CatalogSpec::Laplace { mu, b } => {
            let (m, bt) = (T::lit(mu), T::lit(b));
            let radius = T::lit(1.0 / b);
            let z = -mu / b;
            let p0 = T::lit(if z < 0.0 { 0.5 * z.exp() } else { 1.0 - 0.5 * (-z).exp() });
            let cf = CharFn::new(label, move |t| {
                phase(m, t) * (T::one() / (T::one() + bt * bt * t * t))
            })
            .with_imag_axis(move |u| {
                let bu = bt * u;
                if bu.abs() >= T::one() {
                    T::infinity()
                } else {
                    (-m * u).exp() / (T::one() - bu * bu)
                }
            })
            .with_analyticity(radius, radius, radius)
            .with_mass_at_origin(p0, p0);
            // E (mu + Y)^{2k} with E Y^i = i! b^i for even i.
            attach_moments(cf, |k| {
                let n = 2 * k;
                (0..=n)
                    .step_by(2)
                    .map(|i| {
                        crate::scalar::binomial::<f64>(n, i)
                            * mu.powi((n - i) as i32)
                            * factorial(i)
                            * b.powi(i as i32)
                    })
                    .sum()
            })
        }
        CatalogSpec::Exponential { lambda } => {
            let l = T::lit(lambda);
            let cf = CharFn::new(label, move |t| {
                let d = l * l + t * t;
                Complex::new(l * l / d, l * t / d)
            })
            .with_imag_axis(move |u| if u <= -l { T::infinity() } else { l / (l + u) })
            .with_analyticity(l, l, inf)
            .with_mass_at_origin(T::zero(), T::zero());
            attach_moments(cf, |k| factorial(2 * k) / lambda.powi(2 * k as i32))
        }
        CatalogSpec::Uniform { lo, hi } => {
            let mid = T::lit(0.5 * (lo + hi));
            let half = T::lit(0.5 * (hi - lo));
            let p0 = T::lit((-lo / (hi - lo)).clamp(0.0, 1.0));
            let cf = CharFn::new(label, move |t| phase(mid, t) * sinc(half * t))
                .with_imag_axis(move |u| (-mid * u).exp() * sinhc(half * u))
                .with_analyticity(inf, inf, inf)
                .with_mass_at_origin(p0, p0);
            attach_moments(cf, |k| {
                let n = 2 * k as i32;
                (hi.powi(n + 1) - lo.powi(n + 1)) / ((n as f64 + 1.0) * (hi - lo))
            })
        }
        CatalogSpec::SymmetricStable { alpha, scale } => {
            let (a, c) = (T::lit(alpha), T::lit(scale));
            let half = T::lit(0.5);
            let cf = CharFn::new(label, move |t| Complex::new((-(c * t).abs().powf(a)).exp(), T::zero()))
                .with_mass_at_origin(half, half);
            if alpha == 2.0 {
                let raw = normal_raw_moments(0.0, std::f64::consts::SQRT_2 * scale);
                let cf = cf
                    .with_imag_axis(move |u| (c * c * u * u).exp())
                    .with_analyticity(inf, inf, inf);
                attach_moments(cf, |k| raw[2 * k as usize])
            } else {
                cf.with_analyticity(T::zero(), T::zero(), T::zero())
            }
        }
        CatalogSpec::Linnik { alpha, scale } => {
            let (a, c) = (T::lit(alpha), T::lit(scale));
            let half = T::lit(0.5);
            let cf = CharFn::new(label, move |t| {
                Complex::new(T::one() / (T::one() + (c * t).abs().powf(a)), T::zero())
            })
            .with_mass_at_origin(half, half);
            if alpha == 2.0 {
                let radius = T::lit(1.0 / scale);
                let cf = cf
                    .with_imag_axis(move |u| {
                        let cu = c * u;
                        if cu.abs() >= T::one() {
                            T::infinity()
                        } else {
                            T::one() / (T::one() - cu * cu)
                        }
                    })
                    .with_analyticity(radius, radius, radius);
                attach_moments(cf, |k| factorial(2 * k) * scale.powi(2 * k as i32))
            } else {
                cf.with_analyticity(T::zero(), T::zero(), T::zero())
            }
        }
    };
    Ok(cf)
}
