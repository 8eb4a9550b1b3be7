//! Base heat kernels in profile form C1 t^{−d/α} F(C2 ρ t^{−1/α}): the Gauss
//! and Cauchy kernels, generic exponential/polynomial profiles, the symmetric
//! 2γ-stable kernel (built numerically by subordination and cached), and
//! moments of rotationally symmetric stable processes.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{adaptive, Pchip};
use crate::special::{ln_beta, ln_gamma_unchecked};
use crate::stable::{Moment, StableLaw};
use crate::transform::{subordinated_density, QuadConfig};

const PI: f64 = std::f64::consts::PI;

/// Evaluation point: time t > 0 and metric distance ρ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub t: f64,
    pub rho: f64,
}

impl EvalPoint {
    pub fn new(t: f64, rho: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("EvalPoint requires t > 0, got {t}")));
        }
        if !(rho >= 0.0) {
            return Err(Error::domain(format!("EvalPoint requires rho >= 0, got {rho}")));
        }
        Ok(EvalPoint { t, rho })
    }
}

/// Cached radial profile of the d-dimensional rotationally symmetric
/// 2γ-stable kernel at unit time, F(r) = p_{2γ}(1, r).
#[derive(Debug, Clone)]
pub struct StableProfileTable {
    pub gamma: f64,
    pub d: f64,
    log_f0: f64,
    r_lo: f64,
    r_hi: f64,
    interp: Pchip,
    /// log F at the last grid node, anchoring the far-field power law.
    log_f_hi: f64,
}

const STABLE_CACHE_POINTS: usize = 512;
const STABLE_CACHE_R_LO: f64 = 1e-4;
const STABLE_CACHE_R_HI: f64 = 1e4;

impl StableProfileTable {
    fn build(gamma: f64, d: f64) -> Result<Self> {
        let law = StableLaw::new(gamma)?;
        let gauss = as_profile(BaseKernel::Gauss { d })?;
        let cfg = QuadConfig { rel_tol: 1e-10, ..QuadConfig::default() };
        // p_{2γ}(1, 0) = (4π)^{−d/2} E S_1^{−d/2} by the moment formula.
        let log_f0 = -0.5 * d * (4.0 * PI).ln() + ln_gamma_unchecked(1.0 + d / (2.0 * gamma))
            - ln_gamma_unchecked(1.0 + d / 2.0);
        let mut xs = Vec::with_capacity(STABLE_CACHE_POINTS);
        let mut ys = Vec::with_capacity(STABLE_CACHE_POINTS);
        let (l_lo, l_hi) = (STABLE_CACHE_R_LO.ln(), STABLE_CACHE_R_HI.ln());
        for i in 0..STABLE_CACHE_POINTS {
            let lr = l_lo + (l_hi - l_lo) * i as f64 / (STABLE_CACHE_POINTS - 1) as f64;
            let point = EvalPoint::new(1.0, lr.exp())?;
            let kv = subordinated_density(&gauss, &law, &point, &cfg)?;
            xs.push(lr);
            ys.push(kv.log_value);
        }
        let log_f_hi = *ys.last().unwrap();
        Ok(StableProfileTable {
            gamma,
            d,
            log_f0,
            r_lo: STABLE_CACHE_R_LO,
            r_hi: STABLE_CACHE_R_HI,
            interp: Pchip::new(xs, ys),
            log_f_hi,
        })
    }

    pub(crate) fn log_value_at_ln_r(&self, ln_r: f64) -> f64 {
        if ln_r == f64::NEG_INFINITY || ln_r < self.r_lo.ln() {
            return self.log_f0;
        }
        if ln_r > self.r_hi.ln() {
            // anchored power-law continuation with the exact tail exponent
            return self.log_f_hi - (self.d + 2.0 * self.gamma) * (ln_r - self.r_hi.ln());
        }
        self.interp.eval(ln_r)
    }
}

/// Non-increasing profile function F.
#[derive(Debug, Clone)]
pub enum Profile {
    /// F(r) = exp[−r^{α/(α−1)}], α ≥ 2.
    Exponential { alpha: f64 },
    /// F(r) = (1+r²)^{−(d+α)/2}, α > 0.
    Polynomial { d: f64, alpha: f64 },
    /// F(r) = p_{2γ}(1, r), the symmetric 2γ-stable kernel profile.
    Stable(Arc<StableProfileTable>),
}

impl Profile {
    pub fn exponential(alpha: f64) -> Result<Self> {
        if !(alpha >= 2.0) {
            return Err(Error::domain(format!("exponential profile requires alpha >= 2, got {alpha}")));
        }
        Ok(Profile::Exponential { alpha })
    }

    pub fn polynomial(d: f64, alpha: f64) -> Result<Self> {
        if !(d > 0.0) || !(alpha > 0.0) {
            return Err(Error::domain(format!("polynomial profile requires d, alpha > 0, got ({d}, {alpha})")));
        }
        Ok(Profile::Polynomial { d, alpha })
    }

    pub fn stable(gamma: f64, d: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::domain(format!("stable profile requires gamma in (0,1), got {gamma}")));
        }
        if !(d > 0.0) {
            return Err(Error::domain(format!("stable profile requires d > 0, got {d}")));
        }
        Ok(Profile::Stable(Arc::new(StableProfileTable::build(gamma, d)?)))
    }

    /// ln F at ln r; total in ln_r (−∞ maps to the value at 0).
    pub(crate) fn log_value_at_ln_r(&self, ln_r: f64) -> f64 {
        match self {
            Profile::Exponential { alpha } => {
                if ln_r == f64::NEG_INFINITY {
                    return 0.0;
                }
                let e = ln_r * alpha / (alpha - 1.0);
                if e > 700.0 {
                    f64::NEG_INFINITY
                } else {
                    -e.exp()
                }
            }
            Profile::Polynomial { d, alpha } => {
                if ln_r == f64::NEG_INFINITY {
                    return 0.0;
                }
                if ln_r > 150.0 {
                    return -(d + alpha) * ln_r;
                }
                let r = ln_r.exp();
                -(d + alpha) / 2.0 * (r * r).ln_1p()
            }
            Profile::Stable(t) => t.log_value_at_ln_r(ln_r),
        }
    }

    /// ln F(0+).
    pub fn log_at_zero(&self) -> f64 {
        self.log_value_at_ln_r(f64::NEG_INFINITY)
    }

    /// F(0+).
    pub fn at_zero(&self) -> f64 {
        self.log_at_zero().exp()
    }
}

/// F(r) for r ≥ 0.
pub fn profile_value(profile: &Profile, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("profile_value requires r >= 0, got {r}")));
    }
    let ln_r = if r == 0.0 { f64::NEG_INFINITY } else { r.ln() };
    Ok(profile.log_value_at_ln_r(ln_r).exp())
}

/// Heat kernel in profile form p(t, x, y) = C1 t^{−d/α} F(C2 ρ(x,y) t^{−1/α}).
#[derive(Debug, Clone)]
pub struct ProfileKernel {
    pub c1: f64,
    pub c2: f64,
    pub d: f64,
    pub alpha: f64,
    pub profile: Profile,
}

impl ProfileKernel {
    pub fn new(c1: f64, c2: f64, d: f64, alpha: f64, profile: Profile) -> Result<Self> {
        if !(c1 > 0.0 && c2 > 0.0 && d > 0.0 && alpha > 0.0) {
            return Err(Error::domain(format!(
                "ProfileKernel requires positive parameters, got C1={c1} C2={c2} d={d} alpha={alpha}"
            )));
        }
        match &profile {
            Profile::Exponential { alpha: pa } => {
                if (pa - alpha).abs() > 1e-12 || alpha < 2.0 {
                    return Err(Error::domain(
                        "exponential profile must share the kernel scaling index and have alpha >= 2",
                    ));
                }
            }
            Profile::Polynomial { d: pd, alpha: pa } => {
                if (pa - alpha).abs() > 1e-12 || (pd - d).abs() > 1e-12 {
                    return Err(Error::domain(
                        "polynomial profile must share the kernel dimension and scaling index",
                    ));
                }
            }
            Profile::Stable(t) => {
                if (2.0 * t.gamma - alpha).abs() > 1e-12 || (t.d - d).abs() > 1e-12 {
                    return Err(Error::domain("stable profile requires alpha = 2 gamma and matching d"));
                }
            }
        }
        Ok(ProfileKernel { c1, c2, d, alpha, profile })
    }

    /// ln p(t, ρ).
    pub fn log_evaluate(&self, point: &EvalPoint) -> f64 {
        let ln_r = if point.rho == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.c2.ln() + point.rho.ln() - point.t.ln() / self.alpha
        };
        self.c1.ln() - self.d / self.alpha * point.t.ln() + self.profile.log_value_at_ln_r(ln_r)
    }

    pub fn evaluate(&self, point: &EvalPoint) -> f64 {
        self.log_evaluate(point).exp()
    }
}

/// Named base kernels convertible to profile form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseKernel {
    Gauss { d: f64 },
    Cauchy { d: f64 },
    Stable2Gamma { gamma: f64, d: f64 },
}

/// The Gauss kernel (4πt)^{−d/2} exp[−ρ²/(4t)].
pub fn gauss_kernel(point: &EvalPoint, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain(format!("gauss_kernel requires d > 0, got {d}")));
    }
    Ok((-0.5 * d * (4.0 * PI * point.t).ln() - point.rho * point.rho / (4.0 * point.t)).exp())
}

/// The Cauchy (Poisson) kernel c(d) t / (t² + ρ²)^{(d+1)/2} with
/// c(d) = π^{−(d+1)/2} Γ((d+1)/2).
pub fn cauchy_kernel(point: &EvalPoint, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain(format!("cauchy_kernel requires d > 0, got {d}")));
    }
    let ln_c = ln_gamma_unchecked((d + 1.0) / 2.0) - (d + 1.0) / 2.0 * PI.ln();
    let ln_val =
        ln_c + point.t.ln() - (d + 1.0) / 2.0 * (point.t * point.t + point.rho * point.rho).ln();
    Ok(ln_val.exp())
}

/// Profile-form representation of a named base kernel.
///
/// Gauss: α = 2, C1 = (4π)^{−d/2}, C2 = 1/2, F(r) = e^{−r²}.
/// Cauchy: α = 1, C1 = c(d), C2 = 1, F(r) = (1+r²)^{−(d+1)/2}.
/// Stable2Gamma: α = 2γ, C1 = C2 = 1, F(r) = p_{2γ}(1, r).
pub fn as_profile(which: BaseKernel) -> Result<ProfileKernel> {
    match which {
        BaseKernel::Gauss { d } => {
            if !(d > 0.0) {
                return Err(Error::domain(format!("Gauss kernel requires d > 0, got {d}")));
            }
            ProfileKernel::new(
                (4.0 * PI).powf(-0.5 * d),
                0.5,
                d,
                2.0,
                Profile::exponential(2.0)?,
            )
        }
        BaseKernel::Cauchy { d } => {
            if !(d > 0.0) {
                return Err(Error::domain(format!("Cauchy kernel requires d > 0, got {d}")));
            }
            let c1 = (ln_gamma_unchecked((d + 1.0) / 2.0) - (d + 1.0) / 2.0 * PI.ln()).exp();
            ProfileKernel::new(c1, 1.0, d, 1.0, Profile::polynomial(d, 1.0)?)
        }
        BaseKernel::Stable2Gamma { gamma, d } => {
            ProfileKernel::new(1.0, 1.0, d, 2.0 * gamma, Profile::stable(gamma, d)?)
        }
    }
}

/// ∫₀^∞ s^{p−1} F(s) ds.
///
/// Polynomial profiles give (1/2) B(p/2, (d+α−p)/2) for p < d+α and are
/// infinite otherwise; exponential profiles give ((α−1)/α) Γ(p(α−1)/α);
/// the stable profile is integrated adaptively with its power tail attached
/// analytically.
pub fn profile_moment(profile: &Profile, p: f64) -> Result<Moment> {
    if !(p > 0.0) {
        return Err(Error::domain(format!("profile_moment requires p > 0, got {p}")));
    }
    match profile {
        Profile::Exponential { alpha } => {
            let c = (alpha - 1.0) / alpha;
            Ok(Moment::Finite((c.ln() + ln_gamma_unchecked(p * c)).exp()))
        }
        Profile::Polynomial { d, alpha } => {
            if p >= d + alpha {
                return Ok(Moment::Infinite);
            }
            Ok(Moment::Finite((ln_beta(p / 2.0, (d + alpha - p) / 2.0)? - 2f64.ln()).exp()))
        }
        Profile::Stable(t) => {
            let tail_exp = t.d + 2.0 * t.gamma;
            if p >= tail_exp {
                return Ok(Moment::Infinite);
            }
            let head = t.log_f0.exp() * t.r_lo.powf(p) / p;
            let f = |x: f64| (p * x + t.log_value_at_ln_r(x)).exp();
            let edges = [t.r_lo.ln(), 0.0, t.r_hi.ln()];
            let body = adaptive(&f, &edges, 1e-10, 1e-280, 40);
            let tail = (t.log_f_hi + p * t.r_hi.ln()).exp() * t.r_hi / (tail_exp - p);
            Ok(Moment::Finite(head + body.value + tail))
        }
    }
}

/// E |X_t|^κ for a rotationally symmetric α-stable process on R^n,
/// κ ∈ (−n, α); infinite outside that range.
pub fn levy_moment(alpha: f64, n: f64, kappa: f64, t: f64) -> Result<Moment> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(format!("levy_moment requires alpha in (0,2), got {alpha}")));
    }
    if !(n > 0.0) {
        return Err(Error::domain(format!("levy_moment requires n > 0, got {n}")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("levy_moment requires t > 0, got {t}")));
    }
    if kappa <= -n || kappa >= alpha {
        return Ok(Moment::Infinite);
    }
    let lg = kappa * 2f64.ln() + ln_gamma_unchecked((n + kappa) / 2.0)
        + ln_gamma_unchecked(1.0 - kappa / alpha)
        - ln_gamma_unchecked(n / 2.0)
        - ln_gamma_unchecked(1.0 - kappa / 2.0)
        + kappa / alpha * t.ln();
    Ok(Moment::Finite(lg.exp()))
}
