//! The one-sided β-stable subordinator law S with Laplace transform
//! E exp(−r S_t) = exp(−t r^β), β ∈ (0,1).
//!
//! The density of S_1 is evaluated through three regimes:
//!
//! * s below 1e-8: the small-argument asymptotic form (the density there is
//!   double-exponentially small and the form is exact to far better than the
//!   quadrature that would replace it);
//! * s in [1e-8, 3.5): the Kanter/Zolotarev angular integral
//!   p(s) = β/((1−β)π) s^{−1/(1−β)} ∫₀^π A(φ) exp[−A(φ) s^{−β/(1−β)}] dφ,
//!   computed exp-shifted so extreme arguments stay accurate;
//! * s ≥ 3.5: the convergent large-argument series
//!   p(s) = (1/π) Σ_k (−1)^{k+1} Γ(kβ+1)/k! sin(kπβ) s^{−kβ−1},
//!   which smoothly turns into the leading power tail for s → ∞.
//!
//! The distribution function uses the same angular kernel,
//! G(x) = (1/π)∫₀^π exp[−A(φ) x^{−β/(1−β)}] dφ, and a term-wise integrated
//! series for the survival function at large arguments.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quad::{adaptive, golden_max};
use crate::special::ln_gamma_unchecked;

const S_ASYM_LO: f64 = 1e-8;
const S_SERIES: f64 = 3.5;
const PI: f64 = std::f64::consts::PI;

/// A moment that may legitimately be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Infinite,
}

impl Moment {
    pub fn finite(self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(v),
            Moment::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Moment::Infinite)
    }
}

/// Which end of the axis a density asymptotic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymRegime {
    Zero,
    Infinity,
}

/// Value of one of the two closed-form density asymptotics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityAsymptotics {
    pub regime: AsymRegime,
    pub value: f64,
}

/// One-sided β-stable subordinator law, normalized by its Laplace transform
/// E exp(−r S_t) = exp(−t r^β).
#[derive(Debug)]
pub struct StableLaw {
    beta: f64,
    mode: OnceLock<f64>,
}

impl Clone for StableLaw {
    fn clone(&self) -> Self {
        StableLaw { beta: self.beta, mode: self.mode.clone() }
    }
}

impl StableLaw {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!("stability index must lie in (0,1), got {beta}")));
        }
        Ok(StableLaw { beta, mode: OnceLock::new() })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// log of the Kanter angular function
    /// A(φ) = sin(βφ)^{β/(1−β)} sin((1−β)φ) / sin(φ)^{1/(1−β)},
    /// evaluated in a form that stays accurate near φ = 0.
    pub(crate) fn ln_kanter_a(&self, phi: f64) -> f64 {
        let b = self.beta;
        let limit = b / (1.0 - b) * b.ln() + (1.0 - b).ln();
        if phi < 1e-12 {
            return limit;
        }
        // sinc form: the ln φ contributions cancel exactly.
        let s1 = (b * phi).sin() / (b * phi);
        let s2 = ((1.0 - b) * phi).sin() / ((1.0 - b) * phi);
        let s3 = phi.sin() / phi;
        limit + b / (1.0 - b) * s1.ln() + s2.ln() - 1.0 / (1.0 - b) * s3.ln()
    }

    fn ln_a_at_zero(&self) -> f64 {
        let b = self.beta;
        b / (1.0 - b) * b.ln() + (1.0 - b).ln()
    }

    /// ln p_β(s) via the exp-shifted angular integral.
    fn log_density_zolotarev(&self, s: f64) -> f64 {
        let b = self.beta;
        let lv = -b / (1.0 - b) * s.ln();
        let phi_max = PI - 1e-9;
        let g = |phi: f64| {
            let u = self.ln_kanter_a(phi) + lv;
            if u > 700.0 {
                f64::NEG_INFINITY
            } else {
                u - u.exp()
            }
        };
        // A is increasing, so the integrand is unimodal: the peak sits where
        // A(φ) s^{-β/(1-β)} = 1, or at φ = 0 when no such angle exists.
        let (peak, m) = if self.ln_a_at_zero() + lv < 0.0 {
            let mut lo = 0.0;
            let mut hi = phi_max;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if self.ln_kanter_a(mid) + lv < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, -1.0)
        } else {
            (0.0, g(0.0))
        };
        if !m.is_finite() {
            return f64::NEG_INFINITY;
        }
        let level = m - 60.0;
        let cut = |mut inside: f64, mut outside: f64| {
            for _ in 0..80 {
                let mid = 0.5 * (inside + outside);
                if g(mid) > level {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            outside
        };
        let cut_r = if g(phi_max) > level { phi_max } else { cut(peak, phi_max) };
        let cut_l = if peak == 0.0 || g(0.0) > level { 0.0 } else { cut(peak, 0.0) };
        let f = |phi: f64| {
            let v = g(phi) - m;
            if v > -745.0 {
                v.exp()
            } else {
                0.0
            }
        };
        let mut edges = vec![cut_l, peak, cut_r];
        edges.retain(|&x| (cut_l..=cut_r).contains(&x));
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup();
        let body = adaptive(&f, &edges, 3e-13, 1e-280, 34);
        (b / ((1.0 - b) * PI)).ln() - s.ln() + m + body.value.ln()
    }

    /// Convergent series at large s; `None` when cancellation makes it
    /// unreliable (the angular integral is used instead). Takes ln s so the
    /// far tail never has to form s itself.
    fn log_density_series(&self, ls: f64) -> Option<f64> {
        let b = self.beta;
        let mut sum = 0.0f64;
        let mut max_term = 0.0f64;
        let mut quiet = 0u32;
        for k in 1..=400u32 {
            let kf = k as f64;
            let le = ln_gamma_unchecked(kf * b + 1.0) - ln_gamma_unchecked(kf + 1.0) - (kf * b + 1.0) * ls;
            let env = if le > -740.0 { le.exp() } else { 0.0 };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * (kf * PI * b).sin() * env / PI;
            sum += term;
            max_term = max_term.max(term.abs());
            if env < 1e-17 * sum.abs() * PI {
                quiet += 1;
                if quiet >= 3 && k > 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if !(sum > 0.0) || max_term > 1e12 * sum {
            return None;
        }
        Some(sum.ln())
    }

    fn log_density_asym_zero(&self, ln_s: f64) -> f64 {
        let b = self.beta;
        let expo = b / (1.0 - b) * (b.ln() - ln_s);
        let pow = if expo > 700.0 { f64::INFINITY } else { expo.exp() };
        -0.5 * (2.0 * PI * (1.0 - b)).ln() + b.ln() / (2.0 * (1.0 - b))
            - (2.0 - b) / (2.0 * (1.0 - b)) * ln_s
            - (1.0 - b) * pow
    }

    fn log_density_asym_inf(&self, ln_s: f64) -> f64 {
        let b = self.beta;
        b.ln() - ln_gamma_unchecked(1.0 - b) - (b + 1.0) * ln_s
    }

    /// ln p_β(s), s > 0.
    pub fn log_density(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::domain(format!("density requires s > 0, got {s}")));
        }
        Ok(self.log_density_from_ln(s.ln()))
    }

    /// ln p_β(e^{ln_s}); total in ln_s, so transform windows can reach
    /// arguments far outside f64 range.
    pub(crate) fn log_density_from_ln(&self, ln_s: f64) -> f64 {
        if ln_s < S_ASYM_LO.ln() {
            return self.log_density_asym_zero(ln_s);
        }
        if ln_s >= S_SERIES.ln() {
            if let Some(v) = self.log_density_series(ln_s) {
                return v;
            }
        }
        self.log_density_zolotarev(ln_s.exp())
    }

    /// Density p_β(s) of S_1 at s > 0.
    pub fn density(&self, s: f64) -> Result<f64> {
        Ok(self.log_density(s)?.exp())
    }

    /// Distribution function G_β(x) = P(S_1 ≤ x), x ≥ 0.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::domain(format!("cdf requires x >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if x >= S_SERIES {
            if let Some(sf) = self.sf_series(x.ln()) {
                return Ok(1.0 - sf);
            }
        }
        Ok(self.cdf_angular(x))
    }

    fn cdf_angular(&self, x: f64) -> f64 {
        let b = self.beta;
        let lv = -b / (1.0 - b) * x.ln();
        let phi_max = PI - 1e-9;
        let f = |phi: f64| {
            let u = self.ln_kanter_a(phi) + lv;
            if u > 700.0 {
                0.0
            } else {
                (-u.exp()).exp()
            }
        };
        // knee where A(φ) x^{-β/(1-β)} = 1
        let mut edges = vec![0.0, phi_max];
        if self.ln_a_at_zero() + lv < 0.0 {
            let mut lo = 0.0;
            let mut hi = phi_max;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if self.ln_kanter_a(mid) + lv < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            edges.insert(1, lo);
        }
        let r = adaptive(&f, &edges, 1e-12, 1e-16, 34);
        (r.value / PI).clamp(0.0, 1.0)
    }

    /// Survival function P(S_1 > x) for ln x given; term-wise integral of the
    /// large-argument series.
    fn sf_series(&self, ln_x: f64) -> Option<f64> {
        let b = self.beta;
        let mut sum = 0.0f64;
        let mut max_term = 0.0f64;
        let mut quiet = 0u32;
        for k in 1..=400u32 {
            let kf = k as f64;
            let le = ln_gamma_unchecked(kf * b + 1.0) - ln_gamma_unchecked(kf + 1.0)
                - kf * b * ln_x
                - (kf * b).ln();
            let env = if le > -740.0 { le.exp() } else { 0.0 };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * (kf * PI * b).sin() * env / PI;
            max_term = max_term.max(env);
            if env < 1e-17 * sum.abs().max(1e-300) {
                quiet += 1;
                if quiet >= 3 && k > 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if sum < 0.0 || max_term > 1e12 * sum.max(1e-300) {
            return None;
        }
        Some(sum.min(1.0))
    }

    /// P(S_1 > x) with x passed as ln x (so extreme arguments never overflow).
    pub(crate) fn sf_from_ln(&self, ln_x: f64) -> f64 {
        if ln_x >= S_SERIES.ln() {
            if let Some(sf) = self.sf_series(ln_x) {
                return sf;
            }
        }
        if ln_x > 700.0 {
            return 0.0;
        }
        1.0 - self.cdf_angular(ln_x.exp())
    }

    /// P(S_t^{-1} ≤ s) = 1 − G_β(s^{−1/β} t), the distribution function of the
    /// inverse subordinator at time t. Returns 0 at s = 0.
    pub fn inverse_cdf_time(&self, t: f64, s: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("inverse_cdf_time requires t > 0, got {t}")));
        }
        if s < 0.0 {
            return Err(Error::domain(format!("inverse_cdf_time requires s >= 0, got {s}")));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        let ln_x = t.ln() - s.ln() / self.beta;
        Ok(self.sf_from_ln(ln_x).clamp(0.0, 1.0))
    }

    /// E S_t^κ = Γ(1−κ/β)/Γ(1−κ) t^{κ/β} for κ < β; infinite for κ ≥ β.
    pub fn moment(&self, kappa: f64, t: f64) -> Result<Moment> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("moment requires t > 0, got {t}")));
        }
        let b = self.beta;
        if kappa >= b {
            return Ok(Moment::Infinite);
        }
        let lg = ln_gamma_unchecked(1.0 - kappa / b) - ln_gamma_unchecked(1.0 - kappa)
            + kappa / b * t.ln();
        Ok(Moment::Finite(lg.exp()))
    }

    /// Closed-form asymptotic value of the density at the requested end.
    pub fn density_asym(&self, s: f64, regime: AsymRegime) -> Result<DensityAsymptotics> {
        if !(s > 0.0) {
            return Err(Error::domain(format!("density_asym requires s > 0, got {s}")));
        }
        let value = match regime {
            AsymRegime::Zero => self.log_density_asym_zero(s.ln()).exp(),
            AsymRegime::Infinity => self.log_density_asym_inf(s.ln()).exp(),
        };
        Ok(DensityAsymptotics { regime, value })
    }

    /// ψ_β(s) = p_β(s) / asym_∞(s) − 1.
    pub fn correction_psi(&self, s: f64) -> Result<f64> {
        let ld = self.log_density(s)?;
        Ok((ld - self.log_density_asym_inf(s.ln())).exp_m1())
    }

    /// φ_β(s) = p_β(s) / asym_0(s) − 1.
    pub fn correction_phi(&self, s: f64) -> Result<f64> {
        let ld = self.log_density(s)?;
        Ok((ld - self.log_density_asym_zero(s.ln())).exp_m1())
    }

    /// Location of the (unique) maximum of the density.
    pub fn mode(&self) -> f64 {
        *self.mode.get_or_init(|| {
            let g = |x: f64| self.log_density(x.exp()).unwrap_or(f64::NEG_INFINITY);
            let (x, _) = golden_max(&g, (1e-6f64).ln(), 12.0f64.ln(), 160);
            x.exp()
        })
    }
}
