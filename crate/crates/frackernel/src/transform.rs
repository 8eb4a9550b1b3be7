//! Quadrature engines for the time-changed kernels
//!
//!   p^S(t,ρ)      = C1 t^{−d/(αβ)} ∫₀^∞ s^{−d/α} F(C2 A s^{−1/α}) p_β(s) ds,
//!                   A = ρ t^{−1/(αβ)},
//!   p^{S^{-1}}(t,ρ) = C1 t^{−βd/α} ∫₀^∞ s^{βd/α} F(C2 (s/Ā)^{β/α}) p_β(s) ds,
//!                   Ā = ρ^{−α/β} t.
//!
//! Both integrals run in log s with the integrand assembled in log space, so
//! the exponential-profile regimes (where the value underflows long before
//! the quadrature loses relative accuracy) stay meaningful through the
//! `log_value` field. The far tail in s is attached analytically from the
//! term-wise integrated series of p_β whenever the profile factor is constant
//! there.

use crate::error::{Error, Result};
use crate::kernels::{profile_moment, EvalPoint, Profile, ProfileKernel};
use crate::quad::{adaptive, peak_integrate, PeakQuadOpts};
use crate::special::ln_gamma_unchecked;
use crate::stable::StableLaw;

const PI: f64 = std::f64::consts::PI;

/// How the s-integral treats the region beyond the detected support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// Replace the stable density beyond the window by its power-series tail
    /// and integrate that analytically.
    AnalyticTail,
    /// Integrate only s ≤ M and ignore the rest.
    HardTruncate(f64),
}

/// Tolerances and budget for the transform quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub tail_policy: TailPolicy,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { rel_tol: 1e-9, abs_tol: 1e-300, max_depth: 40, tail_policy: TailPolicy::AnalyticTail }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain("QuadConfig tolerances must be positive"));
        }
        if self.max_depth < 4 {
            return Err(Error::domain("QuadConfig max_depth must be at least 4"));
        }
        Ok(())
    }
}

/// A kernel value with its log-space representation and error estimate.
///
/// When the value underflows f64 (below ~1e-300), `value` is 0 while
/// `log_value` still carries the result; `is_underflow` reports that state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub log_value: f64,
    pub est_error: f64,
}

impl KernelValue {
    pub fn is_underflow(&self) -> bool {
        self.value == 0.0 && self.log_value.is_finite()
    }
}

/// Which time change is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeChangeMode {
    Subordinate,
    InverseSubordinate,
}

/// Shifted analytic tail ∫_M^∞ s^{q} F_lim p_β(s) ds / e^{shift}, using the
/// term-wise integrated series of p_β. Valid for q < β and M well inside the
/// series regime.
fn shifted_series_tail(beta: f64, q: f64, ln_m: f64, ln_f_lim: f64, shift: f64) -> f64 {
    let mut sum = 0.0f64;
    for k in 1..=200u32 {
        let kf = k as f64;
        let ln_term = ln_gamma_unchecked(kf * beta + 1.0) - ln_gamma_unchecked(kf + 1.0)
            + (q - kf * beta) * ln_m
            - (kf * beta - q).ln()
            + ln_f_lim
            - shift;
        let env = if ln_term > -740.0 { ln_term.exp() } else { 0.0 };
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * (kf * PI * beta).sin() * env / PI;
        if env < 1e-18 * sum.abs().max(1e-280) && k > 2 {
            break;
        }
    }
    sum.max(0.0)
}

struct BodyResult {
    log_value: f64,
    rel_err: f64,
    converged: bool,
}

#[allow(clippy::too_many_arguments)]
fn integrate_kernel_body<G: Fn(f64) -> f64>(
    g: &G,
    seeds: &[f64],
    law: &StableLaw,
    q: f64,
    ln_f_lim: impl Fn(f64) -> f64,
    tail_applies: bool,
    ln_prefactor: f64,
    cfg: &QuadConfig,
) -> BodyResult {
    let hard_hi = match cfg.tail_policy {
        TailPolicy::AnalyticTail => None,
        TailPolicy::HardTruncate(m) => Some(m.ln()),
    };
    let opts = PeakQuadOpts { rel_tol: 0.3 * cfg.rel_tol, max_depth: cfg.max_depth, drop: 45.0, hard_hi };
    let pq = peak_integrate(g, seeds, &opts);
    if pq.shift == f64::NEG_INFINITY || pq.body <= 0.0 {
        return BodyResult { log_value: f64::NEG_INFINITY, rel_err: 0.0, converged: true };
    }
    let mut total = pq.body;
    let mut trunc_rel = 0.0;
    let analytic = matches!(cfg.tail_policy, TailPolicy::AnalyticTail);
    if analytic && tail_applies && pq.cut_hi > 1.5 && q < law.beta() {
        total += shifted_series_tail(law.beta(), q, pq.cut_hi, ln_f_lim(pq.cut_hi), pq.shift);
    } else if analytic {
        // no closed tail available; the drop cut bounds what is left
        trunc_rel = pq.g_at_cut_hi.exp() * 3.0 / total;
    }
    let rel_err = pq.abs_err / total + trunc_rel + 1e-15;
    BodyResult { log_value: ln_prefactor + pq.shift + total.ln(), rel_err, converged: pq.converged }
}

fn finish(body: BodyResult, cfg: &QuadConfig) -> Result<KernelValue> {
    let value = if body.log_value > -690.0 { body.log_value.exp() } else { 0.0 };
    let kv = KernelValue { value, log_value: body.log_value, est_error: body.rel_err * value };
    if !body.converged && body.rel_err > cfg.rel_tol * 10.0 {
        return Err(Error::Convergence { best: kv });
    }
    Ok(kv)
}

/// Density of the subordinated process, p^S(t, x, y) with ρ = ρ(x, y).
pub fn subordinated_density(
    kernel: &ProfileKernel,
    law: &StableLaw,
    point: &EvalPoint,
    cfg: &QuadConfig,
) -> Result<KernelValue> {
    cfg.validate()?;
    let (d, al, b) = (kernel.d, kernel.alpha, law.beta());
    let ln_pre = kernel.c1.ln() - d / (al * b) * point.t.ln();
    let q = -d / al;
    let ln_a = if point.rho > 0.0 { point.rho.ln() - point.t.ln() / (al * b) } else { f64::NEG_INFINITY };
    let prof = &kernel.profile;
    let ln_c2 = kernel.c2.ln();
    let ln_r_of = move |x: f64| if ln_a == f64::NEG_INFINITY { f64::NEG_INFINITY } else { ln_c2 + ln_a - x / al };
    let g = |x: f64| (1.0 + q) * x + law.log_density_from_ln(x) + prof.log_value_at_ln_r(ln_r_of(x));
    let mut seeds = vec![law.mode().ln()];
    if point.rho > 0.0 {
        seeds.push(al * (ln_c2 + ln_a));
    }
    let body = integrate_kernel_body(&g, &seeds, law, q, |x| prof.log_value_at_ln_r(ln_r_of(x)), true, ln_pre, cfg);
    finish(body, cfg)
}

/// Density of the inverse-subordinated process, p^{S^{-1}}(t, x, y).
///
/// At ρ = 0 this is finite only for d < α; d ≥ α signals divergence.
pub fn inverse_subordinated_density(
    kernel: &ProfileKernel,
    law: &StableLaw,
    point: &EvalPoint,
    cfg: &QuadConfig,
) -> Result<KernelValue> {
    cfg.validate()?;
    let (d, al, b) = (kernel.d, kernel.alpha, law.beta());
    if point.rho == 0.0 && d >= al {
        return Err(Error::Divergent(format!(
            "inverse-subordinated kernel diverges at rho = 0 for d >= alpha (d={d}, alpha={al})"
        )));
    }
    let q = b * d / al;
    let ln_pre = kernel.c1.ln() - q * point.t.ln();
    let prof = &kernel.profile;
    let ln_c2 = kernel.c2.ln();
    let ln_abar = if point.rho > 0.0 { -(al / b) * point.rho.ln() + point.t.ln() } else { f64::INFINITY };
    let ln_r_of = move |x: f64| {
        if ln_abar == f64::INFINITY {
            f64::NEG_INFINITY
        } else {
            ln_c2 + (b / al) * (x - ln_abar)
        }
    };
    let g = |x: f64| (1.0 + q) * x + law.log_density_from_ln(x) + prof.log_value_at_ln_r(ln_r_of(x));
    let mut seeds = vec![law.mode().ln()];
    if point.rho > 0.0 {
        seeds.push(ln_abar - (al / b) * ln_c2);
        if let Profile::Exponential { alpha } = prof {
            // Exponential profiles produce a narrow Laplace needle at the
            // saddle of B s^{b'} + c s^{-dd}; its location is explicit.
            let bp = b / (alpha - 1.0);
            let dd = b / (1.0 - b);
            let ln_big_b = alpha / (alpha - 1.0) * ln_c2 - b / (alpha - 1.0) * ln_abar;
            let ln_c = (1.0 - b).ln() + b / (1.0 - b) * b.ln();
            seeds.push((ln_c + dd.ln() - bp.ln() - ln_big_b) / (bp + dd));
        }
    }
    let tail_applies = point.rho == 0.0;
    let body = integrate_kernel_body(&g, &seeds, law, q, |x| prof.log_value_at_ln_r(ln_r_of(x)), tail_applies, ln_pre, cfg);
    finish(body, cfg)
}

/// ∫_{R^d} p(t, |x|) dx over the whole space, computed radially. Only integer
/// dimensions carry the surface-measure factor 2π^{d/2}/Γ(d/2).
pub fn radial_normalization(
    mode: TimeChangeMode,
    kernel: &ProfileKernel,
    law: &StableLaw,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    if kernel.d.fract() != 0.0 || kernel.d < 1.0 {
        return Err(Error::domain("radial normalization is defined for integer d >= 1 only"));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("radial_normalization requires t > 0, got {t}")));
    }
    let (d, al, b) = (kernel.d, kernel.alpha, law.beta());
    let surface = (2.0 * PI.powf(d / 2.0)) / ln_gamma_unchecked(d / 2.0).exp();
    let inner = QuadConfig { rel_tol: cfg.rel_tol.min(1e-9), ..*cfg };
    let log_p = |rho: f64| -> f64 {
        let point = EvalPoint { t, rho };
        let r = match mode {
            TimeChangeMode::Subordinate => subordinated_density(kernel, law, &point, &inner),
            TimeChangeMode::InverseSubordinate => inverse_subordinated_density(kernel, law, &point, &inner),
        };
        match r {
            Ok(kv) => kv.log_value,
            Err(Error::Convergence { best }) => best.log_value,
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let scale = match mode {
        TimeChangeMode::Subordinate => t.powf(1.0 / (al * b)),
        TimeChangeMode::InverseSubordinate => t.powf(b / al),
    };
    let exponential_profile = matches!(kernel.profile, Profile::Exponential { .. });
    let p_edge = match (mode, exponential_profile) {
        (TimeChangeMode::Subordinate, true) => scale * 1e4,
        (TimeChangeMode::Subordinate, false) => scale * 1e7,
        (TimeChangeMode::InverseSubordinate, false) => scale * 1e4,
        (TimeChangeMode::InverseSubordinate, true) => {
            // beyond the point where the stretched-exponential far field has
            // dropped by e^{-60} nothing is left
            let k2 = kernel.c2.powf(al / (al - b)) * (al - b)
                * (al - 1.0).powf(-(al - 1.0) / (al - b))
                * b.powf(b / (al - b));
            scale * (60.0 / k2).powf((al - b) / al).max(10.0)
        }
    };

    // [0, scale] in plain rho (handles the finite or logarithmic behaviour at
    // the origin), then [scale, P] in log rho.
    let f_plain = |rho: f64| surface * rho.powf(d - 1.0) * log_p(rho).exp();
    let head = adaptive(&f_plain, &[0.0, 0.5 * scale, scale], 1e-8, 1e-13, cfg.max_depth);
    let f_log = |x: f64| surface * (d * x + log_p(x.exp())).exp();
    let body = adaptive(
        &f_log,
        &[scale.ln(), (scale * 10.0).ln(), (scale * 1e3).ln(), p_edge.ln()],
        1e-8,
        1e-13,
        cfg.max_depth,
    );

    // analytic completion of the power tail in rho
    let tail = match (mode, &kernel.profile) {
        (TimeChangeMode::Subordinate, prof) => {
            let moment = profile_moment(prof, d + al * b)?
                .finite()
                .ok_or_else(|| Error::UnsupportedProfile("infinite profile moment in tail completion".into()))?;
            let c_far = kernel.c1 * al * b / ln_gamma_unchecked(1.0 - b).exp()
                * kernel.c2.powf(-d - al * b)
                * moment;
            surface * c_far * t * p_edge.powf(-al * b) / (al * b)
        }
        (TimeChangeMode::InverseSubordinate, Profile::Exponential { .. }) => 0.0,
        (TimeChangeMode::InverseSubordinate, Profile::Polynomial { .. }) => {
            let c_far = kernel.c1 * kernel.c2.powf(-d - al) / (b * ln_gamma_unchecked(b).exp());
            surface * c_far * t.powf(b) * p_edge.powf(-al) / al
        }
        (TimeChangeMode::InverseSubordinate, Profile::Stable(tb)) => {
            let l_hat = (tb.log_value_at_ln_r(20.0) + (d + al) * 20.0).exp();
            let c_far = kernel.c1 * kernel.c2.powf(-d - al) * l_hat / (b * ln_gamma_unchecked(b).exp());
            surface * c_far * t.powf(b) * p_edge.powf(-al) / al
        }
    };
    Ok(head.value + body.value + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{as_profile, cauchy_kernel, BaseKernel};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn half_stable_subordinated_gauss_is_cauchy() {
        let law = StableLaw::new(0.5).unwrap();
        let cfg = QuadConfig::default();
        for d in [1.0, 2.0] {
            let kernel = as_profile(BaseKernel::Gauss { d }).unwrap();
            for (t, rho) in [(1.0, 1.0), (1.0, 0.0), (0.3, 2.0)] {
                let point = EvalPoint::new(t, rho).unwrap();
                let got = subordinated_density(&kernel, &law, &point, &cfg).unwrap();
                let want = cauchy_kernel(&point, d).unwrap();
                assert!(rel(got.value, want) < 1e-8, "d={d} t={t} rho={rho}");
                assert!(got.est_error <= cfg.rel_tol * got.value * 10.0);
            }
        }
    }

    #[test]
    fn subordinated_at_origin_matches_moment_formula() {
        let cfg = QuadConfig::default();
        for beta in [0.3, 0.5, 0.8] {
            let law = StableLaw::new(beta).unwrap();
            let kernel = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
            let point = EvalPoint::new(1.7, 0.0).unwrap();
            let got = subordinated_density(&kernel, &law, &point, &cfg).unwrap();
            let want = kernel.c1
                * 1.7f64.powf(-1.0 / (2.0 * beta))
                * law.moment(-0.5, 1.0).unwrap().finite().unwrap();
            assert!(rel(got.value, want) < 1e-8, "beta={beta}");
        }
    }

    #[test]
    fn inverse_subordinated_at_origin_matches_moment_formula() {
        let cfg = QuadConfig::default();
        for beta in [0.3, 0.5, 0.8] {
            let law = StableLaw::new(beta).unwrap();
            let kernel = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
            let point = EvalPoint::new(1.0, 0.0).unwrap();
            let got = inverse_subordinated_density(&kernel, &law, &point, &cfg).unwrap();
            let want = kernel.c1 * law.moment(beta / 2.0, 1.0).unwrap().finite().unwrap();
            assert!(rel(got.value, want) < 1e-8, "beta={beta}");
        }
        // frozen: 1/(2Γ(3/4)) for beta = 1/2
        let law = StableLaw::new(0.5).unwrap();
        let kernel = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
        let point = EvalPoint::new(1.0, 0.0).unwrap();
        let got = inverse_subordinated_density(&kernel, &law, &point, &cfg).unwrap();
        assert!(rel(got.value, 0.408_024_469_549_131_490_5) < 1e-8);
    }

    #[test]
    fn inverse_subordinated_divergent_at_origin_for_large_d() {
        let law = StableLaw::new(0.5).unwrap();
        let cfg = QuadConfig::default();
        for base in [BaseKernel::Cauchy { d: 1.0 }, BaseKernel::Gauss { d: 3.0 }] {
            let kernel = as_profile(base).unwrap();
            let point = EvalPoint::new(1.0, 0.0).unwrap();
            let err = inverse_subordinated_density(&kernel, &law, &point, &cfg);
            assert!(matches!(err, Err(Error::Divergent(_))));
        }
    }

    #[test]
    fn composition_law_cauchy_beta_equals_gauss_half_beta() {
        // Subordinating the Cauchy kernel by β is subordinating Gauss by β/2.
        let cfg = QuadConfig::default();
        let beta = 0.6;
        let cauchy = as_profile(BaseKernel::Cauchy { d: 1.0 }).unwrap();
        let gauss = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
        let law_b = StableLaw::new(beta).unwrap();
        let law_h = StableLaw::new(beta / 2.0).unwrap();
        for (t, rho) in [(0.5, 0.3), (1.0, 1.0), (2.0, 5.0), (1.0, 0.0)] {
            let point = EvalPoint::new(t, rho).unwrap();
            let a = subordinated_density(&cauchy, &law_b, &point, &cfg).unwrap();
            let b = subordinated_density(&gauss, &law_h, &point, &cfg).unwrap();
            assert!(rel(a.value, b.value) < 1e-7, "t={t} rho={rho}");
        }
    }

    #[test]
    fn densities_non_increasing_in_rho() {
        let cfg = QuadConfig::default();
        let law = StableLaw::new(0.7).unwrap();
        let kernel = as_profile(BaseKernel::Cauchy { d: 2.0 }).unwrap();
        let mut prev_s = f64::INFINITY;
        let mut prev_i = f64::INFINITY;
        for i in 0..12 {
            let rho = 0.2 * (i as f64 + 0.5);
            let point = EvalPoint::new(1.0, rho).unwrap();
            let s = subordinated_density(&kernel, &law, &point, &cfg).unwrap().value;
            let inv = inverse_subordinated_density(&kernel, &law, &point, &cfg).unwrap().value;
            assert!(s <= prev_s * (1.0 + 1e-9));
            assert!(inv <= prev_i * (1.0 + 1e-9));
            prev_s = s;
            prev_i = inv;
        }
    }

    #[test]
    fn scaling_self_similarity() {
        let cfg = QuadConfig::default();
        let law = StableLaw::new(0.4).unwrap();
        let kernel = as_profile(BaseKernel::Gauss { d: 2.0 }).unwrap();
        let (d, al, b) = (2.0f64, 2.0f64, 0.4f64);
        for (t, rho) in [(3.0, 1.4), (0.2, 0.7)] {
            let point = EvalPoint::new(t, rho).unwrap();
            let lhs = subordinated_density(&kernel, &law, &point, &cfg).unwrap();
            let collapsed = EvalPoint::new(1.0, rho * t.powf(-1.0 / (al * b))).unwrap();
            let rhs = subordinated_density(&kernel, &law, &collapsed, &cfg).unwrap();
            let pred = t.powf(-d / (al * b)) * rhs.value;
            assert!(rel(lhs.value, pred) < 1e-9, "sub t={t} rho={rho}");
            // inverse: equal similarity variable collapses two points
            let lhs_i = inverse_subordinated_density(&kernel, &law, &point, &cfg).unwrap();
            let rhs_i = inverse_subordinated_density(&kernel, &law, &collapsed_inv(t, rho, al, b), &cfg).unwrap();
            let pred_i = (t / 2.0f64).powf(-b * d / al) * rhs_i.value;
            assert!(rel(lhs_i.value, pred_i) < 1e-9, "inv t={t} rho={rho}");
        }
    }

    fn collapsed_inv(t: f64, rho: f64, al: f64, b: f64) -> EvalPoint {
        // second point (t2, rho2) with t2 = 2 and the same rho t^{-β/α}
        let t2 = 2.0;
        EvalPoint::new(t2, rho * (t2 / t).powf(b / al)).unwrap()
    }

    #[test]
    fn exponential_regime_underflows_with_log_value() {
        let cfg = QuadConfig::default();
        let law = StableLaw::new(0.5).unwrap();
        let kernel = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
        let point = EvalPoint::new(1.0, 1000.0).unwrap();
        let kv = inverse_subordinated_density(&kernel, &law, &point, &cfg).unwrap();
        assert!(kv.is_underflow());
        assert!(kv.value == 0.0 && kv.log_value < -4000.0 && kv.log_value > -6000.0);
    }

    #[test]
    fn hard_truncate_discards_tail_mass() {
        let law = StableLaw::new(0.5).unwrap();
        let kernel = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
        let point = EvalPoint::new(1.0, 0.0).unwrap();
        let full = subordinated_density(&kernel, &law, &point, &QuadConfig::default()).unwrap();
        let trunc = subordinated_density(
            &kernel,
            &law,
            &point,
            &QuadConfig { tail_policy: TailPolicy::HardTruncate(2.0), ..QuadConfig::default() },
        )
        .unwrap();
        assert!(trunc.value < full.value);
        // s^{-1/2} p(s) keeps non-trivial mass beyond 2 for the Lévy law
        assert!(full.value - trunc.value > 1e-3 * full.value);
    }

    #[test]
    fn normalization_sub_gauss_d1() {
        let law = StableLaw::new(0.7).unwrap();
        let kernel = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
        let n = radial_normalization(TimeChangeMode::Subordinate, &kernel, &law, 1.0, &QuadConfig::default()).unwrap();
        assert!((n - 1.0).abs() < 1e-6, "norm={n}");
    }

    #[test]
    fn normalization_rejects_fractional_dimension() {
        let law = StableLaw::new(0.5).unwrap();
        let kernel = ProfileKernel::new(1.0, 1.0, 1.5, 1.5, Profile::polynomial(1.5, 1.5).unwrap()).unwrap();
        assert!(radial_normalization(TimeChangeMode::Subordinate, &kernel, &law, 1.0, &QuadConfig::default()).is_err());
    }

    #[test]
    fn invalid_config_rejected() {
        let law = StableLaw::new(0.5).unwrap();
        let kernel = as_profile(BaseKernel::Gauss { d: 1.0 }).unwrap();
        let point = EvalPoint::new(1.0, 0.0).unwrap();
        let bad = QuadConfig { rel_tol: 0.0, ..QuadConfig::default() };
        assert!(subordinated_density(&kernel, &law, &point, &bad).is_err());
        let bad = QuadConfig { max_depth: 2, ..QuadConfig::default() };
        assert!(subordinated_density(&kernel, &law, &point, &bad).is_err());
    }
}
