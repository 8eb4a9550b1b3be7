//! Statistical oracle: samplers for the stable subordinator, its inverse,
//! and time-changed Gaussian/Cauchy radii, plus empirical-CDF comparison.
//!
//! Subordinator variates use the Kanter representation
//! S_1 = (A(U)/E)^{(1−β)/β} with U uniform on (0,π) and E standard
//! exponential; S_t = t^{1/β} S_1 and S_t^{-1} = (t/S_1)^β in distribution.
//! Every batch draws from its own seeded ChaCha stream, so identical seeds
//! reproduce identical batches and independent batches can be generated
//! concurrently.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::kernels::BaseKernel;
use crate::stable::StableLaw;
use crate::transform::TimeChangeMode;

const PI: f64 = std::f64::consts::PI;

/// A reproducible batch of i.i.d. samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub law_tag: String,
    pub seed: u64,
    pub n: usize,
}

/// One point of an empirical/reference CDF comparison grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcdfPoint {
    pub x: f64,
    pub empirical: f64,
    pub reference: f64,
}

/// Kolmogorov–Smirnov comparison of a batch against a reference CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfReport {
    pub ks_statistic: f64,
    pub n: usize,
    pub grid: Vec<EcdfPoint>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("sampling requires t > 0, got {t}")));
    }
    Ok(())
}

/// One S_1 draw by the Kanter construction.
fn kanter_draw(law: &StableLaw, rng: &mut ChaCha8Rng) -> f64 {
    let b = law.beta();
    let phi = PI * rng.random::<f64>();
    let mut e = -(1.0 - rng.random::<f64>()).ln();
    if !(e > 0.0) {
        e = f64::MIN_POSITIVE;
    }
    ((law.ln_kanter_a(phi) - e.ln()) * (1.0 - b) / b).exp()
}

/// i.i.d. samples of S_t.
pub fn sample_subordinator(law: &StableLaw, t: f64, n: usize, seed: u64) -> Result<SampleBatch> {
    check_n(n)?;
    check_t(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = t.powf(1.0 / law.beta());
    let values = (0..n).map(|_| scale * kanter_draw(law, &mut rng)).collect();
    Ok(SampleBatch {
        values,
        law_tag: format!("subordinator(beta={},t={t})", law.beta()),
        seed,
        n,
    })
}

/// i.i.d. samples of S_t^{-1} via the scaling identity (t/S_1)^β.
pub fn sample_inverse_subordinator(law: &StableLaw, t: f64, n: usize, seed: u64) -> Result<SampleBatch> {
    check_n(n)?;
    check_t(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = law.beta();
    let values = (0..n)
        .map(|_| (b * (t.ln() - kanter_draw(law, &mut rng).ln())).exp())
        .collect();
    Ok(SampleBatch {
        values,
        law_tag: format!("inverse_subordinator(beta={b},t={t})"),
        seed,
        n,
    })
}

/// Radius |B_T| of a Brownian motion with kernel (4πT)^{−d/2}e^{−ρ²/(4T)} at
/// time T, i.e. 2 sqrt(T G) with G ~ Gamma(d/2, 1).
fn gauss_radius(d: f64, time: f64, gamma_d2: &Gamma<f64>, rng: &mut ChaCha8Rng) -> f64 {
    let _ = d;
    let g: f64 = gamma_d2.sample(rng);
    2.0 * (time * g).sqrt()
}

/// Radii of the time-changed base process at a single time t.
///
/// The Cauchy radius is produced by the subordination route: a Brownian
/// radius at an independent 1/2-stable time, which is the same composition
/// the corollaries use.
pub fn sample_timechanged(
    base: BaseKernel,
    law: &StableLaw,
    mode: TimeChangeMode,
    t: f64,
    n: usize,
    seed: u64,
) -> Result<SampleBatch> {
    check_n(n)?;
    check_t(t)?;
    let (d, is_cauchy) = match base {
        BaseKernel::Gauss { d } => (d, false),
        BaseKernel::Cauchy { d } => (d, true),
        BaseKernel::Stable2Gamma { .. } => {
            return Err(Error::domain(
                "time-changed sampling supports the Gauss and Cauchy bases",
            ));
        }
    };
    if !(d > 0.0) {
        return Err(Error::domain(format!("dimension must be positive, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma_d2 = Gamma::new(d / 2.0, 1.0)
        .map_err(|e| Error::domain(format!("gamma sampler construction failed: {e}")))?;
    let half = if is_cauchy { Some(StableLaw::new(0.5)?) } else { None };
    let b = law.beta();
    let values = (0..n)
        .map(|_| {
            let inner = match mode {
                TimeChangeMode::Subordinate => t.powf(1.0 / b) * kanter_draw(law, &mut rng),
                TimeChangeMode::InverseSubordinate => {
                    (b * (t.ln() - kanter_draw(law, &mut rng).ln())).exp()
                }
            };
            let time = match &half {
                // Cauchy at time T is Brownian at a 1/2-stable time S'_T = T² S'_1
                Some(h) => inner * inner * kanter_draw(h, &mut rng),
                None => inner,
            };
            gauss_radius(d, time, &gamma_d2, &mut rng)
        })
        .collect();
    let mode_tag = match mode {
        TimeChangeMode::Subordinate => "sub",
        TimeChangeMode::InverseSubordinate => "invsub",
    };
    let base_tag = if is_cauchy { "cauchy" } else { "gauss" };
    Ok(SampleBatch {
        values,
        law_tag: format!("timechanged({base_tag},d={d},beta={b},mode={mode_tag},t={t})"),
        seed,
        n,
    })
}

/// Kolmogorov–Smirnov distance between the batch and a reference CDF, with a
/// decimated comparison grid. The supremum is taken over both sides of every
/// jump of the empirical CDF.
pub fn compare_ecdf<F: Fn(f64) -> f64>(batch: &SampleBatch, reference_cdf: F) -> Result<EcdfReport> {
    if batch.n < 100 {
        return Err(Error::domain(format!(
            "ecdf comparison needs at least 100 samples, got {}",
            batch.n
        )));
    }
    let mut sorted = batch.values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if sorted[0] == sorted[n - 1] {
        return Err(Error::DegenerateSample);
    }
    let nf = n as f64;
    let mut ks = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let hi = (i + 1) as f64 / nf;
        let lo = i as f64 / nf;
        let fx = reference_cdf(x);
        // left limit of the reference at the jump
        let x_minus = x - 1e-9 * (1.0 + x.abs());
        let fxm = reference_cdf(x_minus);
        ks = ks.max((hi - fx).abs()).max((lo - fxm).abs());
    }
    let stride = (n / 200).max(1);
    let grid = sorted
        .iter()
        .enumerate()
        .step_by(stride)
        .map(|(i, &x)| EcdfPoint { x, empirical: (i + 1) as f64 / nf, reference: reference_cdf(x) })
        .collect();
    Ok(EcdfReport { ks_statistic: ks.clamp(0.0, 1.0), n, grid })
}

/// Mean and its standard error for a transformed sample.
pub fn mean_and_se(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let vals: Vec<f64> = values.collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
