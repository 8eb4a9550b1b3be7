//! Internal quadrature machinery: adaptive Gauss–Kronrod integration, a
//! peak-located exp-shifted integrator for log-space integrands, golden
//! section search and monotone (Fritsch–Carlson) cubic interpolation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 15-point Kronrod abscissae / weights and the embedded 7-point Gauss
// weights (QUADPACK dqk15 constants).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_7,
    0.949_107_912_342_758_524_526_189_7,
    0.864_864_423_359_769_072_789_712_8,
    0.741_531_185_599_394_439_863_864_8,
    0.586_087_235_467_691_130_294_144_8,
    0.405_845_151_377_397_166_906_606_4,
    0.207_784_955_007_898_467_600_689_4,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_0,
    0.063_092_092_629_978_553_290_700_7,
    0.104_790_010_322_250_183_839_876_3,
    0.140_653_259_715_525_918_745_189_6,
    0.169_004_726_639_267_902_826_583_4,
    0.190_350_578_064_785_409_913_256_4,
    0.204_432_940_075_298_892_414_161_6,
    0.209_482_141_084_727_828_012_999_2,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_4,
    0.279_705_391_489_276_667_901_467_8,
    0.381_830_050_505_118_944_950_369_8,
    0.417_959_183_673_469_387_755_102_0,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct GkEstimate {
    pub value: f64,
    pub err: f64,
}

/// One 15-point Gauss–Kronrod panel on [a, b].
pub(crate) fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> GkEstimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = 0.0;
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    gauss += fc * WG[3];
    let mean = kronrod * 0.5;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    asc *= half.abs();
    let value = kronrod * half;
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * 1.0f64.min((200.0 * err / asc).powf(1.5));
    }
    GkEstimate { value, err }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AdaptiveResult {
    pub value: f64,
    pub err: f64,
    pub converged: bool,
}

/// Adaptive Gauss–Kronrod over a list of initial segments. Refines the
/// segment with the largest error estimate until the global target
/// max(rel_tol·|I|, abs_tol) is met, a segment budget derived from
/// `max_depth` runs out, or no segment can be split further.
pub(crate) fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    edges: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_depth: u32,
) -> AdaptiveResult {
    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    let mut total = 0.0;
    let mut err = 0.0;
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let est = gk15(f, w[0], w[1]);
        total += est.value;
        err += est.err;
        heap.push(Segment { a: w[0], b: w[1], value: est.value, err: est.err, depth: 0 });
    }
    let budget = 2048usize;
    let mut splits = 0usize;
    while err + frozen_err > rel_tol * (total + frozen_value).abs() + abs_tol {
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= max_depth || splits >= budget {
            frozen_value += worst.value;
            frozen_err += worst.err;
            total -= worst.value;
            err -= worst.err;
            continue;
        }
        splits += 1;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            frozen_value += worst.value;
            frozen_err += worst.err;
            total -= worst.value;
            err -= worst.err;
            continue;
        }
        total -= worst.value;
        err -= worst.err;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let est = gk15(f, a, b);
            total += est.value;
            err += est.err;
            heap.push(Segment { a, b, value: est.value, err: est.err, depth: worst.depth + 1 });
        }
    }
    let value = total + frozen_value;
    let e = err + frozen_err;
    AdaptiveResult { value, err: e, converged: e <= rel_tol * value.abs() + abs_tol }
}

/// Maximize `g` on [a, b] by golden section search.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(g: &F, mut a: f64, mut b: f64, iters: u32) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..iters {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INVPHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INVPHI * (b - a);
            gd = g(d);
        }
    }
    if gc > gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Find x in (lo, hi) where `g(x) = level`, assuming g(inside) > level and
/// g(outside) <= level; `inside`/`outside` are the bracket endpoints.
fn bisect_level<F: Fn(f64) -> f64>(g: &F, mut outside: f64, mut inside: f64, level: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (outside + inside);
        if g(mid) > level {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    outside
}

pub(crate) struct PeakQuadOpts {
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Integrand values below exp(-drop) of the peak are cut away.
    pub drop: f64,
    /// Hard clamp for the right window edge (HardTruncate tail policy).
    pub hard_hi: Option<f64>,
}

pub(crate) struct PeakQuad {
    /// Location of the integrand maximum.
    pub peak: f64,
    /// g at the peak; the returned body integral is of exp(g - shift).
    pub shift: f64,
    /// Integral of exp(g - shift) over the detected support.
    pub body: f64,
    pub abs_err: f64,
    pub converged: bool,
    /// Right edge of the integrated window (for tail completion).
    pub cut_hi: f64,
    /// Value of g - shift at the right edge.
    pub g_at_cut_hi: f64,
}

/// Integrate exp(g(x)) dx over the real line in shifted form. `seeds` are
/// candidate locations of structure (integrand peaks, profile knees, the
/// density mode); the window grows outward from them until g falls `drop`
/// below the located maximum, then the support is trimmed back and integrated
/// adaptively with the seeds as panel edges.
pub(crate) fn peak_integrate<F: Fn(f64) -> f64>(g: &F, seeds: &[f64], opts: &PeakQuadOpts) -> PeakQuad {
    let finite_seeds: Vec<f64> = seeds.iter().copied().filter(|s| s.is_finite()).collect();
    let (smin, smax) = finite_seeds
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let mut lo = smin - 4.0;
    let mut hi = smax + 4.0;
    if let Some(h) = opts.hard_hi {
        hi = hi.min(h);
        lo = lo.min(h - 1.0);
    }

    // Coarse scan, then refine the best point by golden section.
    let n = 512usize;
    let mut xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let mut gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut ib = 0usize;
    for (i, &v) in gs.iter().enumerate() {
        if v > gs[ib] {
            ib = i;
        }
    }
    let mut m = gs[ib];

    // Expand outward while the integrand is still significant at the edges.
    let step = 3.0;
    let mut it = 0;
    while gs[0] > m - opts.drop && it < 1200 {
        lo -= step;
        let v = g(lo);
        xs.insert(0, lo);
        gs.insert(0, v);
        if v > m {
            m = v;
        }
        it += 1;
    }
    it = 0;
    let hard_capped = opts.hard_hi.is_some();
    while *gs.last().unwrap() > m - opts.drop && it < 4000 && !hard_capped {
        hi += step;
        let v = g(hi);
        xs.push(hi);
        gs.push(v);
        if v > m {
            m = v;
        }
        it += 1;
    }
    ib = 0;
    for (i, &v) in gs.iter().enumerate() {
        if v > gs[ib] {
            ib = i;
        }
    }
    let mut peak = xs[ib];
    m = gs[ib];
    // Refine around the scan maximum and around every seed: a needle much
    // narrower than the scan spacing is invisible to the scan but marked by
    // its seed.
    let spacing = (hi - lo) / n as f64;
    let bl = if ib > 0 { xs[ib - 1] } else { xs[0] };
    let br = if ib + 1 < xs.len() { xs[ib + 1] } else { *xs.last().unwrap() };
    let mut brackets = vec![(bl, br)];
    for &s in &finite_seeds {
        brackets.push((s - spacing, s + spacing));
    }
    for (a, b) in brackets {
        if b > a {
            let (xp, gp) = golden_max(g, a, b, 80);
            if gp > m {
                peak = xp;
                m = gp;
            }
        }
    }
    if !m.is_finite() {
        return PeakQuad {
            peak,
            shift: f64::NEG_INFINITY,
            body: 0.0,
            abs_err: 0.0,
            converged: true,
            cut_hi: hi,
            g_at_cut_hi: f64::NEG_INFINITY,
        };
    }

    // Trim the window back to the detected support: bisect between each
    // window edge and the outermost point known to sit above the drop level
    // (a scan sample if any, the peak otherwise).
    let level = m - opts.drop;
    let first_above = gs.iter().position(|&v| v > level);
    let last_above = gs.iter().rposition(|&v| v > level);
    let inside_lo = first_above.map(|i| xs[i]).unwrap_or(peak).min(peak);
    let inside_hi = last_above.map(|i| xs[i]).unwrap_or(peak).max(peak);
    let cut_lo = if g(xs[0]) > level { xs[0] } else { bisect_level(g, xs[0], inside_lo, level) };
    let cut_hi = if g(*xs.last().unwrap()) > level {
        *xs.last().unwrap()
    } else {
        bisect_level(g, *xs.last().unwrap(), inside_hi, level)
    };

    let mut edges: Vec<f64> = vec![cut_lo, cut_hi, peak];
    edges.extend(finite_seeds.iter().copied());
    // A few points around the peak keep narrow needles resolved from the start.
    for w in [0.5, 2.0] {
        edges.push(peak - w);
        edges.push(peak + w);
    }
    edges.retain(|&x| (cut_lo..=cut_hi).contains(&x));
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));

    let f = |x: f64| {
        let v = g(x) - m;
        if v > -745.0 {
            v.exp()
        } else {
            0.0
        }
    };
    let res = adaptive(&f, &edges, opts.rel_tol, 1e-280, opts.max_depth);
    PeakQuad {
        peak,
        shift: m,
        body: res.value,
        abs_err: res.err,
        converged: res.converged,
        cut_hi,
        g_at_cut_hi: g(cut_hi) - m,
    }
}

/// Shape-preserving three-point endpoint slope (Fritsch–Carlson boundary
/// treatment).
fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolant.
#[derive(Debug, Clone)]
pub(crate) struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n);
        let mut d = vec![0.0; n - 1];
        for i in 0..n - 1 {
            d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut slopes = vec![0.0; n];
        if n == 2 {
            return Pchip { slopes: vec![d[0], d[0]], xs, ys };
        }
        slopes[0] = edge_slope(xs[1] - xs[0], xs[2] - xs[1], d[0], d[1]);
        slopes[n - 1] = edge_slope(
            xs[n - 1] - xs[n - 2],
            xs[n - 2] - xs[n - 3],
            d[n - 2],
            d[n - 3],
        );
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                slopes[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        Pchip { xs, ys, slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.slopes[0] * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.slopes[n - 1] * (x - self.xs[n - 1]);
        }
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.xs[lo + 1] - self.xs[lo];
        let t = (x - self.xs[lo]) / h;
        let (y0, y1) = (self.ys[lo], self.ys[lo + 1]);
        let (m0, m1) = (self.slopes[lo] * h, self.slopes[lo + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_exact() {
        // Degree-13 polynomials are integrated exactly by G7K15.
        let f = |x: f64| 3.0 * x.powi(5) - x.powi(2) + 1.0;
        let est = gk15(&f, -1.0, 2.0);
        let exact = 0.5 * (64.0 - 1.0) - (8.0 + 1.0) / 3.0 + 3.0;
        assert!((est.value - exact).abs() < 1e-12);
    }

    #[test]
    fn adaptive_smooth() {
        let f = |x: f64| x.sin();
        let r = adaptive(&f, &[0.0, 5.0 * std::f64::consts::PI], 1e-12, 0.0, 40);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_endpoint_spike() {
        let f = |x: f64| (-100.0 * x).exp() * 100.0;
        let r = adaptive(&f, &[0.0, 50.0], 1e-10, 0.0, 40);
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn peak_integral_gaussian() {
        // ∫ exp(-(x-3)^2/2) dx = sqrt(2π), huge offset handled by the shift.
        let g = |x: f64| -0.5 * (x - 3.0) * (x - 3.0) - 5000.0;
        let r = peak_integrate(&g, &[0.0], &PeakQuadOpts { rel_tol: 1e-11, max_depth: 40, drop: 45.0, hard_hi: None });
        let log_val = r.shift + r.body.ln();
        let want = 0.5 * (2.0 * std::f64::consts::PI).ln() - 5000.0;
        assert!((log_val - want).abs() < 1e-9, "{log_val} vs {want}");
    }

    #[test]
    fn peak_integral_narrow_needle_far_from_seeds() {
        // Needle of width 1e-3 at x = 7, seeds only at 0: the scan + golden
        // refinement must still find it.
        let g = |x: f64| -0.5 * ((x - 7.0) / 1e-3).powi(2);
        let r = peak_integrate(&g, &[0.0, 7.0], &PeakQuadOpts { rel_tol: 1e-10, max_depth: 40, drop: 45.0, hard_hi: None });
        let want = (2.0 * std::f64::consts::PI).sqrt().ln() + (1e-3f64).ln();
        assert!(((r.shift + r.body.ln()) - want).abs() < 1e-8);
    }

    #[test]
    fn pchip_monotone_preserving() {
        let xs: Vec<f64> = (0..80).map(|i| i as f64 * 0.25).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (1.0 + x).ln()).collect();
        let p = Pchip::new(xs, ys);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..400 {
            let x = 19.75 * i as f64 / 399.0;
            let y = p.eval(x);
            assert!(y >= prev - 1e-12);
            assert!((y - (1.0 + x).ln()).abs() < 2e-3);
            prev = y;
        }
    }
}
