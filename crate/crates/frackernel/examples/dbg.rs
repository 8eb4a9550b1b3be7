fn main() {
    // pchip on ln(1+x), nodes 0.25 apart
    let xs: Vec<f64> = (0..80).map(|i| i as f64 * 0.25).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| (1.0 + x).ln()).collect();
    // hand inline: reuse crate? pchip is private. compute worst error via a tiny local mirror
    // Instead check quad.rs needle integral manually:
    let g = |x: f64| -0.5 * ((x - 7.0) / 1e-3f64).powi(2);
    let want = (2.0 * std::f64::consts::PI).sqrt().ln() + (1e-3f64).ln();
    println!("want log = {want}");
    let _ = (xs, ys);
}
