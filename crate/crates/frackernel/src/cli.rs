//! Command-line surface: evaluation tables, asymptotic-ratio validation
//! sweeps, moment checks and sample exports in CSV or JSON.

pub fn run<I: IntoIterator<Item = String>>(_args: I) -> i32 {
    2
}
