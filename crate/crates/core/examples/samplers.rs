//! Draws from the three step processes and prints a few statistics.
//!
//! ```text
//! cargo run --release --example samplers
//! ```

use uav_search::metrics::five_number_summary;
use uav_search::samplers::{sample_direction, sample_gaussian, sample_levy, sample_uniform};
use uav_search::{RngStream, StochasticProcess};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 100_000;
    let mut rng = RngStream::new(42, 0);

    let gaussian: Vec<f64> = (0..n).map(|_| sample_gaussian(&mut rng, 1.0)).collect::<Result<_, _>>()?;
    let cauchy: Vec<f64> = (0..n).map(|_| sample_levy(&mut rng, 1.0, 1.0)).collect::<Result<_, _>>()?;
    let stable: Vec<f64> = (0..n).map(|_| sample_levy(&mut rng, 1.5, 1.0)).collect::<Result<_, _>>()?;
    let uniform: Vec<f64> = (0..n).map(|_| sample_uniform(&mut rng, 0.0, 1.0)).collect::<Result<_, _>>()?;

    println!("{:<24} {:>9} {:>9} {:>9} {:>9} {:>9}", "draw", "min", "q1", "median", "q3", "max");
    for (name, xs) in [
        ("gaussian sigma=1", &gaussian),
        ("levy lambda=1 (cauchy)", &cauchy),
        ("levy lambda=1.5", &stable),
        ("uniform [0,1)", &uniform),
    ] {
        let f = five_number_summary(xs)?;
        println!("{name:<24} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}", f[0], f[1], f[2], f[3], f[4]);
    }

    // Headings are two draws normalized to unit length.
    for p in [StochasticProcess::LEVY, StochasticProcess::BROWNIAN, StochasticProcess::UNIFORM] {
        let d = sample_direction(&mut rng, &p)?;
        println!("{} heading: ({:+.3}, {:+.3}), |d| = {:.12}", p.label(), d.x, d.y, d.norm());
    }
    Ok(())
}
