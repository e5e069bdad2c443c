//! Error of one corrected layer on the 1x6 Ising chain as a function of time
//! for three sample counts: slope 3 while sampling noise dominates, slope 6
//! once the bias takes over, and a crossover that moves left as M grows.
//!
//!     cargo run --release --example two_slope > two_slope.csv

use steer::config::Method;
use steer::experiments::{crossover, fit_slope, Experiment};
use steer::formulas::suzuki;
use steer::models::{tf_ising, LatticeSpec};
use steer::sampler::SteerMode;
use steer::simulator::StateVector;

fn main() -> steer::Result<()> {
    let model = tf_ising(LatticeSpec::line(6)?, 1.0, 1.0)?;
    let f = suzuki(2, &model.partition)?;
    let mut exp = Experiment::new(model, f, StateVector::basis(6, 13)?, 42)?;
    let method = Method::Steer(SteerMode::Standard);
    exp.prepare(&[method])?;

    let times: Vec<f64> = (0..18).map(|i| 0.005 * 60f64.powf(i as f64 / 17.0)).collect();
    println!("t,trotter,m100,m1000,m10000");
    let trotter: Vec<f64> = times.iter().map(|&t| exp.error(Method::Trotter, t, 1, 1)).collect::<Result<_, _>>()?;
    let mut curves = Vec::new();
    for m in [100, 1000, 10_000] {
        let pts: Vec<(f64, f64)> = times
            .iter()
            .map(|&t| exp.error(method, t, 1, m).map(|e| (t, e)))
            .collect::<Result<_, _>>()?;
        eprintln!(
            "M={m:>5}: slope {:.2} below t=0.02, {:.2} above t=0.1, crossover t={:.3}",
            fit_slope(&pts, (0.0, 0.02))?,
            fit_slope(&pts, (0.1, 1.0))?,
            crossover(&pts)?
        );
        curves.push(pts);
    }
    for (i, t) in times.iter().enumerate() {
        println!("{t:.6e},{:.6e},{:.6e},{:.6e},{:.6e}", trotter[i], curves[0][i].1, curves[1][i].1, curves[2][i].1);
    }
    Ok(())
}
