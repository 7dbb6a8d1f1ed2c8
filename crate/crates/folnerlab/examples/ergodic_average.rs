//! Ergodic averages of cos(2*pi*x) along an irrational circle rotation,
//! checked against the closed-form geometric (Dirichlet) sum, plus the
//! oscillation diagnostic over a trailing window of indices.

use folnerlab::averaging::average_trace;
use folnerlab::folner::{make_family, FamilySpec};
use folnerlab::systems::{Action, Observable, Point};

const GOLDEN: f64 = 0.6180339887498949;

fn dirichlet_average(alpha: f64, x: f64, n: usize) -> f64 {
    let tau = std::f64::consts::TAU;
    let (nr, ni) = ((tau * n as f64 * alpha).cos(), (tau * n as f64 * alpha).sin());
    let (dr, di) = ((tau * alpha).cos(), (tau * alpha).sin());
    let (num_r, num_i) = (nr - 1.0, ni);
    let (den_r, den_i) = (dr - 1.0, di);
    let dn = den_r * den_r + den_i * den_i;
    let (qr, qi) = (
        (num_r * den_r + num_i * den_i) / dn,
        (num_i * den_r - num_r * den_i) / dn,
    );
    let (xr, xi) = ((tau * x).cos(), (tau * x).sin());
    (xr * qr - xi * qi) / n as f64
}

fn main() -> folnerlab::Result<()> {
    let act = Action::circle_rotation(GOLDEN);
    let phi = Observable::cos(1);
    let x = Point::circle(0.25);
    let seq = make_family(&FamilySpec::Intervals);
    let indices: Vec<usize> = vec![10, 100, 1_000, 10_000, 100_000];

    let trace = average_trace(&act, &seq, &phi, &x, &indices, 3)?;
    println!("{:>8} {:>22} {:>22} {:>10}", "n", "average", "closed form", "|diff|");
    for e in &trace.entries {
        let oracle = dirichlet_average(GOLDEN, 0.25, e.n);
        println!(
            "{:>8} {:>22.16} {:>22.16} {:>10.2e}",
            e.n,
            e.value,
            oracle,
            (e.value - oracle).abs()
        );
    }
    println!("trailing oscillation: {:.3e}", trace.oscillation());
    Ok(())
}
