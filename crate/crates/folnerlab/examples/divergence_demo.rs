//! Untempered Folner sequences can make pointwise averages of an unbounded
//! L^1 observable blow up. Starting from the intervals [0,n), each set is
//! enlarged by a single far-away orbit index where x -> x^{-1/2} is huge; the
//! boundary ratio stays O(1/n) while the average exceeds n.

use folnerlab::averaging::ergodic_average_with;
use folnerlab::folner::{adversarial_divergence_sequence, boundary_ratio};
use folnerlab::group::GroupElement;
use folnerlab::systems::{Action, Observable, Point};

const SQRT2M1: f64 = 0.41421356237309515;

fn main() -> folnerlab::Result<()> {
    let act = Action::circle_rotation(SQRT2M1);
    let phi = Observable::inverse_sqrt();
    let x0 = Point::circle(0.3);
    let seq = adversarial_divergence_sequence(&act, &phi, &x0, 10_000_000)?;

    println!("{:>4} {:>8} {:>16} {:>12} {:>12}", "n", "|F'_n|", "average", "ratio(+1)", "4/(n+1)");
    for n in [5usize, 10, 20, 30, 40, 50] {
        let f = seq.set(n)?;
        let avg = ergodic_average_with(&act, &f, &phi, &x0, true)?;
        let r = boundary_ratio(&f, &GroupElement::Int(1))?;
        println!(
            "{n:>4} {:>8} {:>16.2} {:>12} {:>12.4}",
            f.cardinality(),
            avg,
            r.to_string(),
            4.0 / (n as f64 + 1.0)
        );
    }
    println!("averages exceed n while the boundary ratio stays below 4/(n+1)");
    Ok(())
}
