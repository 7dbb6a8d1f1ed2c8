//! Pointwise recurrence statistics: visit density of an orbit in a target
//! set, quantitative "well approximable" return density (how often the orbit
//! comes eps-close to its start), and the dissipativity probe showing that
//! averages of a compactly supported observable vanish under the free
//! translation action on Z.

use folnerlab::folner::{make_family, FamilySpec};
use folnerlab::recurrence::{dissipativity_probe, qwap_density, visit_density};
use folnerlab::systems::{Action, Observable, Point};

const SQRT2M1: f64 = 0.41421356237309515;

fn main() -> folnerlab::Result<()> {
    let act = Action::circle_rotation(SQRT2M1);
    let seq = make_family(&FamilySpec::Intervals);

    println!("visit density of the orbit of 0.1 in an arc of length 0.25:");
    for row in visit_density(&act, &Point::circle(0.1), &Observable::arc(0.25)?, &seq, &[100, 10_000, 1_000_000])? {
        println!("  n={:<8} hits={:<8} density={:.5} (limit 0.25)", row.n, row.hits, row.ratio);
    }

    println!("\nreturn density: how often d(T_g x, x) < eps = 0.05:");
    for row in qwap_density(&act, &Point::circle(0.2), 0.05, &seq, &[100, 10_000, 1_000_000])? {
        println!("  n={:<8} hits={:<8} density={:.5} (limit 2*eps = 0.1)", row.n, row.hits, row.ratio);
    }

    println!("\ndissipativity: translation on Z, tent observable supported on [-5,5]:");
    let trace = dissipativity_probe(
        &Action::int_line(),
        &Observable::tent(5)?,
        &Point::Line(0),
        &seq,
        &[10, 100, 1_000, 10_000],
    )?;
    for e in &trace.entries {
        println!("  n={:<6} average={:.2e}  (decays like O(1/n); no recurrence)", e.n, e.value);
    }
    Ok(())
}
