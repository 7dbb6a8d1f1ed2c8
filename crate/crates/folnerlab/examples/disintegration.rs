//! Empirical ergodic disintegration on a deliberately non-ergodic system: two
//! disjoint circles, each rotated irrationally. Per-point averages recover the
//! component ("fiber") means, averaging those over random starts recovers the
//! space mean, and the 0-1-law score separates ergodic from non-ergodic data.

use folnerlab::decomposition::{component_estimate, disintegration_check, ergodicity_score};
use folnerlab::folner::{make_family, FamilySpec};
use folnerlab::systems::{Action, Observable, Point};

const SQRT2M1: f64 = 0.41421356237309515;
const CBRT2M1: f64 = 0.2599210498948732;

fn main() -> folnerlab::Result<()> {
    let act = Action::two_circle(SQRT2M1, CBRT2M1);
    let seq = make_family(&FamilySpec::Intervals);
    let indicator = Observable::component_indicator(0);

    for (label, x) in [
        ("start on component 0", Point::TwoCircle { component: 0, x: 0.2 }),
        ("start on component 1", Point::TwoCircle { component: 1, x: 0.7 }),
    ] {
        let est = component_estimate(&act, &seq, &x, std::slice::from_ref(&indicator), 2000)?;
        println!("{label}: time average of 1_{{component 0}} = {}", est.estimates[0]);
    }

    let rows = disintegration_check(
        &act,
        &seq,
        &act.sampler(),
        std::slice::from_ref(&indicator),
        2000,
        10_000,
        5,
    )?;
    for r in &rows {
        println!(
            "disintegration: E[time avg] = {:.4}, space mean = {:.4}, diff = {:.1e}",
            r.component_mean, r.space_mean, r.diff
        );
    }

    let arc = Observable::arc(0.3)?;
    let within: Vec<Point> = (0..10)
        .map(|i| Point::TwoCircle { component: 0, x: 0.05 + 0.09 * i as f64 })
        .collect();
    let across: Vec<Point> = (0..10)
        .map(|i| Point::TwoCircle { component: (i % 2) as u8, x: 0.05 + 0.09 * i as f64 })
        .collect();
    println!(
        "ergodicity score within one component:  {:.4} (near 0: looks ergodic)",
        ergodicity_score(&act, &seq, &within, std::slice::from_ref(&arc), 100_000)?
    );
    println!(
        "ergodicity score across both components: {:.4} (far from 0: not ergodic)",
        ergodicity_score(&act, &seq, &across, std::slice::from_ref(&indicator), 1000)?
    );
    Ok(())
}
