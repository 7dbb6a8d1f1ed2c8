//! Khintchine-type recurrence: for a set A of positive measure (an arc on the
//! circle) and any eps > 0, the set of times g with
//! mu(A intersect T_g^{-1} A) > mu(A)^2 - eps has positive density. The
//! correlations here are computed by an exact overlap formula for arcs, so
//! the density estimate is Monte-Carlo-free.

use folnerlab::folner::{make_family, FamilySpec};
use folnerlab::recurrence::khintchine_density;
use folnerlab::systems::{Action, Observable};

const SQRT2M1: f64 = 0.41421356237309515;

fn main() -> folnerlab::Result<()> {
    let act = Action::circle_rotation(SQRT2M1);
    let arc = Observable::arc(0.3)?; // mu(A) = 0.3, mu(A)^2 = 0.09
    let seq = make_family(&FamilySpec::Intervals);

    println!("A = arc of length 0.3; density of {{g : corr(g) > 0.09 - eps}} in [0,n)");
    println!("{:>6} {:>9} {:>9} {:>10}", "eps", "n", "hits", "density");
    for eps in [0.001, 0.01, 0.05] {
        for n in [1_000usize, 100_000] {
            let d = khintchine_density(&act, &arc, eps, &seq, n, &act.sampler(), 10, 1)?;
            println!("{eps:>6} {n:>9} {:>9} {:>10.5}", d.hits, d.ratio);
        }
        // analytic density for the rotation: 2*(a - a^2 + eps) with a = 0.3
        println!("{:>26} analytic: {:.5}", "", 2.0 * (0.3 - 0.09 + eps));
    }
    Ok(())
}
