//! Averages indexed by a product group: two commuting coordinate rotations on
//! the 2-torus, averaged iteratively over intervals in each factor. For a
//! product observable the double average factorizes into two 1-D averages;
//! multiple averages over scalar multiples (n, 2n) are also shown.

use folnerlab::averaging::{iterated_product_average, multiple_average};
use folnerlab::folner::{make_family, FamilySpec};
use folnerlab::group::{int_interval, GroupElement};
use folnerlab::systems::{Action, Observable, Point};

const SQRT2M1: f64 = 0.41421356237309515;
const CBRT2M1: f64 = 0.2599210498948732;

fn main() -> folnerlab::Result<()> {
    let actions = [
        Action::torus_coord_rotation(2, 0, SQRT2M1)?,
        Action::torus_coord_rotation(2, 1, CBRT2M1)?,
    ];
    let seq = make_family(&FamilySpec::Intervals);
    let phi = Observable::product_of(&Observable::cos_coord(1, 0), &Observable::cos_coord(1, 1));
    let x = Point::Torus(vec![0.15, 0.65]);

    println!("{:>7} {:>22} {:>14}", "n", "double average", "|double|");
    for n in [10usize, 100, 1_000, 10_000] {
        let v = iterated_product_average(&actions, &[seq.clone(), seq.clone()], &phi, &x, n)?;
        println!("{n:>7} {v:>22.2e} {:>14.2e}", v.abs());
    }
    println!("(tends to 0 = product of the two factor limits)\n");

    let act = Action::circle_rotation(SQRT2M1);
    let shifted = Observable::affine_combination(1.0, &Observable::cos(1), &Observable::constant(1.0));
    let x = Point::circle(0.2);
    let g = [GroupElement::Int(1), GroupElement::Int(2)];
    println!("multiple average over (n, 2n) of (1+cos)(T^n x)(1+cos)(T^2n x):");
    for horizon in [100i64, 1_000, 10_000, 100_000] {
        let k = int_interval(0, horizon);
        let v = multiple_average(&act, &g, &k, &shifted, &x)?;
        println!("  |K| = {horizon:<7} average = {v:.6}  (limit 1)");
    }
    Ok(())
}
