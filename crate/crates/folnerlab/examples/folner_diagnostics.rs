//! Exact invariance and temperedness diagnostics for three Folner families:
//! intervals in Z, boxes in the discrete Heisenberg group, and the block
//! family F_n = {n^2, ..., n^2 + n} which is Tempelman- but not
//! Shulman-bounded uniformly and is not nested.

use folnerlab::folner::{
    boundary_ratio, condition_ratios, is_summing_prefix, make_family, FamilySpec,
    DEFAULT_ELEMENT_BUDGET,
};
use folnerlab::group::{FiniteSubset, GroupElement};

fn main() -> folnerlab::Result<()> {
    let probes: FiniteSubset = [-1i64, 1].into_iter().map(GroupElement::Int).collect();

    for (label, spec) in [
        ("intervals [0,n) in Z", FamilySpec::Intervals),
        ("blocks {n^2..n^2+n} in Z", FamilySpec::Djr),
    ] {
        println!("{label}");
        println!("{:>4} {:>6} {:>12} {:>12} {:>12}", "n", "|F_n|", "|1+F^F|/|F|", "tempelman", "shulman");
        let seq = make_family(&spec);
        for n in [1usize, 2, 5, 10, 20, 50] {
            let f = seq.set(n)?;
            let b = boundary_ratio(&f, &GroupElement::Int(1))?;
            let r = condition_ratios(&seq, n, DEFAULT_ELEMENT_BUDGET)?;
            println!(
                "{n:>4} {:>6} {:>12} {:>12} {:>12}",
                f.cardinality(),
                b.to_string(),
                r.tempelman.to_string(),
                r.shulman.to_string()
            );
        }
        let rep = is_summing_prefix(&seq, 5, &probes)?;
        println!("  nested up to n=5: {}\n", rep.nested);
    }

    println!("boxes in the discrete Heisenberg group");
    let seq = make_family(&FamilySpec::HeisenbergBoxes);
    for n in [1usize, 2, 4, 8] {
        let f = seq.set(n)?;
        let g = GroupElement::heisenberg(1, 0, 0);
        let b = boundary_ratio(&f, &g)?;
        println!("  n={n:<3} |F_n|={:<8} |(1,0,0)F^F|/|F| = {b}", f.cardinality());
    }
    Ok(())
}
