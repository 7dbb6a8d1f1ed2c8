//! A genuinely non-abelian example: the Bernoulli shift indexed by the
//! discrete Heisenberg group, with a lazily evaluated random configuration.
//! The averages of the coordinate-at-identity observable over Heisenberg
//! boxes converge to the symbol mean 1/2, and the translation identity
//! A(F, phi o T_h)(x) = A(Fh, phi)(x) holds exactly.

use folnerlab::averaging::{ergodic_average, translation_identity_check};
use folnerlab::folner::{make_family, FamilySpec};
use folnerlab::group::{GroupDescriptor, GroupElement};
use folnerlab::systems::{Action, Observable};

fn main() -> folnerlab::Result<()> {
    let act = Action::shift(GroupDescriptor::Heisenberg, 42)?;
    let phi = Observable::cylinder0();
    let x = act.base_point();
    let seq = make_family(&FamilySpec::HeisenbergBoxes);

    println!("Heisenberg Bernoulli shift, average of the symbol at the identity:");
    for n in [2usize, 4, 8, 16, 24] {
        let f = seq.set(n)?;
        let v = ergodic_average(&act, &f, &phi, &x)?;
        println!("  n={n:<3} |F_n|={:<8} average={v:.5} (limit 1/2)", f.cardinality());
    }

    let h = GroupElement::heisenberg(1, 2, -1);
    let id = translation_identity_check(&act, &seq.set(8)?, &phi, &x, &h)?;
    println!(
        "translation identity at h=(1,2,-1): |A(F, phi o T_h) - A(Fh, phi)| = {:.1e}",
        id.diff
    );
    Ok(())
}
