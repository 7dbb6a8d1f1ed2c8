//! Finite-dimensional mean ergodic theory: the vanishing-space/range duality
//! for a family of operators, the Cesaro average of a single power-bounded
//! operator converging to the projection onto its fixed space, the explicit
//! 2/(n*gamma) rate for an orthogonal matrix, and the Cox contraction
//! criterion for products of projections.

use folnerlab::meanlin::{
    cesaro_average, cox_check, duality_check, fixed_projection, spectral_norm, OperatorFamily,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

fn main() -> folnerlab::Result<()> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);

    // dim V(family) + dim range(adjoints) = d for random families
    let d = 5;
    let fam = OperatorFamily::new(
        (0..3)
            .map(|_| DMatrix::from_fn(d, d, |_, _| rng.gen::<f64>() * 2.0 - 1.0))
            .collect(),
    )?;
    let rep = duality_check(&fam);
    println!(
        "duality: dim V = {}, dim R(T*) = {}, d = {d}, defect = {:.2e}",
        rep.dim_vanishing, rep.dim_range_adjoint, rep.max_orthogonality_defect
    );

    // Cesaro averages of the cyclic permutation converge to the all-ones/3 projection
    let cycle = DMatrix::from_row_slice(3, 3, &[0., 0., 1., 1., 0., 0., 0., 1., 0.]);
    let p = fixed_projection(&cycle)?;
    println!("3-cycle fixed projection (should be 1/3 everywhere):\n{p:.4}");
    for n in [3usize, 10, 100, 1000] {
        let a_n = cesaro_average(&cycle, n, 1.0 + 1e-9)?;
        println!("  ||A_{n} - P|| = {:.3e}", spectral_norm(&(a_n - p.clone())));
    }

    // rate bound 2/(n*gamma) for a random rotation matrix
    let t = DMatrix::from_fn(4, 4, |_, _| rng.gen::<f64>() * 2.0 - 1.0).qr().q();
    let gamma = t
        .complex_eigenvalues()
        .iter()
        .filter(|l| (*l - nalgebra::Complex::new(1.0, 0.0)).norm() > 1e-8)
        .map(|l| (nalgebra::Complex::new(1.0, 0.0) - l).norm())
        .fold(f64::INFINITY, f64::min);
    let p = fixed_projection(&t)?;
    println!("orthogonal T: spectral gap gamma = {gamma:.4}");
    for n in [10usize, 100, 1000] {
        let err = spectral_norm(&(cesaro_average(&t, n, 1.0 + 1e-9)? - p.clone()));
        println!("  n={n:<5} ||A_n - P|| = {err:.3e}  bound 2/(n*gamma) = {:.3e}", 2.0 / (n as f64 * gamma));
    }

    // Contraction criterion: ||I - P1...Pl|| < 1 forces every operator in the
    // associated families to be the identity. Genuine (rank-deficient)
    // projections always land in the non-applicable branch.
    let p1 = DMatrix::from_row_slice(2, 2, &[1., 0., 0., 0.]);
    let p2 = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
    let strict = cox_check(&[p1, p2], &[])?;
    println!(
        "projections with deficient product: ||I - P1 P2|| = {:.4}, applicable: {}",
        strict.norm, strict.applicable
    );
    let trivial = cox_check(
        &[DMatrix::identity(2, 2)],
        &[OperatorFamily::new(vec![DMatrix::identity(2, 2)])?],
    )?;
    println!(
        "identity projection: norm = {:.4}, applicable: {}, max deviation from I: {:?}",
        trivial.norm, trivial.applicable, trivial.max_identity_deviation
    );
    Ok(())
}
