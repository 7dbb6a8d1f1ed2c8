//! Acceptance suite: one test per criterion, each printing a pass line with
//! the quantity it pinned down. Tolerances are fixed here, not configurable.

use std::time::Instant;

use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use folnerlab::averaging::{
    ergodic_average, ergodic_average_with, iterated_product_average, multiple_average,
    perturbation_bound_check, translation_identity_check,
};
use folnerlab::decomposition::{component_estimate, disintegration_check, ergodicity_score};
use folnerlab::folner::{
    adversarial_divergence_sequence, boundary_ratio, condition_ratios, is_summing_prefix,
    make_family, FamilySpec, DEFAULT_ELEMENT_BUDGET,
};
use folnerlab::group::{int_interval, FiniteSubset, GroupDescriptor, GroupElement};
use folnerlab::meanlin::{
    cesaro_average, duality_check, fixed_projection, spectral_norm, OperatorFamily,
};
use folnerlab::recurrence::{dissipativity_probe, khintchine_density, qwap_density, visit_density};
use folnerlab::systems::{Action, Observable, Point};

const GOLDEN: f64 = 0.6180339887498949; // (sqrt(5)-1)/2
const SQRT2M1: f64 = 0.41421356237309515;
const CBRT2M1: f64 = 0.2599210498948732;

fn lattice_unit(dim: usize, coord: usize) -> GroupElement {
    let mut v = vec![0i64; dim];
    v[coord] = 1;
    if dim == 1 {
        GroupElement::Int(1)
    } else {
        GroupElement::lattice(&v)
    }
}

#[test]
fn criterion_01_folner_exactness() {
    let start = Instant::now();
    for dim in 1..=3usize {
        let family = if dim == 1 {
            FamilySpec::Intervals
        } else {
            FamilySpec::Boxes { dim }
        };
        let seq = make_family(&family);
        (1..=100usize).into_par_iter().for_each(|n| {
            let f = seq.set(n).unwrap();
            for coord in 0..dim {
                let r = boundary_ratio(&f, &lattice_unit(dim, coord)).unwrap();
                assert_eq!(r, Ratio::new(2, n as u64), "d={dim} n={n} coord={coord}");
            }
        });
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("PASS criterion 1: boundary_ratio(e_i, [0,n)^d) = 2/n exactly, d<=3, n<=100 ({elapsed:?})");
}

#[test]
fn criterion_02_temperedness_diagnostics() {
    let intervals = make_family(&FamilySpec::Intervals);
    let djr = make_family(&FamilySpec::Djr);
    for n in 1..=50u64 {
        let ri = condition_ratios(&intervals, n as usize, DEFAULT_ELEMENT_BUDGET).unwrap();
        assert_eq!(ri.tempelman, Ratio::new(2 * n - 1, n));
        let rd = condition_ratios(&djr, n as usize, DEFAULT_ELEMENT_BUDGET).unwrap();
        assert_eq!(rd.tempelman, Ratio::new(2 * n + 1, n + 1));
    }
    // Shulman at n=5 against a brute-force union oracle over the block family
    let mut union = std::collections::BTreeSet::new();
    for k in 1..5i64 {
        for a in k * k..=k * k + k {
            for b in 25..=30i64 {
                union.insert(b - a);
            }
        }
    }
    assert_eq!(union.len(), 25);
    let r5 = condition_ratios(&djr, 5, DEFAULT_ELEMENT_BUDGET).unwrap();
    assert_eq!(r5.shulman, Ratio::new(25, 6));
    // block sequence is not nested
    let probes: FiniteSubset = [-1i64, 1].into_iter().map(GroupElement::Int).collect();
    assert!(!is_summing_prefix(&djr, 5, &probes).unwrap().nested);
    println!("PASS criterion 2: Tempelman (2n-1)/n and (2n+1)/(n+1) exact for n<=50; Shulman(5)=25/6; blocks not nested");
}

/// Closed-form average of cos(2 pi .) along the rotation orbit:
/// (1/n) Re( e^{2 pi i x} (e^{2 pi i n a} - 1)/(e^{2 pi i a} - 1) ).
fn dirichlet_average(alpha: f64, x: f64, n: usize) -> f64 {
    let tau = std::f64::consts::TAU;
    let rot = |t: f64| (f64::cos(tau * t), f64::sin(tau * t));
    let (nr, ni) = rot(n as f64 * alpha);
    let (dr, di) = rot(alpha);
    let (num_r, num_i) = (nr - 1.0, ni);
    let (den_r, den_i) = (dr - 1.0, di);
    let den_norm = den_r * den_r + den_i * den_i;
    let (qr, qi) = (
        (num_r * den_r + num_i * den_i) / den_norm,
        (num_i * den_r - num_r * den_i) / den_norm,
    );
    let (xr, xi) = rot(x);
    (xr * qr - xi * qi) / n as f64
}

#[test]
fn criterion_03_dirichlet_sum_agreement() {
    let act = Action::circle_rotation(GOLDEN);
    let phi = Observable::cos(1);
    let x = Point::circle(0.0);
    let mut worst = 0.0f64;
    for n in [10usize, 100, 1000, 10_000] {
        let engine = ergodic_average(&act, &int_interval(0, n as i64), &phi, &x).unwrap();
        let oracle = dirichlet_average(GOLDEN, 0.0, n);
        worst = worst.max((engine - oracle).abs());
        assert!((engine - oracle).abs() <= 1e-12, "n={n}");
        assert!(engine.abs() <= 1.0 / (n as f64 * (std::f64::consts::PI * GOLDEN).sin()) + 1e-12);
    }
    println!("PASS criterion 3: rotation cos average equals Dirichlet closed form (max dev {worst:.2e})");
}

#[test]
fn criterion_04_translation_identity() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xfe11);
    let systems: Vec<(Action, Observable)> = vec![
        (Action::circle_rotation(GOLDEN), Observable::cos(1)),
        (
            Action::torus_rotation(vec![SQRT2M1, CBRT2M1]),
            Observable::cos_coord(1, 0),
        ),
        (
            Action::shift(GroupDescriptor::Integers, 7).unwrap(),
            Observable::cylinder0(),
        ),
        (
            Action::shift(GroupDescriptor::Heisenberg, 8).unwrap(),
            Observable::cylinder0(),
        ),
        (
            Action::two_circle(SQRT2M1, CBRT2M1),
            Observable::arc(0.3).unwrap(),
        ),
        (Action::int_line(), Observable::tent(5).unwrap()),
    ];
    let mut max_diff = 0.0f64;
    for trial in 0..1000 {
        let (act, phi) = &systems[trial % systems.len()];
        let x = if let Ok(pts) = act.sampler().sample(1, trial as u64) {
            pts.into_iter().next().unwrap()
        } else {
            act.base_point()
        };
        let (f, h) = match act.descriptor() {
            GroupDescriptor::Heisenberg => {
                let f: FiniteSubset = (0..rng.gen_range(1..30))
                    .map(|_| {
                        GroupElement::heisenberg(
                            rng.gen_range(-5..5),
                            rng.gen_range(-5..5),
                            rng.gen_range(-5..5),
                        )
                    })
                    .collect();
                let h = GroupElement::heisenberg(
                    rng.gen_range(-5..5),
                    rng.gen_range(-5..5),
                    rng.gen_range(-5..5),
                );
                (f, h)
            }
            _ => {
                let f: FiniteSubset = (0..rng.gen_range(1..30))
                    .map(|_| GroupElement::Int(rng.gen_range(-50i64..50)))
                    .collect();
                (f, GroupElement::Int(rng.gen_range(-50i64..50)))
            }
        };
        if f.is_empty() {
            continue;
        }
        let id = translation_identity_check(act, &f, phi, &x, &h).unwrap();
        max_diff = max_diff.max(id.diff);
        assert!(id.diff <= 1e-12, "trial {trial} diff {}", id.diff);
    }
    println!("PASS criterion 4: translation identity diff <= 1e-12 on 1000 random instances (max {max_diff:.2e})");
}

#[test]
fn criterion_05_perturbation_bound() {
    let act = Action::circle_rotation(GOLDEN);
    let phi = Observable::cos(1);
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x9e3);
    for trial in 0..1000 {
        let x = Point::circle(rng.gen::<f64>());
        let f: FiniteSubset = (0..rng.gen_range(1..50))
            .map(|_| GroupElement::Int(rng.gen_range(-200i64..200)))
            .collect();
        let c: FiniteSubset = (0..rng.gen_range(1..50))
            .map(|_| GroupElement::Int(rng.gen_range(-200i64..200)))
            .collect();
        let r = perturbation_bound_check(&act, &f, &c, &phi, &x).unwrap();
        assert!(r.lhs <= r.bound + 1e-12, "trial {trial}");
    }
    println!("PASS criterion 5: |A(F)-A(C)| <= 2||phi|| |F^C|/|F| + 1e-12 on 1000 random instances");
}

#[test]
fn criterion_06_divergence_demo() {
    let start = Instant::now();
    let act = Action::circle_rotation(SQRT2M1);
    let phi = Observable::inverse_sqrt();
    let x0 = Point::circle(0.3);
    let seq = adversarial_divergence_sequence(&act, &phi, &x0, 10_000_000).unwrap();
    for n in 5..=50usize {
        let f = seq.set(n).unwrap();
        let avg = ergodic_average_with(&act, &f, &phi, &x0, true).unwrap();
        assert!(avg >= n as f64, "n={n} avg={avg}");
        for g in [1i64, -1] {
            let r = boundary_ratio(&f, &GroupElement::Int(g)).unwrap();
            let rf = *r.numer() as f64 / *r.denom() as f64;
            assert!(rf <= 4.0 / (n as f64 + 1.0) + 1e-15, "n={n} g={g} ratio={rf}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("PASS criterion 6: adapted sequence gives A(F'_n, x^-1/2) >= n with +-1 boundary ratio <= 4/(n+1), n in 5..=50 ({elapsed:?})");
}

#[test]
fn criterion_07_mean_ergodic_finite_dim() {
    // duality defect on 1000 random families
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xd0a1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let d = rng.gen_range(2..=8);
        let k = rng.gen_range(1..=5);
        let fam = OperatorFamily::new(
            (0..k)
                .map(|_| DMatrix::from_fn(d, d, |_, _| rng.gen::<f64>() * 2.0 - 1.0))
                .collect(),
        )
        .unwrap();
        let rep = duality_check(&fam);
        assert!(rep.dims_consistent());
        worst = worst.max(rep.max_orthogonality_defect);
        assert!(rep.max_orthogonality_defect <= 1e-10);
    }

    // 3-cycle projection = all-ones / 3
    let cycle = DMatrix::from_row_slice(3, 3, &[0., 0., 1., 1., 0., 0., 0., 1., 0.]);
    let p = fixed_projection(&cycle).unwrap();
    let err = (&p - DMatrix::from_element(3, 3, 1.0 / 3.0)).abs().max();
    assert!(err <= 1e-12, "projection error {err}");

    // Cesaro error for random orthogonal T against the eigen-gap bound
    let n = 1000usize;
    for _ in 0..20 {
        let d = rng.gen_range(2..=6);
        let t = DMatrix::from_fn(d, d, |_, _| rng.gen::<f64>() * 2.0 - 1.0)
            .qr()
            .q();
        let gamma = t
            .complex_eigenvalues()
            .iter()
            .filter(|l| (*l - nalgebra::Complex::new(1.0, 0.0)).norm() > 1e-8)
            .map(|l| (nalgebra::Complex::new(1.0, 0.0) - l).norm())
            .fold(f64::INFINITY, f64::min);
        if !gamma.is_finite() {
            continue;
        }
        let a_n = cesaro_average(&t, n, 1.0 + 1e-9).unwrap();
        let p = fixed_projection(&t).unwrap();
        let err = spectral_norm(&(a_n - p));
        assert!(err <= 2.0 / (n as f64 * gamma) + 1e-12, "err {err}");
    }
    println!("PASS criterion 7: duality defect <= 1e-10 (worst {worst:.2e}); cycle projection to 1e-12; Cesaro error within 2/(n*gamma)");
}

#[test]
fn criterion_08_product_averages_factorize() {
    let n = 1000usize;
    let actions = [
        Action::torus_coord_rotation(2, 0, SQRT2M1).unwrap(),
        Action::torus_coord_rotation(2, 1, CBRT2M1).unwrap(),
    ];
    let seq = make_family(&FamilySpec::Intervals);
    let phi = Observable::product_of(&Observable::cos_coord(1, 0), &Observable::cos_coord(1, 1));
    let x = Point::Torus(vec![0.15, 0.65]);
    let double =
        iterated_product_average(&actions, &[seq.clone(), seq], &phi, &x, n).unwrap();
    let product = dirichlet_average(SQRT2M1, 0.15, n) * dirichlet_average(CBRT2M1, 0.65, n);
    let dev = (double - product).abs();
    assert!(dev <= 1e-12, "deviation {dev}");
    println!("PASS criterion 8: torus(2) double average factorizes into 1-D Dirichlet sums (dev {dev:.2e})");
}

#[test]
fn criterion_09_khintchine_density() {
    let act = Action::circle_rotation(SQRT2M1);
    let phi = Observable::arc(0.3).unwrap();
    let seq = make_family(&FamilySpec::Intervals);
    let d = khintchine_density(&act, &phi, 0.01, &seq, 100_000, &act.sampler(), 10, 1).unwrap();
    // analytic density 2(a - a^2 + eps) = 0.44 for a = 0.3, eps = 0.01
    assert!((d.ratio - 0.44).abs() <= 0.02, "ratio {}", d.ratio);
    assert!(d.ratio > 0.0);
    println!("PASS criterion 9: Khintchine arc density {} within 0.02 of 0.44 and positive", d.ratio);
}

#[test]
fn criterion_10_disintegration() {
    let act = Action::two_circle(SQRT2M1, CBRT2M1);
    let seq = make_family(&FamilySpec::Intervals);
    let indicator = Observable::component_indicator(0);

    // component estimates of the indicator are exactly 0/1
    let e0 = component_estimate(
        &act,
        &seq,
        &Point::TwoCircle { component: 0, x: 0.2 },
        std::slice::from_ref(&indicator),
        1000,
    )
    .unwrap();
    assert_eq!(e0.estimates[0], 1.0);
    let e1 = component_estimate(
        &act,
        &seq,
        &Point::TwoCircle { component: 1, x: 0.7 },
        std::slice::from_ref(&indicator),
        1000,
    )
    .unwrap();
    assert_eq!(e1.estimates[0], 0.0);

    // disintegration identity at 1e4 samples
    let rows = disintegration_check(
        &act,
        &seq,
        &act.sampler(),
        std::slice::from_ref(&indicator),
        2000,
        10_000,
        5,
    )
    .unwrap();
    assert!(rows[0].diff <= 0.02, "diff {}", rows[0].diff);

    // 0-1-law scoring: tight within one component, ~0.5 across components
    let arc = Observable::arc(0.3).unwrap();
    let within: Vec<Point> = (0..10)
        .map(|i| Point::TwoCircle {
            component: 0,
            x: (0.05 + 0.09 * i as f64) % 1.0,
        })
        .collect();
    let score_within =
        ergodicity_score(&act, &seq, &within, std::slice::from_ref(&arc), 100_000).unwrap();
    assert!(score_within <= 0.02, "within-component score {score_within}");

    let across: Vec<Point> = (0..10)
        .map(|i| Point::TwoCircle {
            component: (i % 2) as u8,
            x: (0.05 + 0.09 * i as f64) % 1.0,
        })
        .collect();
    let score_across = ergodicity_score(
        &act,
        &seq,
        &across,
        std::slice::from_ref(&indicator),
        1000,
    )
    .unwrap();
    assert!((score_across - 0.5).abs() <= 0.01, "across score {score_across}");
    println!("PASS criterion 10: indicator moments exact; disintegration diff {:.3}; scores {score_within:.4} within / {score_across:.2} across", rows[0].diff);
}

#[test]
fn criterion_11_multiple_averages() {
    let act = Action::circle_rotation(SQRT2M1);
    let x = Point::circle(0.2);
    let phi = Observable::affine_combination(1.0, &Observable::cos(1), &Observable::constant(1.0));
    let k = int_interval(0, 100_000);
    let g = [GroupElement::Int(1), GroupElement::Int(2)];
    let engine = multiple_average(&act, &g, &k, &phi, &x).unwrap();

    // quadrature oracle for the limit: int_0^1 (1+cos(2pi(x+t)))(1+cos(2pi(x+2t))) dt
    let tau = std::f64::consts::TAU;
    let m = 100_000usize;
    let mut acc = 0.0;
    for j in 0..m {
        let t = (j as f64 + 0.5) / m as f64;
        acc += (1.0 + (tau * (0.2 + t)).cos()) * (1.0 + (tau * (0.2 + 2.0 * t)).cos());
    }
    let oracle = acc / m as f64;
    assert!((oracle - 1.0).abs() < 1e-6, "quadrature oracle {oracle}");
    assert!((engine - 1.0).abs() <= 1e-2, "engine {engine}");
    println!("PASS criterion 11: multiple average {engine:.4} within 1e-2 of quadrature limit 1");
}

#[test]
fn criterion_12_recurrence_densities() {
    let act = Action::circle_rotation(SQRT2M1);
    let seq = make_family(&FamilySpec::Intervals);

    let visits = visit_density(
        &act,
        &Point::circle(0.1),
        &Observable::arc(0.25).unwrap(),
        &seq,
        &[100_000],
    )
    .unwrap();
    assert!((visits[0].ratio - 0.25).abs() <= 0.01, "visit {}", visits[0].ratio);

    let returns = qwap_density(&act, &Point::circle(0.2), 0.05, &seq, &[100_000]).unwrap();
    assert!((returns[0].ratio - 0.1).abs() <= 0.01, "qwap {}", returns[0].ratio);

    let line = Action::int_line();
    let tent = Observable::tent(5).unwrap();
    let trace =
        dissipativity_probe(&line, &tent, &Point::Line(0), &seq, &[10, 100, 1000, 10_000])
            .unwrap();
    for e in &trace.entries {
        assert!(e.value <= 11.0 / e.n as f64, "n={} value={}", e.n, e.value);
    }
    println!(
        "PASS criterion 12: visit {} ~ 0.25, qwap {} ~ 0.10, dissipative decay <= 11/n",
        visits[0].ratio, returns[0].ratio
    );
}

#[test]
fn criterion_13_reproducibility_across_thread_counts() {
    use folnerlab::experiment::{catalog, default_config, run};
    for entry in catalog() {
        let cfg = default_config(entry.name).unwrap();
        let mut outputs: Vec<Vec<u8>> = Vec::new();
        for threads in [1usize, 4] {
            let dir = tempfile::tempdir().unwrap();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let paths = pool.install(|| run(&cfg, dir.path())).unwrap();
            outputs.push(std::fs::read(&paths[0]).unwrap());
        }
        assert_eq!(
            outputs[0], outputs[1],
            "outputs differ across thread counts for `{}`",
            entry.name
        );
    }
    println!("PASS criterion 13: byte-identical outputs for thread counts 1 and 4 across all catalog experiments");
}
