//! Recurrence diagnostics: autocorrelations, Khintchine density sets,
//! Poincare visit densities, quasi-weakly-almost-periodic return densities,
//! and the dissipativity probe.
//!
//! Correlations use an exact analytic oracle whenever the (system,
//! observable) pair is in the library (circle rotation with trig or arc
//! observables); otherwise Monte Carlo with a seed matched per group
//! element, so the membership boundary is not noise-flipped inconsistently
//! across elements.

use crate::averaging::{average_trace, tree_sum, AverageTrace, DEFAULT_OSCILLATION_WINDOW};
use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::GroupElement;
use crate::systems::{Action, MeasureSampler, Observable, ObservableKind, Point};

/// Visit/return density at one Folner index, with running envelopes across
/// the index range it was computed in. The lower envelope is a finite-range
/// stand-in for lower Banach density, never a limit claim.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub n: usize,
    pub cardinality: usize,
    pub hits: usize,
    pub ratio: f64,
    pub lower_envelope: f64,
    pub upper_envelope: f64,
}

fn density_list(per_index: Vec<(usize, usize, usize)>) -> Vec<DensityEstimate> {
    let mut out = Vec::with_capacity(per_index.len());
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for (n, hits, cardinality) in per_index {
        let ratio = hits as f64 / cardinality as f64;
        lower = lower.min(ratio);
        upper = upper.max(ratio);
        out.push(DensityEstimate {
            n,
            cardinality,
            hits,
            ratio,
            lower_envelope: lower,
            upper_envelope: upper,
        });
    }
    out
}

fn rotation_angle(action: &Action, g: &GroupElement) -> Option<f64> {
    // frac(g * alpha) for the circle rotation
    if let (true, GroupElement::Int(n)) = (action.is_integer_action(), g) {
        action.rotation_number().map(|alpha| {
            let t = (*n as f64 * alpha) % 1.0;
            if t < 0.0 {
                t + 1.0
            } else {
                t
            }
        })
    } else {
        None
    }
}

/// Closed-form autocorrelation int phi(x) phi(T_g x) dmu(x), when available.
pub fn exact_correlation(action: &Action, phi: &Observable, g: &GroupElement) -> Option<f64> {
    let theta = rotation_angle(action, g)?;
    let tau = std::f64::consts::TAU;
    match *phi.kind() {
        ObservableKind::Constant(c) => Some(c * c),
        // int cos(2 pi k x) cos(2 pi k (x + theta)) dx = cos(2 pi k theta) / 2
        ObservableKind::Cos { k } if k >= 1 => Some((tau * k as f64 * theta).cos() / 2.0),
        ObservableKind::Sin { k } if k >= 1 => Some((tau * k as f64 * theta).cos() / 2.0),
        // |[0,a) intersect ([0,a) - theta)| = max(a-theta,0) + max(theta-(1-a),0)
        ObservableKind::Arc { a } => {
            Some((a - theta).max(0.0) + (theta - (1.0 - a)).max(0.0))
        }
        _ => None,
    }
}

/// Estimate int phi(x) phi(T_g x) dmu(x); exact oracle when available, else
/// Monte Carlo over `count` sampled points with the given seed.
pub fn correlation(
    action: &Action,
    phi: &Observable,
    g: &GroupElement,
    sampler: &MeasureSampler,
    count: usize,
    seed: u64,
) -> Result<f64> {
    phi.require_bounded()?;
    if let Some(exact) = exact_correlation(action, phi, g) {
        return Ok(exact);
    }
    let points = sampler.sample(count, seed)?;
    let values: Result<Vec<f64>> = points
        .iter()
        .map(|x| Ok(phi.evaluate(x) * phi.evaluate(&action.apply(g, x)?)))
        .collect();
    Ok(tree_sum(&values?) / count as f64)
}

/// Membership count of the Khintchine set
/// H(phi, eps) = {g : corr(g) > (int phi dmu)^2 - eps} within F_n.
pub fn khintchine_density(
    action: &Action,
    phi: &Observable,
    eps: f64,
    seq: &FolnerSequence,
    n: usize,
    sampler: &MeasureSampler,
    count: usize,
    seed: u64,
) -> Result<DensityEstimate> {
    phi.require_bounded()?;
    if eps <= 0.0 {
        return Err(Error::InvalidSpec("Khintchine eps must be > 0".into()));
    }
    let mean = match phi.exact_integral() {
        Some(m) => m,
        None => {
            let points = sampler.sample(count, seed)?;
            tree_sum(&points.iter().map(|p| phi.evaluate(p)).collect::<Vec<_>>())
                / count as f64
        }
    };
    if mean <= 0.0 {
        return Err(Error::NonpositiveMean(phi.label().to_string()));
    }
    let threshold = mean * mean - eps;
    let f_n = seq.set(n)?;
    let mut hits = 0usize;
    for (i, g) in f_n.iter().enumerate() {
        // per-g matched seed so the boundary is stable across runs
        let g_seed = seed
            .wrapping_mul(0x9e3779b97f4a7c15)
            .wrapping_add(i as u64);
        if correlation(action, phi, g, sampler, count, g_seed)? > threshold {
            hits += 1;
        }
    }
    Ok(density_list(vec![(n, hits, f_n.cardinality())]).pop().unwrap())
}

/// Visit density of {g in F_n : T_g x in Sigma} for an indicator observable.
pub fn visit_density(
    action: &Action,
    x: &Point,
    membership: &Observable,
    seq: &FolnerSequence,
    indices: &[usize],
) -> Result<Vec<DensityEstimate>> {
    if !membership.is_indicator() {
        return Err(Error::NonIndicator(membership.label().to_string()));
    }
    let mut per_index = Vec::with_capacity(indices.len());
    for &n in indices {
        let f_n = seq.set(n)?;
        let mut hits = 0usize;
        for g in f_n.iter() {
            if membership.evaluate(&action.apply(g, x)?) >= 0.5 {
                hits += 1;
            }
        }
        per_index.push((n, hits, f_n.cardinality()));
    }
    Ok(density_list(per_index))
}

/// Density of eps-returns {g in F_n : dist(x, T_g x) < eps}.
pub fn qwap_density(
    action: &Action,
    x: &Point,
    eps: f64,
    seq: &FolnerSequence,
    indices: &[usize],
) -> Result<Vec<DensityEstimate>> {
    if eps <= 0.0 {
        return Err(Error::InvalidSpec("qwap eps must be > 0".into()));
    }
    let mut per_index = Vec::with_capacity(indices.len());
    for &n in indices {
        let f_n = seq.set(n)?;
        let mut hits = 0usize;
        for g in f_n.iter() {
            if action.distance(x, &action.apply(g, x)?)? < eps {
                hits += 1;
            }
        }
        per_index.push((n, hits, f_n.cardinality()));
    }
    Ok(density_list(per_index))
}

/// Trace of A(F_n, phi)(x) for a compactly supported observable; on a
/// dissipative system the values decay like (support size)/|F_n|.
pub fn dissipativity_probe(
    action: &Action,
    phi: &Observable,
    x: &Point,
    seq: &FolnerSequence,
    indices: &[usize],
) -> Result<AverageTrace> {
    phi.require_bounded()?;
    if action.diameter().is_none() && phi.compact_support().is_none() {
        return Err(Error::NoCompactSupport(phi.label().to_string()));
    }
    average_trace(action, seq, phi, x, indices, DEFAULT_OSCILLATION_WINDOW)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::{make_family, FamilySpec};

    const SQRT2M1: f64 = 0.41421356237309515;

    #[test]
    fn correlation_identity_element() {
        // g = e, phi = arc(0.3): phi^2 = phi so corr = mu(E) = 0.3 exactly via oracle
        let act = Action::circle_rotation(SQRT2M1);
        let phi = Observable::arc(0.3).unwrap();
        let c = correlation(&act, &phi, &GroupElement::Int(0), &act.sampler(), 10, 0).unwrap();
        assert!((c - 0.3).abs() < 1e-15);
        let cc = correlation(
            &act,
            &Observable::constant(1.5),
            &GroupElement::Int(9),
            &act.sampler(),
            10,
            0,
        )
        .unwrap();
        assert!((cc - 2.25).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_agrees_with_trig_oracle() {
        let act = Action::circle_rotation(SQRT2M1);
        let phi = Observable::cos(1);
        let g = GroupElement::Int(7);
        let oracle = exact_correlation(&act, &phi, &g).unwrap();
        let theta = (7.0 * SQRT2M1) % 1.0;
        assert!((oracle - (std::f64::consts::TAU * theta).cos() / 2.0).abs() < 1e-15);
        // force the MC path with a custom clone of cos
        let custom = Observable::new("cos-custom", Some(1.0), {
            let phi = phi.clone();
            move |p: &Point| phi.evaluate(p)
        });
        let n = 100_000;
        let mc = correlation(&act, &custom, &g, &act.sampler(), n, 3).unwrap();
        // var(phi(x) phi(x+theta)) <= 1; 3 sigma ~ 3/sqrt(n)
        assert!((mc - oracle).abs() < 3.0 / (n as f64).sqrt() * 1.5, "{mc} vs {oracle}");
    }

    #[test]
    fn khintchine_rotation_arc_density() {
        // membership <=> frac(g alpha) < 0.22 or > 0.78; density 0.44
        let act = Action::circle_rotation(SQRT2M1);
        let phi = Observable::arc(0.3).unwrap();
        let seq = make_family(&FamilySpec::Intervals);
        let d = khintchine_density(&act, &phi, 0.01, &seq, 20_000, &act.sampler(), 10, 1)
            .unwrap();
        assert!((d.ratio - 0.44).abs() < 0.02, "ratio {}", d.ratio);
        assert!(d.ratio > 0.0);
    }

    #[test]
    fn khintchine_constant_and_monotone() {
        let act = Action::circle_rotation(SQRT2M1);
        let seq = make_family(&FamilySpec::Intervals);
        let c = Observable::constant(2.0);
        let d = khintchine_density(&act, &c, 0.5, &seq, 100, &act.sampler(), 10, 1).unwrap();
        assert_eq!(d.ratio, 1.0); // corr = c^2 > c^2 - eps always

        let phi = Observable::arc(0.3).unwrap();
        let d1 = khintchine_density(&act, &phi, 0.005, &seq, 500, &act.sampler(), 10, 1).unwrap();
        let d2 = khintchine_density(&act, &phi, 0.02, &seq, 500, &act.sampler(), 10, 1).unwrap();
        assert!(d1.ratio <= d2.ratio);

        // nonpositive mean rejected
        let zero = Observable::constant(0.0);
        assert!(matches!(
            khintchine_density(&act, &zero, 0.1, &seq, 10, &act.sampler(), 10, 1),
            Err(Error::NonpositiveMean(_))
        ));
    }

    #[test]
    fn visit_density_rotation() {
        let act = Action::circle_rotation(SQRT2M1);
        let seq = make_family(&FamilySpec::Intervals);
        let arcs = Observable::arc(0.25).unwrap();
        let list = visit_density(&act, &Point::circle(0.1), &arcs, &seq, &[100_000]).unwrap();
        assert!((list[0].ratio - 0.25).abs() < 0.01, "{}", list[0].ratio);
        // whole space
        let whole = Observable::constant(1.0);
        let list = visit_density(&act, &Point::circle(0.1), &whole, &seq, &[100]).unwrap();
        assert_eq!(list[0].ratio, 1.0);
        // non-indicator rejected
        assert!(matches!(
            visit_density(&act, &Point::circle(0.1), &Observable::cos(1), &seq, &[10]),
            Err(Error::NonIndicator(_))
        ));
    }

    #[test]
    fn visit_density_dissipative_line() {
        // Z translating Z, Sigma = {0}: exactly one visit
        let act = Action::int_line();
        let seq = make_family(&FamilySpec::Intervals);
        let origin = Observable::indicator_fn("at-origin", |p: &Point| match p {
            Point::Line(0) => 1.0,
            _ => 0.0,
        });
        let list = visit_density(&act, &Point::Line(0), &origin, &seq, &[10, 100, 1000]).unwrap();
        for d in &list {
            assert_eq!(d.hits, 1);
            assert!((d.ratio - 1.0 / d.n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn qwap_density_rotation() {
        let act = Action::circle_rotation(SQRT2M1);
        let seq = make_family(&FamilySpec::Intervals);
        let list = qwap_density(&act, &Point::circle(0.2), 0.05, &seq, &[100_000]).unwrap();
        assert!((list[0].ratio - 0.1).abs() < 0.01, "{}", list[0].ratio);
        // eps >= diameter: every g is a return
        let list = qwap_density(&act, &Point::circle(0.2), 0.6, &seq, &[50]).unwrap();
        assert_eq!(list[0].ratio, 1.0);
        // line has no metric in the library
        assert!(qwap_density(&Action::int_line(), &Point::Line(0), 0.5, &seq, &[10]).is_err());
    }

    #[test]
    fn qwap_two_circle_matches_component_rotation() {
        let act = Action::two_circle(SQRT2M1, 0.2599210498948732);
        let seq = make_family(&FamilySpec::Intervals);
        let x = Point::TwoCircle { component: 1, x: 0.3 };
        let list = qwap_density(&act, &x, 0.05, &seq, &[100_000]).unwrap();
        assert!((list[0].ratio - 0.1).abs() < 0.01, "{}", list[0].ratio);
    }

    #[test]
    fn dissipativity_probe_decay() {
        let act = Action::int_line();
        let seq = make_family(&FamilySpec::Intervals);
        let tent = Observable::tent(5).unwrap();
        let trace =
            dissipativity_probe(&act, &tent, &Point::Line(0), &seq, &[10, 100, 1000]).unwrap();
        for e in &trace.entries {
            assert!(e.value <= 11.0 / e.n as f64 + 1e-15, "n={} v={}", e.n, e.value);
        }
        // conservative contrast: rotation with phi = 1 + cos stays near 1
        let rot = Action::circle_rotation(SQRT2M1);
        let phi = Observable::affine_combination(
            1.0,
            &Observable::cos(1),
            &Observable::constant(1.0),
        );
        let trace =
            dissipativity_probe(&rot, &phi, &Point::circle(0.0), &seq, &[10_000]).unwrap();
        assert!((trace.entries[0].value - 1.0).abs() < 1e-3);
        // zero observable: identically zero trace
        let zero = Observable::constant(0.0);
        let trace =
            dissipativity_probe(&act, &zero, &Point::Line(0), &seq, &[10, 20]).unwrap();
        assert!(trace.entries.iter().all(|e| e.value == 0.0));
        // unbounded-phase-space without declared support is rejected
        let custom = Observable::new("no-support", Some(1.0), |_: &Point| 0.0);
        assert!(matches!(
            dissipativity_probe(&act, &custom, &Point::Line(0), &seq, &[10]),
            Err(Error::NoCompactSupport(_))
        ));
    }

    #[test]
    fn envelopes_are_monotone() {
        let act = Action::circle_rotation(SQRT2M1);
        let seq = make_family(&FamilySpec::Intervals);
        let arcs = Observable::arc(0.25).unwrap();
        let list =
            visit_density(&act, &Point::circle(0.1), &arcs, &seq, &[10, 50, 200, 1000]).unwrap();
        for w in list.windows(2) {
            assert!(w[1].lower_envelope <= w[0].lower_envelope + 1e-15);
            assert!(w[1].upper_envelope >= w[0].upper_envelope - 1e-15);
        }
        for d in &list {
            assert!(d.ratio >= 0.0 && d.ratio <= 1.0);
            assert!(d.hits <= d.cardinality);
        }
    }
}
