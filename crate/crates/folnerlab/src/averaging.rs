//! Ergodic averages over finite subsets of the acting group.
//!
//! Sums are always reduced by a pairwise tree in the canonical element
//! order of the set, so results are byte-identical no matter how the work
//! is partitioned across threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{FiniteSubset, GroupElement};
use crate::systems::{Action, Observable, Point};

/// Pairwise (tree) reduction; deterministic for a fixed value order.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

fn orbit_values(
    action: &Action,
    f: &FiniteSubset,
    phi: &Observable,
    x: &Point,
) -> Result<Vec<f64>> {
    f.elements()
        .par_iter()
        .map(|g| Ok(phi.evaluate(&action.apply(g, x)?)))
        .collect()
}

/// A(F, phi)(x) = (1/|F|) sum_{g in F} phi(T_g x). Rejects unbounded phi.
pub fn ergodic_average(
    action: &Action,
    f: &FiniteSubset,
    phi: &Observable,
    x: &Point,
) -> Result<f64> {
    phi.require_bounded()?;
    ergodic_average_with(action, f, phi, x, false)
}

/// Same as [`ergodic_average`] but lets the caller explicitly accept an
/// unbounded observable (used only by the divergence demonstration).
pub fn ergodic_average_with(
    action: &Action,
    f: &FiniteSubset,
    phi: &Observable,
    x: &Point,
    allow_unbounded: bool,
) -> Result<f64> {
    if !allow_unbounded {
        phi.require_bounded()?;
    }
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    let values = orbit_values(action, f, phi, x)?;
    Ok(tree_sum(&values) / f.cardinality() as f64)
}

/// One row of an [`AverageTrace`].
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub n: usize,
    pub cardinality: usize,
    pub value: f64,
}

/// Per-index average values with a trailing-window oscillation diagnostic.
/// No convergence is ever asserted, only reported.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageTrace {
    pub entries: Vec<TraceEntry>,
    pub window: usize,
}

pub const DEFAULT_OSCILLATION_WINDOW: usize = 5;

impl AverageTrace {
    /// Max |v_i - v_j| over the trailing `window` entries.
    pub fn oscillation(&self) -> f64 {
        let tail_start = self.entries.len().saturating_sub(self.window);
        let tail = &self.entries[tail_start..];
        let mut max = 0.0f64;
        for (i, a) in tail.iter().enumerate() {
            for b in &tail[i + 1..] {
                max = max.max((a.value - b.value).abs());
            }
        }
        max
    }

    pub fn last_value(&self) -> Option<f64> {
        self.entries.last().map(|e| e.value)
    }
}

pub fn average_trace(
    action: &Action,
    seq: &FolnerSequence,
    phi: &Observable,
    x: &Point,
    indices: &[usize],
    window: usize,
) -> Result<AverageTrace> {
    average_trace_with(action, seq, phi, x, indices, window, false)
}

pub fn average_trace_with(
    action: &Action,
    seq: &FolnerSequence,
    phi: &Observable,
    x: &Point,
    indices: &[usize],
    window: usize,
    allow_unbounded: bool,
) -> Result<AverageTrace> {
    if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec(
            "trace indices must be nonempty and strictly ascending".into(),
        ));
    }
    let mut entries = Vec::with_capacity(indices.len());
    for &n in indices {
        let f = seq.set(n)?;
        let value = ergodic_average_with(action, &f, phi, x, allow_unbounded)?;
        entries.push(TraceEntry {
            n,
            cardinality: f.cardinality(),
            value,
        });
    }
    Ok(AverageTrace { entries, window })
}

/// Both sides of the translation identity
/// A(hF, phi)(x) = A(F, phi o T_h)(x), which is the same finite sum reordered.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

pub fn translation_identity_check(
    action: &Action,
    f: &FiniteSubset,
    phi: &Observable,
    x: &Point,
    h: &GroupElement,
) -> Result<TranslationIdentity> {
    let lhs = ergodic_average(action, &f.translate(h)?, phi, x)?;
    let shifted_phi = {
        let action = action.clone();
        let phi2 = phi.clone();
        let h = h.clone();
        Observable::new(
            format!("{} o T_{h}", phi.label()),
            phi.sup_bound(),
            move |p: &Point| match action.apply(&h, p) {
                Ok(q) => phi2.evaluate(&q),
                Err(e) => panic!("translation of point failed: {e}"),
            },
        )
    };
    let rhs = ergodic_average(action, f, &shifted_phi, x)?;
    Ok(TranslationIdentity {
        lhs,
        rhs,
        diff: (lhs - rhs).abs(),
    })
}

/// |A(F, phi)(x) - A(C, phi)(x)| against the bound 2 ||phi||_inf |F triangle C| / |F|.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationBound {
    pub lhs: f64,
    pub bound: f64,
}

pub fn perturbation_bound_check(
    action: &Action,
    f: &FiniteSubset,
    c: &FiniteSubset,
    phi: &Observable,
    x: &Point,
) -> Result<PerturbationBound> {
    let sup = phi.require_bounded()?;
    let lhs = (ergodic_average(action, f, phi, x)? - ergodic_average(action, c, phi, x)?).abs();
    let bound =
        2.0 * sup * f.symmetric_difference(c).cardinality() as f64 / f.cardinality() as f64;
    Ok(PerturbationBound { lhs, bound })
}

fn scalar_multiple(g: &GroupElement, t: i64) -> Result<GroupElement> {
    match g {
        GroupElement::Int(a) => Ok(GroupElement::Int(a * t)),
        GroupElement::Lattice(v) => Ok(GroupElement::Lattice(v.iter().map(|a| a * t).collect())),
        _ => Err(Error::InvalidSpec(
            "multiple averages need a Z-module group (Z or Z^d)".into(),
        )),
    }
}

/// Multiple ergodic average
/// (1/|K|) sum_{t in K} phi(T_{t g_1} x) ... phi(T_{t g_l} x) with K subset Z.
pub fn multiple_average(
    action: &Action,
    g_tuple: &[GroupElement],
    k: &FiniteSubset,
    phi: &Observable,
    x: &Point,
) -> Result<f64> {
    phi.require_bounded()?;
    if g_tuple.is_empty() {
        return Err(Error::InvalidSpec(
            "multiple average needs at least one group element".into(),
        ));
    }
    if k.is_empty() {
        return Err(Error::EmptySet);
    }
    let values: Result<Vec<f64>> = k
        .elements()
        .par_iter()
        .map(|t| {
            let t = match t {
                GroupElement::Int(t) => *t,
                other => {
                    return Err(Error::InvalidSpec(format!(
                        "multiple average indexes over K subset Z, got {other:?}"
                    )))
                }
            };
            let mut prod = 1.0;
            for g in g_tuple {
                let y = action.apply(&scalar_multiple(g, t)?, x)?;
                prod *= phi.evaluate(&y);
            }
            Ok(prod)
        })
        .collect();
    Ok(tree_sum(&values?) / k.cardinality() as f64)
}

fn points_close(a: &Point, b: &Point, tol: f64) -> bool {
    fn circ(a: f64, b: f64) -> f64 {
        let d = (a - b).abs() % 1.0;
        d.min(1.0 - d)
    }
    match (a, b) {
        (Point::Circle(x), Point::Circle(y)) => circ(*x, *y) <= tol,
        (Point::Torus(xs), Point::Torus(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| circ(*x, *y) <= tol)
        }
        (
            Point::TwoCircle { component: c1, x },
            Point::TwoCircle { component: c2, x: y },
        ) => c1 == c2 && circ(*x, *y) <= tol,
        _ => a == b,
    }
}

/// Iterated product-group average over F_n^{(1)} x ... x F_n^{(l)}:
/// (1/prod |F_n^{(i)}|) sum phi(T^{(1)}_{g_1} ... T^{(l)}_{g_l} x).
/// The actions must commute; this is probed on random pairs before summing.
pub fn iterated_product_average(
    actions: &[Action],
    seqs: &[FolnerSequence],
    phi: &Observable,
    x: &Point,
    n: usize,
) -> Result<f64> {
    phi.require_bounded()?;
    if actions.is_empty() || actions.len() != seqs.len() {
        return Err(Error::InvalidSpec(
            "need one Folner sequence per action".into(),
        ));
    }
    // Commutativity probe on small translates.
    let probe_tol = 1e-12;
    let mut worst = 0.0f64;
    for i in 0..actions.len() {
        for j in i + 1..actions.len() {
            for (a, b) in [(1i64, 1i64), (2, 3), (-1, 5), (7, -2)] {
                let ga = GroupElement::Int(a);
                let gb = GroupElement::Int(b);
                let p = actions[i].apply(&ga, &actions[j].apply(&gb, x)?)?;
                let q = actions[j].apply(&gb, &actions[i].apply(&ga, x)?)?;
                if !points_close(&p, &q, probe_tol) {
                    worst = worst.max(1.0);
                }
            }
        }
    }
    if worst > 0.0 {
        return Err(Error::NonCommutingActions(worst));
    }

    let sets: Result<Vec<FiniteSubset>> = seqs.iter().map(|s| s.set(n)).collect();
    let sets = sets?;
    let total: usize = sets.iter().map(FiniteSubset::cardinality).product();

    // Depth-first over the product set in canonical nested order.
    fn descend(
        actions: &[Action],
        sets: &[FiniteSubset],
        phi: &Observable,
        x: &Point,
        level: usize,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        if level == actions.len() {
            out.push(phi.evaluate(x));
            return Ok(());
        }
        // Apply the last action first so that the innermost translate is
        // shared across the outer loops.
        let idx = actions.len() - 1 - level;
        for g in sets[idx].iter() {
            let y = actions[idx].apply(g, x)?;
            descend(actions, sets, phi, &y, level + 1, out)?;
        }
        Ok(())
    }

    let mut values = Vec::with_capacity(total);
    descend(actions, &sets, phi, x, 0, &mut values)?;
    // The depth-first order enumerates g_l outermost; the sum is the same
    // multiset either way, and the order is canonical and thread-independent.
    Ok(tree_sum(&values) / total as f64)
}
