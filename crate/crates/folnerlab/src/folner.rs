//! Folner sequences and their invariance/temperedness diagnostics.
//!
//! All diagnostics are exact: boundary and condition ratios are rational
//! numbers computed from exact set cardinalities. Sequences are indexed by
//! n in N; Moore-Smith nets over general directed sets are out of scope.

use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{int_interval, FiniteSubset, GroupDescriptor, GroupElement};
use crate::systems::{Action, Observable, Point};

/// Exact nonnegative rational produced by the diagnostics.
pub type DiagnosticRatio = Ratio<u64>;

/// Default element budget for the Shulman union; override per call or via
/// the `FOLNERLAB_BUDGET` environment variable in the CLI.
pub const DEFAULT_ELEMENT_BUDGET: usize = 10_000_000;

/// Family tag carried by a sequence for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyTag {
    Intervals,
    Boxes { dim: usize },
    HeisenbergBoxes,
    Djr,
    ProductFamily,
    Perturbed,
    Adversarial,
    Custom,
}

/// A Folner sequence: an index map n -> F_n (n >= 1) over a fixed group.
#[derive(Clone)]
pub struct FolnerSequence {
    descriptor: GroupDescriptor,
    tag: FamilyTag,
    generator: Arc<dyn Fn(usize) -> Result<FiniteSubset> + Send + Sync>,
}

impl std::fmt::Debug for FolnerSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FolnerSequence")
            .field("descriptor", &self.descriptor)
            .field("tag", &self.tag)
            .finish()
    }
}

impl FolnerSequence {
    pub fn from_generator(
        descriptor: GroupDescriptor,
        tag: FamilyTag,
        generator: impl Fn(usize) -> Result<FiniteSubset> + Send + Sync + 'static,
    ) -> Self {
        FolnerSequence {
            descriptor,
            tag,
            generator: Arc::new(generator),
        }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn tag(&self) -> &FamilyTag {
        &self.tag
    }

    /// Materialize F_n. Requires n >= 1.
    pub fn set(&self, n: usize) -> Result<FiniteSubset> {
        if n == 0 {
            return Err(Error::InvalidSpec("Folner index starts at n = 1".into()));
        }
        let f = (self.generator)(n)?;
        if f.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(f)
    }

    /// C_n = F_n triangle D_n. The caller is responsible for |D_n|/|F_n| -> 0.
    pub fn perturb(
        &self,
        d_seq: impl Fn(usize) -> FiniteSubset + Send + Sync + 'static,
    ) -> FolnerSequence {
        let base = self.clone();
        FolnerSequence {
            descriptor: self.descriptor.clone(),
            tag: FamilyTag::Perturbed,
            generator: Arc::new(move |n| {
                let c = base.set(n)?.symmetric_difference(&d_seq(n));
                if c.is_empty() {
                    return Err(Error::DegeneratePerturbation(n));
                }
                Ok(c)
            }),
        }
    }
}

/// |gF triangle F| / |F|, exact. Lies in [0, 2].
pub fn boundary_ratio(f: &FiniteSubset, g: &GroupElement) -> Result<DiagnosticRatio> {
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Ratio::new(
        f.translated_symmetric_difference_len(g)? as u64,
        f.cardinality() as u64,
    ))
}

/// |KF triangle F| / |F|, exact.
pub fn uniform_boundary_ratio(f: &FiniteSubset, k: &FiniteSubset) -> Result<DiagnosticRatio> {
    if f.is_empty() || k.is_empty() {
        return Err(Error::EmptySet);
    }
    let kf = k.product(f)?;
    Ok(Ratio::new(
        kf.symmetric_difference(f).cardinality() as u64,
        f.cardinality() as u64,
    ))
}

/// Tempelman and Shulman condition ratios at index n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionRatios {
    /// |F_n^-1 F_n| / |F_n|.
    pub tempelman: DiagnosticRatio,
    /// |U_{k<n} F_k^-1 F_n| / |F_n|; defined as 0 at n = 1.
    pub shulman: DiagnosticRatio,
}

pub fn condition_ratios(
    seq: &FolnerSequence,
    n: usize,
    budget: usize,
) -> Result<ConditionRatios> {
    let f_n = seq.set(n)?;
    let card = f_n.cardinality() as u64;
    let guard = |needed: usize| {
        if needed > budget {
            Err(Error::BudgetExceeded { needed, budget })
        } else {
            Ok(())
        }
    };
    guard(f_n.cardinality() * f_n.cardinality())?;
    let tempelman = Ratio::new(
        f_n.inverse_set().product(&f_n)?.cardinality() as u64,
        card,
    );
    let shulman = if n == 1 {
        Ratio::new(0, 1)
    } else {
        let mut union = FiniteSubset::empty();
        for k in 1..n {
            let f_k = seq.set(k)?;
            guard(union.cardinality() + f_k.cardinality() * f_n.cardinality())?;
            union = union.union(&f_k.inverse_set().product(&f_n)?);
        }
        Ratio::new(union.cardinality() as u64, card)
    };
    Ok(ConditionRatios { tempelman, shulman })
}

/// Summing-prefix report: nestedness of F_1 .. F_n plus the worst single-probe
/// boundary ratio of F_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummingReport {
    pub nested: bool,
    pub max_boundary_ratio: DiagnosticRatio,
}

pub fn is_summing_prefix(
    seq: &FolnerSequence,
    n: usize,
    probes: &FiniteSubset,
) -> Result<SummingReport> {
    if n < 2 {
        return Err(Error::InvalidSpec("summing-prefix check needs n >= 2".into()));
    }
    let mut nested = true;
    let mut prev = seq.set(1)?;
    for k in 2..=n {
        let cur = seq.set(k)?;
        if !prev.is_subset_of(&cur) {
            nested = false;
        }
        prev = cur;
    }
    let f_n = seq.set(n)?;
    let mut max_ratio = Ratio::new(0, 1);
    for g in probes.iter() {
        let r = boundary_ratio(&f_n, g)?;
        if r > max_ratio {
            max_ratio = r;
        }
    }
    Ok(SummingReport {
        nested,
        max_boundary_ratio: max_ratio,
    })
}

/// Builtin Folner families.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// [0, n) in Z.
    Intervals,
    /// [0, n)^d in Z^d.
    Boxes { dim: usize },
    /// {(a,b,c) : 0 <= a,b < n, 0 <= c < n^2} in the Heisenberg group.
    HeisenbergBoxes,
    /// del Junco-Rosenblatt blocks {n^2, ..., n^2 + n} in Z.
    Djr,
    /// Product of the factor families over the product group.
    Product(Vec<FamilySpec>),
}

impl FamilySpec {
    fn descriptor(&self) -> GroupDescriptor {
        match self {
            FamilySpec::Intervals | FamilySpec::Djr => GroupDescriptor::Integers,
            FamilySpec::Boxes { dim } => GroupDescriptor::Lattice { dim: *dim },
            FamilySpec::HeisenbergBoxes => GroupDescriptor::Heisenberg,
            FamilySpec::Product(factors) => {
                GroupDescriptor::Product(factors.iter().map(FamilySpec::descriptor).collect())
            }
        }
    }

    fn materialize(&self, n: usize) -> FiniteSubset {
        let n_i = n as i64;
        match self {
            FamilySpec::Intervals => int_interval(0, n_i),
            FamilySpec::Boxes { dim } => {
                let mut coords = vec![0i64; *dim];
                let mut out = Vec::with_capacity(n.pow(*dim as u32));
                loop {
                    out.push(GroupElement::lattice(&coords));
                    let mut i = *dim;
                    loop {
                        if i == 0 {
                            return FiniteSubset::from_sorted(out);
                        }
                        i -= 1;
                        coords[i] += 1;
                        if coords[i] < n_i {
                            break;
                        }
                        coords[i] = 0;
                    }
                }
            }
            FamilySpec::HeisenbergBoxes => {
                let mut out = Vec::with_capacity(n * n * n * n);
                for a in 0..n_i {
                    for b in 0..n_i {
                        for c in 0..n_i * n_i {
                            out.push(GroupElement::heisenberg(a, b, c));
                        }
                    }
                }
                FiniteSubset::new(out)
            }
            FamilySpec::Djr => int_interval(n_i * n_i, n_i * n_i + n_i + 1),
            FamilySpec::Product(factors) => {
                let parts: Vec<FiniteSubset> =
                    factors.iter().map(|f| f.materialize(n)).collect();
                let mut out: Vec<Vec<GroupElement>> = vec![Vec::new()];
                for part in &parts {
                    let mut next = Vec::with_capacity(out.len() * part.cardinality());
                    for prefix in &out {
                        for g in part.iter() {
                            let mut v = prefix.clone();
                            v.push(g.clone());
                            next.push(v);
                        }
                    }
                    out = next;
                }
                FiniteSubset::new(out.into_iter().map(GroupElement::Tuple).collect())
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses "intervals", "boxes:d=2", "h3boxes", "djr", and products
    /// joined by " x ".
    fn from_str(s: &str) -> Result<Self> {
        let factors: Vec<&str> = s.split(" x ").map(str::trim).collect();
        if factors.len() > 1 {
            let parsed: Result<Vec<_>> = factors.iter().map(|f| f.parse()).collect();
            return Ok(FamilySpec::Product(parsed?));
        }
        let s = s.trim();
        match s {
            "intervals" => Ok(FamilySpec::Intervals),
            "h3boxes" => Ok(FamilySpec::HeisenbergBoxes),
            "djr" => Ok(FamilySpec::Djr),
            _ => {
                if let Some(d) = s.strip_prefix("boxes:d=") {
                    let dim: usize = d
                        .parse()
                        .map_err(|_| Error::InvalidSpec(format!("bad box dimension in `{s}`")))?;
                    if dim == 0 {
                        return Err(Error::InvalidSpec("box dimension must be >= 1".into()));
                    }
                    Ok(FamilySpec::Boxes { dim })
                } else {
                    Err(Error::InvalidSpec(format!("unknown Folner family `{s}`")))
                }
            }
        }
    }
}

/// Build a builtin family as a [`FolnerSequence`].
pub fn make_family(spec: &FamilySpec) -> FolnerSequence {
    let tag = match spec {
        FamilySpec::Intervals => FamilyTag::Intervals,
        FamilySpec::Boxes { dim } => FamilyTag::Boxes { dim: *dim },
        FamilySpec::HeisenbergBoxes => FamilyTag::HeisenbergBoxes,
        FamilySpec::Djr => FamilyTag::Djr,
        FamilySpec::Product(_) => FamilyTag::ProductFamily,
    };
    let spec = spec.clone();
    FolnerSequence::from_generator(spec.descriptor(), tag, move |n| Ok(spec.materialize(n)))
}

/// The divergence construction: F'_n = [0, n) plus one far orbit point i_n
/// with phi(T_{i_n} x0) >= n(n+1), so that A(F'_n, phi)(x0) >= n while
/// the +-1 boundary ratios stay <= 4/(n+1).
pub fn adversarial_divergence_sequence(
    action: &Action,
    phi: &Observable,
    x0: &Point,
    horizon: u64,
) -> Result<FolnerSequence> {
    if !action.is_integer_action() {
        return Err(Error::InvalidSpec(
            "the divergence construction needs a Z-action".into(),
        ));
    }
    if phi.is_bounded() {
        return Err(Error::BoundedObservable(phi.label().to_string()));
    }
    // Verify unboundedness along the forward orbit within the horizon: the
    // searcher itself does this, since it must find arbitrarily large values.
    let action = action.clone();
    let phi = phi.clone();
    let x0 = x0.clone();
    Ok(FolnerSequence::from_generator(
        GroupDescriptor::Integers,
        FamilyTag::Adversarial,
        move |n| {
            let threshold = (n * (n + 1)) as f64;
            let mut found = None;
            let mut x = action.apply(&GroupElement::Int(n as i64), &x0)?;
            let step = GroupElement::Int(1);
            for i in n as u64..horizon {
                if phi.evaluate(&x) >= threshold {
                    found = Some(i as i64);
                    break;
                }
                x = action.apply(&step, &x)?;
            }
            let i_n = found.ok_or(Error::SearchExhausted { n, horizon })?;
            let mut elements: Vec<GroupElement> =
                (0..n as i64).map(GroupElement::Int).collect();
            if i_n >= n as i64 {
                elements.push(GroupElement::Int(i_n));
            }
            Ok(FiniteSubset::from_sorted(elements))
        },
    ))
}
