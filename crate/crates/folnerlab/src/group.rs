//! Exact algebra for countable discrete groups and their finite subsets.
//!
//! Only discrete groups are supported: the left Haar measure is counting
//! measure, so every "integral over a compactum" in the diagnostics becomes
//! a finite sum over a [`FiniteSubset`] and every measure is an exact
//! cardinality. Continuous groups are out of scope.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A finitely described countable discrete group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupDescriptor {
    /// (Z, +).
    Integers,
    /// (Z^d, +), d >= 1.
    Lattice { dim: usize },
    /// Discrete Heisenberg group: (a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a·b').
    Heisenberg,
    /// Direct product of two or more factors.
    Product(Vec<GroupDescriptor>),
}

impl GroupDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::Integers | GroupDescriptor::Heisenberg => Ok(()),
            GroupDescriptor::Lattice { dim } => {
                if *dim >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec("lattice dimension must be >= 1".into()))
                }
            }
            GroupDescriptor::Product(factors) => {
                if factors.len() < 2 {
                    return Err(Error::InvalidSpec(
                        "direct product needs at least 2 factors".into(),
                    ));
                }
                factors.iter().try_for_each(GroupDescriptor::validate)
            }
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupDescriptor::Integers => GroupElement::Int(0),
            GroupDescriptor::Lattice { dim } => {
                GroupElement::Lattice(SmallVec::from_elem(0, *dim))
            }
            GroupDescriptor::Heisenberg => GroupElement::Heisenberg([0, 0, 0]),
            GroupDescriptor::Product(factors) => {
                GroupElement::Tuple(factors.iter().map(GroupDescriptor::identity).collect())
            }
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupDescriptor::Integers, GroupElement::Int(_)) => true,
            (GroupDescriptor::Lattice { dim }, GroupElement::Lattice(v)) => v.len() == *dim,
            (GroupDescriptor::Heisenberg, GroupElement::Heisenberg(_)) => true,
            (GroupDescriptor::Product(factors), GroupElement::Tuple(parts)) => {
                factors.len() == parts.len()
                    && factors.iter().zip(parts).all(|(f, p)| f.contains(p))
            }
            _ => false,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Integers => write!(f, "Z"),
            GroupDescriptor::Lattice { dim } => write!(f, "Z^{dim}"),
            GroupDescriptor::Heisenberg => write!(f, "H3"),
            GroupDescriptor::Product(factors) => {
                let parts: Vec<String> = factors.iter().map(|d| d.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    /// Parses "Z", "Z^3", "H3", and products like "Z x H3".
    fn from_str(s: &str) -> Result<Self> {
        let factors: Vec<&str> = s.split('x').map(str::trim).collect();
        if factors.len() > 1 {
            let parsed: Result<Vec<_>> = factors.iter().map(|f| f.parse()).collect();
            return Ok(GroupDescriptor::Product(parsed?));
        }
        let s = s.trim();
        if s == "Z" {
            return Ok(GroupDescriptor::Integers);
        }
        if s == "H3" {
            return Ok(GroupDescriptor::Heisenberg);
        }
        if let Some(d) = s.strip_prefix("Z^") {
            let dim: usize = d
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad lattice dimension in `{s}`")))?;
            let desc = GroupDescriptor::Lattice { dim };
            desc.validate()?;
            return Ok(desc);
        }
        Err(Error::InvalidSpec(format!("unknown group descriptor `{s}`")))
    }
}

/// An element of a group described by a [`GroupDescriptor`], with canonical
/// coordinates. Ordering is lexicographic on coordinates; it exists so that
/// [`FiniteSubset`] has a canonical element order (deterministic reductions
/// depend on it).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupElement {
    Int(i64),
    Lattice(SmallVec<[i64; 3]>),
    Heisenberg([i64; 3]),
    Tuple(Vec<GroupElement>),
}

impl GroupElement {
    pub fn int(n: i64) -> Self {
        GroupElement::Int(n)
    }

    pub fn lattice(coords: &[i64]) -> Self {
        GroupElement::Lattice(SmallVec::from_slice(coords))
    }

    pub fn heisenberg(a: i64, b: i64, c: i64) -> Self {
        GroupElement::Heisenberg([a, b, c])
    }

    fn mismatch(&self, other: &GroupElement) -> Error {
        Error::DescriptorMismatch(format!("{self:?} vs {other:?}"))
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Int(a), GroupElement::Int(b)) => Ok(GroupElement::Int(a + b)),
            (GroupElement::Lattice(a), GroupElement::Lattice(b)) if a.len() == b.len() => Ok(
                GroupElement::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (GroupElement::Heisenberg([a, b, c]), GroupElement::Heisenberg([a2, b2, c2])) => {
                Ok(GroupElement::Heisenberg([a + a2, b + b2, c + c2 + a * b2]))
            }
            (GroupElement::Tuple(xs), GroupElement::Tuple(ys)) if xs.len() == ys.len() => {
                let parts: Result<Vec<_>> =
                    xs.iter().zip(ys).map(|(x, y)| x.multiply(y)).collect();
                Ok(GroupElement::Tuple(parts?))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Int(a) => GroupElement::Int(-a),
            GroupElement::Lattice(v) => GroupElement::Lattice(v.iter().map(|x| -x).collect()),
            // Solve (a,b,c)·(x,y,z) = e: x=-a, y=-b, z = ab-c.
            GroupElement::Heisenberg([a, b, c]) => {
                GroupElement::Heisenberg([-a, -b, a * b - c])
            }
            GroupElement::Tuple(parts) => {
                GroupElement::Tuple(parts.iter().map(GroupElement::inverse).collect())
            }
        }
    }

    /// Whether left translation by `self` preserves the canonical element
    /// order. Componentwise addition is monotone for the abelian cases; the
    /// Heisenberg twist `c + a*b'` is not.
    fn translation_is_monotone(&self) -> bool {
        match self {
            GroupElement::Int(_) | GroupElement::Lattice(_) => true,
            GroupElement::Heisenberg(_) => false,
            GroupElement::Tuple(parts) => parts.iter().all(Self::translation_is_monotone),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Int(a) => *a == 0,
            GroupElement::Lattice(v) => v.iter().all(|x| *x == 0),
            GroupElement::Heisenberg(c) => c.iter().all(|x| *x == 0),
            GroupElement::Tuple(parts) => parts.iter().all(GroupElement::is_identity),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(a) => write!(f, "{a}"),
            GroupElement::Lattice(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Heisenberg([a, b, c]) => write!(f, "({a},{b},{c})"),
            GroupElement::Tuple(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}]", s.join(";"))
            }
        }
    }
}

/// A finite set of group elements, stored as a sorted, deduplicated vector.
/// Cardinality is the counting (Haar) measure and is always exact.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteSubset {
    elements: Vec<GroupElement>,
}

impl FiniteSubset {
    pub fn new(mut elements: Vec<GroupElement>) -> Self {
        // Strictly-sorted input (e.g. an order-preserving translate of an
        // already-canonical set) skips the sort entirely.
        if !elements.windows(2).all(|w| w[0] < w[1]) {
            elements.sort_unstable();
            elements.dedup();
        }
        FiniteSubset { elements }
    }

    /// Elements must already be sorted and deduplicated.
    pub(crate) fn from_sorted(elements: Vec<GroupElement>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        FiniteSubset { elements }
    }

    pub fn empty() -> Self {
        FiniteSubset::default()
    }

    pub fn singleton(g: GroupElement) -> Self {
        FiniteSubset { elements: vec![g] }
    }

    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Left translate gF = {g·f : f in F}.
    pub fn translate(&self, g: &GroupElement) -> Result<FiniteSubset> {
        let mapped: Result<Vec<_>> = self.elements.iter().map(|f| g.multiply(f)).collect();
        Ok(FiniteSubset::new(mapped?))
    }

    /// Set product KF = {k·f : k in K, f in F}; `self` is K.
    pub fn product(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = Vec::with_capacity(self.cardinality() * other.cardinality());
        for k in &self.elements {
            for f in &other.elements {
                out.push(k.multiply(f)?);
            }
        }
        Ok(FiniteSubset::new(out))
    }

    pub fn inverse_set(&self) -> FiniteSubset {
        FiniteSubset::new(self.elements.iter().map(GroupElement::inverse).collect())
    }

    /// Symmetric difference F △ H via a linear merge of the sorted element lists.
    pub fn symmetric_difference(&self, other: &FiniteSubset) -> FiniteSubset {
        let (a, b) = (&self.elements, &other.elements);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FiniteSubset::from_sorted(out)
    }

    /// |gF △ F|, streaming the translated elements through the merge instead
    /// of materializing gF whenever translation by `g` preserves the
    /// canonical order. Falls back to translate-then-merge otherwise.
    pub fn translated_symmetric_difference_len(&self, g: &GroupElement) -> Result<usize> {
        if self.is_empty() {
            return Ok(0);
        }
        if !g.translation_is_monotone() {
            return Ok(self.translate(g)?.symmetric_difference(self).cardinality());
        }
        let a = &self.elements;
        let mut count = 0usize;
        let (mut i, mut j) = (0usize, 0usize);
        let mut shifted = g.multiply(&a[0])?;
        while i < a.len() && j < a.len() {
            match shifted.cmp(&a[j]) {
                std::cmp::Ordering::Less => {
                    count += 1;
                    i += 1;
                    if i < a.len() {
                        shifted = g.multiply(&a[i])?;
                    }
                }
                std::cmp::Ordering::Greater => {
                    count += 1;
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    if i < a.len() {
                        shifted = g.multiply(&a[i])?;
                    }
                }
            }
        }
        Ok(count + (a.len() - i) + (a.len() - j))
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        let mut out = self.elements.clone();
        out.extend_from_slice(&other.elements);
        FiniteSubset::new(out)
    }

    pub fn is_subset_of(&self, other: &FiniteSubset) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
}

impl FromIterator<GroupElement> for FiniteSubset {
    fn from_iter<I: IntoIterator<Item = GroupElement>>(iter: I) -> Self {
        FiniteSubset::new(iter.into_iter().collect())
    }
}

/// The integer interval [lo, hi) as a subset of Z.
pub fn int_interval(lo: i64, hi: i64) -> FiniteSubset {
    FiniteSubset::from_sorted((lo..hi).map(GroupElement::Int).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integers_add() {
        let g = GroupElement::Int(3);
        let h = GroupElement::Int(4);
        assert_eq!(g.multiply(&h).unwrap(), GroupElement::Int(7));
    }

    #[test]
    fn heisenberg_noncommutative() {
        let g = GroupElement::heisenberg(1, 0, 0);
        let h = GroupElement::heisenberg(0, 1, 0);
        assert_eq!(g.multiply(&h).unwrap(), GroupElement::heisenberg(1, 1, 1));
        assert_eq!(h.multiply(&g).unwrap(), GroupElement::heisenberg(1, 1, 0));
    }

    #[test]
    fn heisenberg_inverse_formula() {
        // (a,b,c)^-1 = (-a,-b,ab-c)
        let g = GroupElement::heisenberg(2, 5, 3);
        assert_eq!(g.inverse(), GroupElement::heisenberg(-2, -5, 7));
        assert!(g.multiply(&g.inverse()).unwrap().is_identity());
    }

    #[test]
    fn descriptor_mismatch_rejected() {
        let g = GroupElement::Int(1);
        let h = GroupElement::heisenberg(0, 0, 0);
        assert!(matches!(
            g.multiply(&h),
            Err(Error::DescriptorMismatch(_))
        ));
        let a = GroupElement::lattice(&[1, 2]);
        let b = GroupElement::lattice(&[1, 2, 3]);
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn descriptor_parsing_round_trip() {
        for s in ["Z", "Z^3", "H3", "Z x H3"] {
            let d: GroupDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("Z^0".parse::<GroupDescriptor>().is_err());
        assert!("Q".parse::<GroupDescriptor>().is_err());
    }

    #[test]
    fn interval_translate_symmetric_difference() {
        let f = int_interval(0, 100);
        let shifted = f.translate(&GroupElement::Int(1)).unwrap();
        assert_eq!(shifted, int_interval(1, 101));
        let sd = shifted.symmetric_difference(&f);
        assert_eq!(sd.cardinality(), 2);
        assert!(sd.contains(&GroupElement::Int(0)));
        assert!(sd.contains(&GroupElement::Int(100)));
    }

    #[test]
    fn inverse_set_of_djr_block() {
        let n = 4i64;
        let f = int_interval(n * n, n * n + n + 1);
        let inv = f.inverse_set();
        assert_eq!(inv, int_interval(-n * n - n, -n * n + 1));
    }

    #[test]
    fn translate_by_identity_is_noop() {
        let f = int_interval(0, 10);
        let t = f.translate(&GroupElement::Int(0)).unwrap();
        assert_eq!(t.symmetric_difference(&f).cardinality(), 0);
    }

    fn heis_strategy() -> impl Strategy<Value = GroupElement> {
        (-10i64..=10, -10i64..=10, -10i64..=10)
            .prop_map(|(a, b, c)| GroupElement::heisenberg(a, b, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn heisenberg_associativity(g in heis_strategy(), h in heis_strategy(), k in heis_strategy()) {
            let lhs = g.multiply(&h).unwrap().multiply(&k).unwrap();
            let rhs = g.multiply(&h.multiply(&k).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn heisenberg_identity_and_inverse(g in heis_strategy()) {
            let e = GroupDescriptor::Heisenberg.identity();
            prop_assert_eq!(e.multiply(&g).unwrap(), g.clone());
            prop_assert_eq!(g.multiply(&e).unwrap(), g.clone());
            prop_assert!(g.multiply(&g.inverse()).unwrap().is_identity());
        }
    }

    proptest! {
        #[test]
        fn translate_preserves_cardinality(xs in prop::collection::vec(-50i64..50, 1..40), g in -20i64..20) {
            let f: FiniteSubset = xs.into_iter().map(GroupElement::Int).collect();
            let t = f.translate(&GroupElement::Int(g)).unwrap();
            prop_assert_eq!(t.cardinality(), f.cardinality());
            prop_assert_eq!(f.inverse_set().cardinality(), f.cardinality());
        }

        #[test]
        fn symdiff_translate_symmetry(xs in prop::collection::vec(-50i64..50, 1..40), g in -20i64..20) {
            // |gF △ F| = |g^-1 F △ F|
            let f: FiniteSubset = xs.into_iter().map(GroupElement::Int).collect();
            let ge = GroupElement::Int(g);
            let a = f.translate(&ge).unwrap().symmetric_difference(&f).cardinality();
            let b = f.translate(&ge.inverse()).unwrap().symmetric_difference(&f).cardinality();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn streaming_symdiff_len_matches_merge(xs in prop::collection::vec(-50i64..50, 1..40), g in -20i64..20) {
            let f: FiniteSubset = xs.into_iter().map(GroupElement::Int).collect();
            let ge = GroupElement::Int(g);
            let streamed = f.translated_symmetric_difference_len(&ge).unwrap();
            let merged = f.translate(&ge).unwrap().symmetric_difference(&f).cardinality();
            prop_assert_eq!(streamed, merged);
        }

        #[test]
        fn streaming_symdiff_len_heisenberg_fallback(
            xs in prop::collection::vec((-4i64..4, -4i64..4, -4i64..4), 1..25),
            g in (-3i64..3, -3i64..3, -3i64..3),
        ) {
            let f: FiniteSubset = xs.into_iter().map(|(a, b, c)| GroupElement::heisenberg(a, b, c)).collect();
            let ge = GroupElement::heisenberg(g.0, g.1, g.2);
            let streamed = f.translated_symmetric_difference_len(&ge).unwrap();
            let merged = f.translate(&ge).unwrap().symmetric_difference(&f).cardinality();
            prop_assert_eq!(streamed, merged);
        }

        #[test]
        fn symdiff_involution(xs in prop::collection::vec(-50i64..50, 0..30), ys in prop::collection::vec(-50i64..50, 0..30)) {
            let f: FiniteSubset = xs.into_iter().map(GroupElement::Int).collect();
            let h: FiniteSubset = ys.into_iter().map(GroupElement::Int).collect();
            prop_assert_eq!(f.symmetric_difference(&h).symmetric_difference(&h), f);
        }
    }
}
