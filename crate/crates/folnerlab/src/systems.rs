//! Concrete phase spaces, group actions, observables, and measure samplers.
//!
//! Every continuous system here acts by rotations so that the invariant
//! measure is the uniform one and exact integral oracles exist for the
//! library observables. The binary shift materializes configurations
//! lazily: coordinate `w(h)` is a fair bit keyed by `(seed, h)`, and the
//! action only moves the base translate, so shifts over `Z^d` and the
//! Heisenberg group need no stored configuration.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};

const TAU: f64 = std::f64::consts::TAU;

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % 1.0;
    d.min(1.0 - d)
}

// splitmix64; stable across platforms and runs.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn mix_element(seed: u64, g: &GroupElement) -> u64 {
    fn fold(acc: u64, g: &GroupElement) -> u64 {
        match g {
            GroupElement::Int(a) => mix(acc ^ (*a as u64)),
            GroupElement::Lattice(v) => v.iter().fold(mix(acc ^ 0x11), |h, x| mix(h ^ (*x as u64))),
            GroupElement::Heisenberg(c) => {
                c.iter().fold(mix(acc ^ 0x22), |h, x| mix(h ^ (*x as u64)))
            }
            GroupElement::Tuple(parts) => parts.iter().fold(mix(acc ^ 0x33), fold),
        }
    }
    fold(mix(seed), g)
}

/// A fair bit for configuration coordinate `h` of the configuration named by `seed`.
pub fn config_bit(seed: u64, h: &GroupElement) -> u8 {
    (mix_element(seed, h) & 1) as u8
}

/// A point of one of the library phase spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Circle(f64),
    Torus(Vec<f64>),
    /// Lazily evaluated configuration `w: G -> {0,1}`, named by `seed` and a
    /// base translate: the point is `T_base w_seed`, so coordinate `h` reads
    /// the fair bit at `h * base`.
    Config { seed: u64, base: GroupElement },
    TwoCircle { component: u8, x: f64 },
    Line(i64),
}

impl Point {
    pub fn circle(x: f64) -> Self {
        Point::Circle(frac(x))
    }

    /// Coordinate `h` of a configuration point.
    pub fn coordinate(&self, h: &GroupElement) -> Result<u8> {
        match self {
            Point::Config { seed, base } => Ok(config_bit(*seed, &h.multiply(base)?)),
            _ => Err(Error::InvalidSpec(
                "coordinate() only applies to shift configurations".into(),
            )),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Circle(x) => write!(f, "{x:.12}"),
            Point::Torus(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:.12}")).collect();
                write!(f, "({})", parts.join(","))
            }
            Point::Config { seed, base } => write!(f, "config(seed={seed},base={base})"),
            Point::TwoCircle { component, x } => write!(f, "({component},{x:.12})"),
            Point::Line(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ActionKind {
    /// Z acting on the circle by x -> x + n*alpha.
    CircleRotation { alpha: f64 },
    /// Z acting on the d-torus by x_i -> x_i + n*alpha_i.
    TorusRotation { alphas: Vec<f64> },
    /// Z acting on the d-torus in a single coordinate; used to build
    /// commuting families for iterated product averages.
    TorusCoordRotation { dim: usize, coord: usize, alpha: f64 },
    /// G acting on {0,1}^G by (T_g w)(h) = w(hg).
    Shift { seed: u64 },
    /// Z acting on two disjoint circles, rotating component j by alpha_j.
    /// The canonical non-ergodic fixture; invariant measure weights (1/2, 1/2).
    TwoCircle { alpha0: f64, alpha1: f64 },
    /// Z acting on Z by translation. Non-compact, dissipative.
    IntLine,
}

/// A measure-preserving action of a discrete group on a phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    descriptor: GroupDescriptor,
    kind: ActionKind,
}

impl Action {
    pub fn circle_rotation(alpha: f64) -> Self {
        Action {
            descriptor: GroupDescriptor::Integers,
            kind: ActionKind::CircleRotation { alpha },
        }
    }

    pub fn torus_rotation(alphas: Vec<f64>) -> Self {
        Action {
            descriptor: GroupDescriptor::Integers,
            kind: ActionKind::TorusRotation { alphas },
        }
    }

    pub fn torus_coord_rotation(dim: usize, coord: usize, alpha: f64) -> Result<Self> {
        if coord >= dim {
            return Err(Error::InvalidSpec(format!(
                "coordinate {coord} out of range for torus of dimension {dim}"
            )));
        }
        Ok(Action {
            descriptor: GroupDescriptor::Integers,
            kind: ActionKind::TorusCoordRotation { dim, coord, alpha },
        })
    }

    pub fn shift(descriptor: GroupDescriptor, seed: u64) -> Result<Self> {
        descriptor.validate()?;
        Ok(Action {
            descriptor,
            kind: ActionKind::Shift { seed },
        })
    }

    pub fn two_circle(alpha0: f64, alpha1: f64) -> Self {
        Action {
            descriptor: GroupDescriptor::Integers,
            kind: ActionKind::TwoCircle { alpha0, alpha1 },
        }
    }

    pub fn int_line() -> Self {
        Action {
            descriptor: GroupDescriptor::Integers,
            kind: ActionKind::IntLine,
        }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn is_integer_action(&self) -> bool {
        self.descriptor == GroupDescriptor::Integers
    }

    /// The rotation number, when the action is the single circle rotation.
    pub fn rotation_number(&self) -> Option<f64> {
        match &self.kind {
            ActionKind::CircleRotation { alpha } => Some(*alpha),
            _ => None,
        }
    }

    /// The canonical starting point of the system.
    pub fn base_point(&self) -> Point {
        match &self.kind {
            ActionKind::CircleRotation { .. } => Point::Circle(0.0),
            ActionKind::TorusRotation { alphas } => Point::Torus(vec![0.0; alphas.len()]),
            ActionKind::TorusCoordRotation { dim, .. } => Point::Torus(vec![0.0; *dim]),
            ActionKind::Shift { seed } => Point::Config {
                seed: *seed,
                base: self.descriptor.identity(),
            },
            ActionKind::TwoCircle { .. } => Point::TwoCircle { component: 0, x: 0.0 },
            ActionKind::IntLine => Point::Line(0),
        }
    }

    fn expect_int(g: &GroupElement) -> Result<i64> {
        match g {
            GroupElement::Int(n) => Ok(*n),
            other => Err(Error::DescriptorMismatch(format!(
                "integer action applied to {other:?}"
            ))),
        }
    }

    /// Apply `T_g` to `x`.
    pub fn apply(&self, g: &GroupElement, x: &Point) -> Result<Point> {
        match (&self.kind, x) {
            (ActionKind::CircleRotation { alpha }, Point::Circle(x)) => {
                let n = Self::expect_int(g)?;
                Ok(Point::Circle(frac(x + n as f64 * alpha)))
            }
            (ActionKind::TorusRotation { alphas }, Point::Torus(xs))
                if alphas.len() == xs.len() =>
            {
                let n = Self::expect_int(g)? as f64;
                Ok(Point::Torus(
                    xs.iter().zip(alphas).map(|(x, a)| frac(x + n * a)).collect(),
                ))
            }
            (ActionKind::TorusCoordRotation { dim, coord, alpha }, Point::Torus(xs))
                if xs.len() == *dim =>
            {
                let n = Self::expect_int(g)? as f64;
                let mut out = xs.clone();
                out[*coord] = frac(out[*coord] + n * alpha);
                Ok(Point::Torus(out))
            }
            // (T_g w)(h) = w(hg): the base translate picks up g on the left
            // so that T_{g1} T_{g2} = T_{g1 g2}.
            (ActionKind::Shift { .. }, Point::Config { seed, base }) => Ok(Point::Config {
                seed: *seed,
                base: g.multiply(base)?,
            }),
            (ActionKind::TwoCircle { alpha0, alpha1 }, Point::TwoCircle { component, x }) => {
                let n = Self::expect_int(g)? as f64;
                let alpha = if *component == 0 { *alpha0 } else { *alpha1 };
                Ok(Point::TwoCircle {
                    component: *component,
                    x: frac(x + n * alpha),
                })
            }
            (ActionKind::IntLine, Point::Line(m)) => {
                let n = Self::expect_int(g)?;
                Ok(Point::Line(m + n))
            }
            _ => Err(Error::InvalidSpec(format!(
                "point {x} does not belong to the phase space of this action"
            ))),
        }
    }

    /// Metric on the phase space, when one is available. Circle/torus use the
    /// coordinate-wise circular distance (sup over coordinates); the two-circle
    /// space puts distinct components at diameter 1; shift configurations use
    /// the 2^-k cylinder metric truncated at radius `SHIFT_METRIC_RADIUS`
    /// (Z-shifts only).
    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        match (&self.kind, a, b) {
            (ActionKind::CircleRotation { .. }, Point::Circle(x), Point::Circle(y)) => {
                Ok(circle_dist(*x, *y))
            }
            (
                ActionKind::TorusRotation { .. } | ActionKind::TorusCoordRotation { .. },
                Point::Torus(xs),
                Point::Torus(ys),
            ) if xs.len() == ys.len() => Ok(xs
                .iter()
                .zip(ys)
                .map(|(x, y)| circle_dist(*x, *y))
                .fold(0.0, f64::max)),
            (
                ActionKind::TwoCircle { .. },
                Point::TwoCircle { component: c1, x },
                Point::TwoCircle { component: c2, x: y },
            ) => {
                if c1 == c2 {
                    Ok(circle_dist(*x, *y))
                } else {
                    Ok(1.0)
                }
            }
            (ActionKind::Shift { .. }, pa @ Point::Config { .. }, pb @ Point::Config { .. })
                if self.descriptor == GroupDescriptor::Integers =>
            {
                for r in 0..=SHIFT_METRIC_RADIUS {
                    for h in [GroupElement::Int(r), GroupElement::Int(-r)] {
                        if pa.coordinate(&h)? != pb.coordinate(&h)? {
                            return Ok(2f64.powi(-(r as i32)));
                        }
                    }
                }
                Ok(0.0)
            }
            _ => Err(Error::MetricUnavailable),
        }
    }

    /// Diameter of the phase space under [`Action::distance`], when finite.
    pub fn diameter(&self) -> Option<f64> {
        match &self.kind {
            ActionKind::CircleRotation { .. }
            | ActionKind::TorusRotation { .. }
            | ActionKind::TorusCoordRotation { .. } => Some(0.5),
            ActionKind::TwoCircle { .. } => Some(1.0),
            ActionKind::Shift { .. } => Some(1.0),
            ActionKind::IntLine => None,
        }
    }

    /// The default sampler for the canonical invariant measure.
    pub fn sampler(&self) -> MeasureSampler {
        let kind = match &self.kind {
            ActionKind::CircleRotation { .. } => SamplerKind::Circle,
            ActionKind::TorusRotation { alphas } => SamplerKind::Torus(alphas.len()),
            ActionKind::TorusCoordRotation { dim, .. } => SamplerKind::Torus(*dim),
            ActionKind::Shift { .. } => SamplerKind::Shift(self.descriptor.clone()),
            ActionKind::TwoCircle { .. } => SamplerKind::TwoCircle,
            ActionKind::IntLine => SamplerKind::Unavailable,
        };
        MeasureSampler { kind }
    }

    /// Parse a system spec such as `rotation:alpha=0.618`,
    /// `torus:alpha=[0.1,0.2]`, `shift:G=Z,seed=42`,
    /// `twocircle:a0=0.41,a1=0.29`, or `zline`.
    pub fn parse(spec: &str) -> Result<Action> {
        let bad = |msg: &str| Error::InvalidSpec(format!("system spec `{spec}`: {msg}"));
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h.trim(), r.trim()),
            None => (spec.trim(), ""),
        };
        let params = parse_params(rest);
        let get = |key: &str| {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
        };
        match head {
            "rotation" => {
                let alpha: f64 = get("alpha")
                    .ok_or_else(|| bad("missing alpha"))?
                    .parse()
                    .map_err(|_| bad("bad alpha"))?;
                if !alpha.is_finite() {
                    return Err(bad("alpha must be finite"));
                }
                Ok(Action::circle_rotation(alpha))
            }
            "torus" => {
                let raw = get("alpha").ok_or_else(|| bad("missing alpha"))?;
                let raw = raw
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| bad("alpha must be a [a1,a2,...] list"))?;
                let alphas: std::result::Result<Vec<f64>, _> = raw
                    .split(|c| c == ',' || c == ';')
                    .map(|t| t.trim().parse())
                    .collect();
                let alphas = alphas.map_err(|_| bad("bad alpha list"))?;
                if alphas.is_empty() || alphas.iter().any(|a| !a.is_finite()) {
                    return Err(bad("alpha list must be nonempty and finite"));
                }
                Ok(Action::torus_rotation(alphas))
            }
            "shift" => {
                let desc: GroupDescriptor = get("G").ok_or_else(|| bad("missing G"))?.parse()?;
                let seed: u64 = get("seed")
                    .unwrap_or("0")
                    .parse()
                    .map_err(|_| bad("bad seed"))?;
                Action::shift(desc, seed)
            }
            "twocircle" => {
                let a0: f64 = get("a0")
                    .ok_or_else(|| bad("missing a0"))?
                    .parse()
                    .map_err(|_| bad("bad a0"))?;
                let a1: f64 = get("a1")
                    .ok_or_else(|| bad("missing a1"))?
                    .parse()
                    .map_err(|_| bad("bad a1"))?;
                Ok(Action::two_circle(a0, a1))
            }
            "zline" => Ok(Action::int_line()),
            _ => Err(bad("unknown system kind")),
        }
    }
}

/// Truncation radius for the shift-space cylinder metric.
pub const SHIFT_METRIC_RADIUS: i64 = 20;

fn parse_params(s: &str) -> Vec<(String, String)> {
    if s.is_empty() {
        return Vec::new();
    }
    // Split on commas that are not inside [...] lists.
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' => {
                depth += 1;
                cur.push(c);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out.into_iter()
        .filter_map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// Structural tag describing a library observable, so that exact-integral
/// and correlation oracles can pattern-match instead of probing the closure.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservableKind {
    Constant(f64),
    Cos { k: u32 },
    Sin { k: u32 },
    Arc { a: f64 },
    /// cos(2 pi k x_coord) on the torus.
    CosCoord { k: u32, coord: usize },
    /// Coordinate-0 bit of a shift configuration.
    Cylinder0,
    ComponentIndicator(u8),
    InverseSqrt,
    /// Tent function on the Z-line supported on [-half, half].
    Tent { half: i64 },
    Custom,
    /// User-supplied set-membership function, declared {0,1}-valued.
    CustomIndicator,
}

/// A real-valued test function on a phase space, with sup-bound metadata.
#[derive(Clone)]
pub struct Observable {
    label: String,
    kind: ObservableKind,
    /// `None` means the observable is flagged unbounded.
    sup_bound: Option<f64>,
    eval: Arc<dyn Fn(&Point) -> f64 + Send + Sync>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("sup_bound", &self.sup_bound)
            .finish()
    }
}

fn point_coord(x: &Point) -> f64 {
    match x {
        Point::Circle(v) => *v,
        Point::TwoCircle { x, .. } => *x,
        _ => panic!("observable applied to a point without a circle coordinate: {x}"),
    }
}

impl Observable {
    pub fn new(
        label: impl Into<String>,
        sup_bound: Option<f64>,
        eval: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Observable {
            label: label.into(),
            kind: ObservableKind::Custom,
            sup_bound,
            eval: Arc::new(eval),
        }
    }

    /// A user-supplied set indicator; the caller declares it {0,1}-valued.
    pub fn indicator_fn(
        label: impl Into<String>,
        eval: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Observable {
            label: label.into(),
            kind: ObservableKind::CustomIndicator,
            sup_bound: Some(1.0),
            eval: Arc::new(eval),
        }
    }

    pub fn constant(c: f64) -> Self {
        Observable {
            label: format!("const({c})"),
            kind: ObservableKind::Constant(c),
            sup_bound: Some(c.abs()),
            eval: Arc::new(move |_| c),
        }
    }

    pub fn cos(k: u32) -> Self {
        Observable {
            label: format!("cos(2pi*{k}x)"),
            kind: ObservableKind::Cos { k },
            sup_bound: Some(1.0),
            eval: Arc::new(move |x| (TAU * k as f64 * point_coord(x)).cos()),
        }
    }

    pub fn sin(k: u32) -> Self {
        Observable {
            label: format!("sin(2pi*{k}x)"),
            kind: ObservableKind::Sin { k },
            sup_bound: Some(1.0),
            eval: Arc::new(move |x| (TAU * k as f64 * point_coord(x)).sin()),
        }
    }

    /// Indicator of the arc [0, a).
    pub fn arc(a: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&a) || a <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "arc endpoint must satisfy 0 < a < 1, got {a}"
            )));
        }
        Ok(Observable {
            label: format!("arc[0,{a})"),
            kind: ObservableKind::Arc { a },
            sup_bound: Some(1.0),
            eval: Arc::new(move |x| if point_coord(x) < a { 1.0 } else { 0.0 }),
        })
    }

    /// cos(2 pi k x_coord) on a torus point.
    pub fn cos_coord(k: u32, coord: usize) -> Self {
        Observable {
            label: format!("cos(2pi*{k}x{coord})"),
            kind: ObservableKind::CosCoord { k, coord },
            sup_bound: Some(1.0),
            eval: Arc::new(move |x| match x {
                Point::Torus(v) => (TAU * k as f64 * v[coord]).cos(),
                _ => panic!("cos_coord applied to non-torus point {x}"),
            }),
        }
    }

    /// The coordinate-0 bit of a shift configuration.
    pub fn cylinder0() -> Self {
        Observable {
            label: "cylinder0".into(),
            kind: ObservableKind::Cylinder0,
            sup_bound: Some(1.0),
            eval: Arc::new(|x| match x {
                Point::Config { seed, base } => config_bit(*seed, base) as f64,
                _ => panic!("cylinder0 applied to non-configuration point {x}"),
            }),
        }
    }

    /// Indicator of component `j` of the two-circle space.
    pub fn component_indicator(j: u8) -> Self {
        Observable {
            label: format!("component={j}"),
            kind: ObservableKind::ComponentIndicator(j),
            sup_bound: Some(1.0),
            eval: Arc::new(move |x| match x {
                Point::TwoCircle { component, .. } => {
                    if *component == j {
                        1.0
                    } else {
                        0.0
                    }
                }
                _ => panic!("component indicator applied to {x}"),
            }),
        }
    }

    /// x^(-1/2) on the circle; flagged unbounded (it is L^1 but not L^inf).
    pub fn inverse_sqrt() -> Self {
        Observable {
            label: "x^(-1/2)".into(),
            kind: ObservableKind::InverseSqrt,
            sup_bound: None,
            eval: Arc::new(|x| {
                let v = point_coord(x);
                if v <= 0.0 {
                    f64::INFINITY
                } else {
                    v.powf(-0.5)
                }
            }),
        }
    }

    /// Tent function on the Z-line: 1 - |n|/(half+1) on [-half, half], 0 outside.
    pub fn tent(half: i64) -> Result<Self> {
        if half < 0 {
            return Err(Error::InvalidSpec("tent half-width must be >= 0".into()));
        }
        Ok(Observable {
            label: format!("tent[-{half},{half}]"),
            kind: ObservableKind::Tent { half },
            sup_bound: Some(1.0),
            eval: Arc::new(move |x| match x {
                Point::Line(n) => {
                    if n.abs() <= half {
                        1.0 - n.abs() as f64 / (half + 1) as f64
                    } else {
                        0.0
                    }
                }
                _ => panic!("tent applied to non-line point {x}"),
            }),
        })
    }

    /// Parse an observable spec such as `const:c=3.5`, `cos:k=2`, `sin:k=1`,
    /// `arc:a=0.3`, `coscoord:k=1,coord=0`, `cylinder0`, `component:j=0`,
    /// `invsqrt`, `tent:half=5`.
    pub fn parse(spec: &str) -> Result<Observable> {
        let bad = |msg: &str| Error::InvalidSpec(format!("observable spec `{spec}`: {msg}"));
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h.trim(), r.trim()),
            None => (spec.trim(), ""),
        };
        let params = parse_params(rest);
        let get = |key: &str| {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
        };
        let num = |key: &str| -> Result<f64> {
            get(key)
                .ok_or_else(|| bad(&format!("missing {key}")))?
                .parse()
                .map_err(|_| bad(&format!("bad {key}")))
        };
        match head {
            "const" => Ok(Observable::constant(num("c")?)),
            "cos" => Ok(Observable::cos(num("k")? as u32)),
            "sin" => Ok(Observable::sin(num("k")? as u32)),
            "arc" => Observable::arc(num("a")?),
            "coscoord" => Ok(Observable::cos_coord(num("k")? as u32, num("coord")? as usize)),
            "cylinder0" => Ok(Observable::cylinder0()),
            "component" => Ok(Observable::component_indicator(num("j")? as u8)),
            "invsqrt" => Ok(Observable::inverse_sqrt()),
            "tent" => Observable::tent(num("half")? as i64),
            _ => Err(bad("unknown observable kind")),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &ObservableKind {
        &self.kind
    }

    pub fn evaluate(&self, x: &Point) -> f64 {
        (self.eval)(x)
    }

    pub fn sup_bound(&self) -> Option<f64> {
        self.sup_bound
    }

    pub fn is_bounded(&self) -> bool {
        self.sup_bound.is_some()
    }

    pub fn require_bounded(&self) -> Result<f64> {
        self.sup_bound
            .ok_or_else(|| Error::UnboundedObservable(self.label.clone()))
    }

    /// Whether the observable takes only values in {0,1} (by construction).
    pub fn is_indicator(&self) -> bool {
        matches!(
            self.kind,
            ObservableKind::Arc { .. }
                | ObservableKind::Cylinder0
                | ObservableKind::ComponentIndicator(_)
                | ObservableKind::CustomIndicator
        ) || matches!(self.kind, ObservableKind::Constant(c) if c == 0.0 || c == 1.0)
    }

    /// Declared compact support on the Z-line, when any.
    pub fn compact_support(&self) -> Option<(i64, i64)> {
        match self.kind {
            ObservableKind::Tent { half } => Some((-half, half)),
            ObservableKind::Constant(c) if c == 0.0 => Some((0, 0)),
            _ => None,
        }
    }

    /// Exact integral against the canonical invariant measure of the library
    /// system the observable was built for, when known in closed form.
    pub fn exact_integral(&self) -> Option<f64> {
        match self.kind {
            ObservableKind::Constant(c) => Some(c),
            ObservableKind::Cos { k } | ObservableKind::Sin { k } if k >= 1 => Some(0.0),
            ObservableKind::CosCoord { k, .. } if k >= 1 => Some(0.0),
            ObservableKind::Arc { a } => Some(a),
            ObservableKind::Cylinder0 => Some(0.5),
            ObservableKind::ComponentIndicator(_) => Some(0.5),
            _ => None,
        }
    }

    /// a*phi + psi, for linearity checks and derived dictionary entries.
    pub fn affine_combination(a: f64, phi: &Observable, psi: &Observable) -> Observable {
        let (f, g) = (phi.eval.clone(), psi.eval.clone());
        Observable {
            label: format!("{a}*{} + {}", phi.label, psi.label),
            kind: ObservableKind::Custom,
            sup_bound: match (phi.sup_bound, psi.sup_bound) {
                (Some(b1), Some(b2)) => Some(a.abs() * b1 + b2),
                _ => None,
            },
            eval: Arc::new(move |x| a * f(x) + g(x)),
        }
    }

    /// Pointwise product, for separable torus observables.
    pub fn product_of(phi: &Observable, psi: &Observable) -> Observable {
        let (f, g) = (phi.eval.clone(), psi.eval.clone());
        Observable {
            label: format!("{}*{}", phi.label, psi.label),
            kind: ObservableKind::Custom,
            sup_bound: match (phi.sup_bound, psi.sup_bound) {
                (Some(b1), Some(b2)) => Some(b1 * b2),
                _ => None,
            },
            eval: Arc::new(move |x| f(x) * g(x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum SamplerKind {
    Circle,
    Torus(usize),
    Shift(GroupDescriptor),
    TwoCircle,
    Unavailable,
}

/// Seeded sampler for the canonical invariant measure of a library system.
#[derive(Debug, Clone)]
pub struct MeasureSampler {
    kind: SamplerKind,
}

impl MeasureSampler {
    /// Draw `count` points; deterministic for a fixed seed. Stream `stream`
    /// splits the sampler so parallel consumers stay reproducible.
    pub fn sample_stream(&self, count: usize, seed: u64, stream: u64) -> Result<Vec<Point>> {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ mix(stream)));
        (0..count).map(|_| self.draw(&mut rng)).collect()
    }

    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<Point>> {
        self.sample_stream(count, seed, 0)
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Point> {
        match &self.kind {
            SamplerKind::Circle => Ok(Point::Circle(rng.gen::<f64>())),
            SamplerKind::Torus(d) => Ok(Point::Torus((0..*d).map(|_| rng.gen::<f64>()).collect())),
            SamplerKind::Shift(desc) => Ok(Point::Config {
                seed: rng.gen::<u64>(),
                base: desc.identity(),
            }),
            SamplerKind::TwoCircle => Ok(Point::TwoCircle {
                component: if rng.gen::<bool>() { 1 } else { 0 },
                x: rng.gen::<f64>(),
            }),
            SamplerKind::Unavailable => Err(Error::InvalidSpec(
                "no canonical invariant probability measure for this system".into(),
            )),
        }
    }
}
