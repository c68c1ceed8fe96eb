//! Text formats for instances, covers and graphs, plus instance generators.

mod gen;
mod text;

pub use gen::{gen_random, gen_strip_arb, vertex_cover_reduction, GenError, VERTEX_GAP};
pub use text::{
    parse_cover, parse_graph, parse_instance, serialize_cover, serialize_graph, serialize_instance, CoverFile, ParseError,
};

use std::fmt;
use std::str::FromStr;

use crate::geometry::{Segment, UnitSquare};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Continuous,
    Discrete,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Continuous => "continuous",
            Mode::Discrete => "discrete",
        }
    }
}

/// Geometric class of an instance, from most to least restricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassTag {
    /// Unit horizontal segments within one unit-height strip.
    H1us,
    /// Unit horizontal segments.
    H1,
    /// Unit horizontal and vertical segments.
    Hv1,
    /// Any segments.
    Arb,
    /// Any segments, squares given.
    Discrete,
}

impl ClassTag {
    pub const ALL: [ClassTag; 5] = [ClassTag::H1us, ClassTag::H1, ClassTag::Hv1, ClassTag::Arb, ClassTag::Discrete];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::H1us => "h1us",
            ClassTag::H1 => "h1",
            ClassTag::Hv1 => "hv1",
            ClassTag::Arb => "arb",
            ClassTag::Discrete => "discrete",
        }
    }

    /// The most restricted class the segments belong to.
    pub fn classify(mode: Mode, segments: &[Segment]) -> ClassTag {
        if mode == Mode::Discrete {
            return ClassTag::Discrete;
        }
        [ClassTag::H1us, ClassTag::H1, ClassTag::Hv1]
            .into_iter()
            .find(|c| c.check(segments).is_ok())
            .unwrap_or(ClassTag::Arb)
    }

    /// First segment violating the class, with the reason.
    pub fn check(self, segments: &[Segment]) -> Result<(), (usize, &'static str)> {
        for (k, s) in segments.iter().enumerate() {
            let ok = match self {
                ClassTag::H1us | ClassTag::H1 => s.is_horizontal() && s.is_unit_length(),
                ClassTag::Hv1 => (s.is_horizontal() || s.is_vertical()) && s.is_unit_length(),
                ClassTag::Arb | ClassTag::Discrete => true,
            };
            if !ok {
                let why = match self {
                    ClassTag::Hv1 => "not a unit horizontal or vertical segment",
                    _ => "not a unit horizontal segment",
                };
                return Err((k, why));
            }
        }
        if self == ClassTag::H1us {
            let ys = || segments.iter().map(|s| &s.left().y);
            if let (Some(lo), Some(hi)) = (ys().min(), ys().max()) {
                if hi - lo > Scalar::one() {
                    let k = segments.iter().position(|s| s.left().y == *hi).expect("max exists");
                    return Err((k, "outside the unit-height strip of the other segments"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassTag::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown class '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub mode: Mode,
    pub class: ClassTag,
    pub segments: Vec<Segment>,
    /// Candidate squares by min corner; empty in continuous mode.
    pub squares: Vec<UnitSquare>,
    pub seed: Option<u64>,
    pub generator: Option<String>,
}

impl Instance {
    pub fn continuous(segments: Vec<Segment>) -> Instance {
        let class = ClassTag::classify(Mode::Continuous, &segments);
        Instance { mode: Mode::Continuous, class, segments, squares: Vec::new(), seed: None, generator: None }
    }

    pub fn discrete(segments: Vec<Segment>, squares: Vec<UnitSquare>) -> Instance {
        Instance { mode: Mode::Discrete, class: ClassTag::Discrete, segments, squares, seed: None, generator: None }
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInput {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphInput {
    /// Rejects self loops, repeated edges and out-of-range vertices.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<GraphInput, String> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(format!("edge ({u}, {v}) names a vertex outside 0..{n}"));
            }
            if u == v {
                return Err(format!("self loop at vertex {u}"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(format!("repeated edge ({u}, {v})"));
            }
        }
        Ok(GraphInput { n, edges })
    }
}
