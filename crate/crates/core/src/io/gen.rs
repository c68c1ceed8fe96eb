use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{ClassTag, GraphInput, Instance, Mode};
use crate::geometry::{covers, Point, Segment, UnitSquare};
use crate::scalar::Scalar;

/// Spacing between consecutive vertex positions in the vertex-cover reduction.
pub const VERTEX_GAP: (i64, i64) = (11, 10);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bounding box must be at least 1, got {0}")]
    BadBox(i64),
}

struct Draw(ChaCha8Rng);

impl Draw {
    /// A multiple of 1/10 in `[lo, hi]`.
    fn tenth(&mut self, lo: i64, hi: i64) -> Scalar {
        Scalar::ratio(self.0.gen_range(lo * 10..=hi * 10), 10)
    }

    fn point(&mut self, bbox: i64) -> Point {
        Point { x: self.tenth(0, bbox), y: self.tenth(0, bbox) }
    }

    fn coin(&mut self) -> bool {
        self.0.gen_bool(0.5)
    }
}

fn unit_segment(p: Point, vertical: bool) -> Segment {
    let q = if vertical {
        Point { x: p.x.clone(), y: &p.y + Scalar::one() }
    } else {
        Point { x: &p.x + Scalar::one(), y: p.y.clone() }
    };
    Segment::new(p, q).expect("unit segment is not degenerate")
}

fn arbitrary_segment(d: &mut Draw, bbox: i64) -> Segment {
    loop {
        if let Ok(s) = Segment::new(d.point(bbox), d.point(bbox)) {
            return s;
        }
    }
}

/// Seeded random instance of the given class with `n` segments and
/// coordinates on the 1/10 grid inside `[0, bbox]²`.
///
/// Discrete instances first give every segment not yet covered a square
/// containing one of its endpoints, then add random squares until there are
/// `m` (default `n`); so there are `max(m, squares needed)` squares.
pub fn gen_random(class: ClassTag, n: usize, seed: u64, bbox: i64, m: Option<usize>) -> Result<Instance, GenError> {
    if bbox < 1 {
        return Err(GenError::BadBox(bbox));
    }
    let mut d = Draw(ChaCha8Rng::seed_from_u64(seed));
    let segments: Vec<Segment> = (0..n)
        .map(|_| match class {
            ClassTag::H1us => unit_segment(Point { x: d.tenth(0, bbox), y: d.tenth(0, 1) }, false),
            ClassTag::H1 => unit_segment(d.point(bbox), false),
            ClassTag::Hv1 => {
                let vertical = d.coin();
                unit_segment(d.point(bbox), vertical)
            }
            ClassTag::Arb | ClassTag::Discrete => arbitrary_segment(&mut d, bbox),
        })
        .collect();

    let mut squares = Vec::new();
    if class == ClassTag::Discrete {
        for s in &segments {
            if squares.iter().any(|t| covers(t, s)) {
                continue;
            }
            let p = if d.coin() { s.left() } else { s.right() };
            squares.push(UnitSquare { x: &p.x - d.tenth(0, 1), y: &p.y - d.tenth(0, 1) });
        }
        while squares.len() < m.unwrap_or(n) {
            squares.push(UnitSquare { x: d.tenth(-1, bbox), y: d.tenth(-1, bbox) });
        }
    }
    let mode = if class == ClassTag::Discrete { Mode::Discrete } else { Mode::Continuous };
    Ok(Instance { mode, class, segments, squares, seed: Some(seed), generator: Some("random".into()) })
}

/// Horizontal segments of length 1/10 to 3 inside the strip `0 ≤ y ≤ 1`.
pub fn gen_strip_arb(n: usize, seed: u64, bbox: i64) -> Result<Instance, GenError> {
    if bbox < 1 {
        return Err(GenError::BadBox(bbox));
    }
    let mut d = Draw(ChaCha8Rng::seed_from_u64(seed));
    let segments = (0..n)
        .map(|_| {
            let (x, y) = (d.tenth(0, bbox), d.tenth(0, 1));
            let len = Scalar::ratio(d.0.gen_range(1..=30), 10);
            Segment::new(Point { x: x.clone(), y: y.clone() }, Point { x: x + len, y }).expect("positive length")
        })
        .collect::<Vec<_>>();
    let class = ClassTag::classify(Mode::Continuous, &segments);
    Ok(Instance {
        mode: Mode::Continuous,
        class,
        segments,
        squares: Vec::new(),
        seed: Some(seed),
        generator: Some("strip-arb".into()),
    })
}

/// Discrete instance whose optimum equals the minimum vertex cover of `g`.
///
/// Vertex `v` sits at `x_v = v · 11/10` on the x-axis and owns the unit
/// square standing on `[x_v − 1/2, x_v + 1/2]`; edge `(u, v)` becomes the
/// segment from `(x_u, 0)` to `(x_v, 0)`. Vertex positions are more than 1
/// apart, so a square contains exactly one vertex position.
pub fn vertex_cover_reduction(g: &GraphInput) -> Instance {
    let x = |v: usize| Scalar::ratio(v as i64 * VERTEX_GAP.0, VERTEX_GAP.1);
    let half = Scalar::ratio(1, 2);
    let squares = (0..g.n).map(|v| UnitSquare { x: x(v) - &half, y: Scalar::zero() }).collect();
    let segments = g
        .edges
        .iter()
        .map(|&(u, v)| Segment::new(Point { x: x(u), y: Scalar::zero() }, Point { x: x(v), y: Scalar::zero() }).expect("simple graph"))
        .collect();
    let mut inst = Instance::discrete(segments, squares);
    inst.generator = Some("vertex-cover".into());
    inst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_discrete, DEFAULT_NODE_BUDGET};
    use crate::io::{parse_instance, serialize_instance};

    #[test]
    fn empty_and_deterministic() {
        for class in ClassTag::ALL {
            assert!(gen_random(class, 0, 1, 5, None).unwrap().segments.is_empty());
            let a = gen_random(class, 12, 77, 6, Some(4)).unwrap();
            let b = gen_random(class, 12, 77, 6, Some(4)).unwrap();
            assert_eq!(serialize_instance(&a), serialize_instance(&b));
            let back = parse_instance(&serialize_instance(&a)).unwrap();
            assert_eq!(back, a);
            assert!(class.check(&a.segments).is_ok());
        }
        assert_eq!(gen_random(ClassTag::H1, 3, 0, 0, None), Err(GenError::BadBox(0)));
    }

    #[test]
    fn discrete_is_always_feasible() {
        for seed in 0..1000 {
            let inst = gen_random(ClassTag::Discrete, 8, seed, 5, Some(3)).unwrap();
            assert!(inst.squares.len() >= 3);
            for s in &inst.segments {
                assert!(inst.squares.iter().any(|t| covers(t, s)));
            }
        }
    }

    #[test]
    fn strip_arb_stays_in_strip() {
        let inst = gen_strip_arb(50, 3, 10).unwrap();
        for s in &inst.segments {
            assert!(s.is_horizontal());
            assert!(s.left().y >= Scalar::zero() && s.left().y <= Scalar::one());
        }
    }

    #[test]
    fn reduction_examples() {
        let empty = vertex_cover_reduction(&GraphInput::new(3, vec![]).unwrap());
        assert!(empty.segments.is_empty());
        assert_eq!(empty.squares.len(), 3);

        let edge = vertex_cover_reduction(&GraphInput::new(2, vec![(0, 1)]).unwrap());
        assert_eq!((edge.segments.len(), edge.squares.len()), (1, 2));
        assert_eq!(exact_discrete(&edge.segments, &edge.squares, DEFAULT_NODE_BUDGET).unwrap().0.len(), 1);

        let k3 = vertex_cover_reduction(&GraphInput::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap());
        assert_eq!(exact_discrete(&k3.segments, &k3.squares, DEFAULT_NODE_BUDGET).unwrap().0.len(), 2);
        for (v, sq) in k3.squares.iter().enumerate() {
            let hits = (0..3).filter(|&u| sq.contains(&Point { x: Scalar::ratio(u * 11, 10), y: Scalar::zero() })).count();
            assert_eq!(hits, 1, "square {v}");
        }
    }
}
