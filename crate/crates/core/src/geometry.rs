//! Planar primitives and the covering predicates every solver builds on.
//!
//! A unit square covers a segment when its closed region contains at least
//! one of the segment's endpoints.

use std::collections::HashMap;
use std::fmt;

use crate::error::SolveError;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    /// Swap the axes.
    pub fn transposed(&self) -> Point {
        Point { x: self.y.clone(), y: self.x.clone() }
    }

    /// L∞ distance.
    pub fn chebyshev(&self, other: &Point) -> Scalar {
        let dx = (&self.x - &other.x).abs();
        let dy = (&self.y - &other.y).abs();
        dx.max(dy)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
    General,
}

/// A closed line segment with distinct endpoints.
///
/// Endpoints are normalized on construction: for non-vertical segments
/// `left()` has the smaller x, for vertical ones `left()` is the upper
/// endpoint and `right()` the lower.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    l: Point,
    r: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Segment, SolveError> {
        if a == b {
            return Err(SolveError::DegenerateSegment { at: Box::new(a) });
        }
        let swap = if a.x == b.x { a.y < b.y } else { a.x > b.x };
        Ok(if swap { Segment { l: b, r: a } } else { Segment { l: a, r: b } })
    }

    /// Convenience constructor from coordinates; panics on a degenerate segment.
    pub fn from_coords(x1: Scalar, y1: Scalar, x2: Scalar, y2: Scalar) -> Segment {
        Segment::new(Point { x: x1, y: y1 }, Point { x: x2, y: y2 }).expect("degenerate segment")
    }

    pub fn left(&self) -> &Point {
        &self.l
    }

    pub fn right(&self) -> &Point {
        &self.r
    }

    pub fn endpoints(&self) -> [&Point; 2] {
        [&self.l, &self.r]
    }

    pub fn orientation(&self) -> Orientation {
        if self.l.y == self.r.y {
            Orientation::Horizontal
        } else if self.l.x == self.r.x {
            Orientation::Vertical
        } else {
            Orientation::General
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.orientation() == Orientation::Horizontal
    }

    pub fn is_vertical(&self) -> bool {
        self.orientation() == Orientation::Vertical
    }

    /// Euclidean length exactly 1.
    pub fn is_unit_length(&self) -> bool {
        let dx = &self.r.x - &self.l.x;
        let dy = &self.r.y - &self.l.y;
        &dx * &dx + &dy * &dy == Scalar::one()
    }

    pub fn transposed(&self) -> Segment {
        Segment::new(self.l.transposed(), self.r.transposed()).expect("transpose keeps endpoints distinct")
    }

    pub fn translated(&self, dx: &Scalar, dy: &Scalar) -> Segment {
        let shift = |p: &Point| Point { x: &p.x + dx, y: &p.y + dy };
        Segment::new(shift(&self.l), shift(&self.r)).expect("translation keeps endpoints distinct")
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} -> {:?}]", self.l, self.r)
    }
}

/// Closed axis-parallel unit square `[x, x+1] × [y, y+1]`, stored by its
/// minimum corner.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitSquare {
    pub x: Scalar,
    pub y: Scalar,
}

impl UnitSquare {
    pub fn new(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        UnitSquare { x: x.into(), y: y.into() }
    }

    pub fn at(corner: &Point) -> Self {
        UnitSquare { x: corner.x.clone(), y: corner.y.clone() }
    }

    pub fn max_x(&self) -> Scalar {
        &self.x + Scalar::one()
    }

    pub fn max_y(&self) -> Scalar {
        &self.y + Scalar::one()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x && p.y >= self.y && p.x <= self.max_x() && p.y <= self.max_y()
    }

    pub fn transposed(&self) -> UnitSquare {
        UnitSquare { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn translated(&self, dx: &Scalar, dy: &Scalar) -> UnitSquare {
        UnitSquare { x: &self.x + dx, y: &self.y + dy }
    }
}

impl fmt::Debug for UnitSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sq({}, {})", self.x, self.y)
    }
}

pub fn covers(t: &UnitSquare, s: &Segment) -> bool {
    t.contains(s.left()) || t.contains(s.right())
}

/// Whether some unit square covers both segments: some pair of endpoints is
/// within L∞ distance 1.
pub fn jointly_coverable(s1: &Segment, s2: &Segment) -> bool {
    let one = Scalar::one();
    s1.endpoints()
        .into_iter()
        .any(|a| s2.endpoints().into_iter().any(|b| a.chebyshev(b) <= one))
}

pub fn is_independent_set(segments: &[Segment]) -> bool {
    segments
        .iter()
        .enumerate()
        .all(|(i, a)| segments[i + 1..].iter().all(|b| !jointly_coverable(a, b)))
}

/// A set of squares with a covering square recorded for every segment.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cover {
    pub squares: Vec<UnitSquare>,
    /// `witness[k]` is the index into `squares` of a square covering segment `k`.
    pub witness: Vec<usize>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Builds a cover from a square list, deduplicating and assigning each
    /// segment the first listed square that covers it.
    pub fn from_squares(segments: &[Segment], squares: impl IntoIterator<Item = UnitSquare>) -> Result<Cover, SolveError> {
        let mut builder = CoverBuilder::new(segments.len());
        for sq in squares {
            builder.push(sq);
        }
        for (k, s) in segments.iter().enumerate() {
            let idx = builder
                .squares
                .iter()
                .position(|t| covers(t, s))
                .ok_or(SolveError::Infeasible { segment: k })?;
            builder.witness[k] = Some(idx);
        }
        builder.finish()
    }

    /// Reorders squares by min corner `(x, y)` and remaps the witnesses.
    pub fn canonicalize(mut self) -> Cover {
        let mut order: Vec<usize> = (0..self.squares.len()).collect();
        order.sort_by(|&a, &b| {
            let (sa, sb) = (&self.squares[a], &self.squares[b]);
            (&sa.x, &sa.y).cmp(&(&sb.x, &sb.y))
        });
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let squares = order.iter().map(|&i| self.squares[i].clone()).collect();
        for w in &mut self.witness {
            *w = new_index[*w];
        }
        Cover { squares, witness: self.witness }
    }
}

/// Accumulates squares without duplicates while a solver runs.
#[derive(Debug, Clone)]
pub struct CoverBuilder {
    squares: Vec<UnitSquare>,
    index: HashMap<UnitSquare, usize>,
    witness: Vec<Option<usize>>,
}

impl CoverBuilder {
    pub fn new(segment_count: usize) -> Self {
        CoverBuilder { squares: Vec::new(), index: HashMap::new(), witness: vec![None; segment_count] }
    }

    /// Adds a square; returns its index and whether it was new.
    pub fn push(&mut self, sq: UnitSquare) -> (usize, bool) {
        if let Some(&i) = self.index.get(&sq) {
            return (i, false);
        }
        let i = self.squares.len();
        self.index.insert(sq.clone(), i);
        self.squares.push(sq);
        (i, true)
    }

    pub fn square(&self, idx: usize) -> &UnitSquare {
        &self.squares[idx]
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Records `square` as the witness of `segment` unless one is already set.
    pub fn assign(&mut self, segment: usize, square: usize) {
        self.witness[segment].get_or_insert(square);
    }

    pub fn is_assigned(&self, segment: usize) -> bool {
        self.witness[segment].is_some()
    }

    pub fn finish(self) -> Result<Cover, SolveError> {
        let witness = self
            .witness
            .iter()
            .enumerate()
            .map(|(k, w)| w.ok_or(SolveError::Infeasible { segment: k }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cover { squares: self.squares, witness })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub feasible: bool,
    pub size: usize,
    /// Segments whose witnessed square does not cover them.
    pub uncovered: Vec<usize>,
    pub duplicate_squares: usize,
}

pub fn verify_cover(segments: &[Segment], cover: &Cover) -> Result<CoverReport, SolveError> {
    if cover.witness.len() != segments.len() {
        return Err(SolveError::Structure(format!(
            "cover assigns {} segments but the instance has {}",
            cover.witness.len(),
            segments.len()
        )));
    }
    let mut uncovered = Vec::new();
    for (k, (s, &w)) in segments.iter().zip(&cover.witness).enumerate() {
        let sq = cover.squares.get(w).ok_or_else(|| {
            SolveError::Structure(format!("segment {k} assigned to square {w}, but the cover has {}", cover.squares.len()))
        })?;
        if !covers(sq, s) {
            uncovered.push(k);
        }
    }
    let mut seen = HashMap::new();
    let duplicate_squares = cover.squares.iter().filter(|sq| seen.insert(*sq, ()).is_some()).count();
    Ok(CoverReport { feasible: uncovered.is_empty(), size: cover.squares.len(), uncovered, duplicate_squares })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn seg(x1: Scalar, y1: Scalar, x2: Scalar, y2: Scalar) -> Segment {
        Segment::from_coords(x1, y1, x2, y2)
    }

    fn int(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn covers_examples() {
        let t = UnitSquare::new(0, 0);
        assert!(covers(&t, &seg(q(1, 2), q(1, 2), q(3, 2), q(1, 2))));
        assert!(covers(&t, &seg(int(1), int(1), int(2), int(1))));
        assert!(!covers(&t, &seg(q(3, 2), q(1, 2), q(5, 2), q(1, 2))));
    }

    #[test]
    fn endpoint_normalization() {
        let h = seg(int(3), int(0), int(1), int(0));
        assert_eq!(h.left(), &Point::new(1, 0));
        assert_eq!(h.orientation(), Orientation::Horizontal);
        let v = seg(int(0), int(0), int(0), int(1));
        assert_eq!(v.left(), &Point::new(0, 1));
        assert_eq!(v.right(), &Point::new(0, 0));
        assert!(v.is_vertical() && v.is_unit_length());
        let g = seg(int(0), int(0), q(3, 5), q(4, 5));
        assert!(g.is_unit_length());
        assert_eq!(g.orientation(), Orientation::General);
        assert!(Segment::new(Point::new(0, 0), Point::new(0, 0)).is_err());
    }

    #[test]
    fn jointly_coverable_examples() {
        let s1 = seg(int(0), int(0), int(1), int(0));
        assert!(jointly_coverable(&s1, &seg(q(19, 10), int(0), q(29, 10), int(0))));
        assert!(!jointly_coverable(&s1, &seg(q(21, 10), int(0), q(31, 10), int(0))));
        assert!(jointly_coverable(&s1, &s1));
    }

    #[test]
    fn independent_set_examples() {
        assert!(is_independent_set(&[]));
        let a = seg(int(0), int(0), int(1), int(0));
        assert!(is_independent_set(std::slice::from_ref(&a)));
        let b = seg(int(0), int(5), int(1), int(5));
        let c = seg(int(0), int(10), int(1), int(10));
        assert!(is_independent_set(&[a.clone(), b, c]));
        assert!(!is_independent_set(&[a.clone(), a]));
    }

    #[test]
    fn verify_cover_reports() {
        let segs = vec![seg(int(0), int(0), int(1), int(0))];
        let good = Cover { squares: vec![UnitSquare::new(-1, 0)], witness: vec![0] };
        assert!(verify_cover(&segs, &good).unwrap().feasible);
        let bad = Cover { squares: vec![UnitSquare::new(5, 5)], witness: vec![0] };
        let report = verify_cover(&segs, &bad).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.uncovered, vec![0]);
        let out_of_range = Cover { squares: vec![], witness: vec![0] };
        assert!(matches!(verify_cover(&segs, &out_of_range), Err(SolveError::Structure(_))));
    }

    #[test]
    fn from_squares_dedups_and_picks_first_witness() {
        let segs = vec![seg(int(0), int(0), int(1), int(0)), seg(int(5), int(0), int(6), int(0))];
        let cover = Cover::from_squares(
            &segs,
            [UnitSquare::new(0, 0), UnitSquare::new(0, 0), UnitSquare::new(-1, -1), UnitSquare::new(5, 0)],
        )
        .unwrap();
        assert_eq!(cover.len(), 3);
        assert_eq!(cover.witness, vec![0, 2]);
        let canon = cover.canonicalize();
        assert_eq!(canon.squares[0], UnitSquare::new(-1, -1));
        assert!(verify_cover(&segs, &canon).unwrap().feasible);
    }
}
