//! Sweep-line approximations that grow a maximal independent set of
//! segments and place a constant number of squares around each member.

use crate::error::SolveError;
use crate::geometry::{Cover, CoverBuilder, Segment, UnitSquare};
use crate::scalar::Scalar;
use crate::strip::h1_two_approx;

/// Tracks which segments are covered by the squares placed so far.
///
/// Endpoints of uncovered segments live in a range tree; placing a square
/// reports and removes the endpoints it contains.
pub(crate) struct Flagger<'a> {
    segments: &'a [Segment],
    tree: crate::range_tree::RangeTree,
    flagged: Vec<bool>,
    builder: CoverBuilder,
}

impl<'a> Flagger<'a> {
    pub(crate) fn new(segments: &'a [Segment]) -> Self {
        let points: Vec<(Scalar, Scalar)> = segments
            .iter()
            .flat_map(|s| s.endpoints().map(|p| (p.x.clone(), p.y.clone())))
            .collect();
        Flagger {
            segments,
            tree: crate::range_tree::RangeTree::new(&points),
            flagged: vec![false; segments.len()],
            builder: CoverBuilder::new(segments.len()),
        }
    }

    pub(crate) fn is_flagged(&self, k: usize) -> bool {
        self.flagged[k]
    }

    /// Adds `sq` to the output and flags every live segment it covers.
    pub(crate) fn place(&mut self, sq: UnitSquare) {
        let (idx, fresh) = self.builder.push(sq);
        if !fresh {
            return;
        }
        let sq = self.builder.square(idx);
        let hits = self.tree.query(&sq.x, &sq.max_x(), &sq.y, &sq.max_y());
        for id in hits {
            let k = id / 2;
            if !self.flagged[k] {
                self.flagged[k] = true;
                self.builder.assign(k, idx);
                self.tree.delete(2 * k);
                self.tree.delete(2 * k + 1);
            }
        }
    }

    pub(crate) fn segment(&self, k: usize) -> &'a Segment {
        &self.segments[k]
    }

    pub(crate) fn finish(self) -> Result<Cover, SolveError> {
        self.builder.finish()
    }
}

/// A cover together with the independent set that certifies its ratio.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub cover: Cover,
    /// Indices of the segments that triggered placements, in sweep order.
    pub independent: Vec<usize>,
}

fn check_hv1(segments: &[Segment]) -> Result<(), SolveError> {
    for (k, s) in segments.iter().enumerate() {
        if !s.is_unit_length() {
            return Err(SolveError::invalid(k, "segment is not unit length"));
        }
        if !(s.is_horizontal() || s.is_vertical()) {
            return Err(SolveError::invalid(k, "segment is neither horizontal nor vertical"));
        }
    }
    Ok(())
}

/// Factor 4: the strip-partition 2-approximation run separately on the
/// horizontal segments and, through a transpose, on the vertical ones.
pub fn hv1_four_approx(segments: &[Segment]) -> Result<Cover, SolveError> {
    check_hv1(segments)?;
    let (horizontal, vertical): (Vec<usize>, Vec<usize>) = (0..segments.len()).partition(|&k| segments[k].is_horizontal());
    let h_segs: Vec<Segment> = horizontal.iter().map(|&k| segments[k].clone()).collect();
    let v_segs: Vec<Segment> = vertical.iter().map(|&k| segments[k].transposed()).collect();
    let h_cover = h1_two_approx(&h_segs)?;
    let v_cover = h1_two_approx(&v_segs)?;

    let mut builder = CoverBuilder::new(segments.len());
    for (local, &k) in horizontal.iter().enumerate() {
        let (idx, _) = builder.push(h_cover.squares[h_cover.witness[local]].clone());
        builder.assign(k, idx);
    }
    for (local, &k) in vertical.iter().enumerate() {
        let (idx, _) = builder.push(v_cover.squares[v_cover.witness[local]].transposed());
        builder.assign(k, idx);
    }
    // squares that witness nothing still belong to the output
    for sq in h_cover.squares {
        builder.push(sq);
    }
    for sq in v_cover.squares {
        builder.push(sq.transposed());
    }
    Ok(builder.finish()?.canonicalize())
}

/// Squares placed for a selected segment in the factor-3 sweep.
///
/// Horizontal `s`: three squares tiling `[l.x-1, r.x+1] × [l.y-1, l.y]`.
/// Vertical `s`: two squares tiling `[l.x-1, l.x+1] × [r.y-1, r.y]`.
pub fn hv1_placements(s: &Segment) -> Vec<UnitSquare> {
    let one = Scalar::one();
    let l = s.left();
    if s.is_horizontal() {
        let y = &l.y - &one;
        vec![
            UnitSquare { x: &l.x - &one, y: y.clone() },
            UnitSquare { x: l.x.clone(), y: y.clone() },
            UnitSquare { x: &l.x + &one, y },
        ]
    } else {
        let y = &s.right().y - &one;
        vec![UnitSquare { x: &l.x - &one, y: y.clone() }, UnitSquare { x: l.x.clone(), y }]
    }
}

/// Sweep order of the factor-3 algorithm: `r(s).y` descending, then
/// `r(s).x` ascending, then input index.
pub fn hv1_order(segments: &[Segment]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (segments[a].right(), segments[b].right());
        rb.y.cmp(&ra.y).then_with(|| ra.x.cmp(&rb.x)).then(a.cmp(&b))
    });
    order
}

/// Factor 3 for unit horizontal and vertical segments, sweeping top to
/// bottom by lower/right endpoint.
pub fn hv1_three_approx(segments: &[Segment]) -> Result<SweepResult, SolveError> {
    check_hv1(segments)?;
    let mut flagger = Flagger::new(segments);
    let mut independent = Vec::new();
    for k in hv1_order(segments) {
        if flagger.is_flagged(k) {
            continue;
        }
        independent.push(k);
        for sq in hv1_placements(flagger.segment(k)) {
            flagger.place(sq);
        }
        debug_assert!(flagger.is_flagged(k));
    }
    Ok(SweepResult { cover: flagger.finish()?, independent })
}

/// The four unit squares tiling the 2×2 square centred at `p`.
pub fn around(p: &crate::geometry::Point) -> [UnitSquare; 4] {
    let one = Scalar::one();
    let (x0, y0) = (&p.x - &one, &p.y - &one);
    [
        UnitSquare { x: x0.clone(), y: y0.clone() },
        UnitSquare { x: p.x.clone(), y: y0 },
        UnitSquare { x: x0, y: p.y.clone() },
        UnitSquare { x: p.x.clone(), y: p.y.clone() },
    ]
}

/// The two unit squares tiling the right half of the 2×2 square centred at `p`.
pub fn right_half(p: &crate::geometry::Point) -> [UnitSquare; 2] {
    [UnitSquare { x: p.x.clone(), y: &p.y - Scalar::one() }, UnitSquare { x: p.x.clone(), y: p.y.clone() }]
}

/// Factor 8 for arbitrary segments: any uncovered segment (lowest index)
/// gets the 2×2 neighbourhoods of both endpoints.
pub fn arb_eight_approx(segments: &[Segment]) -> Result<SweepResult, SolveError> {
    let mut flagger = Flagger::new(segments);
    let mut independent = Vec::new();
    for k in 0..segments.len() {
        if flagger.is_flagged(k) {
            continue;
        }
        independent.push(k);
        let s = flagger.segment(k);
        for sq in around(s.left()).into_iter().chain(around(s.right())) {
            flagger.place(sq);
        }
    }
    Ok(SweepResult { cover: flagger.finish()?, independent })
}

/// Factor 6 for arbitrary segments: sweeping left to right, the left
/// neighbourhood only needs its right half.
pub fn arb_six_approx(segments: &[Segment]) -> Result<SweepResult, SolveError> {
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (segments[a].left(), segments[b].left());
        la.x.cmp(&lb.x).then_with(|| lb.y.cmp(&la.y)).then(a.cmp(&b))
    });
    let mut flagger = Flagger::new(segments);
    let mut independent = Vec::new();
    for k in order {
        if flagger.is_flagged(k) {
            continue;
        }
        independent.push(k);
        let s = flagger.segment(k);
        for sq in right_half(s.left()).into_iter().chain(around(s.right())) {
            flagger.place(sq);
        }
    }
    Ok(SweepResult { cover: flagger.finish()?, independent })
}
