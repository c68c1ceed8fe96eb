//! Point cover by unit-width rectangles standing on a common baseline.

use crate::error::SolveError;
use crate::geometry::Point;
use crate::lp::LinearProgram;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RectSide {
    Above,
    Below,
}

/// Width-1 rectangle resting on the line `y = baseline`, extending `height`
/// away from it on `side`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineRect {
    pub baseline: Scalar,
    pub left: Scalar,
    pub height: Scalar,
    pub side: RectSide,
}

impl BaselineRect {
    pub fn right(&self) -> Scalar {
        &self.left + Scalar::one()
    }

    /// Whether the rectangle contains a point given in baseline coordinates
    /// `(x, distance from the baseline)`.
    pub fn covers(&self, p: &Point) -> bool {
        p.x >= self.left && p.x <= self.right() && !p.y.is_negative() && p.y <= self.height
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RpcOutput {
    /// Chosen rectangles, in the order they were picked.
    pub selected: Vec<usize>,
    /// Picked points; no rectangle covers two of them.
    pub lower_bound: Vec<usize>,
}

/// Greedy cover of points by baseline rectangles, at most twice the number of
/// picked points.
///
/// Points are in baseline coordinates. The highest remaining point is picked;
/// the covering rectangle reaching furthest left and the one reaching furthest
/// right are both taken; every rectangle covering the point is discarded along
/// with the points those rectangles cover; the points left of the first and
/// right of the second are then solved independently.
pub fn rpc_cover(points: &[Point], rects: &[BaselineRect]) -> Result<RpcOutput, SolveError> {
    let mut out = RpcOutput::default();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![((0..points.len()).collect(), (0..rects.len()).collect())];
    while let Some((pts, rs)) = stack.pop() {
        let Some(&p) = pts.iter().max_by(|&&a, &&b| {
            let (pa, pb) = (&points[a], &points[b]);
            pa.y.cmp(&pb.y).then(pb.x.cmp(&pa.x)).then(b.cmp(&a))
        }) else {
            continue;
        };
        let at = &points[p];
        let hitting: Vec<usize> = rs.iter().copied().filter(|&r| rects[r].covers(at)).collect();
        let Some(&leftmost) = hitting.iter().min_by(|&&a, &&b| rects[a].left.cmp(&rects[b].left).then(a.cmp(&b))) else {
            return Err(SolveError::UncoveredPoint { index: p, at: Box::new(at.clone()) });
        };
        let rightmost = *hitting
            .iter()
            .max_by(|&&a, &&b| rects[a].left.cmp(&rects[b].left).then(b.cmp(&a)))
            .expect("nonempty");
        out.lower_bound.push(p);
        out.selected.push(leftmost);
        if rightmost != leftmost {
            out.selected.push(rightmost);
        }

        let lo = rects[leftmost].left.clone();
        let hi = rects[rightmost].right();
        let survivors: Vec<usize> =
            pts.iter().copied().filter(|&q| !hitting.iter().any(|&r| rects[r].covers(&points[q]))).collect();
        debug_assert!(survivors.iter().all(|&q| points[q].x < lo || points[q].x > hi));
        let (left_pts, right_pts): (Vec<usize>, Vec<usize>) = survivors.into_iter().partition(|&q| points[q].x < lo);
        let mut left_rects = Vec::new();
        let mut right_rects = Vec::new();
        for r in rs.into_iter().filter(|r| !hitting.contains(r)) {
            if left_pts.iter().any(|&q| rects[r].covers(&points[q])) {
                left_rects.push(r);
            } else if right_pts.iter().any(|&q| rects[r].covers(&points[q])) {
                right_rects.push(r);
            }
        }
        stack.push((right_pts, right_rects));
        stack.push((left_pts, left_rects));
    }
    Ok(out)
}

/// Relaxation of the point cover: one variable per rectangle, one row per
/// point.
pub fn rpc_relaxation(points: &[Point], rects: &[BaselineRect]) -> LinearProgram {
    let mut lp = LinearProgram::covering(rects.len());
    lp.var_labels = (0..rects.len()).map(|r| format!("r{r}")).collect();
    for (i, p) in points.iter().enumerate() {
        lp.add_cover_row((0..rects.len()).filter(|&r| rects[r].covers(p)), format!("p{i}"));
    }
    lp
}
