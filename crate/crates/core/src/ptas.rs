//! Shifting-strategy approximation scheme for unit horizontal/vertical
//! segments, and the canonical candidate squares it (and the exact oracle)
//! search over.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::SolveError;
use crate::exact::cover_from_candidates;
use crate::geometry::{Cover, CoverBuilder, Point, Segment, UnitSquare};
use crate::scalar::Scalar;

pub const DEFAULT_CELL_BUDGET: u64 = 1_000_000;

/// Every unit square whose left edge passes through an endpoint's x and
/// whose top edge passes through an endpoint's y, ordered by min corner.
///
/// Any unit square can slide right until its left edge meets the leftmost
/// endpoint it contains, then down until its top edge meets the highest one,
/// without losing an endpoint; so some optimal cover uses only these squares.
pub fn enumerate_candidates(endpoints: &[Point]) -> Vec<UnitSquare> {
    let mut xs: Vec<&Scalar> = endpoints.iter().map(|p| &p.x).collect();
    let mut ys: Vec<&Scalar> = endpoints.iter().map(|p| &p.y).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    let one = Scalar::one();
    xs.iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .map(|(x, y)| UnitSquare { x: x.clone(), y: y - &one })
        .collect()
}

/// The canonical candidate that replaces `t`: same endpoints covered, left
/// edge on the leftmost and top edge on the highest contained endpoint.
pub fn canonical_replacement(t: &UnitSquare, endpoints: &[Point]) -> Option<UnitSquare> {
    let inside: Vec<&Point> = endpoints.iter().filter(|p| t.contains(p)).collect();
    let x = inside.iter().map(|p| &p.x).min()?;
    let y = inside.iter().map(|p| &p.y).max()?;
    Some(UnitSquare { x: x.clone(), y: y - Scalar::one() })
}

/// One shifted partition of the integer bounding box into cells of at most
/// `k × k` unit cells.
#[derive(Debug, Clone)]
pub struct ShiftGrid {
    pub origin_x: i64,
    pub origin_y: i64,
    /// Side of the bounding box in unit cells.
    pub side: i64,
    pub k: usize,
    /// Vertical shift: width of the first column group.
    pub i: usize,
    /// Horizontal shift: height of the first row group.
    pub j: usize,
}

impl ShiftGrid {
    /// The integer-aligned square box enclosing every endpoint.
    pub fn bounding(segments: &[Segment], k: usize, i: usize, j: usize) -> ShiftGrid {
        assert!(k >= 1 && i < k && j < k, "shift out of range");
        let pts = || segments.iter().flat_map(|s| s.endpoints());
        let floor = |v: &Scalar| v.floor_i64().expect("coordinate fits in i64");
        let min_x = pts().map(|p| floor(&p.x)).min().unwrap_or(0);
        let min_y = pts().map(|p| floor(&p.y)).min().unwrap_or(0);
        let max_x = pts().map(|p| floor(&p.x)).max().unwrap_or(0);
        let max_y = pts().map(|p| floor(&p.y)).max().unwrap_or(0);
        let side = (max_x - min_x).max(max_y - min_y) + 1;
        ShiftGrid { origin_x: min_x, origin_y: min_y, side, k, i, j }
    }

    fn group(&self, unit: i64, shift: usize) -> usize {
        let (unit, k, shift) = (unit as usize, self.k, shift);
        match shift {
            0 => unit / k,
            _ if unit < shift => 0,
            _ => 1 + (unit - shift) / k,
        }
    }

    fn group_span(&self, group: usize, shift: usize) -> (i64, i64) {
        let (k, s) = (self.k as i64, shift as i64);
        let g = group as i64;
        let (lo, hi) = match shift {
            0 => (g * k, (g + 1) * k),
            _ if group == 0 => (0, s),
            _ => (s + (g - 1) * k, s + g * k),
        };
        (lo.min(self.side), hi.min(self.side))
    }

    /// Cell (column group, row group) holding `p`; cells are half-open.
    pub fn cell_of(&self, p: &Point) -> (usize, usize) {
        let ux = p.x.floor_i64().expect("coordinate fits in i64") - self.origin_x;
        let uy = p.y.floor_i64().expect("coordinate fits in i64") - self.origin_y;
        (self.group(ux, self.i), self.group(uy, self.j))
    }

    /// Number of unit cells in a cell of this grid.
    pub fn capacity(&self, cell: (usize, usize)) -> usize {
        let (x0, x1) = self.group_span(cell.0, self.i);
        let (y0, y1) = self.group_span(cell.1, self.j);
        ((x1 - x0).max(0) * (y1 - y0).max(0)) as usize
    }
}

/// Minimum cover of one cell's segments over the candidates generated from
/// their endpoints, searching only covers of at most `cap` squares.
pub fn solve_cell_exact(segments: &[Segment], cap: usize, budget: u64) -> Result<Cover, SolveError> {
    let endpoints: Vec<Point> = segments.iter().flat_map(|s| s.endpoints().map(Clone::clone)).collect();
    let candidates = enumerate_candidates(&endpoints);
    Ok(cover_from_candidates(segments, &candidates, budget, Some(cap))?.0)
}

#[derive(Debug, Clone)]
pub struct PtasResult {
    pub cover: Cover,
    /// Winning shift `(i, j)`.
    pub shift: (usize, usize),
    /// Solution size for every shift, row-major in `(i, j)`.
    pub shift_sizes: Vec<usize>,
}

fn solve_shift(segments: &[Segment], grid: &ShiftGrid, budget: u64) -> Result<Cover, SolveError> {
    let mut cells: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, s) in segments.iter().enumerate() {
        cells.entry(grid.cell_of(s.left())).or_default().push(k);
    }
    let mut builder = CoverBuilder::new(segments.len());
    for (cell, members) in cells {
        let local: Vec<Segment> = members.iter().map(|&k| segments[k].clone()).collect();
        let cover = solve_cell_exact(&local, grid.capacity(cell), budget)?;
        for (pos, &k) in members.iter().enumerate() {
            let (idx, _) = builder.push(cover.squares[cover.witness[pos]].clone());
            builder.assign(k, idx);
        }
    }
    Ok(builder.finish()?.canonicalize())
}

/// Best of the `k²` shifted solutions; at most `(1 + 1/k)²` times optimal.
///
/// Each segment belongs to the cell holding its left (top, if vertical)
/// endpoint; cells are solved exactly and their covers unioned.
pub fn ptas_cover(segments: &[Segment], k: usize, budget: u64) -> Result<PtasResult, SolveError> {
    if k == 0 {
        return Err(SolveError::Structure("k must be at least 1".into()));
    }
    for (idx, s) in segments.iter().enumerate() {
        if !s.is_unit_length() || !(s.is_horizontal() || s.is_vertical()) {
            return Err(SolveError::invalid(idx, "expected a unit horizontal or vertical segment"));
        }
    }
    let shifts: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let covers: Vec<Cover> = shifts
        .par_iter()
        .map(|&(i, j)| solve_shift(segments, &ShiftGrid::bounding(segments, k, i, j), budget))
        .collect::<Result<_, _>>()?;
    let shift_sizes: Vec<usize> = covers.iter().map(Cover::len).collect();
    let best = (0..shifts.len()).min_by_key(|&s| (shift_sizes[s], s)).expect("k ≥ 1 gives one shift");
    let cover = covers.into_iter().nth(best).expect("index in range");
    Ok(PtasResult { cover, shift: shifts[best], shift_sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::verify_cover;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn candidate_examples() {
        assert_eq!(enumerate_candidates(&[Point::new(0, 0)]), vec![UnitSquare::new(0, -1)]);
        let two = enumerate_candidates(&[Point::new(0, 0), Point { x: q(1, 2), y: q(1, 2) }]);
        assert_eq!(
            two,
            vec![
                UnitSquare::new(0, -1),
                UnitSquare { x: q(0, 1), y: q(-1, 2) },
                UnitSquare { x: q(1, 2), y: q(-1, 1) },
                UnitSquare { x: q(1, 2), y: q(-1, 2) },
            ]
        );
        assert!(enumerate_candidates(&[]).is_empty());
    }

    #[test]
    fn replacement_keeps_endpoints() {
        let pts = vec![Point { x: q(1, 3), y: q(1, 2) }, Point { x: q(2, 3), y: q(1, 5) }, Point::new(5, 5)];
        let t = UnitSquare { x: q(0, 1), y: q(0, 1) };
        let c = canonical_replacement(&t, &pts).unwrap();
        assert_eq!(c, UnitSquare { x: q(1, 3), y: q(-1, 2) });
        for p in &pts {
            assert_eq!(t.contains(p), c.contains(p));
        }
        assert!(canonical_replacement(&UnitSquare::new(10, 10), &pts).is_none());
    }

    #[test]
    fn grid_cells_and_capacity() {
        let segs = vec![Segment::from_coords(q(0, 1), q(0, 1), q(1, 1), q(0, 1)), Segment::from_coords(q(6, 1), q(6, 1), q(7, 1), q(6, 1))];
        let grid = ShiftGrid::bounding(&segs, 3, 1, 0);
        assert_eq!(grid.side, 8);
        assert_eq!(grid.cell_of(&Point::new(0, 0)), (0, 0));
        assert_eq!(grid.cell_of(&Point { x: q(9, 10), y: q(0, 1) }), (0, 0));
        assert_eq!(grid.cell_of(&Point::new(1, 0)), (1, 0));
        assert_eq!(grid.cell_of(&Point::new(4, 3)), (2, 1));
        assert_eq!(grid.capacity((0, 0)), 3);
        assert_eq!(grid.capacity((1, 0)), 9);
        assert_eq!(grid.capacity((3, 2)), 2);
    }

    #[test]
    fn ptas_basics() {
        let one = vec![Segment::from_coords(q(1, 3), q(0, 1), q(4, 3), q(0, 1))];
        for k in 1..4 {
            assert_eq!(ptas_cover(&one, k, DEFAULT_CELL_BUDGET).unwrap().cover.len(), 1);
        }
        let segs: Vec<Segment> = (0..6)
            .map(|i| {
                let x = q(i * 7, 10);
                let y = q(i * 3, 5);
                if i % 2 == 0 {
                    Segment::from_coords(x.clone(), y.clone(), x + Scalar::one(), y)
                } else {
                    Segment::from_coords(x.clone(), y.clone(), x, y + Scalar::one())
                }
            })
            .collect();
        for k in 1..4 {
            let res = ptas_cover(&segs, k, DEFAULT_CELL_BUDGET).unwrap();
            assert!(verify_cover(&segs, &res.cover).unwrap().feasible);
            assert_eq!(res.shift_sizes.len(), k * k);
            assert_eq!(res.cover.len(), *res.shift_sizes.iter().min().unwrap());
        }
        assert!(ptas_cover(&segs, 0, 10).is_err());
    }

    #[test]
    fn cell_optimum_within_capacity() {
        let segs: Vec<Segment> = (0..5)
            .map(|i| Segment::from_coords(q(i, 2), q(i, 3), q(i, 2) + Scalar::one(), q(i, 3)))
            .collect();
        let cover = solve_cell_exact(&segs, 4, DEFAULT_CELL_BUDGET).unwrap();
        assert!(cover.len() <= 4);
        assert!(solve_cell_exact(&[], 1, 10).unwrap().is_empty());
    }
}
