//! Horizontal segments confined to unit-height strips.

use rayon::prelude::*;

use crate::error::SolveError;
use crate::geometry::{Cover, CoverBuilder, Segment, UnitSquare};
use crate::scalar::Scalar;
use crate::sweep::Flagger;

/// Horizontal segments lying in the strip `y0 ≤ y ≤ y0 + 1`.
#[derive(Debug, Clone)]
pub struct StripInstance {
    pub y0: Scalar,
    pub segments: Vec<Segment>,
}

impl StripInstance {
    /// Checks that every segment is horizontal and inside the strip.
    pub fn new(y0: Scalar, segments: Vec<Segment>) -> Result<Self, SolveError> {
        let top = &y0 + Scalar::one();
        for (k, s) in segments.iter().enumerate() {
            if !s.is_horizontal() {
                return Err(SolveError::invalid(k, "segment is not horizontal"));
            }
            let y = &s.left().y;
            if *y < y0 || *y > top {
                return Err(SolveError::invalid(k, format!("y = {y} lies outside the strip [{y0}, {top}]")));
            }
        }
        Ok(StripInstance { y0, segments })
    }

    /// Anchors the strip at the lowest segment.
    pub fn fit(segments: Vec<Segment>) -> Result<Self, SolveError> {
        let y0 = segments.iter().map(|s| s.left().y.clone()).min().unwrap_or_default();
        StripInstance::new(y0, segments)
    }
}

/// Minimum cover of unit horizontal segments in a strip.
///
/// Segments are taken by right endpoint; whenever one is not covered by the
/// last placed square, a square is placed with its left edge on that right
/// endpoint.
pub fn greedy_strip_cover(inst: &StripInstance) -> Result<Cover, SolveError> {
    let segs = &inst.segments;
    if let Some(k) = segs.iter().position(|s| !s.is_unit_length()) {
        return Err(SolveError::invalid(k, "segment is not unit length"));
    }
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (segs[a].right(), segs[b].right());
        (&ra.x, &ra.y, a).cmp(&(&rb.x, &rb.y, b))
    });

    let mut builder = CoverBuilder::new(segs.len());
    let mut last: Option<(Scalar, Scalar, usize)> = None;
    for k in order {
        let s = &segs[k];
        if let Some((lo, hi, idx)) = &last {
            let inside = |x: &Scalar| x >= lo && x <= hi;
            if inside(&s.left().x) || inside(&s.right().x) {
                builder.assign(k, *idx);
                continue;
            }
        }
        let x = s.right().x.clone();
        let (idx, _) = builder.push(UnitSquare { x: x.clone(), y: inst.y0.clone() });
        builder.assign(k, idx);
        last = Some((x.clone(), x + Scalar::one(), idx));
    }
    builder.finish()
}

/// Strip index of each segment: `floor(y - ymin)`, so strip `i` is the
/// half-open band `[ymin + i, ymin + i + 1)`.
pub fn strip_indices(segments: &[Segment]) -> (Scalar, Vec<usize>) {
    let Some(ymin) = segments.iter().map(|s| s.left().y.clone()).min() else {
        return (Scalar::zero(), Vec::new());
    };
    let idx = segments
        .iter()
        .map(|s| (&s.left().y - &ymin).floor_i64().expect("strip index fits in i64") as usize)
        .collect();
    (ymin, idx)
}

/// Factor-2 cover for unit horizontal segments anywhere in the plane: the
/// optimal strip greedy run independently on each unit strip.
pub fn h1_two_approx(segments: &[Segment]) -> Result<Cover, SolveError> {
    for (k, s) in segments.iter().enumerate() {
        if !s.is_horizontal() {
            return Err(SolveError::invalid(k, "segment is not horizontal"));
        }
        if !s.is_unit_length() {
            return Err(SolveError::invalid(k, "segment is not unit length"));
        }
    }
    let (ymin, idx) = strip_indices(segments);
    let strips = idx.iter().copied().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); strips];
    for (k, &i) in idx.iter().enumerate() {
        members[i].push(k);
    }
    let partial: Vec<(Vec<usize>, Cover)> = members
        .into_par_iter()
        .enumerate()
        .filter(|(_, m)| !m.is_empty())
        .map(|(i, m)| {
            let y0 = &ymin + Scalar::from(i);
            let inst = StripInstance::new(y0, m.iter().map(|&k| segments[k].clone()).collect())?;
            Ok((m, greedy_strip_cover(&inst)?))
        })
        .collect::<Result<_, SolveError>>()?;

    let mut builder = CoverBuilder::new(segments.len());
    for (m, cover) in partial {
        for (local, &k) in m.iter().enumerate() {
            let (idx, _) = builder.push(cover.squares[cover.witness[local]].clone());
            builder.assign(k, idx);
        }
    }
    Ok(builder.finish()?.canonicalize())
}

/// Factor-3 cover for horizontal segments of any length inside one strip.
///
/// Sweeps by left endpoint; each uncovered segment gets a square at its left
/// endpoint and two squares tiling the strip within distance 1 of its right
/// endpoint.
pub fn strip_arb_three_approx(inst: &StripInstance) -> Result<StripArbResult, SolveError> {
    let segs = &inst.segments;
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (segs[a].left(), segs[b].left());
        (&la.x, &la.y, a).cmp(&(&lb.x, &lb.y, b))
    });
    let one = Scalar::one();
    let mut flagger = Flagger::new(segs);
    let mut selected = Vec::new();
    for k in order {
        if flagger.is_flagged(k) {
            continue;
        }
        selected.push(k);
        let s = &segs[k];
        flagger.place(UnitSquare { x: s.left().x.clone(), y: inst.y0.clone() });
        flagger.place(UnitSquare { x: &s.right().x - &one, y: inst.y0.clone() });
        flagger.place(UnitSquare { x: s.right().x.clone(), y: inst.y0.clone() });
        debug_assert!(flagger.is_flagged(k));
    }
    Ok(StripArbResult { cover: flagger.finish()?, independent: selected })
}

#[derive(Debug, Clone)]
pub struct StripArbResult {
    pub cover: Cover,
    /// Segments that triggered placements; pairwise independent.
    pub independent: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{covers, is_independent_set, verify_cover};

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn hseg(x: Scalar, y: Scalar, len: Scalar) -> Segment {
        let x2 = &x + &len;
        Segment::from_coords(x, y.clone(), x2, y)
    }

    fn unit(x: Scalar, y: Scalar) -> Segment {
        hseg(x, y, Scalar::one())
    }

    #[test]
    fn greedy_examples() {
        let empty = StripInstance::new(Scalar::zero(), vec![]).unwrap();
        assert!(greedy_strip_cover(&empty).unwrap().is_empty());

        let one = StripInstance::new(Scalar::zero(), vec![unit(q(0, 1), q(1, 2))]).unwrap();
        assert_eq!(greedy_strip_cover(&one).unwrap().squares, vec![UnitSquare::new(1, 0)]);

        let three = StripInstance::new(
            Scalar::zero(),
            vec![unit(q(0, 1), q(1, 2)), unit(q(3, 2), q(1, 5)), unit(q(3, 1), q(4, 5))],
        )
        .unwrap();
        let cover = greedy_strip_cover(&three).unwrap();
        assert_eq!(cover.squares, vec![UnitSquare::new(1, 0), UnitSquare::new(4, 0)]);
        assert!(verify_cover(&three.segments, &cover).unwrap().feasible);
    }

    #[test]
    fn greedy_rejects_bad_input() {
        let long = StripInstance::new(Scalar::zero(), vec![hseg(q(0, 1), q(0, 1), q(2, 1))]).unwrap();
        assert!(matches!(greedy_strip_cover(&long), Err(SolveError::InvalidInstance { .. })));
        assert!(StripInstance::new(Scalar::zero(), vec![unit(q(0, 1), q(3, 2))]).is_err());
        let vertical = Segment::from_coords(q(0, 1), q(0, 1), q(0, 1), q(1, 1));
        assert!(StripInstance::new(Scalar::zero(), vec![vertical]).is_err());
    }

    #[test]
    fn two_approx_examples() {
        assert!(h1_two_approx(&[]).unwrap().is_empty());
        let segs = vec![unit(q(0, 1), q(1, 2)), unit(q(0, 1), q(3, 2))];
        let cover = h1_two_approx(&segs).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(verify_cover(&segs, &cover).unwrap().feasible);

        let one_strip = vec![unit(q(0, 1), q(1, 2)), unit(q(3, 2), q(1, 5)), unit(q(3, 1), q(4, 5))];
        let a = h1_two_approx(&one_strip).unwrap();
        let b = greedy_strip_cover(&StripInstance::fit(one_strip.clone()).unwrap()).unwrap();
        assert_eq!(a, b.canonicalize());
    }

    #[test]
    fn strip_partition_is_half_open() {
        let segs = vec![unit(q(0, 1), q(0, 1)), unit(q(5, 1), q(1, 1)), unit(q(9, 1), q(2, 1))];
        let (ymin, idx) = strip_indices(&segs);
        assert_eq!(ymin, Scalar::zero());
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn no_square_spans_distant_strips() {
        let segs: Vec<Segment> = (0..6).map(|i| unit(q(i, 3), q(i * 7, 10))).collect();
        let cover = h1_two_approx(&segs).unwrap();
        let (_, idx) = strip_indices(&segs);
        for t in &cover.squares {
            let hit: Vec<usize> = (0..segs.len()).filter(|&k| covers(t, &segs[k])).map(|k| idx[k]).collect();
            if let (Some(lo), Some(hi)) = (hit.iter().min(), hit.iter().max()) {
                assert!(hi - lo < 2);
            }
        }
    }

    #[test]
    fn three_approx_examples() {
        let s = hseg(q(0, 1), q(1, 2), q(5, 2));
        let single = StripInstance::new(Scalar::zero(), vec![s.clone()]).unwrap();
        let res = strip_arb_three_approx(&single).unwrap();
        assert_eq!(res.cover.len(), 3);
        assert!(verify_cover(&single.segments, &res.cover).unwrap().feasible);

        let twice = StripInstance::new(Scalar::zero(), vec![s.clone(), s]).unwrap();
        let res = strip_arb_three_approx(&twice).unwrap();
        assert_eq!(res.cover.len(), 3);
        assert_eq!(res.independent, vec![0]);
        let chosen: Vec<Segment> = res.independent.iter().map(|&k| twice.segments[k].clone()).collect();
        assert!(is_independent_set(&chosen));
    }
}
