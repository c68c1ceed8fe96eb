//! Static 2-D range tree over a point set with report-and-delete queries.
//!
//! Points are sorted by x; level `L` of the tree stores, for every aligned
//! block of `2^L` consecutive x-positions, the block's points sorted by
//! (y-rank, id). Each level keeps a union-find "next live entry" array, so
//! deleted points are skipped in amortized near-constant time. A closed
//! rectangle query touches `O(log n)` blocks and costs `O(log² n + k)`.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct RangeTree {
    /// Distinct x and y coordinates, ascending.
    xs: Vec<Scalar>,
    ys: Vec<Scalar>,
    /// x-rank of each position in x order.
    pos_x: Vec<u32>,
    /// Position in x order of each point id.
    pos_of: Vec<u32>,
    /// Key `(y_rank << 32) | id` per level and position.
    levels: Vec<Vec<u64>>,
    /// Union-find successor per level; `next[i] == i` means entry `i` is live.
    next: Vec<Vec<u32>>,
    alive: Vec<bool>,
    live: usize,
}

fn rank(sorted: &[Scalar], v: &Scalar) -> u32 {
    sorted.binary_search(v).expect("coordinate present") as u32
}

impl RangeTree {
    /// Builds the tree; point ids are the indices into `points`.
    pub fn new(points: &[(Scalar, Scalar)]) -> Self {
        let n = points.len();
        assert!(n < u32::MAX as usize, "too many points");
        let mut xs: Vec<Scalar> = points.iter().map(|p| p.0.clone()).collect();
        let mut ys: Vec<Scalar> = points.iter().map(|p| p.1.clone()).collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        let xr: Vec<u32> = points.iter().map(|p| rank(&xs, &p.0)).collect();
        let yr: Vec<u64> = points.iter().map(|p| rank(&ys, &p.1) as u64).collect();

        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_unstable_by_key(|&id| (xr[id as usize], yr[id as usize], id));
        let mut pos_of = vec![0u32; n];
        for (pos, &id) in order.iter().enumerate() {
            pos_of[id as usize] = pos as u32;
        }
        let pos_x = order.iter().map(|&id| xr[id as usize]).collect();

        let mut levels = vec![order.iter().map(|&id| (yr[id as usize] << 32) | id as u64).collect::<Vec<u64>>()];
        let mut width = 1usize;
        while width < n {
            let prev = levels.last().unwrap();
            let mut merged = Vec::with_capacity(n);
            for start in (0..n).step_by(width * 2) {
                let mid = (start + width).min(n);
                let end = (start + 2 * width).min(n);
                let (mut a, mut b) = (start, mid);
                while a < mid && b < end {
                    if prev[a] <= prev[b] {
                        merged.push(prev[a]);
                        a += 1;
                    } else {
                        merged.push(prev[b]);
                        b += 1;
                    }
                }
                merged.extend_from_slice(&prev[a..mid]);
                merged.extend_from_slice(&prev[b..end]);
            }
            levels.push(merged);
            width *= 2;
        }
        let next = levels.iter().map(|_| (0..=n as u32).collect()).collect();
        RangeTree { xs, ys, pos_x, pos_of, levels, next, alive: vec![true; n], live: n }
    }

    pub fn live(&self) -> usize {
        self.live
    }

    pub fn is_alive(&self, id: usize) -> bool {
        self.alive[id]
    }

    fn find(next: &mut [u32], mut i: usize) -> usize {
        let mut root = i;
        while next[root] as usize != root {
            root = next[root] as usize;
        }
        while next[i] as usize != root {
            let up = next[i] as usize;
            next[i] = root as u32;
            i = up;
        }
        root
    }

    /// Ids of live points inside the closed rectangle `[x0, x1] × [y0, y1]`.
    pub fn query(&mut self, x0: &Scalar, x1: &Scalar, y0: &Scalar, y1: &Scalar) -> Vec<usize> {
        let mut out = Vec::new();
        if self.live == 0 || x0 > x1 || y0 > y1 {
            return out;
        }
        let xlo = self.xs.partition_point(|v| v < x0) as u32;
        let xhi = self.xs.partition_point(|v| v <= x1) as u32;
        let ylo = self.ys.partition_point(|v| v < y0) as u64;
        let yhi = self.ys.partition_point(|v| v <= y1) as u64;
        if xlo >= xhi || ylo >= yhi {
            return out;
        }
        let mut l = self.pos_x.partition_point(|&r| r < xlo);
        let mut r = self.pos_x.partition_point(|&r| r < xhi);
        let lo_key = ylo << 32;
        let hi_key = yhi << 32;
        let mut level = 0;
        while l < r {
            if l & 1 == 1 {
                self.scan(level, l, lo_key, hi_key, &mut out);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                self.scan(level, r, lo_key, hi_key, &mut out);
            }
            l >>= 1;
            r >>= 1;
            level += 1;
        }
        out
    }

    fn scan(&mut self, level: usize, block: usize, lo_key: u64, hi_key: u64, out: &mut Vec<usize>) {
        let n = self.alive.len();
        let start = block << level;
        let end = ((block + 1) << level).min(n);
        let keys = &self.levels[level][start..end];
        let mut i = start + keys.partition_point(|&k| k < lo_key);
        let next = &mut self.next[level];
        loop {
            i = Self::find(next, i);
            if i >= end {
                break;
            }
            let key = self.levels[level][i];
            if key >= hi_key {
                break;
            }
            out.push((key & 0xffff_ffff) as usize);
            i += 1;
        }
    }

    /// Removes a point from every level. Deleting twice is a no-op.
    pub fn delete(&mut self, id: usize) {
        if !std::mem::replace(&mut self.alive[id], false) {
            return;
        }
        self.live -= 1;
        let n = self.alive.len();
        let pos = self.pos_of[id] as usize;
        let key = self.levels[0][pos];
        for level in 0..self.levels.len() {
            let start = (pos >> level) << level;
            let end = (start + (1 << level)).min(n);
            let at = self.levels[level][start..end].binary_search(&key).expect("point stored at every level");
            self.next[level][start + at] = (start + at + 1) as u32;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(raw: &[(i64, i64)]) -> Vec<(Scalar, Scalar)> {
        raw.iter().map(|&(x, y)| (Scalar::from_int(x), Scalar::from_int(y))).collect()
    }

    #[test]
    fn closed_bounds_and_deletion() {
        let mut tree = RangeTree::new(&pts(&[(0, 0), (1, 1), (2, 2), (1, 0)]));
        let s = Scalar::from_int;
        let mut hit = tree.query(&s(0), &s(1), &s(0), &s(1));
        hit.sort();
        assert_eq!(hit, vec![0, 1, 3]);
        tree.delete(1);
        tree.delete(1);
        assert_eq!(tree.live(), 3);
        let mut hit = tree.query(&s(0), &s(2), &s(0), &s(2));
        hit.sort();
        assert_eq!(hit, vec![0, 2, 3]);
        assert!(tree.query(&s(3), &s(4), &s(0), &s(9)).is_empty());
    }

    #[test]
    fn empty_tree() {
        let mut tree = RangeTree::new(&[]);
        let z = Scalar::zero();
        assert!(tree.query(&z, &z, &z, &z).is_empty());
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            raw in prop::collection::vec((0i64..12, 0i64..12), 0..60),
            ops in prop::collection::vec((0i64..12, 0i64..12, 0i64..5, 0i64..5, any::<bool>()), 1..30),
        ) {
            let points = pts(&raw);
            let mut tree = RangeTree::new(&points);
            let mut alive = vec![true; raw.len()];
            for (x, y, w, h, delete_hits) in ops {
                let (x0, x1, y0, y1) = (x, x + w, y, y + h);
                let mut got = tree.query(&Scalar::from_int(x0), &Scalar::from_int(x1), &Scalar::from_int(y0), &Scalar::from_int(y1));
                got.sort();
                let want: Vec<usize> = raw.iter().enumerate()
                    .filter(|(i, &(px, py))| alive[*i] && px >= x0 && px <= x1 && py >= y0 && py <= y1)
                    .map(|(i, _)| i).collect();
                prop_assert_eq!(&got, &want);
                if delete_hits {
                    for id in got {
                        tree.delete(id);
                        alive[id] = false;
                    }
                }
            }
        }
    }
}
