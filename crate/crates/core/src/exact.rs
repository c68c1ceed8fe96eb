//! Exact minimum set cover by branch and bound, and the exact covering
//! solvers built on it.

use fixedbitset::FixedBitSet;

use crate::error::SolveError;
use crate::geometry::{covers, Cover, Segment, UnitSquare};
use crate::ptas::enumerate_candidates;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct SetCoverInstance {
    pub universe: usize,
    /// Elements of each set; labels are the set indices.
    pub sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Self {
        SetCoverInstance { universe, sets }
    }

    /// First element no set contains.
    pub fn uncoverable(&self) -> Option<usize> {
        let mut seen = vec![false; self.universe];
        for s in &self.sets {
            for &e in s {
                seen[e] = true;
            }
        }
        seen.iter().position(|&c| !c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetCoverError {
    Infeasible { element: usize },
    TooLarge { budget: u64 },
    /// No cover of at most `cap` sets exists.
    CapExceeded { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverSolution {
    /// Chosen set indices, ascending.
    pub chosen: Vec<usize>,
    pub nodes: u64,
}

struct Search {
    sets: Vec<FixedBitSet>,
    /// Sets containing each element, in branching order.
    containing: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
    best: Option<Vec<usize>>,
    best_len: usize,
}

impl Search {
    fn run(&mut self, covered: &FixedBitSet, excluded: &mut FixedBitSet, chosen: &mut Vec<usize>) -> Result<(), u64> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(self.budget);
        }
        if covered.is_full() {
            if chosen.len() < self.best_len {
                self.best_len = chosen.len();
                let mut sol = chosen.clone();
                sol.sort_unstable();
                self.best = Some(sol);
            }
            return Ok(());
        }
        if chosen.len() + 1 >= self.best_len {
            return Ok(());
        }

        // uncovered elements with their count of still-usable sets
        let mut open: Vec<(usize, usize)> = covered
            .zeroes()
            .map(|e| (self.containing[e].iter().filter(|&&s| !excluded.contains(s)).count(), e))
            .collect();
        open.sort_unstable();
        if open[0].0 == 0 {
            return Ok(());
        }

        // elements pairwise sharing no usable set each need their own set
        let mut blocked = FixedBitSet::with_capacity(self.sets.len());
        let mut bound = 0;
        for &(_, e) in &open {
            let usable = self.containing[e].iter().filter(|&&s| !excluded.contains(s));
            if usable.clone().all(|&s| !blocked.contains(s)) {
                bound += 1;
                usable.for_each(|&s| blocked.insert(s));
            }
        }
        if chosen.len() + bound >= self.best_len {
            return Ok(());
        }

        let branch_on = open[0].1;
        let mut options: Vec<usize> =
            self.containing[branch_on].iter().copied().filter(|&s| !excluded.contains(s)).collect();
        options.sort_by_key(|&s| {
            let gain = self.sets[s].difference(covered).count();
            (std::cmp::Reverse(gain), s)
        });
        let mut newly_excluded = Vec::new();
        for s in options {
            let mut next = covered.clone();
            next.union_with(&self.sets[s]);
            chosen.push(s);
            let res = self.run(&next, excluded, chosen);
            chosen.pop();
            res?;
            // later siblings need not reconsider `s`
            excluded.insert(s);
            newly_excluded.push(s);
        }
        for s in newly_excluded {
            excluded.set(s, false);
        }
        Ok(())
    }
}

fn greedy(universe: usize, sets: &[FixedBitSet]) -> Vec<usize> {
    let mut covered = FixedBitSet::with_capacity(universe);
    let mut chosen = Vec::new();
    while !covered.is_full() {
        let best = (0..sets.len())
            .max_by_key(|&s| (sets[s].difference(&covered).count(), std::cmp::Reverse(s)))
            .expect("feasible instance has sets");
        covered.union_with(&sets[best]);
        chosen.push(best);
    }
    chosen
}

/// Minimum-cardinality subfamily covering the universe.
///
/// `cap` restricts the search to solutions of at most that many sets.
pub fn exact_setcover(inst: &SetCoverInstance, budget: u64, cap: Option<usize>) -> Result<SetCoverSolution, SetCoverError> {
    if let Some(e) = inst.uncoverable() {
        return Err(SetCoverError::Infeasible { element: e });
    }
    if inst.universe == 0 {
        return Ok(SetCoverSolution { chosen: Vec::new(), nodes: 0 });
    }
    let bits: Vec<FixedBitSet> = inst
        .sets
        .iter()
        .map(|s| {
            let mut b = FixedBitSet::with_capacity(inst.universe);
            s.iter().for_each(|&e| b.insert(e));
            b
        })
        .collect();

    // drop empty and dominated sets; among equal sets keep the first
    let keep: Vec<usize> = (0..bits.len())
        .filter(|&i| {
            !bits[i].is_clear()
                && !(0..bits.len()).any(|j| {
                    j != i && bits[i].is_subset(&bits[j]) && (bits[i] != bits[j] || j < i)
                })
        })
        .collect();
    let sets: Vec<FixedBitSet> = keep.iter().map(|&i| bits[i].clone()).collect();
    let mut containing = vec![Vec::new(); inst.universe];
    for (s, b) in sets.iter().enumerate() {
        for e in b.ones() {
            containing[e].push(s);
        }
    }

    let incumbent = greedy(inst.universe, &sets);
    let limit = cap.map_or(usize::MAX, |c| c + 1);
    let (best, best_len) = if incumbent.len() < limit {
        let mut sorted = incumbent.clone();
        sorted.sort_unstable();
        (Some(sorted), incumbent.len())
    } else {
        (None, limit)
    };
    let mut search = Search { sets, containing, budget, nodes: 0, best, best_len };
    let covered = FixedBitSet::with_capacity(inst.universe);
    let mut excluded = FixedBitSet::with_capacity(search.sets.len());
    search
        .run(&covered, &mut excluded, &mut Vec::new())
        .map_err(|budget| SetCoverError::TooLarge { budget })?;
    match search.best {
        Some(local) => {
            let mut chosen: Vec<usize> = local.iter().map(|&s| keep[s]).collect();
            chosen.sort_unstable();
            Ok(SetCoverSolution { chosen, nodes: search.nodes })
        }
        None => Err(SetCoverError::CapExceeded { cap: cap.unwrap_or(usize::MAX) }),
    }
}

/// Optimal cover choosing among `candidates`; witnesses are the first chosen
/// square covering each segment.
pub(crate) fn cover_from_candidates(
    segments: &[Segment],
    candidates: &[UnitSquare],
    budget: u64,
    cap: Option<usize>,
) -> Result<(Cover, Vec<usize>), SolveError> {
    let mut sets = vec![Vec::new(); candidates.len()];
    for (k, s) in segments.iter().enumerate() {
        for (c, t) in candidates.iter().enumerate() {
            if covers(t, s) {
                sets[c].push(k);
            }
        }
    }
    let inst = SetCoverInstance::new(segments.len(), sets);
    let sol = exact_setcover(&inst, budget, cap).map_err(|e| match e {
        SetCoverError::Infeasible { element } => SolveError::Infeasible { segment: element },
        SetCoverError::TooLarge { budget } => SolveError::TooLarge { budget },
        SetCoverError::CapExceeded { cap } => SolveError::Structure(format!("no cover with at most {cap} squares")),
    })?;
    let cover = Cover::from_squares(segments, sol.chosen.iter().map(|&c| candidates[c].clone()))?;
    Ok((cover, sol.chosen))
}

/// Optimal continuous cover over the canonical candidate squares of all
/// endpoints.
pub fn exact_continuous(segments: &[Segment], budget: u64) -> Result<Cover, SolveError> {
    let endpoints: Vec<_> = segments.iter().flat_map(|s| s.endpoints().map(Clone::clone)).collect();
    let candidates = enumerate_candidates(&endpoints);
    Ok(cover_from_candidates(segments, &candidates, budget, None)?.0)
}

/// Optimal subset of the given squares, with the chosen square indices.
pub fn exact_discrete(segments: &[Segment], squares: &[UnitSquare], budget: u64) -> Result<(Cover, Vec<usize>), SolveError> {
    cover_from_candidates(segments, squares, budget, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn solve(universe: usize, sets: Vec<Vec<usize>>) -> Result<SetCoverSolution, SetCoverError> {
        exact_setcover(&SetCoverInstance::new(universe, sets), DEFAULT_NODE_BUDGET, None)
    }

    /// Smallest covering subfamily by enumerating every subset.
    fn brute_force(universe: usize, sets: &[Vec<usize>]) -> Option<usize> {
        (0u32..1 << sets.len())
            .filter(|mask| {
                let mut seen = vec![false; universe];
                for (i, s) in sets.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s.iter().for_each(|&e| seen[e] = true);
                    }
                }
                seen.iter().all(|&c| c)
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
    }

    #[test]
    fn small_examples() {
        assert_eq!(solve(1, vec![vec![0]]).unwrap().chosen, vec![0]);
        assert_eq!(solve(3, vec![vec![0], vec![1], vec![2]]).unwrap().chosen.len(), 3);
        let sets = vec![vec![0, 1], vec![1, 2], vec![2]];
        assert_eq!(brute_force(3, &sets), Some(2));
        assert_eq!(solve(3, sets).unwrap().chosen.len(), 2);
        assert_eq!(solve(0, vec![]).unwrap().chosen, Vec::<usize>::new());
    }

    #[test]
    fn infeasible_and_budget() {
        assert_eq!(solve(2, vec![vec![0]]), Err(SetCoverError::Infeasible { element: 1 }));
        let sets: Vec<Vec<usize>> = (0..12).map(|i| vec![i, (i + 1) % 12, (i + 5) % 12]).collect();
        let inst = SetCoverInstance::new(12, sets);
        assert_eq!(exact_setcover(&inst, 2, None), Err(SetCoverError::TooLarge { budget: 2 }));
    }

    #[test]
    fn cap_limits_search() {
        let sets = vec![vec![0], vec![1], vec![2]];
        let inst = SetCoverInstance::new(3, sets);
        assert_eq!(exact_setcover(&inst, 100, Some(2)), Err(SetCoverError::CapExceeded { cap: 2 }));
        assert_eq!(exact_setcover(&inst, 100, Some(3)).unwrap().chosen.len(), 3);
    }

    #[test]
    fn matches_brute_force_on_random_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let universe = rng.gen_range(1..9);
            let count = rng.gen_range(1..11);
            let sets: Vec<Vec<usize>> = (0..count)
                .map(|_| (0..universe).filter(|_| rng.gen_bool(0.35)).collect())
                .collect();
            let want = brute_force(universe, &sets);
            let got = solve(universe, sets.clone());
            match want {
                None => assert!(matches!(got, Err(SetCoverError::Infeasible { .. }))),
                Some(w) => {
                    let sol = got.unwrap();
                    assert_eq!(sol.chosen.len(), w);
                    let mut seen = vec![false; universe];
                    sol.chosen.iter().for_each(|&s| sets[s].iter().for_each(|&e| seen[e] = true));
                    assert!(seen.iter().all(|&c| c));
                }
            }
        }
    }

    #[test]
    fn exact_continuous_basics() {
        let s = |x: i64, y: i64| Segment::from_coords(Scalar::from_int(x), Scalar::from_int(y), Scalar::from_int(x + 1), Scalar::from_int(y));
        assert_eq!(exact_continuous(&[s(0, 0)], DEFAULT_NODE_BUDGET).unwrap().len(), 1);
        let far = [s(0, 0), s(10, 0), s(0, 10)];
        assert_eq!(exact_continuous(&far, DEFAULT_NODE_BUDGET).unwrap().len(), 3);
        assert_eq!(exact_continuous(&[], DEFAULT_NODE_BUDGET).unwrap().len(), 0);
    }

    #[test]
    fn exact_discrete_basics() {
        let segs: Vec<Segment> = (0..3)
            .map(|i| Segment::from_coords(Scalar::from_int(3 * i), Scalar::zero(), Scalar::from_int(3 * i + 1), Scalar::zero()))
            .collect();
        let each: Vec<UnitSquare> = (0..3).map(|i| UnitSquare::new(3 * i, 0)).collect();
        assert_eq!(exact_discrete(&segs, &each, DEFAULT_NODE_BUDGET).unwrap().0.len(), 3);
        let one_big = vec![UnitSquare::new(0, -1)];
        let near: Vec<Segment> = (0..3)
            .map(|i| Segment::from_coords(Scalar::ratio(i, 4), Scalar::zero(), Scalar::from_int(5), Scalar::from_int(i)))
            .collect();
        assert_eq!(exact_discrete(&near, &one_big, DEFAULT_NODE_BUDGET).unwrap().0.len(), 1);
        assert!(matches!(
            exact_discrete(&segs, &one_big, DEFAULT_NODE_BUDGET),
            Err(SolveError::Infeasible { segment: 1 })
        ));
    }
}
