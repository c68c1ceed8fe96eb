//! Covering segments with squares drawn from a given finite set.
//!
//! The 16-approximation splits the instance three times, each split losing at
//! most a factor 2 against the LP relaxation: by which endpoint the relaxation
//! mostly covers, by the parity of the horizontal line each square is assigned
//! to, and by which side of that line the endpoint lies. What remains is a set
//! of point-cover problems over rectangles standing on a common baseline,
//! solved within a factor 2 by [`rpc_cover`].

mod rpc;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

pub use rpc::{rpc_cover, rpc_relaxation, BaselineRect, RectSide, RpcOutput};

use crate::error::SolveError;
use crate::geometry::{Cover, Point, Segment, UnitSquare};
use crate::lp::{solve_lp, LinearProgram};
use crate::scalar::Scalar;

/// Which endpoint of a segment a subproblem is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    Left,
    Right,
}

impl End {
    pub fn of(self, s: &Segment) -> &Point {
        match self {
            End::Left => s.left(),
            End::Right => s.right(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            End::Left => "left",
            End::Right => "right",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteInstance {
    pub segments: Vec<Segment>,
    pub squares: Vec<UnitSquare>,
    /// Squares covering some left endpoint.
    pub t1: Vec<usize>,
    /// Squares covering some right endpoint.
    pub t2: Vec<usize>,
}

impl DiscreteInstance {
    /// Fails with the first segment no square covers.
    pub fn new(segments: Vec<Segment>, squares: Vec<UnitSquare>) -> Result<Self, SolveError> {
        for (k, s) in segments.iter().enumerate() {
            if !squares.iter().any(|t| crate::geometry::covers(t, s)) {
                return Err(SolveError::Infeasible { segment: k });
            }
        }
        let touching = |end: End| -> Vec<usize> {
            (0..squares.len()).filter(|&t| segments.iter().any(|s| squares[t].contains(end.of(s)))).collect()
        };
        let (t1, t2) = (touching(End::Left), touching(End::Right));
        Ok(DiscreteInstance { segments, squares, t1, t2 })
    }

    fn covering<'a>(&'a self, p: &'a Point, among: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        among.iter().copied().filter(move |&t| self.squares[t].contains(p))
    }
}

fn solve(lp: &LinearProgram, what: &str) -> Result<crate::lp::LinearSolution, SolveError> {
    let sol = solve_lp(lp)?;
    if !sol.is_optimal() {
        return Err(SolveError::Structure(format!("{what} relaxation is infeasible")));
    }
    Ok(sol)
}

/// Relaxation value for covering `end` of each listed segment with the listed
/// squares.
fn class_lp_value(inst: &DiscreteInstance, segments: &[usize], squares: &[usize], end: End) -> Result<Scalar, SolveError> {
    let mut lp = LinearProgram::covering(squares.len());
    lp.var_labels = squares.iter().map(|t| format!("t{t}")).collect();
    for &k in segments {
        let p = end.of(&inst.segments[k]);
        lp.add_cover_row((0..squares.len()).filter(|&v| inst.squares[squares[v]].contains(p)), format!("s{k}"));
    }
    Ok(solve(&lp, "class")?.objective)
}

#[derive(Debug, Clone)]
pub struct Step1 {
    /// Segments whose left endpoints carry at least half the fractional cover.
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub lp_objective: Scalar,
    /// Left-endpoint share of each segment's row.
    pub left_sums: Vec<Scalar>,
}

/// Splits segments by which endpoint the relaxation covers at least halfway,
/// ties going left.
pub fn step1_split(inst: &DiscreteInstance) -> Result<Step1, SolveError> {
    let (n1, n2) = (inst.t1.len(), inst.t2.len());
    let mut lp = LinearProgram::covering(n1 + n2);
    lp.var_labels = inst.t1.iter().map(|t| format!("l{t}")).chain(inst.t2.iter().map(|t| format!("r{t}"))).collect();
    let mut left_vars = Vec::with_capacity(inst.segments.len());
    for (k, s) in inst.segments.iter().enumerate() {
        let lv: Vec<usize> = (0..n1).filter(|&v| inst.squares[inst.t1[v]].contains(s.left())).collect();
        let rv = (0..n2).filter(|&v| inst.squares[inst.t2[v]].contains(s.right())).map(|v| v + n1);
        let vars: Vec<usize> = lv.iter().copied().chain(rv).collect();
        if vars.is_empty() {
            return Err(SolveError::Infeasible { segment: k });
        }
        lp.add_cover_row(vars, format!("s{k}"));
        left_vars.push(lv);
    }
    let sol = solve(&lp, "step 1")?;
    let half = Scalar::ratio(1, 2);
    let left_sums: Vec<Scalar> = left_vars.iter().map(|vs| vs.iter().map(|&v| &sol.x[v]).sum()).collect();
    let (s1, s2) = (0..inst.segments.len()).partition(|&k| left_sums[k] >= half);
    Ok(Step1 { s1, s2, lp_objective: sol.objective, left_sums })
}

/// Unit-spaced horizontal lines `y = offset + ξ` and the line of each square.
#[derive(Debug, Clone)]
pub struct LineSystem {
    pub offset: Scalar,
    /// Line index `ξ` of every square of the instance.
    pub line_of: Vec<i64>,
}

impl LineSystem {
    /// Anchors line 0 at the lowest square bottom. A square is assigned to
    /// the line through its interior or top edge; a square whose bottom edge
    /// is on a line also touches the line above and goes to the lower one.
    pub fn new(squares: &[UnitSquare]) -> LineSystem {
        let offset = squares.iter().map(|t| t.y.clone()).min().unwrap_or_default();
        let line_of =
            squares.iter().map(|t| (&t.y - &offset).ceil_i64().expect("line index fits in i64")).collect();
        LineSystem { offset, line_of }
    }

    pub fn line_y(&self, xi: i64) -> Scalar {
        &self.offset + Scalar::from(xi)
    }
}

#[derive(Debug, Clone)]
pub struct Step2 {
    pub end: End,
    pub even_segments: Vec<usize>,
    pub odd_segments: Vec<usize>,
    pub even_squares: Vec<usize>,
    pub odd_squares: Vec<usize>,
    /// Relaxation value of the whole side.
    pub lp_objective: Scalar,
}

/// Splits one side by the parity of the lines its squares are assigned to,
/// ties going to the even class.
pub fn step2_split(
    inst: &DiscreteInstance,
    lines: &LineSystem,
    segments: &[usize],
    end: End,
) -> Result<Step2, SolveError> {
    let pool = if end == End::Left { &inst.t1 } else { &inst.t2 };
    let squares: Vec<usize> =
        pool.iter().copied().filter(|&t| segments.iter().any(|&k| inst.squares[t].contains(end.of(&inst.segments[k])))).collect();
    let (even_squares, odd_squares): (Vec<usize>, Vec<usize>) =
        squares.iter().partition(|&&t| lines.line_of[t].rem_euclid(2) == 0);

    let mut lp = LinearProgram::covering(squares.len());
    lp.var_labels = squares.iter().map(|t| format!("t{t}")).collect();
    let mut even_vars = Vec::with_capacity(segments.len());
    for &k in segments {
        let p = end.of(&inst.segments[k]);
        let vars: Vec<usize> = (0..squares.len()).filter(|&v| inst.squares[squares[v]].contains(p)).collect();
        if vars.is_empty() {
            return Err(SolveError::Infeasible { segment: k });
        }
        even_vars.push(vars.iter().copied().filter(|&v| lines.line_of[squares[v]].rem_euclid(2) == 0).collect::<Vec<_>>());
        lp.add_cover_row(vars, format!("s{k}"));
    }
    let sol = solve(&lp, "step 2")?;
    let half = Scalar::ratio(1, 2);
    let mut even_segments = Vec::new();
    let mut odd_segments = Vec::new();
    for (pos, &k) in segments.iter().enumerate() {
        let share: Scalar = even_vars[pos].iter().map(|&v| &sol.x[v]).sum();
        if share >= half {
            even_segments.push(k);
        } else {
            odd_segments.push(k);
        }
    }
    Ok(Step2 { end, even_segments, odd_segments, even_squares, odd_squares, lp_objective: sol.objective })
}

/// Points and rectangles of one point-cover subproblem, in baseline
/// coordinates `(x, distance from the line)`.
#[derive(Debug, Clone, Default)]
pub struct RpcInstance {
    pub points: Vec<Point>,
    /// Segment each point is an endpoint of.
    pub segments: Vec<usize>,
    pub rects: Vec<BaselineRect>,
    /// Square each rectangle was clipped from.
    pub squares: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LineInstance {
    pub line: i64,
    pub baseline: Scalar,
    pub above: RpcInstance,
    pub below: RpcInstance,
}

/// Clips the squares of one line to either side of it and sorts each
/// segment's endpoint to the side it lies on; endpoints on the line go above.
pub fn step3_split(
    inst: &DiscreteInstance,
    lines: &LineSystem,
    segments: &[usize],
    squares: &[usize],
    end: End,
    line: i64,
) -> LineInstance {
    let baseline = lines.line_y(line);
    let mut above = RpcInstance::default();
    let mut below = RpcInstance::default();
    for &t in squares {
        debug_assert_eq!(lines.line_of[t], line);
        let sq = &inst.squares[t];
        let up = BaselineRect {
            baseline: baseline.clone(),
            left: sq.x.clone(),
            height: sq.max_y() - &baseline,
            side: RectSide::Above,
        };
        let down =
            BaselineRect { baseline: baseline.clone(), left: sq.x.clone(), height: &baseline - &sq.y, side: RectSide::Below };
        above.rects.push(up);
        above.squares.push(t);
        below.rects.push(down);
        below.squares.push(t);
    }
    for &k in segments {
        let p = end.of(&inst.segments[k]);
        let dist = &p.y - &baseline;
        let target = if dist.is_negative() { &mut below } else { &mut above };
        target.points.push(Point { x: p.x.clone(), y: dist.abs() });
        target.segments.push(k);
    }
    LineInstance { line, baseline, above, below }
}

/// One row of the pipeline trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: String,
    pub segments: usize,
    pub squares: usize,
    pub lp_objective: Scalar,
    /// Squares or rectangles chosen, where the stage chooses any.
    pub output: Option<usize>,
}

/// An inequality `lhs ≤ rhs` the analysis relies on, evaluated on this run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerCheck {
    pub name: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub holds: bool,
}

impl LedgerCheck {
    fn new(name: impl Into<String>, lhs: Scalar, rhs: Scalar) -> Self {
        let slack = Scalar::ratio(1, 1_000_000);
        let holds = lhs <= &rhs + &slack;
        LedgerCheck { name: name.into(), lhs, rhs, holds }
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    pub cover: Cover,
    /// Indices into the instance's squares, ascending.
    pub chosen: Vec<usize>,
    pub stages: Vec<StageRecord>,
    pub checks: Vec<LedgerCheck>,
}

impl DiscreteSolution {
    pub fn ledger_holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// Tab-separated trace: `stage` rows, then `check` rows.
    pub fn trace_tsv(&self) -> String {
        let mut out = String::from("kind\tname\tsegments\tsquares\tlp_objective\toutput\n");
        for s in &self.stages {
            let output = s.output.map_or_else(|| "-".to_string(), |o| o.to_string());
            let _ = writeln!(out, "stage\t{}\t{}\t{}\t{}\t{}", s.stage, s.segments, s.squares, s.lp_objective, output);
        }
        out.push_str("kind\tname\tlhs\trhs\tholds\n");
        for c in &self.checks {
            let _ = writeln!(out, "check\t{}\t{}\t{}\t{}", c.name, c.lhs, c.rhs, c.holds);
        }
        out
    }
}

struct LineJob {
    label: String,
    end: End,
    line: i64,
    segments: Vec<usize>,
    squares: Vec<usize>,
}

struct LineResult {
    stages: Vec<StageRecord>,
    checks: Vec<LedgerCheck>,
    chosen: Vec<usize>,
}

/// Groups a parity class by line; each endpoint goes to the line of any
/// class square covering it (same-parity lines are two apart, so there is
/// only one).
fn line_jobs(
    inst: &DiscreteInstance,
    lines: &LineSystem,
    label: &str,
    segments: &[usize],
    squares: &[usize],
    end: End,
) -> Result<Vec<LineJob>, SolveError> {
    let mut by_line: BTreeMap<i64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for &t in squares {
        by_line.entry(lines.line_of[t]).or_default().1.push(t);
    }
    for &k in segments {
        let p = end.of(&inst.segments[k]);
        let t = inst
            .covering(p, squares)
            .next()
            .ok_or_else(|| SolveError::Structure(format!("segment {k} lost its covering square in class {label}")))?;
        by_line.entry(lines.line_of[t]).or_default().0.push(k);
    }
    Ok(by_line
        .into_iter()
        .filter(|(_, (segs, _))| !segs.is_empty())
        .map(|(line, (segments, squares))| LineJob { label: format!("{label}/line{line}"), end, line, segments, squares })
        .collect())
}

fn run_line(inst: &DiscreteInstance, lines: &LineSystem, job: &LineJob) -> Result<LineResult, SolveError> {
    let two = Scalar::from(2);
    let whole = class_lp_value(inst, &job.segments, &job.squares, job.end)?;
    let split = step3_split(inst, lines, &job.segments, &job.squares, job.end, job.line);
    let mut res = LineResult {
        stages: vec![StageRecord {
            stage: job.label.clone(),
            segments: job.segments.len(),
            squares: job.squares.len(),
            lp_objective: whole.clone(),
            output: None,
        }],
        checks: Vec::new(),
        chosen: Vec::new(),
    };
    let mut halves = Scalar::zero();
    for (name, sub) in [("above", &split.above), ("below", &split.below)] {
        let label = format!("{}/{name}", job.label);
        let lp = solve(&rpc_relaxation(&sub.points, &sub.rects), &label)?.objective;
        let out = rpc_cover(&sub.points, &sub.rects).map_err(|e| match e {
            SolveError::UncoveredPoint { index, .. } => SolveError::Infeasible { segment: sub.segments[index] },
            other => other,
        })?;
        res.checks.push(LedgerCheck::new(format!("rpc {label}"), Scalar::from(out.selected.len()), &two * &lp));
        res.stages.push(StageRecord {
            stage: label,
            segments: sub.points.len(),
            squares: sub.rects.len(),
            lp_objective: lp.clone(),
            output: Some(out.selected.len()),
        });
        res.chosen.extend(out.selected.iter().map(|&r| sub.squares[r]));
        halves += &lp;
    }
    res.checks.push(LedgerCheck::new(format!("step3 {}", job.label), halves, &two * &whole));
    Ok(res)
}

/// Factor-16 cover using only the instance's squares.
pub fn dcsus_16_approx(inst: &DiscreteInstance) -> Result<DiscreteSolution, SolveError> {
    let two = Scalar::from(2);
    let n = inst.segments.len();
    let mut stages = Vec::new();
    let mut checks = Vec::new();

    let step1 = step1_split(inst)?;
    stages.push(StageRecord {
        stage: "step1".into(),
        segments: n,
        squares: inst.t1.len() + inst.t2.len(),
        lp_objective: step1.lp_objective.clone(),
        output: None,
    });
    let lines = LineSystem::new(&inst.squares);
    let mut jobs = Vec::new();
    let mut side_values = Vec::new();
    for (end, segs) in [(End::Left, &step1.s1), (End::Right, &step1.s2)] {
        let side = step2_split(inst, &lines, segs, end)?;
        let name = end.name();
        stages.push(StageRecord {
            stage: name.into(),
            segments: segs.len(),
            squares: side.even_squares.len() + side.odd_squares.len(),
            lp_objective: side.lp_objective.clone(),
            output: None,
        });
        let mut parity_sum = Scalar::zero();
        for (parity, cs, csq) in [("even", &side.even_segments, &side.even_squares), ("odd", &side.odd_segments, &side.odd_squares)] {
            let label = format!("{name}/{parity}");
            let value = class_lp_value(inst, cs, csq, end)?;
            stages.push(StageRecord {
                stage: label.clone(),
                segments: cs.len(),
                squares: csq.len(),
                lp_objective: value.clone(),
                output: None,
            });
            parity_sum += &value;
            jobs.extend(line_jobs(inst, &lines, &label, cs, csq, end)?);
        }
        checks.push(LedgerCheck::new(format!("step2 {name}"), parity_sum, &two * &side.lp_objective));
        side_values.push(side.lp_objective);
    }
    checks.insert(0, LedgerCheck::new("step1", &side_values[0] + &side_values[1], &two * &step1.lp_objective));

    let results: Vec<LineResult> =
        jobs.par_iter().map(|job| run_line(inst, &lines, job)).collect::<Result<_, _>>()?;
    let mut chosen = Vec::new();
    for r in results {
        stages.extend(r.stages);
        checks.extend(r.checks);
        chosen.extend(r.chosen);
    }
    chosen.sort_unstable();
    chosen.dedup();
    let cover = Cover::from_squares(&inst.segments, chosen.iter().map(|&t| inst.squares[t].clone()))?;
    Ok(DiscreteSolution { cover, chosen, stages, checks })
}
