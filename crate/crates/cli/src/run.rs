//! Algorithm dispatch shared by the subcommands.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use segcover::discrete::{dcsus_16_approx, DiscreteInstance, DiscreteSolution};
use segcover::exact::{exact_continuous, exact_discrete, DEFAULT_NODE_BUDGET};
use segcover::io::{ClassTag, Instance, Mode};
use segcover::ptas::ptas_cover;
use segcover::strip::{greedy_strip_cover, h1_two_approx, strip_arb_three_approx, StripInstance};
use segcover::sweep::{arb_eight_approx, arb_six_approx, hv1_four_approx, hv1_three_approx};
use segcover::{verify_cover, Cover, SolveError};
use sha2::{Digest, Sha256};

/// Largest instance the exact solver accepts without `--force`.
pub const EXACT_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    GreedyStrip,
    H1TwoApprox,
    StripArbThreeApprox,
    Hv1FourApprox,
    Hv1ThreeApprox,
    Hv1Ptas,
    ArbEightApprox,
    ArbSixApprox,
    Discrete16,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::GreedyStrip,
        Algorithm::H1TwoApprox,
        Algorithm::StripArbThreeApprox,
        Algorithm::Hv1FourApprox,
        Algorithm::Hv1ThreeApprox,
        Algorithm::Hv1Ptas,
        Algorithm::ArbEightApprox,
        Algorithm::ArbSixApprox,
        Algorithm::Discrete16,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GreedyStrip => "greedy-strip",
            Algorithm::H1TwoApprox => "h1-2approx",
            Algorithm::StripArbThreeApprox => "strip-arb-3approx",
            Algorithm::Hv1FourApprox => "hv1-4approx",
            Algorithm::Hv1ThreeApprox => "hv1-3approx",
            Algorithm::Hv1Ptas => "hv1-ptas",
            Algorithm::ArbEightApprox => "arb-8approx",
            Algorithm::ArbSixApprox => "arb-6approx",
            Algorithm::Discrete16 => "discrete-16",
            Algorithm::Exact => "exact",
        }
    }

    /// Mode and geometric class the algorithm accepts; `None` for either.
    fn requirement(self) -> Option<(Mode, ClassTag)> {
        match self {
            Algorithm::GreedyStrip => Some((Mode::Continuous, ClassTag::H1us)),
            Algorithm::H1TwoApprox => Some((Mode::Continuous, ClassTag::H1)),
            Algorithm::StripArbThreeApprox | Algorithm::ArbEightApprox | Algorithm::ArbSixApprox => {
                Some((Mode::Continuous, ClassTag::Arb))
            }
            Algorithm::Hv1FourApprox | Algorithm::Hv1ThreeApprox | Algorithm::Hv1Ptas => Some((Mode::Continuous, ClassTag::Hv1)),
            Algorithm::Discrete16 => Some((Mode::Discrete, ClassTag::Discrete)),
            Algorithm::Exact => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let known: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
            format!("unknown algorithm '{s}' (expected one of {})", known.join(", "))
        })
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub k: Option<usize>,
    pub budget: u64,
    pub force: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { k: None, budget: DEFAULT_NODE_BUDGET, force: false }
    }
}

/// Why a run failed, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Infeasible(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Infeasible(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Infeasible(m) | Failure::Usage(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let text = e.to_string();
        match e {
            SolveError::Infeasible { .. } | SolveError::UncoveredPoint { .. } => Failure::Infeasible(text),
            SolveError::TooLarge { .. } => Failure::Budget(text),
            SolveError::DegenerateSegment { .. } | SolveError::InvalidInstance { .. } | SolveError::Structure(_) => {
                Failure::Usage(text)
            }
        }
    }
}

pub struct Outcome {
    pub cover: Cover,
    pub elapsed: Duration,
    /// Stage trace and inequality checks of the discrete pipeline.
    pub discrete: Option<DiscreteSolution>,
}

fn check_class(alg: Algorithm, inst: &Instance) -> Result<(), Failure> {
    let Some((mode, class)) = alg.requirement() else { return Ok(()) };
    if inst.mode != mode {
        return Err(Failure::Usage(format!("{alg} needs a {} instance, got {}", mode.name(), inst.mode.name())));
    }
    class
        .check(&inst.segments)
        .map_err(|(k, why)| Failure::Usage(format!("{alg} needs class {class}: segment {k} is {why}")))
}

/// Runs one algorithm and re-verifies its output.
pub fn run(alg: Algorithm, inst: &Instance, opts: &Options) -> Result<Outcome, Failure> {
    check_class(alg, inst)?;
    let segs = &inst.segments;
    let start = Instant::now();
    let mut discrete = None;
    let cover = match alg {
        Algorithm::GreedyStrip => greedy_strip_cover(&StripInstance::fit(segs.clone())?)?,
        Algorithm::H1TwoApprox => h1_two_approx(segs)?,
        Algorithm::StripArbThreeApprox => strip_arb_three_approx(&StripInstance::fit(segs.clone())?)?.cover,
        Algorithm::Hv1FourApprox => hv1_four_approx(segs)?,
        Algorithm::Hv1ThreeApprox => hv1_three_approx(segs)?.cover,
        Algorithm::Hv1Ptas => {
            let k = opts.k.ok_or_else(|| Failure::Usage("hv1-ptas requires --k".into()))?;
            ptas_cover(segs, k, opts.budget)?.cover
        }
        Algorithm::ArbEightApprox => arb_eight_approx(segs)?.cover,
        Algorithm::ArbSixApprox => arb_six_approx(segs)?.cover,
        Algorithm::Discrete16 => {
            let sol = dcsus_16_approx(&DiscreteInstance::new(segs.clone(), inst.squares.clone())?)?;
            let cover = sol.cover.clone();
            discrete = Some(sol);
            cover
        }
        Algorithm::Exact => {
            if segs.len() > EXACT_LIMIT && !opts.force {
                return Err(Failure::Usage(format!(
                    "exact refuses {} segments (limit {EXACT_LIMIT}); pass --force to try anyway",
                    segs.len()
                )));
            }
            match inst.mode {
                Mode::Continuous => exact_continuous(segs, opts.budget)?,
                Mode::Discrete => exact_discrete(segs, &inst.squares, opts.budget)?.0,
            }
        }
    };
    let elapsed = start.elapsed();
    let report = verify_cover(segs, &cover)?;
    if !report.feasible {
        return Err(Failure::Infeasible(format!("{alg} produced a cover missing segments {:?}", report.uncovered)));
    }
    Ok(Outcome { cover, elapsed, discrete })
}

/// First 16 hex digits of the SHA-256 of the canonical instance text.
pub fn digest(inst: &Instance) -> String {
    let hash = Sha256::digest(segcover::io::serialize_instance(inst).as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// One row of the run/compare table.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub algorithm: String,
    pub digest: String,
    pub size: usize,
    pub time_ms: f64,
    pub exact: Option<usize>,
}

impl RunReport {
    pub const HEADER: &'static str = "alg\tdigest\tsize\ttime_ms\tratio";

    pub fn ratio(&self) -> String {
        match self.exact {
            Some(0) if self.size == 0 => "1.0000".into(),
            Some(0) | None => "-".into(),
            Some(e) => format!("{:.4}", self.size as f64 / e as f64),
        }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{:.3}\t{}", self.algorithm, self.digest, self.size, self.time_ms, self.ratio())
    }
}
