//! Fuzzing of the three-shape exactness conjecture for rational BD shapes.
//!
//! The conjecture is only evaluated and compared with the complement
//! coverage oracle on the three-way join; disagreements are reported and
//! dumped, never asserted.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use exactjoin::bd::BdShape;
use exactjoin::graph::WeightedGraph;
use exactjoin::oracle::{covered_by, Polyhedral};
use exactjoin::shape::write_shape;
use exactjoin::{ExtendedRational, Result, Verdict};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::gen::{bd_constraints, trial_rng};

/// One arc per shape, `(i_h, j_h)` of the reduced graph of shape `h`.
pub type ArcTriple = [(usize, usize); 3];

/// Evaluates the conjecture on three non-empty shapes: the join is claimed
/// inexact iff some arcs `(i_h, j_h)` of the reduced graphs satisfy
/// conditions (1), (2a)-(2c), (3a) and (3b). Returns the first such triple.
/// `None` is returned for empty inputs too.
pub fn conjecture_witness(shapes: &[BdShape; 3]) -> Result<Option<ArcTriple>> {
    let mut closed: Vec<&WeightedGraph> = Vec::with_capacity(3);
    let mut reduced: Vec<&WeightedGraph> = Vec::with_capacity(3);
    for s in shapes {
        match (s.closed(), s.reduced()) {
            (Some(c), Some(r)) => {
                closed.push(c);
                reduced.push(r);
            }
            _ => return Ok(None),
        }
    }
    let w = closed[0].lub(closed[1])?.lub(closed[2])?;
    // Condition (1) filters each candidate list up front.
    let cands: Vec<Vec<(usize, usize)>> = (0..3)
        .map(|h| reduced[h].arcs().into_iter().filter(|&(i, j)| closed[h].get(i, j) < w.get(i, j)).collect())
        .collect();
    let fin = ExtendedRational::Finite;
    for &a in &cands[0] {
        let w1 = closed[0].get(a.0, a.1).as_finite().expect("reduced arcs are finite").clone();
        for &b in &cands[1] {
            let w2 = closed[1].get(b.0, b.1).as_finite().expect("reduced arcs are finite").clone();
            // (2a)
            if fin(&w1 + &w2) >= w.get(a.0, b.1).add(w.get(b.0, a.1)) {
                continue;
            }
            for &c in &cands[2] {
                let w3 = closed[2].get(c.0, c.1).as_finite().expect("reduced arcs are finite").clone();
                let two_b = fin(&w2 + &w3) < w.get(b.0, c.1).add(w.get(c.0, b.1));
                let two_c = fin(&w3 + &w1) < w.get(c.0, a.1).add(w.get(a.0, c.1));
                let total = fin(&(&w1 + &w2) + &w3);
                let three_a = total < w.get(a.0, b.1).add(w.get(b.0, c.1)).add(w.get(c.0, a.1));
                let three_b = total < w.get(a.0, c.1).add(w.get(b.0, a.1)).add(w.get(c.0, b.1));
                if two_b && two_c && three_a && three_b {
                    return Ok(Some([a, b, c]));
                }
            }
        }
    }
    Ok(None)
}

/// Whether the join of the three shapes is their union, decided by
/// complement coverage.
pub fn three_way_verdict(shapes: &[BdShape; 3]) -> Result<Verdict> {
    let join = shapes[0].join(&shapes[1])?.join(&shapes[2])?;
    let parts: Vec<_> = shapes.iter().map(Polyhedral::to_nnc).collect();
    Ok(if covered_by(&join.to_nnc(), &parts)? { Verdict::Exact } else { Verdict::Inexact })
}

/// Parameters of a fuzzing run.
#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed: u64,
    /// Each trial draws its dimension uniformly from `1..=max_dim`.
    pub max_dim: usize,
    /// Integer bounds are drawn from `[-bound, bound]`.
    pub bound: i64,
    pub jobs: usize,
    /// Directory receiving one file per disagreement.
    pub out: Option<PathBuf>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { trials: 1000, seed: 1, max_dim: 3, bound: 3, jobs: 1, out: None }
    }
}

/// Result of one trial.
#[derive(Clone, Debug, PartialEq)]
pub enum TrialOutcome {
    /// Some shape was empty; the conjecture does not apply.
    Skipped,
    Compared { conjecture: Verdict, arcs: Option<ArcTriple>, oracle: Verdict, shapes: Vec<String> },
}

/// Runs trial `index`; the shapes depend only on `(seed, index)`.
pub fn run_trial(cfg: &FuzzConfig, index: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.seed, index);
    let dim = rng.gen_range(1..=cfg.max_dim.max(1));
    let mut make = || BdShape::from_constraints(&bd_constraints(&mut rng, dim, cfg.bound, false));
    let shapes = [make()?, make()?, make()?];
    if shapes.iter().any(BdShape::is_empty) {
        return Ok(TrialOutcome::Skipped);
    }
    let arcs = conjecture_witness(&shapes)?;
    let conjecture = if arcs.is_some() { Verdict::Inexact } else { Verdict::Exact };
    let oracle = three_way_verdict(&shapes)?;
    Ok(TrialOutcome::Compared { conjecture, arcs, oracle, shapes: shapes.iter().map(write_shape).collect() })
}

/// Aggregated outcome of a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FuzzReport {
    pub trials: u64,
    pub skipped: u64,
    pub both_exact: u64,
    pub both_inexact: u64,
    /// Conjecture inexact, oracle exact.
    pub false_inexact: u64,
    /// Conjecture exact, oracle inexact.
    pub false_exact: u64,
    /// Trial index and dump text of each disagreement.
    pub counterexamples: Vec<(u64, String)>,
    pub files: Vec<PathBuf>,
}

impl FuzzReport {
    pub fn compared(&self) -> u64 {
        self.trials - self.skipped
    }

    pub fn disagreements(&self) -> u64 {
        self.false_inexact + self.false_exact
    }
}

fn dump(cfg: &FuzzConfig, index: u64, conjecture: Verdict, arcs: &Option<ArcTriple>, oracle: Verdict, shapes: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# conjecture and oracle disagree");
    let _ = writeln!(s, "# reproduce: exactjoin fuzz-conjecture --seed {} --trials {} --dim {} --bound {}", cfg.seed, index + 1, cfg.max_dim, cfg.bound);
    let _ = writeln!(s, "# trial: {index}");
    let _ = writeln!(s, "# conjecture: {conjecture}");
    if let Some([a, b, c]) = arcs {
        let _ = writeln!(s, "# arcs: ({},{}) ({},{}) ({},{})", a.0, a.1, b.0, b.1, c.0, c.1);
    }
    let _ = writeln!(s, "# oracle: {oracle}");
    let _ = writeln!(s, "powerset {{ {} }}", shapes.join("; "));
    s
}

fn tally(cfg: &FuzzConfig, outcomes: Vec<(u64, TrialOutcome)>) -> FuzzReport {
    let mut r = FuzzReport { trials: outcomes.len() as u64, ..FuzzReport::default() };
    for (index, o) in outcomes {
        match o {
            TrialOutcome::Skipped => r.skipped += 1,
            TrialOutcome::Compared { conjecture, arcs, oracle, shapes } => match (conjecture, oracle) {
                (Verdict::Exact, Verdict::Exact) => r.both_exact += 1,
                (Verdict::Inexact, Verdict::Inexact) => r.both_inexact += 1,
                (c, o) => {
                    if c == Verdict::Inexact {
                        r.false_inexact += 1;
                    } else {
                        r.false_exact += 1;
                    }
                    r.counterexamples.push((index, dump(cfg, index, c, &arcs, o, &shapes)));
                }
            },
        }
    }
    r
}

/// Runs `cfg.trials` trials on `cfg.jobs` threads and writes counterexample
/// files to `cfg.out`. The report does not depend on `jobs`.
pub fn run(cfg: &FuzzConfig) -> CliResult<FuzzReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", cfg.jobs)))?;
    let outcomes: Vec<(u64, TrialOutcome)> = pool.install(|| {
        (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i).map(|o| (i, o))).collect::<Result<Vec<_>>>()
    })?;
    let mut report = tally(cfg, outcomes);
    if let Some(dir) = &cfg.out {
        report.files = write_counterexamples(dir, cfg.seed, &report.counterexamples)?;
    }
    Ok(report)
}

fn write_counterexamples(dir: &Path, seed: u64, items: &[(u64, String)]) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_owned(), source })?;
    items
        .iter()
        .map(|(index, text)| {
            let path = dir.join(format!("counterexample-s{seed}-t{index}.txt"));
            std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(path)
        })
        .collect()
}

/// The report as printed by the command.
pub fn format_report(cfg: &FuzzConfig, r: &FuzzReport) -> String {
    let mut s = crate::commands::header();
    let _ = writeln!(s, "conjecture: three-shape BD exact join");
    let _ = writeln!(s, "seed: {}", cfg.seed);
    let _ = writeln!(s, "max-dim: {}", cfg.max_dim);
    let _ = writeln!(s, "bound: {}", cfg.bound);
    let _ = writeln!(s, "trials: {}", r.trials);
    let _ = writeln!(s, "skipped-empty: {}", r.skipped);
    let _ = writeln!(s, "compared: {}", r.compared());
    let _ = writeln!(s, "agree-exact: {}", r.both_exact);
    let _ = writeln!(s, "agree-inexact: {}", r.both_inexact);
    let _ = writeln!(s, "conjecture-inexact-oracle-exact: {}", r.false_inexact);
    let _ = writeln!(s, "conjecture-exact-oracle-inexact: {}", r.false_exact);
    let _ = writeln!(s, "disagreements: {}", r.disagreements());
    for p in &r.files {
        let _ = writeln!(s, "counterexample-file: {}", p.display());
    }
    if cfg.out.is_none() {
        for (index, _) in &r.counterexamples {
            let _ = writeln!(s, "counterexample-trial: {index}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactjoin::shape::parse_shape;

    fn bds(text: &str) -> BdShape {
        parse_shape(text).unwrap()
    }

    #[test]
    fn one_shape_containing_the_others_is_exact_both_ways() {
        let big = bds("bds { x1 >= 0; x1 <= 4; x2 >= 0; x2 <= 4 }");
        let a = bds("bds { x1 >= 0; x1 <= 1; x2 >= 0; x2 <= 1 }");
        let b = bds("bds { x1 >= 2; x1 <= 3; x2 >= 1; x2 <= 2 }");
        let shapes = [big, a, b];
        assert_eq!(conjecture_witness(&shapes).unwrap(), None);
        assert_eq!(three_way_verdict(&shapes).unwrap(), Verdict::Exact);
    }

    #[test]
    fn three_separated_points_are_inexact() {
        let shapes = [bds("bds { x1 = 0 }"), bds("bds { x1 = 1 }"), bds("bds { x1 = 3 }")];
        assert_eq!(three_way_verdict(&shapes).unwrap(), Verdict::Inexact);
    }

    #[test]
    fn an_empty_shape_skips_the_trial() {
        let shapes = [bds("bds { x1 >= 1; x1 <= 0 }"), bds("bds { x1 = 1 }"), bds("bds { x1 = 3 }")];
        assert_eq!(conjecture_witness(&shapes).unwrap(), None);
    }

    #[test]
    fn trials_do_not_depend_on_job_count() {
        let cfg = FuzzConfig { trials: 40, seed: 7, ..FuzzConfig::default() };
        let one = run(&cfg).unwrap();
        let four = run(&FuzzConfig { jobs: 4, ..cfg }).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.trials, 40);
    }
}
