//! Timing of the detection predicate against the space dimension. Witness
//! construction is not timed.
//!
//! Instances per domain:
//! - boxes: a random non-empty closed box and a copy with its last interval
//!   redrawn, so the detector has to look at every coordinate;
//! - BD shapes and octagons: two random constraint systems; the timed call
//!   builds (closes and reduces) both shapes and runs detection;
//! - polyhedra: two random polyhedra with up to `2n` constraints, built
//!   before timing.

use std::hint::black_box;
use std::time::Instant;

use exactjoin::bd::{BdShape, IntBdShape};
use exactjoin::boxes::{BoxShape, IntInterval, NncInterval, OneDimDomain};
use exactjoin::linear::ConstraintSystem;
use exactjoin::nnc::NncPolyhedron;
use exactjoin::octagon::{IntOctShape, OctShape};
use exactjoin::polyhedra::CPolyhedron;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{Domain, DomainKind};
use crate::error::{CliError, CliResult};
use crate::gen::{bd_constraints, bounded_int_box, oct_constraints, poly_constraints, trial_rng};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub kind: DomainKind,
    pub sizes: Vec<usize>,
    /// Instances per size; the median is reported.
    pub reps: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Minimum wall-clock time per measurement, in nanoseconds; fast calls
    /// are repeated until it is reached.
    pub min_sample_ns: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { kind: DomainKind::Box, sizes: vec![10, 100, 1000], reps: 5, seed: 1, jobs: 1, min_sample_ns: 2_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub median_ns: f64,
    pub reps: usize,
}

type Call = Box<dyn Fn() + Send + Sync>;

fn detect_call<D: Domain>(a: D, b: D) -> Call {
    Box::new(move || {
        black_box(a.join_is_exact(&b).expect("generated shapes share a dimension"));
    })
}

fn build_call<D: Domain>(a: ConstraintSystem, b: ConstraintSystem, build: fn(&ConstraintSystem) -> exactjoin::Result<D>) -> Call {
    Box::new(move || {
        let x = build(&a).expect("generated constraints are in form");
        let y = build(&b).expect("generated constraints are in form");
        black_box(x.join_is_exact(&y).expect("generated shapes share a dimension"));
    })
}

fn redraw_last<D: OneDimDomain>(b: &BoxShape<D>, fresh: &BoxShape<D>) -> BoxShape<D> {
    let mut comps = b.components().to_vec();
    if let Some(last) = comps.last_mut() {
        *last = fresh.components()[0].clone();
    }
    BoxShape::new(comps)
}

fn instance(kind: DomainKind, n: usize, rng: &mut ChaCha8Rng) -> Call {
    match kind {
        DomainKind::Box => {
            let to_nnc = |b: BoxShape<IntInterval>| {
                let comps = b.components().iter().map(|c| {
                    let (lo, hi) = c.bounds().and_then(|(l, h)| l.zip(h)).expect("bounded and non-empty");
                    NncInterval::closed(lo, hi)
                });
                BoxShape::new(comps.collect())
            };
            let a = to_nnc(bounded_int_box(rng, n, -5, 5));
            let b = redraw_last(&a, &to_nnc(bounded_int_box(rng, 1, -5, 5)));
            detect_call(a, b)
        }
        DomainKind::IntBox => {
            let a = bounded_int_box(rng, n, -5, 5);
            let b = redraw_last(&a, &bounded_int_box(rng, 1, -5, 5));
            detect_call(a, b)
        }
        DomainKind::Bds => build_call::<BdShape>(bd_constraints(rng, n, 5, true), bd_constraints(rng, n, 5, true), BdShape::from_constraints),
        DomainKind::IntBds => build_call::<IntBdShape>(
            bd_constraints(rng, n, 5, false),
            bd_constraints(rng, n, 5, false),
            IntBdShape::from_constraints,
        ),
        DomainKind::Oct => build_call::<OctShape>(oct_constraints(rng, n, 5, true), oct_constraints(rng, n, 5, true), OctShape::from_constraints),
        DomainKind::IntOct => build_call::<IntOctShape>(
            oct_constraints(rng, n, 5, false),
            oct_constraints(rng, n, 5, false),
            IntOctShape::from_constraints,
        ),
        DomainKind::CPoly => {
            let mut make = || {
                let cs = poly_constraints(rng, n, 2 * n, 0.0);
                CPolyhedron::from_constraints(&cs).expect("no strict constraints")
            };
            let (a, b) = (make(), make());
            detect_call(a, b)
        }
        DomainKind::NncPoly => {
            let mut make = || NncPolyhedron::from_constraints(&poly_constraints(rng, n, 2 * n, 0.3));
            let (a, b) = (make(), make());
            detect_call(a, b)
        }
    }
}

/// Nanoseconds per call, repeating the call until `min_ns` have passed.
fn time_call(f: &Call, min_ns: u64) -> f64 {
    let mut iters: u64 = 1;
    loop {
        let start = Instant::now();
        for _ in 0..iters {
            f();
        }
        let ns = start.elapsed().as_nanos() as u64;
        if ns >= min_ns || iters >= 1 << 24 {
            return ns as f64 / iters as f64;
        }
        iters = if ns == 0 { iters * 16 } else { (iters * 2).max(iters * min_ns / ns.max(1)) };
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Times detection for every size. Instance `r` of size `n` is drawn from
/// the trial RNG `(seed, n * 2^20 + r)`, so tables only differ in timings.
pub fn run(cfg: &BenchConfig) -> CliResult<Vec<BenchRow>> {
    if cfg.reps == 0 {
        return Err(CliError::Usage("reps must be positive".into()));
    }
    if cfg.sizes.contains(&0) {
        return Err(CliError::Usage("sizes must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", cfg.jobs)))?;
    let rows = cfg
        .sizes
        .iter()
        .map(|&n| {
            let times: Vec<f64> = pool.install(|| {
                (0..cfg.reps)
                    .into_par_iter()
                    .map(|r| {
                        let mut rng = trial_rng(cfg.seed, ((n as u64) << 20) + r as u64);
                        time_call(&instance(cfg.kind, n, &mut rng), cfg.min_sample_ns)
                    })
                    .collect()
            });
            BenchRow { n, median_ns: median(times), reps: cfg.reps }
        })
        .collect();
    Ok(rows)
}

/// `n,median_ns,reps` rows with a header.
pub fn to_csv(kind: DomainKind, rows: &[BenchRow]) -> String {
    let mut s = String::from("domain,n,median_ns,reps\n");
    for r in rows {
        s.push_str(&format!("{kind},{},{:.1},{}\n", r.n, r.median_ns, r.reps));
    }
    s
}

/// Least-squares slope of `log t` against `log n`.
pub fn loglog_slope(rows: &[BenchRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.n as f64).ln(), r.median_ns.max(1e-3).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
