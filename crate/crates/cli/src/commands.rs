//! The `exact-join`, `oracle`, `merge` and `convert` commands.
//!
//! Each command returns its stdout text and exit code instead of printing,
//! so tests can drive them without a process.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use exactjoin::linear::GeneratorSystem;
use exactjoin::nnc::NncPolyhedron;
use exactjoin::parse::{tokenize, Tok};
use exactjoin::polyhedra::CPolyhedron;
use exactjoin::powerset::{MergeError, MergeStats, Powerset};
use exactjoin::shape::{parse_powerset, parse_shape, write_powerset, write_shape};
use exactjoin::{Rational, Verdict};

use crate::domain::{format_bbox, format_point, parse_bbox, Domain, DomainKind, JoinReport, OracleMode, Strength};
use crate::error::{CliError, CliResult, EXIT_EXACT, EXIT_INEXACT, EXIT_OTHER};

/// The stdout format version; `EXACTJOIN_FORMAT_VERSION` may pin it.
pub const FORMAT_VERSION: &str = "v1";

/// Text printed to stdout and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// Starts a report with the version header.
pub fn header() -> String {
    format!("format: {FORMAT_VERSION}\n")
}

/// Fails unless a pinned format version is one this build writes.
pub fn check_format_version(pinned: Option<&str>) -> CliResult<()> {
    match pinned {
        None => Ok(()),
        Some(v) if v.trim() == FORMAT_VERSION || v.trim() == "1" => Ok(()),
        Some(v) => Err(CliError::Usage(format!(
            "EXACTJOIN_FORMAT_VERSION={v} is not supported; this build writes {FORMAT_VERSION}"
        ))),
    }
}

pub fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn load_shape<D: Domain>(path: &Path) -> CliResult<D> {
    let text = read_input(path)?;
    parse_shape(&text).map_err(|source| CliError::Input { path: path.to_owned(), source })
}

pub fn load_powerset<D: Domain>(path: &Path) -> CliResult<Powerset<D>> {
    let text = read_input(path)?;
    parse_powerset(&text).map_err(|source| CliError::Input { path: path.to_owned(), source })
}

/// The domain named by the first shape keyword of a file, looking inside
/// powersets.
pub fn infer_domain(path: &Path) -> CliResult<DomainKind> {
    let text = read_input(path)?;
    let toks = tokenize(&text).map_err(|source| CliError::Input { path: path.to_owned(), source })?;
    let kw = toks.into_iter().find_map(|(_, t)| match t {
        Tok::Ident(s) if s != "powerset" => Some(s),
        _ => None,
    });
    let kw = kw.ok_or_else(|| CliError::Usage(format!("{}: no shape keyword; pass --domain", path.display())))?;
    DomainKind::from_keyword(&kw)
        .ok_or_else(|| CliError::Usage(format!("{}: unknown shape kind `{kw}`; pass --domain", path.display())))
}

fn write_report(out: &mut String, r: &JoinReport) {
    let _ = writeln!(out, "verdict: {}", r.verdict);
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "witness: {w}");
    }
    if let Some(s) = &r.separating_shape {
        let _ = writeln!(out, "separating: {s}");
    }
    if let Some(p) = &r.point {
        let _ = writeln!(out, "point: {}", format_point(p));
    }
    if r.verdict == Verdict::Inexact {
        let _ = writeln!(out, "verified: {}", if r.verified { "yes" } else { "no" });
    }
}

/// Detection with a verified certificate; an unverified inexact verdict is
/// an error.
pub fn certified<D: Domain>(a: &D, b: &D) -> CliResult<JoinReport> {
    let r = D::detect(a, b)?;
    if r.verdict == Verdict::Inexact && !r.verified {
        return Err(CliError::Unverified(r.witness.unwrap_or_default()));
    }
    Ok(r)
}

/// `exact-join`: exit 0 when exact, 1 when inexact.
pub fn exact_join<D: Domain>(a: &Path, b: &Path) -> CliResult<Outcome> {
    let (x, y) = (load_shape::<D>(a)?, load_shape::<D>(b)?);
    let r = certified(&x, &y)?;
    let mut out = header();
    let _ = writeln!(out, "domain: {}", D::KIND);
    write_report(&mut out, &r);
    let code = if r.verdict == Verdict::Exact { EXIT_EXACT } else { EXIT_INEXACT };
    Ok(Outcome { stdout: out, code })
}

/// Options of the `oracle` command.
#[derive(Clone, Debug, Default)]
pub struct OracleOptions {
    pub mode: Option<OracleMode>,
    pub step: Option<Rational>,
    /// `lo:hi` for every axis or one range per axis, comma separated.
    pub bbox: Option<String>,
}

/// `oracle`: runs detection and an oracle; exit 0 unless they disagree.
pub fn oracle<D: Domain>(a: &Path, b: &Path, opts: &OracleOptions) -> CliResult<Outcome> {
    let (x, y) = (load_shape::<D>(a)?, load_shape::<D>(b)?);
    let bbox = opts.bbox.as_deref().map(|t| parse_bbox(t, x.space_dim())).transpose().map_err(CliError::Usage)?;
    if let Some(s) = &opts.step {
        if !s.is_positive() {
            return Err(CliError::Usage(format!("step must be positive, got {s}")));
        }
    }
    let started = Instant::now();
    let r = certified(&x, &y)?;
    let mode = opts.mode.unwrap_or_else(D::default_oracle);
    let o = D::oracle(&x, &y, mode, opts.step.clone(), bbox)?;
    let elapsed = started.elapsed();

    let agreement = if o.verdict == r.verdict {
        "yes"
    } else if o.strength == Strength::Falsifier && o.verdict == Verdict::Exact {
        "inconclusive"
    } else {
        "no"
    };
    let mut out = header();
    let _ = writeln!(out, "domain: {}", D::KIND);
    let _ = writeln!(out, "theorem: {}", r.verdict);
    let _ = writeln!(out, "oracle: {mode}");
    if let Some((bbox, step)) = &o.grid {
        let _ = writeln!(out, "grid: step {step} over {}", format_bbox(bbox));
    }
    let _ = writeln!(out, "oracle-verdict: {}", o.verdict);
    if let Some(p) = &o.point {
        let _ = writeln!(out, "oracle-point: {}", format_point(p));
    }
    let _ = writeln!(out, "agreement: {agreement}");
    let _ = writeln!(out, "time-ms: {:.3}", elapsed.as_secs_f64() * 1e3);
    let code = if agreement == "no" { EXIT_INEXACT } else { EXIT_EXACT };
    Ok(Outcome { stdout: out, code })
}

/// How `merge` combines disjuncts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeMode {
    Pairwise,
    Full,
}

impl std::str::FromStr for MergeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pairwise" => Ok(MergeMode::Pairwise),
            "full" => Ok(MergeMode::Full),
            _ => Err(format!("unknown merge mode `{s}`; expected pairwise or full")),
        }
    }
}

fn write_stats(out: &mut String, s: &MergeStats) {
    let _ = writeln!(out, "disjuncts-before: {}", s.before);
    let _ = writeln!(out, "disjuncts-after: {}", s.after);
    let _ = writeln!(out, "detection-calls: {}", s.detection_calls);
    let _ = writeln!(out, "subset-checks: {}", s.subset_checks);
}

/// `merge`: prints the merged powerset and counters. A full merge stopped
/// by the size cap still exits 0 and prints `complete: no`.
pub fn merge<D: Domain>(path: &Path, mode: MergeMode, size_cap: usize) -> CliResult<Outcome> {
    let q = load_powerset::<D>(path)?;
    let (merged, stats, complete) = match mode {
        MergeMode::Pairwise => {
            let (m, s) = q.pairwise_merge()?;
            (m, s, true)
        }
        MergeMode::Full => match q.full_merge(size_cap) {
            Ok((m, s)) => (m, s, true),
            Err(MergeError::SizeCapExceeded { partial, stats, .. }) => (partial, stats, false),
            Err(MergeError::Domain(e)) => return Err(e.into()),
        },
    };
    let mut out = header();
    let _ = writeln!(out, "domain: {}", D::KIND);
    let _ = writeln!(out, "mode: {}", if mode == MergeMode::Full { "full" } else { "pairwise" });
    let _ = writeln!(out, "result: {}", write_powerset(&merged));
    write_stats(&mut out, &stats);
    if mode == MergeMode::Full {
        let _ = writeln!(out, "complete: {}", if complete { "yes" } else { "no" });
        if !complete {
            let _ = writeln!(out, "size-cap: {size_cap}");
        }
    }
    Ok(Outcome { stdout: out, code: EXIT_EXACT })
}

fn generator_text(keyword: &str, gs: &GeneratorSystem) -> String {
    let parts: Vec<String> = gs.iter().map(ToString::to_string).collect();
    if parts.is_empty() {
        format!("{keyword}({}) {{ }}", gs.dim())
    } else {
        format!("{keyword}({}) {{ {} }}", gs.dim(), parts.join("; "))
    }
}

fn round_trip_report(constraints: String, generators: String, ok: bool) -> Outcome {
    let mut out = header();
    let _ = writeln!(out, "constraints: {constraints}");
    let _ = writeln!(out, "generators: {generators}");
    let _ = writeln!(out, "round-trip: {}", if ok { "ok" } else { "mismatch" });
    Outcome { stdout: out, code: if ok { EXIT_EXACT } else { EXIT_OTHER } }
}

/// `convert`: prints the canonical text form; for polyhedra prints both
/// descriptions and checks that each converts back to the same set.
pub fn convert(kind: DomainKind, path: &Path) -> CliResult<Outcome> {
    match kind {
        DomainKind::CPoly => {
            let p = load_shape::<CPolyhedron>(path)?;
            let from_cs = CPolyhedron::from_constraints(p.constraints())?;
            let from_gs = CPolyhedron::from_generators(p.generators())?;
            let ok = from_cs == p && from_gs == p;
            Ok(round_trip_report(write_shape(&p), generator_text("cpoly_gen", p.generators()), ok))
        }
        DomainKind::NncPoly => {
            let p = load_shape::<NncPolyhedron>(path)?;
            let from_cs = NncPolyhedron::from_constraints(p.constraints());
            let from_gs = NncPolyhedron::from_generators(p.generators())?;
            let ok = from_cs == p && from_gs == p;
            Ok(round_trip_report(write_shape(&p), generator_text("nncpoly_gen", p.generators()), ok))
        }
        other => crate::with_domain!(other, T => {
            let s = load_shape::<T>(path)?;
            let mut out = header();
            let _ = writeln!(out, "shape: {}", write_shape(&s));
            Ok(Outcome { stdout: out, code: EXIT_EXACT })
        }),
    }
}
