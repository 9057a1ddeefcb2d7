//! Per-domain glue: detection with certified witnesses, oracles and the
//! domain tags used on the command line.

use std::fmt;
use std::str::FromStr;

use exactjoin::bd::{
    build_separating_witness, build_separating_witness_int, detect_exact_join_bd, detect_exact_join_int_bd,
    verify_bd_witness, verify_int_bd_witness, BdShape, IntBdShape,
};
use exactjoin::boxes::{box_witness_point, detect_exact_join_box, verify_box_witness, BoxShape, IntInterval, NncInterval};
use exactjoin::linear::{GeneratorSystem, PointVec};
use exactjoin::nnc::{detect_exact_join_nnc, nnc_witness_point, verify_nnc_witness_point, NncPolyhedron};
use exactjoin::octagon::{
    build_separating_witness_int_oct, build_separating_witness_oct, detect_exact_join_int_oct, detect_exact_join_oct,
    verify_int_oct_witness, verify_oct_witness, IntOctShape, OctShape,
};
use exactjoin::oracle::{
    self, bd_extent, box_bbox, box_grid_oracle, complement_inclusion, int_box_as_half_open, integral_bbox, oct_extent,
    snap_outwards, BBox, Polyhedral,
};
use exactjoin::polyhedra::{closed_witness_point, detect_exact_join_closed, verify_closed_witness_point, CPolyhedron};
use exactjoin::powerset::Disjunct;
use exactjoin::shape::{write_shape, TextShape};
use exactjoin::{Decision, Error, Rational, Result, Verdict};

/// The domains selectable with `--domain`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DomainKind {
    Box,
    IntBox,
    Bds,
    IntBds,
    Oct,
    IntOct,
    CPoly,
    NncPoly,
}

impl DomainKind {
    pub const ALL: [DomainKind; 8] = [
        DomainKind::Box,
        DomainKind::IntBox,
        DomainKind::Bds,
        DomainKind::IntBds,
        DomainKind::Oct,
        DomainKind::IntOct,
        DomainKind::CPoly,
        DomainKind::NncPoly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Box => "box",
            DomainKind::IntBox => "int_box",
            DomainKind::Bds => "bds",
            DomainKind::IntBds => "int_bds",
            DomainKind::Oct => "oct",
            DomainKind::IntOct => "int_oct",
            DomainKind::CPoly => "cpoly",
            DomainKind::NncPoly => "nncpoly",
        }
    }

    /// The domain a shape keyword belongs to.
    pub fn from_keyword(kw: &str) -> Option<Self> {
        match kw {
            "cpoly_gen" => Some(DomainKind::CPoly),
            "nncpoly_gen" => Some(DomainKind::NncPoly),
            _ => Self::ALL.into_iter().find(|d| d.name() == kw),
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::from_keyword(s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|d| d.name()).collect();
            format!("unknown domain `{s}`; expected one of {}", names.join(", "))
        })
    }
}

/// Runs `$body` with `$t` bound to the shape type of `$kind`.
#[macro_export]
macro_rules! with_domain {
    ($kind:expr, $t:ident => $body:expr) => {{
        use $crate::domain::DomainKind as K;
        match $kind {
            K::Box => {
                type $t = exactjoin::boxes::BoxShape<exactjoin::boxes::NncInterval>;
                $body
            }
            K::IntBox => {
                type $t = exactjoin::boxes::BoxShape<exactjoin::boxes::IntInterval>;
                $body
            }
            K::Bds => {
                type $t = exactjoin::bd::BdShape;
                $body
            }
            K::IntBds => {
                type $t = exactjoin::bd::IntBdShape;
                $body
            }
            K::Oct => {
                type $t = exactjoin::octagon::OctShape;
                $body
            }
            K::IntOct => {
                type $t = exactjoin::octagon::IntOctShape;
                $body
            }
            K::CPoly => {
                type $t = exactjoin::polyhedra::CPolyhedron;
                $body
            }
            K::NncPoly => {
                type $t = exactjoin::nnc::NncPolyhedron;
                $body
            }
        }
    }};
}

/// Outcome of exact-join detection with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct JoinReport {
    pub verdict: Verdict,
    /// The condition and indices (or constraint and generator) that fired.
    pub witness: Option<String>,
    /// A separating shape, in text form, for the weakly relational domains.
    pub separating_shape: Option<String>,
    /// A point of the join outside both inputs.
    pub point: Option<PointVec>,
    /// Whether the certificate passed its checker; `true` for exact verdicts.
    pub verified: bool,
}

impl JoinReport {
    fn exact() -> Self {
        JoinReport { verdict: Verdict::Exact, witness: None, separating_shape: None, point: None, verified: true }
    }
}

/// The two independent oracles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleMode {
    Grid,
    Complement,
}

impl FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "grid" => Ok(OracleMode::Grid),
            "complement" | "complement-inclusion" => Ok(OracleMode::Complement),
            _ => Err(format!("unknown oracle `{s}`; expected grid or complement")),
        }
    }
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::Grid => "grid",
            OracleMode::Complement => "complement-inclusion",
        })
    }
}

/// Whether a verdict from the oracle settles the question both ways.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strength {
    /// Both verdicts are reliable.
    Exact,
    /// Only `inexact` is reliable: the grid may miss the gap.
    Falsifier,
}

/// A verdict of an oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleOutcome {
    pub mode: OracleMode,
    pub verdict: Verdict,
    pub point: Option<PointVec>,
    pub strength: Strength,
    /// The lattice searched, for grid runs.
    pub grid: Option<(BBox, Rational)>,
}

/// A shape type usable by every command.
pub trait Domain: TextShape + Disjunct + fmt::Debug + Send + Sync + 'static {
    const KIND: DomainKind;
    /// Whether shapes denote sets of integer points.
    const INTEGRAL: bool;

    /// Runs the detection predicate and certifies an inexact verdict.
    fn detect(a: &Self, b: &Self) -> Result<JoinReport>;

    /// The inputs as NNC polyhedra with the same exactness behaviour, when
    /// such an encoding exists.
    fn polyhedral_pair(a: &Self, b: &Self) -> Option<(NncPolyhedron, NncPolyhedron)>;

    /// A box covering the join; an error when it is unbounded.
    fn extent(a: &Self, b: &Self) -> Result<BBox>;

    /// Grid search over `bbox` at `step`.
    fn grid(a: &Self, b: &Self, bbox: BBox, step: &Rational) -> Result<Decision<PointVec>> {
        let join = a.join(b)?;
        Ok(oracle::grid_oracle(bbox, step.clone(), |p| join.contains(p), |p| a.contains(p), |p| b.contains(p)))
    }

    /// Whether a grid search at `step` over the whole join settles both
    /// verdicts: integer shapes at step 1.
    fn grid_decides(_a: &Self, _b: &Self, step: &Rational) -> bool {
        Self::INTEGRAL && *step == Rational::one()
    }

    /// The oracle a command uses when none is named.
    fn default_oracle() -> OracleMode {
        if Self::INTEGRAL && !matches!(Self::KIND, DomainKind::IntBox) {
            OracleMode::Grid
        } else {
            OracleMode::Complement
        }
    }

    /// Runs an oracle. `bbox` and `step` only matter for the grid; by
    /// default the step is 1 for integer domains and ½ otherwise, and the
    /// box is [`Domain::extent`] snapped to the lattice.
    fn oracle(a: &Self, b: &Self, mode: OracleMode, step: Option<Rational>, bbox: Option<BBox>) -> Result<OracleOutcome> {
        match mode {
            OracleMode::Complement => {
                let (pa, pb) = Self::polyhedral_pair(a, b).ok_or_else(|| Error::InvalidWitness(format!(
                    "complement inclusion does not apply to domain {}",
                    Self::KIND
                )))?;
                let d = complement_inclusion(&pa, &pb)?;
                Ok(OracleOutcome {
                    mode,
                    verdict: d.verdict(),
                    point: d.witness().cloned(),
                    strength: Strength::Exact,
                    grid: None,
                })
            }
            OracleMode::Grid => {
                let step = step.unwrap_or_else(|| if Self::INTEGRAL { Rational::one() } else { Rational::new(1, 2) });
                let user_bbox = bbox.clone();
                let bbox = match bbox {
                    Some(b) => b,
                    None if Self::INTEGRAL => integral_bbox(Self::extent(a, b)?),
                    None => snap_outwards(Self::extent(a, b)?, &step),
                };
                let d = Self::grid(a, b, bbox.clone(), &step)?;
                let strength = if user_bbox.is_none() && Self::grid_decides(a, b, &step) {
                    Strength::Exact
                } else {
                    Strength::Falsifier
                };
                Ok(OracleOutcome { mode, verdict: d.verdict(), point: d.witness().cloned(), strength, grid: Some((bbox, step)) })
            }
        }
    }
}

// The lattice of step `s` meets every cell of the bound arrangement when all
// finite bounds are multiples of `2s`.
fn bounds_on_lattice(boxes: [&BoxShape<NncInterval>; 2], step: &Rational) -> bool {
    let two_s = step + step;
    boxes
        .iter()
        .flat_map(|b| b.components())
        .flat_map(|c| [c.lower(), c.upper()])
        .flatten()
        .filter_map(|b| b.value())
        .all(|v| (v / &two_s).is_integer())
}

fn point_report(verdict: Verdict, witness: String, point: Option<PointVec>, verified: bool) -> JoinReport {
    JoinReport { verdict, witness: Some(witness), separating_shape: None, point, verified }
}

fn polytope_extent(gs: &GeneratorSystem) -> Result<BBox> {
    if gs.rays().next().is_some() {
        return Err(Error::Unbounded);
    }
    let n = gs.dim();
    let mut out: BBox = Vec::with_capacity(n);
    for k in 0..n {
        let vals: Vec<&Rational> = gs.iter().map(|g| &g.coords()[k]).collect();
        match (vals.iter().min(), vals.iter().max()) {
            (Some(lo), Some(hi)) => out.push(((*lo).clone(), (*hi).clone())),
            _ => out.push((Rational::one(), Rational::zero())),
        }
    }
    Ok(out)
}

impl Domain for BoxShape<NncInterval> {
    const KIND: DomainKind = DomainKind::Box;
    const INTEGRAL: bool = false;

    fn detect(a: &Self, b: &Self) -> Result<JoinReport> {
        Ok(match detect_exact_join_box(a, b)? {
            Decision::Exact => JoinReport::exact(),
            Decision::Inexact(w) => {
                let p = box_witness_point(a, b, &w);
                let ok = p.as_ref().is_some_and(|p| verify_box_witness(a, b, p));
                point_report(Verdict::Inexact, w.to_string(), p, ok)
            }
        })
    }

    fn polyhedral_pair(a: &Self, b: &Self) -> Option<(NncPolyhedron, NncPolyhedron)> {
        Some((a.to_nnc(), b.to_nnc()))
    }

    fn extent(a: &Self, b: &Self) -> Result<BBox> {
        Ok(box_bbox(a, b))
    }

    fn grid_decides(a: &Self, b: &Self, step: &Rational) -> bool {
        bounds_on_lattice([a, b], step)
    }

    fn grid(a: &Self, b: &Self, bbox: BBox, step: &Rational) -> Result<Decision<PointVec>> {
        box_grid_oracle(a, b, bbox, step)
    }
}

impl Domain for BoxShape<IntInterval> {
    const KIND: DomainKind = DomainKind::IntBox;
    const INTEGRAL: bool = true;

    fn detect(a: &Self, b: &Self) -> Result<JoinReport> {
        Ok(match detect_exact_join_box(a, b)? {
            Decision::Exact => JoinReport::exact(),
            Decision::Inexact(w) => {
                let p = box_witness_point(a, b, &w);
                let ok = p.as_ref().is_some_and(|p| verify_box_witness(a, b, p));
                point_report(Verdict::Inexact, w.to_string(), p, ok)
            }
        })
    }

    fn polyhedral_pair(a: &Self, b: &Self) -> Option<(NncPolyhedron, NncPolyhedron)> {
        Some((int_box_as_half_open(a).to_nnc(), int_box_as_half_open(b).to_nnc()))
    }

    fn extent(a: &Self, b: &Self) -> Result<BBox> {
        Ok(box_bbox(&int_box_as_half_open(a), &int_box_as_half_open(b)))
    }

    fn grid(a: &Self, b: &Self, bbox: BBox, step: &Rational) -> Result<Decision<PointVec>> {
        box_grid_oracle(a, b, bbox, step)
    }
}

macro_rules! weakly_relational {
    ($ty:ty, $kind:expr, $integral:expr, $detect:path, $build:path, $verify:path, $extent:expr, $poly:expr) => {
        impl Domain for $ty {
            const KIND: DomainKind = $kind;
            const INTEGRAL: bool = $integral;

            fn detect(a: &Self, b: &Self) -> Result<JoinReport> {
                Ok(match $detect(a, b)? {
                    Decision::Exact => JoinReport::exact(),
                    Decision::Inexact(t) => {
                        let w = $build(a, b, t)?;
                        let verified = $verify(a, b, &w);
                        JoinReport {
                            verdict: Verdict::Inexact,
                            witness: Some(t.to_string()),
                            separating_shape: Some(write_shape(&w)),
                            point: w.some_point(),
                            verified,
                        }
                    }
                })
            }

            fn polyhedral_pair(a: &Self, b: &Self) -> Option<(NncPolyhedron, NncPolyhedron)> {
                let poly: fn(&Self) -> Option<NncPolyhedron> = $poly;
                Some((poly(a)?, poly(b)?))
            }

            fn extent(a: &Self, b: &Self) -> Result<BBox> {
                let extent: fn(&Self) -> Result<BBox> = $extent;
                extent(&a.join(b)?)
            }
        }
    };
}

weakly_relational!(
    BdShape,
    DomainKind::Bds,
    false,
    detect_exact_join_bd,
    build_separating_witness,
    verify_bd_witness,
    bd_extent,
    |s| Some(s.to_nnc())
);
weakly_relational!(
    IntBdShape,
    DomainKind::IntBds,
    true,
    detect_exact_join_int_bd,
    build_separating_witness_int,
    verify_int_bd_witness,
    |s| bd_extent(s.as_rational()),
    |_| None
);
weakly_relational!(
    OctShape,
    DomainKind::Oct,
    false,
    detect_exact_join_oct,
    build_separating_witness_oct,
    verify_oct_witness,
    |s| oct_extent(s.closed(), s.dim()),
    |s| Some(s.to_nnc())
);
weakly_relational!(
    IntOctShape,
    DomainKind::IntOct,
    true,
    detect_exact_join_int_oct,
    build_separating_witness_int_oct,
    verify_int_oct_witness,
    |s| oct_extent(s.closed(), s.dim()),
    |_| None
);

impl Domain for CPolyhedron {
    const KIND: DomainKind = DomainKind::CPoly;
    const INTEGRAL: bool = false;

    fn detect(a: &Self, b: &Self) -> Result<JoinReport> {
        Ok(match detect_exact_join_closed(a, b)? {
            Decision::Exact => JoinReport::exact(),
            Decision::Inexact(w) => {
                let p = closed_witness_point(a, b, &w)?;
                let ok = verify_closed_witness_point(a, b, &p);
                point_report(Verdict::Inexact, w.to_string(), Some(p), ok)
            }
        })
    }

    fn polyhedral_pair(a: &Self, b: &Self) -> Option<(NncPolyhedron, NncPolyhedron)> {
        Some((a.to_nnc(), b.to_nnc()))
    }

    fn extent(a: &Self, b: &Self) -> Result<BBox> {
        polytope_extent(a.join(b)?.generators())
    }
}

impl Domain for NncPolyhedron {
    const KIND: DomainKind = DomainKind::NncPoly;
    const INTEGRAL: bool = false;

    fn detect(a: &Self, b: &Self) -> Result<JoinReport> {
        Ok(match detect_exact_join_nnc(a, b)? {
            Decision::Exact => JoinReport::exact(),
            Decision::Inexact(w) => {
                let p = nnc_witness_point(a, b, &w)?;
                let ok = verify_nnc_witness_point(a, b, &p);
                point_report(Verdict::Inexact, w.to_string(), Some(p), ok)
            }
        })
    }

    fn polyhedral_pair(a: &Self, b: &Self) -> Option<(NncPolyhedron, NncPolyhedron)> {
        Some((a.clone(), b.clone()))
    }

    fn extent(a: &Self, b: &Self) -> Result<BBox> {
        polytope_extent(a.join(b)?.generators())
    }
}

/// `(a, b, c)` in the usual text form.
pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(", "))
}

/// `[lo, hi] x [lo, hi]`.
pub fn format_bbox(b: &BBox) -> String {
    let parts: Vec<String> = b.iter().map(|(lo, hi)| format!("[{lo}, {hi}]")).collect();
    parts.join(" x ")
}

/// Parses `lo:hi` for every dimension, or a comma-separated list of them.
pub fn parse_bbox(text: &str, dim: usize) -> std::result::Result<BBox, String> {
    let parse_range = |r: &str| -> std::result::Result<(Rational, Rational), String> {
        let (lo, hi) = r.split_once(':').ok_or_else(|| format!("expected `lo:hi`, found `{r}`"))?;
        let lo: Rational = lo.trim().parse().map_err(|_| format!("invalid bound `{lo}`"))?;
        let hi: Rational = hi.trim().parse().map_err(|_| format!("invalid bound `{hi}`"))?;
        Ok((lo, hi))
    };
    let ranges: Vec<_> = text.split(',').map(parse_range).collect::<std::result::Result<_, _>>()?;
    match ranges.len() {
        1 => Ok(vec![ranges[0].clone(); dim]),
        n if n == dim => Ok(ranges),
        n => Err(format!("bounding box has {n} ranges for dimension {dim}")),
    }
}
