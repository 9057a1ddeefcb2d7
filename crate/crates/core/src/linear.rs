//! Linear expressions, constraints and generators over ℚⁿ.
//!
//! Dimensions are counted from 1 in text (`x1`, `x2`, ...) and from 0 in
//! vectors.

use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::rational::Rational;

pub type PointVec = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn point_from_ints(v: &[i64]) -> PointVec {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

/// Divides by the absolute value of the first nonzero entry.
fn normalize_leading(v: &mut [Rational]) -> Option<Rational> {
    let lead = v.iter().find(|c| !c.is_zero())?.abs();
    if lead != Rational::one() {
        for c in v.iter_mut() {
            *c = &*c / &lead;
        }
    }
    Some(lead)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearExpr {
    coeffs: Vec<Rational>,
}

impl LinearExpr {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearExpr { coeffs }
    }

    pub fn zeros(dim: usize) -> Self {
        LinearExpr { coeffs: vec![Rational::zero(); dim] }
    }

    /// The expression `x_{index+1}` in a space of dimension `dim`.
    pub fn var(dim: usize, index: usize) -> Self {
        let mut e = Self::zeros(dim);
        e.coeffs[index] = Rational::one();
        e
    }

    pub fn from_ints(v: &[i64]) -> Self {
        LinearExpr { coeffs: point_from_ints(v) }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> &Rational {
        &self.coeffs[index]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn eval(&self, p: &[Rational]) -> Rational {
        dot(&self.coeffs, p)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        LinearExpr { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn embed(&self, dim: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim.max(coeffs.len()), Rational::zero());
        LinearExpr { coeffs }
    }
}

impl std::ops::Neg for &LinearExpr {
    type Output = LinearExpr;
    fn neg(self) -> LinearExpr {
        LinearExpr { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for LinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mag != Rational::one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
        }
    }
}

/// A normalized linear constraint `⟨a, x⟩ ⋈ b`.
///
/// The expression is scaled so that its first nonzero coefficient has
/// absolute value 1; equalities are further sign-flipped so that it is +1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    expr: LinearExpr,
    rel: Relation,
    bound: Rational,
}

impl Constraint {
    pub fn new(expr: LinearExpr, rel: Relation, bound: Rational) -> Result<Self> {
        let mut coeffs = expr.coeffs;
        let lead = normalize_leading(&mut coeffs).ok_or(Error::ZeroExpression)?;
        let mut bound = &bound / &lead;
        if rel == Relation::Eq && coeffs.iter().find(|c| !c.is_zero()).is_some_and(Rational::is_negative) {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
            bound = -bound;
        }
        Ok(Constraint { expr: LinearExpr { coeffs }, rel, bound })
    }

    pub fn le(expr: LinearExpr, bound: Rational) -> Result<Self> {
        Self::new(expr, Relation::Le, bound)
    }

    pub fn lt(expr: LinearExpr, bound: Rational) -> Result<Self> {
        Self::new(expr, Relation::Lt, bound)
    }

    pub fn eq(expr: LinearExpr, bound: Rational) -> Result<Self> {
        Self::new(expr, Relation::Eq, bound)
    }

    /// `⟨a,x⟩ ≥ b`, stored as `⟨-a,x⟩ ≤ -b`.
    pub fn ge(expr: LinearExpr, bound: Rational) -> Result<Self> {
        Self::new(-&expr, Relation::Le, -bound)
    }

    /// `⟨a,x⟩ > b`, stored as `⟨-a,x⟩ < -b`.
    pub fn gt(expr: LinearExpr, bound: Rational) -> Result<Self> {
        Self::new(-&expr, Relation::Lt, -bound)
    }

    pub fn expr(&self) -> &LinearExpr {
        &self.expr
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.expr.coeffs
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn dim(&self) -> usize {
        self.expr.dim()
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Relation::Lt
    }

    pub fn is_equality(&self) -> bool {
        self.rel == Relation::Eq
    }

    /// Equalities become the two opposite non-strict inequalities.
    pub fn expand(&self) -> Vec<Constraint> {
        match self.rel {
            Relation::Eq => vec![
                Constraint { expr: self.expr.clone(), rel: Relation::Le, bound: self.bound.clone() },
                Constraint { expr: -&self.expr, rel: Relation::Le, bound: -&self.bound },
            ],
            _ => vec![self.clone()],
        }
    }

    /// The complement half-space of an inequality. Panics on equalities.
    pub fn negate(&self) -> Constraint {
        let rel = match self.rel {
            Relation::Le => Relation::Lt,
            Relation::Lt => Relation::Le,
            Relation::Eq => panic!("cannot negate an equality"),
        };
        Constraint { expr: -&self.expr, rel, bound: -&self.bound }
    }

    /// The same constraint with `<` relaxed to `≤`.
    pub fn weaken(&self) -> Constraint {
        let rel = if self.rel == Relation::Lt { Relation::Le } else { self.rel };
        Constraint { expr: self.expr.clone(), rel, bound: self.bound.clone() }
    }

    /// The boundary hyperplane `⟨a,x⟩ = b`.
    pub fn hyperplane(&self) -> Constraint {
        Constraint::new(self.expr.clone(), Relation::Eq, self.bound.clone())
            .expect("normalized constraint has a nonzero expression")
    }

    pub fn embed(&self, dim: usize) -> Constraint {
        Constraint { expr: self.expr.embed(dim), rel: self.rel, bound: self.bound.clone() }
    }

    /// Whether `p` satisfies the constraint (dimension checked by the caller).
    pub fn holds_at(&self, p: &[Rational]) -> bool {
        let v = self.expr.eval(p);
        match self.rel {
            Relation::Le => v <= self.bound,
            Relation::Lt => v < self.bound,
            Relation::Eq => v == self.bound,
        }
    }

    /// Whether `r` is a direction of recession of the closed half-space.
    pub fn admits_ray(&self, r: &[Rational]) -> bool {
        let v = self.expr.eval(r);
        match self.rel {
            Relation::Eq => v.is_zero(),
            _ => !v.is_positive(),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.expr, self.rel.symbol(), self.bound)
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A duplicate-free list of constraints of one space dimension.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ConstraintSystem {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn new(dim: usize) -> Self {
        ConstraintSystem { dim, constraints: Vec::new() }
    }

    pub fn from_vec(dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        let mut cs = Self::new(dim);
        for c in constraints {
            cs.insert(c)?;
        }
        Ok(cs)
    }

    pub fn insert(&mut self, c: Constraint) -> Result<()> {
        check_dim(self.dim, c.dim())?;
        if !self.constraints.contains(&c) {
            self.constraints.push(c);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Constraint> {
        self.constraints.iter()
    }

    pub fn as_slice(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Every equality replaced by its two inequalities.
    pub fn expanded(&self) -> Vec<Constraint> {
        self.constraints.iter().flat_map(Constraint::expand).collect()
    }

    pub fn satisfied_by(&self, p: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(p))
    }

    /// A canonical unsatisfiable system: `x1 ≤ -1, -x1 ≤ 0`.
    pub fn unsatisfiable(dim: usize) -> Self {
        assert!(dim >= 1, "an unsatisfiable system needs a dimension");
        let x1 = LinearExpr::var(dim, 0);
        let cs = vec![
            Constraint::le(x1.clone(), Rational::from_int(-1)).expect("nonzero"),
            Constraint::le(-&x1, Rational::zero()).expect("nonzero"),
        ];
        ConstraintSystem { dim, constraints: cs }
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(Constraint::is_strict)
    }

    pub fn embed(&self, dim: usize) -> ConstraintSystem {
        ConstraintSystem {
            dim: dim.max(self.dim),
            constraints: self.constraints.iter().map(|c| c.embed(dim)).collect(),
        }
    }

    pub fn sorted(mut self) -> Self {
        self.constraints.sort();
        self
    }
}

impl<'a> IntoIterator for &'a ConstraintSystem {
    type Item = &'a Constraint;
    type IntoIter = std::slice::Iter<'a, Constraint>;
    fn into_iter(self) -> Self::IntoIter {
        self.constraints.iter()
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.constraints.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, " {c}")?;
        }
        f.write_str(" }")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GenKind {
    Point,
    ClosurePoint,
    Ray,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    kind: GenKind,
    coords: PointVec,
}

impl Generator {
    pub fn point(coords: PointVec) -> Self {
        Generator { kind: GenKind::Point, coords }
    }

    pub fn closure_point(coords: PointVec) -> Self {
        Generator { kind: GenKind::ClosurePoint, coords }
    }

    /// A ray, canonicalized up to positive scaling.
    pub fn ray(mut coords: PointVec) -> Result<Self> {
        normalize_leading(&mut coords).ok_or(Error::ZeroRay)?;
        Ok(Generator { kind: GenKind::Ray, coords })
    }

    pub fn kind(&self) -> GenKind {
        self.kind
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_ray(&self) -> bool {
        self.kind == GenKind::Ray
    }

    pub fn embed(&self, dim: usize) -> Generator {
        let mut coords = self.coords.clone();
        coords.resize(dim.max(coords.len()), Rational::zero());
        Generator { kind: self.kind, coords }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GenKind::Point => "point",
            GenKind::ClosurePoint => "closure_point",
            GenKind::Ray => "ray",
        };
        write!(f, "{name}(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A duplicate-free list of generators of one space dimension, kept sorted
/// (points, closure points, rays).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GeneratorSystem {
    dim: usize,
    gens: Vec<Generator>,
}

impl GeneratorSystem {
    pub fn new(dim: usize) -> Self {
        GeneratorSystem { dim, gens: Vec::new() }
    }

    pub fn from_vec(dim: usize, gens: Vec<Generator>) -> Result<Self> {
        let mut gs = Self::new(dim);
        for g in gens {
            gs.insert(g)?;
        }
        Ok(gs)
    }

    pub fn insert(&mut self, g: Generator) -> Result<()> {
        check_dim(self.dim, g.dim())?;
        if let Err(pos) = self.gens.binary_search(&g) {
            self.gens.insert(pos, g);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Generator> {
        self.gens.iter()
    }

    pub fn as_slice(&self) -> &[Generator] {
        &self.gens
    }

    pub fn of_kind(&self, kind: GenKind) -> impl Iterator<Item = &Generator> + '_ {
        self.gens.iter().filter(move |g| g.kind == kind)
    }

    pub fn points(&self) -> impl Iterator<Item = &Generator> + '_ {
        self.of_kind(GenKind::Point)
    }

    pub fn closure_points(&self) -> impl Iterator<Item = &Generator> + '_ {
        self.of_kind(GenKind::ClosurePoint)
    }

    pub fn rays(&self) -> impl Iterator<Item = &Generator> + '_ {
        self.of_kind(GenKind::Ray)
    }

    pub fn has_point(&self) -> bool {
        self.points().next().is_some()
    }

    /// Union of two systems.
    pub fn union(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for g in &other.gens {
            out.insert(g.clone())?;
        }
        Ok(out)
    }

    /// Closure points become points.
    pub fn closed(&self) -> Self {
        let mut out = Self::new(self.dim);
        for g in &self.gens {
            let kind = if g.kind == GenKind::ClosurePoint { GenKind::Point } else { g.kind };
            out.insert(Generator { kind, coords: g.coords.clone() }).expect("same dimension");
        }
        out
    }
}

impl<'a> IntoIterator for &'a GeneratorSystem {
    type Item = &'a Generator;
    type IntoIter = std::slice::Iter<'a, Generator>;
    fn into_iter(self) -> Self::IntoIter {
        self.gens.iter()
    }
}

impl fmt::Display for GeneratorSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, " {g}")?;
        }
        f.write_str(" }")
    }
}

/// `p ∈ con({β})`.
pub fn satisfies(p: &[Rational], beta: &Constraint) -> Result<bool> {
    check_dim(beta.dim(), p.len())?;
    Ok(beta.holds_at(p))
}

/// Points and closure points saturate `β` when `⟨a,g⟩ = b`, rays when `⟨a,g⟩ = 0`.
pub fn saturates(g: &Generator, beta: &Constraint) -> Result<bool> {
    check_dim(beta.dim(), g.dim())?;
    let v = beta.expr().eval(g.coords());
    Ok(match g.kind() {
        GenKind::Ray => v.is_zero(),
        _ => &v == beta.bound(),
    })
}

/// Affine combination `from + t·(to − from)`.
pub fn lerp(from: &[Rational], to: &[Rational], t: &Rational) -> PointVec {
    from.iter().zip(to).map(|(a, b)| a + &(t * &(b - a))).collect()
}

/// `p + ρ·r`.
pub fn translate(p: &[Rational], r: &[Rational], rho: &Rational) -> PointVec {
    p.iter().zip(r).map(|(a, b)| a + &(rho * b)).collect()
}

/// For a segment whose endpoint `to` satisfies the closures of `cs`, returns
/// the least `t ∈ [0,1]` such that `from + t·(to − from)` satisfies them all.
pub fn segment_entry<'a>(
    cs: impl IntoIterator<Item = &'a Constraint>,
    from: &[Rational],
    to: &[Rational],
) -> Rational {
    let mut t = Rational::zero();
    for c in cs {
        for c in c.expand() {
            let at_from = c.expr().eval(from);
            if at_from <= *c.bound() {
                continue;
            }
            let at_to = c.expr().eval(to);
            // at_from > b ≥ at_to, so the crossing lies in (0,1].
            let cross = (&at_from - c.bound()) / (&at_from - &at_to);
            if cross > t {
                t = cross;
            }
        }
    }
    t
}
