//! Text forms of shapes and powersets.
//!
//! A shape is written `kind { body }` or `kind(N) { body }`, where `N` fixes
//! the space dimension. Without `N` the dimension is the largest variable
//! index (constraint and box forms) or the generator length. Kinds:
//!
//! | kind | body |
//! |---|---|
//! | `box`, `int_box` | `x1 in [0, 1]; x2 in (0, inf)` |
//! | `bds`, `int_bds`, `oct`, `int_oct`, `cpoly`, `nncpoly` | constraints |
//! | `cpoly_gen`, `nncpoly_gen` | `point(0, 0); closure_point(1, 0); ray(1, 1)` |
//!
//! A powerset is `powerset { shape; shape; ... }`; an empty one needs the
//! form `powerset kind(N) { }`.

use std::fmt;

use crate::bd::{BdShape, IntBdShape};
use crate::boxes::{Bound, BoxShape, IntInterval, NncInterval};
use crate::error::{Error, Result};
use crate::linear::{Constraint, ConstraintSystem, Generator, GeneratorSystem};
use crate::nnc::NncPolyhedron;
use crate::octagon::{IntOctShape, OctShape};
use crate::parse::{Parser, RawConstraint, Tok};
use crate::polyhedra::CPolyhedron;
use crate::powerset::{Disjunct, Powerset};
use crate::rational::Rational;

/// A shape with a text form.
pub trait TextShape: Sized {
    /// Keyword of the constraint (or interval) form.
    const KEYWORD: &'static str;
    /// Keyword of the generator form, when the domain has one.
    const GEN_KEYWORD: Option<&'static str> = None;

    /// Parses a body after `{`, consuming the closing `}`. `generators`
    /// selects the generator form.
    fn parse_body(p: &mut Parser, dim: Option<usize>, generators: bool) -> Result<Self>;

    fn space_dim(&self) -> usize;

    /// The body, including braces.
    fn body(&self) -> String;

    /// Largest variable index mentioned by `body`.
    fn body_dim(&self) -> usize;
}

/// The full text form, with an explicit dimension only when needed.
pub fn write_shape<S: TextShape>(s: &S) -> String {
    if s.body_dim() == s.space_dim() {
        format!("{} {}", S::KEYWORD, s.body())
    } else {
        format!("{}({}) {}", S::KEYWORD, s.space_dim(), s.body())
    }
}

/// Adapter printing a shape in its full text form.
pub struct Text<'a, S>(pub &'a S);

impl<S: TextShape> fmt::Display for Text<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_shape(self.0))
    }
}

fn parse_header<S: TextShape>(p: &mut Parser) -> Result<(Option<usize>, bool)> {
    let off = p.offset();
    let kw = p.expect_ident()?;
    let generators = if kw == S::KEYWORD {
        false
    } else if Some(kw.as_str()) == S::GEN_KEYWORD {
        true
    } else {
        let mut wanted = format!("`{}`", S::KEYWORD);
        if let Some(g) = S::GEN_KEYWORD {
            wanted.push_str(&format!(" or `{g}`"));
        }
        return Err(Error::parse(off, format!("expected shape kind {wanted}, found `{kw}`")));
    };
    let dim = if p.eat_sym("(") {
        let n = p.usize_literal()?;
        p.expect_sym(")")?;
        Some(n)
    } else {
        None
    };
    p.expect_sym("{")?;
    Ok((dim, generators))
}

/// Parses one shape, consuming tokens up to its closing brace.
pub fn parse_shape_from<S: TextShape>(p: &mut Parser) -> Result<S> {
    let (dim, generators) = parse_header::<S>(p)?;
    S::parse_body(p, dim, generators)
}

/// Parses a whole text as one shape.
pub fn parse_shape<S: TextShape>(text: &str) -> Result<S> {
    let mut p = Parser::new(text)?;
    let s = parse_shape_from(&mut p)?;
    p.expect_end()?;
    Ok(s)
}

/// The keyword starting a text, if any.
pub fn leading_keyword(text: &str) -> Result<Option<String>> {
    let mut p = Parser::new(text)?;
    Ok(match p.peek() {
        Some(Tok::Ident(_)) => Some(p.expect_ident()?),
        _ => None,
    })
}

/// Parses `powerset { shape; ... }`. All disjuncts must share a dimension.
pub fn parse_powerset<S: TextShape + Disjunct>(text: &str) -> Result<Powerset<S>> {
    let mut p = Parser::new(text)?;
    let off = p.offset();
    if p.expect_ident()? != "powerset" {
        return Err(Error::parse(off, "expected `powerset`"));
    }
    if matches!(p.peek(), Some(Tok::Ident(_))) {
        let (dim, _) = parse_header::<S>(&mut p)?;
        let dim = dim.ok_or_else(|| p.error("an empty powerset needs an explicit dimension"))?;
        p.expect_sym("}")?;
        p.expect_end()?;
        return Ok(Powerset::empty(dim));
    }
    let mut fixed = None;
    p.expect_sym("{")?;
    let mut items = Vec::new();
    while !p.eat_sym("}") {
        let s: S = parse_shape_from(&mut p)?;
        match fixed {
            Some(d) if d != s.space_dim() => return Err(Error::DimensionMismatch { expected: d, found: s.space_dim() }),
            _ => fixed = Some(s.space_dim()),
        }
        items.push(s);
        if !p.eat_sym(";") {
            p.expect_sym("}")?;
            break;
        }
    }
    p.expect_end()?;
    let Some(dim) = fixed else {
        return Err(p.error("an empty powerset needs the form `powerset kind(N) { }`"));
    };
    Powerset::omega_reduce(dim, items)
}

/// The text form of a powerset.
pub fn write_powerset<S: TextShape + Disjunct>(q: &Powerset<S>) -> String {
    if q.is_empty() {
        return format!("powerset {}({}) {{ }}", S::KEYWORD, q.dim());
    }
    let parts: Vec<String> = q.disjuncts().iter().map(write_shape).collect();
    format!("powerset {{ {} }}", parts.join("; "))
}

fn parse_constraints(p: &mut Parser, dim: Option<usize>) -> Result<ConstraintSystem> {
    let mut raws: Vec<RawConstraint> = Vec::new();
    while !p.eat_sym("}") {
        raws.push(p.raw_constraint()?);
        if !p.eat_sym(";") {
            p.expect_sym("}")?;
            break;
        }
    }
    let needed = raws.iter().map(RawConstraint::min_dim).max().unwrap_or(0);
    let dim = match dim {
        Some(d) if d < needed => return Err(Error::DimensionMismatch { expected: d, found: needed }),
        Some(d) => d,
        None => needed,
    };
    let mut cs = ConstraintSystem::new(dim);
    for r in &raws {
        cs.insert(r.build(dim)?)?;
    }
    Ok(cs)
}

fn parse_generators(p: &mut Parser, dim: Option<usize>) -> Result<GeneratorSystem> {
    let mut gens: Vec<Generator> = Vec::new();
    let mut found: Option<usize> = dim;
    while !p.eat_sym("}") {
        let off = p.offset();
        let kind = p.expect_ident()?;
        p.expect_sym("(")?;
        let mut coords = Vec::new();
        if !p.is_sym(")") {
            loop {
                coords.push(p.signed_rational()?);
                if !p.eat_sym(",") {
                    break;
                }
            }
        }
        p.expect_sym(")")?;
        match found {
            Some(d) if d != coords.len() => return Err(Error::DimensionMismatch { expected: d, found: coords.len() }),
            _ => found = Some(coords.len()),
        }
        gens.push(match kind.as_str() {
            "point" => Generator::point(coords),
            "closure_point" => Generator::closure_point(coords),
            "ray" => Generator::ray(coords).map_err(|_| Error::parse(off, "zero vector is not a valid ray"))?,
            other => return Err(Error::parse(off, format!("unknown generator kind `{other}`"))),
        });
        if !p.eat_sym(";") {
            p.expect_sym("}")?;
            break;
        }
    }
    GeneratorSystem::from_vec(found.unwrap_or(0), gens)
}

fn system_dim(cs: &ConstraintSystem) -> usize {
    cs.iter().map(Constraint::coeffs).filter_map(|c| c.iter().rposition(|v| !v.is_zero())).map(|k| k + 1).max().unwrap_or(0)
}

fn reject_generators<S: TextShape>(p: &Parser, generators: bool) -> Result<()> {
    if generators {
        Err(p.error(format!("`{}` has no generator form", S::KEYWORD)))
    } else {
        Ok(())
    }
}

macro_rules! constraint_text {
    ($ty:ty, $kw:literal, $build:expr) => {
        impl TextShape for $ty {
            const KEYWORD: &'static str = $kw;

            fn parse_body(p: &mut Parser, dim: Option<usize>, generators: bool) -> Result<Self> {
                reject_generators::<Self>(p, generators)?;
                let cs = parse_constraints(p, dim)?;
                let build: fn(&ConstraintSystem) -> Result<Self> = $build;
                build(&cs)
            }

            fn space_dim(&self) -> usize {
                self.dim()
            }

            fn body(&self) -> String {
                self.to_constraints().to_string()
            }

            fn body_dim(&self) -> usize {
                system_dim(&self.to_constraints())
            }
        }
    };
}

constraint_text!(BdShape, "bds", BdShape::from_constraints);
constraint_text!(IntBdShape, "int_bds", IntBdShape::from_constraints);
constraint_text!(OctShape, "oct", OctShape::from_constraints);
constraint_text!(IntOctShape, "int_oct", IntOctShape::from_constraints);

macro_rules! polyhedron_text {
    ($ty:ty, $kw:literal, $gkw:literal, $from_cs:expr) => {
        impl TextShape for $ty {
            const KEYWORD: &'static str = $kw;
            const GEN_KEYWORD: Option<&'static str> = Some($gkw);

            fn parse_body(p: &mut Parser, dim: Option<usize>, generators: bool) -> Result<Self> {
                if generators {
                    Self::from_generators(&parse_generators(p, dim)?)
                } else {
                    let from_cs: fn(&ConstraintSystem) -> Result<Self> = $from_cs;
                    from_cs(&parse_constraints(p, dim)?)
                }
            }

            fn space_dim(&self) -> usize {
                self.dim()
            }

            fn body(&self) -> String {
                self.constraints().to_string()
            }

            fn body_dim(&self) -> usize {
                system_dim(self.constraints())
            }
        }
    };
}

polyhedron_text!(CPolyhedron, "cpoly", "cpoly_gen", CPolyhedron::from_constraints);
polyhedron_text!(NncPolyhedron, "nncpoly", "nncpoly_gen", |cs| Ok(NncPolyhedron::from_constraints(cs)));

/// One interval: `empty` or `[a, b]` with `(`/`)` for open ends and `inf`.
fn parse_interval(p: &mut Parser) -> Result<Option<(Bound, Bound)>> {
    if p.is_ident("empty") {
        p.expect_ident()?;
        return Ok(None);
    }
    let open_lo = if p.eat_sym("(") {
        true
    } else {
        p.expect_sym("[")?;
        false
    };
    let lo = if p.is_sym("-") && matches!(p.peek_at(1), Some(Tok::Ident(s)) if s == "inf") {
        p.next();
        p.next();
        if !open_lo {
            return Err(p.error("an infinite bound must be open"));
        }
        Bound::Infinite
    } else {
        let v = p.signed_rational()?;
        if open_lo {
            Bound::Open(v)
        } else {
            Bound::Closed(v)
        }
    };
    p.expect_sym(",")?;
    let plus_inf = p.is_sym("+") && matches!(p.peek_at(1), Some(Tok::Ident(s)) if s == "inf");
    let hi_value = if p.is_ident("inf") || plus_inf {
        p.eat_sym("+");
        p.next();
        None
    } else {
        Some(p.signed_rational()?)
    };
    let open_hi = if p.eat_sym(")") {
        true
    } else {
        p.expect_sym("]")?;
        false
    };
    let hi = match hi_value {
        None if !open_hi => return Err(p.error("an infinite bound must be open")),
        None => Bound::Infinite,
        Some(v) if open_hi => Bound::Open(v),
        Some(v) => Bound::Closed(v),
    };
    Ok(Some((lo, hi)))
}

fn parse_box_body<D: Clone>(
    p: &mut Parser,
    dim: Option<usize>,
    universe: D,
    empty: D,
    make: impl Fn(&Parser, Bound, Bound) -> Result<D>,
) -> Result<Vec<D>> {
    let mut comps: Vec<Option<D>> = Vec::new();
    while !p.eat_sym("}") {
        let off = p.offset();
        let k = p.variable()?;
        if !p.is_ident("in") {
            return Err(p.error("expected `in`"));
        }
        p.expect_ident()?;
        let iv = match parse_interval(p)? {
            None => empty.clone(),
            Some((lo, hi)) => make(p, lo, hi)?,
        };
        if comps.len() <= k {
            comps.resize(k + 1, None);
        }
        if comps[k].is_some() {
            return Err(Error::parse(off, format!("x{} is given twice", k + 1)));
        }
        comps[k] = Some(iv);
        if !p.eat_sym(";") {
            p.expect_sym("}")?;
            break;
        }
    }
    let n = match dim {
        Some(d) if d < comps.len() => return Err(Error::DimensionMismatch { expected: d, found: comps.len() }),
        Some(d) => d,
        None => comps.len(),
    };
    comps.resize(n, None);
    Ok(comps.into_iter().map(|c| c.unwrap_or_else(|| universe.clone())).collect())
}

impl TextShape for BoxShape<NncInterval> {
    const KEYWORD: &'static str = "box";

    fn parse_body(p: &mut Parser, dim: Option<usize>, generators: bool) -> Result<Self> {
        reject_generators::<Self>(p, generators)?;
        let universe = NncInterval::new(Bound::Infinite, Bound::Infinite);
        let comps = parse_box_body(p, dim, universe, NncInterval::Empty, |_, lo, hi| Ok(NncInterval::new(lo, hi)))?;
        Ok(BoxShape::new(comps))
    }

    fn space_dim(&self) -> usize {
        self.dim()
    }

    fn body(&self) -> String {
        self.to_string()
    }

    fn body_dim(&self) -> usize {
        self.dim()
    }
}

fn integral(p: &Parser, v: &Rational) -> Result<i64> {
    v.to_i64().filter(|_| v.is_integer()).ok_or_else(|| p.error(format!("integer interval bound `{v}` is not a machine integer")))
}

impl TextShape for BoxShape<IntInterval> {
    const KEYWORD: &'static str = "int_box";

    fn parse_body(p: &mut Parser, dim: Option<usize>, generators: bool) -> Result<Self> {
        reject_generators::<Self>(p, generators)?;
        let make = |p: &Parser, lo: Bound, hi: Bound| -> Result<IntInterval> {
            let lo = match lo {
                Bound::Infinite => None,
                Bound::Closed(v) => Some(integral(p, &v)?),
                Bound::Open(v) => Some(integral(p, &v)? + 1),
            };
            let hi = match hi {
                Bound::Infinite => None,
                Bound::Closed(v) => Some(integral(p, &v)?),
                Bound::Open(v) => Some(integral(p, &v)? - 1),
            };
            Ok(IntInterval::new(lo, hi))
        };
        let comps = parse_box_body(p, dim, IntInterval::new(None, None), IntInterval::Empty, make)?;
        Ok(BoxShape::new(comps))
    }

    fn space_dim(&self) -> usize {
        self.dim()
    }

    fn body(&self) -> String {
        self.to_string()
    }

    fn body_dim(&self) -> usize {
        self.dim()
    }
}
