use std::fmt;

/// Outcome of an exact-join test. `Inexact` carries a domain-specific witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decision<W> {
    Exact,
    Inexact(W),
}

impl<W> Decision<W> {
    pub fn is_exact(&self) -> bool {
        matches!(self, Decision::Exact)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Exact => None,
            Decision::Inexact(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Exact => Decision::Exact,
            Decision::Inexact(w) => Decision::Inexact(f(w)),
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.is_exact() {
            Verdict::Exact
        } else {
            Verdict::Inexact
        }
    }
}

/// A bare verdict, as produced by oracles and compared against decisions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Verdict {
    Exact,
    Inexact,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Exact => "exact",
            Verdict::Inexact => "inexact",
        })
    }
}
