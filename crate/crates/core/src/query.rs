//! One entry point for every bound the crate computes, keyed by method name.

use std::fmt;
use std::str::FromStr;

use crate::classical::{
    best_classical, best_classical_even, elias_bassalygo_bound, hamming_bound, plotkin_bound, singleton_bound,
    BoundResult, Method, PseudoDistanceKind,
};
use crate::error::{Error, Result};
use crate::lp::delsarte_bound;
use crate::oracle::max_code_exact;
use crate::sdp::{sdp_bound, SolverParams};

/// Tuple size of every bound here: the pseudo-distances act on triples.
pub const TUPLE_SIZE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Choice {
    Singleton,
    Hamming,
    Plotkin,
    Elias,
    /// Smallest of the four classical bounds.
    Classical,
    Sdp,
    /// Delsarte LP; only for the ordinary minimum distance.
    Lp,
    Oracle,
}

impl Choice {
    pub const ALL: [Choice; 8] = [
        Choice::Singleton,
        Choice::Hamming,
        Choice::Plotkin,
        Choice::Elias,
        Choice::Classical,
        Choice::Sdp,
        Choice::Lp,
        Choice::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Choice::Singleton => "singleton",
            Choice::Hamming => "hamming",
            Choice::Plotkin => "plotkin",
            Choice::Elias => "elias",
            Choice::Classical => "classical",
            Choice::Sdp => "sdp",
            Choice::Lp => "lp",
            Choice::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Choice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Choice::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Input(format!("unknown method {s:?}")))
    }
}

/// Upper bound on `A_2(n, kind, m)`, or on `A_2^+` when `even_only`.
///
/// Classical bounds on even codes exist only for the radius, through
/// `A^+(n, r, m) = A(n - 1, r, m)`.
pub fn compute_bound(
    n: usize,
    kind: PseudoDistanceKind,
    m: usize,
    choice: Choice,
    even_only: bool,
    params: &SolverParams,
) -> Result<BoundResult> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let k = TUPLE_SIZE;
    let classical = |f: &dyn Fn(usize) -> Result<BoundResult>| -> Result<BoundResult> {
        if !even_only {
            return f(n);
        }
        if kind != PseudoDistanceKind::Radius || n < 2 {
            return Err(Error::NotApplicable(format!("no classical bound on even codes for kind {kind}")));
        }
        Ok(f(n - 1)?.with("punctured_length", n - 1))
    };
    match choice {
        Choice::Singleton => classical(&|len| match kind {
            PseudoDistanceKind::GeneralizedD | PseudoDistanceKind::GeneralizedDAff => singleton_bound(len, k, m),
            // pairs: (2 - 1) 2^{n - d + 1}
            PseudoDistanceKind::ClassicalD1 => singleton_bound(len, 2, m),
            _ => Err(Error::NotApplicable(format!("no Singleton bound for kind {kind}"))),
        }),
        Choice::Hamming => classical(&|len| hamming_bound(len, k, m, kind)),
        Choice::Plotkin => classical(&|len| plotkin_bound(len, k, m, kind)),
        Choice::Elias => classical(&|len| elias_bassalygo_bound(len, k, m, kind)),
        Choice::Classical if even_only => best_classical_even(n, k, m, kind),
        Choice::Classical => best_classical(n, k, m, kind),
        Choice::Sdp => sdp_bound(n, kind, m, even_only, params),
        Choice::Lp => {
            if kind != PseudoDistanceKind::ClassicalD1 || even_only {
                return Err(Error::NotApplicable("the Delsarte LP covers the ordinary minimum distance only".into()));
            }
            delsarte_bound(n, m)
        }
        Choice::Oracle => {
            let v = max_code_exact(n, kind, m, even_only)?;
            Ok(BoundResult::new(v as u128, Method::OracleExact)
                .with("n", n)
                .with("m", m)
                .with("kind", kind)
                .with("even_only", even_only))
        }
    }
}
