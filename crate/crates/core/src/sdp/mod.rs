pub mod model;
pub mod sdpa;
pub mod solver;

pub use model::{build_sdp, code_distribution, ForbiddenSet, SdpBlock, SdpProblem, SymmetryClass, TripleProfile};
pub use sdpa::{export_sdpa, import_sdpa};
pub use solver::{bound_from_result, solve, solve_block, BlockSdp, SolverParams, SolverResult, SolverStatus};

use crate::classical::{BoundResult, PseudoDistanceKind};
use crate::error::Result;

/// Builds, solves and rounds the triple SDP for one parameter set.
pub fn sdp_bound(
    n: usize,
    kind: PseudoDistanceKind,
    m: usize,
    even_only: bool,
    params: &SolverParams,
) -> Result<BoundResult> {
    let p = build_sdp(n, kind, m, even_only)?;
    let r = solve(&p, params)?;
    Ok(bound_from_result(&r, solver::DEFAULT_SAFETY)?
        .with("n", n)
        .with("m", m)
        .with("kind", kind)
        .with("even_only", even_only)
        .with("variables", p.num_vars()))
}
