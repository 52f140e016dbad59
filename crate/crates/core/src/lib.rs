//! Upper bounds on the size of binary codes whose triples keep a minimum
//! pseudo-distance: classical bounds, Delsarte LP, and a triple-distance SDP.

pub mod checks;
pub mod classical;
pub mod error;
pub mod hamming;
pub mod lp;
pub mod oracle;
pub mod poly;
pub mod query;
pub mod reference;
pub mod report;
pub mod sdp;

pub use classical::{BoundResult, Method, PseudoDistanceKind};
pub use error::{Error, Result};
pub use hamming::{KTuple, Word};
pub use lp::delsarte_bound;
pub use oracle::{max_code_exact, verify_bound};
pub use query::{compute_bound, Choice};
pub use sdp::{sdp_bound, SdpProblem, SolverParams, SolverResult, SolverStatus};
