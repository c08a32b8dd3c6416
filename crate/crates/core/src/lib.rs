//! Exact-arithmetic lab for small binary acyclic structural causal models.
//!
//! Builds the three hidden-parameter families (rooted trees, bipartite
//! graphs, modular XOR strings), computes their OBS / INT1 / CF1 / INT_ALL
//! answer oracles exactly, decodes parameters back from higher rungs, and
//! measures the information gaps between rungs.

pub mod decode;
pub mod error;
pub mod exact;
pub mod families;
pub mod gap;
pub mod gate;
pub mod infer;
pub mod nfl;
pub mod oracle;
pub mod prufer;
pub mod scm;
pub mod verify;

pub use error::{Error, Result, Violation};
pub use exact::{BitVector, ExactDist, ExactRational};
pub use families::{BipartiteGraph, ClassSpec, Family, HiddenParam, HiddenString, RootedTree};
pub use gate::Gate;
pub use oracle::{compute_oracle, AnswerOracle, CanonicalBytes, OracleKind};
pub use scm::{Caps, Intervention, Mechanism, NoiseDist, Scm};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
