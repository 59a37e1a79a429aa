//! Dense statevector kernel.
//!
//! Only the primitives the classifier circuits use are provided: direct
//! amplitude initialization, H, X and multi-controlled X, controlled SWAP,
//! exact marginals, seeded shot sampling and post-selection. Gates are
//! in-place amplitude permutations or butterflies, never matrices.
//!
//! A `StateVector` is exclusively owned while a gate mutates it. Distinct
//! states share nothing and can be evolved on separate threads.

mod layout;
mod measure;
mod state;

pub use layout::RegisterLayout;
pub use measure::{PostSelected, Probabilities, ShotCounts};
pub use state::{Control, StateVector, INIT_NORM_TOLERANCE};
