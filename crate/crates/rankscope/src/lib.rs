//! Tensor typical-rank toolkit over the reals.
//!
//! The crate builds Hurwitz-Radon matrix families and the absolutely
//! nonsingular tensors they generate, decides absolutely-full-column-rank
//! (AFR) status of rectangular 3-tensors with exact certificates, Lipschitz
//! grid certification and multistart falsification, canonicalizes generic
//! tensors to staircase normal forms with explicit invertible transforms,
//! and runs seeded Monte Carlo experiments exhibiting plural typical ranks
//! of m x n x p real tensors.
//!
//! Start with the runnable examples (`cargo run --example rho_table`, etc.)
//! or the `rankscope` binary, which exposes each operation as a subcommand.

pub mod afr;
pub mod canonical;
pub mod constructions;
pub mod error;
pub mod hurwitz;
pub mod io;
pub mod mat;
pub mod numeric;
mod seeds;
pub mod tensor;
pub mod typical_rank;

pub use error::{Error, Result};
pub use mat::{block_diag, hstack, kron, vstack, Kind, Mat};
pub use tensor::{flatten_ranks, sandwich, Tensor3};
