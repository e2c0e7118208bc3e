//! Exact-arithmetic K-type combinatorics for the quaternionic symplectic
//! group Sp(p,q) with maximal compact subgroup Sp(p) x Sp(q).
//!
//! The crate works with highest weights written blockwise as
//! `(a_1,...,a_p | b_1,...,b_q)` and provides:
//!
//! * [`weights`] — blockwise integer vectors, k-dominance, the blockwise
//!   decreasing rearrangement `{.}`, k-values and the domination order;
//! * [`weyl`] — the coset representatives of the Weyl group that carry the
//!   k-positive system into a g-positive system, as explicit permutations;
//! * [`omega`] — the set of half sums of non-compact positive roots
//!   (one per positive system containing the compact one), enumerated in
//!   lexicographic order with its descent moves;
//! * [`hull`] — membership in the unitarily small convex hull, both via the
//!   prefix-sum criterion and via the literal pairing oracle, plus pencil
//!   utilities;
//! * [`spin`] — spin-norm minimization over the omega table and deficiency
//!   analysis of individual indices;
//! * [`verify`] — exhaustive, parallel, checkpointable sweeps that check the
//!   pencil monotonicity statement and all supporting claims over finite
//!   grids of weights.
//!
//! All core arithmetic is exact: norms are compared as squared integers and
//! no floating point enters any decision. Every value is immutable after
//! construction and every operation is a pure function, so everything can be
//! shared freely across threads.

use thiserror::Error;

pub mod hull;
pub mod omega;
pub mod spin;
pub mod verify;
pub mod weights;
pub mod weyl;

pub use hull::{
    is_u_small, is_u_small_oracle, lambda_witnesses, padded_weight, pencil_first_u_large,
    pencil_profile, u_large_witness, HullWitness, PaddedWeight, PencilRow,
};
pub use omega::{omega_table, tail_from_head, OmegaElement, OmegaTable};
pub use spin::{
    classify_region, deficiency_delta_formula, deficiency_profile, deficient_indices, spin_norm,
    DeficiencyProfile, RegionClass, SpinResult,
};
pub use verify::{
    verify_all_properties, verify_lemma_down, verify_prop_boundary, verify_theorem,
    Counterexample, SweepGrid, SweepOptions, VerificationReport,
};
pub use weights::{BlockVector, GroupShape, KWeight, RhoConstants};
pub use weyl::{generate_w1, omega_via_weyl, WeylWord};

/// Largest absolute entry accepted when a vector is built from user input.
///
/// Keeps every squared-norm accumulation comfortably inside `u64`: with
/// entries at most `2^26`, internal shifts stay below `2^27`, and a sum of at
/// most [`MAX_DIM`] squares of `2^27 + MAX_DIM` is below `2^63`.
pub const MAX_ENTRY: i64 = 1 << 26;

/// Largest supported total dimension `p + q`.
pub const MAX_DIM: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape p={p}, q={q}: need 1 <= p <= q and p+q <= {MAX_DIM}")]
    InvalidShape { p: usize, q: usize },
    #[error("block length mismatch: expected {expected} entries, got {got}")]
    BlockLength { expected: usize, got: usize },
    #[error("entry {value} exceeds the magnitude limit {MAX_ENTRY}")]
    EntryTooLarge { value: i64 },
    #[error("{block} block is not weakly decreasing")]
    NotDecreasing { block: &'static str },
    #[error("negative entry {value} in a K-type weight")]
    NegativeEntry { value: i64 },
    #[error("cannot parse weight literal: {0}")]
    Parse(String),
    #[error("index {index} out of range (omega table has {size} elements)")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("not a valid omega head: {0}")]
    BadOmegaHead(String),
    #[error("descent blocked at head position {j}: no strict drop there")]
    DescentBlocked { j: usize },
    #[error("pencil step overflows the entry limit at m={m}")]
    PencilOverflow { m: u64 },
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("checkpoint is malformed: {0}")]
    CheckpointFormat(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
