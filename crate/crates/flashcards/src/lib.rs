//! Simulation and analysis toolkit for flashcard games.
//!
//! A flashcard game starts from the deck `1, 2, 3, ...` of all positive
//! integers. At each tick the front card is viewed; if this is its `k`-th
//! viewing it is removed and reinserted at position `p_k`, where `(p_k)` is
//! the game's insertion schedule. The slow game (`p_k = k + 1`) is the main
//! object of study; recap (`p_k = 2^k`), constant, affine, power, table,
//! and seeded random schedules are also supported.
//!
//! The crate provides:
//!
//! * [`deck`] — order-maintenance deck with an `O(log L)` treap behind it
//!   and a naive flat-array oracle;
//! * [`engine`] — the game clock, viewing/counting sequences, and the
//!   sparse table of viewing times `T_n(k)`;
//! * [`codec`] — lossless conversions between the sequence and deck
//!   representations (viewing ↔ counting, deck of cards ↔ deck of times);
//! * [`tableau`] — the staircase tableau of viewing times and reversed-order
//!   RSK on finite prefixes;
//! * [`analysis`] — exhaustive checks of the proved inequalities on
//!   `T_n(k)`, probes for the open conjectures, and the rescaled point
//!   cloud with its line and circle bounds;
//! * [`variants`] — games driven by arbitrary finite-support permutations,
//!   deck permutation statistics, and randomized schedules.
//!
//! Scans in [`analysis`] are data-parallel via rayon under the `parallel`
//! feature (enabled by default) and sequential without it.

pub mod analysis;
pub mod codec;
pub mod deck;
pub mod engine;
mod error;
mod par;
mod rng;
pub mod schedule;
pub mod tableau;
pub mod variants;

pub use deck::{Deck, DeckOps, NaiveDeck, DEFAULT_MAX_POSITION};
pub use engine::{GameOptions, GameState, TimeTable, ViewEvent};
pub use error::{Error, Result};
pub use schedule::{Schedule, TableExtend};
