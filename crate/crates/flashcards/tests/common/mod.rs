//! Frozen reference data shared by the integration suites.

/// First 30 cards viewed in the slow game.
pub const VIEWING_30: [u64; 30] = [
    1, 2, 1, 2, 3, 1, 3, 2, 4, 3, 4, 1, 2, 4, 3, 5, 1, 5, 4, 2, 5, 3, 6, 4, 6, 5, 1, 6, 2, 3,
];

/// First 30 view counts in the slow game.
pub const COUNTING_30: [u64; 30] = [
    1, 1, 2, 2, 1, 3, 2, 3, 1, 3, 2, 4, 4, 3, 4, 1, 5, 2, 4, 5, 3, 5, 1, 5, 2, 4, 6, 3, 6, 6,
];

/// Slow-game deck order at t = 100, first 15 positions.
pub const DECK_AT_100: [u64; 15] = [4, 10, 7, 11, 5, 6, 8, 9, 12, 1, 2, 3, 13, 14, 15];

/// Slow-game deck of times at t = 100 (sums to 100). The front card's
/// in-progress viewing is counted, so the first entry is 11; a snapshot
/// taken before that increment has a 10 there and sums to 99. Decoding
/// decrements the front entry, so both conventions yield the same card
/// order.
pub const TIMES_AT_100: [u64; 12] = [11, 6, 9, 4, 10, 10, 9, 8, 0, 11, 11, 11];

/// First 15 cards viewed under the transposition family.
pub const TRANSPOSITION_15: [u64; 15] = [1, 2, 1, 3, 2, 1, 4, 3, 2, 1, 5, 4, 3, 2, 1];

/// First 15 cards viewed under the reversal family.
pub const REVERSAL_15: [u64; 15] = [1, 2, 1, 3, 2, 1, 4, 2, 1, 5, 2, 1, 6, 2, 1];
