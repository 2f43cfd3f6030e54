//! Lossless conversions among the game's representations:
//! viewing ↔ counting sequences and deck of cards ↔ deck of times.

use crate::deck::DeckOps;
use crate::engine::GameState;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

/// Counting sequence of a viewing prefix: `C_i` is the number of
/// occurrences of `V_i` among `V_1..=V_i`.
pub fn viewing_to_counting(viewing: &[u64]) -> Vec<u64> {
    let mut seen: HashMap<u64, u64> = HashMap::new();
    viewing
        .iter()
        .map(|&card| {
            let c = seen.entry(card).or_insert(0);
            *c += 1;
            *c
        })
        .collect()
}

/// Inverts [`viewing_to_counting`]: the occurrences of each value `k` in the
/// counting sequence are labeled `1, 2, 3, ...` left to right, and the label
/// is the card viewed. Inputs that are not the counting sequence of any
/// viewing sequence are rejected.
pub fn counting_to_viewing(counting: &[u64]) -> Result<Vec<u64>> {
    let mut labels: HashMap<u64, u64> = HashMap::new();
    let mut viewing = Vec::with_capacity(counting.len());
    for (i, &k) in counting.iter().enumerate() {
        if k == 0 {
            return Err(Error::InvalidCountingSequence { index: i });
        }
        let label = labels.entry(k).or_insert(0);
        *label += 1;
        viewing.push(*label);
    }
    let back = viewing_to_counting(&viewing);
    if let Some(index) = (0..counting.len()).find(|&i| back[i] != counting[i]) {
        return Err(Error::InvalidCountingSequence { index });
    }
    Ok(viewing)
}

/// The deck with each card replaced by its current view count, truncated
/// after the last nonzero entry. Entry sum equals the clock time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimesDeck {
    entries: Vec<u64>,
}

impl TimesDeck {
    /// Trailing zeros are notational and dropped.
    pub fn new(mut entries: Vec<u64>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        TimesDeck { entries }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// The clock time this deck of times belongs to.
    pub fn time(&self) -> u64 {
        self.entries.iter().sum()
    }
}

impl std::fmt::Display for TimesDeck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for e in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for TimesDeck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidTimesDeck(format!("bad entry {p:?}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(TimesDeck::new(entries))
    }
}

/// Reads the deck of times off a live game state.
pub fn deck_to_times<D: DeckOps>(state: &GameState<D>) -> TimesDeck {
    let deck = state.deck();
    let last = (1..=state.timetable().max_card_seen())
        .filter(|&n| state.count_of(n) > 0)
        .map(|n| deck.position_of(n))
        .max()
        .unwrap_or(0);
    TimesDeck::new(
        (1..=last)
            .map(|p| state.count_of(deck.card_at(p)))
            .collect(),
    )
}

/// Recovers the clock time and the deck-of-cards prefix from a deck of
/// times. The front entry is decremented by one (its viewing is the one
/// happening "now"), then values are labeled with card numbers from the
/// largest value down, ties left to right.
pub fn times_to_deck(td: &TimesDeck) -> Result<(u64, Vec<u64>)> {
    let entries = td.entries();
    if entries.is_empty() {
        return Err(Error::InvalidTimesDeck(
            "no nonzero entries: no card has been viewed".into(),
        ));
    }
    if entries[0] == 0 {
        return Err(Error::InvalidTimesDeck(
            "front entry must be >= 1: the front card is being viewed".into(),
        ));
    }
    let t = td.time();
    let mut w = entries.to_vec();
    w[0] -= 1;
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
    let mut cards = vec![0u64; w.len()];
    for (label, &idx) in order.iter().enumerate() {
        cards[idx] = label as u64 + 1;
    }
    Ok((t, cards))
}

/// Partial information: `c_1(t)` read off the deck of cards alone.
///
/// For the slow game at `t > 2`, let `k` be the largest displaced card
/// (not at position `k`); `k` is the deepest insertion made so far, which
/// pins down how often card 1 has been reinserted. When card 1 is at the
/// front its current viewing is counted but not yet reinserted, so the
/// count is `k`; otherwise it is `k - 1`. Returns `None` when no card is
/// displaced (the identity deck, i.e. `t <= 3`).
pub fn card1_count_from_deck<D: DeckOps>(deck: &D) -> Option<u64> {
    let k = (1..=deck.active_len())
        .rev()
        .find(|&c| deck.position_of(c) != c)?;
    Some(if deck.front() == 1 { k } else { k - 1 })
}

/// Partial information: lower bound on `c_i(t)` for a card known to have
/// been seen. In the slow game a seen card at position `j` has been seen
/// at least `j - 1` times.
pub fn seen_card_count_floor<D: DeckOps>(deck: &D, card: u64) -> u64 {
    deck.position_of(card).saturating_sub(1)
}

/// Reads a sequence stored one integer per line.
pub fn read_sequence<R: BufRead>(r: R) -> io::Result<Vec<u64>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        out.push(s.parse::<u64>().map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("bad integer {s:?}: {e}"),
            )
        })?);
    }
    Ok(out)
}

/// Writes a sequence one integer per line.
pub fn write_sequence<W: Write>(seq: &[u64], mut w: W) -> io::Result<()> {
    for v in seq {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::viewing_prefix;
    use crate::schedule::Schedule;

    #[test]
    fn counting_of_the_first_six_views() {
        assert_eq!(
            viewing_to_counting(&[1, 2, 1, 2, 3, 1]),
            vec![1, 1, 2, 2, 1, 3]
        );
        assert_eq!(viewing_to_counting(&[1]), vec![1]);
    }

    #[test]
    fn viewing_from_counting_inverts() {
        assert_eq!(
            counting_to_viewing(&[1, 1, 2, 2, 1, 3]).unwrap(),
            vec![1, 2, 1, 2, 3, 1]
        );
        assert_eq!(counting_to_viewing(&[1]).unwrap(), vec![1]);
    }

    #[test]
    fn round_trip_over_a_long_slow_prefix() {
        let v = viewing_prefix(&Schedule::slow(), 10_000).unwrap();
        let c = viewing_to_counting(&v);
        assert_eq!(counting_to_viewing(&c).unwrap(), v);
    }

    #[test]
    fn inconsistent_counting_sequences_are_rejected() {
        assert_eq!(
            counting_to_viewing(&[2]),
            Err(Error::InvalidCountingSequence { index: 0 })
        );
        assert_eq!(
            counting_to_viewing(&[1, 3]),
            Err(Error::InvalidCountingSequence { index: 1 })
        );
        assert_eq!(
            counting_to_viewing(&[1, 0]),
            Err(Error::InvalidCountingSequence { index: 1 })
        );
        // second card counted twice before being counted once
        assert_eq!(
            counting_to_viewing(&[1, 2, 2]),
            Err(Error::InvalidCountingSequence { index: 2 })
        );
    }

    #[test]
    fn times_deck_of_the_earliest_states() {
        let g = GameState::new(Schedule::slow());
        assert_eq!(deck_to_times(&g), TimesDeck::new(vec![1]));

        let mut g = GameState::new(Schedule::slow());
        g.run_until_time(3).unwrap();
        // deck is back to 1,2,3,... with c_1 = 2, c_2 = 1
        assert_eq!(deck_to_times(&g), TimesDeck::new(vec![2, 1]));
    }

    #[test]
    fn decode_of_the_minimal_times_deck() {
        let (t, cards) = times_to_deck(&TimesDeck::new(vec![1])).unwrap();
        assert_eq!((t, cards), (1, vec![1]));
    }

    #[test]
    fn decode_rejects_ill_formed_input() {
        assert!(times_to_deck(&TimesDeck::new(vec![])).is_err());
        assert!(times_to_deck(&TimesDeck::new(vec![0, 0])).is_err());
        assert!(times_to_deck(&TimesDeck::new(vec![0, 5])).is_err());
    }

    #[test]
    fn times_deck_round_trips_against_the_engine() {
        let mut g = GameState::new(Schedule::slow());
        for stop in [2u64, 3, 10, 100, 1000] {
            g.run_until_time(stop).unwrap();
            let td = deck_to_times(&g);
            assert_eq!(td.time(), stop, "sum rule at t={stop}");
            let (t, cards) = times_to_deck(&td).unwrap();
            assert_eq!(t, stop);
            assert_eq!(
                cards,
                g.deck().prefix(cards.len() as u64),
                "deck at t={stop}"
            );
        }
    }

    #[test]
    fn times_deck_parses_and_prints() {
        let td: TimesDeck = "11,6,9,4,10,10,9,8,0,11,11,11".parse().unwrap();
        assert_eq!(td.time(), 100);
        assert_eq!(td.to_string(), "11,6,9,4,10,10,9,8,0,11,11,11");
        // trailing zeros are notational
        let td2: TimesDeck = "1,0,0".parse().unwrap();
        assert_eq!(td2, TimesDeck::new(vec![1]));
        assert!("1,x".parse::<TimesDeck>().is_err());
    }

    #[test]
    fn partial_information_matches_the_engine() {
        let mut g = GameState::new(Schedule::slow());
        for _ in 0..2000 {
            g.step().unwrap();
            let t = g.t();
            if t == 3 {
                // the one repetition of the identity deck: nothing displaced
                assert_eq!(card1_count_from_deck(g.deck()), None);
                continue;
            }
            assert_eq!(
                card1_count_from_deck(g.deck()),
                Some(g.count_of(1)),
                "c_1 read-off at t={t}"
            );
            for card in 1..=g.timetable().max_card_seen() {
                if g.count_of(card) > 0 {
                    assert!(
                        g.count_of(card) >= seen_card_count_floor(g.deck(), card),
                        "count floor at t={t} card={card}"
                    );
                }
            }
        }
    }
}
