//! The game clock: drives a deck under a schedule and records when each
//! card is seen.
//!
//! Clock convention: at `t = 1` card 1 is at the front and has been viewed
//! once. A step moves the front card (seen `k` times) to position `p_k`,
//! advances the clock, and counts the card now at the front. So `T_1(1) = 1`,
//! `T_2(1) = 2`, `T_1(2) = 3` in the slow game, and the viewing sequence
//! starts `1, 2, 1, 2, 3, ...`.

use crate::deck::{Deck, DeckOps, NaiveDeck, DEFAULT_MAX_POSITION};
use crate::error::{Error, Result};
use crate::schedule::Schedule;
use std::collections::HashMap;
use std::io::{self, Write};

/// One clock tick: at time `t`, `card` was seen for the `count`-th time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ViewEvent {
    pub t: u64,
    pub card: u64,
    pub count: u64,
}

/// Sparse table of viewing times `T_n(k)`, fed by the event stream.
///
/// First-view times are kept for every card. Full per-card rows (all of
/// `T_n(1), T_n(2), ...`) are kept for cards up to `track_limit`; schedules
/// that scatter cards across millions of positions set a finite limit to
/// keep memory flat. The optional event log stores the raw stream for the
/// codec and tableau layers.
#[derive(Clone, Debug)]
pub struct TimeTable {
    first_view: Vec<u64>,
    rows: Vec<Vec<u64>>,
    log: Option<Vec<ViewEvent>>,
    track_limit: u64,
    max_time: u64,
    max_card_seen: u64,
}

impl TimeTable {
    pub(crate) fn new(track_limit: u64, record_events: bool) -> Self {
        TimeTable {
            first_view: Vec::new(),
            rows: Vec::new(),
            log: record_events.then(Vec::new),
            track_limit,
            max_time: 0,
            max_card_seen: 0,
        }
    }

    pub(crate) fn record(&mut self, ev: ViewEvent) {
        let idx = (ev.card - 1) as usize;
        if ev.count == 1 {
            if self.first_view.len() <= idx {
                self.first_view.resize(idx + 1, 0);
            }
            self.first_view[idx] = ev.t;
            self.max_card_seen = self.max_card_seen.max(ev.card);
        }
        if ev.card <= self.track_limit {
            if self.rows.len() <= idx {
                self.rows.resize(idx + 1, Vec::new());
            }
            let row = &mut self.rows[idx];
            debug_assert_eq!(row.len() as u64 + 1, ev.count);
            row.push(ev.t);
        }
        if let Some(log) = &mut self.log {
            log.push(ev);
        }
        self.max_time = ev.t;
    }

    /// `T_n(k)`, if recorded.
    pub fn time(&self, n: u64, k: u64) -> Option<u64> {
        debug_assert!(n >= 1 && k >= 1);
        if k == 1 {
            return self.first_view(n);
        }
        self.rows
            .get((n - 1) as usize)
            .and_then(|row| row.get((k - 1) as usize))
            .copied()
    }

    /// `T_n(1)`, if card `n` has been seen.
    pub fn first_view(&self, n: u64) -> Option<u64> {
        match self.first_view.get((n - 1) as usize) {
            Some(&t) if t > 0 => Some(t),
            _ => None,
        }
    }

    /// All recorded viewing times of card `n`, in order of `k`.
    pub fn times_for(&self, n: u64) -> Result<&[u64]> {
        if n > self.track_limit {
            return Err(Error::UntrackedCard {
                card: n,
                limit: self.track_limit,
            });
        }
        Ok(self
            .rows
            .get((n - 1) as usize)
            .map(|r| r.as_slice())
            .unwrap_or(&[]))
    }

    /// Number of recorded viewings of card `n` (tracked cards only).
    pub fn views_recorded(&self, n: u64) -> Result<u64> {
        Ok(self.times_for(n)?.len() as u64)
    }

    /// `c_n(t)` for a tracked card: viewings of `n` at or before `t`.
    pub fn count_at(&self, n: u64, t: u64) -> Result<u64> {
        Ok(self.times_for(n)?.partition_point(|&x| x <= t) as u64)
    }

    /// Latest time recorded.
    pub fn max_time(&self) -> u64 {
        self.max_time
    }

    /// Largest card seen so far.
    pub fn max_card_seen(&self) -> u64 {
        self.max_card_seen
    }

    /// Whether every seen card has a full row.
    pub fn fully_tracked(&self) -> bool {
        self.max_card_seen <= self.track_limit
    }

    /// The raw event stream, if the game was run with event recording.
    pub fn events(&self) -> Option<&[ViewEvent]> {
        self.log.as_deref()
    }

    /// Cards with at least one tracked viewing, paired with their rows.
    pub fn tracked_rows(&self) -> impl Iterator<Item = (u64, &[u64])> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| (i as u64 + 1, r.as_slice()))
    }
}

/// Writes the event log as CSV (`t,card,k`, exact integers).
pub fn write_event_log_csv<W: Write>(events: &[ViewEvent], mut w: W) -> io::Result<()> {
    writeln!(w, "t,card,k")?;
    for ev in events {
        writeln!(w, "{},{},{}", ev.t, ev.card, ev.count)?;
    }
    Ok(())
}

/// Knobs for a game run.
#[derive(Clone, Copy, Debug)]
pub struct GameOptions {
    /// Materialization cap handed to the deck.
    pub cap: u64,
    /// Cards up to this value keep full viewing-time rows.
    pub track_limit: u64,
    /// Keep the raw event log.
    pub record_events: bool,
    /// Step budget for [`GameState::run_until_seen`].
    pub step_budget: u64,
}

impl Default for GameOptions {
    fn default() -> Self {
        GameOptions {
            cap: DEFAULT_MAX_POSITION,
            track_limit: u64::MAX,
            record_events: true,
            step_budget: 100_000_000,
        }
    }
}

/// A running game: deck, clock, per-card counters, and the timetable.
#[derive(Clone, Debug)]
pub struct GameState<D: DeckOps = Deck> {
    deck: D,
    schedule: Schedule,
    t: u64,
    counts: Vec<u64>,
    current: ViewEvent,
    timetable: TimeTable,
    step_budget: u64,
}

impl GameState<Deck> {
    /// Fresh slow-start game at `t = 1` with card 1 just viewed.
    pub fn new(schedule: Schedule) -> Self {
        Self::with_options(schedule, GameOptions::default())
    }

    pub fn with_options(schedule: Schedule, opts: GameOptions) -> Self {
        Self::with_deck(Deck::with_cap(opts.cap), schedule, opts)
    }
}

impl GameState<NaiveDeck> {
    /// Same game over the flat reference deck.
    pub fn new_naive(schedule: Schedule) -> Self {
        let opts = GameOptions::default();
        Self::with_deck(NaiveDeck::with_cap(opts.cap), schedule, opts)
    }
}

impl<D: DeckOps> GameState<D> {
    pub fn with_deck(deck: D, schedule: Schedule, opts: GameOptions) -> Self {
        let mut timetable = TimeTable::new(opts.track_limit, opts.record_events);
        let first = ViewEvent {
            t: 1,
            card: 1,
            count: 1,
        };
        timetable.record(first);
        GameState {
            deck,
            schedule,
            t: 1,
            counts: vec![1],
            current: first,
            timetable,
            step_budget: opts.step_budget,
        }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn current(&self) -> ViewEvent {
        self.current
    }

    pub fn deck(&self) -> &D {
        &self.deck
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn timetable(&self) -> &TimeTable {
        &self.timetable
    }

    pub fn into_timetable(self) -> TimeTable {
        self.timetable
    }

    /// `c_n(t)` at the current clock time.
    pub fn count_of(&self, n: u64) -> u64 {
        debug_assert!(n >= 1);
        self.counts.get((n - 1) as usize).copied().unwrap_or(0)
    }

    /// Moves the front card to its scheduled position and views the next one.
    pub fn step(&mut self) -> Result<ViewEvent> {
        let front = self.deck.front();
        let k = self.count_of(front);
        let m = self.schedule.position(k)?;
        self.deck.remove_front_insert(m)?;
        self.t += 1;
        let card = self.deck.front();
        let idx = (card - 1) as usize;
        if self.counts.len() <= idx {
            self.counts.resize(idx + 1, 0);
        }
        self.counts[idx] += 1;
        let ev = ViewEvent {
            t: self.t,
            card,
            count: self.counts[idx],
        };
        self.timetable.record(ev);
        self.current = ev;
        Ok(ev)
    }

    /// Runs the clock up to and including time `t_stop`.
    pub fn run_until_time(&mut self, t_stop: u64) -> Result<()> {
        while self.t < t_stop {
            self.step()?;
        }
        Ok(())
    }

    /// Runs until card `n` has been seen `k` times; returns `T_n(k)`.
    ///
    /// Bounded schedules never show cards past their bound, so the run is
    /// guarded by the configured step budget.
    pub fn run_until_seen(&mut self, n: u64, k: u64) -> Result<u64> {
        if let Some(t) = self.timetable.time(n, k) {
            return Ok(t);
        }
        let mut steps = 0u64;
        loop {
            if steps >= self.step_budget {
                return Err(Error::StepBudget {
                    budget: self.step_budget,
                });
            }
            let ev = self.step()?;
            steps += 1;
            if ev.card == n && ev.count >= k {
                return Ok(ev.t);
            }
        }
    }
}

/// The first `len` terms of the viewing sequence under `schedule`.
pub fn viewing_prefix(schedule: &Schedule, len: u64) -> Result<Vec<u64>> {
    events_prefix(schedule, len).map(|evs| evs.into_iter().map(|e| e.card).collect())
}

/// The first `len` terms of the counting sequence under `schedule`.
pub fn counting_prefix(schedule: &Schedule, len: u64) -> Result<Vec<u64>> {
    events_prefix(schedule, len).map(|evs| evs.into_iter().map(|e| e.count).collect())
}

/// The first `len` events under `schedule`.
pub fn events_prefix(schedule: &Schedule, len: u64) -> Result<Vec<ViewEvent>> {
    debug_assert!(len >= 1);
    let mut game = GameState::new(schedule.clone());
    game.run_until_time(len)?;
    Ok(game.timetable().events().expect("events recorded")[..len as usize].to_vec())
}

/// Scans `t <= t_max` for pairs of times at which the whole deck permutation
/// repeats. Returns `(earlier, later)` pairs keyed to the earliest occurrence.
pub fn find_deck_repetitions(schedule: &Schedule, t_max: u64) -> Result<Vec<(u64, u64)>> {
    let mut game = GameState::new(schedule.clone());
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut hits = Vec::new();
    for t in 1..=t_max {
        if t > 1 {
            game.step()?;
        }
        let mut state = game.deck().prefix(game.deck().active_len());
        while state.last().copied() == Some(state.len() as u64) {
            state.pop();
        }
        match seen.get(&state) {
            Some(&t0) => hits.push((t0, t)),
            None => {
                seen.insert(state, t);
            }
        }
    }
    Ok(hits)
}
