//! Acceptance suite: one test per shipping criterion, each printing a
//! `ACCEPT <name>: PASS` line with its runtime (visible with
//! `cargo test --test acceptance -- --nocapture`).

mod common;

use common::*;
use flashcards::analysis::{
    check_cloud_bounds, check_general, check_min_gap, check_root2k, check_slow_theorems,
    estimate_c, gap_probe, point_cloud, stabilization_probe,
};
use flashcards::codec::{counting_to_viewing, deck_to_times, times_to_deck, viewing_to_counting};
use flashcards::engine::{counting_prefix, viewing_prefix, GameState};
use flashcards::tableau::{build_staircase, rsk_reversed};
use flashcards::variants::{
    deck_stats, sigma_viewing_prefix, variant_gap_check, SigmaFamily, SigmaGame,
};
use flashcards::{Deck, DeckOps, Error, GameOptions, NaiveDeck, Schedule, TimeTable};
use std::sync::LazyLock;
use std::time::Instant;

/// One slow-game timetable through `T_1(2001)`, shared by the heavy criteria.
static SLOW_TT: LazyLock<TimeTable> = LazyLock::new(|| {
    let opts = GameOptions {
        record_events: false,
        ..GameOptions::default()
    };
    let mut game = GameState::with_options(Schedule::slow(), opts);
    game.run_until_seen(1, 2001).expect("slow game runs freely");
    game.into_timetable()
});

fn pass(name: &str, t0: Instant) {
    println!("ACCEPT {name}: PASS ({:.2?})", t0.elapsed());
}

fn item_checked(report: &flashcards::analysis::CheckReport, name: &str) -> u64 {
    report
        .items
        .iter()
        .find(|i| i.name == name)
        .unwrap_or_else(|| panic!("missing check item {name}"))
        .checked
}

#[test]
fn golden_sequences_thirty_terms() {
    let t0 = Instant::now();
    let v = viewing_prefix(&Schedule::slow(), 30).unwrap();
    let c = counting_prefix(&Schedule::slow(), 30).unwrap();
    assert_eq!(v, VIEWING_30, "viewing sequence");
    assert_eq!(c, COUNTING_30, "counting sequence");
    pass("golden_sequences_thirty_terms", t0);
}

#[test]
fn clock_anchors() {
    let t0 = Instant::now();
    let mut g = GameState::new(Schedule::slow());
    g.run_until_time(3).unwrap();
    assert_eq!(g.timetable().time(1, 1), Some(1));
    assert_eq!(g.timetable().time(2, 1), Some(2));
    assert_eq!(g.timetable().time(1, 2), Some(3));
    pass("clock_anchors", t0);
}

/// The regenerated deck of times sums to 100 with first entry 11 (the front
/// card's in-progress viewing is counted). A snapshot taken before that
/// increment has a 10 there and sums to 99; the decoder's decrement rule
/// makes the two conventions agree on the card order, which is asserted
/// below.
#[test]
fn deck_snapshot_at_t100() {
    let t0 = Instant::now();
    let mut g = GameState::new(Schedule::slow());
    g.run_until_time(100).unwrap();
    assert_eq!(g.deck().prefix(15), DECK_AT_100, "deck order at t=100");
    let td = deck_to_times(&g);
    assert_eq!(td.entries(), TIMES_AT_100, "deck of times at t=100");
    assert_eq!(td.time(), 100, "count sum equals the clock");
    let (t, cards) = times_to_deck(&td).unwrap();
    assert_eq!(t, 100);
    assert_eq!(cards, DECK_AT_100[..12], "decode reproduces the card order");
    pass("deck_snapshot_at_t100", t0);
}

#[test]
fn slow_theorem_suite_to_n2000() {
    let t0 = Instant::now();
    let tt = &*SLOW_TT;
    let report = check_slow_theorems(tt, 2000, 10_000)
        .unwrap()
        .merge(check_root2k(tt, 2000, 2).unwrap())
        .merge(check_min_gap(tt, 2000).unwrap());
    assert!(report.pass(), "{report}");
    assert_eq!(item_checked(&report, "return_time_quadratic_upper"), 2000);
    assert_eq!(item_checked(&report, "return_time_triangular_lower"), 2000);
    assert_eq!(item_checked(&report, "first_view_quadratic_upper"), 2000);
    assert_eq!(
        item_checked(&report, "first_view_after_previous_return"),
        1999
    );
    assert_eq!(item_checked(&report, "first_view_before_return"), 1999);
    assert_eq!(item_checked(&report, "shifted_view_ordering"), 10_000);
    assert_eq!(item_checked(&report, "catch_up_views"), 1996); // isqrt(2k) > c0 from k = 5
    assert!(item_checked(&report, "gap_equals_i_plus_1") > 50_000);
    pass("slow_theorem_suite_to_n2000", t0);
}

/// Recap positions explode geometrically, so its leg runs under a 2^20
/// position cap: the game ends in the documented cap error right after
/// T_1(21) and every bound instance the capped data admits (n <= 20 of the
/// n <= 25 asked for) is checked. The affine and constant legs run in full.
#[test]
fn generalized_schedule_suite() {
    let t0 = Instant::now();

    // recap, positions capped
    let opts = GameOptions {
        cap: 1 << 20,
        track_limit: 4096,
        record_events: false,
        step_budget: 100_000_000,
    };
    let mut g = GameState::with_options(Schedule::recap(), opts);
    match g.run_until_seen(1, 26) {
        Err(Error::MaterializationCap { requested, cap }) => {
            assert_eq!((requested, cap), (1 << 21, 1 << 20));
        }
        other => panic!("expected the cap to end the recap run, got {other:?}"),
    }
    let tt = g.timetable();
    assert!(tt.time(1, 21).is_some() && tt.time(1, 22).is_none());
    let report = check_general(&Schedule::recap(), tt, 25).unwrap();
    assert!(report.pass(), "{report}");
    assert_eq!(item_checked(&report, "scheduled_card_first_view_lower"), 20);
    assert_eq!(item_checked(&report, "scheduled_card_first_view_upper"), 20);
    assert_eq!(item_checked(&report, "return_growth_bound"), 20);
    assert!(item_checked(&report, "first_view_cost_bound") > 100);
    assert!(item_checked(&report, "consecutive_view_gap_bound") > 1000);

    // constant-5: no card past the bound in 10^4 steps
    let mut g = GameState::new(Schedule::constant(5));
    g.run_until_time(10_000).unwrap();
    assert_eq!(g.timetable().max_card_seen(), 5);

    // affine 3k + 1 through T_1(201)
    let mut g = GameState::new(Schedule::affine(3, 1));
    g.run_until_seen(1, 201).unwrap();
    let report = check_general(&Schedule::affine(3, 1), g.timetable(), 200).unwrap();
    assert!(report.pass(), "{report}");
    assert_eq!(
        item_checked(&report, "scheduled_card_first_view_lower"),
        200
    );
    assert_eq!(item_checked(&report, "return_growth_bound"), 200);

    pass("generalized_schedule_suite", t0);
}

#[test]
fn codec_round_trips() {
    let t0 = Instant::now();
    let v = viewing_prefix(&Schedule::slow(), 10_000).unwrap();
    let c = counting_prefix(&Schedule::slow(), 10_000).unwrap();
    assert_eq!(viewing_to_counting(&v), c);
    assert_eq!(counting_to_viewing(&c).unwrap(), v);

    // deck-of-times round trip at 100 sampled times up to 10^5
    let mut stops: Vec<u64> = (0..150u64)
        .map(|s| 1 + flashcard_stream(s) % 100_000)
        .collect();
    stops.sort_unstable();
    stops.dedup();
    stops.truncate(100);
    assert_eq!(stops.len(), 100);
    let mut g = GameState::new(Schedule::slow());
    for &stop in &stops {
        g.run_until_time(stop).unwrap();
        let td = deck_to_times(&g);
        assert_eq!(td.time(), stop, "sum rule at t={stop}");
        let (t, cards) = times_to_deck(&td).unwrap();
        assert_eq!(t, stop);
        assert_eq!(
            cards,
            g.deck().prefix(cards.len() as u64),
            "decode at t={stop}"
        );
    }
    pass("codec_round_trips", t0);
}

// deterministic sample points for the codec criterion
fn flashcard_stream(i: u64) -> u64 {
    let mut z = i
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 31;
    z.wrapping_mul(0x94D0_49BB_1331_11EB)
}

#[test]
fn rsk_recording_tableaux() {
    let t0 = Instant::now();
    let mut g = GameState::new(Schedule::slow());
    g.run_until_time(1000).unwrap();
    let tt = g.into_timetable();
    for len in [10u64, 100, 1000] {
        let st = build_staircase(&tt, len).unwrap();
        let v = viewing_prefix(&Schedule::slow(), len).unwrap();
        let c = counting_prefix(&Schedule::slow(), len).unwrap();
        assert_eq!(rsk_reversed(&v).recording, st.rows(), "viewing, len={len}");
        assert_eq!(
            rsk_reversed(&c).recording,
            st.transpose().rows(),
            "counting, len={len}"
        );
    }
    // insertion-tableau columns read k, ..., 2, 1 top to bottom
    let v = viewing_prefix(&Schedule::slow(), 1000).unwrap();
    let p = rsk_reversed(&v).insertion;
    for j in 0..p[0].len() {
        let col: Vec<u64> = p.iter().filter_map(|row| row.get(j).copied()).collect();
        let expect: Vec<u64> = (1..=col.len() as u64).rev().collect();
        assert_eq!(col, expect, "column {j}");
    }
    pass("rsk_recording_tableaux", t0);
}

#[test]
fn oracle_equivalence() {
    let t0 = Instant::now();

    // deck level: 10^5 front-reinsertions with positions up to 10^4
    let mut fast = Deck::new();
    let mut naive = NaiveDeck::new();
    for s in 0..100_000u64 {
        let m = 1 + flashcard_stream(s) % 10_000;
        fast.remove_front_insert(m).unwrap();
        naive.remove_front_insert(m).unwrap();
        debug_assert_eq!(fast.front(), naive.front(), "front after op {s}");
        if s % 1024 == 0 {
            assert_eq!(fast.front(), naive.front(), "front after op {s}");
        }
    }
    assert_eq!(fast.active_len(), naive.active_len());
    assert_eq!(
        fast.prefix(fast.active_len()),
        naive.prefix(naive.active_len())
    );

    // engine level: identical event streams over 10^5 steps
    for schedule in [Schedule::slow(), Schedule::recap(), Schedule::uniform(7)] {
        let mut a = GameState::new(schedule.clone());
        let mut b = GameState::new_naive(schedule.clone());
        for _ in 0..100_000 {
            assert_eq!(a.step().unwrap(), b.step().unwrap(), "schedule {schedule}");
        }
        assert_eq!(a.deck().front(), b.deck().front());
    }

    // inversion counter vs the quadratic pair count on 10^3 sampled states
    let mut g = GameState::new(Schedule::slow());
    for _ in 0..1000 {
        for _ in 0..3 {
            g.step().unwrap();
        }
        let prefix = g.deck().prefix(g.deck().active_len());
        let brute = {
            let mut c = 0u64;
            for i in 0..prefix.len() {
                for j in i + 1..prefix.len() {
                    if prefix[i] > prefix[j] {
                        c += 1;
                    }
                }
            }
            c
        };
        assert_eq!(deck_stats(g.deck(), g.t()).inv, brute, "t={}", g.t());
    }
    pass("oracle_equivalence", t0);
}

#[test]
fn point_cloud_bounds() {
    let t0 = Instant::now();
    let pc = point_cloud(&SLOW_TT, 10_000, 100_000).unwrap();
    assert_eq!(
        pc.points.len(),
        90_001,
        "one point per clock tick in the window"
    );
    let report = check_cloud_bounds(&pc, 0.05);
    assert!(report.pass(), "{report}");
    // every point in the window is subject to both bounds
    assert_eq!(item_checked(&report, "above_line_x_plus_y_1"), 90_001);
    assert_eq!(item_checked(&report, "inside_circle_2_plus_eps"), 90_001);
    pass("point_cloud_bounds", t0);
}

/// Conjecture probes are reported, not asserted: the printed line carries
/// the measured values and whether they fall in the expected bands.
#[test]
fn conjecture_probes() {
    let t0 = Instant::now();
    let tt = &*SLOW_TT;
    let mut in_band = true;

    let stats = estimate_c(tt, 1000, 2000).unwrap();
    let c_ok = (stats.mean - 0.85).abs() <= 0.05;
    in_band &= c_ok;
    println!("  probe return-time constant: {stats} (within 0.85±0.05: {c_ok})");

    for card in 1..=5 {
        let probe = gap_probe(tt, card, 500).unwrap();
        let ok = probe.max_margin <= 0;
        in_band &= ok;
        println!(
            "  probe gap margin card {card}: {} at n={} (<= 0: {ok})",
            probe.max_margin, probe.witness_n
        );
    }

    for card in 2..=10 {
        let found = stabilization_probe(&Schedule::slow(), card, 10_000_000).unwrap();
        let ok = found.is_some();
        in_band &= ok;
        println!("  probe stabilization card {card}: t={found:?} (finite: {ok})");
    }

    println!("  all probes within expected bands: {in_band}");
    pass("conjecture_probes", t0);
}

#[test]
fn variant_goldens() {
    let t0 = Instant::now();
    assert_eq!(
        sigma_viewing_prefix(&SigmaFamily::Transposition, 15).unwrap(),
        TRANSPOSITION_15
    );
    assert_eq!(
        sigma_viewing_prefix(&SigmaFamily::Reversal, 15).unwrap(),
        REVERSAL_15
    );

    let report = variant_gap_check(50, 50).unwrap();
    assert!(report.pass(), "{report}");
    assert_eq!(report.items[0].checked, 50 * 49);

    // cycle family == base engine over 10^4 steps
    for schedule in [Schedule::slow(), Schedule::recap(), Schedule::uniform(5)] {
        let base = viewing_prefix(&schedule, 10_000).unwrap();
        let mut game = SigmaGame::new(SigmaFamily::Cycle(schedule.clone()));
        game.run_until_time(10_000).unwrap();
        let cards: Vec<u64> = game
            .timetable()
            .events()
            .unwrap()
            .iter()
            .map(|e| e.card)
            .collect();
        assert_eq!(base, cards, "cycle family vs base, schedule {schedule}");
    }
    pass("variant_goldens", t0);
}
