//! Empirical verification of the proved inequalities on the viewing times
//! `T_n(k)`, probes for the open conjectures, and the rescaled point cloud.
//!
//! Theorem-backed checks ([`check_slow_theorems`], [`check_root2k`],
//! [`check_min_gap`], [`check_general`], the cloud line bound) are hard:
//! any violation is an implementation bug and fails the report. Conjecture
//! probes ([`estimate_c`], [`gap_probe`], [`stabilization_probe`],
//! [`curve_intercept_probe`]) only report what they saw.
//!
//! Scans over parameter ranges are independent per instance and run on
//! rayon under the `parallel` feature.

use crate::engine::{GameState, TimeTable};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::stream;
use crate::schedule::Schedule;
use std::io::{self, Write};

const MAX_STORED_VIOLATIONS: usize = 20;

/// One named check over a parameter range.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub range: String,
    /// Instances actually evaluated (availability-guarded checks skip
    /// instances the timetable cannot answer).
    pub checked: u64,
    /// Total violations found.
    pub violation_count: u64,
    /// Up to [`MAX_STORED_VIOLATIONS`] violation descriptions.
    pub violations: Vec<String>,
    /// The extremal (tightest) instance seen.
    pub witness: Option<String>,
}

impl CheckItem {
    pub fn pass(&self) -> bool {
        self.violation_count == 0
    }
}

/// A bundle of check items; passes iff every item has no violations.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub title: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        CheckReport {
            title: title.into(),
            items: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(CheckItem::pass)
    }

    pub fn violation_count(&self) -> u64 {
        self.items.iter().map(|i| i.violation_count).sum()
    }

    /// Associative merge, so reports from disjoint ranges can be combined.
    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        self.items.extend(other.items);
        self
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "name,range,checked,violations,witness")?;
        for it in &self.items {
            writeln!(
                w,
                "{},{},{},{},{}",
                it.name,
                it.range,
                it.checked,
                it.violation_count,
                it.witness.as_deref().unwrap_or("").replace(',', ";")
            )?;
        }
        Ok(())
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "== {} ==", self.title)?;
        for it in &self.items {
            let status = if it.pass() { "PASS" } else { "FAIL" };
            write!(
                f,
                "[{status}] {} ({}): {} checked",
                it.name, it.range, it.checked
            )?;
            match &it.witness {
                Some(wit) if it.pass() => writeln!(f, "; {wit}")?,
                _ => writeln!(f)?,
            }
            if !it.pass() {
                writeln!(f, "       {} violations", it.violation_count)?;
                for v in &it.violations {
                    writeln!(f, "       {v}")?;
                }
            }
        }
        writeln!(f, "overall: {}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

/// One evaluated instance: nonnegative slack means the inequality holds.
#[derive(Clone, Copy, Debug)]
struct Inst {
    slack: i128,
    a: u64,
    b: u64,
}

fn collect_item<F>(name: &str, range: String, insts: Vec<Option<Inst>>, label: F) -> CheckItem
where
    F: Fn(&Inst) -> String,
{
    let mut checked = 0u64;
    let mut violation_count = 0u64;
    let mut violations = Vec::new();
    let mut tightest: Option<Inst> = None;
    for inst in insts.into_iter().flatten() {
        checked += 1;
        if inst.slack < 0 {
            violation_count += 1;
            if violations.len() < MAX_STORED_VIOLATIONS {
                violations.push(format!("{} (slack {})", label(&inst), inst.slack));
            }
        }
        if tightest.is_none_or(|t| inst.slack < t.slack) {
            tightest = Some(inst);
        }
    }
    CheckItem {
        name: name.to_string(),
        range,
        checked,
        violation_count,
        violations,
        witness: tightest.map(|t| format!("tightest: {} (slack {})", label(&t), t.slack)),
    }
}

fn require_t1(tt: &TimeTable, n: u64) -> Result<()> {
    if tt.time(1, n).is_none() {
        return Err(Error::IncompleteTimeTable {
            needed: n,
            have: tt.views_recorded(1).unwrap_or(0),
        });
    }
    Ok(())
}

/// Hard checks for the slow game, over a timetable covering `T_1(n_max)`:
///
/// * `T_1(n-1) + n - 1 <= T_n(1) < T_1(n)`
/// * `binom(n+1, 2) <= T_1(n) <= n^2 - n + 1`
/// * `T_n(1) <= (n-1)^2 + 1`
/// * `T_i(1+k) < T_1(i+k)` on `samples` sampled pairs
/// * once `c_i = c_j` holds, the counts never drift more than 1 apart
pub fn check_slow_theorems(tt: &TimeTable, n_max: u64, samples: u64) -> Result<CheckReport> {
    require_t1(tt, n_max)?;
    let mut report = CheckReport::new(format!("slow-game theorems, n <= {n_max}"));
    let t1 = |n: u64| tt.time(1, n).unwrap() as i128;
    let tn1 = |n: u64| tt.first_view(n).unwrap() as i128;

    let insts = par::map_range(2, n_max, |n| {
        let slack = tn1(n) - (t1(n - 1) + n as i128 - 1);
        Some(Inst { slack, a: n, b: 0 })
    });
    report.items.push(collect_item(
        "first_view_after_previous_return",
        format!("2..={n_max}"),
        insts,
        |i| format!("T_{}(1) vs T_1({}) + {}", i.a, i.a - 1, i.a - 1),
    ));

    let insts = par::map_range(2, n_max, |n| {
        let slack = t1(n) - tn1(n) - 1;
        Some(Inst { slack, a: n, b: 0 })
    });
    report.items.push(collect_item(
        "first_view_before_return",
        format!("2..={n_max}"),
        insts,
        |i| format!("T_{}(1) < T_1({})", i.a, i.a),
    ));

    let insts = par::map_range(1, n_max, |n| {
        let n_ = n as i128;
        Some(Inst {
            slack: n_ * n_ - n_ + 1 - t1(n),
            a: n,
            b: 0,
        })
    });
    report.items.push(collect_item(
        "return_time_quadratic_upper",
        format!("1..={n_max}"),
        insts,
        |i| format!("T_1({}) <= {}^2 - {} + 1", i.a, i.a, i.a),
    ));

    let insts = par::map_range(1, n_max, |n| {
        let n_ = n as i128;
        Some(Inst {
            slack: t1(n) - n_ * (n_ + 1) / 2,
            a: n,
            b: 0,
        })
    });
    report.items.push(collect_item(
        "return_time_triangular_lower",
        format!("1..={n_max}"),
        insts,
        |i| format!("T_1({}) >= binom({}+1,2)", i.a, i.a),
    ));

    let insts = par::map_range(1, n_max, |n| {
        let n_ = n as i128;
        Some(Inst {
            slack: (n_ - 1) * (n_ - 1) + 1 - tn1(n),
            a: n,
            b: 0,
        })
    });
    report.items.push(collect_item(
        "first_view_quadratic_upper",
        format!("1..={n_max}"),
        insts,
        |i| format!("T_{}(1) <= ({}-1)^2 + 1", i.a, i.a),
    ));

    // T_i(1+k) < T_1(i+k): a missing T_i(1+k) is itself a violation, since
    // every recorded time lies below T_1(n_max) >= T_1(i+k). Pairs need
    // i >= 2, k >= 1, i + k <= n_max, so sampling starts at n_max = 3.
    let pair_seed = 0x5A0_10AD;
    let insts = if samples == 0 || n_max < 3 {
        Vec::new()
    } else {
        par::map_range(0, samples - 1, |s| {
            let i = 2 + stream(pair_seed, 2 * s) % (n_max - 2);
            let k = 1 + stream(pair_seed, 2 * s + 1) % (n_max - i);
            let slack = match tt.time(i, 1 + k) {
                Some(tik) => t1(i + k) - tik as i128 - 1,
                None => -1,
            };
            Some(Inst { slack, a: i, b: k })
        })
    };
    report.items.push(collect_item(
        "shifted_view_ordering",
        format!("{samples} sampled (i,k), i+k <= {n_max}"),
        insts,
        |i| format!("T_{}({}) < T_1({})", i.a, i.b + 1, i.a + i.b),
    ));

    // After c_i = c_j first holds (a count m whose occupancy intervals
    // overlap), neither count may reach m+2 before the other reaches m+1.
    let pairs: Vec<(u64, u64)> = {
        let hi = n_max.min(200);
        let mut ps = Vec::new();
        for s in 0..200u64 {
            let i = 1 + stream(0xAF7E9, 2 * s) % hi;
            let j = 1 + stream(0xAF7E9, 2 * s + 1) % hi;
            if i < j {
                ps.push((i, j));
            }
        }
        ps.sort_unstable();
        ps.dedup();
        ps
    };
    let insts = par::map_items(&pairs, |&(i, j)| {
        let (ri, rj) = (tt.times_for(i).ok()?, tt.times_for(j).ok()?);
        let len = ri.len().min(rj.len());
        let mut m_eq = None;
        for m in 1..len {
            let lo = ri[m - 1].max(rj[m - 1]);
            let hi = ri[m].min(rj[m]);
            if lo < hi {
                m_eq = Some(m);
                break;
            }
        }
        let m_eq = m_eq?;
        let mut slack = i128::MAX;
        for m in m_eq..len.saturating_sub(1) {
            // counts sit at m from row[m-1]; T(m+1) = row[m], T(m+2) = row[m+1]
            slack = slack.min(ri[m + 1] as i128 - rj[m] as i128);
            slack = slack.min(rj[m + 1] as i128 - ri[m] as i128);
        }
        if slack == i128::MAX {
            return None;
        }
        Some(Inst { slack, a: i, b: j })
    });
    report.items.push(collect_item(
        "count_gap_after_equality",
        format!("{} sampled pairs (i,j)", pairs.len()),
        insts,
        |i| format!("|c_{} - c_{}| <= 1 after equality", i.a, i.b),
    ));

    Ok(report)
}

/// Hard check: `T_k(l) < T_1(k+1)` for every `l <= isqrt(2k) - c0`.
/// `c0` absorbs the unquantified additive constant; the default 2 was
/// calibrated by a full scan over `k <= 500`.
pub fn check_root2k(tt: &TimeTable, k_max: u64, c0: u64) -> Result<CheckReport> {
    require_t1(tt, k_max + 1)?;
    let mut report = CheckReport::new(format!("sqrt(2k) view-count catch-up, k <= {k_max}"));
    let insts = par::map_range(1, k_max, |k| {
        let l_max = (2 * k).isqrt().saturating_sub(c0);
        if l_max == 0 {
            return None;
        }
        let t1k1 = tt.time(1, k + 1).unwrap() as i128;
        let mut worst: Option<Inst> = None;
        for l in 1..=l_max {
            let slack = match tt.time(k, l) {
                Some(tkl) => t1k1 - tkl as i128 - 1,
                None => -1,
            };
            if worst.is_none_or(|w| slack < w.slack) {
                worst = Some(Inst { slack, a: k, b: l });
            }
        }
        worst
    });
    report.items.push(collect_item(
        "catch_up_views",
        format!("k in 1..={k_max}, l <= isqrt(2k) - {c0}"),
        insts,
        |i| format!("T_{}({}) < T_1({})", i.a, i.b, i.a + 1),
    ));
    Ok(report)
}

/// Hard check: `T_k(i+1) - T_k(i) = i + 1` whenever `binom(i+1, 2) < k`.
/// Availability-guarded: instances past the recorded rows are skipped.
pub fn check_min_gap(tt: &TimeTable, k_max: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("minimal consecutive-view gaps, k <= {k_max}"));
    let insts_nested = par::map_range(2, k_max, |k| {
        let row = match tt.times_for(k) {
            Ok(r) => r,
            Err(_) => return Vec::new(),
        };
        let mut out = Vec::new();
        let mut i = 1u64;
        while i * (i + 1) / 2 < k {
            let (Some(&ti), Some(&ti1)) = (row.get(i as usize - 1), row.get(i as usize)) else {
                break;
            };
            let gap = ti1 as i128 - ti as i128;
            // equality: negative slack on deviation in either direction
            let slack = -(gap - (i as i128 + 1)).abs();
            out.push(Some(Inst { slack, a: k, b: i }));
            i += 1;
        }
        out
    });
    let insts: Vec<Option<Inst>> = insts_nested.into_iter().flatten().collect();
    report.items.push(collect_item(
        "gap_equals_i_plus_1",
        format!("k in 2..={k_max}, binom(i+1,2) < k"),
        insts,
        |i| format!("T_{}({}) - T_{}({}) = {}", i.a, i.b + 1, i.a, i.b, i.b + 1),
    ));
    Ok(report)
}

/// Hard checks for a general unbounded schedule:
///
/// * increasing schedules: `T_1(n) + p_n - 1 <= T_{p_n}(1) < T_1(n+1)`,
///   `T_{p_{n-1}}(1+k) < T_1(n+k)`, `T_1(n+1) <= 1 + n * p_n`, and
///   `T_i(n+1) - T_i(n) <= (p_n - 1) * n + 1`
/// * any schedule: `T_n(1) <= 1 + (n-1) * min{j : p_j >= n}`
///
/// The consecutive-view gap bound is restricted to increasing schedules:
/// its per-card view counting needs passage to be forced by the n-th view,
/// and schedules that can repeat small positions (e.g. uniform random,
/// which may draw p = 1) produce real counterexamples — see the
/// `difference_bound_fails_for_non_monotone_schedules` test.
///
/// Instances whose data lies beyond the timetable are skipped, not failed;
/// the report's `checked` counts say how much was covered.
pub fn check_general(schedule: &Schedule, tt: &TimeTable, n_max: u64) -> Result<CheckReport> {
    if !schedule.is_unbounded() {
        return Err(Error::UnsuitableSchedule(format!(
            "{schedule} is bounded; unseen cards make these bounds vacuous"
        )));
    }
    let mut report = CheckReport::new(format!(
        "general-schedule bounds ({schedule}), n <= {n_max}"
    ));
    // largest n with T_1(n+1) recorded
    let n_lim = n_max.min(tt.views_recorded(1)?.saturating_sub(1));
    if n_lim == 0 {
        return Err(Error::IncompleteTimeTable {
            needed: 2,
            have: tt.views_recorded(1)?,
        });
    }
    let t1 = |n: u64| tt.time(1, n).unwrap() as i128;
    let pos = |k: u64| schedule.position(k);

    if schedule.is_increasing() {
        let insts = par::map_range(1, n_lim, |n| {
            let p = pos(n).ok()?;
            let tp1 = tt.first_view(p)? as i128;
            Some(Inst {
                slack: tp1 - (t1(n) + p as i128 - 1),
                a: n,
                b: p,
            })
        });
        report.items.push(collect_item(
            "scheduled_card_first_view_lower",
            format!("1..={n_lim}"),
            insts,
            |i| format!("T_1({}) + p_{} - 1 <= T_{}(1)", i.a, i.a, i.b),
        ));

        let insts = par::map_range(1, n_lim, |n| {
            let p = pos(n).ok()?;
            let tp1 = tt.first_view(p)? as i128;
            Some(Inst {
                slack: t1(n + 1) - tp1 - 1,
                a: n,
                b: p,
            })
        });
        report.items.push(collect_item(
            "scheduled_card_first_view_upper",
            format!("1..={n_lim}"),
            insts,
            |i| format!("T_{}(1) < T_1({})", i.b, i.a + 1),
        ));

        // shifted ordering, sampled; needs tracked rows for p_{n-1}
        let insts = par::map_range(0, 4095, |s| {
            let n = 2 + stream(0x6E4A, 2 * s) % (n_lim - 1).max(1);
            let k = stream(0x6E4A, 2 * s + 1) % (n_lim - n + 1).max(1);
            let p = pos(n - 1).ok()?;
            let tpk = tt.time(p, 1 + k)?;
            Some(Inst {
                slack: t1(n + k) - tpk as i128 - 1,
                a: n,
                b: k,
            })
        });
        report.items.push(collect_item(
            "shifted_view_ordering",
            format!("4096 sampled (n,k), n+k <= {n_lim}"),
            insts,
            |i| format!("T_p({}) at view {} < T_1({})", i.a - 1, i.b + 1, i.a + i.b),
        ));

        let insts = par::map_range(1, n_lim, |n| {
            let p = pos(n).ok()?;
            Some(Inst {
                slack: 1 + (n as i128) * (p as i128) - t1(n + 1),
                a: n,
                b: p,
            })
        });
        report.items.push(collect_item(
            "return_growth_bound",
            format!("1..={n_lim}"),
            insts,
            |i| format!("T_1({}) <= 1 + {} * p_{}", i.a + 1, i.a, i.a),
        ));

        // T_i(n+1) - T_i(n) <= (p_n - 1) * n + 1 over tracked rows
        let tracked: Vec<u64> = sample_cards_tracked(tt, 256);
        let insts_nested = par::map_items(&tracked, |&i| {
            let row = match tt.times_for(i) {
                Ok(r) => r,
                Err(_) => return Vec::new(),
            };
            let mut out = Vec::new();
            for n in 1..row.len().min(n_max as usize + 1) {
                let Ok(p) = pos(n as u64) else { continue };
                let gap = row[n] as i128 - row[n - 1] as i128;
                let bound = (p as i128 - 1) * n as i128 + 1;
                out.push(Some(Inst {
                    slack: bound - gap,
                    a: i,
                    b: n as u64,
                }));
            }
            out
        });
        let insts: Vec<Option<Inst>> = insts_nested.into_iter().flatten().collect();
        report.items.push(collect_item(
            "consecutive_view_gap_bound",
            format!("{} tracked cards, n <= {n_max}", tracked.len()),
            insts,
            |i| {
                format!(
                    "T_{}({}) - T_{}({}) <= (p_{} - 1)*{} + 1",
                    i.a,
                    i.b + 1,
                    i.a,
                    i.b,
                    i.b,
                    i.b
                )
            },
        ));
    }

    // T_n(1) <= 1 + (n-1) * min{j : p_j >= n}, sampled over seen cards
    let cards = sample_cards(tt, 512);
    let insts = par::map_items(&cards, |&n| {
        let tn1 = tt.first_view(n)? as i128;
        let min_j = (1..=1_000_000u64).find(|&j| pos(j).is_ok_and(|p| p >= n))?;
        Some(Inst {
            slack: 1 + (n as i128 - 1) * min_j as i128 - tn1,
            a: n,
            b: min_j,
        })
    });
    report.items.push(collect_item(
        "first_view_cost_bound",
        format!("{} sampled cards", cards.len()),
        insts,
        |i| format!("T_{}(1) <= 1 + ({}-1) * {}", i.a, i.a, i.b),
    ));

    Ok(report)
}

/// Evenly sampled cards that have been seen at least once.
fn sample_cards(tt: &TimeTable, max: u64) -> Vec<u64> {
    let hi = tt.max_card_seen();
    if hi == 0 {
        return Vec::new();
    }
    let step = (hi / max).max(1);
    (1..=hi)
        .step_by(step as usize)
        .filter(|&n| tt.first_view(n).is_some())
        .collect()
}

fn sample_cards_tracked(tt: &TimeTable, max: usize) -> Vec<u64> {
    let cards: Vec<u64> = tt.tracked_rows().map(|(n, _)| n).collect();
    let step = (cards.len() / max).max(1);
    cards.into_iter().step_by(step).collect()
}

/// Statistics of the ratios `T_1(n) / n^2` over a range of `n`.
#[derive(Clone, Copy, Debug)]
pub struct RatioStats {
    pub n_lo: u64,
    pub n_hi: u64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl RatioStats {
    fn from_ratios(n_lo: u64, n_hi: u64, ratios: &[f64]) -> Self {
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        RatioStats {
            n_lo,
            n_hi,
            min,
            max,
            mean,
        }
    }
}

impl std::fmt::Display for RatioStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n in [{}, {}]: min {:.6}, max {:.6}, mean {:.6}",
            self.n_lo, self.n_hi, self.min, self.max, self.mean
        )
    }
}

/// Conjecture probe: the quadratic-growth constant `T_1(n) / n^2`.
pub fn estimate_c(tt: &TimeTable, n_lo: u64, n_hi: u64) -> Result<RatioStats> {
    require_t1(tt, n_hi)?;
    let ratios: Vec<f64> = (n_lo..=n_hi)
        .map(|n| tt.time(1, n).unwrap() as f64 / (n as f64 * n as f64))
        .collect();
    Ok(RatioStats::from_ratios(n_lo, n_hi, &ratios))
}

/// Result of [`gap_probe`]: the extremal value of
/// `(T_i(n+1) - T_i(n)) - 2n`. Nonpositive is consistent with the
/// conjectured `<= 2n` gap bound.
#[derive(Clone, Copy, Debug)]
pub struct GapProbe {
    pub card: u64,
    pub n_max: u64,
    pub max_margin: i64,
    pub witness_n: u64,
    pub witness_gap: u64,
}

pub fn gap_probe(tt: &TimeTable, card: u64, n_max: u64) -> Result<GapProbe> {
    let row = tt.times_for(card)?;
    if (row.len() as u64) < n_max + 1 {
        return Err(Error::IncompleteTimeTable {
            needed: n_max + 1,
            have: row.len() as u64,
        });
    }
    let mut probe = GapProbe {
        card,
        n_max,
        max_margin: i64::MIN,
        witness_n: 0,
        witness_gap: 0,
    };
    for n in 1..=n_max {
        let gap = row[n as usize] - row[n as usize - 1];
        let margin = gap as i64 - 2 * n as i64;
        if margin > probe.max_margin {
            probe = GapProbe {
                card,
                n_max,
                max_margin: margin,
                witness_n: n,
                witness_gap: gap,
            };
        }
    }
    Ok(probe)
}

/// Conjecture probe: the first time card `card` has been seen exactly as
/// often as card 1. `None` if not within `budget` steps.
pub fn stabilization_probe(schedule: &Schedule, card: u64, budget: u64) -> Result<Option<u64>> {
    if card == 1 {
        return Ok(Some(1));
    }
    let mut game = GameState::new(schedule.clone());
    for _ in 0..budget {
        game.step()?;
        if game.count_of(card) == game.count_of(1) {
            return Ok(Some(game.t()));
        }
    }
    Ok(None)
}

/// A rescaled viewing-time point: `(n, k, T_n(k))` plotted at
/// `(n, k) / sqrt(T_n(k))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloudPoint {
    pub n: u64,
    pub k: u64,
    pub t: u64,
    pub x: f64,
    pub y: f64,
}

impl CloudPoint {
    pub fn new(n: u64, k: u64, t: u64) -> Self {
        let s = (t as f64).sqrt();
        CloudPoint {
            n,
            k,
            t,
            x: n as f64 / s,
            y: k as f64 / s,
        }
    }
}

/// All rescaled points with `T_n(k)` inside a time interval.
#[derive(Clone, Debug)]
pub struct PointCloud {
    pub lo: u64,
    pub hi: u64,
    pub points: Vec<CloudPoint>,
}

/// Builds the point cloud for `T_n(k) in [lo, hi]`. Needs a fully tracked
/// timetable covering `hi`.
pub fn point_cloud(tt: &TimeTable, lo: u64, hi: u64) -> Result<PointCloud> {
    if tt.max_time() < hi {
        return Err(Error::IncompleteTimeTable {
            needed: hi,
            have: tt.max_time(),
        });
    }
    if !tt.fully_tracked() {
        return Err(Error::UntrackedCard {
            card: tt.max_card_seen(),
            limit: tt.max_card_seen() - 1,
        });
    }
    let rows: Vec<(u64, &[u64])> = tt.tracked_rows().collect();
    let per_row = par::map_items(&rows, |&(n, row)| {
        let from = row.partition_point(|&t| t < lo);
        let to = row.partition_point(|&t| t <= hi);
        (from..to)
            .map(|idx| CloudPoint::new(n, idx as u64 + 1, row[idx]))
            .collect::<Vec<_>>()
    });
    let mut points = Vec::with_capacity(per_row.iter().map(Vec::len).sum());
    for chunk in per_row {
        points.extend(chunk);
    }
    Ok(PointCloud { lo, hi, points })
}

/// Time horizon past which the circle bound `x^2 + y^2 <= 2 + eps` is
/// enforced: the envelope `eps(M) = 2.5 / sqrt(M/2)` inverted.
pub fn circle_bound_horizon(eps: f64) -> u64 {
    (12.5 / (eps * eps)).ceil() as u64
}

/// Checks the two bounds on the rescaled cloud: every point lies above the
/// line `x + y = 1` (hard, unconditional), and points with
/// `T >= circle_bound_horizon(eps)` lie inside `x^2 + y^2 = 2 + eps`.
pub fn check_cloud_bounds(pc: &PointCloud, eps: f64) -> CheckReport {
    let mut report = CheckReport::new(format!("point-cloud bounds, T in [{}, {}]", pc.lo, pc.hi));
    // fixed-point slacks (1e9 scale) keep the integer fold exact enough
    let scale = 1e9;
    let insts = par::map_items(&pc.points, |p| {
        Some(Inst {
            slack: ((p.x + p.y - 1.0) * scale) as i128,
            a: p.n,
            b: p.k,
        })
    });
    report.items.push(collect_item(
        "above_line_x_plus_y_1",
        format!("{} points", pc.points.len()),
        insts,
        |i| format!("x + y > 1 at (n,k)=({},{})", i.a, i.b),
    ));
    let horizon = circle_bound_horizon(eps);
    let insts = par::map_items(&pc.points, |p| {
        if p.t < horizon {
            return None;
        }
        let r2 = p.x * p.x + p.y * p.y;
        Some(Inst {
            slack: ((2.0 + eps - r2) * scale) as i128,
            a: p.n,
            b: p.k,
        })
    });
    report.items.push(collect_item(
        "inside_circle_2_plus_eps",
        format!("points with T >= {horizon}, eps = {eps}"),
        insts,
        |i| format!("x^2 + y^2 <= 2+eps at (n,k)=({},{})", i.a, i.b),
    ));
    report
}

/// Conjecture probe: the x-axis intercept ratios `n / sqrt(T_n(1))`.
pub fn curve_intercept_probe(tt: &TimeTable, n_lo: u64, n_hi: u64) -> Result<Vec<(u64, f64)>> {
    (n_lo..=n_hi)
        .map(|n| match tt.first_view(n) {
            Some(t) => Ok((n, n as f64 / (t as f64).sqrt())),
            None => Err(Error::IncompleteTimeTable {
                needed: n,
                have: tt.max_card_seen(),
            }),
        })
        .collect()
}

/// Writes the cloud as CSV with header `n,k,T,x,y`.
pub fn write_cloud_csv<W: Write>(pc: &PointCloud, mut w: W) -> io::Result<()> {
    writeln!(w, "n,k,T,x,y")?;
    for p in &pc.points {
        writeln!(w, "{},{},{},{:.9},{:.9}", p.n, p.k, p.t, p.x, p.y)?;
    }
    Ok(())
}

/// Writes the cloud as a fixed 800x800 SVG over `[0, 2.5]^2` with the
/// reference line `x + y = 1` and circle `x^2 + y^2 = 2` drawn.
pub fn write_cloud_svg<W: Write>(pc: &PointCloud, mut w: W) -> io::Result<()> {
    const SIDE: f64 = 800.0;
    const SPAN: f64 = 2.5;
    let px = |x: f64| x / SPAN * SIDE;
    let py = |y: f64| SIDE - y / SPAN * SIDE;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    )?;
    writeln!(w, r#"<rect width="800" height="800" fill="white"/>"#)?;
    writeln!(
        w,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="red" stroke-width="1"/>"#,
        px(1.0),
        py(0.0),
        px(0.0),
        py(1.0)
    )?;
    writeln!(
        w,
        r#"<circle cx="{:.1}" cy="{:.1}" r="{:.2}" fill="none" stroke="blue" stroke-width="1"/>"#,
        px(0.0),
        py(0.0),
        2f64.sqrt() / SPAN * SIDE
    )?;
    for p in &pc.points {
        writeln!(
            w,
            r#"<rect x="{:.2}" y="{:.2}" width="1" height="1" fill="black"/>"#,
            px(p.x),
            py(p.y)
        )?;
    }
    writeln!(w, "</svg>")
}
