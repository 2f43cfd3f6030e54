//! The staircase tableau of viewing times and reversed-order RSK.
//!
//! Cell `(i, j)` of the quarter-plane tableau holds `T_i(j)`; entries
//! increase along rows and columns, so restricting to entries `<= tmax`
//! gives a finite Young-diagram-shaped tableau with entries `1..=tmax`.
//! Row-inserting a viewing prefix with the reversed order `1 > 2 > 3 > ...`
//! produces exactly that tableau as its recording tableau, and the counting
//! prefix produces its transpose. [`rsk_reversed`] exists to verify those
//! facts against [`build_staircase`], which is the production path.

use crate::engine::TimeTable;
use crate::error::{Error, Result};
use std::io::{self, Write};

/// Finite portion of the viewing-time tableau with entries `<= tmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseTableau {
    rows: Vec<Vec<u64>>,
    tmax: u64,
}

impl StaircaseTableau {
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn tmax(&self) -> u64 {
        self.tmax
    }

    /// Row lengths, top to bottom.
    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.len()).collect()
    }

    /// Diagram transpose: cell `(i, j)` moves to `(j, i)`.
    pub fn transpose(&self) -> StaircaseTableau {
        let cols = self.rows.first().map(|r| r.len()).unwrap_or(0);
        let mut rows = vec![Vec::new(); cols];
        for row in &self.rows {
            for (j, &v) in row.iter().enumerate() {
                rows[j].push(v);
            }
        }
        StaircaseTableau {
            rows,
            tmax: self.tmax,
        }
    }
}

impl std::fmt::Display for StaircaseTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Writes a tableau row per line, comma-separated.
pub fn write_rows_csv<W: Write>(rows: &[Vec<u64>], mut w: W) -> io::Result<()> {
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Builds the tableau of viewing times restricted to entries `<= tmax`.
/// The timetable must cover the clock through `tmax` with full rows.
pub fn build_staircase(tt: &TimeTable, tmax: u64) -> Result<StaircaseTableau> {
    if tt.max_time() < tmax {
        return Err(Error::IncompleteTimeTable {
            needed: tmax,
            have: tt.max_time(),
        });
    }
    if !tt.fully_tracked() {
        return Err(Error::UntrackedCard {
            card: tt.max_card_seen(),
            limit: tt.max_card_seen() - 1,
        });
    }
    let mut rows = Vec::new();
    for n in 1.. {
        let times = tt.times_for(n)?;
        let cut = times.partition_point(|&t| t <= tmax);
        if cut == 0 {
            break;
        }
        rows.push(times[..cut].to_vec());
    }
    Ok(StaircaseTableau { rows, tmax })
}

/// Insertion and recording tableaux of a finite sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauPair {
    /// Insertion tableau: rows weakly decreasing, columns strictly
    /// decreasing (the reversed order makes this the semistandard shape).
    pub insertion: Vec<Vec<u64>>,
    /// Recording tableau: cell values are the insertion steps `1..=len`.
    pub recording: Vec<Vec<u64>>,
}

/// Row-insertion RSK with the order reversed to `1 > 2 > 3 > ...`: the
/// entry bumped by `x` is the leftmost one smaller than `x` in the usual
/// integer order.
pub fn rsk_reversed(seq: &[u64]) -> TableauPair {
    let mut insertion: Vec<Vec<u64>> = Vec::new();
    let mut recording: Vec<Vec<u64>> = Vec::new();
    for (step, &value) in seq.iter().enumerate() {
        let mut x = value;
        let mut r = 0;
        loop {
            if r == insertion.len() {
                insertion.push(vec![x]);
                recording.push(vec![step as u64 + 1]);
                break;
            }
            let row = &mut insertion[r];
            // rows are weakly decreasing, so the bump target is found by
            // binary search for the first entry below x
            let idx = row.partition_point(|&y| y >= x);
            if idx == row.len() {
                row.push(x);
                recording[r].push(step as u64 + 1);
                break;
            }
            std::mem::swap(&mut row[idx], &mut x);
            r += 1;
        }
    }
    TableauPair {
        insertion,
        recording,
    }
}
