//! Insertion schedules: the map from view count `k` to insertion position `p_k`.
//!
//! Deterministic kinds are pure functions of `k`. Stochastic kinds are pure
//! functions of `(seed, k)`, so a schedule value is replayable and two runs
//! with the same descriptor are identical — there is no hidden RNG state.

use crate::error::{Error, Result};
use crate::rng;
use serde::{Deserialize, Serialize};

/// How a table schedule behaves past the end of its data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableExtend {
    RepeatLast,
    Error,
}

/// A total mapping `k -> p_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Schedule {
    /// `p_k = k + 1`: the slow game.
    Slow,
    /// `p_k = 2^k`: the recap schedule.
    Recap,
    /// `p_k = c`.
    Constant { c: u64 },
    /// `p_k = a*k + b`.
    Affine { a: u64, b: u64 },
    /// `p_k = b^k`.
    Power { b: u64 },
    /// Explicit positions for the first `values.len()` view counts.
    Table {
        values: Vec<u64>,
        extend: TableExtend,
    },
    /// `p_k` uniform on `[1, 2k + 1]`.
    Uniform {
        #[serde(default)]
        seed: u64,
    },
    /// `p_k ~ Poisson(k)`, with draws of zero clamped to 1.
    Poisson {
        #[serde(default)]
        seed: u64,
    },
}

const UNIFORM_SALT: u64 = 0x756e_6966;
const POISSON_SALT: u64 = 0x706f_6973;

impl Schedule {
    pub fn slow() -> Self {
        Schedule::Slow
    }

    pub fn recap() -> Self {
        Schedule::Recap
    }

    pub fn constant(c: u64) -> Self {
        Schedule::Constant { c }
    }

    pub fn affine(a: u64, b: u64) -> Self {
        Schedule::Affine { a, b }
    }

    pub fn power(b: u64) -> Self {
        Schedule::Power { b }
    }

    pub fn table(values: Vec<u64>, extend: TableExtend) -> Self {
        Schedule::Table { values, extend }
    }

    pub fn uniform(seed: u64) -> Self {
        Schedule::Uniform { seed }
    }

    pub fn poisson(seed: u64) -> Self {
        Schedule::Poisson { seed }
    }

    /// The insertion position for the `k`-th viewing, `k >= 1`.
    /// Unrepresentable values (e.g. `2^k` past 63) saturate; they exceed any
    /// realistic materialization cap long before that matters.
    pub fn position(&self, k: u64) -> Result<u64> {
        debug_assert!(k >= 1);
        Ok(match self {
            Schedule::Slow => k + 1,
            Schedule::Recap => {
                if k >= 63 {
                    u64::MAX
                } else {
                    1u64 << k
                }
            }
            Schedule::Constant { c } => *c,
            Schedule::Affine { a, b } => a.saturating_mul(k).saturating_add(*b),
            Schedule::Power { b } => b.saturating_pow(k.min(u32::MAX as u64) as u32),
            Schedule::Table { values, extend } => match values.get((k - 1) as usize) {
                Some(&v) => v,
                None => match extend {
                    TableExtend::RepeatLast => *values.last().unwrap_or(&1),
                    TableExtend::Error => return Err(Error::ScheduleExhausted { k }),
                },
            },
            Schedule::Uniform { seed } => {
                rng::uniform_1_to(rng::stream(seed ^ UNIFORM_SALT, k), 2 * k + 1)
            }
            Schedule::Poisson { seed } => rng::poisson(seed ^ POISSON_SALT, k, k).max(1),
        })
    }

    /// Checks that every position the schedule can produce is `>= 1`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidDescriptor(msg.to_string()));
        match self {
            Schedule::Constant { c } if *c < 1 => bad("constant position must be >= 1"),
            Schedule::Affine { a, b } if a.saturating_add(*b) < 1 => {
                bad("affine schedule must have a + b >= 1")
            }
            Schedule::Power { b } if *b < 1 => bad("power base must be >= 1"),
            Schedule::Table { values, .. } if values.is_empty() => bad("table must be nonempty"),
            Schedule::Table { values, .. } if values.iter().any(|&v| v < 1) => {
                bad("table positions must be >= 1")
            }
            _ => Ok(()),
        }
    }

    /// Whether `p_k` is weakly increasing in `k` (`None` of stochastic kinds).
    pub fn is_increasing(&self) -> bool {
        match self {
            Schedule::Slow | Schedule::Recap | Schedule::Constant { .. } => true,
            Schedule::Affine { .. } | Schedule::Power { .. } => true,
            Schedule::Table { values, .. } => values.windows(2).all(|w| w[0] <= w[1]),
            Schedule::Uniform { .. } | Schedule::Poisson { .. } => false,
        }
    }

    /// Whether the schedule is unbounded, i.e. every card is eventually seen.
    /// Stochastic kinds are unbounded with probability one.
    pub fn is_unbounded(&self) -> bool {
        match self {
            Schedule::Slow | Schedule::Recap => true,
            Schedule::Constant { .. } | Schedule::Table { .. } => false,
            Schedule::Affine { a, .. } => *a >= 1,
            Schedule::Power { b } => *b >= 2,
            Schedule::Uniform { .. } | Schedule::Poisson { .. } => true,
        }
    }

    /// Parses the compact descriptor grammar:
    /// `slow`, `recap`, `constant:C`, `affine:A,B`, `power:B`,
    /// `table:V1,V2,...[;repeat-last|;error]`, `uniform[:SEED]`, `poisson[:SEED]`.
    pub fn parse(descriptor: &str) -> Result<Schedule> {
        let bad = |msg: String| Error::InvalidDescriptor(msg);
        let (head, args) = match descriptor.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (descriptor.trim(), None),
        };
        let int = |s: &str| -> Result<u64> {
            s.trim()
                .parse::<u64>()
                .map_err(|_| bad(format!("expected an integer, got {s:?}")))
        };
        let schedule = match (head, args) {
            ("slow", None) => Schedule::Slow,
            ("recap", None) => Schedule::Recap,
            ("constant", Some(a)) => Schedule::constant(int(a)?),
            ("affine", Some(a)) => {
                let (x, y) = a
                    .split_once(',')
                    .ok_or_else(|| bad("affine needs two parameters: a,b".into()))?;
                Schedule::affine(int(x)?, int(y)?)
            }
            ("power", Some(a)) => Schedule::power(int(a)?),
            ("table", Some(a)) => {
                let (vals, extend) = match a.split_once(';') {
                    Some((v, "repeat-last")) => (v, TableExtend::RepeatLast),
                    Some((v, "error")) => (v, TableExtend::Error),
                    Some((_, e)) => return Err(bad(format!("unknown table extension {e:?}"))),
                    None => (a, TableExtend::RepeatLast),
                };
                let values = vals.split(',').map(int).collect::<Result<Vec<_>>>()?;
                Schedule::table(values, extend)
            }
            ("uniform", seed) => Schedule::uniform(seed.map(int).transpose()?.unwrap_or(0)),
            ("poisson", seed) => Schedule::poisson(seed.map(int).transpose()?.unwrap_or(0)),
            _ => return Err(bad(format!("unknown schedule {descriptor:?}"))),
        };
        schedule.validate()?;
        Ok(schedule)
    }
}

impl std::fmt::Display for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Schedule::Slow => write!(f, "slow"),
            Schedule::Recap => write!(f, "recap"),
            Schedule::Constant { c } => write!(f, "constant:{c}"),
            Schedule::Affine { a, b } => write!(f, "affine:{a},{b}"),
            Schedule::Power { b } => write!(f, "power:{b}"),
            Schedule::Table { values, extend } => {
                let vals: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                let ext = match extend {
                    TableExtend::RepeatLast => "repeat-last",
                    TableExtend::Error => "error",
                };
                write!(f, "table:{};{}", vals.join(","), ext)
            }
            Schedule::Uniform { seed } => write!(f, "uniform:{seed}"),
            Schedule::Poisson { seed } => write!(f, "poisson:{seed}"),
        }
    }
}
