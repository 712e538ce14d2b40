//! The tripling stopping-time ladder.
//!
//! Crossing times are recorded whenever the sup-norm reaches triple the
//! current anchor level (up) or one-third of it (down), with anchor levels
//! on the geometric grid 3ⁿ·c0, n ≥ 1. From the floor level 3c0 the only
//! permitted move is up to 3²c0; a path that never reaches 3c0 records
//! nothing. A single sample may cross several levels at once (discrete
//! paths jump); each level crossed is recorded at that timestamp, so
//! consecutive recorded levels always differ by a factor of exactly 3.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub time: f64,
    pub direction: CrossingDirection,
    /// The level 3ⁿ·c0 that was reached (the new anchor).
    pub level: f64,
    /// Level exponent n of the new anchor.
    pub level_index: u32,
}

#[derive(Debug, Clone)]
pub struct LadderState {
    c0: f64,
    /// Current anchor exponent n (level 3ⁿ·c0); `None` until the path first
    /// reaches 3c0.
    anchor: Option<u32>,
    crossings: Vec<Crossing>,
    last_time: f64,
}

impl LadderState {
    pub fn new(c0: f64) -> Result<Self> {
        if !(c0 > 0.0) || !c0.is_finite() {
            return Err(Error::invalid(format!("c0 must be positive, got {c0}")));
        }
        Ok(LadderState {
            c0,
            anchor: None,
            crossings: Vec::new(),
            last_time: f64::NEG_INFINITY,
        })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// Level value 3ⁿ·c0.
    pub fn level(&self, n: u32) -> f64 {
        self.c0 * 3f64.powi(n as i32)
    }

    /// Current anchor exponent; 0 while the ladder is inactive.
    pub fn level_index(&self) -> u32 {
        self.anchor.unwrap_or(0)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn into_crossings(self) -> Vec<Crossing> {
        self.crossings
    }

    /// Feeds one sample of the sup-norm path. Times must be nondecreasing
    /// across calls; a decreasing time is a contract violation.
    pub fn update(&mut self, t: f64, sup_norm: f64) -> Result<()> {
        // also rejects +inf: an infinite sample would cascade through
        // levels forever
        if !(sup_norm >= 0.0) || !sup_norm.is_finite() {
            return Err(Error::invalid(format!(
                "sup-norm must be nonnegative and finite, got {sup_norm}"
            )));
        }
        if t < self.last_time {
            return Err(Error::ContractViolation(format!(
                "ladder times must be nondecreasing: {t} after {}",
                self.last_time
            )));
        }
        self.last_time = t;

        let mut anchor = match self.anchor {
            None => {
                if sup_norm >= self.level(1) {
                    self.crossings.push(Crossing {
                        time: t,
                        direction: CrossingDirection::Up,
                        level: self.level(1),
                        level_index: 1,
                    });
                    1
                } else {
                    return Ok(());
                }
            }
            Some(n) => n,
        };

        // cascade: a single sample may cross several levels
        loop {
            if sup_norm >= self.level(anchor + 1) {
                anchor += 1;
                self.crossings.push(Crossing {
                    time: t,
                    direction: CrossingDirection::Up,
                    level: self.level(anchor),
                    level_index: anchor,
                });
            } else if anchor >= 2 && sup_norm <= self.level(anchor - 1) {
                // floor rule: anchored at 3c0 (n = 1), down-moves are not
                // recorded
                anchor -= 1;
                self.crossings.push(Crossing {
                    time: t,
                    direction: CrossingDirection::Down,
                    level: self.level(anchor),
                    level_index: anchor,
                });
            } else {
                break;
            }
        }
        self.anchor = Some(anchor);
        Ok(())
    }
}
