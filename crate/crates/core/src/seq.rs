//! Eventually periodic sequences over `[0,d)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `preperiod` followed by `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventuallyPeriodicSeq {
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl EventuallyPeriodicSeq {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidSequence("period must be nonempty".into()));
        }
        Ok(EventuallyPeriodicSeq { preperiod, period })
    }

    pub fn constant(x: u32) -> Self {
        EventuallyPeriodicSeq {
            preperiod: Vec::new(),
            period: vec![x],
        }
    }

    /// Parses `"0,1|1,0"`; without `|` the whole list is the period.
    pub fn parse(text: &str) -> Result<Self> {
        let digits = |s: &str| -> Result<Vec<u32>> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::InvalidSequence(format!("bad entry {t:?}")))
                })
                .collect()
        };
        match text.split_once('|') {
            Some((pre, per)) => Self::new(digits(pre)?, digits(per)?),
            None => Self::new(Vec::new(), digits(text)?),
        }
    }

    /// Errors unless every entry lies in `[0, bound)`.
    pub fn check_bound(&self, bound: u32) -> Result<()> {
        match self.preperiod.iter().chain(&self.period).find(|&&x| x >= bound) {
            Some(x) => Err(Error::InvalidSequence(format!(
                "entry {x} outside [0,{bound})"
            ))),
            None => Ok(()),
        }
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn entry(&self, m: usize) -> u32 {
        match m.checked_sub(self.preperiod.len()) {
            None => self.preperiod[m],
            Some(k) => self.period[k % self.period.len()],
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<u32> {
        (0..len).map(|m| self.entry(m)).collect()
    }

    /// The sequence with its first `k` entries removed.
    pub fn shift(&self, k: usize) -> Self {
        if k <= self.preperiod.len() {
            return EventuallyPeriodicSeq {
                preperiod: self.preperiod[k..].to_vec(),
                period: self.period.clone(),
            };
        }
        let r = (k - self.preperiod.len()) % self.period.len();
        let mut period = self.period[r..].to_vec();
        period.extend_from_slice(&self.period[..r]);
        EventuallyPeriodicSeq {
            preperiod: Vec::new(),
            period,
        }
    }

    /// `letters` followed by this sequence.
    pub fn prepend(&self, letters: &[u32]) -> Self {
        let mut preperiod = letters.to_vec();
        preperiod.extend_from_slice(&self.preperiod);
        EventuallyPeriodicSeq {
            preperiod,
            period: self.period.clone(),
        }
    }

    pub fn limsup(&self) -> u32 {
        *self.period.iter().max().expect("nonempty period")
    }

    /// A depth past which two sequences agree everywhere if they agree up to it.
    pub fn comparison_depth(&self, other: &Self) -> usize {
        self.preperiod.len().max(other.preperiod.len())
            + self.period.len().lcm(&other.period.len())
    }

    /// Equality of the infinite sequences.
    pub fn same_as(&self, other: &Self) -> bool {
        let n = self.comparison_depth(other);
        (0..n).all(|m| self.entry(m) == other.entry(m))
    }
}

impl fmt::Display for EventuallyPeriodicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.preperiod), join(&self.period))
    }
}
