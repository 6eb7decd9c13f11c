use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// A percentage held in tenths, so 82.3% is `Score(823)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(pub u64);

impl Score {
    pub fn tenths(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 10.0
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no mutants")]
pub struct NoMutants;

/// `100 * killed / (killed + alive)`, rounded half-up to one decimal.
pub fn mutation_score(killed: u64, alive: u64) -> Result<Score, NoMutants> {
    let total = killed + alive;
    if total == 0 {
        return Err(NoMutants);
    }
    // round(1000 k / n) with halves going up, in integers
    Ok(Score((2000 * killed + total) / (2 * total)))
}

/// Score column of a report; a campaign without mutants has no score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationScore {
    Percent(Score),
    NoMutants,
}

impl MutationScore {
    pub fn from_counts(killed: u64, alive: u64) -> Self {
        match mutation_score(killed, alive) {
            Ok(s) => MutationScore::Percent(s),
            Err(NoMutants) => MutationScore::NoMutants,
        }
    }
}

impl fmt::Display for MutationScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutationScore::Percent(s) => s.fmt(f),
            MutationScore::NoMutants => f.write_str("no-mutants"),
        }
    }
}

impl Serialize for MutationScore {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            MutationScore::Percent(s) => serializer.serialize_f64(s.as_f64()),
            MutationScore::NoMutants => serializer.serialize_str("no-mutants"),
        }
    }
}
