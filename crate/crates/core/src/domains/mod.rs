//! Benchmark instance generators: counters, sailing, block-grouping and
//! drone.
//!
//! An [`InstanceSpec`] names a domain and its integer size parameters and is
//! written as `counters n=3 max_val=10` on the command line or as
//! `counters[n=3;max_val=10;u_max=1]` when used as an instance id.

mod generators;

pub use generators::{
    make_blockgrouping, make_blockgrouping_with, make_counters, make_drone, make_drone_with, make_sailing,
    make_sailing_with, DRONE_REACH, SAILING_BAND,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::Problem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("unknown domain `{0}` (expected counters, sailing, block-grouping or drone)")]
    UnknownDomain(String),
    #[error("unknown parameter `{param}` for domain {domain}")]
    UnknownParam { domain: &'static str, param: String },
    #[error("malformed instance spec: {0}")]
    Malformed(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Counters,
    Sailing,
    BlockGrouping,
    Drone,
}

impl Domain {
    pub const ALL: [Domain; 4] = [Domain::Counters, Domain::Sailing, Domain::BlockGrouping, Domain::Drone];

    pub fn name(self) -> &'static str {
        match self {
            Domain::Counters => "counters",
            Domain::Sailing => "sailing",
            Domain::BlockGrouping => "block-grouping",
            Domain::Drone => "drone",
        }
    }

    /// Parameter names with their defaults, in canonical order.
    pub fn params(self) -> &'static [(&'static str, i64)] {
        match self {
            Domain::Counters => &[("n", 2), ("max_val", 10), ("u_max", 1)],
            Domain::Sailing => &[("boats", 1), ("persons", 1), ("spread", 50), ("seed", 0)],
            Domain::BlockGrouping => &[("blocks", 2), ("groups", 1), ("grid", 4), ("seed", 0)],
            Domain::Drone => &[("grid", 2), ("points", 1), ("battery", 0), ("seed", 0)],
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "counters" => Ok(Domain::Counters),
            "sailing" => Ok(Domain::Sailing),
            "block-grouping" | "blockgrouping" => Ok(Domain::BlockGrouping),
            "drone" => Ok(Domain::Drone),
            other => Err(DomainError::UnknownDomain(other.to_string())),
        }
    }
}

/// A domain plus its size parameters. Unset parameters take the domain
/// defaults; a drone battery of 0 means `10 * grid * points`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub domain: Domain,
    params: BTreeMap<&'static str, i64>,
}

impl InstanceSpec {
    pub fn new(domain: Domain) -> Self {
        InstanceSpec { domain, params: domain.params().iter().copied().collect() }
    }

    pub fn with(mut self, key: &str, value: i64) -> Result<Self, DomainError> {
        self.set(key, value)?;
        Ok(self)
    }

    pub fn set(&mut self, key: &str, value: i64) -> Result<(), DomainError> {
        let Some(&(name, _)) = self.domain.params().iter().find(|(n, _)| *n == key) else {
            return Err(DomainError::UnknownParam { domain: self.domain.name(), param: key.to_string() });
        };
        self.params.insert(name, value);
        Ok(())
    }

    pub fn get(&self, key: &str) -> i64 {
        self.params.get(key).copied().unwrap_or(0)
    }

    fn size(&self, key: &str) -> Result<usize, DomainError> {
        usize::try_from(self.get(key)).map_err(|_| DomainError::InvalidSize(format!("{key} must be nonnegative")))
    }

    /// Parses `domain key=value ...`.
    pub fn parse(text: &str) -> Result<Self, DomainError> {
        let mut words = text.split_whitespace();
        let domain: Domain = words.next().ok_or_else(|| DomainError::Malformed("empty spec".into()))?.parse()?;
        let mut spec = InstanceSpec::new(domain);
        for w in words {
            spec.apply_pair(w)?;
        }
        Ok(spec)
    }

    /// Parses the id form `domain[key=value;...]`.
    pub fn from_id(id: &str) -> Result<Self, DomainError> {
        let (head, rest) = id.split_once('[').ok_or_else(|| DomainError::Malformed(format!("`{id}` has no `[`")))?;
        let body = rest.strip_suffix(']').ok_or_else(|| DomainError::Malformed(format!("`{id}` has no closing `]`")))?;
        let mut spec = InstanceSpec::new(head.parse()?);
        for pair in body.split(';').filter(|p| !p.is_empty()) {
            spec.apply_pair(pair)?;
        }
        Ok(spec)
    }

    fn apply_pair(&mut self, pair: &str) -> Result<(), DomainError> {
        let (k, v) = pair.split_once('=').ok_or_else(|| DomainError::Malformed(format!("expected key=value, got `{pair}`")))?;
        let v: i64 = v.parse().map_err(|_| DomainError::Malformed(format!("`{v}` is not an integer")))?;
        self.set(k, v)
    }

    /// Canonical id, e.g. `counters[n=2;max_val=10;u_max=1]`.
    pub fn id(&self) -> String {
        let body: Vec<String> = self.domain.params().iter().map(|(k, _)| format!("{k}={}", self.get(k))).collect();
        format!("{}[{}]", self.domain.name(), body.join(";"))
    }

    pub fn generate(&self) -> Result<Problem, DomainError> {
        let seed = self.get("seed") as u64;
        match self.domain {
            Domain::Counters => make_counters(self.size("n")?, self.get("max_val"), self.get("u_max")),
            Domain::Sailing => make_sailing(self.size("boats")?, self.size("persons")?, self.get("spread"), seed),
            Domain::BlockGrouping => {
                make_blockgrouping(self.size("blocks")?, self.size("groups")?, self.get("grid"), seed)
            }
            Domain::Drone => {
                let (grid, points) = (self.get("grid"), self.size("points")?);
                let battery = match self.get("battery") {
                    0 => 10 * grid.max(0) * points as i64,
                    b => b,
                };
                make_drone(grid, points, battery, seed)
            }
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for InstanceSpec {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains('[') {
            Self::from_id(s)
        } else {
            Self::parse(s)
        }
    }
}

/// Five instance sizes per domain, smallest first.
pub fn default_ladder(domain: Domain) -> Vec<InstanceSpec> {
    let rows: Vec<Vec<(&str, i64)>> = match domain {
        Domain::Counters => (0..5).map(|i| vec![("n", 2 + i), ("max_val", 10)]).collect(),
        Domain::Sailing => vec![
            vec![("boats", 1), ("persons", 1), ("spread", 40)],
            vec![("boats", 1), ("persons", 2), ("spread", 40)],
            vec![("boats", 2), ("persons", 3), ("spread", 60)],
            vec![("boats", 2), ("persons", 4), ("spread", 80)],
            vec![("boats", 3), ("persons", 6), ("spread", 100)],
        ],
        Domain::BlockGrouping => vec![
            vec![("blocks", 2), ("groups", 1), ("grid", 2)],
            vec![("blocks", 2), ("groups", 1), ("grid", 4)],
            vec![("blocks", 3), ("groups", 1), ("grid", 4)],
            vec![("blocks", 4), ("groups", 2), ("grid", 4)],
            vec![("blocks", 4), ("groups", 1), ("grid", 8)],
        ],
        Domain::Drone => vec![
            vec![("grid", 1), ("points", 1)],
            vec![("grid", 2), ("points", 2)],
            vec![("grid", 3), ("points", 3)],
            vec![("grid", 5), ("points", 5)],
            vec![("grid", 6), ("points", 6)],
        ],
    };
    rows.into_iter()
        .map(|row| {
            row.into_iter().fold(InstanceSpec::new(domain), |s, (k, v)| s.with(k, v).expect("ladder keys are valid"))
        })
        .collect()
}
