use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::ComponentMethod;

use ComponentMethod::{Greedy as G, Random as R, Solver as S};

/// Construction recipe for a population: either one of the nine static
/// combinations (`ss` .. `rr`, tour method then packing method) or one of
/// the eight dynamic response strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StrategyId {
    Static(ComponentMethod, ComponentMethod),
    PS,
    PG,
    PR,
    MS,
    MG,
    MR,
    MC,
    MN,
}

impl StrategyId {
    /// The eight response strategies, in table order.
    pub const DYNAMIC: [StrategyId; 8] = [
        StrategyId::PS,
        StrategyId::PG,
        StrategyId::PR,
        StrategyId::MS,
        StrategyId::MG,
        StrategyId::MR,
        StrategyId::MC,
        StrategyId::MN,
    ];

    /// The nine static combinations, tour method major.
    pub fn static_combos() -> Vec<StrategyId> {
        ComponentMethod::ALL
            .iter()
            .flat_map(|&t| ComponentMethod::ALL.iter().map(move |&p| StrategyId::Static(t, p)))
            .collect()
    }

    /// Construction cells `(tour method, packing method)` in listed order.
    pub fn cells(self) -> Vec<(ComponentMethod, ComponentMethod)> {
        let all_packing = |t| vec![(t, S), (t, G), (t, R)];
        match self {
            StrategyId::Static(t, p) => vec![(t, p)],
            StrategyId::PS => vec![(S, S)],
            StrategyId::PG => vec![(G, G)],
            StrategyId::PR => vec![(R, R)],
            StrategyId::MS => all_packing(S),
            StrategyId::MG => all_packing(G),
            StrategyId::MR => all_packing(R),
            StrategyId::MC | StrategyId::MN => {
                ComponentMethod::ALL.iter().flat_map(|&t| all_packing(t)).collect()
            }
        }
    }

    /// Whether the strategy injects new solutions when the problem changes.
    pub fn responds(self) -> bool {
        self != StrategyId::MN
    }

    pub fn label(self) -> String {
        match self {
            StrategyId::Static(t, p) => format!("{}{}", t.letter(), p.letter()),
            StrategyId::PS => "pS".into(),
            StrategyId::PG => "pG".into(),
            StrategyId::PR => "pR".into(),
            StrategyId::MS => "mS".into(),
            StrategyId::MG => "mG".into(),
            StrategyId::MR => "mR".into(),
            StrategyId::MC => "mC".into(),
            StrategyId::MN => "mN".into(),
        }
    }

    /// Population share of each cell: equal split, remainder to the earlier
    /// cells.
    pub fn shares(self, pop_size: usize) -> Vec<usize> {
        let k = self.cells().len();
        (0..k)
            .map(|i| pop_size / k + usize::from(i < pop_size % k))
            .collect()
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pS" => StrategyId::PS,
            "pG" => StrategyId::PG,
            "pR" => StrategyId::PR,
            "mS" => StrategyId::MS,
            "mG" => StrategyId::MG,
            "mR" => StrategyId::MR,
            "mC" => StrategyId::MC,
            "mN" => StrategyId::MN,
            _ => {
                let mut chars = s.chars();
                match (chars.next(), chars.next(), chars.next()) {
                    (Some(a), Some(b), None) if a.is_ascii_lowercase() && b.is_ascii_lowercase() => {
                        match (ComponentMethod::from_letter(a), ComponentMethod::from_letter(b)) {
                            (Some(t), Some(p)) => StrategyId::Static(t, p),
                            _ => return Err(Error::Config(format!("unknown strategy '{s}'"))),
                        }
                    }
                    _ => return Err(Error::Config(format!("unknown strategy '{s}'"))),
                }
            }
        })
    }
}

impl TryFrom<String> for StrategyId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<StrategyId> for String {
    fn from(s: StrategyId) -> String {
        s.label()
    }
}
