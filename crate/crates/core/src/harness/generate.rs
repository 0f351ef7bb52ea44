use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{City, Item, ThiefParams, TtpInstance};
use crate::rng::{derive_seed, rng_from_seed};
use crate::scalar::Scalar;

use super::fixtures::builtin_coordinates;

/// Item layout and capacity class of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KpType {
    /// One item per city, `p = w + 100`, lowest capacity.
    A,
    /// Five items per city, near-equal weights, medium capacity.
    B,
    /// Ten items per city, uncorrelated, highest capacity.
    C,
}

impl KpType {
    pub fn items_per_city(self) -> usize {
        match self {
            KpType::A => 1,
            KpType::B => 5,
            KpType::C => 10,
        }
    }

    /// Capacity is `class / 11` of the total item weight.
    pub fn capacity_class(self) -> u64 {
        match self {
            KpType::A => 3,
            KpType::B => 6,
            KpType::C => 9,
        }
    }

    fn draw(self, rng: &mut impl Rng) -> (u64, u64) {
        match self {
            KpType::A => {
                let w = rng.gen_range(1..=1000);
                (w + 100, w)
            }
            KpType::B => {
                let w = rng.gen_range(1000..=1010);
                (rng.gen_range(1..=1000), w)
            }
            KpType::C => {
                let w = rng.gen_range(1..=1000);
                (rng.gen_range(1..=1000), w)
            }
        }
    }
}

impl fmt::Display for KpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KpType::A => "A",
            KpType::B => "B",
            KpType::C => "C",
        })
    }
}

impl FromStr for KpType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(KpType::A),
            "B" => Ok(KpType::B),
            "C" => Ok(KpType::C),
            _ => Err(Error::Config(format!("unknown knapsack type '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// Name of a bundled fixture (e.g. `berlin52`) or a path to a coordinate
    /// file. Bundled names take precedence.
    pub tsp_source: String,
    pub kp_type: KpType,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(tsp_source: impl Into<String>, kp_type: KpType, seed: u64) -> Self {
        InstanceSpec {
            tsp_source: tsp_source.into(),
            kp_type,
            seed,
        }
    }
}

/// Reads `id x y` rows. Header lines (`NAME: ...`, `NODE_COORD_SECTION`,
/// `EOF`, ...) are skipped; ids must run 1..N in order.
pub fn parse_coordinates<F: Scalar>(text: &str) -> Result<Vec<City<F>>> {
    let mut cities = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(first) = toks.first() else { continue };
        let Ok(id) = first.parse::<usize>() else { continue };
        if toks.len() != 3 {
            return Err(Error::parse(idx + 1, "coordinate rows need 'id x y'"));
        }
        let coord = |t: &str| {
            t.parse::<F>()
                .map_err(|_| Error::parse(idx + 1, format!("'{t}' is not a number")))
        };
        if id != cities.len() + 1 {
            return Err(Error::parse(
                idx + 1,
                format!("expected city id {}, got {id}", cities.len() + 1),
            ));
        }
        cities.push(City {
            id,
            x: coord(toks[1])?,
            y: coord(toks[2])?,
        });
    }
    if cities.len() < 3 {
        return Err(Error::InvalidInstance(format!(
            "coordinate source has {} cities, need at least 3",
            cities.len()
        )));
    }
    Ok(cities)
}

/// Coordinates of a bundled fixture or a file, plus a short source name.
pub fn load_coordinates<F: Scalar>(source: &str) -> Result<(String, Vec<City<F>>)> {
    if let Some(text) = builtin_coordinates(source) {
        return Ok((source.to_string(), parse_coordinates(text)?));
    }
    let path = Path::new(source);
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| source.to_string());
    Ok((name, parse_coordinates(&text)?))
}

/// Generates a thief instance on the given coordinates.
///
/// Items are numbered item-slot major (slot 0 on cities 2..N, then slot 1,
/// ...), so item `k` of slot 0 sits on city `k + 1`. Capacity is
/// `floor(class * sum(w) / 11)`.
pub fn generate_instance<F: Scalar>(spec: &InstanceSpec) -> Result<TtpInstance<F>> {
    let (source, cities) = load_coordinates::<F>(&spec.tsp_source)?;
    let letter = spec.kp_type.to_string();
    let mut rng = rng_from_seed(derive_seed(
        "dttp-instance",
        &[&spec.seed.to_le_bytes(), letter.as_bytes()],
    ));
    let n = cities.len();
    let mut items = Vec::with_capacity((n - 1) * spec.kp_type.items_per_city());
    let mut total_weight = 0u64;
    for _ in 0..spec.kp_type.items_per_city() {
        for city in 2..=n {
            let (p, w) = spec.kp_type.draw(&mut rng);
            total_weight += w;
            items.push(Item {
                id: items.len() + 1,
                profit: F::lit(p as f64),
                weight: F::lit(w as f64),
                city,
            });
        }
    }
    let capacity = spec.kp_type.capacity_class() * total_weight / 11;
    TtpInstance::new(
        format!("{source}-{letter}"),
        cities,
        items,
        F::lit(capacity as f64),
        ThiefParams::default(),
    )
}
