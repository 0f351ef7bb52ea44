//! Line-oriented instance files in the competition layout (fields are tab
//! separated when written; any whitespace is accepted when read).
//!
//! ```text
//! PROBLEM NAME:  berlin52-A
//! DIMENSION:  52
//! NUMBER OF ITEMS:  51
//! CAPACITY OF KNAPSACK:  4029
//! MIN SPEED:  0.1
//! MAX SPEED:  1
//! DROP RATE:  0.9
//! DROP CONSTANT:  6.2131...
//! EDGE_WEIGHT_TYPE:  EUC_2D_REAL
//! NODE_COORD_SECTION  (INDEX, X, Y):
//! 1  565  575
//! ...
//! ITEMS SECTION  (INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):
//! 1  260  160  2
//! ...
//! EOF
//! ```
//!
//! Distances are real-valued Euclidean (no integer rounding). Unknown header
//! keys are ignored so that files carrying extra competition keys still load.
//! `DROP CONSTANT` is optional; when present it must match the recomputed
//! value.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{City, Item, ThiefParams, TtpInstance};

pub fn read_instance<F: Scalar>(path: impl AsRef<Path>) -> Result<TtpInstance<F>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text)
}

pub fn write_instance<F: Scalar>(inst: &TtpInstance<F>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_instance(inst)).map_err(|e| Error::io(path, e))
}

pub fn format_instance<F: Scalar>(inst: &TtpInstance<F>) -> String {
    use std::fmt::Write;
    let p = inst.params();
    let mut s = String::new();
    let _ = writeln!(s, "PROBLEM NAME:\t{}", inst.name());
    let _ = writeln!(s, "DIMENSION:\t{}", inst.num_cities());
    let _ = writeln!(s, "NUMBER OF ITEMS:\t{}", inst.num_items());
    let _ = writeln!(s, "CAPACITY OF KNAPSACK:\t{}", inst.capacity());
    let _ = writeln!(s, "MIN SPEED:\t{}", p.v_min);
    let _ = writeln!(s, "MAX SPEED:\t{}", p.v_max);
    let _ = writeln!(s, "DROP RATE:\t{}", p.drop_rate);
    let _ = writeln!(s, "DROP CONSTANT:\t{}", inst.drop_constant());
    let _ = writeln!(s, "EDGE_WEIGHT_TYPE:\tEUC_2D_REAL");
    let _ = writeln!(s, "NODE_COORD_SECTION\t(INDEX, X, Y):");
    for c in inst.cities() {
        let _ = writeln!(s, "{}\t{}\t{}", c.id, c.x, c.y);
    }
    let _ = writeln!(s, "ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):");
    for i in inst.items() {
        let _ = writeln!(s, "{}\t{}\t{}\t{}", i.id, i.profit, i.weight, i.city);
    }
    s.push_str("EOF\n");
    s
}

#[derive(PartialEq)]
enum Section {
    Header,
    Nodes,
    Items,
    Done,
}

struct Header<F> {
    name: Option<String>,
    dimension: Option<usize>,
    num_items: Option<usize>,
    capacity: Option<F>,
    v_min: Option<F>,
    v_max: Option<F>,
    drop_rate: Option<F>,
    drop_constant: Option<F>,
}

impl<F> Default for Header<F> {
    fn default() -> Self {
        Header {
            name: None,
            dimension: None,
            num_items: None,
            capacity: None,
            v_min: None,
            v_max: None,
            drop_rate: None,
            drop_constant: None,
        }
    }
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: '{}' is not a number", tok.trim())))
}

pub fn parse_instance<F: Scalar>(text: &str) -> Result<TtpInstance<F>> {
    let mut header = Header::<F>::default();
    let mut cities = Vec::new();
    let mut items = Vec::new();
    let mut section = Section::Header;
    let mut last_line = 0;
    let mut nodes_line = 0;
    let mut items_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            section = Section::Done;
            break;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            section = Section::Nodes;
            nodes_line = line_no;
            continue;
        }
        if line.starts_with("ITEMS SECTION") {
            section = Section::Items;
            items_line = line_no;
            continue;
        }
        match section {
            Section::Header => {
                let Some((key, value)) = line.split_once(':') else {
                    return Err(Error::parse(line_no, format!("expected 'KEY: value', got '{line}'")));
                };
                let key = key.trim();
                match key {
                    "PROBLEM NAME" => header.name = Some(value.trim().to_string()),
                    "DIMENSION" => header.dimension = Some(num(value, line_no, key)?),
                    "NUMBER OF ITEMS" => header.num_items = Some(num(value, line_no, key)?),
                    "CAPACITY OF KNAPSACK" => header.capacity = Some(num(value, line_no, key)?),
                    "MIN SPEED" => header.v_min = Some(num(value, line_no, key)?),
                    "MAX SPEED" => header.v_max = Some(num(value, line_no, key)?),
                    "DROP RATE" => header.drop_rate = Some(num(value, line_no, key)?),
                    "DROP CONSTANT" => header.drop_constant = Some(num(value, line_no, key)?),
                    _ => {}
                }
            }
            Section::Nodes => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(Error::parse(line_no, "coordinate rows need 'id x y'"));
                }
                cities.push(City {
                    id: num(toks[0], line_no, "city id")?,
                    x: num(toks[1], line_no, "x")?,
                    y: num(toks[2], line_no, "y")?,
                });
            }
            Section::Items => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 4 {
                    return Err(Error::parse(line_no, "item rows need 'id profit weight city'"));
                }
                let item = Item {
                    id: num(toks[0], line_no, "item id")?,
                    profit: num(toks[1], line_no, "profit")?,
                    weight: num(toks[2], line_no, "weight")?,
                    city: num(toks[3], line_no, "city")?,
                };
                if item.city == 0 || header.dimension.is_some_and(|n| item.city > n) {
                    return Err(Error::parse(
                        line_no,
                        format!("item {} references unknown city {}", item.id, item.city),
                    ));
                }
                items.push(item);
            }
            Section::Done => unreachable!(),
        }
    }

    if section != Section::Done {
        return Err(Error::parse(last_line, "missing EOF terminator"));
    }
    if nodes_line == 0 {
        return Err(Error::parse(last_line, "missing NODE_COORD_SECTION"));
    }
    if items_line == 0 {
        return Err(Error::parse(last_line, "missing ITEMS SECTION"));
    }
    let missing = |key: &str| Error::parse(nodes_line, format!("missing header '{key}'"));
    let dimension = header.dimension.ok_or_else(|| missing("DIMENSION"))?;
    let num_items = header.num_items.ok_or_else(|| missing("NUMBER OF ITEMS"))?;
    let capacity = header.capacity.ok_or_else(|| missing("CAPACITY OF KNAPSACK"))?;
    let params = ThiefParams {
        v_min: header.v_min.ok_or_else(|| missing("MIN SPEED"))?,
        v_max: header.v_max.ok_or_else(|| missing("MAX SPEED"))?,
        drop_rate: header.drop_rate.ok_or_else(|| missing("DROP RATE"))?,
    };
    if cities.len() != dimension {
        return Err(Error::parse(
            items_line,
            format!("DIMENSION is {dimension} but {} coordinates were given", cities.len()),
        ));
    }
    if items.len() != num_items {
        return Err(Error::parse(
            last_line,
            format!("NUMBER OF ITEMS is {num_items} but {} items were given", items.len()),
        ));
    }
    let name = header.name.unwrap_or_default();
    match header.drop_constant {
        Some(c) => TtpInstance::with_drop_constant(name, cities, items, capacity, params, c),
        None => TtpInstance::new(name, cities, items, capacity, params),
    }
}
