//! JSON input documents for monoids and coefficient systems.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::exactalg::IntMatrix;
use crate::monoid::{validate, Elem, MonoidWithZero};
use crate::natsys::{bar_system, group_from_factors, trivial_z, NaturalSystem, ZeroModule};

/// An integer written as a JSON number or, past 64 bits, as a string.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum IntEntry {
    Small(i64),
    Big(String),
}

impl IntEntry {
    fn to_bigint(&self, locus: &str) -> Result<BigInt, CliError> {
        match self {
            IntEntry::Small(x) => Ok(BigInt::from(*x)),
            IntEntry::Big(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("{locus}: {s:?} is not an integer"))),
        }
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        match i64::try_from(x) {
            Ok(v) => IntEntry::Small(v),
            Err(_) => IntEntry::Big(x.to_string()),
        }
    }
}

pub type MatrixEntry = Vec<Vec<IntEntry>>;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDocument {
    pub elements: Vec<String>,
    pub identity: String,
    pub zero: String,
    pub table: Vec<Vec<String>>,
}

impl MonoidDocument {
    pub fn from_monoid(m: &MonoidWithZero) -> Self {
        MonoidDocument {
            elements: m.names().to_vec(),
            identity: m.name(m.identity()).to_string(),
            zero: m.name(m.zero()).to_string(),
            table: m
                .table()
                .iter()
                .map(|row| row.iter().map(|&e| m.name(e).to_string()).collect())
                .collect(),
        }
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| parse_error(source, &e))
    }

    pub fn to_monoid(&self) -> Result<MonoidWithZero, CliError> {
        let n = self.elements.len();
        let lookup = |name: &str, locus: &str| {
            self.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| CliError::Invalid(format!("{locus}: unknown element {name:?}")))
        };
        if self.table.len() != n {
            return Err(CliError::Invalid(format!(
                "table has {} rows, expected one per element ({n})",
                self.table.len()
            )));
        }
        let mut table = Vec::with_capacity(n);
        for (i, row) in self.table.iter().enumerate() {
            if row.len() != n {
                return Err(CliError::Invalid(format!(
                    "table row {i} ({:?}) has {} entries, expected {n}",
                    self.elements[i],
                    row.len()
                )));
            }
            let ids = row
                .iter()
                .enumerate()
                .map(|(j, name)| lookup(name, &format!("table[{i}][{j}]")))
                .collect::<Result<Vec<Elem>, _>>()?;
            table.push(ids);
        }
        let identity = lookup(&self.identity, "identity")?;
        let zero = lookup(&self.zero, "zero")?;
        validate(self.elements.clone(), identity, zero, table).map_err(CliError::Monoid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    /// The acting element (`α` for a left map, `β` for a right map).
    pub element: String,
    /// The object the map starts from.
    pub object: String,
    pub matrix: MatrixEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum CoefficientDocument {
    #[serde(rename = "trivial-Z")]
    TrivialZ,
    /// `group` lists invariant factors, `0` standing for `Z`. Elements
    /// without an action matrix act as the identity only if they are the
    /// identity of the monoid.
    #[serde(rename = "zero-module")]
    ZeroModule {
        group: Vec<u64>,
        action: BTreeMap<String, MatrixEntry>,
    },
    #[serde(rename = "bar")]
    Bar { degree: usize },
    #[serde(rename = "natural-system")]
    NaturalSystem {
        objects: BTreeMap<String, Vec<u64>>,
        left: Vec<MapDocument>,
        right: Vec<MapDocument>,
    },
}

impl CoefficientDocument {
    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| parse_error(source, &e))
    }

    pub fn to_system(&self, m: &MonoidWithZero) -> Result<NaturalSystem, CliError> {
        let element = |name: &str, locus: &str| {
            m.element(name)
                .ok_or_else(|| CliError::Invalid(format!("{locus}: unknown element {name:?}")))
        };
        match self {
            CoefficientDocument::TrivialZ => Ok(trivial_z(m)),
            CoefficientDocument::Bar { degree } => Ok(bar_system(m, *degree)),
            CoefficientDocument::ZeroModule { group, action } => {
                let group = group_from_factors(group);
                let r = group.rank();
                let mut mats = BTreeMap::new();
                for (name, rows) in action {
                    let s = element(name, "action")?;
                    if s == m.zero() {
                        return Err(CliError::Invalid("action: the zero element does not act".into()));
                    }
                    mats.insert(s, to_matrix(rows, (r, r), &format!("action[{name}]"))?);
                }
                mats.entry(m.identity()).or_insert_with(|| IntMatrix::identity(r));
                let module = ZeroModule { group, action: mats };
                crate::natsys::from_zero_module(m, &module).map_err(|e| CliError::Invalid(e.to_string()))
            }
            CoefficientDocument::NaturalSystem { objects, left, right } => {
                let mut values = vec![None; m.order()];
                for (name, factors) in objects {
                    let a = element(name, "objects")?;
                    if a == m.zero() {
                        return Err(CliError::Invalid("objects: the zero element is not an object".into()));
                    }
                    values[a] = Some(group_from_factors(factors));
                }
                let rank = |a: Elem, locus: &str| match values.get(a).and_then(Option::as_ref) {
                    Some(g) => Ok(g.rank()),
                    None => Err(CliError::Invalid(format!("{locus}: no group for object {:?}", m.name(a)))),
                };
                let mut lefts = BTreeMap::new();
                let mut rights = BTreeMap::new();
                for (side, maps) in [("left", left), ("right", right)] {
                    for (i, doc) in maps.iter().enumerate() {
                        let locus = format!("{side}[{i}]");
                        let x = element(&doc.element, &locus)?;
                        let a = element(&doc.object, &locus)?;
                        let target = if side == "left" { m.mul(x, a) } else { m.mul(a, x) };
                        let shape = (rank(target, &locus)?, rank(a, &locus)?);
                        let mat = to_matrix(&doc.matrix, shape, &locus)?;
                        if side == "left" {
                            lefts.insert((x, a), mat);
                        } else {
                            rights.insert((a, x), mat);
                        }
                    }
                }
                NaturalSystem::new(m, values, lefts, rights).map_err(|e| CliError::Invalid(e.to_string()))
            }
        }
    }
}

pub fn to_matrix(rows: &MatrixEntry, shape: (usize, usize), locus: &str) -> Result<IntMatrix, CliError> {
    let (r, c) = shape;
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        let found_cols = rows.first().map_or(0, Vec::len);
        return Err(CliError::Invalid(format!(
            "{locus}: matrix has shape {}×{found_cols}, expected {r}×{c}",
            rows.len()
        )));
    }
    let mut mat = IntMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            mat[(i, j)] = x.to_bigint(&format!("{locus}[{i}][{j}]"))?;
        }
    }
    Ok(mat)
}

pub fn matrix_entry(m: &IntMatrix) -> MatrixEntry {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(IntEntry::from_bigint).collect())
        .collect()
}

fn parse_error(source: &str, e: &serde_json::Error) -> CliError {
    CliError::Parse {
        input: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
