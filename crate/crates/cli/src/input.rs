//! Input ingestion: dependency-spec documents, probability lists, integer flags.

use std::collections::BTreeMap;
use std::path::Path;

use bernoulli_entropy::chenstein::{B3Terms, DependencySpec};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Indexed<V> {
    Map(BTreeMap<String, V>),
    List(Vec<V>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum B3Field {
    Tag(String),
    Terms(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    m: usize,
    marginals: Indexed<f64>,
    neighborhoods: Indexed<Vec<usize>>,
    #[serde(default)]
    pair_expectations: Vec<(usize, usize, f64)>,
    b3: B3Field,
}

fn dense<V>(field: &str, m: usize, values: Indexed<V>) -> Result<Vec<V>, CliError> {
    let out = match values {
        Indexed::List(v) => v,
        Indexed::Map(map) => {
            let mut slots: Vec<Option<V>> = (0..map.len()).map(|_| None).collect();
            for (k, v) in map {
                let i: usize = k
                    .parse()
                    .map_err(|_| CliError::Input(format!("{field}: key {k:?} is not an index")))?;
                let slot = slots
                    .get_mut(i)
                    .ok_or_else(|| CliError::Input(format!("{field}: indices must be contiguous from 0, found {i}")))?;
                *slot = Some(v);
            }
            slots.into_iter().map(|s| s.expect("contiguous keys fill every slot")).collect()
        }
    };
    if out.len() != m {
        return Err(CliError::Input(format!("{field}: {} entries but m = {m}", out.len())));
    }
    Ok(out)
}

pub fn parse_spec(text: &str) -> Result<DependencySpec<f64>, CliError> {
    let doc: SpecDocument =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("dependency spec: {e}")))?;
    let b3 = match doc.b3 {
        B3Field::Tag(t) if t == "zero" => B3Terms::Zero,
        B3Field::Tag(t) => return Err(CliError::Input(format!("b3: expected \"zero\" or a list, got {t:?}"))),
        B3Field::Terms(v) => B3Terms::Explicit(v),
    };
    let mut pairs = BTreeMap::new();
    for (a, b, v) in doc.pair_expectations {
        if pairs.insert((a, b), v).is_some() {
            return Err(CliError::Input(format!("pair_expectations: ({a}, {b}) given twice")));
        }
    }
    Ok(DependencySpec {
        marginals: dense("marginals", doc.m, doc.marginals)?,
        neighborhoods: dense("neighborhoods", doc.m, doc.neighborhoods)?,
        pair_expectations: pairs,
        b3,
    })
}

/// A file of numbers, or the numbers themselves, separated by commas,
/// whitespace or JSON brackets.
pub fn parse_probs(arg: &str) -> Result<Vec<f64>, CliError> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    text.split(|c: char| c == ',' || c == '[' || c == ']' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| CliError::Input(format!("not a probability: {t:?}"))))
        .collect()
}

/// Accepts `100000000` as well as `1e8`, provided the value is a whole number.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 {
        Ok(v as u64)
    } else {
        Err(format!("{s:?} is not a non-negative whole number"))
    }
}
