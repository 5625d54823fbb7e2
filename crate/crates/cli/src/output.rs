//! The output document: every number is a decimal string with a unit tag.

use std::io::Write;

use bernoulli_entropy::numerics::Sign;
use bernoulli_entropy::LogF64;
use serde_json::{json, Map, Value};

// Below this magnitude (and above its reciprocal) a `log_value` companion is emitted.
const LN_TINY: f64 = -690.7755278982137;

/// Six significant digits, plain decimal where readable.
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{rounded:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{rounded:.5e}");
        let (mant, e) = s.split_once('e').expect("scientific form");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

// Decimal string for sign·e^ln, valid far outside the f64 range.
fn sig6_from_ln(negative: bool, ln: f64) -> String {
    let log10 = ln / std::f64::consts::LN_10;
    let mut exp = log10.floor();
    let mut mant = 10f64.powf(log10 - exp);
    if format!("{mant:.5}").starts_with("10") {
        mant /= 10.0;
        exp += 1.0;
    }
    let mant = format!("{mant:.5}");
    let mant = mant.trim_end_matches('0').trim_end_matches('.');
    format!("{}{mant}e{}", if negative { "-" } else { "" }, exp as i64)
}

pub fn quantity(v: f64, unit: &str) -> Value {
    let mut q = json!({ "value": sig6(v), "unit": unit });
    if v != 0.0 && v.is_finite() && v.abs() < 1e-300 {
        q["log_value"] = Value::String(sig6(v.abs().ln()));
    }
    q
}

pub fn log_quantity(v: LogF64, unit: &str) -> Value {
    if v.is_zero() {
        return quantity(0.0, unit);
    }
    let ln = v.logmag();
    let negative = v.sign() == Sign::Negative;
    let mut q = if !(LN_TINY..=-LN_TINY).contains(&ln) {
        json!({ "value": sig6_from_ln(negative, ln), "unit": unit })
    } else {
        json!({ "value": sig6(v.value()), "unit": unit })
    };
    if ln < LN_TINY {
        q["log_value"] = Value::String(sig6(ln));
    }
    q
}

pub fn integer(v: u64, unit: &str) -> Value {
    json!({ "value": v.to_string(), "unit": unit })
}

/// Builds entropy quantities in nats, or bits when requested.
#[derive(Debug, Clone, Copy)]
pub struct Units {
    pub bits: bool,
}

impl Units {
    pub fn entropy(&self, nats: f64) -> Value {
        if self.bits {
            quantity(nats / std::f64::consts::LN_2, "bits")
        } else {
            quantity(nats, "nats")
        }
    }

    pub fn log_entropy(&self, nats: LogF64) -> Value {
        if self.bits {
            log_quantity(nats / LogF64::from(std::f64::consts::LN_2), "bits")
        } else {
            log_quantity(nats, "nats")
        }
    }
}

pub struct Document {
    pub command: Vec<String>,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub conditions: Vec<Value>,
    pub notes: Vec<String>,
}

impl Document {
    pub fn new(command: Vec<String>) -> Self {
        Document {
            command,
            inputs: Map::new(),
            results: Map::new(),
            conditions: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: Value) {
        self.inputs.insert(key.into(), v);
    }

    pub fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.into(), v);
    }

    pub fn condition(&mut self, c: &bernoulli_entropy::entropybound::ConditionCheck) {
        self.conditions.push(json!({
            "name": c.name,
            "required": c.required,
            "actual": quantity(c.actual, "dimensionless"),
            "satisfied": c.satisfied,
        }));
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tool": env!("CARGO_PKG_NAME").trim_end_matches("-cli"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "conditions": self.conditions,
            "notes": self.notes,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Pretty,
    Machine,
    Csv,
}

pub fn render(doc: &Document, format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Machine => {
            serde_json::to_writer_pretty(&mut *out, &doc.to_json())?;
            writeln!(out)
        }
        Format::Csv => render_csv(doc, out),
        Format::Pretty => render_pretty(doc, out),
    }
}

fn is_quantity(v: &Value) -> bool {
    v.get("value").is_some_and(Value::is_string) && v.get("unit").is_some()
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => "-".into(),
        v if is_quantity(v) => v["value"].as_str().unwrap_or_default().to_string(),
        v => v.to_string(),
    }
}

fn with_unit(v: &Value) -> String {
    if is_quantity(v) {
        let unit = v["unit"].as_str().unwrap_or_default();
        match (unit, v.get("log_value")) {
            ("dimensionless" | "count", None) => cell(v),
            (_, None) => format!("{} {unit}", cell(v)),
            (_, Some(l)) => format!("{} {unit} (ln = {})", cell(v), cell(l)),
        }
    } else {
        cell(v)
    }
}

fn render_csv(doc: &Document, out: &mut impl Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["section", "key", "value", "unit", "log_value"])?;
    let mut rows = Vec::new();
    for (section, map) in [("inputs", &doc.inputs), ("results", &doc.results)] {
        for (k, v) in map {
            flatten(section, k, v, &mut rows);
        }
    }
    for c in &doc.conditions {
        let name = c["name"].as_str().unwrap_or_default();
        rows.push(["conditions".into(), name.into(), cell(&c["actual"]), "dimensionless".into(), String::new()]);
        rows.push(["conditions".into(), format!("{name}.satisfied"), cell(&c["satisfied"]), String::new(), String::new()]);
    }
    for (i, n) in doc.notes.iter().enumerate() {
        rows.push(["notes".into(), i.to_string(), n.clone(), String::new(), String::new()]);
    }
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

fn flatten(section: &str, key: &str, v: &Value, rows: &mut Vec<[String; 5]>) {
    match v {
        v if is_quantity(v) => rows.push([
            section.into(),
            key.into(),
            cell(v),
            cell(&v["unit"]),
            v.get("log_value").map(cell).unwrap_or_default(),
        ]),
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(section, &format!("{key}.{k}"), x, rows)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(section, &format!("{key}.{i}"), x, rows)),
        v => rows.push([section.into(), key.into(), cell(v), String::new(), String::new()]),
    }
}

fn render_pretty(doc: &Document, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", doc.command.first().map(String::as_str).unwrap_or_default())?;
    for (title, map) in [("inputs", &doc.inputs), ("results", &doc.results)] {
        if map.is_empty() {
            continue;
        }
        writeln!(out, "\n{title}")?;
        pretty_map(map, 1, out)?;
    }
    if !doc.conditions.is_empty() {
        writeln!(out, "\nconditions")?;
        for c in &doc.conditions {
            let ok = c["satisfied"].as_bool().unwrap_or(false);
            writeln!(
                out,
                "  [{}] {}  (actual {}, required {})",
                if ok { "ok" } else { "FAILED" },
                cell(&c["name"]),
                cell(&c["actual"]),
                cell(&c["required"])
            )?;
        }
    }
    if !doc.notes.is_empty() {
        writeln!(out, "\nnotes")?;
        for n in &doc.notes {
            writeln!(out, "  - {n}")?;
        }
    }
    Ok(())
}

fn pretty_map(map: &Map<String, Value>, depth: usize, out: &mut impl Write) -> std::io::Result<()> {
    let pad = "  ".repeat(depth);
    let width = map.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in map {
        match v {
            Value::Object(m) if !is_quantity(v) => {
                writeln!(out, "{pad}{k}")?;
                pretty_map(m, depth + 1, out)?;
            }
            Value::Array(rows) if rows.iter().all(|r| r.is_object() && !is_quantity(r)) && !rows.is_empty() => {
                writeln!(out, "{pad}{k}")?;
                pretty_table(rows, depth + 1, out)?;
            }
            Value::Array(items) => {
                let cells: Vec<String> = items.iter().map(cell).collect();
                let unit = items.first().filter(|x| is_quantity(x)).map(|x| cell(&x["unit"]));
                let unit = unit.map(|u| format!(" {u}")).unwrap_or_default();
                writeln!(out, "{pad}{k:width$}  [{}]{unit}", cells.join(", "))?;
            }
            v => writeln!(out, "{pad}{k:width$}  {}", with_unit(v))?,
        }
    }
    Ok(())
}

fn pretty_table(rows: &[Value], depth: usize, out: &mut impl Write) -> std::io::Result<()> {
    let mut columns: Vec<(String, String)> = Vec::new();
    for r in rows {
        for (k, v) in r.as_object().expect("checked above") {
            if !columns.iter().any(|(c, _)| c == k) {
                let unit = if is_quantity(v) { cell(&v["unit"]) } else { String::new() };
                columns.push((k.clone(), unit));
            }
        }
    }
    let headers: Vec<String> = columns
        .iter()
        .map(|(k, u)| match u.as_str() {
            "" | "count" | "dimensionless" => k.clone(),
            u => format!("{k} [{u}]"),
        })
        .collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| columns.iter().map(|(k, _)| r.get(k).map(cell).unwrap_or_else(|| "-".into())).collect())
        .collect();
    let widths: Vec<usize> = (0..columns.len())
        .map(|i| body.iter().map(|r| r[i].len()).chain([headers[i].len()]).max().unwrap_or(0))
        .collect();
    let pad = "  ".repeat(depth);
    let line = |cells: &[String]| {
        let joined: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        format!("{pad}{}", joined.join("  "))
    };
    writeln!(out, "{}", line(&headers))?;
    for r in &body {
        writeln!(out, "{}", line(r))?;
    }
    Ok(())
}
