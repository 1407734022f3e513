//! JSON documents for solutions, racks, rack data and braces.
//!
//! Every document is an object with a `"kind"` discriminator. Tables are row-major and 0-based:
//! `lambda[x][y] = λ_x(y)`, `rho[y][x] = ρ_y(x)`, `op[x][y] = x ◁ y`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::brace::{BraceError, FiniteSkewBrace};
use crate::perm::Perm;
use crate::rack::{Rack, RackData, RackError};
use crate::solution::{Solution, SolutionError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error")]
pub enum DocumentError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("schema violation at `{path}`: {detail}")]
    SchemaError { path: String, detail: String },
    #[error("unknown document kind `{kind}`")]
    KindUnknown { kind: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub n: usize,
    pub lambda: Vec<Vec<usize>>,
    pub rho: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub index_base: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RackDocument {
    pub n: usize,
    pub op: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RackDataDocument {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    /// `f[i][j]` in one-line notation on the positions of block `i`.
    pub f: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraceDocument {
    pub n: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Solution(SolutionDocument),
    Rack(RackDocument),
    RackData(RackDataDocument),
    Brace(BraceDocument),
}

fn schema(path: impl Into<String>, detail: impl Into<String>) -> DocumentError {
    DocumentError::SchemaError { path: path.into(), detail: detail.into() }
}

fn get_n(obj: &Map<String, Value>) -> Result<usize, DocumentError> {
    match obj.get("n") {
        Some(v) => v.as_u64().map(|n| n as usize).ok_or_else(|| schema("n", "expected a non-negative integer")),
        None => Err(schema("n", "missing field")),
    }
}

/// Checks that `obj[field]` is a `rows × cols` matrix with entries in `0..bound`.
fn check_matrix(obj: &Map<String, Value>, field: &str, rows: usize, cols: usize, bound: usize) -> Result<(), DocumentError> {
    let Some(v) = obj.get(field) else {
        return Err(schema(field, "missing field"));
    };
    let rs = v.as_array().ok_or_else(|| schema(field, "expected an array of rows"))?;
    if rs.len() != rows {
        return Err(schema(field, format!("expected {rows} rows, found {}", rs.len())));
    }
    for (i, r) in rs.iter().enumerate() {
        check_row(r, &format!("{field}[{i}]"), cols, bound)?;
    }
    Ok(())
}

fn check_row(r: &Value, path: &str, cols: usize, bound: usize) -> Result<(), DocumentError> {
    let cs = r.as_array().ok_or_else(|| schema(path, "expected an array"))?;
    if cs.len() != cols {
        return Err(schema(path, format!("expected {cols} entries, found {}", cs.len())));
    }
    for (j, c) in cs.iter().enumerate() {
        match c.as_u64() {
            Some(x) if (x as usize) < bound => {}
            _ => return Err(schema(format!("{path}[{j}]"), format!("expected an integer in 0..{bound}"))),
        }
    }
    Ok(())
}

fn check_rack_data_shape(obj: &Map<String, Value>, n: usize) -> Result<(), DocumentError> {
    let blocks = obj.get("blocks").and_then(Value::as_array).ok_or_else(|| schema("blocks", "expected an array"))?;
    let mut sizes = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let len = b.as_array().map(Vec::len).ok_or_else(|| schema(format!("blocks[{i}]"), "expected an array"))?;
        check_row(b, &format!("blocks[{i}]"), len, n)?;
        sizes.push(len);
    }
    let f = obj.get("f").and_then(Value::as_array).ok_or_else(|| schema("f", "expected an array"))?;
    if f.len() != sizes.len() {
        return Err(schema("f", format!("expected {} rows", sizes.len())));
    }
    for (i, row) in f.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| schema(format!("f[{i}]"), "expected an array"))?;
        if row.len() != sizes.len() {
            return Err(schema(format!("f[{i}]"), format!("expected {} entries", sizes.len())));
        }
        for (j, p) in row.iter().enumerate() {
            check_row(p, &format!("f[{i}][{j}]"), sizes[i], sizes[i])?;
        }
    }
    Ok(())
}

pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocumentError::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| schema("", "expected an object"))?;
    let kind = match obj.get("kind") {
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(schema("kind", "expected a string")),
        None => return Err(schema("kind", "missing field")),
    };
    let n = match kind.as_str() {
        "solution" | "rack" | "rack_data" | "brace" => get_n(obj)?,
        _ => return Err(DocumentError::KindUnknown { kind }),
    };
    match kind.as_str() {
        "solution" => {
            check_matrix(obj, "lambda", n, n, n)?;
            check_matrix(obj, "rho", n, n, n)?;
            if obj.get("index_base").is_some_and(|b| b.as_u64() != Some(0)) {
                return Err(schema("index_base", "only 0 is supported"));
            }
        }
        "rack" => check_matrix(obj, "op", n, n, n)?,
        "brace" => {
            check_matrix(obj, "add", n, n, n)?;
            check_matrix(obj, "mul", n, n, n)?;
        }
        _ => check_rack_data_shape(obj, n)?,
    }
    serde_json::from_value(value).map_err(|e| schema("", e.to_string()))
}

/// Pretty JSON with arrays of scalars kept on one line, so each table row is one line.
pub fn to_json(doc: &Document) -> String {
    pretty(&serde_json::to_value(doc).expect("documents serialize"))
}

pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("scalars serialize")),
    }
}

impl SolutionDocument {
    pub fn from_solution(s: &Solution) -> Self {
        SolutionDocument {
            n: s.n(),
            lambda: s.lam_table().to_vec(),
            rho: s.rho_table().to_vec(),
            name: s.name.clone(),
            index_base: 0,
            note: None,
        }
    }

    pub fn to_solution(&self) -> Result<Solution, SolutionError> {
        let s = Solution::new(self.lambda.clone(), self.rho.clone())?;
        Ok(match &self.name {
            Some(name) => s.with_name(name.clone()),
            None => s,
        })
    }
}

impl RackDocument {
    pub fn from_rack(r: &Rack) -> Self {
        RackDocument { n: r.n(), op: r.table().to_vec(), name: None }
    }

    pub fn to_rack(&self) -> Result<Rack, RackError> {
        Rack::new(self.op.clone())
    }
}

impl RackDataDocument {
    pub fn from_data(d: &RackData) -> Self {
        RackDataDocument {
            n: d.blocks.iter().map(Vec::len).sum(),
            blocks: d.blocks.clone(),
            f: d.f.iter().map(|row| row.iter().map(|p| p.0.clone()).collect()).collect(),
            name: None,
        }
    }

    pub fn to_data(&self) -> RackData {
        RackData {
            blocks: self.blocks.clone(),
            f: self.f.iter().map(|row| row.iter().map(|p| Perm(p.clone())).collect()).collect(),
        }
    }
}

impl BraceDocument {
    pub fn from_brace(b: &FiniteSkewBrace) -> Self {
        BraceDocument { n: b.size(), add: b.add_table().to_vec(), mul: b.mul_table().to_vec(), name: None, note: None }
    }

    pub fn to_brace(&self) -> Result<FiniteSkewBrace, BraceError> {
        FiniteSkewBrace::new(self.add.clone(), self.mul.clone())
    }
}
