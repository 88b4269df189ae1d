//! Reports: named scalar fields followed by tables, rendered as aligned text
//! or as JSON. Text output prints reals with 17 significant digits so that
//! two runs can be compared byte for byte.

use num_complex::Complex64;
use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Complex(Complex64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}
impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v.into())
    }
}
impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}
impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}
impl From<Complex64> for Value {
    fn from(v: Complex64) -> Self {
        Value::Complex(v)
    }
}
impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}
impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}
impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

fn real_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

impl Value {
    pub(crate) fn text(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => real_text(*v),
            Value::Complex(z) => {
                let im = real_text(z.im);
                let sign = if im.starts_with('-') { "" } else { "+" };
                format!("{}{sign}{im}i", real_text(z.re))
            }
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Null => "-".to_owned(),
        }
    }

    fn json(&self) -> Json {
        let real = |x: f64| if x.is_finite() { json!(x) } else { json!(x.to_string()) };
        match self {
            Value::Int(v) => json!(v),
            Value::Real(v) => real(*v),
            Value::Complex(z) => json!({ "re": real(z.re), "im": real(z.im) }),
            Value::Bool(b) => json!(b),
            Value::Text(s) => json!(s),
            Value::Null => Json::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_owned(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub fields: Vec<(String, Value)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            fields: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_owned(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command = {}\n", self.command);
        for (k, v) in &self.fields {
            out += &format!("{k} = {}\n", v.text());
        }
        for t in &self.tables {
            out += &format!("\n[{}]\n", t.name);
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Value::text).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| cells.iter().map(|r| r[c].len()).chain([t.columns[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |items: Vec<&str>| {
                let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
                padded.join("  ").trim_end().to_owned() + "\n"
            };
            out += &line(t.columns.iter().map(String::as_str).collect());
            for r in &cells {
                out += &line(r.iter().map(String::as_str).collect());
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut fields = Map::new();
        for (k, v) in &self.fields {
            fields.insert(k.clone(), v.json());
        }
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Json> = t
                .rows
                .iter()
                .map(|r| Json::Object(t.columns.iter().cloned().zip(r.iter().map(Value::json)).collect()))
                .collect();
            tables.insert(t.name.clone(), Json::Array(rows));
        }
        let doc = json!({ "command": self.command, "fields": fields, "tables": tables });
        serde_json::to_string_pretty(&doc).expect("report serialises") + "\n"
    }
}
