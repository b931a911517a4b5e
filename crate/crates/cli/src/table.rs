//! Self-describing tables: `#` metadata, a fixed header, rows, and an
//! optional trailing summary block.

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// Shortest round-trip form, switching to exponent notation outside
/// `[1e-5, 1e15)`.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, String)>,
}

impl Table {
    pub fn new(meta: Vec<(String, String)>, columns: &[&'static str]) -> Self {
        Table {
            meta,
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (k, v) in &self.meta {
            out.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.columns).expect("write to memory");
            for r in &self.rows {
                w.write_record(r.iter().map(Cell::csv)).expect("write to memory");
            }
            w.flush().expect("write to memory");
        }
        for (k, v) in &self.summary {
            out.extend_from_slice(format!("# summary {k}: {v}\n").as_bytes());
        }
        out
    }

    fn json(&self) -> Vec<u8> {
        let pairs = |kv: &[(String, String)]| {
            Value::Object(kv.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect())
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), pairs(&self.meta));
        top.insert("columns".into(), Value::from(self.columns.clone()));
        top.insert("rows".into(), Value::Array(rows));
        if !self.summary.is_empty() {
            top.insert("summary".into(), pairs(&self.summary));
        }
        let mut out = serde_json::to_vec_pretty(&Value::Object(top)).expect("serialise to memory");
        out.push(b'\n');
        out
    }
}
