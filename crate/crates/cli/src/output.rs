//! CSV tables with a `# ` convention line, and their JSON mirror.

use std::io::Write;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(*v),
            Cell::Num(v) => Value::from(v.to_string()),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, header: &[(String, String)], out: W) -> csv::Result<()> {
        let mut out = out;
        let line: Vec<String> = header.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        writeln!(out, "# {}", line.join("; "))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, header: &[(String, String)]) -> Value {
        let mut h = Map::new();
        for (k, v) in header {
            h.insert(k.clone(), Value::from(v.as_str()));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert((*c).to_string(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("header".into(), Value::Object(h));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Table, Vec<(String, String)>) {
        let mut t = Table::new(&["name", "value", "count"]);
        t.push(vec!["a,b".into(), 0.125.into(), 3usize.into()]);
        t.push(vec!["c".into(), f64::NAN.into(), 0usize.into()]);
        (t, vec![("M".into(), "10".into())])
    }

    #[test]
    fn csv_has_the_convention_line_and_quotes_fields() {
        let (t, h) = sample();
        let mut buf = Vec::new();
        t.write_csv(&h, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# M: 10");
        assert_eq!(lines[1], "name,value,count");
        assert_eq!(lines[2], "\"a,b\",1.25e-1,3");
        assert_eq!(lines[3], "c,NaN,0");
    }

    #[test]
    fn json_uses_the_column_names() {
        let (t, h) = sample();
        let v = t.to_json(&h);
        assert_eq!(v["rows"][0]["value"], Value::from(0.125));
        assert_eq!(v["rows"][1]["value"], Value::from("NaN"));
        assert_eq!(v["header"]["M"], Value::from("10"));
    }
}
