//! Row tables rendered as CSV or as a JSON array of objects.

use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Float)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(csv_field)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
    }

    fn to_json(&self) -> String {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), json_value(cell)))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Json::Array(rows)).expect("serializable");
        s.push('\n');
        s
    }
}

/// 17 significant digits; non-finite values as `inf`, `-inf`, `nan`.
fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
        Cell::Bool(v) => v.to_string(),
        Cell::Null => String::new(),
        Cell::Text(s) => s.clone(),
    }
}

/// Non-finite floats have no JSON number form and become `null`.
fn json_value(cell: &Cell) -> Json {
    match cell {
        Cell::Int(v) => Json::from(*v),
        Cell::Float(v) => Number::from_f64(*v).map_or(Json::Null, Json::Number),
        Cell::Bool(v) => Json::Bool(*v),
        Cell::Text(s) => Json::String(s.clone()),
        Cell::Null => Json::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_floats() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec!["x,y".into(), 0.1.into(), Cell::Null]);
        t.push(vec!["say \"hi\"".into(), f64::INFINITY.into(), 3i64.into()]);
        assert_eq!(
            t.render(Format::Csv),
            "a,b,c\n\"x,y\",1.0000000000000001e-1,\n\"say \"\"hi\"\"\",inf,3\n"
        );
    }

    #[test]
    fn csv_floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.708_230_044_1e-7, -123456.789] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new(&["n", "value", "ok"]);
        t.push(vec![10usize.into(), f64::NAN.into(), true.into()]);
        let parsed: Json = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(parsed[0]["n"], 10);
        assert!(parsed[0]["value"].is_null());
        assert_eq!(parsed[0]["ok"], true);
    }
}
