use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|s| s.to_string()).collect());
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// A single value.
    Line(String),
    /// Rows of labelled values, aligned in text mode.
    Table(Table),
    /// A matrix, emitted as CSV in both text and csv mode.
    Matrix(Table),
    /// A table in text and csv mode, with its own JSON rendering.
    Structured(Table, Value),
}

fn csv_string(t: &Table) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(&t.header).expect("in-memory write");
    for r in &t.rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf8")
}

fn aligned(t: &Table) -> String {
    let n = t.header.len();
    let mut width = vec![0; n];
    for row in std::iter::once(&t.header).chain(&t.rows) {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&t.header).chain(&t.rows) {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(k, c)| if k + 1 == n { c.clone() } else { format!("{c:<w$}", w = width[k]) })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn json_rows(t: &Table) -> Value {
    Value::Array(
        t.rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = t.header.iter().cloned().zip(r.iter().map(|c| json!(c))).collect();
                Value::Object(m)
            })
            .collect(),
    )
}

pub fn render(out: &Output, format: Format) -> String {
    match (out, format) {
        (Output::Line(s), Format::Text) => format!("{s}\n"),
        (Output::Line(s), Format::Csv) => csv_string(&Table {
            header: vec!["value".into()],
            rows: vec![vec![s.clone()]],
        }),
        (Output::Line(s), Format::Json) => format!("{}\n", json!(s)),
        (Output::Table(t) | Output::Structured(t, _), Format::Text) => aligned(t),
        (Output::Table(t) | Output::Matrix(t) | Output::Structured(t, _), Format::Csv)
        | (Output::Matrix(t), Format::Text) => csv_string(t),
        (Output::Structured(_, v), Format::Json) => format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")),
        (Output::Table(t) | Output::Matrix(t), Format::Json) => {
            format!("{}\n", serde_json::to_string_pretty(&json_rows(t)).expect("serializable"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let mut t = Table::new(["k", "value"]);
        t.push(["2", "9 d2"]);
        t.push(["10", "a, b"]);
        assert_eq!(render(&Output::Table(t.clone()), Format::Text), "k   value\n2   9 d2\n10  a, b\n");
        assert_eq!(render(&Output::Table(t.clone()), Format::Csv), "k,value\n2,9 d2\n10,\"a, b\"\n");
        assert_eq!(render(&Output::Matrix(t.clone()), Format::Text), render(&Output::Table(t), Format::Csv));
        assert_eq!(render(&Output::Line("x".into()), Format::Json), "\"x\"\n");
        assert_eq!(render(&Output::Line("x".into()), Format::Csv), "value\nx\n");
    }
}
