use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use lqdg::report::{Cell, Dataset};

use crate::args::Format;

/// Ordered key/value report; a key may carry one value per player.
#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, Vec<Cell>)>,
}

impl Report {
    pub fn scalar(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.entries.push((key.into(), vec![value.into()]));
    }

    pub fn vector(&mut self, key: impl Into<String>, values: &[f64]) {
        self.entries.push((key.into(), values.iter().map(|&v| Cell::Num(v)).collect()));
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) {
        self.scalar(key, value.to_string());
    }

    fn to_dataset(&self) -> Dataset {
        let mut d = Dataset::new(["key", "index", "value"]);
        for (key, values) in &self.entries {
            for (i, v) in values.iter().enumerate() {
                let index = if values.len() > 1 { Cell::Int(i as i64 + 1) } else { Cell::Empty };
                d.push(vec![key.as_str().into(), index, v.clone()]);
            }
        }
        d
    }

    fn to_text(&self) -> String {
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (key, values) in &self.entries {
            let rendered: Vec<String> = values.iter().map(Cell::render).collect();
            out.push_str(&format!("{key:<width$}  {}\n", rendered.join(", ")));
        }
        out
    }
}

pub enum Output {
    Report(Report),
    Table(Dataset),
}

fn table_text(d: &Dataset) -> String {
    let cells: Vec<Vec<String>> = std::iter::once(d.columns.clone())
        .chain(d.rows.iter().map(|r| r.iter().map(Cell::render).collect()))
        .collect();
    let widths: Vec<usize> = (0..d.columns.len())
        .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Report(r), Format::Text) => r.to_text(),
            (Output::Report(r), Format::Csv) => r.to_dataset().to_csv_string(),
            (Output::Table(d), Format::Text) => table_text(d),
            (Output::Table(d), Format::Csv) => d.to_csv_string(),
        }
    }

    pub fn write(&self, format: Format, path: Option<&Path>) -> io::Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => File::create(p)?.write_all(text.as_bytes()),
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}
