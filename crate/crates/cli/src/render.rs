//! Plain aligned text tables.

use std::fmt::Write;

#[derive(Default)]
pub struct Table {
    title: Option<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

impl Table {
    pub fn new<S: ToString>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn row<S: ToString>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(|s| s.to_string()).collect());
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn render(&self) -> String {
        let cols = self.rows.iter().map(Vec::len).chain([self.header.len()]).max().unwrap_or(0);
        let mut widths = vec![0; cols];
        for row in std::iter::once(&self.header).chain(&self.rows) {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        if let Some(t) = &self.title {
            writeln!(out, "{t}").unwrap();
        }
        let line = |out: &mut String, row: &[String]| {
            let cells: Vec<String> =
                row.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        };
        if !self.header.is_empty() {
            line(&mut out, &self.header);
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            writeln!(out, "{}", rule.join("  ")).unwrap();
        }
        for row in &self.rows {
            line(&mut out, row);
        }
        for n in &self.notes {
            writeln!(out, "{n}").unwrap();
        }
        out
    }
}

/// Key/value pairs as a two-column table.
pub fn pairs<K: ToString, V: ToString>(title: &str, items: impl IntoIterator<Item = (K, V)>) -> Table {
    let mut t = Table::new(Vec::<String>::new()).titled(title);
    for (k, v) in items {
        t.row([k.to_string(), v.to_string()]);
    }
    t
}
