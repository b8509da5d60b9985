//! Minimal CSV writer: `#` comment lines, a header row, numeric rows.

/// Shortest round-trip decimal; scientific notation for tiny magnitudes.
pub fn fmt_num(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub struct Table {
    comments: Vec<String>,
    columns: Vec<String>,
    body: String,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table {
            comments: Vec::new(),
            columns,
            body: String::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row(&mut self, cells: &[f64]) {
        debug_assert_eq!(cells.len(), self.columns.len());
        let mut first = true;
        for c in cells {
            if !first {
                self.body.push(',');
            }
            first = false;
            self.body.push_str(&fmt_num(*c));
        }
        self.body.push('\n');
    }

    /// A row whose leading cells are text.
    pub fn row_mixed(&mut self, text: &[&str], cells: &[f64]) {
        debug_assert_eq!(text.len() + cells.len(), self.columns.len());
        self.body.push_str(&text.join(","));
        for c in cells {
            self.body.push(',');
            self.body.push_str(&fmt_num(*c));
        }
        self.body.push('\n');
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        out.push_str(&self.body);
        out
    }
}
