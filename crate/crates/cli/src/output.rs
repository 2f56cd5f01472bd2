//! CSV assembly. All numeric fields use fixed scientific notation with
//! 10 significant digits so byte-level reproducibility is checkable.

pub fn fmt_num(v: f64) -> String {
    format!("{v:.9e}")
}

pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            lines: vec![header.join(",")],
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn into_string(self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    #[cfg(test)]
    pub fn n_rows(&self) -> usize {
        self.lines.len() - 1
    }
}
