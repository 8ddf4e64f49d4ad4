use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde_json::{Map, Number, Value};

use crate::args::{Format, Output};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
}

impl Cell {
    /// 17 significant digits; non-finite values spell `inf`, `-inf` or `nan`.
    fn text(&self) -> String {
        match *self {
            Cell::Real(v) if v.is_nan() => "nan".into(),
            Cell::Real(v) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Real(v) if !v.is_finite() => Value::Null,
            Cell::Real(_) => Value::Number(self.text().parse::<Number>().expect("formatted float")),
            Cell::Int(v) => Value::from(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> anyhow::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(&self.columns)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(Cell::text))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> anyhow::Result<()> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(map)
            })
            .collect();
        serde_json::to_writer_pretty(&mut w, &records)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn emit(&self, output: &Output, plot: &Plot) -> anyhow::Result<()> {
        let mut buf = Vec::new();
        match output.format {
            Format::Csv => self.write_csv(&mut buf)?,
            Format::Json => self.write_json(&mut buf)?,
        }
        match &output.out {
            Some(path) => {
                std::fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?
            }
            None => std::io::stdout().lock().write_all(&buf)?,
        }
        if let (Some(script), Some(data)) = (&output.gnuplot, &output.out) {
            std::fs::write(script, plot.script(self, data))
                .with_context(|| format!("writing {}", script.display()))?;
        }
        Ok(())
    }
}

/// Which columns a gnuplot stub should draw.
pub struct Plot {
    pub x: &'static str,
    pub y: Vec<&'static str>,
    pub title: String,
}

impl Plot {
    fn script(&self, table: &Table, data: &Path) -> String {
        let col = |name: &str| table.column(name).map_or(1, |i| i + 1);
        let mut s = String::new();
        s.push_str("set datafile separator ','\n");
        s.push_str("set datafile missing 'inf'\n");
        s.push_str(&format!("set title \"{}\"\n", self.title));
        s.push_str(&format!("set xlabel \"{}\"\n", self.x));
        let series: Vec<String> = self
            .y
            .iter()
            .map(|y| {
                format!(
                    "'{}' using {}:{} with lines title \"{y}\"",
                    data.display(),
                    col(self.x),
                    col(y)
                )
            })
            .collect();
        s.push_str(&format!("plot {}\n", series.join(", \\\n     ")));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(vec!["phi_rad", "delta_phi_rad", "ell"]);
        t.push(vec![
            Cell::Real(0.1),
            Cell::Real(f64::INFINITY),
            Cell::Int(1),
        ]);
        t.push(vec![Cell::Real(-2.5), Cell::Real(1.0 / 3.0), Cell::Int(3)]);
        t
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "phi_rad,delta_phi_rad,ell\n1.0000000000000001e-1,inf,1\n-2.5000000000000000e0,3.3333333333333331e-1,3\n"
        );
    }

    #[test]
    fn json_mirrors_csv() {
        let mut buf = Vec::new();
        sample().write_json(&mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["delta_phi_rad"], Value::Null);
        assert_eq!(v[1]["ell"], Value::from(3));
        assert!(String::from_utf8(buf)
            .unwrap()
            .contains("3.3333333333333331e-1"));
        let keys: Vec<_> = v[0].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["phi_rad", "delta_phi_rad", "ell"]);
    }
}
