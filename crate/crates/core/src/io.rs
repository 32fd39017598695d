//! CSV and JSON encodings of grids and report tables.

use serde_json::json;

use crate::error::{Error, Result};
use crate::lattice::{LatticeDim, Modes, WignerGrid};

/// Number rendering for CSV cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NumberFormat {
    /// Fixed decimals; `None` prints 17 significant digits.
    pub digits: Option<usize>,
}

impl NumberFormat {
    pub fn exact() -> Self {
        Self { digits: None }
    }

    pub fn fixed(digits: usize) -> Self {
        Self { digits: Some(digits) }
    }

    pub fn format(&self, x: f64) -> String {
        match self.digits {
            None => format!("{x:.16e}"),
            Some(n) => format!("{x:.n$}"),
        }
    }
}

/// A header plus string rows, rendered through the `csv` writer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Array of objects keyed by the header; integer, boolean and float cells
    /// become JSON scalars.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(r)
                    .map(|(h, v)| {
                        let val = if let Ok(i) = v.parse::<i64>() {
                            json!(i)
                        } else if v == "true" || v == "false" {
                            json!(v == "true")
                        } else {
                            v.parse::<f64>()
                                .ok()
                                .and_then(|x| serde_json::Number::from_f64(x).map(serde_json::Value::Number))
                                .unwrap_or_else(|| serde_json::Value::String(v.clone()))
                        };
                        (h.clone(), val)
                    })
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn grid_header(modes: Modes) -> &'static [&'static str] {
    match modes {
        Modes::One => &["n", "k", "w"],
        Modes::Two => &["n1", "n2", "k1", "k2", "w"],
    }
}

/// `n,k,w` (or `n1,n2,k1,k2,w`) rows in storage order.
pub fn grid_table(grid: &WignerGrid, fmt: NumberFormat) -> Table {
    let mut t = Table::new(grid_header(grid.modes()));
    for (labels, w) in grid.entries() {
        let mut row: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        row.push(fmt.format(w));
        t.push(row);
    }
    t
}

pub fn grid_to_json(grid: &WignerGrid) -> serde_json::Value {
    let header = grid_header(grid.modes());
    let points: Vec<serde_json::Value> = grid
        .entries()
        .into_iter()
        .map(|(labels, w)| json!({ "index": labels, "w": w }))
        .collect();
    json!({
        "d": grid.dim().d(),
        "modes": grid.modes().count(),
        "axes": &header[..header.len() - 1],
        "points": points,
    })
}

/// Parses a grid CSV written by [`grid_table`]; rows may come in any order.
pub fn read_grid_csv(text: &str) -> Result<WignerGrid> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
    let modes = match header.len() {
        3 => Modes::One,
        5 => Modes::Two,
        n => return Err(Error::Parse(format!("expected 3 or 5 columns, found {n}"))),
    };
    if header.iter().map(String::as_str).ne(grid_header(modes).iter().copied()) {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut records = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let parse_err = |s: &str| Error::Parse(format!("bad number '{s}'"));
        let axes = modes.axes();
        let mut labels = Vec::with_capacity(axes);
        for i in 0..axes {
            let s = rec.get(i).unwrap_or("").trim();
            labels.push(s.parse::<i64>().map_err(|_| parse_err(s))?);
        }
        let s = rec.get(axes).unwrap_or("").trim();
        records.push((labels, s.parse::<f64>().map_err(|_| parse_err(s))?));
    }
    let per_axis = (records.len() as f64).powf(1.0 / modes.axes() as f64).round() as usize;
    let dim = LatticeDim::new(per_axis)?;
    if per_axis.pow(modes.axes() as u32) != records.len() {
        return Err(Error::Parse(format!("{} rows do not form a square lattice", records.len())));
    }
    let d = dim.d();
    let mut values = vec![f64::NAN; records.len()];
    for (labels, w) in records {
        let mut flat = 0usize;
        for &l in &labels {
            dim.check(l)?;
            flat = flat * d + dim.index(l);
        }
        values[flat] = w;
    }
    WignerGrid::from_values(dim, modes, values)
}
