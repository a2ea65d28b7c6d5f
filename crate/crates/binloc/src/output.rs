//! CSV schemas.
//!
//! Engine series: `generation,mean_fitness,best_fitness,fraction_at_optimum,online_performance`.
//! Locality reports: `ell,point_locality,dm,general_locality,dc` at three
//! decimals. Other floats use six significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use binloc_core::gea::GenerationStats;
use binloc_core::locality::LocalityReport;

use crate::error::{CliError, CliResult};
use crate::format::{fixed3, sig6};

pub const STATS_HEADER: [&str; 5] = [
    "generation",
    "mean_fitness",
    "best_fitness",
    "fraction_at_optimum",
    "online_performance",
];

pub const LOCALITY_HEADER: [&str; 5] = ["ell", "point_locality", "dm", "general_locality", "dc"];

/// In-memory CSV table; rendered once so file and stdout output agree byte for byte.
#[derive(Debug, Clone, Default)]
pub struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            rows: vec![header.iter().map(|h| h.as_ref().to_string()).collect()],
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| CliError::Validation(format!("csv: {e}")))
    }

    /// Writes to `path`, or stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> CliResult<()> {
        let bytes = self.render()?;
        match path {
            Some(p) => write_file(p, &bytes),
            None => io::stdout().write_all(&bytes).map_err(|e| CliError::io("<stdout>", e)),
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn stats_table(stats: &[GenerationStats]) -> Table {
    let mut t = Table::new(&STATS_HEADER);
    for s in stats {
        t.push(vec![
            s.generation.to_string(),
            sig6(s.mean_fitness),
            sig6(s.best_fitness),
            sig6(s.fraction_at_optimum),
            sig6(s.online_performance),
        ]);
    }
    t
}

pub fn locality_row(r: &LocalityReport) -> Vec<String> {
    let p = r.point_locality();
    let general = r
        .general
        .map(|g| fixed3(g.numerator as u128, g.pairs.max(1) as u128))
        .unwrap_or_default();
    vec![
        r.ell.to_string(),
        fixed3(*p.numer() as u128, *p.denom() as u128),
        r.dm.to_string(),
        general.clone(),
        general,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use binloc_core::locality::locality_report;
    use binloc_core::representation::make_sb;

    #[test]
    fn locality_rows() {
        let r = locality_report(&make_sb(5).unwrap(), true).unwrap();
        let mut t = Table::new(&LOCALITY_HEADER);
        t.push(locality_row(&r));
        let text = String::from_utf8(t.render().unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("ell,point_locality,dm,general_locality,dc"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&row[..3], ["5", "6.200", "416"]);
        assert_eq!(row[3], row[4]);
    }

    #[test]
    fn stats_header_is_stable() {
        let text = String::from_utf8(stats_table(&[]).render().unwrap()).unwrap();
        assert_eq!(text, "generation,mean_fitness,best_fitness,fraction_at_optimum,online_performance\n");
    }
}
