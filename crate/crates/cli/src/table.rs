//! Subgradient samples from CSV: a header row, then `x_1..x_n, g_1..g_n`
//! per row. Rows sharing the same `x` list the vertices of the set at `x`.

use std::path::Path;

use subsmooth_core::subdiff::{SampleTable, SubdiffOracle};

use crate::error::CliError;

pub fn read_table<R: std::io::Read>(src: R, name: &str) -> Result<SampleTable, CliError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(src);
    let cols = r.headers().map_err(|e| CliError::Data(format!("{name}: {e}")))?.len();
    if cols == 0 || cols % 2 != 0 {
        return Err(CliError::Data(format!(
            "{name}: expected an even number of columns x_1..x_n, g_1..g_n, found {cols}"
        )));
    }
    let dim = cols / 2;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::Data(format!("{name}: {e}")))?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|c| c.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Data(format!("{name}, line {line}: {e}")))?;
        rows.push((vals[..dim].to_vec(), vals[dim..].to_vec()));
    }
    SampleTable::from_rows(dim, rows).map_err(|e| CliError::Data(format!("{name}: {e}")))
}

pub fn load_oracle(path: &Path) -> Result<SubdiffOracle, CliError> {
    let f = std::fs::File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let table = read_table(f, &path.display().to_string())?;
    SubdiffOracle::from_table(table).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_rows_by_point() {
        let t = read_table("x1,g1\n0,-1\n0,1\n0.5,1\n".as_bytes(), "t").unwrap();
        assert_eq!(t.dim, 1);
        assert_eq!(t.points.len(), 2);
        let t = read_table("x1,x2,g1,g2\n0,0,1,0\n0,0,0,1\n".as_bytes(), "t").unwrap();
        assert_eq!((t.dim, t.points.len(), t.points[0].1.len()), (2, 1, 2));
    }

    #[test]
    fn rejects_malformed_tables() {
        for bad in ["x1,g1,z\n1,2,3\n", "x1,g1\n1,abc\n", "x1,g1\n", "x1,g1\n1,2,3\n", "x1,g1\n1,inf\n"] {
            assert!(matches!(read_table(bad.as_bytes(), "t"), Err(CliError::Data(_))), "{bad:?}");
        }
    }
}
