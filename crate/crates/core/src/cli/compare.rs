use std::fmt;

use super::output::Table;
use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnDiff {
    pub name: String,
    pub sup: f64,
    /// `(∫ d² dx)^{1/2}` by the trapezoid rule over the first column.
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub columns: Vec<ColumnDiff>,
    pub tol: f64,
    pub pass: bool,
    /// `max |cross|` when the first table carries an interference column.
    pub max_cross: Option<f64>,
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.columns {
            let verdict = if c.sup <= self.tol { "ok" } else { "FAIL" };
            writeln!(f, "{:<12} sup={:.6e} l2={:.6e} {verdict}", c.name, c.sup, c.l2)?;
        }
        if let Some(m) = self.max_cross {
            writeln!(f, "max |cross| = {m:.6e}")?;
        }
        write!(f, "{} at tol {:e}", if self.pass { "PASS" } else { "FAIL" }, self.tol)
    }
}

fn same_grid(a: &Table, b: &Table) -> Result<(), CliError> {
    let (xa, xb) = (a.column(&a.headers[0]), b.column(&b.headers[0]));
    if a.headers[0] != b.headers[0] {
        return Err(CliError::Validation(format!(
            "first columns differ: '{}' vs '{}'",
            a.headers[0], b.headers[0]
        )));
    }
    let (xa, xb) = (xa.unwrap_or_default(), xb.unwrap_or_default());
    if xa.len() != xb.len() {
        return Err(CliError::Validation(format!("row counts differ: {} vs {}", xa.len(), xb.len())));
    }
    for (i, (u, v)) in xa.iter().zip(&xb).enumerate() {
        if (u - v).abs() > 1e-12 * u.abs().max(1.0) {
            return Err(CliError::Validation(format!("grids differ at row {}: {u} vs {v}", i + 1)));
        }
    }
    Ok(())
}

/// Compares `a` against `b` (plus `add`, if given) column by column.
/// With no `columns`, every column after the first that `a` and `b` share is
/// compared.
pub fn compare_tables(
    a: &Table,
    b: &Table,
    add: Option<&Table>,
    columns: &[String],
    tol: f64,
) -> Result<CompareReport, CliError> {
    if !(tol >= 0.0) {
        return Err(CliError::Validation(format!("tolerance must be >= 0, got {tol}")));
    }
    if a.headers.is_empty() || b.headers.is_empty() {
        return Err(CliError::Validation("empty header row".into()));
    }
    same_grid(a, b)?;
    if let Some(c) = add {
        same_grid(a, c)?;
    }
    let names: Vec<String> = if columns.is_empty() {
        a.headers[1..]
            .iter()
            .filter(|h| b.column_index(h).is_some())
            .cloned()
            .collect()
    } else {
        columns.to_vec()
    };
    if names.is_empty() {
        return Err(CliError::Validation("no common columns to compare".into()));
    }
    let x = a.column(&a.headers[0]).unwrap_or_default();
    let mut diffs = Vec::new();
    for name in &names {
        let missing = |t: &str| CliError::Validation(format!("column '{name}' missing from {t}"));
        let ya = a.column(name).ok_or_else(|| missing("first file"))?;
        let mut yb = b.column(name).ok_or_else(|| missing("second file"))?;
        if let Some(c) = add {
            let yc = c.column(name).ok_or_else(|| missing("added file"))?;
            for (u, v) in yb.iter_mut().zip(yc) {
                *u += v;
            }
        }
        let d: Vec<f64> = ya.iter().zip(&yb).map(|(u, v)| (u - v).abs()).collect();
        let sup = d.iter().cloned().fold(0.0, f64::max);
        let l2 = x
            .windows(2)
            .zip(d.windows(2))
            .map(|(xs, ds)| 0.5 * (xs[1] - xs[0]).abs() * (ds[0] * ds[0] + ds[1] * ds[1]))
            .sum::<f64>()
            .sqrt();
        diffs.push(ColumnDiff { name: name.clone(), sup, l2 });
    }
    let pass = diffs.iter().all(|c| c.sup <= tol);
    let max_cross = a
        .column("cross")
        .map(|c| c.iter().map(|v| v.abs()).fold(0.0, f64::max));
    Ok(CompareReport {
        columns: diffs,
        tol,
        pass,
        max_cross,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(ys: &[f64]) -> Table {
        let mut t = Table::new(&["x", "P"]);
        for (i, &y) in ys.iter().enumerate() {
            t.push(vec![i as f64, y]);
        }
        t
    }

    #[test]
    fn identical_tables_have_zero_difference() {
        let t = table(&[1.0, 2.0, 3.0]);
        let r = compare_tables(&t, &t, None, &[], 0.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.columns[0].sup, 0.0);
    }

    #[test]
    fn sums_and_mismatches() {
        let r = compare_tables(&table(&[3.0, 5.0]), &table(&[1.0, 2.0]), Some(&table(&[2.0, 3.0])), &[], 1e-12).unwrap();
        assert!(r.pass);
        let r = compare_tables(&table(&[3.0, 5.0]), &table(&[1.0, 2.0]), None, &[], 1e-12).unwrap();
        assert!(!r.pass);
        assert_eq!(r.columns[0].sup, 3.0);
        assert!(compare_tables(&table(&[1.0]), &table(&[1.0, 2.0]), None, &[], 1.0).is_err());
        assert!(compare_tables(&table(&[1.0]), &table(&[1.0]), None, &["Q".into()], 1.0).is_err());
    }
}
