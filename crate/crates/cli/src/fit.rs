use std::path::Path;

use crate::error::{CliError, Result};

pub const MIN_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<Fit> {
    if points.len() < MIN_POINTS {
        return Err(CliError::TooFewPoints { need: MIN_POINTS, found: points.len() });
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(Fit { slope, intercept: my - slope * mx, r2, points: logs.len() })
}

/// `(order, mults)` pairs from a bench CSV, skipping rows without counts.
pub fn read_points(path: &Path, engine: Option<&str>) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::BadSpec(format!("missing column {name}")))
    };
    let (order, mults, eng) = (col("order")?, col("mults")?, col("engine")?);
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        if engine.is_some_and(|e| row.get(eng) != Some(e)) {
            continue;
        }
        let (Some(Ok(n)), Some(Ok(m))) = (row.get(order).map(str::parse::<f64>), row.get(mults).map(str::parse::<f64>))
        else {
            continue;
        };
        if n > 0.0 && m > 0.0 {
            out.push((n, m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_square_law() {
        let pts: Vec<(f64, f64)> = [24.0, 120.0, 336.0, 1320.0].iter().map(|&n| (n, n * n)).collect();
        let f = fit_loglog(&pts).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!((f.r2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(fit_loglog(&[(2.0, 4.0), (3.0, 9.0)]), Err(CliError::TooFewPoints { found: 2, .. })));
    }
}
