use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("cannot parse {0:?} as a number")]
    Number(String),
    #[error("logspace needs `logspace:a,b,count`, got {0:?}")]
    Logspace(String),
    #[error("grid values must be finite and at least 1, got {0}")]
    Range(f64),
}

fn number(s: &str) -> Result<f64, GridError> {
    s.trim().parse::<f64>().map_err(|_| GridError::Number(s.to_owned()))
}

/// Parse `"x1,x2,…"` or `"logspace:a,b,count"` (points `10^a … 10^b`,
/// as in numpy). The result is sorted ascending with duplicates removed.
/// An empty or blank string is the empty grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, GridError> {
    let spec = spec.trim();
    let mut out = if let Some(rest) = spec.strip_prefix("logspace:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(GridError::Logspace(spec.to_owned()));
        }
        let a = number(parts[0])?;
        let b = number(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| GridError::Logspace(spec.to_owned()))?;
        match count {
            0 => vec![],
            1 => vec![10f64.powf(a)],
            _ => (0..count)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
                .collect(),
        }
    } else if spec.is_empty() {
        vec![]
    } else {
        spec.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if let Some(&bad) = out.iter().find(|x| !(x.is_finite() && **x >= 1.0)) {
        return Err(GridError::Range(bad));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}
