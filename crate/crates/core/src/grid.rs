//! Evenly spaced grids written as `start:step:end`.

use std::str::FromStr;

use crate::error::{Error, Result};

/// Closed grid `start, start + step, ..., end`. The last point is `end` itself
/// when `end − start` is a multiple of `step` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub end: f64,
}

impl Grid {
    pub fn new(start: f64, step: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && end.is_finite()) {
            return Err(Error::Parse("grid bounds must be finite".into()));
        }
        if step <= 0.0 || end < start {
            return Err(Error::Parse(format!(
                "grid {start}:{step}:{end} needs step > 0 and end >= start"
            )));
        }
        Ok(Self { start, step, end })
    }

    pub fn points(&self) -> Vec<f64> {
        let span = (self.end - self.start) / self.step;
        let n = (span + 1e-9).floor() as usize;
        let mut pts: Vec<f64> = (0..=n).map(|k| self.start + k as f64 * self.step).collect();
        if let Some(last) = pts.last_mut() {
            if (span - n as f64).abs() <= 1e-9 {
                *last = self.end;
            }
        }
        pts
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.step, self.end)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid `{s}` is not start:step:end")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{t}` in grid `{s}`")))
        };
        Grid::new(num(a)?, num(b)?, num(c)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g: Grid = "0:0.05:1".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 21);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[20], 1.0);
        let g: Grid = "0:0.3:1".parse().unwrap();
        assert_eq!(g.points().len(), 4);
        assert!((g.points()[3] - 0.9).abs() < 1e-15);
        assert_eq!(Grid::new(0.5, 0.1, 0.5).unwrap().points(), vec![0.5]);
    }

    #[test]
    fn malformed() {
        for s in ["0:1", "a:0.1:1", "0:0:1", "1:0.1:0", "0:-1:1"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }
}
