//! Plain-text measure and plan files.
//!
//! ```text
//! # measure: one support point per line, weight first
//! dim 2
//! 0.25 0.0 1.0
//! 0.75 -1.5 2.0
//! ```
//!
//! Plans are written as `plan <rows> <cols>`, a `cost` line, then one matrix
//! row per line.

use std::fmt::Write as _;

use super::{DiscreteMeasure, TransportPlan};
use crate::error::{Error, Result};

pub fn parse_measure(text: &str) -> Result<DiscreteMeasure> {
    let mut dim: Option<usize> = None;
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields[0] == "dim" {
            if dim.is_some() || !support.is_empty() {
                return Err(Error::parse(line, "'dim' must come once, before the points"));
            }
            if fields.len() != 2 {
                return Err(Error::parse(line, "'dim' takes one value"));
            }
            let d: usize = fields[1]
                .parse()
                .map_err(|_| Error::parse(line, format!("cannot parse '{}'", fields[1])))?;
            if d == 0 {
                return Err(Error::parse(line, "dimension must be positive"));
            }
            dim = Some(d);
            continue;
        }
        let nums = fields
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::parse(line, format!("cannot parse '{f}'"))))
            .collect::<Result<Vec<f64>>>()?;
        let d = *dim.get_or_insert(nums.len().saturating_sub(1));
        if nums.len() != d + 1 || d == 0 {
            return Err(Error::parse(line, format!("expected a weight and {d} coordinates")));
        }
        weights.push(nums[0]);
        support.push(nums[1..].to_vec());
    }
    if support.is_empty() {
        return Err(Error::parse(0, "no support points"));
    }
    DiscreteMeasure::new(support, weights).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn write_measure(mu: &DiscreteMeasure) -> String {
    let mut out = format!("dim {}\n", mu.dimension());
    for (p, w) in mu.support().iter().zip(mu.weights()) {
        let _ = write!(out, "{w}");
        for x in p {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}

pub fn write_plan(plan: &TransportPlan) -> String {
    let mut out = format!("plan {} {}\ncost {}\n", plan.rows(), plan.cols(), plan.cost());
    for row in plan.matrix().chunks(plan.cols()) {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::w2;

    #[test]
    fn measure_round_trips_exactly() {
        let mu = DiscreteMeasure::normalized(
            vec![vec![0.1, -3.0], vec![1.0 / 3.0, 2.0], vec![-0.0, 7.25]],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap();
        let text = write_measure(&mu);
        assert_eq!(parse_measure(&text).unwrap(), mu);
    }

    #[test]
    fn dimension_is_inferred_and_comments_skipped() {
        let mu = parse_measure("# two atoms\n0.5 1.0\n\n0.5 2.0 # right\n").unwrap();
        assert_eq!(mu.dimension(), 1);
        assert_eq!(mu.len(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_measure("dim 1\n0.5 1.0\n0.5 1.0 2.0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_measure("0.5 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        assert!(parse_measure("0.4 1\n0.4 2\n").is_err());
        assert!(parse_measure("").is_err());
    }

    #[test]
    fn plan_export_has_header_and_rows() {
        let mu = DiscreteMeasure::uniform_on_line(&[0.0, 1.0]).unwrap();
        let nu = DiscreteMeasure::uniform_on_line(&[0.0, 2.0, 4.0]).unwrap();
        let text = write_plan(&w2(&mu, &nu).unwrap().plan);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "plan 2 3");
        assert!(lines[1].starts_with("cost "));
        assert_eq!(lines.len(), 4);
        assert!(lines[2..].iter().all(|l| l.split(' ').count() == 3));
    }
}
