//! Plain-text problem files.
//!
//! ```text
//! # comment lines and blank lines are skipped
//! m n
//! a11 ... a1n
//! ...
//! am1 ... amn
//! b1 ... bm
//! ```

use std::fmt::Write as _;

use crate::alternatives::FeasibilityProblem;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub a: DenseMatrix,
    pub b: Vector,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_reals(line: usize, text: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let values = text
        .split_whitespace()
        .map(|tok| match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(parse_error(line, format!("non-finite value {tok:?}"))),
            Err(_) => Err(parse_error(line, format!("not a real number: {tok:?}"))),
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != expected {
        return Err(parse_error(
            line,
            format!("{what} has {} entries, expected {expected}", values.len()),
        ));
    }
    Ok(values)
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| parse_error(0, "missing header \"m n\""))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let [m, n] = dims[..] else {
            return Err(parse_error(hline, "header must be \"m n\""));
        };
        let size = |tok: &str| match tok.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(parse_error(hline, format!("invalid dimension {tok:?}"))),
        };
        let (m, n) = (size(m)?, size(n)?);

        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            let (ln, row) = lines
                .next()
                .ok_or_else(|| parse_error(0, format!("expected {m} rows of A, found {i}")))?;
            entries.extend(parse_reals(ln, row, n, "row of A")?);
        }
        let (ln, row) = lines
            .next()
            .ok_or_else(|| parse_error(0, "missing right-hand side b"))?;
        let b = parse_reals(ln, row, m, "b")?;
        if let Some((ln, _)) = lines.next() {
            return Err(parse_error(ln, "unexpected data after b"));
        }

        Ok(ProblemFile {
            a: DenseMatrix::new(m, n, entries)?,
            b: Vector::new(b)?,
        })
    }

    /// Renders every value in shortest round-trip form, so
    /// `parse(render())` reproduces the file exactly.
    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.a.rows(), self.a.cols());
        let line = |out: &mut String, vals: &[f64]| {
            let toks: Vec<String> = vals.iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "{}", toks.join(" ")).unwrap();
        };
        for i in 0..self.a.rows() {
            line(&mut out, self.a.row(i));
        }
        line(&mut out, &self.b);
        out
    }

    pub fn into_problem(self, rho: f64) -> Result<FeasibilityProblem> {
        FeasibilityProblem::new(self.a, self.b, rho)
    }
}

impl From<&FeasibilityProblem> for ProblemFile {
    fn from(p: &FeasibilityProblem) -> Self {
        ProblemFile {
            a: p.a().clone(),
            b: p.b().clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let f = ProblemFile::parse("# two columns\n\n1 2\n1 1\n\n# rhs\n1\n").unwrap();
        assert_eq!(f.a.to_rows(), vec![vec![1.0, 1.0]]);
        assert_eq!(f.b.as_slice(), &[1.0]);
    }

    #[test]
    fn render_round_trips_awkward_values() {
        let f = ProblemFile {
            a: DenseMatrix::from_rows(&[[0.1, -1e-300, 1.0 / 3.0]]).unwrap(),
            b: Vector::new(vec![f64::MAX]).unwrap(),
        };
        assert_eq!(ProblemFile::parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn reports_offending_line() {
        let err = ProblemFile::parse("1 2\n1 x\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = ProblemFile::parse("2 2\n1 1\n1 1 1\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = ProblemFile::parse("1 1\n1\n1\n2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = ProblemFile::parse("1 1\ninf\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(ProblemFile::parse("0 1\n\n").is_err());
        assert!(ProblemFile::parse("").is_err());
        assert!(ProblemFile::parse("1 1\n1\n").is_err());
    }
}
