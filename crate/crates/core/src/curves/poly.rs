use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Integer polynomial, little-endian coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as i64).collect())
    }

    /// Reduction mod a prime, little-endian residues.
    pub fn to_fp(&self, l: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self.coeffs.iter().map(|&c| c.rem_euclid(l as i64) as u64).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Parses "x^6-x-1", "2*x^3 - 3x + 5" or a little-endian list "[-1,-1,0,0,0,0,1]".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("coefficient {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            return Ok(IntPoly::new(coeffs));
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body[1.min(body.len())..].find(['+', '-']).map_or(body.len(), |i| i + 1);
            let term = &body[..end];
            rest = &body[end..];
            let (c, e) = parse_term(term)?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, 0);
            }
            coeffs[e] += sign * c;
        }
        Ok(IntPoly::new(coeffs))
    }
}

fn parse_term(t: &str) -> Result<(i64, usize)> {
    let bad = || Error::Parse(format!("bad term {t:?}"));
    let Some(xpos) = t.find('x') else {
        return Ok((t.parse().map_err(|_| bad())?, 0));
    };
    let head = t[..xpos].trim_end_matches('*');
    let c = if head.is_empty() { 1 } else { head.parse().map_err(|_| bad())? };
    let tail = &t[xpos + 1..];
    let e = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
    };
    Ok((c, e))
}

impl FromStr for IntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IntPoly::parse(s)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.unsigned_abs();
            let mono = match e {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{e}"),
            };
            let coef = if a == 1 && e > 0 { String::new() } else { a.to_string() };
            write!(f, "{sign}{coef}{mono}")?;
            first = false;
        }
        Ok(())
    }
}
