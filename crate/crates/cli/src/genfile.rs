//! Generator files: one matrix per line, row-major integers separated by spaces or commas.
//! A line may instead hold a JSON matrix such as `[[1,[0,1]],[0,1]]` for entries outside Z.

use liftcheck_core::matrix::Matrix;
use liftcheck_core::matrix_groups::GroupDescriptor;
use liftcheck_core::{Error, Result};

pub fn parse_generators(text: &str, desc: &GroupDescriptor) -> Result<Vec<Matrix>> {
    let ring = desc.ring_ref();
    let d = desc.size();
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let m = if line.starts_with('[') {
            Matrix::parse(line, ring)?
        } else {
            let vals = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("line {}: bad integer `{t}`", no + 1))))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != d * d {
                return Err(Error::Parse(format!("line {}: expected {} entries, found {}", no + 1, d * d, vals.len())));
            }
            let rows: Vec<Vec<i64>> = vals.chunks(d).map(<[i64]>::to_vec).collect();
            Matrix::from_ints(&rows, ring)
        };
        if m.dim() != d {
            return Err(Error::Parse(format!("line {}: matrix is {}x{}, group has dimension {d}", no + 1, m.dim(), m.dim())));
        }
        out.push(m);
    }
    if out.is_empty() {
        return Err(Error::Parse("generator file holds no matrices".into()));
    }
    Ok(out)
}

/// Inverse of `parse_generators` for integer-coefficient matrices.
pub fn format_generators(gens: &[Matrix]) -> String {
    let mut s = String::new();
    for g in gens {
        s.push_str(&serde_json::to_string(&g.to_json()).expect("matrix json"));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_forms() {
        let d: GroupDescriptor = "GL(2,Z/9)".parse().unwrap();
        let gens = parse_generators("1 1 0 1\n# comment\n\n2,0,0,1\n[[1,0],[3,1]]\n", &d).unwrap();
        assert_eq!(gens.len(), 3);
        let again = parse_generators(&format_generators(&gens), &d).unwrap();
        assert_eq!(gens, again);
        // entries reduce mod 9
        assert_eq!(parse_generators("10 0 0 1", &d).unwrap()[0], parse_generators("1 0 0 1", &d).unwrap()[0]);
    }

    #[test]
    fn rejects_bad_lines() {
        let d: GroupDescriptor = "GL(2,Z/9)".parse().unwrap();
        assert!(parse_generators("", &d).is_err());
        assert!(parse_generators("1 0 0", &d).is_err());
        assert!(parse_generators("1 0 0 x", &d).is_err());
        assert!(parse_generators("[[1,0,0],[0,1,0],[0,0,1]]", &d).is_err());
    }
}
