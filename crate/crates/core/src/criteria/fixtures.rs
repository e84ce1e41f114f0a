use std::sync::OnceLock;

use serde::Serialize;

use super::{IsogenyDecomposition, ReductiveDatum, TorusFactor};
use crate::error::{Error, Result};
use crate::matrix_groups::{DynkinDatum, Family};

const FIXTURE_DATA: &str = include_str!("../../data/criteria_fixtures.txt");

/// Field-level group whose Lie algebra gives the abelianization dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LieSource {
    pub family: Family,
    pub size: usize,
    pub mod_scalars: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub id: String,
    pub datum: ReductiveDatum,
    pub lie_source: Option<LieSource>,
    /// Report keys expected to hold; all other conditions are expected not to.
    pub holds: Vec<String>,
    pub applies: Vec<String>,
}

/// Report key for a short condition token of the fixture file.
pub fn condition_key(token: &str) -> Option<&'static str> {
    Some(match token {
        "i" => "2.4(i)",
        "i'" => "2.4.2b(i')",
        "ii" => "2.4(ii)",
        "ii-weak" => "2.4.2a(ii)",
        "iii" => "2.4(iii)",
        "iv" => "2.4(iv)",
        "va" => "2.4(va)",
        "vb" => "2.4(vb)",
        "v" => "2.4(v)",
        _ => return None,
    })
}

/// Keys compared against fixtures.
pub const CONDITION_TOKENS: [&str; 9] = ["i", "i'", "ii", "ii-weak", "iii", "iv", "va", "vb", "v"];

fn list(s: &str) -> Vec<String> {
    if s == "-" {
        Vec::new()
    } else {
        s.split(',').map(String::from).collect()
    }
}

fn parse_line(line: &str) -> Result<Fixture> {
    let bad = |what: &str| Error::Parse(format!("fixture `{line}`: {what}"));
    let cols: Vec<&str> = line.split_whitespace().collect();
    if cols.len() != 10 {
        return Err(bad("expected 10 columns"));
    }
    let p: u64 = cols[1].parse().map_err(|_| bad("p"))?;
    let r: u32 = cols[2].parse().map_err(|_| bad("r"))?;
    let tilde = DynkinDatum::from_label(cols[3]).ok_or_else(|| bad("tilde label"))?;
    let derived = DynkinDatum::from_label(cols[4]).ok_or_else(|| bad("derived label"))?;
    let e: u32 = cols[5].parse().map_err(|_| bad("exponent"))?;
    let ab: usize = cols[6].parse().map_err(|_| bad("abelianization"))?;
    let lie_source = match cols[7] {
        "-" => None,
        s => {
            let parts: Vec<&str> = s.split('.').collect();
            if parts.len() < 2 || parts.len() > 3 || (parts.len() == 3 && parts[2] != "mod") {
                return Err(bad("lie source"));
            }
            Some(LieSource {
                family: parts[0].parse()?,
                size: parts[1].parse().map_err(|_| bad("lie size"))?,
                mod_scalars: parts.len() == 3,
            })
        }
    };
    let holds = list(cols[8]);
    for t in &holds {
        condition_key(t).ok_or_else(|| bad("condition token"))?;
    }
    let degree = if e == 0 { 1 } else { p.pow(e) };
    let iso = IsogenyDecomposition {
        factors: vec![TorusFactor { rank: 1, degree, p_exponent: e, split: true }],
        ab_rank: 1,
    };
    Ok(Fixture {
        id: cols[0].to_string(),
        datum: ReductiveDatum { label: cols[0].to_string(), p, r, tilde, derived, iso, abelianization: Some(ab) },
        lie_source,
        holds: holds.iter().map(|t| condition_key(t).unwrap().to_string()).collect(),
        applies: list(cols[9]),
    })
}

pub(crate) fn parse_fixtures(text: &str) -> Result<Vec<Fixture>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_line)
        .collect()
}

pub fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| parse_fixtures(FIXTURE_DATA).expect("bundled fixtures parse"))
}

pub fn fixture(id: &str) -> Result<&'static Fixture> {
    fixtures().iter().find(|f| f.id == id).ok_or_else(|| Error::UnknownFixture(id.to_string()))
}

impl Fixture {
    /// Abelianization computed from the field-level Lie algebra, when a source is given.
    pub fn computed_abelianization(&self) -> Result<Option<usize>> {
        match self.lie_source {
            None => Ok(None),
            Some(s) => super::computed_abelianization(s.family, s.size, self.datum.p, self.datum.r as usize, s.mod_scalars).map(Some),
        }
    }
}
