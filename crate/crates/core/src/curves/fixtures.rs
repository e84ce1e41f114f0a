use super::galois::ImageOutcome;
use super::poly::IntPoly;

const TABLE: &str = include_str!("../../data/curve_fixtures.txt");

#[derive(Clone, Debug)]
pub struct CurveFixture {
    pub f: IntPoly,
    pub squarefree: i64,
    pub galois: &'static str,
    pub expected: ImageOutcome,
}

/// Pinned cubics and sextics with their discriminant class, Galois group and expected outcome.
pub fn curve_fixtures() -> Vec<CurveFixture> {
    TABLE
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let cols: Vec<&str> = l.split('|').map(str::trim).collect();
            CurveFixture {
                f: IntPoly::parse(cols[0]).expect("fixture polynomial"),
                squarefree: cols[1].parse().expect("fixture squarefree part"),
                galois: cols[2],
                expected: match cols[3] {
                    "surjective" => ImageOutcome::Surjective,
                    "not-surjective" => ImageOutcome::NotSurjective,
                    _ => ImageOutcome::Unknown,
                },
            }
        })
        .collect()
}
