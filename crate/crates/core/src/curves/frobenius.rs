//! Naive point counts over F_{l^i}, L-polynomials and the mod-2 torsion comparison.

use num_integer::binomial;
use serde::Serialize;

use super::galois::factor_pattern_mod;
use super::poly::IntPoly;
use crate::error::{Error, Result};
use crate::galois_ring::{construct_ring, Ring};
use crate::linalg::{charpoly, Mat};

const COUNT_BOUND: u128 = 10_000_000;
const PLANE_BOUND: u128 = 100_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusData {
    pub l: u64,
    pub genus: usize,
    /// #C(F_{l^i}) for i = 1..=genus.
    pub counts: Vec<u128>,
    /// L(T) = sum a_k T^k, k = 0..=2g.
    pub lpoly: Vec<i128>,
    pub weil_ok: bool,
    /// (predicted, counted) #C(F_{l^(g+1)}) when that field is small enough to enumerate.
    pub extra_count: Option<(u128, u128)>,
    pub functional_equation_ok: bool,
}

impl FrobeniusData {
    /// L(1), the order of the Jacobian over F_l.
    pub fn jacobian_order(&self) -> i128 {
        self.lpoly.iter().sum()
    }

    /// t^{2g} L(1/t) mod 2, little-endian: the Frobenius characteristic polynomial on A[2].
    pub fn charpoly_mod2(&self) -> Vec<u64> {
        self.lpoly.iter().rev().map(|&a| a.rem_euclid(2) as u64).collect()
    }

    pub fn valid(&self) -> bool {
        self.weil_ok && self.functional_equation_ok && self.extra_count.is_none_or(|(a, b)| a == b)
    }
}

/// Field F_{l^i} as a level-one Galois ring, with a table of squares by element index.
struct Field {
    ring: Ring,
    q: u128,
    square: Vec<bool>,
}

impl Field {
    fn new(l: u64, i: usize) -> Result<Self> {
        let ring = construct_ring(l, i, 1)?;
        let q = ring.order();
        let mut square = vec![false; q as usize];
        for k in 0..q {
            let x = ring.element_at(k);
            square[ring.index_of(&ring.mul_vec(&x, &x)) as usize] = true;
        }
        Ok(Field { ring, q, square })
    }

    /// 1 + chi(a): the number of square roots of a.
    fn roots(&self, a: &[u64]) -> u128 {
        if self.ring.is_zero_raw(a) {
            1
        } else if self.square[self.ring.index_of(a) as usize] {
            2
        } else {
            0
        }
    }

    fn constant(&self, c: i64) -> Vec<u64> {
        self.ring.from_int_raw(c)
    }
}

fn count_hyperelliptic(f: &IntPoly, field: &Field) -> u128 {
    let ring = &field.ring;
    let coeffs: Vec<Vec<u64>> = f.coeffs().iter().map(|&c| field.constant(c)).collect();
    let mut total = 0u128;
    let mut acc = ring.zero_raw();
    for k in 0..field.q {
        let x = ring.element_at(k);
        acc.iter_mut().for_each(|a| *a = 0);
        for c in coeffs.iter().rev() {
            ring.add_raw(&ring.mul_vec(&acc, &x), c, &mut acc);
        }
        total += field.roots(&acc);
    }
    let deg = f.degree().unwrap_or(0);
    // points at infinity of the smooth model
    total += if deg % 2 == 1 { 1 } else { field.roots(&field.constant(f.lead())) };
    total
}

pub fn genus_of(f: &IntPoly) -> usize {
    (f.degree().unwrap_or(1).max(1) - 1) / 2
}

/// L-polynomial from counts N_1..N_g via Newton's identities and the functional equation.
pub fn lpoly_from_counts(counts: &[u128], l: u64, g: usize) -> Vec<i128> {
    let q = l as i128;
    // power sums of the reciprocal roots
    let s: Vec<i128> = (1..=g).map(|i| q.pow(i as u32) + 1 - counts[i - 1] as i128).collect();
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for k in 1..=g {
        let mut acc = 0i128;
        for i in 1..=k {
            acc += s[i - 1] * a[k - i];
        }
        a[k] = -acc / k as i128;
    }
    for k in 0..g {
        a[2 * g - k] = q.pow((g - k) as u32) * a[k];
    }
    a
}

/// #C(F_{l^m}) predicted by L: l^m + 1 - sum alpha^m, from Newton's identities on all 2g roots.
pub fn predicted_count(lpoly: &[i128], l: u64, m: usize) -> i128 {
    let two_g = lpoly.len() - 1;
    let mut s = vec![0i128; m + 1];
    for k in 1..=m {
        let mut acc = if k <= two_g { k as i128 * lpoly[k] } else { 0 };
        for i in 1..k {
            if k - i <= two_g {
                acc += s[i] * lpoly[k - i];
            }
        }
        s[k] = -acc;
    }
    (l as i128).pow(m as u32) + 1 - s[m]
}

fn weil_ok(lpoly: &[i128], l: u64, g: usize) -> bool {
    (0..=2 * g).all(|k| {
        let b = binomial(2 * g as u128, k as u128) as f64;
        (lpoly[k] as f64).abs() <= b * (l as f64).powf(k as f64 / 2.0) + 1e-6
    })
}

fn functional_equation(lpoly: &[i128], l: u64, g: usize) -> bool {
    (0..=2 * g).all(|k| {
        let k2 = 2 * g - k;
        if k <= g {
            lpoly[k2] == (l as i128).pow((g - k) as u32) * lpoly[k]
        } else {
            true
        }
    })
}

/// Frobenius data of y^2 = f(x) at a good odd prime l.
pub fn count_points_lpoly(f: &IntPoly, l: u64) -> Result<FrobeniusData> {
    let deg = f.degree().unwrap_or(0);
    if !(3..=8).contains(&deg) || deg == 4 {
        return Err(Error::DegreeOutOfRange(deg));
    }
    if l == 2 || factor_pattern_mod(f, l).is_err() {
        return Err(Error::BadPrime(l));
    }
    let g = genus_of(f);
    if (l as u128).pow(g as u32) > COUNT_BOUND {
        return Err(Error::TooLarge { size: (l as u128).pow(g as u32), bound: COUNT_BOUND });
    }
    let counts: Vec<u128> = (1..=g).map(|i| Field::new(l, i).map(|k| count_hyperelliptic(f, &k))).collect::<Result<_>>()?;
    let lpoly = lpoly_from_counts(&counts, l, g);
    let extra_count = if (l as u128).pow(g as u32 + 1) <= COUNT_BOUND {
        let counted = count_hyperelliptic(f, &Field::new(l, g + 1)?);
        Some((predicted_count(&lpoly, l, g + 1).max(0) as u128, counted))
    } else {
        None
    };
    Ok(FrobeniusData {
        l,
        genus: g,
        counts,
        weil_ok: weil_ok(&lpoly, l, g),
        functional_equation_ok: functional_equation(&lpoly, l, g),
        lpoly,
        extra_count,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Mod2Report {
    pub l: u64,
    pub pattern: Vec<usize>,
    pub lpoly_mod2: Vec<u64>,
    pub permutation_charpoly_mod2: Vec<u64>,
    pub equal: bool,
}

/// Frobenius on the F_2 root-difference module: the subquotient of the permutation module on
/// the roots of f that models A[2].
pub fn torsion_charpoly_mod2(pattern: &[usize]) -> Vec<u64> {
    let n: usize = pattern.iter().sum();
    // permutation with the given cycle type on 0..n
    let mut sigma = vec![0usize; n];
    let mut start = 0;
    for &c in pattern {
        for k in 0..c {
            sigma[start + k] = start + (k + 1) % c;
        }
        start += c;
    }
    // kernel of the sum: v_i = e_i + e_{i+1}, i < n-1; for even n also drop v_{n-2} modulo
    // the all-ones vector, which equals v_0 + v_2 + ... + v_{n-2}
    let dim = if n % 2 == 1 { n - 1 } else { n - 2 };
    let image = |i: usize| -> Vec<u64> {
        let mut w = vec![0u64; n];
        w[sigma[i]] ^= 1;
        w[sigma[i + 1]] ^= 1;
        w
    };
    let mut m: Mat = vec![vec![0; dim]; dim];
    for i in 0..dim {
        let coords = kernel_coords(&image(i), n);
        let mut c = coords;
        if n % 2 == 0 {
            // the coordinate on v_{n-2} is carried by the all-ones vector: subtract it
            let t = c[n - 2];
            for k in (0..n - 1).step_by(2) {
                c[k] ^= t;
            }
        }
        for j in 0..dim {
            m[j][i] = c[j];
        }
    }
    charpoly(&m, 2)
}

/// Coordinates of w (sum zero) on v_i = e_i + e_{i+1}: prefix sums.
fn kernel_coords(w: &[u64], n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n - 1];
    let mut run = 0;
    for i in 0..n - 1 {
        run ^= w[i];
        c[i] = run;
    }
    c
}

pub fn mod2_consistency(f: &IntPoly, l: u64) -> Result<Mod2Report> {
    let deg = f.degree().unwrap_or(0);
    if ![3, 5, 6].contains(&deg) {
        return Err(Error::DegreeOutOfRange(deg));
    }
    let pattern = factor_pattern_mod(f, l)?;
    let data = count_points_lpoly(f, l)?;
    let lpoly_mod2 = data.charpoly_mod2();
    let permutation_charpoly_mod2 = torsion_charpoly_mod2(&pattern);
    Ok(Mod2Report { l, equal: lpoly_mod2 == permutation_charpoly_mod2, pattern, lpoly_mod2, permutation_charpoly_mod2 })
}

/// Homogeneous integer polynomial in x, y, z: terms (coefficient, [ex, ey, ez]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneCurve {
    pub terms: Vec<(i64, [u32; 3])>,
    pub degree: u32,
}

impl PlaneCurve {
    /// Parses sums of monomials like "xz^3+zx^3+2x^2y".
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms: Vec<(i64, [u32; 3])> = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body[1.min(body.len())..].find(['+', '-']).map_or(body.len(), |i| i + 1);
            let (c, e) = parse_monomial(&body[..end])?;
            rest = &body[end..];
            match terms.iter_mut().find(|t| t.1 == e) {
                Some(t) => t.0 += sign * c,
                None => terms.push((sign * c, e)),
            }
        }
        terms.retain(|t| t.0 != 0);
        let degree = terms.first().map_or(0, |t| t.1.iter().sum());
        if terms.iter().any(|t| t.1.iter().sum::<u32>() != degree) {
            return Err(Error::Parse("plane curve must be homogeneous".into()));
        }
        Ok(PlaneCurve { terms, degree })
    }

    pub fn genus(&self) -> usize {
        let d = self.degree as usize;
        (d.saturating_sub(1)) * (d.saturating_sub(2)) / 2
    }

    fn eval(&self, ring: &Ring, cs: &[Vec<u64>], pt: &[Vec<u64>; 3]) -> Vec<u64> {
        let mut acc = ring.zero_raw();
        for ((_, e), c) in self.terms.iter().zip(cs) {
            let mut t = c.clone();
            for v in 0..3 {
                if e[v] > 0 {
                    t = ring.mul_vec(&t, &ring.pow_raw(&pt[v], e[v] as u128));
                }
            }
            let mut s = ring.zero_raw();
            ring.add_raw(&acc, &t, &mut s);
            acc = s;
        }
        acc
    }

    fn partial(&self, v: usize) -> PlaneCurve {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.1[v] > 0)
            .map(|&(c, mut e)| {
                let k = e[v] as i64;
                e[v] -= 1;
                (c * k, e)
            })
            .collect();
        PlaneCurve { terms, degree: self.degree.saturating_sub(1) }
    }
}

fn parse_monomial(t: &str) -> Result<(i64, [u32; 3])> {
    let bad = || Error::Parse(format!("bad monomial {t:?}"));
    let first_var = t.find(['x', 'y', 'z']).unwrap_or(t.len());
    let head = t[..first_var].trim_end_matches('*');
    let c = if head.is_empty() { 1 } else { head.parse().map_err(|_| bad())? };
    let mut e = [0u32; 3];
    let b = t[first_var..].as_bytes();
    let mut i = 0;
    while i < b.len() {
        let v = match b[i] {
            b'x' => 0,
            b'y' => 1,
            b'z' => 2,
            b'*' => {
                i += 1;
                continue;
            }
            _ => return Err(bad()),
        };
        i += 1;
        let mut k = 1;
        if i < b.len() && b[i] == b'^' {
            let j = i + 1 + b[i + 1..].iter().take_while(|c| c.is_ascii_digit()).count();
            k = std::str::from_utf8(&b[i + 1..j]).unwrap().parse().map_err(|_| bad())?;
            i = j;
        }
        e[v] += k;
    }
    Ok((c, e))
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneCount {
    pub data: FrobeniusData,
    /// Singular points found over the enumerated fields (zero for good reduction).
    pub singular_points: usize,
}

fn projective_points(q: u128, mut visit: impl FnMut(u128, u128, u128)) {
    // [x:y:1], [x:1:0], [1:0:0] by element index; index 0 is zero and 1 is one
    for x in 0..q {
        for y in 0..q {
            visit(x, y, 1);
        }
    }
    for x in 0..q {
        visit(x, 1, 0);
    }
    visit(1, 0, 0);
}

/// Projective point counts and the L-polynomial of a smooth plane curve at an odd prime.
pub fn count_plane_curve(c: &PlaneCurve, l: u64) -> Result<PlaneCount> {
    if l == 2 {
        return Err(Error::BadPrime(l));
    }
    let g = c.genus();
    let q_top = (l as u128).pow(g as u32);
    if q_top * q_top > PLANE_BOUND {
        return Err(Error::TooLarge { size: q_top * q_top, bound: PLANE_BOUND });
    }
    let partials = [c.partial(0), c.partial(1), c.partial(2)];
    let mut counts = Vec::new();
    let mut singular = 0;
    for i in 1..=g {
        let ring = construct_ring(l, i, 1)?;
        let cs: Vec<Vec<u64>> = c.terms.iter().map(|t| ring.from_int_raw(t.0)).collect();
        let pcs: Vec<Vec<Vec<u64>>> =
            partials.iter().map(|p| p.terms.iter().map(|t| ring.from_int_raw(t.0)).collect()).collect();
        let mut n = 0u128;
        projective_points(ring.order(), |a, b, z| {
            let pt = [ring.element_at(a), ring.element_at(b), ring.element_at(z)];
            if ring.is_zero_raw(&c.eval(&ring, &cs, &pt)) {
                n += 1;
                if (0..3).all(|v| ring.is_zero_raw(&partials[v].eval(&ring, &pcs[v], &pt))) {
                    singular += 1;
                }
            }
        });
        counts.push(n);
    }
    let lpoly = lpoly_from_counts(&counts, l, g);
    let data = FrobeniusData {
        l,
        genus: g,
        counts,
        weil_ok: weil_ok(&lpoly, l, g),
        functional_equation_ok: functional_equation(&lpoly, l, g),
        lpoly,
        extra_count: None,
    };
    Ok(PlaneCount { data, singular_points: singular })
}
