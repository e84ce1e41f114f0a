use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Family, GroupDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DynkinType::A => "A",
            DynkinType::B => "B",
            DynkinType::C => "C",
            DynkinType::D => "D",
            DynkinType::E6 => "E6",
            DynkinType::E7 => "E7",
            DynkinType::E8 => "E8",
            DynkinType::F4 => "F4",
            DynkinType::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// Center and Dynkin data of a semisimple group with isotypic simple factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinDatum {
    pub label: String,
    pub dt: DynkinType,
    pub rank: usize,
    /// Degree of the field over which the adjoint group is a Weil restriction of an
    /// absolutely simple group.
    pub ext_degree: u32,
    pub o_g: u64,
    pub o_gsc: u64,
    pub split: bool,
    pub adjoint: bool,
    pub simply_connected: bool,
}

/// Order of the center of the simply connected group of the given type (one factor).
pub fn sc_center_order(dt: DynkinType, rank: usize) -> u64 {
    match dt {
        DynkinType::A => rank as u64 + 1,
        DynkinType::B | DynkinType::C | DynkinType::E7 => 2,
        DynkinType::D => 4,
        DynkinType::E6 => 3,
        DynkinType::E8 | DynkinType::F4 | DynkinType::G2 => 1,
    }
}

impl DynkinDatum {
    pub fn new(label: &str, dt: DynkinType, rank: usize, ext_degree: u32, o_g: u64, split: bool) -> Self {
        let o_gsc = sc_center_order(dt, rank).pow(ext_degree);
        DynkinDatum {
            label: label.to_string(),
            dt,
            rank,
            ext_degree,
            o_g,
            o_gsc,
            split,
            adjoint: o_g == 1,
            simply_connected: o_g == o_gsc,
        }
    }

    pub fn c_g(&self) -> u64 {
        self.o_gsc / self.o_g
    }

    pub fn sl(n: usize) -> Self {
        Self::new(&format!("SL_{n}"), DynkinType::A, n - 1, 1, n as u64, true)
    }
    pub fn pgl(n: usize) -> Self {
        Self::new(&format!("PGL_{n}"), DynkinType::A, n - 1, 1, 1, true)
    }
    pub fn sl_mod_mu(n: usize, m: usize) -> Self {
        Self::new(&format!("SL_{n}/mu_{m}"), DynkinType::A, n - 1, 1, (n / m) as u64, true)
    }
    pub fn sp(two_n: usize) -> Self {
        Self::new(&format!("Sp_{two_n}"), DynkinType::C, two_n / 2, 1, 2, true)
    }
    pub fn pgsp(two_n: usize) -> Self {
        Self::new(&format!("PGSp_{two_n}"), DynkinType::C, two_n / 2, 1, 1, true)
    }
    pub fn so_odd(dim: usize) -> Self {
        Self::new(&format!("SO_{dim}"), DynkinType::B, (dim - 1) / 2, 1, 1, true)
    }
    pub fn so_even(dim: usize, split: bool) -> Self {
        let tag = if split { "+" } else { "-" };
        Self::new(&format!("SO{tag}_{dim}"), DynkinType::D, dim / 2, 1, 2, split)
    }
    pub fn pso_even(dim: usize, split: bool) -> Self {
        let tag = if split { "+" } else { "-" };
        Self::new(&format!("PSO{tag}_{dim}"), DynkinType::D, dim / 2, 1, 1, split)
    }
    pub fn spin_even(dim: usize, split: bool) -> Self {
        let tag = if split { "+" } else { "-" };
        Self::new(&format!("Spin{tag}_{dim}"), DynkinType::D, dim / 2, 1, 4, split)
    }
    pub fn spin_odd(dim: usize) -> Self {
        Self::new(&format!("Spin_{dim}"), DynkinType::B, (dim - 1) / 2, 1, 2, true)
    }
    pub fn pgu(n: usize) -> Self {
        Self::new(&format!("PGU_{n}"), DynkinType::A, n - 1, 1, 1, false)
    }
    pub fn su(n: usize) -> Self {
        Self::new(&format!("SU_{n}"), DynkinType::A, n - 1, 1, n as u64, false)
    }
    pub fn g2() -> Self {
        Self::new("G_2", DynkinType::G2, 2, 1, 1, true)
    }
    /// Weil restriction of an adjoint PGL_n from an extension of degree s.
    pub fn res_pgl(n: usize, s: u32) -> Self {
        Self::new(&format!("Res_{s} PGL_{n}"), DynkinType::A, n - 1, s, 1, true)
    }

    /// Parses the labels produced by the constructors (`PGL_4`, `SO-_6`, `Spin+_8`, `SL_4/mu_2`, ...).
    pub fn from_label(label: &str) -> Option<Self> {
        let label = label.trim();
        if label == "G_2" {
            return Some(Self::g2());
        }
        if let Some(rest) = label.strip_prefix("Res_") {
            let (s, inner) = rest.split_once(' ')?;
            let n = inner.strip_prefix("PGL_")?.parse().ok()?;
            return Some(Self::res_pgl(n, s.parse().ok()?));
        }
        if let Some((sl, mu)) = label.split_once("/mu_") {
            let n = sl.strip_prefix("SL_")?.parse().ok()?;
            return Some(Self::sl_mod_mu(n, mu.parse().ok()?));
        }
        let (head, num) = label.rsplit_once('_')?;
        let n: usize = num.parse().ok()?;
        Some(match head {
            "SL" => Self::sl(n),
            "PGL" => Self::pgl(n),
            "Sp" => Self::sp(n),
            "PGSp" => Self::pgsp(n),
            "SU" => Self::su(n),
            "PGU" => Self::pgu(n),
            "SO" if n % 2 == 1 => Self::so_odd(n),
            "Spin" if n % 2 == 1 => Self::spin_odd(n),
            "SO+" => Self::so_even(n, true),
            "SO-" => Self::so_even(n, false),
            "PSO+" => Self::pso_even(n, true),
            "PSO-" => Self::pso_even(n, false),
            "Spin+" => Self::spin_even(n, true),
            "Spin-" => Self::spin_even(n, false),
            _ => return None,
        })
    }

    /// Datum of the derived group (semisimple families) or of the adjoint group otherwise.
    pub fn of_descriptor(d: &GroupDescriptor) -> Self {
        let n = d.size();
        match d.family() {
            Family::SL => Self::sl(n),
            Family::PGL | Family::GL => Self::pgl(n),
            Family::SLModMu(m) => Self::sl_mod_mu(n, m as usize),
            Family::Sp => Self::sp(n),
            Family::PGSp | Family::GSp => Self::pgsp(n),
            Family::SOPlus if n % 2 == 1 => Self::so_odd(n),
            Family::SOPlus => Self::so_even(n, true),
            Family::SOMinus => Self::so_even(n, false),
            Family::GSOPlus => Self::pso_even(n, true),
            Family::GSOMinus => Self::pso_even(n, false),
            Family::SU => Self::su(n),
            Family::U => Self::pgu(n),
        }
    }
}
