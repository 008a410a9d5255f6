//! Rational double point types with Artin coindices.
//!
//! The coindex is stored doubled so that the half-integer coindices of odd
//! `D` in characteristic 2 are integers: `D_{2n+1}^{s+1/2}` has `two_r = 2s+1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RdpType {
    Smooth,
    NotRdp,
    Rdp { family: Family, n: u32, two_r: Option<u32> },
}

impl RdpType {
    pub fn a(n: u32) -> RdpType {
        if n == 0 {
            RdpType::Smooth
        } else {
            RdpType::Rdp { family: Family::A, n, two_r: None }
        }
    }

    /// `D_n` with doubled coindex; `D_3` is `A_3`.
    pub fn d(n: u32, two_r: Option<u32>) -> RdpType {
        if n == 3 {
            RdpType::a(3)
        } else {
            RdpType::Rdp { family: Family::D, n, two_r }
        }
    }

    pub fn e(n: u32, two_r: Option<u32>) -> RdpType {
        RdpType::Rdp { family: Family::E, n, two_r }
    }

    /// Type with an integer coindex `r`.
    pub fn with_r(family: Family, n: u32, r: u32) -> RdpType {
        RdpType::new(family, n, Some(2 * r))
    }

    pub fn new(family: Family, n: u32, two_r: Option<u32>) -> RdpType {
        match family {
            Family::A => RdpType::a(n),
            Family::D => RdpType::d(n, two_r),
            Family::E => RdpType::e(n, two_r),
        }
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            RdpType::Rdp { family, .. } => Some(*family),
            _ => None,
        }
    }

    pub fn index(&self) -> u32 {
        match self {
            RdpType::Rdp { n, .. } => *n,
            _ => 0,
        }
    }

    pub fn two_r(&self) -> Option<u32> {
        match self {
            RdpType::Rdp { two_r, .. } => *two_r,
            _ => None,
        }
    }

    /// Drops the coindex, keeping the Dynkin diagram.
    pub fn diagram(&self) -> RdpType {
        match *self {
            RdpType::Rdp { family, n, .. } => RdpType::new(family, n, None),
            t => t,
        }
    }

    pub fn is_rdp_or_smooth(&self) -> bool {
        !matches!(self, RdpType::NotRdp)
    }

    /// Whether the coindex in this characteristic is meaningful.
    pub fn is_valid_for(&self, p: u64) -> bool {
        match *self {
            RdpType::Smooth | RdpType::NotRdp => true,
            RdpType::Rdp { family, n, two_r } => {
                let range = coindex_range(p, family, n);
                match (range, two_r) {
                    (None, None) => true,
                    (Some(rs), Some(t)) => rs.contains(&t),
                    _ => false,
                }
            }
        }
    }

    /// Replaces the coindex by `None` where the family is taut in characteristic `p`.
    pub fn normalized(&self, p: u64) -> RdpType {
        match *self {
            RdpType::Rdp { family, n, .. } if coindex_range(p, family, n).is_none() => RdpType::new(family, n, None),
            t => t,
        }
    }

    /// Human form, e.g. `D5 coindex 1/2`.
    pub fn describe(&self) -> String {
        match *self {
            RdpType::Rdp { family, n, two_r: Some(t) } => format!("{}{} coindex {}", family.letter(), n, half(t)),
            t => t.to_string(),
        }
    }
}

fn half(t: u32) -> String {
    if t.is_multiple_of(2) {
        (t / 2).to_string()
    } else {
        format!("{}/2", t)
    }
}

/// Admissible doubled coindices of `family_n` in characteristic `p`, or
/// `None` when the type is taut there.
pub fn coindex_range(p: u64, family: Family, n: u32) -> Option<Vec<u32>> {
    match (p, family, n) {
        (2, Family::D, n) if n >= 4 => {
            if n % 2 == 0 {
                Some((0..n / 2).map(|r| 2 * r).collect())
            } else {
                Some((0..(n - 1) / 2).map(|s| 2 * s + 1).collect())
            }
        }
        (2, Family::E, 6) | (3, Family::E, 6) | (3, Family::E, 7) | (5, Family::E, 8) => Some(vec![0, 2]),
        (2, Family::E, 7) => Some(vec![0, 2, 4, 6]),
        (2, Family::E, 8) => Some(vec![0, 2, 4, 6, 8]),
        (3, Family::E, 8) => Some(vec![0, 2, 4]),
        _ => None,
    }
}

/// All types with `A_n` for `n <= max_a`, `D_n` for `4 <= n <= max_d` and
/// every `E`, with every admissible coindex in characteristic `p`.
pub fn catalog(p: u64, max_a: u32, max_d: u32) -> Vec<RdpType> {
    let mut out: Vec<RdpType> = (1..=max_a).map(RdpType::a).collect();
    let mut push = |family: Family, n: u32| match coindex_range(p, family, n) {
        None => out.push(RdpType::new(family, n, None)),
        Some(rs) => out.extend(rs.into_iter().map(|t| RdpType::new(family, n, Some(t)))),
    };
    for n in 4..=max_d {
        push(Family::D, n);
    }
    for n in 6..=8 {
        push(Family::E, n);
    }
    out
}

impl fmt::Display for RdpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RdpType::Smooth => write!(f, "Smooth"),
            RdpType::NotRdp => write!(f, "NotRDP"),
            RdpType::Rdp { family, n, two_r: None } => write!(f, "{}{}", family.letter(), n),
            RdpType::Rdp { family, n, two_r: Some(t) } => write!(f, "{}{}^{}", family.letter(), n, half(t)),
        }
    }
}

impl FromStr for RdpType {
    type Err = Error;

    /// Accepts `A4`, `D6^0`, `D7^1/2`, `E8^3`, `D_7^{1/2}`, `Smooth`, `A0`,
    /// `---`, `NotRDP`.
    fn from_str(s: &str) -> Result<RdpType> {
        let bad = || Error::UnknownType(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace() && !matches!(c, '_' | '{' | '}')).collect();
        match t.to_ascii_lowercase().as_str() {
            "smooth" | "---" | "-" | "a0" => return Ok(RdpType::Smooth),
            "notrdp" | "not-rdp" => return Ok(RdpType::NotRdp),
            _ => {}
        }
        let mut chars = t.chars();
        let family = match chars.next().ok_or_else(bad)? {
            'A' | 'a' => Family::A,
            'D' | 'd' => Family::D,
            'E' | 'e' => Family::E,
            _ => return Err(bad()),
        };
        let rest: &str = chars.as_str();
        let (index, coindex) = match rest.split_once('^') {
            Some((i, c)) => (i, Some(c)),
            None => (rest, None),
        };
        let n: u32 = index.parse().map_err(|_| bad())?;
        let two_r = match coindex {
            None => None,
            Some(c) => Some(match c.split_once('/') {
                Some((num, "2")) => {
                    let num: u32 = num.parse().map_err(|_| bad())?;
                    if num.is_multiple_of(2) {
                        return Err(bad());
                    }
                    num
                }
                Some(_) => return Err(bad()),
                None => 2 * c.parse::<u32>().map_err(|_| bad())?,
            }),
        };
        let ok = match family {
            Family::A => two_r.is_none(),
            Family::D => n >= 3,
            Family::E => (6..=8).contains(&n),
        };
        if !ok {
            return Err(bad());
        }
        Ok(RdpType::new(family, n, two_r))
    }
}

impl Serialize for RdpType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RdpType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["A4", "D6^0", "D7^1/2", "E8^3", "E6", "Smooth", "NotRDP", "D11^9/2"] {
            assert_eq!(s.parse::<RdpType>().unwrap().to_string(), s);
        }
        assert_eq!("D3".parse::<RdpType>().unwrap(), RdpType::a(3));
        assert_eq!("---".parse::<RdpType>().unwrap(), RdpType::Smooth);
        assert_eq!("D_{7}^{1/2}".parse::<RdpType>().unwrap(), RdpType::d(7, Some(1)));
        assert!("E9".parse::<RdpType>().is_err());
        assert!("D6^2/2".parse::<RdpType>().is_err());
        assert_eq!(RdpType::d(5, Some(1)).describe(), "D5 coindex 1/2");
    }

    #[test]
    fn coindex_conventions() {
        assert_eq!(coindex_range(2, Family::D, 7), Some(vec![1, 3, 5]));
        assert_eq!(coindex_range(2, Family::D, 6), Some(vec![0, 2, 4]));
        assert_eq!(coindex_range(7, Family::E, 8), None);
        assert!(RdpType::d(7, Some(1)).is_valid_for(2));
        assert!(!RdpType::d(7, Some(2)).is_valid_for(2));
        assert!(!RdpType::d(7, Some(1)).is_valid_for(3));
        let cat = catalog(2, 3, 5);
        assert_eq!(cat.len(), 3 + 2 + 2 + 2 + 4 + 5);
    }
}
