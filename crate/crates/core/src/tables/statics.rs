//! Local Picard groups and étale fundamental groups of RDPs, as data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rdp::{Family, RdpType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicEntry {
    pub dynkin: String,
    pub group: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pi1Entry {
    pub char: String,
    pub universal_cover: String,
    pub rdp: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub condition: String,
    pub pi1: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticData {
    pub pic: Vec<PicEntry>,
    pub pi1: Vec<Pi1Entry>,
}

const PIC: [(&str, &str); 7] = [
    ("smooth", "0"),
    ("A_n", "Z/(n+1)"),
    ("D_2m", "(Z/2)^2"),
    ("D_2m+1", "Z/4"),
    ("E_6", "Z/3"),
    ("E_7", "Z/2"),
    ("E_8", "0"),
];

const PI1: [(&str, &str, &str, &str, &str); 23] = [
    ("any", "A_{p^e-1}", "A_{np^e-1}", "p does not divide n", "C_n cyclic of order n"),
    ("!=2", "A_{p^e-1}", "D_{np^e+2}", "p does not divide n", "binary dihedral of order 4n"),
    ("!=2,3", "smooth", "E_6", "", "binary tetrahedral of order 24"),
    ("!=2,3", "smooth", "E_7", "", "binary octahedral of order 48"),
    ("!=2,3,5", "smooth", "E_8", "", "binary icosahedral of order 120"),
    ("5", "E_8^0", "E_8^0", "", "0"),
    ("5", "smooth", "E_8^1", "", "C_5"),
    ("3", "E_6^0", "E_6^0", "", "0"),
    ("3", "smooth", "E_6^1", "", "C_3"),
    ("3", "E_6^0", "E_7^0", "", "C_2"),
    ("3", "smooth", "E_7^1", "", "C_6"),
    ("3", "E_8^r", "E_8^r", "r = 0,1", "0"),
    ("3", "smooth", "E_8^2", "", "binary tetrahedral of order 24"),
    ("2", "A_{2^{e+1}-1}", "D_N^r", "4r > N", "dihedral of order 2(4r-N)', 4r-N = 2^e (4r-N)' with (4r-N)' odd"),
    ("2", "smooth", "D_N^r", "4r = N", "C_2"),
    ("2", "D_N^r", "D_N^r", "4r < N", "0"),
    ("2", "D_4^0", "E_6^0", "", "C_3"),
    ("2", "smooth", "E_6^1", "", "C_6"),
    ("2", "E_7^r", "E_7^r", "r = 0,1,2", "0"),
    ("2", "smooth", "E_7^3", "", "C_4"),
    ("2", "E_8^r", "E_8^r", "r = 0,1,3", "0"),
    ("2", "smooth", "E_8^2", "", "C_2"),
    ("2", "smooth", "E_8^4", "", "metacyclic of order 12"),
];

impl StaticData {
    pub fn builtin() -> Self {
        StaticData {
            pic: PIC.iter().map(|&(d, g)| PicEntry { dynkin: d.into(), group: g.into() }).collect(),
            pi1: PI1
                .iter()
                .map(|&(c, u, r, cond, g)| Pi1Entry {
                    char: c.into(),
                    universal_cover: u.into(),
                    rdp: r.into(),
                    condition: cond.into(),
                    pi1: g.into(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("static data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse { input: "static data".into(), pos: e.column(), msg: e.to_string() })
    }
}

/// Invariant factors of the local Picard group (empty when trivial).
pub fn pic_group(ty: RdpType) -> Vec<u64> {
    match (ty.family(), ty.index() as u64) {
        (None, _) => Vec::new(),
        (Some(Family::A), n) => vec![n + 1],
        (Some(Family::D), n) if n % 2 == 0 => vec![2, 2],
        (Some(Family::D), _) => vec![4],
        (Some(Family::E), 6) => vec![3],
        (Some(Family::E), 7) => vec![2],
        (Some(Family::E), _) => Vec::new(),
    }
}

/// Exponent of the local Picard group.
pub fn pic_exponent(ty: RdpType) -> u64 {
    pic_group(ty).into_iter().max().unwrap_or(1)
}

/// Universal covering of an RDP and whether it is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalCover {
    pub cover: RdpType,
    pub trivial: bool,
}

fn split_p(mut m: u64, p: u64) -> (u64, u32) {
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m, e)
}

/// Type of the universal covering, read off from the fundamental group table.
pub fn universal_cover(p: u64, ty: RdpType) -> Result<UniversalCover> {
    let (family, n) = match ty {
        RdpType::Smooth => return Ok(UniversalCover { cover: ty, trivial: true }),
        RdpType::NotRdp => return Err(Error::UnknownType("NotRDP has no entry".into())),
        RdpType::Rdp { family, n, .. } => (family, n),
    };
    if !ty.normalized(p).is_valid_for(p) {
        return Err(Error::UnknownType(format!("{ty} in characteristic {p}")));
    }
    let two_r = ty.two_r();
    let cover = match (p, family) {
        (_, Family::A) => {
            let (_, e) = split_p(n as u64 + 1, p);
            RdpType::a(p.pow(e) as u32 - 1)
        }
        (2, Family::D) => {
            let four_r = 2 * two_r.unwrap_or(0) as u64;
            let nn = n as u64;
            match four_r.cmp(&nn) {
                std::cmp::Ordering::Greater => {
                    let (_, e) = split_p(four_r - nn, 2);
                    RdpType::a((1u32 << (e + 1)) - 1)
                }
                std::cmp::Ordering::Equal => RdpType::Smooth,
                std::cmp::Ordering::Less => ty,
            }
        }
        (_, Family::D) => {
            let (_, e) = split_p(n as u64 - 2, p);
            RdpType::a(p.pow(e) as u32 - 1)
        }
        (5, Family::E) if n == 8 => if two_r == Some(0) { ty } else { RdpType::Smooth },
        (3, Family::E) => match (n, two_r) {
            (6, Some(0)) => ty,
            (7, Some(0)) => RdpType::e(6, Some(0)),
            (8, Some(0 | 2)) => ty,
            _ => RdpType::Smooth,
        },
        (2, Family::E) => match (n, two_r) {
            (6, Some(0)) => RdpType::d(4, Some(0)),
            (7, Some(0 | 2 | 4)) | (8, Some(0 | 2 | 6)) => ty,
            _ => RdpType::Smooth,
        },
        _ => RdpType::Smooth,
    };
    Ok(UniversalCover { cover, trivial: cover == ty })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_data_round_trip() {
        let data = StaticData::builtin();
        let json = data.to_json();
        let back = StaticData::from_json(&json).unwrap();
        assert_eq!(back, data);
        assert_eq!(back.to_json(), json);
        assert_eq!(data.pic.len(), 7);
        assert_eq!(data.pi1.len(), 23);
    }

    #[test]
    fn covers() {
        let t = |p, s: &str| universal_cover(p, s.parse().unwrap()).unwrap().cover.to_string();
        assert_eq!(t(3, "A8"), "A8");
        assert_eq!(t(3, "A5"), "A2");
        assert_eq!(t(5, "A3"), "Smooth");
        assert_eq!(t(3, "D5"), "A2");
        assert_eq!(t(2, "D4^0"), "D4^0");
        assert_eq!(t(2, "D4^1"), "Smooth");
        assert_eq!(t(2, "D5^3/2"), "A1");
        assert_eq!(t(2, "D6^2"), "A3");
        assert_eq!(t(2, "E6^0"), "D4^0");
        assert_eq!(t(3, "E7^0"), "E6^0");
        assert_eq!(t(2, "E8^2"), "Smooth");
        assert_eq!(t(7, "E8"), "Smooth");
        assert_eq!(pic_group("D5^1/2".parse().unwrap()), vec![4]);
        assert_eq!(pic_exponent("A4".parse().unwrap()), 5);
    }
}
