//! Coindex recovery from the Tjurina number.
//!
//! For each non-taut `(family, n, p)` the Tjurina numbers of Artin's normal
//! forms are computed once and cached; the map from Tjurina number to
//! coindex must be injective, otherwise the lookup reports the collision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::hypersurface::LocalHypersurface;
use crate::rdp::{coindex_range, Family};

use super::tjurina;

/// Artin normal form of `family_n` with doubled coindex `two_r` in
/// characteristic `p`, in the variables `x, y, z`.
pub fn artin_normal_form(p: u64, family: Family, n: u32, two_r: u32) -> Option<String> {
    let range = coindex_range(p, family, n)?;
    if !range.contains(&two_r) {
        return None;
    }
    let r = two_r / 2;
    let s = match (p, family, n) {
        (2, Family::D, n) if n % 2 == 0 => {
            let h = n / 2;
            if r == 0 {
                format!("z^2+x^2*y+x*y^{h}")
            } else {
                format!("z^2+x^2*y+x*y^{h}+x*y^{}*z", h - r)
            }
        }
        (2, Family::D, n) => {
            let h = (n - 1) / 2;
            format!("z^2+x^2*y+z*y^{h}+z*x*y^{}", h - r)
        }
        (2, Family::E, 6) => ["z^2+x^3+y^2*z", "z^2+x^3+y^2*z+x*y*z"][r as usize].to_string(),
        (2, Family::E, 7) => {
            let extra = ["", "+x^2*y*z", "+y^3*z", "+x*y*z"][r as usize];
            format!("z^2+x^3+x*y^3{extra}")
        }
        (2, Family::E, 8) => {
            let extra = ["", "+x*y^3*z", "+x*y^2*z", "+y^3*z", "+x*y*z"][r as usize];
            format!("z^2+x^3+y^5{extra}")
        }
        (3, Family::E, 6) => ["z^2+x^3+y^4", "z^2+x^3+y^4+x^2*y^2"][r as usize].to_string(),
        (3, Family::E, 7) => ["z^2+x^3+x*y^3", "z^2+x^3+x*y^3+x^2*y^2"][r as usize].to_string(),
        (3, Family::E, 8) => ["z^2+x^3+y^5", "z^2+x^3+y^5+x^2*y^3", "z^2+x^3+y^5+x^2*y^2"][r as usize].to_string(),
        (5, Family::E, 8) => ["z^2+x^3+y^5", "z^2+x^3+y^5+x*y^4"][r as usize].to_string(),
        _ => return None,
    };
    Some(s)
}

/// Truncation used when computing Tjurina numbers of normal forms.
pub fn normal_form_truncation(n: u32) -> i32 {
    (2 * n as i32 + 8).max(24)
}

type Lookup = HashMap<usize, u32>;
type LookupCache = Mutex<HashMap<(Family, u32, u64), Result<Lookup>>>;

fn cache() -> &'static LookupCache {
    static CACHE: OnceLock<LookupCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn build(p: u64, family: Family, n: u32) -> Result<Lookup> {
    let range = coindex_range(p, family, n)
        .ok_or_else(|| Error::Precondition(format!("{}{n} is taut in characteristic {p}", family.letter())))?;
    let k = FieldSpec::prime(p)?;
    let trunc = normal_form_truncation(n);
    let mut by_tau: HashMap<usize, Vec<u32>> = HashMap::new();
    for two_r in range {
        let form = artin_normal_form(p, family, n, two_r).expect("in range");
        let b = LocalHypersurface::parse(k.clone(), &["x", "y", "z"], &form, trunc)?;
        by_tau.entry(tjurina(&b)?).or_default().push(two_r);
    }
    let mut out = HashMap::new();
    for (tau, cands) in by_tau {
        if cands.len() > 1 {
            return Err(Error::CoindexAmbiguous { family: family.letter(), n, p, candidates: cands });
        }
        out.insert(tau, cands[0]);
    }
    Ok(out)
}

/// Map from Tjurina number to doubled coindex for a non-taut type.
pub fn tau_lookup(p: u64, family: Family, n: u32) -> Result<Lookup> {
    let key = (family, n, p);
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let built = build(p, family, n);
    cache().lock().unwrap().insert(key, built.clone());
    built
}

/// Doubled coindex of a singularity with the given diagram and Tjurina number.
pub fn coindex_from_tau(p: u64, family: Family, n: u32, tau: usize) -> Result<u32> {
    let table = tau_lookup(p, family, n)?;
    table.get(&tau).copied().ok_or_else(|| {
        let mut known: Vec<u32> = table.values().copied().collect();
        known.sort_unstable();
        Error::CoindexAmbiguous { family: family.letter(), n, p, candidates: known }
    })
}
