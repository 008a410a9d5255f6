//! RDP type identification: multiplicity, Tjurina number, resolution graph
//! and coindex.

mod coindex;
mod graph;
mod resolve;

use serde::Serialize;

pub use coindex::{artin_normal_form, coindex_from_tau, normal_form_truncation, tau_lookup};
pub use graph::DualGraph;
pub use resolve::ResolveConfig;

use crate::error::{Error, Result};
use crate::hypersurface::LocalHypersurface;
use crate::ideal::{local_dimension, DimensionPolicy};
use crate::rdp::{coindex_range, RdpType};
use crate::series::Series;

/// Lowest degree of a term of `F`; `None` when `F` vanishes to its order.
pub fn multiplicity(f: &Series) -> Option<u32> {
    f.valuation()
}

/// `dim k[[x,y,z]]/(F, F_x, F_y, F_z)`.
pub fn tjurina(b: &LocalHypersurface) -> Result<usize> {
    let mut gens = vec![b.f().clone()];
    gens.extend(b.gradient());
    local_dimension(b.ring(), &gens, DimensionPolicy::default())
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    #[serde(rename = "type")]
    pub ty: RdpType,
    /// Exceptional curves of the minimal resolution, for singular RDPs.
    pub graph: Option<DualGraph>,
    /// Tjurina number, computed when the coindex had to be determined.
    pub tau: Option<usize>,
}

fn three_dimensional(b: &LocalHypersurface) -> Result<()> {
    match b.nvars() {
        3 => Ok(()),
        2 if b.f().is_zero() => Ok(()),
        _ => Err(Error::Precondition("classification needs a surface in three variables or a smooth plane".into())),
    }
}

/// Exceptional dual graph of an isolated double point.
pub fn resolve_dual_graph(b: &LocalHypersurface, cfg: &ResolveConfig) -> Result<DualGraph> {
    three_dimensional(b)?;
    if b.nvars() != 3 || multiplicity(b.f()) != Some(2) {
        return Err(Error::Precondition("resolution needs a double point".into()));
    }
    let node = resolve::resolve(b.f(), 0, cfg)?;
    if node.ty == RdpType::NotRdp {
        return Err(Error::Precondition("not a rational double point".into()));
    }
    Ok(node.graph.finish())
}

pub fn classify(b: &LocalHypersurface) -> Result<Classification> {
    classify_with(b, &ResolveConfig::default())
}

pub fn classify_with(b: &LocalHypersurface, cfg: &ResolveConfig) -> Result<Classification> {
    three_dimensional(b)?;
    let plain = |ty| Ok(Classification { ty, graph: None, tau: None });
    if b.nvars() == 2 {
        return plain(RdpType::Smooth);
    }
    match multiplicity(b.f()) {
        None => return Err(Error::NotIsolated),
        Some(0 | 1) => return plain(RdpType::Smooth),
        Some(2) => {}
        Some(_) => return plain(RdpType::NotRdp),
    }
    let node = resolve::resolve(b.f(), 0, cfg)?;
    if node.ty == RdpType::NotRdp {
        return plain(RdpType::NotRdp);
    }
    let graph = node.graph.finish();
    let diagram = graph.identify().ok_or_else(|| Error::Precondition("resolution graph is not ADE".into()))?;
    debug_assert_eq!(diagram, node.ty);
    let (family, n) = (diagram.family().expect("singular"), diagram.index());
    if coindex_range(b.p(), family, n).is_none() {
        return Ok(Classification { ty: diagram, graph: Some(graph), tau: None });
    }
    let tau = tjurina(b)?;
    let two_r = coindex_from_tau(b.p(), family, n, tau)?;
    Ok(Classification { ty: RdpType::new(family, n, Some(two_r)), graph: Some(graph), tau: Some(tau) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn hyp(p: u64, f: &str, n: i32) -> LocalHypersurface {
        LocalHypersurface::parse(FieldSpec::prime(p).unwrap(), &["x", "y", "z"], f, n).unwrap()
    }

    #[test]
    fn tjurina_examples() {
        assert_eq!(tjurina(&hyp(3, "x*y+z^2", 16)).unwrap(), 1);
        assert_eq!(tjurina(&hyp(2, "z^2+x^3+y^5", 24)).unwrap(), 16);
        assert_eq!(tjurina(&hyp(5, "x*y+z^5", 16)).unwrap(), 5);
    }

    #[test]
    fn multiplicities() {
        let b = hyp(3, "z^2+x^3+y^5", 8);
        assert_eq!(multiplicity(b.f()), Some(2));
        assert_eq!(multiplicity(&b.parse_element("x").unwrap()), Some(1));
        assert_eq!(multiplicity(&b.parse_element("x^3+y^3").unwrap()), Some(3));
    }

    #[test]
    fn classify_examples() {
        let t = |p, f, n| classify(&hyp(p, f, n)).unwrap().ty.to_string();
        assert_eq!(t(2, "x*y+z^6", 16), "A5");
        assert_eq!(t(2, "x^2+y*z^2+x*y^3", 24), "D7^1/2");
        assert_eq!(t(2, "x*y+z^5+x*z^2", 24), "A4");
        assert_eq!(t(2, "x^2+y^2*z+z^3*(y^3+z^2*x)", 28), "D11^1/2");
        assert_eq!(t(3, "x^3+y^3+z^3", 16), "NotRDP");
        let g = resolve_dual_graph(&hyp(2, "z^2+x^2*y+x*y^3", 24), &ResolveConfig::default()).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.identify(), Some(RdpType::d(6, None)));
    }

    #[test]
    fn normal_forms_round_trip() {
        for p in [2u64, 3, 5] {
            for ty in crate::rdp::catalog(p, 0, 9) {
                let (Some(family), Some(two_r)) = (ty.family(), ty.two_r()) else { continue };
                let f = artin_normal_form(p, family, ty.index(), two_r).unwrap();
                let got = classify(&hyp(p, &f, normal_form_truncation(ty.index()))).unwrap().ty;
                assert_eq!(got, ty, "p={p} form {f}");
            }
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::field::FieldSpec;
    use crate::selftest::Sampler;
    use proptest::prelude::*;

    /// Taut forms and forms whose coindex is decided by the Tjurina number.
    const FORMS: &[(u64, &str)] = &[
        (2, "x*y + z^4"),
        (2, "z^2+x^2*y+x*y^3+x*y^2*z"),
        (2, "z^2+x^3+x*y^3+y^3*z"),
        (2, "z^2+x^3+y^5+x*y^2*z"),
        (3, "z^2+x^3+y^4"),
        (3, "z^2+x^3+y^5+x^2*y^2"),
        (5, "z^2+x^3+y^5"),
        (5, "z^2+x^2*y+y^4"),
    ];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn type_and_tjurina_survive_contact_changes(which in 0..FORMS.len(), seed: u64) {
            let (p, f) = FORMS[which];
            let order = 24;
            let b = LocalHypersurface::parse(FieldSpec::prime(p).unwrap(), &["x", "y", "z"], f, order).unwrap();
            let mut s = Sampler::new(seed);
            let phi = s.coordinate_change(b.ring(), 2, order);
            let u = s.unit(b.ring(), 1, order);
            let moved = LocalHypersurface::new(b.f().substitute(&phi, order).unwrap().mul(&u), order).unwrap();
            let ty = classify(&b).unwrap().ty;
            prop_assert!(ty != RdpType::NotRdp);
            prop_assert_eq!(classify(&moved).unwrap().ty, ty);
            prop_assert_eq!(tjurina(&moved).unwrap(), tjurina(&b).unwrap());
        }
    }
}
