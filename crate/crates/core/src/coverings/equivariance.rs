//! Compatibility of a derivation with a cyclic group action:
//! `g D g^{-1} = beta D` with `beta` a unit and `rho(g) = beta(0)`.

use serde::Serialize;

use crate::derivation::{apply, Derivation};
use crate::error::{Error, Result};
use crate::hypersurface::LocalHypersurface;
use crate::ideal::common_cofactor;
use crate::series::Series;

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    /// `g(F) ∈ (F)`.
    pub preserves_equation: bool,
    /// Least `k` with `g^k = id`, searched up to `4 l`.
    pub group_order: Option<u64>,
    pub beta: Option<String>,
    pub beta_is_unit: bool,
    /// `rho(g) = beta(0)` as an element of the prime field.
    pub rho: Option<u64>,
    pub rho_order: Option<u64>,
    pub expected_order: u64,
}

impl EquivarianceReport {
    /// Everything holds except possibly the order of `rho(g)`.
    pub fn action_ok(&self) -> bool {
        self.preserves_equation && self.group_order == Some(self.expected_order) && self.beta_is_unit
    }

    pub fn rho_ok(&self) -> bool {
        self.rho_order == Some(self.expected_order)
    }

    /// Fails with `RhoOrderMismatch` when `rho(g)` has the wrong order.
    pub fn require_rho(&self) -> Result<()> {
        match self.rho_order {
            Some(o) if o == self.expected_order => Ok(()),
            found => Err(Error::RhoOrderMismatch { expected: self.expected_order, found: found.unwrap_or(0) }),
        }
    }
}

fn act(g: &[Series], f: &Series, n: i32) -> Result<Series> {
    f.substitute(g, n.min(f.order()))
}

/// Checks the action `v -> g[v]` of order `l` against `D` on `B`.
pub fn verify_equivariance(b: &LocalHypersurface, d: &Derivation, g: &[Series], l: u64) -> Result<EquivarianceReport> {
    let n = b.n();
    if g.len() != b.nvars() {
        return Err(Error::VariableMismatch(format!("{} images for {} variables", g.len(), b.nvars())));
    }
    let preserves_equation = b.reduce(&act(g, b.f(), n)?).is_zero();
    // Powers g^k(v), k = 1, 2, ...
    let vars: Vec<Series> = (0..b.nvars()).map(|i| b.var(i)).collect();
    let mut powers = vec![g.to_vec()];
    let mut group_order = None;
    for k in 1..=4 * l {
        let cur = powers.last().expect("nonempty");
        if cur.iter().zip(&vars).all(|(a, v)| b.reduce(&a.sub(v)).is_zero()) {
            group_order = Some(k);
            break;
        }
        let next = cur.iter().map(|s| act(g, s, n)).collect::<Result<Vec<_>>>()?;
        powers.push(next);
    }
    let mut report = EquivarianceReport {
        preserves_equation,
        group_order,
        beta: None,
        beta_is_unit: false,
        rho: None,
        rho_order: None,
        expected_order: l,
    };
    let Some(order) = group_order else { return Ok(report) };
    let inverse = if order == 1 { vars.clone() } else { powers[order as usize - 2].clone() };
    // (g D g^{-1})(v) = g(D(g^{-1}(v)))
    let conjugated = inverse
        .iter()
        .map(|s| act(g, &apply(d, s)?, n))
        .collect::<Result<Vec<_>>>()?;
    let Some(beta) = common_cofactor(&conjugated, &d.images, b.ideal(), 4, n - 2) else { return Ok(report) };
    let rho = beta.constant_term();
    report.beta = Some(beta.display());
    report.beta_is_unit = rho != 0;
    if rho != 0 {
        report.rho = Some(rho);
        report.rho_order = b.field().mult_order(rho);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn swap_on_a_cone_negates_the_torus_derivation() {
        let b = LocalHypersurface::parse(FieldSpec::prime(3).unwrap(), &["x", "y", "z"], "x*y - z^2", 16).unwrap();
        let d = Derivation::parse(&b, &["x", "-y", "0"]).unwrap();
        let g: Vec<Series> = ["y", "x", "-z"].iter().map(|s| b.parse_element(s).unwrap()).collect();
        let r = verify_equivariance(&b, &d, &g, 2).unwrap();
        assert!(r.action_ok());
        assert_eq!(r.rho, Some(2));
        assert!(r.rho_ok());
    }
}
