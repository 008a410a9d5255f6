//! Invariant subrings `B^D` and their presentations as hypersurfaces.

use serde::Serialize;

use crate::classify::classify;
use crate::derivation::{apply, Derivation};
use crate::error::{Error, Result};
use crate::hypersurface::LocalHypersurface;
use crate::ideal::{find_visible_relation, relation_residual};
use crate::linalg::{dense_rank, Echelon};
use crate::rdp::RdpType;
use crate::series::{Monomial, Ring, Series};

/// Names of the fresh symbols used for relations among generators.
pub const RELATION_SYMBOLS: [&str; 4] = ["W", "Z", "Y", "X"];

fn lowest(s: &Series) -> Monomial {
    s.terms().first().map(|t| t.0).unwrap_or(Monomial::ONE)
}

/// Echelonized span of all products of `gens` in `B`, modulo `m^{trunc+1}`.
fn subalgebra_span(b: &LocalHypersurface, gens: &[Series], trunc: i32) -> Echelon<Monomial> {
    let mut ech = Echelon::new(b.field());
    let usable: Vec<(u32, Series)> = gens
        .iter()
        .filter_map(|g| {
            let g = b.reduce(g).truncate(trunc);
            g.valuation().filter(|&v| v >= 1 && v as i32 <= trunc).map(|v| (v, g))
        })
        .collect();
    // multisets of generators in non-decreasing index order
    let mut stack: Vec<(usize, Series, u32)> = vec![(0, Series::one(b.ring(), trunc), 0)];
    while let Some((start, prod, weight)) = stack.pop() {
        for (j, (v, g)) in usable.iter().enumerate().skip(start) {
            if (weight + v) as i32 > trunc {
                continue;
            }
            let next = b.ideal().normal_form(&prod.mul_to(g, trunc), trunc);
            ech.insert(next.terms().to_vec());
            stack.push((j, next, weight + v));
        }
    }
    ech
}

/// Whether `target` lies in the subalgebra generated by `gens` (without
/// constants), modulo `(F) + m^{trunc+1}`.
pub fn in_subalgebra(b: &LocalHypersurface, gens: &[Series], target: &Series, trunc: i32) -> bool {
    let ech = subalgebra_span(b, gens, trunc);
    let t = b.reduce(target).truncate(trunc);
    ech.reduce(t.terms().to_vec()).0.is_empty()
}

/// Basis of the polynomial invariants of degree `1..=d_bound` in normal form,
/// echelonized on lowest monomials.
pub fn invariant_basis(b: &LocalHypersurface, d: &Derivation, d_bound: u32) -> Result<Vec<Series>> {
    let ring = b.ring();
    let monos: Vec<Monomial> = Monomial::up_to_degree(ring.nvars(), d_bound)
        .into_iter()
        .filter(|m| m.degree() >= 1 && b.ideal().is_standard(m))
        .collect();
    let mut ech: Echelon<Monomial> = Echelon::tracking(ring.field());
    let mut kernel: Echelon<Monomial> = Echelon::new(ring.field());
    for m in &monos {
        let image = b.reduce(&apply(d, &Series::monomial(ring, *m, 1, b.n()))?);
        if let Some(dep) = ech.insert(image.terms().to_vec()) {
            let mut v: Vec<(Monomial, u64)> = dep.iter().map(|&(j, c)| (monos[j], c)).collect();
            v.sort_by_key(|t| t.0);
            kernel.insert(v);
        }
    }
    let mut rows: Vec<Series> = kernel.rows().iter().map(|r| Series::from_terms(ring, r.iter().copied(), b.n())).collect();
    rows.sort_by_key(lowest);
    Ok(rows)
}

/// Minimal generators of the invariant subalgebra as seen through
/// polynomials of degree at most `d_bound`: the p-th powers of the variables
/// together with the polynomial invariants, pruned greedily by increasing
/// lowest monomial.
pub fn invariant_generators(b: &LocalHypersurface, d: &Derivation, d_bound: u32) -> Result<Vec<Series>> {
    let p = b.p() as u32;
    let trunc = d_bound.max(p) as i32;
    let mut candidates: Vec<Series> = (0..b.nvars())
        .map(|i| b.reduce(&b.var(i).pow(p)))
        .filter(|s| !s.is_zero())
        .collect();
    candidates.extend(invariant_basis(b, d, d_bound)?);
    candidates.sort_by_key(|s| (s.valuation(), lowest(s)));
    let mut gens: Vec<Series> = Vec::new();
    for c in candidates {
        if !in_subalgebra(b, &gens, &c, trunc) {
            gens.push(c);
        }
    }
    Ok(gens)
}

/// Dimension of the image of `gens` in `m/m^2` of `B`.
pub fn delta_metric(b: &LocalHypersurface, gens: &[Series]) -> usize {
    let n = b.nvars();
    let linear = |s: &Series| -> Vec<u64> { (0..n).map(|i| s.coeff(&Monomial::var(i))).collect() };
    let lf = linear(b.f());
    let base = dense_rank(b.field(), std::slice::from_ref(&lf), n);
    let mut rows: Vec<Vec<u64>> = gens.iter().map(linear).collect();
    rows.push(lf);
    dense_rank(b.field(), &rows, n) - base
}

/// How the generators of `B^D` are chosen.
#[derive(Clone, Debug)]
pub enum GeneratorChoice {
    /// Named generators supplied by the caller; each is checked to be invariant.
    Given(Vec<(String, Series)>),
    /// Generators searched among invariant polynomials up to this degree.
    Search { d_bound: u32 },
}

/// `B^D` presented as a quotient of a power series ring.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub generators: Vec<(String, Series)>,
    /// Relation in the generator symbols; `None` when the quotient is regular
    /// on two generators.
    pub relation: Option<Series>,
    pub target: LocalHypersurface,
    pub ty: RdpType,
    /// The relation is verified modulo `(F) + m^{order+1}`.
    pub order: i32,
    /// Dimension of the generators' image in the cotangent space of `B`.
    pub delta: usize,
}

/// Serializable summary of a presentation.
#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub generators: Vec<(String, String)>,
    pub relation: Option<String>,
    #[serde(rename = "type")]
    pub ty: RdpType,
    pub order: i32,
    pub delta: usize,
}

impl QuotientPresentation {
    pub fn report(&self) -> PresentationReport {
        PresentationReport {
            generators: self.generators.iter().map(|(n, g)| (n.clone(), g.display())).collect(),
            relation: self.relation.as_ref().map(|r| r.display()),
            ty: self.ty,
            order: self.order,
            delta: self.delta,
        }
    }
}

/// Default search degree for invariants.
pub fn default_search_degree(p: u64) -> u32 {
    (2 * p as u32 + 2).max(10)
}

pub fn quotient_presentation(b: &LocalHypersurface, d: &Derivation, choice: &GeneratorChoice) -> Result<QuotientPresentation> {
    let n = b.n();
    let generators: Vec<(String, Series)> = match choice {
        GeneratorChoice::Given(gens) => {
            for (name, g) in gens {
                let r = b.reduce(&apply(d, g)?);
                if !r.is_zero() {
                    return Err(Error::NotInvariant { generator: name.clone(), residual: r.display() });
                }
            }
            gens.clone()
        }
        GeneratorChoice::Search { d_bound } => invariant_generators(b, d, *d_bound)?
            .into_iter()
            .enumerate()
            .map(|(i, g)| (RELATION_SYMBOLS.get(i).map_or_else(|| format!("g{}", i + 1), |s| s.to_string()), g))
            .collect(),
    };
    let series: Vec<Series> = generators.iter().map(|g| g.1.clone()).collect();
    let delta = delta_metric(b, &series);
    let k = b.field().clone();
    let symbols: Vec<&str> = generators.iter().map(|g| g.0.as_str()).collect();
    match series.len() {
        2 => {
            let target = LocalHypersurface::smooth(k, &symbols, n)?;
            Ok(QuotientPresentation { generators, relation: None, target, ty: RdpType::Smooth, order: n, delta })
        }
        3 => {
            let rel = find_visible_relation(&series, b.f(), &symbols, n)?
                .ok_or_else(|| Error::NotHypersurface(format!("no relation among the generators visible at order {n}")))?;
            let residual = relation_residual(&rel.poly, &series, b.f(), n)?;
            if !residual.is_zero() {
                return Err(Error::NotHypersurface(format!("relation failed re-verification: {}", residual.display())));
            }
            let relation = rel.poly.with_order(n);
            let target = LocalHypersurface::new(relation.clone(), n)?;
            let ty = classify(&target)?.ty;
            Ok(QuotientPresentation { generators, relation: Some(relation), target, ty, order: n, delta })
        }
        m => Err(Error::NotHypersurface(format!(
            "{m} minimal generators found: {}",
            series.iter().map(|s| s.display()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

/// Frobenius sandwich at truncation level: every `v^p` lies in the generated
/// subalgebra, the generators miss part of the cotangent space, and some
/// generator is not a p-th power.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichCheck {
    pub contains_powers: bool,
    pub proper: bool,
    pub beyond_powers: bool,
}

impl SandwichCheck {
    pub fn pass(&self) -> bool {
        self.contains_powers && self.proper && self.beyond_powers
    }
}

pub fn sandwich_check(b: &LocalHypersurface, gens: &[Series], trunc: i32) -> SandwichCheck {
    let p = b.p() as u32;
    let powers: Vec<Series> = (0..b.nvars()).map(|i| b.var(i).pow(p)).collect();
    let contains_powers = powers.iter().all(|v| in_subalgebra(b, gens, v, trunc));
    let linear_f: Vec<u64> = (0..b.nvars()).map(|i| b.f().coeff(&Monomial::var(i))).collect();
    let embedding_dim = b.nvars() - dense_rank(b.field(), &[linear_f], b.nvars());
    let proper = delta_metric(b, gens) < embedding_dim;
    let beyond_powers = gens.iter().any(|g| !in_subalgebra(b, &powers, g, trunc));
    SandwichCheck { contains_powers, proper, beyond_powers }
}

/// `B = k[[x,y,z,w]]/(x^p - P(y^p,z,w), w - Q(z,y,x))` with its quotient
/// `B' = k[[w,z,y^p,x^p]]/(w^p - Q(z,y,x)^p, x^p - P(y^p,z,w))`.
///
/// `power` is `P` written in the ring `(x,y,z,w)` with `y` occurring only in
/// p-th powers; `w` is `Q` in the ring `(x,y,z)`.
#[derive(Clone, Debug)]
pub struct FrobeniusPresentation {
    pub power: Series,
    pub w: Series,
}

impl FrobeniusPresentation {
    pub fn new(power: Series, w: Series) -> Result<Self> {
        let p = w.ring().p() as u32;
        if power.ring().nvars() != 4 || w.ring().nvars() != 3 {
            return Err(Error::VariableMismatch("expected P over (x,y,z,w) and Q over (x,y,z)".into()));
        }
        if power.terms().iter().any(|(m, _)| m.exp(0) != 0 || m.exp(1) % p != 0) {
            return Err(Error::Precondition("P must not involve x and may involve y only through y^p".into()));
        }
        Ok(FrobeniusPresentation { power, w })
    }

    fn p(&self) -> u32 {
        self.w.ring().p() as u32
    }

    /// `F = x^p - P(y^p, z, Q(z,y,x))` over the ring of `Q`.
    pub fn source(&self, n: i32) -> Result<LocalHypersurface> {
        let ring = self.w.ring();
        let vars: Vec<Series> = (0..3).map(|i| Series::var(ring, i, n)).collect();
        let sigma = [vars[0].clone(), vars[1].clone(), vars[2].clone(), self.w.with_order(n)];
        let p_of_w = self.power.with_order(n).substitute(&sigma, n)?;
        LocalHypersurface::new(vars[0].pow(self.p()).sub(&p_of_w), n)
    }

    /// `(-Q_y, Q_x, 0)`.
    pub fn derivation(&self, b: &LocalHypersurface) -> Result<Derivation> {
        let q = self.w.with_order(b.n());
        Derivation::new(b, vec![q.derivative(1).neg(), q.derivative(0), Series::zero(b.ring(), b.n())])
    }

    /// The generators `w, z, y^p` of `B'`.
    pub fn generators(&self, b: &LocalHypersurface) -> Vec<(String, Series)> {
        vec![
            ("W".to_string(), self.w.with_order(b.n())),
            ("Z".to_string(), b.var(2)),
            ("Y".to_string(), b.var(1).pow(self.p())),
        ]
    }

    /// Both relations of `B'` over the symbols `W, Z, Y, X`, with `X = x^p`
    /// and `Y = y^p`.
    pub fn four_generator_relations(&self, n: i32) -> Result<(Series, Series)> {
        let k = self.w.field().clone();
        let p = self.p();
        let ring = Ring::new(k.clone(), &RELATION_SYMBOLS)?;
        // Q(z,y,x)^p = Q^(p)(z^p, y^p, x^p)
        let q_frob = Series::from_terms(
            &ring,
            self.w.terms().iter().map(|&(m, c)| (Monomial::new(&[0, p * m.exp(2), m.exp(1), m.exp(0)]), k.pow(c, p as u64))),
            n,
        );
        let wp = Series::var(&ring, 0, n).pow(p);
        let p_rel = Series::from_terms(
            &ring,
            self.power.terms().iter().map(|&(m, c)| (Monomial::new(&[m.exp(3), m.exp(2), m.exp(1) / p, 0]), c)),
            n,
        );
        Ok((wp.sub(&q_frob), Series::var(&ring, 3, n).sub(&p_rel)))
    }

    /// `W^p - Q^(p)(Z^p, Y, P(Y, Z, W))`, the relation after eliminating `x^p`.
    pub fn eliminated_relation(&self, n: i32) -> Result<Series> {
        let (first, second) = self.four_generator_relations(n)?;
        let ring3 = Ring::new(self.w.field().clone(), &RELATION_SYMBOLS[..3])?;
        let vars: Vec<Series> = (0..3).map(|i| Series::var(&ring3, i, n)).collect();
        // X = P(Y, Z, W): the second relation is X - P
        let p_in_3 = Series::var(second.ring(), 3, n).sub(&second);
        let p_in_3 = p_in_3.substitute(&[vars[0].clone(), vars[1].clone(), vars[2].clone(), Series::zero(&ring3, n)], n)?;
        first.substitute(&[vars[0].clone(), vars[1].clone(), vars[2].clone(), p_in_3], n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::parse_series;

    fn hyp(p: u64, vars: &[&str], f: &str, n: i32) -> LocalHypersurface {
        let k = FieldSpec::prime(p).unwrap();
        if f.is_empty() {
            LocalHypersurface::smooth(k, vars, n).unwrap()
        } else {
            LocalHypersurface::parse(k, vars, f, n).unwrap()
        }
    }

    fn shown(gens: &[Series]) -> Vec<String> {
        gens.iter().map(|g| g.display()).collect()
    }

    #[test]
    fn invariants_of_diagonal_action() {
        let b = hyp(5, &["x", "y"], "", 30);
        let d = Derivation::parse(&b, &["x", "-y"]).unwrap();
        let gens = invariant_generators(&b, &d, 10).unwrap();
        assert_eq!(shown(&gens), ["x*y", "y^5", "x^5"]);
        assert_eq!(delta_metric(&b, &gens), 0);
        let q = quotient_presentation(&b, &d, &GeneratorChoice::Search { d_bound: 10 }).unwrap();
        assert_eq!(q.ty, RdpType::a(4));
    }

    #[test]
    fn invariants_of_partial_z() {
        let b = hyp(3, &["x", "y", "z"], "x*y+z^6", 24);
        let d = Derivation::parse(&b, &["0", "0", "1"]).unwrap();
        let gens = invariant_generators(&b, &d, 8).unwrap();
        assert_eq!(shown(&gens), ["y", "x", "z^3"]);
        assert_eq!(delta_metric(&b, &gens), 2);
        let q = quotient_presentation(&b, &d, &GeneratorChoice::Search { d_bound: 8 }).unwrap();
        assert_eq!(q.ty, RdpType::a(1));
        assert!(sandwich_check(&b, &gens, 8).pass());
    }

    #[test]
    fn quotient_of_a1_is_e7() {
        let b = hyp(3, &["x", "y", "z"], "x^2+y^3+y*z", 30);
        let d = Derivation::parse(&b, &["z", "x", "0"]).unwrap();
        let given = vec![
            ("X".to_string(), b.var(0).pow(3)),
            ("Y".to_string(), b.var(1).pow(3)),
            ("Z".to_string(), b.var(2)),
        ];
        let q = quotient_presentation(&b, &d, &GeneratorChoice::Given(given)).unwrap();
        assert_eq!(q.ty, RdpType::e(7, Some(0)));
        assert_eq!(q.delta, 1);
    }

    #[test]
    fn smooth_quotient_of_e8() {
        let b = hyp(2, &["x", "y", "z"], "z^2+x^3+y^5", 24);
        let d = Derivation::parse(&b, &["0", "0", "1"]).unwrap();
        let q = quotient_presentation(&b, &d, &GeneratorChoice::Search { d_bound: 8 }).unwrap();
        assert_eq!(q.ty, RdpType::Smooth);
        assert_eq!(q.relation, None);
    }

    #[test]
    fn frobenius_presentation_e8() {
        let k = FieldSpec::prime(3).unwrap();
        let r4 = Ring::new(k.clone(), &["x", "y", "z", "w"]).unwrap();
        let r3 = Ring::new(k, &["x", "y", "z"]).unwrap();
        let pres = FrobeniusPresentation::new(
            parse_series("z^2+y^3*w", &r4, 30).unwrap(),
            parse_series("y^2+z*x", &r3, 30).unwrap(),
        )
        .unwrap();
        let b = pres.source(30).unwrap();
        let d = pres.derivation(&b).unwrap();
        assert!(crate::derivation::check_derivation(&b, &d).unwrap().pass);
        let elim = pres.eliminated_relation(30).unwrap();
        assert_eq!(elim.display(), "-Y^2 + W^3 - W*Z^3*Y - Z^5");
        let q = quotient_presentation(&b, &d, &GeneratorChoice::Given(pres.generators(&b))).unwrap();
        let rel = q.relation.clone().unwrap();
        let lead = rel.terms().last().unwrap().1;
        let e_lead = elim.coeff(&rel.terms().last().unwrap().0);
        assert_eq!(rel.scale(e_lead).with_order(8), elim.scale(lead).rename(rel.ring()).with_order(8));
        assert_eq!(q.ty, RdpType::e(8, Some(0)));
    }
}
