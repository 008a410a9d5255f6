//! Ideals of truncated power series rings.
//!
//! Principal ideals `(F) + m^{N+1}` use tangent-cone division: the lowest
//! form of `F` generates the initial ideal of `(F)`, so dividing each
//! homogeneous slice by it yields a canonical normal form. Ideals with several
//! generators are handled by a sparse echelon of `monomial * generator` rows
//! pivoted on their lowest monomial, which also gives the Hilbert function.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{Echelon, SparseVec};
use crate::series::{Monomial, Ring, Series};

/// Number of monomials of degree at most `d` in `n` variables.
pub fn monomials_up_to(n: usize, d: u32) -> usize {
    let mut c: u128 = 1;
    for i in 1..=n as u128 {
        c = c * (d as u128 + i) / i;
    }
    c as usize
}

/// The ideal `(F)` with a precomputed lowest form.
#[derive(Clone, Debug)]
pub struct PrincipalIdeal {
    f: Series,
    lead: Option<Lead>,
}

#[derive(Clone, Debug)]
struct Lead {
    val: u32,
    /// Largest monomial of the lowest form.
    lt: Monomial,
    lc_inv: Elem,
    form: Vec<(Monomial, Elem)>,
    tail: Vec<(Monomial, Elem)>,
}

impl PrincipalIdeal {
    pub fn new(f: &Series) -> Self {
        let lead = f.valuation().map(|val| {
            let (form, tail): (Vec<_>, Vec<_>) = f.terms().iter().partition(|t| t.0.degree() == val);
            let &(lt, lc) = form.last().expect("lowest form is nonempty");
            let lc_inv = f.field().inv(lc).expect("nonzero coefficient");
            Lead { val, lt, lc_inv, form, tail }
        });
        PrincipalIdeal { f: f.clone(), lead }
    }

    pub fn generator(&self) -> &Series {
        &self.f
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.f.ring()
    }

    /// Whether `m` survives in normal forms, i.e. is not a multiple of the
    /// leading monomial of the lowest form.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.lead.as_ref().is_none_or(|l| !l.lt.divides(m))
    }

    /// Order to which statements about `g` modulo this ideal can be certified.
    pub fn certified_order(&self, g: &Series, n: i32) -> i32 {
        n.min(g.order()).min(self.f.order())
    }

    /// Division `g = q F + r` modulo `m^{N+1}` with `r` in normal form.
    pub fn divide(&self, g: &Series, n: i32) -> (Series, Series) {
        let order = self.certified_order(g, n);
        let ring = g.ring().clone();
        let Some(lead) = self.lead.as_ref().filter(|_| order >= 0) else {
            return (Series::zero(&ring, order), g.truncate(order));
        };
        let k = ring.field().clone();
        let mut work: BTreeMap<Monomial, Elem> =
            g.terms().iter().filter(|t| t.0.degree() as i32 <= order).cloned().collect();
        let mut quotient: Vec<(Monomial, Elem)> = Vec::new();
        let mut rest: Vec<(Monomial, Elem)> = Vec::new();
        for d in 0..=order as u32 {
            let mut slice: BTreeMap<Monomial, Elem> = BTreeMap::new();
            while let Some(entry) = work.first_entry() {
                if entry.key().degree() != d {
                    break;
                }
                let (m, c) = entry.remove_entry();
                slice.insert(m, c);
            }
            let mut q_slice: Vec<(Monomial, Elem)> = Vec::new();
            while let Some((t, c)) = slice.pop_last() {
                let Some(mono) = t.div(&lead.lt) else {
                    rest.push((t, c));
                    continue;
                };
                let qc = k.mul(c, lead.lc_inv);
                for &(fm, fc) in &lead.form {
                    let m = fm.mul(&mono);
                    if m == t {
                        continue;
                    }
                    let e = slice.entry(m).or_insert(0);
                    *e = k.sub(*e, k.mul(qc, fc));
                    if *e == 0 {
                        slice.remove(&m);
                    }
                }
                q_slice.push((mono, qc));
            }
            for &(mono, qc) in &q_slice {
                for &(fm, fc) in &lead.tail {
                    let m = fm.mul(&mono);
                    if m.degree() as i32 > order {
                        break;
                    }
                    let e = work.entry(m).or_insert(0);
                    *e = k.sub(*e, k.mul(qc, fc));
                    if *e == 0 {
                        work.remove(&m);
                    }
                }
            }
            quotient.extend(q_slice);
        }
        let q = Series::from_terms(&ring, quotient, order - lead.val as i32);
        let r = Series::from_terms(&ring, rest, order);
        (q, r)
    }

    pub fn normal_form(&self, g: &Series, n: i32) -> Series {
        self.divide(g, n).1
    }

    /// `g ∈ (F) + m^{N+1}`.
    pub fn contains(&self, g: &Series, n: i32) -> bool {
        self.normal_form(g, n).is_zero()
    }
}

/// `g ∈ (F) + m^{N+1}`, certified to the lesser of `N` and the inputs' orders.
pub fn ideal_membership(g: &Series, f: &Series, n: i32) -> bool {
    PrincipalIdeal::new(f).contains(g, n)
}

/// Reference decision procedure: echelonize `{u F : deg u <= N - ord F}`
/// truncated at `N` and test whether `g` lies in the span.
pub fn membership_by_span(g: &Series, f: &Series, n: i32) -> bool {
    let order = n.min(g.order()).min(f.order());
    let Some(v) = f.valuation() else {
        return g.truncate(order).is_zero();
    };
    let ring = f.ring();
    let mut ech: Echelon<Monomial> = Echelon::new(ring.field());
    if order >= v as i32 {
        for u in Monomial::up_to_degree(ring.nvars(), (order - v as i32) as u32) {
            let row = f.mul_monomial(&u, 1).truncate(order);
            ech.insert(row.terms().to_vec());
        }
    }
    ech.reduce(g.truncate(order).terms().to_vec()).0.is_empty()
}

/// Ideal generated by finitely many series plus `m^{N+1}`, stored as an
/// echelonized monomial span.
#[derive(Clone)]
pub struct TruncatedIdeal {
    ring: Arc<Ring>,
    order: i32,
    echelon: Echelon<Monomial>,
}

impl TruncatedIdeal {
    /// The order is lowered to the least certified order of the generators.
    pub fn new(ring: &Arc<Ring>, gens: &[Series], order: i32) -> Self {
        let order = gens.iter().map(|g| g.order()).fold(order, i32::min);
        let mut echelon = Echelon::new(ring.field());
        let n = ring.nvars();
        let mut rows: Vec<(u32, usize, Monomial)> = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            let Some(v) = g.valuation() else { continue };
            if v as i32 > order {
                continue;
            }
            for u in Monomial::up_to_degree(n, (order - v as i32) as u32) {
                rows.push((u.degree() + v, gi, u));
            }
        }
        rows.sort_by_key(|r| r.0);
        for (_, gi, u) in rows {
            let row = gens[gi].mul_monomial(&u, 1).truncate(order);
            echelon.insert(row.terms().to_vec());
        }
        TruncatedIdeal { ring: ring.clone(), order, echelon }
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn contains(&self, g: &Series) -> bool {
        self.echelon.reduce(g.truncate(self.order).terms().to_vec()).0.is_empty()
    }

    /// Canonical representative modulo the ideal.
    pub fn normal_form(&self, g: &Series) -> Series {
        let r = self.echelon.reduce_full(g.truncate(self.order).terms().to_vec());
        Series::from_terms(&self.ring, r, self.order)
    }

    pub fn contains_unit(&self) -> bool {
        self.echelon.has_pivot(&Monomial::ONE)
    }

    /// `dim k[[vars]] / (I + m^{d+1})` for `d = 0..=order`.
    pub fn cumulative_hilbert(&self) -> Vec<usize> {
        if self.order < 0 {
            return Vec::new();
        }
        let mut per_degree = vec![0usize; self.order as usize + 1];
        for m in self.echelon.pivot_keys() {
            per_degree[m.degree() as usize] += 1;
        }
        let n = self.ring.nvars();
        let mut pivots = 0;
        (0..=self.order as u32)
            .map(|d| {
                pivots += per_degree[d as usize];
                monomials_up_to(n, d) - pivots
            })
            .collect()
    }

    /// Smallest `e` with `m^e ⊆ I`, if visible at this truncation.
    pub fn max_ideal_power(&self) -> Option<u32> {
        let h = self.cumulative_hilbert();
        if self.contains_unit() {
            return Some(0);
        }
        (1..h.len()).find(|&e| h[e] == h[e - 1]).map(|e| e as u32)
    }
}

/// Search schedule for [`local_dimension`].
#[derive(Clone, Copy, Debug)]
pub struct DimensionPolicy {
    pub start: u32,
    pub step: u32,
    pub ceiling: u32,
}

impl Default for DimensionPolicy {
    fn default() -> Self {
        DimensionPolicy { start: 8, step: 8, ceiling: 48 }
    }
}

/// `dim_k k[[vars]]/J` for an `m`-primary `J`.
///
/// The cumulative Hilbert function is exact once two consecutive values
/// agree (then `m^{d+1} ⊆ J + m^{d+2}`, hence `m^{d+1} ⊆ J` by Nakayama).
pub fn local_dimension(ring: &Arc<Ring>, gens: &[Series], policy: DimensionPolicy) -> Result<usize> {
    let limit = gens.iter().map(|g| g.order()).fold(policy.ceiling as i32, i32::min);
    let mut t = (policy.start as i32).min(limit);
    let mut last: Vec<usize>;
    loop {
        let ideal = TruncatedIdeal::new(ring, gens, t);
        let h = ideal.cumulative_hilbert();
        if let Some(d) = (1..h.len()).find(|&d| h[d] == h[d - 1]) {
            return Ok(h[d]);
        }
        last = h;
        if t >= limit {
            break;
        }
        t = (t + policy.step.max(1) as i32).min(limit);
    }
    let n = last.len();
    Err(Error::CeilingExceeded {
        prev: n.checked_sub(2).map(|i| last[i]),
        last: last.last().copied(),
    })
}

/// Nontrivial polynomial relation among generators modulo `(F) + m^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// Polynomial in fresh symbols, one per generator.
    pub poly: Series,
    /// Largest monomial of the relation, with coefficient 1.
    pub leading: Monomial,
}

/// Minimal relation `R` with `R(gens) ∈ (F) + m^{N+1}` and `deg R <= d_bound`.
///
/// Monomials in the generators are visited in increasing graded-lex order and
/// their normal forms echelonized; the first dependency is the relation whose
/// largest monomial is smallest, which makes it unique once normalized.
pub fn find_relation<S: AsRef<str>>(
    gens: &[Series],
    f: &Series,
    symbols: &[S],
    d_bound: u32,
    n: i32,
) -> Result<Option<Relation>> {
    if gens.is_empty() || symbols.len() != gens.len() {
        return Err(Error::Precondition("one symbol per generator is required".into()));
    }
    let ring = f.ring();
    let max_val = gens.iter().map(|g| g.valuation().unwrap_or(0)).max().unwrap_or(0);
    if n < 0 || d_bound.saturating_mul(max_val) > n as u32 {
        return Err(Error::TruncationTooLow { needed: d_bound.saturating_mul(max_val), order: n.max(0) as u32 });
    }
    let symring = Ring::new(ring.field().clone(), symbols)?;
    let ideal = PrincipalIdeal::new(f);
    let monos = Monomial::up_to_degree(gens.len(), d_bound);
    let mut images: Vec<Series> = Vec::with_capacity(monos.len());
    let index: std::collections::HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut ech: Echelon<Monomial> = Echelon::tracking(ring.field());
    for m in &monos {
        let image = match (0..gens.len()).rev().find(|&i| m.exp(i) > 0) {
            None => Series::one(ring, n),
            Some(i) => {
                let prev = &images[index[&m.with_exp(i, m.exp(i) - 1)]];
                ideal.normal_form(&prev.mul_to(&gens[i], n), n)
            }
        };
        if let Some(dep) = ech.insert(image.terms().to_vec()) {
            let poly = Series::from_terms(&symring, dep.iter().map(|&(j, c)| (monos[j], c)), d_bound as i32);
            return Ok(Some(Relation { poly, leading: *m }));
        }
        images.push(image);
    }
    Ok(None)
}

/// Relation among generators, searching only monomials whose weighted
/// degree `sum a_i * ord(g_i)` is at most `N`, so that each image is visible
/// at order `N` and no degree precondition is needed. Monomials are visited
/// in graded-lex order; those whose image vanishes at order `N` are skipped,
/// as are dependencies with a common monomial factor (which a relation of a
/// domain never has, so they come from cancellation past order `N`).
pub fn find_visible_relation<S: AsRef<str>>(gens: &[Series], f: &Series, symbols: &[S], n: i32) -> Result<Option<Relation>> {
    if gens.is_empty() || symbols.len() != gens.len() {
        return Err(Error::Precondition("one symbol per generator is required".into()));
    }
    let weights: Vec<u32> = gens
        .iter()
        .map(|g| g.valuation().filter(|&v| v > 0))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Precondition("generators must lie in the maximal ideal".into()))?;
    let ring = f.ring();
    let symring = Ring::new(ring.field().clone(), symbols)?;
    let bound = n.max(0) as u32;
    let mut monos: Vec<(u32, Monomial)> = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    fn walk(i: usize, w: u32, bound: u32, weights: &[u32], exps: &mut Vec<u32>, out: &mut Vec<(u32, Monomial)>) {
        if i == weights.len() {
            out.push((w, Monomial::new(exps)));
            return;
        }
        let mut e = 0;
        while w + e * weights[i] <= bound {
            exps[i] = e;
            walk(i + 1, w + e * weights[i], bound, weights, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }
    walk(0, 0, bound, &weights, &mut exps, &mut monos);
    monos.sort_by_key(|&(_, m)| m);
    let ideal = PrincipalIdeal::new(f);
    let index: std::collections::HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, &(_, m))| (m, i)).collect();
    let mut images: Vec<Series> = Vec::with_capacity(monos.len());
    let mut ech: Echelon<Monomial> = Echelon::tracking(ring.field());
    // echelon insertion index -> monomial index
    let mut inserted: Vec<usize> = Vec::new();
    for (mi, &(_, m)) in monos.iter().enumerate() {
        let image = match (0..gens.len()).rev().find(|&i| m.exp(i) > 0) {
            None => Series::one(ring, n),
            Some(i) => {
                let prev = &images[index[&m.with_exp(i, m.exp(i) - 1)]];
                ideal.normal_form(&prev.mul_to(&gens[i], n), n)
            }
        };
        // Neither an invisible monomial nor its multiples can certify a relation.
        if image.is_zero() {
            images.push(image);
            continue;
        }
        inserted.push(mi);
        if let Some(dep) = ech.insert(image.terms().to_vec()) {
            let terms: Vec<(Monomial, Elem)> = dep.iter().map(|&(j, c)| (monos[inserted[j]].1, c)).collect();
            let common = (0..gens.len()).any(|i| terms.iter().all(|(t, _)| t.exp(i) > 0));
            if !common {
                let order = terms.iter().map(|(t, _)| t.degree()).max().unwrap_or(0) as i32;
                return Ok(Some(Relation { poly: Series::from_terms(&symring, terms, order), leading: m }));
            }
        }
        images.push(image);
    }
    Ok(None)
}

/// Evaluates a relation at the generators and reduces modulo `(F)`.
pub fn relation_residual(rel: &Series, gens: &[Series], f: &Series, n: i32) -> Result<Series> {
    let value = rel.with_order(n).substitute_polynomial(gens, n)?;
    Ok(PrincipalIdeal::new(f).normal_form(&value, n))
}

/// Finds `h` with `deg h <= deg_bound` and `targets[i] - h * bases[i] ∈ (F) + m^{N+1}`
/// for every `i` simultaneously.
pub fn common_cofactor(
    targets: &[Series],
    bases: &[Series],
    ideal: &PrincipalIdeal,
    deg_bound: u32,
    n: i32,
) -> Option<Series> {
    assert_eq!(targets.len(), bases.len());
    let ring = ideal.ring().clone();
    let flatten = |parts: Vec<Series>| -> SparseVec<(usize, Monomial)> {
        let mut v: SparseVec<(usize, Monomial)> = Vec::new();
        for (i, s) in parts.into_iter().enumerate() {
            v.extend(s.terms().iter().map(|&(m, c)| ((i, m), c)));
        }
        v
    };
    let monos = Monomial::up_to_degree(ring.nvars(), deg_bound);
    let mut ech: Echelon<(usize, Monomial)> = Echelon::tracking(ring.field());
    for mu in &monos {
        let col = bases.iter().map(|b| ideal.normal_form(&b.mul_monomial(mu, 1), n)).collect();
        ech.insert(flatten(col));
    }
    let rhs = flatten(targets.iter().map(|t| ideal.normal_form(t, n)).collect());
    let combo = ech.solve(rhs)?;
    let h = Series::from_terms(&ring, combo.iter().map(|&(j, c)| (monos[j], c)), n);
    Some(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::parse_series;

    fn ring(p: u64, vars: &[&str]) -> Arc<Ring> {
        Ring::new(FieldSpec::prime(p).unwrap(), vars).unwrap()
    }

    #[test]
    fn membership_examples() {
        let r = ring(3, &["x", "y", "z"]);
        let f = parse_series("z^2+x^3+y^5", &r, 20).unwrap();
        let g = parse_series("5*y^4*z - 2*y^4*z", &r, 20).unwrap();
        assert!(ideal_membership(&g, &f, 20));
        assert!(ideal_membership(&f, &f, 20));
        let r2 = ring(2, &["x", "y"]);
        let f2 = parse_series("x*y", &r2, 6).unwrap();
        let g2 = parse_series("x+y", &r2, 6).unwrap();
        assert!(!ideal_membership(&g2, &f2, 6));
        assert!(!membership_by_span(&g2, &f2, 6));
    }

    #[test]
    fn division_identity() {
        let r = ring(5, &["x", "y", "z"]);
        let f = parse_series("x*y + z^3 + x^2*z", &r, 12).unwrap();
        let g = parse_series("x^3*y^2 + 2*z^4 + y*z^5 + x", &r, 12).unwrap();
        let (q, rem) = PrincipalIdeal::new(&f).divide(&g, 12);
        assert_eq!(q.mul_to(&f, 12).add(&rem), g);
        assert!(rem.terms().iter().all(|t| t.0.div(&Monomial::new(&[1, 1, 0])).is_none()));
    }

    #[test]
    fn unit_generator_kills_everything() {
        let r = ring(3, &["x", "y"]);
        let f = parse_series("1 + x", &r, 8).unwrap();
        let g = parse_series("y^3 + x*y + 2", &r, 8).unwrap();
        assert!(ideal_membership(&g, &f, 8));
    }

    #[test]
    fn local_dimension_examples() {
        let r = ring(3, &["x", "y", "z"]);
        let vars: Vec<Series> = (0..3).map(|i| Series::var(&r, i, 32)).collect();
        assert_eq!(local_dimension(&r, &vars, DimensionPolicy::default()).unwrap(), 1);
        let j: Vec<Series> = ["x*y+z^2", "y", "x", "2*z"].iter().map(|s| parse_series(s, &r, 32).unwrap()).collect();
        assert_eq!(local_dimension(&r, &j, DimensionPolicy::default()).unwrap(), 1);
        let r2 = ring(2, &["x", "y", "z"]);
        let j2: Vec<Series> = ["z^2+x^3+y^5", "x^2", "y^4", "0"].iter().map(|s| parse_series(s, &r2, 32).unwrap()).collect();
        assert_eq!(local_dimension(&r2, &j2, DimensionPolicy::default()).unwrap(), 16);
        let j3: Vec<Series> = ["x*y"].iter().map(|s| parse_series(s, &r2, 32).unwrap()).collect();
        assert!(matches!(local_dimension(&r2, &j3, DimensionPolicy::default()), Err(Error::CeilingExceeded { .. })));
    }

    #[test]
    fn relations() {
        let r = ring(3, &["x", "y"]);
        let gens: Vec<Series> = ["x*y", "x^3", "y^3"].iter().map(|s| parse_series(s, &r, 24).unwrap()).collect();
        let zero = Series::zero(&r, 24);
        let rel = find_relation(&gens, &zero, &["U", "V", "W"], 3, 24).unwrap().unwrap();
        let symring = rel.poly.ring().clone();
        assert_eq!(rel.poly, parse_series("U^3 - V*W", &symring, 3).unwrap());
        assert!(relation_residual(&rel.poly, &gens, &zero, 24).unwrap().is_zero());
        let lone = [Series::var(&r, 0, 24)];
        assert_eq!(find_relation(&lone, &zero, &["U"], 5, 24).unwrap(), None);
        assert!(matches!(find_relation(&gens, &zero, &["U", "V", "W"], 9, 24), Err(Error::TruncationTooLow { .. })));
    }

    #[test]
    fn cofactor_solve() {
        let r = ring(2, &["x", "y"]);
        let d = [parse_series("x*y^2", &r, 20).unwrap(), parse_series("x^2+y^3", &r, 20).unwrap()];
        let h = parse_series("y^2", &r, 20).unwrap();
        let targets: Vec<Series> = d.iter().map(|s| s.mul(&h)).collect();
        let ideal = PrincipalIdeal::new(&Series::zero(&r, 20));
        let found = common_cofactor(&targets, &d, &ideal, 4, 20).unwrap();
        assert_eq!(found.terms(), h.terms());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    fn series_strategy(p: u64, max_deg: u32, order: i32) -> impl Strategy<Value = Vec<(Vec<u32>, u64)>> {
        let _ = order;
        prop::collection::vec((prop::collection::vec(0..=max_deg, 3), 0..p), 1..6)
    }

    fn build(r: &Arc<Ring>, raw: &[(Vec<u32>, u64)], order: i32) -> Series {
        let p = r.p();
        Series::from_terms(r, raw.iter().map(|(e, c)| (Monomial::new(e), c % p)), order)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn tangent_cone_matches_span(p in prop::sample::select(vec![2u64, 3, 5]),
                                     n in 3i32..=8,
                                     fr in series_strategy(5, 3, 8),
                                     gr in series_strategy(5, 4, 8),
                                     mult in series_strategy(5, 3, 8)) {
            let r = Ring::new(FieldSpec::prime(p).unwrap(), &["x", "y", "z"]).unwrap();
            let f = build(&r, &fr, n);
            prop_assume!(!f.is_zero());
            // half the time g is forced into the ideal
            let g = build(&r, &gr, n).add(&build(&r, &mult, n).mul_to(&f, n));
            prop_assert_eq!(ideal_membership(&g, &f, n), membership_by_span(&g, &f, n));
            let g2 = build(&r, &mult, n).mul_to(&f, n);
            prop_assert!(ideal_membership(&g2, &f, n));
        }

        #[test]
        fn normal_form_is_canonical(fr in series_strategy(3, 3, 10),
                                    gr in series_strategy(3, 4, 10),
                                    mult in series_strategy(3, 3, 10)) {
            let r = Ring::new(FieldSpec::prime(3).unwrap(), &["x", "y", "z"]).unwrap();
            let f = build(&r, &fr, 10);
            let g = build(&r, &gr, 10);
            let shifted = g.add(&build(&r, &mult, 10).mul_to(&f, 10));
            let ideal = PrincipalIdeal::new(&f);
            prop_assert_eq!(ideal.normal_form(&g, 10), ideal.normal_form(&shifted, 10));
        }
    }
}
