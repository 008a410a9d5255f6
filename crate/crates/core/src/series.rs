//! Sparse truncated power series over `F_{p^k}`.
//!
//! A [`Series`] stores finitely many terms together with a certification
//! order `N`: the stored terms agree with the represented element of the
//! completed ring modulo `m^{N+1}`. Every operation derives the order of its
//! result from the orders of its inputs and never claims more than it knows.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, FieldSpec};

pub const MAX_VARS: usize = 4;

/// Exponent vector, ordered graded-lexicographically with respect to the
/// ring's variable order (the first variable is the largest).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u8; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn new(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = [0u8; MAX_VARS];
        for (slot, &e) in m.iter_mut().zip(exps) {
            *slot = u8::try_from(e).expect("exponent overflow");
        }
        Monomial(m)
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0u8; MAX_VARS];
        m[i] = 1;
        Monomial(m)
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        Monomial(m)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= other.0[i])
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut m = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i] - other.0[i];
        }
        Some(Monomial(m))
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.0;
        m[i] = u8::try_from(e).expect("exponent overflow");
        Monomial(m)
    }

    pub fn scale(&self, k: u32) -> Monomial {
        let mut m = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = u8::try_from(self.0[i] as u32 * k).expect("exponent overflow");
        }
        Monomial(m)
    }

    pub fn exps(&self) -> [u8; MAX_VARS] {
        self.0
    }

    /// All monomials in `nvars` variables of total degree exactly `d`,
    /// in decreasing graded-lex order.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = [0u32; MAX_VARS];
        fn rec(i: usize, nvars: usize, left: u32, cur: &mut [u32; MAX_VARS], out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur[i] = left;
                out.push(Monomial::new(&cur[..nvars]));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, nvars, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        rec(0, nvars, d, &mut cur, &mut out);
        out
    }

    /// All monomials of total degree at most `d`, in increasing graded-lex order.
    pub fn up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for e in 0..=d {
            let mut layer = Monomial::of_degree(nvars, e);
            layer.reverse();
            out.extend(layer);
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Coefficient field plus an ordered list of variable names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Arc<FieldSpec>,
    vars: Vec<String>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[[{}]]", self.field, self.vars.join(","))
    }
}

impl Ring {
    pub fn new<S: AsRef<str>>(field: Arc<FieldSpec>, vars: &[S]) -> Result<Arc<Ring>> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(Error::VariableMismatch(format!(
                "between 1 and {MAX_VARS} variables are supported, got {}",
                vars.len()
            )));
        }
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || !v.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                return Err(Error::VariableMismatch(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::VariableMismatch(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(Ring { field, vars }))
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_field(&self, field: Arc<FieldSpec>) -> Arc<Ring> {
        Arc::new(Ring { field, vars: self.vars.clone() })
    }
}

/// Element of `k[[vars]]` known modulo `m^{order+1}`.
///
/// An order of `-1` means nothing is known.
#[derive(Clone)]
pub struct Series {
    ring: Arc<Ring>,
    /// Sorted increasingly by [`Monomial`] order; no zero coefficients; all
    /// of degree at most `order`.
    terms: Vec<(Monomial, Elem)>,
    order: i32,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.order == other.order && self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(ring: &Arc<Ring>, order: i32) -> Series {
        Series { ring: ring.clone(), terms: Vec::new(), order }
    }

    pub fn constant(ring: &Arc<Ring>, c: Elem, order: i32) -> Series {
        Series::from_terms(ring, vec![(Monomial::ONE, c)], order)
    }

    pub fn one(ring: &Arc<Ring>, order: i32) -> Series {
        Series::constant(ring, 1, order)
    }

    pub fn var(ring: &Arc<Ring>, i: usize, order: i32) -> Series {
        assert!(i < ring.nvars());
        Series::from_terms(ring, vec![(Monomial::var(i), 1)], order)
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Elem, order: i32) -> Series {
        Series::from_terms(ring, vec![(m, c)], order)
    }

    /// Builds a series from arbitrary terms, combining duplicates and
    /// discarding terms above the order.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Elem)>>(ring: &Arc<Ring>, terms: I, order: i32) -> Series {
        let k = ring.field();
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (m, c) in terms {
            if c == 0 || m.degree() as i32 > order {
                continue;
            }
            let e = acc.entry(m).or_insert(0);
            *e = k.add(*e, c);
        }
        Series::from_map(ring, acc, order)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<Monomial, Elem>, order: i32) -> Series {
        let mut terms: Vec<(Monomial, Elem)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by_key(|a| a.0);
        Series { ring: ring.clone(), terms, order }
    }

    /// Terms already sorted, reduced and within the order.
    pub(crate) fn from_sorted(ring: &Arc<Ring>, terms: Vec<(Monomial, Elem)>, order: i32) -> Series {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|&(m, c)| c != 0 && m.degree() as i32 <= order));
        Series { ring: ring.clone(), terms, order }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.ring.field()
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when the series is zero modulo `m^{order+1}`.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&Monomial::ONE)
    }

    /// Lowest degree of a known term, `None` when zero to the certified order.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    /// Valuation with the convention that a zero series has valuation `order + 1`.
    pub fn valuation_bound(&self) -> i32 {
        self.valuation().map(|v| v as i32).unwrap_or(self.order + 1)
    }

    /// Highest total degree among stored terms.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0.degree())
    }

    pub fn homogeneous_part(&self, d: u32) -> Series {
        let terms = self.terms.iter().filter(|t| t.0.degree() == d).cloned().collect();
        Series::from_sorted(&self.ring, terms, self.order)
    }

    pub fn truncate(&self, order: i32) -> Series {
        let order = order.min(self.order);
        let terms = self.terms.iter().filter(|t| t.0.degree() as i32 <= order).cloned().collect();
        Series { ring: self.ring.clone(), terms, order }
    }

    /// Same terms with a different claimed order. Used when a polynomial is
    /// known exactly and may be certified to any order.
    pub fn with_order(&self, order: i32) -> Series {
        let terms = self.terms.iter().filter(|t| t.0.degree() as i32 <= order).cloned().collect();
        Series { ring: self.ring.clone(), terms, order }
    }

    fn check_ring(&self, other: &Series) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "series from different rings: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &Series) -> Series {
        self.check_ring(other);
        let order = self.order.min(other.order);
        let k = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let next = if i == a.len() {
                let t = b[j];
                j += 1;
                t
            } else if j == b.len() {
                let t = a[i];
                i += 1;
                t
            } else {
                match a[i].0.cmp(&b[j].0) {
                    Ordering::Less => {
                        i += 1;
                        a[i - 1]
                    }
                    Ordering::Greater => {
                        j += 1;
                        b[j - 1]
                    }
                    Ordering::Equal => {
                        let c = k.add(a[i].1, b[j].1);
                        i += 1;
                        j += 1;
                        (a[i - 1].0, c)
                    }
                }
            };
            if next.1 != 0 && next.0.degree() as i32 <= order {
                out.push(next);
            }
        }
        Series { ring: self.ring.clone(), terms: out, order }
    }

    pub fn neg(&self) -> Series {
        let k = self.field();
        let terms = self.terms.iter().map(|&(m, c)| (m, k.neg(c))).collect();
        Series { ring: self.ring.clone(), terms, order: self.order }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> Series {
        if c == 0 {
            return Series::zero(&self.ring, self.order);
        }
        let k = self.field();
        let terms = self.terms.iter().map(|&(m, a)| (m, k.mul(a, c))).collect();
        Series { ring: self.ring.clone(), terms, order: self.order }
    }

    /// Multiplication by a monomial; the order shifts by its degree.
    pub fn mul_monomial(&self, m: &Monomial, c: Elem) -> Series {
        if c == 0 {
            return Series::zero(&self.ring, self.order + m.degree() as i32);
        }
        let k = self.field();
        let terms = self.terms.iter().map(|&(t, a)| (t.mul(m), k.mul(a, c))).collect();
        Series { ring: self.ring.clone(), terms, order: self.order + m.degree() as i32 }
    }

    /// Order certified for a product: an unknown tail of `a` in `m^{A+1}`
    /// multiplies `b` of valuation `v_b`, and symmetrically.
    pub fn product_order(a: &Series, b: &Series) -> i32 {
        let raw = (a.order + b.valuation_bound()).min(b.order + a.valuation_bound());
        raw.min(a.order.max(b.order))
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = Series::product_order(self, other);
        self.mul_to(other, order)
    }

    /// Product truncated at `order`, which must not exceed the certified product order.
    pub fn mul_to(&self, other: &Series, order: i32) -> Series {
        self.check_ring(other);
        let order = order.min(Series::product_order(self, other));
        let k = self.field();
        let mut acc: HashMap<Monomial, Elem> = HashMap::with_capacity(self.terms.len() * 2 + other.terms.len());
        for &(ma, ca) in &self.terms {
            let da = ma.degree() as i32;
            if da > order {
                break;
            }
            for &(mb, cb) in &other.terms {
                if da + mb.degree() as i32 > order {
                    break;
                }
                let m = ma.mul(&mb);
                let e = acc.entry(m).or_insert(0);
                *e = k.add(*e, k.mul(ca, cb));
            }
        }
        Series::from_map(&self.ring, acc, order)
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut result = Series::one(&self.ring, self.order.max(0));
        if e == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = e;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { base.clone() } else { result.mul(&base) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative; loses one order of certification.
    pub fn derivative(&self, i: usize) -> Series {
        let k = self.field();
        let order = self.order - 1;
        let terms = self
            .terms
            .iter()
            .filter(|t| t.0.exp(i) > 0)
            .filter_map(|&(m, c)| {
                let e = m.exp(i);
                let c = k.mul(c, k.from_int(e as i64));
                (c != 0).then(|| (m.with_exp(i, e - 1), c))
            });
        Series::from_terms(&self.ring, terms, order)
    }

    /// `u^{-1}` modulo `m^{order+1}`.
    pub fn invert_unit(&self, order: i32) -> Result<Series> {
        let c = self.constant_term();
        let k = self.field();
        let cinv = k.inv(c).ok_or(Error::NotAUnit)?;
        let order = order.min(self.order);
        // u = c (1 - t) with t in m; u^{-1} = c^{-1} sum t^i
        let unit = self.truncate(order).scale(cinv);
        let t = Series::one(&self.ring, order).sub(&unit);
        let mut acc = Series::one(&self.ring, order);
        let mut power = Series::one(&self.ring, order);
        loop {
            power = power.mul_to(&t, order);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(cinv))
    }

    /// `f(sigma)`, where `sigma[i]` is the image of the i-th variable of
    /// `self`'s ring. All images must lie in the maximal ideal.
    pub fn substitute(&self, sigma: &[Series], order: i32) -> Result<Series> {
        for s in sigma {
            if s.constant_term() != 0 {
                return Err(Error::Precondition(
                    "substitution images must have zero constant term".into(),
                ));
            }
        }
        let available = sigma.iter().map(|s| s.order).min().unwrap_or(i32::MAX).min(self.order);
        if order > available {
            return Err(Error::TruncationUnderflow { requested: order.max(0) as u32, available: available as i64 });
        }
        Ok(self.compose(sigma, order))
    }

    /// Substitution treating `self` as an exact polynomial, allowing images
    /// with unit constant terms (rational maps with pre-inverted denominators).
    pub fn substitute_polynomial(&self, sigma: &[Series], order: i32) -> Result<Series> {
        let available = sigma.iter().map(|s| s.order).min().unwrap_or(i32::MAX);
        if order > available {
            return Err(Error::TruncationUnderflow { requested: order.max(0) as u32, available: available as i64 });
        }
        Ok(self.compose(sigma, order))
    }

    fn compose(&self, sigma: &[Series], order: i32) -> Series {
        assert_eq!(sigma.len(), self.ring.nvars(), "one image per variable");
        let target = sigma.first().map(|s| s.ring.clone()).expect("non-empty substitution");
        let mut powers: Vec<Vec<Series>> = sigma.iter().map(|s| vec![Series::one(&target, order), s.truncate(order)]).collect();
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        let k = target.field().clone();
        for &(m, c) in &self.terms {
            let mut prod: Option<Series> = None;
            let mut min_deg = 0i32;
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul_to(&pw[1], order);
                    pw.push(next);
                }
                let factor = &pw[e];
                min_deg += factor.valuation_bound();
                prod = Some(match prod {
                    None => factor.clone(),
                    Some(p) => p.mul_to(factor, order),
                });
                if min_deg > order {
                    break;
                }
            }
            if min_deg > order {
                continue;
            }
            match prod {
                None => {
                    let e = acc.entry(Monomial::ONE).or_insert(0);
                    *e = k.add(*e, c);
                }
                Some(p) => {
                    for &(pm, pc) in &p.terms {
                        let e = acc.entry(pm).or_insert(0);
                        *e = k.add(*e, k.mul(c, pc));
                    }
                }
            }
        }
        Series::from_map(&target, acc, order)
    }

    /// Exact division by a monomial, failing if some term is not divisible.
    pub fn div_monomial_exact(&self, m: &Monomial) -> Option<Series> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(t, c) in &self.terms {
            terms.push((t.div(m)?, c));
        }
        let order = self.order - m.degree() as i32;
        Some(Series::from_terms(&self.ring, terms, order))
    }

    /// `Q^p` rewritten in the variables `v^p`: coefficients go through
    /// Frobenius, exponents are kept.
    pub fn frobenius_rewrite(&self, target: &Arc<Ring>) -> Series {
        let k = self.field();
        let p = k.p();
        let terms = self.terms.iter().map(|&(m, c)| (m, k.pow(c, p)));
        Series::from_terms(target, terms, self.order)
    }

    /// Reinterprets the series in another ring with the same number of
    /// variables (renaming) and the same field.
    pub fn rename(&self, target: &Arc<Ring>) -> Series {
        assert_eq!(target.nvars(), self.ring.nvars());
        assert_eq!(target.field(), self.ring.field());
        Series { ring: target.clone(), terms: self.terms.clone(), order: self.order }
    }

    /// Maps coefficients along a field embedding.
    pub fn extend_field(&self, emb: &Embedding, target: &Arc<Ring>) -> Series {
        let terms = self.terms.iter().map(|&(m, c)| (m, emb.map(c))).collect();
        Series { ring: target.clone(), terms, order: self.order }
    }

    /// Evaluates a polynomial in a subset of variables at field values,
    /// keeping the remaining variables (`None` entries).
    pub fn evaluate_partial(&self, values: &[Option<Elem>]) -> Series {
        let k = self.field();
        let terms = self.terms.iter().map(|&(m, c)| {
            let mut c = c;
            let mut e = m;
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    c = k.mul(c, k.pow(*v, m.exp(i) as u64));
                    e = e.with_exp(i, 0);
                }
            }
            (e, c)
        });
        Series::from_terms(&self.ring, terms, self.order)
    }

    pub fn display(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = self.field();
        // ascending degree, decreasing graded-lex inside a degree
        let mut order: Vec<&(Monomial, Elem)> = self.terms.iter().collect();
        order.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0.cmp(&a.0)));
        for (idx, (m, c)) in order.into_iter().enumerate() {
            let (neg, body) = match k.signed_int(*c) {
                Some(v) if v < 0 => (true, (-v).to_string()),
                Some(v) => (false, v.to_string()),
                None => (false, k.format(*c)),
            };
            let mut factors = Vec::new();
            for (i, name) in self.ring.vars().iter().enumerate() {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            let term = if factors.is_empty() {
                body
            } else if body == "1" {
                factors.join("*")
            } else {
                format!("{body}*{}", factors.join("*"))
            };
            match (idx, neg) {
                (0, false) => write!(f, "{term}")?,
                (0, true) => write!(f, "-{term}")?,
                (_, false) => write!(f, " + {term}")?,
                (_, true) => write!(f, " - {term}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod m^{})", self, self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn ring(p: u64, vars: &[&str]) -> Arc<Ring> {
        Ring::new(FieldSpec::prime(p).unwrap(), vars).unwrap()
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let x = Monomial::new(&[1, 0, 0]);
        let y = Monomial::new(&[0, 1, 0]);
        let z2 = Monomial::new(&[0, 0, 2]);
        assert!(y < x);
        assert!(x < z2);
        assert_eq!(Monomial::of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::up_to_degree(3, 3).len(), 20);
        assert_eq!(Monomial::of_degree(3, 1)[0], x);
    }

    #[test]
    fn invert_unit_geometric_series() {
        let r = ring(3, &["x"]);
        let u = parse_series("1 - x", &r, 2).unwrap();
        let inv = u.invert_unit(2).unwrap();
        assert_eq!(inv, parse_series("1 + x + x^2", &r, 2).unwrap());

        let r2 = ring(2, &["Y", "z"]);
        let u = parse_series("1 + Y*z^4", &r2, 8).unwrap();
        let inv = u.invert_unit(8).unwrap();
        // Y^2 z^8 has degree 10 > 8, so only the linear term of the series survives
        assert_eq!(inv, parse_series("1 + Y*z^4", &r2, 8).unwrap());
        let inv12 = u.with_order(12).invert_unit(12).unwrap();
        assert_eq!(inv12, parse_series("1 + Y*z^4 + Y^2*z^8", &r2, 12).unwrap());

        let r5 = ring(5, &["x"]);
        let x = parse_series("x", &r5, 4).unwrap();
        assert_eq!(x.invert_unit(4).unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn substitution_examples() {
        let r = ring(3, &["x", "y", "z"]);
        let f = parse_series("x*y", &r, 4).unwrap();
        let sigma = vec![Series::var(&r, 1, 4), Series::var(&r, 0, 4), Series::var(&r, 2, 4)];
        assert_eq!(f.substitute(&sigma, 4).unwrap(), f);

        let f = parse_series("z^2 + x^3 + y^3 + x^2*y^2", &r, 10).unwrap();
        let g = vec![
            Series::var(&r, 1, 10),
            Series::var(&r, 0, 10),
            Series::var(&r, 2, 10).neg(),
        ];
        assert_eq!(f.substitute(&g, 10).unwrap(), f);

        let r2 = ring(2, &["x", "y"]);
        let f = parse_series("x^2", &r2, 3).unwrap();
        let sigma = vec![parse_series("x + y", &r2, 3).unwrap(), Series::var(&r2, 1, 3)];
        assert_eq!(f.substitute(&sigma, 3).unwrap(), parse_series("x^2 + y^2", &r2, 3).unwrap());
        assert!(matches!(f.substitute(&sigma, 5), Err(Error::TruncationUnderflow { .. })));
    }

    #[test]
    fn frobenius_rewrite_examples() {
        let r = ring(3, &["y", "x"]);
        let target = ring(3, &["Y", "X"]);
        let q = parse_series("y^2 + y*x", &r, 10).unwrap();
        assert_eq!(q.frobenius_rewrite(&target), parse_series("Y^2 + Y*X", &target, 10).unwrap());
        let r2 = ring(2, &["z", "y", "x"]);
        let t2 = ring(2, &["Z", "Y", "X"]);
        let q = parse_series("y^3 + z*x", &r2, 10).unwrap();
        assert_eq!(q.frobenius_rewrite(&t2), parse_series("Y^3 + Z*X", &t2, 10).unwrap());
        // direct check that the rewrite is Q^p under Y = y^p
        let q = parse_series("z*y + y^3*x", &r2, 30).unwrap();
        let qp = q.pow(2);
        let back = q.frobenius_rewrite(&t2);
        let sq: Vec<Series> = (0..3).map(|i| Series::var(&r2, i, 30).pow(2)).collect();
        assert_eq!(back.substitute(&sq, 30).unwrap(), qp);
    }

    #[test]
    fn orders_track_certification() {
        let r = ring(5, &["x", "y"]);
        let a = parse_series("x + y^2", &r, 6).unwrap();
        let b = parse_series("x*y", &r, 6).unwrap();
        // tails: a in m^7 times b (val 2) -> m^9; b tail in m^7 times a (val 1) -> m^8
        assert_eq!(a.mul(&b).order(), 6);
        assert_eq!(a.derivative(0).order(), 5);
        assert_eq!(a.display(), "x + y^2");
        assert_eq!(parse_series("-x + 2*y", &r, 3).unwrap().display(), "-x + 2*y");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    const ORDER: i32 = 9;

    type Raw = Vec<(Vec<u32>, u64)>;

    fn raw_series() -> impl Strategy<Value = Raw> {
        prop::collection::vec((prop::collection::vec(0..=4u32, 3), any::<u64>()), 0..7)
    }

    /// `F_5` or `F_4`; the latter exercises extension arithmetic.
    fn ring_of(which: bool) -> Arc<Ring> {
        let k = if which { FieldSpec::prime(5) } else { FieldSpec::new(2, 2) };
        Ring::new(k.unwrap(), &["x", "y", "z"]).unwrap()
    }

    fn build(r: &Arc<Ring>, raw: &Raw) -> Series {
        let q = r.field().order();
        Series::from_terms(r, raw.iter().map(|(e, c)| (Monomial::new(e), c % q)), ORDER)
    }

    fn in_max_ideal(r: &Arc<Ring>, raw: &Raw) -> Series {
        let s = build(r, raw);
        s.sub(&Series::constant(r, s.constant_term(), ORDER))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn ring_axioms(which: bool, a in raw_series(), b in raw_series(), c in raw_series()) {
            let r = ring_of(which);
            let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.add(&a.neg()).is_zero());
            prop_assert_eq!(a.mul(&Series::one(&r, ORDER)), a);
        }

        #[test]
        fn unit_inverse(which: bool, t in raw_series(), c in 1u64..4) {
            let r = ring_of(which);
            let u = Series::constant(&r, c, ORDER).add(&in_max_ideal(&r, &t));
            let inv = u.invert_unit(ORDER).unwrap();
            prop_assert_eq!(u.mul_to(&inv, ORDER), Series::one(&r, ORDER));
            prop_assert!(in_max_ideal(&r, &t).invert_unit(ORDER).is_err());
        }

        /// Substitution is a ring map, and a triangular change
        /// `x -> x + g(y, z)` is undone by `x -> x - g(y, z)`.
        #[test]
        fn substitution(which: bool, f in raw_series(), h in raw_series(), g in raw_series()) {
            let r = ring_of(which);
            let (f, h) = (build(&r, &f), build(&r, &h));
            let g = in_max_ideal(&r, &g).substitute(
                &[Series::zero(&r, ORDER), Series::var(&r, 1, ORDER), Series::var(&r, 2, ORDER)], ORDER).unwrap();
            let forward = [Series::var(&r, 0, ORDER).add(&g), Series::var(&r, 1, ORDER), Series::var(&r, 2, ORDER)];
            let back = [Series::var(&r, 0, ORDER).sub(&g), Series::var(&r, 1, ORDER), Series::var(&r, 2, ORDER)];
            let sub = |s: &Series, sigma: &[Series]| s.substitute(sigma, ORDER).unwrap();
            prop_assert_eq!(sub(&f.mul(&h), &forward), sub(&f, &forward).mul(&sub(&h, &forward)));
            prop_assert_eq!(sub(&f.add(&h), &forward), sub(&f, &forward).add(&sub(&h, &forward)));
            prop_assert_eq!(sub(&sub(&f, &forward), &back), f);
        }
    }
}
