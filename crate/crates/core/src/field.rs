//! Exact arithmetic in finite fields `F_{p^k}`.
//!
//! Elements are packed into a `u64` as base-`p` digits of their coordinate
//! vector with respect to the power basis `1, a, a^2, ...` where `a` is a root
//! of the field's modulus. For `k = 1` this is the ordinary residue in
//! `0..p`, and the prime subfield always occupies the integers `0..p`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Packed field element. Only meaningful together with its [`FieldSpec`].
pub type Elem = u64;

const MAX_DIGITS: usize = 40;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    k: u32,
    /// Monic modulus, coefficients from the constant term upwards (length `k + 1`).
    modulus: Vec<u64>,
    q: u64,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.p, self.k, self.modulus)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        Self::new(p, 1)
    }

    /// `F_{p^k}` with the lexicographically smallest monic irreducible modulus.
    ///
    /// Candidates `t^k + c_{k-1} t^{k-1} + ... + c_0` are enumerated by the
    /// integer `sum c_i p^i` in increasing order; the first irreducible one wins.
    pub fn new(p: u64, k: u32) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let bits = 64 - p.leading_zeros();
        if (bits as u64) * (k as u64) > 62 || k as usize > MAX_DIGITS {
            return Err(Error::InvalidField(format!("F_{p}^{k} is too large")));
        }
        let q = p.pow(k);
        if k == 1 {
            return Ok(Arc::new(FieldSpec { p, k, modulus: vec![0, 1], q }));
        }
        let base = FieldSpec { p, k: 1, modulus: vec![0, 1], q: p };
        for code in 0..q {
            let mut m: Vec<u64> = (0..k).map(|i| (code / p.pow(i)) % p).collect();
            m.push(1);
            if m[0] == 0 {
                continue;
            }
            if is_irreducible(&base, &m) {
                return Ok(Arc::new(FieldSpec { p, k, modulus: m, q }));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Whether `a` lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: Elem) -> bool {
        a < self.p
    }

    fn digits(&self, mut a: Elem) -> [u64; MAX_DIGITS] {
        let mut d = [0u64; MAX_DIGITS];
        for slot in d.iter_mut().take(self.k as usize) {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn pack(&self, d: &[u64]) -> Elem {
        let mut a = 0u64;
        for &c in d[..self.k as usize].iter().rev() {
            a = a * self.p + c;
        }
        a
    }

    /// Coordinates with respect to the power basis.
    pub fn coords(&self, a: Elem) -> Vec<u64> {
        self.digits(a)[..self.k as usize].to_vec()
    }

    pub fn from_coords(&self, c: &[u64]) -> Elem {
        let mut d = [0u64; MAX_DIGITS];
        for (i, &x) in c.iter().enumerate().take(self.k as usize) {
            d[i] = x % self.p;
        }
        self.pack(&d)
    }

    /// The generator `a` of the power basis (a root of the modulus).
    pub fn generator(&self) -> Elem {
        if self.k == 1 {
            // any element generates F_p as an F_p-algebra; keep the convention a = 0
            return 0;
        }
        self.p
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut d = [0u64; MAX_DIGITS];
        for i in 0..self.k as usize {
            d[i] = (da[i] + db[i]) % self.p;
        }
        self.pack(&d)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let da = self.digits(a);
        let mut d = [0u64; MAX_DIGITS];
        for i in 0..self.k as usize {
            d[i] = (self.p - da[i]) % self.p;
        }
        self.pack(&d)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return a * b % self.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        if b < self.p {
            return self.scale(a, b);
        }
        if a < self.p {
            return self.scale(b, a);
        }
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % self.p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = self.modulus[j];
                if m != 0 {
                    let t = c * m % self.p;
                    prod[i - k + j] = (prod[i - k + j] + self.p - t) % self.p;
                }
            }
        }
        self.pack(&prod[..k])
    }

    fn scale(&self, a: Elem, c: u64) -> Elem {
        let da = self.digits(a);
        let mut d = [0u64; MAX_DIGITS];
        for i in 0..self.k as usize {
            d[i] = da[i] * c % self.p;
        }
        self.pack(&d)
    }

    pub fn pow(&self, mut a: Elem, mut e: u64) -> Elem {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.q - 2))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// Inverse of the Frobenius `a -> a^p`.
    pub fn frobenius_root(&self, a: Elem) -> Elem {
        self.pow(a, self.q / self.p)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        Some(ord)
    }

    /// Symmetric integer representative for prime-field elements.
    pub fn signed_int(&self, a: Elem) -> Option<i64> {
        if a >= self.p {
            return None;
        }
        let a = a as i64;
        let p = self.p as i64;
        Some(if a > p / 2 { a - p } else { a })
    }

    pub fn format(&self, a: Elem) -> String {
        if let Some(v) = self.signed_int(a) {
            return v.to_string();
        }
        let parts: Vec<String> = self
            .coords(a)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => c.to_string(),
                1 if c == 1 => "a".into(),
                1 => format!("{c}*a"),
                _ if c == 1 => format!("a^{i}"),
                _ => format!("{c}*a^{i}"),
            })
            .collect();
        format!("({})", parts.join("+"))
    }

    /// All roots of a univariate polynomial (coefficients low to high) in this field.
    pub fn roots(&self, f: &[Elem]) -> Vec<Elem> {
        let f = upoly::trim(f.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        let f = upoly::monic(self, &f);
        // g = gcd(f, t^q - t) collects the distinct linear factors
        let t = vec![0, 1];
        let tq = upoly::powmod(self, &t, self.q, &f);
        let g = upoly::gcd(self, &f, &upoly::sub(self, &tq, &t));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ self.q);
        let mut out = Vec::new();
        self.split_linear(&g, &mut rng, &mut out);
        out.sort_unstable();
        out
    }

    fn split_linear(&self, g: &[Elem], rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) {
        let g = upoly::monic(self, g);
        match g.len() {
            0 | 1 => {}
            2 => out.push(self.neg(g[0])),
            _ => loop {
                let a = rng.gen_range(0..self.q);
                let b = rng.gen_range(1..self.q);
                let h = if self.p == 2 {
                    // trace of b*t + a over F_2
                    let base = upoly::rem(self, &[a, b], &g);
                    let mut term = base.clone();
                    let mut acc = base;
                    for _ in 1..self.k {
                        term = upoly::mulmod(self, &term, &term, &g);
                        acc = upoly::add(self, &acc, &term);
                    }
                    acc
                } else {
                    let e = upoly::powmod(self, &[a, 1], (self.q - 1) / 2, &g);
                    upoly::sub(self, &e, &[1])
                };
                let d = upoly::gcd(self, &g, &h);
                if d.len() > 1 && d.len() < g.len() {
                    let (rest, _) = upoly::divrem(self, &g, &d);
                    self.split_linear(&d, rng, out);
                    self.split_linear(&rest, rng, out);
                    return;
                }
            },
        }
    }
}

/// Embedding of a smaller field into an extension of the same characteristic.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Arc<FieldSpec>,
    pub target: Arc<FieldSpec>,
    /// Image of the source's power-basis generator.
    image_of_generator: Elem,
}

impl Embedding {
    pub fn new(source: Arc<FieldSpec>, target: Arc<FieldSpec>) -> Result<Self> {
        if source.p != target.p || !target.k.is_multiple_of(source.k) {
            return Err(Error::InvalidField(format!("{source} does not embed in {target}")));
        }
        let image_of_generator = if source.k == 1 {
            0
        } else {
            let m: Vec<Elem> = source.modulus.iter().map(|&c| target.from_int(c as i64)).collect();
            *target
                .roots(&m)
                .first()
                .ok_or_else(|| Error::InvalidField("modulus has no root in extension".into()))?
        };
        Ok(Embedding { source, target, image_of_generator })
    }

    pub fn map(&self, a: Elem) -> Elem {
        if self.source.k == 1 {
            return a;
        }
        let mut acc = 0;
        let mut power = 1;
        for c in self.source.coords(a) {
            if c != 0 {
                acc = self.target.add(acc, self.target.mul(power, c));
            }
            power = self.target.mul(power, self.image_of_generator);
        }
        acc
    }
}

/// Dense univariate polynomials over a [`FieldSpec`], coefficients low to high.
pub mod upoly {
    use super::{Elem, FieldSpec};

    pub fn trim(mut f: Vec<Elem>) -> Vec<Elem> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn add(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| k.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        trim(out)
    }

    pub fn sub(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| k.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        trim(out)
    }

    pub fn mul(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn monic(k: &FieldSpec, f: &[Elem]) -> Vec<Elem> {
        let f = trim(f.to_vec());
        match f.last() {
            None => f,
            Some(&lead) => {
                let inv = k.inv(lead).expect("nonzero");
                f.iter().map(|&c| k.mul(c, inv)).collect()
            }
        }
    }

    pub fn divrem(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv = k.inv(*b.last().unwrap()).unwrap();
        let mut q = vec![0; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = k.mul(*r.last().unwrap(), inv);
            q[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = k.sub(r[shift + i], k.mul(c, bc));
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        divrem(k, a, b).1
    }

    pub fn gcd(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(k, &a, &b);
            a = b;
            b = r;
        }
        monic(k, &a)
    }

    pub fn mulmod(k: &FieldSpec, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
        rem(k, &mul(k, a, b), m)
    }

    pub fn powmod(k: &FieldSpec, base: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
        let mut r = rem(k, &[1], m);
        let mut b = rem(k, base, m);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(k, &r, &b, m);
            }
            b = mulmod(k, &b, &b, m);
            e >>= 1;
        }
        r
    }

    pub fn eval(k: &FieldSpec, f: &[Elem], x: Elem) -> Elem {
        f.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
    }
}

/// Rabin's irreducibility test over the prime field `base`.
fn is_irreducible(base: &FieldSpec, f: &[u64]) -> bool {
    let n = (f.len() - 1) as u64;
    let p = base.p;
    let t: Vec<Elem> = vec![0, 1];
    // t^(p^j) mod f by repeated Frobenius
    let frob = |g: &[Elem], times: u64| {
        let mut g = g.to_vec();
        for _ in 0..times {
            g = upoly::powmod(base, &g, p, f);
        }
        g
    };
    let full = frob(&t, n);
    if upoly::sub(base, &full, &t) != Vec::<Elem>::new() {
        return false;
    }
    for r in prime_factors(n) {
        let g = frob(&t, n / r);
        let d = upoly::gcd(base, f, &upoly::sub(base, &g, &t));
        if d.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FieldSpec::prime(7).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.from_int(-1), 6);
        assert_eq!(f.signed_int(6), Some(-1));
        assert_eq!(f.mult_order(3), Some(6));
        assert!(FieldSpec::prime(9).is_err());
    }

    #[test]
    fn smallest_modulus_is_chosen() {
        // t^2 + 1 is irreducible over F_3 and is the first candidate with c0 != 0
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // over F_2 degree 2 the only irreducible is t^2 + t + 1
        let g = FieldSpec::new(2, 2).unwrap();
        assert_eq!(g.modulus(), &[1, 1, 1]);
        let h = FieldSpec::new(2, 3).unwrap();
        assert_eq!(h.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn extension_field_axioms() {
        for (p, k) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
            let f = FieldSpec::new(p, k).unwrap();
            let q = f.order();
            let step = (q / 37).max(1);
            let elems: Vec<Elem> = (0..q).step_by(step as usize).collect();
            for &a in &elems {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.pow(a, q - 1), 1);
                }
                for &b in &elems {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
            let a = f.generator();
            let root = upoly::eval(&f, f.modulus(), a);
            assert_eq!(root, 0);
        }
    }

    #[test]
    fn frobenius_root_inverts_power() {
        let f = FieldSpec::new(2, 5).unwrap();
        for a in 0..f.order() {
            assert_eq!(f.pow(f.frobenius_root(a), 2), a);
        }
    }

    #[test]
    fn roots_of_split_and_irreducible_polys() {
        let f = FieldSpec::prime(7).unwrap();
        // (t-1)(t-2)(t-2) -> distinct roots {1, 2}
        let p = upoly::mul(&f, &upoly::mul(&f, &[6, 1], &[5, 1]), &[5, 1]);
        assert_eq!(f.roots(&p), vec![1, 2]);
        // t^2 + 1 has no roots mod 7
        assert!(f.roots(&[1, 0, 1]).is_empty());
        // but it splits over F_49
        let g = FieldSpec::new(7, 2).unwrap();
        let r = g.roots(&[1, 0, 1]);
        assert_eq!(r.len(), 2);
        for x in r {
            assert_eq!(g.add(g.mul(x, x), 1), 0);
        }
        // characteristic two uses the trace splitting
        let h = FieldSpec::new(2, 6).unwrap();
        let r = h.roots(&[1, 1, 0, 1]);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = FieldSpec::new(3, 2).unwrap();
        let big = FieldSpec::new(3, 4).unwrap();
        let e = Embedding::new(small.clone(), big.clone()).unwrap();
        for a in 0..small.order() {
            for b in 0..small.order() {
                assert_eq!(e.map(small.mul(a, b)), big.mul(e.map(a), e.map(b)));
                assert_eq!(e.map(small.add(a, b)), big.add(e.map(a), e.map(b)));
            }
        }
        assert!(Embedding::new(small, FieldSpec::new(3, 3).unwrap()).is_err());
    }
}
