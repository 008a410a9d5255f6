//! Derivations of local hypersurfaces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::LocalHypersurface;
use crate::ideal::{common_cofactor, TruncatedIdeal};
use crate::series::Series;

/// Default degree bound when solving for a p-closure witness.
pub const WITNESS_DEGREE: u32 = 10;

/// Derivation given by the images of the variables, with an optional
/// claimed witness `h` of `D^p = hD`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub images: Vec<Series>,
    pub h: Option<Series>,
}

impl Derivation {
    pub fn new(b: &LocalHypersurface, images: Vec<Series>) -> Result<Self> {
        if images.len() != b.nvars() {
            return Err(Error::VariableMismatch(format!(
                "{} images for {} variables",
                images.len(),
                b.nvars()
            )));
        }
        if images.iter().any(|s| s.ring() != b.ring()) {
            return Err(Error::VariableMismatch("image over a different ring".into()));
        }
        Ok(Derivation { images, h: None })
    }

    pub fn parse<S: AsRef<str>>(b: &LocalHypersurface, images: &[S]) -> Result<Self> {
        let images = images.iter().map(|s| b.parse_element(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Derivation::new(b, images)
    }

    pub fn with_h(mut self, h: Series) -> Self {
        self.h = Some(h);
        self
    }

    /// `aD`.
    pub fn scale(&self, a: &Series) -> Derivation {
        Derivation { images: self.images.iter().map(|s| s.mul(a)).collect(), h: None }
    }

    /// Least certified order among the images.
    pub fn order(&self) -> i32 {
        self.images.iter().map(|s| s.order()).min().unwrap_or(i32::MAX)
    }

    pub fn is_zero_on(&self, b: &LocalHypersurface) -> bool {
        self.images.iter().all(|s| b.contains(s))
    }
}

/// `D(g) = sum_v dg/dv * D(v)`.
pub fn apply(d: &Derivation, g: &Series) -> Result<Series> {
    let ring = g.ring();
    if d.images.len() != ring.nvars() || d.images.iter().any(|s| s.ring() != ring) {
        return Err(Error::VariableMismatch("derivation and series live in different rings".into()));
    }
    let mut acc: Option<Series> = None;
    for (i, img) in d.images.iter().enumerate() {
        let term = g.derivative(i).mul(img);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.unwrap_or_else(|| Series::zero(ring, g.order())))
}

/// Outcome of a well-definedness check `D(F) ∈ (F)`.
#[derive(Clone, Debug)]
pub struct DerivationCheck {
    pub pass: bool,
    /// Normal form of `D(F)`; zero iff the check passes.
    pub residual: Series,
    /// Order to which the verdict is certified.
    pub order: i32,
}

pub fn check_derivation(b: &LocalHypersurface, d: &Derivation) -> Result<DerivationCheck> {
    let df = apply(d, b.f())?;
    let residual = b.reduce(&df);
    Ok(DerivationCheck { pass: residual.is_zero(), order: residual.order(), residual })
}

/// `D^i(g)` reduced modulo `(F)` after each application.
pub fn iterate(b: &LocalHypersurface, d: &Derivation, g: &Series, times: u64) -> Result<Series> {
    let mut cur = b.reduce(g);
    for _ in 0..times {
        cur = b.reduce(&apply(d, &cur)?);
    }
    if cur.order() < 0 {
        return Err(Error::TruncationUnderflow { requested: times as u32, available: cur.order() as i64 });
    }
    Ok(cur)
}

/// Images of the variables under `D^p`.
pub fn p_power(b: &LocalHypersurface, d: &Derivation) -> Result<Vec<Series>> {
    (0..b.nvars()).map(|i| iterate(b, d, &b.var(i), b.p())).collect()
}

/// Verifies the claimed witness, or solves for one of degree at most
/// `bound`, widening up to twice the bound. Returns the verified `h`.
pub fn check_p_closed(b: &LocalHypersurface, d: &Derivation, claimed: Option<&Series>, bound: u32) -> Result<Series> {
    let dp = p_power(b, d)?;
    let out = dp.iter().map(|s| s.order()).min().unwrap_or(b.n());
    if let Some(h) = claimed {
        for (i, (lhs, img)) in dp.iter().zip(&d.images).enumerate() {
            let residual = b.reduce(&lhs.sub(&h.mul(img)).truncate(out));
            if !residual.is_zero() {
                return Err(Error::WitnessRejected { var: b.ring().vars()[i].clone(), residual: residual.display() });
            }
        }
        return Ok(h.truncate(out));
    }
    let mut deg = bound;
    loop {
        if let Some(h) = common_cofactor(&dp, &d.images, b.ideal(), deg, out) {
            return Ok(h);
        }
        if deg >= 2 * bound || deg as i32 >= out {
            return Err(Error::NotPClosed { bound: deg });
        }
        deg = (deg + 4).min(2 * bound);
    }
}

/// Fixed-locus trichotomy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum FixCase {
    /// Some image is a unit; `var` names the first such variable.
    FixedPointFree { var: String },
    /// `m^e` is the least power of the maximal ideal inside the fixed ideal.
    MPrimary { e: u32 },
    /// The fixed ideal has a one-dimensional component; its Hilbert
    /// function is constant and positive from `degree` on.
    HasDivisorialPart { degree: u32 },
}

impl FixCase {
    pub fn tag(&self) -> &'static str {
        match self {
            FixCase::FixedPointFree { .. } => "FixedPointFree",
            FixCase::MPrimary { .. } => "MPrimary",
            FixCase::HasDivisorialPart { .. } => "HasDivisorialPart",
        }
    }

    /// Unramified in codimension one.
    pub fn is_unramified(&self) -> bool {
        !matches!(self, FixCase::HasDivisorialPart { .. })
    }
}

/// Classifies the ideal `(F, D(v) : v)`.
///
/// A divisorial part is declared when the Hilbert function of the quotient
/// is positive and constant over at least the last quarter of the
/// certified degrees (minimum four).
pub fn fix_case(b: &LocalHypersurface, d: &Derivation) -> Result<FixCase> {
    let mut gens = vec![b.f().clone()];
    gens.extend(d.images.iter().cloned());
    for (i, img) in d.images.iter().enumerate() {
        if img.constant_term() != 0 {
            return Ok(FixCase::FixedPointFree { var: b.ring().vars()[i].clone() });
        }
    }
    let ideal = TruncatedIdeal::new(b.ring(), &gens, b.n());
    if let Some(e) = ideal.max_ideal_power() {
        return Ok(FixCase::MPrimary { e });
    }
    let cum = ideal.cumulative_hilbert();
    let h: Vec<usize> = (0..cum.len()).map(|d| if d == 0 { cum[0] } else { cum[d] - cum[d - 1] }).collect();
    let last = *h.last().unwrap_or(&0);
    let window = (h.len() / 4).max(4);
    if last > 0 && h.len() > window {
        let start = (0..h.len()).rev().take_while(|&d| h[d] == last).last().unwrap_or(h.len() - 1);
        if h.len() - start >= window {
            return Ok(FixCase::HasDivisorialPart { degree: start as u32 });
        }
    }
    Err(Error::Inconclusive { order: ideal.order().max(0) as u32 })
}

/// Checks `(aD)^p = a^p D^p + (aD)^{p-1}(a) D` on every variable.
pub fn hochschild_identity(b: &LocalHypersurface, d: &Derivation, a: &Series) -> Result<bool> {
    let p = b.p();
    let ad = d.scale(a);
    let lhs = p_power(b, &ad)?;
    let dp = p_power(b, d)?;
    let ap = a.pow(p as u32);
    let tail = iterate(b, &ad, a, p - 1)?;
    for i in 0..b.nvars() {
        let rhs = ap.mul(&dp[i]).add(&tail.mul(&d.images[i]));
        let diff = lhs[i].sub(&rhs);
        if !b.reduce(&diff).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn hyp(p: u64, vars: &[&str], f: &str, n: i32) -> LocalHypersurface {
        LocalHypersurface::parse(FieldSpec::prime(p).unwrap(), vars, f, n).unwrap()
    }

    #[test]
    fn leibniz() {
        let b = hyp(3, &["x", "y", "z"], "0", 12);
        let d = Derivation::parse(&b, &["x", "-y", "0"]).unwrap();
        let g = b.parse_element("x^2*y").unwrap();
        assert_eq!(apply(&d, &g).unwrap().terms(), g.terms());
        assert!(apply(&d, &b.parse_element("z^5").unwrap()).unwrap().is_zero());
        let b6 = hyp(5, &["x", "y", "z"], "x*y - z^2", 12);
        let d6 = Derivation::parse(&b6, &["x", "-y", "0"]).unwrap();
        assert!(apply(&d6, b6.f()).unwrap().is_zero());
    }

    #[test]
    fn derivation_checks() {
        let b = hyp(2, &["x", "y", "z"], "x^2+y*z+x*y^2", 20);
        let d = Derivation::parse(&b, &["z+2*y*x", "y^2", "0"]).unwrap();
        assert!(check_derivation(&b, &d).unwrap().pass);
        let e8 = hyp(3, &["x", "y", "z"], "z^2+x^3+y^5", 20);
        assert!(check_derivation(&e8, &Derivation::parse(&e8, &["0", "z", "-y^4"]).unwrap()).unwrap().pass);
        assert!(check_derivation(&e8, &Derivation::parse(&e8, &["1", "0", "0"]).unwrap()).unwrap().pass);
        let bad = check_derivation(&e8, &Derivation::parse(&e8, &["0", "1", "0"]).unwrap()).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.residual.display(), "-y^4");
    }

    #[test]
    fn p_closure() {
        let b = hyp(2, &["x", "y"], "0", 24);
        let d = Derivation::parse(&b, &["x*y^2", "x^2+y^3"]).unwrap();
        let dp = p_power(&b, &d).unwrap();
        assert_eq!(dp[0], b.parse_element("x*y^4").unwrap().truncate(dp[0].order()));
        let h = b.parse_element("y^2").unwrap();
        assert!(check_p_closed(&b, &d, Some(&h), WITNESS_DEGREE).is_ok());
        let solved = check_p_closed(&b, &d, None, WITNESS_DEGREE).unwrap();
        assert_eq!(solved.terms(), h.terms());
        let wrong = b.parse_element("x").unwrap();
        assert!(matches!(check_p_closed(&b, &d, Some(&wrong), WITNESS_DEGREE), Err(Error::WitnessRejected { .. })));
        let dz = hyp(3, &["x", "y", "z"], "z^2+x^3+y^5", 24);
        let add = Derivation::parse(&dz, &["0", "0", "1"]).unwrap();
        assert!(p_power(&dz, &add).unwrap().iter().all(|s| s.is_zero()));
    }

    #[test]
    fn fix_cases() {
        let b = hyp(5, &["x", "y", "z"], "z^2+x^3+y^5", 16);
        assert!(matches!(fix_case(&b, &Derivation::parse(&b, &["0", "0", "1"]).unwrap()), Ok(FixCase::FixedPointFree { .. })));
        let s = hyp(5, &["x", "y"], "0", 16);
        assert_eq!(fix_case(&s, &Derivation::parse(&s, &["x", "-y"]).unwrap()).unwrap(), FixCase::MPrimary { e: 1 });
        let a = hyp(3, &["x", "y", "z"], "-x^2+y*z", 20);
        let d = Derivation::parse(&a, &["x", "2*y", "0"]).unwrap();
        assert!(check_derivation(&a, &d).unwrap().pass);
        assert!(matches!(fix_case(&a, &d), Ok(FixCase::HasDivisorialPart { .. })));
    }

    #[test]
    fn hochschild_examples() {
        let b = hyp(3, &["x", "y", "z"], "-x^3+z^2+y^3*(y^2+z*x)", 16);
        let d = Derivation::parse(&b, &["y", "z", "0"]).unwrap();
        assert!(check_derivation(&b, &d).unwrap().pass);
        assert!(hochschild_identity(&b, &d, &b.parse_element("y").unwrap()).unwrap());
        assert!(hochschild_identity(&b, &d, &b.parse_element("2").unwrap()).unwrap());
        let s = hyp(2, &["x", "y"], "0", 16);
        let d2 = Derivation::parse(&s, &["x*y+y^3", "x^2"]).unwrap();
        assert!(hochschild_identity(&s, &d2, &s.parse_element("x+y^2").unwrap()).unwrap());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::field::FieldSpec;
    use crate::series::Monomial;
    use proptest::prelude::*;

    const ORDER: i32 = 10;

    type Raw = Vec<(Vec<u32>, u64)>;

    fn raw_series() -> impl Strategy<Value = Raw> {
        prop::collection::vec((prop::collection::vec(0..=3u32, 3), any::<u64>()), 1..6)
    }

    fn build(b: &LocalHypersurface, raw: &Raw) -> Series {
        let p = b.p();
        Series::from_terms(b.ring(), raw.iter().map(|(e, c)| (Monomial::new(e), c % p)), ORDER)
    }

    fn derivation(b: &LocalHypersurface, raws: &[Raw; 3]) -> Derivation {
        Derivation::new(b, raws.iter().map(|r| build(b, r)).collect()).unwrap()
    }

    fn plane(p: u64) -> LocalHypersurface {
        LocalHypersurface::parse(FieldSpec::prime(p).unwrap(), &["x", "y", "z"], "0", ORDER).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn leibniz_and_pth_powers(p in prop::sample::select(vec![2u64, 3, 5]),
                                  images in [raw_series(), raw_series(), raw_series()],
                                  f in raw_series(), g in raw_series()) {
            let b = plane(p);
            let d = derivation(&b, &images);
            let (f, g) = (build(&b, &f), build(&b, &g));
            let lhs = apply(&d, &f.mul(&g)).unwrap();
            let rhs = f.mul(&apply(&d, &g).unwrap()).add(&g.mul(&apply(&d, &f).unwrap()));
            prop_assert_eq!(lhs.truncate(ORDER - 1), rhs.truncate(ORDER - 1));
            prop_assert!(apply(&d, &g.pow(p as u32)).unwrap().is_zero());
        }

        /// `D = grad F x u` kills `F`, so it is a derivation of `k[[x,y,z]]/(F)`.
        #[test]
        fn cross_product_kills_f(p in prop::sample::select(vec![2u64, 3, 5]),
                                 f in raw_series(), u in [raw_series(), raw_series(), raw_series()]) {
            let f = build(&plane(p), &f);
            let f = f.sub(&Series::constant(f.ring(), f.constant_term(), ORDER));
            let b = LocalHypersurface::new(f, ORDER).unwrap();
            let u: Vec<Series> = u.iter().map(|r| build(&b, r)).collect();
            let n = b.gradient();
            let cross = (0..3).map(|i| {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                n[j].mul(&u[k]).sub(&n[k].mul(&u[j]))
            });
            let d = Derivation::new(&b, cross.collect()).unwrap();
            prop_assert!(b.contains(&apply(&d, b.f()).unwrap()));
            prop_assert!(check_derivation(&b, &d).unwrap().pass);
        }
    }
}
