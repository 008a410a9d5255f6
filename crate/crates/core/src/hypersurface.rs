use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ideal::PrincipalIdeal;
use crate::parse::parse_series;
use crate::series::{Ring, Series};

/// `k[[vars]]/(F)` at a working truncation `N`. A zero `F` is a regular
/// local ring, used for smooth sources in two variables.
#[derive(Clone, Debug)]
pub struct LocalHypersurface {
    ideal: PrincipalIdeal,
    n: i32,
}

impl LocalHypersurface {
    pub fn new(f: Series, n: i32) -> Result<Self> {
        if f.constant_term() != 0 {
            return Err(Error::Precondition("defining equation must vanish at the origin".into()));
        }
        if !(1..=4).contains(&f.ring().nvars()) {
            return Err(Error::Precondition("between one and four variables are supported".into()));
        }
        let f = f.with_order(f.order().min(n));
        Ok(LocalHypersurface { ideal: PrincipalIdeal::new(&f), n })
    }

    /// Builds the ring from a field, variable names and an expression for `F`.
    pub fn parse<S: AsRef<str>>(field: Arc<FieldSpec>, vars: &[S], f: &str, n: i32) -> Result<Self> {
        let ring = Ring::new(field, vars)?;
        let f = parse_series(f, &ring, n)?;
        LocalHypersurface::new(f, n)
    }

    /// Regular local ring in the given variables.
    pub fn smooth<S: AsRef<str>>(field: Arc<FieldSpec>, vars: &[S], n: i32) -> Result<Self> {
        let ring = Ring::new(field, vars)?;
        LocalHypersurface::new(Series::zero(&ring, n), n)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.ideal.ring()
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.ring().field()
    }

    pub fn p(&self) -> u64 {
        self.ring().p()
    }

    pub fn f(&self) -> &Series {
        self.ideal.generator()
    }

    pub fn ideal(&self) -> &PrincipalIdeal {
        &self.ideal
    }

    /// Working truncation.
    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    /// Same ring at another truncation; polynomial equations are re-certified.
    pub fn with_n(&self, n: i32) -> Self {
        LocalHypersurface { ideal: PrincipalIdeal::new(&self.f().with_order(n)), n }
    }

    pub fn parse_element(&self, expr: &str) -> Result<Series> {
        parse_series(expr, self.ring(), self.n)
    }

    pub fn var(&self, i: usize) -> Series {
        Series::var(self.ring(), i, self.n)
    }

    pub fn reduce(&self, g: &Series) -> Series {
        self.ideal.normal_form(g, self.n)
    }

    /// `g ∈ (F) + m^{N+1}`.
    pub fn contains(&self, g: &Series) -> bool {
        self.ideal.contains(g, self.n)
    }

    /// Partial derivatives of `F`.
    pub fn gradient(&self) -> Vec<Series> {
        (0..self.nvars()).map(|i| self.f().derivative(i)).collect()
    }
}
