//! Machine-readable classification tables: parameterized row templates,
//! instantiation, and the verification harness.
//!
//! Templates are series literals in which `{expr}` segments are integer
//! expressions in the row parameters, the characteristic `p` and, for group
//! actions, `zeta` / `zeta_inv`. They are evaluated before parsing.

mod data;
mod statics;
mod verify;

use std::collections::BTreeMap;

use evalexpr::{ContextWithMutableVariables, HashMapContext, Value};
use serde::{Deserialize, Serialize};

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldSpec};
use crate::hypersurface::LocalHypersurface;
use crate::parse::parse_series;
use crate::quotient::FrobeniusPresentation;
use crate::rdp::{Family, RdpType};
use crate::series::{Ring, Series};

pub use data::builtin_rows;
pub use statics::{pic_group, universal_cover, PicEntry, Pi1Entry, StaticData, UniversalCover};
pub use verify::{verify_row, verify_table, CheckResult, SweepOptions, VerificationReport};

/// Which characteristics a row applies to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum CharConstraint {
    Any,
    Fixed { p: u64 },
    /// `p ≡ 1 (mod l)` for the row's `l`.
    OneModL,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRange {
    pub name: String,
    pub min: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

impl ParamRange {
    pub fn admits(&self, v: i64) -> bool {
        v >= self.min
            && self.max.is_none_or(|m| v <= m)
            && match self.parity {
                None => true,
                Some(Parity::Even) => v % 2 == 0,
                Some(Parity::Odd) => v % 2 != 0,
            }
    }
}

/// RDP type whose index and doubled coindex are integer templates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeTemplate {
    /// `A`, `D`, `E` or `Smooth`.
    pub family: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub index: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_r: Option<String>,
}

impl TypeTemplate {
    pub fn smooth() -> Self {
        TypeTemplate { family: "Smooth".into(), index: String::new(), two_r: None }
    }

    pub fn new(family: &str, index: &str, two_r: Option<&str>) -> Self {
        TypeTemplate { family: family.into(), index: index.into(), two_r: two_r.map(Into::into) }
    }

    pub fn instantiate(&self, b: &Binding) -> Result<RdpType> {
        let family = match self.family.as_str() {
            "Smooth" => return Ok(RdpType::Smooth),
            "A" => Family::A,
            "D" => Family::D,
            "E" => Family::E,
            other => return Err(Error::UnknownType(other.to_string())),
        };
        let n = b.eval(&self.index)?;
        let two_r = self.two_r.as_deref().map(|t| b.eval(t)).transpose()?;
        if n < 0 || two_r.is_some_and(|t| t < 0) {
            return Err(Error::OutOfRange(format!("type {} with negative index", self.family)));
        }
        Ok(RdpType::new(family, n as u32, two_r.map(|t| t as u32)).normalized(b.p))
    }
}

/// How the generators of the quotient are obtained when verifying a row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Named generator templates claimed by the table.
    Listed { generators: Vec<(String, String)> },
    /// `w, z, y^p` from the two-relation presentation.
    Frobenius,
    /// Minimal invariant generators found by search.
    Search,
}

/// Expected shape of the fixed locus of the derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixExpectation {
    FixedPointFree,
    MPrimary,
    Divisorial,
}

impl FixExpectation {
    pub fn tag(self) -> &'static str {
        match self {
            FixExpectation::FixedPointFree => "FixedPointFree",
            FixExpectation::MPrimary => "MPrimary",
            FixExpectation::Divisorial => "HasDivisorialPart",
        }
    }
}

/// One row of a classification table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub table: u8,
    pub row: u8,
    pub chars: CharConstraint,
    #[serde(default)]
    pub params: Vec<ParamRange>,
    pub vars: Vec<String>,
    /// Defining equation; absent for a regular source or a two-relation row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
    /// `x^p = P(y^p, z, w)` written over `(x, y, z, w)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<String>,
    /// `w = Q(z, y, x)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_def: Option<String>,
    pub derivation: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_derivation: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    pub source: TypeTemplate,
    pub target: TypeTemplate,
    /// Type of the quotient by the cyclic group, for covering rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<TypeTemplate>,
    pub generators: GeneratorSpec,
    /// Invariant listed by the table, for divisorial rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    /// Images of the variables under the group generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<String>>,
    /// Whether the order of `rho(g)` is asserted to equal `l`.
    #[serde(default)]
    pub rho_checked: bool,
    pub fix: FixExpectation,
    /// Printed entries hold up to terms of high degree.
    #[serde(default)]
    pub approx: bool,
    /// Working truncation template.
    pub trunc: String,
}

impl TableRow {
    pub fn id(&self) -> String {
        format!("{}.{}", self.table, self.row)
    }

    pub fn param(&self, name: &str) -> Option<&ParamRange> {
        self.params.iter().find(|r| r.name == name)
    }
}

/// Parameter values together with the characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub p: u64,
    #[serde(flatten)]
    pub values: BTreeMap<String, i64>,
}

impl Binding {
    pub fn new(p: u64, values: &[(&str, i64)]) -> Self {
        Binding { p, values: values.iter().map(|&(k, v)| (k.to_string(), v)).collect() }
    }

    fn context(&self) -> Result<HashMapContext> {
        let mut ctx = HashMapContext::new();
        let mut set = |k: &str, v: i64| {
            ctx.set_value(k.to_string(), Value::Int(v)).map_err(|e| Error::Precondition(e.to_string()))
        };
        set("p", self.p as i64)?;
        for (k, &v) in &self.values {
            set(k, v)?;
        }
        Ok(ctx)
    }

    /// Evaluates an integer expression in the bound names.
    pub fn eval(&self, expr: &str) -> Result<i64> {
        let ctx = self.context()?;
        evalexpr::eval_int_with_context(expr, &ctx).map_err(|e| Error::Precondition(format!("template `{expr}`: {e}")))
    }

    /// Replaces every `{expr}` by its integer value.
    pub fn expand(&self, template: &str) -> Result<String> {
        let mut out = String::with_capacity(template.len());
        let mut rest = template;
        while let Some(start) = rest.find('{') {
            out.push_str(&rest[..start]);
            let end = rest[start..].find('}').ok_or_else(|| Error::Precondition(format!("unclosed brace in `{template}`")))?;
            let v = self.eval(&rest[start + 1..start + end])?;
            if v < 0 {
                out.push_str(&format!("({v})"));
            } else {
                out.push_str(&v.to_string());
            }
            rest = &rest[start + end + 1..];
        }
        out.push_str(rest);
        Ok(out)
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.values.get(name).copied()
    }
}

impl std::fmt::Display for Binding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p={}", self.p)?;
        for (k, v) in &self.values {
            write!(f, ", {k}={v}")?;
        }
        Ok(())
    }
}

/// Least prime `p ≡ 1 (mod l)`.
pub fn least_prime_one_mod(l: u64) -> u64 {
    (1..).map(|k| k * l + 1).find(|&p| is_prime(p)).expect("Dirichlet")
}

/// Smallest element of `F_p` of multiplicative order exactly `l`.
pub fn root_of_unity(k: &FieldSpec, l: u64) -> Option<u64> {
    (1..k.p()).find(|&a| k.mult_order(a) == Some(l))
}

/// A row instantiated at a binding.
#[derive(Clone, Debug)]
pub struct Instance {
    pub row: TableRow,
    pub binding: Binding,
    pub b: LocalHypersurface,
    pub d: Derivation,
    pub second: Option<Derivation>,
    /// Derivation as printed, when it differs from `d` (two-relation rows).
    pub printed: Option<Derivation>,
    pub h: Option<Series>,
    pub source: RdpType,
    pub target: RdpType,
    pub base: Option<RdpType>,
    pub generators: Option<Vec<(String, Series)>>,
    pub frobenius: Option<FrobeniusPresentation>,
    pub w: Option<Series>,
    pub l: Option<u64>,
    pub g: Option<Vec<Series>>,
}

impl Instance {
    pub fn n(&self) -> i32 {
        self.b.n()
    }
}

fn check_binding(row: &TableRow, binding: &Binding) -> Result<()> {
    for range in &row.params {
        let v = binding
            .get(&range.name)
            .ok_or_else(|| Error::OutOfRange(format!("row {} needs parameter {}", row.id(), range.name)))?;
        if !range.admits(v) {
            return Err(Error::OutOfRange(format!("{}={v} outside the range of row {}", range.name, row.id())));
        }
    }
    let p = binding.p;
    if !is_prime(p) {
        return Err(Error::CharMismatch(format!("{p} is not prime")));
    }
    match row.chars {
        CharConstraint::Any => Ok(()),
        CharConstraint::Fixed { p: q } if q == p => Ok(()),
        CharConstraint::Fixed { p: q } => Err(Error::CharMismatch(format!("row {} needs p={q}, got {p}", row.id()))),
        CharConstraint::OneModL => {
            let l = binding.eval(row.l.as_deref().unwrap_or("l"))?;
            if l >= 1 && (p - 1).is_multiple_of(l as u64) {
                Ok(())
            } else {
                Err(Error::CharMismatch(format!("row {} needs p ≡ 1 mod {l}, got {p}", row.id())))
            }
        }
    }
}

/// Source and quotient types of a row at a binding, without building rings.
pub fn row_types(row: &TableRow, binding: &Binding) -> Result<(RdpType, RdpType)> {
    check_binding(row, binding)?;
    Ok((row.source.instantiate(binding)?, row.target.instantiate(binding)?))
}

/// Default truncation of a row at a binding.
pub fn row_truncation(row: &TableRow, binding: &Binding) -> Result<i32> {
    Ok(binding.eval(&row.trunc)? as i32)
}

/// Builds the concrete ring, derivation(s) and expected types of a row.
/// `trunc` overrides the row's own truncation.
pub fn instantiate_row(row: &TableRow, binding: &Binding, trunc: Option<i32>) -> Result<Instance> {
    check_binding(row, binding)?;
    let mut binding = binding.clone();
    let k = FieldSpec::prime(binding.p)?;
    let l = row.l.as_deref().map(|t| binding.eval(t)).transpose()?.map(|v| v as u64);
    if let Some(l) = l {
        binding.values.entry("l".into()).or_insert(l as i64);
        if let Some(z) = root_of_unity(&k, l) {
            binding.values.insert("zeta".into(), z as i64);
            binding.values.insert("zeta_inv".into(), k.inv(z).expect("unit") as i64);
        }
    }
    let n = match trunc {
        Some(t) => t,
        None => row_truncation(row, &binding)?,
    };
    let ring = Ring::new(k.clone(), &row.vars)?;
    let parse = |t: &str| -> Result<Series> { parse_series(&binding.expand(t)?, &ring, n) };
    let (b, frobenius) = match (&row.equation, &row.power, &row.w_def) {
        (Some(f), _, _) => (LocalHypersurface::new(parse(f)?, n)?, None),
        (None, Some(power), Some(w_def)) => {
            let ring4 = Ring::new(k.clone(), &["x", "y", "z", "w"])?;
            let pres = FrobeniusPresentation::new(parse_series(&binding.expand(power)?, &ring4, n)?, parse(w_def)?)?;
            (pres.source(n)?, Some(pres))
        }
        _ => (LocalHypersurface::smooth(k.clone(), &row.vars, n)?, None),
    };
    let parse_all = |ts: &[String]| -> Result<Vec<Series>> { ts.iter().map(|t| parse(t)).collect() };
    let printed = Derivation::new(&b, parse_all(&row.derivation)?)?;
    let (d, printed) = match &frobenius {
        Some(pres) => (pres.derivation(&b)?, Some(printed)),
        None => (printed, None),
    };
    let second = row.second_derivation.as_deref().map(|t| parse_all(t).and_then(|v| Derivation::new(&b, v))).transpose()?;
    let h = row.h.as_deref().map(parse).transpose()?;
    let generators = match (&row.generators, &frobenius) {
        (GeneratorSpec::Listed { generators }, _) => {
            Some(generators.iter().map(|(name, t)| Ok((name.clone(), parse(t)?))).collect::<Result<Vec<_>>>()?)
        }
        (GeneratorSpec::Frobenius, Some(pres)) => Some(pres.generators(&b)),
        (GeneratorSpec::Frobenius, None) => {
            return Err(Error::Precondition(format!("row {} lists no two-relation presentation", row.id())))
        }
        (GeneratorSpec::Search, _) => None,
    };
    Ok(Instance {
        source: row.source.instantiate(&binding)?,
        target: row.target.instantiate(&binding)?,
        base: row.base.as_ref().map(|t| t.instantiate(&binding)).transpose()?,
        w: row.w.as_deref().map(parse).transpose()?,
        g: row.g.as_deref().map(parse_all).transpose()?,
        row: row.clone(),
        binding,
        b,
        d,
        second,
        printed,
        h,
        generators,
        frobenius,
        l,
    })
}

/// All bindings of a row within the sweep options, in a fixed order.
pub fn bindings(row: &TableRow, opts: &SweepOptions) -> Vec<Binding> {
    let primes: Vec<(u64, Option<i64>)> = match row.chars {
        CharConstraint::Fixed { p } => vec![(p, None)],
        CharConstraint::Any => opts.primes.iter().map(|&p| (p, None)).collect(),
        CharConstraint::OneModL => match row.param("l") {
            Some(_) => opts.ls.iter().map(|&l| (least_prime_one_mod(l as u64), Some(l))).collect(),
            None => {
                let l = Binding::new(2, &[]).eval(row.l.as_deref().unwrap_or("2")).unwrap_or(2);
                vec![(least_prime_one_mod(l as u64), None)]
            }
        },
    };
    let max = opts.max_param.unwrap_or_else(|| default_max_param(row.table));
    let mut out = Vec::new();
    for (p, l) in primes {
        let mut partial: Vec<BTreeMap<String, i64>> = vec![BTreeMap::new()];
        for range in &row.params {
            let values: Vec<i64> = match (range.name.as_str(), l) {
                ("l", Some(l)) => vec![l],
                _ => (range.min..=range.max.map_or(max, |m| m.min(max))).filter(|&v| range.admits(v)).collect(),
            };
            partial = partial
                .into_iter()
                .flat_map(|m| {
                    values.iter().map(move |&v| {
                        let mut m = m.clone();
                        m.insert(range.name.clone(), v);
                        m
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(|values| Binding { p, values }));
    }
    out
}

fn default_max_param(table: u8) -> i64 {
    match table {
        1 | 2 => 5,
        3 => 4,
        _ => 3,
    }
}

/// Rows of the built-in tables as JSON.
pub fn export_rows(rows: &[TableRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

pub fn import_rows(json: &str) -> Result<Vec<TableRow>> {
    serde_json::from_str(json).map_err(|e| Error::Parse { input: "table rows".into(), pos: e.column(), msg: e.to_string() })
}

/// Built-in rows of one table.
pub fn table(id: u8) -> Vec<TableRow> {
    builtin_rows().into_iter().filter(|r| r.table == id).collect()
}

/// Looks a row up by its `table.row` id.
pub fn row_by_id(id: &str) -> Result<TableRow> {
    builtin_rows()
        .into_iter()
        .find(|r| r.id() == id)
        .ok_or_else(|| Error::OutOfRange(format!("no table row {id}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_expand() {
        let b = Binding::new(3, &[("m", 2)]);
        assert_eq!(b.expand("x*y + z^{p*m}").unwrap(), "x*y + z^6");
        assert_eq!(b.expand("{m}*x*y^{m-1}").unwrap(), "2*x*y^1");
        assert_eq!(b.expand("{1-p}").unwrap(), "(-2)");
        assert_eq!(b.eval("2*max(0, 2-m)").unwrap(), 0);
        assert!(b.expand("z^{k}").is_err());
        assert!(b.expand("z^{p").is_err());
    }

    #[test]
    fn instantiation_checks_ranges_and_characteristic() {
        let row = row_by_id("1.2").unwrap();
        assert!(matches!(instantiate_row(&row, &Binding::new(3, &[("m", 1)]), None), Err(Error::OutOfRange(_))));
        assert!(matches!(instantiate_row(&row, &Binding::new(3, &[]), None), Err(Error::OutOfRange(_))));
        assert!(matches!(instantiate_row(&row, &Binding::new(4, &[("m", 2)]), None), Err(Error::CharMismatch(_))));
        let e8 = row_by_id("1.3").unwrap();
        assert!(matches!(instantiate_row(&e8, &Binding::new(3, &[]), None), Err(Error::CharMismatch(_))));
        let t5 = row_by_id("5.1").unwrap();
        assert!(matches!(instantiate_row(&t5, &Binding::new(5, &[("l", 3)]), None), Err(Error::CharMismatch(_))));
        let inst = instantiate_row(&t5, &Binding::new(7, &[("l", 3)]), None).unwrap();
        assert_eq!(inst.source, RdpType::a(2));
        assert_eq!(inst.w.unwrap().display(), "x*y^2");
        let inst = instantiate_row(&row_by_id("3.6").unwrap(), &Binding::new(2, &[("m", 1), ("n", 3)]), None).unwrap();
        assert_eq!(inst.source.to_string(), "D6^2");
        assert_eq!(inst.target.to_string(), "D5^3/2");
    }

    #[test]
    fn roots_of_unity_and_primes() {
        assert_eq!(least_prime_one_mod(4), 5);
        assert_eq!(least_prime_one_mod(3), 7);
        let k = FieldSpec::prime(7).unwrap();
        assert_eq!(root_of_unity(&k, 3), Some(2));
        assert_eq!(root_of_unity(&k, 4), None);
    }

    #[test]
    fn rows_round_trip_through_json() {
        let rows = builtin_rows();
        let json = export_rows(&rows);
        assert_eq!(import_rows(&json).unwrap(), rows);
        assert!(import_rows(r#"[{"table": 1, "bogus": true}]"#).is_err());
        let ids: Vec<String> = rows.iter().map(|r| r.id()).collect();
        let mut sorted = ids.clone();
        sorted.dedup();
        assert_eq!(ids.len(), sorted.len());
        assert_eq!(table(3).len(), 13);
    }

    #[test]
    fn sweep_bindings_are_deterministic() {
        let opts = SweepOptions::default();
        let row = row_by_id("3.5").unwrap();
        let b = bindings(&row, &opts);
        assert_eq!(b.len(), 16);
        assert_eq!(b[1], Binding::new(2, &[("m", 1), ("mp", 2)]));
        let row = row_by_id("6.3").unwrap();
        assert_eq!(bindings(&row, &opts), vec![Binding::new(3, &[("n", 2)])]);
    }

    #[test]
    fn a_row_verifies() {
        let r = verify_row(&row_by_id("2.8").unwrap(), &Binding::new(2, &[("m", 2)]), None).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.source_type, Some(RdpType::a(1)));
        assert!(r.check("p-closed").unwrap().pass);
        assert_eq!(r.quotient.unwrap().ty.to_string(), "D5^1/2");
    }
}
