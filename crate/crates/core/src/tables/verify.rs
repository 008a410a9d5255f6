//! Row verification: every claim of a row is recomputed and recorded as a
//! named check.

use rayon::prelude::*;
use serde::Serialize;

use super::{bindings, instantiate_row, table, Binding, Instance, TableRow};
use crate::classify::classify;
use crate::coverings::verify_equivariance;
use crate::derivation::{apply, check_derivation, check_p_closed, fix_case, Derivation, FixCase, WITNESS_DEGREE};
use crate::error::{Error, Result};
use crate::hypersurface::LocalHypersurface;
use crate::quotient::{
    default_search_degree, quotient_presentation, sandwich_check, GeneratorChoice, PresentationReport,
};
use crate::rdp::RdpType;
use crate::series::Series;

use super::statics::pic_exponent;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Recorded for information; does not affect the verdict.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub row: String,
    pub binding: Binding,
    /// Truncation order of the computation.
    pub order: i32,
    /// The row's printed entries are only claimed up to high-order terms.
    pub approx: bool,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fix_case: Option<FixCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_type: Option<RdpType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<PresentationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn failed(row: &TableRow, binding: &Binding, err: &Error) -> Self {
        VerificationReport {
            row: row.id(),
            binding: binding.clone(),
            order: 0,
            approx: row.approx,
            pass: false,
            checks: Vec::new(),
            witness: None,
            fix_case: None,
            source_type: None,
            quotient: None,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Characteristics tried for rows valid in every characteristic.
    pub primes: Vec<u64>,
    /// Values of `l` tried for rows with a free `l`.
    pub ls: Vec<i64>,
    /// Largest parameter value; defaults depend on the table.
    pub max_param: Option<i64>,
    pub trunc: Option<i32>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { primes: vec![2, 3, 5, 7], ls: vec![2, 3, 4], max_param: None, trunc: None, jobs: None }
    }
}

struct Checks(Vec<CheckResult>);

impl Checks {
    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(CheckResult { name: name.into(), pass, informational: false, detail: detail.into() });
    }

    fn info(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(CheckResult { name: name.into(), pass, informational: true, detail: detail.into() });
    }

    fn result<T>(&mut self, name: &str, r: Result<T>, ok: impl FnOnce(&T) -> (bool, String)) -> Option<T> {
        match r {
            Ok(v) => {
                let (pass, detail) = ok(&v);
                self.push(name, pass, detail);
                Some(v)
            }
            Err(e) => {
                self.push(name, false, e.to_string());
                None
            }
        }
    }
}

fn expect_type(got: RdpType, want: RdpType) -> (bool, String) {
    (got == want, format!("computed {got}, expected {want}"))
}

/// `D^p = hD`, with the printed witness first and a solved one as fallback
/// for rows whose printed data are approximate.
fn p_closure(checks: &mut Checks, b: &LocalHypersurface, d: &Derivation, claimed: Option<&Series>, approx: bool) -> Option<Series> {
    match check_p_closed(b, d, claimed, WITNESS_DEGREE) {
        Ok(h) => {
            let how = if claimed.is_some() { "printed witness verified" } else { "witness solved" };
            checks.push("p-closed", true, format!("{how}: h = {}", h.display()));
            Some(h)
        }
        Err(Error::WitnessRejected { var, residual }) if approx => match check_p_closed(b, d, None, WITNESS_DEGREE) {
            Ok(h) => {
                checks.push(
                    "p-closed",
                    true,
                    format!("printed witness rejected on {var} (residual {residual}); solver found h = {}", h.display()),
                );
                Some(h)
            }
            Err(e) => {
                checks.push("p-closed", false, e.to_string());
                None
            }
        },
        Err(e) => {
            checks.push("p-closed", false, e.to_string());
            None
        }
    }
}

fn derivation_checks(checks: &mut Checks, b: &LocalHypersurface, d: &Derivation, suffix: &str, want: &str) -> Option<FixCase> {
    checks.result(&format!("derivation{suffix}"), check_derivation(b, d), |c| {
        (c.pass, if c.pass { "D(F) ∈ (F)".to_string() } else { format!("D(F) residual {}", c.residual.display()) })
    });
    checks.result(&format!("fix-case{suffix}"), fix_case(b, d), |f| (f.tag() == want, format!("{}, expected {want}", f.tag())))
}

fn verify_instance(inst: &Instance) -> VerificationReport {
    let row = &inst.row;
    let b = &inst.b;
    let p = b.p();
    let mut checks = Checks(Vec::new());
    let fix = derivation_checks(&mut checks, b, &inst.d, "", row.fix.tag());
    let h = p_closure(&mut checks, b, &inst.d, inst.h.as_ref(), row.approx);
    if let Some(h) = &h {
        checks.result("witness-killed", apply(&inst.d, h).map(|dh| b.reduce(&dh)), |r| {
            (r.is_zero(), if r.is_zero() { "D(h) = 0".into() } else { format!("D(h) = {}", r.display()) })
        });
    }
    let source_type = checks.result("source-type", classify(b), |c| expect_type(c.ty, inst.source)).map(|c| c.ty);

    let choice = match &inst.generators {
        Some(g) => GeneratorChoice::Given(g.clone()),
        None => GeneratorChoice::Search { d_bound: default_search_degree(p) },
    };
    let quotient = checks.result("quotient-type", quotient_presentation(b, &inst.d, &choice), |q| expect_type(q.ty, inst.target));

    if let Some(pres) = &inst.frobenius {
        if let Some(q) = &quotient {
            checks.push("delta", q.delta <= 1, format!("delta = {}", q.delta));
            let gens: Vec<Series> = q.generators.iter().map(|g| g.1.clone()).collect();
            let s = sandwich_check(b, &gens, b.n().min(2 * p as i32 + 8));
            checks.push("sandwich", s.pass(), format!("{s:?}"));
        }
        let eliminated = pres
            .eliminated_relation(b.n())
            .and_then(|r| LocalHypersurface::new(r, b.n()))
            .and_then(|t| classify(&t));
        checks.result("eliminated-relation", eliminated, |c| expect_type(c.ty, inst.target));
        if let Some(printed) = &inst.printed {
            let ok = check_derivation(b, printed).map(|c| c.pass).unwrap_or(false);
            checks.info("printed-derivation", ok, if ok { "printed D is a derivation" } else { "printed D holds only approximately" });
        }
    }

    if let Some(second) = &inst.second {
        derivation_checks(&mut checks, b, second, "-2", row.fix.tag());
        p_closure(&mut checks, b, second, None, false);
    }
    if row.table == 5 {
        let l = inst.l.unwrap_or(0);
        let pics = (pic_exponent(inst.source), pic_exponent(inst.target));
        checks.push(
            "l-divides-pic",
            l > 0 && pics.0.is_multiple_of(l) && pics.1.is_multiple_of(l) && (p - 1).is_multiple_of(l),
            format!("l = {l}, Pic exponents {} and {}, p - 1 = {}", pics.0, pics.1, p - 1),
        );
    }
    if let (Some(g), Some(l)) = (&inst.g, inst.l) {
        if let Some(r) = checks.result("equivariance", verify_equivariance(b, &inst.d, g, l), |r| {
            (r.action_ok(), format!("g(F) ∈ (F): {}, ord g = {:?}, beta = {:?}", r.preserves_equation, r.group_order, r.beta))
        }) {
            let detail = format!("rho(g) = {:?} of order {:?}, expected {l}", r.rho, r.rho_order);
            if row.rho_checked {
                checks.push("rho-order", r.rho_ok(), detail);
            } else {
                checks.info("rho-order", r.rho_ok(), detail);
            }
        }
    }

    let pass = checks.0.iter().all(|c| c.pass || c.informational);
    VerificationReport {
        row: row.id(),
        binding: inst.binding.clone(),
        order: b.n(),
        approx: row.approx,
        pass,
        checks: checks.0,
        witness: h.map(|h| h.display()),
        fix_case: fix,
        source_type,
        quotient: quotient.map(|q| q.report()),
        error: None,
    }
}

/// Verifies one row at one binding. Invalid bindings are errors; failed
/// claims are reported in the returned checks.
pub fn verify_row(row: &TableRow, binding: &Binding, trunc: Option<i32>) -> Result<VerificationReport> {
    let inst = instantiate_row(row, binding, trunc)?;
    Ok(verify_instance(&inst))
}

/// Verifies every row of a table over the sweep range, in row then binding order.
pub fn verify_table(id: u8, opts: &SweepOptions) -> Result<Vec<VerificationReport>> {
    let rows = table(id);
    if rows.is_empty() {
        return Err(Error::OutOfRange(format!("no table {id}")));
    }
    let jobs: Vec<(TableRow, Binding)> =
        rows.iter().flat_map(|r| bindings(r, opts).into_iter().map(move |b| (r.clone(), b))).collect();
    let run = || -> Vec<VerificationReport> {
        jobs.par_iter()
            .map(|(row, b)| verify_row(row, b, opts.trunc).unwrap_or_else(|e| VerificationReport::failed(row, b, &e)))
            .collect()
    };
    match opts.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Precondition(e.to_string()))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}
