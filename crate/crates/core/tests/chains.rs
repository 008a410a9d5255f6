use insep_core::coverings::{plan_chain, verify_chain, Mode};
use insep_core::rdp::catalog;
use rayon::prelude::*;

#[test]
fn every_catalog_type_has_a_verified_chain() {
    let jobs: Vec<(u64, _, Mode)> = [2u64, 3, 5, 7]
        .iter()
        .flat_map(|&p| catalog(p, 12, 12).into_iter().map(move |t| (p, t)))
        .flat_map(|(p, t)| [Mode::UnramifiedFirst, Mode::EtaleLast].map(|m| (p, t, m)))
        .collect();
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(p, ty, mode)| {
            let out = plan_chain(p, ty, mode).unwrap();
            let plan = out.plan()?;
            let r = verify_chain(plan, None);
            (!r.pass).then(|| {
                let bad: Vec<String> = r.steps.iter().filter(|s| !s.pass).map(|s| s.detail.clone()).collect();
                format!("p={p} {ty} {mode:?}: {} {bad:?}", r.endpoint_detail)
            })
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}
