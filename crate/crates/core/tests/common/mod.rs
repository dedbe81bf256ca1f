#![allow(dead_code)]

use superquant::linalg::{qvec, QVec};
use superquant::possys::Context;
use superquant::realform::RealForm;
use superquant::rootdata::{build_root_system, AlgebraSpec};

/// `su(p, m+1-p | 1)` with a strictly decreasing functional.
pub fn su(p: usize, m: usize) -> Context {
    let spec = AlgebraSpec::a(m, 0);
    let rs = build_root_system(&spec).unwrap();
    let tag = format!("su({},{}|1)", p, m + 1 - p);
    let rf = RealForm::parse(&spec, &tag).unwrap();
    let f: Vec<i64> = (1..=(m as i64 + 2)).rev().collect();
    Context::new(rs, rf, &qvec(&f)).unwrap()
}

pub fn intvec(v: &[i64]) -> QVec {
    qvec(v)
}
pub mod oracle;
