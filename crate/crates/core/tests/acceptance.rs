//! Acceptance harness: one PASS/FAIL line per criterion. Exits nonzero if
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superquant::cones::{self, Lattice};
use superquant::kahler::{self, Membership, NewtonParams, Potential};
use superquant::linalg::{q, qi, qvec, unit, Q, QVec, VecDisplay};
use superquant::possys::{self, Context};
use superquant::quantize;
use superquant::realform::RealForm;
use superquant::rootdata::{build_root_system, AlgebraSpec};
use superquant::unitarity::{self, JakobsenParamsOsp};

const RHO_BUDGET: Duration = Duration::from_secs(1);
const OSP_BUDGET: Duration = Duration::from_secs(1);
const IMAGE_BUDGET: Duration = Duration::from_secs(10);
const IMAGE_SAMPLES: usize = 200;
const IMAGE_RESIDUAL: f64 = 1e-8;
const GELFAND_BOX: u32 = 8;
const GELFAND_BUDGET: Duration = Duration::from_secs(60);
const QR_SAMPLES: usize = 50;
const QR_BOX: u32 = 8;
const QR_DECIDABLE: f64 = 0.95;
const QR_BUDGET: Duration = Duration::from_secs(60);
const SPECTRUM_MAX_BOX: u32 = 8;
const FD_POINTS: usize = 100;
const FD_STEP: f64 = 1e-5;
const FD_REL: f64 = 1e-6;
const HESS_SYM: f64 = 1e-10;
const ROUND_TRIP: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let dt = t.elapsed();
    o.detail = format!("{}; {:.3}s (budget {}s)", o.detail, dt.as_secs_f64(), budget.as_secs());
    o.pass &= dt < budget;
    o
}

fn ospb(m: usize, n: usize) -> Context {
    unitarity::admissible_context(m, n).unwrap()
}

fn su(p: usize, m: usize) -> Context {
    common::su(p, m)
}

/// Λ + ρ written out directly from the displayed shift pattern.
fn displayed_pattern(p: &JakobsenParamsOsp) -> QVec {
    let (m, n) = (p.m as i64, p.n as i64);
    let w = p.weight();
    let mut out = Vec::new();
    for i in 1..=m {
        out.push(&w[(i - 1) as usize] + qi(m - i) + q(1, 2));
    }
    for j in 1..=n {
        out.push(&w[(m + j - 1) as usize] + qi(n - m - j) + q(1, 2));
    }
    out
}

fn criterion_1() -> Outcome {
    timed(RHO_BUDGET, || {
        let ctx = ospb(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut checked = 0;
        for _ in 0..50 {
            let mut mu = [rng.gen_range(0..6i64), rng.gen_range(0..6i64)];
            mu.sort_unstable_by(|a, b| b.cmp(a));
            let p = JakobsenParamsOsp {
                m: 2,
                n: 2,
                mu: qvec(&mu),
                lam: q(rng.gen_range(-40..40), 2),
                a: qvec(&[rng.gen_range(0..5)]),
            };
            let got = match unitarity::lambda_plus_rho_osp(&p, &ctx.ps) {
                Ok(v) => v,
                Err(e) => return outcome(false, format!("Λ+ρ failed: {e}")),
            };
            let want = displayed_pattern(&p);
            if got != want {
                return outcome(false, format!("{} != {}", VecDisplay(&got), VecDisplay(&want)));
            }
            checked += 1;
        }
        outcome(true, format!("B(2,2) rho {} matches the displayed pattern on {checked} parameter draws", VecDisplay(&ctx.ps.rho)))
    })
}

fn criterion_2() -> Outcome {
    timed(OSP_BUDGET, || {
        for (m, n) in [(1, 1), (2, 2), (3, 2)] {
            let ctx = ospb(m, n);
            let d = m + n;
            let beta: QVec = unit(d, 0).iter().zip(unit(d, m)).map(|(a, b)| a - b).collect();
            let Some(root) = ctx.rs.find(&beta) else {
                return outcome(false, format!("e1 - d1 is not a root of B({m},{n})"));
            };
            let form = match unitarity::expand_pairing(m, n, root) {
                Ok(f) => f,
                Err(e) => return outcome(false, e.to_string()),
            };
            // (Λ+ρ)(h) < 0 ⟺ λ + μ₁ + n − 1 < 0 ⟺ λ < 1 − μ₁ − n.
            let mut coeffs = vec![Q::zero(); d];
            coeffs[0] = qi(1);
            coeffs[m] = qi(1);
            if form.coeffs != coeffs || form.constant != qi(n as i64 - 1) {
                return outcome(false, format!("B({m},{n}): got {} + {}", VecDisplay(&form.coeffs), form.constant));
            }
            if form != unitarity::closed_form_eps1_delta1(m, n) {
                return outcome(false, format!("B({m},{n}): closed form disagrees"));
            }
        }
        outcome(true, "expanded e1 - d1 condition is λ < 1 − μ₁ − n for (1,1), (2,2), (3,2)")
    })
}

fn criterion_3() -> Outcome {
    timed(IMAGE_BUDGET, || {
        let ctx = su(1, 1);
        let cell = cones::cell_for_mask(&ctx, 0);
        let model = quantize::model_potential(&cell, None).unwrap();
        let params = NewtonParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inside = cones::enumerate_integral(&cell.region, 40);
        let mut wrong = Vec::new();
        let mut worst: f64 = 0.0;
        for _ in 0..IMAGE_SAMPLES {
            let lam = inside.choose(&mut rng).unwrap();
            let y = cell.to_basis(lam).unwrap();
            let s = kahler::in_moment_image(&model.potential, &y, &params).unwrap();
            worst = worst.max(s.residual);
            if !s.member() || s.residual > IMAGE_RESIDUAL {
                wrong.push(format!("inside {} -> {:?}", VecDisplay(lam), s.status));
            }
        }
        let mut outside = 0;
        while outside < IMAGE_SAMPLES {
            let lam = qvec(&[rng.gen_range(-40..=40), rng.gen_range(-40..=40), 0]);
            if cones::in_closed_cone(&model.rays, &lam) {
                continue;
            }
            outside += 1;
            let y = cell.to_basis(&lam).unwrap();
            let s = kahler::in_moment_image(&model.potential, &y, &params).unwrap();
            if s.status != Membership::NotAttained {
                wrong.push(format!("outside {} -> {:?}", VecDisplay(&lam), s.status));
            }
        }
        outcome(
            wrong.is_empty(),
            format!(
                "su(1,1|1): {IMAGE_SAMPLES} inside, {IMAGE_SAMPLES} outside, {} misclassified, max residual {:.1e}{}",
                wrong.len(),
                worst,
                wrong.first().map_or(String::new(), |w| format!(" (first: {w})"))
            ),
        )
    })
}

fn criterion_4() -> Outcome {
    timed(GELFAND_BUDGET, || {
        let ctx = su(2, 2);
        let model = match quantize::gelfand_model(&ctx, GELFAND_BOX, &NewtonParams::default()) {
            Ok(m) => m,
            Err(e) => return outcome(false, e.to_string()),
        };
        let check = quantize::verify_exactly_once(&ctx, &model);
        let exact = cones::enumerate_integral(&cones::parameter_set_c(&ctx), GELFAND_BOX).len();
        outcome(
            check.ok && check.misses.is_empty() && check.doubles.is_empty() && check.checked == exact && exact > 0,
            format!(
                "su(2,1|1) N={GELFAND_BOX}: {} weights of C, {} misses, {} doubles, {} skipped cells",
                check.checked,
                check.misses.len(),
                check.doubles.len(),
                model.skipped.len()
            ),
        )
    })
}

fn criterion_5() -> Outcome {
    timed(QR_BUDGET, || {
        let ctx = su(2, 2);
        let params = NewtonParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let all = cones::box_points(&ctx.rs, QR_BOX, &Lattice::default());
        let mut parts = Vec::new();
        let mut pass = true;
        for cell in cones::cells(&ctx) {
            let model = quantize::model_potential(&cell, None).unwrap();
            let report = quantize::spectrum(&ctx, &cell, &model.potential, QR_BOX, &params).unwrap();
            let own = cones::enumerate_integral(&cell.region, QR_BOX);
            let (mut decided, mut unequal) = (0, 0);
            for k in 0..QR_SAMPLES {
                let pool = if k % 2 == 0 && !own.is_empty() { &own } else { &all };
                let lam = pool.choose(&mut rng).unwrap();
                let c = quantize::check_qr_with(&ctx, &cell, &model.potential, lam, &report, &params).unwrap();
                match c.equal() {
                    Some(true) => decided += 1,
                    Some(false) => {
                        decided += 1;
                        unequal += 1;
                    }
                    None => {}
                }
            }
            let rate = decided as f64 / QR_SAMPLES as f64;
            pass &= unequal == 0 && rate >= QR_DECIDABLE;
            parts.push(format!("{} decided {decided}/{QR_SAMPLES}, unequal {unequal}", cell.label()));
        }
        outcome(pass, format!("su(2,1|1) N={QR_BOX}: {}", parts.join("; ")))
    })
}

fn criterion_6() -> Outcome {
    let params = NewtonParams::default();
    let mut compared = 0;
    for ctx in [su(1, 1), su(2, 2)] {
        for cell in cones::cells(&ctx) {
            let model = quantize::model_potential(&cell, None).unwrap();
            for n in 0..=SPECTRUM_MAX_BOX {
                let report = quantize::spectrum(&ctx, &cell, &model.potential, n, &params).unwrap();
                let got: Vec<&QVec> = report.entries.iter().map(|e| &e.lam).collect();
                let scan = cones::enumerate_integral(&cell.region, n);
                if got != scan.iter().collect::<Vec<_>>() || !report.undecided.is_empty() {
                    return outcome(false, format!("{} {} N={n}: {} entries vs {} scanned", ctx.rf, cell.label(), got.len(), scan.len()));
                }
                compared += 1;
            }
        }
    }
    outcome(true, format!("spectrum equals the lattice scan in {compared} (algebra, cell, N) cases"))
}

fn criterion_7() -> Outcome {
    let ctx = su(2, 2);
    let cell = cones::cell_for_mask(&ctx, 0);
    let model = quantize::model_potential(&cell, None).unwrap().potential;
    let mixed = Potential::new(
        3,
        vec![(1.0, qvec(&[1, 0, 0])), (0.5, qvec(&[-1, 1, 0])), (2.0, qvec(&[0, -1, -1]))],
        Some(vec![qvec(&[1, 0, 0]), qvec(&[0, 2, 1]), qvec(&[0, 1, 1])]),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut fd_worst, mut sym_worst, mut trip_worst) = (0.0f64, 0.0f64, 0.0f64);
    for p in [&model, &mixed] {
        for _ in 0..FD_POINTS {
            let x: Vec<f64> = (0..p.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let g = p.grad(&x).unwrap();
            for i in 0..p.dim() {
                let (mut a, mut b) = (x.clone(), x.clone());
                a[i] += FD_STEP;
                b[i] -= FD_STEP;
                let fd = (p.value(&a).unwrap() - p.value(&b).unwrap()) / (2.0 * FD_STEP);
                fd_worst = fd_worst.max((fd - g[i]).abs() / g[i].abs().max(1.0));
            }
            let h = p.hess(&x).unwrap();
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    sym_worst = sym_worst.max((h[i][j] - h[j][i]).abs());
                }
            }
            let target = kahler::moment(p, &x).unwrap();
            let lam: QVec = target.iter().map(|t| BigRational::from_float(*t).unwrap()).collect();
            let s = kahler::in_moment_image(p, &lam, &NewtonParams { tol: 1e-11, ..Default::default() }).unwrap();
            let err = if s.member() {
                s.point.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            trip_worst = trip_worst.max(err);
        }
    }
    outcome(
        fd_worst <= FD_REL && sym_worst <= HESS_SYM && trip_worst <= ROUND_TRIP,
        format!(
            "{} points: gradient rel err {fd_worst:.1e}, hessian asymmetry {sym_worst:.1e}, round trip {trip_worst:.1e}",
            2 * FD_POINTS
        ),
    )
}

fn criterion_8() -> Outcome {
    let specs = [
        AlgebraSpec::a(1, 0),
        AlgebraSpec::a(0, 1),
        AlgebraSpec::a(2, 0),
        AlgebraSpec::a(0, 2),
        AlgebraSpec::b(0, 1),
        AlgebraSpec::b(1, 1),
        AlgebraSpec::b(0, 2),
        AlgebraSpec::b(2, 1),
        AlgebraSpec::b(1, 2),
        AlgebraSpec::b(0, 3),
        AlgebraSpec::c(2),
        AlgebraSpec::c(3),
        AlgebraSpec::d(2, 1),
    ];
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let failed: Vec<String> = specs
        .iter()
        .filter(|s| std::panic::catch_unwind(|| common::oracle::check((*s).clone())).is_err())
        .map(|s| s.to_string())
        .collect();
    std::panic::set_hook(hook);
    outcome(
        failed.is_empty(),
        format!("{} root systems against matrix realizations{}", specs.len(), if failed.is_empty() { String::new() } else { format!(", failing: {}", failed.join(" ")) }),
    )
}

fn criterion_9() -> Outcome {
    let b11 = {
        let spec = AlgebraSpec::b(1, 1);
        let rs = build_root_system(&spec).unwrap();
        let rf = RealForm::parse(&spec, "so(3)+sp(1,R)").unwrap();
        Context::new(rs, rf, &qvec(&[1, 2])).unwrap()
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for ctx in [su(1, 1), su(2, 2), b11] {
        let f = possys::admissible_feasible(&ctx);
        let witnessed = f.witness.as_ref().is_some_and(|w| cones::hc_cone(&ctx).contains(w));
        pass &= f.feasible && witnessed;
        let lit = possys::admissible_literal(&ctx);
        parts.push(format!(
            "{}: witness {} [literal: k-stable {}, q-abelian {}, {} bracket witnesses]",
            ctx.rf,
            f.witness.as_ref().map_or("none".into(), |w| VecDisplay(w).to_string()),
            lit.k_stable,
            lit.q_abelian,
            lit.witnesses.len()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("rho shift reproduction", criterion_1),
        ("osp inequality", criterion_2),
        ("moment image equals cell", criterion_3),
        ("gelfand exactly-once", criterion_4),
        ("[Q,R]=0", criterion_5),
        ("spectrum oracle equivalence", criterion_6),
        ("numerical soundness", criterion_7),
        ("root-system oracle", criterion_8),
        ("cone feasibility", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!("criterion {}: {} - {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
