//! Tab-separated report tables. Rationals print exactly, floats through
//! `fmt_f64`; row order follows the library's own ordering.

use std::fmt::Write;

use super::config::JobConfig;
use super::CliError;
use crate::cones::{self, Cell};
use crate::kahler::{Certificate, FormClassification};
use crate::linalg::{fmt_f64, fmt_q, VecDisplay};
use crate::possys::{self, Context};
use crate::quantize::{ExactlyOnce, GelfandModel};
use crate::rootdata::{Family, RootSystem};
use crate::unitarity::{self, JakobsenParamsOsp};

pub fn roots(rs: &RootSystem) -> String {
    let mut s = format!("# roots of {}\t{} roots\nroot\tcoords\tparity\tform\n", rs.spec, rs.roots.len());
    for r in &rs.roots {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}",
            rs.label_weight(&r.coords),
            VecDisplay(&r.coords),
            r.parity,
            fmt_q(&rs.form(&r.coords, &r.coords))
        );
    }
    s.push_str("# gram\n");
    for row in &rs.gram {
        let cells: Vec<String> = row.iter().map(fmt_q).collect();
        let _ = writeln!(s, "{}", cells.join("\t"));
    }
    s
}

fn root_table(s: &mut String, rs: &RootSystem, title: &str, roots: &[crate::rootdata::Root]) {
    let _ = writeln!(s, "# {title}\t{}", roots.len());
    for r in roots {
        let _ = writeln!(s, "{}\t{}\t{}", rs.label_weight(&r.coords), VecDisplay(&r.coords), r.parity);
    }
}

pub fn rho(ctx: &Context) -> String {
    let mut s = format!("# positive system of {}\tfunctional {}\n", ctx.rf, VecDisplay(&ctx.ps.functional));
    root_table(&mut s, &ctx.rs, "positive", &ctx.ps.positives);
    root_table(&mut s, &ctx.rs, "simple", &ctx.ps.simples);
    root_table(&mut s, &ctx.rs, "compact simple", &ctx.ps.pi_c);
    let _ = writeln!(s, "rho\t{}", VecDisplay(&ctx.ps.rho));
    s
}

pub fn cone(ctx: &Context) -> String {
    let mut s = format!("# cones of {}\n", ctx.rf);
    for (name, region) in [("C~", cones::hc_cone(ctx)), ("C", cones::parameter_set_c(ctx))] {
        let _ = writeln!(s, "# {name}\t{} inequalities", region.rows().len());
        for (c, row) in region.constraints.iter().zip(region.rows()) {
            let _ = writeln!(s, "{}\t{}\t{}", name, ctx.rs.label_weight(&c.root.coords), row);
        }
    }
    let feas = possys::admissible_feasible(ctx);
    let _ = writeln!(
        s,
        "feasible\t{}\twitness\t{}",
        feas.feasible,
        feas.witness.as_ref().map_or("-".to_string(), |w| VecDisplay(w).to_string())
    );
    let lit = possys::admissible_literal(ctx);
    let _ = writeln!(s, "literal\tk_stable\t{}\tq_abelian\t{}\twitnesses\t{}", lit.k_stable, lit.q_abelian, lit.witnesses.len());
    for w in &lit.witnesses {
        let _ = writeln!(
            s,
            "witness\t{:?}\t{}\t{}\t{}",
            w.kind,
            ctx.rs.label_weight(&w.first.coords),
            ctx.rs.label_weight(&w.second.coords),
            ctx.rs.label_weight(&w.sum)
        );
    }
    s
}

pub fn cells(ctx: &Context) -> String {
    let all = cones::cells(ctx);
    let mut s = format!("# cells of {}\t{}\ncell\tclosure\tdim\trays\n", ctx.rf, all.len());
    for cell in &all {
        let closure: Vec<String> = cell.closure_r.iter().map(|r| ctx.rs.label_weight(&r.coords)).collect();
        let rays = match cones::extreme_rays(cell) {
            Ok(rs) => rs.iter().map(|r| VecDisplay(r).to_string()).collect::<Vec<_>>().join(" "),
            Err(e) => format!("error: {e}"),
        };
        let _ = writeln!(s, "{}\t{{{}}}\t{}\t{}", cell.label(), closure.join(","), cell.dim(), rays);
    }
    s
}

pub fn classify(cell: &Cell, c: &FormClassification) -> String {
    let cert = match c.certificate {
        Certificate::Analytic => "analytic",
        Certificate::Sampled => "sampled",
    };
    let witness = c.witness.as_ref().map_or("-".to_string(), |w| {
        format!("({})", w.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(", "))
    });
    format!(
        "# classification on {}\nnondegenerate\t{}\nstrictly_convex\t{}\nimage_in_regular\t{}\npseudo_kahler\t{}\ncertificate\t{}\nsamples\t{}\nwitness\t{}\n",
        cell.label(),
        c.nondegenerate,
        c.strictly_convex,
        c.image_in_regular,
        c.pseudo_kahler,
        cert,
        c.samples,
        witness
    )
}

pub fn model(model: &GelfandModel, check: &ExactlyOnce) -> String {
    let mut s = format!("# gelfand model\tbox {}\tcells {}\n", model.box_n, model.reports.len());
    for r in &model.reports {
        let _ = writeln!(s, "cell\t{}\tentries\t{}\tundecided\t{}", r.cell.label(), r.entries.len(), r.undecided.len());
    }
    for (cell, why) in &model.skipped {
        let _ = writeln!(s, "skipped\t{}\t{}", cell.label(), why);
    }
    let join = |v: &[crate::linalg::QVec]| {
        if v.is_empty() {
            "-".to_string()
        } else {
            v.iter().map(|x| VecDisplay(x).to_string()).collect::<Vec<_>>().join(" ")
        }
    };
    let _ = writeln!(s, "exactly_once\t{}\tchecked\t{}", check.ok, check.checked);
    let _ = writeln!(s, "misses\t{}", join(&check.misses));
    let _ = writeln!(s, "doubles\t{}", join(&check.doubles));
    let _ = writeln!(s, "excluded\t{}", join(&check.excluded));
    for r in &model.reports {
        s.push_str(&r.to_tsv());
    }
    s
}

pub fn unitary(cfg: &JobConfig) -> Result<String, CliError> {
    let u = &cfg.unitary;
    let need = |what: &str| CliError::Config(format!("config: missing `{what}` in [unitary]"));
    match cfg.algebra.family {
        Family::B => {
            let p = JakobsenParamsOsp {
                m: cfg.algebra.m,
                n: cfg.algebra.n,
                mu: u.mu.clone().ok_or_else(|| need("mu"))?,
                lam: u.lambda.clone().ok_or_else(|| need("lambda"))?,
                a: u.a.clone().unwrap_or_default(),
            };
            let v = unitarity::osp_unitarizable(&p).map_err(|e| match e {
                unitarity::UnitarityError::InvalidParams(m) => CliError::Config(format!("config line {}: {m}", u.line)),
                other => CliError::Domain(other.to_string()),
            })?;
            let adm = unitarity::admissible_context(p.m, p.n).map_err(|e| CliError::Domain(e.to_string()))?;
            let shifted = unitarity::lambda_plus_rho_osp(&p, &adm.ps).map_err(|e| CliError::Domain(e.to_string()))?;
            let mut s = format!("# unitarity on B({},{})\nweight\t{}\nlambda_plus_rho\t{}\n", p.m, p.n, VecDisplay(&p.weight()), VecDisplay(&shifted));
            s.push_str("root\tpairing\tholds\n");
            for pv in &v.values {
                let _ = writeln!(s, "{}\t{}\t{}", pv.label, fmt_q(&pv.value), pv.value < num_traits::Zero::zero());
            }
            let _ = writeln!(s, "binding\t{}\t{}", v.binding.label, fmt_q(&v.binding.value));
            let _ = writeln!(s, "in_c\t{}\nadmissible_in_c\t{}", v.in_c, v.admissible_in_c);
            Ok(s)
        }
        fam @ (Family::G3 | Family::F4) => {
            let scalar = |v: &Option<crate::linalg::QVec>, what: &str| -> Result<crate::linalg::Q, CliError> {
                match v.as_deref() {
                    Some([x]) => Ok(x.clone()),
                    Some(_) => Err(CliError::Config(format!("config line {}: `{what}` must be a single number here", u.line))),
                    None => Err(need(what)),
                }
            };
            let a = scalar(&u.a, "a")?;
            let mu = scalar(&u.mu, "mu")?;
            let b = u.b.clone().ok_or_else(|| need("b"))?;
            let f = unitarity::exception_flags(fam, &a, &b, &mu).map_err(|e| match e {
                unitarity::UnitarityError::Precondition(m) => CliError::Config(format!("config line {}: {m}", u.line)),
                other => CliError::Domain(other.to_string()),
            })?;
            Ok(format!(
                "# exception thresholds for {fam}\ncondition\ttext\tthreshold\tholds\nc\t{}\t{}\t{}\nunitarizable\t{}\t{}\t{}\nagree\t{}\n",
                f.c_condition.text,
                fmt_q(&f.c_condition.threshold),
                f.c_condition.holds,
                f.unitarizable_condition.text,
                fmt_q(&f.unitarizable_condition.threshold),
                f.unitarizable_condition.holds,
                f.agree
            ))
        }
        other => Err(CliError::Config(format!("config: unitary supports B, F4 and G3, not {other}"))),
    }
}
