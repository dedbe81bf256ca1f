//! Rank-2 slice pictures: lattice points coloured by region, with the
//! moment image of the selected cell shaded on a finer grid.

use std::fmt::Write;

use crate::cones::{self, Cell};
use crate::kahler::{self, Membership, NewtonParams, Potential};
use crate::linalg::{add, q, qi, scale, unit, zeros, QVec, VecDisplay};
use crate::possys::Context;
use crate::rootdata::RootSystem;

/// Fine-grid subdivisions per lattice step for moment-image shading.
pub const SHADE_STEPS: i64 = 4;
const PX: i64 = 40;

/// `e1, e2` through the origin when the weight space is 2-dimensional.
pub fn default_plane(rs: &RootSystem) -> Option<[QVec; 3]> {
    (rs.rank() == 2).then(|| [unit(rs.ambient_dim, 0), unit(rs.ambient_dim, 1), zeros(rs.ambient_dim)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Cell,
    HarishChandra,
    Outside,
}

impl PointClass {
    fn name(self) -> &'static str {
        match self {
            PointClass::Cell => "cell",
            PointClass::HarishChandra => "hc",
            PointClass::Outside => "outside",
        }
    }

    fn colour(self) -> &'static str {
        match self {
            PointClass::Cell => "#c0392b",
            PointClass::HarishChandra => "#2e86c1",
            PointClass::Outside => "#bbbbbb",
        }
    }
}

pub struct Atlas {
    pub svg: String,
    pub summary: String,
}

fn point(plane: &[QVec; 3], i: &crate::linalg::Q, j: &crate::linalg::Q) -> QVec {
    add(&plane[2], &add(&scale(i, &plane[0]), &scale(j, &plane[1])))
}

fn in_image(cell: &Cell, p: &Potential, lam: &[crate::linalg::Q], params: &NewtonParams) -> Membership {
    match cell.to_basis(lam) {
        None => Membership::NotAttained,
        Some(y) => kahler::in_moment_image(p, &y, params).map_or(Membership::Undecided, |s| s.status),
    }
}

/// Grid `origin + i v1 + j v2` for `|i|, |j| ≤ n`.
pub fn atlas(ctx: &Context, cell: &Cell, p: &Potential, plane: &[QVec; 3], n: u32, params: &NewtonParams) -> Atlas {
    let n = i64::from(n);
    let hc = cones::hc_cone(ctx);
    let coarse: Vec<(i64, i64)> = (-n..=n).flat_map(|j| (-n..=n).map(move |i| (i, j))).collect();
    let classes = crate::par::map(coarse, |(i, j)| {
        let lam = point(plane, &qi(i), &qi(j));
        let class = if cell.contains(&lam) {
            PointClass::Cell
        } else if hc.contains(&lam) {
            PointClass::HarishChandra
        } else {
            PointClass::Outside
        };
        let image = in_image(cell, p, &lam, params);
        (i, j, lam, class, image)
    });
    let m = n * SHADE_STEPS;
    let fine: Vec<(i64, i64)> = (-m..=m).flat_map(|j| (-m..=m).map(move |i| (i, j))).collect();
    let shaded: Vec<(i64, i64)> = crate::par::map(fine, |(i, j)| {
        let lam = point(plane, &q(i, SHADE_STEPS), &q(j, SHADE_STEPS));
        ((i, j), in_image(cell, p, &lam, params) == Membership::Member)
    })
    .into_iter()
    .filter_map(|(ij, hit)| hit.then_some(ij))
    .collect();

    let side = 2 * n * PX + 2 * PX;
    let to_px = |i: i64, j: i64, denom: i64| -> (i64, i64) {
        (PX + (i + n * denom) * PX / denom, PX + (n * denom - j) * PX / denom)
    };
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#);
    let _ = writeln!(svg, r#"<rect width="{side}" height="{side}" fill="white"/>"#);
    let cellpx = PX / SHADE_STEPS;
    let _ = writeln!(svg, r##"<g fill="#f5cba7" stroke="none">"##);
    for (i, j) in &shaded {
        let (x, y) = to_px(*i, *j, SHADE_STEPS);
        let _ = writeln!(svg, r#"<rect x="{}" y="{}" width="{cellpx}" height="{cellpx}"/>"#, x - cellpx / 2, y - cellpx / 2);
    }
    let _ = writeln!(svg, "</g>");
    let (ox, oy) = to_px(0, 0, 1);
    let _ = writeln!(svg, r##"<line x1="{PX}" y1="{oy}" x2="{}" y2="{oy}" stroke="#888"/>"##, side - PX);
    let _ = writeln!(svg, r##"<line x1="{ox}" y1="{PX}" x2="{ox}" y2="{}" stroke="#888"/>"##, side - PX);
    for (i, j, _, class, _) in &classes {
        let (x, y) = to_px(*i, *j, 1);
        let _ = writeln!(svg, r#"<circle cx="{x}" cy="{y}" r="4" fill="{}" class="{}"/>"#, class.colour(), class.name());
    }
    let _ = writeln!(svg, r#"<text x="{PX}" y="20" font-family="sans-serif" font-size="12">{} {} slice v1={} v2={} origin={}</text>"#,
        ctx.rf, cell.label(), VecDisplay(&plane[0]), VecDisplay(&plane[1]), VecDisplay(&plane[2]));
    svg.push_str("</svg>\n");

    let count = |c: PointClass| classes.iter().filter(|t| t.3 == c).count();
    let mut summary = format!(
        "# atlas of {} {}\tbox {}\tslice {};{};{}\n",
        ctx.rf,
        cell.label(),
        n,
        VecDisplay(&plane[0]),
        VecDisplay(&plane[1]),
        VecDisplay(&plane[2])
    );
    let _ = writeln!(
        summary,
        "counts\tcell\t{}\thc\t{}\toutside\t{}\tshaded\t{}",
        count(PointClass::Cell),
        count(PointClass::HarishChandra),
        count(PointClass::Outside),
        shaded.len()
    );
    summary.push_str("i\tj\tweight\tregion\tmoment\n");
    for (i, j, lam, class, image) in &classes {
        let image = match image {
            Membership::Member => "member",
            Membership::NotAttained => "not_attained",
            Membership::Undecided => "undecided",
        };
        let _ = writeln!(summary, "{i}\t{j}\t{}\t{}\t{image}", VecDisplay(lam), class.name());
    }
    Atlas { svg, summary }
}
