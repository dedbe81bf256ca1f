//! Spectrum prediction, Gelfand-model assembly, symplectic reduction and
//! the quantization-commutes-with-reduction multiplicity check.
//!
//! Highest weight modules appear only as labels `λ + ρ`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::Signed;

use crate::cones::{self, extreme_rays, Cell, ConeError, Lattice};
use crate::kahler::{self, KahlerError, Membership, NewtonParams, Potential, SampleSpec};
use crate::linalg::{add, fmt_f64, vec_to_f64, Q, QVec, VecDisplay};
use crate::possys::Context;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantizeError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Kahler(#[from] KahlerError),
    #[error("{0} is not in the image of the moment map")]
    NotInImage(String),
    #[error("solver could not decide membership of {0}")]
    Undecided(String),
    #[error("{0} not in the integral lattice")]
    NotIntegral(String),
    #[error("{lam} lies outside the box of radius {n}")]
    OutsideBox { lam: String, n: u32 },
    #[error("potential has dimension {got}, cell has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A cell together with its model potential `Σ_j c_j exp(λ_j)` over the
/// extreme rays `λ_j`, written in the cell's subspace basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CellModel {
    pub cell: Cell,
    pub rays: Vec<QVec>,
    pub potential: Potential,
}

pub fn model_potential(cell: &Cell, coeffs: Option<&[f64]>) -> Result<CellModel, QuantizeError> {
    let rays = extreme_rays(cell)?;
    let weights: Vec<QVec> =
        rays.iter().map(|r| cell.to_basis(r).expect("extreme rays lie in the cell subspace")).collect();
    let terms = weights
        .into_iter()
        .enumerate()
        .map(|(i, w)| (coeffs.and_then(|c| c.get(i).copied()).unwrap_or(1.0), w))
        .collect();
    let potential = Potential::new(cell.dim(), terms, None)?;
    Ok(CellModel { cell: cell.clone(), rays, potential })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub lam: QVec,
    /// `λ + ρ`, the label of the highest weight module.
    pub label: QVec,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub cell: Cell,
    pub potential: Potential,
    pub box_n: u32,
    pub lattice: Lattice,
    pub entries: Vec<SpectrumEntry>,
    /// Weights whose membership the solver could not decide.
    pub undecided: Vec<QVec>,
    pub warnings: Vec<String>,
}

impl SpectrumReport {
    pub fn multiplicity(&self, lam: &[Q]) -> u32 {
        self.entries.iter().filter(|e| e.lam == lam).map(|e| e.multiplicity).sum()
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# spectrum\t{}\tbox={}", self.cell.label(), self.box_n);
        for w in &self.warnings {
            let _ = writeln!(s, "# warning\t{w}");
        }
        let _ = writeln!(s, "lambda\tlambda+rho\tmultiplicity");
        for e in &self.entries {
            let _ = writeln!(s, "{}\t{}\t{}", VecDisplay(&e.lam), VecDisplay(&e.label), e.multiplicity);
        }
        for u in &self.undecided {
            let _ = writeln!(s, "{}\t-\tundecided", VecDisplay(u));
        }
        s
    }
}

fn check_dim(cell: &Cell, p: &Potential) -> Result<(), QuantizeError> {
    if cell.dim() == p.dim() {
        Ok(())
    } else {
        Err(QuantizeError::DimensionMismatch { expected: cell.dim(), got: p.dim() })
    }
}

/// Moment image points `Φ(x)` on a grid, mapped to ambient weights, that
/// fall outside the Harish-Chandra cone.
fn image_outside_hc(ctx: &Context, cell: &Cell, p: &Potential) -> usize {
    let hc = cones::hc_cone(ctx);
    SampleSpec { radius: 2.0, per_axis: 5 }
        .points(p.dim())
        .iter()
        .filter_map(|x| kahler::moment(p, x).ok())
        .filter(|m| {
            let y: Option<QVec> = m.iter().map(|v| Q::from_float(*v)).collect();
            y.is_some_and(|y| !hc.contains(&cell.from_basis(&y)))
        })
        .count()
}

/// Integral weights of the cell in the box that lie in `Im(Φ)`, each with
/// multiplicity one.
pub fn spectrum(
    ctx: &Context,
    cell: &Cell,
    p: &Potential,
    n: u32,
    params: &NewtonParams,
) -> Result<SpectrumReport, QuantizeError> {
    spectrum_in(ctx, cell, p, n, &Lattice::default(), params)
}

pub fn spectrum_in(
    ctx: &Context,
    cell: &Cell,
    p: &Potential,
    n: u32,
    lattice: &Lattice,
    params: &NewtonParams,
) -> Result<SpectrumReport, QuantizeError> {
    check_dim(cell, p)?;
    let mut warnings = Vec::new();
    let outside = image_outside_hc(ctx, cell, p);
    if outside > 0 {
        warnings.push(format!("moment image leaves the Harish-Chandra cone at {outside} sample points"));
    }
    let points = cones::enumerate_integral_in(&cell.region, n, lattice);
    let verdicts = crate::par::map(points, |lam| {
        let status = match cell.to_basis(&lam) {
            None => Ok(Membership::NotAttained),
            Some(y) => kahler::in_moment_image(p, &y, params).map(|s| s.status),
        };
        (lam, status)
    });
    let mut entries = Vec::new();
    let mut undecided = Vec::new();
    for (lam, status) in verdicts {
        match status? {
            Membership::Member => {
                let label = add(&lam, &ctx.ps.rho);
                entries.push(SpectrumEntry { lam, label, multiplicity: 1 });
            }
            Membership::NotAttained => {}
            Membership::Undecided => undecided.push(lam),
        }
    }
    if !undecided.is_empty() {
        warnings.push(format!("{} weights undecided", undecided.len()));
    }
    Ok(SpectrumReport { cell: cell.clone(), potential: p.clone(), box_n: n, lattice: *lattice, entries, undecided, warnings })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GelfandModel {
    pub box_n: u32,
    pub lattice: Lattice,
    pub reports: Vec<SpectrumReport>,
    /// Cells left out, with the reason.
    pub skipped: Vec<(Cell, String)>,
}

/// One model-potential spectrum per simplicial cell.
pub fn gelfand_model(ctx: &Context, n: u32, params: &NewtonParams) -> Result<GelfandModel, QuantizeError> {
    gelfand_model_in(ctx, n, &Lattice::default(), params)
}

pub fn gelfand_model_in(
    ctx: &Context,
    n: u32,
    lattice: &Lattice,
    params: &NewtonParams,
) -> Result<GelfandModel, QuantizeError> {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for cell in cones::cells(ctx) {
        match model_potential(&cell, None) {
            Ok(m) => reports.push(spectrum_in(ctx, &cell, &m.potential, n, lattice, params)?),
            Err(QuantizeError::Cone(e @ ConeError::NotSimplicial { .. })) => skipped.push((cell, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(GelfandModel { box_n: n, lattice: *lattice, reports, skipped })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactlyOnce {
    pub ok: bool,
    /// Number of lattice points of C in the box.
    pub checked: usize,
    pub misses: Vec<QVec>,
    pub doubles: Vec<QVec>,
    /// Points of skipped cells, not held against the model.
    pub excluded: Vec<QVec>,
}

/// Every integral `λ ∈ C` in the box must occur in exactly one report.
pub fn verify_exactly_once(ctx: &Context, model: &GelfandModel) -> ExactlyOnce {
    let c = cones::parameter_set_c(ctx);
    let points = cones::enumerate_integral_in(&c, model.box_n, &model.lattice);
    let sets: Vec<BTreeSet<&QVec>> =
        model.reports.iter().map(|r| r.entries.iter().map(|e| &e.lam).collect()).collect();
    let mut out = ExactlyOnce { ok: true, checked: points.len(), misses: vec![], doubles: vec![], excluded: vec![] };
    for lam in points {
        match sets.iter().filter(|s| s.contains(&lam)).count() {
            0 if model.skipped.iter().any(|(cell, _)| cell.contains(&lam)) => out.excluded.push(lam),
            0 => out.misses.push(lam),
            1 => {}
            _ => out.doubles.push(lam),
        }
    }
    out.ok = out.misses.is_empty() && out.doubles.is_empty();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub lam_hat: QVec,
    /// Γ, the fibre of `Φ` over `λ̂` in A_σ (subspace coordinates).
    pub gamma: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    /// `λ̂` itself, standing for the reduced form `−i dλ̂`.
    pub reduced_form_label: QVec,
    /// `λ̂ + ρ`.
    pub reduced_quantization_label: QVec,
}

impl ReductionReport {
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "lambda_hat\t{}", VecDisplay(&self.lam_hat));
        let _ = writeln!(s, "reduced_form\t{}", VecDisplay(&self.reduced_form_label));
        let _ = writeln!(s, "reduced_quantization\t{}", VecDisplay(&self.reduced_quantization_label));
        let _ = writeln!(s, "gamma_size\t{}", self.gamma.len());
        for (g, r) in self.gamma.iter().zip(&self.residuals) {
            let pt: Vec<String> = g.iter().map(|x| fmt_f64(*x)).collect();
            let _ = writeln!(s, "gamma\t({})\tresidual={}", pt.join(", "), fmt_f64(*r));
        }
        s
    }
}

/// Solves `½F′(a) = λ̂` from `start`.
pub fn reduce_from(
    ctx: &Context,
    cell: &Cell,
    p: &Potential,
    lam_hat: &[Q],
    start: &[f64],
    params: &NewtonParams,
) -> Result<ReductionReport, QuantizeError> {
    check_dim(cell, p)?;
    let shown = || VecDisplay(lam_hat).to_string();
    let y = cell.to_basis(lam_hat).ok_or_else(|| QuantizeError::NotInImage(shown()))?;
    let solve = kahler::in_moment_image_from(p, &y, start, params)?;
    match solve.status {
        Membership::Member => {
            let lam = ctx.rs.canonical(lam_hat);
            Ok(ReductionReport {
                reduced_quantization_label: add(&lam, &ctx.ps.rho),
                reduced_form_label: lam.clone(),
                lam_hat: lam,
                gamma: vec![solve.point],
                residuals: vec![solve.residual],
            })
        }
        Membership::NotAttained => Err(QuantizeError::NotInImage(shown())),
        Membership::Undecided => Err(QuantizeError::Undecided(shown())),
    }
}

pub fn reduce(
    ctx: &Context,
    cell: &Cell,
    p: &Potential,
    lam_hat: &[Q],
    params: &NewtonParams,
) -> Result<ReductionReport, QuantizeError> {
    reduce_from(ctx, cell, p, lam_hat, &vec![0.0; p.dim()], params)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrCheck {
    pub lam_hat: QVec,
    /// Dimension of the quantized reduction: 1 iff reduction succeeds and
    /// `λ̂ ∈ C`. `None` when undecided.
    pub lhs: Option<u8>,
    /// Multiplicity of `λ̂` in the spectrum. `None` when undecided.
    pub rhs: Option<u8>,
}

impl QrCheck {
    pub fn decided(&self) -> bool {
        self.lhs.is_some() && self.rhs.is_some()
    }

    pub fn equal(&self) -> Option<bool> {
        Some(self.lhs? == self.rhs?)
    }

    pub fn to_tsv(&self) -> String {
        let f = |x: Option<u8>| x.map_or("undecided".to_string(), |v| v.to_string());
        let eq = self.equal().map_or("undecided".to_string(), |b| b.to_string());
        format!("lambda_hat\tlhs\trhs\tequal\n{}\t{}\t{}\t{}\n", VecDisplay(&self.lam_hat), f(self.lhs), f(self.rhs), eq)
    }
}

fn validate_lam_hat(ctx: &Context, lam_hat: &[Q], n: u32, lattice: &Lattice) -> Result<QVec, QuantizeError> {
    if lam_hat.len() != ctx.rs.ambient_dim {
        return Err(QuantizeError::Cone(ConeError::DimensionMismatch {
            expected: ctx.rs.ambient_dim,
            got: lam_hat.len(),
        }));
    }
    let lam = ctx.rs.canonical(lam_hat);
    if !lattice.contains(&lam) {
        return Err(QuantizeError::NotIntegral(VecDisplay(lam_hat).to_string()));
    }
    let bound = Q::from_integer(n.into());
    if lam.iter().any(|x| x.abs() > bound) {
        return Err(QuantizeError::OutsideBox { lam: VecDisplay(lam_hat).to_string(), n });
    }
    Ok(lam)
}

/// `[Q, R] = 0` at `λ̂`, against a spectrum computed beforehand.
pub fn check_qr_with(
    ctx: &Context,
    cell: &Cell,
    p: &Potential,
    lam_hat: &[Q],
    report: &SpectrumReport,
    params: &NewtonParams,
) -> Result<QrCheck, QuantizeError> {
    let lam = validate_lam_hat(ctx, lam_hat, report.box_n, &report.lattice)?;
    let lhs = match reduce(ctx, cell, p, &lam, params) {
        Ok(_) => Some(u8::from(cones::parameter_set_c(ctx).contains(&lam))),
        Err(QuantizeError::NotInImage(_)) => Some(0),
        Err(QuantizeError::Undecided(_)) => None,
        Err(e) => return Err(e),
    };
    let rhs = if report.undecided.contains(&lam) {
        None
    } else {
        Some(u8::try_from(report.multiplicity(&lam)).unwrap_or(u8::MAX))
    };
    Ok(QrCheck { lam_hat: lam, lhs, rhs })
}

pub fn check_qr(
    ctx: &Context,
    cell: &Cell,
    p: &Potential,
    lam_hat: &[Q],
    n: u32,
    params: &NewtonParams,
) -> Result<QrCheck, QuantizeError> {
    validate_lam_hat(ctx, lam_hat, n, &Lattice::default())?;
    let report = spectrum(ctx, cell, p, n, params)?;
    check_qr_with(ctx, cell, p, lam_hat, &report, params)
}

/// `Φ(x)` as an ambient weight.
pub fn moment_weight(cell: &Cell, p: &Potential, x: &[f64]) -> Result<Vec<f64>, QuantizeError> {
    let m = kahler::moment(p, x)?;
    let mut out = vec![0.0; cell.region.dim()];
    for (b, c) in cell.subspace.iter().zip(&m) {
        for (o, bi) in out.iter_mut().zip(vec_to_f64(b)) {
            *o += c * bi;
        }
    }
    Ok(out)
}
