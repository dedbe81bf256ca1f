//! Exponential-affine potentials on 𝔞_σ, their derivatives, the
//! pseudo-Kähler criterion, moment maps and gradient-image membership.
//!
//! Coordinates on 𝔞_σ and 𝔞_σ* are taken in a fixed basis and its dual, so
//! a weight `y` acts on `x` as the dot product `y · x`.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use crate::linalg::{is_psd, is_symmetric, neg, rank, sub, to_f64, vec_to_f64, Q, QMatrix, QVec};
use crate::polyhedral::{fm_feasible, Halfspace, Strictness};

/// Largest exponent evaluated before reporting overflow.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KahlerError {
    #[error("coefficient {index} is {value}, must be finite and > 0")]
    NonPositiveCoefficient { index: usize, value: f64 },
    #[error("weight {index} has {got} coordinates, domain has {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("quadratic part is not symmetric")]
    QuadNotSymmetric,
    #[error("quadratic part is not positive semidefinite")]
    QuadNotPsd,
    #[error("exponent {exponent} exceeds {MAX_EXPONENT}")]
    Overflow { exponent: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub weight: QVec,
    weight_f: Vec<f64>,
}

/// `F(x) = Σ_j c_j exp(y_j · x) + ½ xᵀ Q x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    dim: usize,
    terms: Vec<Term>,
    quad: Option<QMatrix>,
    quad_f: Option<DMatrix<f64>>,
}

impl Potential {
    pub fn new(dim: usize, terms: Vec<(f64, QVec)>, quad: Option<QMatrix>) -> Result<Self, KahlerError> {
        let mut out = Vec::with_capacity(terms.len());
        for (index, (coeff, weight)) in terms.into_iter().enumerate() {
            if !(coeff.is_finite() && coeff > 0.0) {
                return Err(KahlerError::NonPositiveCoefficient { index, value: coeff });
            }
            if weight.len() != dim {
                return Err(KahlerError::DimensionMismatch { index, expected: dim, got: weight.len() });
            }
            let weight_f = vec_to_f64(&weight);
            out.push(Term { coeff, weight, weight_f });
        }
        let quad_f = match &quad {
            None => None,
            Some(m) => {
                if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                    return Err(KahlerError::DimensionMismatch { index: out.len(), expected: dim, got: m.len() });
                }
                if !is_symmetric(m) {
                    return Err(KahlerError::QuadNotSymmetric);
                }
                if !is_psd(m) {
                    return Err(KahlerError::QuadNotPsd);
                }
                Some(DMatrix::from_fn(dim, dim, |i, j| to_f64(&m[i][j])))
            }
        };
        Ok(Self { dim, terms: out, quad, quad_f })
    }

    /// Unit-coefficient model potential `Σ_j exp(y_j · x)`.
    pub fn model(weights: &[QVec]) -> Result<Self, KahlerError> {
        let dim = weights.first().map_or(0, Vec::len);
        Self::new(dim, weights.iter().map(|w| (1.0, w.clone())).collect(), None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn quad(&self) -> Option<&QMatrix> {
        self.quad.as_ref()
    }

    /// `k F` for `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self, KahlerError> {
        let terms = self.terms.iter().map(|t| (t.coeff * k, t.weight.clone())).collect();
        let kq = Q::from_float(k).ok_or(KahlerError::NonPositiveCoefficient { index: 0, value: k })?;
        let quad = self.quad.as_ref().map(|m| m.iter().map(|r| r.iter().map(|x| x * &kq).collect()).collect());
        Self::new(self.dim, terms, quad)
    }

    /// No quadratic part (or a zero one).
    pub fn is_pure_exponential(&self) -> bool {
        self.quad.as_ref().is_none_or(|m| m.iter().flatten().all(Zero::is_zero))
    }

    /// The weights are exactly a basis of 𝔞_σ*.
    pub fn weights_form_basis(&self) -> bool {
        let w: Vec<QVec> = self.terms.iter().map(|t| t.weight.clone()).collect();
        w.len() == self.dim && rank(&w, self.dim) == self.dim
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), KahlerError> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(KahlerError::DimensionMismatch { index: 0, expected: self.dim, got: x.len() })
        }
    }

    /// `c_j exp(y_j · x)` for every term.
    fn exponentials(&self, x: &[f64]) -> Result<Vec<f64>, KahlerError> {
        self.check_dim(x)?;
        self.terms
            .iter()
            .map(|t| {
                let e: f64 = t.weight_f.iter().zip(x).map(|(a, b)| a * b).sum();
                if e > MAX_EXPONENT {
                    Err(KahlerError::Overflow { exponent: e })
                } else {
                    Ok(t.coeff * e.exp())
                }
            })
            .collect()
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, KahlerError> {
        let mut v: f64 = self.exponentials(x)?.iter().sum();
        if let Some(q) = &self.quad_f {
            let xv = DVector::from_column_slice(x);
            v += 0.5 * xv.dot(&(q * &xv));
        }
        Ok(v)
    }

    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>, KahlerError> {
        let ex = self.exponentials(x)?;
        let mut g = vec![0.0; self.dim];
        for (t, e) in self.terms.iter().zip(&ex) {
            for (gi, yi) in g.iter_mut().zip(&t.weight_f) {
                *gi += e * yi;
            }
        }
        if let Some(q) = &self.quad_f {
            let qx = q * DVector::from_column_slice(x);
            for (gi, v) in g.iter_mut().zip(qx.iter()) {
                *gi += v;
            }
        }
        Ok(g)
    }

    pub fn hess(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, KahlerError> {
        Ok(to_rows(&self.hess_matrix(x)?))
    }

    fn hess_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>, KahlerError> {
        let ex = self.exponentials(x)?;
        let mut h = self.quad_f.clone().unwrap_or_else(|| DMatrix::zeros(self.dim, self.dim));
        for (t, e) in self.terms.iter().zip(&ex) {
            let y = DVector::from_column_slice(&t.weight_f);
            h += &y * y.transpose() * *e;
        }
        Ok(h)
    }
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Moment map of the right torus action, `Φ = ½ F′`.
pub fn moment(p: &Potential, x: &[f64]) -> Result<Vec<f64>, KahlerError> {
    Ok(p.grad(x)?.into_iter().map(|g| 0.5 * g).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Derived from the structure of the potential; holds at every point.
    Analytic,
    /// Checked on a finite grid only: sampled, not proven.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormClassification {
    pub nondegenerate: bool,
    pub strictly_convex: bool,
    pub image_in_regular: bool,
    pub pseudo_kahler: bool,
    pub certificate: Certificate,
    pub samples: usize,
    /// A sample point witnessing a failed property, if any.
    pub witness: Option<Vec<f64>>,
}

/// Grid `{-radius, …, radius}^dim` with `per_axis` points per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub radius: f64,
    pub per_axis: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { radius: 3.0, per_axis: 7 }
    }
}

impl SampleSpec {
    pub fn points(&self, dim: usize) -> Vec<Vec<f64>> {
        let k = self.per_axis.max(1);
        let axis: Vec<f64> = if k == 1 {
            vec![0.0]
        } else {
            (0..k).map(|i| -self.radius + 2.0 * self.radius * i as f64 / (k - 1) as f64).collect()
        };
        let mut out = vec![Vec::with_capacity(dim)];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |a| {
                        let mut q = p.clone();
                        q.push(*a);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// A wall functional is harmless when it has one strict sign on the open
/// cone spanned by `weights`.
fn wall_clears_cone(wall: &[Q], weights: &[QVec]) -> bool {
    let vals: Vec<Q> = weights.iter().map(|y| crate::linalg::dot(wall, y)).collect();
    let nonneg = vals.iter().all(|v| !v.is_negative());
    let nonpos = vals.iter().all(|v| !v.is_positive());
    let nonzero = vals.iter().any(|v| !v.is_zero());
    nonzero && (nonneg || nonpos)
}

/// Pseudo-Kähler test: nondegenerate Hessian and `Im(F′)` avoiding every
/// wall `{μ : wall · μ = 0}`.
pub fn classify_form(p: &Potential, walls: &[QVec], sampling: &SampleSpec) -> FormClassification {
    if p.is_pure_exponential() && p.weights_form_basis() {
        // Hessian is Σ e^{…} y yᵀ with y a basis, and F′ maps onto the open
        // cone over the y_j.
        let weights: Vec<QVec> = p.terms.iter().map(|t| t.weight.clone()).collect();
        let regular = walls.iter().all(|w| wall_clears_cone(w, &weights));
        return FormClassification {
            nondegenerate: true,
            strictly_convex: true,
            image_in_regular: regular,
            pseudo_kahler: regular,
            certificate: Certificate::Analytic,
            samples: 0,
            witness: None,
        };
    }
    let walls_f: Vec<Vec<f64>> = walls.iter().map(|w| vec_to_f64(w)).collect();
    let mut signs: Vec<(bool, bool)> = vec![(false, false); walls.len()];
    let (mut nondegenerate, mut convex, mut regular) = (true, true, true);
    let mut witness = None;
    let points = sampling.points(p.dim);
    let mut samples = 0;
    for x in &points {
        let (Ok(h), Ok(g)) = (p.hess_matrix(x), p.grad(x)) else { continue };
        samples += 1;
        let scale = h.amax().max(1.0);
        let pd = h.clone().cholesky().is_some_and(|c| c.l().diagonal().iter().all(|d| *d > 1e-9 * scale.sqrt()));
        let det_ok = h.clone().lu().determinant().abs() > 1e-12 * scale.powi(p.dim as i32);
        if !pd {
            convex = false;
        }
        if !det_ok {
            nondegenerate = false;
            witness.get_or_insert_with(|| x.clone());
        }
        let gscale = g.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        for (w, s) in walls_f.iter().zip(signs.iter_mut()) {
            let v: f64 = w.iter().zip(&g).map(|(a, b)| a * b).sum();
            if v.abs() <= 1e-12 * gscale {
                regular = false;
                witness.get_or_insert_with(|| x.clone());
            } else if v > 0.0 {
                s.0 = true;
            } else {
                s.1 = true;
            }
            if s.0 && s.1 {
                if regular {
                    witness.get_or_insert_with(|| x.clone());
                }
                // The image is connected, so it meets the wall.
                regular = false;
            }
        }
    }
    let convex = convex && samples > 0;
    FormClassification {
        nondegenerate: nondegenerate && samples > 0,
        strictly_convex: convex,
        image_in_regular: regular && samples > 0,
        pseudo_kahler: nondegenerate && regular && samples > 0,
        certificate: Certificate::Sampled,
        samples,
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonParams {
    /// Success when `‖½F′(x) − λ‖∞ ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Divergence is declared beyond this norm while the objective decreases.
    pub divergence_norm: f64,
}

impl Default for NewtonParams {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 10_000, divergence_norm: 1e3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Member,
    /// The minimum of `F − 2λ` is not attained: iterates escape to infinity.
    NotAttained,
    /// The iteration budget ran out, or the line search stalled.
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSolve {
    pub status: Membership,
    /// Final iterate; the preimage when `status` is `Member`.
    pub point: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl MomentSolve {
    pub fn member(&self) -> bool {
        self.status == Membership::Member
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Decides whether `lam` (in dual-basis coordinates) lies in `Im(½F′)`.
///
/// Attainment of `min F(x) − 2 lam · x` is first decided exactly on the
/// recession cone; the minimizer is then found by damped Newton steps from
/// `start`, with divergence detection kept as a fallback.
pub fn in_moment_image_from(
    p: &Potential,
    lam: &[Q],
    start: &[f64],
    params: &NewtonParams,
) -> Result<MomentSolve, KahlerError> {
    let mu = vec_to_f64(lam);
    p.check_dim(&mu)?;
    if recession_direction(p, lam).is_some() {
        let residual = p.grad(start).map_or(f64::INFINITY, |g| {
            0.5 * inf_norm(&g.iter().zip(&mu).map(|(a, b)| a - 2.0 * b).collect::<Vec<_>>())
        });
        return Ok(MomentSolve { status: Membership::NotAttained, point: start.to_vec(), residual, iterations: 0 });
    }
    let objective = |x: &[f64]| -> Result<f64, KahlerError> {
        Ok(p.value(x)? - 2.0 * mu.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
    };
    let mut x = start.to_vec();
    let mut phi = objective(&x)?;
    let mut residual = f64::INFINITY;
    for it in 0..params.max_iter {
        let g = p.grad(&x)?;
        let dphi: Vec<f64> = g.iter().zip(&mu).map(|(a, b)| a - 2.0 * b).collect();
        residual = 0.5 * inf_norm(&dphi);
        let h = p.hess_matrix(&x)?;
        if residual <= params.tol {
            let (x, residual) = polish(p, &mu, x, residual, &h, &dphi);
            return Ok(MomentSolve { status: Membership::Member, point: x, residual, iterations: it });
        }
        let rhs = -DVector::from_column_slice(&dphi);
        let mut tau = 0.0;
        let d = loop {
            let m = &h + DMatrix::identity(p.dim, p.dim) * tau;
            if let Some(c) = m.cholesky() {
                break c.solve(&rhs);
            }
            tau = if tau == 0.0 { 1e-10 * h.amax().max(1.0) } else { tau * 10.0 };
            if !tau.is_finite() {
                return Ok(MomentSolve { status: Membership::Undecided, point: x, residual, iterations: it });
            }
        };
        let slope: f64 = d.iter().zip(&dphi).map(|(a, b)| a * b).sum();
        // Below rounding the objective cannot rank steps; go straight to the
        // residual-based full step.
        let mut t = if -slope <= 1e-12 * (1.0 + phi.abs()) { 0.0 } else { 1.0 };
        let mut accepted = None;
        while t > 1e-16 {
            let xn: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + t * b).collect();
            if let Ok(pn) = objective(&xn) {
                if pn <= phi + 1e-4 * t * slope {
                    accepted = Some((xn, pn));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((xn, pn)) = accepted else {
            // Near the optimum rounding can defeat the Armijo test; take the
            // full step when it still shrinks the residual.
            let xn: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + b).collect();
            if let (Ok(gn), Ok(pn)) = (p.grad(&xn), objective(&xn)) {
                let rn = 0.5 * inf_norm(&gn.iter().zip(&mu).map(|(a, b)| a - 2.0 * b).collect::<Vec<_>>());
                if rn < residual {
                    x = xn;
                    phi = pn;
                    continue;
                }
            }
            return Ok(MomentSolve { status: Membership::Undecided, point: x, residual, iterations: it });
        };
        let decreasing = pn < phi;
        x = xn;
        phi = pn;
        if decreasing && inf_norm(&x) > params.divergence_norm {
            return Ok(MomentSolve { status: Membership::NotAttained, point: x, residual, iterations: it + 1 });
        }
    }
    Ok(MomentSolve { status: Membership::Undecided, point: x, residual, iterations: params.max_iter })
}

/// One extra full Newton step, kept only if it lowers the residual.
fn polish(p: &Potential, mu: &[f64], x: Vec<f64>, residual: f64, h: &DMatrix<f64>, dphi: &[f64]) -> (Vec<f64>, f64) {
    let Some(c) = h.clone().cholesky() else { return (x, residual) };
    let d = c.solve(&-DVector::from_column_slice(dphi));
    let xn: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + b).collect();
    match p.grad(&xn) {
        Ok(g) => {
            let rn = 0.5 * inf_norm(&g.iter().zip(mu).map(|(a, b)| a - 2.0 * b).collect::<Vec<_>>());
            if rn < residual {
                (xn, rn)
            } else {
                (x, residual)
            }
        }
        Err(_) => (x, residual),
    }
}

/// A direction along which `F(x) − 2 lam · x` strictly decreases from
/// every point, if one exists; `None` means the minimum is attained.
///
/// Such `d` has `y_j · d ≤ 0`, `Q d = 0`, `lam · d ≥ 0`, and either
/// `lam · d > 0` or some `y_j · d < 0`.
pub fn recession_direction(p: &Potential, lam: &[Q]) -> Option<QVec> {
    let zero = Q::zero();
    let weak = |v: QVec| Halfspace::new(v, zero.clone(), Strictness::Weak);
    let mut hs: Vec<Halfspace> = p.terms.iter().map(|t| weak(neg(&t.weight))).collect();
    if let Some(m) = &p.quad {
        for row in m {
            hs.push(weak(row.clone()));
            hs.push(weak(neg(row)));
        }
    }
    hs.push(weak(lam.to_vec()));
    let total = p.terms.iter().fold(lam.to_vec(), |acc, t| sub(&acc, &t.weight));
    hs.push(Halfspace::new(total, zero, Strictness::Strict));
    fm_feasible(&hs, p.dim)
}

pub fn in_moment_image(p: &Potential, lam: &[Q], params: &NewtonParams) -> Result<MomentSolve, KahlerError> {
    in_moment_image_from(p, lam, &vec![0.0; p.dim], params)
}
