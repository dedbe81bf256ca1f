//! Unitarizability inequalities for osp(2m+1|2n) highest weights, and the
//! stored exception thresholds for the exceptional families.
//!
//! Weights are `Λ = (μ_1, …, μ_m | λ, λ − a_2, …, λ − a_n)` in the ε/δ
//! coordinates of B(m,n). Two positive systems are involved:
//!
//! * the admissible one, with every δ above every ε, whose ρ has the shift
//!   pattern `(m − i + 1/2 | n − j + 1 − m − 1/2)`;
//! * the unitarity orientation, with every ε_i − δ_j positive, over whose
//!   noncompact and odd positive roots the conditions `(Λ + ρ)(h_β) < 0`
//!   are evaluated.

use num_traits::{One, Signed};

use crate::cones;
use crate::linalg::{add, q, qi, unit, zeros, Q, QVec, VecDisplay};
use crate::possys::{Context, PosSysError, PositiveSystem};
use crate::realform::{RealForm, RealFormTag};
use crate::rootdata::{build_root_system, AlgebraSpec, Family, Root, RootError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnitarityError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("computed rho {computed} differs from the shift pattern {expected}")]
    RhoMismatch { computed: String, expected: String },
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    PosSys(#[from] PosSysError),
    #[error("no exception thresholds are available for {0}")]
    NoData(Family),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JakobsenParamsOsp {
    pub m: usize,
    pub n: usize,
    /// `μ_1 ≥ … ≥ μ_m ≥ 0`.
    pub mu: QVec,
    pub lam: Q,
    /// `(a_2, …, a_n)` with `0 ≤ a_2 ≤ … ≤ a_n`.
    pub a: QVec,
}

impl JakobsenParamsOsp {
    pub fn validate(&self) -> Result<(), UnitarityError> {
        let bad = |s: &str| Err(UnitarityError::InvalidParams(s.to_string()));
        if self.m == 0 || self.n == 0 {
            return bad("m and n must be positive");
        }
        if self.mu.len() != self.m {
            return bad("mu must have m entries");
        }
        if self.a.len() + 1 != self.n {
            return bad("a must have n - 1 entries (a_2, ..., a_n)");
        }
        if self.mu.windows(2).any(|w| w[0] < w[1]) || self.mu.last().is_some_and(|x| x.is_negative()) {
            return bad("need mu_1 >= ... >= mu_m >= 0");
        }
        if self.a.windows(2).any(|w| w[0] > w[1]) || self.a.first().is_some_and(|x| x.is_negative()) {
            return bad("need a_n >= ... >= a_2 >= 0");
        }
        Ok(())
    }

    /// `Λ` in ε/δ coordinates.
    pub fn weight(&self) -> QVec {
        let mut v = self.mu.clone();
        v.push(self.lam.clone());
        v.extend(self.a.iter().map(|a| &self.lam - a));
        v
    }

    /// Parameters as one vector `(μ_1, …, μ_m, λ, a_2, …, a_n)`.
    pub fn flat(&self) -> QVec {
        let mut v = self.mu.clone();
        v.push(self.lam.clone());
        v.extend(self.a.iter().cloned());
        v
    }

    pub fn from_flat(m: usize, n: usize, v: &[Q]) -> Self {
        Self { m, n, mu: v[..m].to_vec(), lam: v[m].clone(), a: v[m + 1..].to_vec() }
    }
}

/// `(m − 1/2, …, 1/2 | n − m − 1/2, …, 1 − m − 1/2)`.
pub fn pattern_rho(m: usize, n: usize) -> QVec {
    let (mi, ni) = (m as i64, n as i64);
    let eps = (1..=mi).map(|i| q(2 * (mi - i) + 1, 2));
    let delta = (1..=ni).map(|j| q(2 * (ni - j + 1 - mi) - 1, 2));
    eps.chain(delta).collect()
}

fn context(m: usize, n: usize, delta: impl Fn(usize) -> i64) -> Result<Context, UnitarityError> {
    let spec = AlgebraSpec::b(m, n);
    let rs = build_root_system(&spec)?;
    let rf = RealForm::new(spec, RealFormTag::OspB).map_err(PosSysError::from)?;
    let mut f: QVec = (1..=m).map(|i| qi((m - i + 1) as i64)).collect();
    f.extend((1..=n).map(|j| qi(delta(j))));
    Ok(Context::new(rs, rf, &f)?)
}

/// Admissible positive system: δ_1 > … > δ_n > ε_1 > … > ε_m > 0.
pub fn admissible_context(m: usize, n: usize) -> Result<Context, UnitarityError> {
    context(m, n, |j| (m + n - j + 1) as i64)
}

/// Orientation with every ε_i − δ_j positive.
pub fn unitarity_context(m: usize, n: usize) -> Result<Context, UnitarityError> {
    context(m, n, |j| -((m + n + 1 - j) as i64))
}

/// `Λ + ρ`, after checking that ρ of `ps` has the displayed shift pattern.
pub fn lambda_plus_rho_osp(p: &JakobsenParamsOsp, ps: &PositiveSystem) -> Result<QVec, UnitarityError> {
    p.validate()?;
    let expected = pattern_rho(p.m, p.n);
    if ps.rho != expected {
        return Err(UnitarityError::RhoMismatch {
            computed: VecDisplay(&ps.rho).to_string(),
            expected: VecDisplay(&expected).to_string(),
        });
    }
    Ok(add(&p.weight(), &ps.rho))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingValue {
    pub root: Root,
    pub label: String,
    /// `(Λ + ρ)(h_β)`.
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OspVerdict {
    pub in_c: bool,
    /// The largest pairing, i.e. the tightest of the strict inequalities.
    pub binding: PairingValue,
    pub values: Vec<PairingValue>,
    /// Membership of `Λ` in C for the admissible positive system.
    pub admissible_in_c: bool,
}

fn pairings(ctx: &Context, shifted: &[Q]) -> Vec<PairingValue> {
    ctx.q_plus()
        .into_iter()
        .map(|r| PairingValue {
            value: ctx.rs.form(shifted, &r.coords),
            label: ctx.rs.label_weight(&r.coords),
            root: r,
        })
        .collect()
}

pub fn osp_unitarizable(p: &JakobsenParamsOsp) -> Result<OspVerdict, UnitarityError> {
    let adm = admissible_context(p.m, p.n)?;
    let shifted = lambda_plus_rho_osp(p, &adm.ps)?;
    let uni = unitarity_context(p.m, p.n)?;
    let values = pairings(&uni, &shifted);
    let binding = values
        .iter()
        .max_by(|a, b| a.value.cmp(&b.value))
        .cloned()
        .expect("B(m,n) has odd roots");
    let in_c = values.iter().all(|v| v.value.is_negative());
    let admissible_in_c = cones::parameter_set_c(&adm).contains(&p.weight());
    Ok(OspVerdict { in_c, binding, values, admissible_in_c })
}

/// `coeffs · (μ, λ, a) + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: QVec,
    pub constant: Q,
}

/// `(Λ + ρ)(h_β)` as an affine function of `(μ, λ, a)`, for a root `β` of
/// B(m,n). Exact, since the pairing is affine in the parameters.
pub fn expand_pairing(m: usize, n: usize, beta: &Root) -> Result<AffineForm, UnitarityError> {
    let adm = admissible_context(m, n)?;
    let k = m + n;
    let eval = |v: &[Q]| -> Q {
        let w = JakobsenParamsOsp::from_flat(m, n, v).weight();
        adm.rs.form(&add(&w, &adm.ps.rho), &beta.coords)
    };
    let constant = eval(&zeros(k));
    let coeffs = (0..k).map(|i| eval(&unit(k, i)) - &constant).collect();
    Ok(AffineForm { coeffs, constant })
}

/// `λ + μ_1 + n − 1`, so that the ε_1 − δ_1 condition reads `λ < 1 − μ_1 − n`.
pub fn closed_form_eps1_delta1(m: usize, n: usize) -> AffineForm {
    let mut coeffs = zeros(m + n);
    coeffs[0] = Q::one();
    coeffs[m] = Q::one();
    AffineForm { coeffs, constant: qi(n as i64 - 1) }
}

/// A stored inequality `μ < threshold`, evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredInequality {
    pub text: &'static str,
    pub threshold: Q,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionFlags {
    pub c_condition: StoredInequality,
    pub unitarizable_condition: StoredInequality,
    pub agree: bool,
}

/// Thresholds in the exceptional families' own coordinates `(a, b, μ)`.
/// The constants are stored data; there is no translation to ε/δ weights.
pub fn exception_flags(family: Family, a: &Q, b: &Q, mu: &Q) -> Result<ExceptionFlags, UnitarityError> {
    match family {
        Family::G3 => {
            if !(a.is_positive() && (b - a).is_positive()) {
                return Err(UnitarityError::Precondition("need a > 0 and b - a > 0".into()));
            }
            let c_t = a + b - qi(10);
            let u_t = qi(-3) * a - qi(3) * b - qi(9);
            let c_condition = StoredInequality { text: "mu < a + b - 10", holds: *mu < c_t, threshold: c_t };
            let unitarizable_condition =
                StoredInequality { text: "mu < -3a - 3b - 9", holds: *mu < u_t, threshold: u_t };
            let agree = c_condition.holds == unitarizable_condition.holds;
            Ok(ExceptionFlags { c_condition, unitarizable_condition, agree })
        }
        Family::F4 => Err(UnitarityError::NoData(Family::F4)),
        other => Err(UnitarityError::InvalidParams(format!("exception thresholds exist only for F(4) and G(3), not {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;
    use crate::rootdata::Parity;

    fn params(m: usize, n: usize, mu: &[i64], lam: i64, a: &[i64]) -> JakobsenParamsOsp {
        JakobsenParamsOsp { m, n, mu: qvec(mu), lam: qi(lam), a: qvec(a) }
    }

    #[test]
    fn shift_patterns() {
        assert_eq!(pattern_rho(2, 2), vec![q(3, 2), q(1, 2), q(-1, 2), q(-3, 2)]);
        let ctx = admissible_context(1, 1).unwrap();
        let lr = lambda_plus_rho_osp(&params(1, 1, &[0], 0, &[]), &ctx.ps).unwrap();
        assert_eq!(lr, vec![q(1, 2), q(-1, 2)]);
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)] {
            assert_eq!(admissible_context(m, n).unwrap().ps.rho, pattern_rho(m, n));
        }
    }

    #[test]
    fn rho_mismatch_is_reported() {
        let ctx = unitarity_context(1, 1).unwrap();
        assert!(matches!(
            lambda_plus_rho_osp(&params(1, 1, &[0], 0, &[]), &ctx.ps),
            Err(UnitarityError::RhoMismatch { .. })
        ));
    }

    #[test]
    fn doubling_inputs_doubles_lambda_only() {
        let ctx = admissible_context(2, 2).unwrap();
        let p = params(2, 2, &[3, 1], -4, &[2]);
        let p2 = params(2, 2, &[6, 2], -8, &[4]);
        let a = lambda_plus_rho_osp(&p, &ctx.ps).unwrap();
        let b = lambda_plus_rho_osp(&p2, &ctx.ps).unwrap();
        let rho = pattern_rho(2, 2);
        for i in 0..4 {
            assert_eq!(&b[i] - &rho[i], qi(2) * (&a[i] - &rho[i]));
        }
    }

    #[test]
    fn osp_examples() {
        assert!(osp_unitarizable(&params(1, 1, &[0], -3, &[])).unwrap().in_c);
        let v = osp_unitarizable(&params(1, 1, &[0], 0, &[])).unwrap();
        assert!(!v.in_c);
        assert_eq!(v.binding.value, qi(0));
        let p = params(2, 2, &[1, 0], -5, &[0]);
        let v = osp_unitarizable(&p).unwrap();
        let e1d1 = v.values.iter().find(|x| x.root.coords == qvec(&[1, 0, -1, 0])).unwrap();
        assert_eq!(e1d1.value, qi(-3));
        assert!(v.in_c);
        assert!(params(1, 1, &[-1], 0, &[]).validate().is_err());
        assert!(params(2, 3, &[0, 0], 0, &[2, 1]).validate().is_err());
    }

    #[test]
    fn eps1_delta1_expansion() {
        for (m, n) in [(1, 1), (2, 2), (3, 2), (1, 3)] {
            let mut coords = zeros(m + n);
            coords[0] = qi(1);
            coords[m] = qi(-1);
            let beta = Root { coords, parity: Parity::Odd };
            assert_eq!(expand_pairing(m, n, &beta).unwrap(), closed_form_eps1_delta1(m, n));
        }
    }

    #[test]
    fn g3_thresholds() {
        let (a, b) = (qi(1), qi(2));
        let f = exception_flags(Family::G3, &a, &b, &qi(-20)).unwrap();
        assert!(f.c_condition.holds && f.unitarizable_condition.holds && f.agree);
        assert_eq!((f.c_condition.threshold.clone(), f.unitarizable_condition.threshold.clone()), (qi(-7), qi(-18)));
        let f = exception_flags(Family::G3, &a, &b, &qi(-10)).unwrap();
        assert!(f.c_condition.holds && !f.unitarizable_condition.holds && !f.agree);
        assert!(!exception_flags(Family::G3, &a, &b, &qi(-7)).unwrap().c_condition.holds);
        assert!(exception_flags(Family::G3, &qi(2), &qi(1), &qi(0)).is_err());
        assert_eq!(exception_flags(Family::F4, &a, &b, &qi(0)), Err(UnitarityError::NoData(Family::F4)));
    }
}
