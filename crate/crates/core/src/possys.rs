//! Positive systems, simple roots, ρ, compact simple roots, and the two
//! admissibility diagnostics.
//!
//! The two admissibility tests are deliberately kept apart. The bracket test
//! reads the abelian/stable conditions on q± literally, and it fails for
//! several real forms whose Harish-Chandra cone is nonempty. Nonemptiness of
//! the cone is what the rest of the pipeline relies on.

use num_traits::Zero;

use crate::cones::{self, ConeRegion};
use crate::linalg::{add, dot, q, scale, sub, zeros, Q, QVec};
use crate::polyhedral::{self, Halfspace};
use crate::realform::{classify_even_roots, EvenPartition, RealForm, RealFormError};
use crate::rootdata::{Root, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosSysError {
    #[error("functional vanishes on root {0}")]
    DegenerateFunctional(String),
    #[error("functional has {got} coordinates, root system needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    RealForm(#[from] RealFormError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositiveSystem {
    pub functional: QVec,
    pub positives: Vec<Root>,
    pub simples: Vec<Root>,
    pub pi_c: Vec<Root>,
    pub rho: QVec,
}

impl PositiveSystem {
    pub fn is_positive(&self, r: &Root) -> bool {
        self.positives.contains(r)
    }
}

/// Everything downstream modules need about one (algebra, real form,
/// positive system) choice.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub rs: RootSystem,
    pub rf: RealForm,
    pub ps: PositiveSystem,
    pub even: EvenPartition,
}

impl Context {
    pub fn new(rs: RootSystem, rf: RealForm, functional: &[Q]) -> Result<Self, PosSysError> {
        let ps = positive_system(&rs, &rf, functional)?;
        let even = classify_even_roots(&rf, &rs)?;
        Ok(Self { rs, rf, ps, even })
    }

    /// Δ_c⁺.
    pub fn compact_positive(&self) -> Vec<Root> {
        self.ps.positives.iter().filter(|r| self.even.is_compact(r)).cloned().collect()
    }

    /// Δ_n⁺ ∪ Δ₁⁺, the roots of q⁺.
    pub fn q_plus(&self) -> Vec<Root> {
        self.ps.positives.iter().filter(|r| !self.even.is_compact(r)).cloned().collect()
    }

    pub fn noncompact_positive(&self) -> Vec<Root> {
        self.ps.positives.iter().filter(|r| r.is_even() && !self.even.is_compact(r)).cloned().collect()
    }

    pub fn odd_positive(&self) -> Vec<Root> {
        self.ps.positives.iter().filter(|r| !r.is_even()).cloned().collect()
    }
}

pub fn positive_system(rs: &RootSystem, rf: &RealForm, functional: &[Q]) -> Result<PositiveSystem, PosSysError> {
    if functional.len() != rs.ambient_dim {
        return Err(PosSysError::DimensionMismatch { expected: rs.ambient_dim, got: functional.len() });
    }
    let even = classify_even_roots(rf, rs)?;
    let mut positives = Vec::new();
    for r in &rs.roots {
        let v = dot(functional, &r.coords);
        if v.is_zero() {
            return Err(PosSysError::DegenerateFunctional(rs.label_weight(&r.coords)));
        }
        if v > Q::zero() {
            positives.push(r.clone());
        }
    }
    // Simple roots are the positive roots that are not a sum of two positive
    // roots (a root may be used twice: δ + δ = 2δ in type B).
    let simples: Vec<Root> = positives
        .iter()
        .filter(|a| {
            !positives
                .iter()
                .any(|b| positives.iter().any(|c| add(&b.coords, &c.coords) == a.coords))
        })
        .cloned()
        .collect();
    let pi_c = simples.iter().filter(|r| even.is_compact(r)).cloned().collect();
    let mut sum = zeros(rs.ambient_dim);
    for r in &positives {
        sum = if r.is_even() { add(&sum, &r.coords) } else { sub(&sum, &r.coords) };
    }
    let rho = scale(&q(1, 2), &sum);
    Ok(PositiveSystem { functional: functional.to_vec(), positives, simples, pi_c, rho })
}

/// Nonnegative integer coefficients of `root` over `simples`, if any.
pub fn simple_coefficients(simples: &[Root], root: &Root) -> Option<QVec> {
    let basis: Vec<QVec> = simples.iter().map(|s| s.coords.clone()).collect();
    let c = crate::linalg::coordinates_in(&basis, &root.coords)?;
    (c.iter().all(|x| x.is_integer() && *x >= Q::zero())).then_some(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `[k, q+]` leaves q+: compact α plus β ∈ q+ lands on a root outside q+.
    NotStable,
    /// `[q+, q+] != 0`.
    NotAbelian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketWitness {
    pub kind: WitnessKind,
    pub first: Root,
    pub second: Root,
    pub sum: QVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiteralReport {
    pub k_stable: bool,
    pub q_abelian: bool,
    pub witnesses: Vec<BracketWitness>,
}

/// Literal reading of `[k, q±] ⊂ q±` and `[q±, q±] = 0` on root data.
pub fn admissible_literal(ctx: &Context) -> LiteralReport {
    bracket_scan(&ctx.rs, &ctx.even.compact, &ctx.q_plus())
}

/// Pair scan behind [`admissible_literal`] for an explicit split of the roots
/// into `compact` (roots of k) and `qp` (roots of q+).
pub fn bracket_scan(rs: &RootSystem, compact: &[Root], qp: &[Root]) -> LiteralReport {
    let mut witnesses = Vec::new();
    for a in compact {
        for b in qp {
            let s = add(&a.coords, &b.coords);
            if rs.is_root(&s) && !qp.iter().any(|r| r.coords == s) {
                witnesses.push(BracketWitness {
                    kind: WitnessKind::NotStable,
                    first: a.clone(),
                    second: b.clone(),
                    sum: s,
                });
            }
        }
    }
    let k_stable = witnesses.is_empty();
    for (i, b) in qp.iter().enumerate() {
        for c in &qp[i..] {
            // [x, x] = 0 for an even root vector, but not for an odd one.
            if b == c && b.is_even() {
                continue;
            }
            let s = add(&b.coords, &c.coords);
            if rs.is_root(&s) {
                witnesses.push(BracketWitness {
                    kind: WitnessKind::NotAbelian,
                    first: b.clone(),
                    second: c.clone(),
                    sum: s,
                });
            }
        }
    }
    let q_abelian = witnesses.iter().all(|w| w.kind != WitnessKind::NotAbelian);
    LiteralReport { k_stable, q_abelian, witnesses }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<QVec>,
}

/// Decides whether the Harish-Chandra cone is nonempty, by exact
/// Fourier–Motzkin elimination with strictness tracking.
pub fn admissible_feasible(ctx: &Context) -> FeasibilityReport {
    let cone = cones::hc_cone(ctx);
    feasible_region(&cone)
}

pub fn feasible_region(region: &ConeRegion) -> FeasibilityReport {
    let halfspaces: Vec<Halfspace> = region.halfspaces();
    match polyhedral::fm_feasible(&halfspaces, region.rs.ambient_dim) {
        Some(x) => {
            debug_assert!(halfspaces.iter().all(|h| h.holds(&x)));
            FeasibilityReport { feasible: true, witness: Some(region.rs.canonical(&x)) }
        }
        None => FeasibilityReport { feasible: false, witness: None },
    }
}

pub fn feasible_halfspaces(halfspaces: &[Halfspace], dim: usize) -> FeasibilityReport {
    match polyhedral::fm_feasible(halfspaces, dim) {
        Some(x) => FeasibilityReport { feasible: true, witness: Some(x) },
        None => FeasibilityReport { feasible: false, witness: None },
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::{qi, qvec};
    use crate::rootdata::{build_root_system, AlgebraSpec};

    pub(crate) fn su(p: usize, m: usize, functional: &[i64]) -> Context {
        let spec = AlgebraSpec::a(m, 0);
        let rs = build_root_system(&spec).unwrap();
        let rf = RealForm::parse(&spec, &format!("su({},{}|1)", p, m + 1 - p)).unwrap();
        Context::new(rs, rf, &qvec(functional)).unwrap()
    }

    fn coords(rs: &[Root]) -> Vec<QVec> {
        rs.iter().map(|r| r.coords.clone()).collect()
    }

    #[test]
    fn sl_2_1_positive_system() {
        let ctx = su(1, 1, &[3, 2, 1]);
        let pos = coords(&ctx.ps.positives);
        assert_eq!(pos.len(), 3);
        for r in [[1, -1, 0], [1, 0, -1], [0, 1, -1]] {
            assert!(pos.contains(&qvec(&r)));
        }
        assert_eq!(ctx.ps.rho, qvec(&[0, -1, 1]));
        assert_eq!(ctx.ps.simples.len(), 2);
        assert!(ctx.ps.pi_c.is_empty());
    }

    #[test]
    fn osp_3_2_positive_system() {
        let spec = AlgebraSpec::b(1, 1);
        let rs = build_root_system(&spec).unwrap();
        let rf = RealForm::parse(&spec, "so(3)+sp(1,R)").unwrap();
        let ctx = Context::new(rs, rf, &qvec(&[1, 5])).unwrap();
        let pos = coords(&ctx.ps.positives);
        assert_eq!(pos.len(), 5);
        for r in [[1, 0], [0, 2], [0, 1], [1, 1], [-1, 1]] {
            assert!(pos.contains(&qvec(&r)));
        }
        assert_eq!(ctx.ps.rho, vec![q(1, 2), q(-1, 2)]);
    }

    #[test]
    fn rho_antisymmetric() {
        let a = su(2, 2, &[4, 3, 2, 1]);
        let b = su(2, 2, &[-4, -3, -2, -1]);
        assert_eq!(a.ps.rho, crate::linalg::neg(&b.ps.rho));
    }

    #[test]
    fn degenerate_functional_rejected() {
        let spec = AlgebraSpec::a(1, 0);
        let rs = build_root_system(&spec).unwrap();
        let rf = RealForm::parse(&spec, "su(1,1|1)").unwrap();
        assert!(matches!(
            positive_system(&rs, &rf, &qvec(&[1, 1, 0])),
            Err(PosSysError::DegenerateFunctional(_))
        ));
    }

    #[test]
    fn literal_test_su_1_1_1() {
        let ctx = su(1, 1, &[3, 2, 1]);
        let rep = admissible_literal(&ctx);
        assert!(!rep.q_abelian);
        assert!(rep.witnesses.iter().any(|w| {
            w.kind == WitnessKind::NotAbelian
                && w.first.coords == qvec(&[1, -1, 0])
                && w.second.coords == qvec(&[0, 1, -1])
                && w.sum == qvec(&[1, 0, -1])
        }));
    }

    #[test]
    fn literal_test_vacuous_without_q_plus() {
        let ctx = su(2, 2, &[4, 3, 2, 1]);
        let rep = bracket_scan(&ctx.rs, &ctx.even.compact, &[]);
        assert!(rep.k_stable && rep.q_abelian && rep.witnesses.is_empty());
        // With no compact roots there is nothing to destabilise q+ either.
        let ctx = su(1, 1, &[3, 2, 1]);
        assert!(admissible_literal(&ctx).k_stable);
    }

    #[test]
    fn literal_test_osp_delta_plus_delta() {
        let spec = AlgebraSpec::b(1, 1);
        let rs = build_root_system(&spec).unwrap();
        let rf = RealForm::parse(&spec, "so(3)+sp(1,R)").unwrap();
        let ctx = Context::new(rs, rf, &qvec(&[1, 5])).unwrap();
        let rep = admissible_literal(&ctx);
        assert!(!rep.q_abelian);
        assert!(rep.witnesses.iter().any(|w| w.first.coords == qvec(&[0, 1])
            && w.second.coords == qvec(&[0, 1])
            && w.sum == qvec(&[0, 2])));
    }

    #[test]
    fn feasibility_su_1_1_1() {
        let ctx = su(1, 1, &[3, 2, 1]);
        let rep = admissible_feasible(&ctx);
        assert!(rep.feasible);
        let w = rep.witness.unwrap();
        let cone = cones::hc_cone(&ctx);
        assert!(cone.contains(&w));
        assert!(cone.contains(&qvec(&[-2, 1, -3])));
    }

    #[test]
    fn feasibility_su_2_1_1() {
        let ctx = su(2, 2, &[4, 3, 2, 1]);
        let rep = admissible_feasible(&ctx);
        assert!(rep.feasible);
        let w = rep.witness.unwrap();
        let (a1, a2, a3, c) = (&w[0], &w[1], &w[2], &w[3]);
        assert!(a1 >= a2);
        assert!(a1 < a3 && a2 < a3);
        for a in [a1, a2, a3] {
            assert!(a + c < qi(0));
        }
    }

    #[test]
    fn contradictory_constraints_infeasible() {
        // λ(h_α) ≥ 0, λ(h_{-α}) ≥ 0 and λ(h_α) < 0.
        let g = vec![qi(1), qi(-1)];
        let rows = vec![
            Halfspace::new(g.clone(), qi(0), polyhedral::Strictness::Weak),
            Halfspace::new(crate::linalg::neg(&g), qi(0), polyhedral::Strictness::Weak),
            Halfspace::new(crate::linalg::neg(&g), qi(0), polyhedral::Strictness::Strict),
        ];
        assert!(!feasible_halfspaces(&rows, 2).feasible);
    }

    #[test]
    fn positives_decompose_over_simples() {
        let spec = AlgebraSpec::b(2, 2);
        let rs = build_root_system(&spec).unwrap();
        let rf = RealForm::parse(&spec, "so(5)+sp(2,R)").unwrap();
        let ctx = Context::new(rs, rf, &qvec(&[2, 1, 4, 3])).unwrap();
        assert_eq!(ctx.ps.simples.len(), 4);
        for r in &ctx.ps.positives {
            assert!(simple_coefficients(&ctx.ps.simples, r).is_some(), "{:?}", r.coords);
        }
    }
}
