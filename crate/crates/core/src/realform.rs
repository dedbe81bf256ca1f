//! Real forms that admit unitarizable highest weight supermodules, and the
//! compact/noncompact split of the even roots they induce.
//!
//! The table below is data, not derived: one entry per line of the published
//! list of real forms with compact Cartan subalgebra, indexed by family.

use std::fmt;

use num_traits::Zero;

use crate::linalg::Q;
use crate::rootdata::{AlgebraSpec, Family, Root, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealFormError {
    #[error("real form `{tag}` does not belong to {algebra}")]
    InconsistentRealForm { tag: String, algebra: String },
    #[error("cannot parse real form tag `{0}`")]
    BadTag(String),
}

/// One entry of the real-form table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealFormTag {
    /// su(p, m+1-p | n+1); the δ block is compact.
    Su { p: usize },
    /// so(2m+1) ⊕ sp(n, R).
    OspB,
    /// sp(n-1, R) ⊕ so(2).
    OspC,
    /// so(2m) ⊕ sp(n, R).
    OspDCompact,
    /// so(2m-2, 2) ⊕ sp(n, R); the so(2) factor sits on e1.
    OspDHermitian,
    /// so*(2m) ⊕ sp(n, R).
    OspDStar,
    /// so(2,5) + su(2); provisional compact data, so(2) on e1.
    F4,
    /// g2 compact + sl(2, R).
    G3,
    /// su(2)^2 ⊕ sl(2, R); provisional, the sl(2, R) factor is 2e1.
    D21Compact,
    /// sl(2, R)^3.
    D21Split,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealForm {
    pub algebra: AlgebraSpec,
    pub tag: RealFormTag,
}

impl RealForm {
    pub fn new(algebra: AlgebraSpec, tag: RealFormTag) -> Result<Self, RealFormError> {
        let rf = RealForm { algebra, tag };
        if list_supported(&rf.algebra).contains(&rf) {
            Ok(rf)
        } else {
            Err(RealFormError::InconsistentRealForm { tag: rf.to_string(), algebra: rf.algebra.to_string() })
        }
    }

    /// Parses tags as printed by `Display`, e.g. `su(2,1|1)`,
    /// `so(3)+sp(1,R)`, `so*(4)+sp(2,R)`, `sl(2,R)^3`.
    pub fn parse(algebra: &AlgebraSpec, tag: &str) -> Result<Self, RealFormError> {
        let norm: String = tag.chars().filter(|c| !c.is_whitespace()).collect();
        list_supported(algebra)
            .into_iter()
            .find(|rf| rf.to_string() == norm)
            .ok_or_else(|| {
                if norm.is_empty() {
                    RealFormError::BadTag(tag.to_string())
                } else {
                    RealFormError::InconsistentRealForm { tag: norm, algebra: algebra.to_string() }
                }
            })
    }
}

impl fmt::Display for RealForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, n) = (self.algebra.m, self.algebra.n);
        match self.tag {
            RealFormTag::Su { p } => write!(f, "su({},{}|{})", p, m + 1 - p, n + 1),
            RealFormTag::OspB => write!(f, "so({})+sp({},R)", 2 * m + 1, n),
            RealFormTag::OspC => write!(f, "sp({},R)+so(2)", n - 1),
            RealFormTag::OspDCompact => write!(f, "so({})+sp({},R)", 2 * m, n),
            RealFormTag::OspDHermitian => write!(f, "so({},2)+sp({},R)", 2 * m - 2, n),
            RealFormTag::OspDStar => write!(f, "so*({})+sp({},R)", 2 * m, n),
            RealFormTag::F4 => write!(f, "so(2,5)+su(2)"),
            RealFormTag::G3 => write!(f, "g2c+sl(2,R)"),
            RealFormTag::D21Compact => write!(f, "su(2)^2+sl(2,R)"),
            RealFormTag::D21Split => write!(f, "sl(2,R)^3"),
        }
    }
}

/// Every real form in the table for the family of `spec`.
pub fn list_supported(spec: &AlgebraSpec) -> Vec<RealForm> {
    let tags: Vec<RealFormTag> = match spec.family {
        Family::A => (0..=spec.m + 1).map(|p| RealFormTag::Su { p }).collect(),
        Family::B => vec![RealFormTag::OspB],
        Family::C => vec![RealFormTag::OspC],
        Family::D => vec![RealFormTag::OspDCompact, RealFormTag::OspDHermitian, RealFormTag::OspDStar],
        Family::F4 => vec![RealFormTag::F4],
        Family::G3 => vec![RealFormTag::G3],
        Family::D21Alpha => vec![RealFormTag::D21Compact, RealFormTag::D21Split],
    };
    tags.into_iter().map(|tag| RealForm { algebra: spec.clone(), tag }).collect()
}

/// Even roots split into `(compact, noncompact)`, in root-system order.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenPartition {
    pub compact: Vec<Root>,
    pub noncompact: Vec<Root>,
}

impl EvenPartition {
    pub fn is_compact(&self, r: &Root) -> bool {
        self.compact.contains(r)
    }
}

pub fn classify_even_roots(rf: &RealForm, rs: &RootSystem) -> Result<EvenPartition, RealFormError> {
    if rf.algebra != rs.spec {
        return Err(RealFormError::InconsistentRealForm {
            tag: rf.to_string(),
            algebra: rs.spec.to_string(),
        });
    }
    let (compact, noncompact) = rs
        .even_roots()
        .cloned()
        .partition(|r| is_compact_root(rf, rs, &r.coords));
    Ok(EvenPartition { compact, noncompact })
}

fn nonzero(v: &[Q]) -> impl Iterator<Item = usize> + '_ {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i)
}

/// Roots of sp(n, R) with maximal compact u(n): the compact ones are the
/// δ_i - δ_j, i.e. those whose δ coefficients sum to zero.
fn sp_block_compact(v: &[Q], delta_start: usize) -> bool {
    v[delta_start..].iter().fold(Q::zero(), |acc, x| acc + x).is_zero()
}

fn eps_support_only(v: &[Q], eps_end: usize) -> bool {
    nonzero(v).all(|i| i < eps_end)
}

fn is_compact_root(rf: &RealForm, rs: &RootSystem, v: &[Q]) -> bool {
    let m = rs.spec.m;
    match rf.tag {
        RealFormTag::Su { p } => {
            let pe = m + 1;
            let idx: Vec<usize> = nonzero(v).collect();
            match idx.as_slice() {
                [i, j] if *j < pe => (*i < p) == (*j < p),
                _ => true,
            }
        }
        RealFormTag::OspB | RealFormTag::OspDCompact => {
            eps_support_only(v, m) || sp_block_compact(v, m)
        }
        RealFormTag::OspC => sp_block_compact(v, 1),
        RealFormTag::OspDHermitian => {
            if eps_support_only(v, m) {
                v[0].is_zero()
            } else {
                sp_block_compact(v, m)
            }
        }
        RealFormTag::OspDStar => {
            if eps_support_only(v, m) {
                v[..m].iter().fold(Q::zero(), |acc, x| acc + x).is_zero()
            } else {
                sp_block_compact(v, m)
            }
        }
        RealFormTag::F4 => !eps_support_only(v, 3) || v[0].is_zero(),
        RealFormTag::G3 => v[2].is_zero(),
        RealFormTag::D21Compact => v[0].is_zero(),
        RealFormTag::D21Split => false,
    }
}
