//! Root systems of the contragredient Lie superalgebras in ε/δ coordinates.
//!
//! Coordinates are "ambient": type A uses the Cartan of gl(m+1|n+1), so every
//! weight is only defined modulo the supertrace direction kept in
//! [`RootSystem::quotient_kernel`]. The kernel is B-orthogonal to every root,
//! so pairings with roots never see the ambiguity.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::linalg::{bilinear, q, qi, zeros, Q, QMatrix, QVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("unsupported rank for {family}: {reason}")]
    UnsupportedRank { family: Family, reason: String },
    #[error("invalid D(2,1;alpha) parameter: {0}")]
    InvalidAlpha(String),
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    D21Alpha,
    F4,
    G3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::D21Alpha => "D21alpha",
            Family::F4 => "F4",
            Family::G3 => "G3",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "D21alpha" | "D21" | "d21alpha" => Ok(Family::D21Alpha),
            "F4" | "f4" => Ok(Family::F4),
            "G3" | "g3" => Ok(Family::G3),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    pub alpha: Option<Q>,
}

impl AlgebraSpec {
    pub fn a(m: usize, n: usize) -> Self {
        Self { family: Family::A, m, n, alpha: None }
    }

    pub fn b(m: usize, n: usize) -> Self {
        Self { family: Family::B, m, n, alpha: None }
    }

    pub fn c(n: usize) -> Self {
        Self { family: Family::C, m: 0, n, alpha: None }
    }

    pub fn d(m: usize, n: usize) -> Self {
        Self { family: Family::D, m, n, alpha: None }
    }

    pub fn d21(alpha: Q) -> Self {
        Self { family: Family::D21Alpha, m: 0, n: 0, alpha: Some(alpha) }
    }

    pub fn f4() -> Self {
        Self { family: Family::F4, m: 0, n: 0, alpha: None }
    }

    pub fn g3() -> Self {
        Self { family: Family::G3, m: 0, n: 0, alpha: None }
    }

    pub fn validate(&self) -> Result<(), RootError> {
        let bad = |reason: &str| {
            Err(RootError::UnsupportedRank { family: self.family, reason: reason.to_string() })
        };
        if self.family == Family::D21Alpha {
            let Some(a) = &self.alpha else {
                return Err(RootError::InvalidAlpha("alpha is required".into()));
            };
            if a.is_zero() || *a == -Q::one() {
                return Err(RootError::InvalidAlpha(crate::linalg::fmt_q(a)));
            }
        } else if self.alpha.is_some() {
            return Err(RootError::InvalidAlpha("alpha is only meaningful for D(2,1;alpha)".into()));
        }
        match self.family {
            Family::A if self.m == self.n => {
                bad("A(n,n) has a B-isotropic supertrace direction; the canonical slice is not defined")
            }
            Family::B if self.n == 0 => bad("B(m,n) requires n >= 1"),
            Family::C if self.n < 2 => bad("C(n) requires n >= 2"),
            Family::D if self.m < 2 || self.n == 0 => bad("D(m,n) requires m >= 2 and n >= 1"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A | Family::B | Family::D => write!(f, "{}({},{})", self.family, self.m, self.n),
            Family::C => write!(f, "C({})", self.n),
            Family::D21Alpha => write!(
                f,
                "D(2,1;{})",
                self.alpha.as_ref().map(crate::linalg::fmt_q).unwrap_or_default()
            ),
            Family::F4 => write!(f, "F(4)"),
            Family::G3 => write!(f, "G(3)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    pub coords: QVec,
    pub parity: Parity,
}

impl Root {
    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }

    pub fn negated(&self) -> Root {
        Root { coords: crate::linalg::neg(&self.coords), parity: self.parity }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub spec: AlgebraSpec,
    pub roots: Vec<Root>,
    pub gram: QMatrix,
    pub ambient_dim: usize,
    pub quotient_kernel: Option<QVec>,
    /// Coordinate names, e.g. `e1`, `d1`.
    pub labels: Vec<String>,
}

impl RootSystem {
    /// Dimension of the Cartan subalgebra.
    pub fn rank(&self) -> usize {
        self.ambient_dim - usize::from(self.quotient_kernel.is_some())
    }

    pub fn even_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_even())
    }

    pub fn odd_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| !r.is_even())
    }

    pub fn find(&self, coords: &[Q]) -> Option<&Root> {
        self.roots.iter().find(|r| r.coords == coords)
    }

    pub fn is_root(&self, coords: &[Q]) -> bool {
        self.find(coords).is_some()
    }

    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        bilinear(&self.gram, x, y)
    }

    /// Index of the coordinate used to fix type-A representatives (the last
    /// δ coordinate), when the system has a supertrace kernel.
    pub fn slice_coordinate(&self) -> Option<usize> {
        self.quotient_kernel.as_ref().map(|_| self.ambient_dim - 1)
    }

    /// Canonical representative of `lam` modulo the supertrace kernel: the
    /// last δ coordinate is shifted to zero. Identity for other families.
    pub fn canonical(&self, lam: &[Q]) -> QVec {
        match &self.quotient_kernel {
            None => lam.to_vec(),
            Some(k) => {
                let last = self.ambient_dim - 1;
                // lam - t k has last coordinate zero.
                let t = lam[last].clone() / k[last].clone();
                lam.iter().zip(k).map(|(x, kx)| x - &t * kx).collect()
            }
        }
    }

    pub fn label_weight(&self, w: &[Q]) -> String {
        label_combination(&self.labels, w)
    }
}

/// Human-readable linear combination such as `e1 - d1` or `1/2e1 + 2d2`.
pub fn label_combination(labels: &[String], w: &[Q]) -> String {
    let mut out = String::new();
    for (x, name) in w.iter().zip(labels) {
        if x.is_zero() {
            continue;
        }
        let negative = *x < Q::zero();
        let abs = if negative { -x.clone() } else { x.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&crate::linalg::fmt_q(&abs));
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `pairing(rs, lam, alpha) = lam(h_alpha) = B(lam, alpha)`.
pub fn pairing(rs: &RootSystem, lam: &[Q], alpha: &Root) -> Result<Q, RootError> {
    for v in [lam, alpha.coords.as_slice()] {
        if v.len() != rs.ambient_dim {
            return Err(RootError::DimensionMismatch { expected: rs.ambient_dim, got: v.len() });
        }
    }
    Ok(rs.form(lam, &alpha.coords))
}

struct Builder {
    dim: usize,
    roots: BTreeSet<Root>,
}

impl Builder {
    fn new(dim: usize) -> Self {
        Self { dim, roots: BTreeSet::new() }
    }

    /// Adds the root `sum coeff * e_index` and its negative.
    fn pm(&mut self, terms: &[(usize, Q)], parity: Parity) {
        let mut v = zeros(self.dim);
        for (i, c) in terms {
            v[*i] += c;
        }
        let r = Root { coords: v, parity };
        self.roots.insert(r.negated());
        self.roots.insert(r);
    }

    fn finish(self) -> Vec<Root> {
        // Even roots first, then odd; lexicographic inside each block.
        let mut v: Vec<Root> = self.roots.into_iter().collect();
        v.sort_by(|a, b| a.parity.cmp(&b.parity).then_with(|| b.coords.cmp(&a.coords)));
        v
    }
}

fn diag(entries: &[Q]) -> QMatrix {
    let n = entries.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { Q::zero() }).collect())
        .collect()
}

fn labels(eps: usize, del: usize) -> Vec<String> {
    (1..=eps).map(|i| format!("e{i}")).chain((1..=del).map(|j| format!("d{j}"))).collect()
}

/// Adds ±e_i ± e_j (i < j) over the index range.
fn plus_minus_pairs(b: &mut Builder, idx: &[usize], parity: Parity) {
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            b.pm(&[(i, qi(1)), (j, qi(1))], parity);
            b.pm(&[(i, qi(1)), (j, qi(-1))], parity);
        }
    }
}

fn cross_pairs(b: &mut Builder, left: &[usize], right: &[usize], parity: Parity) {
    for &i in left {
        for &j in right {
            b.pm(&[(i, qi(1)), (j, qi(1))], parity);
            b.pm(&[(i, qi(1)), (j, qi(-1))], parity);
        }
    }
}

/// Builds the full root system for `spec`.
pub fn build_root_system(spec: &AlgebraSpec) -> Result<RootSystem, RootError> {
    spec.validate()?;
    let (m, n) = (spec.m, spec.n);
    let rs = match spec.family {
        Family::A => {
            // gl(m+1|n+1) ambient coordinates.
            let (pe, pd) = (m + 1, n + 1);
            let dim = pe + pd;
            let mut b = Builder::new(dim);
            for i in 0..pe {
                for j in i + 1..pe {
                    b.pm(&[(i, qi(1)), (j, qi(-1))], Parity::Even);
                }
            }
            for i in 0..pd {
                for j in i + 1..pd {
                    b.pm(&[(pe + i, qi(1)), (pe + j, qi(-1))], Parity::Even);
                }
            }
            for i in 0..pe {
                for j in 0..pd {
                    b.pm(&[(i, qi(1)), (pe + j, qi(-1))], Parity::Odd);
                }
            }
            let g: QVec = (0..dim).map(|i| if i < pe { qi(1) } else { qi(-1) }).collect();
            let kernel = g.clone();
            RootSystem {
                spec: spec.clone(),
                roots: b.finish(),
                gram: diag(&g),
                ambient_dim: dim,
                quotient_kernel: Some(kernel),
                labels: labels(pe, pd),
            }
        }
        Family::B | Family::D => {
            let dim = m + n;
            let eps: Vec<usize> = (0..m).collect();
            let del: Vec<usize> = (m..dim).collect();
            let mut b = Builder::new(dim);
            plus_minus_pairs(&mut b, &eps, Parity::Even);
            plus_minus_pairs(&mut b, &del, Parity::Even);
            for &j in &del {
                b.pm(&[(j, qi(2))], Parity::Even);
            }
            cross_pairs(&mut b, &eps, &del, Parity::Odd);
            if spec.family == Family::B {
                for &i in &eps {
                    b.pm(&[(i, qi(1))], Parity::Even);
                }
                for &j in &del {
                    b.pm(&[(j, qi(1))], Parity::Odd);
                }
            }
            let g: QVec = (0..dim).map(|i| if i < m { qi(1) } else { qi(-1) }).collect();
            RootSystem {
                spec: spec.clone(),
                roots: b.finish(),
                gram: diag(&g),
                ambient_dim: dim,
                quotient_kernel: None,
                labels: labels(m, n),
            }
        }
        Family::C => {
            // osp(2|2n-2): one ε coordinate, n-1 δ coordinates.
            let dim = n;
            let del: Vec<usize> = (1..dim).collect();
            let mut b = Builder::new(dim);
            plus_minus_pairs(&mut b, &del, Parity::Even);
            for &j in &del {
                b.pm(&[(j, qi(2))], Parity::Even);
            }
            cross_pairs(&mut b, &[0], &del, Parity::Odd);
            let g: QVec = (0..dim).map(|i| if i == 0 { qi(1) } else { qi(-1) }).collect();
            RootSystem {
                spec: spec.clone(),
                roots: b.finish(),
                gram: diag(&g),
                ambient_dim: dim,
                quotient_kernel: None,
                labels: labels(1, n - 1),
            }
        }
        Family::D21Alpha => {
            let alpha = spec.alpha.clone().expect("validated");
            let mut b = Builder::new(3);
            for k in 0..3 {
                b.pm(&[(k, qi(2))], Parity::Even);
            }
            for s2 in [1, -1] {
                for s3 in [1, -1] {
                    b.pm(&[(0, qi(1)), (1, qi(s2)), (2, qi(s3))], Parity::Odd);
                }
            }
            let half = q(1, 2);
            let g = vec![-(Q::one() + &alpha) * &half, half.clone(), alpha * &half];
            RootSystem {
                spec: spec.clone(),
                roots: b.finish(),
                gram: diag(&g),
                ambient_dim: 3,
                quotient_kernel: None,
                labels: labels(3, 0),
            }
        }
        Family::F4 => {
            // (e1, e2, e3 | d); B(e_i, e_i) : B(d, d) = 1 : -3, rescaled so the
            // even root of largest |B(a, a)| (namely d) has B(d, d) = 2.
            let mut b = Builder::new(4);
            let eps = [0, 1, 2];
            plus_minus_pairs(&mut b, &eps, Parity::Even);
            for &i in &eps {
                b.pm(&[(i, qi(1))], Parity::Even);
            }
            b.pm(&[(3, qi(1))], Parity::Even);
            let h = q(1, 2);
            for s2 in [1, -1] {
                for s3 in [1, -1] {
                    for s4 in [1, -1] {
                        b.pm(
                            &[(0, h.clone()), (1, &h * qi(s2)), (2, &h * qi(s3)), (3, &h * qi(s4))],
                            Parity::Odd,
                        );
                    }
                }
            }
            let e = q(-2, 3);
            RootSystem {
                spec: spec.clone(),
                roots: b.finish(),
                gram: diag(&[e.clone(), e.clone(), e, qi(2)]),
                ambient_dim: 4,
                quotient_kernel: None,
                labels: vec!["e1".into(), "e2".into(), "e3".into(), "d".into()],
            }
        }
        Family::G3 => {
            // (e1, e2 | d) with e3 = -e1 - e2. Kac's form (e_i, e_j) = 1 - 3δ_ij,
            // (d, d) = 2, scaled by 1/4 so that B(2d, 2d) = 2.
            let mut b = Builder::new(3);
            let e: [QVec; 3] = [
                vec![qi(1), qi(0), qi(0)],
                vec![qi(0), qi(1), qi(0)],
                vec![qi(-1), qi(-1), qi(0)],
            ];
            let to_terms = |v: &QVec| -> Vec<(usize, Q)> {
                v.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect()
            };
            for ei in &e {
                b.pm(&to_terms(ei), Parity::Even);
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    b.pm(&to_terms(&crate::linalg::sub(&e[i], &e[j])), Parity::Even);
                }
            }
            b.pm(&[(2, qi(2))], Parity::Even);
            b.pm(&[(2, qi(1))], Parity::Odd);
            for ei in &e {
                let mut plus = ei.clone();
                plus[2] = qi(1);
                let mut minus = ei.clone();
                minus[2] = qi(-1);
                b.pm(&to_terms(&plus), Parity::Odd);
                b.pm(&to_terms(&minus), Parity::Odd);
            }
            let gram = vec![
                vec![q(-1, 2), q(1, 4), qi(0)],
                vec![q(1, 4), q(-1, 2), qi(0)],
                vec![qi(0), qi(0), q(1, 2)],
            ];
            RootSystem {
                spec: spec.clone(),
                roots: b.finish(),
                gram,
                ambient_dim: 3,
                quotient_kernel: None,
                labels: vec!["e1".into(), "e2".into(), "d".into()],
            }
        }
    };
    Ok(rs)
}
