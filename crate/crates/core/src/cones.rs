//! Regions of weights cut out by coroot pairings: the Harish-Chandra cone,
//! the parameter set C, cells, regular sets, and their lattice points.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::linalg::{add, coordinates_in, dot, mat_vec, nullspace, primitive, unit, Q, QVec};
use crate::polyhedral::{self, Halfspace, Strictness};
use crate::possys::Context;
use crate::rootdata::{Root, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("cell {cell} is not simplicial: {rays} extreme rays in dimension {dim}")]
    NotSimplicial { cell: String, rays: usize, dim: usize },
    #[error("weight has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge0,
    Gt0,
    Lt0,
    Eq0,
    Ne0,
}

impl Relation {
    pub fn holds(self, v: &Q) -> bool {
        match self {
            Relation::Ge0 => !v.is_negative(),
            Relation::Gt0 => v.is_positive(),
            Relation::Lt0 => v.is_negative(),
            Relation::Eq0 => v.is_zero(),
            Relation::Ne0 => !v.is_zero(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge0 => ">=0",
            Relation::Gt0 => ">0",
            Relation::Lt0 => "<0",
            Relation::Eq0 => "=0",
            Relation::Ne0 => "!=0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shift {
    None,
    Rho,
}

/// `(λ + shift)(h_root) relation 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub root: Root,
    pub relation: Relation,
    pub shift: Shift,
}

/// One constraint in affine form: `normal · λ + offset  relation  0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub normal: QVec,
    pub offset: Q,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeRegion {
    pub constraints: Vec<Constraint>,
    pub rs: RootSystem,
    pub rho: QVec,
    rows: Vec<Row>,
}

impl ConeRegion {
    pub fn new(rs: &RootSystem, rho: &[Q], constraints: Vec<Constraint>) -> Self {
        let rows = constraints
            .iter()
            .map(|c| {
                debug_assert!(rs.is_root(&c.root.coords));
                let normal = mat_vec(&rs.gram, &c.root.coords);
                let offset = match c.shift {
                    Shift::None => Q::zero(),
                    Shift::Rho => dot(&normal, rho),
                };
                Row { normal, offset, relation: c.relation }
            })
            .collect();
        Self { constraints, rs: rs.clone(), rho: rho.to_vec(), rows }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rs.ambient_dim
    }

    pub fn contains(&self, lam: &[Q]) -> bool {
        lam.len() == self.dim()
            && self.rows.iter().all(|r| r.relation.holds(&(dot(&r.normal, lam) + &r.offset)))
    }

    /// The convex constraints as halfspaces. `Ne0` rows are not convex and
    /// are left out.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let mut out = Vec::new();
        for r in &self.rows {
            let neg = || (crate::linalg::neg(&r.normal), -r.offset.clone());
            match r.relation {
                Relation::Ge0 => out.push(Halfspace::new(r.normal.clone(), r.offset.clone(), Strictness::Weak)),
                Relation::Gt0 => out.push(Halfspace::new(r.normal.clone(), r.offset.clone(), Strictness::Strict)),
                Relation::Lt0 => {
                    let (n, o) = neg();
                    out.push(Halfspace::new(n, o, Strictness::Strict));
                }
                Relation::Eq0 => {
                    out.push(Halfspace::new(r.normal.clone(), r.offset.clone(), Strictness::Weak));
                    let (n, o) = neg();
                    out.push(Halfspace::new(n, o, Strictness::Weak));
                }
                Relation::Ne0 => {}
            }
        }
        out
    }

    fn with(&self, extra: Vec<Constraint>) -> Self {
        let mut cs = self.constraints.clone();
        cs.extend(extra);
        Self::new(&self.rs, &self.rho, cs)
    }
}

fn constraints(roots: &[Root], relation: Relation, shift: Shift) -> Vec<Constraint> {
    roots.iter().map(|r| Constraint { root: r.clone(), relation, shift }).collect()
}

/// C̃: `λ(h_α) ≥ 0` on Δ_c⁺ and `λ(h_β) < 0` on Δ_n⁺ ∪ Δ₁⁺.
pub fn hc_cone(ctx: &Context) -> ConeRegion {
    let mut cs = constraints(&ctx.compact_positive(), Relation::Ge0, Shift::None);
    cs.extend(constraints(&ctx.q_plus(), Relation::Lt0, Shift::None));
    ConeRegion::new(&ctx.rs, &ctx.ps.rho, cs)
}

/// C: C̃ together with `(λ + ρ)(h_β) < 0` on Δ_n⁺ ∪ Δ₁⁺.
pub fn parameter_set_c(ctx: &Context) -> ConeRegion {
    hc_cone(ctx).with(constraints(&ctx.q_plus(), Relation::Lt0, Shift::Rho))
}

/// Positive roots that are nonnegative combinations of `r`.
pub fn closure_of_r(ctx: &Context, r: &[Root]) -> Vec<Root> {
    if r.is_empty() {
        return Vec::new();
    }
    let basis: Vec<QVec> = r.iter().map(|x| x.coords.clone()).collect();
    ctx.ps
        .positives
        .iter()
        .filter(|a| coordinates_in(&basis, &a.coords).is_some_and(|c| c.iter().all(|x| !x.is_negative())))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// Bit `i` set iff the `i`-th compact simple root is in R.
    pub mask: u64,
    pub r: Vec<Root>,
    pub closure_r: Vec<Root>,
    pub region: ConeRegion,
    /// Basis of 𝔞_σ* (the common kernel of the R-coroots; on the type-A
    /// slice when there is a supertrace kernel).
    pub subspace: Vec<QVec>,
    /// `R` written as positions in the list of simple roots, 1-based.
    pub simple_indices: Vec<usize>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.subspace.len()
    }

    pub fn contains(&self, lam: &[Q]) -> bool {
        self.region.contains(lam)
    }

    /// `R={a1,a3}` style label.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.simple_indices.iter().map(|i| format!("a{i}")).collect();
        format!("R={{{}}}", inner.join(","))
    }

    /// Coordinates of an ambient weight in the subspace basis, if it lies
    /// in 𝔞_σ* (type-A weights are first moved to the slice).
    pub fn to_basis(&self, lam: &[Q]) -> Option<QVec> {
        coordinates_in(&self.subspace, &self.region.rs.canonical(lam))
    }

    pub fn from_basis(&self, y: &[Q]) -> QVec {
        let dim = self.region.dim();
        self.subspace
            .iter()
            .zip(y)
            .fold(crate::linalg::zeros(dim), |acc, (b, c)| add(&acc, &crate::linalg::scale(c, b)))
    }
}

fn subspace_for(rs: &RootSystem, r: &[Root]) -> Vec<QVec> {
    let mut rows: Vec<QVec> = r.iter().map(|a| mat_vec(&rs.gram, &a.coords)).collect();
    if let Some(i) = rs.slice_coordinate() {
        rows.push(unit(rs.ambient_dim, i));
    }
    nullspace(&rows, rs.ambient_dim)
}

pub fn cell_for_mask(ctx: &Context, mask: u64) -> Cell {
    let pi_c = &ctx.ps.pi_c;
    let in_r = |i: usize| mask >> i & 1 == 1;
    let r: Vec<Root> = pi_c.iter().enumerate().filter(|(i, _)| in_r(*i)).map(|(_, x)| x.clone()).collect();
    let rest: Vec<Root> = pi_c.iter().enumerate().filter(|(i, _)| !in_r(*i)).map(|(_, x)| x.clone()).collect();
    let mut extra = constraints(&r, Relation::Eq0, Shift::None);
    extra.extend(constraints(&rest, Relation::Gt0, Shift::None));
    let region = parameter_set_c(ctx).with(extra);
    let simple_indices = r
        .iter()
        .map(|x| ctx.ps.simples.iter().position(|s| s == x).expect("compact simple root is simple") + 1)
        .collect();
    Cell {
        mask,
        closure_r: closure_of_r(ctx, &r),
        subspace: subspace_for(&ctx.rs, &r),
        r,
        region,
        simple_indices,
    }
}

/// One cell per subset of Π_c, ordered by bitmask.
pub fn cells(ctx: &Context) -> Vec<Cell> {
    let k = ctx.ps.pi_c.len();
    assert!(k < 64, "too many compact simple roots");
    (0..1u64 << k).map(|mask| cell_for_mask(ctx, mask)).collect()
}

/// The cell containing `lam`, or `None` when `lam ∉ C`.
pub fn cell_of(ctx: &Context, lam: &[Q]) -> Option<Cell> {
    cells(ctx).into_iter().find(|c| c.contains(lam))
}

/// (𝔞_σ*)_reg: λ in 𝔞_σ* with `λ(h_α) ≠ 0` for α ∈ Δ⁺ ∖ R̄.
pub fn regular_set(ctx: &Context, cell: &Cell) -> ConeRegion {
    let mut cs = constraints(&cell.r, Relation::Eq0, Shift::None);
    let walls: Vec<Root> =
        ctx.ps.positives.iter().filter(|a| !cell.closure_r.contains(a)).cloned().collect();
    cs.extend(constraints(&walls, Relation::Ne0, Shift::None));
    ConeRegion::new(&ctx.rs, &ctx.ps.rho, cs)
}

/// The `Ne0` functionals of the regular set, written on 𝔞_σ* in the cell's
/// subspace coordinates.
pub fn regular_walls(ctx: &Context, cell: &Cell) -> Vec<QVec> {
    regular_set(ctx, cell)
        .rows()
        .iter()
        .filter(|r| r.relation == Relation::Ne0)
        .map(|r| cell.subspace.iter().map(|b| dot(&r.normal, b)).collect())
        .collect()
}

/// Which lattice to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeMode {
    /// Type-A weights are represented on the slice `last δ = 0`, one point
    /// per class modulo the supertrace direction.
    Slice,
    /// Every ambient coordinate is free.
    Ambient,
}

/// Points of `(1/scale) ℤ^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub scale: u32,
    pub mode: LatticeMode,
}

impl Default for Lattice {
    fn default() -> Self {
        Self { scale: 1, mode: LatticeMode::Slice }
    }
}

impl Lattice {
    pub fn contains(&self, lam: &[Q]) -> bool {
        let s = Q::from_integer(self.scale.into());
        lam.iter().all(|x| (x * &s).is_integer())
    }
}

/// All lattice points with coordinates of absolute value at most `n`, in
/// lexicographic order.
pub fn box_points(rs: &RootSystem, n: u32, lattice: &Lattice) -> Vec<QVec> {
    let dim = rs.ambient_dim;
    let fixed = match lattice.mode {
        LatticeMode::Slice => rs.slice_coordinate(),
        LatticeMode::Ambient => None,
    };
    let bound = i64::from(n) * i64::from(lattice.scale);
    let s = Q::from_integer(lattice.scale.into());
    let free: Vec<usize> = (0..dim).filter(|i| Some(*i) != fixed).collect();
    let mut out = Vec::new();
    let mut idx = vec![-bound; free.len()];
    loop {
        let mut p = vec![Q::zero(); dim];
        for (k, &i) in free.iter().enumerate() {
            p[i] = Q::from_integer(idx[k].into()) / &s;
        }
        out.push(p);
        let mut k = free.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < bound {
                idx[k] += 1;
                break;
            }
            idx[k] = -bound;
        }
    }
}

/// Lattice points of `region` in the box of radius `n`, on the default
/// lattice (integers, type-A slice).
pub fn enumerate_integral(region: &ConeRegion, n: u32) -> Vec<QVec> {
    enumerate_integral_in(region, n, &Lattice::default())
}

pub fn enumerate_integral_in(region: &ConeRegion, n: u32, lattice: &Lattice) -> Vec<QVec> {
    crate::par::filter(box_points(&region.rs, n, lattice), |p| region.contains(p))
}

/// Primitive integral generators of the closed homogeneous cone of a cell:
/// ρ-shifted rows dropped, strict rows relaxed, restricted to 𝔞_σ*.
pub fn extreme_rays(cell: &Cell) -> Result<Vec<QVec>, ConeError> {
    let dim = cell.dim();
    let rows: Vec<QVec> = cell
        .region
        .constraints
        .iter()
        .zip(cell.region.rows())
        .filter(|(c, _)| c.shift == Shift::None)
        .filter_map(|(_, r)| match r.relation {
            Relation::Ge0 | Relation::Gt0 => Some(r.normal.clone()),
            Relation::Lt0 => Some(crate::linalg::neg(&r.normal)),
            Relation::Eq0 | Relation::Ne0 => None,
        })
        .map(|n| cell.subspace.iter().map(|b| dot(&n, b)).collect())
        .collect();
    let not_simplicial = |rays: usize| ConeError::NotSimplicial { cell: cell.label(), rays, dim };
    let rays = polyhedral::extreme_rays(&rows, dim).map_err(|_| not_simplicial(0))?;
    if rays.len() != dim {
        return Err(not_simplicial(rays.len()));
    }
    Ok(rays.iter().map(|y| primitive(&cell.from_basis(y))).collect())
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} {}", crate::linalg::VecDisplay(&self.normal), crate::linalg::fmt_q(&self.offset), self.relation.symbol())
    }
}

/// `true` iff `lam = Σ c_j rays_j` with every `c_j > 0` (rays linearly
/// independent).
pub fn in_open_cone(rays: &[QVec], lam: &[Q]) -> bool {
    coordinates_in(rays, lam).is_some_and(|c| c.iter().all(|x| x.is_positive()))
}

/// `true` iff `lam` is a nonnegative combination of the (independent) rays.
pub fn in_closed_cone(rays: &[QVec], lam: &[Q]) -> bool {
    coordinates_in(rays, lam).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
}
