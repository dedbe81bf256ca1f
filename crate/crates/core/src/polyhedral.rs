//! Exact polyhedral primitives: Fourier–Motzkin feasibility with strict
//! inequalities, and double description for extreme rays of pointed cones.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::linalg::{dot, primitive, rank, rref, scale, Q, QMatrix, QVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strictness {
    Weak,
    Strict,
}

/// `normal · x + offset ≥ 0` (weak) or `> 0` (strict).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: QVec,
    pub offset: Q,
    pub strictness: Strictness,
}

impl Halfspace {
    pub fn new(normal: QVec, offset: Q, strictness: Strictness) -> Self {
        Self { normal, offset, strictness }
    }

    pub fn value(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) + &self.offset
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let v = self.value(x);
        match self.strictness {
            Strictness::Weak => !v.is_negative(),
            Strictness::Strict => v.is_positive(),
        }
    }

    fn is_strict(&self) -> bool {
        self.strictness == Strictness::Strict
    }

    /// Divides by a positive scalar so that equal halfspaces compare equal.
    fn normalized(mut self) -> Self {
        let pivot = self
            .normal
            .iter()
            .find(|x| !x.is_zero())
            .or(Some(&self.offset).filter(|x| !x.is_zero()))
            .map(|x| x.abs());
        if let Some(p) = pivot {
            let inv = p.recip();
            self.normal = scale(&inv, &self.normal);
            self.offset *= inv;
        }
        self
    }
}

#[derive(Clone)]
struct Tracked {
    h: Halfspace,
    history: BTreeSet<usize>,
}

/// Eliminates the last variable of every level; keeps each level for
/// back-substitution. `prune` enables Chernikov's redundancy rule.
fn eliminate(system: &[Halfspace], dim: usize, prune: bool) -> Vec<Vec<Halfspace>> {
    let mut levels: Vec<Vec<Halfspace>> = Vec::with_capacity(dim + 1);
    let mut current: Vec<Tracked> = system
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, h)| Tracked { h: h.normalized(), history: BTreeSet::from([i]) })
        .collect();
    levels.push(current.iter().map(|t| t.h.clone()).collect());
    for (step, var) in (0..dim).rev().enumerate() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next: BTreeMap<(QVec, Q), Tracked> = BTreeMap::new();
        let insert = |t: Tracked, next: &mut BTreeMap<(QVec, Q), Tracked>| {
            let key = (t.h.normal.clone(), t.h.offset.clone());
            match next.get_mut(&key) {
                Some(old) => {
                    if t.h.is_strict() && !old.h.is_strict() {
                        *old = t;
                    }
                }
                None => {
                    next.insert(key, t);
                }
            }
        };
        for t in current {
            let c = &t.h.normal[var];
            if c.is_positive() {
                pos.push(t);
            } else if c.is_negative() {
                neg.push(t);
            } else {
                insert(t, &mut next);
            }
        }
        for p in &pos {
            for n in &neg {
                let history: BTreeSet<usize> = p.history.union(&n.history).copied().collect();
                if prune && history.len() > step + 2 {
                    continue;
                }
                let cp = -n.h.normal[var].clone();
                let cn = p.h.normal[var].clone();
                let normal: QVec =
                    p.h.normal.iter().zip(&n.h.normal).map(|(a, b)| &cp * a + &cn * b).collect();
                let offset = &cp * &p.h.offset + &cn * &n.h.offset;
                let strictness = if p.h.is_strict() || n.h.is_strict() {
                    Strictness::Strict
                } else {
                    Strictness::Weak
                };
                let h = Halfspace { normal, offset, strictness }.normalized();
                insert(Tracked { h, history }, &mut next);
            }
        }
        current = next.into_values().collect();
        levels.push(current.iter().map(|t| t.h.clone()).collect());
    }
    levels
}

/// Interval of admissible values for one variable.
struct Interval {
    lower: Option<(Q, bool)>,
    upper: Option<(Q, bool)>,
}

impl Interval {
    fn admits(&self, x: &Q) -> bool {
        let lo = self.lower.as_ref().is_none_or(|(l, s)| if *s { x > l } else { x >= l });
        let hi = self.upper.as_ref().is_none_or(|(u, s)| if *s { x < u } else { x <= u });
        lo && hi
    }

    /// Integer closest to zero inside the interval, else the midpoint.
    fn pick(&self) -> Option<Q> {
        let zero = Q::zero();
        if self.admits(&zero) {
            return Some(zero);
        }
        let candidates: Vec<Q> = [&self.lower, &self.upper]
            .into_iter()
            .flatten()
            .flat_map(|(b, _)| [b.floor(), b.ceil(), b.floor() - Q::one(), b.ceil() + Q::one()])
            .collect();
        if let Some(best) = candidates.into_iter().filter(|c| self.admits(c)).min_by_key(|c| c.abs()) {
            return Some(best);
        }
        match (&self.lower, &self.upper) {
            (Some((l, _)), Some((u, _))) => {
                let mid = (l + u) / Q::from_integer(2.into());
                self.admits(&mid).then_some(mid)
            }
            _ => None,
        }
    }
}

fn back_substitute(levels: &[Vec<Halfspace>], dim: usize) -> Option<QVec> {
    // levels[k] only involves variables 0..dim-k.
    let final_level = &levels[dim];
    if !final_level.iter().all(|h| h.holds(&vec![Q::zero(); dim])) {
        return None;
    }
    let mut x = vec![Q::zero(); dim];
    for var in 0..dim {
        let level = &levels[dim - 1 - var];
        let mut iv = Interval { lower: None, upper: None };
        for h in level {
            let c = &h.normal[var];
            if c.is_zero() {
                continue;
            }
            // c * x_var + rest (+ strict) >= 0, with rest over already fixed vars.
            let rest: Q = h.normal[..var].iter().zip(&x[..var]).fold(h.offset.clone(), |acc, (a, b)| acc + a * b);
            let bound = -rest / c;
            let strict = h.is_strict();
            if c.is_positive() {
                let tighter = match &iv.lower {
                    None => true,
                    Some((l, s)) => bound > *l || (bound == *l && strict && !s),
                };
                if tighter {
                    iv.lower = Some((bound, strict));
                }
            } else {
                let tighter = match &iv.upper {
                    None => true,
                    Some((u, s)) => bound < *u || (bound == *u && strict && !s),
                };
                if tighter {
                    iv.upper = Some((bound, strict));
                }
            }
        }
        x[var] = iv.pick()?;
    }
    Some(x)
}

/// A point satisfying every halfspace, or `None` if the system is
/// infeasible. Exact; strict inequalities are honoured.
pub fn fm_feasible(system: &[Halfspace], dim: usize) -> Option<QVec> {
    for prune in [true, false] {
        let levels = eliminate(system, dim, prune);
        match back_substitute(&levels, dim) {
            Some(x) if system.iter().all(|h| h.holds(&x)) => return Some(x),
            // Pruning only ever drops implied rows, so an infeasible verdict
            // with pruning is final.
            None if prune => {
                let last = &levels[dim];
                if !last.iter().all(|h| h.holds(&vec![Q::zero(); dim])) {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DdError {
    #[error("cone is not pointed: constraint rows have rank {rank} < {dim}")]
    NotPointed { rank: usize, dim: usize },
}

fn invert(m: &[QVec]) -> QMatrix {
    let n = m.len();
    let mut aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    rref(&mut aug, 2 * n);
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Extreme rays of the pointed cone `{y : row · y >= 0}` as primitive
/// integer vectors, in a deterministic order.
pub fn extreme_rays(rows: &[QVec], dim: usize) -> Result<Vec<QVec>, DdError> {
    let rows: Vec<QVec> = rows.iter().filter(|r| !crate::linalg::is_zero(r)).cloned().collect();
    let r = rank(&rows, dim);
    if r < dim {
        return Err(DdError::NotPointed { rank: r, dim });
    }
    // Start from a simplicial cone on `dim` independent rows.
    let mut basis_idx = Vec::new();
    let mut chosen: Vec<QVec> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(row.clone());
        if rank(&trial, dim) > chosen.len() {
            chosen = trial;
            basis_idx.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    let inv = invert(&chosen);
    let mut rays: Vec<QVec> =
        (0..dim).map(|j| primitive(&inv.iter().map(|row| row[j].clone()).collect::<QVec>())).collect();
    let mut processed: Vec<usize> = basis_idx.clone();

    for (i, a) in rows.iter().enumerate() {
        if basis_idx.contains(&i) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(a, r)).collect();
        let zero_set = |r: &QVec| -> BTreeSet<usize> {
            processed.iter().copied().filter(|&k| dot(&rows[k], r).is_zero()).collect()
        };
        let mut next: Vec<QVec> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (pi, p) in rays.iter().enumerate() {
            if !vals[pi].is_positive() {
                continue;
            }
            let zp = zero_set(p);
            for (ni, n) in rays.iter().enumerate() {
                if !vals[ni].is_negative() {
                    continue;
                }
                let common: Vec<QVec> = zp.intersection(&zero_set(n)).map(|&k| rows[k].clone()).collect();
                if common.len() + 2 < dim || rank(&common, dim) != dim - 2 {
                    continue;
                }
                let new: QVec =
                    p.iter().zip(n).map(|(x, y)| &vals[pi] * y - &vals[ni] * x).collect();
                let new = primitive(&new);
                if !next.contains(&new) {
                    next.push(new);
                }
            }
        }
        rays = next;
        processed.push(i);
    }
    rays.sort();
    rays.dedup();
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qi, qvec};

    fn h(normal: &[i64], offset: i64, strict: bool) -> Halfspace {
        Halfspace::new(
            qvec(normal),
            qi(offset),
            if strict { Strictness::Strict } else { Strictness::Weak },
        )
    }

    #[test]
    fn strict_triangle() {
        // x > 0, y > 0, x + y < 1.
        let sys = [h(&[1, 0], 0, true), h(&[0, 1], 0, true), h(&[-1, -1], 1, true)];
        let x = fm_feasible(&sys, 2).unwrap();
        assert!(sys.iter().all(|s| s.holds(&x)));
    }

    #[test]
    fn strict_boundary_infeasible() {
        // x >= 0, x <= 0, x > 0.
        let sys = [h(&[1], 0, false), h(&[-1], 0, false), h(&[1], 0, true)];
        assert!(fm_feasible(&sys, 1).is_none());
        // but weak-only is feasible at the single point 0.
        assert_eq!(fm_feasible(&sys[..2], 1), Some(qvec(&[0])));
    }

    #[test]
    fn orthant_rays() {
        let rays = extreme_rays(&[qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1])], 3).unwrap();
        assert_eq!(rays.len(), 3);
        let rays = extreme_rays(&[qvec(&[-1, 0]), qvec(&[0, 1])], 2).unwrap();
        assert_eq!(rays, vec![qvec(&[-1, 0]), qvec(&[0, 1])]);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // Cone over the square |x| <= z, |y| <= z.
        let rows = [qvec(&[1, 0, 1]), qvec(&[-1, 0, 1]), qvec(&[0, 1, 1]), qvec(&[0, -1, 1])];
        let rays = extreme_rays(&rows, 3).unwrap();
        assert_eq!(rays.len(), 4);
        for r in &rays {
            assert_eq!(r[2], qi(1));
            assert!(rows.iter().all(|a| dot(a, r) >= qi(0)));
        }
    }

    #[test]
    fn not_pointed() {
        assert!(matches!(extreme_rays(&[qvec(&[1, 0])], 2), Err(DdError::NotPointed { .. })));
    }
}
