//! Matrix realizations used as an independent root-system oracle: gl(p|q)
//! for type A and the orthosymplectic superalgebras for types B, C and D.
//! Root spaces are computed as ad-eigenspaces of the diagonal Cartan
//! subalgebra.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use superquant::rootdata::{build_root_system, AlgebraSpec, Parity};

type R = BigRational;

fn r(n: i64) -> R {
    R::from_integer(n.into())
}

/// A basis vector of the defining superspace: its weight and whether it is odd.
#[derive(Clone)]
struct Basis {
    weight: Vec<i64>,
    odd: bool,
}

/// Rank of a rational matrix by plain Gaussian elimination.
fn rank(mut rows: Vec<Vec<R>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rk = 0;
    for c in 0..cols {
        let Some(p) = (rk..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rk, p);
        let piv = rows[rk][c].clone();
        for i in 0..rows.len() {
            if i != rk && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / piv.clone();
                for k in 0..cols {
                    let v = rows[rk][k].clone() * f.clone();
                    rows[i][k] -= v;
                }
            }
        }
        rk += 1;
    }
    rk
}

struct Realization {
    basis: Vec<Basis>,
    /// Even supersymmetric form; `None` for gl, where every matrix unit counts.
    form: Option<Vec<Vec<R>>>,
}

impl Realization {
    fn gl(p: usize, q: usize) -> Self {
        let dim = p + q;
        let basis = (0..dim)
            .map(|i| {
                let mut w = vec![0; dim];
                w[i] = 1;
                Basis { weight: w, odd: i >= p }
            })
            .collect();
        Self { basis, form: None }
    }

    /// osp(even_dim | 2n) with `m = even_dim / 2` ε coordinates and `n` δ
    /// coordinates, in the order ε_1..ε_m, δ_1..δ_n.
    fn osp(even_dim: usize, n: usize) -> Self {
        let m = even_dim / 2;
        let dim = m + n;
        let unit = |i: usize, s: i64| {
            let mut w = vec![0; dim];
            w[i] = s;
            w
        };
        let mut basis = Vec::new();
        for i in 0..m {
            basis.push(Basis { weight: unit(i, 1), odd: false });
            basis.push(Basis { weight: unit(i, -1), odd: false });
        }
        if even_dim % 2 == 1 {
            basis.push(Basis { weight: vec![0; dim], odd: false });
        }
        for j in 0..n {
            basis.push(Basis { weight: unit(m + j, 1), odd: true });
            basis.push(Basis { weight: unit(m + j, -1), odd: true });
        }
        let size = basis.len();
        let mut form = vec![vec![r(0); size]; size];
        for i in 0..m {
            form[2 * i][2 * i + 1] = r(1);
            form[2 * i + 1][2 * i] = r(1);
        }
        let off = 2 * m + even_dim % 2;
        if even_dim % 2 == 1 {
            form[2 * m][2 * m] = r(1);
        }
        for j in 0..n {
            form[off + 2 * j][off + 2 * j + 1] = r(1);
            form[off + 2 * j + 1][off + 2 * j] = r(-1);
        }
        Self { basis, form: Some(form) }
    }

    /// Nonzero weights of the algebra with their root-space dimensions and
    /// parities.
    fn roots(&self) -> BTreeMap<Vec<i64>, (usize, bool)> {
        let n = self.basis.len();
        let mut units: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let w: Vec<i64> = self.basis[a].weight.iter().zip(&self.basis[b].weight).map(|(x, y)| x - y).collect();
                units.entry(w).or_default().push((a, b));
            }
        }
        let mut out = BTreeMap::new();
        for (w, es) in units {
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            let parities: Vec<bool> = es.iter().map(|&(a, b)| self.basis[a].odd != self.basis[b].odd).collect();
            assert!(parities.iter().all(|&p| p == parities[0]), "weight space of mixed parity");
            let odd = parities[0];
            let dim = match &self.form {
                None => es.len(),
                Some(g) => {
                    // B(X e_u, e_v) + (-1)^{|X||u|} B(e_u, X e_v) = 0 for X = Σ c_ab E_ab.
                    let mut rows = Vec::new();
                    for u in 0..n {
                        for v in 0..n {
                            let sign = if odd && self.basis[u].odd { r(-1) } else { r(1) };
                            let row: Vec<R> = es
                                .iter()
                                .map(|&(a, b)| {
                                    let mut x = R::zero();
                                    if b == u {
                                        x += g[a][v].clone();
                                    }
                                    if b == v {
                                        x += sign.clone() * g[u][a].clone();
                                    }
                                    x
                                })
                                .collect();
                            rows.push(row);
                        }
                    }
                    es.len() - rank(rows)
                }
            };
            if dim > 0 {
                out.insert(w, (dim, odd));
            }
        }
        out
    }

    /// Supertrace form on the coordinate Cartan elements.
    fn cartan_form(&self) -> Vec<R> {
        let dim = self.basis[0].weight.len();
        (0..dim)
            .map(|k| {
                self.basis.iter().fold(R::zero(), |acc, b| {
                    let h = r(b.weight[k]);
                    let s = if b.odd { r(-1) } else { r(1) };
                    acc + s * h.clone() * h
                })
            })
            .collect()
    }
}

fn realization(spec: &AlgebraSpec) -> Realization {
    use superquant::rootdata::Family;
    match spec.family {
        Family::A => Realization::gl(spec.m + 1, spec.n + 1),
        Family::B => Realization::osp(2 * spec.m + 1, spec.n),
        Family::C => Realization::osp(2, spec.n - 1),
        Family::D => Realization::osp(2 * spec.m, spec.n),
        _ => unreachable!(),
    }
}

fn to_int(v: &[R]) -> Vec<i64> {
    v.iter()
        .map(|x| {
            assert!(x.is_integer());
            i64::try_from(x.to_integer()).unwrap()
        })
        .collect()
}

/// Panics with a description when `spec`'s root data disagree with the
/// realization.
pub fn check(spec: AlgebraSpec) {
    let rs = build_root_system(&spec).unwrap();
    let real = realization(&spec);
    let oracle = real.roots();
    let mut ours = BTreeMap::new();
    for root in &rs.roots {
        let prev = ours.insert(to_int(&root.coords), (1usize, root.parity == Parity::Odd));
        assert!(prev.is_none(), "{spec}: duplicate root");
    }
    assert_eq!(ours, oracle, "{spec}: root sets differ");

    // The form on weights is dual to the supertrace form on the Cartan: up to
    // one overall scalar, gram[i][i] * str(H_i H_i) is constant.
    let cf = real.cartan_form();
    let prods: Vec<R> = (0..cf.len()).map(|i| rs.gram[i][i].clone() * cf[i].clone()).collect();
    assert!(prods[0].is_positive(), "{spec}: form has the wrong sign");
    assert!(prods.iter().all(|p| *p == prods[0]), "{spec}: form not proportional to supertrace dual");
    for i in 0..cf.len() {
        for j in 0..cf.len() {
            if i != j {
                assert!(rs.gram[i][j].is_zero());
            }
        }
    }
}

