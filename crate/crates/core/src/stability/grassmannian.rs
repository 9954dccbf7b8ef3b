//! Existence of flags of subrepresentations with prescribed dimension vectors.
//!
//! Each subspace is written in a Schubert cell: column `k` of the basis matrix has a 1 in
//! pivot row `p_k`, zeros above it and in the other pivot rows, and free entries below.
//! Invariance under arrows and containment between flag levels become polynomial equations
//! in the free entries.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::exactalg::{
    find_rational_point, groebner_inconsistent, variable_names, Consistency, GroebnerCaps, Polynomial, Rat, RatMatrix,
};
use crate::rep::Representation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    Yes,
    No,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct FlagSearch {
    pub existence: Existence,
    /// Rational bases `[level][vertex]` of a witnessing flag, when one was extracted.
    pub witness: Option<Vec<Vec<RatMatrix>>>,
    pub charts_tried: usize,
}

type PolyMat = Vec<Vec<Polynomial>>;

/// All chains `P_1 ⊆ … ⊆ P_K ⊆ {0..d}` with `|P_k| = sizes[k]`, in lexicographic order.
fn pivot_chains(d: usize, sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn subsets(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            subsets(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    // build from the top level down so that each level is a subset of the next
    fn rec(sizes: &[usize], level: usize, above: Vec<usize>, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let mut choices = Vec::new();
        subsets(&above, sizes[level], 0, &mut Vec::new(), &mut choices);
        for c in choices {
            acc[level] = c.clone();
            if level == 0 {
                out.push(acc.clone());
            } else {
                rec(sizes, level - 1, c, acc, out);
            }
        }
    }
    if sizes.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut acc = vec![Vec::new(); sizes.len()];
    rec(sizes, sizes.len() - 1, (0..d).collect(), &mut acc, &mut out);
    out.sort();
    out
}

struct ChartSystem {
    vars: Arc<[String]>,
    /// `[level][vertex]` basis matrices with polynomial entries.
    bases: Vec<Vec<PolyMat>>,
    equations: Vec<Polynomial>,
}

fn const_times(m: &RatMatrix, x: &PolyMat, vars: &Arc<[String]>) -> PolyMat {
    let cols = x.first().map_or(0, Vec::len);
    (0..m.rows())
        .map(|r| {
            (0..cols)
                .map(|c| {
                    let mut acc = Polynomial::zero(vars.clone());
                    for (k, row) in x.iter().enumerate() {
                        if !m[(r, k)].is_zero() && !row[c].is_zero() {
                            acc = acc.add(&row[c].scale(&m[(r, k)]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Entries of `y − x · y[pivots]`, which vanish iff the columns of `y` lie in the span of `x`.
fn span_conditions(x: &PolyMat, pivots: &[usize], y: &PolyMat, out: &mut Vec<Polynomial>) {
    let ycols = y.first().map_or(0, Vec::len);
    for (r, xrow) in x.iter().enumerate() {
        if pivots.contains(&r) {
            continue;
        }
        for c in 0..ycols {
            let mut p = y[r][c].clone();
            for (k, &pr) in pivots.iter().enumerate() {
                if !xrow[k].is_zero() && !y[pr][c].is_zero() {
                    p = p.sub(&xrow[k].mul(&y[pr][c]));
                }
            }
            if !p.is_zero() {
                out.push(p);
            }
        }
    }
}

fn build_chart(m: &Representation, pivots: &[Vec<Vec<usize>>]) -> ChartSystem {
    // pivots[vertex][level]
    let n = m.dims().len();
    let levels = pivots.first().map_or(0, Vec::len);
    let mut slots = Vec::new();
    for (v, chain) in pivots.iter().enumerate() {
        for (l, piv) in chain.iter().enumerate() {
            for (k, &p) in piv.iter().enumerate() {
                for r in p + 1..m.dim(v) {
                    if !piv.contains(&r) {
                        slots.push((l, v, r, k));
                    }
                }
            }
        }
    }
    let vars = variable_names("x", slots.len());
    let mut bases: Vec<Vec<PolyMat>> = (0..levels)
        .map(|l| {
            (0..n)
                .map(|v| {
                    let piv = &pivots[v][l];
                    (0..m.dim(v))
                        .map(|r| {
                            (0..piv.len())
                                .map(|k| {
                                    if piv[k] == r {
                                        Polynomial::constant(vars.clone(), Rat::one())
                                    } else {
                                        Polynomial::zero(vars.clone())
                                    }
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    for (i, &(l, v, r, k)) in slots.iter().enumerate() {
        bases[l][v][r][k] = Polynomial::var(vars.clone(), i);
    }
    let mut equations = Vec::new();
    let q = m.algebra().quiver();
    for l in 0..levels {
        for (a, arrow) in q.arrows().iter().enumerate() {
            let image = const_times(m.map(a), &bases[l][arrow.tail], &vars);
            span_conditions(&bases[l][arrow.head], &pivots[arrow.head][l], &image, &mut equations);
        }
        if l > 0 {
            for v in 0..n {
                span_conditions(&bases[l][v], &pivots[v][l], &bases[l - 1][v], &mut equations);
            }
        }
    }
    ChartSystem { vars, bases, equations }
}

fn evaluate(sys: &ChartSystem, point: &[Rat]) -> Vec<Vec<RatMatrix>> {
    sys.bases
        .iter()
        .map(|lvl| {
            lvl.iter()
                .map(|x| {
                    let cols = x.first().map_or(0, Vec::len);
                    RatMatrix::from_fn(x.len(), cols, |r, c| x[r][c].eval(point))
                })
                .collect()
        })
        .collect()
}

/// Decides whether `M` has a flag of subrepresentations `V_1 ⊆ … ⊆ V_K` with
/// `dim V_k = chain[k]`. With `want_witness`, keeps scanning consistent charts for a
/// rational point.
pub fn flag_exists(m: &Representation, chain: &[Vec<usize>], want_witness: bool, caps: GroebnerCaps) -> Result<FlagSearch> {
    let n = m.dims().len();
    let per_vertex: Vec<Vec<Vec<Vec<usize>>>> = (0..n)
        .map(|v| {
            let sizes: Vec<usize> = chain.iter().map(|e| e[v]).collect();
            pivot_chains(m.dim(v), &sizes)
        })
        .collect();
    let mut idx = vec![0usize; n];
    let mut existence = Existence::No;
    let mut charts_tried = 0;
    if per_vertex.iter().any(Vec::is_empty) {
        return Ok(FlagSearch { existence, witness: None, charts_tried });
    }
    loop {
        let pivots: Vec<Vec<Vec<usize>>> = (0..n).map(|v| per_vertex[v][idx[v]].clone()).collect();
        charts_tried += 1;
        let sys = build_chart(m, &pivots);
        let zero = vec![Rat::zero(); sys.vars.len()];
        if sys.equations.iter().all(|p| p.eval(&zero).is_zero()) {
            return Ok(FlagSearch { existence: Existence::Yes, witness: Some(evaluate(&sys, &zero)), charts_tried });
        }
        match groebner_inconsistent(&sys.equations, caps)? {
            Consistency::Inconsistent => {}
            Consistency::Undecided => {
                if existence == Existence::No {
                    existence = Existence::Undecided;
                }
            }
            Consistency::Consistent => {
                if !want_witness {
                    return Ok(FlagSearch { existence: Existence::Yes, witness: None, charts_tried });
                }
                existence = Existence::Yes;
                if let Some(pt) = find_rational_point(&sys.equations, caps)? {
                    return Ok(FlagSearch { existence, witness: Some(evaluate(&sys, &pt)), charts_tried });
                }
            }
        }
        // odometer over vertices
        let mut v = n;
        loop {
            if v == 0 {
                return Ok(FlagSearch { existence, witness: None, charts_tried });
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < per_vertex[v].len() {
                break;
            }
            idx[v] = 0;
        }
    }
}
