//! Dimensions of weight spaces of semi-invariants on representation varieties.
//!
//! `SI(A,d)_{mθ}` is computed degreewise: monomials in the arrow entries with torus weight
//! `mθ`, then the common kernel of the raising and lowering derivations of `gl(d)`, then the
//! quotient by the part of the relation ideal lying in that kernel.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bound_quiver::BoundQuiverAlgebra;
use crate::error::{Error, Result};
use crate::exactalg::{GroebnerCaps, Rat, RatMatrix, RowSpace};
use crate::forms::{eval_weight, tits_form, QClass};
use crate::sampling::{random_representation, rng_from_seed};
use crate::stability::king_test;

pub const DEFAULT_DEGREE_CAP: u32 = 60;

type Mono = Vec<u32>;
type SPoly = BTreeMap<Mono, Rat>;

struct Var {
    tail_coord: usize,
    head_coord: usize,
}

/// Torus coordinates `(i, k)`, `k < d(i)`, and the entries `x^a_{rc}` of `mod(Q, d)`.
struct Space {
    offsets: Vec<usize>,
    ncoords: usize,
    vars: Vec<Var>,
    /// `var_index[a][r][c]`
    var_index: Vec<Vec<Vec<usize>>>,
    out_vars: Vec<Vec<usize>>,
    coord_order: Vec<usize>,
}

impl Space {
    fn new(alg: &BoundQuiverAlgebra, d: &[usize]) -> Result<Self> {
        let q = alg.quiver();
        let order = q
            .topological_order()
            .ok_or_else(|| Error::NotApplicable("semi-invariant dimensions need an acyclic quiver".into()))?;
        let mut offsets = Vec::with_capacity(d.len());
        let mut acc = 0;
        for &x in d {
            offsets.push(acc);
            acc += x;
        }
        let mut vars = Vec::new();
        let mut var_index = Vec::new();
        let mut out_vars = vec![Vec::new(); acc];
        for a in q.arrows() {
            let mut rows = Vec::new();
            for r in 0..d[a.head] {
                let mut cols = Vec::new();
                for c in 0..d[a.tail] {
                    let v = Var { tail_coord: offsets[a.tail] + c, head_coord: offsets[a.head] + r };
                    out_vars[v.tail_coord].push(vars.len());
                    cols.push(vars.len());
                    vars.push(v);
                }
                rows.push(cols);
            }
            var_index.push(rows);
        }
        let coord_order = order.iter().flat_map(|&v| offsets[v]..offsets[v] + d[v]).collect();
        Ok(Space { offsets, ncoords: acc, vars, var_index, out_vars, coord_order })
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Torus weight of a monomial: `+1` per tail coordinate, `−1` per head coordinate.
    fn weight(&self, m: &[u32]) -> Vec<i64> {
        let mut w = vec![0i64; self.ncoords];
        for (v, &e) in m.iter().enumerate() {
            w[self.vars[v].tail_coord] += e as i64;
            w[self.vars[v].head_coord] -= e as i64;
        }
        w
    }

    /// All monomials of the given torus weight, as flows in topological order.
    fn monomials(&self, target: &[i64]) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars()];
        let mut inflow = vec![0i64; self.ncoords];
        self.flow(0, target, &mut cur, &mut inflow, &mut out);
        out.sort();
        out
    }

    fn flow(&self, pos: usize, target: &[i64], cur: &mut Mono, inflow: &mut Vec<i64>, out: &mut Vec<Mono>) {
        if pos == self.coord_order.len() {
            out.push(cur.clone());
            return;
        }
        let u = self.coord_order[pos];
        let need = target[u] + inflow[u];
        if need < 0 {
            return;
        }
        let vars = &self.out_vars[u];
        if vars.is_empty() {
            if need == 0 {
                self.flow(pos + 1, target, cur, inflow, out);
            }
            return;
        }
        self.distribute(pos, vars, 0, need as u32, target, cur, inflow, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &self,
        pos: usize,
        vars: &[usize],
        k: usize,
        left: u32,
        target: &[i64],
        cur: &mut Mono,
        inflow: &mut Vec<i64>,
        out: &mut Vec<Mono>,
    ) {
        let v = vars[k];
        let h = self.vars[v].head_coord;
        let range = if k + 1 == vars.len() { left..=left } else { 0..=left };
        for e in range {
            cur[v] = e;
            inflow[h] += e as i64;
            if k + 1 == vars.len() {
                self.flow(pos + 1, target, cur, inflow, out);
            } else {
                self.distribute(pos, vars, k + 1, left - e, target, cur, inflow, out);
            }
            inflow[h] -= e as i64;
        }
        cur[v] = 0;
    }

    /// Images of the variables under `E_{p,q}` at vertex `i`, for simple root vectors.
    fn derivations(&self, alg: &BoundQuiverAlgebra, d: &[usize]) -> Vec<Vec<Vec<(usize, i64)>>> {
        let q = alg.quiver();
        let mut gens = Vec::new();
        for (i, &di) in d.iter().enumerate() {
            for p in 0..di.saturating_sub(1) {
                for (s, t) in [(p, p + 1), (p + 1, p)] {
                    // E_{s,t}: row s gets row t on arrows into i; column t loses column s on arrows out of i
                    let mut images = vec![Vec::new(); self.nvars()];
                    for (a, arrow) in q.arrows().iter().enumerate() {
                        if arrow.head == i {
                            for c in 0..d[arrow.tail] {
                                images[self.var_index[a][s][c]].push((self.var_index[a][t][c], 1));
                            }
                        }
                        if arrow.tail == i {
                            for r in 0..d[arrow.head] {
                                images[self.var_index[a][r][t]].push((self.var_index[a][r][s], -1));
                            }
                        }
                    }
                    gens.push(images);
                }
            }
        }
        gens
    }

    /// Entry `(ρ, σ)` of `M(r)` as a polynomial.
    fn relation_entry(
        &self,
        alg: &BoundQuiverAlgebra,
        d: &[usize],
        rel: &crate::bound_quiver::Relation,
        rho: usize,
        sigma: usize,
    ) -> SPoly {
        let q = alg.quiver();
        let mut total = SPoly::new();
        for (c, path) in rel.terms() {
            // column vector of polynomials, starting at e_σ
            let mut vec: Vec<SPoly> = (0..d[rel.source()])
                .map(|k| {
                    let mut p = SPoly::new();
                    if k == sigma {
                        p.insert(vec![0; self.nvars()], Rat::one());
                    }
                    p
                })
                .collect();
            for &a in &path.arrows {
                let arrow = q.arrow(a);
                vec = (0..d[arrow.head])
                    .map(|r| {
                        let mut acc = SPoly::new();
                        for (k, p) in vec.iter().enumerate() {
                            let v = self.var_index[a][r][k];
                            for (m, coef) in p {
                                let mut m2 = m.clone();
                                m2[v] += 1;
                                add_term(&mut acc, m2, coef.clone());
                            }
                        }
                        acc
                    })
                    .collect();
            }
            for (m, coef) in &vec[rho] {
                add_term(&mut total, m.clone(), coef * c);
            }
        }
        total
    }
}

fn add_term(p: &mut SPoly, m: Mono, c: Rat) {
    match p.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// `dim SI(A, d)_{mθ}`.
pub fn si_dim(alg: &Arc<BoundQuiverAlgebra>, d: &[usize], theta: &[i64], m: u32, degree_cap: u32) -> Result<usize> {
    let n = alg.vertex_count();
    if d.len() != n || theta.len() != n {
        return Err(Error::DimensionMismatch(format!("expected {n} entries in d and θ")));
    }
    if m == 0 {
        return Ok(1);
    }
    let space = Space::new(alg, d)?;
    if eval_weight(theta, d) != 0 {
        // the scalar subgroup acts by the nontrivial character t^{mθ(d)}
        return Ok(0);
    }
    let longest = alg.quiver().longest_path().unwrap_or(0).max(1) as u64;
    let positive: u64 = theta.iter().zip(d).filter(|(t, _)| **t > 0).map(|(t, &x)| *t as u64 * x as u64).sum();
    let needed = m as u64 * positive * longest;
    if needed > degree_cap as u64 {
        return Err(Error::DegreeCapExceeded { needed: needed.min(u32::MAX as u64) as u32, cap: degree_cap });
    }
    let mut target = vec![0i64; space.ncoords];
    for (i, &di) in d.iter().enumerate() {
        for k in 0..di {
            target[space.offsets[i] + k] = m as i64 * theta[i];
        }
    }
    let monos = space.monomials(&target);
    if monos.is_empty() {
        return Ok(0);
    }
    let index: HashMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();

    // common kernel of the derivations
    let gens = space.derivations(alg, d);
    let mut row_of: HashMap<(usize, Mono), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    for (col, mono) in monos.iter().enumerate() {
        for (g, images) in gens.iter().enumerate() {
            for (v, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                for &(w, c) in &images[v] {
                    let mut img = mono.clone();
                    img[v] -= 1;
                    img[w] += 1;
                    let next = row_of.len();
                    let row = *row_of.entry((g, img)).or_insert(next);
                    entries.push((row, col, c * e as i64));
                }
            }
        }
    }
    let killed: Vec<Vec<Rat>> = if row_of.is_empty() {
        (0..monos.len()).map(|i| unit(monos.len(), i)).collect()
    } else {
        let mut mat = RatMatrix::zeros(row_of.len(), monos.len());
        for (r, c, v) in entries {
            mat[(r, c)] += Rat::from_integer(v.into());
        }
        mat.kernel()
    };
    if killed.is_empty() || alg.relations().is_empty() {
        return Ok(killed.len());
    }

    // relation ideal in this weight space
    let mut ideal = RowSpace::new(monos.len());
    for rel in alg.relations() {
        let (s, t) = (rel.source(), rel.target());
        for rho in 0..d[t] {
            for sigma in 0..d[s] {
                let entry = space.relation_entry(alg, d, rel, rho, sigma);
                let Some(first) = entry.keys().next() else { continue };
                let w = space.weight(first);
                let rest: Vec<i64> = target.iter().zip(&w).map(|(a, b)| a - b).collect();
                for mult in space.monomials(&rest) {
                    let mut v = vec![Rat::zero(); monos.len()];
                    for (mono, c) in &entry {
                        let prod: Mono = mono.iter().zip(&mult).map(|(a, b)| a + b).collect();
                        v[index[&prod]] += c;
                    }
                    ideal.insert(&v);
                }
            }
        }
    }
    let dim_j = ideal.rank();
    let dim_k = killed.len();
    for k in &killed {
        ideal.insert(k);
    }
    let dim_sum = ideal.rank();
    let intersection = dim_j + dim_k - dim_sum;
    Ok(dim_k - intersection)
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct SIReport {
    pub theta: Vec<i64>,
    pub d: Vec<usize>,
    /// `dims[m] = dim SI(A, d)_{mθ}`.
    pub dims: Vec<usize>,
    pub degree_cap: u32,
    pub caveats: Vec<String>,
}

pub fn hilbert_series(
    alg: &Arc<BoundQuiverAlgebra>,
    d: &[usize],
    theta: &[i64],
    m_max: u32,
    degree_cap: u32,
) -> Result<SIReport> {
    let dims = (0..=m_max).map(|m| si_dim(alg, d, theta, m, degree_cap)).collect::<Result<Vec<_>>>()?;
    let mut caveats = Vec::new();
    if !alg.relations().is_empty() {
        caveats.push("computed on the whole coordinate ring of mod(A,d), not per irreducible component".into());
    }
    Ok(SIReport { theta: theta.to_vec(), d: d.to_vec(), dims, degree_cap, caveats })
}

/// Graded dimensions of `S^k` of a graded ring with the given series: `C(s_n + k − 1, k)`.
pub fn symmetric_power_series(series: &[usize], k: usize) -> Vec<u128> {
    series
        .iter()
        .map(|&s| {
            if k == 0 {
                1
            } else if s == 0 {
                0
            } else {
                num_integer::binomial((s + k - 1) as u128, k as u128)
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub ambient: Vec<usize>,
    pub factor_series: Vec<Vec<usize>>,
    pub predicted: Vec<u128>,
    pub equal: bool,
    /// Per part, whether a sampled module was θ-semistable.
    pub parts_semistable: Vec<Option<bool>>,
    pub caveats: Vec<String>,
}

/// Compares the ambient series with the graded dimensions of `⊗ S^{m_i}` of the factor series.
pub fn check_symmetric_factorization(
    alg: &Arc<BoundQuiverAlgebra>,
    theta: &[i64],
    parts: &[(Vec<usize>, usize)],
    m_max: u32,
    degree_cap: u32,
    seed: u64,
) -> Result<FactorizationReport> {
    let n = alg.vertex_count();
    let mut d = vec![0usize; n];
    for (di, mi) in parts {
        if di.len() != n {
            return Err(Error::DimensionMismatch("part has the wrong number of entries".into()));
        }
        for (x, y) in d.iter_mut().zip(di) {
            *x += mi * y;
        }
    }
    let mut caveats = Vec::new();
    let mut rng = rng_from_seed(seed);
    let mut parts_semistable = Vec::new();
    for (di, _) in parts {
        let verdict = match random_representation(alg, di, &mut rng) {
            Ok(s) => Some(king_test(&s, theta, GroebnerCaps::default())?.status.is_semistable()),
            Err(Error::CannotSample(msg)) => {
                caveats.push(msg);
                None
            }
            Err(e) => return Err(e),
        };
        parts_semistable.push(verdict);
    }
    if parts_semistable.contains(&Some(false)) {
        caveats.push("a sampled part is not θ-semistable".into());
    }
    let ambient = hilbert_series(alg, &d, theta, m_max, degree_cap)?;
    let mut predicted = vec![1u128; m_max as usize + 1];
    let mut factor_series = Vec::new();
    for (di, mi) in parts {
        let s = hilbert_series(alg, di, theta, m_max, degree_cap)?.dims;
        for (p, x) in predicted.iter_mut().zip(symmetric_power_series(&s, *mi)) {
            *p *= x;
        }
        factor_series.push(s);
    }
    caveats.extend(ambient.caveats.iter().cloned());
    let equal = ambient.dims.iter().zip(&predicted).all(|(a, b)| *a as u128 == *b);
    Ok(FactorizationReport { ambient: ambient.dims, factor_series, predicted, equal, parts_semistable, caveats })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ModuliShape {
    Point,
    #[serde(rename = "P1")]
    P1,
    /// `∏ P^{m_i}` over the isotropic factors.
    ProductOfProjectiveSpaces {
        exponents: Vec<usize>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliPrediction {
    pub shape: ModuliShape,
    /// Predicted transcendence degree of the field of rational invariants.
    pub transcendence_degree: usize,
    pub notes: Vec<String>,
}

/// Shape of the moduli space from a θ-stable decomposition, for an algebra asserted to be tame.
pub fn classify_moduli_tame(
    alg: &Arc<BoundQuiverAlgebra>,
    d: &[usize],
    decomposition: &[(Vec<usize>, usize)],
) -> Result<ModuliPrediction> {
    let n = alg.vertex_count();
    let mut total = vec![0usize; n];
    for (di, mi) in decomposition {
        for (x, y) in total.iter_mut().zip(di) {
            *x += mi * y;
        }
    }
    if total != d {
        return Err(Error::InvalidInput(format!("decomposition sums to {total:?}, not {d:?}")));
    }
    let mut exponents = Vec::new();
    let mut notes = vec!["tameness is asserted by the caller".to_string()];
    for (di, mi) in decomposition {
        match QClass::of(tits_form(alg, di)?.value) {
            QClass::Real => notes.push(format!("{di:?}: real factor, contributes a point")),
            QClass::Isotropic => {
                notes.push(format!("{di:?}: isotropic factor with multiplicity {mi}, contributes P^{mi}"));
                exponents.push(*mi);
            }
            other => {
                return Err(Error::NotApplicable(format!(
                    "factor {di:?} has q-class {}; inconsistent with tameness",
                    other.as_str()
                )))
            }
        }
    }
    let transcendence_degree = exponents.iter().sum();
    let shape = match exponents.as_slice() {
        [] => ModuliShape::Point,
        [1] => ModuliShape::P1,
        _ => ModuliShape::ProductOfProjectiveSpaces { exponents },
    };
    Ok(ModuliPrediction { shape, transcendence_degree, notes })
}
