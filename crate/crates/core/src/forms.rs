//! Euler (Ringel) form, Tits form and weights on the Grothendieck group `Z^{Q_0}`.

use std::sync::Arc;

use serde::Serialize;

use crate::bound_quiver::BoundQuiverAlgebra;
use crate::error::{Error, Result};
use crate::rep::{projective_resolution, Representation};

pub const DEFAULT_GLOBAL_DIM_BOUND: usize = 6;

pub type DimVec = Vec<usize>;
pub type Weight = Vec<i64>;

#[derive(Clone, Debug, Serialize)]
pub struct EulerData {
    /// `⟨d, e⟩ = dᵀ C e`.
    pub matrix: Vec<Vec<i64>>,
    /// Largest `l` with a nonzero `Ext^l` between simples.
    pub global_dimension: usize,
    pub l_max: usize,
    /// `ext[l][i][j] = dim Ext^l(S_i, S_j)`.
    pub ext: Vec<Vec<Vec<usize>>>,
}

impl EulerData {
    pub fn vertex_count(&self) -> usize {
        self.matrix.len()
    }

    pub fn pair(&self, d: &[i64], e: &[i64]) -> i64 {
        let n = self.vertex_count();
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += d[i] * self.matrix[i][j] * e[j];
            }
        }
        s
    }

    pub fn pair_dims(&self, d: &[usize], e: &[usize]) -> i64 {
        self.pair(&to_i64(d), &to_i64(e))
    }
}

pub fn to_i64(d: &[usize]) -> Vec<i64> {
    d.iter().map(|&x| x as i64).collect()
}

/// `θ(d) = Σ θ(i) d(i)`.
pub fn eval_weight(theta: &[i64], d: &[usize]) -> i64 {
    theta.iter().zip(d).map(|(t, &x)| t * x as i64).sum()
}

fn simple_resolution_multiplicities(alg: &Arc<BoundQuiverAlgebra>, l_max: usize, strict: bool) -> Result<Vec<Vec<Vec<usize>>>> {
    let n = alg.vertex_count();
    // ext[l][i][j]
    let mut ext = vec![vec![vec![0usize; n]; n]; l_max + 1];
    for i in 0..n {
        let s = Representation::simple(alg.clone(), i);
        let res = projective_resolution(&s, l_max)?;
        if strict && res.truncated {
            return Err(Error::ResolutionTruncated(l_max));
        }
        // minimal resolution: Ext^l(S_i, S_j) = multiplicity of P_j in P_l
        for (l, layer) in ext.iter_mut().enumerate().take(res.length()) {
            for (j, slot) in layer[i].iter_mut().enumerate() {
                *slot = res.multiplicity(l, j);
            }
        }
    }
    Ok(ext)
}

/// Ext table between simples and the Euler matrix; fails if some simple has projective
/// dimension above `l_max`.
pub fn euler_data(alg: &Arc<BoundQuiverAlgebra>, l_max: usize) -> Result<EulerData> {
    let n = alg.vertex_count();
    let ext = simple_resolution_multiplicities(alg, l_max, true)?;
    let mut matrix = vec![vec![0i64; n]; n];
    let mut global_dimension = 0;
    for (l, layer) in ext.iter().enumerate() {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        for i in 0..n {
            for j in 0..n {
                if layer[i][j] > 0 {
                    global_dimension = global_dimension.max(l);
                }
                matrix[i][j] += sign * layer[i][j] as i64;
            }
        }
    }
    let mut ext = ext;
    ext.truncate(global_dimension + 1);
    Ok(EulerData { matrix, global_dimension, l_max, ext })
}

#[derive(Clone, Debug, Serialize)]
pub struct TitsForm {
    pub value: i64,
    /// Arrow/relation count formula, present for acyclic quivers.
    pub triangular_formula: Option<i64>,
}

impl TitsForm {
    pub fn consistent(&self) -> bool {
        self.triangular_formula.is_none_or(|v| v == self.value)
    }
}

/// Number of given relations from `i` to `j`.
pub fn relation_counts(alg: &BoundQuiverAlgebra) -> Vec<Vec<usize>> {
    let n = alg.vertex_count();
    let mut r = vec![vec![0; n]; n];
    for rel in alg.relations() {
        r[rel.source()][rel.target()] += 1;
    }
    r
}

fn triangular_tits(alg: &BoundQuiverAlgebra, d: &[i64]) -> i64 {
    let q = alg.quiver();
    let mut s: i64 = d.iter().map(|x| x * x).sum();
    for a in q.arrows() {
        s -= d[a.tail] * d[a.head];
    }
    for (i, row) in relation_counts(alg).iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            s += c as i64 * d[i] * d[j];
        }
    }
    s
}

/// `q(d) = Σ d(i)² − Σ dim Ext¹(S_i,S_j) d(i)d(j) + Σ dim Ext²(S_i,S_j) d(i)d(j)`.
pub fn tits_form(alg: &Arc<BoundQuiverAlgebra>, d: &[usize]) -> Result<TitsForm> {
    let n = alg.vertex_count();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!("dimension vector has {} entries, expected {n}", d.len())));
    }
    let ext = simple_resolution_multiplicities(alg, 2, false)?;
    let d = to_i64(d);
    let mut value = 0;
    for (l, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
        for i in 0..n {
            for j in 0..n {
                value += sign * ext[l][i][j] as i64 * d[i] * d[j];
            }
        }
    }
    let triangular_formula = alg.quiver().is_acyclic().then(|| triangular_tits(alg, &d));
    Ok(TitsForm { value, triangular_formula })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QClass {
    Real,
    Isotropic,
    Negative,
    Other,
}

impl QClass {
    pub fn of(q: i64) -> Self {
        match q {
            1 => QClass::Real,
            0 => QClass::Isotropic,
            x if x < 0 => QClass::Negative,
            _ => QClass::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QClass::Real => "real",
            QClass::Isotropic => "isotropic",
            QClass::Negative => "negative",
            QClass::Other => "other",
        }
    }
}

pub fn classify_q(alg: &Arc<BoundQuiverAlgebra>, d: &[usize]) -> Result<QClass> {
    Ok(QClass::of(tits_form(alg, d)?.value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `e ↦ ⟨d0, e⟩`
    Left,
    /// `e ↦ ⟨e, d0⟩`
    Right,
    /// `left − right`
    Difference,
}

impl std::str::FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(WeightKind::Left),
            "right" => Ok(WeightKind::Right),
            "difference" | "diff" => Ok(WeightKind::Difference),
            _ => Err(Error::InvalidInput(format!("unknown weight kind '{s}'"))),
        }
    }
}

pub fn weight_from_dimvec(euler: &EulerData, d0: &[i64], kind: WeightKind) -> Weight {
    let n = euler.vertex_count();
    let c = &euler.matrix;
    let left: Vec<i64> = (0..n).map(|j| (0..n).map(|i| d0[i] * c[i][j]).sum()).collect();
    let right: Vec<i64> = (0..n).map(|i| (0..n).map(|j| c[i][j] * d0[j]).sum()).collect();
    match kind {
        WeightKind::Left => left,
        WeightKind::Right => right,
        WeightKind::Difference => left.iter().zip(&right).map(|(a, b)| a - b).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_quiver::parse_algebra;

    fn alg(text: &str) -> Arc<BoundQuiverAlgebra> {
        Arc::new(parse_algebra(text).unwrap())
    }

    #[test]
    fn hereditary_matrices() {
        let a2 = alg("vertices 1 2; arrows a:1->2;");
        assert_eq!(euler_data(&a2, 6).unwrap().matrix, vec![vec![1, -1], vec![0, 1]]);
        let k2 = alg("vertices 1 2; arrows a:1->2 b:1->2;");
        let e = euler_data(&k2, 6).unwrap();
        assert_eq!(e.matrix, vec![vec![1, -2], vec![0, 1]]);
        assert_eq!(e.global_dimension, 1);
    }

    #[test]
    fn a3_with_relation() {
        let a3 = alg("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;");
        let e = euler_data(&a3, 6).unwrap();
        assert_eq!(e.ext[2][0][2], 1);
        assert_eq!(e.matrix[0][2], 1);
        assert_eq!(e.global_dimension, 2);
        let t = tits_form(&a3, &[1, 1, 1]).unwrap();
        assert_eq!(t.value, 2);
        assert!(t.consistent());
    }

    #[test]
    fn tits_values() {
        let k2 = alg("vertices 1 2; arrows a:1->2 b:1->2;");
        let k3 = alg("vertices 1 2; arrows a:1->2 b:1->2 c:1->2;");
        let a2 = alg("vertices 1 2; arrows a:1->2;");
        assert_eq!(tits_form(&k2, &[1, 1]).unwrap().value, 0);
        assert_eq!(tits_form(&k3, &[1, 1]).unwrap().value, -1);
        assert_eq!(classify_q(&k2, &[2, 2]).unwrap(), QClass::Isotropic);
        assert_eq!(classify_q(&a2, &[1, 1]).unwrap(), QClass::Real);
        assert_eq!(classify_q(&k3, &[2, 2]).unwrap(), QClass::Negative);
        assert_eq!(tits_form(&k3, &[0, 1]).unwrap().value, 1);
    }

    #[test]
    fn infinite_global_dimension_is_reported() {
        let lp = alg("vertices 1; arrows x:1->1; relations x.x;");
        assert!(matches!(euler_data(&lp, 4), Err(Error::ResolutionTruncated(4))));
        // the Tits form only needs Ext up to degree 2
        assert_eq!(tits_form(&lp, &[1]).unwrap().value, 1);
    }

    #[test]
    fn weights() {
        let k2 = alg("vertices 1 2; arrows a:1->2 b:1->2;");
        let e = euler_data(&k2, 6).unwrap();
        assert_eq!(weight_from_dimvec(&e, &[1, 1], WeightKind::Difference), vec![2, -2]);
        let left = weight_from_dimvec(&e, &[1, 1], WeightKind::Left);
        assert_eq!(eval_weight(&left, &[1, 0]), e.pair(&[1, 1], &[1, 0]));
    }
}
