use serde::Serialize;

use super::{ext_all, hom_dim, is_schur, Representation};
use crate::error::Result;

/// Hom/Ext dimensions between `E_i` and `E_j` (`i < j`).
#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    /// `dim Ext^l(E_i, E_j)` for `l = 0..=pd E_i`.
    pub ext_forward: Vec<usize>,
    /// `dim Ext^l(E_j, E_i)` for `l = 0..=pd E_j`.
    pub ext_backward: Vec<usize>,
    pub hom_backward: usize,
    pub forward_vanishes: bool,
    pub backward_hom_vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalReport {
    /// Per module: Schur and no higher self-extensions.
    pub exceptional: Vec<bool>,
    pub self_ext: Vec<Vec<usize>>,
    pub pairs: Vec<PairReport>,
    pub orthogonal_exceptional_sequence: bool,
}

/// Checks `End(E_i) = k`, `Ext^{l≥1}(E_i, E_i) = 0`, `Ext^l(E_i, E_j) = 0` for all `l ≥ 0`
/// and `Hom(E_j, E_i) = 0`, for `i < j`.
pub fn check_exceptional_sequence(es: &[Representation], l_max: usize) -> Result<ExceptionalReport> {
    let mut exceptional = Vec::new();
    let mut self_ext = Vec::new();
    for e in es {
        let ext = ext_all(e, e, l_max)?;
        exceptional.push(is_schur(e) && ext.iter().skip(1).all(|&x| x == 0));
        self_ext.push(ext);
    }
    let mut pairs = Vec::new();
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            let ext_forward = ext_all(&es[i], &es[j], l_max)?;
            let ext_backward = ext_all(&es[j], &es[i], l_max)?;
            let hom_backward = hom_dim(&es[j], &es[i]);
            pairs.push(PairReport {
                i,
                j,
                forward_vanishes: ext_forward.iter().all(|&x| x == 0),
                backward_hom_vanishes: hom_backward == 0,
                ext_forward,
                ext_backward,
                hom_backward,
            });
        }
    }
    let ok = exceptional.iter().all(|&b| b) && pairs.iter().all(|p| p.forward_vanishes && p.backward_hom_vanishes);
    Ok(ExceptionalReport { exceptional, self_ext, pairs, orthogonal_exceptional_sequence: ok })
}
