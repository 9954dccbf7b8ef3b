use std::cmp::Reverse;
use std::collections::HashMap;

use num_traits::{One, Zero};

use super::admissible::{dense, ideal_generators};
use super::{Path, Quiver, Relation};
use crate::exactalg::{Rat, RatMatrix, RowSpace};

/// Sparse coordinate vector on the path basis.
pub type Sparse = Vec<(usize, Rat)>;

/// Residues of paths forming a basis of A, with reduction of every path of length `< L`.
#[derive(Clone, Debug)]
pub struct PathBasis {
    bound: usize,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    reductions: Vec<Sparse>,
    blocks: Vec<Vec<Vec<usize>>>,
    trivial: Vec<usize>,
}

impl PathBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.basis
    }

    pub fn path(&self, k: usize) -> &Path {
        &self.basis[k]
    }

    /// Basis indices of paths from `i` to `j`.
    pub fn from_to(&self, i: usize, j: usize) -> &[usize] {
        &self.blocks[i][j]
    }

    /// Basis index of the trivial path at `v`.
    pub fn trivial(&self, v: usize) -> usize {
        self.trivial[v]
    }

    /// Residue of a path in basis coordinates.
    pub fn reduce(&self, p: &Path) -> Sparse {
        if p.len() >= self.bound {
            return Vec::new();
        }
        match self.index.get(p) {
            Some(&k) => self.reductions[k].clone(),
            None => Vec::new(),
        }
    }

    /// Structure constants: basis element `x` followed by basis element `y`.
    pub fn mul(&self, x: usize, y: usize) -> Sparse {
        match self.basis[x].concat(&self.basis[y]) {
            Some(p) => self.reduce(&p),
            None => Vec::new(),
        }
    }

    /// Product of two elements given in basis coordinates.
    pub fn mul_elems(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.len()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                for (k, c) in self.mul(i, j) {
                    out[k] += a * b * c;
                }
            }
        }
        out
    }
}

/// Basis of kQ/I for an ideal containing all paths of length `>= bound`.
///
/// Row-reduces the truncated ideal with columns ordered longest path first, so
/// long paths are rewritten in terms of shorter ones; non-pivot paths form the basis.
pub fn path_basis(quiver: &Quiver, relations: &[Relation], bound: usize) -> PathBasis {
    let mut all: Vec<Path> = (0..bound).flat_map(|n| quiver.paths_of_length(n)).collect();
    all.sort_by(|p, q| (Reverse(p.len()), &p.arrows, p.source).cmp(&(Reverse(q.len()), &q.arrows, q.source)));
    let index: HashMap<Path, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut span = RowSpace::new(all.len());
    let mut rows = Vec::new();
    for g in ideal_generators(quiver, relations, bound - 1, &index) {
        let v = dense(&g, all.len());
        if span.insert(&v) {
            rows.push(v);
        }
    }
    let rref = RatMatrix::from_rows(all.len(), rows).expect("uniform rows").rref();
    let mut is_pivot = vec![None; all.len()];
    for (r, &c) in rref.pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut free: Vec<usize> = (0..all.len()).filter(|&c| is_pivot[c].is_none()).collect();
    free.sort_by(|&a, &b| (all[a].len(), &all[a].arrows, all[a].source).cmp(&(all[b].len(), &all[b].arrows, all[b].source)));
    let basis: Vec<Path> = free.iter().map(|&c| all[c].clone()).collect();
    let mut pos = vec![usize::MAX; all.len()];
    for (k, &c) in free.iter().enumerate() {
        pos[c] = k;
    }
    let reductions = (0..all.len())
        .map(|c| match is_pivot[c] {
            None => vec![(pos[c], Rat::one())],
            Some(r) => free
                .iter()
                .filter(|&&f| !rref.matrix[(r, f)].is_zero())
                .map(|&f| (pos[f], -rref.matrix[(r, f)].clone()))
                .collect(),
        })
        .collect();
    let n = quiver.vertex_count();
    let mut blocks = vec![vec![Vec::new(); n]; n];
    for (k, p) in basis.iter().enumerate() {
        blocks[p.source][p.target].push(k);
    }
    let trivial = (0..n).map(|v| basis.iter().position(|p| *p == Path::trivial(v)).expect("trivial paths survive")).collect();
    PathBasis { bound, basis, index, reductions, blocks, trivial }
}

/// Dimensions of `e_i A e_j` computed one block at a time (independent of [`path_basis`]).
pub fn path_basis_blockwise(quiver: &Quiver, relations: &[Relation], bound: usize) -> Vec<Vec<usize>> {
    let n = quiver.vertex_count();
    let mut dims = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let paths: Vec<Path> = quiver.paths_from(i, bound.saturating_sub(1)).into_iter().filter(|p| p.target == j).collect();
            let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
            let mut rows = Vec::new();
            for r in relations {
                for u in quiver.paths_to(r.source(), bound).into_iter().filter(|u| u.source == i) {
                    for v in quiver.paths_from(r.target(), bound).into_iter().filter(|v| v.target == j) {
                        let mut row = vec![Rat::zero(); paths.len()];
                        for (c, p) in r.terms() {
                            let w = u.concat(p).and_then(|x| x.concat(&v)).expect("composable");
                            if let Some(&k) = index.get(&w) {
                                row[k] += c;
                            }
                        }
                        rows.push(row);
                    }
                }
            }
            let rank = if rows.is_empty() { 0 } else { RatMatrix::from_rows(paths.len(), rows).unwrap().rank() };
            dims[i][j] = paths.len() - rank;
        }
    }
    dims
}
