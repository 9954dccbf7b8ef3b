//! Representations of bound quiver algebras, Hom and Ext, endomorphism rings and
//! Krull–Schmidt decomposition.
//!
//! `M(a)` is a `d(head) x d(tail)` matrix, so a path `a.b` acts as `M(b) * M(a)`.

mod endo;
mod exceptional;
mod hom;
pub mod io;
mod krull_schmidt;
mod resolution;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::bound_quiver::{BoundQuiverAlgebra, Path};
use crate::error::{Error, Result};
use crate::exactalg::{solve_matrix, Rat, RatMatrix, RowSpace};

pub use endo::EndAlgebra;
pub use exceptional::{check_exceptional_sequence, ExceptionalReport, PairReport};
pub use hom::{hom_dim, hom_space, is_isomorphic_search, Morphism};
pub use krull_schmidt::{decompose, is_indecomposable, is_isomorphic, is_schur, krull_schmidt, IsoVerdict, Summand};
pub use resolution::{ext_all, ext_dim, projective_resolution, ProjectiveResolution};

/// A finite-dimensional module over a bound quiver algebra, given by one matrix per arrow.
#[derive(Clone)]
pub struct Representation {
    alg: Arc<BoundQuiverAlgebra>,
    dims: Vec<usize>,
    maps: Vec<RatMatrix>,
}

/// Outcome of checking the defining relations on a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub valid: bool,
    pub failing_relation: Option<String>,
}

impl Representation {
    /// Builds a representation after checking matrix shapes (relations are not checked).
    pub fn new(alg: Arc<BoundQuiverAlgebra>, dims: Vec<usize>, maps: Vec<RatMatrix>) -> Result<Self> {
        let q = alg.quiver();
        if dims.len() != q.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                dims.len(),
                q.vertex_count()
            )));
        }
        if maps.len() != q.arrows().len() {
            return Err(Error::DimensionMismatch(format!("{} matrices given for {} arrows", maps.len(), q.arrows().len())));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.rows() != dims[a.head] || m.cols() != dims[a.tail] {
                return Err(Error::DimensionMismatch(format!(
                    "matrix for arrow '{}' is {}x{}, expected {}x{}",
                    a.name,
                    m.rows(),
                    m.cols(),
                    dims[a.head],
                    dims[a.tail]
                )));
            }
        }
        Ok(Representation { alg, dims, maps })
    }

    /// Like [`Representation::new`] but also requires every relation to vanish.
    pub fn new_validated(alg: Arc<BoundQuiverAlgebra>, dims: Vec<usize>, maps: Vec<RatMatrix>) -> Result<Self> {
        let m = Self::new(alg, dims, maps)?;
        let v = m.validate();
        match v.failing_relation {
            None => Ok(m),
            Some(r) => Err(Error::InvalidInput(format!("relation {r} does not vanish"))),
        }
    }

    pub fn zero(alg: Arc<BoundQuiverAlgebra>, dims: Vec<usize>) -> Self {
        let maps = alg.quiver().arrows().iter().map(|a| RatMatrix::zeros(dims[a.head], dims[a.tail])).collect();
        Representation { alg, dims, maps }
    }

    pub fn simple(alg: Arc<BoundQuiverAlgebra>, i: usize) -> Self {
        let mut dims = vec![0; alg.vertex_count()];
        dims[i] = 1;
        Self::zero(alg, dims)
    }

    /// Indecomposable projective at `i`: at vertex `j`, the span of basis paths from `i` to `j`.
    pub fn projective(alg: Arc<BoundQuiverAlgebra>, i: usize) -> Self {
        let n = alg.vertex_count();
        let basis = alg.basis();
        let dims: Vec<usize> = (0..n).map(|j| basis.from_to(i, j).len()).collect();
        let maps = alg
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arr)| {
                let src = basis.from_to(i, arr.tail);
                let dst = basis.from_to(i, arr.head);
                let mut m = RatMatrix::zeros(dst.len(), src.len());
                for (c, &k) in src.iter().enumerate() {
                    let p = basis.path(k).extended(a, arr.head);
                    for (idx, coeff) in basis.reduce(&p) {
                        let r = dst.iter().position(|&x| x == idx).expect("reduction stays in block");
                        m[(r, c)] += coeff;
                    }
                }
                m
            })
            .collect();
        Representation { alg, dims, maps }
    }

    /// Indecomposable injective at `v`: at vertex `j`, the dual of the span of basis paths
    /// from `j` to `v`; an arrow `a` sends `φ` to `q ↦ φ(a.q)`.
    pub fn injective(alg: Arc<BoundQuiverAlgebra>, v: usize) -> Self {
        let n = alg.vertex_count();
        let basis = alg.basis();
        let dims: Vec<usize> = (0..n).map(|j| basis.from_to(j, v).len()).collect();
        let maps = alg
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arr)| {
                let src = basis.from_to(arr.tail, v);
                let dst = basis.from_to(arr.head, v);
                let step = Path::trivial(arr.tail).extended(a, arr.head);
                let mut m = RatMatrix::zeros(dst.len(), src.len());
                for (r, &k) in dst.iter().enumerate() {
                    let p = step.concat(basis.path(k)).expect("composable");
                    for (idx, coeff) in basis.reduce(&p) {
                        let c = src.iter().position(|&x| x == idx).expect("reduction stays in block");
                        m[(r, c)] += coeff;
                    }
                }
                m
            })
            .collect();
        Representation { alg, dims, maps }
    }

    /// Embedding of `M` into a direct sum of indecomposable injectives (an injective envelope).
    pub fn injective_envelope(&self) -> Result<(Representation, Vec<RatMatrix>)> {
        let n = self.dims.len();
        let q = self.alg.quiver();
        let basis = self.alg.basis();
        let mut parts = Vec::new();
        // functionals λ on M(v), one per socle basis vector
        let mut functionals: Vec<(usize, Vec<Rat>)> = Vec::new();
        for v in 0..n {
            let d = self.dims[v];
            let mut stacked = RatMatrix::zeros(0, d);
            for a in q.arrows_from(v) {
                stacked = stacked.vstack(&self.maps[a]);
            }
            let soc = if stacked.rows() == 0 { (0..d).map(|i| endo::unit(d, i)).collect() } else { stacked.kernel() };
            if soc.is_empty() {
                continue;
            }
            let sb = RatMatrix::from_columns(d, &soc);
            let full = sb.hstack(&complement(&sb, d));
            let inv = full.inverse().expect("basis");
            for k in 0..soc.len() {
                functionals.push((v, inv.row(k).to_vec()));
                parts.push(Representation::injective(self.alg.clone(), v));
            }
        }
        let envelope = Representation::direct_sum(&parts.iter().collect::<Vec<_>>())?;
        let mut embed: Vec<RatMatrix> = (0..n).map(|j| RatMatrix::zeros(envelope.dims[j], self.dims[j])).collect();
        for j in 0..n {
            let mut row = 0;
            for (v, lambda) in &functionals {
                for &k in basis.from_to(j, *v) {
                    // m ↦ λ(M(p) m)
                    let pm = self.path_matrix(basis.path(k));
                    for c in 0..self.dims[j] {
                        let mut s = Rat::zero();
                        for (i, l) in lambda.iter().enumerate() {
                            s += l * &pm[(i, c)];
                        }
                        embed[j][(row, c)] = s;
                    }
                    row += 1;
                }
            }
        }
        Ok((envelope, embed))
    }

    pub fn algebra(&self) -> &Arc<BoundQuiverAlgebra> {
        &self.alg
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn map(&self, a: usize) -> &RatMatrix {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[RatMatrix] {
        &self.maps
    }

    /// Matrix of a path: `M(a_1 . ... . a_k) = M(a_k) ... M(a_1)`.
    pub fn path_matrix(&self, p: &Path) -> RatMatrix {
        let mut m = RatMatrix::identity(self.dims[p.source]);
        for &a in &p.arrows {
            m = self.maps[a].mul(&m);
        }
        m
    }

    /// Checks that every relation acts as zero.
    pub fn validate(&self) -> Validation {
        let q = self.alg.quiver();
        for r in self.alg.relations() {
            let mut acc = RatMatrix::zeros(self.dims[r.target()], self.dims[r.source()]);
            for (c, p) in r.terms() {
                acc = acc.add(&self.path_matrix(p).scale(c));
            }
            if !acc.is_zero() {
                return Validation { valid: false, failing_relation: Some(crate::bound_quiver::relation_text(q, r)) };
            }
        }
        Validation { valid: true, failing_relation: None }
    }

    pub fn direct_sum(parts: &[&Representation]) -> Result<Representation> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        let alg = first.alg.clone();
        if parts.iter().any(|p| !Arc::ptr_eq(&p.alg, &alg)) {
            return Err(Error::InvalidInput("summands over different algebras".into()));
        }
        let n = alg.vertex_count();
        let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
        let maps = alg
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arr)| {
                let mut m = RatMatrix::zeros(dims[arr.head], dims[arr.tail]);
                let (mut r0, mut c0) = (0, 0);
                for p in parts {
                    let b = &p.maps[a];
                    for i in 0..b.rows() {
                        for j in 0..b.cols() {
                            m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                        }
                    }
                    r0 += b.rows();
                    c0 += b.cols();
                }
                m
            })
            .collect();
        Ok(Representation { alg, dims, maps })
    }

    /// `M ⊕ N`.
    pub fn oplus(&self, other: &Representation) -> Representation {
        Self::direct_sum(&[self, other]).expect("same algebra")
    }

    /// `M^k`.
    pub fn power(&self, k: usize) -> Representation {
        if k == 0 {
            return Self::zero(self.alg.clone(), vec![0; self.dims.len()]);
        }
        let parts: Vec<&Representation> = std::iter::repeat_n(self, k).collect();
        Self::direct_sum(&parts).expect("same algebra")
    }

    /// Base change by invertible vertex matrices: `M'(a) = g(h) M(a) g(t)^{-1}`.
    pub fn conjugate(&self, g: &[RatMatrix]) -> Result<Representation> {
        let inv: Vec<RatMatrix> = g
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::InvalidInput("base change is not invertible".into())))
            .collect::<Result<_>>()?;
        let maps =
            self.alg.quiver().arrows().iter().zip(&self.maps).map(|(arr, m)| g[arr.head].mul(m).mul(&inv[arr.tail])).collect();
        Representation::new(self.alg.clone(), self.dims.clone(), maps)
    }

    /// Subrepresentation spanned at each vertex by the columns of `bases[v]` (independent columns).
    pub fn restrict(&self, bases: &[RatMatrix]) -> Result<Representation> {
        let dims: Vec<usize> = bases.iter().map(RatMatrix::cols).collect();
        let maps = self
            .alg
            .quiver()
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(arr, m)| {
                let image = m.mul(&bases[arr.tail]);
                solve_matrix(&bases[arr.head], &image)
                    .ok_or_else(|| Error::InvalidInput(format!("subspace is not stable under arrow '{}'", arr.name)))
            })
            .collect::<Result<_>>()?;
        Representation::new(self.alg.clone(), dims, maps)
    }

    /// Quotient by the subrepresentation spanned by `bases`, together with complement bases.
    pub fn quotient(&self, bases: &[RatMatrix]) -> Result<(Representation, Vec<RatMatrix>)> {
        let complements: Vec<RatMatrix> = bases.iter().zip(&self.dims).map(|(b, &d)| complement(b, d)).collect();
        let full: Vec<RatMatrix> = bases.iter().zip(&complements).map(|(b, c)| b.hstack(c)).collect();
        let mut maps = Vec::new();
        for (arr, m) in self.alg.quiver().arrows().iter().zip(&self.maps) {
            let image = m.mul(&complements[arr.tail]);
            let coords = solve_matrix(&full[arr.head], &image).expect("full basis");
            let k = bases[arr.head].cols();
            let rows: Vec<usize> = (k..coords.rows()).collect();
            maps.push(coords.select_rows(&rows));
        }
        let dims = complements.iter().map(RatMatrix::cols).collect();
        Ok((Representation::new(self.alg.clone(), dims, maps)?, complements))
    }

    /// True if the columns of `bases` span a subrepresentation.
    pub fn is_subrepresentation(&self, bases: &[RatMatrix]) -> bool {
        self.alg.quiver().arrows().iter().zip(&self.maps).all(|(arr, m)| {
            let image = m.mul(&bases[arr.tail]);
            solve_matrix(&bases[arr.head], &image).is_some()
        })
    }

    /// Structural equality of matrices (not isomorphism).
    pub fn same_matrices(&self, other: &Representation) -> bool {
        self.dims == other.dims && self.maps == other.maps
    }
}

/// Standard basis vectors completing the columns of `b` to a basis of `Q^d`.
pub(crate) fn complement(b: &RatMatrix, d: usize) -> RatMatrix {
    let mut space = RowSpace::new(d);
    for c in b.columns() {
        space.insert(&c);
    }
    let mut cols = Vec::new();
    for i in 0..d {
        let mut e = vec![Rat::zero(); d];
        e[i] = Rat::from_integer(1.into());
        if space.insert(&e) {
            cols.push(e);
        }
    }
    RatMatrix::from_columns(d, &cols)
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) || self.alg.quiver() == other.alg.quiver()) && self.same_matrices(other)
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation(dims={:?}", self.dims)?;
        for (arr, m) in self.alg.quiver().arrows().iter().zip(&self.maps) {
            write!(f, ", {}={:?}", arr.name, m)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_quiver::parse_algebra;
    use crate::exactalg::ri;

    #[test]
    fn validate_examples() {
        let a3 = Arc::new(parse_algebra("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;").unwrap());
        assert!(Representation::zero(a3.clone(), vec![2, 1, 3]).validate().valid);
        let one = RatMatrix::from_i64(&[&[1]]);
        let m = Representation::new(a3.clone(), vec![1, 1, 1], vec![one.clone(), one.clone()]).unwrap();
        let v = m.validate();
        assert!(!v.valid);
        assert_eq!(v.failing_relation.as_deref(), Some("a.b"));
        let m = Representation::new(a3, vec![1, 1, 1], vec![one, RatMatrix::from_i64(&[&[0]])]).unwrap();
        assert!(m.validate().valid);
    }

    #[test]
    fn projectives_of_a3_with_relation() {
        let a3 = Arc::new(parse_algebra("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;").unwrap());
        assert_eq!(Representation::projective(a3.clone(), 0).dims(), &[1, 1, 0]);
        assert_eq!(Representation::projective(a3.clone(), 1).dims(), &[0, 1, 1]);
        assert_eq!(Representation::projective(a3, 2).dims(), &[0, 0, 1]);
    }

    #[test]
    fn quotient_and_restrict() {
        let a2 = Arc::new(parse_algebra("vertices 1 2; arrows a:1->2;").unwrap());
        let p1 = Representation::projective(a2.clone(), 0);
        let sub = [RatMatrix::zeros(1, 0), RatMatrix::from_i64(&[&[1]])];
        let s2 = p1.restrict(&sub).unwrap();
        assert_eq!(s2.dims(), &[0, 1]);
        let (q, _) = p1.quotient(&sub).unwrap();
        assert_eq!(q.dims(), &[1, 0]);
        assert!(!p1.is_subrepresentation(&[RatMatrix::from_i64(&[&[1]]), RatMatrix::zeros(1, 0)]));
        assert_eq!(p1.map(0)[(0, 0)], ri(1));
    }
}
