use num_traits::{One, Zero};
use rand::Rng;

use super::Representation;
use crate::exactalg::{Rat, RatMatrix};
use crate::sampling::random_rat;

/// A morphism of representations: one `d_N(v) x d_M(v)` matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism(pub Vec<RatMatrix>);

impl Morphism {
    pub fn identity(m: &Representation) -> Self {
        Morphism(m.dims().iter().map(|&d| RatMatrix::identity(d)).collect())
    }

    pub fn zero(m: &Representation, n: &Representation) -> Self {
        Morphism(m.dims().iter().zip(n.dims()).map(|(&dm, &dn)| RatMatrix::zeros(dn, dm)).collect())
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism(self.0.iter().zip(&other.0).map(|(f, g)| f.mul(g)).collect())
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism(self.0.iter().zip(&other.0).map(|(f, g)| f.add(g)).collect())
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        Morphism(self.0.iter().zip(&other.0).map(|(f, g)| f.sub(g)).collect())
    }

    pub fn scale(&self, c: &Rat) -> Morphism {
        Morphism(self.0.iter().map(|f| f.scale(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(RatMatrix::is_zero)
    }

    pub fn is_invertible(&self) -> bool {
        self.0.iter().all(|f| f.is_square() && (f.rows() == 0 || !f.determinant().is_zero()))
    }

    /// Entries concatenated vertex by vertex, row-major.
    pub fn flatten(&self) -> Vec<Rat> {
        self.0.iter().flat_map(|f| f.entries().iter().cloned()).collect()
    }

    /// Block-diagonal matrix on the total space.
    pub fn total_matrix(&self) -> RatMatrix {
        let rows: usize = self.0.iter().map(RatMatrix::rows).sum();
        let cols: usize = self.0.iter().map(RatMatrix::cols).sum();
        let mut out = RatMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for f in &self.0 {
            for i in 0..f.rows() {
                for j in 0..f.cols() {
                    out[(r0 + i, c0 + j)] = f[(i, j)].clone();
                }
            }
            r0 += f.rows();
            c0 += f.cols();
        }
        out
    }

    /// Linear combination `Σ c_k basis[k]`.
    pub fn combination(basis: &[Morphism], coeffs: &[Rat], template: &Morphism) -> Morphism {
        let mut acc = Morphism(template.0.iter().map(|f| RatMatrix::zeros(f.rows(), f.cols())).collect());
        for (b, c) in basis.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    pub fn is_morphism(&self, m: &Representation, n: &Representation) -> bool {
        m.algebra()
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .all(|(a, arr)| n.map(a).mul(&self.0[arr.tail]) == self.0[arr.head].mul(m.map(a)))
    }
}

fn unknown_offsets(m: &Representation, n: &Representation) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(m.dims().len());
    let mut total = 0;
    for (&dm, &dn) in m.dims().iter().zip(n.dims()) {
        offsets.push(total);
        total += dm * dn;
    }
    (offsets, total)
}

/// Basis of `Hom_A(M, N)`: solutions of `N(a) φ(t) = φ(h) M(a)` for every arrow.
pub fn hom_space(m: &Representation, n: &Representation) -> Vec<Morphism> {
    let (offsets, total) = unknown_offsets(m, n);
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (a, arr) in m.algebra().quiver().arrows().iter().enumerate() {
        let (t, h) = (arr.tail, arr.head);
        let (ma, na) = (m.map(a), n.map(a));
        // entry (r, c) of N(a) φ_t − φ_h M(a), with r < dN(h), c < dM(t)
        for r in 0..n.dim(h) {
            for c in 0..m.dim(t) {
                let mut row = vec![Rat::zero(); total];
                for k in 0..n.dim(t) {
                    if !na[(r, k)].is_zero() {
                        row[offsets[t] + k * m.dim(t) + c] += &na[(r, k)];
                    }
                }
                for k in 0..m.dim(h) {
                    if !ma[(k, c)].is_zero() {
                        row[offsets[h] + r * m.dim(h) + k] -= &ma[(k, c)];
                    }
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..total)
            .map(|i| {
                let mut v = vec![Rat::zero(); total];
                v[i] = Rat::one();
                v
            })
            .collect()
    } else {
        RatMatrix::from_rows(total, rows).expect("uniform rows").kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            Morphism(
                m.dims()
                    .iter()
                    .zip(n.dims())
                    .enumerate()
                    .map(|(vtx, (&dm, &dn))| RatMatrix::from_fn(dn, dm, |i, j| v[offsets[vtx] + i * dm + j].clone()))
                    .collect(),
            )
        })
        .collect()
}

pub fn hom_dim(m: &Representation, n: &Representation) -> usize {
    hom_space(m, n).len()
}

/// Looks for an isomorphism `M -> N` among random combinations of a Hom basis.
/// Returns `Some(true)` on success, `Some(false)` if `Hom(M, N)` cannot contain one, `None` otherwise.
pub fn is_isomorphic_search<R: Rng>(m: &Representation, n: &Representation, tries: usize, rng: &mut R) -> Option<bool> {
    if m.dims() != n.dims() {
        return Some(false);
    }
    let basis = hom_space(m, n);
    if basis.is_empty() {
        return Some(m.is_zero());
    }
    let template = Morphism::zero(m, n);
    for _ in 0..tries {
        let coeffs: Vec<Rat> = basis.iter().map(|_| random_rat(rng, 9, 9)).collect();
        if Morphism::combination(&basis, &coeffs, &template).is_invertible() {
            return Some(true);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bound_quiver::parse_algebra;

    #[test]
    fn a2_hom_examples() {
        let a2 = Arc::new(parse_algebra("vertices 1 2; arrows a:1->2;").unwrap());
        let p1 = Representation::projective(a2.clone(), 0);
        let p2 = Representation::projective(a2.clone(), 1);
        let s1 = Representation::simple(a2.clone(), 0);
        assert_eq!(hom_dim(&p2, &p1), 1);
        assert_eq!(hom_dim(&s1, &p1), 0);
        assert_eq!(hom_dim(&p1, &s1), 1);
        let basis = hom_space(&p1, &p1);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_morphism(&p1, &p1));
    }

    #[test]
    fn kronecker_endomorphisms() {
        let k2 = Arc::new(parse_algebra("vertices 1 2; arrows a:1->2 b:1->2;").unwrap());
        let i2 = RatMatrix::identity(2);
        let m = Representation::new(k2, vec![2, 2], vec![i2.clone(), i2]).unwrap();
        assert_eq!(hom_dim(&m, &m), 4);
    }
}
