use num_traits::{One, Zero};

use super::{hom_space, Morphism, Representation};
use crate::exactalg::{Coordinates, Rat, RatMatrix};

/// `End_A(M)` with structure constants, Jacobson radical and centre of the semisimple quotient.
///
/// Multiplication is composition: `x * y = x ∘ y`.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    basis: Vec<Morphism>,
    coordinates: Coordinates,
    /// `structure[i][j]` holds the coordinates of `basis[i] ∘ basis[j]`.
    structure: Vec<Vec<Vec<Rat>>>,
    /// Radical basis in coordinates (kernel of the trace form).
    radical: Vec<Vec<Rat>>,
    /// Rows whose common kernel is the radical; applying them is the quotient map to `E/rad`.
    quotient: RatMatrix,
    identity: Vec<Rat>,
}

impl EndAlgebra {
    pub fn new(m: &Representation) -> Self {
        let basis = hom_space(m, m);
        let n = basis.len();
        let flat: Vec<Vec<Rat>> = basis.iter().map(Morphism::flatten).collect();
        let len = flat.first().map_or(0, Vec::len);
        let coordinates = Coordinates::new(RatMatrix::from_columns(len, &flat));
        let structure: Vec<Vec<Vec<Rat>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| coordinates.coords(&basis[i].compose(&basis[j]).flatten()).expect("End is closed under composition"))
                    .collect()
            })
            .collect();
        let traces: Vec<Rat> = (0..n).map(|k| (0..n).map(|j| structure[k][j][j].clone()).sum()).collect();
        let gram = RatMatrix::from_fn(n, n, |i, j| structure[i][j].iter().zip(&traces).map(|(c, t)| c * t).sum());
        let radical = gram.kernel();
        let quotient = if radical.is_empty() {
            RatMatrix::identity(n)
        } else {
            let r = RatMatrix::from_columns(n, &radical);
            let rows = r.transpose().kernel();
            RatMatrix::from_rows(n, rows).expect("uniform rows")
        };
        let identity = if n == 0 {
            Vec::new()
        } else {
            coordinates.coords(&Morphism::identity(m).flatten()).expect("identity is an endomorphism")
        };
        EndAlgebra { basis, coordinates, structure, radical, quotient, identity }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Rat>>] {
        &self.structure
    }

    pub fn radical(&self) -> &[Vec<Rat>] {
        &self.radical
    }

    pub fn identity(&self) -> &[Rat] {
        &self.identity
    }

    /// `dim E / rad E`.
    pub fn semisimple_dim(&self) -> usize {
        self.dim() - self.radical.len()
    }

    /// True when `E / rad E` is one-dimensional.
    pub fn is_local_split(&self) -> bool {
        self.semisimple_dim() == 1
    }

    pub fn coords(&self, f: &Morphism) -> Option<Vec<Rat>> {
        self.coordinates.coords(&f.flatten())
    }

    pub fn element(&self, coeffs: &[Rat]) -> Morphism {
        let template = Morphism(self.basis[0].0.iter().map(|f| RatMatrix::zeros(f.rows(), f.cols())).collect());
        Morphism::combination(&self.basis, coeffs, &template)
    }

    pub fn mul(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x * y`.
    pub fn left_matrix(&self, x: &[Rat]) -> RatMatrix {
        let n = self.dim();
        let mut out = RatMatrix::zeros(n, n);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for j in 0..n {
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[(k, j)] += a * c;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self, x: &[Rat]) -> Rat {
        self.left_matrix(x).trace()
    }

    /// Image in `E / rad E` (coordinates in an arbitrary basis of the quotient).
    pub fn project(&self, x: &[Rat]) -> Vec<Rat> {
        self.quotient.mul_vec(x)
    }

    pub fn in_radical(&self, x: &[Rat]) -> bool {
        self.project(x).iter().all(Zero::is_zero)
    }

    pub fn is_idempotent(&self, e: &[Rat]) -> bool {
        self.mul(e, e) == e
    }

    /// Basis of elements central modulo the radical, taken modulo the radical.
    pub fn center_mod_radical(&self) -> Vec<Vec<Rat>> {
        let n = self.dim();
        let s = self.quotient.rows();
        let mut rows = Vec::new();
        for j in 0..n {
            // x ↦ P([x, b_j])
            let comm = RatMatrix::from_fn(n, n, |k, i| &self.structure[i][j][k] - &self.structure[j][i][k]);
            let pc = self.quotient.mul(&comm);
            for r in 0..s {
                rows.push(pc.row(r).to_vec());
            }
        }
        if rows.is_empty() {
            return (0..n).map(|i| unit(n, i)).collect();
        }
        let sol = RatMatrix::from_rows(n, rows).expect("uniform rows").kernel();
        // drop radical directions
        let mut space = crate::exactalg::RowSpace::new(n);
        for r in &self.radical {
            space.insert(r);
        }
        sol.into_iter().filter(|v| space.insert(v)).collect()
    }

    /// Newton iteration `e ↦ 3e² − 2e³` lifting an idempotent modulo the radical.
    pub fn lift_idempotent(&self, e: &[Rat]) -> Option<Vec<Rat>> {
        let mut e = e.to_vec();
        for _ in 0..64 {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return Some(e);
            }
            let e3 = self.mul(&e2, &e);
            e = e2.iter().zip(&e3).map(|(a, b)| Rat::from_integer(3.into()) * a - Rat::from_integer(2.into()) * b).collect();
        }
        None
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bound_quiver::parse_algebra;

    #[test]
    fn radical_of_projective_sum() {
        let a2 = Arc::new(parse_algebra("vertices 1 2; arrows a:1->2;").unwrap());
        let p1 = Representation::projective(a2.clone(), 0);
        let p2 = Representation::projective(a2.clone(), 1);
        let m = p1.oplus(&p2);
        let e = EndAlgebra::new(&m);
        assert_eq!(e.dim(), 3);
        assert_eq!(e.radical().len(), 1);
        assert_eq!(e.semisimple_dim(), 2);
        assert_eq!(e.center_mod_radical().len(), 2);
        // radical closed under multiplication
        for x in e.radical() {
            for y in e.radical() {
                assert!(e.in_radical(&e.mul(x, y)));
            }
        }
    }
}
