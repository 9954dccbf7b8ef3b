use num_traits::{One, Zero};

use super::Representation;
use crate::error::{Error, Result};
use crate::exactalg::{Rat, RatMatrix, RowSpace};

/// Minimal projective resolution `... -> P_1 -> P_0 -> M -> 0`.
///
/// `P_l` is a direct sum of indecomposable projectives `P_v`, one per generator; a generator
/// of `P_l` at vertex `v` maps to an element of `P_{l-1}(v)`, written in coordinates
/// `(generator r of P_{l-1}, basis path from the vertex of r to v)`.
#[derive(Clone, Debug)]
pub struct ProjectiveResolution {
    /// Vertex of each generator of `P_l`.
    pub tops: Vec<Vec<usize>>,
    /// For `l >= 1`, image in `P_{l-1}` of each generator of `P_l`; entry `l-1` of this vector.
    pub differentials: Vec<Vec<Vec<Rat>>>,
    /// Image in `M(v)` of each generator of `P_0`.
    pub augmentation: Vec<Vec<Rat>>,
    /// True if the last computed syzygy is nonzero.
    pub truncated: bool,
}

impl ProjectiveResolution {
    /// Projective dimension, if the resolution terminated.
    pub fn projective_dimension(&self) -> Option<usize> {
        if self.truncated {
            None
        } else {
            Some(self.tops.len().saturating_sub(1))
        }
    }

    /// Multiplicity of `P_v` in `P_l`.
    pub fn multiplicity(&self, l: usize, v: usize) -> usize {
        self.tops.get(l).map_or(0, |t| t.iter().filter(|&&w| w == v).count())
    }

    pub fn length(&self) -> usize {
        self.tops.len()
    }
}

/// Generators of `X` complementing the radical `Σ im X(a)` at each vertex.
fn top_generators(x: &Representation) -> Vec<(usize, Vec<Rat>)> {
    let q = x.algebra().quiver();
    let mut gens = Vec::new();
    for v in 0..q.vertex_count() {
        let d = x.dim(v);
        let mut space = RowSpace::new(d);
        for a in q.arrows_into(v) {
            for c in x.map(a).columns() {
                space.insert(&c);
            }
        }
        for i in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::one();
            if space.insert(&e) {
                gens.push((v, e));
            }
        }
    }
    gens
}

/// Layout of `⊕_k P_{tops[k]}` at vertex `j`: offset of each generator's block.
fn block_offsets(x: &Representation, tops: &[usize], j: usize) -> Vec<usize> {
    let basis = x.algebra().basis();
    let mut offs = Vec::with_capacity(tops.len());
    let mut acc = 0;
    for &v in tops {
        offs.push(acc);
        acc += basis.from_to(v, j).len();
    }
    offs
}

/// Computes a minimal projective resolution with at most `max_len + 1` terms `P_0 .. P_max_len`.
pub fn projective_resolution(m: &Representation, max_len: usize) -> Result<ProjectiveResolution> {
    let alg = m.algebra().clone();
    let q = alg.quiver();
    let basis = alg.basis();
    let n = q.vertex_count();

    let mut tops = Vec::new();
    let mut differentials = Vec::new();
    let mut augmentation = Vec::new();
    let mut current = m.clone();
    // coordinates of `current` inside the previous projective, per vertex (columns)
    let mut embedding: Option<Vec<RatMatrix>> = None;

    for l in 0..=max_len {
        if current.is_zero() {
            return Ok(ProjectiveResolution { tops, differentials, augmentation, truncated: false });
        }
        let gens = top_generators(&current);
        let top: Vec<usize> = gens.iter().map(|(v, _)| *v).collect();
        let images: Vec<Vec<Rat>> = match &embedding {
            None => gens.iter().map(|(_, g)| g.clone()).collect(),
            Some(emb) => gens.iter().map(|(v, g)| emb[*v].mul_vec(g)).collect(),
        };
        if l == 0 {
            augmentation = images;
        } else {
            differentials.push(images);
        }

        let cover = Representation::direct_sum(
            &top.iter().map(|&v| Representation::projective(alg.clone(), v)).collect::<Vec<_>>().iter().collect::<Vec<_>>(),
        )?;
        // π_j: cover(j) -> current(j)
        let mut kernels = Vec::with_capacity(n);
        for j in 0..n {
            let offs = block_offsets(&current, &top, j);
            let mut pi = RatMatrix::zeros(current.dim(j), cover.dim(j));
            for (k, (v, g)) in gens.iter().enumerate() {
                for (c, &b) in basis.from_to(*v, j).iter().enumerate() {
                    let col = current.path_matrix(basis.path(b)).mul_vec(g);
                    for (r, x) in col.into_iter().enumerate() {
                        pi[(r, offs[k] + c)] = x;
                    }
                }
            }
            if pi.rank() != current.dim(j) {
                return Err(Error::Internal("projective cover is not surjective".into()));
            }
            let ker = pi.kernel();
            kernels.push(RatMatrix::from_columns(cover.dim(j), &ker));
        }
        let syzygy = cover.restrict(&kernels)?;
        tops.push(top);
        embedding = Some(kernels);
        current = syzygy;
    }
    let truncated = !current.is_zero();
    Ok(ProjectiveResolution { tops, differentials, augmentation, truncated })
}

/// Matrix of `Hom(P_{l-1}, N) -> Hom(P_l, N)`, `φ ↦ φ ∘ d_l`, in the bases `⊕ N(v)`.
fn cochain_matrix(res: &ProjectiveResolution, n: &Representation, l: usize) -> RatMatrix {
    let alg = n.algebra();
    let basis = alg.basis();
    let prev = &res.tops[l - 1];
    let cur = &res.tops[l];
    let col_offs: Vec<usize> = prev
        .iter()
        .scan(0, |acc, &w| {
            let o = *acc;
            *acc += n.dim(w);
            Some(o)
        })
        .collect();
    let cols: usize = prev.iter().map(|&w| n.dim(w)).sum();
    let rows: usize = cur.iter().map(|&v| n.dim(v)).sum();
    let mut out = RatMatrix::zeros(rows, cols);
    let mut r0 = 0;
    for (s, &v) in cur.iter().enumerate() {
        let image = &res.differentials[l - 1][s];
        let mut pos = 0;
        for (r, &w) in prev.iter().enumerate() {
            for &b in basis.from_to(w, v) {
                let c = &image[pos];
                pos += 1;
                if c.is_zero() {
                    continue;
                }
                let np = n.path_matrix(basis.path(b)).scale(c);
                for i in 0..np.rows() {
                    for j in 0..np.cols() {
                        out[(r0 + i, col_offs[r] + j)] += &np[(i, j)];
                    }
                }
            }
        }
        r0 += n.dim(v);
    }
    out
}

fn hom_from_projectives(top: &[usize], n: &Representation) -> usize {
    top.iter().map(|&v| n.dim(v)).sum()
}

fn ext_from_resolution(res: &ProjectiveResolution, n: &Representation, l: usize) -> usize {
    let Some(top) = res.tops.get(l) else {
        return 0;
    };
    let dim = hom_from_projectives(top, n);
    let incoming = if l == 0 { 0 } else { cochain_matrix(res, n, l).rank() };
    let outgoing = if l + 1 < res.tops.len() { cochain_matrix(res, n, l + 1).rank() } else { 0 };
    dim - incoming - outgoing
}

/// `dim Ext^l_A(M, N)` from the complex `Hom(P_•, N)`.
pub fn ext_dim(m: &Representation, n: &Representation, l: usize) -> Result<usize> {
    let res = projective_resolution(m, l + 1)?;
    Ok(ext_from_resolution(&res, n, l))
}

/// `dim Ext^l(M, N)` for `l = 0..=pd M`; fails if `pd M > l_max`.
pub fn ext_all(m: &Representation, n: &Representation, l_max: usize) -> Result<Vec<usize>> {
    let res = projective_resolution(m, l_max)?;
    if res.truncated {
        return Err(Error::ResolutionTruncated(l_max));
    }
    Ok((0..res.tops.len().max(1)).map(|l| ext_from_resolution(&res, n, l)).collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bound_quiver::parse_algebra;
    use crate::rep::hom_dim;

    #[test]
    fn a2_simple_resolution() {
        let a2 = Arc::new(parse_algebra("vertices 1 2; arrows a:1->2;").unwrap());
        let s1 = Representation::simple(a2.clone(), 0);
        let s2 = Representation::simple(a2.clone(), 1);
        let res = projective_resolution(&s1, 4).unwrap();
        assert_eq!(res.tops, vec![vec![0], vec![1]]);
        assert_eq!(res.projective_dimension(), Some(1));
        assert_eq!(ext_dim(&s1, &s2, 1).unwrap(), 1);
        assert_eq!(ext_dim(&s2, &s1, 1).unwrap(), 0);
        let p1 = Representation::projective(a2, 0);
        assert_eq!(projective_resolution(&p1, 3).unwrap().projective_dimension(), Some(0));
    }

    #[test]
    fn a3_relation_has_pd_two() {
        let a3 = Arc::new(parse_algebra("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;").unwrap());
        let s1 = Representation::simple(a3.clone(), 0);
        let s3 = Representation::simple(a3.clone(), 2);
        let res = projective_resolution(&s1, 5).unwrap();
        assert_eq!(res.tops, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(ext_dim(&s1, &s3, 2).unwrap(), 1);
        assert_eq!(ext_all(&s1, &s3, 6).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn ext_zero_is_hom() {
        let k2 = Arc::new(parse_algebra("vertices 1 2; arrows a:1->2 b:1->2;").unwrap());
        let p1 = Representation::projective(k2.clone(), 0);
        let s1 = Representation::simple(k2.clone(), 0);
        let m = p1.oplus(&s1);
        assert_eq!(ext_dim(&m, &m, 0).unwrap(), hom_dim(&m, &m));
    }

    #[test]
    fn truncation_on_self_injective_loop() {
        let lp = Arc::new(parse_algebra("vertices 1; arrows x:1->1; relations x.x;").unwrap());
        let s = Representation::simple(lp, 0);
        let res = projective_resolution(&s, 3).unwrap();
        assert!(res.truncated);
        assert!(matches!(ext_all(&s, &s, 3), Err(Error::ResolutionTruncated(3))));
        assert_eq!(ext_dim(&s, &s, 2).unwrap(), 1);
    }
}
