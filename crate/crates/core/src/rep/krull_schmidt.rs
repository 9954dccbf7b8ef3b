use num_integer::Roots;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::endo::unit;
use super::{hom_space, EndAlgebra, Morphism, Representation};
use crate::error::Result;
use crate::exactalg::{find_rational_point, ri, variable_names, GroebnerCaps, Polynomial, Rat, RatMatrix, UniPoly};
use crate::sampling::{random_rat, rng_from_seed};

const SPLIT_SEED: u64 = 0x5eed_4b53;
const GROEBNER_SPLIT_MAX_DIM: usize = 9;

/// An indecomposable summand with its multiplicity.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Representation,
    pub multiplicity: usize,
    /// `dim End/rad` of the summand; 1 means absolutely indecomposable.
    pub residue_dim: usize,
    /// Dimension of the centre of `End/rad`.
    pub residue_center_dim: usize,
    /// Set when grouping could not decide whether this summand matches another.
    pub iso_undecided: bool,
}

impl Summand {
    /// Number of summands this piece splits into over an algebraic closure,
    /// assuming `End/rad` is simple over its centre.
    pub fn geometric_parts(&self) -> usize {
        if self.residue_dim <= 1 {
            return 1;
        }
        let c = self.residue_center_dim.max(1);
        c * (self.residue_dim / c).sqrt()
    }
}

/// Three-valued isomorphism verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoVerdict {
    Isomorphic,
    NotIsomorphic,
    Undecided,
}

struct Piece {
    module: Representation,
    bases: Vec<RatMatrix>,
    residue_dim: usize,
    center_dim: usize,
}

/// Idempotent projecting onto the generalised `λ`-eigenspace of `g`, for a rational
/// eigenvalue `λ` whose eigenspace is proper.
fn eigen_idempotent(e: &EndAlgebra, g: &[Rat]) -> Option<Vec<Rat>> {
    let lg = e.left_matrix(g);
    let mu = lg.min_poly();
    for lambda in mu.rational_roots() {
        let lin = UniPoly::linear(&lambda);
        let mut k = 0;
        let mut q = mu.clone();
        loop {
            let (quot, rem) = q.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            q = quot;
            k += 1;
        }
        if q.degree() == Some(0) {
            continue;
        }
        let (_, _, t) = lin.pow(k).ext_gcd(&q);
        let p = t.mul(&q);
        let pm = lg.eval_poly(&p);
        let idem = pm.mul_vec(e.identity());
        return Some(idem);
    }
    None
}

fn random_element(e: &EndAlgebra, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    (0..e.dim()).map(|_| ri(rng.gen_range(-5..=5))).collect()
}

fn combination(vectors: &[Vec<Rat>], rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n];
    for v in vectors {
        let c = ri(rng.gen_range(-5..=5));
        for (o, x) in out.iter_mut().zip(v) {
            *o += &c * x;
        }
    }
    out
}

fn nontrivial(e: &EndAlgebra, idem: &[Rat]) -> bool {
    !idem.iter().all(Zero::is_zero) && idem != e.identity()
}

/// Idempotent of `E / rad E` found as a rational point of `x² = x`, `tr L_x = t`.
fn groebner_idempotent(e: &EndAlgebra) -> Option<Vec<Rat>> {
    let n = e.dim();
    let s = e.semisimple_dim();
    if s > GROEBNER_SPLIT_MAX_DIM {
        return None;
    }
    let comp = super::complement(&RatMatrix::from_columns(n, e.radical()), n);
    let idx: Vec<usize> = (0..comp.cols()).map(|c| (0..n).find(|&r| !comp[(r, c)].is_zero()).unwrap()).collect();
    let vars = variable_names("s", idx.len());
    let x: Vec<Polynomial> = (0..idx.len()).map(|k| Polynomial::var(vars.clone(), k)).collect();
    // e = Σ s_k b_{idx k}
    let mut square = vec![Polynomial::zero(vars.clone()); n];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            let prod = x[a].mul(&x[b]);
            for (k, c) in e.structure_constants()[i][j].iter().enumerate() {
                if !c.is_zero() {
                    square[k] = square[k].add(&prod.scale(c));
                }
            }
        }
    }
    let mut diff = square;
    for (a, &i) in idx.iter().enumerate() {
        diff[i] = diff[i].sub(&x[a]);
    }
    let mut eqs: Vec<Polynomial> = Vec::new();
    let p = {
        let mut rows = Vec::new();
        for r in 0..n {
            let mut v = vec![Rat::zero(); n];
            v[r] = Rat::one();
            rows.push(e.project(&v));
        }
        rows
    };
    let qdim = p.first().map_or(0, Vec::len);
    for row in 0..qdim {
        let mut poly = Polynomial::zero(vars.clone());
        for (k, d) in diff.iter().enumerate() {
            if !p[k][row].is_zero() {
                poly = poly.add(&d.scale(&p[k][row]));
            }
        }
        if !poly.is_zero() {
            eqs.push(poly);
        }
    }
    let traces: Vec<Rat> = idx.iter().map(|&i| e.trace(&unit(n, i))).collect();
    let caps = GroebnerCaps { max_basis: 2000, max_degree: 12 };
    for t in 1..n {
        let mut sys = eqs.clone();
        let mut tr = Polynomial::constant(vars.clone(), -ri(t as i64));
        for (a, c) in traces.iter().enumerate() {
            tr = tr.add(&x[a].scale(c));
        }
        sys.push(tr);
        if let Ok(Some(pt)) = find_rational_point(&sys, caps) {
            let mut ebar = vec![Rat::zero(); n];
            for (a, &i) in idx.iter().enumerate() {
                ebar[i] = pt[a].clone();
            }
            if let Some(lifted) = e.lift_idempotent(&ebar) {
                if nontrivial(e, &lifted) {
                    return Some(lifted);
                }
            }
        }
    }
    None
}

fn find_idempotent(m: &Representation, e: &EndAlgebra, rng: &mut ChaCha8Rng) -> Option<Vec<Rat>> {
    let n = e.dim();
    let center = e.center_mod_radical();
    if center.len() > 1 {
        for _ in 0..4 {
            let z = combination(&center, rng, n);
            if let Some(idem) = eigen_idempotent(e, &z) {
                return Some(idem);
            }
        }
    }
    for _ in 0..4 {
        let x = random_element(e, rng);
        if let Some(idem) = eigen_idempotent(e, &x) {
            return Some(idem);
        }
    }
    // annihilators of vectors give non-invertible elements
    for v in 0..m.dims().len() {
        let d = m.dim(v);
        if d == 0 {
            continue;
        }
        let mut probes: Vec<Vec<Rat>> = (0..d).map(|i| unit(d, i)).collect();
        for _ in 0..2 {
            probes.push((0..d).map(|_| random_rat(rng, 5, 3)).collect());
        }
        for w in probes {
            let cols: Vec<Vec<Rat>> = e.basis().iter().map(|b| b.0[v].mul_vec(&w)).collect();
            let ann = RatMatrix::from_columns(d, &cols).kernel();
            if ann.is_empty() {
                continue;
            }
            for _ in 0..3 {
                let y = combination(&ann, rng, n);
                if let Some(idem) = eigen_idempotent(e, &y) {
                    return Some(idem);
                }
                if e.in_radical(&y) {
                    continue;
                }
                for _ in 0..3 {
                    let z = random_element(e, rng);
                    for g in [e.mul(&y, &z), e.mul(&z, &y)] {
                        if let Some(idem) = eigen_idempotent(e, &g) {
                            return Some(idem);
                        }
                    }
                }
            }
        }
    }
    groebner_idempotent(e)
}

fn image_bases(f: &Morphism) -> Vec<RatMatrix> {
    f.0.iter().map(RatMatrix::column_space).collect()
}

/// Splits `M = ker p(f) ⊕ ker q(f)` for a factorisation `μ_f = p q` with `p = (x − λ)^k`,
/// `λ` a rational eigenvalue and `q` nonconstant.
fn fitting_split(m: &Representation, f: &Morphism) -> Option<[Vec<RatMatrix>; 2]> {
    let mu = f.total_matrix().min_poly();
    for lambda in mu.rational_roots() {
        let lin = UniPoly::linear(&lambda);
        let mut k = 0;
        let mut q = mu.clone();
        loop {
            let (quot, rem) = q.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            q = quot;
            k += 1;
        }
        if q.degree() == Some(0) {
            continue;
        }
        let p = lin.pow(k);
        let parts = [p, q].map(|poly| {
            f.0.iter()
                .enumerate()
                .map(|(v, fv)| RatMatrix::from_columns(m.dim(v), &fv.eval_poly(&poly).kernel()))
                .collect::<Vec<_>>()
        });
        return Some(parts);
    }
    None
}

/// Cheap splitting by Fitting decompositions of sampled endomorphisms, without structure constants.
fn fast_split(m: &Representation, basis: &[Morphism], rng: &mut ChaCha8Rng) -> Option<[Vec<RatMatrix>; 2]> {
    let template = Morphism::zero(m, m);
    let small = |rng: &mut ChaCha8Rng, k: usize| -> Vec<Rat> { (0..k).map(|_| ri(rng.gen_range(-5..=5))).collect() };
    for _ in 0..3 {
        let f = Morphism::combination(basis, &small(rng, basis.len()), &template);
        if let Some(split) = fitting_split(m, &f) {
            return Some(split);
        }
    }
    // endomorphisms killing a vector are not invertible; unless nilpotent they split M
    for v in 0..m.dims().len() {
        let d = m.dim(v);
        for i in 0..d {
            let w = unit(d, i);
            let cols: Vec<Vec<Rat>> = basis.iter().map(|b| b.0[v].mul_vec(&w)).collect();
            let ann = RatMatrix::from_columns(d, &cols).kernel();
            if ann.is_empty() {
                continue;
            }
            for _ in 0..2 {
                let coeffs = combination(&ann, rng, basis.len());
                let f = Morphism::combination(basis, &coeffs, &template);
                if let Some(split) = fitting_split(m, &f) {
                    return Some(split);
                }
            }
        }
    }
    None
}

fn split_recursive(m: Representation, bases: Vec<RatMatrix>, rng: &mut ChaCha8Rng, out: &mut Vec<Piece>) -> Result<()> {
    if m.is_zero() {
        return Ok(());
    }
    let basis = hom_space(&m, &m);
    if basis.len() == 1 {
        out.push(Piece { module: m, bases, residue_dim: 1, center_dim: 1 });
        return Ok(());
    }
    if let Some(split) = fast_split(&m, &basis, rng) {
        for sub in split {
            let piece = m.restrict(&sub)?;
            let outer: Vec<RatMatrix> = bases.iter().zip(&sub).map(|(b, s)| b.mul(s)).collect();
            split_recursive(piece, outer, rng, out)?;
        }
        return Ok(());
    }
    let e = EndAlgebra::new(&m);
    if e.is_local_split() {
        out.push(Piece { module: m, bases, residue_dim: 1, center_dim: 1 });
        return Ok(());
    }
    match find_idempotent(&m, &e, rng) {
        Some(idem) => {
            let f = e.element(&idem);
            let g = Morphism::identity(&m).sub(&f);
            for proj in [f, g] {
                let sub = image_bases(&proj);
                let piece = m.restrict(&sub)?;
                let outer: Vec<RatMatrix> = bases.iter().zip(&sub).map(|(b, s)| b.mul(s)).collect();
                split_recursive(piece, outer, rng, out)?;
            }
            Ok(())
        }
        None => {
            let center_dim = e.center_mod_radical().len();
            out.push(Piece { module: m, bases, residue_dim: e.semisimple_dim(), center_dim });
            Ok(())
        }
    }
}

/// Splits `M` into summands, returning them with the orthogonal idempotents of `End(M)`
/// projecting onto each summand.
pub fn decompose(m: &Representation) -> Result<(Vec<(Representation, usize, usize)>, Vec<Morphism>)> {
    let mut rng = rng_from_seed(SPLIT_SEED);
    let mut pieces = Vec::new();
    let ids: Vec<RatMatrix> = m.dims().iter().map(|&d| RatMatrix::identity(d)).collect();
    split_recursive(m.clone(), ids, &mut rng, &mut pieces)?;
    let nv = m.dims().len();
    let mut idempotents = Vec::new();
    let full: Vec<RatMatrix> = (0..nv)
        .map(|v| {
            let mut acc = RatMatrix::zeros(m.dim(v), 0);
            for p in &pieces {
                acc = acc.hstack(&p.bases[v]);
            }
            acc
        })
        .collect();
    let inverses: Vec<RatMatrix> = full.iter().map(|b| b.inverse().expect("summands span M")).collect();
    let mut offsets = vec![0usize; nv];
    for p in &pieces {
        let mats = (0..nv)
            .map(|v| {
                let d = m.dim(v);
                let k = p.bases[v].cols();
                let sel = RatMatrix::from_fn(d, d, |i, j| {
                    if i == j && i >= offsets[v] && i < offsets[v] + k {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                });
                full[v].mul(&sel).mul(&inverses[v])
            })
            .collect();
        for v in 0..nv {
            offsets[v] += p.bases[v].cols();
        }
        idempotents.push(Morphism(mats));
    }
    let summands = pieces.into_iter().map(|p| (p.module, p.residue_dim, p.center_dim)).collect();
    Ok((summands, idempotents))
}

/// Decides `X ≅ Y`. Exact whenever `End(X)/rad` is one-dimensional; otherwise falls back to
/// random and small-lattice searches for an invertible morphism.
pub fn is_isomorphic(x: &Representation, y: &Representation) -> IsoVerdict {
    if x.dims() != y.dims() {
        return IsoVerdict::NotIsomorphic;
    }
    if x.is_zero() {
        return IsoVerdict::Isomorphic;
    }
    let fs = hom_space(x, y);
    let gs = hom_space(y, x);
    if fs.is_empty() || gs.is_empty() {
        return IsoVerdict::NotIsomorphic;
    }
    let ex = EndAlgebra::new(x);
    let mut escapes = false;
    'outer: for f in &fs {
        for g in &gs {
            let c = ex.coords(&g.compose(f)).expect("endomorphism");
            if !ex.in_radical(&c) {
                escapes = true;
                break 'outer;
            }
        }
    }
    if !escapes {
        return IsoVerdict::NotIsomorphic;
    }
    if ex.is_local_split() {
        return IsoVerdict::Isomorphic;
    }
    let template = Morphism::zero(x, y);
    let mut rng = rng_from_seed(SPLIT_SEED ^ 0x150);
    for _ in 0..20 {
        let coeffs: Vec<Rat> = fs.iter().map(|_| random_rat(&mut rng, 9, 9)).collect();
        if Morphism::combination(&fs, &coeffs, &template).is_invertible() {
            return IsoVerdict::Isomorphic;
        }
    }
    // lattice of coefficient vectors in {-1, 0, 1}, capped
    let k = fs.len();
    let total = 3usize.saturating_pow(k as u32).min(729);
    for code in 0..total {
        let mut c = code;
        let coeffs: Vec<Rat> = (0..k)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                ri(d)
            })
            .collect();
        if Morphism::combination(&fs, &coeffs, &template).is_invertible() {
            return IsoVerdict::Isomorphic;
        }
    }
    IsoVerdict::Undecided
}

/// Krull–Schmidt decomposition: indecomposable summands up to isomorphism with multiplicities.
pub fn krull_schmidt(m: &Representation) -> Result<Vec<Summand>> {
    let (pieces, _) = decompose(m)?;
    let mut out: Vec<Summand> = Vec::new();
    for (module, residue_dim, center_dim) in pieces {
        let mut placed = false;
        let mut undecided = false;
        for s in out.iter_mut() {
            match is_isomorphic(&s.module, &module) {
                IsoVerdict::Isomorphic => {
                    s.multiplicity += 1;
                    placed = true;
                    break;
                }
                IsoVerdict::Undecided => {
                    s.iso_undecided = true;
                    undecided = true;
                }
                IsoVerdict::NotIsomorphic => {}
            }
        }
        if !placed {
            out.push(Summand { module, multiplicity: 1, residue_dim, residue_center_dim: center_dim, iso_undecided: undecided });
        }
    }
    Ok(out)
}

/// `End_A(M) ≅ k`.
pub fn is_schur(m: &Representation) -> bool {
    hom_space(m, m).len() == 1
}

/// True when the Krull–Schmidt decomposition over the rationals has a single summand.
pub fn is_indecomposable(m: &Representation) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    if EndAlgebra::new(m).is_local_split() {
        return Ok(true);
    }
    let ks = krull_schmidt(m)?;
    Ok(ks.len() == 1 && ks[0].multiplicity == 1)
}
