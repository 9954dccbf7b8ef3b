//! Tilting modules: verification, the endomorphism algebra `B = End(T)^op` as a bound quiver
//! algebra, the isometry `u` on Grothendieck groups, torsion classes, well-positioned weights
//! and transport of weights and modules.
//!
//! Summand `T_i` of `T` becomes vertex `i` of `B`. A morphism `f: T_i → T_j` acts on
//! `Hom(T, M)` by `φ ↦ φ ∘ f`, sending the space at `j` to the space at `i`, so an irreducible
//! `f ∈ Hom(T_i, T_j)` is an arrow `j → i` of `B`.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bound_quiver::{Arrow, BoundQuiverAlgebra, Path, Quiver, Relation, DEFAULT_L_MAX};
use crate::error::{Error, Result};
use crate::exactalg::{to_i64 as exact_to_i64, Coordinates, GroebnerCaps, Rat, RatMatrix, RowSpace};
use crate::forms::{euler_data, eval_weight, to_i64, DEFAULT_GLOBAL_DIM_BOUND};
use crate::rep::{
    ext_dim, hom_dim, hom_space, is_isomorphic, krull_schmidt, projective_resolution, EndAlgebra, IsoVerdict, Morphism,
    Representation,
};
use crate::sampling::{random_representation, random_with_ranks, rng_from_seed, scheme_for, SamplingScheme};
use crate::stability::{jh_filtration_ss, king_test, SEquivalenceClass, StabilityStatus};

const MAX_END_DIM: usize = 30;

#[derive(Clone, Debug, Serialize)]
pub struct TiltingCheck {
    pub projective_dimension: Option<usize>,
    pub pd_at_most_one: bool,
    pub self_ext1: usize,
    pub summand_count: usize,
    pub vertex_count: usize,
    pub basic: bool,
    pub is_tilting: bool,
    pub notes: Vec<String>,
}

fn check_parts(t: &Representation, summands: &[Representation], basic: bool, mut notes: Vec<String>) -> Result<TiltingCheck> {
    let res = projective_resolution(t, 2)?;
    let projective_dimension = res.projective_dimension();
    let pd_at_most_one = matches!(projective_dimension, Some(p) if p <= 1);
    let self_ext1 = ext_dim(t, t, 1)?;
    let vertex_count = t.algebra().vertex_count();
    let summand_count = summands.len();
    if !pd_at_most_one {
        notes.push("projective dimension exceeds 1".into());
    }
    if self_ext1 != 0 {
        notes.push(format!("dim Ext^1(T,T) = {self_ext1}"));
    }
    if summand_count != vertex_count {
        notes.push(format!("{summand_count} summands for {vertex_count} vertices"));
    }
    let is_tilting = pd_at_most_one && self_ext1 == 0 && basic && summand_count == vertex_count;
    Ok(TiltingCheck { projective_dimension, pd_at_most_one, self_ext1, summand_count, vertex_count, basic, is_tilting, notes })
}

/// Checks `pd T ≤ 1`, `Ext¹(T,T) = 0` and that `T` has exactly `|Q_0|` pairwise
/// non-isomorphic indecomposable summands.
pub fn is_tilting(t: &Representation) -> Result<TiltingCheck> {
    let ks = krull_schmidt(t)?;
    let mut notes = Vec::new();
    let basic = ks.iter().all(|s| s.multiplicity == 1 && !s.iso_undecided);
    if !basic {
        notes.push("T is not basic".into());
    }
    let summands: Vec<Representation> = ks.into_iter().map(|s| s.module).collect();
    check_parts(t, &summands, basic, notes)
}

/// A verified tilting module with `B = End(T)^op` and the isometry `u`.
#[derive(Clone, Debug)]
pub struct TiltingContext {
    pub t: Representation,
    pub summands: Vec<Representation>,
    pub b: Arc<BoundQuiverAlgebra>,
    /// Morphism `T_i → T_j` for each arrow `j → i` of `B`.
    pub arrow_maps: Vec<Morphism>,
    /// `u[j][i]`: component at `B`-vertex `j` of `u(e_i)`.
    pub u: Vec<Vec<i64>>,
    pub check: TiltingCheck,
}

impl TiltingContext {
    /// Builds the context from summands in the order that fixes the vertices of `B`.
    pub fn new(summands: Vec<Representation>) -> Result<Self> {
        let first = summands.first().ok_or_else(|| Error::InvalidInput("no summands".into()))?;
        let alg = first.algebra().clone();
        let mut notes = Vec::new();
        let mut basic = true;
        for (i, s) in summands.iter().enumerate() {
            if s.is_zero() || !EndAlgebra::new(s).is_local_split() {
                notes.push(format!("summand {} is not indecomposable with End/rad = Q", i + 1));
                basic = false;
            }
            for (j, other) in summands.iter().enumerate().take(i) {
                if is_isomorphic(s, other) != IsoVerdict::NotIsomorphic {
                    notes.push(format!("summands {} and {} are not known to be non-isomorphic", j + 1, i + 1));
                    basic = false;
                }
            }
        }
        let t = Representation::direct_sum(&summands.iter().collect::<Vec<_>>())?;
        let check = check_parts(&t, &summands, basic, notes)?;
        if !check.is_tilting {
            return Err(Error::NotApplicable(format!("not a tilting module: {}", check.notes.join("; "))));
        }
        let (b, arrow_maps) = end_algebra_presentation(&summands)?;
        let b = Arc::new(b);
        let u = induced_isometry(&alg, &summands, &t)?;
        let ctx = TiltingContext { t, summands, b, arrow_maps, u, check };
        ctx.verify_isometry()?;
        Ok(ctx)
    }

    /// Context with summands in Krull–Schmidt order.
    pub fn from_module(t: &Representation) -> Result<Self> {
        let ks = krull_schmidt(t)?;
        Self::new(ks.into_iter().map(|s| s.module).collect())
    }

    pub fn algebra(&self) -> &Arc<BoundQuiverAlgebra> {
        self.t.algebra()
    }

    pub fn u_matrix(&self) -> RatMatrix {
        RatMatrix::from_fn(self.u.len(), self.u.len(), |r, c| Rat::from_integer(self.u[r][c].into()))
    }

    pub fn apply_u(&self, d: &[i64]) -> Vec<i64> {
        self.u.iter().map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum()).collect()
    }

    /// `⟨x, y⟩_A = ⟨ux, uy⟩_B` on unit vectors and `det u = ±1`.
    fn verify_isometry(&self) -> Result<()> {
        let det = self.u_matrix().determinant();
        if det.abs() != Rat::one() {
            return Err(Error::InstanceCheckFailed(format!("det u = {det}")));
        }
        let ea = euler_data(self.algebra(), DEFAULT_GLOBAL_DIM_BOUND)?;
        let eb = euler_data(&self.b, DEFAULT_GLOBAL_DIM_BOUND)?;
        let n = self.u.len();
        for i in 0..n {
            for j in 0..n {
                let (mut x, mut y) = (vec![0; n], vec![0; n]);
                x[i] = 1;
                y[j] = 1;
                if ea.pair(&x, &y) != eb.pair(&self.apply_u(&x), &self.apply_u(&y)) {
                    return Err(Error::InstanceCheckFailed(format!("u does not preserve ⟨e_{i}, e_{j}⟩")));
                }
            }
        }
        Ok(())
    }

    /// Presentation of `B` followed by the rows of `u`.
    pub fn to_text(&self) -> String {
        let mut s = self.b.to_text();
        s.push_str("# u: rows are B-vertices, columns are A-vertices\n");
        for row in &self.u {
            let r: Vec<String> = row.iter().map(i64::to_string).collect();
            s.push_str(&format!("# u {}\n", r.join(" ")));
        }
        s
    }
}

fn flat_coords(basis: &[Morphism]) -> Coordinates {
    let flat: Vec<Vec<Rat>> = basis.iter().map(Morphism::flatten).collect();
    let len = flat.first().map_or(0, Vec::len);
    Coordinates::new(RatMatrix::from_columns(len, &flat))
}

/// Bound quiver presentation of `End(⊕ T_i)^op`, with the morphism chosen for each arrow.
pub fn end_algebra_presentation(summands: &[Representation]) -> Result<(BoundQuiverAlgebra, Vec<Morphism>)> {
    let n = summands.len();
    let homs: Vec<Vec<Vec<Morphism>>> = (0..n).map(|i| (0..n).map(|j| hom_space(&summands[i], &summands[j])).collect()).collect();
    let total: usize = homs.iter().flatten().map(Vec::len).sum();
    if total > MAX_END_DIM {
        return Err(Error::NotApplicable(format!("dim End(T) = {total} exceeds {MAX_END_DIM}")));
    }
    // radical of Hom(T_i, T_j) in hom-basis coordinates
    let rad: Vec<Vec<Vec<Morphism>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j {
                        return homs[i][j].clone();
                    }
                    let e = EndAlgebra::new(&summands[i]);
                    e.radical().iter().map(|c| e.element(c)).collect()
                })
                .collect()
        })
        .collect();
    let mut arrows = Vec::new();
    let mut arrow_maps = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let coords = flat_coords(&homs[i][j]);
            let dim = homs[i][j].len();
            let mut space = RowSpace::new(dim);
            for k in 0..n {
                for f in &rad[i][k] {
                    for g in &rad[k][j] {
                        space.insert(&coords.coords(&g.compose(f).flatten()).expect("in Hom"));
                    }
                }
            }
            for f in &rad[i][j] {
                if space.insert(&coords.coords(&f.flatten()).expect("in Hom")) {
                    if i == j {
                        return Err(Error::NotApplicable("End(T) has a loop; its quiver must be acyclic".into()));
                    }
                    arrows.push(Arrow { name: format!("f{}", arrows.len() + 1), tail: j, head: i });
                    arrow_maps.push(f.clone());
                }
            }
        }
    }
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let quiver = Quiver::new(vertices, arrows)?;
    if !quiver.is_acyclic() {
        return Err(Error::NotApplicable("the quiver of End(T) is not acyclic".into()));
    }
    let max_len = quiver.longest_path().unwrap_or(0);
    // path u → v evaluates to a morphism T_v → T_u
    let eval = |p: &Path| -> Morphism {
        let mut acc = Morphism::identity(&summands[p.source]);
        for &a in &p.arrows {
            acc = acc.compose(&arrow_maps[a]);
        }
        acc
    };
    let long_paths: Vec<Vec<Vec<Path>>> = (0..n)
        .map(|u| {
            let from = quiver.paths_from(u, max_len);
            (0..n).map(|v| from.iter().filter(|p| p.target == v && p.len() >= 2).cloned().collect()).collect()
        })
        .collect();
    // pairs ordered by the longest path between them, so sub-relations come first
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if let Some(l) = long_paths[u][v].iter().map(Path::len).max() {
                pairs.push((l, u, v));
            }
        }
    }
    pairs.sort();
    let mut relations: Vec<Relation> = Vec::new();
    for &(_, u, v) in &pairs {
        let paths = &long_paths[u][v];
        let coords = flat_coords(&homs[v][u]);
        let cols: Vec<Vec<Rat>> = paths.iter().map(|p| coords.coords(&eval(p).flatten()).expect("in Hom")).collect();
        let kernel = RatMatrix::from_columns(homs[v][u].len(), &cols).kernel();
        if kernel.is_empty() {
            continue;
        }
        let mut ideal = RowSpace::new(paths.len());
        for r in &relations {
            for pre in quiver.paths_to(r.source(), max_len).into_iter().filter(|p| p.source == u) {
                for post in quiver.paths_from(r.target(), max_len).into_iter().filter(|p| p.target == v) {
                    let mut vec = vec![Rat::zero(); paths.len()];
                    for (c, p) in r.terms() {
                        let full = pre.concat(p).and_then(|x| x.concat(&post)).expect("composable");
                        let k = paths.iter().position(|q| *q == full).expect("path of length at least two");
                        vec[k] += c;
                    }
                    ideal.insert(&vec);
                }
            }
        }
        for k in kernel {
            if ideal.insert(&k) {
                let terms = k.iter().zip(paths).filter(|(c, _)| !c.is_zero()).map(|(c, p)| (c.clone(), p.clone())).collect();
                relations.push(Relation::new(terms)?);
            }
        }
    }
    let b = BoundQuiverAlgebra::new(quiver, relations, DEFAULT_L_MAX)?;
    if b.dim() != total {
        return Err(Error::InstanceCheckFailed(format!("presented algebra has dimension {}, End(T) has {total}", b.dim())));
    }
    Ok((b, arrow_maps))
}

/// `u(dim M) = dim Hom(T, M) − dim Ext¹(T, M)`, evaluated on simples.
pub fn induced_isometry(
    alg: &Arc<BoundQuiverAlgebra>,
    summands: &[Representation],
    _t: &Representation,
) -> Result<Vec<Vec<i64>>> {
    let n = alg.vertex_count();
    let mut u = vec![vec![0i64; n]; summands.len()];
    for i in 0..n {
        let s = Representation::simple(alg.clone(), i);
        for (j, tj) in summands.iter().enumerate() {
            u[j][i] = hom_dim(tj, &s) as i64 - ext_dim(tj, &s, 1)? as i64;
        }
    }
    Ok(u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionClass {
    Torsion,
    TorsionFree,
    Neither,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub class: TorsionClass,
    pub hom_dim: usize,
    pub ext1_dim: usize,
    pub notes: Vec<String>,
}

/// `𝒯(T) = {M | Ext¹(T,M) = 0}`, `ℱ(T) = {M | Hom(T,M) = 0}`.
pub fn torsion_membership(ctx: &TiltingContext, m: &Representation) -> Result<TorsionReport> {
    let hom = hom_dim(&ctx.t, m);
    let ext = ext_dim(&ctx.t, m, 1)?;
    let mut notes = Vec::new();
    let class = if ext == 0 {
        if m.is_zero() {
            notes.push("zero module lies in both classes".into());
        }
        TorsionClass::Torsion
    } else if hom == 0 {
        TorsionClass::TorsionFree
    } else {
        TorsionClass::Neither
    };
    Ok(TorsionReport { class, hom_dim: hom, ext1_dim: ext, notes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionCase {
    /// Semistables are torsion; `θ < 0` on nonzero torsion-free modules.
    Case1,
    /// Semistables are torsion-free; `θ > 0` on nonzero torsion modules.
    Case2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WellPositionedVerdict {
    Case1,
    Case2,
    Fails,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: PositionCase,
    pub dims: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct WellPositionedReport {
    pub verdict: WellPositionedVerdict,
    /// Positive verdicts hold for all sampled modules of total dimension at most this bound.
    pub bound: usize,
    pub samples_per_dimvec: usize,
    pub modules_tested: usize,
    pub counterexamples: Vec<Counterexample>,
    pub semistable_torsion_found: bool,
    pub semistable_torsion_free_found: bool,
    pub notes: Vec<String>,
}

fn all_dimvecs_up_to(n: usize, bound: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if cur.iter().any(|&x| x > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(n, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, bound, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| (e.iter().sum::<usize>(), e.clone()));
    out
}

/// Sampled modules of dimension `e`: generic ones plus one per rank pattern of the arrows
/// (hereditary case), so that degenerate strata are visited.
fn sample_modules(alg: &Arc<BoundQuiverAlgebra>, e: &[usize], samples: usize, seed: u64) -> Result<Vec<Representation>> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    for _ in 0..samples {
        out.push(random_representation(alg, e, &mut rng)?);
    }
    let arrows = alg.quiver().arrows();
    let ranges: Vec<usize> = arrows.iter().map(|a| e[a.tail].min(e[a.head]) + 1).collect();
    let patterns: usize = ranges.iter().product();
    if patterns <= 64 {
        for code in 0..patterns {
            let mut c = code;
            let ranks: Vec<usize> = ranges
                .iter()
                .map(|r| {
                    let x = c % r;
                    c /= r;
                    x
                })
                .collect();
            let m = random_with_ranks(alg, e, &ranks, &mut rng)?;
            if m.validate().valid {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Bounded check of the well-positioned conditions over sampled modules of total dimension
/// at most `bound`. Failure is certified by a concrete module; success holds up to the bound.
pub fn is_well_positioned(
    ctx: &TiltingContext,
    theta: &[i64],
    bound: usize,
    samples: usize,
    seed: u64,
) -> Result<WellPositionedReport> {
    let alg = ctx.algebra();
    let n = alg.vertex_count();
    if theta.len() != n {
        return Err(Error::DimensionMismatch(format!("weight has {} entries, expected {n}", theta.len())));
    }
    let mut notes = Vec::new();
    let scheme = scheme_for(alg)?;
    if scheme == SamplingScheme::ZeroArrows {
        notes.push("modules sampled by zeroing arrows of violated monomial relations".into());
    }
    let caps = GroebnerCaps::default();
    let mut counterexamples: Vec<Counterexample> = Vec::new();
    let mut ss_t = false;
    let mut ss_f = false;
    let mut undecided = false;
    let mut tested = 0;
    let mut seen: Vec<Representation> = Vec::new();
    for (k, e) in all_dimvecs_up_to(n, bound).into_iter().enumerate() {
        let modules = sample_modules(alg, &e, samples, seed.wrapping_add(k as u64))?;
        for m in modules {
            let th = eval_weight(theta, m.dims());
            if th == 0 {
                let status = king_test(&m, theta, caps)?.status;
                if status == StabilityStatus::Undecided {
                    undecided = true;
                } else if status.is_semistable() {
                    let cls = torsion_membership(ctx, &m)?.class;
                    match cls {
                        TorsionClass::Torsion => ss_t = true,
                        TorsionClass::TorsionFree => ss_f = true,
                        TorsionClass::Neither => {}
                    }
                    if cls != TorsionClass::Torsion {
                        counterexamples.push(Counterexample {
                            case: PositionCase::Case1,
                            dims: m.dims().to_vec(),
                            reason: "θ-semistable module outside 𝒯(T)".into(),
                        });
                    }
                    if cls != TorsionClass::TorsionFree {
                        counterexamples.push(Counterexample {
                            case: PositionCase::Case2,
                            dims: m.dims().to_vec(),
                            reason: "θ-semistable module outside ℱ(T)".into(),
                        });
                    }
                }
            }
            for s in krull_schmidt(&m)? {
                let x = s.module;
                if seen.iter().any(|y| y.dims() == x.dims() && is_isomorphic(y, &x) == IsoVerdict::Isomorphic) {
                    continue;
                }
                tested += 1;
                let tx = eval_weight(theta, x.dims());
                let cls = torsion_membership(ctx, &x)?.class;
                if cls == TorsionClass::TorsionFree && tx >= 0 {
                    counterexamples.push(Counterexample {
                        case: PositionCase::Case1,
                        dims: x.dims().to_vec(),
                        reason: format!("torsion-free module with θ = {tx} ≥ 0"),
                    });
                }
                if cls == TorsionClass::Torsion && tx <= 0 {
                    counterexamples.push(Counterexample {
                        case: PositionCase::Case2,
                        dims: x.dims().to_vec(),
                        reason: format!("torsion module with θ = {tx} ≤ 0"),
                    });
                }
                seen.push(x);
            }
        }
    }
    counterexamples.sort_by(|a, b| (a.case as u8, &a.dims, &a.reason).cmp(&(b.case as u8, &b.dims, &b.reason)));
    counterexamples.dedup_by(|a, b| a.case == b.case && a.dims == b.dims && a.reason == b.reason);
    let fails1 = counterexamples.iter().any(|c| c.case == PositionCase::Case1);
    let fails2 = counterexamples.iter().any(|c| c.case == PositionCase::Case2);
    let verdict = if !fails1 && ss_t && !undecided {
        WellPositionedVerdict::Case1
    } else if !fails2 && ss_f && !undecided {
        WellPositionedVerdict::Case2
    } else if fails1 && fails2 {
        WellPositionedVerdict::Fails
    } else {
        if !ss_t && !ss_f {
            notes.push("no nonzero θ-semistable module found up to the bound".into());
        }
        WellPositionedVerdict::Undecided
    };
    Ok(WellPositionedReport {
        verdict,
        bound,
        samples_per_dimvec: samples,
        modules_tested: tested,
        counterexamples,
        semistable_torsion_found: ss_t,
        semistable_torsion_free_found: ss_f,
        notes,
    })
}

/// `θ′ = θ ∘ u⁻¹` in case 1, `−θ ∘ u⁻¹` in case 2.
pub fn transport_weight(ctx: &TiltingContext, theta: &[i64], case: PositionCase) -> Result<Vec<i64>> {
    let inv = ctx.u_matrix().inverse().ok_or_else(|| Error::Internal("u is singular".into()))?;
    let n = ctx.u.len();
    let sign = if case == PositionCase::Case1 { 1 } else { -1 };
    (0..n)
        .map(|j| {
            let mut s = Rat::zero();
            for (i, t) in theta.iter().enumerate() {
                s += Rat::from_integer((*t).into()) * &inv[(i, j)];
            }
            if !s.is_integer() {
                return Err(Error::Internal("u⁻¹ is not integral".into()));
            }
            exact_to_i64(&s).map(|x| sign * x).ok_or_else(|| Error::Internal("weight overflow".into()))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Functor {
    Hom,
    Ext1,
}

impl Functor {
    pub fn for_case(case: PositionCase) -> Self {
        match case {
            PositionCase::Case1 => Functor::Hom,
            PositionCase::Case2 => Functor::Ext1,
        }
    }
}

/// Quotient spaces `Hom(T_j, C) / W_j` with a complement basis for reading coordinates.
struct QuotientSpaces {
    bases: Vec<Vec<Morphism>>,
    coords: Vec<Coordinates>,
    /// Columns: basis of `W_j` then complement, in hom coordinates.
    full: Vec<RatMatrix>,
    sub_dim: Vec<usize>,
}

impl QuotientSpaces {
    fn dim(&self, j: usize) -> usize {
        self.full[j].cols() - self.sub_dim[j]
    }

    /// Class of `f ∈ Hom(T_j, C)` in complement coordinates.
    fn class(&self, j: usize, f: &Morphism) -> Vec<Rat> {
        let c = self.coords[j].coords(&f.flatten()).expect("in Hom");
        let all = Coordinates::new(self.full[j].clone()).coords(&c).expect("full basis");
        all[self.sub_dim[j]..].to_vec()
    }
}

/// `F(M)` as a `B`-module: `Hom(T, M)` or `Ext¹(T, M)`.
pub fn apply_functor(ctx: &TiltingContext, m: &Representation, functor: Functor) -> Result<Representation> {
    let n = ctx.summands.len();
    if m.is_zero() {
        return Ok(Representation::zero(ctx.b.clone(), vec![0; n]));
    }
    // F(M) at j is Hom(T_j, C) / W_j
    let (target, sub): (Representation, Vec<Vec<Morphism>>) = match functor {
        Functor::Hom => (m.clone(), vec![Vec::new(); n]),
        Functor::Ext1 => {
            let (env, embed) = m.injective_envelope()?;
            let image: Vec<RatMatrix> = embed.iter().map(RatMatrix::column_space).collect();
            let (coker, complements) = env.quotient(&image)?;
            // projection env → coker in complement coordinates
            let proj: Vec<RatMatrix> = (0..env.dims().len())
                .map(|v| {
                    let full = image[v].hstack(&complements[v]);
                    let inv = full.inverse().expect("basis");
                    let k = image[v].cols();
                    inv.select_rows(&(k..full.rows()).collect::<Vec<_>>())
                })
                .collect();
            let pi = Morphism(proj);
            let sub = ctx.summands.iter().map(|tj| hom_space(tj, &env).iter().map(|f| pi.compose(f)).collect()).collect();
            (coker, sub)
        }
    };
    let bases: Vec<Vec<Morphism>> = ctx.summands.iter().map(|tj| hom_space(tj, &target)).collect();
    let coords: Vec<Coordinates> = bases.iter().map(|b| flat_coords(b)).collect();
    let mut full = Vec::new();
    let mut sub_dim = Vec::new();
    for j in 0..n {
        let dim = bases[j].len();
        let vecs: Vec<Vec<Rat>> = sub[j].iter().map(|f| coords[j].coords(&f.flatten()).expect("in Hom")).collect();
        let w = RatMatrix::from_columns(dim, &vecs);
        let wcols = w.independent_columns();
        let w = w.select_cols(&wcols);
        let comp = crate::rep::complement(&w, dim);
        sub_dim.push(w.cols());
        full.push(w.hstack(&comp));
    }
    let qs = QuotientSpaces { bases, coords, full, sub_dim };
    let dims: Vec<usize> = (0..n).map(|j| qs.dim(j)).collect();
    let q = ctx.b.quiver();
    let mut maps = Vec::new();
    for (a, arrow) in q.arrows().iter().enumerate() {
        // arrow j → i acts by precomposition with f: T_i → T_j
        let (j, i) = (arrow.tail, arrow.head);
        let f = &ctx.arrow_maps[a];
        let template = Morphism::zero(&ctx.summands[j], &target);
        let mut mat = RatMatrix::zeros(dims[i], dims[j]);
        for k in 0..dims[j] {
            let col = qs.full[j].column(qs.sub_dim[j] + k);
            let phi = Morphism::combination(&qs.bases[j], &col, &template);
            let img = qs.class(i, &phi.compose(f));
            for (r, x) in img.into_iter().enumerate() {
                mat[(r, k)] = x;
            }
        }
        maps.push(mat);
    }
    Representation::new_validated(ctx.b.clone(), dims, maps)
        .map_err(|e| Error::InstanceCheckFailed(format!("transported module violates relations of B: {e}")))
}

#[derive(Clone, Debug)]
pub struct TransportReport {
    pub module: Representation,
    pub functor: Functor,
    pub theta_prime: Vec<i64>,
    pub source_status: StabilityStatus,
    pub target_status: StabilityStatus,
    pub expected_dims: Vec<i64>,
    /// `±u` applied to the Jordan–Hölder factor dimensions of `M`.
    pub mapped_factor_dims: Vec<Vec<i64>>,
    /// Jordan–Hölder factor dimensions of the image.
    pub image_factor_dims: Vec<Vec<i64>>,
}

/// Transports a θ-semistable `A`-module to `B` and checks the image is θ′-semistable
/// (stable if `M` is stable) with dimension vector `±u(dim M)`.
pub fn transport_module(ctx: &TiltingContext, m: &Representation, theta: &[i64], case: PositionCase) -> Result<TransportReport> {
    let caps = GroebnerCaps::default();
    let source_status = king_test(m, theta, caps)?.status;
    if !source_status.is_semistable() {
        return Err(Error::NotApplicable(format!("module is {} for θ", source_status.as_str())));
    }
    let functor = Functor::for_case(case);
    let theta_prime = transport_weight(ctx, theta, case)?;
    let image = apply_functor(ctx, m, functor)?;
    let ud = ctx.apply_u(&to_i64(m.dims()));
    let expected_dims: Vec<i64> = match case {
        PositionCase::Case1 => ud,
        PositionCase::Case2 => ud.iter().map(|x| -x).collect(),
    };
    if to_i64(image.dims()) != expected_dims {
        return Err(Error::InstanceCheckFailed(format!("dim F(M) = {:?}, expected {:?}", image.dims(), expected_dims)));
    }
    let target_status = king_test(&image, &theta_prime, caps)?.status;
    let ok = match source_status {
        StabilityStatus::Stable => target_status == StabilityStatus::Stable,
        _ => target_status.is_semistable(),
    };
    if !ok && target_status != StabilityStatus::Undecided {
        return Err(Error::InstanceCheckFailed(format!(
            "source is {} but its image is {} for θ′ = {theta_prime:?}",
            source_status.as_str(),
            target_status.as_str()
        )));
    }
    let sign = if case == PositionCase::Case1 { 1 } else { -1 };
    let factor_dims = |c: &SEquivalenceClass| -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = c.factors.iter().map(|f| to_i64(&f.dims)).collect();
        v.sort();
        v
    };
    let mut mapped_factor_dims: Vec<Vec<i64>> = factor_dims(&jh_filtration_ss(m, theta, caps)?)
        .iter()
        .map(|d| ctx.apply_u(d).into_iter().map(|x| sign * x).collect())
        .collect();
    mapped_factor_dims.sort();
    let image_factor_dims = factor_dims(&jh_filtration_ss(&image, &theta_prime, caps)?);
    if mapped_factor_dims != image_factor_dims {
        return Err(Error::InstanceCheckFailed(format!(
            "factor dimensions {mapped_factor_dims:?} do not match those of the image {image_factor_dims:?}"
        )));
    }
    Ok(TransportReport {
        module: image,
        functor,
        theta_prime,
        source_status,
        target_status,
        expected_dims,
        mapped_factor_dims,
        image_factor_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_quiver::parse_algebra;
    use crate::exactalg::ri;

    fn alg(text: &str) -> Arc<BoundQuiverAlgebra> {
        Arc::new(parse_algebra(text).unwrap())
    }

    fn a2_context() -> TiltingContext {
        let a2 = alg("vertices 1 2; arrows a:1->2;");
        let p1 = Representation::projective(a2.clone(), 0);
        let s1 = Representation::simple(a2, 0);
        TiltingContext::new(vec![p1, s1]).unwrap()
    }

    #[test]
    fn a2_tilting_data() {
        let ctx = a2_context();
        assert_eq!(ctx.u, vec![vec![1, 0], vec![1, -1]]);
        let q = ctx.b.quiver();
        assert_eq!(q.arrows().len(), 1);
        assert_eq!((q.arrow(0).tail, q.arrow(0).head), (1, 0));
        assert!(ctx.b.relations().is_empty());
        assert_eq!(transport_weight(&ctx, &[1, -1], PositionCase::Case1).unwrap(), vec![0, 1]);
        assert_eq!(transport_weight(&ctx, &[1, -1], PositionCase::Case2).unwrap(), vec![0, -1]);
    }

    #[test]
    fn non_tilting_modules() {
        let a2 = alg("vertices 1 2; arrows a:1->2;");
        let p1 = Representation::projective(a2.clone(), 0);
        let check = is_tilting(&p1.oplus(&p1)).unwrap();
        assert!(!check.is_tilting && !check.basic);
        let s1 = Representation::simple(a2.clone(), 0);
        let s2 = Representation::simple(a2, 1);
        let check = is_tilting(&s1.oplus(&s2)).unwrap();
        assert_eq!(check.self_ext1, 1);
        assert!(!check.is_tilting);
    }

    #[test]
    fn projective_generator_gives_same_algebra() {
        for text in ["vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;", "vertices 1 2; arrows a:1->2 b:1->2;"] {
            let a = alg(text);
            let n = a.vertex_count();
            let ps: Vec<Representation> = (0..n).map(|i| Representation::projective(a.clone(), i)).collect();
            let ctx = TiltingContext::new(ps).unwrap();
            assert_eq!(ctx.b.dim(), a.dim());
            assert_eq!(ctx.b.quiver().arrows().len(), a.quiver().arrows().len());
            assert_eq!(ctx.b.relations().len(), a.relations().len());
            let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            assert_eq!(ctx.u, id);
            assert_eq!(transport_weight(&ctx, &vec![1; n], PositionCase::Case1).unwrap(), vec![1; n]);
        }
    }

    #[test]
    fn torsion_classes() {
        let ctx = a2_context();
        let a2 = ctx.algebra().clone();
        let s2 = Representation::simple(a2.clone(), 1);
        assert_eq!(torsion_membership(&ctx, &s2).unwrap().class, TorsionClass::TorsionFree);
        assert_eq!(torsion_membership(&ctx, &ctx.t).unwrap().class, TorsionClass::Torsion);
        let z = Representation::zero(a2, vec![0, 0]);
        let r = torsion_membership(&ctx, &z).unwrap();
        assert_eq!(r.class, TorsionClass::Torsion);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn well_positioned_a2() {
        let ctx = a2_context();
        let r = is_well_positioned(&ctx, &[1, -1], 4, 2, 7).unwrap();
        assert_eq!(r.verdict, WellPositionedVerdict::Case1);
        assert!(r.counterexamples.iter().all(|c| c.case == PositionCase::Case2));
        let r = is_well_positioned(&ctx, &[0, 0], 2, 1, 7).unwrap();
        assert_eq!(r.verdict, WellPositionedVerdict::Fails);
    }

    #[test]
    fn transport_a2() {
        let ctx = a2_context();
        let a2 = ctx.algebra().clone();
        let p1 = Representation::projective(a2.clone(), 0);
        let r = transport_module(&ctx, &p1, &[1, -1], PositionCase::Case1).unwrap();
        assert_eq!(r.module.dims(), &[1, 0]);
        assert_eq!(r.target_status, StabilityStatus::Stable);
        let z = Representation::zero(a2, vec![0, 0]);
        assert!(transport_module(&ctx, &z, &[1, -1], PositionCase::Case1).unwrap().module.is_zero());
    }

    #[test]
    fn ext_functor_dimensions() {
        let ctx = a2_context();
        let a2 = ctx.algebra().clone();
        let s2 = Representation::simple(a2, 1);
        let e = apply_functor(&ctx, &s2, Functor::Ext1).unwrap();
        let u = ctx.apply_u(&[0, 1]);
        assert_eq!(to_i64(e.dims()), u.iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(hom_dim(&ctx.t, &s2), 0);
    }

    #[test]
    fn kronecker_projectives() {
        let k2 = alg("vertices 1 2; arrows a:1->2 b:1->2;");
        let ctx = TiltingContext::new(vec![Representation::projective(k2.clone(), 0), Representation::projective(k2.clone(), 1)])
            .unwrap();
        assert_eq!(ctx.b.quiver().arrows().len(), 2);
        let m = Representation::new(k2, vec![1, 1], vec![RatMatrix::from_i64(&[&[1]]), RatMatrix::from_i64(&[&[2]])]).unwrap();
        let r = transport_module(&ctx, &m, &[1, -1], PositionCase::Case1).unwrap();
        assert_eq!(r.module.dims(), &[1, 1]);
        assert_eq!(r.target_status, StabilityStatus::Stable);
        let hom_p = apply_functor(&ctx, &ctx.summands[1], Functor::Hom).unwrap();
        assert_eq!(hom_p.dims(), &[0, 1]);
        assert_eq!(ri(1), Rat::one());
    }
}
