//! King stability of explicit modules, Jordan–Hölder data of semistables, θ-stable
//! decompositions and moduli dimensions.

mod grassmannian;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use grassmannian::{flag_exists, Existence, FlagSearch};

use crate::bound_quiver::BoundQuiverAlgebra;
use crate::error::{Error, Result};
use crate::exactalg::{Coordinates, GroebnerCaps, Rat, RatMatrix};
use crate::forms::eval_weight;
use crate::rep::Representation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    Stable,
    StrictlySemistable,
    Unstable,
    Undecided,
}

impl StabilityStatus {
    pub fn is_semistable(self) -> bool {
        matches!(self, StabilityStatus::Stable | StabilityStatus::StrictlySemistable)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StabilityStatus::Stable => "stable",
            StabilityStatus::StrictlySemistable => "strictly_semistable",
            StabilityStatus::Unstable => "unstable",
            StabilityStatus::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witness: Option<Vec<usize>>,
    pub notes: Vec<String>,
}

/// Result of a submodule-existence query.
#[derive(Clone, Debug)]
pub struct SubmoduleSearch {
    pub existence: Existence,
    /// Bases of a witnessing submodule, one matrix per vertex.
    pub witness: Option<Vec<RatMatrix>>,
}

fn check_dims(m: &Representation, e: &[usize]) -> Result<()> {
    if e.len() != m.dims().len() || e.iter().zip(m.dims()).any(|(a, b)| a > b) {
        return Err(Error::DimensionMismatch(format!("{e:?} is not bounded by {:?}", m.dims())));
    }
    Ok(())
}

/// Whether `M` has a submodule of dimension vector `e` (over the algebraic closure).
pub fn sub_dimvec_exists(m: &Representation, e: &[usize], caps: GroebnerCaps) -> Result<SubmoduleSearch> {
    check_dims(m, e)?;
    let fs = flag_exists(m, &[e.to_vec()], false, caps)?;
    Ok(SubmoduleSearch { existence: fs.existence, witness: fs.witness.and_then(|mut w| w.pop()) })
}

/// All `e` with `lo ≤ e ≤ hi` componentwise, ordered by total dimension then lexicographically.
pub fn dimvecs_between(lo: &[usize], hi: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for (a, b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (*a..=*b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.sort_by_key(|e| (e.iter().sum::<usize>(), e.clone()));
    out
}

/// King's criterion: semistable iff `θ(dim M) = 0` and `θ(e) ≤ 0` for every submodule
/// dimension vector `e`; stable iff moreover the inequality is strict for `0 ≠ e ≠ dim M`.
pub fn king_test(m: &Representation, theta: &[i64], caps: GroebnerCaps) -> Result<StabilityVerdict> {
    let d = m.dims().to_vec();
    if theta.len() != d.len() {
        return Err(Error::DimensionMismatch(format!("weight has {} entries, expected {}", theta.len(), d.len())));
    }
    let mut notes = Vec::new();
    if eval_weight(theta, &d) != 0 {
        notes.push("θ(dim M) ≠ 0".into());
        return Ok(StabilityVerdict { status: StabilityStatus::Unstable, witness: Some(d), notes });
    }
    if m.is_zero() {
        notes.push("zero module".into());
        return Ok(StabilityVerdict { status: StabilityStatus::StrictlySemistable, witness: None, notes });
    }
    let zero = vec![0; d.len()];
    let proper: Vec<Vec<usize>> = dimvecs_between(&zero, &d).into_iter().filter(|e| *e != zero && *e != d).collect();
    let mut undecided = false;
    for e in proper.iter().filter(|e| eval_weight(theta, e) > 0) {
        match sub_dimvec_exists(m, e, caps)?.existence {
            Existence::Yes => return Ok(StabilityVerdict { status: StabilityStatus::Unstable, witness: Some(e.clone()), notes }),
            Existence::Undecided => {
                undecided = true;
                notes.push(format!("submodule existence undecided for {e:?}"));
            }
            Existence::No => {}
        }
    }
    if undecided {
        return Ok(StabilityVerdict { status: StabilityStatus::Undecided, witness: None, notes });
    }
    for e in proper.iter().filter(|e| eval_weight(theta, e) == 0) {
        match sub_dimvec_exists(m, e, caps)?.existence {
            Existence::Yes => {
                return Ok(StabilityVerdict { status: StabilityStatus::StrictlySemistable, witness: Some(e.clone()), notes })
            }
            Existence::Undecided => {
                undecided = true;
                notes.push(format!("submodule existence undecided for {e:?}"));
            }
            Existence::No => {}
        }
    }
    let status = if undecided { StabilityStatus::Undecided } else { StabilityStatus::Stable };
    Ok(StabilityVerdict { status, witness: None, notes })
}

/// One Jordan–Hölder factor: its dimension vector and, when a rational flag was found,
/// the factor module itself.
#[derive(Clone, Debug)]
pub struct JhFactor {
    pub dims: Vec<usize>,
    pub module: Option<Representation>,
}

/// S-equivalence class of a semistable module, as its Jordan–Hölder factors.
#[derive(Clone, Debug)]
pub struct SEquivalenceClass {
    pub factors: Vec<JhFactor>,
    /// False when some submodule query was undecided, so factors may not be stable.
    pub exact: bool,
    pub notes: Vec<String>,
}

impl SEquivalenceClass {
    /// Factor dimension vectors with multiplicities.
    pub fn multiset(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for f in &self.factors {
            *out.entry(f.dims.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn witnesses_available(&self) -> bool {
        self.factors.iter().all(|f| f.module.is_some())
    }
}

fn factor_modules(m: &Representation, flag: &[Vec<RatMatrix>]) -> Result<Vec<Representation>> {
    let n = m.dims().len();
    let mut out = Vec::new();
    for (k, level) in flag.iter().enumerate() {
        let sub = m.restrict(level)?;
        if k == 0 {
            out.push(sub);
            continue;
        }
        let inner: Vec<RatMatrix> = (0..n)
            .map(|v| {
                let coords = Coordinates::new(level[v].clone());
                let cols: Vec<Vec<Rat>> =
                    flag[k - 1][v].columns().iter().map(|c| coords.coords(c).expect("flag is nested")).collect();
                RatMatrix::from_columns(level[v].cols(), &cols)
            })
            .collect();
        out.push(sub.quotient(&inner)?.0);
    }
    Ok(out)
}

/// Jordan–Hölder factors in the category of θ-semistable modules.
///
/// Builds a flag `0 ⊂ V_1 ⊂ … ⊂ M` greedily, each `dim V_k` the smallest θ-zero dimension
/// vector above `dim V_{k-1}` for which such a flag exists; each quotient is then θ-stable.
/// Factor modules are produced when a rational flag is found.
pub fn jh_filtration_ss(m: &Representation, theta: &[i64], caps: GroebnerCaps) -> Result<SEquivalenceClass> {
    let verdict = king_test(m, theta, caps)?;
    let d = m.dims().to_vec();
    let mut notes = Vec::new();
    match verdict.status {
        StabilityStatus::Unstable => return Err(Error::NotApplicable("module is not θ-semistable".into())),
        StabilityStatus::Undecided => {
            notes.push("stability undecided".into());
            return Ok(SEquivalenceClass { factors: vec![JhFactor { dims: d, module: None }], exact: false, notes });
        }
        StabilityStatus::Stable => {
            return Ok(SEquivalenceClass { factors: vec![JhFactor { dims: d, module: Some(m.clone()) }], exact: true, notes })
        }
        StabilityStatus::StrictlySemistable if m.is_zero() => {
            return Ok(SEquivalenceClass { factors: Vec::new(), exact: true, notes });
        }
        StabilityStatus::StrictlySemistable => {}
    }
    let mut chain: Vec<Vec<usize>> = Vec::new();
    let mut exact = true;
    loop {
        let lo = chain.last().cloned().unwrap_or_else(|| vec![0; d.len()]);
        let mut next = None;
        for e in dimvecs_between(&lo, &d) {
            if e == lo || e == d || eval_weight(theta, &e) != 0 {
                continue;
            }
            let mut trial = chain.clone();
            trial.push(e.clone());
            match flag_exists(m, &trial, false, caps)?.existence {
                Existence::Yes => {
                    next = Some(e);
                    break;
                }
                Existence::Undecided => {
                    exact = false;
                    notes.push(format!("flag existence undecided at {e:?}"));
                }
                Existence::No => {}
            }
        }
        match next {
            Some(e) => chain.push(e),
            None => break,
        }
    }
    let mut bounds = chain.clone();
    bounds.push(d.clone());
    let mut dims = Vec::new();
    let mut prev = vec![0; d.len()];
    for b in &bounds {
        dims.push(b.iter().zip(&prev).map(|(x, y)| x - y).collect::<Vec<usize>>());
        prev = b.clone();
    }
    let witness = flag_exists(m, &chain, true, caps)?.witness;
    let modules = match witness {
        Some(mut flag) => {
            flag.push(m.dims().iter().map(|&k| RatMatrix::identity(k)).collect());
            Some(factor_modules(m, &flag)?)
        }
        None => {
            notes.push("witness unavailable: no rational flag found".into());
            None
        }
    };
    let factors = dims
        .into_iter()
        .enumerate()
        .map(|(k, dims)| JhFactor { dims, module: modules.as_ref().map(|ms| ms[k].clone()) })
        .collect();
    Ok(SEquivalenceClass { factors, exact, notes })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaStableDecomposition {
    /// `(d_i, m_i)` pairs.
    pub factors: Vec<(Vec<usize>, usize)>,
    /// Per sample outcome (`None` if the sample was skipped).
    pub outcomes: Vec<Option<Vec<(Vec<usize>, usize)>>>,
    pub disagreement: bool,
    pub exact: bool,
    pub caveats: Vec<String>,
}

/// θ-stable decomposition of the component containing `samples`, by majority vote over the
/// Jordan–Hölder dimension data of each sample.
pub fn theta_stable_decomposition(
    samples: &[Representation],
    theta: &[i64],
    caps: GroebnerCaps,
) -> Result<ThetaStableDecomposition> {
    let Some(first) = samples.first() else {
        return Err(Error::InvalidInput("no samples".into()));
    };
    if samples.iter().any(|s| s.dims() != first.dims()) {
        return Err(Error::DimensionMismatch("samples have different dimension vectors".into()));
    }
    let mut caveats = vec!["θ-well-behavedness of the component is assumed, not checked".to_string()];
    let mut outcomes = Vec::new();
    let mut exact = true;
    let mut counts: Vec<(Vec<(Vec<usize>, usize)>, usize)> = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let cls = match jh_filtration_ss(s, theta, caps) {
            Ok(c) => c,
            Err(Error::NotApplicable(_)) => {
                caveats.push(format!("sample {i} is not θ-semistable; skipped"));
                outcomes.push(None);
                continue;
            }
            Err(e) => return Err(e),
        };
        if !cls.exact {
            exact = false;
            caveats.push(format!("sample {i}: {}", cls.notes.join("; ")));
        }
        let ms: Vec<(Vec<usize>, usize)> = cls.multiset().into_iter().collect();
        match counts.iter_mut().find(|(k, _)| *k == ms) {
            Some((_, c)) => *c += 1,
            None => counts.push((ms.clone(), 1)),
        }
        outcomes.push(Some(ms));
    }
    if counts.is_empty() {
        return Err(Error::NotApplicable("no θ-semistable sample".into()));
    }
    let disagreement = counts.len() > 1;
    if disagreement {
        caveats.push("samples disagree: component mixture or non-generic samples".into());
    }
    let best = counts.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).expect("nonempty").0.clone();
    Ok(ThetaStableDecomposition { factors: best, outcomes, disagreement, exact, caveats })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliDimension {
    /// `Σ_a d(ta) d(ha)`.
    pub rep_space_dim: usize,
    /// Largest `dim mod − rank J` over stable samples.
    pub component_dim: usize,
    pub jacobian_rank: usize,
    pub gl_dim: usize,
    pub moduli_dim: i64,
    pub stable_samples: usize,
    pub exact: bool,
    pub caveats: Vec<String>,
}

/// Jacobian of the entries of `M(r)`, `r` a relation, with respect to all arrow entries.
pub fn relation_jacobian(m: &Representation) -> RatMatrix {
    let alg = m.algebra();
    let q = alg.quiver();
    let d = m.dims();
    let offsets: Vec<usize> = q
        .arrows()
        .iter()
        .scan(0, |acc, a| {
            let o = *acc;
            *acc += d[a.head] * d[a.tail];
            Some(o)
        })
        .collect();
    let nvars: usize = q.arrows().iter().map(|a| d[a.head] * d[a.tail]).sum();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for rel in alg.relations() {
        let (s, t) = (rel.source(), rel.target());
        // d M(r) / d x, one block of d(t) × d(s) entries per variable
        let mut blocks = vec![RatMatrix::zeros(d[t], d[s]); nvars];
        for (c, p) in rel.terms() {
            let arrows = &p.arrows;
            for (j, &a) in arrows.iter().enumerate() {
                let arrow = q.arrow(a);
                // before: path of arrows[..j]; after: arrows[j+1..]
                let before = arrows[..j].iter().fold(RatMatrix::identity(d[s]), |acc, &b| m.map(b).mul(&acc));
                let after = arrows[j + 1..].iter().fold(RatMatrix::identity(d[arrow.head]), |acc, &b| m.map(b).mul(&acc));
                for r in 0..d[arrow.head] {
                    for col in 0..d[arrow.tail] {
                        let var = offsets[a] + r * d[arrow.tail] + col;
                        // after · E_{r,col} · before
                        let contrib = RatMatrix::from_fn(d[t], d[s], |i, k| &after[(i, r)] * &before[(col, k)] * c);
                        blocks[var] = blocks[var].add(&contrib);
                    }
                }
            }
        }
        for i in 0..d[t] {
            for k in 0..d[s] {
                rows.push(blocks.iter().map(|b| b[(i, k)].clone()).collect());
            }
        }
    }
    if rows.is_empty() {
        return RatMatrix::zeros(0, nvars);
    }
    RatMatrix::from_rows(nvars, rows).expect("uniform rows")
}

/// `dim C − dim GL(d) + 1` for the component `C` through the θ-stable samples.
pub fn moduli_dimension(
    alg: &Arc<BoundQuiverAlgebra>,
    d: &[usize],
    theta: &[i64],
    samples: &[Representation],
    caps: GroebnerCaps,
) -> Result<ModuliDimension> {
    let q = alg.quiver();
    let rep_space_dim: usize = q.arrows().iter().map(|a| d[a.tail] * d[a.head]).sum();
    let gl_dim: usize = d.iter().map(|x| x * x).sum();
    let mut caveats = Vec::new();
    let mut best: Option<usize> = None;
    let mut stable_samples = 0;
    for s in samples {
        if s.dims() != d {
            return Err(Error::DimensionMismatch("sample dimension vector differs from d".into()));
        }
        if king_test(s, theta, caps)?.status != StabilityStatus::Stable {
            continue;
        }
        stable_samples += 1;
        let rank = relation_jacobian(s).rank();
        best = Some(best.map_or(rank, |b: usize| b.min(rank)));
    }
    let Some(jacobian_rank) = best else {
        return Err(Error::NotApplicable("no θ-stable sample".into()));
    };
    let exact = alg.relations().is_empty();
    if !exact {
        caveats.push("component dimension estimated by the Jacobian rank of the relations at samples".into());
    }
    let component_dim = rep_space_dim - jacobian_rank;
    let moduli_dim = component_dim as i64 - gl_dim as i64 + 1;
    Ok(ModuliDimension { rep_space_dim, component_dim, jacobian_rank, gl_dim, moduli_dim, stable_samples, exact, caveats })
}
