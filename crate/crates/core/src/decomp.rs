//! Generic decomposition of a dimension vector by sampling.
//!
//! Each sample is split with Krull–Schmidt over `Q`; a summand whose endomorphism ring has
//! residue field of degree `g` contributes `g` conjugate parts over the algebraic closure,
//! each of dimension `dim / g`. The most frequent multiset across samples is reported.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::bound_quiver::BoundQuiverAlgebra;
use crate::error::{Error, Result};
use crate::forms::{tits_form, QClass};
use crate::rep::{krull_schmidt, Representation};
use crate::sampling::{random_representation, rng_from_seed, scheme_for, SamplingScheme};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionPart {
    pub dims: Vec<usize>,
    pub multiplicity: usize,
    pub q: i64,
    pub q_class: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericDecomposition {
    pub d: Vec<usize>,
    pub parts: Vec<DecompositionPart>,
    /// Samples producing the reported multiset.
    pub agreement: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    /// Set when samples disagree, which may indicate several components.
    pub disagreement: bool,
    pub caveats: Vec<String>,
}

impl GenericDecomposition {
    pub fn as_pairs(&self) -> Vec<(Vec<usize>, usize)> {
        self.parts.iter().map(|p| (p.dims.clone(), p.multiplicity)).collect()
    }

    pub fn is_single_root(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].multiplicity == 1
    }
}

type Multiset = BTreeMap<Vec<usize>, usize>;

fn geometric_multiset(m: &Representation) -> Result<Multiset> {
    let mut out = Multiset::new();
    for s in krull_schmidt(m)? {
        let g = s.geometric_parts().max(1);
        let dims: Vec<usize> = s.module.dims().iter().map(|x| x / g).collect();
        *out.entry(dims).or_insert(0) += s.multiplicity * g;
    }
    Ok(out)
}

/// Decomposition from caller-supplied modules of dimension `d`.
pub fn generic_decomposition_from_samples(
    alg: &Arc<BoundQuiverAlgebra>,
    d: &[usize],
    samples: &[Representation],
) -> Result<GenericDecomposition> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no sample modules".into()));
    }
    let mut counts: BTreeMap<Multiset, usize> = BTreeMap::new();
    for m in samples {
        if m.dims() != d {
            return Err(Error::DimensionMismatch(format!("sample has dimension {:?}, expected {d:?}", m.dims())));
        }
        let v = m.validate();
        if !v.valid {
            return Err(Error::InvalidInput("sample module violates the relations".into()));
        }
        *counts.entry(geometric_multiset(m)?).or_insert(0) += 1;
    }
    // most frequent, ties broken by the smallest multiset
    let (best, agreement) =
        counts.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0))).map(|(k, v)| (k.clone(), *v)).expect("nonempty");
    let mut parts = Vec::new();
    for (dims, multiplicity) in best {
        let q = tits_form(alg, &dims)?.value;
        parts.push(DecompositionPart { dims, multiplicity, q, q_class: QClass::of(q).as_str() });
    }
    let disagreement = counts.len() > 1;
    let mut caveats = Vec::new();
    if disagreement {
        caveats.push(format!("{} distinct decompositions among {} samples", counts.len(), samples.len()));
    }
    Ok(GenericDecomposition { d: d.to_vec(), parts, agreement, samples: samples.len(), seed: None, disagreement, caveats })
}

/// Samples `samples` modules of dimension `d` and decomposes each.
pub fn generic_decomposition_sampled(
    alg: &Arc<BoundQuiverAlgebra>,
    d: &[usize],
    samples: usize,
    seed: u64,
) -> Result<GenericDecomposition> {
    if d.len() != alg.vertex_count() {
        return Err(Error::DimensionMismatch(format!("dimension vector has {} entries", d.len())));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let scheme = scheme_for(alg)?;
    let mut rng = rng_from_seed(seed);
    let modules = (0..samples).map(|_| random_representation(alg, d, &mut rng)).collect::<Result<Vec<_>>>()?;
    let mut out = generic_decomposition_from_samples(alg, d, &modules)?;
    out.seed = Some(seed);
    if scheme == SamplingScheme::ZeroArrows {
        out.caveats.push("samples obtained by zeroing arrows of monomial relations; other components may be missed".into());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootEvidence {
    Yes,
    NoEvidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    pub verdict: RootEvidence,
    pub decomposition: GenericDecomposition,
}

/// `Yes` when the sampled generic decomposition of `d` is `d` itself.
pub fn is_generic_root_sampled(alg: &Arc<BoundQuiverAlgebra>, d: &[usize], samples: usize, seed: u64) -> Result<RootReport> {
    let decomposition = generic_decomposition_sampled(alg, d, samples, seed)?;
    let verdict = if decomposition.is_single_root() { RootEvidence::Yes } else { RootEvidence::NoEvidence };
    Ok(RootReport { verdict, decomposition })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantFieldPrediction {
    pub transcendence_degree: usize,
    pub field: String,
    pub notes: Vec<String>,
}

/// Rational invariants of the component for an algebra asserted to be tame quasi-tilted:
/// a purely transcendental field in `N` variables, `N` the total multiplicity of isotropic parts.
pub fn predict_rational_invariants(decomposition: &GenericDecomposition) -> Result<InvariantFieldPrediction> {
    let mut n = 0;
    for p in &decomposition.parts {
        match QClass::of(p.q) {
            QClass::Real => {}
            QClass::Isotropic => n += p.multiplicity,
            other => {
                return Err(Error::NotApplicable(format!(
                    "part {:?} has q-class {}; expected real or isotropic parts",
                    p.dims,
                    other.as_str()
                )))
            }
        }
    }
    let field =
        if n == 0 { "k".to_string() } else { format!("k({})", (1..=n).map(|i| format!("x_{i}")).collect::<Vec<_>>().join(",")) };
    Ok(InvariantFieldPrediction { transcendence_degree: n, field, notes: vec!["tameness is asserted by the caller".into()] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_quiver::parse_algebra;
    use crate::semi_invariants::classify_moduli_tame;

    fn alg(t: &str) -> Arc<BoundQuiverAlgebra> {
        Arc::new(parse_algebra(t).unwrap())
    }

    #[test]
    fn hereditary_examples() {
        let a2 = alg("vertices 1 2; arrows a:1->2;");
        let g = generic_decomposition_sampled(&a2, &[2, 2], 5, 1).unwrap();
        assert_eq!(g.as_pairs(), vec![(vec![1, 1], 2)]);
        assert_eq!(g.agreement, 5);
        let k2 = alg("vertices 1 2; arrows a:1->2 b:1->2;");
        let g = generic_decomposition_sampled(&k2, &[2, 1], 5, 1).unwrap();
        assert_eq!(g.as_pairs(), vec![(vec![2, 1], 1)]);
        assert_eq!(g.parts[0].q, 1);
        let g = generic_decomposition_sampled(&k2, &[2, 2], 5, 1).unwrap();
        assert_eq!(g.as_pairs(), vec![(vec![1, 1], 2)]);
        assert_eq!(g.agreement, 5);
        for (i, e) in [[1, 0], [0, 1]].iter().enumerate() {
            let g = generic_decomposition_sampled(&k2, e, 3, i as u64).unwrap();
            assert!(g.is_single_root());
        }
    }

    #[test]
    fn roots_and_predictions() {
        let k2 = alg("vertices 1 2; arrows a:1->2 b:1->2;");
        assert_eq!(is_generic_root_sampled(&k2, &[1, 1], 5, 3).unwrap().verdict, RootEvidence::Yes);
        let a2 = alg("vertices 1 2; arrows a:1->2;");
        assert_eq!(is_generic_root_sampled(&a2, &[2, 2], 5, 3).unwrap().verdict, RootEvidence::NoEvidence);
        let g = generic_decomposition_sampled(&k2, &[2, 2], 5, 9).unwrap();
        let p = predict_rational_invariants(&g).unwrap();
        assert_eq!((p.transcendence_degree, p.field.as_str()), (2, "k(x_1,x_2)"));
        let tame = classify_moduli_tame(&k2, &[2, 2], &g.as_pairs()).unwrap();
        assert_eq!(tame.transcendence_degree, p.transcendence_degree);
        let g = generic_decomposition_sampled(&k2, &[2, 1], 5, 9).unwrap();
        assert_eq!(predict_rational_invariants(&g).unwrap().field, "k");
        let g = generic_decomposition_sampled(&k2, &[1, 1], 5, 9).unwrap();
        assert_eq!(predict_rational_invariants(&g).unwrap().field, "k(x_1)");
    }

    #[test]
    fn deterministic_under_seed() {
        let k3 = alg("vertices 1 2; arrows a:1->2 b:1->2 c:1->2;");
        let x = generic_decomposition_sampled(&k3, &[2, 3], 3, 42).unwrap();
        let y = generic_decomposition_sampled(&k3, &[2, 3], 3, 42).unwrap();
        assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
    }

    #[test]
    fn monomial_relations_are_sampled() {
        let a3 = alg("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;");
        let g = generic_decomposition_sampled(&a3, &[1, 1, 1], 4, 5).unwrap();
        let total: Vec<usize> = (0..3).map(|v| g.parts.iter().map(|p| p.multiplicity * p.dims[v]).sum()).collect();
        assert_eq!(total, vec![1, 1, 1]);
        assert!(!g.caveats.is_empty());
    }
}
