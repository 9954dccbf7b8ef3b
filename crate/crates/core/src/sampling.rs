//! Seeded random rationals and representations.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bound_quiver::BoundQuiverAlgebra;
use crate::error::{Error, Result};
use crate::exactalg::{rat, Rat, RatMatrix};
use crate::rep::Representation;

/// Default number of independent samples for generic statements.
pub const DEFAULT_SAMPLES: usize = 5;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `[-height, height]` over a denominator in `[1, den]`.
pub fn random_rat<R: Rng>(rng: &mut R, height: i64, den: i64) -> Rat {
    let n = rng.gen_range(-height..=height);
    let d = rng.gen_range(1..=den);
    rat(n, d)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |_, _| random_rat(rng, 9, 9))
}

/// Random invertible matrix (rejection sampling).
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if n == 0 || !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Random matrix of rank at most `r`.
pub fn random_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, r: usize) -> RatMatrix {
    random_matrix(rng, rows, r).mul(&random_matrix(rng, r, cols))
}

/// How sample modules are produced for a given algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingScheme {
    /// No relations: independent uniform matrices.
    Hereditary,
    /// Monomial relations: uniform matrices, then arrows are zeroed until relations hold.
    ZeroArrows,
}

/// Chooses a sampling scheme, or fails for relations that are not monomial.
pub fn scheme_for(alg: &BoundQuiverAlgebra) -> Result<SamplingScheme> {
    if alg.relations().is_empty() {
        Ok(SamplingScheme::Hereditary)
    } else if alg.relations().iter().all(|r| r.is_monomial()) {
        Ok(SamplingScheme::ZeroArrows)
    } else {
        Err(Error::CannotSample("relations are not monomial; supply sample modules explicitly".into()))
    }
}

/// Random module of dimension vector `d`.
///
/// For monomial relations, each violated relation has one of its arrows set to zero;
/// the arrow is chosen at random, so repeated calls explore the different components.
pub fn random_representation<R: Rng>(alg: &Arc<BoundQuiverAlgebra>, d: &[usize], rng: &mut R) -> Result<Representation> {
    let scheme = scheme_for(alg)?;
    let q = alg.quiver();
    let mut maps: Vec<RatMatrix> = q.arrows().iter().map(|a| random_matrix(rng, d[a.head], d[a.tail])).collect();
    if scheme == SamplingScheme::ZeroArrows {
        loop {
            let m = Representation::new(alg.clone(), d.to_vec(), maps.clone())?;
            let bad = alg.relations().iter().find(|r| {
                let (c, p) = &r.terms()[0];
                !m.path_matrix(p).scale(c).is_zero()
            });
            let Some(r) = bad else { break };
            let arrows = &r.terms()[0].1.arrows;
            let a = arrows[rng.gen_range(0..arrows.len())];
            maps[a] = RatMatrix::zeros(maps[a].rows(), maps[a].cols());
        }
    }
    Representation::new(alg.clone(), d.to_vec(), maps)
}

/// Random module whose arrow maps have prescribed ranks (used to reach non-generic strata).
pub fn random_with_ranks<R: Rng>(
    alg: &Arc<BoundQuiverAlgebra>,
    d: &[usize],
    ranks: &[usize],
    rng: &mut R,
) -> Result<Representation> {
    let q = alg.quiver();
    let maps = q
        .arrows()
        .iter()
        .zip(ranks)
        .map(|(a, &r)| random_rank(rng, d[a.head], d[a.tail], r.min(d[a.head]).min(d[a.tail])))
        .collect();
    let m = Representation::new(alg.clone(), d.to_vec(), maps)?;
    Ok(m)
}
