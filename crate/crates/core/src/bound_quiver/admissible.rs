use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{Path, Quiver, Relation};
use crate::exactalg::{Rat, RowSpace};

/// Default search bound for the nilpotency degree.
pub const DEFAULT_L_MAX: usize = 16;

const MAX_PATHS_PER_DEGREE: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Admissibility {
    /// Least `L >= 2` with every path of length `L` in the ideal.
    Admissible {
        bound: usize,
    },
    NotAdmissible {
        reason: String,
    },
    Undecided {
        l_max: usize,
    },
}

/// Sparse vectors `u.r.v` spanning the part of the ideal supported on `index`;
/// products with some term outside `index` are dropped term-wise when `truncate` is set.
pub(super) fn ideal_generators(
    quiver: &Quiver,
    relations: &[Relation],
    max_len: usize,
    index: &HashMap<Path, usize>,
) -> Vec<Vec<(usize, Rat)>> {
    let mut gens = Vec::new();
    for r in relations {
        let m = r.min_len();
        if m > max_len {
            continue;
        }
        let slack = max_len - m;
        for u in quiver.paths_to(r.source(), slack) {
            for v in quiver.paths_from(r.target(), slack - u.len()) {
                let mut vec: Vec<(usize, Rat)> = Vec::new();
                for (c, p) in r.terms() {
                    let w = u.concat(p).and_then(|x| x.concat(&v)).expect("composable by construction");
                    if let Some(&k) = index.get(&w) {
                        vec.push((k, c.clone()));
                    }
                }
                if !vec.is_empty() {
                    gens.push(vec);
                }
            }
        }
    }
    gens
}

pub(super) fn dense(v: &[(usize, Rat)], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::default(); n];
    for (k, c) in v {
        out[*k] += c;
    }
    out
}

/// Finds the least `L <= l_max` with `R^L ⊆ I`.
///
/// Acyclic quivers are decided exactly. For oriented cycles, monomial relations are
/// decided exactly and homogeneous relations degree by degree; other inputs are undecided.
pub fn check_admissible(quiver: &Quiver, relations: &[Relation], l_max: usize) -> Admissibility {
    let l_max = l_max.max(2);
    if let Some(longest) = quiver.longest_path() {
        return acyclic_bound(quiver, relations, longest, l_max);
    }
    if relations.iter().all(Relation::is_monomial) {
        if monomial_infinite(quiver, relations) {
            return Admissibility::NotAdmissible { reason: "arbitrarily long paths avoid every relation".into() };
        }
        return monomial_bound(quiver, relations, l_max);
    }
    if relations.iter().all(Relation::is_homogeneous) {
        return homogeneous_bound(quiver, relations, l_max);
    }
    Admissibility::Undecided { l_max }
}

fn acyclic_bound(quiver: &Quiver, relations: &[Relation], longest: usize, l_max: usize) -> Admissibility {
    let all: Vec<Path> = (0..=longest).flat_map(|n| quiver.paths_of_length(n)).collect();
    let index: HashMap<Path, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut span = RowSpace::new(all.len());
    for g in ideal_generators(quiver, relations, longest, &index) {
        span.insert(&dense(&g, all.len()));
    }
    for l in 2..=(longest + 1).max(2) {
        let inside = all.iter().enumerate().filter(|(_, p)| p.len() == l).all(|(k, _)| {
            let mut e = vec![Rat::default(); all.len()];
            e[k] = Rat::from_integer(1.into());
            span.contains(&e)
        });
        if inside {
            return if l <= l_max { Admissibility::Admissible { bound: l } } else { Admissibility::Undecided { l_max } };
        }
    }
    unreachable!("no paths of length longest+1")
}

fn contains_subpath(p: &[usize], w: &[usize]) -> bool {
    w.len() <= p.len() && p.windows(w.len()).any(|x| x == w)
}

// States are relation-avoiding paths of length K-1; an infinite avoiding path exists
// iff the transition graph has a cycle.
fn monomial_infinite(quiver: &Quiver, relations: &[Relation]) -> bool {
    let words: Vec<&[usize]> = relations.iter().map(|r| r.terms()[0].1.arrows.as_slice()).collect();
    let k = words.iter().map(|w| w.len()).max().unwrap_or(1).max(1);
    let states: Vec<Path> =
        quiver.paths_of_length(k - 1).into_iter().filter(|p| !words.iter().any(|w| contains_subpath(&p.arrows, w))).collect();
    let index: HashMap<&Path, usize> = states.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let succ: Vec<Vec<usize>> = states
        .iter()
        .map(|s| {
            quiver
                .arrows_from(s.target)
                .filter_map(|a| {
                    let w = s.extended(a, quiver.arrow(a).head);
                    if words.iter().any(|x| w.arrows.ends_with(x)) {
                        return None;
                    }
                    let next = if k == 1 {
                        Path::trivial(w.target)
                    } else {
                        let src = quiver.arrow(w.arrows[1]).tail;
                        Path { source: src, target: w.target, arrows: w.arrows[1..].to_vec() }
                    };
                    index.get(&next).copied()
                })
                .collect()
        })
        .collect();
    // iterative three-colour DFS
    let mut colour = vec![0u8; states.len()];
    for root in 0..states.len() {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some((v, i)) = stack.pop() {
            if i < succ[v].len() {
                stack.push((v, i + 1));
                let w = succ[v][i];
                match colour[w] {
                    0 => {
                        colour[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                colour[v] = 2;
            }
        }
    }
    false
}

fn monomial_bound(quiver: &Quiver, relations: &[Relation], l_max: usize) -> Admissibility {
    let words: Vec<&[usize]> = relations.iter().map(|r| r.terms()[0].1.arrows.as_slice()).collect();
    let mut frontier: Vec<Path> = (0..quiver.vertex_count()).map(Path::trivial).collect();
    for n in 1..=l_max {
        let mut next = Vec::new();
        for p in &frontier {
            for a in quiver.arrows_from(p.target) {
                let w = p.extended(a, quiver.arrow(a).head);
                if !words.iter().any(|x| w.arrows.ends_with(x)) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() && n >= 2 {
            return Admissibility::Admissible { bound: n };
        }
        if next.len() > MAX_PATHS_PER_DEGREE {
            break;
        }
        frontier = next;
    }
    Admissibility::Undecided { l_max }
}

fn homogeneous_bound(quiver: &Quiver, relations: &[Relation], l_max: usize) -> Admissibility {
    for n in 2..=l_max {
        let paths = quiver.paths_of_length(n);
        if paths.len() > MAX_PATHS_PER_DEGREE {
            break;
        }
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut span = RowSpace::new(paths.len());
        let mut seen = HashSet::new();
        for r in relations.iter().filter(|r| r.min_len() <= n) {
            let slack = n - r.min_len();
            for u in quiver.paths_to(r.source(), slack) {
                for v in quiver.paths_from(r.target(), slack - u.len()) {
                    if u.len() + v.len() != slack || !seen.insert((u.clone(), v.clone(), r.terms()[0].1.clone())) {
                        continue;
                    }
                    let mut vec = vec![Rat::default(); paths.len()];
                    for (c, p) in r.terms() {
                        let w = u.concat(p).and_then(|x| x.concat(&v)).expect("composable");
                        vec[index[&w]] += c;
                    }
                    span.insert(&vec);
                }
            }
        }
        if span.rank() == paths.len() {
            return Admissibility::Admissible { bound: n };
        }
    }
    Admissibility::Undecided { l_max }
}
