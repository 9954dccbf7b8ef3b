//! Quivers, relations and the bound quiver algebra A = kQ/I.
//!
//! Paths compose left to right: `a.b` traverses `a` first and requires
//! `head(a) = tail(b)`.

mod admissible;
mod basis;
mod parse;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::Rat;

pub use admissible::{check_admissible, Admissibility, DEFAULT_L_MAX};
pub use basis::{path_basis, path_basis_blockwise, PathBasis};
pub use parse::parse_presentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        for (k, v) in vertices.iter().enumerate() {
            if vertices[..k].contains(v) {
                return Err(Error::Semantic(format!("duplicate vertex '{v}'")));
            }
        }
        for (k, a) in arrows.iter().enumerate() {
            if a.tail >= vertices.len() || a.head >= vertices.len() {
                return Err(Error::Semantic(format!("arrow '{}' has an undeclared endpoint", a.name)));
            }
            if arrows[..k].iter().any(|b| b.name == a.name) {
                return Err(Error::Semantic(format!("duplicate arrow '{}'", a.name)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Builds a quiver from `(name, tail, head)` triples over vertices named `1..=n`.
    pub fn from_edges(n: usize, edges: &[(&str, usize, usize)]) -> Result<Self> {
        let vertices = (1..=n).map(|i| i.to_string()).collect();
        let arrows = edges.iter().map(|&(name, t, h)| Arrow { name: name.to_string(), tail: t, head: h }).collect();
        Self::new(vertices, arrows)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].tail == v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].head == v)
    }

    /// Vertices in an order where every arrow goes forward, or `None` if there is an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.head] += 1;
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows_from(v) {
                let h = self.arrows[a].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.push(h);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Length of the longest path, for acyclic quivers.
    pub fn longest_path(&self) -> Option<usize> {
        let order = self.topological_order()?;
        let mut best = vec![0usize; self.vertices.len()];
        for &v in &order {
            for a in self.arrows_from(v) {
                let h = self.arrows[a].head;
                best[h] = best[h].max(best[v] + 1);
            }
        }
        Some(best.into_iter().max().unwrap_or(0))
    }

    /// Arrow-count matrix: entry `(i, j)` is the number of arrows `i -> j`.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for a in &self.arrows {
            m[a.tail][a.head] += 1;
        }
        m
    }

    /// All paths of exactly `len` arrows.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut current: Vec<Path> = (0..self.vertices.len()).map(Path::trivial).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &current {
                for a in self.arrows_from(p.target) {
                    next.push(p.extended(a, self.arrows[a].head));
                }
            }
            current = next;
        }
        current
    }

    /// All paths starting at `v` with at most `max_len` arrows.
    pub fn paths_from(&self, v: usize, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::trivial(v)];
        let mut frontier = vec![Path::trivial(v)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for a in self.arrows_from(p.target) {
                    next.push(p.extended(a, self.arrows[a].head));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// All paths ending at `v` with at most `max_len` arrows.
    pub fn paths_to(&self, v: usize, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::trivial(v)];
        let mut frontier = vec![Path::trivial(v)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for a in self.arrows_into(p.source) {
                    let mut arrows = vec![a];
                    arrows.extend_from_slice(&p.arrows);
                    next.push(Path { source: self.arrows[a].tail, target: p.target, arrows });
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertices[p.source])
        } else {
            p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
        }
    }

    /// Resolves a path from arrow names, checking composability.
    pub fn path_from_names(&self, names: &[&str]) -> Result<Path> {
        let mut it = names.iter();
        let first = it.next().ok_or_else(|| Error::InvalidInput("empty path".into()))?;
        let a0 = self.arrow_index(first).ok_or_else(|| Error::Semantic(format!("unknown arrow '{first}'")))?;
        let mut p = Path { source: self.arrows[a0].tail, target: self.arrows[a0].head, arrows: vec![a0] };
        for name in it {
            let a = self.arrow_index(name).ok_or_else(|| Error::Semantic(format!("unknown arrow '{name}'")))?;
            if self.arrows[a].tail != p.target {
                return Err(Error::Semantic(format!("path {}.{name} does not compose", self.path_name(&p))));
            }
            p = p.extended(a, self.arrows[a].head);
        }
        Ok(p)
    }
}

/// A path in the quiver; trivial when `arrows` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn extended(&self, a: usize, head: usize) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Path { source: self.source, target: head, arrows }
    }

    /// `self` followed by `other`, or `None` if they do not compose.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: self.source, target: other.target, arrows })
    }
}

/// A nonzero rational combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    terms: Vec<(Rat, Path)>,
}

impl Relation {
    pub fn new(terms: Vec<(Rat, Path)>) -> Result<Self> {
        let mut merged: Vec<(Rat, Path)> = Vec::new();
        for (c, p) in terms {
            if p.len() < 2 {
                return Err(Error::Semantic("relation path has length < 2".into()));
            }
            match merged.iter_mut().find(|(_, q)| *q == p) {
                Some((d, _)) => *d += c,
                None => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        let Some((_, first)) = merged.first() else {
            return Err(Error::Semantic("relation is zero".into()));
        };
        let (s, t) = (first.source, first.target);
        if merged.iter().any(|(_, p)| p.source != s || p.target != t) {
            return Err(Error::Semantic("relation paths are not parallel".into()));
        }
        Ok(Relation { terms: merged })
    }

    pub fn terms(&self) -> &[(Rat, Path)] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.len() == self.terms[0].1.len())
    }

    pub fn min_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0)
    }
}

/// A quiver with relations whose ideal has been checked admissible, plus its path basis.
#[derive(Clone, Debug)]
pub struct BoundQuiverAlgebra {
    quiver: Quiver,
    relations: Vec<Relation>,
    bound: usize,
    basis: PathBasis,
}

/// Admissibility report attached to a successfully built algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraInfo {
    pub nilpotency_bound: usize,
    pub dimension: usize,
}

impl BoundQuiverAlgebra {
    /// Checks admissibility with bound `l_max` and computes the path basis.
    pub fn new(quiver: Quiver, relations: Vec<Relation>, l_max: usize) -> Result<Self> {
        match check_admissible(&quiver, &relations, l_max) {
            Admissibility::Admissible { bound } => {
                let basis = path_basis(&quiver, &relations, bound);
                Ok(BoundQuiverAlgebra { quiver, relations, bound, basis })
            }
            Admissibility::NotAdmissible { reason } => Err(Error::Semantic(format!("ideal is not admissible: {reason}"))),
            Admissibility::Undecided { l_max } => {
                Err(Error::Semantic(format!("admissibility undecided up to path length {l_max}")))
            }
        }
    }

    /// Path algebra of an acyclic quiver.
    pub fn path_algebra(quiver: Quiver) -> Result<Self> {
        Self::new(quiver, Vec::new(), DEFAULT_L_MAX)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn nilpotency_bound(&self) -> usize {
        self.bound
    }

    pub fn basis(&self) -> &PathBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn is_hereditary_presentation(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn info(&self) -> AlgebraInfo {
        AlgebraInfo { nilpotency_bound: self.bound, dimension: self.dim() }
    }

    /// Canonical text form accepted by [`parse_algebra`].
    pub fn to_text(&self) -> String {
        print_presentation(&self.quiver, &self.relations)
    }
}

impl fmt::Display for BoundQuiverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses an algebra file and verifies admissibility with [`DEFAULT_L_MAX`].
pub fn parse_algebra(text: &str) -> Result<BoundQuiverAlgebra> {
    let (q, rels) = parse_presentation(text)?;
    BoundQuiverAlgebra::new(q, rels, DEFAULT_L_MAX)
}

fn fmt_rat_abs(c: &Rat) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// A relation in the algebra-file syntax.
pub fn relation_text(quiver: &Quiver, r: &Relation) -> String {
    let mut out = String::new();
    for (k, (c, p)) in r.terms().iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !c.abs().is_one() {
            out.push_str(&fmt_rat_abs(c));
            out.push('*');
        }
        out.push_str(&quiver.path_name(p));
    }
    out
}

/// Canonical text: one section per line, single spaces.
pub fn print_presentation(quiver: &Quiver, relations: &[Relation]) -> String {
    let mut s = format!("vertices {};\n", quiver.vertices().join(" "));
    let arrows: Vec<String> = quiver
        .arrows()
        .iter()
        .map(|a| format!("{}:{}->{}", a.name, quiver.vertices()[a.tail], quiver.vertices()[a.head]))
        .collect();
    if arrows.is_empty() {
        s.push_str("arrows;\n");
    } else {
        s.push_str(&format!("arrows {};\n", arrows.join(" ")));
    }
    if !relations.is_empty() {
        let rels: Vec<String> = relations.iter().map(|r| relation_text(quiver, r)).collect();
        s.push_str(&format!("relations {};\n", rels.join(", ")));
    }
    s
}
