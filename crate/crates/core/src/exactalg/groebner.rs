//! Buchberger completion under grevlex with Gebauer–Möller pair pruning.
//!
//! Everything here is sized for small systems (a handful of variables, low
//! degree). A hard cap on basis size and degree turns runaway computations
//! into an explicit `Undecided` outcome.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::{Monomial, Polynomial};
use super::univariate::UniPoly;
use super::{Rat, RowSpace};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroebnerCaps {
    pub max_basis: usize,
    pub max_degree: u32,
}

impl Default for GroebnerCaps {
    fn default() -> Self {
        GroebnerCaps { max_basis: 5000, max_degree: 30 }
    }
}

/// Three-valued answer to "is the variety empty over the algebraic closure".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Consistency {
    Inconsistent,
    Consistent,
    Undecided,
}

#[derive(Clone, Debug)]
pub enum GroebnerOutcome {
    /// Reduced, monic basis sorted by leading monomial.
    Basis(Vec<Polynomial>),
    Undecided,
}

fn check_vars(polys: &[Polynomial]) -> Result<()> {
    if let Some(first) = polys.first() {
        if polys.iter().any(|p| p.vars() != first.vars()) {
            return Err(Error::InvalidInput("polynomials do not share one variable list".into()));
        }
    }
    Ok(())
}

/// Full reduction of `f` by `basis` (leading terms of basis elements must be monic).
pub fn normal_form(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let mut p = f.clone();
    let mut rem = Polynomial::zero(f.vars().clone());
    while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let divisor = basis.iter().find(|g| g.leading().is_some_and(|(gm, _)| gm.divides(&lm)));
        match divisor {
            Some(g) => {
                let (gm, gc) = g.leading().unwrap();
                let q = gm.quotient_of(&lm);
                let c = &lc / gc;
                p = p.sub(&g.mul_term(&q, &c));
            }
            None => {
                rem.add_term(lm.clone(), lc.clone());
                p.add_term(lm, -lc);
            }
        }
    }
    rem
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let a = f.mul_term(&fm.quotient_of(&l), &fc.recip());
    let b = g.mul_term(&gm.quotient_of(&l), &gc.recip());
    a.sub(&b)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Computes a reduced Gröbner basis, or gives up at the caps.
pub fn groebner_basis(polys: &[Polynomial], caps: GroebnerCaps) -> Result<GroebnerOutcome> {
    check_vars(polys)?;
    let Some(vars) = polys.first().map(|p| p.vars().clone()) else {
        return Ok(GroebnerOutcome::Basis(Vec::new()));
    };
    let mut all: Vec<Polynomial> = Vec::new();
    let mut active: BTreeSet<usize> = BTreeSet::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Polynomial> = polys.iter().filter(|p| !p.is_zero()).map(Polynomial::monic).collect();
    inputs.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    for f in inputs {
        let active_polys: Vec<Polynomial> = active.iter().map(|&k| all[k].clone()).collect();
        let h = normal_form(&f, &active_polys);
        if h.is_zero() {
            continue;
        }
        if h.is_unit() {
            return Ok(GroebnerOutcome::Basis(vec![Polynomial::constant(vars, Rat::one())]));
        }
        all.push(h.monic());
        let idx = all.len() - 1;
        update(&all, &mut active, &mut pairs, idx);
    }

    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let k = (0..pairs.len()).min_by(|&a, &b| pairs[a].lcm.cmp(&pairs[b].lcm)).unwrap();
        let pair = pairs.swap_remove(k);
        let s = s_polynomial(&all[pair.i], &all[pair.j]);
        let active_polys: Vec<Polynomial> = active.iter().map(|&k| all[k].clone()).collect();
        let h = normal_form(&s, &active_polys);
        if h.is_zero() {
            continue;
        }
        if h.is_unit() {
            return Ok(GroebnerOutcome::Basis(vec![Polynomial::constant(vars, Rat::one())]));
        }
        if all.len() >= caps.max_basis || h.total_degree() > caps.max_degree {
            return Ok(GroebnerOutcome::Undecided);
        }
        all.push(h.monic());
        let idx = all.len() - 1;
        update(&all, &mut active, &mut pairs, idx);
    }

    // interreduce
    let mut basis: Vec<Polynomial> = active.iter().map(|&k| all[k].clone()).collect();
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut reduced = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let others: Vec<Polynomial> = basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
        let lm = basis[i].leading().unwrap().0.clone();
        let mut tail = basis[i].clone();
        tail.add_term(lm.clone(), -Rat::one());
        let tail = normal_form(&tail, &others);
        let mut p = tail;
        p.add_term(lm, Rat::one());
        reduced.push(p);
    }
    Ok(GroebnerOutcome::Basis(reduced))
}

// Gebauer–Möller update with the new element `h` (index into `all`).
fn update(all: &[Polynomial], active: &mut BTreeSet<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lm = |k: usize| all[k].leading().unwrap().0.clone();
    let hm = lm(h);

    let mut c: Vec<(usize, Monomial, bool)> = active
        .iter()
        .map(|&g| {
            let gm = lm(g);
            (g, hm.lcm(&gm), hm.coprime(&gm))
        })
        .collect();
    let mut d: Vec<(usize, Monomial, bool)> = Vec::new();
    while let Some((g1, l1, coprime)) = (!c.is_empty()).then(|| c.remove(0)) {
        let dominated = c.iter().chain(d.iter()).any(|(_, l2, _)| l2.divides(&l1));
        if coprime || !dominated {
            d.push((g1, l1, coprime));
        }
    }
    let e: Vec<Pair> = d.into_iter().filter(|(_, _, coprime)| !coprime).map(|(g, l, _)| Pair { i: g, j: h, lcm: l }).collect();

    pairs.retain(|p| {
        let ih = lm(p.i).lcm(&hm);
        let jh = lm(p.j).lcm(&hm);
        !hm.divides(&p.lcm) || ih == p.lcm || jh == p.lcm
    });
    pairs.extend(e);

    active.retain(|&g| !hm.divides(&lm(g)));
    active.insert(h);
}

/// Decides whether 1 lies in the ideal generated by `polys`.
pub fn groebner_inconsistent(polys: &[Polynomial], caps: GroebnerCaps) -> Result<Consistency> {
    if polys.iter().any(Polynomial::is_unit) {
        check_vars(polys)?;
        return Ok(Consistency::Inconsistent);
    }
    Ok(match groebner_basis(polys, caps)? {
        GroebnerOutcome::Undecided => Consistency::Undecided,
        GroebnerOutcome::Basis(b) => {
            if b.iter().any(Polynomial::is_unit) {
                Consistency::Inconsistent
            } else {
                Consistency::Consistent
            }
        }
    })
}

/// Minimal polynomial of variable `var` modulo the ideal with reduced basis `basis`,
/// searched up to `max_degree`.
pub fn variable_min_poly(basis: &[Polynomial], var: usize, max_degree: usize) -> Option<UniPoly> {
    let vars = basis.first()?.vars().clone();
    let x = Polynomial::var(vars.clone(), var);
    let mut power = Polynomial::constant(vars, Rat::one());
    let mut forms: Vec<Polynomial> = Vec::new();
    for _ in 0..=max_degree {
        forms.push(normal_form(&power, basis));
        power = power.mul(&x);
        // look for a dependency among the normal forms collected so far
        let mut monos: BTreeSet<Monomial> = BTreeSet::new();
        for f in &forms {
            monos.extend(f.terms().keys().cloned());
        }
        let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rs = RowSpace::new(monos.len());
        let mut dependent = false;
        for f in &forms {
            let mut v = vec![Rat::zero(); monos.len()];
            for (m, c) in f.terms() {
                v[index[m]] = c.clone();
            }
            if !rs.insert(&v) {
                dependent = true;
            }
        }
        if dependent {
            // the last power is the first dependent one; solve for the relation
            let n = forms.len();
            let cols: Vec<Vec<Rat>> = forms
                .iter()
                .map(|f| {
                    let mut v = vec![Rat::zero(); monos.len()];
                    for (m, c) in f.terms() {
                        v[index[m]] = c.clone();
                    }
                    v
                })
                .collect();
            let mat = super::RatMatrix::from_columns(monos.len(), &cols);
            let ker = mat.kernel();
            let rel = ker.into_iter().find(|k| !k[n - 1].is_zero())?;
            return Some(UniPoly::new(rel).monic());
        }
    }
    None
}

const SWEEP: [(i64, i64); 11] = [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 1), (1, 3), (-1, 3)];

/// Searches for a rational point of the variety cut out by `polys`.
///
/// Variables are fixed one at a time: first by rational roots of the variable's
/// minimal polynomial modulo the ideal, otherwise by a small-height sweep, each
/// time re-checking consistency. `None` means no point was found within budget,
/// not that none exists.
pub fn find_rational_point(polys: &[Polynomial], caps: GroebnerCaps) -> Result<Option<Vec<Rat>>> {
    check_vars(polys)?;
    let Some(nvars) = polys.first().map(Polynomial::nvars) else {
        return Ok(Some(Vec::new()));
    };
    let mut budget = 400usize;
    let mut assignment: Vec<Option<Rat>> = vec![None; nvars];
    search_point(polys.to_vec(), &mut assignment, caps, &mut budget)
}

fn search_point(
    polys: Vec<Polynomial>,
    assignment: &mut Vec<Option<Rat>>,
    caps: GroebnerCaps,
    budget: &mut usize,
) -> Result<Option<Vec<Rat>>> {
    if *budget == 0 {
        return Ok(None);
    }
    *budget -= 1;
    let basis = match groebner_basis(&polys, caps)? {
        GroebnerOutcome::Undecided => return Ok(None),
        GroebnerOutcome::Basis(b) => b,
    };
    if basis.iter().any(Polynomial::is_unit) {
        return Ok(None);
    }
    let Some(var) = assignment.iter().position(Option::is_none) else {
        let point: Vec<Rat> = assignment.iter().map(|x| x.clone().unwrap()).collect();
        return Ok(if polys.iter().all(|p| p.eval(&point).is_zero()) { Some(point) } else { None });
    };
    let candidates: Vec<Rat> = match variable_min_poly(&basis, var, 12) {
        Some(mp) => mp.rational_roots(),
        None => SWEEP.iter().map(|&(n, d)| Rat::new(n.into(), d.into())).collect(),
    };
    let vars = polys[0].vars().clone();
    for c in candidates {
        let mut next: Vec<Polynomial> = basis.iter().map(|p| p.substitute(var, &c)).collect();
        next.retain(|p| !p.is_zero());
        if next.iter().any(Polynomial::is_unit) {
            continue;
        }
        if next.is_empty() {
            next.push(Polynomial::zero(vars.clone()));
        }
        assignment[var] = Some(c);
        if let Some(p) = search_point(next, assignment, caps, budget)? {
            return Ok(Some(p));
        }
        assignment[var] = None;
        if *budget == 0 {
            break;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::variable_names;
    use crate::exactalg::ri;

    fn xy() -> (Polynomial, Polynomial) {
        let v = variable_names("x", 2);
        (Polynomial::var(v.clone(), 0), Polynomial::var(v, 1))
    }

    #[test]
    fn inconsistent_constants() {
        let (x, _) = xy();
        let one = Polynomial::constant(x.vars().clone(), ri(1));
        let r = groebner_inconsistent(&[x.clone(), x.sub(&one)], GroebnerCaps::default()).unwrap();
        assert_eq!(r, Consistency::Inconsistent);
    }

    #[test]
    fn double_root_consistent() {
        let (x, _) = xy();
        let r = groebner_inconsistent(&[x.mul(&x)], GroebnerCaps::default()).unwrap();
        assert_eq!(r, Consistency::Consistent);
    }

    #[test]
    fn hyperbola_meets_axis() {
        let (x, y) = xy();
        let one = Polynomial::constant(x.vars().clone(), ri(1));
        let r = groebner_inconsistent(&[x.mul(&y).sub(&one), x.clone()], GroebnerCaps::default()).unwrap();
        assert_eq!(r, Consistency::Inconsistent);
    }

    #[test]
    fn cap_yields_undecided() {
        let (x, y) = xy();
        let one = Polynomial::constant(x.vars().clone(), ri(1));
        let f = x.mul(&x).mul(&y).sub(&one);
        let g = x.mul(&y).mul(&y).sub(&x);
        let caps = GroebnerCaps { max_basis: 2, max_degree: 30 };
        assert_eq!(groebner_inconsistent(&[f, g], caps).unwrap(), Consistency::Undecided);
    }

    #[test]
    fn rational_point_on_line_and_parabola() {
        let (x, y) = xy();
        let v = x.vars().clone();
        let two = Polynomial::constant(v.clone(), ri(2));
        // y = x^2, x + y = 2 → (1,1) or (-2,4)
        let f = y.sub(&x.mul(&x));
        let g = x.add(&y).sub(&two);
        let p = find_rational_point(&[f.clone(), g.clone()], GroebnerCaps::default()).unwrap().unwrap();
        assert!(f.eval(&p).is_zero() && g.eval(&p).is_zero());
    }

    #[test]
    fn irrational_point_not_found() {
        let (x, _) = xy();
        let two = Polynomial::constant(x.vars().clone(), ri(2));
        let f = x.mul(&x).sub(&two);
        assert!(find_rational_point(&[f], GroebnerCaps::default()).unwrap().is_none());
    }

    #[test]
    fn min_poly_of_variable() {
        let (x, y) = xy();
        let v = x.vars().clone();
        let f = x.mul(&x).sub(&Polynomial::constant(v.clone(), ri(4)));
        let g = y.sub(&x);
        let GroebnerOutcome::Basis(b) = groebner_basis(&[f, g], GroebnerCaps::default()).unwrap() else { panic!() };
        let mp = variable_min_poly(&b, 1, 5).unwrap();
        let mut roots = mp.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![ri(-2), ri(2)]);
    }
}
