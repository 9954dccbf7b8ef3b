//! Acceptance suite: one pass/fail line per criterion. Every comparison is exact.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use quiver_moduli::bound_quiver::{parse_algebra, BoundQuiverAlgebra};
use quiver_moduli::decomp::{generic_decomposition_sampled, predict_rational_invariants};
use quiver_moduli::exactalg::{
    groebner_inconsistent, ri, solve_and_kernel, variable_names, Consistency, GroebnerCaps, Polynomial, Rat, RatMatrix,
};
use quiver_moduli::forms::{euler_data, tits_form, to_i64};
use quiver_moduli::rep::{ext_all, is_isomorphic, krull_schmidt, IsoVerdict, Representation};
use quiver_moduli::sampling::{random_invertible, random_matrix, random_representation, rng_from_seed};
use quiver_moduli::semi_invariants::{classify_moduli_tame, hilbert_series, symmetric_power_series, ModuliShape};
use quiver_moduli::stability::{jh_filtration_ss, king_test, moduli_dimension, theta_stable_decomposition, StabilityStatus};
use quiver_moduli::tilting::{
    is_tilting, is_well_positioned, transport_module, PositionCase, TiltingContext, WellPositionedVerdict,
};
use rand::Rng;

/// All comparisons are exact integer or rational equalities.
const TOLERANCE: i64 = 0;
const EULER_MIN_PAIRS: usize = 50;
const TITS_RANDOM_VECTORS: usize = 20;
const KS_TRIALS: usize = 30;
/// Indecomposables drawn with replacement per trial.
const KS_MIN_PICKS: usize = 2;
const KS_MAX_PICKS: usize = 4;
const KERNEL_MATRICES: usize = 100;
const WELL_POSITIONED_BOUND: usize = 4;
const SI_M_MAX: u32 = 3;
const DEGREE_CAP: u32 = 60;

type Outcome = std::result::Result<String, String>;

fn alg(text: &str) -> Arc<BoundQuiverAlgebra> {
    Arc::new(parse_algebra(text).unwrap())
}

fn a2() -> Arc<BoundQuiverAlgebra> {
    alg("vertices 1 2; arrows a:1->2;")
}

fn kn(n: usize) -> Arc<BoundQuiverAlgebra> {
    let arrows: Vec<String> = (0..n).map(|i| format!("x{i}:1->2")).collect();
    alg(&format!("vertices 1 2; arrows {};", arrows.join(" ")))
}

fn a3_ab() -> Arc<BoundQuiverAlgebra> {
    alg("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;")
}

fn scalar(x: i64) -> RatMatrix {
    RatMatrix::from_i64(&[&[x]])
}

fn rep(a: &Arc<BoundQuiverAlgebra>, dims: Vec<usize>, maps: Vec<RatMatrix>) -> Representation {
    Representation::new_validated(a.clone(), dims, maps).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dimvecs_up_to(n: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p: Vec<usize>| (0..=top).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.retain(|d| d.iter().any(|&x| x > 0));
    out
}

fn euler_ext() -> Outcome {
    let mut pairs = 0;
    let mut rng = rng_from_seed(1);
    for (name, a, cap) in [("A2", a2(), usize::MAX), ("K2", kn(2), usize::MAX), ("K3", kn(3), usize::MAX), ("A3/ab", a3_ab(), 10)]
    {
        let euler = euler_data(&a, 6).map_err(|e| e.to_string())?;
        let mods: Vec<Representation> = dimvecs_up_to(a.vertex_count(), 2)
            .iter()
            .take(cap)
            .map(|d| random_representation(&a, d, &mut rng).unwrap())
            .collect();
        for m in &mods {
            for n in &mods {
                let lhs = euler.pair(&to_i64(m.dims()), &to_i64(n.dims()));
                let exts = ext_all(m, n, 4).map_err(|e| e.to_string())?;
                let rhs: i64 = exts.iter().enumerate().map(|(l, &x)| if l % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
                check((lhs - rhs).abs() <= TOLERANCE, || {
                    format!("{name}: {:?},{:?}: form {lhs} vs alternating Ext sum {rhs}", m.dims(), n.dims())
                })?;
                pairs += 1;
            }
        }
    }
    check(pairs >= EULER_MIN_PAIRS, || format!("only {pairs} pairs"))?;
    Ok(format!("{pairs} pairs"))
}

fn tits_cross_check() -> Outcome {
    let a = a3_ab();
    let mut rng = rng_from_seed(2);
    for _ in 0..TITS_RANDOM_VECTORS {
        let d: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=6)).collect();
        let q = tits_form(&a, &d).map_err(|e| e.to_string())?.value;
        let x: Vec<i64> = to_i64(&d);
        // Σ d_i² − (arrows 1→2, 2→3) + (relation 1⇝3)
        let formula = x.iter().map(|v| v * v).sum::<i64>() - x[0] * x[1] - x[1] * x[2] + x[0] * x[2];
        check((q - formula).abs() <= TOLERANCE, || format!("d={d:?}: q={q}, formula={formula}"))?;
    }
    Ok(format!("{TITS_RANDOM_VECTORS} random vectors"))
}

fn king_ground_truth() -> Outcome {
    let caps = GroebnerCaps::default();
    let k2 = kn(2);
    let mut count = 0;
    for x in -2..=2 {
        for y in -2..=2 {
            let m = rep(&k2, vec![1, 1], vec![scalar(x), scalar(y)]);
            let status = king_test(&m, &[1, -1], caps).map_err(|e| e.to_string())?.status;
            // the only candidate destabilizer is the vertex-1 line, a submodule iff both maps vanish
            let expected = if (x, y) == (0, 0) { StabilityStatus::Unstable } else { StabilityStatus::Stable };
            check(status == expected, || format!("K2 ({x},{y}): {status:?}"))?;
            count += 1;
        }
    }
    let a = a2();
    for x in -2..=2 {
        let m = rep(&a, vec![1, 1], vec![scalar(x)]);
        let status = king_test(&m, &[1, -1], caps).map_err(|e| e.to_string())?.status;
        let expected = if x == 0 { StabilityStatus::Unstable } else { StabilityStatus::Stable };
        check(status == expected, || format!("A2 ({x}): {status:?}"))?;
        count += 1;
    }
    Ok(format!("{count} grid points"))
}

/// Eigenvalue `b/a` of a `(1,1)` Kronecker module with `a ≠ 0`.
fn slope(m: &Representation) -> Option<Rat> {
    let a = &m.map(0)[(0, 0)];
    (!a.is_zero()).then(|| &m.map(1)[(0, 0)] / a)
}

fn s_equivalence() -> Outcome {
    let caps = GroebnerCaps::default();
    let k2 = kn(2);
    let id = RatMatrix::identity(2);
    let pencil = |b: &[&[i64]]| rep(&k2, vec![2, 2], vec![id.clone(), RatMatrix::from_i64(b)]);
    let split = pencil(&[&[2, 0], &[0, 3]]);
    let double = pencil(&[&[2, 0], &[0, 2]]);
    let jordan = pencil(&[&[2, 1], &[0, 2]]);
    let theta = [1, -1];
    let mut slopes = Vec::new();
    for (name, m) in [("{2,3}", &split), ("{2,2}", &double), ("jordan", &jordan)] {
        let jh = jh_filtration_ss(m, &theta, caps).map_err(|e| e.to_string())?;
        let ms = jh.multiset();
        check(jh.exact && ms.len() == 1 && ms.get(&vec![1, 1]) == Some(&2), || format!("{name}: factors {ms:?}"))?;
        let mut s: Vec<Option<Rat>> = jh.factors.iter().map(|f| f.module.as_ref().and_then(slope)).collect();
        s.sort();
        slopes.push(s);
        let dec = theta_stable_decomposition(std::slice::from_ref(m), &theta, caps).map_err(|e| e.to_string())?;
        check(dec.factors == vec![(vec![1, 1], 2)], || format!("{name}: decomposition {:?}", dec.factors))?;
    }
    let two = Some(ri(2));
    check(slopes[0] == vec![two.clone(), Some(ri(3))], || format!("{{2,3}} factor slopes {:?}", slopes[0]))?;
    check(slopes[1] == vec![two.clone(), two.clone()], || format!("{{2,2}} factor slopes {:?}", slopes[1]))?;
    check(slopes[2] == slopes[1], || format!("Jordan factor slopes {:?} differ from semisimple {:?}", slopes[2], slopes[1]))?;
    check(is_isomorphic(&jordan, &double) == IsoVerdict::NotIsomorphic, || "Jordan block isomorphic to semisimple".into())?;
    Ok("factor multisets 2·(1,1); Jordan block S-equivalent to the semisimple pencil".into())
}

fn hilbert_points_and_lines() -> Outcome {
    let a = hilbert_series(&a2(), &[1, 1], &[1, -1], SI_M_MAX, DEGREE_CAP).map_err(|e| e.to_string())?.dims;
    check(a == vec![1, 1, 1, 1], || format!("A2 series {a:?}"))?;
    let k = hilbert_series(&kn(2), &[1, 1], &[1, -1], SI_M_MAX, DEGREE_CAP).map_err(|e| e.to_string())?.dims;
    check(k == vec![1, 2, 3, 4], || format!("K2 series {k:?}"))?;
    Ok(format!("A2 {a:?}, K2 {k:?}"))
}

fn symmetric_factorization() -> Outcome {
    let k2 = kn(2);
    let direct = hilbert_series(&k2, &[2, 2], &[1, -1], SI_M_MAX, DEGREE_CAP).map_err(|e| e.to_string())?.dims;
    let line = hilbert_series(&k2, &[1, 1], &[1, -1], SI_M_MAX, DEGREE_CAP).map_err(|e| e.to_string())?.dims;
    let sym2 = symmetric_power_series(&line, 2);
    // graded pieces of S²(k[x,y]): C(m+2, 2)
    let oracle: Vec<u128> = (0..=SI_M_MAX as u128).map(|m| (m + 1) * (m + 2) / 2).collect();
    check(sym2 == oracle, || format!("S² series {sym2:?}"))?;
    check(direct.iter().map(|&x| x as u128).collect::<Vec<_>>() == sym2, || format!("direct {direct:?} vs S² {sym2:?}"))?;
    let pred = classify_moduli_tame(&k2, &[2, 2], &[(vec![1, 1], 2)]).map_err(|e| e.to_string())?;
    check(pred.shape == ModuliShape::ProductOfProjectiveSpaces { exponents: vec![2] }, || format!("shape {:?}", pred.shape))?;
    let g = generic_decomposition_sampled(&k2, &[2, 2], 5, 6).map_err(|e| e.to_string())?;
    let field = predict_rational_invariants(&g).map_err(|e| e.to_string())?;
    check(field.transcendence_degree == 2 && pred.transcendence_degree == 2, || format!("N = {}", field.transcendence_degree))?;
    Ok(format!("{direct:?} = S²{line:?}; P², N = 2"))
}

fn moduli_dimensions() -> Outcome {
    let caps = GroebnerCaps::default();
    let mut rng = rng_from_seed(7);
    for n in 2..=4usize {
        let a = kn(n);
        let samples: Vec<Representation> = (0..3).map(|_| random_representation(&a, &[1, 1], &mut rng).unwrap()).collect();
        let md = moduli_dimension(&a, &[1, 1], &[1, -1], &samples, caps).map_err(|e| e.to_string())?;
        // dim rep space − dim GL + 1
        let oracle = n as i64 - 2 + 1;
        check((md.moduli_dim - oracle).abs() <= TOLERANCE, || format!("K{n}: {} vs {oracle}", md.moduli_dim))?;
        // the moduli space is P^{n−1}: graded pieces C(m+n−1, n−1)
        let si = hilbert_series(&a, &[1, 1], &[1, -1], SI_M_MAX, DEGREE_CAP).map_err(|e| e.to_string())?.dims;
        let proj: Vec<usize> = (0..=SI_M_MAX as usize).map(|m| num_integer::binomial(m + n - 1, n - 1)).collect();
        check(si == proj, || format!("K{n}: series {si:?} vs P^{} {proj:?}", n - 1))?;
    }
    Ok("K2, K3, K4 give 1, 2, 3".into())
}

fn tilting_transport() -> Outcome {
    let a = a2();
    let p1 = Representation::projective(a.clone(), 0);
    let s1 = Representation::simple(a.clone(), 0);
    let t = p1.oplus(&s1);
    let check_t = is_tilting(&t).map_err(|e| e.to_string())?;
    check(check_t.is_tilting, || format!("not tilting: {:?}", check_t.notes))?;
    let ctx = TiltingContext::new(vec![p1.clone(), s1]).map_err(|e| e.to_string())?;
    let u = ctx.u_matrix();
    check(u.determinant().abs() == Rat::one(), || "u is not unimodular".into())?;
    let ca = euler_data(&a, 6).map_err(|e| e.to_string())?.matrix;
    let cb = euler_data(&ctx.b, 6).map_err(|e| e.to_string())?.matrix;
    let to_mat = |c: &Vec<Vec<i64>>| RatMatrix::from_fn(2, 2, |i, j| ri(c[i][j]));
    check(to_mat(&ca) == u.transpose().mul(&to_mat(&cb)).mul(&u), || "u is not an isometry".into())?;
    let theta = [1, -1];
    let wp = is_well_positioned(&ctx, &theta, WELL_POSITIONED_BOUND, 3, 8).map_err(|e| e.to_string())?;
    check(wp.verdict == WellPositionedVerdict::Case1, || format!("well-positioned verdict {:?}", wp.verdict))?;
    let r = transport_module(&ctx, &p1, &theta, PositionCase::Case1).map_err(|e| e.to_string())?;
    check(r.source_status == StabilityStatus::Stable && r.target_status == StabilityStatus::Stable, || {
        format!("{:?} → {:?}", r.source_status, r.target_status)
    })?;
    check(r.mapped_factor_dims == r.image_factor_dims, || "factor dims not mapped by u".into())?;
    let r2 = transport_module(&ctx, &p1.oplus(&p1), &theta, PositionCase::Case1).map_err(|e| e.to_string())?;
    check(r2.target_status == StabilityStatus::StrictlySemistable, || format!("P1² image {:?}", r2.target_status))?;
    check(r2.mapped_factor_dims == r2.image_factor_dims && r2.image_factor_dims.len() == 2, || {
        format!("{:?} vs {:?}", r2.mapped_factor_dims, r2.image_factor_dims)
    })?;
    Ok(format!("u = {:?}, θ′ = {:?}", ctx.u, r.theta_prime))
}

fn krull_schmidt_roundtrip() -> Outcome {
    let a = a2();
    let k2 = kn(2);
    let col = |v: &[i64]| RatMatrix::from_i64(&v.iter().map(std::slice::from_ref).collect::<Vec<_>>());
    let a2_inds = vec![
        Representation::simple(a.clone(), 0),
        Representation::simple(a.clone(), 1),
        Representation::projective(a.clone(), 0),
    ];
    let k2_inds = vec![
        Representation::simple(k2.clone(), 0),
        Representation::simple(k2.clone(), 1),
        rep(&k2, vec![1, 1], vec![scalar(1), scalar(2)]),
        rep(&k2, vec![1, 1], vec![scalar(1), scalar(-1)]),
        rep(&k2, vec![1, 1], vec![scalar(0), scalar(1)]),
        rep(&k2, vec![1, 2], vec![col(&[1, 0]), col(&[0, 1])]),
        rep(&k2, vec![2, 1], vec![RatMatrix::from_i64(&[&[1, 0]]), RatMatrix::from_i64(&[&[0, 1]])]),
    ];
    let mut rng = rng_from_seed(9);
    for trial in 0..KS_TRIALS {
        let inds = if trial % 2 == 0 { &a2_inds } else { &k2_inds };
        let mut mults = vec![0usize; inds.len()];
        for _ in 0..rng.gen_range(KS_MIN_PICKS..=KS_MAX_PICKS) {
            mults[rng.gen_range(0..inds.len())] += 1;
        }
        let parts: Vec<Representation> = inds.iter().zip(&mults).flat_map(|(x, &m)| std::iter::repeat_n(x.clone(), m)).collect();
        let sum = Representation::direct_sum(&parts.iter().collect::<Vec<_>>()).unwrap();
        let g: Vec<RatMatrix> = sum.dims().iter().map(|&d| random_invertible(&mut rng, d)).collect();
        let m = sum.conjugate(&g).unwrap();
        let ks = krull_schmidt(&m).map_err(|e| e.to_string())?;
        let mut found = vec![0usize; inds.len()];
        for s in &ks {
            let idx =
                inds.iter().position(|x| x.dims() == s.module.dims() && is_isomorphic(x, &s.module) == IsoVerdict::Isomorphic);
            let Some(i) = idx else {
                return Err(format!("trial {trial}: unexpected summand {:?}", s.module.dims()));
            };
            found[i] += s.multiplicity;
        }
        check(found == mults, || format!("trial {trial}: expected {mults:?}, recovered {found:?}"))?;
    }
    Ok(format!("{KS_TRIALS} conjugated sums"))
}

fn kernel_sanity() -> Outcome {
    let vars = variable_names("x", 2);
    let x = Polynomial::var(vars.clone(), 0);
    let y = Polynomial::var(vars.clone(), 1);
    let one = Polynomial::constant(vars.clone(), Rat::one());
    let caps = GroebnerCaps::default();
    let cases = [
        (vec![x.clone(), x.sub(&one)], Consistency::Inconsistent),
        (vec![x.mul(&x)], Consistency::Consistent),
        (vec![x.mul(&y).sub(&one), x.clone()], Consistency::Inconsistent),
    ];
    for (i, (sys, want)) in cases.iter().enumerate() {
        let got = groebner_inconsistent(sys, caps).map_err(|e| e.to_string())?;
        check(got == *want, || format!("system {i}: {got:?}"))?;
    }
    let mut rng = rng_from_seed(10);
    for t in 0..KERNEL_MATRICES {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let mut m = random_matrix(&mut rng, r, c);
        if t % 3 == 0 && r > 1 {
            // force a dependent row
            for j in 0..c {
                let v = &m[(0, j)] + &m[(1, j)];
                m[(r - 1, j)] = v;
            }
        }
        let rr = m.rref();
        let red = &rr.matrix;
        check(rr.rank == rr.pivots.len() && rr.rank == m.transpose().rank(), || format!("matrix {t}: rank mismatch"))?;
        check(red.rref().matrix == *red, || format!("matrix {t}: rref not idempotent"))?;
        for (k, &p) in rr.pivots.iter().enumerate() {
            for i in 0..r {
                let want = if i == k { Rat::one() } else { Rat::zero() };
                check(red[(i, p)] == want, || format!("matrix {t}: pivot column {p} not reduced"))?;
            }
            check((0..p).all(|j| red[(k, j)].is_zero()), || format!("matrix {t}: entries left of pivot"))?;
        }
        check(m.vstack(red).rank() == rr.rank, || format!("matrix {t}: row space changed"))?;
        let x0: Vec<Rat> = (0..c).map(|_| ri(rng.gen_range(-5..=5))).collect();
        let b = m.mul_vec(&x0);
        let sol = solve_and_kernel(&m, &b)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("matrix {t}: consistent system unsolved"))?;
        check(sol.kernel.len() == c - rr.rank, || format!("matrix {t}: kernel dimension"))?;
        let mut v = sol.particular.clone();
        for (k, kv) in sol.kernel.iter().enumerate() {
            check(m.mul_vec(kv).iter().all(Zero::is_zero), || format!("matrix {t}: kernel vector not in kernel"))?;
            for (vi, ki) in v.iter_mut().zip(kv) {
                *vi += ri(k as i64 + 1) * ki;
            }
        }
        check(m.mul_vec(&v) == b, || format!("matrix {t}: particular + kernel combination fails"))?;
    }
    Ok(format!("3 systems, {KERNEL_MATRICES} matrices"))
}

/// Writes past the test harness capture so the lines appear in every run.
fn report(line: String) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").expect("stdout");
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Euler–Ext consistency", euler_ext),
        ("Tits form cross-check", tits_cross_check),
        ("King stability ground truth", king_ground_truth),
        ("θ-stable decomposition and S-equivalence", s_equivalence),
        ("moduli Hilbert series", hilbert_points_and_lines),
        ("symmetric-product factorization", symmetric_factorization),
        ("moduli dimension formula", moduli_dimensions),
        ("tilting transport", tilting_transport),
        ("Krull–Schmidt roundtrip", krull_schmidt_roundtrip),
        ("kernel sanity", kernel_sanity),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => report(format!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1)),
            Err(why) => {
                report(format!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
