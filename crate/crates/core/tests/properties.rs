mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use povagg::aggregate::{common_space, solve_affine, SolveOutcome};
use povagg::cone::fm::project_piece;
use povagg::cone::{h_to_v, v_to_h, ConeDesc, Piece, Relation};
use povagg::linalg::{AffineMap, RMatrix, RVector};
use povagg::lp::{lp_decide, LinearConstraintSystem, LpOutcome};
use povagg::pareto::check_p1;
use povagg::pooling::{FiniteAlgebra, VectorMeasure};
use povagg::povs::{quotient_by, Povs};
use povagg::profile::{Domain, Point, Profile, Representation};
use povagg::rational::Rational;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn add(a: &[Rational], b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(c: &Rational, a: &[Rational]) -> RVector {
    a.iter().map(|x| c * x).collect()
}

/// A vector that is often in `c`: a nonnegative combination of its closure
/// generators, or a plain random vector.
fn probe(rng: &mut ChaCha8Rng, c: &ConeDesc) -> RVector {
    let n = c.dim();
    if rng.gen_bool(0.5) {
        let gens = c.to_union().unwrap().closure_generators();
        let mut v = vec![q(0); n];
        for g in gens {
            if rng.gen_bool(0.6) {
                v = add(&v, &scale(&small(rng, 0, 3), &g));
            }
        }
        v
    } else {
        random_int_vec(rng, n, -2, 2)
    }
}

fn in_cone(c: &ConeDesc, v: &[Rational]) -> bool {
    c.member(v).unwrap().member
}

/// Cones with lineality as well: H-forms with fewer rows than the dimension.
fn random_cone_any(rng: &mut ChaCha8Rng) -> TCone {
    let dim = rng.gen_range(1..=3);
    if rng.gen_bool(0.25) {
        let k = rng.gen_range(0..=dim);
        let rows = (0..k).map(|_| random_int_vec(rng, dim, -1, 2)).collect();
        TCone::H { dim, rows }
    } else if rng.gen_bool(0.2) {
        TCone::Trivial(dim)
    } else {
        random_cone(rng, dim)
    }
}

fn generated_by(gens: &[RVector], v: &[Rational]) -> bool {
    let k = gens.len();
    let mut sys = LinearConstraintSystem::new(k);
    for i in 0..v.len() {
        sys.push_eq(gens.iter().map(|g| g[i].clone()).collect(), v[i].clone());
    }
    for j in 0..k {
        let mut e = vec![q(0); k];
        e[j] = q(1);
        sys.push_geq(e, q(0));
    }
    lp_decide(&sys).unwrap().is_feasible()
}

fn random_rep(rng: &mut ChaCha8Rng, d: usize, cone: &TCone) -> Representation {
    let k = cone.dim();
    let m = (0..k).map(|_| random_vec(rng, d, -3, 3)).collect();
    let b = random_vec(rng, k, -2, 2);
    Representation::new(
        Povs::new(cone.desc()).unwrap(),
        AffineMap::new(RMatrix::from_rows(d, m), b).unwrap(),
    )
    .unwrap()
}

/// Profiles whose social representation is an affine image of the joint one,
/// on a simplex with enough vertices for the individual maps to be
/// independent.
fn dr_profile(rng: &mut ChaCha8Rng) -> (Vec<RVector>, Vec<(Vec<RVector>, RVector, TCone)>) {
    loop {
        let n = rng.gen_range(1..=3);
        let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        let total: usize = dims.iter().sum();
        let m = total + 1 + rng.gen_range(0..=1);
        let vertices = simplex(m);
        let mut reps: Vec<_> = dims
            .iter()
            .map(|&d| {
                let mat: Vec<RVector> = (0..d).map(|_| random_int_vec(rng, m, -3, 3)).collect();
                (mat, random_int_vec(rng, d, -2, 2), random_cone(rng, d))
            })
            .collect();
        let joint: Vec<RVector> = reps.iter().flat_map(|r| r.0.clone()).collect();
        if diff_rank(&joint, &vertices) != total {
            continue;
        }
        let k = rng.gen_range(1..=2);
        let l: Vec<RVector> = (0..k).map(|_| random_int_vec(rng, total, -2, 2)).collect();
        let b = random_int_vec(rng, k, -2, 2);
        let soc: Vec<RVector> = l
            .iter()
            .map(|row| {
                (0..m)
                    .map(|j| {
                        let col: RVector = joint.iter().map(|r| r[j].clone()).collect();
                        dot(row, &col)
                    })
                    .collect()
            })
            .collect();
        let off = {
            let jb: RVector = reps.iter().flat_map(|r| r.1.clone()).collect();
            add(&mat_vec(&l, &jb), &b)
        };
        reps.insert(0, (soc, off, TCone::Orthant(k)));
        return (vertices, reps);
    }
}

fn build(vertices: &[RVector], reps: &[(Vec<RVector>, RVector, TCone)]) -> Profile {
    TProfile {
        vertices: vertices.to_vec(),
        reps: reps.to_vec(),
    }
    .profile()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cone_axioms_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_cone_any(&mut r).desc();
        let n = c.dim();
        prop_assert!(in_cone(&c, &vec![q(0); n]));
        for _ in 0..20 {
            let v = probe(&mut r, &c);
            let w = probe(&mut r, &c);
            let lam = positive_frac(&mut r);
            if in_cone(&c, &v) {
                prop_assert!(in_cone(&c, &scale(&lam, &v)));
                if in_cone(&c, &w) {
                    prop_assert!(in_cone(&c, &add(&v, &w)));
                }
            }
        }
    }

    #[test]
    fn pieces_match_direct_membership(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_cone_any(&mut r);
        let c = t.desc();
        let u = c.to_union().unwrap();
        for _ in 0..100 {
            let v = probe(&mut r, &c);
            let direct = in_cone(&c, &v);
            prop_assert_eq!(u.contains(&v), direct);
            prop_assert_eq!(t.member(&v), direct);
        }
    }

    #[test]
    fn h_v_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.gen_range(1..=4);
        let k = r.gen_range(0..=5);
        let rows: Vec<RVector> = (0..k).map(|_| random_int_vec(&mut r, dim, -2, 2)).collect();
        let v = h_to_v(dim, &rows, &[]);
        let h = v_to_h(dim, &v.generators());
        for _ in 0..50 {
            let x = random_int_vec(&mut r, dim, -3, 3);
            let direct = rows.iter().all(|a| dot(a, &x) >= q(0));
            prop_assert_eq!(h.contains(&x), direct);
        }
        let gens: Vec<RVector> = (0..r.gen_range(0..=4)).map(|_| random_int_vec(&mut r, dim, -2, 2)).collect();
        let h = v_to_h(dim, &gens);
        let back = v_to_h(dim, &h_to_v(dim, &h.ineq, &h.eq).generators());
        for _ in 0..30 {
            let x = random_int_vec(&mut r, dim, -3, 3);
            let direct = generated_by(&gens, &x);
            prop_assert_eq!(h.contains(&x), direct);
            prop_assert_eq!(back.contains(&x), direct);
        }
    }

    #[test]
    fn classify_mirrors_under_swap(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_cone_any(&mut r);
        let c = t.desc();
        for _ in 0..20 {
            let v = random_int_vec(&mut r, c.dim(), -2, 2);
            let w = if r.gen_bool(0.2) { v.clone() } else { random_int_vec(&mut r, c.dim(), -2, 2) };
            let a = c.classify(&v, &w).unwrap().relation;
            let b = c.classify(&w, &v).unwrap().relation;
            prop_assert_eq!(a, b.mirror());
            prop_assert_eq!(a, t.relation(&v, &w));
        }
    }

    #[test]
    fn quotient_reflects_the_cone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_cone_any(&mut r).desc();
        let qt = quotient_by(&c).unwrap();
        for _ in 0..30 {
            let v = probe(&mut r, &c);
            let w = probe(&mut r, &c);
            let diff: RVector = v.iter().zip(&w).map(|(a, b)| a - b).collect();
            let rel = qt.space.classify(&qt.map.apply(&v), &qt.map.apply(&w)).unwrap().relation;
            let weak = matches!(rel, Relation::StrictGreater | Relation::Equivalent);
            prop_assert_eq!(in_cone(&c, &diff), weak);
        }
    }

    #[test]
    fn evaluation_preserves_mixtures(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vertices = random_vertices(&mut r);
        let k = vertices.len();
        let d = vertices[0].len();
        let domain = Domain::Polytope { dim: d, vertices };
        let cdim = r.gen_range(1..=3);
        let cone = random_cone(&mut r, cdim);
        let rep = random_rep(&mut r, d, &cone);
        for _ in 0..10 {
            let x = random_point(&mut r, k);
            let y = random_point(&mut r, k);
            let a = qf(r.gen_range(0..=7), 7);
            let mixed = rep.evaluate(&domain, &Point::mix(&a, &x, &y)).unwrap();
            let b = Rational::one() - &a;
            let want = add(
                &scale(&a, &rep.evaluate(&domain, &x).unwrap()),
                &scale(&b, &rep.evaluate(&domain, &y).unwrap()),
            );
            prop_assert_eq!(mixed, want);
        }
    }

    #[test]
    fn compare_is_a_preorder_and_scale_free(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vertices = random_vertices(&mut r);
        let k = vertices.len();
        let d = vertices[0].len();
        let domain = Domain::Polytope { dim: d, vertices };
        let cdim = r.gen_range(1..=3);
        let cone = random_cone(&mut r, cdim);
        let rep = random_rep(&mut r, d, &cone);
        let lam = positive_frac(&mut r);
        let scaled = Representation::new(
            rep.target.clone(),
            AffineMap::new(rep.map.matrix.scaled(&lam), scale(&lam, &rep.map.offset)).unwrap(),
        )
        .unwrap();
        let geq = |x: &Point, y: &Point| rep.compare(&domain, x, y).unwrap().relation.weakly_greater();
        for _ in 0..10 {
            let x = random_point(&mut r, k);
            let y = random_point(&mut r, k);
            let z = random_point(&mut r, k);
            prop_assert_eq!(rep.compare(&domain, &x, &x).unwrap().relation, Relation::Equivalent);
            if geq(&x, &y) && geq(&y, &z) {
                prop_assert!(geq(&x, &z));
            }
            prop_assert_eq!(
                rep.compare(&domain, &x, &y).unwrap().relation,
                scaled.compare(&domain, &x, &y).unwrap().relation
            );
        }
    }

    #[test]
    fn lp_answers_replay(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let mut sys = LinearConstraintSystem::new(n);
        for _ in 0..r.gen_range(1..=6) {
            let a = random_int_vec(&mut r, n, -2, 2);
            let c = small(&mut r, -2, 2);
            match r.gen_range(0..3) {
                0 => sys.push_eq(a, c),
                1 => sys.push_geq(a, c),
                _ => sys.push_gt(a, c),
            };
        }
        let first = lp_decide(&sys).unwrap();
        match &first {
            LpOutcome::Feasible(x) => prop_assert!(sys.satisfied_by(x)),
            LpOutcome::Infeasible(y) => prop_assert!(sys.certificate_valid(y)),
        }
        prop_assert_eq!(first, lp_decide(&sys).unwrap());
    }

    #[test]
    fn projection_matches_lp(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let out = r.gen_range(1..=3);
        let mut rows = |k: usize| -> Vec<RVector> { (0..k).map(|_| random_int_vec(&mut r, n, -2, 2)).collect() };
        let (a, b, c) = (rows(5), rows(2), rows(1));
        let p = Piece { dim: n, nonstrict: a, strict: b, equalities: if seed % 3 == 0 { c } else { vec![] } };
        let m: Vec<RVector> = (0..out).map(|_| random_int_vec(&mut r, n, -2, 2)).collect();
        let img = project_piece(&p, &RMatrix::from_rows(n, m.clone()));
        prop_assert_eq!(img.is_some(), p.is_feasible());
        let Some(img) = img else { return Ok(()) };
        for _ in 0..30 {
            let y = if r.gen_bool(0.5) {
                mat_vec(&m, &random_int_vec(&mut r, n, -3, 3))
            } else {
                random_int_vec(&mut r, out, -2, 2)
            };
            let mut sys = LinearConstraintSystem::new(n);
            for row in &p.nonstrict {
                sys.push_geq(row.clone(), q(0));
            }
            for row in &p.strict {
                sys.push_gt(row.clone(), q(0));
            }
            for row in &p.equalities {
                sys.push_eq(row.clone(), q(0));
            }
            for (row, yi) in m.iter().zip(&y) {
                sys.push_eq(row.clone(), yi.clone());
            }
            prop_assert_eq!(img.contains(&y), lp_decide(&sys).unwrap().is_feasible());
        }
    }

    #[test]
    fn measures_add_over_disjoint_events(seed in any::<u64>()) {
        let mut r = rng(seed);
        let atoms = r.gen_range(1..=8);
        let dim = r.gen_range(1..=3);
        let names: Vec<String> = (0..atoms).map(|i| format!("a{i}")).collect();
        let alg = FiniteAlgebra::new(names).unwrap();
        let values = (0..atoms).map(|_| random_vec(&mut r, dim, -3, 3)).collect();
        let vm = VectorMeasure::new(Povs::standard(dim), values).unwrap();
        let full = alg.full();
        for _ in 0..10 {
            let a = r.gen::<u64>() & full;
            let b = r.gen::<u64>() & full & !a;
            let sum = add(&vm.measure_of(a).unwrap(), &vm.measure_of(b).unwrap());
            prop_assert_eq!(vm.measure_of(a | b).unwrap(), sum);
        }
        prop_assert!(vm.measure_of(0).unwrap().iter().all(Zero::is_zero));
        let back = VectorMeasure::restrict(&vm.extend()).unwrap();
        prop_assert_eq!(back.atom_values, vm.atom_values);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solution_ignores_vertex_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (vertices, reps) = dr_profile(&mut r);
        let p = build(&vertices, &reps);
        let SolveOutcome::Solved(a) = solve_affine(&p).unwrap() else {
            return Err(TestCaseError::fail("no solution for an affine social map"));
        };
        prop_assert!(a.dr_holds);
        let mut perm: Vec<usize> = (0..vertices.len()).collect();
        perm.reverse();
        perm.rotate_left(r.gen_range(0..vertices.len()));
        let permuted: Vec<RVector> = perm.iter().map(|&i| vertices[i].clone()).collect();
        let p2 = build(&permuted, &reps);
        let SolveOutcome::Solved(b) = solve_affine(&p2).unwrap() else {
            return Err(TestCaseError::fail("permuted profile has no solution"));
        };
        prop_assert_eq!(&a.map.matrix, &b.map.matrix);
        prop_assert_eq!(&a.b, &b.b);
        // block split of L f_I
        let x = random_point(&mut r, vertices.len());
        let fi: RVector = p.individuals.iter().flat_map(|f| f.evaluate(&p.domain, &x).unwrap()).collect();
        let offsets = p.block_offsets();
        let cut = offsets[1];
        let l = a.map.matrix.row_vecs();
        let part = |lo: usize, hi: usize| -> RVector {
            l.iter().map(|row| dot(&row[lo..hi], &fi[lo..hi])).collect()
        };
        prop_assert_eq!(add(&part(0, cut), &part(cut, fi.len())), mat_vec(&l, &fi));
    }

    #[test]
    fn induced_cone_matches_social_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (t, _) = random_profile(&mut r);
        let p = t.profile();
        prop_assume!(check_p1(&p).unwrap().holds);
        let c0 = p.induced_social_cone().unwrap();
        for (x, y) in sample_pairs(&mut r, t.vertices.len(), 30) {
            let fx: RVector = p.individuals.iter().flat_map(|f| f.evaluate(&p.domain, &x).unwrap()).collect();
            let fy: RVector = p.individuals.iter().flat_map(|f| f.evaluate(&p.domain, &y).unwrap()).collect();
            let diff: RVector = fx.iter().zip(&fy).map(|(a, b)| a - b).collect();
            prop_assert_eq!(c0.union.contains(&diff), t.relation(0, &x, &y).weakly_greater());
        }
    }

    #[test]
    fn components_sum_on_mixtures(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (vertices, mut reps) = dr_profile(&mut r);
        // positive weights on standard utilities keep P1-P4
        for rep in reps.iter_mut().skip(1) {
            rep.0.truncate(1);
            rep.1.truncate(1);
            rep.2 = TCone::Orthant(1);
        }
        let total: usize = reps[1..].iter().map(|x| x.0.len()).sum();
        let w: RVector = (0..total).map(|_| positive_frac(&mut r)).collect();
        let joint: Vec<RVector> = reps[1..].iter().flat_map(|x| x.0.clone()).collect();
        let jb: RVector = reps[1..].iter().flat_map(|x| x.1.clone()).collect();
        let m = vertices.len();
        let soc: RVector = (0..m)
            .map(|j| dot(&w, &joint.iter().map(|row| row[j].clone()).collect::<RVector>()))
            .collect();
        reps[0] = (vec![soc], vec![dot(&w, &jb)], TCone::Orthant(1));
        let p = build(&vertices, &reps);
        for dr_form in [false, true] {
            let cs = common_space(&p, dr_form).unwrap();
            for _ in 0..40 {
                let x = random_point(&mut r, m);
                let sum = cs.reps[1..].iter().fold(vec![q(0); cs.space.dim()], |acc, g| {
                    add(&acc, &g.evaluate(&p.domain, &x).unwrap())
                });
                prop_assert_eq!(sum, cs.reps[0].evaluate(&p.domain, &x).unwrap());
            }
        }
    }
}
