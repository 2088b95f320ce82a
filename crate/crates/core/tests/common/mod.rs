//! Independent oracles and random instance generators shared by the test targets.
//! Nothing here goes through the library's membership or comparison code.
#![allow(dead_code)]

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use povagg::cone::{ConeDesc, Relation};
use povagg::linalg::{AffineMap, RMatrix, RVector};
use povagg::povs::Povs;
use povagg::profile::{Domain, Point, Profile, Representation};
use povagg::rational::Rational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn small(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    q(rng.gen_range(lo..=hi))
}

pub fn frac(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    qf(rng.gen_range(lo..=hi), rng.gen_range(1..=4))
}

pub fn positive_frac(rng: &mut ChaCha8Rng) -> Rational {
    qf(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> RVector {
    (0..n).map(|_| frac(rng, lo, hi)).collect()
}

pub fn random_int_vec(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> RVector {
    (0..n).map(|_| small(rng, lo, hi)).collect()
}

/// Test-side description of the cones the generators use.
#[derive(Clone, Debug)]
pub enum TCone {
    Orthant(usize),
    Trivial(usize),
    H { dim: usize, rows: Vec<RVector> },
    Product(Vec<TCone>),
    Lex(Box<TCone>, Box<TCone>),
}

impl TCone {
    pub fn dim(&self) -> usize {
        match self {
            TCone::Orthant(n) | TCone::Trivial(n) => *n,
            TCone::H { dim, .. } => *dim,
            TCone::Product(fs) => fs.iter().map(TCone::dim).sum(),
            TCone::Lex(h, t) => h.dim() + t.dim(),
        }
    }

    pub fn desc(&self) -> ConeDesc {
        match self {
            TCone::Orthant(n) => ConeDesc::Orthant(*n),
            TCone::Trivial(n) => ConeDesc::Trivial(*n),
            TCone::H { dim, rows } => ConeDesc::PolyhedralH {
                dim: *dim,
                rows: rows.clone(),
            },
            TCone::Product(fs) => ConeDesc::Product(fs.iter().map(TCone::desc).collect()),
            TCone::Lex(h, t) => ConeDesc::Lex(Box::new(h.desc()), Box::new(t.desc())),
        }
    }

    /// Membership straight from the definitions; heads of lex cones are pointed.
    pub fn member(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim());
        match self {
            TCone::Orthant(_) => v.iter().all(|x| !x.is_negative()),
            TCone::Trivial(_) => v.iter().all(Zero::is_zero),
            TCone::H { rows, .. } => rows.iter().all(|r| !dot(r, v).is_negative()),
            TCone::Product(fs) => {
                let mut at = 0;
                fs.iter().all(|f| {
                    let d = f.dim();
                    let ok = f.member(&v[at..at + d]);
                    at += d;
                    ok
                })
            }
            TCone::Lex(h, t) => {
                let d = h.dim();
                let (a, b) = v.split_at(d);
                h.member(a) && (!a.iter().all(Zero::is_zero) || t.member(b))
            }
        }
    }

    pub fn relation(&self, a: &[Rational], b: &[Rational]) -> Relation {
        let d: RVector = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let n: RVector = d.iter().map(|x| -x).collect();
        match (self.member(&d), self.member(&n)) {
            (true, true) => Relation::Equivalent,
            (true, false) => Relation::StrictGreater,
            (false, true) => Relation::StrictLess,
            (false, false) => Relation::Incomparable,
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &[RVector], v: &[Rational]) -> RVector {
    m.iter().map(|r| dot(r, v)).collect()
}

/// Pointed polyhedral cone in H-form: elementary row operations applied to
/// the identity, so the rows keep spanning, and possibly one extra row.
pub fn random_pointed_h(rng: &mut ChaCha8Rng, dim: usize) -> TCone {
    let mut rows: Vec<RVector> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { q(1) } else { q(0) }).collect())
        .collect();
    for _ in 0..dim {
        let i = rng.gen_range(0..dim);
        let j = rng.gen_range(0..dim);
        if i != j {
            let c = small(rng, -1, 2);
            let add: RVector = rows[i].iter().zip(&rows[j]).map(|(a, b)| a + &c * b).collect();
            rows[i] = add;
        }
    }
    if rng.gen_bool(0.5) {
        rows.push(random_int_vec(rng, dim, -1, 2));
    }
    TCone::H { dim, rows }
}

pub fn random_cone(rng: &mut ChaCha8Rng, dim: usize) -> TCone {
    match rng.gen_range(0..3) {
        0 => TCone::Orthant(dim),
        1 => random_pointed_h(rng, dim),
        _ if dim >= 2 => {
            let h = rng.gen_range(1..dim);
            let head = if rng.gen_bool(0.5) {
                TCone::Orthant(h)
            } else {
                random_pointed_h(rng, h)
            };
            TCone::Lex(Box::new(head), Box::new(TCone::Orthant(dim - h)))
        }
        _ => TCone::Orthant(dim),
    }
}

/// Test-side copy of a profile: vertices, and per representation its affine
/// map and cone. Index 0 is the social representation.
#[derive(Clone, Debug)]
pub struct TProfile {
    pub vertices: Vec<RVector>,
    pub reps: Vec<(Vec<RVector>, RVector, TCone)>,
}

impl TProfile {
    pub fn coords(&self, p: &Point) -> RVector {
        let d = self.vertices[0].len();
        let mut x = vec![q(0); d];
        for (w, v) in p.weights.iter().zip(&self.vertices) {
            for (a, b) in x.iter_mut().zip(v) {
                *a += w * b;
            }
        }
        x
    }

    pub fn value(&self, k: usize, p: &Point) -> RVector {
        let (m, b, _) = &self.reps[k];
        let x = self.coords(p);
        mat_vec(m, &x).iter().zip(b).map(|(a, c)| a + c).collect()
    }

    pub fn relation(&self, k: usize, x: &Point, y: &Point) -> Relation {
        self.reps[k].2.relation(&self.value(k, x), &self.value(k, y))
    }

    pub fn n(&self) -> usize {
        self.reps.len() - 1
    }

    pub fn profile(&self) -> Profile {
        let d = self.vertices[0].len();
        let rep = |(m, b, c): &(Vec<RVector>, RVector, TCone)| {
            Representation::new(
                Povs::new(c.desc()).unwrap(),
                AffineMap::new(RMatrix::from_rows(d, m.clone()), b.clone()).unwrap(),
            )
            .unwrap()
        };
        Profile::new(
            Domain::Polytope {
                dim: d,
                vertices: self.vertices.clone(),
            },
            self.reps[1..].iter().map(rep).collect(),
            rep(&self.reps[0]),
        )
        .unwrap()
    }

    /// The axiom definitions applied to one ordered pair.
    pub fn violates(&self, axiom: usize, x: &Point, y: &Point) -> bool {
        let rel: Vec<Relation> = (0..=self.n()).map(|k| self.relation(k, x, y)).collect();
        let s = rel[0];
        let ind = &rel[1..];
        let weak = |r: &Relation| matches!(r, Relation::Equivalent | Relation::StrictGreater);
        match axiom {
            1 => ind.iter().all(|r| *r == Relation::Equivalent) && s != Relation::Equivalent,
            2 => ind.iter().all(weak) && !weak(&s),
            3 => ind.iter().all(weak) && ind.contains(&Relation::StrictGreater) && s != Relation::StrictGreater,
            4 => {
                let s_weakly_below = matches!(s, Relation::Equivalent | Relation::StrictLess);
                s_weakly_below
                    && (0..ind.len()).any(|j| {
                        ind[j] == Relation::Incomparable && ind.iter().enumerate().all(|(i, r)| i == j || weak(r))
                    })
            }
            _ => unreachable!(),
        }
    }
}

pub fn vertex_point(k: usize, j: usize) -> Point {
    let mut w = vec![q(0); k];
    w[j] = q(1);
    Point { weights: w }
}

pub fn random_point(rng: &mut ChaCha8Rng, k: usize) -> Point {
    loop {
        let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=9)).collect();
        let t: i64 = raw.iter().sum();
        if t > 0 {
            return Point {
                weights: raw.iter().map(|&r| qf(r, t)).collect(),
            };
        }
    }
}

/// Vertex pairs followed by seeded random mixture pairs.
pub fn sample_pairs(rng: &mut ChaCha8Rng, k: usize, mixtures: usize) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                out.push((vertex_point(k, i), vertex_point(k, j)));
            }
        }
    }
    for _ in 0..mixtures {
        out.push((random_point(rng, k), random_point(rng, k)));
    }
    out
}

/// Domain vertices: the standard simplex in `ℝ^m`, or a random small polytope.
pub fn random_vertices(rng: &mut ChaCha8Rng) -> Vec<RVector> {
    if rng.gen_bool(0.5) {
        let m = rng.gen_range(2..=4);
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { q(1) } else { q(0) }).collect())
            .collect()
    } else {
        let d = rng.gen_range(1..=3);
        let k = rng.gen_range(2..=4);
        let mut vs: Vec<RVector> = Vec::new();
        while vs.len() < k {
            let v = random_int_vec(rng, d, -2, 2);
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs
    }
}

fn random_rep(rng: &mut ChaCha8Rng, domain_dim: usize, cone: TCone) -> (Vec<RVector>, RVector, TCone) {
    let d = cone.dim();
    let m = (0..d).map(|_| random_int_vec(rng, domain_dim, -2, 2)).collect();
    let b = random_int_vec(rng, d, -1, 1);
    (m, b, cone)
}

/// Profiles with 2–4 individuals in spaces of dimension at most 3. The social
/// representation is one of: a weighted sum of standard utilities (weights may
/// be zero or negative), the joint map into the product cone, the plain sum
/// over a shared cone, or a random affine image.
pub fn random_profile(rng: &mut ChaCha8Rng) -> (TProfile, &'static str) {
    let vertices = random_vertices(rng);
    let dd = vertices[0].len();
    let n = rng.gen_range(2..=4);
    let kind = ["weighted", "joint", "sum", "random"].choose(rng).copied().unwrap();
    let mut reps = Vec::new();
    let social;
    match kind {
        "weighted" => {
            for _ in 0..n {
                reps.push(random_rep(rng, dd, TCone::Orthant(1)));
            }
            let w: Vec<Rational> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.8) {
                        positive_frac(rng)
                    } else {
                        small(rng, -1, 0)
                    }
                })
                .collect();
            let mut row = vec![q(0); dd];
            let mut b = q(0);
            for (wi, (m, bi, _)) in w.iter().zip(&reps) {
                for (a, x) in row.iter_mut().zip(&m[0]) {
                    *a += wi * x;
                }
                b += wi * &bi[0];
            }
            social = (vec![row], vec![b], TCone::Orthant(1));
        }
        "joint" => {
            let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
            for d in dims {
                let c = random_cone(rng, d);
                reps.push(random_rep(rng, dd, c));
            }
            let mut m = Vec::new();
            let mut b = Vec::new();
            for (mi, bi, _) in &reps {
                m.extend(mi.iter().cloned());
                b.extend(bi.iter().cloned());
            }
            let cone = TCone::Product(reps.iter().map(|r| r.2.clone()).collect());
            social = (m, b, cone);
        }
        "sum" => {
            let d = rng.gen_range(1..=3);
            let c = random_cone(rng, d);
            for _ in 0..n {
                reps.push(random_rep(rng, dd, c.clone()));
            }
            let mut m = vec![vec![q(0); dd]; d];
            let mut b = vec![q(0); d];
            for (mi, bi, _) in &reps {
                for r in 0..d {
                    for c in 0..dd {
                        m[r][c] += &mi[r][c];
                    }
                    b[r] += &bi[r];
                }
            }
            social = (m, b, c);
        }
        _ => {
            for _ in 0..n {
                let d = rng.gen_range(1..=3);
                let c = random_cone(rng, d);
                reps.push(random_rep(rng, dd, c));
            }
            let d = rng.gen_range(1..=3);
            let c = random_cone(rng, d);
            social = random_rep(rng, dd, c);
        }
    }
    let mut all = vec![social];
    all.extend(reps);
    (TProfile { vertices, reps: all }, kind)
}

/// Rank by plain Gaussian elimination.
pub fn rank(rows: &[RVector]) -> usize {
    let mut m: Vec<RVector> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                let sub: RVector = m[i].iter().zip(&m[r]).map(|(a, b)| a - &f * b).collect();
                m[i] = sub;
            }
        }
        r += 1;
    }
    r
}

/// Rank of `{M (v_j − v_0)}`.
pub fn diff_rank(m: &[RVector], vertices: &[RVector]) -> usize {
    let imgs: Vec<RVector> = vertices.iter().map(|v| mat_vec(m, v)).collect();
    let diffs: Vec<RVector> = imgs[1..]
        .iter()
        .map(|y| y.iter().zip(&imgs[0]).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        0
    } else {
        rank(&diffs)
    }
}

pub fn simplex(m: usize) -> Vec<RVector> {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { q(1) } else { q(0) }).collect())
        .collect()
}
