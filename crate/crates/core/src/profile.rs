//! Polytope domains, affine representations and the spans built from them.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{h_to_v, ConeDesc, OrderRelationResult, PieceUnion};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{combination, is_zero, sub, unit, AffineMap, RMatrix, RVector, Subspace};
use crate::lp::{lp_decide, LinearConstraintSystem, LpOutcome};
use crate::povs::Povs;
use crate::rational::{primitive, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Convex hull of the listed vertices in `ℝ^dim`.
    Polytope { dim: usize, vertices: Vec<RVector> },
    /// Lotteries over `m` outcomes; vertex `j` is the unit vector `e_j`.
    Simplex(usize),
    /// `[0,1]^n`; vertex `k` is the indicator of the bits of `k`.
    Cube(usize),
}

impl Domain {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Domain::Polytope { dim, .. } => *dim,
            Domain::Simplex(m) | Domain::Cube(m) => *m,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Domain::Polytope { vertices, .. } => vertices.len(),
            Domain::Simplex(m) => *m,
            Domain::Cube(n) => 1 << n,
        }
    }

    pub fn vertex(&self, j: usize) -> RVector {
        match self {
            Domain::Polytope { vertices, .. } => vertices[j].clone(),
            Domain::Simplex(m) => unit(*m, j),
            Domain::Cube(n) => (0..*n)
                .map(|i| {
                    if j >> i & 1 == 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> Vec<RVector> {
        (0..self.vertex_count()).map(|j| self.vertex(j)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertex_count() == 0 {
            return Err(Error::Invalid("domain has no vertices".into()));
        }
        if let Domain::Cube(n) = self {
            if *n > 16 {
                return Err(Error::Invalid("cube domains are limited to 16 atoms".into()));
            }
        }
        if let Domain::Polytope { dim, vertices } = self {
            for v in vertices {
                check_dim("domain vertex", *dim, v.len())?;
            }
        }
        Ok(())
    }

    /// Ambient coordinates of a point given by vertex weights.
    pub fn coords(&self, p: &Point) -> Result<RVector> {
        check_dim("point weights", self.vertex_count(), p.weights.len())?;
        if p.weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Invalid("negative vertex weight".into()));
        }
        let total: Rational = p.weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Invalid("vertex weights must sum to 1".into()));
        }
        Ok(combination(self.ambient_dim(), &p.weights, &self.vertices()))
    }

    pub fn vertex_point(&self, j: usize) -> Point {
        let mut w = vec![Rational::zero(); self.vertex_count()];
        w[j] = Rational::one();
        Point { weights: w }
    }

    /// Points `x, y` with `M (x − y) = s v` for some `s > 0`, or `None`.
    pub fn realize(&self, m: &RMatrix, v: &[Rational]) -> Result<Option<(Point, Point)>> {
        check_dim("realized difference", m.rows(), v.len())?;
        check_dim("realizing map", self.ambient_dim(), m.cols())?;
        let k = self.vertex_count();
        let imgs: Vec<RVector> = self.vertices().iter().map(|x| m.mul_vec(x)).collect();
        // variables: λ (k), μ (k), s
        let nv = 2 * k + 1;
        let mut sys = LinearConstraintSystem::new(nv);
        for block in [0, k] {
            let mut row = vec![Rational::zero(); nv];
            for w in row.iter_mut().skip(block).take(k) {
                *w = Rational::one();
            }
            sys.push_eq(row, Rational::one());
        }
        for c in 0..m.rows() {
            let mut row = vec![Rational::zero(); nv];
            for (j, y) in imgs.iter().enumerate() {
                row[j] = y[c].clone();
                row[k + j] = -y[c].clone();
            }
            row[2 * k] = -v[c].clone();
            sys.push_eq(row, Rational::zero());
        }
        for t in 0..2 * k {
            sys.push_geq(unit(nv, t), Rational::zero());
        }
        sys.push_gt(unit(nv, 2 * k), Rational::zero());
        Ok(match lp_decide(&sys)? {
            LpOutcome::Feasible(z) => Some((
                Point {
                    weights: z[..k].to_vec(),
                },
                Point {
                    weights: z[k..2 * k].to_vec(),
                },
            )),
            LpOutcome::Infeasible(_) => None,
        })
    }

    /// Vertex weights for ambient coordinates `x`, or `None` when `x` lies outside.
    pub fn point_at(&self, x: &[Rational]) -> Result<Option<Point>> {
        check_dim("point coordinates", self.ambient_dim(), x.len())?;
        let k = self.vertex_count();
        let vs = self.vertices();
        let mut sys = LinearConstraintSystem::new(k);
        sys.push_eq(vec![Rational::one(); k], Rational::one());
        for (c, xc) in x.iter().enumerate() {
            sys.push_eq(vs.iter().map(|v| v[c].clone()).collect(), xc.clone());
        }
        for t in 0..k {
            sys.push_geq(unit(k, t), Rational::zero());
        }
        Ok(match lp_decide(&sys)? {
            LpOutcome::Feasible(z) => Some(Point { weights: z }),
            LpOutcome::Infeasible(_) => None,
        })
    }

    /// A random point with small-integer vertex weights.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        let k = self.vertex_count();
        loop {
            let raw: Vec<i64> = (0..k)
                .map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..=12) } else { 0 })
                .collect();
            let total: i64 = raw.iter().sum();
            if total > 0 {
                return Point {
                    weights: raw.iter().map(|&r| Rational::new(r.into(), total.into())).collect(),
                };
            }
        }
    }

    /// `span{v_j − v_0}`.
    pub fn direction_space(&self) -> Subspace {
        let v0 = self.vertex(0);
        let diffs = (1..self.vertex_count()).map(|j| sub(&self.vertex(j), &v0)).collect();
        Subspace::span(self.ambient_dim(), diffs)
    }
}

/// A point of a domain as a convex combination of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub weights: RVector,
}

impl Point {
    pub fn mix(alpha: &Rational, x: &Point, y: &Point) -> Point {
        let beta = Rational::one() - alpha;
        Point {
            weights: x
                .weights
                .iter()
                .zip(&y.weights)
                .map(|(a, b)| alpha * a + &beta * b)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub target: Povs,
    pub map: AffineMap,
}

impl Representation {
    pub fn new(target: Povs, map: AffineMap) -> Result<Representation> {
        check_dim("representation output", target.dim(), map.output_dim())?;
        Ok(Representation { target, map })
    }

    pub fn at(&self, x: &[Rational]) -> RVector {
        self.map.apply(x)
    }

    pub fn evaluate(&self, domain: &Domain, p: &Point) -> Result<RVector> {
        check_dim("representation input", domain.ambient_dim(), self.map.input_dim())?;
        let x = domain.coords(p)?;
        let out = self.at(&x);
        debug_assert_eq!(
            out,
            combination(
                self.map.output_dim(),
                &p.weights,
                &domain.vertices().iter().map(|v| self.at(v)).collect::<Vec<_>>()
            )
        );
        Ok(out)
    }

    pub fn compare(&self, domain: &Domain, x: &Point, y: &Point) -> Result<OrderRelationResult> {
        let fx = self.evaluate(domain, x)?;
        let fy = self.evaluate(domain, y)?;
        self.target.classify(&fx, &fy)
    }

    pub fn vertex_images(&self, domain: &Domain) -> Vec<RVector> {
        domain.vertices().iter().map(|v| self.at(v)).collect()
    }

    /// `Span(f(X) − f(X))`.
    pub fn diff_span(&self, domain: &Domain) -> Subspace {
        let imgs = self.vertex_images(domain);
        let diffs = imgs[1..].iter().map(|y| sub(y, &imgs[0])).collect();
        Subspace::span(self.map.output_dim(), diffs)
    }

    pub fn is_pervasive(&self, domain: &Domain) -> bool {
        self.diff_span(domain).dim() == self.target.dim()
    }

    /// `f*(x) = f(x) − f(v_0)` in coordinates of the diff span, ordered by
    /// the restriction of the target cone.
    pub fn make_pervasive(&self, domain: &Domain) -> Result<Representation> {
        if self.is_pervasive(domain) {
            return Ok(self.clone());
        }
        let w = self.diff_span(domain);
        let k = w.dim();
        let out = self.map.output_dim();
        // coordinates in the canonical basis are read off the pivot entries
        let pick = RMatrix::from_rows(out, w.pivots().iter().map(|&p| unit(out, p)).collect());
        let shift = self.at(&domain.vertex(0));
        let map = AffineMap::linear(pick.mul(&self.map.matrix))
            .shifted(&pick.mul_vec(&shift).iter().map(|x| -x).collect::<Vec<_>>());
        let basis = RMatrix::from_columns(out, w.basis());
        let restricted = self.target.pieces().pullback(&basis);
        let cone = union_to_cone(k, &restricted);
        let rep = Representation::new(Povs::new(cone)?, map)?;
        debug_assert!(rep.is_pervasive(domain));
        Ok(rep)
    }
}

/// Outcome of comparing two representations on a common domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleAgreement {
    pub vertex_pairs: usize,
    pub mixture_pairs: usize,
    /// First pair on which the two induced preorders differ.
    pub mismatch: Option<(Point, Point)>,
}

/// Compares the preorders induced by `a` and `b` on every ordered vertex pair
/// and on `mixtures` seeded random pairs of points.
pub fn agreement(
    domain: &Domain,
    a: &Representation,
    b: &Representation,
    mixtures: usize,
    seed: u64,
) -> Result<SampleAgreement> {
    let m = domain.vertex_count();
    let fa = a.vertex_images(domain);
    let fb = b.vertex_images(domain);
    let mut pairs = 0;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            pairs += 1;
            let ra = a.target.classify(&fa[i], &fa[j])?.relation;
            let rb = b.target.classify(&fb[i], &fb[j])?.relation;
            if ra != rb {
                return Ok(SampleAgreement {
                    vertex_pairs: pairs,
                    mixture_pairs: 0,
                    mismatch: Some((domain.vertex_point(i), domain.vertex_point(j))),
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..mixtures {
        let x = domain.random_point(&mut rng);
        let y = domain.random_point(&mut rng);
        if a.compare(domain, &x, &y)?.relation != b.compare(domain, &x, &y)?.relation {
            return Ok(SampleAgreement {
                vertex_pairs: pairs,
                mixture_pairs: t + 1,
                mismatch: Some((x, y)),
            });
        }
    }
    Ok(SampleAgreement {
        vertex_pairs: pairs,
        mixture_pairs: mixtures,
        mismatch: None,
    })
}

/// H-form when the union is closed, otherwise the pieces themselves.
pub fn union_to_cone(dim: usize, u: &PieceUnion) -> ConeDesc {
    let u = u.simplified();
    if u.is_closed_set() {
        let h = u.closure_hform();
        ConeDesc::PolyhedralH {
            dim,
            rows: h.matrix().into_rows(),
        }
    } else {
        ConeDesc::Pieces(u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub domain: Domain,
    pub individuals: Vec<Representation>,
    pub social: Representation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeakDr {
    pub contains_positive_cone: bool,
    pub contains_direct_sum: bool,
}

/// The social cone pulled back to joint utility differences.
#[derive(Clone, Debug)]
pub struct InducedCone {
    pub cone: ConeDesc,
    pub union: PieceUnion,
}

impl Profile {
    pub fn new(domain: Domain, individuals: Vec<Representation>, social: Representation) -> Result<Profile> {
        domain.validate()?;
        if individuals.is_empty() {
            return Err(Error::Invalid("a profile needs at least one individual".into()));
        }
        let d = domain.ambient_dim();
        for r in individuals.iter().chain(std::iter::once(&social)) {
            check_dim("representation input", d, r.map.input_dim())?;
        }
        Ok(Profile {
            domain,
            individuals,
            social,
        })
    }

    /// Agent `0` is society; `1..=n` are the individuals.
    pub fn rep(&self, k: usize) -> &Representation {
        if k == 0 {
            &self.social
        } else {
            &self.individuals[k - 1]
        }
    }

    pub fn n(&self) -> usize {
        self.individuals.len()
    }

    pub fn individual_spaces(&self) -> Vec<Povs> {
        self.individuals.iter().map(|r| r.target.clone()).collect()
    }

    /// `V_I` with the product order.
    pub fn product_space(&self) -> Povs {
        Povs::product(&self.individual_spaces())
    }

    pub fn block_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.n() + 1);
        let mut acc = 0;
        for r in &self.individuals {
            off.push(acc);
            acc += r.target.dim();
        }
        off.push(acc);
        off
    }

    /// `f_I = (f_i)_{i ∈ I}`.
    pub fn joint_map(&self) -> AffineMap {
        let maps: Vec<&AffineMap> = self.individuals.iter().map(|r| &r.map).collect();
        AffineMap::stack(self.domain.ambient_dim(), &maps)
    }

    pub fn joint_images(&self) -> Vec<RVector> {
        let f = self.joint_map();
        self.domain.vertices().iter().map(|v| f.apply(v)).collect()
    }

    /// `Span(f_I(X) − f_I(X))`.
    pub fn joint_diff_span(&self) -> Subspace {
        let imgs = self.joint_images();
        let dim = self.product_space().dim();
        Subspace::span(dim, imgs[1..].iter().map(|y| sub(y, &imgs[0])).collect())
    }

    pub fn check_dr(&self) -> bool {
        self.joint_diff_span().dim() == self.product_space().dim()
    }

    /// Whether the diff span contains the positive cone of `V_I`, and whether
    /// it contains every `1_i(V_i)`.
    pub fn check_weak_dr(&self) -> WeakDr {
        let w = self.joint_diff_span();
        let total = self.product_space().dim();
        let cone_span = Subspace::span(total, self.product_space().pieces().closure_generators());
        WeakDr {
            contains_positive_cone: w.contains_subspace(&cone_span),
            contains_direct_sum: w.dim() == total,
        }
    }

    pub fn compare(&self, k: usize, x: &Point, y: &Point) -> Result<OrderRelationResult> {
        self.rep(k).compare(&self.domain, x, y)
    }

    /// Columns span the direction space `D` of the domain.
    pub fn direction_basis(&self) -> RMatrix {
        let d = self.domain.direction_space();
        RMatrix::from_columns(self.domain.ambient_dim(), d.basis())
    }

    /// `{λ(f_I(x) − f_I(y)) : x ≿_0 y}` as a cone in `V_I`.
    ///
    /// Since `X − X` spans the direction space `D` around the origin, this is
    /// the image under `M_I` of `{u ∈ D : M_0 u ∈ C_0}`.
    pub fn induced_social_cone(&self) -> Result<InducedCone> {
        let b = self.direction_basis();
        let m0 = self.social.map.matrix.mul(&b);
        let mi = self.joint_map().matrix.mul(&b);
        let pre = self.social.target.pieces().pullback(&m0);
        let total = mi.rows();
        if pre.is_closed_form() {
            let mut gens: Vec<RVector> = Vec::new();
            for p in &pre.pieces {
                for g in h_to_v(p.dim, &p.nonstrict, &p.equalities).generators() {
                    let y = primitive(&mi.mul_vec(&g));
                    if !is_zero(&y) && !gens.contains(&y) {
                        gens.push(y);
                    }
                }
            }
            gens.sort();
            let cone = ConeDesc::PolyhedralV {
                dim: total,
                generators: gens,
            };
            let union = cone.to_union()?;
            return Ok(InducedCone { cone, union });
        }
        let union = pre.image(&mi);
        Ok(InducedCone {
            cone: ConeDesc::Pieces(union.clone()),
            union,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Relation;
    use crate::rational::{q, qf};

    fn v(xs: &[i64]) -> RVector {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn segment() -> Domain {
        Domain::Polytope {
            dim: 1,
            vertices: vec![v(&[0]), v(&[1])],
        }
    }

    fn line_rep(a: i64, target: Povs) -> Representation {
        Representation::new(target, AffineMap::linear(RMatrix::from_ints(&[&[a]]))).unwrap()
    }

    fn example1() -> (Domain, Representation) {
        let cube: Vec<RVector> = (0..8)
            .map(|k| (0..3).map(|i| q(2 * ((k >> i) & 1))).collect())
            .collect();
        let dom = Domain::Polytope { dim: 3, vertices: cube };
        let m = RMatrix::from_rows(
            3,
            vec![
                vec![qf(2, 3), qf(1, 3), q(0)],
                vec![qf(1, 3), qf(2, 3), q(0)],
                v(&[0, 0, 1]),
            ],
        );
        let cone = ConeDesc::Lex(Box::new(ConeDesc::Orthant(2)), Box::new(ConeDesc::Orthant(1)));
        (
            dom,
            Representation::new(Povs::new(cone).unwrap(), AffineMap::linear(m)).unwrap(),
        )
    }

    fn example5() -> Profile {
        Profile::new(
            segment(),
            vec![line_rep(1, Povs::standard(1)), line_rep(-1, Povs::standard(1))],
            line_rep(1, Povs::trivial(1)),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_example1() {
        let (dom, rep) = example1();
        // vertex 1 is (2,0,0); its midpoint with vertex 0 is (1,0,0)
        let half = Point::mix(&qf(1, 2), &dom.vertex_point(1), &dom.vertex_point(0));
        assert_eq!(rep.evaluate(&dom, &half).unwrap(), vec![qf(2, 3), qf(1, 3), q(0)]);
        let bad = Point { weights: vec![q(1); 8] };
        assert!(rep.evaluate(&dom, &bad).is_err());
    }

    #[test]
    fn compare_example1() {
        let (dom, rep) = example1();
        let o = dom.vertex_point(0);
        let fame = Point::mix(&qf(1, 2), &dom.vertex_point(1), &o);
        let love = Point::mix(&qf(1, 2), &dom.vertex_point(2), &o);
        let two_fame = dom.vertex_point(1);
        assert_eq!(
            rep.compare(&dom, &fame, &love).unwrap().relation,
            Relation::Incomparable
        );
        assert_eq!(
            rep.compare(&dom, &two_fame, &love).unwrap().relation,
            Relation::StrictGreater
        );
        assert_eq!(rep.compare(&dom, &fame, &fame).unwrap().relation, Relation::Equivalent);
    }

    #[test]
    fn spans_and_dr() {
        let cst = Representation::new(
            Povs::standard(1),
            AffineMap::new(RMatrix::zeros(1, 1), v(&[4])).unwrap(),
        )
        .unwrap();
        assert_eq!(cst.diff_span(&segment()).dim(), 0);
        let p5 = example5();
        assert_eq!(p5.joint_diff_span(), Subspace::span(2, vec![v(&[1, -1])]));
        assert!(!p5.check_dr());
        assert_eq!(
            p5.check_weak_dr(),
            WeakDr {
                contains_positive_cone: false,
                contains_direct_sum: false
            }
        );
        let u =
            |a: &[i64]| Representation::new(Povs::standard(1), AffineMap::linear(RMatrix::from_ints(&[a]))).unwrap();
        let p = Profile::new(Domain::Simplex(3), vec![u(&[0, 1, 2]), u(&[0, 2, 1])], u(&[0, 3, 3])).unwrap();
        assert_eq!(p.joint_diff_span().dim(), 2);
        assert!(p.check_dr());
        let single = Profile::new(
            segment(),
            vec![line_rep(1, Povs::standard(1))],
            line_rep(1, Povs::standard(1)),
        )
        .unwrap();
        assert!(single.check_dr());
        let with_const = Profile::new(
            segment(),
            vec![line_rep(1, Povs::standard(1)), cst],
            line_rep(1, Povs::standard(1)),
        )
        .unwrap();
        assert!(!with_const.check_weak_dr().contains_direct_sum);
    }

    #[test]
    fn pervasive() {
        let f = line_rep(1, Povs::standard(1));
        assert!(f.is_pervasive(&segment()));
        assert_eq!(f.make_pervasive(&segment()).unwrap(), f);
        let cst = Representation::new(
            Povs::standard(1),
            AffineMap::new(RMatrix::zeros(1, 1), v(&[4])).unwrap(),
        )
        .unwrap();
        let c = cst.make_pervasive(&segment()).unwrap();
        assert_eq!(c.target.dim(), 0);
        let emb = Representation::new(Povs::standard(2), AffineMap::linear(RMatrix::from_ints(&[&[1], &[0]]))).unwrap();
        let e = emb.make_pervasive(&segment()).unwrap();
        assert_eq!(e.target.dim(), 1);
        assert!(e.target.contains(&v(&[1])) && !e.target.contains(&v(&[-1])));
        assert_eq!(e.map.matrix, RMatrix::from_ints(&[&[1]]));
    }

    #[test]
    fn induced_cone_examples() {
        let p5 = example5();
        let c0 = p5.induced_social_cone().unwrap();
        // social indifference only on x = y, so the cone is {0}
        assert!(c0.union.contains(&v(&[0, 0])));
        assert!(!c0.union.contains(&v(&[1, -1])) && !c0.union.contains(&v(&[-1, 1])));
        let single = Profile::new(
            segment(),
            vec![line_rep(1, Povs::standard(1))],
            line_rep(1, Povs::standard(1)),
        )
        .unwrap();
        let c = single.induced_social_cone().unwrap();
        assert_eq!(
            c.cone,
            ConeDesc::PolyhedralV {
                dim: 1,
                generators: vec![v(&[1])]
            }
        );
        let indiff = Profile::new(
            segment(),
            vec![line_rep(1, Povs::standard(1)), line_rep(-1, Povs::standard(1))],
            line_rep(0, Povs::standard(1)),
        )
        .unwrap();
        let c = indiff.induced_social_cone().unwrap();
        assert!(c.union.contains(&v(&[1, -1])) && c.union.contains(&v(&[-1, 1])));
    }

    #[test]
    fn induced_cone_with_lex_social() {
        let (dom, rep) = example1();
        let ind = Representation::new(Povs::standard(3), AffineMap::linear(RMatrix::identity(3))).unwrap();
        let p = Profile::new(dom, vec![ind], rep).unwrap();
        let c0 = p.induced_social_cone().unwrap();
        assert!(matches!(c0.cone, ConeDesc::Pieces(_)));
        for (d, expect) in [
            (v(&[0, 0, 1]), true),
            (v(&[0, 0, -1]), false),
            (v(&[1, 0, -5]), true),
            (v(&[1, -1, 0]), false),
            (v(&[2, -1, -9]), true),
        ] {
            assert_eq!(c0.union.contains(&d), expect, "{d:?}");
        }
    }
}
