//! Exact decision of the Pareto axioms P1–P4 with replayable witnesses.
//!
//! A violation is a pair `x, y` whose difference `x − y` satisfies a finite
//! conjunction of cone conditions on the agents' utility differences. All
//! conditions are cone invariant, so the search runs over directions `u` of
//! the domain and each condition becomes a union of pieces pulled back to `u`.

use rayon::prelude::*;

use crate::cone::{Piece, PieceUnion, Relation};
use crate::error::{Error, Result};
use crate::linalg::{neg, RMatrix, RVector};
use crate::profile::{Point, Profile, WeakDr};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    P1,
    P2,
    P3,
    P4,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::P1, Axiom::P2, Axiom::P3, Axiom::P4];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::P1 => "P1",
            Axiom::P2 => "P2",
            Axiom::P3 => "P3",
            Axiom::P4 => "P4",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == s)
    }

    /// Axioms up to and including this one.
    pub fn prefix(self) -> &'static [Axiom] {
        let k = Axiom::ALL.iter().position(|a| *a == self).unwrap();
        &Axiom::ALL[..=k]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomWitness {
    pub x: Point,
    pub y: Point,
    /// The individual `j` of P4 (1-based, as in the profile indexing).
    pub j: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<AxiomWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSummary {
    pub reports: Vec<AxiomReport>,
    pub dr: bool,
    pub weak_dr: WeakDr,
}

impl AxiomSummary {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(|r| r.holds)
    }

    pub fn first_failure(&self) -> Option<&AxiomReport> {
        self.reports.iter().find(|r| !r.holds)
    }
}

/// Checks `x, y` against the axiom directly. Returns the offending `j` for P4
/// (and `Some(None)` for the other axioms) when the pair is a violation.
pub fn violation(p: &Profile, axiom: Axiom, x: &Point, y: &Point) -> Result<Option<Option<usize>>> {
    let rel: Vec<Relation> = (0..=p.n())
        .map(|k| p.compare(k, x, y).map(|r| r.relation))
        .collect::<Result<_>>()?;
    Ok(violated(axiom, &rel))
}

/// Same test on relations already computed, society first.
fn violated(axiom: Axiom, rel: &[Relation]) -> Option<Option<usize>> {
    let social = rel[0];
    let ind = &rel[1..];
    let found = match axiom {
        Axiom::P1 => ind.iter().all(|r| *r == Relation::Equivalent) && social != Relation::Equivalent,
        Axiom::P2 => ind.iter().all(|r| r.weakly_greater()) && !social.weakly_greater(),
        Axiom::P3 => {
            ind.iter().all(|r| r.weakly_greater())
                && ind.iter().any(|r| *r == Relation::StrictGreater)
                && social != Relation::StrictGreater
        }
        Axiom::P4 => {
            let weakly_below = matches!(social, Relation::Equivalent | Relation::StrictLess);
            if weakly_below {
                for j in 0..ind.len() {
                    let others = ind.iter().enumerate().all(|(i, r)| i == j || r.weakly_greater());
                    if others && ind[j] == Relation::Incomparable {
                        return Some(Some(j + 1));
                    }
                }
            }
            false
        }
    };
    found.then_some(None)
}

/// Cone conditions on agents' utility differences, pulled back to the
/// direction coordinates of the domain.
struct Search<'a> {
    p: &'a Profile,
    basis: RMatrix,
    /// `M_k B` for agent `k` (society first).
    maps: Vec<RMatrix>,
}

impl<'a> Search<'a> {
    fn new(p: &'a Profile) -> Self {
        let basis = p.direction_basis();
        let maps = (0..=p.n()).map(|k| p.rep(k).map.matrix.mul(&basis)).collect();
        Search { p, basis, maps }
    }

    fn k(&self) -> usize {
        self.basis.cols()
    }

    fn in_cone(&self, a: usize) -> PieceUnion {
        self.p.rep(a).target.pieces().pullback(&self.maps[a])
    }

    fn not_in_cone(&self, a: usize) -> PieceUnion {
        self.p.rep(a).target.complement().pullback(&self.maps[a])
    }

    /// `d_a ∈ −C_a`.
    fn in_neg_cone(&self, a: usize) -> PieceUnion {
        self.p.rep(a).target.pieces().negated().pullback(&self.maps[a])
    }

    /// `d_a ∉ −C_a`.
    fn not_in_neg_cone(&self, a: usize) -> PieceUnion {
        self.p.rep(a).target.complement().negated().pullback(&self.maps[a])
    }

    fn zero(&self, a: usize) -> PieceUnion {
        PieceUnion::single(Piece::closed(self.k(), vec![], self.maps[a].row_vecs().to_vec())).pruned()
    }

    fn nonzero_atoms(&self, a: usize) -> Vec<Piece> {
        let mut out = Vec::new();
        for r in self.maps[a].row_vecs() {
            for s in [r.clone(), neg(r)] {
                out.push(Piece {
                    dim: self.k(),
                    nonstrict: vec![],
                    strict: vec![s],
                    equalities: vec![],
                });
            }
        }
        out
    }

    fn nonzero(&self, a: usize) -> PieceUnion {
        PieceUnion::new(self.k(), self.nonzero_atoms(a)).pruned()
    }

    fn conditions(&self, axiom: Axiom, j: usize) -> Vec<PieceUnion> {
        let n = self.p.n();
        let k = self.k();
        match axiom {
            Axiom::P1 => {
                let mut c: Vec<PieceUnion> = (1..=n).map(|i| self.zero(i)).collect();
                c.push(self.nonzero(0));
                c
            }
            Axiom::P2 => {
                let mut c: Vec<PieceUnion> = (1..=n).map(|i| self.in_cone(i)).collect();
                c.push(self.not_in_cone(0));
                c
            }
            Axiom::P3 => {
                let mut c: Vec<PieceUnion> = (1..=n).map(|i| self.in_cone(i)).collect();
                let atoms: Vec<Piece> = (1..=n).flat_map(|i| self.nonzero_atoms(i)).collect();
                c.push(PieceUnion::new(k, atoms).pruned());
                c.push(self.not_in_cone(0).union(&self.in_neg_cone(0)));
                c
            }
            Axiom::P4 => {
                let mut c: Vec<PieceUnion> = (1..=n).filter(|&i| i != j).map(|i| self.in_cone(i)).collect();
                c.push(self.not_in_cone(j));
                c.push(self.not_in_neg_cone(j));
                c.push(self.in_neg_cone(0));
                c
            }
        }
    }

    /// A direction satisfying every condition, if one exists.
    fn find(&self, conds: &mut [PieceUnion]) -> Option<RVector> {
        if conds.iter().any(|c| c.pieces.is_empty()) {
            return None;
        }
        conds.sort_by_key(|c| c.pieces.len());
        dfs(&Piece::full(self.k()), conds)
    }

    /// Points `x, y` of the domain with `x − y` a positive multiple of `B u`.
    fn realize(&self, u: &[Rational]) -> Result<(Point, Point)> {
        let d = self.basis.mul_vec(u);
        let id = RMatrix::identity(self.p.domain.ambient_dim());
        self.p
            .domain
            .realize(&id, &d)?
            .ok_or_else(|| Error::Internal("violating direction is not a difference of domain points".into()))
    }
}

fn dfs(acc: &Piece, rest: &[PieceUnion]) -> Option<RVector> {
    let Some((first, tail)) = rest.split_first() else {
        return acc.witness();
    };
    for p in &first.pieces {
        let next = acc.and(p);
        if next.is_feasible() {
            if let Some(w) = dfs(&next, tail) {
                return Some(w);
            }
        }
    }
    None
}

const VERTEX_SCAN_LIMIT: usize = 64;

fn vertex_scan(p: &Profile, axiom: Axiom) -> Result<Option<AxiomWitness>> {
    let m = p.domain.vertex_count();
    if m > VERTEX_SCAN_LIMIT {
        return Ok(None);
    }
    let images: Vec<Vec<RVector>> = (0..=p.n()).map(|k| p.rep(k).vertex_images(&p.domain)).collect();
    for a in 0..m {
        for b in a + 1..m {
            let rel: Vec<Relation> = (0..=p.n())
                .map(|k| p.rep(k).target.classify(&images[k][a], &images[k][b]).map(|r| r.relation))
                .collect::<Result<_>>()?;
            let back: Vec<Relation> = rel.iter().map(|r| r.mirror()).collect();
            for (x, y, rel) in [(a, b, &rel), (b, a, &back)] {
                if let Some(j) = violated(axiom, rel) {
                    let (x, y) = (p.domain.vertex_point(x), p.domain.vertex_point(y));
                    return Ok(Some(AxiomWitness { x, y, j }));
                }
            }
        }
    }
    Ok(None)
}

/// P1 violations stay violations when swapped; prefer the orientation in
/// which `x` is not socially below `y`.
fn orient(p: &Profile, axiom: Axiom, w: AxiomWitness) -> Result<AxiomWitness> {
    if axiom == Axiom::P1 && p.compare(0, &w.x, &w.y)?.relation == Relation::StrictLess {
        return Ok(AxiomWitness {
            x: w.y,
            y: w.x,
            j: None,
        });
    }
    Ok(w)
}

pub fn check_axiom(p: &Profile, axiom: Axiom) -> Result<AxiomReport> {
    let fail = |w: AxiomWitness| -> Result<AxiomReport> {
        let w = orient(p, axiom, w)?;
        let replay = violation(p, axiom, &w.x, &w.y)?;
        if replay.is_none() || (axiom == Axiom::P4 && replay != Some(w.j)) {
            return Err(Error::Internal(format!("{} witness does not replay", axiom.name())));
        }
        Ok(AxiomReport {
            axiom,
            holds: false,
            witness: Some(w),
        })
    };
    if let Some(w) = vertex_scan(p, axiom)? {
        return fail(w);
    }
    let s = Search::new(p);
    let js: Vec<usize> = if axiom == Axiom::P4 {
        (1..=p.n()).collect()
    } else {
        vec![0]
    };
    let found: Vec<Option<RVector>> = js.par_iter().map(|&j| s.find(&mut s.conditions(axiom, j))).collect();
    for (j, u) in js.iter().zip(found) {
        if let Some(u) = u {
            let (x, y) = s.realize(&u)?;
            let j = (axiom == Axiom::P4).then_some(*j);
            return fail(AxiomWitness { x, y, j });
        }
    }
    Ok(AxiomReport {
        axiom,
        holds: true,
        witness: None,
    })
}

pub fn check_p1(p: &Profile) -> Result<AxiomReport> {
    check_axiom(p, Axiom::P1)
}

pub fn check_p2(p: &Profile) -> Result<AxiomReport> {
    check_axiom(p, Axiom::P2)
}

pub fn check_p3(p: &Profile) -> Result<AxiomReport> {
    check_axiom(p, Axiom::P3)
}

pub fn check_p4(p: &Profile) -> Result<AxiomReport> {
    check_axiom(p, Axiom::P4)
}

/// P1–P4 together with DR and its two weakenings.
pub fn check_all(p: &Profile) -> Result<AxiomSummary> {
    let reports = Axiom::ALL
        .iter()
        .map(|&a| check_axiom(p, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomSummary {
        reports,
        dr: p.check_dr(),
        weak_dr: p.check_weak_dr(),
    })
}

/// The first failing axiom among those up to `level`.
pub fn check_up_to(p: &Profile, level: Axiom) -> Result<Option<AxiomReport>> {
    for &a in level.prefix() {
        let r = check_axiom(p, a)?;
        if !r.holds {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeDesc;
    use crate::linalg::AffineMap;
    use crate::povs::Povs;
    use crate::profile::{Domain, Representation};
    use crate::rational::{q, qf};

    fn v(xs: &[i64]) -> RVector {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn rep(target: Povs, rows: &[&[i64]]) -> Representation {
        Representation::new(target, AffineMap::linear(RMatrix::from_ints(rows))).unwrap()
    }

    fn segment() -> Domain {
        Domain::Polytope {
            dim: 1,
            vertices: vec![v(&[0]), v(&[1])],
        }
    }

    fn example5() -> Profile {
        Profile::new(
            segment(),
            vec![rep(Povs::standard(1), &[&[1]]), rep(Povs::standard(1), &[&[-1]])],
            rep(Povs::trivial(1), &[&[1]]),
        )
        .unwrap()
    }

    fn urn() -> Profile {
        let m = |vals: [Rational; 3]| {
            Representation::new(
                Povs::standard(1),
                AffineMap::linear(RMatrix::from_rows(3, vec![vals.to_vec()])),
            )
            .unwrap()
        };
        Profile::new(
            Domain::Cube(3),
            vec![m([q(0), qf(1, 2), qf(1, 2)]), m([qf(1, 2), q(0), qf(1, 2)])],
            m([q(0), q(0), q(1)]),
        )
        .unwrap()
    }

    fn utilities(social: &[i64]) -> Profile {
        Profile::new(
            Domain::Simplex(3),
            vec![
                rep(Povs::standard(1), &[&[0, 1, 2]]),
                rep(Povs::standard(1), &[&[0, 2, 1]]),
            ],
            rep(Povs::standard(1), &[social]),
        )
        .unwrap()
    }

    #[test]
    fn example5_satisfies_all() {
        let s = check_all(&example5()).unwrap();
        assert!(s.all_hold());
        assert!(!s.dr);
    }

    #[test]
    fn urn_fails_p1() {
        let r = check_p1(&urn()).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        // bit 2 is B, bits 0 and 1 are R and Y
        assert_eq!(w.x, Domain::Cube(3).vertex_point(4));
        assert_eq!(w.y, Domain::Cube(3).vertex_point(3));
    }

    #[test]
    fn weighted_sum_holds() {
        let p = utilities(&[0, 8, 7]);
        assert!(check_all(&p).unwrap().all_hold());
    }

    #[test]
    fn trivial_social_fails_p2() {
        let p = Profile::new(
            segment(),
            vec![rep(Povs::standard(1), &[&[1]])],
            rep(Povs::trivial(1), &[&[1]]),
        )
        .unwrap();
        assert!(check_p1(&p).unwrap().holds);
        let r = check_p2(&p).unwrap();
        assert!(!r.holds && r.witness.is_some());
    }

    #[test]
    fn zero_weight_fails_p3() {
        let p = utilities(&[0, 1, 2]);
        assert!(check_p2(&p).unwrap().holds);
        assert!(!check_p3(&p).unwrap().holds);
    }

    #[test]
    fn p4_collapsing_incomparability() {
        // individual 1 ranks (a, b) by the product order, individual 2 is
        // indifferent, society uses a + b: incomparability becomes comparability.
        let dom = Domain::Polytope {
            dim: 2,
            vertices: vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])],
        };
        let p = Profile::new(
            dom,
            vec![
                rep(Povs::standard(2), &[&[1, 0], &[0, 1]]),
                rep(Povs::standard(1), &[&[0, 0]]),
            ],
            rep(Povs::standard(1), &[&[1, 1]]),
        )
        .unwrap();
        assert!(check_p3(&p).unwrap().holds);
        let r = check_p4(&p).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().j, Some(1));
    }

    #[test]
    fn lex_social_search() {
        // product-order individuals, lexicographic society: P1–P3 hold,
        // and P4 fails because society ranks every incomparable pair.
        let dom = Domain::Polytope {
            dim: 2,
            vertices: vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])],
        };
        let p = Profile::new(
            dom,
            vec![rep(Povs::standard(2), &[&[1, 0], &[0, 1]])],
            rep(Povs::new(ConeDesc::pure_lex(2)).unwrap(), &[&[1, 0], &[0, 1]]),
        )
        .unwrap();
        let s = check_all(&p).unwrap();
        assert!(s.reports[0].holds && s.reports[1].holds && s.reports[2].holds);
        assert!(!s.reports[3].holds);
    }
}
