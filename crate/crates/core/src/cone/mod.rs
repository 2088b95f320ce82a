//! Convex cone descriptions and the order they induce: `v ≿ w ⟺ v − w ∈ C`.

pub mod dd;
pub mod fm;
pub mod piece;
pub mod union;

use num_traits::{Signed, Zero};

pub use dd::{h_to_v, v_to_h, HForm, VForm};
pub use piece::Piece;
pub use union::PieceUnion;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, is_zero, neg, sub, unit, zeros, RMatrix, RVector, Subspace};
use crate::lp::{lp_decide, LinearConstraintSystem, LpOutcome};
use crate::rational::Rational;

pub const MAX_LEX_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConeDesc {
    Orthant(usize),
    /// The zero cone: distinct points are incomparable.
    Trivial(usize),
    /// `{v : A v ≥ 0}`.
    PolyhedralH {
        dim: usize,
        rows: Vec<RVector>,
    },
    /// Nonnegative combinations of the generators.
    PolyhedralV {
        dim: usize,
        generators: Vec<RVector>,
    },
    Product(Vec<ConeDesc>),
    /// `{(w1, w2) : w1 ∈ head, w1 ∉ −head} ∪ ({0} × tail)`.
    Lex(Box<ConeDesc>, Box<ConeDesc>),
    /// A convex cone given directly as a union of pieces.
    Pieces(PieceUnion),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Equivalent,
    StrictGreater,
    StrictLess,
    Incomparable,
}

impl Relation {
    pub fn mirror(self) -> Relation {
        match self {
            Relation::StrictGreater => Relation::StrictLess,
            Relation::StrictLess => Relation::StrictGreater,
            r => r,
        }
    }

    pub fn from_memberships(forward: bool, backward: bool) -> Relation {
        match (forward, backward) {
            (true, true) => Relation::Equivalent,
            (true, false) => Relation::StrictGreater,
            (false, true) => Relation::StrictLess,
            (false, false) => Relation::Incomparable,
        }
    }

    /// `x ≿ y`.
    pub fn weakly_greater(self) -> bool {
        matches!(self, Relation::Equivalent | Relation::StrictGreater)
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::Equivalent => "Equivalent",
            Relation::StrictGreater => "StrictGreater",
            Relation::StrictLess => "StrictLess",
            Relation::Incomparable => "Incomparable",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        [
            Relation::Equivalent,
            Relation::StrictGreater,
            Relation::StrictLess,
            Relation::Incomparable,
        ]
        .into_iter()
        .find(|r| r.name() == s)
    }
}

/// Evidence for a membership answer; see [`verify_membership`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberCert {
    /// Values of the defining rows at `v` (orthant coordinates, `A v`, or `v` itself for the zero cone).
    RowValues(RVector),
    /// `v = Σ w_j g_j` with `w ≥ 0`.
    Weights(RVector),
    /// A vector `a` with `a·g ≥ 0` for every generator and `a·v < 0`.
    Separator(RVector),
    Product(Vec<Membership>),
    Lex {
        head: Box<Membership>,
        negated_head: Box<Membership>,
        tail: Option<Box<Membership>>,
    },
    /// Index of a piece containing `v`, or `None` when no piece does.
    Piece(Option<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub cert: MemberCert,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRelationResult {
    pub relation: Relation,
    /// `v − w ∈ C`.
    pub forward: Membership,
    /// `w − v ∈ C`.
    pub backward: Membership,
}

impl ConeDesc {
    pub fn dim(&self) -> usize {
        match self {
            ConeDesc::Orthant(n) | ConeDesc::Trivial(n) => *n,
            ConeDesc::PolyhedralH { dim, .. } | ConeDesc::PolyhedralV { dim, .. } => *dim,
            ConeDesc::Product(cs) => cs.iter().map(|c| c.dim()).sum(),
            ConeDesc::Lex(h, t) => h.dim() + t.dim(),
            ConeDesc::Pieces(u) => u.dim,
        }
    }

    /// Checks that declared dimensions agree with row and generator lengths.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConeDesc::Orthant(_) | ConeDesc::Trivial(_) => Ok(()),
            ConeDesc::PolyhedralH { dim, rows } => rows
                .iter()
                .try_for_each(|r| check_dim("polyhedral_h row", *dim, r.len())),
            ConeDesc::PolyhedralV { dim, generators } => generators
                .iter()
                .try_for_each(|g| check_dim("polyhedral_v generator", *dim, g.len())),
            ConeDesc::Product(cs) => cs.iter().try_for_each(|c| c.validate()),
            ConeDesc::Lex(h, t) => {
                h.validate()?;
                t.validate()?;
                if self.lex_depth() > MAX_LEX_DEPTH {
                    return Err(Error::UnsupportedCone(format!(
                        "lexicographic nesting deeper than {MAX_LEX_DEPTH}"
                    )));
                }
                Ok(())
            }
            ConeDesc::Pieces(u) => u.pieces.iter().try_for_each(|p| {
                check_dim("piece", u.dim, p.dim)?;
                for r in p.nonstrict.iter().chain(&p.strict).chain(&p.equalities) {
                    check_dim("piece row", u.dim, r.len())?;
                }
                Ok(())
            }),
        }
    }

    pub fn lex_depth(&self) -> usize {
        match self {
            ConeDesc::Lex(h, t) => 1 + h.lex_depth().max(t.lex_depth()),
            ConeDesc::Product(cs) => cs.iter().map(|c| c.lex_depth()).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Right-nested lexicographic order on `ℝ^n` built from 1-D orthants.
    pub fn pure_lex(n: usize) -> ConeDesc {
        match n {
            0 => ConeDesc::Orthant(0),
            1 => ConeDesc::Orthant(1),
            _ => ConeDesc::Lex(Box::new(ConeDesc::Orthant(1)), Box::new(ConeDesc::pure_lex(n - 1))),
        }
    }

    pub fn member(&self, v: &[Rational]) -> Result<Membership> {
        check_dim("cone membership", self.dim(), v.len())?;
        Ok(self.member_unchecked(v))
    }

    fn member_unchecked(&self, v: &[Rational]) -> Membership {
        match self {
            ConeDesc::Orthant(_) => Membership {
                member: v.iter().all(|x| !x.is_negative()),
                cert: MemberCert::RowValues(v.to_vec()),
            },
            ConeDesc::Trivial(_) => Membership {
                member: is_zero(v),
                cert: MemberCert::RowValues(v.to_vec()),
            },
            ConeDesc::PolyhedralH { rows, .. } => {
                let vals: RVector = rows.iter().map(|a| dot(a, v)).collect();
                Membership {
                    member: vals.iter().all(|x| !x.is_negative()),
                    cert: MemberCert::RowValues(vals),
                }
            }
            ConeDesc::PolyhedralV { dim, generators } => generator_membership(*dim, generators, v),
            ConeDesc::Product(cs) => {
                let mut off = 0;
                let parts: Vec<Membership> = cs
                    .iter()
                    .map(|c| {
                        let d = c.dim();
                        let m = c.member_unchecked(&v[off..off + d]);
                        off += d;
                        m
                    })
                    .collect();
                Membership {
                    member: parts.iter().all(|m| m.member),
                    cert: MemberCert::Product(parts),
                }
            }
            ConeDesc::Lex(h, t) => {
                let dh = h.dim();
                let (w1, w2) = v.split_at(dh);
                let head = h.member_unchecked(w1);
                let negated_head = h.member_unchecked(&neg(w1));
                let tail = if is_zero(w1) {
                    Some(Box::new(t.member_unchecked(w2)))
                } else {
                    None
                };
                let member = (head.member && !negated_head.member) || tail.as_ref().is_some_and(|m| m.member);
                Membership {
                    member,
                    cert: MemberCert::Lex {
                        head: Box::new(head),
                        negated_head: Box::new(negated_head),
                        tail,
                    },
                }
            }
            ConeDesc::Pieces(u) => {
                let pos = u.position(v);
                Membership {
                    member: pos.is_some(),
                    cert: MemberCert::Piece(pos),
                }
            }
        }
    }

    pub fn classify(&self, v: &[Rational], w: &[Rational]) -> Result<OrderRelationResult> {
        check_dim("classify", self.dim(), v.len())?;
        check_dim("classify", self.dim(), w.len())?;
        let d = sub(v, w);
        let forward = self.member_unchecked(&d);
        let backward = self.member_unchecked(&neg(&d));
        Ok(OrderRelationResult {
            relation: Relation::from_memberships(forward.member, backward.member),
            forward,
            backward,
        })
    }

    /// Pieces whose union is the cone.
    pub fn decompose(&self) -> Result<Vec<Piece>> {
        Ok(self.to_union()?.pieces)
    }

    pub fn to_union(&self) -> Result<PieceUnion> {
        self.validate()?;
        Ok(self.union_unchecked())
    }

    fn union_unchecked(&self) -> PieceUnion {
        let n = self.dim();
        match self {
            ConeDesc::Orthant(_) => PieceUnion::single(Piece::closed(n, (0..n).map(|i| unit(n, i)).collect(), vec![])),
            ConeDesc::Trivial(_) => PieceUnion::single(Piece::zero(n)),
            ConeDesc::PolyhedralH { rows, .. } => PieceUnion::single(Piece::closed(n, rows.clone(), vec![])),
            ConeDesc::PolyhedralV { generators, .. } => {
                let h = v_to_h(n, generators);
                PieceUnion::single(Piece::closed(n, h.ineq, h.eq))
            }
            ConeDesc::Product(cs) => {
                let mut acc = vec![Piece::full(n)];
                let mut off = 0;
                for c in cs {
                    let d = c.dim();
                    let u = c.union_unchecked();
                    let mut next = Vec::new();
                    for a in &acc {
                        for p in &u.pieces {
                            next.push(a.and(&p.embed(off, n)));
                        }
                    }
                    acc = next;
                    off += d;
                }
                PieceUnion::new(n, acc).pruned()
            }
            ConeDesc::Lex(h, t) => {
                let dh = h.dim();
                let head = h.union_unchecked().pruned();
                let not_neg = head.negated().complement();
                let strict = head.intersect(&not_neg).embed(0, n);
                let zero_head: Vec<RVector> = (0..dh).map(|i| unit(n, i)).collect();
                let tail = t.union_unchecked().embed(dh, n).with_equalities(&zero_head);
                strict.union(&tail)
            }
            ConeDesc::Pieces(u) => u.pruned(),
        }
    }

    /// Generator form, available for polyhedral cones and products of them.
    pub fn generators(&self) -> Result<Vec<RVector>> {
        let n = self.dim();
        match self {
            ConeDesc::Orthant(_) => Ok((0..n).map(|i| unit(n, i)).collect()),
            ConeDesc::Trivial(_) => Ok(vec![]),
            ConeDesc::PolyhedralH { rows, .. } => Ok(h_to_v(n, rows, &[]).generators()),
            ConeDesc::PolyhedralV { generators, .. } => Ok(generators.clone()),
            ConeDesc::Product(cs) => {
                let mut out = Vec::new();
                let mut off = 0;
                for c in cs {
                    for g in c.generators()? {
                        let mut e = zeros(n);
                        e[off..off + c.dim()].clone_from_slice(&g);
                        out.push(e);
                    }
                    off += c.dim();
                }
                Ok(out)
            }
            ConeDesc::Lex(..) => Err(Error::UnsupportedCone(
                "lexicographic cones are not finitely generated".into(),
            )),
            ConeDesc::Pieces(u) => {
                if u.is_closed_set() {
                    Ok(u.closure_generators())
                } else {
                    Err(Error::UnsupportedCone("cone is not closed".into()))
                }
            }
        }
    }

    /// `C ∩ −C`. Lexicographic inputs are rejected: their lineality is `{0}`
    /// whenever the tail is pointed, by construction.
    pub fn lineality(&self) -> Result<Subspace> {
        let n = self.dim();
        match self {
            ConeDesc::Orthant(_) | ConeDesc::Trivial(_) => Ok(Subspace::zero(n)),
            ConeDesc::PolyhedralH { rows, .. } => Ok(crate::linalg::kernel_basis(&RMatrix::from_rows(n, rows.clone()))),
            ConeDesc::PolyhedralV { generators, .. } => Ok(generator_lineality(n, generators)),
            ConeDesc::Product(cs) => {
                let mut basis = Vec::new();
                let mut off = 0;
                for c in cs {
                    for b in c.lineality()?.basis() {
                        let mut e = zeros(n);
                        e[off..off + c.dim()].clone_from_slice(b);
                        basis.push(e);
                    }
                    off += c.dim();
                }
                Ok(Subspace::span(n, basis))
            }
            ConeDesc::Lex(..) => Err(Error::UnsupportedCone(
                "lineality of a lexicographic cone is not computed".into(),
            )),
            ConeDesc::Pieces(u) => Ok(u.lineality()),
        }
    }

    /// True when `C ∩ −C = {0}`, so the induced preorder is a partial order.
    pub fn is_pointed(&self) -> Result<bool> {
        match self {
            ConeDesc::Lex(_, t) => t.is_pointed(),
            ConeDesc::Product(cs) => {
                for c in cs {
                    if !c.is_pointed()? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(self.lineality()?.dim() == 0),
        }
    }

    pub fn negated_union(&self) -> Result<PieceUnion> {
        Ok(self.to_union()?.negated())
    }
}

fn generator_membership(dim: usize, gens: &[RVector], v: &[Rational]) -> Membership {
    let k = gens.len();
    let mut sys = LinearConstraintSystem::new(k);
    for i in 0..dim {
        sys.push_eq(gens.iter().map(|g| g[i].clone()).collect(), v[i].clone());
    }
    for j in 0..k {
        sys.push_geq(unit(k, j), Rational::zero());
    }
    match lp_decide(&sys).expect("consistent dimensions") {
        LpOutcome::Feasible(w) => Membership {
            member: true,
            cert: MemberCert::Weights(w),
        },
        LpOutcome::Infeasible(y) => {
            // y·(G w − v) rows: Σ_i y_i g_j[i] + y_{dim+j} = 0 and Σ_i y_i v_i > 0,
            // so a = y[..dim] satisfies a·g_j = −y_{dim+j} ≤ 0 and a·v > 0.
            let a: RVector = y[..dim].iter().map(|x| -x).collect();
            Membership {
                member: false,
                cert: MemberCert::Separator(a),
            }
        }
    }
}

/// Span of the generators `g` with `−g` in the generated cone.
pub fn generator_lineality(dim: usize, gens: &[RVector]) -> Subspace {
    let in_lin: Vec<RVector> = gens
        .iter()
        .filter(|g| !is_zero(g) && generator_membership(dim, gens, &neg(g)).member)
        .cloned()
        .collect();
    Subspace::span(dim, in_lin)
}

/// Replays a membership certificate against the cone and vector.
pub fn verify_membership(c: &ConeDesc, v: &[Rational], m: &Membership) -> bool {
    if v.len() != c.dim() {
        return false;
    }
    match (c, &m.cert) {
        (ConeDesc::Orthant(_), MemberCert::RowValues(vals)) => {
            vals.as_slice() == v && m.member == vals.iter().all(|x| !x.is_negative())
        }
        (ConeDesc::Trivial(_), MemberCert::RowValues(vals)) => vals.as_slice() == v && m.member == is_zero(vals),
        (ConeDesc::PolyhedralH { rows, .. }, MemberCert::RowValues(vals)) => {
            vals.len() == rows.len()
                && rows.iter().zip(vals).all(|(a, x)| dot(a, v) == *x)
                && m.member == vals.iter().all(|x| !x.is_negative())
        }
        (ConeDesc::PolyhedralV { dim, generators }, MemberCert::Weights(w)) => {
            m.member
                && w.len() == generators.len()
                && w.iter().all(|x| !x.is_negative())
                && crate::linalg::combination(*dim, w, generators).as_slice() == v
        }
        (ConeDesc::PolyhedralV { generators, .. }, MemberCert::Separator(a)) => {
            !m.member && generators.iter().all(|g| !dot(a, g).is_negative()) && dot(a, v).is_negative()
        }
        (ConeDesc::Product(cs), MemberCert::Product(parts)) => {
            if parts.len() != cs.len() {
                return false;
            }
            let mut off = 0;
            for (c, p) in cs.iter().zip(parts) {
                let d = c.dim();
                if !verify_membership(c, &v[off..off + d], p) {
                    return false;
                }
                off += d;
            }
            m.member == parts.iter().all(|p| p.member)
        }
        (
            ConeDesc::Lex(h, t),
            MemberCert::Lex {
                head,
                negated_head,
                tail,
            },
        ) => {
            let (w1, w2) = v.split_at(h.dim());
            if !verify_membership(h, w1, head) || !verify_membership(h, &neg(w1), negated_head) {
                return false;
            }
            let tail_ok = match tail {
                Some(tm) => is_zero(w1) && verify_membership(t, w2, tm),
                None => !is_zero(w1),
            };
            tail_ok && m.member == ((head.member && !negated_head.member) || tail.as_ref().is_some_and(|x| x.member))
        }
        (ConeDesc::Pieces(u), MemberCert::Piece(pos)) => match pos {
            Some(i) => m.member && u.pieces.get(*i).is_some_and(|p| p.contains(v)),
            None => !m.member && !u.contains(v),
        },
        _ => false,
    }
}

/// `C1 + C2` as a generator list.
pub fn cone_sum(c1: &ConeDesc, c2: &ConeDesc) -> Result<ConeDesc> {
    check_dim("cone sum", c1.dim(), c2.dim())?;
    let mut g = c1.generators()?;
    for x in c2.generators()? {
        if !g.contains(&x) {
            g.push(x);
        }
    }
    Ok(ConeDesc::PolyhedralV {
        dim: c1.dim(),
        generators: g,
    })
}

/// `M(C)` as a generator list.
pub fn cone_image(c: &ConeDesc, m: &RMatrix) -> Result<ConeDesc> {
    check_dim("cone image", m.cols(), c.dim())?;
    let mut g: Vec<RVector> = Vec::new();
    for x in c.generators()? {
        let y = m.mul_vec(&x);
        if !is_zero(&y) && !g.contains(&y) {
            g.push(y);
        }
    }
    Ok(ConeDesc::PolyhedralV {
        dim: m.rows(),
        generators: g,
    })
}

/// Inequality rows (equalities as sign pairs) for a generated cone.
pub fn generators_to_rows(dim: usize, gens: &[RVector]) -> RMatrix {
    v_to_h(dim, gens).matrix()
}

/// Generators of `{v : A v ≥ 0}`.
pub fn rows_to_generators(a: &RMatrix) -> Vec<RVector> {
    h_to_v(a.cols(), a.row_vecs(), &[]).generators()
}
