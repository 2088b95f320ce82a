//! Finite unions of pieces describing convex cones.

use std::collections::HashSet;

use crate::cone::dd::{h_to_v, v_to_h, HForm};
use crate::cone::fm::project_piece;
use crate::cone::piece::Piece;
use crate::linalg::{neg, RMatrix, RVector, Subspace};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PieceUnion {
    pub dim: usize,
    pub pieces: Vec<Piece>,
}

impl PieceUnion {
    pub fn new(dim: usize, pieces: Vec<Piece>) -> Self {
        PieceUnion { dim, pieces }
    }

    pub fn single(p: Piece) -> Self {
        PieceUnion {
            dim: p.dim,
            pieces: vec![p],
        }
    }

    pub fn empty(dim: usize) -> Self {
        PieceUnion { dim, pieces: vec![] }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.pieces.iter().any(|p| p.contains(v))
    }

    pub fn position(&self, v: &[Rational]) -> Option<usize> {
        self.pieces.iter().position(|p| p.contains(v))
    }

    pub fn is_closed_form(&self) -> bool {
        self.pieces.iter().all(|p| p.is_closed())
    }

    pub fn negated(&self) -> PieceUnion {
        PieceUnion::new(self.dim, self.pieces.iter().map(|p| p.negated()).collect())
    }

    pub fn pullback(&self, m: &RMatrix) -> PieceUnion {
        PieceUnion::new(m.cols(), self.pieces.iter().map(|p| p.pullback(m)).collect()).pruned()
    }

    pub fn embed(&self, offset: usize, total: usize) -> PieceUnion {
        PieceUnion::new(total, self.pieces.iter().map(|p| p.embed(offset, total)).collect())
    }

    pub fn intersect(&self, other: &PieceUnion) -> PieceUnion {
        let mut out = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                out.push(p.and(q));
            }
        }
        PieceUnion::new(self.dim, out).pruned()
    }

    pub fn with_equalities(&self, eqs: &[RVector]) -> PieceUnion {
        PieceUnion::new(self.dim, self.pieces.iter().map(|p| p.with_equalities(eqs)).collect()).pruned()
    }

    pub fn union(&self, other: &PieceUnion) -> PieceUnion {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        PieceUnion::new(self.dim, pieces).pruned()
    }

    /// Normalizes rows, drops empty and duplicate pieces.
    pub fn pruned(&self) -> PieceUnion {
        let mut out: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            let Some(p) = p.normalized() else { continue };
            if out.contains(&p) || !p.is_feasible() {
                continue;
            }
            out.push(p);
        }
        PieceUnion::new(self.dim, out)
    }

    /// Also removes pieces contained in another piece, and redundant rows.
    pub fn simplified(&self) -> PieceUnion {
        let base = self.pruned();
        let pieces: Vec<Piece> = base
            .pieces
            .iter()
            .map(|p| p.without_redundancy().normalized().expect("feasible piece"))
            .collect();
        PieceUnion::new(self.dim, pieces).without_subsumed()
    }

    /// Drops pieces contained in another piece.
    fn without_subsumed(self) -> PieceUnion {
        let pieces = self.pieces;
        let mut keep = vec![true; pieces.len()];
        for i in 0..pieces.len() {
            for j in 0..pieces.len() {
                if i != j && keep[j] && pieces[i].is_subset_of(&pieces[j]) {
                    // Among mutually contained pieces keep the earliest one.
                    if !(j > i && pieces[j].is_subset_of(&pieces[i])) {
                        keep[i] = false;
                        break;
                    }
                }
            }
        }
        PieceUnion::new(
            self.dim,
            pieces
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(p, _)| p)
                .collect(),
        )
    }

    /// If the union is a single closed piece, its inequality form.
    pub fn as_single_closed(&self) -> Option<HForm> {
        match self.pieces.as_slice() {
            [p] if p.is_closed() => Some(HForm {
                dim: self.dim,
                ineq: p.nonstrict.clone(),
                eq: p.equalities.clone(),
            }),
            _ => None,
        }
    }

    /// Generators of the closure. Every piece is assumed nonempty.
    pub fn closure_generators(&self) -> Vec<RVector> {
        let mut g: Vec<RVector> = Vec::new();
        for p in &self.pieces {
            let c = p.closure();
            for r in h_to_v(self.dim, &c.nonstrict, &c.equalities).generators() {
                if !g.contains(&r) {
                    g.push(r);
                }
            }
        }
        g
    }

    /// Closure in inequality form.
    pub fn closure_hform(&self) -> HForm {
        if let Some(h) = self.as_single_closed() {
            if let [p] = self.pieces.as_slice() {
                if let Some(pn) = p.without_redundancy().normalized() {
                    return HForm {
                        dim: self.dim,
                        ineq: pn.nonstrict,
                        eq: pn.equalities,
                    };
                }
            }
            return h;
        }
        v_to_h(self.dim, &self.closure_generators())
    }

    /// True when the union equals its closure. Valid for convex unions.
    pub fn is_closed_set(&self) -> bool {
        if self.is_closed_form() {
            return true;
        }
        self.closure_generators().iter().all(|g| self.contains(g))
    }

    /// Complement as a union of pieces. The union must describe a convex cone.
    ///
    /// `ℝ^n ∖ U = (ℝ^n ∖ cl U) ∪ (cl U ∖ U)`, and for convex `U` the second part
    /// lies in the facets of `cl U`, where we recurse.
    pub fn complement(&self) -> PieceUnion {
        let base = self.pruned();
        let mut out = Vec::new();
        complement_within(&base, &[], &mut HashSet::new(), &mut out);
        PieceUnion::new(self.dim, out).pruned()
    }

    /// Lineality space `U ∩ −U` of a convex cone given by pieces.
    pub fn lineality(&self) -> Subspace {
        let mut current = Subspace::full(self.dim);
        let mut u = self.pruned();
        loop {
            if u.pieces.is_empty() {
                return Subspace::zero(self.dim);
            }
            // Redundant rows do not change the kernel.
            let h = u
                .as_single_closed()
                .unwrap_or_else(|| v_to_h(self.dim, &u.closure_generators()));
            let mut rows = h.ineq;
            rows.extend(h.eq);
            let lin = crate::linalg::kernel_basis(&RMatrix::from_rows(self.dim, rows));
            let next = lin.intersect(&current);
            if next.dim() == current.dim() {
                return current;
            }
            current = next;
            u = u.with_equalities(current.annihilator().basis());
        }
    }

    /// Image under a linear map.
    pub fn image(&self, m: &RMatrix) -> PieceUnion {
        let out_dim = m.rows();
        let pieces: Vec<Piece> = self
            .pruned()
            .pieces
            .iter()
            .filter_map(|p| project_piece(p, m))
            .collect();
        // Projections come back without redundant rows.
        PieceUnion::new(out_dim, pieces).pruned().without_subsumed()
    }

    /// Minkowski sum of two cones.
    pub fn sum(&self, other: &PieceUnion) -> PieceUnion {
        let n = self.dim;
        let a = self.pruned();
        let b = other.pruned();
        if a.is_closed_form() && b.is_closed_form() {
            let mut g = a.closure_generators();
            for r in b.closure_generators() {
                if !g.contains(&r) {
                    g.push(r);
                }
            }
            let h = v_to_h(n, &g);
            return PieceUnion::single(Piece::closed(n, h.ineq, h.eq));
        }
        // Variables (s, q) with p = s − q ∈ P and q ∈ Q; project onto s.
        let proj = RMatrix::hstack(n, &[&RMatrix::identity(n), &RMatrix::zeros(n, n)]);
        let lift = RMatrix::hstack(
            n,
            &[
                &RMatrix::identity(n),
                &RMatrix::identity(n).scaled(&crate::rational::q(-1)),
            ],
        );
        let tail = RMatrix::hstack(n, &[&RMatrix::zeros(n, n), &RMatrix::identity(n)]);
        let mut pieces = Vec::new();
        for p in &a.pieces {
            for q in &b.pieces {
                let lifted = p.pullback(&lift).and(&q.pullback(&tail));
                if let Some(img) = project_piece(&lifted, &proj) {
                    pieces.push(img);
                }
            }
        }
        PieceUnion::new(n, pieces).pruned().without_subsumed()
    }
}

/// `seen` holds the spans of faces already handled. A face reached a second
/// time along another chain of facets contributes nothing new.
fn complement_within(u: &PieceUnion, s_eqs: &[RVector], seen: &mut HashSet<Vec<RVector>>, out: &mut Vec<Piece>) {
    let dim = u.dim;
    let on_s = |strict: RVector| Piece {
        dim,
        nonstrict: vec![],
        strict: vec![strict],
        equalities: s_eqs.to_vec(),
    };
    if u.pieces.is_empty() {
        out.push(Piece::closed(dim, vec![], s_eqs.to_vec()));
        return;
    }
    if let Some(h) = u.as_single_closed() {
        for a in &h.ineq {
            push_feasible(out, on_s(neg(a)));
        }
        for e in &h.eq {
            push_feasible(out, on_s(e.clone()));
            push_feasible(out, on_s(neg(e)));
        }
        return;
    }
    let h = u.closure_hform();
    for a in &h.ineq {
        push_feasible(out, on_s(neg(a)));
    }
    for e in &h.eq {
        push_feasible(out, on_s(e.clone()));
        push_feasible(out, on_s(neg(e)));
    }
    if u.is_closed_set() {
        return;
    }
    let cl = Piece::closed(dim, h.ineq.clone(), h.eq.clone());
    for a in &h.ineq {
        let mut eqs = s_eqs.to_vec();
        eqs.push(a.clone());
        if !seen.insert(Subspace::span(dim, eqs.clone()).basis().to_vec()) {
            continue;
        }
        let face = u.with_equalities(&[a.clone()]);
        let mut sub = Vec::new();
        complement_within(&face, &eqs, seen, &mut sub);
        for p in sub {
            push_feasible(out, p.and(&cl));
        }
    }
}

fn push_feasible(out: &mut Vec<Piece>, p: Piece) {
    if let Some(p) = p.normalized() {
        if !out.contains(&p) && p.is_feasible() {
            out.push(p);
        }
    }
}
