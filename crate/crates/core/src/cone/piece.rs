use num_traits::{Signed, Zero};

use crate::linalg::{dot, neg, unit, zeros, RMatrix, RVector};
use crate::lp::homogeneous_witness;
use crate::rational::{canonical_direction, primitive, Rational};

/// A polyhedral cone with strict rows: `{v : N v ≥ 0, S v > 0, E v = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub dim: usize,
    pub nonstrict: Vec<RVector>,
    pub strict: Vec<RVector>,
    pub equalities: Vec<RVector>,
}

impl Piece {
    pub fn full(dim: usize) -> Self {
        Piece {
            dim,
            nonstrict: vec![],
            strict: vec![],
            equalities: vec![],
        }
    }

    pub fn closed(dim: usize, nonstrict: Vec<RVector>, equalities: Vec<RVector>) -> Self {
        Piece {
            dim,
            nonstrict,
            strict: vec![],
            equalities,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Piece {
            dim,
            nonstrict: vec![],
            strict: vec![],
            equalities: (0..dim).map(|i| unit(dim, i)).collect(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.strict.is_empty()
    }

    pub fn row_count(&self) -> usize {
        self.nonstrict.len() + self.strict.len() + self.equalities.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.equalities.iter().all(|a| dot(a, v).is_zero())
            && self.nonstrict.iter().all(|a| !dot(a, v).is_negative())
            && self.strict.iter().all(|a| dot(a, v).is_positive())
    }

    pub fn witness(&self) -> Option<RVector> {
        homogeneous_witness(self.dim, &self.equalities, &self.nonstrict, &self.strict)
    }

    pub fn is_feasible(&self) -> bool {
        self.witness().is_some()
    }

    pub fn and(&self, other: &Piece) -> Piece {
        assert_eq!(self.dim, other.dim);
        let mut p = self.clone();
        p.nonstrict.extend(other.nonstrict.iter().cloned());
        p.strict.extend(other.strict.iter().cloned());
        p.equalities.extend(other.equalities.iter().cloned());
        p
    }

    pub fn with_equalities(&self, eqs: &[RVector]) -> Piece {
        let mut p = self.clone();
        p.equalities.extend(eqs.iter().cloned());
        p
    }

    pub fn negated(&self) -> Piece {
        Piece {
            dim: self.dim,
            nonstrict: self.nonstrict.iter().map(|a| neg(a)).collect(),
            strict: self.strict.iter().map(|a| neg(a)).collect(),
            equalities: self.equalities.clone(),
        }
    }

    /// `{u : M u ∈ self}` for `M : ℝ^k → ℝ^dim`.
    pub fn pullback(&self, m: &RMatrix) -> Piece {
        assert_eq!(m.rows(), self.dim);
        let f = |rows: &[RVector]| rows.iter().map(|a| m.left_mul(a)).collect();
        Piece {
            dim: m.cols(),
            nonstrict: f(&self.nonstrict),
            strict: f(&self.strict),
            equalities: f(&self.equalities),
        }
    }

    /// Places the piece on coordinates `offset..offset+dim` of `ℝ^total`.
    pub fn embed(&self, offset: usize, total: usize) -> Piece {
        let f = |rows: &[RVector]| {
            rows.iter()
                .map(|a| {
                    let mut r = zeros(total);
                    r[offset..offset + self.dim].clone_from_slice(a);
                    r
                })
                .collect()
        };
        Piece {
            dim: total,
            nonstrict: f(&self.nonstrict),
            strict: f(&self.strict),
            equalities: f(&self.equalities),
        }
    }

    /// Pieces whose union is the complement of this piece.
    pub fn negation_atoms(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        let atom = |strict: Option<RVector>, nonstrict: Option<RVector>| Piece {
            dim: self.dim,
            nonstrict: nonstrict.into_iter().collect(),
            strict: strict.into_iter().collect(),
            equalities: vec![],
        };
        for a in &self.equalities {
            out.push(atom(Some(a.clone()), None));
            out.push(atom(Some(neg(a)), None));
        }
        for a in &self.nonstrict {
            out.push(atom(Some(neg(a)), None));
        }
        for a in &self.strict {
            out.push(atom(None, Some(neg(a))));
        }
        out
    }

    /// Canonical rows: primitive, deduplicated, trivially true rows dropped and
    /// nonstrict rows subsumed by an identical strict row removed. Returns
    /// `None` when a row reads `0 > 0`.
    pub fn normalized(&self) -> Option<Piece> {
        let mut eqs: Vec<RVector> = Vec::new();
        for a in &self.equalities {
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let c = canonical_direction(a);
            if !eqs.contains(&c) {
                eqs.push(c);
            }
        }
        let mut strict: Vec<RVector> = Vec::new();
        for a in &self.strict {
            if a.iter().all(|x| x.is_zero()) {
                return None;
            }
            let c = primitive(a);
            if !strict.contains(&c) {
                strict.push(c);
            }
        }
        let mut nonstrict: Vec<RVector> = Vec::new();
        for a in &self.nonstrict {
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let c = primitive(a);
            if !nonstrict.contains(&c) && !strict.contains(&c) {
                nonstrict.push(c);
            }
        }
        Some(Piece {
            dim: self.dim,
            nonstrict,
            strict,
            equalities: eqs,
        })
    }

    /// Removes inequality rows implied by the remaining rows. Empty pieces are
    /// returned unchanged.
    pub fn without_redundancy(&self) -> Piece {
        if !self.is_feasible() {
            return self.clone();
        }
        let mut p = self.clone();
        let mut i = 0;
        while i < p.strict.len() {
            let row = p.strict.remove(i);
            let mut test = p.clone();
            test.nonstrict.push(neg(&row));
            if test.is_feasible() {
                p.strict.insert(i, row);
                i += 1;
            }
        }
        let mut i = 0;
        while i < p.nonstrict.len() {
            let row = p.nonstrict.remove(i);
            let mut test = p.clone();
            test.strict.push(neg(&row));
            if test.is_feasible() {
                p.nonstrict.insert(i, row);
                i += 1;
            }
        }
        p
    }

    /// True when every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Piece) -> bool {
        other.negation_atoms().iter().all(|a| !self.and(a).is_feasible())
    }

    pub fn closure(&self) -> Piece {
        let mut nonstrict = self.nonstrict.clone();
        nonstrict.extend(self.strict.iter().cloned());
        Piece::closed(self.dim, nonstrict, self.equalities.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn membership_and_atoms() {
        let p = Piece {
            dim: 2,
            nonstrict: vec![vec![q(0), q(1)]],
            strict: vec![vec![q(1), q(0)]],
            equalities: vec![],
        };
        assert!(p.contains(&[q(1), q(0)]));
        assert!(!p.contains(&[q(0), q(1)]));
        for v in [[q(0), q(1)], [q(-1), q(3)], [q(2), q(-1)]] {
            let in_atoms = p.negation_atoms().iter().any(|a| a.contains(&v));
            assert_eq!(in_atoms, !p.contains(&v));
        }
    }

    #[test]
    fn redundancy() {
        let p = Piece::closed(2, vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)]], vec![]);
        let r = p.without_redundancy();
        assert_eq!(r.nonstrict.len(), 2);
    }
}
