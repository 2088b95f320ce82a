//! Images of pieces under linear maps by exact Fourier–Motzkin elimination.
//! Strictness is tracked through combinations, so strict rows project exactly.

use num_traits::{Signed, Zero};

use crate::cone::piece::Piece;
use crate::linalg::{neg, zeros, RMatrix, RVector};
use crate::rational::{canonical_direction, primitive, Rational};

/// A row `a · w ≥ 0` over `w = (x, y, ε)`. Strict input rows carry `−ε`, so
/// strictness survives as a negative last coordinate.
#[derive(Clone)]
struct Ineq {
    a: RVector,
    hist: Vec<u64>,
}

fn singleton(i: usize, words: usize) -> Vec<u64> {
    let mut h = vec![0u64; words];
    h[i / 64] |= 1 << (i % 64);
    h
}

fn count(h: &[u64]) -> usize {
    h.iter().map(|w| w.count_ones() as usize).sum()
}

/// `M(P)` for a piece `P ⊆ ℝ^n` and `M : ℝ^n → ℝ^m`; `None` if `P` is empty.
pub fn project_piece(p: &Piece, m: &RMatrix) -> Option<Piece> {
    let n = p.dim;
    let out = m.rows();
    assert_eq!(m.cols(), n);
    if !p.is_feasible() {
        return None;
    }
    let width = n + out + 1;
    let eps = width - 1;
    let rows_in = p.nonstrict.len() + p.strict.len();
    let words = rows_in.div_ceil(64).max(1);
    let lift = |a: &RVector, strict: bool| {
        let mut r = zeros(width);
        r[..n].clone_from_slice(a);
        if strict {
            r[eps] = Rational::from_integer((-1).into());
        }
        r
    };
    let mut ineqs: Vec<Ineq> = p
        .nonstrict
        .iter()
        .map(|a| lift(a, false))
        .chain(p.strict.iter().map(|a| lift(a, true)))
        .enumerate()
        .map(|(i, a)| Ineq {
            a,
            hist: singleton(i, words),
        })
        .collect();
    let mut eqs: Vec<RVector> = p.equalities.iter().map(|a| lift(a, false)).collect();
    for i in 0..out {
        let mut r = zeros(width);
        for j in 0..n {
            r[j] = -m.get(i, j).clone();
        }
        r[n + i] = Rational::from_integer(1.into());
        eqs.push(r);
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    // Fourier–Motzkin steps taken; after `k` of them a row combining more
    // than `k + 1` input rows is implied by the others (Chernikov).
    let mut steps = 0;
    while !remaining.is_empty() {
        // Substitute through an equality when possible.
        let sub = remaining
            .iter()
            .enumerate()
            .find_map(|(pos, &k)| eqs.iter().position(|e| !e[k].is_zero()).map(|ei| (pos, k, ei)));
        if let Some((pos, k, ei)) = sub {
            let e = eqs.remove(ei);
            for r in eqs.iter_mut() {
                eliminate_with(r, &e, k);
            }
            for r in ineqs.iter_mut() {
                eliminate_with(&mut r.a, &e, k);
            }
            remaining.remove(pos);
            tidy(&mut ineqs, &mut eqs);
            continue;
        }
        // Otherwise pick the variable producing the fewest combinations.
        let (pos, k) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &k)| {
                let pc = ineqs.iter().filter(|r| r.a[k].is_positive()).count();
                let nc = ineqs.iter().filter(|r| r.a[k].is_negative()).count();
                (pc * nc, k)
            })
            .map(|(pos, &k)| (pos, k))
            .expect("nonempty");
        steps += 1;
        let (pos_rows, rest): (Vec<Ineq>, Vec<Ineq>) = ineqs.into_iter().partition(|r| r.a[k].is_positive());
        let (neg_rows, zero_rows): (Vec<Ineq>, Vec<Ineq>) = rest.into_iter().partition(|r| r.a[k].is_negative());
        let mut next = zero_rows;
        for pr in &pos_rows {
            for nr in &neg_rows {
                let hist: Vec<u64> = pr.hist.iter().zip(&nr.hist).map(|(x, y)| x | y).collect();
                if count(&hist) > steps + 1 {
                    continue;
                }
                let cp = -nr.a[k].clone();
                let cn = pr.a[k].clone();
                let a: RVector = pr.a.iter().zip(&nr.a).map(|(x, y)| &cp * x + &cn * y).collect();
                next.push(Ineq { a, hist });
            }
        }
        ineqs = next;
        remaining.remove(pos);
        tidy(&mut ineqs, &mut eqs);
        if ineqs.len() > 4 * width + 8 {
            ineqs = drop_redundant(width, ineqs, &eqs);
        }
    }
    let shrink = |a: &RVector| a[n..eps].to_vec();
    let piece = Piece {
        dim: out,
        nonstrict: ineqs
            .iter()
            .filter(|r| r.a[eps].is_zero())
            .map(|r| shrink(&r.a))
            .collect(),
        strict: ineqs
            .iter()
            .filter(|r| r.a[eps].is_negative())
            .map(|r| shrink(&r.a))
            .collect(),
        equalities: eqs.iter().map(shrink).collect(),
    };
    let piece = piece.normalized()?;
    Some(
        piece
            .without_redundancy()
            .normalized()
            .expect("projection of a nonempty piece"),
    )
}

fn eliminate_with(r: &mut RVector, e: &RVector, k: usize) {
    if r[k].is_zero() {
        return;
    }
    let f = &r[k] / &e[k];
    for (x, y) in r.iter_mut().zip(e) {
        if !y.is_zero() {
            *x -= &f * y;
        }
    }
}

fn tidy(ineqs: &mut Vec<Ineq>, eqs: &mut Vec<RVector>) {
    let mut seen: Vec<Ineq> = Vec::new();
    for r in ineqs.drain(..) {
        if r.a.iter().all(|x| x.is_zero()) {
            continue;
        }
        let cand = Ineq {
            a: primitive(&r.a),
            hist: r.hist,
        };
        match seen.iter_mut().find(|s| s.a == cand.a) {
            Some(s) => {
                if count(&cand.hist) < count(&s.hist) {
                    s.hist = cand.hist;
                }
            }
            None => seen.push(cand),
        }
    }
    *ineqs = seen;
    let mut out: Vec<RVector> = Vec::new();
    for e in eqs.drain(..) {
        if e.iter().all(|x| x.is_zero()) {
            continue;
        }
        let c = canonical_direction(&e);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    *eqs = out;
}

/// Drops rows implied by the others together with `ε ≥ 0`.
fn drop_redundant(width: usize, ineqs: Vec<Ineq>, eqs: &[RVector]) -> Vec<Ineq> {
    let eps_row = crate::linalg::unit(width, width - 1);
    let mut rows = ineqs;
    let mut i = 0;
    while i < rows.len() {
        let row = rows.remove(i);
        let mut nonstrict: Vec<RVector> = rows.iter().map(|r| r.a.clone()).collect();
        nonstrict.push(eps_row.clone());
        let test = Piece {
            dim: width,
            nonstrict,
            strict: vec![neg(&row.a)],
            equalities: eqs.to_vec(),
        };
        if test.is_feasible() {
            rows.insert(i, row);
            i += 1;
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> RVector {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn project_open_quadrant_to_line() {
        let p = Piece {
            dim: 2,
            nonstrict: vec![],
            strict: vec![v(&[1, 0]), v(&[0, 1])],
            equalities: vec![],
        };
        let img = project_piece(&p, &RMatrix::from_ints(&[&[1, -1]])).unwrap();
        assert!(img.strict.is_empty() && img.nonstrict.is_empty());
        let img = project_piece(&p, &RMatrix::from_ints(&[&[1, 1]])).unwrap();
        assert_eq!(img.strict, vec![v(&[1])]);
    }

    #[test]
    fn empty_piece() {
        let p = Piece {
            dim: 1,
            nonstrict: vec![v(&[-1])],
            strict: vec![v(&[1])],
            equalities: vec![],
        };
        assert!(project_piece(&p, &RMatrix::identity(1)).is_none());
    }

    #[test]
    fn project_into_higher_dimension() {
        let p = Piece::closed(1, vec![v(&[1])], vec![]);
        let img = project_piece(&p, &RMatrix::from_ints(&[&[1], &[2]])).unwrap();
        assert!(img.contains(&v(&[1, 2])));
        assert!(!img.contains(&v(&[1, 1])));
        assert!(!img.contains(&v(&[-1, -2])));
    }
}
