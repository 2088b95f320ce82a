//! Double description: conversion between inequality and generator forms of
//! polyhedral cones.

use num_traits::{Signed, Zero};

use crate::linalg::{dot, scale, sub, unit, RMatrix, RVector, Subspace};
use crate::rational::{canonical_direction, primitive, Rational};

/// Generators of a polyhedral cone: `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VForm {
    pub dim: usize,
    pub rays: Vec<RVector>,
    pub lineality: Vec<RVector>,
}

impl VForm {
    /// Rays together with both signs of every lineality basis vector.
    pub fn generators(&self) -> Vec<RVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.iter().map(|x| -x).collect());
        }
        g
    }
}

/// Inequality form `{x : ineq·x ≥ 0, eq·x = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HForm {
    pub dim: usize,
    pub ineq: Vec<RVector>,
    pub eq: Vec<RVector>,
}

impl HForm {
    pub fn contains(&self, v: &[Rational]) -> bool {
        self.ineq.iter().all(|a| !dot(a, v).is_negative()) && self.eq.iter().all(|a| dot(a, v).is_zero())
    }

    /// Both signs of every equality appended to the inequalities.
    pub fn matrix(&self) -> RMatrix {
        let mut rows = self.ineq.clone();
        for e in &self.eq {
            rows.push(e.clone());
            rows.push(e.iter().map(|x| -x).collect());
        }
        RMatrix::from_rows(self.dim, rows)
    }
}

#[derive(Clone)]
struct Ray {
    v: RVector,
    zero: Vec<u64>,
}

fn bit_set(z: &mut Vec<u64>, k: usize) {
    let w = k / 64;
    if z.len() <= w {
        z.resize(w + 1, 0);
    }
    z[w] |= 1 << (k % 64);
}

fn meet(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, x)| x & !b.get(i).copied().unwrap_or(0) == 0)
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

/// Generators of `{x ∈ ℝ^dim : ineq·x ≥ 0, eq·x = 0}`.
pub fn h_to_v(dim: usize, ineq: &[RVector], eq: &[RVector]) -> VForm {
    let mut lin: Vec<RVector> = (0..dim).map(|i| unit(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();
    for a in eq {
        if let Some(k) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let l0 = lin.remove(k);
            let al0 = dot(a, &l0);
            for l in lin.iter_mut() {
                let c = dot(a, l) / &al0;
                if !c.is_zero() {
                    *l = sub(l, &scale(&l0, &c));
                }
            }
        }
    }
    for (k, a) in ineq.iter().enumerate() {
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        if let Some(pos) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.remove(pos);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            for l in lin.iter_mut() {
                let c = dot(a, l) / &al0;
                if !c.is_zero() {
                    *l = sub(l, &scale(&l0, &c));
                }
            }
            for r in rays.iter_mut() {
                let c = dot(a, &r.v) / &al0;
                if !c.is_zero() {
                    r.v = primitive(&sub(&r.v, &scale(&l0, &c)));
                }
                bit_set(&mut r.zero, k);
            }
            let mut zero = Vec::new();
            for j in 0..k {
                bit_set(&mut zero, j);
            }
            rays.push(Ray {
                v: primitive(&l0),
                zero,
            });
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pointed_dim = dim - eq_rank(dim, eq) - lin.len();
        let mut next: Vec<Ray> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                let mut r = r.clone();
                if v.is_zero() {
                    bit_set(&mut r.zero, k);
                }
                next.push(r);
            }
        }
        for (i, p) in rays.iter().enumerate() {
            if !vals[i].is_positive() {
                continue;
            }
            for (j, n) in rays.iter().enumerate() {
                if !vals[j].is_negative() {
                    continue;
                }
                let common = meet(&p.zero, &n.zero);
                if pointed_dim >= 2 && popcount(&common) + 2 < pointed_dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, r)| t == i || t == j || !subset(&common, &r.zero));
                if !adjacent {
                    continue;
                }
                let w: RVector = n.v.iter().zip(&p.v).map(|(x, y)| &vals[i] * x - &vals[j] * y).collect();
                let mut zero = common;
                bit_set(&mut zero, k);
                next.push(Ray { v: primitive(&w), zero });
            }
        }
        rays = next;
    }
    let lineality = Subspace::span(dim, lin).basis().to_vec();
    let mut out: Vec<RVector> = Vec::new();
    let lsp = Subspace::span(dim, lineality.clone());
    for r in rays {
        if r.v.iter().all(|x| x.is_zero()) || lsp.contains(&r.v) {
            continue;
        }
        if !out.contains(&r.v) {
            out.push(r.v);
        }
    }
    out.sort();
    VForm {
        dim,
        rays: out,
        lineality,
    }
}

fn eq_rank(dim: usize, eq: &[RVector]) -> usize {
    Subspace::span(dim, eq.to_vec()).dim()
}

/// Inequality form of the cone generated by `gens`, via the dual cone.
pub fn v_to_h(dim: usize, gens: &[RVector]) -> HForm {
    let dual = h_to_v(dim, gens, &[]);
    let mut ineq: Vec<RVector> = dual.rays.iter().map(|r| primitive(r)).collect();
    ineq.sort();
    let eq = dual.lineality.iter().map(|e| canonical_direction(e)).collect();
    HForm { dim, ineq, eq }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> RVector {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn orthant_round_trip() {
        let h = v_to_h(2, &[v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(h.ineq, vec![v(&[0, 1]), v(&[1, 0])]);
        assert!(h.eq.is_empty());
        let g = h_to_v(2, &h.ineq, &[]);
        assert_eq!(g.rays, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn empty_generators_give_zero_cone() {
        let h = v_to_h(2, &[]);
        assert!(h.ineq.is_empty());
        assert_eq!(h.eq.len(), 2);
    }

    #[test]
    fn wedge() {
        // {x + y ≥ 0, x − y ≥ 0} is generated by (1,1) and (1,−1).
        let g = h_to_v(2, &[v(&[1, 1]), v(&[1, -1])], &[]);
        assert_eq!(g.rays, vec![v(&[1, -1]), v(&[1, 1])]);
        assert!(g.lineality.is_empty());
    }

    #[test]
    fn halfplane_has_lineality() {
        let g = h_to_v(2, &[v(&[1, 0])], &[]);
        assert_eq!(g.rays, vec![v(&[1, 0])]);
        assert_eq!(g.lineality.len(), 1);
    }

    #[test]
    fn square_pyramid() {
        // Cone over a square: four rays, four facets.
        let gens = [v(&[1, 1, 1]), v(&[1, -1, 1]), v(&[-1, 1, 1]), v(&[-1, -1, 1])];
        let h = v_to_h(3, &gens);
        assert_eq!(h.ineq.len(), 4);
        let back = h_to_v(3, &h.ineq, &h.eq);
        let mut expect: Vec<RVector> = gens.to_vec();
        expect.sort();
        assert_eq!(back.rays, expect);
    }
}
