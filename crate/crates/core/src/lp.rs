//! Exact linear feasibility with Farkas certificates.
//!
//! Every query is reduced to phase one of a tableau simplex over free
//! variables with Bland's rule. Strict rows are handled by homogenizing and
//! scaling: a homogeneous system with rows `a·x > 0` is feasible iff the same
//! system with `a·x ≥ 1` is.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, zeros, RVector};
use crate::rational::{primitive, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    Eq,
    Geq,
    Gt,
}

impl RowKind {
    pub fn name(self) -> &'static str {
        match self {
            RowKind::Eq => "EQ",
            RowKind::Geq => "GEQ",
            RowKind::Gt => "GT",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub kind: RowKind,
    pub coeffs: RVector,
    pub rhs: Rational,
}

/// Rows `a·x (=|≥|>) c` over a common number of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearConstraintSystem {
    pub dim: usize,
    pub rows: Vec<Constraint>,
}

impl LinearConstraintSystem {
    pub fn new(dim: usize) -> Self {
        LinearConstraintSystem { dim, rows: vec![] }
    }

    pub fn push(&mut self, kind: RowKind, coeffs: RVector, rhs: Rational) -> &mut Self {
        self.rows.push(Constraint { kind, coeffs, rhs });
        self
    }

    pub fn push_eq(&mut self, coeffs: RVector, rhs: Rational) -> &mut Self {
        self.push(RowKind::Eq, coeffs, rhs)
    }

    pub fn push_geq(&mut self, coeffs: RVector, rhs: Rational) -> &mut Self {
        self.push(RowKind::Geq, coeffs, rhs)
    }

    pub fn push_gt(&mut self, coeffs: RVector, rhs: Rational) -> &mut Self {
        self.push(RowKind::Gt, coeffs, rhs)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.rows.iter().all(|r| {
                let v = dot(&r.coeffs, x);
                match r.kind {
                    RowKind::Eq => v == r.rhs,
                    RowKind::Geq => v >= r.rhs,
                    RowKind::Gt => v > r.rhs,
                }
            })
    }

    /// Checks that `y` is a valid infeasibility certificate: multipliers on
    /// inequality rows are nonnegative, the combined coefficients vanish, and
    /// the combined right-hand side is contradictory.
    pub fn certificate_valid(&self, y: &[Rational]) -> bool {
        if y.len() != self.rows.len() {
            return false;
        }
        let mut comb = zeros(self.dim);
        let mut rhs = Rational::zero();
        let mut strict = Rational::zero();
        for (r, m) in self.rows.iter().zip(y) {
            if r.kind != RowKind::Eq && m.is_negative() {
                return false;
            }
            if m.is_zero() {
                continue;
            }
            for (c, a) in comb.iter_mut().zip(&r.coeffs) {
                *c += m * a;
            }
            rhs += m * &r.rhs;
            if r.kind == RowKind::Gt {
                strict += m;
            }
        }
        comb.iter().all(|c| c.is_zero()) && (rhs.is_positive() || (!rhs.is_negative() && strict.is_positive()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(RVector),
    Infeasible(RVector),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

/// Decides feasibility of a mixed system. Witnesses and certificates are
/// checked by substitution before returning.
pub fn lp_decide(sys: &LinearConstraintSystem) -> Result<LpOutcome> {
    for r in &sys.rows {
        check_dim("constraint row", sys.dim, r.coeffs.len())?;
    }
    let n = sys.dim;
    let has_strict = sys.rows.iter().any(|r| r.kind == RowKind::Gt);
    let outcome = if !has_strict {
        let rows: Vec<(bool, &[Rational], Rational)> = sys
            .rows
            .iter()
            .map(|r| (r.kind == RowKind::Eq, r.coeffs.as_slice(), r.rhs.clone()))
            .collect();
        match phase_one(n, &rows) {
            Phase::Feasible(x) => LpOutcome::Feasible(x),
            Phase::Infeasible(y) => LpOutcome::Infeasible(y),
        }
    } else {
        // Homogenize with τ > 0 so every strict row has right-hand side zero.
        let hom: Vec<(bool, RVector, Rational)> = sys
            .rows
            .iter()
            .map(|r| {
                let mut a = r.coeffs.clone();
                a.push(-r.rhs.clone());
                let rhs = if r.kind == RowKind::Gt {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                (r.kind == RowKind::Eq, a, rhs)
            })
            .chain(std::iter::once({
                let mut a = zeros(n + 1);
                a[n] = Rational::one();
                (false, a, Rational::one())
            }))
            .collect();
        let rows: Vec<(bool, &[Rational], Rational)> =
            hom.iter().map(|(e, a, c)| (*e, a.as_slice(), c.clone())).collect();
        match phase_one(n + 1, &rows) {
            Phase::Feasible(x) => {
                let tau = x[n].clone();
                LpOutcome::Feasible(x[..n].iter().map(|v| v / &tau).collect())
            }
            Phase::Infeasible(mut y) => {
                y.pop();
                LpOutcome::Infeasible(y)
            }
        }
    };
    match &outcome {
        LpOutcome::Feasible(x) if !sys.satisfied_by(x) => Err(Error::Internal("lp witness fails substitution".into())),
        LpOutcome::Infeasible(y) if !sys.certificate_valid(y) => {
            Err(Error::Internal("lp certificate fails re-multiplication".into()))
        }
        _ => Ok(outcome),
    }
}

/// Homogeneous feasibility: some `x` with `eq·x = 0`, `geq·x ≥ 0`, `gt·x > 0`.
/// The witness is returned as a primitive integer vector.
pub fn homogeneous_witness(dim: usize, eq: &[RVector], geq: &[RVector], gt: &[RVector]) -> Option<RVector> {
    let zero = Rational::zero();
    let one = Rational::one();
    let rows: Vec<(bool, &[Rational], Rational)> = eq
        .iter()
        .map(|a| (true, a.as_slice(), zero.clone()))
        .chain(geq.iter().map(|a| (false, a.as_slice(), zero.clone())))
        .chain(gt.iter().map(|a| (false, a.as_slice(), one.clone())))
        .collect();
    match phase_one(dim, &rows) {
        Phase::Feasible(x) => {
            let p = primitive(&x);
            debug_assert!(eq.iter().all(|a| dot(a, &p).is_zero()));
            debug_assert!(geq.iter().all(|a| !dot(a, &p).is_negative()));
            debug_assert!(gt.iter().all(|a| dot(a, &p).is_positive()));
            Some(p)
        }
        Phase::Infeasible(_) => None,
    }
}

enum Phase {
    Feasible(RVector),
    Infeasible(RVector),
}

/// Phase one over free variables. Rows are `(is_equality, a, c)` meaning
/// `a·x = c` or `a·x ≥ c`. On infeasibility returns multipliers `u` with
/// `Σ u_r a_r = 0`, `u ≥ 0` on inequality rows and `Σ u_r c_r > 0`.
fn phase_one(n: usize, rows: &[(bool, &[Rational], Rational)]) -> Phase {
    let m = rows.len();
    if m == 0 {
        return Phase::Feasible(zeros(n));
    }
    let ineq: Vec<usize> = (0..m).filter(|&r| !rows[r].0).collect();
    // Inequalities with zero right-hand side start with their slack basic;
    // every other row gets an artificial column.
    let needs_art: Vec<bool> = (0..m).map(|r| rows[r].0 || !rows[r].2.is_zero()).collect();
    let mut art_of = vec![usize::MAX; m];
    let nz = 2 * n + ineq.len();
    let mut next = nz;
    for r in 0..m {
        if needs_art[r] {
            art_of[r] = next;
            next += 1;
        }
    }
    let width = next + 1;
    let rhs_col = width - 1;
    let mut slack_of = vec![usize::MAX; m];
    for (k, &r) in ineq.iter().enumerate() {
        slack_of[r] = 2 * n + k;
    }
    // Row r of the tableau is sign[r] times the original row; `unit_col[r]`
    // is the column holding the initial identity basis.
    let mut sign = vec![Rational::one(); m];
    let mut unit_col = vec![0; m];
    let mut t: Vec<RVector> = Vec::with_capacity(m);
    for (r, (_, a, c)) in rows.iter().enumerate() {
        let flip = c.is_negative() || !needs_art[r];
        if flip {
            sign[r] = -Rational::one();
        }
        let mut row = zeros(width);
        for j in 0..n {
            if a[j].is_zero() {
                continue;
            }
            let v = if flip { -a[j].clone() } else { a[j].clone() };
            row[n + j] = -v.clone();
            row[j] = v;
        }
        if slack_of[r] != usize::MAX {
            row[slack_of[r]] = if flip { Rational::one() } else { -Rational::one() };
        }
        if needs_art[r] {
            row[art_of[r]] = Rational::one();
            unit_col[r] = art_of[r];
        } else {
            unit_col[r] = slack_of[r];
        }
        row[rhs_col] = if flip { -c.clone() } else { c.clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = unit_col.clone();
    // Reduced costs for minimizing the sum of artificials.
    let mut obj = zeros(width);
    for (r, row) in t.iter().enumerate() {
        if !needs_art[r] {
            continue;
        }
        for j in 0..nz {
            if !row[j].is_zero() {
                obj[j] -= &row[j];
            }
        }
        obj[rhs_col] -= &row[rhs_col];
    }
    // Dantzig pricing until it stalls on degenerate pivots, then Bland's rule,
    // which cannot cycle.
    let mut bland = false;
    let mut stalled = 0;
    loop {
        let enter = if bland {
            (0..next).find(|&j| obj[j].is_negative())
        } else {
            (0..next)
                .filter(|&j| obj[j].is_negative())
                .min_by(|&a, &b| obj[a].cmp(&obj[b]))
        };
        let Some(enter) = enter else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs_col] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((p, ratio)) = leave else {
            // Phase one is bounded below by zero, so this cannot happen.
            unreachable!("unbounded phase-one direction");
        };
        if ratio.is_zero() {
            stalled += 1;
            if stalled > 2 * m {
                bland = true;
            }
        } else {
            stalled = 0;
        }
        pivot(&mut t, &mut obj, p, enter);
        basis[p] = enter;
    }
    let value = -obj[rhs_col].clone();
    if value.is_zero() {
        let mut z = zeros(nz);
        for (i, &b) in basis.iter().enumerate() {
            if b < nz {
                z[b] = t[i][rhs_col].clone();
            }
        }
        let x = (0..n).map(|j| &z[j] - &z[n + j]).collect();
        Phase::Feasible(x)
    } else {
        // y = c_B B^{-1}; the initial identity columns of the tableau hold B^{-1}.
        let mut y = zeros(m);
        for (i, &b) in basis.iter().enumerate() {
            if b >= nz {
                for (r, yr) in y.iter_mut().enumerate() {
                    if !t[i][unit_col[r]].is_zero() {
                        *yr += &t[i][unit_col[r]];
                    }
                }
            }
        }
        Phase::Infeasible(y.iter().zip(&sign).map(|(a, s)| a * s).collect())
    }
}

fn pivot(t: &mut [RVector], obj: &mut RVector, p: usize, c: usize) {
    let inv = t[p][c].recip();
    if !inv.is_one() {
        for x in t[p].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
    }
    let prow = t[p].clone();
    let nzcols: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &j in &nzcols {
            row[j] -= &f * &prow[j];
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for &j in &nzcols {
            obj[j] -= &f * &prow[j];
        }
    }
}
