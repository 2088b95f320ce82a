//! Partially ordered vector spaces and linear maps between them.

use std::sync::OnceLock;

use crate::cone::{h_to_v, v_to_h, ConeDesc, Membership, OrderRelationResult, Piece, PieceUnion};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{is_zero, kernel_basis, unit, zeros, RMatrix, RVector, Subspace};
use crate::rational::{canonical_direction, primitive, Rational};

/// `ℝ^dim` ordered by a cone. Spaces built with [`Povs::new`] are partially
/// ordered; preordered instances only appear inside quotient constructions.
#[derive(Clone, Debug)]
pub struct Povs {
    cone: ConeDesc,
    union: OnceLock<PieceUnion>,
    complement: OnceLock<PieceUnion>,
}

impl PartialEq for Povs {
    fn eq(&self, other: &Self) -> bool {
        self.cone == other.cone
    }
}

impl Eq for Povs {}

impl Povs {
    pub fn new(cone: ConeDesc) -> Result<Povs> {
        let p = Povs::preordered(cone)?;
        if !p.cone.is_pointed()? {
            return Err(Error::Invalid("order cone has nontrivial lineality".into()));
        }
        Ok(p)
    }

    pub(crate) fn preordered(cone: ConeDesc) -> Result<Povs> {
        cone.validate()?;
        let p = Povs {
            cone,
            union: OnceLock::new(),
            complement: OnceLock::new(),
        };
        if !p.pieces().contains(&zeros(p.dim())) {
            return Err(Error::Invalid("order cone does not contain the origin".into()));
        }
        Ok(p)
    }

    pub fn standard(n: usize) -> Povs {
        Povs::new(ConeDesc::Orthant(n)).expect("orthant is pointed")
    }

    pub fn trivial(n: usize) -> Povs {
        Povs::new(ConeDesc::Trivial(n)).expect("zero cone is pointed")
    }

    /// `∏ V_i` with the product order; the empty product is `ℝ^0`.
    pub fn product(spaces: &[Povs]) -> Povs {
        let cone = ConeDesc::Product(spaces.iter().map(|s| s.cone.clone()).collect());
        Povs {
            cone,
            union: OnceLock::new(),
            complement: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn cone(&self) -> &ConeDesc {
        &self.cone
    }

    pub fn pieces(&self) -> &PieceUnion {
        self.union.get_or_init(|| self.cone.to_union().expect("validated cone"))
    }

    /// Pieces covering `ℝ^dim ∖ C`.
    pub fn complement(&self) -> &PieceUnion {
        self.complement.get_or_init(|| self.pieces().complement())
    }

    pub fn member(&self, v: &[Rational]) -> Result<Membership> {
        self.cone.member(v)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.dim() && self.pieces().contains(v)
    }

    pub fn classify(&self, v: &[Rational], w: &[Rational]) -> Result<OrderRelationResult> {
        self.cone.classify(v, w)
    }
}

/// A linear map between ordered spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PovsMap {
    pub source: Povs,
    pub target: Povs,
    pub matrix: RMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    /// `v ∈ C_src` with `L v ∉ C_tgt`.
    NotPositive {
        witness: RVector,
    },
    Positive {
        /// `v ≻ 0` with `L v ∼ 0`.
        witness: RVector,
    },
    StrictlyPositive,
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Positivity::NotPositive { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Positivity::NotPositive { .. } => "NotPositive",
            Positivity::Positive { .. } => "Positive",
            Positivity::StrictlyPositive => "StrictlyPositive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingFailure {
    NotInjective,
    NotPositive,
    /// `v ∉ C_src` but `L v ∈ C_tgt`.
    NotReflecting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub embedding: bool,
    pub counterexample: Option<(EmbeddingFailure, RVector)>,
}

impl PovsMap {
    pub fn new(source: Povs, target: Povs, matrix: RMatrix) -> Result<PovsMap> {
        check_dim("map source", source.dim(), matrix.cols())?;
        check_dim("map target", target.dim(), matrix.rows())?;
        Ok(PovsMap { source, target, matrix })
    }

    pub fn identity(space: &Povs) -> PovsMap {
        PovsMap {
            source: space.clone(),
            target: space.clone(),
            matrix: RMatrix::identity(space.dim()),
        }
    }

    pub fn apply(&self, v: &[Rational]) -> RVector {
        self.matrix.mul_vec(v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PovsMap) -> Result<PovsMap> {
        check_dim("composition", self.target.dim(), other.source.dim())?;
        Ok(PovsMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        })
    }

    /// `L ∘ 1_i` for a map out of a product space.
    pub fn component(&self, factors: &[Povs], i: usize) -> Result<PovsMap> {
        let total: usize = factors.iter().map(|f| f.dim()).sum();
        check_dim("component of product map", self.source.dim(), total)?;
        let off: usize = factors[..i].iter().map(|f| f.dim()).sum();
        PovsMap::new(
            factors[i].clone(),
            self.target.clone(),
            self.matrix.column_block(off, factors[i].dim()),
        )
    }
}

/// The natural embedding `1_i : V_i → ∏ V_j`.
pub fn inclusion(factors: &[Povs], i: usize) -> PovsMap {
    let total: usize = factors.iter().map(|f| f.dim()).sum();
    let off: usize = factors[..i].iter().map(|f| f.dim()).sum();
    let d = factors[i].dim();
    let cols: Vec<RVector> = (0..d).map(|k| unit(total, off + k)).collect();
    PovsMap {
        source: factors[i].clone(),
        target: Povs::product(factors),
        matrix: RMatrix::from_columns(total, &cols),
    }
}

fn piece_generators(p: &Piece) -> Vec<RVector> {
    h_to_v(p.dim, &p.nonstrict, &p.equalities).generators()
}

/// Decides whether `L(C_src) ⊆ C_tgt`, and if so whether `v ≻ 0 ⇒ L v ≻ 0`.
pub fn map_positivity(l: &PovsMap) -> Positivity {
    let m = &l.matrix;
    for p in &l.source.pieces().pieces {
        if p.is_closed() {
            for g in piece_generators(p) {
                if !l.target.contains(&m.mul_vec(&g)) {
                    return Positivity::NotPositive { witness: primitive(&g) };
                }
            }
        } else {
            let back = l.target.pieces().pullback(m);
            if back.pieces.iter().any(|b| p.is_subset_of(b)) {
                continue;
            }
            for c in &l.target.complement().pieces {
                if let Some(w) = p.and(&c.pullback(m)).witness() {
                    return Positivity::NotPositive { witness: w };
                }
            }
        }
    }
    // Targets are pointed, so `L v ∼ 0` means `L v = 0`, and `v ≻ 0` means
    // `v ∈ C_src ∖ (−C_src)`.
    let kernel_rows: Vec<RVector> = m.row_vecs().to_vec();
    let strict = strict_part(&l.source);
    for p in &strict.pieces {
        if let Some(w) = p.with_equalities(&kernel_rows).witness() {
            return Positivity::Positive { witness: w };
        }
    }
    Positivity::StrictlyPositive
}

/// `C ∖ (−C)` as pieces.
pub(crate) fn strict_part(space: &Povs) -> PieceUnion {
    let u = space.pieces();
    let n = space.dim();
    if space.cone().is_pointed().unwrap_or(false) {
        let mut atoms = Vec::new();
        for k in 0..n {
            let e = unit(n, k);
            for s in [e.clone(), e.iter().map(|x| -x).collect::<RVector>()] {
                atoms.push(Piece {
                    dim: n,
                    nonstrict: vec![],
                    strict: vec![s],
                    equalities: vec![],
                });
            }
        }
        u.intersect(&PieceUnion::new(n, atoms))
    } else {
        u.intersect(&u.negated().complement())
    }
}

/// Injective, positive, and `L v ∈ C_tgt ⇒ v ∈ C_src`.
pub fn order_embedding(l: &PovsMap) -> EmbeddingReport {
    let ker = kernel_basis(&l.matrix);
    if let Some(k) = ker.basis().first() {
        return EmbeddingReport {
            embedding: false,
            counterexample: Some((EmbeddingFailure::NotInjective, canonical_direction(k))),
        };
    }
    if let Positivity::NotPositive { witness } = map_positivity(l) {
        return EmbeddingReport {
            embedding: false,
            counterexample: Some((EmbeddingFailure::NotPositive, witness)),
        };
    }
    let back = l.target.pieces().pullback(&l.matrix);
    let src = l.source.pieces();
    let open: Vec<&Piece> = back
        .pieces
        .iter()
        .filter(|t| !src.pieces.iter().any(|s| t.is_subset_of(s)))
        .collect();
    let complement: &[Piece] = if open.is_empty() {
        &[]
    } else {
        &l.source.complement().pieces
    };
    for c in complement {
        for t in &open {
            if let Some(w) = c.and(t).witness() {
                return EmbeddingReport {
                    embedding: false,
                    counterexample: Some((EmbeddingFailure::NotReflecting, w)),
                };
            }
        }
    }
    debug_assert_eq!(map_positivity(l), Positivity::StrictlyPositive);
    EmbeddingReport {
        embedding: true,
        counterexample: None,
    }
}

/// Result of quotienting `ℝ^n` by the lineality of a cone `C`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: Povs,
    /// `Q : ℝ^n → V`, with `Q v ≿ Q w ⟺ v − w ∈ C`.
    pub map: PovsMap,
    pub lineality: Subspace,
    /// Images of the closure generators of `C`, when `C` is closed.
    pub generators: Option<Vec<RVector>>,
}

pub fn quotient_by(cone: &ConeDesc) -> Result<Quotient> {
    quotient_by_union(&cone.to_union()?)
}

/// The rows of `Q` are the reduced echelon basis of the annihilator of `C ∩ −C`.
pub fn quotient_by_union(u: &PieceUnion) -> Result<Quotient> {
    let n = u.dim;
    let u = u.pruned();
    if !u.contains(&zeros(n)) {
        return Err(Error::Invalid("cone does not contain the origin".into()));
    }
    let lin = u.lineality();
    let q = lin.annihilator().basis_matrix();
    let k = q.rows();
    let (cone, generators) = if u.is_closed_set() {
        let mut gens: Vec<RVector> = Vec::new();
        for g in u.closure_generators() {
            let y = primitive(&q.mul_vec(&g));
            if !is_zero(&y) && !gens.contains(&y) {
                gens.push(y);
            }
        }
        gens.sort();
        let h = v_to_h(k, &gens);
        let rows = h.matrix().into_rows();
        (ConeDesc::PolyhedralH { dim: k, rows }, Some(gens))
    } else {
        (ConeDesc::Pieces(u.image(&q)), None)
    };
    let space = Povs::new(cone).map_err(|e| Error::Internal(format!("quotient order: {e}")))?;
    let source = Povs::preordered(ConeDesc::Pieces(u.clone()))?;
    Ok(Quotient {
        map: PovsMap {
            source,
            target: space.clone(),
            matrix: q,
        },
        space,
        lineality: lin,
        generators,
    })
}

/// True when `v ∈ C ⟺ Q v ∈ C_V` on the given sample of vectors.
pub fn quotient_agrees(qt: &Quotient, samples: &[RVector]) -> bool {
    samples
        .iter()
        .all(|v| qt.map.source.contains(v) == qt.space.contains(&qt.map.apply(v)))
}
