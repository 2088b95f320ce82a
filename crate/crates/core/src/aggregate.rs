//! Aggregation maps: synthesis of a social space and linear map from the
//! individual representations, recovery of `f_0 = L f_I + b`, a common
//! space in which society is the sum of individuals, and uniqueness checks.

use crate::cone::{Piece, PieceUnion};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{add, solve_affine_system, sub, RMatrix, RVector, Subspace};
use crate::pareto::{check_p1, check_up_to, Axiom, AxiomReport};
use crate::povs::{
    inclusion, map_positivity, order_embedding, quotient_by_union, EmbeddingReport, Positivity, Povs, PovsMap,
};
use crate::profile::{agreement, union_to_cone, Domain, Point, Profile, Representation, SampleAgreement};
use crate::rational::Rational;

/// Random mixture pairs checked on top of all vertex pairs.
pub const VERIFY_MIXTURES: usize = 1000;
pub const VERIFY_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub level: Axiom,
    pub space: Povs,
    /// `L : V_I → V`.
    pub map: PovsMap,
    /// `L ∘ f_I`.
    pub social_rep: Representation,
    /// The cone `C` on `V_I` whose quotient orders `V`.
    pub cone: PieceUnion,
    pub lineality: Subspace,
    /// Images in `V` of the generators of `C`, when `C` is closed.
    pub generators: Option<Vec<RVector>>,
    pub positivity: Positivity,
    /// Order-embedding reports for every `L_i`, computed at level P4.
    pub embeddings: Option<Vec<EmbeddingReport>>,
    pub verification: SampleAgreement,
}

#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub map: PovsMap,
    pub b: RVector,
    pub dr_holds: bool,
    pub positivity: Positivity,
    /// The diff span on which `L` is pinned down.
    pub uniqueness_scope: Subspace,
    /// Set when DR fails: the positivity class is then not equivalent to the axioms.
    pub caveat: Option<String>,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solved(AffineSolution),
    NoP1(AxiomReport),
}

#[derive(Clone, Debug)]
pub struct CommonSpaceResult {
    pub space: Povs,
    /// `g_0, g_1, …, g_n`.
    pub reps: Vec<Representation>,
    pub dr_form: bool,
    /// `Σ_i g_i = g_0` on every vertex.
    pub summation_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `g = T f + b` with `T` an order isomorphism.
    Iso {
        t: PovsMap,
        b: RVector,
    },
    NotSamePreorder {
        witness: Option<(Point, Point)>,
    },
    NotPervasive {
        first: bool,
        second: bool,
    },
}

#[derive(Clone, Debug)]
pub struct SynthesisComparison {
    /// `M : L(V_I) → L′(V_I)` in the coordinates of the two image bases.
    pub m: PovsMap,
    pub source_basis: Subspace,
    pub target_basis: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniquenessOutcome {
    /// `g′_i = T g_i + b_i`.
    Related {
        t: PovsMap,
        offsets: Vec<RVector>,
    },
    Mismatch {
        agent: usize,
    },
    NotIsomorphic(IsoOutcome),
}

/// `L` with `L (src_j − src_0) = tgt_j − tgt_0`, zero on the echelon
/// complement of the source diff span. `None` when no such map exists.
fn solve_on_diffs(src: &[RVector], tgt: &[RVector], src_dim: usize, tgt_dim: usize) -> Option<(RMatrix, Subspace)> {
    let sd: Vec<RVector> = src[1..].iter().map(|y| sub(y, &src[0])).collect();
    let td: Vec<RVector> = tgt[1..].iter().map(|y| sub(y, &tgt[0])).collect();
    let w = Subspace::span(src_dim, sd.clone());
    let piv = w.pivots().to_vec();
    let coords = RMatrix::from_rows(
        piv.len(),
        sd.iter().map(|d| piv.iter().map(|&p| d[p].clone()).collect()).collect(),
    );
    let mut l = RMatrix::zeros(tgt_dim, src_dim);
    for r in 0..tgt_dim {
        let rhs: RVector = td.iter().map(|t| t[r].clone()).collect();
        let y = solve_affine_system(&coords, &rhs).ok()??;
        for (c, &p) in piv.iter().enumerate() {
            l.set(r, p, y[c].clone());
        }
    }
    Some((l, w))
}

pub fn solve_affine(p: &Profile) -> Result<SolveOutcome> {
    let fi = p.joint_images();
    let f0 = p.social.vertex_images(&p.domain);
    let vi = p.product_space();
    let v0 = p.social.target.clone();
    let Some((l, w)) = solve_on_diffs(&fi, &f0, vi.dim(), v0.dim()) else {
        let r = check_p1(p)?;
        if r.holds {
            return Err(Error::Internal(
                "difference system inconsistent although P1 holds".into(),
            ));
        }
        return Ok(SolveOutcome::NoP1(r));
    };
    let b = sub(&f0[0], &l.mul_vec(&fi[0]));
    for (x, y) in fi.iter().zip(&f0) {
        if add(&l.mul_vec(x), &b) != *y {
            return Err(Error::Internal("f_0 = L f_I + b fails on a vertex".into()));
        }
    }
    let map = PovsMap::new(vi, v0, l)?;
    let positivity = map_positivity(&map);
    let dr = p.check_dr();
    Ok(SolveOutcome::Solved(AffineSolution {
        map,
        b,
        dr_holds: dr,
        positivity,
        uniqueness_scope: w,
        caveat: (!dr).then(|| {
            "domain richness fails: L is pinned down only on the diff span, and its \
             positivity class need not match the axioms"
                .to_string()
        }),
    }))
}

/// The cone `C_0 = {λ(f_I(x) − f_I(y)) : x ≿_0 y}`, computed as
/// `W ∩ T⁻¹(C_{V_0})` for the linear part `T` of any solution of
/// `f_0 = T f_I + b`; valid under P1.
fn social_difference_cone(p: &Profile, t: &RMatrix) -> PieceUnion {
    let w = p.joint_diff_span();
    let eqs = w.annihilator().basis().to_vec();
    p.social.target.pieces().pullback(t).with_equalities(&eqs)
}

pub fn synthesize(p: &Profile, level: Axiom) -> Result<SynthesisResult> {
    if let Some(r) = check_up_to(p, level)? {
        return Err(Error::AxiomFailed(Box::new(r)));
    }
    let sol = match solve_affine(p)? {
        SolveOutcome::Solved(s) => s,
        SolveOutcome::NoP1(r) => return Err(Error::AxiomFailed(Box::new(r))),
    };
    let c0 = social_difference_cone(p, &sol.map.matrix);
    let spaces = p.individual_spaces();
    let total = p.product_space().dim();
    let mut c = c0;
    if level != Axiom::P1 {
        // The sum of the blockwise cones is their product.
        let mut prod = PieceUnion::single(Piece::full(total));
        for (i, s) in spaces.iter().enumerate() {
            prod = prod.intersect(&s.pieces().embed(p.block_offsets()[i], total));
        }
        c = c.sum(&prod);
    }
    let qt = quotient_by_union(&c)?;
    let map = PovsMap::new(p.product_space(), qt.space.clone(), qt.map.matrix.clone())?;
    let social_rep = Representation::new(qt.space.clone(), p.joint_map().then_linear(&map.matrix))?;
    let verification = agreement(&p.domain, &p.social, &social_rep, VERIFY_MIXTURES, VERIFY_SEED)?;
    if verification.mismatch.is_some() {
        return Err(Error::Internal(
            "synthesized map does not represent the social order".into(),
        ));
    }
    let positivity = map_positivity(&map);
    let ok = match level {
        Axiom::P1 => true,
        Axiom::P2 => positivity.is_positive(),
        Axiom::P3 | Axiom::P4 => positivity == Positivity::StrictlyPositive,
    };
    if !ok {
        return Err(Error::Internal(format!(
            "synthesized map is {}, below what {} requires",
            positivity.name(),
            level.name()
        )));
    }
    let embeddings = if level == Axiom::P4 {
        let reps: Vec<EmbeddingReport> = (0..spaces.len())
            .map(|i| Ok(order_embedding(&inclusion(&spaces, i).then(&map)?)))
            .collect::<Result<_>>()?;
        if reps.iter().any(|r| !r.embedding) {
            return Err(Error::Internal("a component map is not an order embedding".into()));
        }
        Some(reps)
    } else {
        None
    };
    Ok(SynthesisResult {
        level,
        space: qt.space,
        map,
        social_rep,
        cone: c,
        lineality: qt.lineality,
        generators: qt.generators,
        positivity,
        embeddings,
        verification,
    })
}

/// `g_i = L_i f_i`, with `g_1` shifted by `shift`.
fn component_reps(p: &Profile, l: &RMatrix, space: &Povs, shift: &RVector) -> Result<Vec<Representation>> {
    let off = p.block_offsets();
    let mut out = Vec::with_capacity(p.n());
    for (i, r) in p.individuals.iter().enumerate() {
        let li = l.column_block(off[i], r.target.dim());
        let mut g = r.map.then_linear(&li);
        if i == 0 {
            g = g.shifted(shift);
        }
        out.push(Representation::new(space.clone(), g)?);
    }
    Ok(out)
}

pub fn common_space(p: &Profile, dr_form: bool) -> Result<CommonSpaceResult> {
    if let Some(r) = check_up_to(p, Axiom::P4)? {
        return Err(Error::AxiomFailed(Box::new(r)));
    }
    let (space, g0, gs) = if dr_form {
        if !p.check_dr() {
            return Err(Error::DRRequired);
        }
        let sol = match solve_affine(p)? {
            SolveOutcome::Solved(s) => s,
            SolveOutcome::NoP1(r) => return Err(Error::AxiomFailed(Box::new(r))),
        };
        let space = p.social.target.clone();
        let gs = component_reps(p, &sol.map.matrix, &space, &sol.b)?;
        (space, p.social.clone(), gs)
    } else {
        let s = synthesize(p, Axiom::P4)?;
        let zero = vec![num_traits::zero(); s.space.dim()];
        let gs = component_reps(p, &s.map.matrix, &s.space, &zero)?;
        (s.space, s.social_rep, gs)
    };
    let verts = p.domain.vertices();
    let summation_verified = verts.iter().all(|x| {
        let total = gs
            .iter()
            .fold(vec![num_traits::zero(); space.dim()], |acc, g| add(&acc, &g.at(x)));
        total == g0.at(x)
    });
    if !summation_verified {
        return Err(Error::Internal(
            "components do not sum to the social representation".into(),
        ));
    }
    for (i, g) in gs.iter().enumerate() {
        let a = agreement(&p.domain, &p.individuals[i], g, 0, VERIFY_SEED)?;
        if a.mismatch.is_some() {
            return Err(Error::Internal(format!(
                "component {} does not represent its individual",
                i + 1
            )));
        }
    }
    let mut reps = vec![g0];
    reps.extend(gs);
    Ok(CommonSpaceResult {
        space,
        reps,
        dr_form,
        summation_verified,
    })
}

/// The unique order isomorphism `T` and constant `b` with `g = T f + b`, for
/// pervasive representations of the same preorder.
pub fn representation_iso(domain: &Domain, f: &Representation, g: &Representation) -> Result<IsoOutcome> {
    let pf = f.is_pervasive(domain);
    let pg = g.is_pervasive(domain);
    if !pf || !pg {
        return Ok(IsoOutcome::NotPervasive {
            first: !pf,
            second: !pg,
        });
    }
    let a = agreement(domain, f, g, 0, VERIFY_SEED)?;
    if a.mismatch.is_some() {
        return Ok(IsoOutcome::NotSamePreorder { witness: a.mismatch });
    }
    let fi = f.vertex_images(domain);
    let gi = g.vertex_images(domain);
    let n = f.target.dim();
    let m = g.target.dim();
    let not_same = |v: Option<(Point, Point)>| Ok(IsoOutcome::NotSamePreorder { witness: v });
    let Some((t, _)) = solve_on_diffs(&fi, &gi, n, m) else {
        return not_same(None);
    };
    let Some(tinv) = (n == m).then(|| t.inverse()).flatten() else {
        // pervasive representations of one preorder have isomorphic spans
        return not_same(None);
    };
    let fwd = PovsMap::new(f.target.clone(), g.target.clone(), t.clone())?;
    if let Positivity::NotPositive { witness } = map_positivity(&fwd) {
        return not_same(domain.realize(&f.map.matrix, &witness)?);
    }
    let back = PovsMap::new(g.target.clone(), f.target.clone(), tinv)?;
    if let Positivity::NotPositive { witness } = map_positivity(&back) {
        return not_same(domain.realize(&g.map.matrix, &witness)?);
    }
    let b = sub(&gi[0], &t.mul_vec(&fi[0]));
    debug_assert!(fi.iter().zip(&gi).all(|(x, y)| add(&t.mul_vec(x), &b) == *y));
    Ok(IsoOutcome::Iso { t: fwd, b })
}

/// The image `L(V_I)` as a space ordered by the restriction of the cone.
fn image_space(l: &PovsMap) -> Result<(Subspace, Povs)> {
    let im = Subspace::span(l.target.dim(), l.matrix.transpose().into_rows());
    let basis = RMatrix::from_columns(l.target.dim(), im.basis());
    let restricted = l.target.pieces().pullback(&basis);
    Ok((im.clone(), Povs::new(union_to_cone(im.dim(), &restricted))?))
}

/// Given two maps `L, L′` for which `L f_I` and `L′ f_I` both represent the
/// social order, the order isomorphism `M` with `L′ = M L`.
pub fn compare_syntheses(p: &Profile, l: &PovsMap, l2: &PovsMap) -> Result<SynthesisComparison> {
    if !p.check_dr() {
        return Err(Error::DRRequired);
    }
    let total = p.product_space().dim();
    check_dim("first map source", total, l.matrix.cols())?;
    check_dim("second map source", total, l2.matrix.cols())?;
    for (name, m) in [("first", l), ("second", l2)] {
        let rep = Representation::new(m.target.clone(), p.joint_map().then_linear(&m.matrix))?;
        let a = agreement(&p.domain, &p.social, &rep, VERIFY_MIXTURES, VERIFY_SEED)?;
        if a.mismatch.is_some() {
            return Err(Error::NotRepresenting(format!(
                "{name} map does not represent the social order"
            )));
        }
    }
    let (im1, s1) = image_space(l)?;
    let (im2, s2) = image_space(l2)?;
    let coords = |im: &Subspace, m: &RMatrix| -> RMatrix {
        let cols: Vec<RVector> = (0..m.cols())
            .map(|j| im.coordinates(&m.column(j)).expect("column lies in the image"))
            .collect();
        RMatrix::from_columns(im.dim(), &cols)
    };
    let k1 = coords(&im1, &l.matrix);
    let k2 = coords(&im2, &l2.matrix);
    // M K1 = K2, one row of M at a time
    let kt = k1.transpose();
    let mut rows = Vec::with_capacity(im2.dim());
    for r in 0..im2.dim() {
        let y = solve_affine_system(&kt, k2.row(r))?
            .ok_or_else(|| Error::NotRepresenting("the maps have different kernels".into()))?;
        rows.push(y);
    }
    let m = RMatrix::from_rows(im1.dim(), rows);
    if m.rows() != m.cols() || m.inverse().is_none() {
        return Err(Error::NotRepresenting("image spaces are not isomorphic".into()));
    }
    let mm = PovsMap::new(s1.clone(), s2.clone(), m.clone())?;
    let back = PovsMap::new(s2, s1, m.inverse().expect("checked"))?;
    if !map_positivity(&mm).is_positive() || !map_positivity(&back).is_positive() {
        return Err(Error::NotRepresenting("M is not an order isomorphism".into()));
    }
    if m.mul(&k1) != k2 {
        return Err(Error::Internal("M L differs from L′".into()));
    }
    Ok(SynthesisComparison {
        m: mm,
        source_basis: im1,
        target_basis: im2,
    })
}

/// Relates two common-space results: one order isomorphism `T` and
/// constants `b_i` with `g′_i = T g_i + b_i`.
pub fn verify_common_space_uniqueness(
    p: &Profile,
    a: &CommonSpaceResult,
    b: &CommonSpaceResult,
) -> Result<UniquenessOutcome> {
    if !p.check_dr() {
        return Err(Error::DRRequired);
    }
    if a.reps.len() != b.reps.len() {
        return Err(Error::Invalid("results have different numbers of agents".into()));
    }
    let iso = representation_iso(&p.domain, &a.reps[0], &b.reps[0])?;
    let IsoOutcome::Iso { t, .. } = &iso else {
        return Ok(UniquenessOutcome::NotIsomorphic(iso));
    };
    let verts = p.domain.vertices();
    let mut offsets = Vec::with_capacity(a.reps.len());
    for (k, (ga, gb)) in a.reps.iter().zip(&b.reps).enumerate() {
        let bi = sub(&gb.at(&verts[0]), &t.apply(&ga.at(&verts[0])));
        if verts.iter().any(|x| add(&t.apply(&ga.at(x)), &bi) != gb.at(x)) {
            return Ok(UniquenessOutcome::Mismatch { agent: k });
        }
        offsets.push(bi);
    }
    Ok(UniquenessOutcome::Related { t: t.clone(), offsets })
}

/// A map and offset as an affine representation on the joint image.
pub fn compose(p: &Profile, l: &PovsMap, b: &[Rational]) -> Result<Representation> {
    Representation::new(l.target.clone(), p.joint_map().then_linear(&l.matrix).shifted(b))
}
