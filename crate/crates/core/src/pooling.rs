//! Vector measures on finite Boolean algebras, their extension to extended
//! events, linear pooling, and range-convexity diagnostics.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aggregate::{solve_affine, synthesize, AffineSolution, SolveOutcome, SynthesisResult};
use crate::cone::OrderRelationResult;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{add, is_zero, zeros, AffineMap, RMatrix, RVector};
use crate::pareto::{check_all, Axiom, AxiomSummary};
use crate::povs::Povs;
use crate::profile::{Domain, Profile, Representation};
use crate::rational::{common_denominator, Rational};

/// Events are bitmasks over the atoms.
pub type Event = u64;

pub const MAX_ATOMS: usize = 64;
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub atoms: Vec<String>,
}

impl FiniteAlgebra {
    pub fn new(atoms: Vec<String>) -> Result<FiniteAlgebra> {
        if atoms.len() > MAX_ATOMS {
            return Err(Error::Invalid(format!("at most {MAX_ATOMS} atoms are supported")));
        }
        let mut seen = HashSet::new();
        for a in &atoms {
            if !seen.insert(a) {
                return Err(Error::Invalid(format!("duplicate atom {a:?}")));
            }
        }
        Ok(FiniteAlgebra { atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn full(&self) -> Event {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn event<S: AsRef<str>>(&self, names: &[S]) -> Result<Event> {
        let mut e = 0;
        for n in names {
            let i = self
                .atoms
                .iter()
                .position(|a| a == n.as_ref())
                .ok_or_else(|| Error::Invalid(format!("unknown atom {:?}", n.as_ref())))?;
            e |= 1 << i;
        }
        Ok(e)
    }

    pub fn names(&self, e: Event) -> Vec<String> {
        (0..self.len())
            .filter(|i| e >> i & 1 == 1)
            .map(|i| self.atoms[i].clone())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorMeasure {
    pub target: Povs,
    pub atom_values: Vec<RVector>,
}

impl VectorMeasure {
    pub fn new(target: Povs, atom_values: Vec<RVector>) -> Result<VectorMeasure> {
        if atom_values.len() > MAX_ATOMS {
            return Err(Error::Invalid(format!("at most {MAX_ATOMS} atoms are supported")));
        }
        for v in &atom_values {
            check_dim("atom value", target.dim(), v.len())?;
        }
        Ok(VectorMeasure { target, atom_values })
    }

    pub fn atom_count(&self) -> usize {
        self.atom_values.len()
    }

    pub fn measure_of(&self, e: Event) -> Result<RVector> {
        let n = self.atom_count();
        if n < 64 && e >> n != 0 {
            return Err(Error::Invalid("event mentions an unknown atom".into()));
        }
        let mut s = zeros(self.target.dim());
        for (i, v) in self.atom_values.iter().enumerate() {
            if e >> i & 1 == 1 {
                s = add(&s, v);
            }
        }
        Ok(s)
    }

    pub fn likelihood_compare(&self, a: Event, b: Event) -> Result<OrderRelationResult> {
        self.target.classify(&self.measure_of(a)?, &self.measure_of(b)?)
    }

    /// The affine extension to extended events `F ∈ [0,1]^n`: `F ↦ Σ F_j f(E_j)`.
    pub fn extend(&self) -> Representation {
        let m = RMatrix::from_columns(self.target.dim(), &self.atom_values);
        Representation {
            target: self.target.clone(),
            map: AffineMap::linear(m),
        }
    }

    /// Inverse of [`VectorMeasure::extend`] on representations vanishing at `χ_∅`.
    pub fn restrict(rep: &Representation) -> Result<VectorMeasure> {
        if !is_zero(&rep.map.offset) {
            return Err(Error::NotZeroAtEmpty);
        }
        let n = rep.map.input_dim();
        let values = (0..n).map(|j| rep.map.matrix.column(j)).collect();
        let vm = VectorMeasure::new(rep.target.clone(), values)?;
        debug_assert_eq!(&vm.extend(), rep);
        Ok(vm)
    }

    /// `f(A) ≿ 0` for every event, and `f(A) ≻ 0` for some event.
    pub fn positivity_nontriviality(&self) -> PositivityReport {
        let t = &self.target;
        let n = self.atom_count();
        let zero = zeros(t.dim());
        // Events are sums of atoms and the cone is closed under sums, so the
        // atomwise test decides positivity on its own.
        let positive = self.atom_values.iter().all(|v| t.contains(v));
        let strictly = |v: &RVector| t.contains(v) && !t.contains(&v.iter().map(|x| -x).collect::<Vec<_>>());
        if self.atom_values.iter().any(strictly) {
            return PositivityReport {
                positive,
                nontrivial: true,
                complete: true,
            };
        }
        if positive {
            // every event is then ≿ 0, and a sum of atoms each ∼ 0 is ∼ 0
            return PositivityReport {
                positive,
                nontrivial: false,
                complete: true,
            };
        }
        if n > ENUMERATION_LIMIT {
            return PositivityReport {
                positive,
                nontrivial: false,
                complete: false,
            };
        }
        let nontrivial = (1u64..1 << n).into_par_iter().any(|e| {
            let v = self.measure_of(e).expect("event within range");
            v != zero && strictly(&v)
        });
        PositivityReport {
            positive,
            nontrivial,
            complete: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub positive: bool,
    pub nontrivial: bool,
    /// False when the event enumeration cap was hit.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct PoolingReport {
    pub profile: Profile,
    pub axioms: AxiomSummary,
    pub synthesis: SynthesisResult,
    /// `f_0 = L f_I + b`, present when DR holds.
    pub affine: Option<AffineSolution>,
}

/// The extended-event profile of a pooling problem.
pub fn pooling_profile(individuals: &[VectorMeasure], social: &VectorMeasure) -> Result<Profile> {
    let n = social.atom_count();
    for vm in individuals {
        check_dim("individual measure atoms", n, vm.atom_count())?;
    }
    Profile::new(
        Domain::Cube(n),
        individuals.iter().map(|m| m.extend()).collect(),
        social.extend(),
    )
}

pub fn pool(algebra: &FiniteAlgebra, individuals: &[VectorMeasure], social: &VectorMeasure) -> Result<PoolingReport> {
    check_dim("social measure atoms", algebra.len(), social.atom_count())?;
    let profile = pooling_profile(individuals, social)?;
    let axioms = check_all(&profile)?;
    if let Some(r) = axioms.first_failure() {
        return Err(Error::AxiomFailed(Box::new(r.clone())));
    }
    let synthesis = synthesize(&profile, Axiom::P4)?;
    let affine = if axioms.dr {
        match solve_affine(&profile)? {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::NoP1(_) => {
                return Err(Error::Internal(
                    "P1 passed but the affine system is inconsistent".into(),
                ))
            }
        }
    } else {
        None
    };
    Ok(PoolingReport {
        profile,
        axioms,
        synthesis,
        affine,
    })
}

/// One step of a cancellation sequence: `a ≿ b` was assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfcViolation {
    pub premises: Vec<(Event, Event)>,
    /// `Σ(1_{A_t} − 1_{B_t}) = r (1_B − 1_A)` but `B ≿ A` fails.
    pub a: Event,
    pub b: Event,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfcReport {
    pub holds: bool,
    pub violation: Option<GfcViolation>,
    /// Always the sequence-cancellation schema; recorded so reports say which.
    pub schema: &'static str,
}

pub const GFC_SCHEMA: &str = "sequence-cancellation";

pub const GFC_ATOM_LIMIT: usize = 8;

type Imbalance = Vec<i32>;

fn imbalance(n: usize, a: Event, b: Event) -> Imbalance {
    (0..n).map(|i| ((a >> i & 1) as i32) - ((b >> i & 1) as i32)).collect()
}

/// Generalized finite cancellation, brute force: whenever `A_t ≿ B_t` for
/// `t = 1..m` and `Σ_t (1_{A_t} − 1_{B_t}) = r (1_B − 1_A)` with
/// `m + r ≤ k_max`, the relation must have `B ≿ A`.
pub fn gfc_check<F>(n: usize, geq: F, k_max: usize) -> Result<GfcReport>
where
    F: Fn(Event, Event) -> bool + Sync,
{
    if n > GFC_ATOM_LIMIT {
        return Err(Error::Invalid(format!(
            "cancellation check limited to {GFC_ATOM_LIMIT} atoms"
        )));
    }
    let events: Vec<Event> = (0..1u64 << n).collect();
    let mut deltas: Vec<(Imbalance, (Event, Event))> = Vec::new();
    let mut seen: HashSet<Imbalance> = HashSet::new();
    for &a in &events {
        for &b in &events {
            if a != b && geq(a, b) {
                let d = imbalance(n, a, b);
                if seen.insert(d.clone()) {
                    deltas.push((d, (a, b)));
                }
            }
        }
    }
    let delta_set: std::collections::HashMap<Imbalance, (Event, Event)> = deltas.iter().cloned().collect();
    // achievable sums of m premise imbalances, searched depth first
    fn reach(
        target: &[i32],
        m: usize,
        deltas: &[(Imbalance, (Event, Event))],
        set: &std::collections::HashMap<Imbalance, (Event, Event)>,
    ) -> Option<Vec<(Event, Event)>> {
        if m == 0 {
            return target.iter().all(|x| *x == 0).then(Vec::new);
        }
        if m == 1 {
            return set.get(target).map(|p| vec![*p]);
        }
        if target.iter().any(|x| x.unsigned_abs() as usize > m) {
            return None;
        }
        for (d, pair) in deltas {
            let rest: Vec<i32> = target.iter().zip(d).map(|(t, x)| t - x).collect();
            if let Some(mut seq) = reach(&rest, m - 1, deltas, set) {
                seq.push(*pair);
                return Some(seq);
            }
        }
        None
    }
    let pairs: Vec<(Event, Event)> = events
        .iter()
        .flat_map(|&a| events.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a != b && !geq(b, a))
        .collect();
    let found = pairs.par_iter().find_map_first(|&(a, b)| {
        let base = imbalance(n, b, a);
        for r in 1..k_max {
            for m in 1..=k_max - r {
                let target: Vec<i32> = base.iter().map(|x| x * r as i32).collect();
                if let Some(seq) = reach(&target, m, &deltas, &delta_set) {
                    return Some(GfcViolation {
                        premises: seq,
                        a,
                        b,
                        multiplicity: r,
                    });
                }
            }
        }
        None
    });
    Ok(GfcReport {
        holds: found.is_none(),
        violation: found,
        schema: GFC_SCHEMA,
    })
}

/// [`gfc_check`] for the likelihood relation of a vector measure.
pub fn gfc_check_measure(vm: &VectorMeasure, k_max: usize) -> Result<GfcReport> {
    let n = vm.atom_count();
    if n > GFC_ATOM_LIMIT {
        return Err(Error::Invalid(format!(
            "cancellation check limited to {GFC_ATOM_LIMIT} atoms"
        )));
    }
    let values: Vec<RVector> = (0..1u64 << n).map(|e| vm.measure_of(e)).collect::<Result<_>>()?;
    let t = &vm.target;
    gfc_check(
        n,
        |a, b| {
            let d: RVector = values[a as usize]
                .iter()
                .zip(&values[b as usize])
                .map(|(x, y)| x - y)
                .collect();
            t.contains(&d)
        },
        k_max,
    )
}

pub const LYAPUNOV_ATOM_LIMIT: usize = 20;
pub const LYAPUNOV_EXHAUSTIVE_POINTS: usize = 300;
pub const LYAPUNOV_SAMPLES: usize = 20_000;
pub const LYAPUNOV_SEED: u64 = 0x1ea9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyapunovReport {
    pub gap: Rational,
    pub range_points: usize,
    pub pairs_checked: usize,
    pub exhaustive: bool,
}

/// Largest ∞-norm distance from the midpoint of two range points of
/// `A ↦ (μ_1(A), …, μ_k(A))` to the nearest range point.
pub fn lyapunov_gap(n: usize, measures: &[RVector]) -> Result<LyapunovReport> {
    if n > LYAPUNOV_ATOM_LIMIT {
        return Err(Error::Invalid(format!(
            "range enumeration limited to {LYAPUNOV_ATOM_LIMIT} atoms"
        )));
    }
    for m in measures {
        check_dim("measure atoms", n, m.len())?;
    }
    let k = measures.len();
    // integer coordinates scaled by twice the common denominator, so that
    // midpoints stay integral
    let den = common_denominator(measures.iter().flatten());
    let scale = BigInt::from(2) * &den;
    let to_int = |x: &Rational| -> Result<i128> {
        (x * Rational::from_integer(scale.clone()))
            .to_integer()
            .to_i128()
            .ok_or_else(|| Error::Invalid("measure values too large".into()))
    };
    let atoms: Vec<Vec<i128>> = (0..n)
        .map(|j| measures.iter().map(|m| to_int(&m[j])).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut range: HashSet<Vec<i128>> = HashSet::new();
    for e in 0..1u64 << n {
        let mut p = vec![0i128; k];
        for (j, a) in atoms.iter().enumerate() {
            if e >> j & 1 == 1 {
                for (x, y) in p.iter_mut().zip(a) {
                    *x += y;
                }
            }
        }
        range.insert(p);
    }
    let mut pts: Vec<Vec<i128>> = range.into_iter().collect();
    pts.sort();
    let nearest = |mid: &[i128]| -> i128 {
        // distances are in doubled units
        pts.iter()
            .map(|p| p.iter().zip(mid).map(|(a, b)| (2 * a - b).abs()).max().unwrap_or(0))
            .min()
            .unwrap_or(0)
    };
    let exhaustive = pts.len() <= LYAPUNOV_EXHAUSTIVE_POINTS;
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..pts.len())
            .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(LYAPUNOV_SEED);
        (0..LYAPUNOV_SAMPLES)
            .map(|_| (rng.gen_range(0..pts.len()), rng.gen_range(0..pts.len())))
            .collect()
    };
    let worst = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mid: Vec<i128> = pts[i].iter().zip(&pts[j]).map(|(a, b)| a + b).collect();
            nearest(&mid)
        })
        .max()
        .unwrap_or(0);
    let gap = Rational::new(BigInt::from(worst), BigInt::from(2) * scale);
    Ok(LyapunovReport {
        gap,
        range_points: pts.len(),
        pairs_checked: pairs.len(),
        exhaustive,
    })
}

/// `n` atoms of mass `1/n` each.
pub fn uniform(n: usize) -> RVector {
    vec![Rational::new(BigInt::one(), BigInt::from(n)); n]
}
