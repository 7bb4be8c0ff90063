//! Finiteness decision for one cell, orbit counts and open-orbit checks.
//!
//! Every point of the quotient `x⁻¹N12x \ N1 / N13` lies in exactly one
//! support stratum. A stratum is *resolved* when it is covered by finitely
//! many orbits of the cell stabilizer, which is established in one of three
//! ways:
//!
//! * its support is linearly independent, so the torus alone acts
//!   transitively on it;
//! * its support has a single torus invariant and the rank of the
//!   infinitesimal action shows the stratum lies in one orbit closure with
//!   no modulus;
//! * some elimination move sends it into resolved strata on every
//!   coefficient branch.
//!
//! The resolved set is the least fixed point of these rules, so the verdict
//! does not depend on the order in which patterns are visited.

pub mod patterns;
pub mod rank;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::Result;
use crate::grading::{grading_levels, GammaChoice, GradedPieces, OrbitProblem};
use crate::linalg::integer_relation;
use crate::parabolic::ParabolicSubgroup;
use crate::rootspace::{RationalVector, RootId};

pub use patterns::{
    available_moves, reduce_pattern, torus_normalizable, EliminationMove, Mask, PatternSpace, SideEffect,
    SupportPattern,
};
pub use rank::{BracketTable, CellGeometry, StratumRanks};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "FINITE")]
    Finite,
    #[serde(rename = "INFINITE")]
    Infinite,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Finite => "FINITE",
            Verdict::Infinite => "INFINITE",
        })
    }
}

/// An unresolved stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub pattern: SupportPattern,
    /// Integer relation among the support roots, in support order.
    pub relation: Vec<i64>,
    /// Positive when the rank of the infinitesimal action proves the stratum
    /// carries a modulus.
    pub modality: Option<usize>,
    pub explanation: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitenessVerdict {
    pub outcome: Verdict,
    /// Move-free patterns: one representative per orbit when finite.
    pub canonical_forms: Vec<SupportPattern>,
    pub witness: Option<Witness>,
    pub orbit_count: Option<usize>,
    /// Strata settled by the rank rule rather than by moves.
    pub rank_resolved: usize,
}

/// Tuning for [`decide_finiteness_with`].
#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    pub seed: u64,
    /// Random points per stratum in the modality test.
    pub trials: usize,
    /// Unresolved strata tested for a rank certificate before giving up.
    pub certificate_budget: usize,
    /// Grading used to tell unipotent actors from reductive ones in the
    /// witness search; the automatic choice when absent.
    pub gamma: Option<RationalVector>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { seed: 0x5eed, trials: 2, certificate_budget: 256, gamma: None }
    }
}

/// Seed for one stratum, independent of visiting order.
fn stratum_seed(seed: u64, mask: Mask) -> u64 {
    seed ^ (mask as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn decide_finiteness(ctx: &Context, prob: &OrbitProblem) -> Result<FinitenessVerdict> {
    decide_finiteness_with(ctx, prob, &EngineOptions::default())
}

pub fn decide_finiteness_with(ctx: &Context, prob: &OrbitProblem, opts: &EngineOptions) -> Result<FinitenessVerdict> {
    let space = PatternSpace::new(ctx, prob);
    let brackets = BracketTable::new(&ctx.lie);
    let geo = CellGeometry::new(ctx, prob, &brackets);
    let size = 1usize << space.len();
    let modality = |mask: Mask| -> StratumRanks {
        let support: Vec<RootId> = patterns::bits(mask).map(|i| space.roots[i]).collect();
        let mut rng = rank::seeded_rng(stratum_seed(opts.seed, mask));
        rank::stratum_modality(&geo, &support, opts.trials, &mut rng)
    };

    let mut resolved: Vec<bool> = (0..size).map(|m| space.normalizable(m as Mask)).collect();
    let moves: Vec<Vec<Vec<Mask>>> = (0..size)
        .map(|m| {
            if resolved[m] {
                Vec::new()
            } else {
                space.mask_moves(m as Mask).into_iter().map(|mv| mv.branches).collect()
            }
        })
        .collect();
    let mut checked = vec![false; size];
    let mut rank_resolved = 0;
    loop {
        let mut changed = true;
        while changed {
            changed = false;
            for m in 0..size {
                if resolved[m] {
                    continue;
                }
                let ok = moves[m].iter().any(|br| br.iter().all(|&b| b as usize != m && resolved[b as usize]));
                if ok {
                    resolved[m] = true;
                    changed = true;
                }
            }
        }
        let candidates: Vec<usize> =
            (0..size).filter(|&m| !resolved[m] && !checked[m] && space.corank(m as Mask) == 1).collect();
        if candidates.is_empty() {
            break;
        }
        let mut any = false;
        for m in candidates {
            checked[m] = true;
            if modality(m as Mask).modality() == 0 {
                resolved[m] = true;
                rank_resolved += 1;
                any = true;
            }
        }
        if !any {
            break;
        }
    }

    let canonical_forms: Vec<SupportPattern> =
        (0..size as Mask).filter(|&m| space.is_move_free(m)).map(|m| space.pattern(m)).collect();
    let unresolved: Vec<Mask> = (0..size as Mask).filter(|&m| !resolved[m as usize]).collect();
    if unresolved.is_empty() {
        let count = canonical_forms.len();
        return Ok(FinitenessVerdict {
            outcome: Verdict::Finite,
            canonical_forms,
            witness: None,
            orbit_count: Some(count),
            rank_resolved,
        });
    }
    let witness = choose_witness(ctx, &space, &unresolved, opts, &modality);
    Ok(FinitenessVerdict {
        outcome: Verdict::Infinite,
        canonical_forms,
        witness: Some(witness),
        orbit_count: None,
        rank_resolved,
    })
}

/// Strata reachable from `start` through moves on the generic coefficient
/// branch: the supports a generic point of `start` can be brought to.
pub fn generic_reductions(space: &PatternSpace, start: Mask, actors: &dyn Fn(RootId) -> bool) -> BTreeSet<Mask> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = vec![start];
    while let Some(m) = queue.pop() {
        for mv in space.mask_moves(m).into_iter().filter(|mv| actors(space.actor_root(mv.actor))) {
            let generic = mv.branches[0];
            if seen.insert(generic) {
                queue.push(generic);
            }
        }
    }
    seen
}

/// The smallest stratum reachable from a generic point of `start` that
/// carries a rank-certified modulus, ties broken by mask.
pub fn certified_witness(
    ctx: &Context,
    space: &PatternSpace,
    start: Mask,
    actors: &dyn Fn(RootId) -> bool,
    accept: &dyn Fn(Mask) -> bool,
    opts: &EngineOptions,
    modality: &dyn Fn(Mask) -> StratumRanks,
) -> Option<Witness> {
    let mut order: Vec<Mask> = generic_reductions(space, start, actors).into_iter().filter(|&m| accept(m)).collect();
    order.sort_by_key(|&m| (m.count_ones(), m));
    order.into_iter().take(opts.certificate_budget.max(1)).find_map(|m| {
        let k = modality(m).modality();
        (k > 0).then(|| build_witness(ctx, space, m, Some(k)))
    })
}

/// Witness for a cell the fixpoint left unresolved: a certified stratum met
/// by the generic point under the unipotent part of the acting group, then
/// under the whole group, else the smallest certified unresolved stratum,
/// else the smallest unresolved stratum.
fn choose_witness(
    ctx: &Context,
    space: &PatternSpace,
    unresolved: &[Mask],
    opts: &EngineOptions,
    modality: &dyn Fn(Mask) -> StratumRanks,
) -> Witness {
    let open: BTreeSet<Mask> = unresolved.iter().copied().collect();
    let accept = |m: Mask| open.contains(&m);
    let zero = crate::rootspace::Q::from_integer(0);
    let choice = opts.gamma.map_or(GammaChoice::Auto, GammaChoice::Given);
    if let Ok(pieces) = grading_levels(ctx, space.prob, &choice) {
        let unipotent = |r: RootId| pieces.level_of(r).is_some_and(|l| l > zero);
        if let Some(w) = certified_witness(ctx, space, space.full(), &unipotent, &accept, opts, modality) {
            return w;
        }
    }
    if let Some(w) = certified_witness(ctx, space, space.full(), &|_| true, &accept, opts, modality) {
        return w;
    }
    let mut order: Vec<Mask> = unresolved.to_vec();
    order.sort_by_key(|&m| (m.count_ones(), m));
    for &m in order.iter().take(opts.certificate_budget.max(1)) {
        let k = modality(m).modality();
        if k > 0 {
            return build_witness(ctx, space, m, Some(k));
        }
    }
    build_witness(ctx, space, order[0], None)
}

/// Witness search restricted to representatives supported on `family`,
/// reducing with the unipotent part of the acting group only: actors of
/// positive level under `pieces`.
pub fn family_witness(
    ctx: &Context,
    prob: &OrbitProblem,
    family: &[RootId],
    pieces: &GradedPieces,
    opts: &EngineOptions,
) -> Option<Witness> {
    let space = PatternSpace::new(ctx, prob);
    let start = space.mask_of(&family.iter().copied().collect())?;
    let brackets = BracketTable::new(&ctx.lie);
    let geo = CellGeometry::new(ctx, prob, &brackets);
    let modality = |mask: Mask| -> StratumRanks {
        let support: Vec<RootId> = patterns::bits(mask).map(|i| space.roots[i]).collect();
        let mut rng = rank::seeded_rng(stratum_seed(opts.seed, mask));
        rank::stratum_modality(&geo, &support, opts.trials, &mut rng)
    };
    let zero = crate::rootspace::Q::from_integer(0);
    let unipotent = |r: RootId| pieces.level_of(r).is_some_and(|l| l > zero);
    certified_witness(ctx, &space, start, &unipotent, &|m| m & !start == 0, opts, &modality)
}

fn build_witness(ctx: &Context, space: &PatternSpace, mask: Mask, modality: Option<usize>) -> Witness {
    let pattern = space.pattern(mask);
    let vectors: Vec<Vec<_>> = pattern.support.iter().map(|&r| ctx.roots.vector(r).coords().to_vec()).collect();
    let relation = integer_relation(&vectors).unwrap_or_default();
    let mut explanation = if space.is_move_free(mask) {
        "no move applies and the support is linearly dependent, so the torus cannot scale every coefficient to 1"
            .to_string()
    } else {
        "every move on this stratum leads back to unresolved strata on some coefficient branch".to_string()
    };
    if let Some(k) = modality {
        explanation.push_str(&format!("; the stratum carries {k} continuous modulus (rank certificate)"));
    }
    Witness { pattern, relation, modality, explanation }
}

/// Rank of the infinitesimal action on the quotient at random rational
/// points: `|n-roots|` exactly when the cell has a dense orbit.
pub fn generic_rank_oracle(ctx: &Context, prob: &OrbitProblem, trials: usize, seed: u64) -> usize {
    if prob.n_roots.is_empty() {
        return 0;
    }
    let brackets = BracketTable::new(&ctx.lie);
    let geo = CellGeometry::new(ctx, prob, &brackets);
    let fixed = geo.n1_dim() - prob.n_roots.len();
    let mut rng = rank::seeded_rng(seed);
    (0..trials.max(1))
        .map(|_| {
            let point = rank::random_rational_point(&prob.n_roots, &mut rng);
            let (orbit, _) = rank::ranks_at(&geo, &point, &[]);
            orbit.saturating_sub(fixed)
        })
        .max()
        .unwrap_or(0)
}

/// Result of the dense-orbit test on a triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenOrbitReport {
    pub open: bool,
    /// The all-nonzero pattern of the longest cell reduces to a
    /// torus-normalizable form.
    pub pattern_reduces: bool,
    pub oracle_rank: usize,
    pub n_roots: usize,
    pub dimension_ok: bool,
}

/// Dense-orbit test: decided by the rank oracle on the longest cell, with
/// the pattern reduction of the all-nonzero representative recorded
/// alongside.
pub fn open_orbit_check(
    ctx: &Context,
    p1: &ParabolicSubgroup,
    p2: &ParabolicSubgroup,
    p3: &ParabolicSubgroup,
    seed: u64,
) -> Result<OpenOrbitReport> {
    let total = p1.flag_dimension() + p2.flag_dimension() + p3.flag_dimension();
    if total > ctx.group_dimension() {
        return Ok(OpenOrbitReport {
            open: false,
            pattern_reduces: false,
            oracle_rank: 0,
            n_roots: 0,
            dimension_ok: false,
        });
    }
    let prob = OrbitProblem::longest_cell(ctx, p1, p2, p3)?;
    let n = prob.n_roots.len();
    let oracle_rank = generic_rank_oracle(ctx, &prob, 2, seed);
    let full = SupportPattern::new(prob.n_roots.iter().copied());
    let pattern_reduces = reduce_pattern(ctx, &prob, &full).iter().any(|p| torus_normalizable(ctx, &p.support));
    Ok(OpenOrbitReport { open: oracle_rank == n, pattern_reduces, oracle_rank, n_roots: n, dimension_ok: true })
}

/// Moves taking a generic point of the full quotient to a smaller support,
/// always following the generic coefficient branch and stopping when no
/// move shrinks the support. At each step the move killing the
/// lowest-level target is taken, ties broken by pivot level and then by
/// actor.
pub fn reduction_transcript(ctx: &Context, prob: &OrbitProblem, pieces: &GradedPieces) -> Vec<EliminationMove> {
    let space = PatternSpace::new(ctx, prob);
    let mut mask = space.full();
    let mut out = Vec::new();
    loop {
        let best =
            space.mask_moves(mask).into_iter().filter(|mv| mv.branches[0].count_ones() < mask.count_ones()).min_by_key(
                |mv| {
                    let (t, p, a) = (space.roots[mv.target], space.roots[mv.pivot], space.actor_root(mv.actor));
                    (pieces.level_of(t), pieces.level_of(p), a, p)
                },
            );
        let Some(mv) = best else { break };
        let mut em = space.elimination_move(mask, &mv);
        em.side_effects.sort_by_key(|f| (pieces.level_of(f.lands_on), f.lands_on, f.source));
        out.push(em);
        mask = mv.branches[0];
    }
    out
}
