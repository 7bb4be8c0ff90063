//! Support patterns over the quotient roots and the moves acting on them.
//!
//! A pattern records which coefficients of a representative
//! `Σ α_β x(β)` are nonzero. The adjoint action of `x(μ)` for an m-root `μ`
//! maps the coefficient at `γ` into the one at `γ + μ` (and `γ + 2μ`, …), so
//! a move that zeroes one coefficient perturbs the others. Perturbed
//! coefficients that were zero become nonzero; perturbed coefficients that
//! were already nonzero may cancel, which is a branch.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::grading::{GradedPieces, OrbitProblem};
use crate::rootspace::{rank_of_vectors, RootId};

/// Bitmask over the quotient roots of one cell, in the order of
/// [`OrbitProblem::n_roots`].
pub type Mask = u32;

/// Largest number of quotient roots a pattern space accepts.
pub const MAX_ROOTS: usize = 20;

/// Nonzero coefficients of a representative, with the moves that led here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern {
    pub support: BTreeSet<RootId>,
    pub provenance: Vec<EliminationMove>,
}

impl SupportPattern {
    pub fn new(support: impl IntoIterator<Item = RootId>) -> Self {
        SupportPattern { support: support.into_iter().collect(), provenance: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, r: RootId) -> bool {
        self.support.contains(&r)
    }

    pub fn exprs(&self, ctx: &Context) -> Vec<String> {
        self.support.iter().map(|&r| ctx.roots.expr(r)).collect()
    }
}

/// A perturbation caused by a move: the coefficient at `source` feeds the
/// one at `lands_on`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SideEffect {
    pub source: RootId,
    pub lands_on: RootId,
    /// `lands_on` was outside the support and becomes nonzero.
    pub created: bool,
    /// `source` is an absorbed root: the perturbation comes from removing
    /// the component the move pushed onto it.
    pub absorbed: bool,
}

/// `x(actor)` applied to a representative with `pivot` in its support,
/// chosen to zero the coefficient at `target = actor + pivot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EliminationMove {
    pub actor: RootId,
    pub pivot: RootId,
    pub target: RootId,
    pub side_effects: Vec<SideEffect>,
}

impl EliminationMove {
    /// `x(μ) on pivot β kills τ`.
    pub fn describe(&self, ctx: &Context) -> String {
        let e = |r| ctx.roots.expr(r);
        let mut s = format!("x({}) on pivot {} kills {}", e(self.actor), e(self.pivot), e(self.target));
        let fx: Vec<String> = self
            .side_effects
            .iter()
            .map(|f| {
                let kind = if f.created { "creates" } else { "perturbs" };
                let via = if f.absorbed { " (absorbed)" } else { "" };
                format!("{} {} from {}{}", kind, e(f.lands_on), e(f.source), via)
            })
            .collect();
        if !fx.is_empty() {
            s.push_str(&format!(" ({})", fx.join(", ")));
        }
        s
    }
}

struct Actor {
    root: RootId,
    /// `up[g]`: index of `γ_g + μ` when it is a quotient root.
    up: Vec<Option<usize>>,
    /// `sources[g]`: indices of `γ_g − kμ`, `k ≥ 1`, that are quotient roots.
    sources: Vec<Vec<usize>>,
    /// `spill_sources[s]`: quotient roots `γ` with `σ_s − kμ = γ`, `k ≥ 1`.
    spill_sources: Vec<Vec<usize>>,
}

/// Coefficient at one quotient root after a move: how many monomials feed
/// it, and whether one of them may itself vanish.
#[derive(Clone, Copy, Default)]
struct Terms {
    count: usize,
    uncertain: bool,
}

impl Terms {
    fn add(&mut self, uncertain: bool) {
        self.count += 1;
        self.uncertain |= uncertain;
    }

    fn nonzero_possible(&self) -> bool {
        self.count >= 1
    }

    fn may_vanish(&self) -> bool {
        self.count >= 2 || self.uncertain
    }
}

/// Move outcome on masks: the coefficient branches that must all be handled.
#[derive(Clone, Debug)]
pub struct MaskMove {
    pub actor: usize,
    pub pivot: usize,
    pub target: usize,
    pub branches: Vec<Mask>,
}

/// Combinatorial data for one cell.
pub struct PatternSpace<'a> {
    pub ctx: &'a Context,
    pub prob: &'a OrbitProblem,
    pub roots: Vec<RootId>,
    index: HashMap<RootId, usize>,
    actors: Vec<Actor>,
    /// Roots of the nilradical of `P1` outside the quotient, absorbed into
    /// `x⁻¹N12x` or `N13`.
    spill: Vec<RootId>,
    /// `spill_up[s][g]`: index of `σ_s + γ_g` when it is a quotient root.
    spill_up: Vec<Vec<Option<usize>>>,
    /// `spill_pair[s][t]`: index of `σ_s + σ_t` when it is a quotient root.
    spill_pair: Vec<Vec<Option<usize>>>,
    corank: Vec<u8>,
}

impl<'a> PatternSpace<'a> {
    pub fn new(ctx: &'a Context, prob: &'a OrbitProblem) -> Self {
        let rs = &ctx.roots;
        let roots = prob.n_roots.clone();
        assert!(roots.len() <= MAX_ROOTS, "too many quotient roots for a pattern space");
        let index: HashMap<RootId, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let in_quotient = |v: crate::rootspace::RationalVector| rs.root_index(&v).and_then(|r| index.get(&r).copied());
        let spill: Vec<RootId> = (0..rs.num_roots())
            .filter(|&r| prob.lambda1.dot(&rs.vector(r)) > num_traits::Zero::zero() && !index.contains_key(&r))
            .collect();
        let spill_up: Vec<Vec<Option<usize>>> =
            spill.iter().map(|&s| roots.iter().map(|&g| in_quotient(rs.vector(s) + rs.vector(g))).collect()).collect();
        let spill_pair: Vec<Vec<Option<usize>>> =
            spill.iter().map(|&s| spill.iter().map(|&t| in_quotient(rs.vector(s) + rs.vector(t))).collect()).collect();
        let down = |target: RootId, m: crate::rootspace::RationalVector| {
            let mut out = Vec::new();
            let mut cur = rs.vector(target);
            // The string may pass through absorbed roots on its way down.
            loop {
                cur = cur - m;
                let Some(r) = rs.root_index(&cur) else { break };
                if let Some(&i) = index.get(&r) {
                    out.push(i);
                }
            }
            out
        };
        let mut actors = Vec::new();
        for &mu in &prob.m_roots {
            let m = rs.vector(mu);
            let up: Vec<Option<usize>> = roots
                .iter()
                .map(|&g| rs.root_index(&(rs.vector(g) + m)).and_then(|r| index.get(&r).copied()))
                .collect();
            if up.iter().all(Option::is_none) {
                continue;
            }
            let sources = roots.iter().map(|&g| down(g, m)).collect();
            let spill_sources = spill.iter().map(|&s| down(s, m)).collect();
            actors.push(Actor { root: mu, up, sources, spill_sources });
        }
        let vectors: Vec<_> = roots.iter().map(|&r| rs.vector(r)).collect();
        let corank = (0..1u32 << roots.len())
            .map(|mask| {
                let vs: Vec<_> = bits(mask).map(|i| vectors[i]).collect();
                (vs.len() - rank_of_vectors(&vs)) as u8
            })
            .collect();
        PatternSpace { ctx, prob, roots, index, actors, spill, spill_up, spill_pair, corank }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn full(&self) -> Mask {
        ((1u64 << self.roots.len()) - 1) as Mask
    }

    pub fn mask_of(&self, support: &BTreeSet<RootId>) -> Option<Mask> {
        support.iter().try_fold(0, |m, r| self.index.get(r).map(|&i| m | 1 << i))
    }

    pub fn pattern(&self, mask: Mask) -> SupportPattern {
        SupportPattern::new(bits(mask).map(|i| self.roots[i]))
    }

    /// `|S| − rank(S)`: the number of torus invariants of the stratum.
    pub fn corank(&self, mask: Mask) -> usize {
        self.corank[mask as usize] as usize
    }

    pub fn normalizable(&self, mask: Mask) -> bool {
        self.corank(mask) == 0
    }

    /// All moves on `mask`, with their coefficient branches.
    pub fn mask_moves(&self, mask: Mask) -> Vec<MaskMove> {
        let mut out = Vec::new();
        for (a, actor) in self.actors.iter().enumerate() {
            for p in bits(mask) {
                let Some(t) = actor.up[p] else { continue };
                if mask >> t & 1 == 0 {
                    continue;
                }
                out.push(MaskMove { actor: a, pivot: p, target: t, branches: self.branches(actor, mask, t) });
            }
        }
        out
    }

    /// Coefficients after `x(μ)` followed by re-normalizing into the
    /// quotient. Components pushed onto absorbed roots are removed by
    /// multiplying with `x⁻¹N12x` and `N13`; in a two-step nilradical this
    /// adds their brackets with the representative.
    fn move_terms(&self, actor: &Actor, mask: Mask, target: usize) -> Vec<Terms> {
        let n = self.roots.len();
        let mut first = vec![Terms::default(); n];
        for (g, t) in first.iter_mut().enumerate() {
            if mask >> g & 1 == 1 {
                t.add(false);
            }
            for &s in &actor.sources[g] {
                if mask >> s & 1 == 1 {
                    t.add(false);
                }
            }
        }
        let spilled: Vec<Terms> = actor
            .spill_sources
            .iter()
            .map(|src| {
                let mut t = Terms::default();
                for &s in src {
                    if mask >> s & 1 == 1 {
                        t.add(false);
                    }
                }
                t
            })
            .collect();
        let mut out = first.clone();
        for (s, ts) in spilled.iter().enumerate() {
            if !ts.nonzero_possible() {
                continue;
            }
            for (h, th) in first.iter().enumerate() {
                if h == target || !th.nonzero_possible() {
                    continue;
                }
                if let Some(g) = self.spill_up[s][h] {
                    out[g].add(ts.may_vanish() || th.may_vanish());
                }
            }
            for (u, tu) in spilled.iter().enumerate().skip(s + 1) {
                if !tu.nonzero_possible() {
                    continue;
                }
                if let Some(g) = self.spill_pair[s][u] {
                    out[g].add(ts.may_vanish() || tu.may_vanish());
                }
            }
        }
        out
    }

    fn branches(&self, actor: &Actor, mask: Mask, target: usize) -> Vec<Mask> {
        let mut generic: Mask = 0;
        let mut cancellable = Vec::new();
        for (g, t) in self.move_terms(actor, mask, target).iter().enumerate() {
            if g == target {
                continue;
            }
            if t.nonzero_possible() {
                generic |= 1 << g;
            }
            if t.may_vanish() {
                cancellable.push(g);
            }
        }
        (0..1u32 << cancellable.len())
            .map(|sub| {
                cancellable
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sub >> i & 1 == 1)
                    .fold(generic, |m, (_, &g)| m & !(1 << g))
            })
            .collect()
    }

    /// The m-root acting in a [`MaskMove`].
    pub fn actor_root(&self, actor: usize) -> RootId {
        self.actors[actor].root
    }

    pub fn is_move_free(&self, mask: Mask) -> bool {
        self.actors.iter().all(|actor| bits(mask).all(|p| actor.up[p].map_or(true, |t| mask >> t & 1 == 0)))
    }

    pub fn elimination_move(&self, mask: Mask, mv: &MaskMove) -> EliminationMove {
        let actor = &self.actors[mv.actor];
        let mut side_effects = Vec::new();
        for g in 0..self.roots.len() {
            for &s in &actor.sources[g] {
                if mask >> s & 1 == 1 && (s, g) != (mv.pivot, mv.target) {
                    side_effects.push(SideEffect {
                        source: self.roots[s],
                        lands_on: self.roots[g],
                        created: mask >> g & 1 == 0,
                        absorbed: false,
                    });
                }
            }
        }
        let first = |h: usize| mask >> h & 1 == 1 || actor.sources[h].iter().any(|&s| mask >> s & 1 == 1);
        for (s, src) in actor.spill_sources.iter().enumerate() {
            if !src.iter().any(|&g| mask >> g & 1 == 1) {
                continue;
            }
            let lands = (0..self.roots.len())
                .filter(|&h| h != mv.target && first(h))
                .filter_map(|h| self.spill_up[s][h])
                .chain(actor.spill_sources.iter().enumerate().filter_map(|(u, su)| {
                    (u != s && su.iter().any(|&g| mask >> g & 1 == 1)).then_some(self.spill_pair[s][u]).flatten()
                }));
            for g in lands.collect::<Vec<_>>() {
                side_effects.push(SideEffect {
                    source: self.spill[s],
                    lands_on: self.roots[g],
                    created: mask >> g & 1 == 0,
                    absorbed: true,
                });
            }
        }
        side_effects.sort();
        side_effects.dedup();
        EliminationMove { actor: actor.root, pivot: self.roots[mv.pivot], target: self.roots[mv.target], side_effects }
    }

    /// Terminal patterns reachable from `start`, each with one move
    /// sequence leading to it.
    pub fn reachable_terminals(&self, start: Mask) -> BTreeMap<Mask, Vec<EliminationMove>> {
        let mut parent: HashMap<Mask, Option<(Mask, EliminationMove)>> = HashMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        let mut terminals = Vec::new();
        while let Some(m) = queue.pop_front() {
            let moves = self.mask_moves(m);
            if moves.is_empty() {
                terminals.push(m);
                continue;
            }
            for mv in &moves {
                for &b in &mv.branches {
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(b) {
                        e.insert(Some((m, self.elimination_move(m, mv))));
                        queue.push_back(b);
                    }
                }
            }
        }
        terminals
            .into_iter()
            .map(|t| {
                let mut path = Vec::new();
                let mut cur = t;
                while let Some(Some((prev, mv))) = parent.get(&cur) {
                    path.push(mv.clone());
                    cur = *prev;
                }
                path.reverse();
                (t, path)
            })
            .collect()
    }
}

/// Indices of the set bits of a mask, in increasing order.
pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..Mask::BITS as usize).filter(move |i| mask >> i & 1 == 1)
}

/// All moves applicable to `pattern`.
pub fn available_moves(
    ctx: &Context,
    prob: &OrbitProblem,
    pieces: &GradedPieces,
    pattern: &SupportPattern,
) -> Vec<EliminationMove> {
    let space = PatternSpace::new(ctx, prob);
    let Some(mask) = space.mask_of(&pattern.support) else {
        return Vec::new();
    };
    let mut moves: Vec<EliminationMove> =
        space.mask_moves(mask).iter().map(|mv| space.elimination_move(mask, mv)).collect();
    // Side effects are listed in increasing level order.
    for mv in &mut moves {
        mv.side_effects.sort_by_key(|f| (pieces.level_of(f.lands_on), f.lands_on, f.source));
    }
    moves
}

/// Inclusion-minimal terminal patterns reachable from `pattern`, exploring
/// every move and every cancellation branch.
pub fn reduce_pattern(ctx: &Context, prob: &OrbitProblem, pattern: &SupportPattern) -> Vec<SupportPattern> {
    let space = PatternSpace::new(ctx, prob);
    let Some(start) = space.mask_of(&pattern.support) else {
        return vec![pattern.clone()];
    };
    let terminals = space.reachable_terminals(start);
    let masks: Vec<Mask> = terminals.keys().copied().collect();
    terminals
        .into_iter()
        .filter(|(m, _)| !masks.iter().any(|&o| o != *m && o & *m == o))
        .map(|(m, path)| {
            let mut p = space.pattern(m);
            p.provenance = pattern.provenance.iter().cloned().chain(path).collect();
            p
        })
        .collect()
}

/// True iff `support` is linearly independent, so the torus scales every
/// coefficient to 1.
pub fn torus_normalizable(ctx: &Context, support: &BTreeSet<RootId>) -> bool {
    let vs: Vec<_> = support.iter().map(|&r| ctx.roots.vector(r)).collect();
    rank_of_vectors(&vs) == vs.len()
}
