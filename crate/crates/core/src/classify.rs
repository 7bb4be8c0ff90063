//! End-to-end driver: dimension prefilter, cell enumeration, per-triple
//! verdicts, the full classification and its monotonicity check.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::grading::{x_generators, OrbitProblem};
use crate::orbits::{
    decide_finiteness_with, open_orbit_check, EngineOptions, FinitenessVerdict, OpenOrbitReport, Verdict,
};
use crate::parabolic::{ParabolicSubgroup, ParabolicSummary};
use crate::weyl::ElemId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "FINITE")]
    Finite,
    #[serde(rename = "INFINITE")]
    Infinite,
    #[serde(rename = "ELIMINATED_BY_DIMENSION")]
    EliminatedByDimension,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Finite => "FINITE",
            Outcome::Infinite => "INFINITE",
            Outcome::EliminatedByDimension => "ELIMINATED_BY_DIMENSION",
        })
    }
}

/// One `(w, v, x)` cell of a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub w: ElemId,
    pub v: ElemId,
    pub x: ElemId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellVerdict {
    pub cell: Cell,
    pub verdict: FinitenessVerdict,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub triple: [ParabolicSubgroup; 3],
    pub outcome: Outcome,
    /// Verdicts of the cells examined, in enumeration order. With early exit
    /// this stops at the first infinite cell.
    pub per_cell: Vec<CellVerdict>,
    /// Number of cells of the triple, examined or not.
    pub total_cells: usize,
    pub open_orbit: bool,
    pub open_orbit_detail: Option<OpenOrbitReport>,
    pub timing: Duration,
}

impl ClassificationReport {
    pub fn labels(&self) -> [String; 3] {
        self.triple.clone().map(|p| p.label)
    }

    pub fn flag_dimension_sum(&self) -> usize {
        self.triple.iter().map(ParabolicSubgroup::flag_dimension).sum()
    }

    pub fn infinite_cells(&self) -> impl Iterator<Item = &CellVerdict> {
        self.per_cell.iter().filter(|c| c.verdict.outcome == Verdict::Infinite)
    }
}

/// Tuning for the driver.
#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Stop at the first infinite cell.
    pub early_exit: bool,
    /// Worker threads; `None` uses the default pool.
    pub workers: Option<usize>,
    pub engine: EngineOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { early_exit: true, workers: None, engine: EngineOptions::default() }
    }
}

impl ClassifyOptions {
    /// Examines every cell, as needed to certify a finite triple.
    pub fn full_scan() -> Self {
        ClassifyOptions { early_exit: false, ..Self::default() }
    }
}

/// Proper standard parabolics (the whole group excluded), in mask order.
pub fn proper_parabolics(ctx: &Context) -> Vec<ParabolicSubgroup> {
    let rank = ctx.roots.cartan_rank;
    ctx.all_parabolics().into_iter().filter(|p| p.levi_simple.len() < rank).collect()
}

/// Sorts a tuple by `dim P` descending, then label, so the largest
/// parabolic comes first.
pub fn canonical_order(tuple: &mut [ParabolicSubgroup]) {
    tuple.sort_by(|a, b| a.flag_dimension().cmp(&b.flag_dimension()).then_with(|| a.label.cmp(&b.label)));
}

/// Unordered `k`-tuples of proper standard parabolics with
/// `Σ dim G/P_i ≤ dim G`, each in canonical order.
pub fn dimension_prefilter(ctx: &Context, k: usize) -> Vec<Vec<ParabolicSubgroup>> {
    let ps = proper_parabolics(ctx);
    let bound = ctx.group_dimension();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        ps: &[ParabolicSubgroup],
        k: usize,
        bound: usize,
        start: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<ParabolicSubgroup>>,
    ) {
        let used: usize = stack.iter().map(|&i| ps[i].flag_dimension()).sum();
        if used > bound {
            return;
        }
        if stack.len() == k {
            let mut t: Vec<ParabolicSubgroup> = stack.iter().map(|&i| ps[i].clone()).collect();
            canonical_order(&mut t);
            out.push(t);
            return;
        }
        for i in start..ps.len() {
            stack.push(i);
            rec(ps, k, bound, i, stack, out);
            stack.pop();
        }
    }
    rec(&ps, k, bound, 0, &mut stack, &mut out);
    out.sort_by_key(|t| tuple_key(t));
    out
}

fn tuple_key(t: &[ParabolicSubgroup]) -> Vec<(usize, String)> {
    t.iter().map(|p| (p.flag_dimension(), p.label.clone())).collect()
}

/// Every `(w, v, x)`: minimal representatives `w` of `W_P1\W/W_P2`, then `v`
/// of `W_P1\W/W_P3`, then for each pair the representatives `x` inside `M1`.
pub fn enumerate_cells(
    ctx: &Context,
    p1: &ParabolicSubgroup,
    p2: &ParabolicSubgroup,
    p3: &ParabolicSubgroup,
) -> Vec<Cell> {
    let wg = &ctx.weyl;
    let ws = wg.double_cosets(&p1.levi_simple, &p2.levi_simple);
    let vs = wg.double_cosets(&p1.levi_simple, &p3.levi_simple);
    let mut out = Vec::new();
    for &w in &ws.representatives {
        let wl2 = wg.get(w).act(&p2.lambda);
        for &v in &vs.representatives {
            let vl3 = wg.get(v).act(&p3.lambda);
            let (left, right) = x_generators(ctx, p1, &wl2, &vl3);
            for &x in &wg.double_cosets_within(Some(&p1.levi_simple), &left, &right).representatives {
                out.push(Cell { w, v, x });
            }
        }
    }
    out
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Inconsistency(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn decide_cells(
    ctx: &Context,
    triple: &[ParabolicSubgroup; 3],
    cells: &[Cell],
    opts: &ClassifyOptions,
) -> Result<Vec<CellVerdict>> {
    let [p1, p2, p3] = triple;
    let run = |c: &Cell| -> Result<CellVerdict> {
        let prob = OrbitProblem::new(ctx, p1, p2, p3, c.w, c.v, c.x)?;
        Ok(CellVerdict { cell: *c, verdict: decide_finiteness_with(ctx, &prob, &opts.engine)? })
    };
    if !opts.early_exit {
        return cells.par_iter().map(run).collect();
    }
    // Fixed-size batches keep the stopping point independent of scheduling
    // and of the worker count.
    const BATCH: usize = 16;
    let mut out = Vec::new();
    for chunk in cells.chunks(BATCH) {
        let done: Vec<CellVerdict> = chunk.par_iter().map(run).collect::<Result<_>>()?;
        if let Some(i) = done.iter().position(|c| c.verdict.outcome == Verdict::Infinite) {
            out.extend(done.into_iter().take(i + 1));
            return Ok(out);
        }
        out.extend(done);
    }
    Ok(out)
}

/// Classifies one triple (taken in canonical order).
pub fn classify_triple(
    ctx: &Context,
    p1: &ParabolicSubgroup,
    p2: &ParabolicSubgroup,
    p3: &ParabolicSubgroup,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport> {
    let start = Instant::now();
    let mut t = vec![p1.clone(), p2.clone(), p3.clone()];
    canonical_order(&mut t);
    let triple: [ParabolicSubgroup; 3] = t.try_into().expect("three parabolics");
    let total: usize = triple.iter().map(ParabolicSubgroup::flag_dimension).sum();
    if total > ctx.group_dimension() {
        return Ok(ClassificationReport {
            triple,
            outcome: Outcome::EliminatedByDimension,
            per_cell: Vec::new(),
            total_cells: 0,
            open_orbit: false,
            open_orbit_detail: None,
            timing: start.elapsed(),
        });
    }
    let cells = enumerate_cells(ctx, &triple[0], &triple[1], &triple[2]);
    let (per_cell, open) = with_pool(opts.workers, || -> Result<_> {
        let per_cell = decide_cells(ctx, &triple, &cells, opts)?;
        let open = open_orbit_check(ctx, &triple[0], &triple[1], &triple[2], opts.engine.seed)?;
        Ok((per_cell, open))
    })??;
    let outcome = if per_cell.iter().any(|c| c.verdict.outcome == Verdict::Infinite) {
        Outcome::Infinite
    } else {
        Outcome::Finite
    };
    if outcome == Outcome::Finite && !open.open {
        return Err(Error::Inconsistency(format!(
            "every cell of ({}, {}, {}) is finite but the rank oracle finds no dense orbit",
            triple[0], triple[1], triple[2]
        )));
    }
    Ok(ClassificationReport {
        triple,
        outcome,
        per_cell,
        total_cells: cells.len(),
        open_orbit: open.open,
        open_orbit_detail: Some(open),
        timing: start.elapsed(),
    })
}

/// Classifies every triple surviving the prefilter, each placement of a
/// non-maximal type separately.
pub fn classify_all(ctx: &Context, opts: &ClassifyOptions) -> Result<Vec<ClassificationReport>> {
    dimension_prefilter(ctx, 3).iter().map(|t| classify_triple(ctx, &t[0], &t[1], &t[2], opts)).collect()
}

/// Surviving triples all of whose members are maximal parabolics.
pub fn maximal_triples(ctx: &Context) -> Vec<Vec<ParabolicSubgroup>> {
    dimension_prefilter(ctx, 3).into_iter().filter(|t| t.iter().all(|p| p.is_maximal(&ctx.roots))).collect()
}

pub fn classify_all_maximal(ctx: &Context, opts: &ClassifyOptions) -> Result<Vec<ClassificationReport>> {
    maximal_triples(ctx).iter().map(|t| classify_triple(ctx, &t[0], &t[1], &t[2], opts)).collect()
}

/// Number of diagonal orbits on `G/P1 × G/P2`: the double cosets
/// `W_P1\W/W_P2`.
pub fn pair_orbit_count(ctx: &Context, p1: &ParabolicSubgroup, p2: &ParabolicSubgroup) -> usize {
    ctx.weyl.double_cosets(&p1.levi_simple, &p2.levi_simple).len()
}

/// A pair of triples contradicting monotonicity under inclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// The larger triple, `P`.
    pub larger: [String; 3],
    /// The smaller triple, `Q ⊆ P` componentwise up to permutation.
    pub smaller: [String; 3],
    pub reason: String,
}

fn contained_up_to_permutation(q: &[ParabolicSubgroup; 3], p: &[ParabolicSubgroup; 3]) -> bool {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS.iter().any(|s| (0..3).all(|i| q[i].is_contained_in(&p[s[i]])))
}

/// Pairs `Q ⊆ P` where `P` has infinitely many orbits but `Q` finitely many,
/// or `Q` has a dense orbit but `P` does not.
pub fn monotonicity_check(reports: &[ClassificationReport]) -> Vec<Violation> {
    let mut out = Vec::new();
    for p in reports {
        for q in reports {
            if std::ptr::eq(p, q) || !contained_up_to_permutation(&q.triple, &p.triple) {
                continue;
            }
            let p_infinite = p.outcome != Outcome::Finite;
            if p_infinite && q.outcome == Outcome::Finite {
                out.push(Violation {
                    larger: p.labels(),
                    smaller: q.labels(),
                    reason: "larger triple has infinitely many orbits, smaller one finitely many".into(),
                });
            }
            if q.open_orbit && !p.open_orbit {
                out.push(Violation {
                    larger: p.labels(),
                    smaller: q.labels(),
                    reason: "smaller triple has a dense orbit, larger one does not".into(),
                });
            }
        }
    }
    out
}

/// Serializable view of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub triple: Vec<ParabolicSummary>,
    pub outcome: Outcome,
    pub flag_dimension_sum: usize,
    pub total_cells: usize,
    pub cells_examined: usize,
    pub infinite_cells: usize,
    pub open_orbit: bool,
    pub open_orbit_detail: Option<OpenOrbitReport>,
    pub cells: Vec<CellSummary>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSummary {
    /// ρ-images of `w`, `v`, `x`.
    pub w: String,
    pub v: String,
    pub x: String,
    pub outcome: Verdict,
    pub canonical_forms: usize,
    pub orbit_count: Option<usize>,
    pub rank_resolved: usize,
    pub witness: Option<WitnessSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub support: Vec<String>,
    pub relation: Vec<i64>,
    pub modality: Option<usize>,
    pub explanation: String,
}

pub fn rho_string(ctx: &Context, e: ElemId) -> String {
    ctx.weyl.get(e).rho_image.to_string()
}

impl CellVerdict {
    pub fn summary(&self, ctx: &Context) -> CellSummary {
        let v = &self.verdict;
        CellSummary {
            w: rho_string(ctx, self.cell.w),
            v: rho_string(ctx, self.cell.v),
            x: rho_string(ctx, self.cell.x),
            outcome: v.outcome,
            canonical_forms: v.canonical_forms.len(),
            orbit_count: v.orbit_count,
            rank_resolved: v.rank_resolved,
            witness: v.witness.as_ref().map(|w| WitnessSummary {
                support: w.pattern.exprs(ctx),
                relation: w.relation.clone(),
                modality: w.modality,
                explanation: w.explanation.clone(),
            }),
        }
    }
}

impl ClassificationReport {
    pub fn summary(&self, ctx: &Context) -> ReportSummary {
        ReportSummary {
            triple: self.triple.iter().map(ParabolicSummary::from).collect(),
            outcome: self.outcome,
            flag_dimension_sum: self.flag_dimension_sum(),
            total_cells: self.total_cells,
            cells_examined: self.per_cell.len(),
            infinite_cells: self.infinite_cells().count(),
            open_orbit: self.open_orbit,
            open_orbit_detail: self.open_orbit_detail.clone(),
            cells: self.per_cell.iter().map(|c| c.summary(ctx)).collect(),
            elapsed_ms: self.timing.as_millis() as u64,
        }
    }
}

/// Distinct flag dimensions of proper parabolics, descending.
pub fn flag_dimensions(ctx: &Context) -> Vec<usize> {
    let set: BTreeSet<usize> = proper_parabolics(ctx).iter().map(ParabolicSubgroup::flag_dimension).collect();
    set.into_iter().rev().collect()
}
