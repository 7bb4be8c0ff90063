//! Acceptance checks for the F4 classification, one line per criterion.
//!
//! Runs without the default test harness so that every criterion reports
//! PASS or FAIL even when an earlier one fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use flagorbit_core::classify::{
    classify_all, classify_all_maximal, dimension_prefilter, enumerate_cells, flag_dimensions, monotonicity_check,
    ClassificationReport, ClassifyOptions,
};
use flagorbit_core::grading::{grading_levels, GammaChoice, GradedPieces};
use flagorbit_core::orbits::{decide_finiteness, family_witness, generic_rank_oracle, EngineOptions, Verdict};
use flagorbit_core::rootspace::RootSystemType;
use flagorbit_core::{Context, LieAlgebraBasis, LieElement, OrbitProblem, Outcome, RationalVector, Q};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn jacobi(lie: &LieAlgebraBasis, a: usize, b: usize, c: usize) -> bool {
    let (x, y, z) = (LieElement::basis(a), LieElement::basis(b), LieElement::basis(c));
    let mut s = lie.bracket(&x, &lie.bracket(&y, &z));
    s.add_scaled(&lie.bracket(&y, &lie.bracket(&z, &x)), Q::from_integer(1));
    s.add_scaled(&lie.bracket(&z, &lie.bracket(&x, &y)), Q::from_integer(1));
    s.is_zero()
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn ints(c: [i64; 4]) -> RationalVector {
    RationalVector::from_ints(c)
}

fn halves(c: [i64; 4]) -> RationalVector {
    RationalVector::from_halves(c)
}

fn key(r: &ClassificationReport) -> Vec<String> {
    let mut l: Vec<String> = r.labels().to_vec();
    l.sort();
    l
}

fn sorted(labels: &[&str]) -> Vec<String> {
    let mut l: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    l.sort();
    l
}

fn show(k: &[String]) -> String {
    format!("({})", k.join(","))
}

struct Runs {
    ctx: Context,
    maximal: Vec<ClassificationReport>,
    full: Vec<ClassificationReport>,
}

fn infinite_example(ctx: &Context) -> OrbitProblem {
    let b3 = ctx.parse_parabolic("B3").unwrap();
    let a1a2 = ctx.parse_parabolic("A1(l)xA2(s)").unwrap();
    let wg = &ctx.weyl;
    let w = wg.longest_coset_representative(&wg.double_cosets(&b3.levi_simple, &b3.levi_simple)).unwrap();
    let v = wg.longest_coset_representative(&wg.double_cosets(&b3.levi_simple, &a1a2.levi_simple)).unwrap();
    OrbitProblem::new(ctx, &b3, &b3, &a1a2, w, v, wg.identity()).unwrap()
}

fn finite_example(ctx: &Context) -> OrbitProblem {
    let wg = &ctx.weyl;
    let w = wg.element_from_rho_image(&"-5/2,11/2,3/2,1/2".parse().unwrap()).unwrap();
    let v = wg.element_from_rho_image(&"1/2,9/2,7/2,5/2".parse().unwrap()).unwrap();
    let b3 = ctx.parse_parabolic("B3").unwrap();
    let c3 = ctx.parse_parabolic("C3").unwrap();
    let a2a1 = ctx.parse_parabolic("A2(l)xA1(s)").unwrap();
    OrbitProblem::new(ctx, &b3, &c3, &a2a1, w, v, wg.identity()).unwrap()
}

type Levels = BTreeMap<Q, BTreeSet<RationalVector>>;

fn levels(ctx: &Context, m: &BTreeMap<Q, Vec<usize>>) -> Levels {
    m.iter().map(|(l, rs)| (*l, rs.iter().map(|&r| ctx.roots.vector(r)).collect())).collect()
}

fn table(rows: Vec<(Q, Vec<RationalVector>)>) -> Levels {
    rows.into_iter().map(|(l, vs)| (l, vs.into_iter().collect())).collect()
}

fn compare_tables(ctx: &Context, pieces: &GradedPieces, m: Levels, n: Levels) -> Result<(), String> {
    let got_m = levels(ctx, &pieces.m_levels);
    let got_n = levels(ctx, &pieces.n_levels);
    ensure(got_m == m, || format!("M levels differ: got {got_m:?}"))?;
    ensure(got_n == n, || format!("N levels differ: got {got_n:?}"))
}

/// Criterion 1: maximal triples.
fn maximal_triples(r: &Runs) -> Check {
    let finite: BTreeSet<Vec<String>> = [
        sorted(&["B3", "C3", "B3"]),
        sorted(&["B3", "C3", "C3"]),
        sorted(&["B3", "C3", "A2(l)xA1(s)"]),
        sorted(&["B3", "C3", "A1(l)xA2(s)"]),
    ]
    .into_iter()
    .collect();
    let infinite: BTreeSet<Vec<String>> = [
        sorted(&["B3", "B3", "B3"]),
        sorted(&["B3", "B3", "A1(l)xA2(s)"]),
        sorted(&["B3", "B3", "A2(l)xA1(s)"]),
        sorted(&["C3", "C3", "C3"]),
        sorted(&["C3", "C3", "A1(l)xA2(s)"]),
        sorted(&["C3", "C3", "A2(l)xA1(s)"]),
    ]
    .into_iter()
    .collect();
    let got_f: BTreeSet<Vec<String>> = r.maximal.iter().filter(|x| x.outcome == Outcome::Finite).map(key).collect();
    let got_i: BTreeSet<Vec<String>> = r.maximal.iter().filter(|x| x.outcome == Outcome::Infinite).map(key).collect();
    ensure(r.maximal.len() == 10, || format!("{} maximal triples survive, expected 10", r.maximal.len()))?;
    ensure(got_f == finite, || format!("FINITE set {:?}", got_f.iter().map(|k| show(k)).collect::<Vec<_>>()))?;
    ensure(got_i == infinite, || format!("INFINITE set {:?}", got_i.iter().map(|k| show(k)).collect::<Vec<_>>()))?;
    let secs: f64 = r.maximal.iter().map(|x| x.timing.as_secs_f64()).sum();
    Ok(format!("4 FINITE, 6 INFINITE maximal triples in {secs:.1}s"))
}

fn is_maximal_label(ctx: &Context, label: &str) -> bool {
    ctx.parse_parabolic(label).map(|p| p.is_maximal(&ctx.roots)).unwrap_or(false)
}

/// Criterion 2: non-maximal survivors.
fn non_maximal(r: &Runs) -> Check {
    let mut wrong = Vec::new();
    let mut checked = 0;
    for rep in &r.full {
        let labels = rep.labels();
        let others: Vec<&String> = labels.iter().filter(|l| !is_maximal_label(&r.ctx, l)).collect();
        if others.len() != 1 {
            continue;
        }
        checked += 1;
        if rep.outcome != Outcome::Infinite {
            wrong.push(format!("{} is {}", show(&labels), rep.outcome));
        }
    }
    ensure(checked > 0, || "no non-maximal survivors".to_string())?;
    ensure(wrong.is_empty(), || format!("{} of {checked} not INFINITE: {}", wrong.len(), wrong.join("; ")))?;
    Ok(format!("all {checked} non-maximal survivors INFINITE"))
}

/// Criterion 3: dense orbits.
fn open_orbits(r: &Runs) -> Check {
    let expected: BTreeSet<Vec<String>> = [
        sorted(&["B3", "C3", "B2"]),
        sorted(&["B3", "B3", "A2(s)"]),
        sorted(&["B3", "B3", "A1(l)xA2(s)"]),
        sorted(&["C3", "C3", "A2(l)"]),
        sorted(&["C3", "C3", "A2(l)xA1(s)"]),
        sorted(&["B3", "C3", "B3"]),
        sorted(&["B3", "C3", "C3"]),
        sorted(&["B3", "C3", "A2(l)xA1(s)"]),
        sorted(&["B3", "C3", "A1(l)xA2(s)"]),
    ]
    .into_iter()
    .collect();
    let got: BTreeSet<Vec<String>> = r.full.iter().filter(|x| x.open_orbit).map(key).collect();
    let extra: Vec<String> = got.difference(&expected).map(|k| show(k)).collect();
    let missing: Vec<String> = expected.difference(&got).map(|k| show(k)).collect();
    ensure(extra.is_empty() && missing.is_empty(), || {
        format!("unexpected open orbits {extra:?}, missing {missing:?}")
    })?;
    Ok(format!("{} triples with a dense orbit", got.len()))
}

/// Criterion 4: the infinite worked cell.
fn example_one(r: &Runs) -> Check {
    let ctx = &r.ctx;
    let prob = infinite_example(ctx);
    let gamma = ints([3, 1, 1, 0]);
    let pieces = grading_levels(ctx, &prob, &GammaChoice::Given(gamma)).map_err(|e| e.to_string())?;
    let m = table(vec![
        (q(0, 1), vec![ints([0, 0, 0, 1]), ints([0, 0, 0, -1]), ints([0, 1, -1, 0]), ints([0, -1, 1, 0])]),
        (
            q(1, 1),
            vec![
                ints([0, 1, 0, 0]),
                ints([0, 0, 1, 0]),
                ints([0, 1, 0, 1]),
                ints([0, 1, 0, -1]),
                ints([0, 0, 1, 1]),
                ints([0, 0, 1, -1]),
            ],
        ),
        (q(2, 1), vec![ints([0, 1, 1, 0])]),
    ]);
    let n = table(vec![
        (q(1, 2), vec![halves([1, -1, -1, 1]), halves([1, -1, -1, -1])]),
        (q(3, 2), vec![halves([1, 1, -1, 1]), halves([1, 1, -1, -1]), halves([1, -1, 1, 1]), halves([1, -1, 1, -1])]),
        (q(2, 1), vec![ints([1, -1, 0, 0]), ints([1, 0, -1, 0])]),
        (q(3, 1), vec![ints([1, 0, 0, 0]), ints([1, 0, 0, 1]), ints([1, 0, 0, -1])]),
        (q(4, 1), vec![ints([1, 1, 0, 0]), ints([1, 0, 1, 0])]),
    ]);
    compare_tables(ctx, &pieces, m, n)?;
    let verdict = decide_finiteness(ctx, &prob).map_err(|e| e.to_string())?;
    ensure(verdict.outcome == Verdict::Infinite, || "cell is not INFINITE".to_string())?;
    let wanted = [q(3, 2), q(3, 1), q(4, 1)];
    let family: Vec<usize> = wanted.iter().flat_map(|l| pieces.n_levels.get(l).cloned().unwrap_or_default()).collect();
    let witness = family_witness(ctx, &prob, &family, &pieces, &EngineOptions::default())
        .ok_or_else(|| "no certified witness on the restricted family".to_string())?;
    let support: BTreeSet<RationalVector> = witness.pattern.support.iter().map(|&r| ctx.roots.vector(r)).collect();
    for v in [ints([1, 0, 0, 0]), ints([1, 0, 0, 1]), ints([1, 0, 0, -1])] {
        ensure(support.contains(&v), || format!("witness {:?} lacks {v}", witness.pattern.exprs(ctx)))?;
    }
    Ok(format!("tables match; witness {{{}}}", witness.pattern.exprs(ctx).join(", ")))
}

/// Criterion 5: the finite worked cell.
fn example_two(r: &Runs) -> Check {
    let ctx = &r.ctx;
    let prob = finite_example(ctx);
    let gamma = RationalVector([q(7, 2), q(3, 2), q(1, 2), q(1, 2)]);
    let pieces = grading_levels(ctx, &prob, &GammaChoice::Given(gamma)).map_err(|e| e.to_string())?;
    let m = table(vec![
        (q(0, 1), vec![ints([0, 0, 1, -1]), ints([0, 0, -1, 1])]),
        (q(1, 2), vec![ints([0, 0, 1, 0]), ints([0, 0, 0, 1])]),
        (q(1, 1), vec![ints([0, 0, 1, 1]), ints([0, 1, -1, 0]), ints([0, 1, 0, -1])]),
        (q(3, 2), vec![ints([0, 1, 0, 0])]),
        (q(2, 1), vec![ints([0, 1, 1, 0]), ints([0, 1, 0, 1])]),
    ]);
    let n = table(vec![
        (q(1, 2), vec![halves([1, -1, -1, -1])]),
        (q(1, 1), vec![halves([1, -1, 1, -1]), halves([1, -1, -1, 1])]),
        (q(2, 1), vec![ints([1, -1, 0, 0])]),
        (q(3, 1), vec![ints([1, 0, -1, 0]), ints([1, 0, 0, -1])]),
    ]);
    compare_tables(ctx, &pieces, m, n)?;
    let verdict = decide_finiteness(ctx, &prob).map_err(|e| e.to_string())?;
    ensure(verdict.outcome == Verdict::Finite, || "cell is not FINITE".to_string())?;
    ensure(verdict.orbit_count == Some(16), || format!("orbit count {:?}", verdict.orbit_count))?;
    Ok("tables match; FINITE with 16 orbits".to_string())
}

/// Criterion 6: cells of the worked finite triple.
fn cell_count(r: &Runs) -> Check {
    let ctx = &r.ctx;
    let b3 = ctx.parse_parabolic("B3").unwrap();
    let c3 = ctx.parse_parabolic("C3").unwrap();
    let a2a1 = ctx.parse_parabolic("A2(l)xA1(s)").unwrap();
    let n = enumerate_cells(ctx, &b3, &c3, &a2a1).len();
    ensure(n == 73, || format!("{n} cells"))?;
    Ok("73 cells".to_string())
}

/// Criterion 7: the dimension count.
fn prefilter(r: &Runs) -> Check {
    let ctx = &r.ctx;
    let expected =
        [("Borel", 24), ("A1", 23), ("A1xA1", 22), ("A2", 21), ("B2", 20), ("A2xA1", 20), ("B3", 15), ("C3", 15)];
    for (label, dim) in expected {
        let family = ctx.parse_parabolic_family(label).map_err(|e| e.to_string())?;
        ensure(!family.is_empty(), || format!("{label} has no placement"))?;
        for p in &family {
            ensure(p.flag_dimension() == dim, || format!("{} has flag dimension {}", p.label, p.flag_dimension()))?;
            ensure(p.dim(&ctx.roots) == 52 - dim, || format!("{} has dimension {}", p.label, p.dim(&ctx.roots)))?;
        }
    }
    ensure(ctx.group_dimension() == 52, || format!("dim G = {}", ctx.group_dimension()))?;
    let dims = flag_dimensions(ctx);
    ensure(dims == vec![24, 23, 22, 21, 20, 15], || format!("flag dimensions {dims:?}"))?;
    for k in 4..=6 {
        ensure(dimension_prefilter(ctx, k).is_empty(), || format!("k = {k} survivors"))?;
    }
    let shapes: BTreeSet<Vec<usize>> = dimension_prefilter(ctx, 3)
        .iter()
        .map(|t| {
            let mut d: Vec<usize> = t.iter().map(|p| p.flag_dimension()).collect();
            d.sort();
            d
        })
        .collect();
    let want: BTreeSet<Vec<usize>> = [15, 20, 21, 22]
        .iter()
        .map(|&x| {
            let mut d = vec![15, 15, x];
            d.sort();
            d
        })
        .collect();
    ensure(shapes == want, || format!("surviving dimension shapes {shapes:?}"))?;
    let g2 = Context::new(RootSystemType::G2);
    ensure(dimension_prefilter(&g2, 3).is_empty(), || "G2 has k = 3 survivors".to_string())?;
    Ok("eight parabolic dimensions, dim G = 52, survivors (15,15,{15,20,21,22})".to_string())
}

/// Criterion 8: structural properties.
fn properties(r: &Runs) -> Check {
    let ctx = &r.ctx;
    ensure(ctx.weyl.order() == 1152, || format!("|W| = {}", ctx.weyl.order()))?;
    ensure(ctx.roots.num_roots() == 48, || format!("{} roots", ctx.roots.num_roots()))?;
    let rho = RationalVector([q(11, 2), q(5, 2), q(3, 2), q(1, 2)]);
    ensure(ctx.roots.rho == rho, || format!("ρ = {}", ctx.roots.rho))?;
    let dim = ctx.lie.dim();
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                ensure(jacobi(&ctx.lie, a, b, c), || format!("Jacobi fails on ({a},{b},{c})"))?;
            }
        }
    }
    let maximal: Vec<_> = ctx.all_parabolics().into_iter().filter(|p| p.is_maximal(&ctx.roots)).collect();
    for l in &maximal {
        for rr in &maximal {
            let t = ctx.weyl.double_cosets(&l.levi_simple, &rr.levi_simple);
            let total: usize = t.coset_sizes.iter().sum();
            ensure(total == 1152, || format!("W_{}\\W/W_{} cosets cover {total}", l.label, rr.label))?;
        }
    }
    for prob in [infinite_example(ctx), finite_example(ctx)] {
        let pieces = grading_levels(ctx, &prob, &GammaChoice::Auto).map_err(|e| e.to_string())?;
        for &mu in &prob.m_roots {
            for &beta in &prob.n_roots {
                let Some(s) = ctx.roots.root_sum(mu, beta) else { continue };
                if let Some(ls) = pieces.level_of(s) {
                    let (lm, lb) = (pieces.level_of(mu).unwrap(), pieces.level_of(beta).unwrap());
                    ensure(ls == lm + lb, || "bracket does not add levels".to_string())?;
                }
            }
        }
    }
    let violations = monotonicity_check(&r.full);
    ensure(violations.is_empty(), || format!("{} monotonicity violations", violations.len()))?;
    for rep in r.full.iter().filter(|x| x.outcome == Outcome::Finite) {
        let [p1, p2, p3] = &rep.triple;
        let top = OrbitProblem::longest_cell(ctx, p1, p2, p3).map_err(|e| e.to_string())?;
        let rank = generic_rank_oracle(ctx, &top, 2, 7);
        ensure(rank == top.n_roots.len(), || {
            format!("{}: oracle rank {rank} < {}", show(&key(rep)), top.n_roots.len())
        })?;
    }
    Ok("|W|, roots, ρ, Jacobi, double cosets, grading, monotonicity and top-cell ranks hold".to_string())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctx = Context::f4();
    let maximal = classify_all_maximal(&ctx, &ClassifyOptions::default()).expect("maximal classification");
    let full = classify_all(&ctx, &ClassifyOptions::full_scan()).expect("full classification");
    let runs = Runs { ctx, maximal, full };
    let criteria: [(&str, fn(&Runs) -> Check); 8] = [
        ("maximal triples", maximal_triples),
        ("non-maximal triples", non_maximal),
        ("open orbits", open_orbits),
        ("infinite worked cell", example_one),
        ("finite worked cell", example_two),
        ("cell count", cell_count),
        ("dimension prefilter", prefilter),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(|| check(&runs))).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1)
            }
        }
    }
    let agree = runs.maximal.iter().all(|m| runs.full.iter().any(|f| key(f) == key(m) && f.outcome == m.outcome));
    println!("early exit and full scan agree on maximal triples: {agree}");
    println!("total time {:.1}s", start.elapsed().as_secs_f64());
    if failed == 0 && agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
