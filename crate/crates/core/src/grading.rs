//! Graded root tables for one cell `(w, v, x)`.
//!
//! For a cell, the acting group is `H = x⁻¹M12(w)x ∩ M13(v)` and the space
//! of representatives is spanned by the nilradical roots of `P1` lying in
//! neither `x⁻¹N12(w)x` nor `N13(v)`. Both are read off from signs of the
//! pairings with `λ1`, `x⁻¹wλ2` and `vλ3`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::parabolic::ParabolicSubgroup;
use crate::rootspace::{epsilon_expr, fmt_q, RationalVector, RootId, Q};
use crate::weyl::ElemId;

/// One `(w, v, x)` cell of a parabolic triple, with its derived root sets.
#[derive(Clone, Debug)]
pub struct OrbitProblem {
    pub p1: ParabolicSubgroup,
    pub p2: ParabolicSubgroup,
    pub p3: ParabolicSubgroup,
    pub w: ElemId,
    pub v: ElemId,
    pub x: ElemId,
    /// `λ1`.
    pub lambda1: RationalVector,
    /// `x⁻¹wλ2`.
    pub lambda2: RationalVector,
    /// `vλ3`.
    pub lambda3: RationalVector,
    /// Roots of `x⁻¹M12(w)x ∩ M13(v)`.
    pub m_roots: Vec<RootId>,
    /// Quotient roots of `x⁻¹N12(w)x \ N1 / N13(v)`.
    pub n_roots: Vec<RootId>,
    /// Roots of `x⁻¹N12(w)x`.
    pub n12_roots: Vec<RootId>,
    /// Roots of `N13(v)`.
    pub n13_roots: Vec<RootId>,
}

fn is_minimal(ctx: &Context, e: ElemId, left: &BTreeSet<usize>, right: &BTreeSet<usize>) -> bool {
    let wg = &ctx.weyl;
    let len = wg.get(e).length;
    left.iter().all(|&i| wg.get(wg.multiply(wg.simple_reflection(i), e)).length > len)
        && right.iter().all(|&j| wg.get(wg.multiply(e, wg.simple_reflection(j))).length > len)
}

impl OrbitProblem {
    /// Builds the cell, checking that `w`, `v`, `x` are minimal
    /// representatives of their double cosets.
    pub fn new(
        ctx: &Context,
        p1: &ParabolicSubgroup,
        p2: &ParabolicSubgroup,
        p3: &ParabolicSubgroup,
        w: ElemId,
        v: ElemId,
        x: ElemId,
    ) -> Result<Self> {
        let wg = &ctx.weyl;
        let rs = &ctx.roots;
        if !is_minimal(ctx, w, &p1.levi_simple, &p2.levi_simple) {
            return Err(Error::Inconsistency(format!(
                "w = {} is not minimal in W_P1 \\ W / W_P2",
                wg.get(w).rho_image
            )));
        }
        if !is_minimal(ctx, v, &p1.levi_simple, &p3.levi_simple) {
            return Err(Error::Inconsistency(format!(
                "v = {} is not minimal in W_P1 \\ W / W_P3",
                wg.get(v).rho_image
            )));
        }
        let wl2 = wg.get(w).act(&p2.lambda);
        let lambda3 = wg.get(v).act(&p3.lambda);
        let (left, right) = x_generators(ctx, p1, &wl2, &lambda3);
        let x_in_levi = wg.get(x).word.iter().all(|i| p1.levi_simple.contains(&(*i as usize)));
        if !x_in_levi || !is_minimal(ctx, x, &left, &right) {
            return Err(Error::Inconsistency(format!(
                "x = {} is not a minimal representative in W_M12 \\ W_M1 / W_M13",
                wg.get(x).rho_image
            )));
        }
        let lambda2 = wg.get(wg.inverse(x)).act(&wl2);
        let lambda1 = p1.lambda;
        let zero = Q::zero();
        let (mut m_roots, mut n_roots, mut n12_roots, mut n13_roots) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for r in 0..rs.num_roots() {
            let vr = rs.vector(r);
            let (a, b, c) = (lambda1.dot(&vr), lambda2.dot(&vr), lambda3.dot(&vr));
            if a == zero {
                if b >= zero && c >= zero {
                    m_roots.push(r);
                }
            } else if a > zero {
                if b >= zero {
                    n12_roots.push(r);
                }
                if c >= zero {
                    n13_roots.push(r);
                }
                if b < zero && c < zero {
                    n_roots.push(r);
                }
            }
        }
        Ok(OrbitProblem {
            p1: p1.clone(),
            p2: p2.clone(),
            p3: p3.clone(),
            w,
            v,
            x,
            lambda1,
            lambda2,
            lambda3,
            m_roots,
            n_roots,
            n12_roots,
            n13_roots,
        })
    }

    /// Roots of the reductive part of `H` (those whose negative is also in `H`).
    pub fn reductive_roots(&self, ctx: &Context) -> Vec<RootId> {
        let set: BTreeSet<RootId> = self.m_roots.iter().copied().collect();
        self.m_roots.iter().copied().filter(|&r| set.contains(&ctx.roots.negate(r))).collect()
    }

    /// `(m_roots, n_roots)`.
    pub fn derive_root_sets(&self) -> (Vec<RootId>, Vec<RootId>) {
        (self.m_roots.clone(), self.n_roots.clone())
    }
}

/// Simple roots of `M1` generating the Levis of `M12(w)` and `M13(v)`.
pub fn x_generators(
    ctx: &Context,
    p1: &ParabolicSubgroup,
    wl2: &RationalVector,
    vl3: &RationalVector,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let orth = |mu: &RationalVector| -> BTreeSet<usize> {
        p1.levi_simple.iter().copied().filter(|&i| ctx.roots.simple_roots[i].vector.dot(mu).is_zero()).collect()
    };
    (orth(wl2), orth(vl3))
}

/// How the grading element is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaChoice {
    Given(RationalVector),
    Auto,
}

/// Level tables of one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieces {
    pub gamma: RationalVector,
    /// Roots of `H` by level. Level 0 also carries the Cartan subalgebra.
    pub m_levels: BTreeMap<Q, Vec<RootId>>,
    /// Quotient roots by level; every level is positive.
    pub n_levels: BTreeMap<Q, Vec<RootId>>,
}

impl GradedPieces {
    pub fn level_of(&self, r: RootId) -> Option<Q> {
        self.m_levels.iter().chain(&self.n_levels).find(|(_, rs)| rs.contains(&r)).map(|(l, _)| *l)
    }

    pub fn n_roots(&self) -> Vec<RootId> {
        self.n_levels.values().flatten().copied().collect()
    }

    pub fn m_roots(&self) -> Vec<RootId> {
        self.m_levels.values().flatten().copied().collect()
    }
}

/// Checks the sign contract: reductive roots of `H` at level 0, the rest of
/// `H` at level ≥ 0, quotient roots strictly positive.
pub fn check_gamma(ctx: &Context, prob: &OrbitProblem, gamma: &RationalVector) -> Result<()> {
    let rs = &ctx.roots;
    let violation = |r: RootId, l: Q| Error::GammaViolation { root: epsilon_expr(&rs.vector(r)), level: fmt_q(&l) };
    let reductive: BTreeSet<RootId> = prob.reductive_roots(ctx).into_iter().collect();
    for &r in &prob.m_roots {
        let l = gamma.dot(&rs.vector(r));
        let ok = if reductive.contains(&r) { l.is_zero() } else { l >= Q::zero() };
        if !ok {
            return Err(violation(r, l));
        }
    }
    for &r in &prob.n_roots {
        let l = gamma.dot(&rs.vector(r));
        if l <= Q::zero() {
            return Err(violation(r, l));
        }
    }
    Ok(())
}

/// Default grading: the first `a·λ1 + b·x⁻¹wλ2 + c·vλ3` with positive
/// integers `(a, b, c)` in lexicographic order satisfying the sign contract.
pub fn auto_gamma(ctx: &Context, prob: &OrbitProblem) -> Result<RationalVector> {
    const BOUND: i64 = 64;
    for a in 1..=BOUND {
        for b in 1..=BOUND {
            for c in 1..=BOUND {
                let g = prob.lambda1.scale(Q::from_integer(a))
                    + prob.lambda2.scale(Q::from_integer(b))
                    + prob.lambda3.scale(Q::from_integer(c));
                if check_gamma(ctx, prob, &g).is_ok() {
                    return Ok(g);
                }
            }
        }
    }
    Err(Error::NoGamma)
}

pub fn grading_levels(ctx: &Context, prob: &OrbitProblem, gamma: &GammaChoice) -> Result<GradedPieces> {
    let gamma = match gamma {
        GammaChoice::Given(g) => {
            check_gamma(ctx, prob, g)?;
            *g
        }
        GammaChoice::Auto => auto_gamma(ctx, prob)?,
    };
    let group = |roots: &[RootId]| {
        let mut out: BTreeMap<Q, Vec<RootId>> = BTreeMap::new();
        for &r in roots {
            out.entry(gamma.dot(&ctx.roots.vector(r))).or_default().push(r);
        }
        out
    };
    Ok(GradedPieces { gamma, m_levels: group(&prob.m_roots), n_levels: group(&prob.n_roots) })
}

/// Serializable level table, roots written as ε-expressions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTable {
    pub gamma: RationalVector,
    pub m_levels: Vec<LevelRow>,
    pub n_levels: Vec<LevelRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: String,
    pub roots: Vec<String>,
}

impl GradedPieces {
    pub fn table(&self, ctx: &Context) -> LevelTable {
        let rows = |m: &BTreeMap<Q, Vec<RootId>>| {
            m.iter()
                .map(|(l, rs)| LevelRow { level: fmt_q(l), roots: rs.iter().map(|&r| ctx.roots.expr(r)).collect() })
                .collect()
        };
        LevelTable { gamma: self.gamma, m_levels: rows(&self.m_levels), n_levels: rows(&self.n_levels) }
    }
}

impl OrbitProblem {
    /// The cell with the longest `w`, `v` and `x`, whose generic point lies
    /// in the dense orbit of the triple when one exists.
    pub fn longest_cell(
        ctx: &Context,
        p1: &ParabolicSubgroup,
        p2: &ParabolicSubgroup,
        p3: &ParabolicSubgroup,
    ) -> Result<Self> {
        let wg = &ctx.weyl;
        let w = wg.longest_coset_representative(&wg.double_cosets(&p1.levi_simple, &p2.levi_simple))?;
        let v = wg.longest_coset_representative(&wg.double_cosets(&p1.levi_simple, &p3.levi_simple))?;
        let (left, right) = x_generators(ctx, p1, &wg.get(w).act(&p2.lambda), &wg.get(v).act(&p3.lambda));
        let xs = wg.double_cosets_within(Some(&p1.levi_simple), &left, &right);
        let x = wg.longest_coset_representative(&xs)?;
        Self::new(ctx, p1, p2, p3, w, v, x)
    }
}
