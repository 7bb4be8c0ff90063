//! Infinitesimal action of the cell stabilizer on the unipotent radical.
//!
//! For a cell, the group `K = H ⋉ (x⁻¹N12x × N13)` acts on `N1` by
//! `n ↦ b⁻¹ · n' · n · n13 · b`. At `q = exp(X)` the right-trivialised
//! tangent vectors of this action are
//!
//! * `Y − Ad(q)Y` for `Y` in the Lie algebra of `H` (Cartan plus m-roots),
//! * `Z'` for `Z'` in `x⁻¹n12x`,
//! * `Ad(q)Z` for `Z` in `n13`,
//!
//! and the stratum of points supported on `S` contributes `dexp_X(E)` for
//! `E = x(β)`, `β ∈ S`. Ranks of these families give orbit dimensions and
//! the dimension of the saturation of a stratum.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chevalley::{BasisId, LieAlgebraBasis};
use crate::context::Context;
use crate::grading::OrbitProblem;
use crate::linalg::{add_mod, mul_mod, q_mod, rank_mod, rank_rational, PRIME};
use crate::rootspace::{RootId, Q};

/// Minimal field interface for the two arithmetic back ends.
pub trait Scalar: Copy + PartialEq {
    fn zero() -> Self;
    fn from_q(q: Q) -> Self;
    fn add(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

impl Scalar for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn from_q(q: Q) -> Self {
        q
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
}

/// Element of `F_p`, `p = 2^61 − 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp(pub u64);

impl Scalar for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn from_q(q: Q) -> Self {
        Fp(q_mod(&q))
    }
    fn add(self, o: Self) -> Self {
        Fp(add_mod(self.0, o.0))
    }
    fn mul(self, o: Self) -> Self {
        Fp(mul_mod(self.0, o.0))
    }
}

/// Sparse bracket table: `table[i][j]` lists `(k, c)` with `[e_i, e_j] = Σ c e_k`.
pub struct BracketTable {
    dim: usize,
    table: Vec<Vec<Vec<(BasisId, Q)>>>,
}

impl BracketTable {
    pub fn new(lie: &LieAlgebraBasis) -> Self {
        let dim = lie.dim();
        let table =
            (0..dim).map(|i| (0..dim).map(|j| lie.bracket_basis(i, j).0.into_iter().collect()).collect()).collect();
        BracketTable { dim, table }
    }

    fn ad<F: Scalar>(&self, x: &[(BasisId, F)], y: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for &(i, xi) in x {
            for (j, &yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let xy = xi.mul(yj);
                for &(k, c) in &self.table[i][j] {
                    out[k] = out[k].add(xy.mul(F::from_q(c)));
                }
            }
        }
        out
    }

    /// `Σ_k (ad X)^k y · coef(k)` until the series vanishes.
    fn series<F: Scalar>(&self, x: &[(BasisId, F)], y: Vec<F>, coef: impl Fn(usize) -> Q) -> Vec<F> {
        let mut acc: Vec<F> = y.iter().map(|&v| v.mul(F::from_q(coef(0)))).collect();
        let mut term = y;
        for k in 1.. {
            term = self.ad(x, &term);
            if term.iter().all(|v| v.is_zero()) {
                break;
            }
            let c = F::from_q(coef(k));
            for (a, t) in acc.iter_mut().zip(&term) {
                *a = a.add(t.mul(c));
            }
            assert!(k < 16, "ad X is not nilpotent");
        }
        acc
    }
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Tangent data of one cell at one point.
pub struct Tangents<F> {
    /// Rows spanning the tangent space to the orbit, in `n1` coordinates.
    pub orbit: Vec<Vec<F>>,
    /// Rows spanning the tangent space to the stratum.
    pub stratum: Vec<Vec<F>>,
}

/// Coordinates: the nilradical roots of `P1`, in a fixed order.
pub struct CellGeometry<'a> {
    pub ctx: &'a Context,
    pub prob: &'a OrbitProblem,
    pub brackets: &'a BracketTable,
    coord: HashMap<BasisId, usize>,
}

impl<'a> CellGeometry<'a> {
    pub fn new(ctx: &'a Context, prob: &'a OrbitProblem, brackets: &'a BracketTable) -> Self {
        let coord = prob.p1.nilradical_roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        CellGeometry { ctx, prob, brackets, coord }
    }

    pub fn n1_dim(&self) -> usize {
        self.coord.len()
    }

    fn restrict<F: Scalar>(&self, v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.coord.len()];
        for (k, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = self.coord.get(&k).expect("tangent vector leaves n1");
            out[*idx] = c;
        }
        out
    }

    fn unit<F: Scalar>(&self, b: BasisId) -> Vec<F> {
        let mut v = vec![F::zero(); self.brackets.dim];
        v[b] = F::from_q(Q::from_integer(1));
        v
    }

    /// Tangent rows at `X = Σ c_β x(β)` for the given support and stratum.
    pub fn tangents<F: Scalar>(&self, point: &[(RootId, F)], stratum: &[RootId]) -> Tangents<F> {
        let lie = &self.ctx.lie;
        let br = self.brackets;
        let mut orbit = Vec::new();
        let acting: Vec<BasisId> =
            (0..lie.rank).map(|i| lie.cartan(i)).chain(self.prob.m_roots.iter().copied()).collect();
        for y in acting {
            // Y − Ad(q)Y = −Σ_{k≥1} (ad X)^k Y / k!
            let v =
                br.series(point, self.unit(y), |k| if k == 0 { Q::from_integer(0) } else { -Q::new(1, factorial(k)) });
            orbit.push(self.restrict(&v));
        }
        for &z in &self.prob.n12_roots {
            orbit.push(self.restrict(&self.unit::<F>(z)));
        }
        for &z in &self.prob.n13_roots {
            let v = br.series(point, self.unit(z), |k| Q::new(1, factorial(k)));
            orbit.push(self.restrict(&v));
        }
        let stratum = stratum
            .iter()
            .map(|&e| {
                let v = br.series(point, self.unit(e), |k| Q::new(1, factorial(k + 1)));
                self.restrict(&v)
            })
            .collect();
        Tangents { orbit, stratum }
    }
}

/// Ranks at one point: `(dim orbit, dim of orbit + stratum directions)`.
pub trait RankBackend: Scalar {
    fn rank(rows: &[Vec<Self>]) -> usize;
}

impl RankBackend for Q {
    fn rank(rows: &[Vec<Self>]) -> usize {
        rank_rational(rows)
    }
}

impl RankBackend for Fp {
    fn rank(rows: &[Vec<Self>]) -> usize {
        let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x.0).collect()).collect();
        rank_mod(&mut m)
    }
}

pub fn ranks_at<F: RankBackend>(geo: &CellGeometry, point: &[(RootId, F)], stratum: &[RootId]) -> (usize, usize) {
    let t = geo.tangents(point, stratum);
    let orbit = F::rank(&t.orbit);
    let mut all = t.orbit;
    all.extend(t.stratum);
    (orbit, F::rank(&all))
}

/// Small nonzero rational coefficients from a seeded generator.
pub fn random_rational_point(support: &[RootId], rng: &mut ChaCha8Rng) -> Vec<(RootId, Q)> {
    support
        .iter()
        .map(|&r| {
            let mut n: i64 = rng.gen_range(1..=9);
            if rng.gen_bool(0.5) {
                n = -n;
            }
            let d: i64 = rng.gen_range(1..=4);
            (r, Q::new(n, d))
        })
        .collect()
}

pub fn random_fp_point(support: &[RootId], rng: &mut ChaCha8Rng) -> Vec<(RootId, Fp)> {
    support.iter().map(|&r| (r, Fp(rng.gen_range(1..PRIME)))).collect()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Modality of the stratum on `support`: `dim(K·Z_S) − max orbit dim in Z_S`,
/// evaluated at random points of `F_p` (the maximum over `trials` of both
/// ranks). Positive modality rules out finitely many orbits.
pub fn stratum_modality(geo: &CellGeometry, support: &[RootId], trials: usize, rng: &mut ChaCha8Rng) -> StratumRanks {
    let mut best = StratumRanks { orbit_dim: 0, saturation_dim: 0 };
    for _ in 0..trials.max(1) {
        let p = random_fp_point(support, rng);
        let (o, s) = ranks_at(geo, &p, support);
        best.orbit_dim = best.orbit_dim.max(o);
        best.saturation_dim = best.saturation_dim.max(s);
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StratumRanks {
    pub orbit_dim: usize,
    pub saturation_dim: usize,
}

impl StratumRanks {
    pub fn modality(&self) -> usize {
        self.saturation_dim - self.orbit_dim
    }
}
