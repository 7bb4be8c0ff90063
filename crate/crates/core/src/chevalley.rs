//! Chevalley basis and bracket.
//!
//! Structure constants are fixed by declaring every extraspecial pair
//! positive and propagating through the standard identities
//! `N_{−α,−β} = −N_{α,β}`, the three-term cyclic rule and the four-term rule.
//! The result is checked against the Jacobi identity in the tests.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rootspace::{RootId, RootSystem, Q};

/// Basis index: `0..num_roots` are root vectors `x(β)`, then `cartan_rank`
/// simple coroots.
pub type BasisId = usize;

/// Sparse element of the Lie algebra.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct LieElement(pub BTreeMap<BasisId, Q>);

impl LieElement {
    pub fn zero() -> Self {
        LieElement(BTreeMap::new())
    }

    pub fn basis(i: BasisId) -> Self {
        Self::term(i, Q::from_integer(1))
    }

    pub fn term(i: BasisId, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(i, c);
        e
    }

    pub fn add_term(&mut self, i: BasisId, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(i).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: Q) {
        for (&i, &v) in &other.0 {
            self.add_term(i, v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: BasisId) -> Q {
        self.0.get(&i).copied().unwrap_or_else(Q::zero)
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(k, v)| (k, v.to_string()))).finish()
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebraBasis {
    pub num_roots: usize,
    pub rank: usize,
    /// `constants[a][b] = N_{a,b}`, zero when `a + b` is not a root.
    pub constants: Vec<Vec<i64>>,
    /// `sum[a][b]`: index of `a + b` when a root.
    sum: Vec<Vec<Option<RootId>>>,
    /// `pairing[i][b] = ⟨b, h_i⟩` for the simple coroot `h_i`.
    pub pairing: Vec<Vec<i64>>,
    /// Coroot of each root in the simple-coroot basis.
    pub coroot_coords: Vec<Vec<i64>>,
    neg: Vec<RootId>,
}

impl LieAlgebraBasis {
    pub fn dim(&self) -> usize {
        self.num_roots + self.rank
    }

    pub fn cartan(&self, i: usize) -> BasisId {
        self.num_roots + i
    }

    pub fn is_cartan(&self, b: BasisId) -> bool {
        b >= self.num_roots
    }

    pub fn structure_constant(&self, a: RootId, b: RootId) -> i64 {
        self.constants[a][b]
    }

    /// Bracket of two basis vectors.
    pub fn bracket_basis(&self, a: BasisId, b: BasisId) -> LieElement {
        let n = self.num_roots;
        match (a >= n, b >= n) {
            (true, true) => LieElement::zero(),
            (true, false) => LieElement::term(b, Q::from_integer(self.pairing[a - n][b])),
            (false, true) => LieElement::term(a, Q::from_integer(-self.pairing[b - n][a])),
            (false, false) => {
                if self.neg[a] == b {
                    let mut e = LieElement::zero();
                    for (i, &c) in self.coroot_coords[a].iter().enumerate() {
                        e.add_term(n + i, Q::from_integer(c));
                    }
                    e
                } else {
                    match self.sum[a][b] {
                        Some(s) => LieElement::term(s, Q::from_integer(self.constants[a][b])),
                        None => LieElement::zero(),
                    }
                }
            }
        }
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (&i, &a) in &x.0 {
            for (&j, &b) in &y.0 {
                out.add_scaled(&self.bracket_basis(i, j), a * b);
            }
        }
        out
    }

    /// `ad(x)` applied `k` times to `y`.
    pub fn ad_power(&self, x: &LieElement, y: &LieElement, k: usize) -> LieElement {
        (0..k).fold(y.clone(), |acc, _| self.bracket(x, &acc))
    }
}

struct ConstantSolver<'a> {
    rs: &'a RootSystem,
    extraspecial: Vec<Option<(RootId, RootId)>>,
    memo: Vec<Vec<Option<i64>>>,
}

impl ConstantSolver<'_> {
    fn len2(&self, r: RootId) -> Q {
        self.rs.norm_sq(r)
    }

    fn n(&mut self, a: RootId, b: RootId) -> i64 {
        if let Some(v) = self.memo[a][b] {
            return v;
        }
        let v = self.compute(a, b);
        self.memo[a][b] = Some(v);
        v
    }

    fn compute(&mut self, a: RootId, b: RootId) -> i64 {
        let rs = self.rs;
        let Some(c) = rs.root_sum(a, b) else {
            return 0;
        };
        let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
        if !pa && !pb {
            return -self.n(rs.negate(a), rs.negate(b));
        }
        if pa != pb {
            // a + b + z = 0 with z = −c; move to the pair of equal sign.
            let z = rs.negate(c);
            let q = if rs.is_positive(z) == pb {
                self.len2(z) / self.len2(a) * Q::from_integer(self.n(b, z))
            } else {
                self.len2(z) / self.len2(b) * Q::from_integer(self.n(z, a))
            };
            assert!(q.is_integer(), "non-integral structure constant");
            return q.to_integer();
        }
        if a > b {
            return -self.n(b, a);
        }
        let (alpha, beta) = self.extraspecial[c].expect("non-simple root has an extraspecial pair");
        if a == alpha {
            return rs.string_start(a, b) + 1;
        }
        // Four-term identity on (a, b, −α, −β).
        let (na, nb) = (rs.negate(alpha), rs.negate(beta));
        let n_ext = -self.n(alpha, beta);
        let mut acc = Q::zero();
        if let Some(s) = rs.root_sum(b, na) {
            acc += Q::from_integer(self.n(b, na) * self.n(a, nb)) / self.len2(s);
        }
        if let Some(s) = rs.root_sum(na, a) {
            acc += Q::from_integer(self.n(na, a) * self.n(b, nb)) / self.len2(s);
        }
        let q = -self.len2(c) / Q::from_integer(n_ext) * acc;
        assert!(q.is_integer(), "non-integral structure constant");
        q.to_integer()
    }
}

pub fn build_chevalley(rs: &RootSystem) -> LieAlgebraBasis {
    let nr = rs.num_roots();
    let npos = rs.num_positive();
    let mut extraspecial = vec![None; nr];
    for xi in 0..npos {
        extraspecial[xi] = (0..npos).find_map(|a| {
            let b = rs.root_index(&(rs.vector(xi) - rs.vector(a)))?;
            rs.is_positive(b).then_some((a, b))
        });
    }
    let mut solver = ConstantSolver { rs, extraspecial, memo: vec![vec![None; nr]; nr] };
    let constants: Vec<Vec<i64>> = (0..nr).map(|a| (0..nr).map(|b| solver.n(a, b)).collect()).collect();
    let sum = (0..nr).map(|a| (0..nr).map(|b| rs.root_sum(a, b)).collect()).collect();
    let simple_coroots: Vec<_> = (0..rs.cartan_rank).map(|i| rs.coroot(rs.simple_id(i))).collect();
    let pairing = simple_coroots
        .iter()
        .map(|h| {
            (0..nr)
                .map(|b| {
                    let q = rs.vector(b).dot(h);
                    assert!(q.is_integer());
                    q.to_integer()
                })
                .collect()
        })
        .collect();
    let coroot_coords = (0..nr)
        .map(|r| {
            let c = crate::rootspace::coordinates_in(&simple_coroots, &rs.coroot(r))
                .expect("coroot lies in the coroot lattice");
            c.iter().map(|q| q.to_integer()).collect()
        })
        .collect();
    LieAlgebraBasis {
        num_roots: nr,
        rank: rs.cartan_rank,
        constants,
        sum,
        pairing,
        coroot_coords,
        neg: (0..nr).map(|r| rs.negate(r)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootspace::{build_root_system, RationalVector, RootSystemType};

    fn jacobi_holds(rs: &RootSystem) {
        let lie = build_chevalley(rs);
        let d = lie.dim();
        let table: Vec<Vec<LieElement>> = (0..d).map(|i| (0..d).map(|j| lie.bracket_basis(i, j)).collect()).collect();
        let br = |i: BasisId, e: &LieElement| {
            let mut out = LieElement::zero();
            for (&j, &c) in &e.0 {
                out.add_scaled(&table[i][j], c);
            }
            out
        };
        for x in 0..d {
            for y in 0..d {
                for z in y + 1..d {
                    let mut s = br(x, &table[y][z]);
                    s.add_scaled(&br(y, &table[z][x]), Q::from_integer(1));
                    s.add_scaled(&br(z, &table[x][y]), Q::from_integer(1));
                    assert!(s.is_zero(), "Jacobi fails on ({x},{y},{z}): {s:?}");
                }
            }
        }
    }

    #[test]
    fn jacobi_identity_f4_exhaustive() {
        jacobi_holds(&build_root_system(RootSystemType::F4));
    }

    #[test]
    fn jacobi_identity_g2_exhaustive() {
        jacobi_holds(&build_root_system(RootSystemType::G2));
    }

    #[test]
    fn constants_antisymmetric_with_root_string_magnitude() {
        let rs = build_root_system(RootSystemType::F4);
        let lie = build_chevalley(&rs);
        for a in 0..48 {
            for b in 0..48 {
                let n = lie.structure_constant(a, b);
                assert_eq!(n, -lie.structure_constant(b, a));
                match rs.root_sum(a, b) {
                    Some(_) => assert_eq!(n.abs(), rs.string_start(a, b) + 1),
                    None => assert_eq!(n, 0),
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let rs = build_root_system(RootSystemType::F4);
        let lie = build_chevalley(&rs);
        let id = |c: [i64; 4]| rs.root_index(&RationalVector::from_ints(c)).unwrap();
        let idh = |c: [i64; 4]| rs.root_index(&RationalVector::from_halves(c)).unwrap();
        let b = lie.bracket_basis(id([0, 0, 0, 1]), id([0, 0, 1, -1]));
        assert_eq!(b.0.keys().copied().collect::<Vec<_>>(), vec![id([0, 0, 1, 0])]);
        assert!(lie.bracket_basis(id([1, 1, 0, 0]), id([1, 0, 0, 0])).is_zero());
        let x = LieElement::basis(idh([1, 1, -1, 1]));
        assert!(lie.bracket(&x, &x).is_zero());
        let b = lie.bracket_basis(id([0, 0, 0, -1]), idh([1, 1, -1, 1]));
        assert_eq!(b.0.keys().copied().collect::<Vec<_>>(), vec![idh([1, 1, -1, -1])]);
    }

    #[test]
    fn torus_acts_by_pairing() {
        let rs = build_root_system(RootSystemType::F4);
        let lie = build_chevalley(&rs);
        for i in 0..4 {
            let h = rs.coroot(rs.simple_id(i));
            for beta in 0..48 {
                let got = lie.bracket_basis(lie.cartan(i), beta);
                let expected = rs.vector(beta).dot(&h);
                assert_eq!(got.coeff(beta), expected);
            }
        }
    }
}
