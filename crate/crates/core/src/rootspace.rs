//! Exact root data in the ε-coordinate system.
//!
//! Every vector here lives in `(1/2)·Z^4` for F4 (and in `Z^4` for the
//! embedded G2), so coordinates are stored as exact rationals and all
//! pairings are computed without rounding.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Q = Rational64;

/// Number of ambient coordinates.
pub const DIM: usize = 4;

/// An exact vector in the ambient 4-dimensional ε-space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalVector(pub [Q; DIM]);

impl RationalVector {
    pub fn zero() -> Self {
        RationalVector([Q::zero(); DIM])
    }

    pub fn from_ints(c: [i64; DIM]) -> Self {
        RationalVector(c.map(Q::from_integer))
    }

    /// Builds a vector from doubled integer coordinates, so `[1, -1, -1, -1]`
    /// is `(ε1 − ε2 − ε3 − ε4)/2`.
    pub fn from_halves(c: [i64; DIM]) -> Self {
        RationalVector(c.map(|x| Q::new(x, 2)))
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = Q::one();
        v
    }

    pub fn coords(&self) -> &[Q; DIM] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> Q {
        inner_product(self, other)
    }

    pub fn norm_sq(&self) -> Q {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: Q) -> Self {
        RationalVector(self.0.map(|x| x * c))
    }
}

/// Standard Euclidean pairing on ε-coordinates.
pub fn inner_product(a: &RationalVector, b: &RationalVector) -> Q {
    a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y).sum()
}

impl Add for RationalVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (o, r) in out.0.iter_mut().zip(rhs.0) {
            *o += r;
        }
        out
    }
}

impl Sub for RationalVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for RationalVector {
    type Output = Self;
    fn neg(self) -> Self {
        RationalVector(self.0.map(|x| -x))
    }
}

impl Mul<RationalVector> for Q {
    type Output = RationalVector;
    fn mul(self, rhs: RationalVector) -> RationalVector {
        rhs.scale(self)
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RationalVector {
    type Err = Error;

    /// Accepts four comma-separated rationals, optionally parenthesised.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != DIM {
            return Err(Error::Parse(format!("expected {DIM} comma-separated rationals, got {s:?}")));
        }
        let mut out = RationalVector::zero();
        for (slot, p) in out.0.iter_mut().zip(parts) {
            *slot = parse_q(p)?;
        }
        Ok(out)
    }
}

impl Serialize for RationalVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(DIM))?;
        for q in &self.0 {
            seq.serialize_element(&fmt_q(q))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts: Vec<String> = Vec::deserialize(d)?;
        if parts.len() != DIM {
            return Err(serde::de::Error::custom("expected four coordinates"));
        }
        let mut out = RationalVector::zero();
        for (slot, p) in out.0.iter_mut().zip(&parts) {
            *slot = parse_q(p).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

/// Renders a root as an ε-expression, e.g. `ε1−ε2` or `½(ε1−ε2+ε3−ε4)`.
pub fn epsilon_expr(v: &RationalVector) -> String {
    let half = v.0.iter().all(|c| !c.is_integer());
    let scaled: Vec<Q> = if half { v.0.iter().map(|c| c * Q::from_integer(2)).collect() } else { v.0.to_vec() };
    let mut out = String::new();
    for (i, c) in scaled.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() {
            "−"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { fmt_q(&mag) };
        out.push_str(&format!("{sign}{coef}ε{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    if half {
        format!("½({out})")
    } else {
        out
    }
}

/// Supported Cartan types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootSystemType {
    F4,
    G2,
}

impl FromStr for RootSystemType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "F4" => Ok(RootSystemType::F4),
            "G2" => Ok(RootSystemType::G2),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystemType::F4 => f.write_str("F4"),
            RootSystemType::G2 => f.write_str("G2"),
        }
    }
}

/// A root together with its length class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub vector: RationalVector,
    pub is_long: bool,
}

/// Index of a root inside [`RootSystem::all_roots`].
pub type RootId = usize;

/// Full root data. Roots are indexed so that the positive roots come first,
/// ordered by height, and root `i + npos` is the negative of root `i`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub type_label: RootSystemType,
    pub simple_roots: Vec<Root>,
    pub all_roots: Vec<Root>,
    pub rho: RationalVector,
    pub cartan_rank: usize,
    /// Coordinates of each root in the simple-root basis.
    pub simple_coords: Vec<Vec<i64>>,
    index: HashMap<RationalVector, RootId>,
    /// `sum[a][b]` is the index of `a + b` when that is a root.
    sum: Vec<Vec<Option<RootId>>>,
}

/// The 48 roots of F4 written out by shape: ±εi, ±εi±εj and ½(±ε1±ε2±ε3±ε4).
pub fn f4_root_vectors() -> Vec<RationalVector> {
    let mut out = Vec::with_capacity(48);
    for i in 0..DIM {
        for s in [1, -1] {
            let mut c = [0; DIM];
            c[i] = s;
            out.push(RationalVector::from_ints(c));
        }
    }
    for i in 0..DIM {
        for j in i + 1..DIM {
            for s in [1, -1] {
                for t in [1, -1] {
                    let mut c = [0; DIM];
                    c[i] = s;
                    c[j] = t;
                    out.push(RationalVector::from_ints(c));
                }
            }
        }
    }
    for mask in 0..16u32 {
        let c = std::array::from_fn(|k| if mask >> k & 1 == 1 { -1 } else { 1 });
        out.push(RationalVector::from_halves(c));
    }
    out
}

/// Reflection of `v` in the hyperplane orthogonal to `a`.
pub fn reflect(a: &RationalVector, v: &RationalVector) -> RationalVector {
    let c = Q::from_integer(2) * a.dot(v) / a.norm_sq();
    *v - a.scale(c)
}

/// Closes a set of simple roots under the simple reflections.
pub fn close_under_reflections(simple: &[RationalVector]) -> Vec<RationalVector> {
    let mut seen: Vec<RationalVector> = simple.to_vec();
    let mut frontier = seen.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for a in simple {
                let r = reflect(a, v);
                if !seen.contains(&r) {
                    seen.push(r);
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    seen
}

fn simple_vectors(t: RootSystemType) -> Vec<RationalVector> {
    match t {
        RootSystemType::F4 => vec![
            RationalVector::from_ints([0, 1, -1, 0]),
            RationalVector::from_ints([0, 0, 1, -1]),
            RationalVector::from_ints([0, 0, 0, 1]),
            RationalVector::from_halves([1, -1, -1, -1]),
        ],
        RootSystemType::G2 => vec![RationalVector::from_ints([1, -1, 0, 0]), RationalVector::from_ints([-2, 1, 1, 0])],
    }
}

/// Solves `v = Σ c_i · basis_i` for `v` in the span of a linearly
/// independent `basis`, via the Gram matrix.
pub(crate) fn coordinates_in(basis: &[RationalVector], v: &RationalVector) -> Option<Vec<Q>> {
    let n = basis.len();
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = (0..n).map(|j| basis[i].dot(&basis[j])).collect();
            row.push(basis[i].dot(v));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..=n {
                    let t = m[col][c] * f;
                    m[r][c] -= t;
                }
            }
        }
    }
    let c: Vec<Q> = m.iter().map(|row| row[n]).collect();
    let back = basis.iter().zip(&c).fold(RationalVector::zero(), |acc, (b, ci)| acc + b.scale(*ci));
    (back == *v).then_some(c)
}

/// Builds the root system of the given type with simple roots in the
/// Bourbaki order (for F4: α1 = ε2−ε3, α2 = ε3−ε4, α3 = ε4,
/// α4 = ½(ε1−ε2−ε3−ε4)).
pub fn build_root_system(t: RootSystemType) -> RootSystem {
    let simple = simple_vectors(t);
    let vectors = match t {
        RootSystemType::F4 => f4_root_vectors(),
        RootSystemType::G2 => close_under_reflections(&simple),
    };
    let max_len = vectors.iter().map(|v| v.norm_sq()).max().expect("nonempty root set");
    let mut positive: Vec<(RationalVector, Vec<i64>)> = Vec::new();
    for v in &vectors {
        let c = coordinates_in(&simple, v).expect("root lies in the simple-root lattice");
        let c: Vec<i64> = c
            .iter()
            .map(|q| {
                assert!(q.is_integer(), "non-integral simple coordinate");
                q.to_integer()
            })
            .collect();
        if c.iter().all(|&x| x >= 0) {
            positive.push((*v, c));
        } else {
            assert!(c.iter().all(|&x| x <= 0), "root neither positive nor negative");
        }
    }
    positive.sort_by(|a, b| {
        let ha: i64 = a.1.iter().sum();
        let hb: i64 = b.1.iter().sum();
        ha.cmp(&hb).then_with(|| b.1.cmp(&a.1))
    });
    let npos = positive.len();
    let mut all_roots = Vec::with_capacity(2 * npos);
    let mut simple_coords = Vec::with_capacity(2 * npos);
    for sign in [1i64, -1] {
        for (v, c) in &positive {
            let vec = if sign == 1 { *v } else { -*v };
            all_roots.push(Root { vector: vec, is_long: vec.norm_sq() == max_len });
            simple_coords.push(c.iter().map(|x| sign * x).collect());
        }
    }
    let index: HashMap<RationalVector, RootId> = all_roots.iter().enumerate().map(|(i, r)| (r.vector, i)).collect();
    let sum = all_roots
        .iter()
        .map(|a| all_roots.iter().map(|b| index.get(&(a.vector + b.vector)).copied()).collect())
        .collect();
    let half = Q::new(1, 2);
    let rho = positive.iter().fold(RationalVector::zero(), |acc, (v, _)| acc + *v).scale(half);
    RootSystem {
        type_label: t,
        simple_roots: simple.iter().map(|v| Root { vector: *v, is_long: v.norm_sq() == max_len }).collect(),
        all_roots,
        rho,
        cartan_rank: simple.len(),
        simple_coords,
        index,
        sum,
    }
}

impl RootSystem {
    pub fn num_roots(&self) -> usize {
        self.all_roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.all_roots.len() / 2
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.all_roots[..self.num_positive()]
    }

    pub fn vector(&self, id: RootId) -> RationalVector {
        self.all_roots[id].vector
    }

    pub fn root_index(&self, v: &RationalVector) -> Option<RootId> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &RationalVector) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_positive(&self, id: RootId) -> bool {
        id < self.num_positive()
    }

    pub fn negate(&self, id: RootId) -> RootId {
        let n = self.num_positive();
        (id + n) % (2 * n)
    }

    /// `Some(a + b)` when the sum is a root.
    pub fn root_sum(&self, a: RootId, b: RootId) -> Option<RootId> {
        self.sum[a][b]
    }

    pub fn height(&self, id: RootId) -> i64 {
        self.simple_coords[id].iter().sum()
    }

    /// Index of the `i`-th simple root.
    pub fn simple_id(&self, i: usize) -> RootId {
        self.root_index(&self.simple_roots[i].vector).expect("simple root is a root")
    }

    /// Coroot `2α/(α,α)` as an ε-vector.
    pub fn coroot(&self, id: RootId) -> RationalVector {
        let v = self.vector(id);
        v.scale(Q::from_integer(2) / v.norm_sq())
    }

    /// Squared length of every positive root, normalised so the long roots of
    /// F4 have squared length 2.
    pub fn norm_sq(&self, id: RootId) -> Q {
        self.vector(id).norm_sq()
    }

    /// Largest `p` with `b − p·a` a root (beginning of the a-string through b).
    pub fn string_start(&self, a: RootId, b: RootId) -> i64 {
        let va = self.vector(a);
        let mut v = self.vector(b);
        let mut p = 0;
        loop {
            v = v - va;
            if !self.is_root(&v) {
                return p;
            }
            p += 1;
        }
    }

    /// Rank over Q of a set of roots.
    pub fn rank_of(&self, ids: &[RootId]) -> usize {
        let vectors: Vec<RationalVector> = ids.iter().map(|&i| self.vector(i)).collect();
        rank_of_vectors(&vectors)
    }

    pub fn expr(&self, id: RootId) -> String {
        epsilon_expr(&self.vector(id))
    }
}

/// Rank over Q of a list of ambient vectors.
pub fn rank_of_vectors(vectors: &[RationalVector]) -> usize {
    let mut rows: Vec<[Q; DIM]> = vectors.iter().map(|v| v.0).collect();
    let mut rank = 0;
    for col in 0..DIM {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for r in rank + 1..rows.len() {
            let f = rows[r][col] / pivot[col];
            if !f.is_zero() {
                for c in col..DIM {
                    rows[r][c] -= f * pivot[c];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_basic_counts() {
        let rs = build_root_system(RootSystemType::F4);
        assert_eq!(rs.num_roots(), 48);
        assert_eq!(rs.num_positive(), 24);
        assert_eq!(rs.cartan_rank, 4);
        assert_eq!(rs.rho, "11/2,5/2,3/2,1/2".parse().unwrap());
        let long = rs.all_roots.iter().filter(|r| r.is_long).count();
        assert_eq!(long, 24);
        for r in &rs.all_roots {
            assert_eq!(r.is_long, r.vector.norm_sq() == Q::from_integer(2));
        }
    }

    #[test]
    fn f4_explicit_list_matches_reflection_closure() {
        let rs = build_root_system(RootSystemType::F4);
        let simple: Vec<RationalVector> = rs.simple_roots.iter().map(|r| r.vector).collect();
        let mut closed = close_under_reflections(&simple);
        let mut explicit = f4_root_vectors();
        closed.sort();
        explicit.sort();
        assert_eq!(closed, explicit);
    }

    #[test]
    fn g2_counts() {
        let rs = build_root_system(RootSystemType::G2);
        assert_eq!(rs.num_roots(), 12);
        assert_eq!(rs.cartan_rank, 2);
        assert_eq!(rs.all_roots.iter().filter(|r| r.is_long).count(), 6);
    }

    #[test]
    fn negation_and_positivity() {
        let rs = build_root_system(RootSystemType::F4);
        for i in 0..rs.num_roots() {
            assert_eq!(rs.vector(rs.negate(i)), -rs.vector(i));
            assert_eq!(rs.negate(rs.negate(i)), i);
            let c = &rs.simple_coords[i];
            if rs.is_positive(i) {
                assert!(c.iter().all(|&x| x >= 0));
            }
        }
    }

    #[test]
    fn rho_pairs_to_one_with_simple_coroots() {
        for t in [RootSystemType::F4, RootSystemType::G2] {
            let rs = build_root_system(t);
            for i in 0..rs.cartan_rank {
                assert_eq!(rs.rho.dot(&rs.coroot(rs.simple_id(i))), Q::from_integer(1));
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let gamma = RationalVector::from_ints([3, 1, 1, 0]);
        assert_eq!(RationalVector::from_ints([0, 1, -1, 0]).dot(&gamma), Q::zero());
        assert_eq!(RationalVector::from_halves([1, -1, -1, -1]).dot(&gamma), Q::new(1, 2));
        assert_eq!(RationalVector::zero().norm_sq(), Q::zero());
    }

    #[test]
    fn root_sum_examples() {
        let rs = build_root_system(RootSystemType::F4);
        let id = |v: RationalVector| rs.root_index(&v).unwrap();
        let e4 = id(RationalVector::from_ints([0, 0, 0, 1]));
        let e3m4 = id(RationalVector::from_ints([0, 0, 1, -1]));
        let e3 = id(RationalVector::from_ints([0, 0, 1, 0]));
        assert_eq!(rs.root_sum(e4, e3m4), Some(e3));
        let e1 = id(RationalVector::from_ints([1, 0, 0, 0]));
        assert_eq!(rs.root_sum(e1, e1), None);
        let a4 = id(RationalVector::from_halves([1, -1, -1, -1]));
        let t = rs.root_sum(a4, e3).unwrap();
        assert_eq!(rs.vector(t), RationalVector::from_halves([1, -1, 1, -1]));
    }

    #[test]
    fn root_sum_agrees_with_membership_scan() {
        let rs = build_root_system(RootSystemType::F4);
        let list = f4_root_vectors();
        for a in 0..48 {
            for b in 0..48 {
                let s = rs.vector(a) + rs.vector(b);
                assert_eq!(rs.root_sum(a, b).is_some(), list.contains(&s));
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let v: RationalVector = "(-5/2, 11/2, 3/2, 1/2)".parse().unwrap();
        assert_eq!(v.to_string(), "(-5/2,11/2,3/2,1/2)");
        assert!("1,2,3".parse::<RationalVector>().is_err());
        assert!("a,b,c,d".parse::<RationalVector>().is_err());
        assert_eq!(epsilon_expr(&RationalVector::from_halves([1, -1, 1, -1])), "½(ε1−ε2+ε3−ε4)");
        assert_eq!(epsilon_expr(&RationalVector::from_ints([1, 0, 0, -1])), "ε1−ε4");
    }

    #[test]
    fn unsupported_type() {
        assert!(matches!("E6".parse::<RootSystemType>(), Err(Error::UnsupportedType(_))));
    }
}
