//! Standard parabolic subgroups, described by their root data.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::rootspace::{RationalVector, RootId, RootSystem, RootSystemType, Q};
use crate::weyl::WeylElement;

/// A standard parabolic `P = L·N` containing the fixed Borel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSubgroup {
    /// Simple roots (0-based) spanning the Levi factor.
    pub levi_simple: BTreeSet<usize>,
    /// Element of the Cartan pairing to zero on the Levi and positively on
    /// the nilradical.
    pub lambda: RationalVector,
    pub levi_roots: Vec<RootId>,
    pub nilradical_roots: Vec<RootId>,
    pub label: String,
}

impl fmt::Display for ParabolicSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Sum of the fundamental coweights dual to the simple roots not in `levi`.
pub fn defining_element(rs: &RootSystem, levi: &BTreeSet<usize>) -> RationalVector {
    let n = rs.cartan_rank;
    let basis: Vec<RationalVector> = rs.simple_roots.iter().map(|r| r.vector).collect();
    let gram: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| basis[i].dot(&basis[j])).collect()).collect();
    let rhs: Vec<Q> = (0..n).map(|j| Q::from_integer(i64::from(!levi.contains(&j)))).collect();
    let c = solve(&gram, &rhs).expect("Gram matrix of simple roots is invertible");
    basis.iter().zip(&c).fold(RationalVector::zero(), |acc, (b, ci)| acc + b.scale(*ci))
}

pub fn standard_parabolic(rs: &RootSystem, levi_simple: &BTreeSet<usize>) -> ParabolicSubgroup {
    let lambda = defining_element(rs, levi_simple);
    let mut levi_roots = Vec::new();
    let mut nilradical_roots = Vec::new();
    for r in 0..rs.num_roots() {
        let p = lambda.dot(&rs.vector(r));
        if p.is_zero() {
            levi_roots.push(r);
        } else if p > Q::zero() {
            nilradical_roots.push(r);
        }
    }
    ParabolicSubgroup {
        levi_simple: levi_simple.clone(),
        lambda,
        levi_roots,
        nilradical_roots,
        label: canonical_label(rs.type_label, levi_simple),
    }
}

impl ParabolicSubgroup {
    /// Dimension of `P` itself.
    pub fn dim(&self, rs: &RootSystem) -> usize {
        rs.cartan_rank + self.levi_roots.len() + self.nilradical_roots.len()
    }

    /// `dim G/P`, the number of nilradical roots.
    pub fn flag_dimension(&self) -> usize {
        self.nilradical_roots.len()
    }

    pub fn is_maximal(&self, rs: &RootSystem) -> bool {
        self.levi_simple.len() + 1 == rs.cartan_rank
    }

    /// `self ⊆ other` as standard parabolics.
    pub fn is_contained_in(&self, other: &ParabolicSubgroup) -> bool {
        self.levi_simple.is_subset(&other.levi_simple)
    }

    /// Transports λ and the root sets by `w`.
    pub fn conjugate(&self, w: &WeylElement) -> ConjugatedParabolic {
        let mut levi_roots: Vec<RootId> = self.levi_roots.iter().map(|&r| w.act_root(r)).collect();
        let mut nilradical_roots: Vec<RootId> = self.nilradical_roots.iter().map(|&r| w.act_root(r)).collect();
        levi_roots.sort_unstable();
        nilradical_roots.sort_unstable();
        ConjugatedParabolic { lambda: w.act(&self.lambda), levi_roots, nilradical_roots }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatedParabolic {
    pub lambda: RationalVector,
    pub levi_roots: Vec<RootId>,
    pub nilradical_roots: Vec<RootId>,
}

pub fn flag_dimension(p: &ParabolicSubgroup) -> usize {
    p.flag_dimension()
}

pub fn conjugate_parabolic_data(p: &ParabolicSubgroup, w: &WeylElement) -> ConjugatedParabolic {
    p.conjugate(w)
}

fn nodes(levi: &BTreeSet<usize>) -> String {
    levi.iter().map(|i| (i + 1).to_string()).collect()
}

/// Unambiguous label for a subset of F4 simple roots. Types with several
/// placements carry their node list, e.g. `A1xA1[13]`.
pub fn canonical_label(t: RootSystemType, levi: &BTreeSet<usize>) -> String {
    let v: Vec<usize> = levi.iter().copied().collect();
    if t == RootSystemType::G2 {
        return match v.as_slice() {
            [] => "Borel".into(),
            [0] => "A1(s)".into(),
            [1] => "A1(l)".into(),
            _ => "G".into(),
        };
    }
    match v.as_slice() {
        [] => "Borel".into(),
        [0] | [1] => format!("A1(l)[{}]", nodes(levi)),
        [2] | [3] => format!("A1(s)[{}]", nodes(levi)),
        [0, 1] => "A2(l)".into(),
        [2, 3] => "A2(s)".into(),
        [1, 2] => "B2".into(),
        [_, _] => format!("A1xA1[{}]", nodes(levi)),
        [0, 1, 2] => "B3".into(),
        [1, 2, 3] => "C3".into(),
        [0, 1, 3] => "A2(l)xA1(s)".into(),
        [0, 2, 3] => "A1(l)xA2(s)".into(),
        _ => "G".into(),
    }
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

/// All placements a label may denote. Generic families (`A1xA1`, `A1(l)`,
/// `A2`) expand to every choice; a bracketed node list such as `[134]` or
/// `A1xA1[13]` pins one placement.
pub fn resolve_label(t: RootSystemType, label: &str) -> Result<Vec<BTreeSet<usize>>> {
    let rank = match t {
        RootSystemType::F4 => 4,
        RootSystemType::G2 => 2,
    };
    let raw = label.trim();
    let unknown = || Error::UnknownLabel(raw.to_string());
    if let Some(start) = raw.find('[') {
        let inner = raw[start..].trim_start_matches('[').trim_end_matches(']');
        let mut s = BTreeSet::new();
        for c in inner.chars() {
            let d = c.to_digit(10).ok_or_else(unknown)? as usize;
            if d == 0 || d > rank || !s.insert(d - 1) {
                return Err(unknown());
            }
        }
        let head = &raw[..start];
        if !head.is_empty() {
            let family = resolve_label(t, head)?;
            if !family.contains(&s) {
                return Err(unknown());
            }
        }
        return Ok(vec![s]);
    }
    let norm = raw.replace('×', "x").replace(' ', "");
    let found = match (t, norm.as_str()) {
        (_, "Borel") | (_, "B") => vec![set(&[])],
        (_, "G") => vec![(0..rank).collect()],
        (RootSystemType::G2, "A1(s)") => vec![set(&[0])],
        (RootSystemType::G2, "A1(l)") => vec![set(&[1])],
        (RootSystemType::G2, _) => return Err(unknown()),
        (_, "A1(l)") => vec![set(&[0]), set(&[1])],
        (_, "A1(s)") => vec![set(&[2]), set(&[3])],
        (_, "A1") => vec![set(&[0]), set(&[1]), set(&[2]), set(&[3])],
        (_, "A1xA1") | (_, "A1(l)xA1(s)") => vec![set(&[0, 2]), set(&[0, 3]), set(&[1, 3])],
        (_, "A2(l)") => vec![set(&[0, 1])],
        (_, "A2(s)") => vec![set(&[2, 3])],
        (_, "A2") => vec![set(&[0, 1]), set(&[2, 3])],
        (_, "B2") | (_, "C2") => vec![set(&[1, 2])],
        (_, "B3") => vec![set(&[0, 1, 2])],
        (_, "C3") => vec![set(&[1, 2, 3])],
        (_, "A2(l)xA1(s)") => vec![set(&[0, 1, 3])],
        (_, "A1(l)xA2(s)") => vec![set(&[0, 2, 3])],
        (_, "A2xA1") | (_, "A1xA2") => vec![set(&[0, 1, 3]), set(&[0, 2, 3])],
        _ => return Err(unknown()),
    };
    Ok(found)
}

/// Parses a label that must denote exactly one placement.
pub fn parse_single_label(rs: &RootSystem, label: &str) -> Result<ParabolicSubgroup> {
    let placements = resolve_label(rs.type_label, label)?;
    match placements.as_slice() {
        [one] => Ok(standard_parabolic(rs, one)),
        _ => Err(Error::UnknownLabel(format!(
            "{label} is ambiguous ({} placements); pin one with a node list such as {}",
            placements.len(),
            canonical_label(rs.type_label, &placements[0])
        ))),
    }
}

/// Serializable summary used by reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicSummary {
    pub label: String,
    pub levi_simple: Vec<usize>,
    pub lambda: RationalVector,
    pub flag_dimension: usize,
}

impl From<&ParabolicSubgroup> for ParabolicSummary {
    fn from(p: &ParabolicSubgroup) -> Self {
        ParabolicSummary {
            label: p.label.clone(),
            levi_simple: p.levi_simple.iter().map(|i| i + 1).collect(),
            lambda: p.lambda,
            flag_dimension: p.flag_dimension(),
        }
    }
}
