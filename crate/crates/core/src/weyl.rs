//! Weyl group enumeration and minimal double-coset representatives.
//!
//! Elements are identified by their matrix on ε-space; since ρ is regular,
//! the image `w·ρ` determines `w`, and that image is the lookup key.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rootspace::{RationalVector, RootId, RootSystem, DIM, Q};

pub type Matrix = [[Q; DIM]; DIM];

/// Index of an element inside [`WeylGroup::elements`].
pub type ElemId = usize;

#[derive(Clone)]
pub struct WeylElement {
    pub matrix: Matrix,
    /// Reduced word `[i1, …, ik]` meaning `s_{i1} ⋯ s_{ik}`.
    pub word: Vec<u8>,
    pub length: usize,
    pub rho_image: RationalVector,
    /// `perm[r]` is the index of `w(root r)`.
    pub perm: Vec<RootId>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement(ρ↦{}, word={:?})", self.rho_image, self.word)
    }
}

impl WeylElement {
    pub fn act(&self, v: &RationalVector) -> RationalVector {
        act_matrix(&self.matrix, v)
    }

    pub fn act_root(&self, r: RootId) -> RootId {
        self.perm[r]
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Word rendered 1-based, e.g. `s1s3s2`; the identity is `e`.
    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "e".into();
        }
        self.word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

pub fn act_matrix(m: &Matrix, v: &RationalVector) -> RationalVector {
    RationalVector(std::array::from_fn(|i| (0..DIM).map(|j| m[i][j] * v.0[j]).sum()))
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..DIM).map(|k| a[i][k] * b[k][j]).sum()))
}

fn identity_matrix() -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Q::one() } else { Q::zero() }))
}

fn reflection_matrix(a: &RationalVector) -> Matrix {
    let n = a.norm_sq();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let d = if i == j { Q::one() } else { Q::zero() };
            d - Q::from_integer(2) * a.0[i] * a.0[j] / n
        })
    })
}

/// The whole Weyl group, element 0 being the identity.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    by_rho: HashMap<RationalVector, ElemId>,
    simple: Vec<ElemId>,
    rho: RationalVector,
}

/// Breadth-first closure under left multiplication by simple reflections.
/// Breadth-first order makes every recorded word reduced.
pub fn enumerate_weyl(rs: &RootSystem) -> WeylGroup {
    let reflections: Vec<Matrix> = rs.simple_roots.iter().map(|r| reflection_matrix(&r.vector)).collect();
    let make = |matrix: Matrix, word: Vec<u8>| {
        let perm: Vec<RootId> = (0..rs.num_roots())
            .map(|r| rs.root_index(&act_matrix(&matrix, &rs.vector(r))).expect("W permutes roots"))
            .collect();
        let length = (0..rs.num_positive()).filter(|&r| !rs.is_positive(perm[r])).count();
        WeylElement { rho_image: act_matrix(&matrix, &rs.rho), matrix, length, word, perm }
    };
    let mut elements = vec![make(identity_matrix(), Vec::new())];
    let mut by_rho = HashMap::from([(rs.rho, 0)]);
    let mut frontier = vec![0];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &e in &frontier {
            for (i, s) in reflections.iter().enumerate() {
                let m = mat_mul(s, &elements[e].matrix);
                let img = act_matrix(&m, &rs.rho);
                if by_rho.contains_key(&img) {
                    continue;
                }
                let mut word = vec![i as u8];
                word.extend_from_slice(&elements[e].word);
                by_rho.insert(img, elements.len());
                next.push(elements.len());
                elements.push(make(m, word));
            }
        }
        frontier = next;
    }
    let simple = (0..rs.cartan_rank).map(|i| by_rho[&act_matrix(&reflections[i], &rs.rho)]).collect();
    WeylGroup { elements, by_rho, simple, rho: rs.rho }
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn get(&self, id: ElemId) -> &WeylElement {
        &self.elements[id]
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn simple_reflection(&self, i: usize) -> ElemId {
        self.simple[i]
    }

    pub fn id_of(&self, w: &WeylElement) -> ElemId {
        self.by_rho[&w.rho_image]
    }

    /// The unique element carrying ρ to `target`.
    pub fn element_from_rho_image(&self, target: &RationalVector) -> Result<ElemId> {
        self.by_rho.get(target).copied().ok_or_else(|| Error::NotRhoImage(target.to_string()))
    }

    /// Element with the given word (1-based or 0-based indices are resolved
    /// by the caller; here indices are 0-based).
    pub fn from_word(&self, word: &[u8]) -> Result<ElemId> {
        let mut e = self.identity();
        for &i in word.iter().rev() {
            let i = i as usize;
            if i >= self.simple.len() {
                return Err(Error::InvalidWord(format!("generator index {} out of range", i + 1)));
            }
            e = self.multiply(self.simple[i], e);
        }
        Ok(e)
    }

    pub fn multiply(&self, a: ElemId, b: ElemId) -> ElemId {
        let img = self.elements[a].act(&self.elements[b].rho_image);
        self.by_rho[&img]
    }

    pub fn inverse(&self, a: ElemId) -> ElemId {
        let m = &self.elements[a].matrix;
        let t: Matrix = std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]));
        self.by_rho[&act_matrix(&t, &self.rho)]
    }

    /// Elements of the standard parabolic subgroup `W_J`.
    pub fn parabolic_subgroup(&self, gens: &BTreeSet<usize>) -> Vec<ElemId> {
        let mut seen = HashSet::from([self.identity()]);
        let mut out = vec![self.identity()];
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &e in &frontier {
                for &g in gens {
                    let n = self.multiply(e, self.simple[g]);
                    if seen.insert(n) {
                        out.push(n);
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Minimal-length representatives of `W_left \ U / W_right` where `U` is
    /// the parabolic subgroup generated by `universe` (the whole group when
    /// `universe` is `None`).
    pub fn double_cosets_within(
        &self,
        universe: Option<&BTreeSet<usize>>,
        left: &BTreeSet<usize>,
        right: &BTreeSet<usize>,
    ) -> DoubleCosetTable {
        let mut pool: Vec<ElemId> = match universe {
            Some(u) => self.parabolic_subgroup(u),
            None => (0..self.order()).collect(),
        };
        pool.sort_by_key(|&e| (self.elements[e].length, e));
        let wl = self.parabolic_subgroup(left);
        let wr = self.parabolic_subgroup(right);
        let mut seen = HashSet::new();
        let mut representatives = Vec::new();
        let mut coset_sizes = Vec::new();
        for &g in &pool {
            if seen.contains(&g) {
                continue;
            }
            let mut coset = HashSet::new();
            for &a in &wl {
                let ag = self.multiply(a, g);
                for &b in &wr {
                    coset.insert(self.multiply(ag, b));
                }
            }
            coset_sizes.push(coset.len());
            seen.extend(coset);
            representatives.push(g);
        }
        DoubleCosetTable {
            left_generators: left.clone(),
            right_generators: right.clone(),
            representatives,
            coset_sizes,
        }
    }

    pub fn double_cosets(&self, left: &BTreeSet<usize>, right: &BTreeSet<usize>) -> DoubleCosetTable {
        self.double_cosets_within(None, left, right)
    }

    /// The representative of maximal length. Errors if two representatives
    /// tie, which would contradict uniqueness of the open double coset.
    pub fn longest_coset_representative(&self, table: &DoubleCosetTable) -> Result<ElemId> {
        let max = table
            .representatives
            .iter()
            .map(|&e| self.elements[e].length)
            .max()
            .ok_or_else(|| Error::Inconsistency("empty double-coset table".into()))?;
        let top: Vec<ElemId> =
            table.representatives.iter().copied().filter(|&e| self.elements[e].length == max).collect();
        match top.as_slice() {
            [only] => Ok(*only),
            _ => Err(Error::Inconsistency(format!("{} representatives share maximal length {max}", top.len()))),
        }
    }

    /// The longest element of the whole group.
    pub fn longest_element(&self) -> ElemId {
        (0..self.order()).max_by_key(|&e| self.elements[e].length).expect("nonempty group")
    }
}

#[derive(Clone, Debug)]
pub struct DoubleCosetTable {
    pub left_generators: BTreeSet<usize>,
    pub right_generators: BTreeSet<usize>,
    /// Minimal-length representatives, sorted by length.
    pub representatives: Vec<ElemId>,
    /// Number of group elements in each double coset, parallel to
    /// `representatives`.
    pub coset_sizes: Vec<usize>,
}

impl DoubleCosetTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}
