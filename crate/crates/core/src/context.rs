//! Shared immutable data for one root system.

use std::collections::BTreeSet;

use crate::chevalley::{build_chevalley, LieAlgebraBasis};
use crate::error::Result;
use crate::parabolic::{parse_single_label, resolve_label, standard_parabolic, ParabolicSubgroup};
use crate::rootspace::{build_root_system, RootSystem, RootSystemType};
use crate::weyl::{enumerate_weyl, WeylGroup};

/// Root system, Weyl group and Chevalley basis built once and shared.
#[derive(Clone, Debug)]
pub struct Context {
    pub roots: RootSystem,
    pub weyl: WeylGroup,
    pub lie: LieAlgebraBasis,
}

impl Context {
    pub fn new(t: RootSystemType) -> Self {
        let roots = build_root_system(t);
        let weyl = enumerate_weyl(&roots);
        let lie = build_chevalley(&roots);
        Context { roots, weyl, lie }
    }

    pub fn f4() -> Self {
        Self::new(RootSystemType::F4)
    }

    pub fn parabolic(&self, levi: &[usize]) -> ParabolicSubgroup {
        standard_parabolic(&self.roots, &levi.iter().copied().collect())
    }

    pub fn parabolic_from_set(&self, levi: &BTreeSet<usize>) -> ParabolicSubgroup {
        standard_parabolic(&self.roots, levi)
    }

    /// Parses a label denoting exactly one placement.
    pub fn parse_parabolic(&self, label: &str) -> Result<ParabolicSubgroup> {
        parse_single_label(&self.roots, label)
    }

    /// Every placement a label may denote.
    pub fn parse_parabolic_family(&self, label: &str) -> Result<Vec<ParabolicSubgroup>> {
        Ok(resolve_label(self.roots.type_label, label)?.iter().map(|s| standard_parabolic(&self.roots, s)).collect())
    }

    /// `dim G`.
    pub fn group_dimension(&self) -> usize {
        self.roots.cartan_rank + self.roots.num_roots()
    }

    /// All standard parabolics, indexed by subsets of simple roots.
    pub fn all_parabolics(&self) -> Vec<ParabolicSubgroup> {
        let r = self.roots.cartan_rank;
        (0u32..1 << r)
            .map(|mask| {
                let levi: BTreeSet<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
                standard_parabolic(&self.roots, &levi)
            })
            .collect()
    }
}
