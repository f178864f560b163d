use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared handle to a [`VariableSet`]; polynomials over the same ring share one.
pub type Ring = Arc<VariableSet>;

/// Ordered, distinct variable names partitioned into consecutive blocks
/// (e.g. a `z` block followed by an `a` block for a chart of `C^n × G(d,n)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableSet {
    names: Vec<String>,
    blocks: Vec<usize>,
}

impl VariableSet {
    /// A ring whose variables form a single block.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Ring> {
        let len = names.len();
        Self::with_blocks(names, &[len])
    }

    pub fn with_blocks<S: AsRef<str>>(names: &[S], blocks: &[usize]) -> Result<Ring> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidVariables("empty variable name".into()));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidVariables(format!("duplicate variable `{name}`")));
            }
        }
        if blocks.iter().sum::<usize>() != names.len() {
            return Err(Error::InvalidVariables(
                "block partition does not cover the variables".into(),
            ));
        }
        let blocks = blocks.iter().copied().filter(|&b| b > 0).collect();
        Ok(Arc::new(VariableSet { names, blocks }))
    }

    /// Variables `prefix1 … prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Ring {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Self::new(&names).expect("generated names are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A fresh name not used by this ring, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut candidate = base.to_string();
        let mut k = 0;
        while self.index_of(&candidate).is_some() {
            k += 1;
            candidate = format!("{base}_{k}");
        }
        candidate
    }

    /// This ring with `extra` prepended as a new leading block.
    pub(crate) fn prepend(&self, extra: &[String]) -> Ring {
        let mut names = extra.to_vec();
        names.extend(self.names.iter().cloned());
        let mut blocks = vec![extra.len()];
        blocks.extend(self.blocks.iter().copied());
        Self::with_blocks(&names, &blocks).expect("prepended names are fresh")
    }

    /// Drops the variables at `drop` (sorted, distinct); blocks shrink accordingly.
    pub(crate) fn without(&self, drop: &[usize]) -> Ring {
        let mut names = Vec::new();
        let mut blocks = Vec::new();
        let mut start = 0;
        for &size in &self.blocks {
            let kept: Vec<&String> = (start..start + size)
                .filter(|i| !drop.contains(i))
                .map(|i| &self.names[i])
                .collect();
            blocks.push(kept.len());
            names.extend(kept.into_iter().cloned());
            start += size;
        }
        Self::with_blocks(&names, &blocks).expect("subset of distinct names")
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
