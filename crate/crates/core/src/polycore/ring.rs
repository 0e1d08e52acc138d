use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::PolyError;

/// Role of a variable in an algebraized construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VarKind {
    /// Independent parameter (coordinate of a free point, abscissa of a semi-free point).
    Free,
    /// Coordinate determined by the construction.
    Dependent,
    /// Slack variable introduced by a Rabinowitsch-style inequation.
    Auxiliary,
}

/// Ordered, named variables with their classification.
#[derive(Clone, PartialEq, Eq)]
pub struct VariableTable {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    index: HashMap<String, usize>,
}

/// Shared handle to a variable table. Polynomials over the same ring hold clones of one handle.
pub type Ring = Arc<VariableTable>;

impl VariableTable {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, VarKind)>) -> Result<Self, PolyError> {
        let mut names = Vec::new();
        let mut kinds = Vec::new();
        let mut index = HashMap::new();
        for (name, kind) in vars {
            let name = name.into();
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(PolyError::DuplicateVariable(name));
            }
            names.push(name);
            kinds.push(kind);
        }
        Ok(VariableTable { names, kinds, index })
    }

    /// Convenience constructor: all variables FREE.
    pub fn free(names: &[&str]) -> Ring {
        Arc::new(Self::new(names.iter().map(|n| (*n, VarKind::Free))).expect("distinct names"))
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

    pub fn kind(&self, i: usize) -> VarKind {
        self.kinds[i]
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn indices_of_kind(&self, kind: VarKind) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.kinds[i] == kind).collect()
    }

    /// New table with `extra` appended after the existing variables.
    pub fn extended<S: Into<String>>(
        &self,
        extra: impl IntoIterator<Item = (S, VarKind)>,
    ) -> Result<VariableTable, PolyError> {
        let existing = self.names.iter().cloned().zip(self.kinds.iter().copied());
        let added = extra.into_iter().map(|(n, k)| (n.into(), k));
        VariableTable::new(existing.chain(added))
    }

    /// Same names, with the classification of `name` replaced.
    pub fn reclassified(&self, name: &str, kind: VarKind) -> Result<VariableTable, PolyError> {
        let i = self
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut t = self.clone();
        t.kinds[i] = kind;
        Ok(t)
    }
}

impl fmt::Debug for VariableTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.names.iter().zip(&self.kinds))
            .finish()
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}
