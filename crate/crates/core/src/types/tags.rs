use std::collections::HashMap;

use crate::engine::Sym;

/// Numeric identifier of a constructor label together with its arity.
pub type TagId = u32;

/// Bijection between `(label, arity)` pairs and tag ids, plus the global
/// bounds used when the solver generates S-expression types.
#[derive(Clone, Debug, Default)]
pub struct TagTable {
    entries: Vec<(Sym, usize)>,
    index: HashMap<(Sym, usize), TagId>,
    max_arity: usize,
    max_length_override: Option<usize>,
}

impl TagTable {
    pub fn new() -> Self {
        TagTable::default()
    }

    pub fn intern(&mut self, label: &str, arity: usize) -> TagId {
        let key = (Sym::new(label), arity);
        if let Some(id) = self.index.get(&key) {
            return *id;
        }
        let id = self.entries.len() as TagId;
        self.entries.push(key.clone());
        self.index.insert(key, id);
        self.max_arity = self.max_arity.max(arity);
        id
    }

    pub fn lookup(&self, label: &str, arity: usize) -> Option<TagId> {
        self.index.get(&(Sym::new(label), arity)).copied()
    }

    pub fn label(&self, id: TagId) -> Option<&str> {
        self.entries.get(id as usize).map(|(l, _)| l.as_str())
    }

    pub fn arity(&self, id: TagId) -> Option<usize> {
        self.entries.get(id as usize).map(|(_, a)| *a)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = TagId> {
        0..self.entries.len() as TagId
    }

    pub fn entries(&self) -> impl Iterator<Item = (TagId, &str, usize)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, (l, a))| (i as TagId, l.as_str(), *a))
    }

    /// Upper bound on the length of generated constructor lists: the number
    /// of distinct constructors unless overridden.
    pub fn sexp_max_length(&self) -> usize {
        self.max_length_override.unwrap_or(self.entries.len())
    }

    pub fn set_sexp_max_length(&mut self, n: usize) {
        self.max_length_override = Some(n);
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }
}
