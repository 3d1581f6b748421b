use alloc::string::String;
use alloc::vec::Vec;

use super::{BitSet, FcaError};

/// Objects `0..n`, attributes `0..m` and a binary incidence relation, stored
/// both row-wise and column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalContext {
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    columns: Vec<BitSet>,
}

impl FormalContext {
    pub fn new(objects: usize, attributes: Vec<String>) -> Self {
        let m = attributes.len();
        Self {
            rows: alloc::vec![BitSet::empty(m); objects],
            columns: alloc::vec![BitSet::empty(objects); m],
            attributes,
        }
    }

    pub fn from_pairs(objects: usize, attributes: Vec<String>, incidence: &[(usize, usize)]) -> Result<Self, FcaError> {
        let mut ctx = Self::new(objects, attributes);
        for &(g, m) in incidence {
            ctx.set(g, m)?;
        }
        Ok(ctx)
    }

    pub fn set(&mut self, object: usize, attribute: usize) -> Result<(), FcaError> {
        if object >= self.rows.len() {
            return Err(FcaError::UnknownObject(object));
        }
        if attribute >= self.attributes.len() {
            return Err(FcaError::UnknownAttribute(attribute));
        }
        self.rows[object].insert(attribute);
        self.columns[attribute].insert(object);
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.rows.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attributes
    }

    pub fn incident(&self, object: usize, attribute: usize) -> bool {
        self.rows.get(object).is_some_and(|r| r.contains(attribute))
    }

    /// Attributes of one object.
    pub fn row(&self, object: usize) -> &BitSet {
        &self.rows[object]
    }

    /// Objects having one attribute.
    pub fn column(&self, attribute: usize) -> &BitSet {
        &self.columns[attribute]
    }

    /// `X'`: attributes shared by every object in `objects`.
    pub fn intent_of(&self, objects: &BitSet) -> BitSet {
        debug_assert_eq!(objects.universe(), self.object_count());
        let mut out = BitSet::full(self.attribute_count());
        for g in objects.iter() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// `Y'`: objects having every attribute in `attributes`.
    pub fn extent_of(&self, attributes: &BitSet) -> BitSet {
        debug_assert_eq!(attributes.universe(), self.attribute_count());
        let mut out = BitSet::full(self.object_count());
        for m in attributes.iter() {
            out.intersect_with(&self.columns[m]);
        }
        out
    }

    pub fn common_attributes(&self, objects: &[usize]) -> Result<BitSet, FcaError> {
        if let Some(&bad) = objects.iter().find(|&&g| g >= self.object_count()) {
            return Err(FcaError::UnknownObject(bad));
        }
        Ok(self.intent_of(&BitSet::from_indices(self.object_count(), objects.iter().copied())))
    }

    pub fn common_objects(&self, attributes: &[usize]) -> Result<BitSet, FcaError> {
        if let Some(&bad) = attributes.iter().find(|&&m| m >= self.attribute_count()) {
            return Err(FcaError::UnknownAttribute(bad));
        }
        Ok(self.extent_of(&BitSet::from_indices(self.attribute_count(), attributes.iter().copied())))
    }
}
