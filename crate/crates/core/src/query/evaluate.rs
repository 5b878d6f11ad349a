use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::catalog::{Catalog, SpatialMode};
use super::selection::SelectionState;
use super::QueryError;
use crate::graph::NodeId;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FilterResult {
    pub dataset_ids: Vec<NodeId>,
    pub total: usize,
    pub per_source: BTreeMap<String, usize>,
    /// Catalog positions of `dataset_ids`, when produced by [`Catalog::evaluate`].
    #[serde(skip)]
    positions: Vec<usize>,
}

impl PartialEq for FilterResult {
    fn eq(&self, other: &Self) -> bool {
        self.dataset_ids == other.dataset_ids && self.total == other.total && self.per_source == other.per_source
    }
}

impl Eq for FilterResult {}

impl Catalog {
    /// Checks a selection against the catalog without evaluating it.
    pub fn validate_selection(&self, selection: &SelectionState) -> Result<(), QueryError> {
        if let Some(range) = &selection.time_range {
            range.validate().map_err(|e| QueryError::InvalidSelection(e.to_string()))?;
        }
        if let Some(bbox) = &selection.spatial_box {
            bbox.validate().map_err(|e| QueryError::InvalidSelection(e.to_string()))?;
        }
        for term in &selection.keywords {
            if self.keyword_node(term).is_none() {
                return Err(QueryError::UnknownKeyword(term.clone()));
            }
        }
        for author in &selection.authors {
            if self.author_node(author).is_none() {
                return Err(QueryError::UnknownAuthor(author.clone()));
            }
        }
        Ok(())
    }

    /// Membership flags over [`Catalog::datasets`].
    pub(crate) fn selection_mask(&self, selection: &SelectionState) -> Result<Vec<bool>, QueryError> {
        self.validate_selection(selection)?;
        let n = self.dataset_count();
        let mut mask = vec![true; n];
        let restrict = |mask: &mut Vec<bool>, members: &[bool]| {
            mask.iter_mut().zip(members).for_each(|(m, keep)| *m &= *keep);
        };

        for term in &selection.keywords {
            let keyword = self.keyword_node(term).expect("validated");
            let mut members = vec![false; n];
            for dataset in self.keyword_datasets(keyword) {
                if let Some(i) = self.position(&dataset) {
                    members[i] = true;
                }
            }
            restrict(&mut mask, &members);
        }

        if let Some(range) = &selection.time_range {
            let mut members = vec![false; n];
            for dataset in self.store().temporal_index().intersecting(range.start.micros(), range.end.micros()) {
                if let Some(i) = self.position(&dataset) {
                    members[i] = true;
                }
            }
            restrict(&mut mask, &members);
        }

        if let Some(bbox) = &selection.spatial_box {
            let mode = self.options().spatial_mode;
            for (m, dataset) in mask.iter_mut().zip(self.datasets()) {
                *m &= match mode {
                    SpatialMode::DisplayPoint => dataset.point.is_some_and(|p| bbox.contains(p)),
                    SpatialMode::BboxIntersect => dataset.extent.as_ref().is_some_and(|e| bbox.intersects_extent(e)),
                };
            }
        }

        if !selection.authors.is_empty() {
            let wanted: BTreeSet<NodeId> = selection.authors.iter().filter_map(|a| self.author_node(a)).collect();
            for (m, dataset) in mask.iter_mut().zip(self.datasets()) {
                *m &= dataset.authors.iter().any(|(id, _)| wanted.contains(id));
            }
        }

        if !selection.sources.is_empty() {
            let wanted: BTreeSet<&str> = selection.sources.iter().map(String::as_str).collect();
            for (m, dataset) in mask.iter_mut().zip(self.datasets()) {
                *m &= wanted.contains(dataset.corpus.as_str());
            }
        }
        Ok(mask)
    }

    /// Datasets matching every dimension of the selection.
    pub fn evaluate(&self, selection: &SelectionState) -> Result<FilterResult, QueryError> {
        let mask = self.selection_mask(selection)?;
        let mut result = FilterResult::default();
        for (i, dataset) in self.datasets().iter().enumerate().filter(|(i, _)| mask[*i]) {
            result.positions.push(i);
            result.dataset_ids.push(dataset.id.clone());
            *result.per_source.entry(dataset.corpus.clone()).or_default() += 1;
        }
        result.total = result.dataset_ids.len();
        Ok(result)
    }

    /// Positions of the result's datasets in [`Catalog::datasets`].
    pub(crate) fn result_positions(&self, result: &FilterResult) -> Vec<usize> {
        if result.positions.len() == result.dataset_ids.len() {
            return result.positions.clone();
        }
        result.dataset_ids.iter().filter_map(|id| self.position(id)).collect()
    }

    /// [`Catalog::result_positions`] as membership flags.
    pub(crate) fn result_flags(&self, result: &FilterResult) -> Vec<bool> {
        let mut flags = vec![false; self.dataset_count()];
        for i in self.result_positions(result) {
            flags[i] = true;
        }
        flags
    }
}
