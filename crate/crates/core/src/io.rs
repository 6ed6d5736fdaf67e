//! Facet-list interchange: `{"dimension": n, "facets": [[v, ...], ...]}`.

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetList {
    pub dimension: i64,
    pub facets: Vec<Vec<usize>>,
}

impl FacetList {
    /// Facets in (dimension, lexicographic) order.
    pub fn from_complex(x: &SimplicialComplex) -> Self {
        FacetList {
            dimension: x.dimension(),
            facets: x.facets().iter().map(|f| f.vertices().to_vec()).collect(),
        }
    }
}

/// A complex read from disk, with the reindexing applied if the ids were sparse.
#[derive(Clone, Debug)]
pub struct LoadedComplex {
    pub complex: SimplicialComplex,
    /// Original id of each vertex when the input was reindexed.
    pub original_ids: Option<Vec<usize>>,
}

impl LoadedComplex {
    pub fn warning(&self) -> Option<String> {
        self.original_ids
            .as_ref()
            .map(|ids| format!("vertex ids were sparse; reindexed {} vertices to 0..{}", ids.len(), ids.len()))
    }
}

pub fn parse_facet_list(text: &str) -> Result<LoadedComplex> {
    let raw: FacetList = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let facets = raw
        .facets
        .iter()
        .map(|f| Simplex::try_from(f.clone()))
        .collect::<Result<Vec<_>>>()?;
    let complex = SimplicialComplex::from_facets(facets)?;
    if complex.dimension() != raw.dimension {
        return Err(Error::Malformed(format!(
            "declared dimension {} but facets have dimension {}",
            raw.dimension,
            complex.dimension()
        )));
    }
    if complex.is_dense() {
        return Ok(LoadedComplex {
            complex,
            original_ids: None,
        });
    }
    let (complex, ids) = complex.reindexed();
    Ok(LoadedComplex {
        complex,
        original_ids: Some(ids),
    })
}

pub fn facet_list_json(x: &SimplicialComplex) -> String {
    serde_json::to_string(&FacetList::from_complex(x)).expect("facet list serializes")
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FacetList::from_complex(self).serialize(serializer)
    }
}
