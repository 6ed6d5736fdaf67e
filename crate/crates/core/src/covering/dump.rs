use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::branched::BranchedCovering;
use super::map::SimplicialMap;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::io::FacetList;

/// Interchange form of a (branched) covering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringDump {
    pub source: FacetList,
    pub target: FacetList,
    /// `[source vertex, target vertex]` pairs in source order.
    pub vertex_map: Vec<[usize; 2]>,
    #[serde(default)]
    pub branch: Vec<Vec<usize>>,
    pub degree: usize,
}

fn complex_of(f: &FacetList) -> Result<SimplicialComplex> {
    let x = SimplicialComplex::from_facets(
        f.facets
            .iter()
            .map(|s| Simplex::try_from(s.clone()))
            .collect::<Result<Vec<_>>>()?,
    )?;
    if x.dimension() != f.dimension {
        return Err(Error::Malformed(format!(
            "declared dimension {} but facets have dimension {}",
            f.dimension,
            x.dimension()
        )));
    }
    Ok(x)
}

impl CoveringDump {
    pub fn from_branched(bc: &BranchedCovering) -> Self {
        CoveringDump {
            source: FacetList::from_complex(bc.source()),
            target: FacetList::from_complex(bc.target()),
            vertex_map: bc.map.vertex_map.iter().map(|(a, b)| [*a, *b]).collect(),
            branch: bc.branch.facets().iter().map(|s| s.vertices().to_vec()).collect(),
            degree: bc.degree,
        }
    }

    pub fn to_branched(&self) -> Result<BranchedCovering> {
        let source = complex_of(&self.source)?;
        let target = complex_of(&self.target)?;
        let vertex_map: BTreeMap<usize, usize> = self.vertex_map.iter().map(|[a, b]| (*a, *b)).collect();
        if vertex_map.len() != self.vertex_map.len() {
            return Err(Error::Malformed("vertex map lists a source vertex twice".into()));
        }
        let branch = if self.branch.is_empty() {
            SimplicialComplex::empty()
        } else {
            SimplicialComplex::from_vertex_lists(&self.branch)?
        };
        if !branch.is_subcomplex_of(&source) {
            return Err(Error::Malformed("branch locus is not a subcomplex of the source".into()));
        }
        Ok(BranchedCovering {
            map: SimplicialMap::new(source, target, vertex_map)?,
            branch,
            degree: self.degree,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn round_trip() {
        let x = corpus::octahedron();
        let bc = BranchedCovering::identity(&x, corpus::vertex_set(&corpus::OCTAHEDRON_POLES));
        let dump = CoveringDump::from_branched(&bc);
        let text = serde_json::to_string(&dump).unwrap();
        let back: CoveringDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_branched().unwrap(), bc);
    }
}
