//! Small named triangulations used throughout the tests and the CLI.

use crate::complex::{Simplex, SimplicialComplex};

fn build(facets: Vec<Vec<usize>>) -> SimplicialComplex {
    SimplicialComplex::from_vertex_lists(&facets).expect("corpus triangulations are well formed")
}

/// Boundary of the standard `d`-simplex: a `(d-1)`-sphere on `d+1` vertices.
pub fn boundary_simplex(d: usize) -> SimplicialComplex {
    assert!(d >= 1);
    let all: Vec<usize> = (0..=d).collect();
    build((0..=d).map(|skip| all.iter().copied().filter(|v| *v != skip).collect()).collect())
}

/// The solid `n`-simplex.
pub fn solid_simplex(n: usize) -> SimplicialComplex {
    build(vec![(0..=n).collect()])
}

/// A `k`-cycle, `k >= 3`.
pub fn circle(k: usize) -> SimplicialComplex {
    assert!(k >= 3);
    build((0..k).map(|i| vec![i, (i + 1) % k]).collect())
}

/// The 6-vertex real projective plane (antipodal quotient of the icosahedron).
pub fn rp2_6() -> SimplicialComplex {
    build(vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ])
}

/// The 7-vertex (Möbius) torus.
pub fn torus_7() -> SimplicialComplex {
    let mut f = Vec::new();
    for i in 0..7 {
        f.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        f.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    build(f)
}

/// Suspension of a 4-cycle. North pole is vertex 0, south pole vertex 5,
/// equator 1-2-3-4.
pub fn octahedron() -> SimplicialComplex {
    let mut f = Vec::new();
    for i in 0..4 {
        let (a, b) = (1 + i, 1 + (i + 1) % 4);
        f.push(vec![0, a, b]);
        f.push(vec![5, a, b]);
    }
    build(f)
}

pub const OCTAHEDRON_POLES: [usize; 2] = [0, 5];

/// Two tetrahedron boundaries sharing vertex 0 only.
pub fn wedge_of_spheres() -> SimplicialComplex {
    let mut f = Vec::new();
    for block in [[0, 1, 2, 3], [0, 4, 5, 6]] {
        for skip in 0..4 {
            f.push(block.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect());
        }
    }
    build(f)
}

pub const WEDGE_VERTEX: usize = 0;

/// The subcomplex spanned by the given vertices (no higher simplices).
pub fn vertex_set(vertices: &[usize]) -> SimplicialComplex {
    SimplicialComplex::from_facets(vertices.iter().map(|v| Simplex::vertex(*v))).expect("nonempty vertex list")
}

/// Named closed pseudomanifolds used by the acceptance suite.
pub fn closed_corpus() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("boundary_simplex_3", boundary_simplex(3)),
        ("boundary_simplex_4", boundary_simplex(4)),
        ("boundary_simplex_5", boundary_simplex(5)),
        ("rp2_6", rp2_6()),
        ("torus_7", torus_7()),
        ("octahedron", octahedron()),
        ("wedge_of_spheres", wedge_of_spheres()),
    ]
}

/// Look up a corpus complex by name, including the non-closed ones.
pub fn by_name(name: &str) -> Option<SimplicialComplex> {
    match name {
        "solid_simplex_3" => Some(solid_simplex(3)),
        "circle_3" => Some(circle(3)),
        _ => closed_corpus().into_iter().find(|(n, _)| *n == name).map(|(_, x)| x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts() {
        assert_eq!(torus_7().f_vector(), vec![7, 21, 14]);
        assert_eq!(torus_7().euler_characteristic(), 0);
        assert_eq!(octahedron().f_vector(), vec![6, 12, 8]);
        assert_eq!(wedge_of_spheres().euler_characteristic(), 3);
        assert_eq!(boundary_simplex(5).f_vector(), vec![6, 15, 20, 15, 6]);
        assert_eq!(boundary_simplex(5).euler_characteristic(), 2);
        assert_eq!(boundary_simplex(4).euler_characteristic(), 0);
    }
}
