use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::grouppi::{edge_path_presentation, enumerate_homs, FiniteGroup};
use crate::util::UnionFind;

pub const DEFAULT_DESCENT_BUDGET: u64 = 10_000_000;

/// An open subset of `|X|`: a union of open simplices, closed under passing
/// to cofaces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenSet {
    simplices: BTreeSet<Simplex>,
}

impl OpenSet {
    /// Everything in `x` having a face among `centers`.
    pub fn star(x: &SimplicialComplex, centers: &[Simplex]) -> Result<Self> {
        if let Some(c) = centers.iter().find(|c| !x.contains(c)) {
            return Err(Error::MissingSimplex(c.clone()));
        }
        Ok(OpenSet {
            simplices: x.simplices().filter(|s| centers.iter().any(|c| c.is_face_of(s))).cloned().collect(),
        })
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn intersection(&self, other: &OpenSet) -> OpenSet {
        OpenSet {
            simplices: self.simplices.intersection(&other.simplices).cloned().collect(),
        }
    }

    /// Connected components, ordered by their smallest simplex.
    pub fn components(&self) -> Vec<OpenSet> {
        let list: Vec<&Simplex> = self.simplices.iter().collect();
        let pos: BTreeMap<&Simplex, usize> = list.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut uf = UnionFind::new(list.len());
        for (i, s) in list.iter().enumerate() {
            for f in s.boundary() {
                if let Some(j) = pos.get(&f) {
                    uf.union(i, *j);
                }
            }
        }
        let mut comps: Vec<OpenSet> = uf
            .classes()
            .into_iter()
            .map(|c| OpenSet {
                simplices: c.into_iter().map(|i| list[i].clone()).collect(),
            })
            .collect();
        comps.sort();
        comps
    }
}

/// Open stars of the vertices.
pub fn vertex_star_cover(x: &SimplicialComplex) -> Vec<OpenSet> {
    x.vertices()
        .into_iter()
        .map(|v| OpenSet::star(x, &[Simplex::vertex(v)]).expect("vertex of x"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveCell {
    /// Increasing cover indices.
    pub members: Vec<usize>,
    /// Component of the intersection of those members.
    pub component: OpenSet,
}

/// Čech nerve of a cover, with components of intersections as cells, up to
/// degree 2.
#[derive(Clone, Debug)]
pub struct CechNerve {
    pub cover_size: usize,
    pub vertices: Vec<NerveCell>,
    pub edges: Vec<NerveCell>,
    pub triangles: Vec<NerveCell>,
    /// `[d0, d1]` as vertex indices; `d0` drops the first member.
    pub edge_faces: Vec<[usize; 2]>,
    /// `[d0, d1, d2]` as edge indices.
    pub triangle_faces: Vec<[usize; 3]>,
}

fn cells(cover: &[OpenSet], arity: usize) -> Vec<NerveCell> {
    let mut out = Vec::new();
    let n = cover.len();
    let mut idx: Vec<usize> = (0..arity).collect();
    if arity > n {
        return out;
    }
    loop {
        let inter = idx[1..].iter().fold(cover[idx[0]].clone(), |acc, i| acc.intersection(&cover[*i]));
        for component in inter.components() {
            out.push(NerveCell {
                members: idx.clone(),
                component,
            });
        }
        // next combination
        let mut i = arity;
        while i > 0 && idx[i - 1] == n - arity + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..arity {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

fn face_of(cells: &[NerveCell], members: &[usize], inside: &OpenSet) -> usize {
    let s = inside.simplices().next().expect("nonempty cell");
    cells
        .iter()
        .position(|c| c.members == members && c.component.contains(s))
        .expect("a component contains every smaller one")
}

pub fn cech_nerve(x: &SimplicialComplex, cover: &[OpenSet]) -> Result<CechNerve> {
    for u in cover {
        if let Some(s) = u.simplices().find(|s| !x.contains(s)) {
            return Err(Error::MissingSimplex(s.clone()));
        }
        if let Some(s) = u.simplices().find(|s| x.star_of(s).iter().any(|t| !u.contains(t))) {
            return Err(Error::Invalid(format!("cover member is not open at {s}")));
        }
    }
    if x.simplices().any(|s| cover.iter().all(|u| !u.contains(s))) {
        return Err(Error::NotCovering);
    }
    let vertices = cells(cover, 1);
    let edges = cells(cover, 2);
    let triangles = cells(cover, 3);
    let edge_faces = edges
        .iter()
        .map(|e| {
            let [i, j] = [e.members[0], e.members[1]];
            [face_of(&vertices, &[j], &e.component), face_of(&vertices, &[i], &e.component)]
        })
        .collect();
    let triangle_faces = triangles
        .iter()
        .map(|t| {
            let [i, j, k] = [t.members[0], t.members[1], t.members[2]];
            [
                face_of(&edges, &[j, k], &t.component),
                face_of(&edges, &[i, k], &t.component),
                face_of(&edges, &[i, j], &t.component),
            ]
        })
        .collect();
    Ok(CechNerve {
        cover_size: cover.len(),
        vertices,
        edges,
        triangles,
        edge_faces,
        triangle_faces,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveCellDump {
    pub members: Vec<usize>,
    pub component: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveDump {
    pub cover_size: usize,
    pub f_vector: [usize; 3],
    pub vertices: Vec<NerveCellDump>,
    pub edges: Vec<NerveCellDump>,
    pub triangles: Vec<NerveCellDump>,
    pub edge_faces: Vec<[usize; 2]>,
    pub triangle_faces: Vec<[usize; 3]>,
}

impl CechNerve {
    pub fn f_vector(&self) -> [usize; 3] {
        [self.vertices.len(), self.edges.len(), self.triangles.len()]
    }

    pub fn dump(&self) -> NerveDump {
        let cell = |c: &NerveCell| NerveCellDump {
            members: c.members.clone(),
            component: c.component.simplices().map(|s| s.vertices().to_vec()).collect(),
        };
        NerveDump {
            cover_size: self.cover_size,
            f_vector: self.f_vector(),
            vertices: self.vertices.iter().map(cell).collect(),
            edges: self.edges.iter().map(cell).collect(),
            triangles: self.triangles.iter().map(cell).collect(),
            edge_faces: self.edge_faces.clone(),
            triangle_faces: self.triangle_faces.clone(),
        }
    }

    /// Spanning forest of the 1-skeleton: per edge, whether it is a tree edge,
    /// and the root of each vertex's component.
    fn forest(&self) -> (Vec<bool>, Vec<usize>) {
        let n = self.vertices.len();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, [a, b]) in self.edge_faces.iter().enumerate() {
            incident[*a].push(e);
            incident[*b].push(e);
        }
        let mut root = vec![usize::MAX; n];
        let mut tree = vec![false; self.edges.len()];
        for r in 0..n {
            if root[r] != usize::MAX {
                continue;
            }
            root[r] = r;
            let mut queue = VecDeque::from([r]);
            while let Some(v) = queue.pop_front() {
                for e in &incident[v] {
                    let [a, b] = self.edge_faces[*e];
                    let w = if a == v { b } else { a };
                    if root[w] == usize::MAX {
                        root[w] = r;
                        tree[*e] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        (tree, root)
    }
}

/// Edge permutations `s_e` carrying the fiber over `d0(e)` to the fiber over
/// `d1(e)`, with `s_{d1 t} = s_{d2 t} . s_{d0 t}` on every triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentDatum {
    pub fiber: usize,
    pub edge_permutations: Vec<Vec<usize>>,
}

/// First triangle where the cocycle condition fails.
pub fn check_descent(nerve: &CechNerve, datum: &DescentDatum) -> Result<()> {
    if datum.edge_permutations.len() != nerve.edges.len() {
        return Err(Error::Shape("one permutation per nerve edge".into()));
    }
    for (t, [d0, d1, d2]) in nerve.triangle_faces.iter().enumerate() {
        let p = &datum.edge_permutations;
        // (s_d2 . s_d0)(x) = s_d2[s_d0[x]]
        let composed: Vec<usize> = (0..datum.fiber).map(|x| p[*d2][p[*d0][x]]).collect();
        if composed != p[*d1] {
            return Err(Error::Consistency(format!("descent cocycle condition fails on nerve triangle {t}")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentEnumeration {
    pub group: String,
    pub fiber: usize,
    /// Classes under gauge transformations trivial at each component's base
    /// vertex.
    pub pointed_classes: usize,
    /// Classes under all gauge transformations.
    pub classes: usize,
    /// One datum per class, in canonical form.
    pub representatives: Vec<DescentDatum>,
    pub nodes: u64,
}

/// Descent data valued in `g`, acting on its points (or on itself), up to
/// gauge equivalence on the fixed nerve.
pub fn descent_enumerate(nerve: &CechNerve, g: &FiniteGroup, budget: u64) -> Result<DescentEnumeration> {
    let (tree, root) = nerve.forest();
    let free: Vec<usize> = (0..nerve.edges.len()).filter(|e| !tree[*e]).collect();
    let slot: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    // triangles become checkable once their last free edge is set
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); free.len()];
    for (t, faces) in nerve.triangle_faces.iter().enumerate() {
        match faces.iter().filter_map(|e| slot.get(e)).max() {
            Some(p) => ready[*p].push(t),
            None => {}
        }
    }
    let holds = |values: &[usize], t: usize| {
        let [d0, d1, d2] = nerve.triangle_faces[t];
        let val = |e: usize| slot.get(&e).map_or(g.identity(), |i| values[*i]);
        // s_d2 . s_d0 as functions is mul(s_d0, s_d2)
        g.mul(val(d0), val(d2)) == val(d1)
    };
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut values = vec![0usize; free.len()];
    let mut nodes = 0u64;
    fn walk(
        p: usize,
        values: &mut Vec<usize>,
        order: usize,
        ready: &[Vec<usize>],
        holds: &dyn Fn(&[usize], usize) -> bool,
        found: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<()> {
        if p == values.len() {
            found.push(values.clone());
            return Ok(());
        }
        for a in 0..order {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Budget {
                    what: "descent search nodes",
                    bound: budget,
                });
            }
            values[p] = a;
            if ready[p].iter().all(|t| holds(values, *t)) {
                walk(p + 1, values, order, ready, holds, found, nodes, budget)?;
            }
        }
        Ok(())
    }
    walk(0, &mut values, g.order(), &ready, &holds, &mut found, &mut nodes, budget)?;
    if nerve.triangle_faces.iter().enumerate().any(|(t, f)| f.iter().all(|e| tree[*e]) && !holds(&[], t)) {
        found.clear();
    }
    let pointed_classes = found.len();

    // the remaining gauge conjugates each component's values simultaneously
    let roots: BTreeSet<usize> = root.iter().copied().collect();
    let component_of: Vec<usize> = free.iter().map(|e| root[nerve.edge_faces[*e][0]]).collect();
    let canonical = |v: &[usize]| -> Vec<usize> {
        let mut out = v.to_vec();
        for r in &roots {
            let idx: Vec<usize> = (0..v.len()).filter(|i| component_of[*i] == *r).collect();
            let best = (0..g.order())
                .map(|h| idx.iter().map(|i| g.conjugate(v[*i], h)).collect::<Vec<_>>())
                .min()
                .unwrap_or_default();
            for (i, x) in idx.iter().zip(best) {
                out[*i] = x;
            }
        }
        out
    };
    let classes: BTreeSet<Vec<usize>> = found.iter().map(|v| canonical(v)).collect();
    let fiber = g.action(g.identity()).len();
    let representatives = classes
        .iter()
        .map(|v| DescentDatum {
            fiber,
            edge_permutations: (0..nerve.edges.len())
                .map(|e| g.action(slot.get(&e).map_or(g.identity(), |i| v[*i])))
                .collect(),
        })
        .collect();
    Ok(DescentEnumeration {
        group: g.name().to_string(),
        fiber,
        pointed_classes,
        classes: classes.len(),
        representatives,
        nodes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrincipalBundleCount {
    pub group: String,
    pub hom_count: usize,
    pub descent_count: usize,
    /// Bundles up to isomorphism, i.e. homomorphisms up to conjugacy.
    pub isomorphism_classes: usize,
}

/// `|Hom(pi_1 X, G)|` counted by enumerating homomorphisms and by enumerating
/// pointed descent data on the nerve of the vertex-star cover.
pub fn principal_bundle_count(x: &SimplicialComplex, g: &FiniteGroup, budget: u64) -> Result<PrincipalBundleCount> {
    let components = x.components()?.len();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let base = x.vertices()[0];
    let pres = edge_path_presentation(x, base)?;
    let homs = enumerate_homs(&pres.presentation, g, budget)?;
    let nerve = cech_nerve(x, &vertex_star_cover(x))?;
    let descent = descent_enumerate(&nerve, g, budget)?;
    if homs.count != descent.pointed_classes {
        return Err(Error::Consistency(format!(
            "{} homomorphisms but {} pointed descent classes",
            homs.count, descent.pointed_classes
        )));
    }
    Ok(PrincipalBundleCount {
        group: g.name().to_string(),
        hom_count: homs.count,
        descent_count: descent.pointed_classes,
        isomorphism_classes: descent.classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn arcs() -> (SimplicialComplex, Vec<OpenSet>) {
        let x = corpus::circle(4);
        let a = OpenSet::star(&x, &[Simplex::vertex(0), Simplex::vertex(1)]).unwrap();
        let b = OpenSet::star(&x, &[Simplex::vertex(2), Simplex::vertex(3)]).unwrap();
        (x, vec![a, b])
    }

    #[test]
    fn circle_by_two_arcs() {
        let (x, cover) = arcs();
        let n = cech_nerve(&x, &cover).unwrap();
        assert_eq!(n.f_vector(), [2, 2, 0]);
        assert_eq!(n.edge_faces, vec![[1, 0], [1, 0]]);
        let z2 = descent_enumerate(&n, &FiniteGroup::cyclic(2).unwrap(), 1000).unwrap();
        assert_eq!((z2.pointed_classes, z2.classes), (2, 2));
        let z3 = descent_enumerate(&n, &FiniteGroup::cyclic(3).unwrap(), 1000).unwrap();
        assert_eq!(z3.classes, 3);
        let s3 = descent_enumerate(&n, &FiniteGroup::symmetric(3).unwrap(), 1000).unwrap();
        // conjugacy classes of S3
        assert_eq!((s3.pointed_classes, s3.classes), (6, 3));
        for d in &s3.representatives {
            check_descent(&n, d).unwrap();
        }
    }

    #[test]
    fn single_member_is_a_point() {
        let x = corpus::torus_7();
        let all = OpenSet::star(&x, &x.faces(0).to_vec()).unwrap();
        let n = cech_nerve(&x, &[all]).unwrap();
        assert_eq!(n.f_vector(), [1, 0, 0]);
        let e = descent_enumerate(&n, &FiniteGroup::symmetric(4).unwrap(), 1000).unwrap();
        assert_eq!(e.classes, 1);
    }

    #[test]
    fn sphere_vertex_stars() {
        let x = corpus::boundary_simplex(3);
        let n = cech_nerve(&x, &vertex_star_cover(&x)).unwrap();
        assert_eq!(n.f_vector(), [4, 6, 4]);
    }

    #[test]
    fn non_covers_and_non_open_sets() {
        let (x, cover) = arcs();
        assert!(matches!(cech_nerve(&x, &cover[..1]), Err(Error::NotCovering)));
        let mut closed = cover[0].clone();
        closed.simplices.insert(Simplex::vertex(2));
        assert!(matches!(cech_nerve(&x, &[closed, cover[1].clone()]), Err(Error::Invalid(_))));
    }

    #[test]
    fn principal_bundles() {
        for (x, g, want) in [
            (corpus::circle(3), FiniteGroup::cyclic(2).unwrap(), 2),
            (corpus::circle(3), FiniteGroup::cyclic(3).unwrap(), 3),
            (corpus::rp2_6(), FiniteGroup::cyclic(2).unwrap(), 2),
            (corpus::boundary_simplex(3), FiniteGroup::symmetric(3).unwrap(), 1),
            (corpus::torus_7(), FiniteGroup::cyclic(2).unwrap(), 4),
        ] {
            let c = principal_bundle_count(&x, &g, DEFAULT_DESCENT_BUDGET).unwrap();
            assert_eq!((c.hom_count, c.descent_count), (want, want));
        }
    }

    #[test]
    fn budget_is_reported() {
        let x = corpus::torus_7();
        let n = cech_nerve(&x, &vertex_star_cover(&x)).unwrap();
        assert!(matches!(
            descent_enumerate(&n, &FiniteGroup::symmetric(3).unwrap(), 10),
            Err(Error::Budget { bound: 10, .. })
        ));
    }
}
