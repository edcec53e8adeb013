//! Pure simplicial complexes stored as canonical facet sets.
//!
//! A [`Complex`] of dimension `d` stores only its facets, each a strictly
//! increasing list of `d + 1` vertex labels; lower faces are implied by
//! downward closure. Facets live in a `BTreeSet`, so iteration order is
//! deterministic and equality is structural.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Vertex labels are arbitrary non-negative integers, not required to be
/// contiguous.
pub type Vertex = u32;

/// A face: a strictly increasing vertex list. The empty face (dimension -1)
/// is legal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Face(Vec<Vertex>);

impl Face {
    /// Builds a face from any vertex order; rejects repeated vertices.
    pub fn new(vertices: impl Into<Vec<Vertex>>) -> Result<Face> {
        let mut vs = vertices.into();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex { facet: vs });
        }
        Ok(Face(vs))
    }

    pub fn empty() -> Face {
        Face(Vec::new())
    }

    /// Wraps a list already known to be strictly increasing.
    pub(crate) fn from_sorted(vs: Vec<Vertex>) -> Face {
        debug_assert!(vs.windows(2).all(|w| w[0] < w[1]));
        Face(vs)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Subset test on sorted lists.
    pub fn is_subset_of(&self, other: &Face) -> bool {
        subset_sorted(&self.0, &other.0)
    }

    /// All subfaces with `k + 1` vertices.
    pub fn subfaces(&self, k: isize) -> impl Iterator<Item = Face> + '_ {
        self.0
            .iter()
            .copied()
            .combinations((k + 1).max(0) as usize)
            .map(Face::from_sorted)
    }

    /// The face with `v` removed; `v` must be present.
    pub fn without(&self, v: Vertex) -> Face {
        Face(self.0.iter().copied().filter(|&u| u != v).collect())
    }

    /// The face extended by `v`; `v` must not be present.
    pub fn with(&self, v: Vertex) -> Face {
        debug_assert!(!self.contains(v));
        let mut vs = self.0.clone();
        let pos = vs.partition_point(|&u| u < v);
        vs.insert(pos, v);
        Face(vs)
    }

    pub fn union(&self, other: &Face) -> Result<Face> {
        Face::new(self.0.iter().chain(other.0.iter()).copied().collect::<Vec<_>>())
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn is_disjoint_from(&self, other: &Face) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(","))
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Face, D::Error> {
        let vs = Vec::<Vertex>::deserialize(d)?;
        Face::new(vs).map_err(D::Error::custom)
    }
}

fn subset_sorted(a: &[Vertex], b: &[Vertex]) -> bool {
    let mut it = b.iter();
    'outer: for &x in a {
        for &y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Face counts `f_{-1}, f_0, ..., f_d`; `f_{-1} = 1` counts the empty face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(Vec<u64>);

impl FVector {
    pub(crate) fn from_counts(counts: Vec<u64>) -> FVector {
        debug_assert_eq!(counts[0], 1);
        FVector(counts)
    }

    /// `f_k`, with `k = -1` counting the empty face.
    pub fn f(&self, k: isize) -> u64 {
        self.0.get((k + 1) as usize).copied().unwrap_or(0)
    }

    /// Counts as a vector starting at `f_{-1}`.
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 2
    }

    /// Unreduced Euler characteristic: the alternating sum over `k >= 0`.
    pub fn euler_characteristic(&self) -> i64 {
        self.0[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A vertex coloring with colors `0..=d`, total on a complex's vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Coloring {
    assignment: BTreeMap<Vertex, u8>,
}

impl Coloring {
    pub fn new(assignment: BTreeMap<Vertex, u8>) -> Coloring {
        Coloring { assignment }
    }

    pub fn get(&self, v: Vertex) -> Option<u8> {
        self.assignment.get(&v).copied()
    }

    pub fn set(&mut self, v: Vertex, color: u8) {
        self.assignment.insert(v, color);
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, u8)> + '_ {
        self.assignment.iter().map(|(&v, &c)| (v, c))
    }

    /// True if every edge of the complex gets two distinct colors and every
    /// vertex is colored.
    pub fn is_proper_on(&self, x: &Complex) -> bool {
        if x.vertices().iter().any(|&v| self.get(v).is_none()) {
            return false;
        }
        x.edges()
            .iter()
            .all(|&(u, v)| self.get(u) != self.get(v))
    }

    /// True if the face sees each color at most once.
    pub fn is_rainbow(&self, face: &Face) -> bool {
        let mut seen = 0u64;
        for &v in face.vertices() {
            match self.get(v) {
                None => return false,
                Some(c) => {
                    let bit = 1u64 << c;
                    if seen & bit != 0 {
                        return false;
                    }
                    seen |= bit;
                }
            }
        }
        true
    }
}

/// A pure `d`-dimensional simplicial complex given by its facet set.
///
/// The complex with no facets is legal at any declared dimension; links of
/// facets return it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    dim: usize,
    facets: BTreeSet<Face>,
    vertices: BTreeSet<Vertex>,
}

impl Complex {
    /// Canonicalizes the facet list: each facet sorted, duplicates removed.
    /// Rejects facets with repeated vertices or the wrong length.
    pub fn new<I, V>(d: usize, facets: I) -> Result<Complex>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<Vertex>>,
    {
        let mut set = BTreeSet::new();
        for f in facets {
            let raw: Vec<Vertex> = f.into();
            if raw.len() != d + 1 {
                return Err(Error::FacetWrongLength { facet: raw, expected: d + 1 });
            }
            set.insert(Face::new(raw)?);
        }
        Ok(Complex::from_facet_set(d, set))
    }

    pub fn empty(d: usize) -> Complex {
        Complex { dim: d, facets: BTreeSet::new(), vertices: BTreeSet::new() }
    }

    pub(crate) fn from_facet_set(d: usize, facets: BTreeSet<Face>) -> Complex {
        debug_assert!(facets.iter().all(|f| f.len() == d + 1));
        let vertices = facets.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        Complex { dim: d, facets, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &BTreeSet<Face> {
        &self.facets
    }

    /// `f_d`.
    pub fn facet_count(&self) -> u64 {
        self.facets.len() as u64
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    /// `f_0`.
    pub fn vertex_count(&self) -> u64 {
        self.vertices.len() as u64
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.vertices.iter().next_back().copied()
    }

    pub fn contains_facet(&self, f: &Face) -> bool {
        self.facets.contains(f)
    }

    /// Membership by downward closure.
    pub fn is_face(&self, f: &Face) -> bool {
        if f.is_empty() {
            return true;
        }
        self.facets.iter().any(|g| f.is_subset_of(g))
    }

    /// All `k`-dimensional faces, `-1 <= k <= d`.
    pub fn faces(&self, k: isize) -> Result<BTreeSet<Face>> {
        if k < -1 || k > self.dim as isize {
            return Err(Error::FaceDimOutOfRange { k, dim: self.dim });
        }
        if k == -1 {
            return Ok(BTreeSet::from([Face::empty()]));
        }
        let mut out = BTreeSet::new();
        for f in &self.facets {
            out.extend(f.subfaces(k));
        }
        Ok(out)
    }

    /// The 1-skeleton as sorted vertex pairs.
    pub fn edges(&self) -> BTreeSet<(Vertex, Vertex)> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            let vs = f.vertices();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    out.insert((vs[i], vs[j]));
                }
            }
        }
        out
    }

    pub fn f_vector(&self) -> FVector {
        let mut counts = vec![1u64];
        for k in 0..=self.dim as isize {
            counts.push(self.faces(k).expect("k in range").len() as u64);
        }
        FVector::from_counts(counts)
    }

    /// `sum_{k>=0} (-1)^k f_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// The link of `sigma`: maximal faces disjoint from `sigma` whose union
    /// with it is a face. Pure of dimension `d - |sigma|`; the link of a
    /// facet is the empty complex.
    pub fn link(&self, sigma: &Face) -> Result<Complex> {
        if !self.is_face(sigma) {
            return Err(Error::NotAFace { face: sigma.vertices().to_vec() });
        }
        let s = sigma.len();
        if s == self.dim + 1 {
            return Ok(Complex::empty(0));
        }
        let link_dim = self.dim - s;
        let mut facets = BTreeSet::new();
        for f in &self.facets {
            if sigma.is_subset_of(f) {
                let rest: Vec<Vertex> =
                    f.vertices().iter().copied().filter(|v| !sigma.contains(*v)).collect();
                facets.insert(Face::from_sorted(rest));
            }
        }
        Ok(Complex::from_facet_set(link_dim, facets))
    }

    /// Number of facets containing the `(d-1)`-face `sigma`.
    pub fn degree(&self, sigma: &Face) -> Result<usize> {
        if sigma.dim() != self.dim as isize - 1 {
            return Err(Error::WrongFaceDimension {
                expected: self.dim as isize - 1,
                got: sigma.dim(),
            });
        }
        Ok(self.facets.iter().filter(|f| sigma.is_subset_of(f)).count())
    }

    /// Number of `(d-1)`-faces lying in both vertex links. This is the
    /// quantity double-counted by facet pairs around a common `(d-1)`-face.
    pub fn common_link_count(&self, u: Vertex, v: Vertex) -> Result<usize> {
        if u == v {
            return Err(Error::SameVertex(u));
        }
        Ok(self.common_link_faces(u, v).len())
    }

    /// The `(d-1)`-faces tau with both `tau + u` and `tau + v` facets.
    pub fn common_link_faces(&self, u: Vertex, v: Vertex) -> BTreeSet<Face> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            if f.contains(u) {
                let tau = f.without(u);
                if !tau.contains(v) && self.facets.contains(&tau.with(v)) {
                    out.insert(tau);
                }
            }
        }
        out
    }

    /// Joins two fresh apex vertices to every facet; dimension grows by one.
    pub fn suspension(&self) -> Complex {
        let base = self.max_vertex().map_or(0, |m| m + 1);
        let (a, b) = (base, base + 1);
        let mut facets = BTreeSet::new();
        for f in &self.facets {
            facets.insert(f.with(a));
            facets.insert(f.with(b));
        }
        Complex::from_facet_set(self.dim + 1, facets)
    }

    /// Barycentric subdivision: one vertex per nonempty face, one facet per
    /// maximal chain. Fresh labels are allocated above the current maximum,
    /// in order of (dimension, vertex list) of the subdivided face.
    pub fn barycentric_subdivision(&self) -> Complex {
        let base = self.max_vertex().map_or(0, |m| m + 1);
        let mut label: HashMap<Face, Vertex> = HashMap::new();
        let mut next = base;
        for k in 0..=self.dim as isize {
            for f in self.faces(k).expect("k in range") {
                label.insert(f, next);
                next += 1;
            }
        }
        let mut facets = BTreeSet::new();
        for f in &self.facets {
            let vs = f.vertices().to_vec();
            let m = vs.len();
            for perm in vs.iter().copied().permutations(m) {
                let mut chain = Vec::with_capacity(m);
                let mut prefix = Vec::new();
                for v in perm {
                    prefix.push(v);
                    prefix.sort_unstable();
                    chain.push(label[&Face::from_sorted(prefix.clone())]);
                }
                chain.sort_unstable();
                facets.insert(Face::from_sorted(chain));
            }
        }
        Complex::from_facet_set(self.dim, facets)
    }

    /// Colors assigned by face dimension make any barycentric subdivision
    /// balanced.
    pub fn dimension_coloring_of_subdivision(&self) -> Coloring {
        let base = self.max_vertex().map_or(0, |m| m + 1);
        let mut assignment = BTreeMap::new();
        let mut next = base;
        for k in 0..=self.dim as isize {
            for _ in self.faces(k).expect("k in range") {
                assignment.insert(next, k as u8);
                next += 1;
            }
        }
        Coloring::new(assignment)
    }

    /// Searches for a proper coloring of the 1-skeleton with exactly
    /// `d + 1` colors, by backtracking in largest-degree-first vertex order.
    /// Exact, so intended for small complexes.
    pub fn is_balanced(&self) -> Option<Coloring> {
        let colors = self.dim as u8 + 1;
        let verts: Vec<Vertex> = self.vertices.iter().copied().collect();
        let index: HashMap<Vertex, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = verts.len();
        let mut adj = vec![BTreeSet::new(); n];
        for (u, v) in self.edges() {
            let (iu, iv) = (index[&u], index[&v]);
            adj[iu].insert(iv);
            adj[iv].insert(iu);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(adj[i].len()));

        let mut assigned: Vec<Option<u8>> = vec![None; n];
        // Color classes are interchangeable; restricting vertex t to at most
        // one brand-new color kills the (d+1)! symmetry.
        fn go(
            t: usize,
            order: &[usize],
            adj: &[BTreeSet<usize>],
            assigned: &mut Vec<Option<u8>>,
            colors: u8,
            used: u8,
        ) -> bool {
            if t == order.len() {
                return true;
            }
            let i = order[t];
            let cap = (used + 1).min(colors);
            for c in 0..cap {
                if adj[i].iter().any(|&j| assigned[j] == Some(c)) {
                    continue;
                }
                assigned[i] = Some(c);
                if go(t + 1, order, adj, assigned, colors, used.max(c + 1)) {
                    return true;
                }
                assigned[i] = None;
            }
            false
        }
        if !go(0, &order, &adj, &mut assigned, colors, 0) {
            return None;
        }
        let mut map = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            map.insert(v, assigned[i].expect("total"));
        }
        Some(Coloring::new(map))
    }

    /// Keeps exactly the facets on which the coloring is injective.
    pub fn rainbow_subcomplex(&self, coloring: &Coloring) -> Result<Complex> {
        if let Some(&v) = self.vertices.iter().find(|&&v| coloring.get(v).is_none()) {
            return Err(Error::ColoringNotTotal(v));
        }
        let facets = self
            .facets
            .iter()
            .filter(|f| coloring.is_rainbow(f))
            .cloned()
            .collect();
        Ok(Complex::from_facet_set(self.dim, facets))
    }

    /// Glues `other` to `self` by identifying the facets `sigma_x` and
    /// `sigma_y` along `matching` (pairs `(x_vertex, y_vertex)`), relabels
    /// the rest of `other` with fresh labels, and deletes the glued facet.
    /// `f_d` of the result is `f_d(self) + f_d(other) - 2`.
    pub fn connected_sum(
        &self,
        other: &Complex,
        sigma_x: &Face,
        sigma_y: &Face,
        matching: &[(Vertex, Vertex)],
    ) -> Result<Complex> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        if !self.contains_facet(sigma_x) {
            return Err(Error::NotAFacet { face: sigma_x.vertices().to_vec() });
        }
        if !other.contains_facet(sigma_y) {
            return Err(Error::NotAFacet { face: sigma_y.vertices().to_vec() });
        }
        let xs: BTreeSet<Vertex> = matching.iter().map(|&(x, _)| x).collect();
        let ys: BTreeSet<Vertex> = matching.iter().map(|&(_, y)| y).collect();
        let sx: BTreeSet<Vertex> = sigma_x.vertices().iter().copied().collect();
        let sy: BTreeSet<Vertex> = sigma_y.vertices().iter().copied().collect();
        if xs != sx || ys != sy || matching.len() != sigma_x.len() {
            return Err(Error::BadMatching);
        }

        let mut relabel: BTreeMap<Vertex, Vertex> =
            matching.iter().map(|&(x, y)| (y, x)).collect();
        let mut next = self.max_vertex().map_or(0, |m| m + 1);
        for &v in other.vertices() {
            relabel.entry(v).or_insert_with(|| {
                let fresh = next;
                next += 1;
                fresh
            });
        }

        let mut facets = self.facets.clone();
        facets.remove(sigma_x);
        for f in &other.facets {
            if f == sigma_y {
                continue;
            }
            let vs: Vec<Vertex> = f.vertices().iter().map(|v| relabel[v]).collect();
            facets.insert(Face::new(vs).expect("relabeling is injective"));
        }
        Ok(Complex::from_facet_set(self.dim, facets))
    }

    /// The subcomplex on a facet subset.
    pub fn without_facets(&self, removed: &BTreeSet<Face>) -> Complex {
        let facets = self.facets.difference(removed).cloned().collect();
        Complex::from_facet_set(self.dim, facets)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex(d={}, facets={})", self.dim, self.facets.len())
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    d: usize,
    facets: Vec<Vec<Vertex>>,
}

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = ComplexRepr {
            d: self.dim,
            facets: self.facets.iter().map(|f| f.vertices().to_vec()).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Complex, D::Error> {
        let repr = ComplexRepr::deserialize(d)?;
        Complex::new(repr.d, repr.facets).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{boundary_cross_polytope, boundary_simplex, cycle};

    #[test]
    fn new_complex_dedups_and_sorts() {
        let x = Complex::new(2, vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        assert_eq!(x.facet_count(), 1);
        assert_eq!(x.facets().iter().next().unwrap().vertices(), &[0, 1, 2]);
    }

    #[test]
    fn new_complex_rejects_repeats_and_length() {
        assert!(matches!(
            Complex::new(2, vec![vec![0, 1, 1]]),
            Err(Error::RepeatedVertex { .. })
        ));
        assert!(matches!(
            Complex::new(3, vec![vec![0, 1, 2]]),
            Err(Error::FacetWrongLength { .. })
        ));
    }

    #[test]
    fn simplex_boundary_f_vectors() {
        let x = boundary_simplex(3).unwrap();
        assert_eq!(x.f_vector().counts(), &[1, 5, 10, 10, 5]);
        let t = boundary_simplex(2).unwrap();
        assert_eq!(t.f_vector().counts(), &[1, 4, 6, 4]);
    }

    #[test]
    fn faces_counts() {
        let t = boundary_simplex(2).unwrap();
        assert_eq!(t.faces(1).unwrap().len(), 6);
        let oct = boundary_cross_polytope(2).unwrap();
        assert_eq!(oct.faces(1).unwrap().len(), 12);
        assert_eq!(t.faces(-1).unwrap(), BTreeSet::from([Face::empty()]));
        assert!(t.faces(3).is_err());
    }

    #[test]
    fn octahedron_f_vector() {
        let oct = boundary_cross_polytope(2).unwrap();
        assert_eq!(oct.f_vector().counts(), &[1, 6, 12, 8]);
    }

    #[test]
    fn suspension_of_5_cycle() {
        let s = cycle(5).unwrap().suspension();
        assert_eq!(s.f_vector().counts(), &[1, 7, 15, 10]);
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn euler_characteristic_values() {
        assert_eq!(boundary_simplex(2).unwrap().euler_characteristic(), 2);
        assert_eq!(boundary_simplex(3).unwrap().euler_characteristic(), 0);
        let single = Complex::new(2, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(single.euler_characteristic(), 1);
        // A 2-sphere on k vertices has 2k - 4 facets.
        for k in 3..=9 {
            let s = cycle(k).unwrap().suspension();
            assert_eq!(s.facet_count(), 2 * s.vertex_count() - 4);
            assert_eq!(s.euler_characteristic(), 2);
        }
    }

    #[test]
    fn link_examples() {
        let oct = boundary_cross_polytope(2).unwrap();
        let v = Face::new(vec![0]).unwrap();
        let lk = oct.link(&v).unwrap();
        assert_eq!(lk.dim(), 1);
        assert_eq!(lk.facet_count(), 4);
        // A 4-cycle: every vertex of the link is in exactly two link edges.
        for &u in lk.vertices() {
            let d = lk.degree(&Face::new(vec![u]).unwrap()).unwrap();
            assert_eq!(d, 2);
        }

        let t = boundary_simplex(2).unwrap();
        let lk = t.link(&Face::new(vec![0]).unwrap()).unwrap();
        assert_eq!(lk.facet_count(), 3);

        let facet = t.facets().iter().next().unwrap().clone();
        let lk = t.link(&facet).unwrap();
        assert_eq!(lk.facet_count(), 0);

        assert!(t.link(&Face::new(vec![99]).unwrap()).is_err());
    }

    #[test]
    fn degree_examples() {
        let oct = boundary_cross_polytope(2).unwrap();
        for e in oct.faces(1).unwrap() {
            assert_eq!(oct.degree(&e).unwrap(), 2);
        }
        // Complete 2-complex on 5 vertices: every edge has degree n - 2.
        let complete: Vec<Vec<Vertex>> =
            (0u32..5).combinations(3).collect();
        let k5 = Complex::new(2, complete).unwrap();
        for e in k5.faces(1).unwrap() {
            assert_eq!(k5.degree(&e).unwrap(), 3);
        }
        // Two triangles glued along an edge.
        let two = Complex::new(2, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(two.degree(&Face::new(vec![1, 2]).unwrap()).unwrap(), 2);
        assert_eq!(two.degree(&Face::new(vec![0, 1]).unwrap()).unwrap(), 1);
        assert!(two.degree(&Face::new(vec![0]).unwrap()).is_err());
    }

    #[test]
    fn common_link_counts_on_octahedron() {
        let oct = boundary_cross_polytope(2).unwrap();
        // Pair partners (antipodal) share the whole equatorial 4-cycle.
        assert_eq!(oct.common_link_count(0, 1).unwrap(), 4);
        // Adjacent vertices share no edge of their links: their common
        // facets meet only in the edge {u, v} itself.
        assert_eq!(oct.common_link_count(0, 2).unwrap(), 0);
        assert!(oct.common_link_count(3, 3).is_err());

        let two = Complex::new(2, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(two.common_link_count(0, 3).unwrap(), 0);
    }

    #[test]
    fn double_counting_identity() {
        // sum over vertex pairs of common link counts equals
        // sum over (d-1)-faces of C(degree, 2).
        for x in [
            boundary_cross_polytope(2).unwrap(),
            boundary_simplex(3).unwrap(),
            cycle(6).unwrap().suspension(),
            Complex::new(2, (0u32..5).combinations(3).collect::<Vec<_>>()).unwrap(),
        ] {
            let verts: Vec<Vertex> = x.vertices().iter().copied().collect();
            let mut lhs = 0usize;
            for i in 0..verts.len() {
                for j in i + 1..verts.len() {
                    lhs += x.common_link_count(verts[i], verts[j]).unwrap();
                }
            }
            let mut rhs = 0usize;
            for sigma in x.faces(x.dim() as isize - 1).unwrap() {
                let deg = x.degree(&sigma).unwrap();
                rhs += deg * (deg - 1) / 2;
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn suspension_arithmetic() {
        let oct = boundary_cross_polytope(2).unwrap();
        let s = oct.suspension();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.vertex_count(), 8);
        assert_eq!(s.facet_count(), 16);
        assert_eq!(s.facet_count(), 2 * oct.facet_count());
        assert_eq!(s.euler_characteristic(), 2 - oct.euler_characteristic());
        // Suspending a 4-cycle gives the octahedron up to relabeling.
        assert_eq!(
            crate::census::canonical_form(&cycle(4).unwrap().suspension()),
            crate::census::canonical_form(&oct)
        );
    }

    #[test]
    fn barycentric_subdivision_counts() {
        let single = Complex::new(2, vec![vec![0, 1, 2]]).unwrap();
        let sd = single.barycentric_subdivision();
        assert_eq!(sd.facet_count(), 6);
        assert_eq!(sd.vertex_count(), 7);

        let t = boundary_simplex(2).unwrap();
        let sd = t.barycentric_subdivision();
        assert_eq!(sd.facet_count(), 24);
        assert_eq!(sd.vertex_count(), 14);
        assert_eq!(sd.euler_characteristic(), 2);

        // The dimension coloring is proper, so subdivisions are balanced.
        let c = t.dimension_coloring_of_subdivision();
        assert!(c.is_proper_on(&sd));
        assert!(sd.is_balanced().is_some());
    }

    #[test]
    fn balancedness() {
        let oct = boundary_cross_polytope(2).unwrap();
        let c = oct.is_balanced().expect("octahedron is balanced");
        assert!(c.is_proper_on(&oct));
        // The tetrahedron boundary needs four colors.
        assert!(boundary_simplex(2).unwrap().is_balanced().is_none());
    }

    #[test]
    fn rainbow_subcomplex_examples() {
        let oct = boundary_cross_polytope(2).unwrap();
        let c = oct.is_balanced().unwrap();
        let z = oct.rainbow_subcomplex(&c).unwrap();
        assert_eq!(z.facet_count(), 8);

        let constant = Coloring::new(oct.vertices().iter().map(|&v| (v, 0)).collect());
        let z = oct.rainbow_subcomplex(&constant).unwrap();
        assert_eq!(z.facet_count(), 0);

        // Complete 2-complex on 6 vertices, colored mod 3: the facets with
        // one vertex per class number 2 * 2 * 2.
        let complete: Vec<Vec<Vertex>> = (0u32..6).combinations(3).collect();
        let k6 = Complex::new(2, complete).unwrap();
        let mod3 = Coloring::new((0u32..6).map(|v| (v, (v % 3) as u8)).collect());
        let z = k6.rainbow_subcomplex(&mod3).unwrap();
        assert_eq!(z.facet_count(), 8);

        let partial = Coloring::new([(0u32, 0u8)].into_iter().collect());
        assert!(k6.rainbow_subcomplex(&partial).is_err());
    }

    #[test]
    fn connected_sum_examples() {
        let t1 = boundary_simplex(2).unwrap();
        let t2 = boundary_simplex(2).unwrap();
        let f1 = t1.facets().iter().next().unwrap().clone();
        let f2 = t2.facets().iter().next().unwrap().clone();
        let matching: Vec<(Vertex, Vertex)> = f1
            .vertices()
            .iter()
            .copied()
            .zip(f2.vertices().iter().copied())
            .collect();
        let s = t1.connected_sum(&t2, &f1, &f2, &matching).unwrap();
        assert_eq!(s.vertex_count(), 5);
        assert_eq!(s.facet_count(), 6);
        assert_eq!(s.euler_characteristic(), 2);
        assert_eq!(s.facet_count(), t1.facet_count() + t2.facet_count() - 2);

        let bad = t1.connected_sum(&t2, &f1, &f2, &matching[..2]);
        assert!(bad.is_err());
        let not_facet = Face::new(vec![0, 1]).unwrap();
        assert!(t1.connected_sum(&t2, &not_facet, &f2, &matching).is_err());
        let square = cycle(4).unwrap();
        let edge = square.facets().iter().next().unwrap().clone();
        assert!(matches!(
            t1.connected_sum(&square, &f1, &edge, &matching),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complex_json_round_trip() {
        let oct = boundary_cross_polytope(2).unwrap();
        let s = serde_json::to_string(&oct).unwrap();
        let back: Complex = serde_json::from_str(&s).unwrap();
        assert_eq!(oct, back);
        // Unsorted input is normalized on load.
        let x: Complex = serde_json::from_str(r#"{"d":2,"facets":[[2,1,0]]}"#).unwrap();
        assert_eq!(x.facets().iter().next().unwrap().vertices(), &[0, 1, 2]);
        assert!(serde_json::from_str::<Complex>(r#"{"d":2,"facets":[[0,1,1]]}"#).is_err());
    }
}
