//! Generators for the sphere families used throughout the crate: boundaries
//! of simplices and cross-polytopes, cycles and iterated suspensions,
//! octahedral-flip sequences, trees of simplices, and randomized locally
//! constructible spheres.
//!
//! Randomized builders return a [`BuildTrace`] alongside the complex; a
//! trace replays to exactly the same facet set via [`replay_trace`].

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::check::{verify_sphere, Effort, SphereStatus};
use crate::complex::{Coloring, Complex, Face, Vertex};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Boundary of the `(d+1)`-simplex: the minimal `d`-sphere.
pub fn boundary_simplex(d: usize) -> Result<Complex> {
    if d < 1 {
        return Err(Error::param("boundary_simplex requires d >= 1"));
    }
    let facets: Vec<Vec<Vertex>> = (0..=d as u32 + 1).combinations(d + 1).collect();
    Complex::new(d, facets)
}

/// Boundary of the `(d+1)`-cross-polytope: vertex pairs `{2i, 2i+1}` for
/// `i = 0..=d`, facets given by every choice of one vertex per pair.
/// `2(d+1)` vertices and `2^{d+1}` facets, balanced under the pair coloring.
pub fn boundary_cross_polytope(d: usize) -> Result<Complex> {
    if d < 1 {
        return Err(Error::param("boundary_cross_polytope requires d >= 1"));
    }
    let mut facets = Vec::with_capacity(1 << (d + 1));
    for pick in 0u32..(1 << (d + 1)) {
        let facet: Vec<Vertex> = (0..=d as u32).map(|i| 2 * i + ((pick >> i) & 1)).collect();
        facets.push(facet);
    }
    Complex::new(d, facets)
}

/// The coloring sending both members of pair `i` to color `i`.
pub fn cross_polytope_pair_coloring(d: usize) -> Coloring {
    let mut map = BTreeMap::new();
    for i in 0..=d as u32 {
        map.insert(2 * i, i as u8);
        map.insert(2 * i + 1, i as u8);
    }
    Coloring::new(map)
}

/// The `k`-cycle on vertices `0..k`.
pub fn cycle(k: u32) -> Result<Complex> {
    if k < 3 {
        return Err(Error::param("cycle requires k >= 3"));
    }
    let facets: Vec<Vec<Vertex>> = (0..k)
        .map(|i| {
            let mut e = vec![i, (i + 1) % k];
            e.sort_unstable();
            e
        })
        .collect();
    Complex::new(1, facets)
}

/// `cycle(k)` suspended `t` times: a `(t+1)`-sphere with `k + 2t` vertices
/// and `k * 2^t` facets.
pub fn iterated_suspension_sphere(k: u32, t: u32) -> Result<Complex> {
    let mut x = cycle(k)?;
    for _ in 0..t {
        x = x.suspension();
    }
    Ok(x)
}

/// How an octahedral flip matches the host facet to the cross-polytope
/// pairs.
#[derive(Debug, Clone, Copy)]
pub enum FlipPairing<'a> {
    /// Pair `i` glues to the `i`-th smallest vertex of the facet.
    Sorted,
    /// Pair `i` glues to the facet vertex of color `i`; keeps the host
    /// coloring extendable, so balanced hosts stay balanced.
    ByColoring(&'a Coloring),
    /// Explicit facet vertices listed in pair order.
    Explicit(&'a [Vertex]),
}

fn resolve_pairing(facet: &Face, pairing: FlipPairing<'_>) -> Result<Vec<Vertex>> {
    match pairing {
        FlipPairing::Sorted => Ok(facet.vertices().to_vec()),
        FlipPairing::ByColoring(c) => {
            let mut by_color: Vec<Option<Vertex>> = vec![None; facet.len()];
            for &v in facet.vertices() {
                let color = c.get(v).ok_or(Error::ColoringNotTotal(v))? as usize;
                if color >= by_color.len() || by_color[color].is_some() {
                    return Err(Error::param("coloring is not rainbow on the flip facet"));
                }
                by_color[color] = Some(v);
            }
            Ok(by_color.into_iter().map(|v| v.expect("rainbow")).collect())
        }
        FlipPairing::Explicit(alpha) => {
            let sorted: Vec<Vertex> = {
                let mut a = alpha.to_vec();
                a.sort_unstable();
                a
            };
            if sorted != facet.vertices() {
                return Err(Error::BadMatching);
            }
            Ok(alpha.to_vec())
        }
    }
}

/// Connected sum with a cross-polytope boundary at `facet`: adds `d + 1`
/// fresh vertices and a net `2^{d+1} - 2` facets.
pub fn octahedral_flip(x: &Complex, facet: &Face, pairing: FlipPairing<'_>) -> Result<Complex> {
    let d = x.dim();
    if !x.contains_facet(facet) {
        return Err(Error::NotAFacet { face: facet.vertices().to_vec() });
    }
    let alpha = resolve_pairing(facet, pairing)?;
    let cross = boundary_cross_polytope(d)?;
    // Glue pair vertex 2i onto alpha[i]; the antipodes 2i+1 become fresh.
    let sigma_y = Face::new((0..=d as u32).map(|i| 2 * i).collect::<Vec<_>>())?;
    let matching: Vec<(Vertex, Vertex)> =
        alpha.iter().enumerate().map(|(i, &v)| (v, 2 * i as u32)).collect();
    x.connected_sum(&cross, facet, &sigma_y, &matching)
}

/// Trace kinds for the randomized builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceKind {
    FlipSequence,
    #[serde(rename = "2lc")]
    TwoLc,
    Lc,
    Tree,
}

/// One replayable construction step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStep {
    /// Octahedral flip at `facet`, with the facet vertices listed in
    /// cross-polytope pair order.
    Flip { facet: Face, pairing: Vec<Vertex> },
    /// Glue a fresh simplex onto the free face, adding one new vertex.
    Glue { free_face: Face, new_vertex: Vertex },
    /// Identify boundary faces `a` and `b`; `matching` maps each vertex of
    /// `a` to its partner in `b` (shared vertices map to themselves).
    Identify {
        a: Face,
        b: Face,
        matching: Vec<(Vertex, Vertex)>,
        intersection_dim: isize,
    },
}

/// Replayable record of a randomized construction: the seed complex, the
/// ordered steps, and the `(f_d, f_0)` density trace after each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildTrace {
    pub kind: TraceKind,
    pub seed: u64,
    pub start: Complex,
    pub steps: Vec<TraceStep>,
    pub density: Vec<(u64, u64)>,
}

impl BuildTrace {
    fn new(kind: TraceKind, seed: u64, start: Complex) -> BuildTrace {
        BuildTrace { kind, seed, start, steps: Vec::new(), density: Vec::new() }
    }

    fn push(&mut self, step: TraceStep, current: &Complex) {
        self.steps.push(step);
        self.density.push((current.facet_count(), current.vertex_count()));
    }
}

/// Applies the recorded steps to the recorded start complex.
pub fn replay_trace(trace: &BuildTrace) -> Result<Complex> {
    let mut x = trace.start.clone();
    for step in &trace.steps {
        x = match step {
            TraceStep::Flip { facet, pairing } => {
                octahedral_flip(&x, facet, FlipPairing::Explicit(pairing))?
            }
            TraceStep::Glue { free_face, new_vertex } => {
                glue_fresh_simplex(&x, free_face, *new_vertex)?
            }
            TraceStep::Identify { matching, .. } => apply_identification(&x, matching)?,
        };
    }
    Ok(x)
}

/// `L` octahedral flips at uniformly chosen facets. When the start complex
/// is small enough to color exactly, the maintained coloring keeps every
/// iterate balanced; otherwise gluings use sorted order.
pub fn flip_sequence(x0: &Complex, flips: u64, seed: u64) -> Result<(Complex, BuildTrace)> {
    if x0.facets().is_empty() {
        return Err(Error::param("flip_sequence needs a nonempty start complex"));
    }
    const BALANCE_SEARCH_CAP: u64 = 32;
    let mut coloring = if x0.vertex_count() <= BALANCE_SEARCH_CAP {
        x0.is_balanced()
    } else {
        None
    };
    let mut rng = SplitMix64::new(seed);
    let mut x = x0.clone();
    let mut trace = BuildTrace::new(TraceKind::FlipSequence, seed, x0.clone());
    for _ in 0..flips {
        let facets: Vec<Face> = x.facets().iter().cloned().collect();
        let facet = rng.choose(&facets).clone();
        let alpha = match &coloring {
            Some(c) => resolve_pairing(&facet, FlipPairing::ByColoring(c))?,
            None => facet.vertices().to_vec(),
        };
        let before_max = x.max_vertex().expect("nonempty");
        x = octahedral_flip(&x, &facet, FlipPairing::Explicit(&alpha))?;
        if let Some(c) = &mut coloring {
            // Fresh vertex before_max + 1 + i is the antipode of pair i,
            // so it inherits the color of the glued vertex alpha[i].
            for (i, &v) in alpha.iter().enumerate() {
                let fresh = before_max + 1 + i as u32;
                let color = c.get(v).expect("colored");
                c.set(fresh, color);
            }
        }
        trace.push(TraceStep::Flip { facet, pairing: alpha }, &x);
    }
    Ok((x, trace))
}

fn glue_fresh_simplex(x: &Complex, free_face: &Face, new_vertex: Vertex) -> Result<Complex> {
    if free_face.contains(new_vertex) {
        return Err(Error::param("new vertex already in the glued face"));
    }
    let mut facets = x.facets().clone();
    if !facets.insert(free_face.with(new_vertex)) {
        return Err(Error::param("glued facet already present"));
    }
    Ok(Complex::from_facet_set(x.dim(), facets))
}

fn boundary_faces(x: &Complex) -> Vec<Face> {
    let mut count: BTreeMap<Face, usize> = BTreeMap::new();
    for f in x.facets() {
        for r in f.subfaces(x.dim() as isize - 1) {
            *count.entry(r).or_insert(0) += 1;
        }
    }
    count.into_iter().filter(|&(_, c)| c == 1).map(|(r, _)| r).collect()
}

/// `m` d-simplices glued along a random tree: every gluing attaches a fresh
/// simplex to a uniformly chosen free `(d-1)`-face. Every `(d-1)`-face ends
/// with degree at most 2, exactly `m - 1` of them with degree 2.
pub fn tree_of_simplices(d: usize, m: u64, seed: u64) -> Result<(Complex, BuildTrace)> {
    if d < 1 || m < 1 {
        return Err(Error::param("tree_of_simplices requires d >= 1 and m >= 1"));
    }
    let mut rng = SplitMix64::new(seed);
    let start = Complex::new(d, vec![(0..=d as u32).collect::<Vec<_>>()])?;
    let mut trace = BuildTrace::new(TraceKind::Tree, seed, start.clone());
    let mut x = start;
    for next_vertex in d as u32 + 1..d as u32 + m as u32 {
        let free = boundary_faces(&x);
        let face = rng.choose(&free).clone();
        x = glue_fresh_simplex(&x, &face, next_vertex)?;
        trace.push(TraceStep::Glue { free_face: face, new_vertex: next_vertex }, &x);
    }
    Ok((x, trace))
}

/// Intersection-dimension threshold for boundary identifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LcMode {
    /// Identified faces must share a `(d-2)`-face.
    Lc,
    /// Identified faces may meet in dimension as low as `d - 3`.
    TwoLc,
}

impl LcMode {
    fn min_intersection_dim(self, d: usize) -> isize {
        match self {
            LcMode::Lc => d as isize - 2,
            LcMode::TwoLc => d as isize - 3,
        }
    }

    fn trace_kind(self) -> TraceKind {
        match self {
            LcMode::Lc => TraceKind::Lc,
            LcMode::TwoLc => TraceKind::TwoLc,
        }
    }
}

/// Quotient of the complex identifying each `b`-vertex in `matching` with
/// its `a`-partner. Rejects identifications that would degenerate a facet
/// or merge two facets.
fn apply_identification(x: &Complex, matching: &[(Vertex, Vertex)]) -> Result<Complex> {
    let map: BTreeMap<Vertex, Vertex> = matching.iter().map(|&(a, b)| (b, a)).collect();
    let mut facets = BTreeSet::new();
    for f in x.facets() {
        let mut vs: Vec<Vertex> =
            f.vertices().iter().map(|v| map.get(v).copied().unwrap_or(*v)).collect();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("identification degenerates a facet"));
        }
        if !facets.insert(Face::from_sorted(vs)) {
            return Err(Error::param("identification merges two facets"));
        }
    }
    Ok(Complex::from_facet_set(x.dim(), facets))
}

/// The gluing bijection fixes shared vertices pointwise and pairs the rest
/// in one of the given orders.
fn candidate_matchings(a: &Face, b: &Face) -> Vec<Vec<(Vertex, Vertex)>> {
    let shared: Vec<Vertex> =
        a.vertices().iter().copied().filter(|&v| b.contains(v)).collect();
    let a_only: Vec<Vertex> =
        a.vertices().iter().copied().filter(|&v| !b.contains(v)).collect();
    let b_only: Vec<Vertex> =
        b.vertices().iter().copied().filter(|&v| !a.contains(v)).collect();
    let mut out = Vec::new();
    let k = a_only.len();
    for perm in b_only.iter().copied().permutations(k) {
        let mut m: Vec<(Vertex, Vertex)> = shared.iter().map(|&v| (v, v)).collect();
        m.extend(a_only.iter().copied().zip(perm));
        out.push(m);
    }
    out
}

/// Random locally-constructible sphere search: build a tree of `m`
/// d-simplices, then repeatedly identify an admissible pair of boundary
/// `(d-1)`-faces until no boundary remains. Each closed complex is accepted
/// only if sphere recognition says yes; deadlocks and rejects restart, and
/// `None` is returned once `max_attempts` restarts are spent.
pub fn two_lc_generate(
    d: usize,
    m: u64,
    seed: u64,
    max_attempts: u64,
    mode: LcMode,
) -> Result<Option<(Complex, BuildTrace)>> {
    let mut search = TwoLcSearch::new(d, m, seed, mode)?;
    for _ in 0..max_attempts {
        if let Some(found) = search.attempt()? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Incremental driver for [`two_lc_generate`]; also exposes the rejected
/// intermediate complexes, which recognition tests feed on.
pub struct TwoLcSearch {
    d: usize,
    m: u64,
    mode: LcMode,
    seed: u64,
    rng: SplitMix64,
    /// Last non-sphere state of the most recent failed attempt.
    pub last_reject: Option<Complex>,
}

impl TwoLcSearch {
    pub fn new(d: usize, m: u64, seed: u64, mode: LcMode) -> Result<TwoLcSearch> {
        if d < 2 {
            return Err(Error::param("locally constructible search requires d >= 2"));
        }
        if m < 1 {
            return Err(Error::param("m >= 1 required"));
        }
        Ok(TwoLcSearch { d, m, mode, seed, rng: SplitMix64::new(seed), last_reject: None })
    }

    /// One restart: `Ok(Some(..))` on a verified sphere, `Ok(None)` on
    /// deadlock or rejection.
    pub fn attempt(&mut self) -> Result<Option<(Complex, BuildTrace)>> {
        let tree_seed = self.rng.next_u64();
        let (mut x, tree_trace) = tree_of_simplices(self.d, self.m, tree_seed)?;
        let mut trace = BuildTrace::new(self.mode.trace_kind(), self.seed, tree_trace.start);
        trace.steps = tree_trace.steps;
        trace.density = tree_trace.density;
        let min_dim = self.mode.min_intersection_dim(self.d);

        loop {
            let boundary = boundary_faces(&x);
            if boundary.is_empty() {
                let verdict = verify_sphere(&x, Effort::default());
                if verdict.status == SphereStatus::Yes {
                    return Ok(Some((x, trace)));
                }
                self.last_reject = Some(x);
                return Ok(None);
            }
            let mut pairs: Vec<(usize, usize)> = (0..boundary.len())
                .flat_map(|i| (i + 1..boundary.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| {
                    boundary[i].intersection(&boundary[j]).dim() >= min_dim
                })
                .collect();
            self.rng.shuffle(&mut pairs);

            let mut applied = false;
            'pair: for (i, j) in pairs {
                let (a, b) = (&boundary[i], &boundary[j]);
                let mut matchings = candidate_matchings(a, b);
                self.rng.shuffle(&mut matchings);
                for matching in matchings {
                    if let Ok(next) = apply_identification(&x, &matching) {
                        // Identifications can only close boundary; a ridge
                        // pushed past degree 2 can never come back down.
                        if max_ridge_degree(&next) > 2 {
                            continue;
                        }
                        trace.push(
                            TraceStep::Identify {
                                a: a.clone(),
                                b: b.clone(),
                                matching,
                                intersection_dim: a.intersection(b).dim(),
                            },
                            &next,
                        );
                        x = next;
                        applied = true;
                        break 'pair;
                    }
                }
            }
            if !applied {
                self.last_reject = Some(x);
                return Ok(None);
            }
        }
    }
}

fn max_ridge_degree(x: &Complex) -> usize {
    let mut count: BTreeMap<Face, usize> = BTreeMap::new();
    for f in x.facets() {
        for r in f.subfaces(x.dim() as isize - 1) {
            *count.entry(r).or_insert(0) += 1;
        }
    }
    count.values().copied().max().unwrap_or(0)
}
