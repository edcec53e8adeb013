//! Extremal machinery: facet-count bounds for balanced spheres, subcomplex
//! embedding search, the sample/alter/rainbow construction of dense
//! sphere-free complexes, the suspension witness finder for dense hosts,
//! and the density exponent table.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{automorphism_count, canonical_form, distinct_labelings};
use crate::check::{verify_sphere, Effort};
use crate::complex::{Coloring, Complex, FVector, Face, Vertex};
use crate::error::{Error, Result};
use crate::random::{sample_lm, turan_probability, LMParams};
use crate::rng::SplitMix64;

/// Minimum facet count of a balanced `d`-sphere on `n` vertices:
/// `ceil(((2^{d+1} - 2) / (d + 1)) n - 2^{d+1} + 4)`. Cross-polytope
/// boundaries and their flip sums meet it with equality.
pub fn gkn_min_facets(d: usize, n: u64) -> Result<u64> {
    let pairs = 2 * (d as u64 + 1);
    if n < pairs {
        return Err(Error::param(format!(
            "n = {n} below the minimum vertex count {pairs} of a balanced {d}-sphere"
        )));
    }
    let a = (1u64 << (d + 1)) - 2;
    let b = d as u64 + 1;
    let e = 1u64 << (d + 1);
    Ok((a * n).div_ceil(b) - e + 4)
}

/// Largest vertex count compatible with `m` facets:
/// `floor((m + 2^{d+1} - 4)(d + 1) / (2^{d+1} - 2))`.
pub fn max_vertices_for_facets(d: usize, m: u64) -> Result<u64> {
    let min_facets = 1u64 << (d + 1);
    if m < min_facets {
        return Err(Error::param(format!(
            "m = {m} below the minimum balanced-sphere facet count {min_facets}"
        )));
    }
    let a = (1u64 << (d + 1)) - 2;
    let b = d as u64 + 1;
    Ok((m + (1 << (d + 1)) - 4) * b / a)
}

/// Upper bound on labeled copies of balanced spheres with `m` facets inside
/// the full complex on `n` vertices:
/// `C^m * n^{(d+1)m/(2^{d+1}-2)} * n^{(d+1)(2^{d+1}-4)/(2^{d+1}-2)}`.
pub fn labeled_copies_bound(d: usize, m: u64, n: u64, c: f64) -> f64 {
    let denom = (1u64 << (d + 1)) as f64 - 2.0;
    let e1 = (d as f64 + 1.0) * m as f64 / denom;
    let e2 = (d as f64 + 1.0) * ((1u64 << (d + 1)) as f64 - 4.0) / denom;
    c.powf(m as f64) * (n as f64).powf(e1) * (n as f64).powf(e2)
}

/// The two density exponents at dimension `d`, as exact rationals:
/// achievable `d + 1 - (d + 1)/(2^{d+1} - 2)` and the ceiling
/// `d + 1 - 1/2^{d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentTable {
    pub d: usize,
    pub lower: Ratio<i64>,
    pub upper: Ratio<i64>,
}

pub fn exponents(d: usize) -> Result<ExponentTable> {
    if !(2..=60).contains(&d) {
        return Err(Error::param("exponents requires 2 <= d <= 60"));
    }
    let d1 = d as i64 + 1;
    let lower = Ratio::new(d1, 1) - Ratio::new(d1, (1i64 << (d + 1)) - 2);
    let upper = Ratio::new(d1, 1) - Ratio::new(1, 1i64 << (d - 1));
    Ok(ExponentTable { d, lower, upper })
}

impl ExponentTable {
    pub fn lower_f64(&self) -> f64 {
        ratio_f64(self.lower)
    }

    pub fn upper_f64(&self) -> f64 {
        ratio_f64(self.upper)
    }
}

impl Serialize for ExponentTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            d: usize,
            lower: (i64, i64),
            upper: (i64, i64),
            lower_f64: f64,
            upper_f64: f64,
        }
        Repr {
            d: self.d,
            lower: (*self.lower.numer(), *self.lower.denom()),
            upper: (*self.upper.numer(), *self.upper.denom()),
            lower_f64: ratio_f64(self.lower),
            upper_f64: ratio_f64(self.upper),
        }
        .serialize(s)
    }
}

pub(crate) fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Complete `(d+1)`-partite complex: vertices `0..n` split into `d + 1`
/// consecutive parts of near-equal size, facets the transversals. Contains
/// no unbalanced complex.
pub fn partite_construction(n: u32, d: usize) -> Result<Complex> {
    if (n as u64) < d as u64 + 1 {
        return Err(Error::param("partite_construction requires n >= d + 1"));
    }
    let parts = d as u32 + 1;
    let base = n / parts;
    let extra = n % parts;
    let mut ranges: Vec<Vec<Vertex>> = Vec::new();
    let mut start = 0;
    for i in 0..parts {
        let size = base + u32::from(i < extra);
        ranges.push((start..start + size).collect());
        start += size;
    }
    let mut facets: Vec<Vec<Vertex>> = vec![Vec::new()];
    for part in &ranges {
        let mut next = Vec::with_capacity(facets.len() * part.len());
        for f in &facets {
            for &v in part {
                let mut g = f.clone();
                g.push(v);
                next.push(g);
            }
        }
        facets = next;
    }
    Complex::new(d, facets)
}

/// The coloring by part of [`partite_construction`].
pub fn partite_coloring(n: u32, d: usize) -> Coloring {
    let parts = d as u32 + 1;
    let base = n / parts;
    let extra = n % parts;
    let mut map = BTreeMap::new();
    let mut start = 0;
    for i in 0..parts {
        let size = base + u32::from(i < extra);
        for v in start..start + size {
            map.insert(v, i as u8);
        }
        start += size;
    }
    Coloring::new(map)
}

/// One subcomplex copy of a pattern inside a host: a representative
/// injective vertex map plus the facet image identifying the copy. Copies
/// are reported once per facet-image set, so pattern automorphisms do not
/// inflate the count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Embedding {
    /// Pairs `(pattern vertex, host vertex)`.
    pub vertex_map: Vec<(Vertex, Vertex)>,
    pub facet_image: Vec<Face>,
}

/// Backtracking subcomplex search: injective vertex maps sending every
/// pattern facet to a host facet, pruned by facet degrees and ridge
/// completions, deduplicated by facet image. Stops after `limit` distinct
/// copies.
pub fn find_embedded_copies(host: &Complex, pattern: &Complex, limit: usize) -> Vec<Embedding> {
    if pattern.dim() != host.dim() || pattern.facets().is_empty() || limit == 0 {
        return Vec::new();
    }
    let searcher = EmbeddingSearch::new(host, pattern);
    searcher.run(limit)
}

struct EmbeddingSearch<'a> {
    host_facets: HashSet<&'a [Vertex]>,
    host_degree: HashMap<Vertex, u32>,
    host_adjacency: HashMap<Vertex, BTreeSet<Vertex>>,
    /// Sorted `d`-subset -> vertices completing it to a host facet.
    ridge_completions: HashMap<Vec<Vertex>, Vec<Vertex>>,
    host_vertices: Vec<Vertex>,
    pattern_vertices: Vec<Vertex>,
    pattern_degree: HashMap<Vertex, u32>,
    pattern_facets: Vec<Vec<Vertex>>,
    /// Pattern facets fully assigned at each position of the vertex order.
    complete_at: Vec<Vec<usize>>,
    /// For each position, a pattern facet with exactly the new vertex
    /// unassigned, if one exists.
    anchor_at: Vec<Option<usize>>,
}

impl<'a> EmbeddingSearch<'a> {
    fn new(host: &'a Complex, pattern: &Complex) -> Self {
        let mut host_degree: HashMap<Vertex, u32> = HashMap::new();
        let mut host_adjacency: HashMap<Vertex, BTreeSet<Vertex>> = HashMap::new();
        let mut ridge_completions: HashMap<Vec<Vertex>, Vec<Vertex>> = HashMap::new();
        let mut host_facets: HashSet<&[Vertex]> = HashSet::new();
        for f in host.facets() {
            let vs = f.vertices();
            host_facets.insert(vs);
            for (i, &v) in vs.iter().enumerate() {
                *host_degree.entry(v).or_insert(0) += 1;
                for &u in &vs[i + 1..] {
                    host_adjacency.entry(v).or_default().insert(u);
                    host_adjacency.entry(u).or_default().insert(v);
                }
                let mut ridge = vs.to_vec();
                ridge.remove(i);
                ridge_completions.entry(ridge).or_default().push(v);
            }
        }
        for completions in ridge_completions.values_mut() {
            completions.sort_unstable();
        }

        let mut pattern_degree: HashMap<Vertex, u32> = HashMap::new();
        for f in pattern.facets() {
            for &v in f.vertices() {
                *pattern_degree.entry(v).or_insert(0) += 1;
            }
        }
        // Vertex order: start at a max-degree vertex, then greedily pick the
        // vertex covering the most facets that become fully assigned.
        let mut remaining: BTreeSet<Vertex> = pattern.vertices().iter().copied().collect();
        let pattern_facets: Vec<Vec<Vertex>> =
            pattern.facets().iter().map(|f| f.vertices().to_vec()).collect();
        let mut order: Vec<Vertex> = Vec::new();
        if let Some(&first) = remaining.iter().max_by_key(|&&v| pattern_degree[&v]) {
            order.push(first);
            remaining.remove(&first);
        }
        while !remaining.is_empty() {
            let placed: HashSet<Vertex> = order.iter().copied().collect();
            let best = remaining
                .iter()
                .copied()
                .max_by_key(|&v| {
                    let completes = pattern_facets
                        .iter()
                        .filter(|f| {
                            f.contains(&v)
                                && f.iter().all(|&u| u == v || placed.contains(&u))
                        })
                        .count();
                    let touches = pattern_facets
                        .iter()
                        .filter(|f| {
                            f.contains(&v) && f.iter().any(|&u| placed.contains(&u))
                        })
                        .count();
                    (completes, touches, pattern_degree[&v])
                })
                .expect("nonempty");
            order.push(best);
            remaining.remove(&best);
        }
        let position: HashMap<Vertex, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut complete_at: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
        let mut anchor_at: Vec<Option<usize>> = vec![None; order.len()];
        for (fi, f) in pattern_facets.iter().enumerate() {
            let last = f.iter().map(|v| position[v]).max().expect("facet nonempty");
            complete_at[last].push(fi);
            anchor_at[last] = Some(fi);
        }
        EmbeddingSearch {
            host_facets,
            host_degree,
            host_adjacency,
            ridge_completions,
            host_vertices: host.vertices().iter().copied().collect(),
            pattern_vertices: order,
            pattern_degree,
            pattern_facets,
            complete_at,
            anchor_at,
        }
    }

    fn run(&self, limit: usize) -> Vec<Embedding> {
        let mut out = Vec::new();
        let mut seen: BTreeSet<Vec<Face>> = BTreeSet::new();
        let mut map: HashMap<Vertex, Vertex> = HashMap::new();
        let mut used: HashSet<Vertex> = HashSet::new();
        self.extend(0, &mut map, &mut used, &mut seen, &mut out, limit);
        out
    }

    fn candidates(&self, pos: usize, map: &HashMap<Vertex, Vertex>) -> Vec<Vertex> {
        let v = self.pattern_vertices[pos];
        if let Some(fi) = self.anchor_at[pos] {
            // All other vertices of this pattern facet are mapped: the host
            // image must complete the mapped ridge.
            let ridge: Vec<Vertex> = {
                let mut r: Vec<Vertex> = self.pattern_facets[fi]
                    .iter()
                    .filter(|&&u| u != v)
                    .map(|u| map[u])
                    .collect();
                r.sort_unstable();
                r
            };
            return self.ridge_completions.get(&ridge).cloned().unwrap_or_default();
        }
        // Fall back to adjacency: intersect host neighborhoods of the
        // images of already-placed pattern neighbors.
        let placed_neighbors: Vec<Vertex> = self.pattern_facets
            .iter()
            .filter(|f| f.contains(&v))
            .flat_map(|f| f.iter().copied())
            .filter(|&u| u != v && map.contains_key(&u))
            .map(|u| map[&u])
            .collect();
        if placed_neighbors.is_empty() {
            return self.host_vertices.clone();
        }
        let mut iter = placed_neighbors.iter();
        let first = iter.next().expect("nonempty");
        let mut set: BTreeSet<Vertex> = match self.host_adjacency.get(first) {
            Some(s) => s.clone(),
            None => return Vec::new(),
        };
        for u in iter {
            match self.host_adjacency.get(u) {
                Some(s) => set = set.intersection(s).copied().collect(),
                None => return Vec::new(),
            }
            if set.is_empty() {
                break;
            }
        }
        set.into_iter().collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        pos: usize,
        map: &mut HashMap<Vertex, Vertex>,
        used: &mut HashSet<Vertex>,
        seen: &mut BTreeSet<Vec<Face>>,
        out: &mut Vec<Embedding>,
        limit: usize,
    ) -> bool {
        if pos == self.pattern_vertices.len() {
            let mut image: Vec<Face> = self
                .pattern_facets
                .iter()
                .map(|f| {
                    Face::new(f.iter().map(|u| map[u]).collect::<Vec<_>>())
                        .expect("injective map")
                })
                .collect();
            image.sort();
            if seen.insert(image.clone()) {
                let mut vertex_map: Vec<(Vertex, Vertex)> =
                    map.iter().map(|(&p, &h)| (p, h)).collect();
                vertex_map.sort();
                out.push(Embedding { vertex_map, facet_image: image });
            }
            return out.len() >= limit;
        }
        let v = self.pattern_vertices[pos];
        let needed = self.pattern_degree[&v];
        for w in self.candidates(pos, map) {
            if used.contains(&w) || self.host_degree.get(&w).copied().unwrap_or(0) < needed {
                continue;
            }
            map.insert(v, w);
            used.insert(w);
            let ok = self.complete_at[pos].iter().all(|&fi| {
                let mut img: Vec<Vertex> =
                    self.pattern_facets[fi].iter().map(|u| map[u]).collect();
                img.sort_unstable();
                self.host_facets.contains(img.as_slice())
            });
            if ok && self.extend(pos + 1, map, used, seen, out, limit) {
                return true;
            }
            map.remove(&v);
            used.remove(&w);
        }
        false
    }
}

/// A named collection of verified sphere patterns with the metadata the
/// pipeline consumes. Entries are stored in canonical form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub complex: Complex,
    pub balanced: bool,
    pub f_vector: FVector,
    pub automorphisms: u64,
    pub labelings: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereCatalog {
    pub version: u32,
    /// The exponential-size constant `C`; 1 for explicit finite catalogs.
    pub growth_constant: f64,
    pub entries: Vec<CatalogEntry>,
}

impl SphereCatalog {
    /// Verifies every pattern is a sphere and derives the metadata.
    /// Rejects any entry whose verdict is not yes.
    pub fn build(named: Vec<(String, Complex)>, growth_constant: f64) -> Result<SphereCatalog> {
        let entries = named
            .into_iter()
            .map(|(name, complex)| {
                let verdict = verify_sphere(&complex, Effort::default());
                if !verdict.is_yes() {
                    return Err(Error::param(format!(
                        "catalog entry {name} failed sphere verification: {:?}",
                        verdict.status
                    )));
                }
                let canonical = canonical_form(&complex);
                let balanced = canonical.is_balanced().is_some();
                let f_vector = canonical.f_vector();
                let automorphisms = automorphism_count(&canonical);
                let labelings = distinct_labelings(&canonical);
                Ok(CatalogEntry {
                    name,
                    complex: canonical,
                    balanced,
                    f_vector,
                    automorphisms,
                    labelings,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SphereCatalog { version: 1, growth_constant, entries })
    }

    /// Re-validates a deserialized catalog: every entry must verify as a
    /// sphere and the stored metadata must agree with recomputation.
    pub fn revalidate(&self) -> Result<()> {
        for e in &self.entries {
            if !verify_sphere(&e.complex, Effort::default()).is_yes() {
                return Err(Error::param(format!("catalog entry {} is not a sphere", e.name)));
            }
            if e.balanced != e.complex.is_balanced().is_some() {
                return Err(Error::param(format!("catalog entry {} balanced flag wrong", e.name)));
            }
            if e.f_vector != e.complex.f_vector() {
                return Err(Error::param(format!("catalog entry {} f-vector wrong", e.name)));
            }
            if e.automorphisms != automorphism_count(&e.complex)
                || e.labelings != distinct_labelings(&e.complex)
            {
                return Err(Error::param(format!("catalog entry {} symmetry data wrong", e.name)));
            }
        }
        Ok(())
    }

    /// The sampling constant the construction defaults to: `0.3 / C`, safely
    /// inside the convergent regime `epsilon < 1/C`.
    pub fn default_epsilon(&self) -> f64 {
        0.3 / self.growth_constant
    }

    pub fn max_facets(&self) -> u64 {
        self.entries.iter().map(|e| e.complex.facet_count()).max().unwrap_or(0)
    }
}

/// Parameters of one lower-bound construction run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub n: u32,
    pub d: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Catalog entries may have at most this many facets.
    pub m_max: u64,
}

/// Per-entry alteration statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryReport {
    pub name: String,
    pub balanced: bool,
    /// Subcomplex copies found in the sampled complex.
    pub copies_found: u64,
    /// The same count weighted by pattern automorphisms.
    pub labeled_copies: u64,
    pub facets_deleted: u64,
}

/// Record of the three pipeline stages.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub version: u32,
    pub params: PipelineParams,
    pub probability: f64,
    /// Facet counts after sampling, after alteration, after the rainbow
    /// filter; weakly decreasing.
    pub sampled_facets: u64,
    pub altered_facets: u64,
    pub rainbow_facets: u64,
    pub entries: Vec<EntryReport>,
    pub rainbow_fraction: f64,
    /// `f_d(Z) / n^{d + 1 - (d+1)/(2^{d+1}-2)}`.
    pub density_statistic: f64,
    /// Set when `epsilon * C >= 1`, where the copy-count series stops
    /// converging; the finite catalog still terminates.
    pub diverging_regime: bool,
    pub coloring: Vec<(Vertex, u8)>,
}

/// The alteration: search every balanced catalog entry against the
/// immutable host in parallel, then delete, sequentially in entry and
/// discovery order, the lexicographically smallest facet of each copy that
/// is still intact. No balanced-entry copy survives.
pub fn alteration_stage(host: &Complex, catalog: &SphereCatalog) -> (Complex, Vec<EntryReport>) {
    let balanced_entries: Vec<(usize, &CatalogEntry)> = catalog
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.balanced)
        .collect();
    let copies_per_entry: Vec<(usize, Vec<Embedding>)> = balanced_entries
        .par_iter()
        .map(|&(i, e)| (i, find_embedded_copies(host, &e.complex, usize::MAX)))
        .collect();

    let mut deleted: BTreeSet<Face> = BTreeSet::new();
    let mut stats: HashMap<usize, (u64, u64)> = HashMap::new();
    for (i, copies) in &copies_per_entry {
        let mut removed = 0u64;
        for copy in copies {
            // A facet deleted for an earlier copy may already break this one.
            if copy.facet_image.iter().any(|f| deleted.contains(f)) {
                continue;
            }
            let doomed = copy.facet_image.iter().min().expect("copies have facets").clone();
            deleted.insert(doomed);
            removed += 1;
        }
        stats.insert(*i, (copies.len() as u64, removed));
    }
    let entry_reports: Vec<EntryReport> = catalog
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (found, removed) = stats.get(&i).copied().unwrap_or((0, 0));
            EntryReport {
                name: e.name.clone(),
                balanced: e.balanced,
                copies_found: found,
                labeled_copies: found * e.automorphisms,
                facets_deleted: removed,
            }
        })
        .collect();
    (host.without_facets(&deleted), entry_reports)
}

/// The three-stage construction: sample `Y_d(n, p)` at the critical
/// probability, destroy every copy of each balanced catalog entry by
/// deleting one facet per copy, then keep only the facets rainbow under a
/// uniformly random `(d+1)`-coloring. The result contains no copy of any
/// catalog entry: balanced ones are destroyed by the alteration, and every
/// subcomplex of the rainbow complex is balanced, so unbalanced ones cannot
/// embed.
pub fn lower_bound_construct(
    params: &PipelineParams,
    catalog: &SphereCatalog,
) -> Result<(Complex, PipelineReport)> {
    if params.epsilon <= 0.0 {
        return Err(Error::param("epsilon must be positive"));
    }
    for e in &catalog.entries {
        if e.complex.facet_count() > params.m_max {
            return Err(Error::param(format!(
                "catalog entry {} has {} facets, above m_max = {}",
                e.name,
                e.complex.facet_count(),
                params.m_max
            )));
        }
        if e.complex.dim() != params.d {
            return Err(Error::param(format!("catalog entry {} has wrong dimension", e.name)));
        }
    }
    let mut seeds = SplitMix64::new(params.seed);
    let sample_seed = seeds.next_u64();
    let color_seed = seeds.next_u64();

    let p = turan_probability(params.n, params.d, params.epsilon);
    let sampled = sample_lm(&LMParams { n: params.n, d: params.d, p, seed: sample_seed })?;
    let sampled_facets = sampled.facet_count();

    let (altered, entry_reports) = alteration_stage(&sampled, catalog);
    let altered_facets = altered.facet_count();

    // Uniform coloring of all of [n], kept facets rainbow.
    let mut color_rng = SplitMix64::new(color_seed);
    let colors = params.d as u64 + 1;
    let coloring = Coloring::new(
        (0..params.n).map(|v| (v, color_rng.below(colors) as u8)).collect(),
    );
    let rainbow = altered.rainbow_subcomplex(&coloring)?;
    let rainbow_facets = rainbow.facet_count();

    let lower = exponents(params.d)?.lower;
    let density_statistic = rainbow_facets as f64 / (params.n as f64).powf(ratio_f64(lower));
    let report = PipelineReport {
        version: 1,
        params: *params,
        probability: p,
        sampled_facets,
        altered_facets,
        rainbow_facets,
        entries: entry_reports,
        rainbow_fraction: if altered_facets == 0 {
            0.0
        } else {
            rainbow_facets as f64 / altered_facets as f64
        },
        density_statistic,
        diverging_regime: params.epsilon * catalog.growth_constant >= 1.0,
        coloring: coloring.iter().collect(),
    };
    Ok((rainbow, report))
}

/// Default number of vertex pairs inspected per recursion level of
/// [`suspension_witness`].
pub const WITNESS_BREADTH: usize = 16;

/// Finds an iterated-suspension sphere inside a dense complex, following
/// the upper-bound induction: at dimension 1 any cycle works; above, scan
/// vertex pairs in decreasing common-link order, recurse on the common link
/// complex, and suspend the recursive sphere over the pair.
///
/// With `min_density_check` the search is skipped when the facet count is
/// below `n^{d + 1 - 1/2^{d-1}}`, the density under which success is not
/// promised.
pub fn suspension_witness(x: &Complex, min_density_check: bool) -> Option<Complex> {
    suspension_witness_with_breadth(x, min_density_check, WITNESS_BREADTH)
}

pub fn suspension_witness_with_breadth(
    x: &Complex,
    min_density_check: bool,
    breadth: usize,
) -> Option<Complex> {
    if min_density_check && x.dim() >= 2 {
        let n = x.vertex_count() as f64;
        let table = exponents(x.dim()).ok()?;
        if (x.facet_count() as f64) < n.powf(ratio_f64(table.upper)) {
            return None;
        }
    }
    witness_recurse(x, breadth)
}

fn witness_recurse(x: &Complex, breadth: usize) -> Option<Complex> {
    if x.dim() == 1 {
        return find_cycle(x);
    }
    // Count the shared link ridges of every vertex pair in one sweep over
    // the apex lists around each ridge, instead of rescanning the facet
    // set per pair.
    let mut ridge_owners: HashMap<Vec<Vertex>, Vec<Vertex>> = HashMap::new();
    for f in x.facets() {
        let vs = f.vertices();
        for i in 0..vs.len() {
            let mut ridge = vs.to_vec();
            let apex = ridge.remove(i);
            ridge_owners.entry(ridge).or_default().push(apex);
        }
    }
    let mut pair_counts: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for apexes in ridge_owners.values() {
        for i in 0..apexes.len() {
            for j in i + 1..apexes.len() {
                let (a, b) = (apexes[i].min(apexes[j]), apexes[i].max(apexes[j]));
                *pair_counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    let mut pairs: Vec<(usize, Vertex, Vertex)> =
        pair_counts.into_iter().map(|((u, v), c)| (c, u, v)).collect();
    pairs.sort_by_key(|&(c, u, v)| (std::cmp::Reverse(c), u, v));
    for &(_, u, v) in pairs.iter().take(breadth) {
        let common = x.common_link_faces(u, v);
        let host = Complex::from_facet_set(x.dim() - 1, common);
        if let Some(sphere) = witness_recurse(&host, breadth) {
            let mut facets = BTreeSet::new();
            for f in sphere.facets() {
                facets.insert(f.with(u));
                facets.insert(f.with(v));
            }
            let found = Complex::from_facet_set(x.dim(), facets);
            debug_assert!(found.facets().iter().all(|f| x.contains_facet(f)));
            return Some(found);
        }
    }
    None
}

/// Any cycle in a pure 1-complex, by depth-first search; returned as the
/// 1-complex of its edges.
fn find_cycle(x: &Complex) -> Option<Complex> {
    let mut adjacency: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for f in x.facets() {
        let vs = f.vertices();
        adjacency.entry(vs[0]).or_default().push(vs[1]);
        adjacency.entry(vs[1]).or_default().push(vs[0]);
    }

    // In an undirected DFS every non-tree edge reaches a vertex on the
    // current path, so it closes a cycle there.
    fn dfs(
        v: Vertex,
        parent: Option<Vertex>,
        adjacency: &BTreeMap<Vertex, Vec<Vertex>>,
        on_path: &mut HashMap<Vertex, usize>,
        path: &mut Vec<Vertex>,
        visited: &mut HashSet<Vertex>,
    ) -> Option<Vec<Vertex>> {
        visited.insert(v);
        on_path.insert(v, path.len());
        path.push(v);
        for &w in &adjacency[&v] {
            if Some(w) == parent {
                continue;
            }
            if let Some(&start) = on_path.get(&w) {
                return Some(path[start..].to_vec());
            }
            if !visited.contains(&w) {
                if let Some(c) = dfs(w, Some(v), adjacency, on_path, path, visited) {
                    return Some(c);
                }
            }
        }
        on_path.remove(&v);
        path.pop();
        None
    }

    let mut visited: HashSet<Vertex> = HashSet::new();
    let roots: Vec<Vertex> = adjacency.keys().copied().collect();
    for root in roots {
        if visited.contains(&root) {
            continue;
        }
        let mut on_path = HashMap::new();
        let mut path = Vec::new();
        if let Some(cycle) = dfs(root, None, &adjacency, &mut on_path, &mut path, &mut visited) {
            let edges: Vec<Vec<Vertex>> = (0..cycle.len())
                .map(|i| {
                    let mut e = vec![cycle[i], cycle[(i + 1) % cycle.len()]];
                    e.sort_unstable();
                    e
                })
                .collect();
            return Complex::new(1, edges).ok();
        }
    }
    None
}
