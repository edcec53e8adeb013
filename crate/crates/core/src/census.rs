//! Ground-truth enumeration at desk scale: canonical forms under vertex
//! relabeling, automorphism counting, the exhaustive census of small
//! 2-spheres, and sampled counts of locally-constructible classes.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{verify_sphere, Effort};
use crate::complex::{Complex, Vertex};
use crate::error::{Error, Result};
use crate::factory::{LcMode, TwoLcSearch};

/// One census row: isomorphism-class count for a key (vertex count for
/// sphere censuses, facet count for the sampled ones), with capped
/// representatives in canonical form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusRecord {
    pub d: usize,
    pub key: u64,
    pub count: u64,
    pub representatives: Vec<Complex>,
    /// For sampled censuses: whether the reachable-class count stayed below
    /// the exponential bound `2^{(d^3/2) m}`. Sampling only lower-bounds
    /// the true class count.
    pub exponential_bound_ok: Option<bool>,
}

/// Relabels vertices to `0..f_0` minimizing the facet list
/// lexicographically over all vertex permutations. Equal outputs exactly
/// for isomorphic complexes; idempotent. Exhaustive search with invariant
/// ordering and a sorted-list lower-bound prune, intended for at most a
/// dozen vertices.
// TODO: iterated partition refinement with individualization would lift
// the dozen-vertex practical cap; the invariant classes computed below are
// a single refinement round.
pub fn canonical_form(x: &Complex) -> Complex {
    let verts: Vec<Vertex> = x.vertices().iter().copied().collect();
    let n = verts.len();
    if n == 0 {
        return Complex::empty(x.dim());
    }
    let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let facets: Vec<Vec<usize>> = x
        .facets()
        .iter()
        .map(|f| f.vertices().iter().map(|v| index[v]).collect())
        .collect();

    // Candidate order: refine by facet degree, then by the sorted degrees
    // of 1-skeleton neighbors. Invariants only order the search; they never
    // exclude a candidate.
    let mut degree = vec![0u32; n];
    let mut neighbors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for f in &facets {
        for &v in f {
            degree[v] += 1;
        }
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                neighbors[f[i]].insert(f[j]);
                neighbors[f[j]].insert(f[i]);
            }
        }
    }
    let invariant: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = neighbors[v].iter().map(|&u| degree[u]).collect();
            nd.sort_unstable();
            (degree[v], nd)
        })
        .collect();
    let mut candidate_order: Vec<usize> = (0..n).collect();
    candidate_order.sort_by(|&a, &b| invariant[a].cmp(&invariant[b]).then(a.cmp(&b)));

    struct Search<'a> {
        facets: &'a [Vec<usize>],
        order: &'a [usize],
        n: usize,
        best: Option<Vec<Vec<u32>>>,
    }

    impl Search<'_> {
        /// Sorted facet list where unassigned vertices take the optimistic
        /// placeholder `t`; lexicographically below every completion.
        fn bound(&self, label_of: &[Option<u32>], t: u32) -> Vec<Vec<u32>> {
            let mut rows: Vec<Vec<u32>> = self
                .facets
                .iter()
                .map(|f| {
                    let mut row: Vec<u32> =
                        f.iter().map(|&v| label_of[v].unwrap_or(t)).collect();
                    row.sort_unstable();
                    row
                })
                .collect();
            rows.sort();
            rows
        }

        fn go(&mut self, assigned: &mut Vec<usize>, label_of: &mut Vec<Option<u32>>) {
            let t = assigned.len() as u32;
            if t as usize == self.n {
                let full = self.bound(label_of, t);
                if self.best.as_ref().is_none_or(|b| &full < b) {
                    self.best = Some(full);
                }
                return;
            }
            if let Some(best) = &self.best {
                if &self.bound(label_of, t) >= best {
                    return;
                }
            }
            for &v in self.order {
                if label_of[v].is_some() {
                    continue;
                }
                label_of[v] = Some(t);
                assigned.push(v);
                self.go(assigned, label_of);
                assigned.pop();
                label_of[v] = None;
            }
        }
    }

    let mut search = Search { facets: &facets, order: &candidate_order, n, best: None };
    search.go(&mut Vec::new(), &mut vec![None; n]);
    let best = search.best.expect("at least one labeling");
    Complex::new(x.dim(), best).expect("relabeling preserves validity")
}

/// Number of vertex permutations preserving the facet set.
pub fn automorphism_count(x: &Complex) -> u64 {
    let verts: Vec<Vertex> = x.vertices().iter().copied().collect();
    let n = verts.len();
    if n == 0 {
        return 1;
    }
    let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let facet_set: BTreeSet<Vec<usize>> = x
        .facets()
        .iter()
        .map(|f| f.vertices().iter().map(|v| index[v]).collect())
        .collect();
    let mut degree = vec![0u32; n];
    for f in &facet_set {
        for &v in f {
            degree[v] += 1;
        }
    }
    let facets: Vec<Vec<usize>> = facet_set.iter().cloned().collect();

    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        n: usize,
        image: &mut Vec<Option<usize>>,
        taken: &mut Vec<bool>,
        degree: &[u32],
        facets: &[Vec<usize>],
        facet_set: &BTreeSet<Vec<usize>>,
        count: &mut u64,
    ) {
        if v == n {
            *count += 1;
            return;
        }
        'cand: for w in 0..n {
            if taken[w] || degree[w] != degree[v] {
                continue;
            }
            image[v] = Some(w);
            taken[w] = true;
            // Check every facet whose vertices are all mapped.
            for f in facets {
                if f.iter().all(|&u| image[u].is_some()) {
                    let mut img: Vec<usize> =
                        f.iter().map(|&u| image[u].unwrap()).collect();
                    img.sort_unstable();
                    if !facet_set.contains(&img) {
                        image[v] = None;
                        taken[w] = false;
                        continue 'cand;
                    }
                }
            }
            go(v + 1, n, image, taken, degree, facets, facet_set, count);
            image[v] = None;
            taken[w] = false;
        }
    }

    let mut count = 0;
    go(0, n, &mut vec![None; n], &mut vec![false; n], &degree, &facets, &facet_set, &mut count);
    count
}

/// Distinct labelings of the complex on its own vertex set: `f_0! / |Aut|`.
pub fn distinct_labelings(x: &Complex) -> u64 {
    let n = x.vertex_count();
    let mut fact = 1u64;
    for i in 2..=n {
        fact *= i;
    }
    fact / automorphism_count(x)
}

const REPRESENTATIVE_CAP: usize = 64;

/// Exhaustive isomorphism-class census of simplicial 2-spheres on
/// `4..=n_max` vertices. A 2-sphere on `n` vertices has exactly `2n - 4`
/// facets, so the search runs over ascending facet lists with every edge
/// degree capped at 2, vertices introduced in label order, and first facet
/// `[0,1,2]`; sphere recognition filters the closed candidates and
/// canonical forms deduplicate.
pub fn enumerate_2spheres(n_max: u32) -> Result<Vec<CensusRecord>> {
    if n_max > 9 {
        return Err(Error::CensusBudget(n_max));
    }
    let mut out = Vec::new();
    for n in 4..=n_max {
        let forms = enumerate_2spheres_on(n);
        let count = forms.len() as u64;
        let representatives: Vec<Complex> = forms
            .into_iter()
            .take(REPRESENTATIVE_CAP)
            .map(|facets| Complex::new(2, facets).expect("canonical facets"))
            .collect();
        out.push(CensusRecord {
            d: 2,
            key: n as u64,
            count,
            representatives,
            exponential_bound_ok: None,
        });
    }
    Ok(out)
}

type Triangle = [u32; 3];

fn enumerate_2spheres_on(n: u32) -> BTreeSet<Vec<Vec<Vertex>>> {
    let target = (2 * n - 4) as usize;
    let all: Vec<Triangle> = {
        let mut v = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    v.push([a, b, c]);
                }
            }
        }
        v
    };
    // Branch on the facet chosen for position 1 (position 0 is pinned to
    // [0,1,2]); branches are independent and merge deterministically.
    let first = all.iter().position(|t| *t == [0, 1, 2]).expect("n >= 3");
    let seconds: Vec<usize> = (first + 1..all.len()).collect();
    let forms: BTreeSet<Vec<Vec<Vertex>>> = seconds
        .par_iter()
        .map(|&second| {
            let mut found = BTreeSet::new();
            let mut state = SearchState::new(n, target, &all);
            state.push(first);
            if state.admissible(second) {
                state.push(second);
                state.dfs(second, &mut found);
                state.pop(second);
            }
            found
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    forms
}

struct SearchState<'a> {
    n: u32,
    target: usize,
    all: &'a [Triangle],
    chosen: Vec<usize>,
    edge_degree: HashMap<(u32, u32), u8>,
    max_vertex: i64,
}

impl<'a> SearchState<'a> {
    fn new(n: u32, target: usize, all: &'a [Triangle]) -> Self {
        SearchState {
            n,
            target,
            all,
            chosen: Vec::new(),
            edge_degree: HashMap::new(),
            max_vertex: -1,
        }
    }

    fn edges(t: &Triangle) -> [(u32, u32); 3] {
        [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
    }

    fn admissible(&self, idx: usize) -> bool {
        let t = &self.all[idx];
        // Labels are introduced in increasing order with no gaps.
        let mut mx = self.max_vertex;
        for &v in t {
            if (v as i64) > mx + 1 {
                return false;
            }
            mx = mx.max(v as i64);
        }
        Self::edges(t)
            .iter()
            .all(|e| self.edge_degree.get(e).copied().unwrap_or(0) < 2)
    }

    fn push(&mut self, idx: usize) {
        let t = self.all[idx];
        for e in Self::edges(&t) {
            *self.edge_degree.entry(e).or_insert(0) += 1;
        }
        self.max_vertex = self.max_vertex.max(t[2] as i64);
        self.chosen.push(idx);
    }

    fn pop(&mut self, idx: usize) {
        let t = self.all[idx];
        for e in Self::edges(&t) {
            let c = self.edge_degree.get_mut(&e).expect("pushed");
            *c -= 1;
            if *c == 0 {
                self.edge_degree.remove(&e);
            }
        }
        self.chosen.pop();
        self.max_vertex = self
            .chosen
            .iter()
            .map(|&i| self.all[i][2] as i64)
            .max()
            .unwrap_or(-1);
    }

    fn open_edges(&self) -> usize {
        self.edge_degree.values().filter(|&&c| c == 1).count()
    }

    fn dfs(&mut self, last: usize, found: &mut BTreeSet<Vec<Vec<Vertex>>>) {
        if self.chosen.len() == self.target {
            if self.max_vertex + 1 == self.n as i64 && self.open_edges() == 0 {
                let complex = Complex::new(
                    2,
                    self.chosen
                        .iter()
                        .map(|&i| self.all[i].to_vec())
                        .collect::<Vec<_>>(),
                )
                .expect("distinct sorted facets");
                if verify_sphere(&complex, Effort::default()).is_yes() {
                    let canon = canonical_form(&complex);
                    found.insert(
                        canon.facets().iter().map(|f| f.vertices().to_vec()).collect(),
                    );
                }
            }
            return;
        }
        let remaining = self.target - self.chosen.len();
        // Each new facet can close at most three open edges and introduce
        // at most one new vertex beyond position 2.
        if self.open_edges() > 3 * remaining {
            return;
        }
        if (self.n as i64 - 1 - self.max_vertex) as usize > remaining {
            return;
        }
        for idx in last + 1..self.all.len() {
            if self.admissible(idx) {
                self.push(idx);
                self.dfs(idx, found);
                self.pop(idx);
            }
        }
    }
}

/// Samples locally-constructible closures over a seed budget and counts the
/// distinct isomorphism classes reached. The count is a lower bound on the
/// true class count; the record also checks it against the exponential
/// class-size bound.
pub fn census_2lc(d: usize, m: u64, sample_budget: u64, seed: u64) -> Result<CensusRecord> {
    if !(d == 2 || d == 3) {
        return Err(Error::param("census_2lc supports d in {2, 3}"));
    }
    let cap = if d == 2 { 20 } else { 16 };
    if m > cap {
        return Err(Error::param(format!("m = {m} above desk-scale cap {cap} at d = {d}")));
    }
    let forms: BTreeSet<Vec<Vec<Vertex>>> = (0..sample_budget)
        .into_par_iter()
        .filter_map(|i| {
            let mut search =
                TwoLcSearch::new(d, m, seed.wrapping_add(i), LcMode::TwoLc).ok()?;
            let (x, _) = search.attempt().ok()??;
            let canon = canonical_form(&x);
            Some(canon.facets().iter().map(|f| f.vertices().to_vec()).collect::<Vec<_>>())
        })
        .collect::<BTreeSet<_>>();
    let count = forms.len() as u64;
    // Reached classes must stay under 2^{(d^3 / 2) m}; compare in log2.
    let bound_exponent = (d.pow(3) as f64 / 2.0) * m as f64;
    let ok = count == 0 || (count as f64).log2() < bound_exponent;
    let representatives = forms
        .into_iter()
        .take(REPRESENTATIVE_CAP)
        .map(|facets| Complex::new(d, facets).expect("canonical facets"))
        .collect();
    Ok(CensusRecord {
        d,
        key: m,
        count,
        representatives,
        exponential_bound_ok: Some(ok),
    })
}
