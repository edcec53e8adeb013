//! Graded sphere recognition.
//!
//! Full recognition is out of reach in high dimension, so verdicts are
//! three-valued: `yes` always carries a replayable certificate, `no` a
//! concrete violated check, and `unknown` means the shelling budget ran
//! out. Dimensions 1 and 2 are decided exactly; from dimension 3 on, the
//! cheap necessary conditions (pseudomanifold, Euler characteristic, vertex
//! links) filter first and a backtracking shelling search provides the
//! positive certificates, since a shellable closed pseudomanifold is a
//! sphere.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face, Vertex};

/// Search effort for the positive side of recognition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effort {
    /// Node budget for the backtracking shelling search.
    pub shelling_budget: u64,
}

impl Default for Effort {
    fn default() -> Self {
        Effort { shelling_budget: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereStatus {
    Yes,
    No,
    Unknown,
}

/// Why a verdict holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    /// d = 0: exactly two vertices.
    TwoPoints,
    /// d = 1: a single closed cycle of the given length.
    Cycle { length: u64 },
    /// d = 2: closed connected surface with Euler characteristic 2.
    SurfaceClassification,
    /// d >= 3: an explicit shelling order.
    Shelling { order: Vec<Face> },
    NoFacets,
    /// A `(d-1)`-face with degree other than 2.
    RidgeDegree { ridge: Face, degree: u64 },
    /// Facet adjacency graph is disconnected.
    Disconnected,
    EulerCharacteristic { got: i64, expected: i64 },
    /// A vertex whose link is not a sphere of one lower dimension.
    VertexLink { vertex: Vertex, reason: Box<VerdictReason> },
    BudgetExhausted,
}

/// Outcome of [`verify_sphere`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereVerdict {
    pub status: SphereStatus,
    pub reason: VerdictReason,
    /// Shelling search nodes expended.
    pub effort_used: u64,
}

impl SphereVerdict {
    fn yes(reason: VerdictReason, effort_used: u64) -> SphereVerdict {
        SphereVerdict { status: SphereStatus::Yes, reason, effort_used }
    }

    fn no(reason: VerdictReason, effort_used: u64) -> SphereVerdict {
        SphereVerdict { status: SphereStatus::No, reason, effort_used }
    }

    fn unknown(effort_used: u64) -> SphereVerdict {
        SphereVerdict {
            status: SphereStatus::Unknown,
            reason: VerdictReason::BudgetExhausted,
            effort_used,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.status == SphereStatus::Yes
    }
}

fn ridge_degrees(x: &Complex) -> BTreeMap<Face, u64> {
    let mut count = BTreeMap::new();
    for f in x.facets() {
        for r in f.subfaces(x.dim() as isize - 1) {
            *count.entry(r).or_insert(0u64) += 1;
        }
    }
    count
}

fn facet_graph_connected(x: &Complex) -> bool {
    let facets: Vec<&Face> = x.facets().iter().collect();
    if facets.is_empty() {
        return false;
    }
    let mut ridge_to_facets: HashMap<Face, Vec<usize>> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        for r in f.subfaces(x.dim() as isize - 1) {
            ridge_to_facets.entry(r).or_default().push(i);
        }
    }
    let mut seen = vec![false; facets.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for r in facets[i].subfaces(x.dim() as isize - 1) {
            for &j in &ridge_to_facets[&r] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn pseudomanifold_defect(x: &Complex) -> Option<VerdictReason> {
    if x.facets().is_empty() {
        return Some(VerdictReason::NoFacets);
    }
    for (ridge, degree) in ridge_degrees(x) {
        if degree != 2 {
            return Some(VerdictReason::RidgeDegree { ridge, degree });
        }
    }
    if !facet_graph_connected(x) {
        return Some(VerdictReason::Disconnected);
    }
    None
}

/// True iff every `(d-1)`-face has degree exactly 2 and the facet adjacency
/// graph is connected.
pub fn is_closed_pseudomanifold(x: &Complex) -> bool {
    pseudomanifold_defect(x).is_none()
}

/// True iff the 1-complex is a single closed cycle.
fn is_single_cycle(x: &Complex) -> bool {
    x.dim() == 1 && x.vertex_count() >= 3 && pseudomanifold_defect(x).is_none()
}

/// Validates the shelling condition for a facet order: each facet past the
/// first must meet the union of its predecessors in a pure `(d-1)`-complex.
pub fn is_shelling(x: &Complex, order: &[Face]) -> bool {
    if order.len() != x.facets().len() {
        return false;
    }
    let as_set: BTreeSet<&Face> = order.iter().collect();
    if as_set.len() != order.len() || !order.iter().all(|f| x.contains_facet(f)) {
        return false;
    }
    let d = x.dim();
    for k in 1..order.len() {
        if !attachment_is_pure(&order[..k], &order[k], d) {
            return false;
        }
    }
    true
}

/// The intersection of `facet` with the union of `prefix` is the downward
/// closure of the pairwise intersections; purity in dimension `d - 1` means
/// every such intersection extends to one of size `d`.
fn attachment_is_pure(prefix: &[Face], facet: &Face, d: usize) -> bool {
    let mut ridges: Vec<Face> = Vec::new();
    let mut smalls: Vec<Face> = Vec::new();
    for g in prefix {
        let i = facet.intersection(g);
        if i.len() == d {
            ridges.push(i);
        } else {
            smalls.push(i);
        }
    }
    if ridges.is_empty() {
        return false;
    }
    smalls.iter().all(|s| ridges.iter().any(|r| s.is_subset_of(r)))
}

/// Backtracking search for a shelling order, greedy on the number of shared
/// ridges. Returns the order or `None` once the node budget is exhausted or
/// the space is exhausted.
pub fn find_shelling(x: &Complex, budget: u64) -> Option<Vec<Face>> {
    shelling_search(x, budget).0
}

pub(crate) fn shelling_search(x: &Complex, budget: u64) -> (Option<Vec<Face>>, u64) {
    let facets: Vec<Face> = x.facets().iter().cloned().collect();
    let m = facets.len();
    if m == 0 {
        return (None, 0);
    }
    let d = x.dim();
    let mut nodes = 0u64;

    struct Search<'a> {
        facets: &'a [Face],
        d: usize,
        budget: u64,
    }

    impl Search<'_> {
        fn go(
            &self,
            chosen: &mut Vec<usize>,
            used: &mut Vec<bool>,
            nodes: &mut u64,
        ) -> Result<bool, ()> {
            if chosen.len() == self.facets.len() {
                return Ok(true);
            }
            let prefix: Vec<Face> = chosen.iter().map(|&i| self.facets[i].clone()).collect();
            let mut candidates: Vec<(usize, usize)> = Vec::new();
            for (i, facet) in self.facets.iter().enumerate() {
                if used[i] {
                    continue;
                }
                *nodes += 1;
                if *nodes > self.budget {
                    return Err(());
                }
                if attachment_is_pure(&prefix, facet, self.d) {
                    let shared = prefix
                        .iter()
                        .filter(|g| facet.intersection(g).len() == self.d)
                        .count();
                    candidates.push((i, shared));
                }
            }
            candidates.sort_by_key(|&(i, shared)| (std::cmp::Reverse(shared), i));
            for (i, _) in candidates {
                chosen.push(i);
                used[i] = true;
                if self.go(chosen, used, nodes)? {
                    return Ok(true);
                }
                used[i] = false;
                chosen.pop();
            }
            Ok(false)
        }
    }

    let search = Search { facets: &facets, d, budget };
    let mut used = vec![false; m];
    // Any facet may start; all starts are explored before giving up.
    for first in 0..m {
        let mut chosen = vec![first];
        used[first] = true;
        nodes += 1;
        match search.go(&mut chosen, &mut used, &mut nodes) {
            Ok(true) => {
                let order = chosen.into_iter().map(|i| facets[i].clone()).collect();
                return (Some(order), nodes);
            }
            Ok(false) => {
                used[first] = false;
            }
            Err(()) => return (None, nodes),
        }
    }
    (None, nodes)
}

/// Decides whether the complex is a simplicial sphere of its dimension.
///
/// Dimension 1 recognizes cycles and dimension 2 closed surfaces with
/// `chi = 2`, both exactly. From dimension 3 the necessary conditions
/// (closed pseudomanifold, Euler characteristic, sphere links) can answer
/// `no`; a successful shelling search answers `yes`; otherwise the verdict
/// is `unknown`. There are no false `yes` answers.
pub fn verify_sphere(x: &Complex, effort: Effort) -> SphereVerdict {
    match x.dim() {
        0 => {
            if x.facet_count() == 2 {
                SphereVerdict::yes(VerdictReason::TwoPoints, 0)
            } else {
                SphereVerdict::no(VerdictReason::NoFacets, 0)
            }
        }
        1 => match pseudomanifold_defect(x) {
            None => SphereVerdict::yes(VerdictReason::Cycle { length: x.facet_count() }, 0),
            Some(reason) => SphereVerdict::no(reason, 0),
        },
        2 => {
            if let Some(reason) = pseudomanifold_defect(x) {
                return SphereVerdict::no(reason, 0);
            }
            if let Some(reason) = link_defect_2d(x) {
                return SphereVerdict::no(reason, 0);
            }
            let chi = x.euler_characteristic();
            if chi != 2 {
                return SphereVerdict::no(
                    VerdictReason::EulerCharacteristic { got: chi, expected: 2 },
                    0,
                );
            }
            SphereVerdict::yes(VerdictReason::SurfaceClassification, 0)
        }
        d => {
            if let Some(reason) = pseudomanifold_defect(x) {
                return SphereVerdict::no(reason, 0);
            }
            let expected = if d % 2 == 0 { 2 } else { 0 };
            let chi = x.euler_characteristic();
            if chi != expected {
                return SphereVerdict::no(
                    VerdictReason::EulerCharacteristic { got: chi, expected },
                    0,
                );
            }
            for &v in x.vertices() {
                let link = x.link(&Face::new(vec![v]).expect("vertex")).expect("vertex of x");
                if let Some(reason) = link_no_filter(&link) {
                    return SphereVerdict::no(
                        VerdictReason::VertexLink { vertex: v, reason: Box::new(reason) },
                        0,
                    );
                }
            }
            let (order, nodes) = shelling_search(x, effort.shelling_budget);
            match order {
                Some(order) => SphereVerdict::yes(VerdictReason::Shelling { order }, nodes),
                None => SphereVerdict::unknown(nodes),
            }
        }
    }
}

/// Vertex links of a surface must be single cycles; this also rules out
/// pinch points that pass the edge-degree and Euler checks.
fn link_defect_2d(x: &Complex) -> Option<VerdictReason> {
    for &v in x.vertices() {
        let link = x.link(&Face::new(vec![v]).expect("vertex")).expect("vertex of x");
        if !is_single_cycle(&link) {
            return Some(VerdictReason::VertexLink {
                vertex: v,
                reason: Box::new(VerdictReason::Disconnected),
            });
        }
    }
    None
}

/// Necessary-conditions-only check used on links: no shelling searches, so
/// it can say "not a sphere" but never "is a sphere".
fn link_no_filter(x: &Complex) -> Option<VerdictReason> {
    match x.dim() {
        0 => (x.facet_count() != 2).then_some(VerdictReason::NoFacets),
        1 => pseudomanifold_defect(x),
        2 => {
            pseudomanifold_defect(x).or_else(|| link_defect_2d(x)).or_else(|| {
                let chi = x.euler_characteristic();
                (chi != 2)
                    .then_some(VerdictReason::EulerCharacteristic { got: chi, expected: 2 })
            })
        }
        d => {
            if let Some(r) = pseudomanifold_defect(x) {
                return Some(r);
            }
            let expected = if d % 2 == 0 { 2 } else { 0 };
            let chi = x.euler_characteristic();
            if chi != expected {
                return Some(VerdictReason::EulerCharacteristic { got: chi, expected });
            }
            for &v in x.vertices() {
                let link = x.link(&Face::new(vec![v]).expect("vertex")).expect("vertex of x");
                if let Some(reason) = link_no_filter(&link) {
                    return Some(VerdictReason::VertexLink {
                        vertex: v,
                        reason: Box::new(reason),
                    });
                }
            }
            None
        }
    }
}
