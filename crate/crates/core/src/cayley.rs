//! Cayley-graph decisions through regular subgroups of the automorphism group.
//!
//! Cayley graphs here use right multiplication: `{g, g * s}` for `s ∈ S`.
//! Permutations act on points from the left, so the canonical map
//! `φ(g) = g(base)` sends `{g, g * s}` to `{g(base), g(s(base))}`, which is an
//! edge whenever `s(base)` is a neighbour of `base` and `g` is an automorphism.
//! The left-multiplication convention `{g, s * g}` gives an isomorphic graph
//! through `g -> g⁻¹`, because `S` is inverse-closed.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, SimpleGraph};
use crate::perm::{closure, is_automorphism, is_regular_action, orbits, PermGroup, Permutation, DEFAULT_ELEMENT_CAP};
use crate::symmetry::make_generators;
use crate::torus::{build_torus, TorusGraph, TorusParams, VertexId};

/// Largest graph the exhaustive automorphism search accepts by default.
pub const AUT_MAX_ORDER: usize = 64;

/// Largest graph on which the all-pairs distance colouring is computed.
pub const INVARIANT_MAX_ORDER: usize = 4096;

/// Default node budget for searches.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// A connection set `S` of a regular group, taken relative to a base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    base_point: usize,
    elements: Vec<Permutation>,
}

impl ConnectionSet {
    /// Checks `1 ∉ S`, `S = S⁻¹` and equal degrees.
    pub fn new(base_point: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(first) = elements.first() {
            let degree = first.degree();
            if let Some(bad) = elements.iter().find(|p| p.degree() != degree) {
                return Err(Error::DegreeMismatch { expected: degree, found: bad.degree() });
            }
        }
        if elements.iter().any(Permutation::is_identity) {
            return Err(Error::Precondition("connection set contains the identity".into()));
        }
        if elements.iter().any(|s| elements.binary_search(&s.inverse()).is_err()) {
            return Err(Error::Precondition("connection set is not closed under inverses".into()));
        }
        Ok(ConnectionSet { base_point, elements })
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn require_regular(group: &PermGroup, order: usize) -> Result<()> {
    if group.degree() != order {
        return Err(Error::DegreeMismatch { expected: order, found: group.degree() });
    }
    let report = is_regular_action(group);
    if !report.is_regular() {
        return Err(Error::Precondition(format!(
            "group of order {} is not regular on {} points (transitive: {}, trivial stabiliser: {})",
            group.order(),
            group.degree(),
            report.transitive,
            report.stabilizer_trivial
        )));
    }
    Ok(())
}

/// `S = { g ∈ group : g(base) ∈ N(base) }` on a torus.
pub fn connection_set(graph: &TorusGraph, group: &PermGroup, base: VertexId) -> Result<ConnectionSet> {
    connection_set_at(graph, group, graph.point(base)?)
}

pub fn connection_set_at<G: Adjacency + ?Sized>(graph: &G, group: &PermGroup, base: usize) -> Result<ConnectionSet> {
    require_regular(group, graph.order())?;
    let neighbours = graph.neighbors_of(base);
    let elements: Vec<Permutation> = group
        .elements()
        .iter()
        .filter(|g| neighbours.binary_search(&g.apply(base)).is_ok())
        .cloned()
        .collect();
    if elements.len() != neighbours.len() {
        return Err(Error::Consistency(format!(
            "connection set has {} elements but the base point has degree {}",
            elements.len(),
            neighbours.len()
        )));
    }
    ConnectionSet::new(base, elements)
}

/// `Cay(group, S)` on the group elements in canonical order, with edges
/// `{g, g * s}`.
pub fn build_cayley(group: &PermGroup, s: &ConnectionSet) -> Result<SimpleGraph> {
    if let Some(stray) = s.elements().iter().find(|p| !group.contains(p)) {
        return Err(Error::Precondition(format!("connection set element {stray} is not in the group")));
    }
    let mut edges = Vec::with_capacity(group.order() * s.len());
    for (a, g) in group.elements().iter().enumerate() {
        for x in s.elements() {
            let b = group
                .position(&g.compose(x)?)
                .ok_or_else(|| Error::Consistency("group is not closed under multiplication".into()))?;
            edges.push((a, b));
        }
    }
    SimpleGraph::from_edges(group.order(), edges)
}

/// Checks that `g -> g(base)` is an isomorphism from `Cay(group, S)` onto
/// the torus.
pub fn verify_cayley_isomorphism(graph: &TorusGraph, group: &PermGroup, base: VertexId) -> Result<bool> {
    verify_cayley_isomorphism_at(graph, group, graph.point(base)?)
}

pub fn verify_cayley_isomorphism_at<G: Adjacency + ?Sized>(graph: &G, group: &PermGroup, base: usize) -> Result<bool> {
    let s = connection_set_at(graph, group, base)?;
    let cayley = build_cayley(group, &s)?;
    let phi: Vec<usize> = group.elements().iter().map(|g| g.apply(base)).collect();
    let mut phi_inv = vec![usize::MAX; graph.order()];
    for (k, &x) in phi.iter().enumerate() {
        if phi_inv[x] != usize::MAX {
            return Ok(false);
        }
        phi_inv[x] = k;
    }
    if phi_inv.contains(&usize::MAX) {
        return Ok(false);
    }
    let forward = cayley.edges().iter().all(|&(a, b)| graph.has_edge(phi[a], phi[b]));
    let backward = graph.edges().iter().all(|&(x, y)| cayley.has_edge(phi_inv[x], phi_inv[y]));
    Ok(forward && backward && cayley.size() == graph.size())
}

/// Per-vertex refinement colour: degree plus the count of vertices at each
/// distance (unreachable vertices counted last).
fn distance_colours(dist: &[Vec<usize>]) -> Vec<usize> {
    let n = dist.len();
    let profiles: Vec<(Vec<usize>, usize)> = dist
        .iter()
        .map(|row| {
            let mut counts = vec![0usize; n + 1];
            for &d in row {
                counts[d.min(n)] += 1;
            }
            (counts, row.iter().filter(|&&d| d == 1).count())
        })
        .collect();
    let mut distinct: Vec<&(Vec<usize>, usize)> = profiles.iter().collect();
    distinct.sort();
    distinct.dedup();
    profiles.iter().map(|p| distinct.binary_search(&p).expect("profile present")).collect()
}

/// Number of distinct distance-profile colours. More than one rules out
/// vertex-transitivity.
pub fn invariant_classes<G: Adjacency + ?Sized>(graph: &G) -> usize {
    let dist: Vec<Vec<usize>> = (0..graph.order()).map(|p| graph.distances_from(p)).collect();
    let colours = distance_colours(&dist);
    colours.iter().copied().max().map_or(0, |c| c + 1)
}

/// Visiting order: breadth-first from point 0, then from the least unvisited
/// point of each further component. Each entry carries an already-visited
/// neighbour when one exists.
fn search_order<G: Adjacency + ?Sized>(graph: &G) -> Vec<(usize, Option<usize>)> {
    let n = graph.order();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = out.len();
        out.push((root, None));
        let mut head = start;
        while head < out.len() {
            let (p, _) = out[head];
            head += 1;
            for &q in graph.neighbors_of(p) {
                if !seen[q] {
                    seen[q] = true;
                    out.push((q, Some(p)));
                }
            }
        }
    }
    out
}

struct AutSearch<'a, G: ?Sized> {
    graph: &'a G,
    dist: Vec<Vec<usize>>,
    colour: Vec<usize>,
    order: Vec<(usize, Option<usize>)>,
    image: Vec<usize>,
    used: Vec<bool>,
    nodes: usize,
    budget: usize,
    found: Vec<Permutation>,
}

impl<G: Adjacency + ?Sized> AutSearch<'_, G> {
    fn consistent(&self, depth: usize, v: usize, x: usize) -> bool {
        self.colour[v] == self.colour[x]
            && self.order[..depth].iter().all(|&(w, _)| self.dist[v][w] == self.dist[x][self.image[w]])
    }

    fn extend(&mut self, depth: usize) -> Result<()> {
        if depth == self.order.len() {
            let perm = Permutation::from_images(self.image.clone())?;
            self.found.push(perm);
            return Ok(());
        }
        let (v, parent) = self.order[depth];
        let candidates: Vec<usize> = match parent {
            Some(u) => self.graph.neighbors_of(self.image[u]).to_vec(),
            None => (0..self.graph.order()).collect(),
        };
        for x in candidates {
            if self.used[x] || !self.consistent(depth, v, x) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget { what: "automorphism search", cap: self.budget });
            }
            self.image[v] = x;
            self.used[x] = true;
            self.extend(depth + 1)?;
            self.used[x] = false;
        }
        Ok(())
    }
}

/// The full automorphism group by exhaustive backtracking, capped at
/// [`AUT_MAX_ORDER`] points.
pub fn brute_force_aut<G: Adjacency + ?Sized>(graph: &G, node_budget: usize) -> Result<PermGroup> {
    brute_force_aut_with_cap(graph, node_budget, AUT_MAX_ORDER)
}

pub fn brute_force_aut_with_cap<G: Adjacency + ?Sized>(graph: &G, node_budget: usize, max_order: usize) -> Result<PermGroup> {
    let n = graph.order();
    if n > max_order {
        return Err(Error::Capacity { order: n, cap: max_order });
    }
    if node_budget == 0 {
        return Err(Error::Precondition("node budget must be at least 1".into()));
    }
    if n == 0 {
        return Ok(PermGroup::trivial(0));
    }
    let dist: Vec<Vec<usize>> = (0..n).map(|p| graph.distances_from(p)).collect();
    let mut search = AutSearch {
        graph,
        colour: distance_colours(&dist),
        dist,
        order: search_order(graph),
        image: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
        budget: node_budget,
        found: Vec::new(),
    };
    search.extend(0)?;
    let mut found = search.found;
    found.sort_unstable();

    for p in &found {
        if !is_automorphism(graph, p)? {
            return Err(Error::Consistency(format!("search produced a non-automorphism {p}")));
        }
    }

    // Greedy generating set in canonical order; its closure must reproduce
    // the enumerated set exactly.
    let mut generators: Vec<Permutation> = Vec::new();
    let mut group = PermGroup::trivial(n);
    for p in &found {
        if !group.contains(p) {
            generators.push(p.clone());
            group = closure(&generators, found.len().max(1))?;
        }
    }
    if group.elements() != found.as_slice() {
        return Err(Error::Consistency("enumerated automorphisms do not form a group".into()));
    }
    Ok(group)
}

#[derive(Debug, Clone)]
pub struct RegularSearch {
    pub found: Option<PermGroup>,
    /// Every semiregular subgroup reachable by adding derangements was examined.
    pub exhaustive: bool,
    pub budget_exhausted: bool,
    pub derangements: usize,
    pub subgroups_examined: usize,
}

impl RegularSearch {
    pub fn none_exists(&self) -> bool {
        self.found.is_none() && self.exhaustive
    }
}

struct Subgroup {
    elements: Vec<u32>,
    generators: Vec<u32>,
}

/// Searches `aut` for a subgroup acting regularly on `degree` points.
///
/// Non-identity elements of a regular group are derangements, so only
/// subgroups whose every non-identity element is a derangement are grown.
/// Such a subgroup has order dividing `degree`; it is regular exactly when
/// its order reaches `degree`.
pub fn find_regular_subgroup(aut: &PermGroup, degree: usize, budget: usize) -> Result<RegularSearch> {
    if aut.degree() != degree {
        return Err(Error::DegreeMismatch { expected: degree, found: aut.degree() });
    }
    let elements = aut.elements();
    let identity = aut
        .position(&Permutation::identity(degree))
        .ok_or_else(|| Error::Consistency("group lacks the identity".into()))? as u32;
    let allowed: Vec<bool> = elements.iter().map(|p| p.is_identity() || p.is_derangement()).collect();
    let derangements: Vec<u32> = (0..elements.len() as u32).filter(|&k| k != identity && allowed[k as usize]).collect();

    let mut outcome = RegularSearch {
        found: None,
        exhaustive: false,
        budget_exhausted: false,
        derangements: derangements.len(),
        subgroups_examined: 0,
    };
    if degree <= 1 {
        outcome.found = Some(PermGroup::trivial(degree));
        outcome.exhaustive = true;
        return Ok(outcome);
    }

    let multiply = |a: u32, b: u32| -> u32 {
        let prod = elements[a as usize].compose_unchecked(&elements[b as usize]);
        aut.position(&prod).expect("group closed under multiplication") as u32
    };

    // Grows <base ∪ {extra}>; None when a non-derangement appears or the
    // order passes `degree`.
    let grow = |base: &Subgroup, extra: u32| -> Option<Subgroup> {
        let mut generators = base.generators.clone();
        generators.push(extra);
        let mut members: HashSet<u32> = base.elements.iter().copied().collect();
        let mut frontier: Vec<u32> = base.elements.clone();
        while let Some(x) = frontier.pop() {
            for &g in &generators {
                let y = multiply(g, x);
                if members.contains(&y) {
                    continue;
                }
                if !allowed[y as usize] || members.len() >= degree {
                    return None;
                }
                members.insert(y);
                frontier.push(y);
            }
        }
        let mut elements: Vec<u32> = members.into_iter().collect();
        elements.sort_unstable();
        Some(Subgroup { elements, generators })
    };

    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut stack = vec![Subgroup { elements: vec![identity], generators: Vec::new() }];
    seen.insert(vec![identity]);
    while let Some(current) = stack.pop() {
        // Children are pushed in reverse so the smallest derangement is explored first.
        let mut children = Vec::new();
        for &d in &derangements {
            if current.elements.binary_search(&d).is_ok() {
                continue;
            }
            outcome.subgroups_examined += 1;
            if outcome.subgroups_examined > budget {
                outcome.budget_exhausted = true;
                return Ok(outcome);
            }
            let Some(next) = grow(&current, d) else { continue };
            if !seen.insert(next.elements.clone()) {
                continue;
            }
            if next.elements.len() == degree {
                let gens: Vec<Permutation> = next.generators.iter().map(|&k| elements[k as usize].clone()).collect();
                let group = closure(&gens, degree)?;
                if is_regular_action(&group).is_regular() {
                    outcome.found = Some(group);
                    return Ok(outcome);
                }
                return Err(Error::Consistency("semiregular subgroup of full order is not transitive".into()));
            }
            children.push(next);
        }
        stack.extend(children.into_iter().rev());
    }
    outcome.exhaustive = true;
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Inconclusive,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Regular group generated by the explicit torus symmetries.
    Constructive,
    /// Full automorphism group plus regular-subgroup search.
    Exhaustive,
    /// Refuted by a vertex colouring that every automorphism preserves.
    Invariant,
    /// Nothing could be computed within the configured limits.
    None,
}

/// An automorphism-group order stated in earlier work for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportedAutClaim {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    pub description: &'static str,
}

/// `Aut([3,2]) ≅ D8`, read with the order-8 convention for `D8`.
pub const REPORTED_AUT_CLAIMS: &[ReportedAutClaim] = &[ReportedAutClaim { m: 3, n: 2, order: 8, description: "D8" }];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimComparison {
    pub claimed: String,
    pub claimed_order: usize,
    pub computed_order: usize,
    pub agrees: bool,
}

pub fn compare_reported_claim(params: TorusParams, computed_order: usize) -> Option<ClaimComparison> {
    REPORTED_AUT_CLAIMS.iter().find(|c| c.m == params.m && c.n == params.n).map(|c| ClaimComparison {
        claimed: c.description.to_string(),
        claimed_order: c.order,
        computed_order,
        agrees: c.order == computed_order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyVerdict {
    pub params: TorusParams,
    pub is_cayley: Decision,
    pub method: Method,
    pub witness_group_order: Option<usize>,
    pub connection_set_size: Option<usize>,
    pub aut_order: Option<usize>,
    pub vertex_transitive: Option<bool>,
    pub vertex_orbits: Option<usize>,
    /// The "no" answer rests on a completed search.
    pub exhaustive: bool,
    pub budget_exhausted: bool,
    pub claim_check: Option<ClaimComparison>,
    pub notes: Vec<String>,
}

impl CayleyVerdict {
    fn empty(params: TorusParams, method: Method) -> Self {
        CayleyVerdict {
            params,
            is_cayley: Decision::Inconclusive,
            method,
            witness_group_order: None,
            connection_set_size: None,
            aut_order: None,
            vertex_transitive: None,
            vertex_orbits: None,
            exhaustive: false,
            budget_exhausted: false,
            claim_check: None,
            notes: Vec::new(),
        }
    }
}

/// Base vertex `v_{1,1}^0` used for connection sets and canonical maps.
pub const BASE_VERTEX: VertexId = VertexId::new(1, 1, 0);

/// Decides whether `TRC4C8(R)[m, n]` is a Cayley graph.
///
/// Square tori use the regular group generated by `g1..g4`. Other shapes go
/// through the full automorphism group, provided `4mn ≤ AUT_MAX_ORDER`.
/// Exhausted budgets produce `Inconclusive`, never a guessed answer.
pub fn decide_cayley(params: TorusParams, budget: usize) -> Result<CayleyVerdict> {
    let params = TorusParams::new(params.m, params.n)?;
    if params.is_square() {
        decide_constructive(params)
    } else {
        decide_exhaustive(params, budget)
    }
}

fn decide_constructive(params: TorusParams) -> Result<CayleyVerdict> {
    let mut verdict = CayleyVerdict::empty(params, Method::Constructive);
    let gens = make_generators(params)?;
    let group = match closure(&gens.all(), DEFAULT_ELEMENT_CAP) {
        Ok(g) => g,
        Err(Error::Budget { cap, .. }) => {
            verdict.budget_exhausted = true;
            verdict.notes.push(format!("generated group exceeds {cap} elements"));
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    let graph = gens.graph();
    let regular = is_regular_action(&group);
    verdict.vertex_transitive = Some(regular.transitive);
    verdict.vertex_orbits = Some(orbits(group.generators(), group.degree()).len());
    if !regular.is_regular() {
        return Err(Error::Consistency(format!("<g1..g4> on [{0},{0}] is not regular", params.n)));
    }
    let s = connection_set(graph, &group, BASE_VERTEX)?;
    if !verify_cayley_isomorphism(graph, &group, BASE_VERTEX)? {
        return Err(Error::Consistency("canonical map onto the torus is not an isomorphism".into()));
    }
    verdict.is_cayley = Decision::Yes;
    verdict.witness_group_order = Some(group.order());
    verdict.connection_set_size = Some(s.len());
    verdict.notes.push(format!("witness <g1,g2,g3,g4> of order {} acts regularly", group.order()));
    Ok(verdict)
}

fn decide_exhaustive(params: TorusParams, budget: usize) -> Result<CayleyVerdict> {
    let mut verdict = CayleyVerdict::empty(params, Method::Exhaustive);
    if params.order() > AUT_MAX_ORDER {
        verdict.notes.push(format!(
            "order {} exceeds the exhaustive-search cap of {AUT_MAX_ORDER} points",
            params.order()
        ));
        if params.order() <= INVARIANT_MAX_ORDER {
            let classes = invariant_classes(&build_torus(params)?);
            if classes > 1 {
                verdict.method = Method::Invariant;
                verdict.is_cayley = Decision::No;
                verdict.exhaustive = true;
                verdict.vertex_transitive = Some(false);
                verdict.notes.push(format!("distance-profile colouring splits the vertices into {classes} classes"));
                return Ok(verdict);
            }
        }
        verdict.method = Method::None;
        return Ok(verdict);
    }
    let graph = build_torus(params)?;
    let aut = match brute_force_aut(&graph, budget) {
        Ok(aut) => aut,
        Err(Error::Budget { cap, .. }) => {
            verdict.budget_exhausted = true;
            verdict.notes.push(format!("automorphism search exceeded {cap} nodes"));
            let classes = invariant_classes(&graph);
            if classes > 1 {
                // Automorphisms preserve the colouring, so no transitive group exists.
                verdict.method = Method::Invariant;
                verdict.is_cayley = Decision::No;
                verdict.exhaustive = true;
                verdict.vertex_transitive = Some(false);
                verdict.notes.push(format!("distance-profile colouring splits the vertices into {classes} classes"));
            }
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    verdict.aut_order = Some(aut.order());
    verdict.claim_check = compare_reported_claim(params, aut.order());
    if let Some(claim) = verdict.claim_check.as_ref().filter(|c| !c.agrees) {
        verdict.notes.push(format!(
            "previously reported Aut ≅ {} (order {}) disagrees with computed order {}",
            claim.claimed, claim.claimed_order, claim.computed_order
        ));
    }
    let vertex_orbits = orbits(aut.generators(), aut.degree()).len();
    verdict.vertex_orbits = Some(vertex_orbits);
    verdict.vertex_transitive = Some(vertex_orbits == 1);
    if vertex_orbits > 1 {
        verdict.is_cayley = Decision::No;
        verdict.exhaustive = true;
        verdict.notes.push(format!("automorphism group has {vertex_orbits} vertex orbits"));
        return Ok(verdict);
    }

    let search = find_regular_subgroup(&aut, graph.order(), budget)?;
    match search.found {
        Some(group) => {
            let s = connection_set(&graph, &group, BASE_VERTEX)?;
            if !verify_cayley_isomorphism(&graph, &group, BASE_VERTEX)? {
                return Err(Error::Consistency("regular subgroup failed the canonical isomorphism".into()));
            }
            verdict.is_cayley = Decision::Yes;
            verdict.witness_group_order = Some(group.order());
            verdict.connection_set_size = Some(s.len());
            verdict.notes.push(format!("regular subgroup found among {} derangements", search.derangements));
        }
        None if search.exhaustive => {
            verdict.is_cayley = Decision::No;
            verdict.exhaustive = true;
            verdict.notes.push(format!(
                "no regular subgroup: {} semiregular extensions examined over {} derangements",
                search.subgroups_examined, search.derangements
            ));
        }
        None => {
            verdict.budget_exhausted = true;
            verdict.notes.push(format!("regular-subgroup search exceeded {budget} steps"));
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{subgroups, Generator};

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    fn square_group(n: usize) -> (TorusGraph, PermGroup) {
        let gens = make_generators(TorusParams::square(n).unwrap()).unwrap();
        let g = subgroups(&gens, 100_000).unwrap().g;
        (gens.graph().clone(), g)
    }

    #[test]
    fn connection_set_on_two_by_two() {
        let gens = make_generators(TorusParams::square(2).unwrap()).unwrap();
        let (graph, group) = square_group(2);
        let s = connection_set(&graph, &group, BASE_VERTEX).unwrap();
        // Enumerated by hand: g3, g1 g4 and g1 g2 g3 g4 are the elements
        // carrying (1,1,0) onto its three neighbours.
        let g = |k| gens.get(k).unwrap().clone();
        let g1g4 = g(Generator::G1).compose(&g(Generator::G4)).unwrap();
        let long = g(Generator::G1)
            .compose(&g(Generator::G2))
            .unwrap()
            .compose(&g(Generator::G3))
            .unwrap()
            .compose(&g(Generator::G4))
            .unwrap();
        let mut want = vec![g(Generator::G3), g1g4, long];
        want.sort();
        assert_eq!(s.elements(), want.as_slice());
    }

    #[test]
    fn connection_set_requires_regular_group() {
        let graph = build_torus(TorusParams::new(1, 1).unwrap()).unwrap();
        let s4 = brute_force_aut(&graph, 1000).unwrap();
        assert!(matches!(connection_set(&graph, &s4, BASE_VERTEX), Err(Error::Precondition(_))));
        assert!(matches!(
            verify_cayley_isomorphism(&graph, &s4, BASE_VERTEX),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cayley_graph_of_klein_group_is_k4() {
        let klein = closure(&[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1])], 10).unwrap();
        let s = ConnectionSet::new(0, klein.elements()[1..].to_vec()).unwrap();
        let c = build_cayley(&klein, &s).unwrap();
        assert_eq!(c, SimpleGraph::complete(4));
    }

    #[test]
    fn cayley_graph_of_c5_is_a_cycle() {
        let x = perm(&[1, 2, 3, 4, 0]);
        let c5 = closure(&[x.clone()], 10).unwrap();
        let s = ConnectionSet::new(0, vec![x.clone(), x.inverse()]).unwrap();
        let c = build_cayley(&c5, &s).unwrap();
        assert_eq!(c.order(), 5);
        assert_eq!(c.size(), 5);
        assert!(c.is_connected());
        assert!((0..5).all(|p| c.degree(p) == 2));
    }

    #[test]
    fn connection_set_validation() {
        let x = perm(&[1, 2, 3, 4, 0]);
        assert!(ConnectionSet::new(0, vec![x.clone()]).is_err());
        assert!(ConnectionSet::new(0, vec![Permutation::identity(5)]).is_err());
        let c3 = closure(&[perm(&[1, 2, 0])], 10).unwrap();
        let s = ConnectionSet::new(0, vec![x.clone(), x.inverse()]).unwrap();
        assert!(build_cayley(&c3, &s).is_err());
    }

    #[test]
    fn k4_aut_and_regular_subgroup() {
        let graph = build_torus(TorusParams::new(1, 1).unwrap()).unwrap();
        let aut = brute_force_aut(&graph, 10_000).unwrap();
        assert_eq!(aut.order(), 24);
        let search = find_regular_subgroup(&aut, 4, 10_000).unwrap();
        let found = search.found.unwrap();
        assert!(is_regular_action(&found).is_regular());
        assert!(verify_cayley_isomorphism(&graph, &found, BASE_VERTEX).unwrap());
    }

    #[test]
    fn two_by_two_has_regular_subgroup_and_contains_g() {
        let (graph, g) = square_group(2);
        let aut = brute_force_aut(&graph, 1_000_000).unwrap();
        assert!(g.is_subgroup_of(&aut));
        let search = find_regular_subgroup(&aut, 16, 1_000_000).unwrap();
        let found = search.found.expect("order-16 regular subgroup");
        assert_eq!(found.order(), 16);
        assert!(found.elements().iter().all(|p| p.is_identity() || p.is_derangement()));
    }

    #[test]
    fn aut_budget_is_reported() {
        let graph = build_torus(TorusParams::new(2, 2).unwrap()).unwrap();
        assert!(matches!(brute_force_aut(&graph, 10), Err(Error::Budget { cap: 10, .. })));
        let big = build_torus(TorusParams::new(5, 5).unwrap()).unwrap();
        assert!(matches!(brute_force_aut(&big, 10), Err(Error::Capacity { order: 100, cap: 64 })));
    }

    #[test]
    fn regular_search_budget_is_inconclusive() {
        let graph = build_torus(TorusParams::new(2, 2).unwrap()).unwrap();
        let aut = brute_force_aut(&graph, 1_000_000).unwrap();
        let search = find_regular_subgroup(&aut, 16, 1).unwrap();
        assert!(search.budget_exhausted);
        assert!(!search.exhaustive);
        assert!(!search.none_exists());
    }

    #[test]
    fn decide_examples() {
        let v = decide_cayley(TorusParams::new(3, 3).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.is_cayley, Decision::Yes);
        assert_eq!(v.witness_group_order, Some(36));
        assert_eq!(v.connection_set_size, Some(3));

        let v = decide_cayley(TorusParams::new(1, 1).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.is_cayley, Decision::Yes);
        assert_eq!(v.witness_group_order, Some(4));

        let v = decide_cayley(TorusParams::new(3, 2).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.is_cayley, Decision::No);
        assert!(v.exhaustive);
        assert_eq!(v.aut_order.map(|o| o % 6), Some(0));
        assert!(v.claim_check.is_some());
    }

    #[test]
    fn invariant_refutes_when_enumeration_is_too_large() {
        let graph = build_torus(TorusParams::new(1, 16).unwrap()).unwrap();
        assert!(invariant_classes(&graph) > 1);
        let v = decide_cayley(TorusParams::new(1, 16).unwrap(), 1000).unwrap();
        assert_eq!(v.is_cayley, Decision::No);
        assert!(v.exhaustive && v.budget_exhausted);
        assert_eq!(v.aut_order, None);

        let k4 = SimpleGraph::complete(4);
        assert_eq!(invariant_classes(&k4), 1);
    }

    #[test]
    fn decide_reports_limits() {
        let v = decide_cayley(TorusParams::new(3, 2).unwrap(), 5).unwrap();
        assert_eq!(v.is_cayley, Decision::No);
        assert_eq!(v.method, Method::Invariant);
        assert!(v.budget_exhausted);

        let v = decide_cayley(TorusParams::new(5, 4).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.is_cayley, Decision::No);
        assert_eq!(v.method, Method::Invariant);

        let v = decide_cayley(TorusParams::new(40, 41).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.is_cayley, Decision::Inconclusive);
        assert_eq!(v.method, Method::None);
    }
}
