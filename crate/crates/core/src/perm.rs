//! Permutations on `0..degree` and fully materialised permutation groups.
//!
//! Products read right to left: `compose(p, q)` applies `q` first, so the
//! juxtaposition `g2 g3` is `compose(&g2, &g3)`.
//!
//! Groups keep every element in lexicographic order of image sequences. All
//! iteration over group elements follows that order.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Adjacency;

/// Default ceiling on the number of elements `closure` will materialise.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// A bijection on `0..degree`, stored as the image of each point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            if x >= degree || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(degree));
            }
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u32).collect() })
    }

    /// The permutation sending `a` to `b` and `b` to `a`.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        if a >= degree || b >= degree {
            return Err(Error::Range(format!("transposition ({a} {b}) on degree {degree}")));
        }
        let mut p = Self::identity(degree);
        p.images.swap(a, b);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| k as u32 == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(k, &x)| k as u32 == x).count()
    }

    pub fn is_derangement(&self) -> bool {
        self.fixed_points() == 0
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u32; self.images.len()];
        for (k, &x) in self.images.iter().enumerate() {
            images[x as usize] = k as u32;
        }
        Permutation { images }
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exponent: i64) -> Self {
        let mut base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc = Self::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Least `k ≥ 1` with `self^k = 1`: the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut lcm = 1usize;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            lcm = lcm / gcd(lcm, len) * len;
        }
        lcm
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

/// Cycle notation on 0-based points, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    p.compose(q)
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

/// A finite permutation group with every element materialised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), elements: vec![Permutation::identity(degree)] }
    }

    /// Wraps an element list already known to be a group, e.g. the output of
    /// an exhaustive automorphism search. Closure is re-checked.
    pub fn from_elements(degree: usize, generators: Vec<Permutation>, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let group = PermGroup { degree, generators, elements };
        if !group.is_closed() {
            return Err(Error::Consistency("element list is not closed under composition".into()));
        }
        Ok(group)
    }

    fn is_closed(&self) -> bool {
        self.elements.iter().all(|p| p.degree() == self.degree)
            && self.contains(&Permutation::identity(self.degree))
            && self.generators.iter().all(|g| self.contains(g))
            && self.elements.iter().all(|p| self.contains(&p.inverse()))
            && self
                .elements
                .iter()
                .all(|p| self.elements.iter().all(|q| self.contains(&p.compose_unchecked(q))))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in canonical (lexicographic) order.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.position(p).is_some()
    }

    /// Index of `p` in the canonical element order.
    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && other.order() % self.order() == 0
            && self.elements.iter().all(|p| other.contains(p))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.effective_generators();
        gens.iter()
            .enumerate()
            .all(|(k, a)| gens[k + 1..].iter().all(|b| a.compose_unchecked(b) == b.compose_unchecked(a)))
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.elements.iter().map(Permutation::order).fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    /// Generators when recorded, otherwise every element.
    fn effective_generators(&self) -> &[Permutation] {
        if self.generators.is_empty() { &self.elements } else { &self.generators }
    }

    /// Number of elements sending `point` to itself.
    pub fn stabilizer_order(&self, point: usize) -> usize {
        self.elements.iter().filter(|p| p.apply(point) == point).count()
    }

    /// A short description of the isomorphism type for small abelian cases:
    /// `1`, `C{k}`, `C2 x C2 x ...` for elementary abelian 2-groups, otherwise
    /// a summary of order and exponent.
    pub fn structure_description(&self) -> String {
        let order = self.order();
        if order == 1 {
            return "1".into();
        }
        if self.elements.iter().any(|p| p.order() == order) {
            return format!("C{order}");
        }
        let abelian = self.is_abelian();
        let exponent = self.exponent();
        if abelian && exponent == 2 {
            let rank = order.trailing_zeros() as usize;
            return vec!["C2"; rank].join(" x ");
        }
        if abelian {
            format!("abelian of order {order}, exponent {exponent}")
        } else {
            format!("non-abelian of order {order}, exponent {exponent}")
        }
    }
}

/// Breadth-first closure from the identity under left multiplication by the
/// generators.
pub fn closure(gens: &[Permutation], cap: usize) -> Result<PermGroup> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Precondition("closure needs at least one generator".into()))?;
    let degree = first.degree();
    if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch { expected: degree, found: bad.degree() });
    }
    if cap == 0 {
        return Err(Error::Precondition("closure cap must be at least 1".into()));
    }

    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose_unchecked(&x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::Budget { what: "group closure", cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(PermGroup { degree, generators: gens.to_vec(), elements })
}

/// The orbit of `point` under the group generated by `gens`.
pub fn orbit(gens: &[Permutation], point: usize) -> BTreeSet<usize> {
    let mut found = BTreeSet::from([point]);
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if found.insert(y) {
                stack.push(y);
            }
        }
    }
    found
}

/// All orbits on `0..degree`, each sorted, ordered by least element.
pub fn orbits(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if assigned[start] {
            continue;
        }
        let orb: Vec<usize> = orbit(gens, start).into_iter().collect();
        for &x in &orb {
            assigned[x] = true;
        }
        out.push(orb);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularityReport {
    pub transitive: bool,
    /// Only the identity fixes point 0.
    pub stabilizer_trivial: bool,
    pub order_equals_degree: bool,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.transitive && self.stabilizer_trivial && self.order_equals_degree
    }
}

pub fn is_regular_action(group: &PermGroup) -> RegularityReport {
    let degree = group.degree();
    let transitive = degree > 0 && orbit(group.elements(), 0).len() == degree;
    RegularityReport {
        transitive,
        stabilizer_trivial: degree > 0 && group.stabilizer_order(0) == 1,
        order_equals_degree: group.order() == degree,
    }
}

/// Conjugation test over generators: `g⁻¹ h g ∈ sub` for every generator `g`
/// of `group` and `h` of `sub`.
pub fn is_normal(sub: &PermGroup, group: &PermGroup) -> Result<bool> {
    if sub.degree() != group.degree() {
        return Err(Error::DegreeMismatch { expected: group.degree(), found: sub.degree() });
    }
    if !sub.elements().iter().all(|p| group.contains(p)) {
        return Err(Error::Precondition("subgroup is not contained in the group".into()));
    }
    let normal = group.effective_generators().iter().all(|g| {
        let g_inv = g.inverse();
        sub.effective_generators()
            .iter()
            .all(|h| sub.contains(&g_inv.compose_unchecked(&h.compose_unchecked(g))))
    });
    Ok(normal)
}

pub fn intersect(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch { expected: a.degree(), found: b.degree() });
    }
    let elements: Vec<Permutation> = a.elements().iter().filter(|p| b.contains(p)).cloned().collect();
    let generators = elements.iter().filter(|p| !p.is_identity()).cloned().collect();
    Ok(PermGroup { degree: a.degree(), generators, elements })
}

/// True iff `p` maps every edge of `graph` onto an edge.
pub fn is_automorphism<G: Adjacency + ?Sized>(graph: &G, p: &Permutation) -> Result<bool> {
    if p.degree() != graph.order() {
        return Err(Error::DegreeMismatch { expected: graph.order(), found: p.degree() });
    }
    let preserves = (0..graph.order())
        .all(|a| graph.neighbors_of(a).iter().all(|&b| graph.has_edge(p.apply(a), p.apply(b))));
    Ok(preserves)
}
