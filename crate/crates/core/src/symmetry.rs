//! The four symmetries of the torus and their verification.
//!
//! * `g1`: `(j, i, t) -> (j, i - 1, t)`, a row shift.
//! * `g2`: `(j, i, t) -> (j + 1, i, t)`, a column shift.
//! * `g3`: `(j, i, t) -> (i, j, t')` with types `3 <-> 2`, `1 <-> 0`.
//! * `g4`: `(j, i, t) -> (n - j + 1, n - i + 1, 3 - t)`.
//!
//! `g3` and `g4` exist only on square tori `[n, n]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{closure, intersect, is_automorphism, is_normal, is_regular_action, PermGroup, Permutation, DEFAULT_ELEMENT_CAP};
use crate::torus::{build_torus, TorusGraph, TorusParams, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    G1,
    G2,
    G3,
    G4,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::G1, Generator::G2, Generator::G3, Generator::G4];

    pub fn index(self) -> u8 {
        match self {
            Generator::G1 => 1,
            Generator::G2 => 2,
            Generator::G3 => 3,
            Generator::G4 => 4,
        }
    }

    /// Image of a single vertex; `g3`/`g4` require `m == n`.
    pub fn map_vertex(self, params: TorusParams, v: VertexId) -> Result<VertexId> {
        let VertexId { j, i, t } = v;
        let n = params.n;
        match self {
            Generator::G1 => Ok(VertexId::new(j, params.wrap_row(i, -1), t)),
            Generator::G2 => Ok(VertexId::new(params.wrap_col(j, 1), i, t)),
            Generator::G3 | Generator::G4 if !params.is_square() => {
                Err(Error::Shape { generator: self.index(), m: params.m, n: params.n })
            }
            Generator::G3 => {
                let swapped = match t {
                    3 => 2,
                    2 => 3,
                    1 => 0,
                    _ => 1,
                };
                Ok(VertexId::new(i, j, swapped))
            }
            Generator::G4 => Ok(VertexId::new(n - j + 1, n - i + 1, 3 - t)),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.index())
    }
}

fn generator_permutation(graph: &TorusGraph, gen: Generator) -> Result<Permutation> {
    let params = graph.params();
    let images = params
        .vertices()
        .map(|v| gen.map_vertex(params, v).and_then(|w| params.encode(w)))
        .collect::<Result<Vec<_>>>()?;
    let p = Permutation::from_images(images)
        .map_err(|_| Error::Consistency(format!("{gen} is not a bijection on [{},{}]", params.m, params.n)))?;
    if !is_automorphism(graph, &p)? {
        return Err(Error::Consistency(format!("{gen} is not an automorphism of [{},{}]", params.m, params.n)));
    }
    Ok(p)
}

#[derive(Debug, Clone)]
pub struct GeneratorSet {
    params: TorusParams,
    graph: TorusGraph,
    g1: Permutation,
    g2: Permutation,
    g3: Option<Permutation>,
    g4: Option<Permutation>,
}

/// Builds every generator defined for `params`; each is checked to be an
/// automorphism before it is returned.
pub fn make_generators(params: TorusParams) -> Result<GeneratorSet> {
    let graph = build_torus(params)?;
    let square = params.is_square();
    Ok(GeneratorSet {
        params,
        g1: generator_permutation(&graph, Generator::G1)?,
        g2: generator_permutation(&graph, Generator::G2)?,
        g3: square.then(|| generator_permutation(&graph, Generator::G3)).transpose()?,
        g4: square.then(|| generator_permutation(&graph, Generator::G4)).transpose()?,
        graph,
    })
}

impl GeneratorSet {
    pub fn params(&self) -> TorusParams {
        self.params
    }

    pub fn graph(&self) -> &TorusGraph {
        &self.graph
    }

    pub fn degree(&self) -> usize {
        self.params.order()
    }

    pub fn get(&self, gen: Generator) -> Result<&Permutation> {
        let shape = || Error::Shape { generator: gen.index(), m: self.params.m, n: self.params.n };
        match gen {
            Generator::G1 => Ok(&self.g1),
            Generator::G2 => Ok(&self.g2),
            Generator::G3 => self.g3.as_ref().ok_or_else(shape),
            Generator::G4 => self.g4.as_ref().ok_or_else(shape),
        }
    }

    /// Present generators in index order.
    pub fn present(&self) -> Vec<(Generator, &Permutation)> {
        Generator::ALL.into_iter().filter_map(|g| self.get(g).ok().map(|p| (g, p))).collect()
    }

    pub fn all(&self) -> Vec<Permutation> {
        self.present().into_iter().map(|(_, p)| p.clone()).collect()
    }
}

/// A product `g_{a1}^{e1} g_{a2}^{e2} ...`, evaluated right to left.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupWord {
    pub factors: Vec<(Generator, i64)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    /// Builds a word, dropping zero exponents.
    pub fn new(factors: impl IntoIterator<Item = (Generator, i64)>) -> Self {
        GroupWord { factors: factors.into_iter().filter(|&(_, e)| e != 0).collect() }
    }

    pub fn is_identity_word(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord { factors: self.factors.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// `self * other`: `other` acts first.
    pub fn then_after(&self, other: &GroupWord) -> Self {
        GroupWord::new(self.factors.iter().chain(&other.factors).copied())
    }

    pub fn evaluate(&self, gens: &GeneratorSet) -> Result<Permutation> {
        let mut acc = Permutation::identity(gens.degree());
        for &(g, e) in &self.factors {
            acc = acc.compose(&gens.get(g)?.pow(e))?;
        }
        Ok(acc)
    }

    /// Image of a single point, walking factors from the right.
    pub fn apply_to_point(&self, gens: &GeneratorSet, point: usize) -> Result<usize> {
        let mut x = point;
        for &(g, e) in self.factors.iter().rev() {
            let p = gens.get(g)?;
            if e >= 0 {
                for _ in 0..e {
                    x = p.apply(x);
                }
            } else {
                for _ in 0..e.unsigned_abs() {
                    // Inverse step: search the preimage along the cycle.
                    let mut y = x;
                    while p.apply(y) != x {
                        y = p.apply(y);
                    }
                    x = y;
                }
            }
        }
        Ok(x)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(g, e)| if e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub n: usize,
    pub relations: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }
}

/// The nine defining relations as `(label, lhs, rhs)` on `[n, n]`.
pub fn relation_words(n: usize) -> Vec<(&'static str, GroupWord, GroupWord)> {
    use Generator::*;
    let n = n as i64;
    let w = |f: &[(Generator, i64)]| GroupWord::new(f.iter().copied());
    let one = GroupWord::identity();
    vec![
        ("g1^n = 1", w(&[(G1, n)]), one.clone()),
        ("g2^n = 1", w(&[(G2, n)]), one.clone()),
        ("g3^2 = 1", w(&[(G3, 2)]), one.clone()),
        ("g4^2 = 1", w(&[(G4, 2)]), one),
        ("g1*g2 = g2*g1", w(&[(G1, 1), (G2, 1)]), w(&[(G2, 1), (G1, 1)])),
        ("g3*g4 = g4*g3", w(&[(G3, 1), (G4, 1)]), w(&[(G4, 1), (G3, 1)])),
        ("g1*g4 = g4*g1^-1", w(&[(G1, 1), (G4, 1)]), w(&[(G4, 1), (G1, -1)])),
        ("g2*g4 = g4*g2^-1", w(&[(G2, 1), (G4, 1)]), w(&[(G4, 1), (G2, -1)])),
        ("g2*g3 = g3*g1^-1", w(&[(G2, 1), (G3, 1)]), w(&[(G3, 1), (G1, -1)])),
    ]
}

pub fn verify_relations(n: usize) -> Result<RelationReport> {
    let gens = make_generators(TorusParams::square(n)?)?;
    verify_relations_with(&gens)
}

pub fn verify_relations_with(gens: &GeneratorSet) -> Result<RelationReport> {
    let n = gens.params().n;
    let relations = relation_words(n)
        .into_iter()
        .map(|(label, lhs, rhs)| {
            Ok(RelationCheck { relation: label.to_string(), holds: lhs.evaluate(gens)? == rhs.evaluate(gens)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationReport { n, relations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub h_order: usize,
    pub k_order: usize,
    pub g_order: usize,
    /// `H = <g1, g2>` is abelian, `g1` and `g2` both have order `n` and
    /// `<g1> ∩ <g2>` is trivial, so `H = <g1> x <g2>`.
    pub h_is_cn_x_cn: bool,
    pub k_abelian: bool,
    /// Every non-identity element of `K` is an involution.
    pub k_elementary_abelian: bool,
    pub k_type: String,
    pub h_normal: bool,
    pub k_normal: bool,
    pub intersection_order: usize,
    pub product_order_matches: bool,
    /// Each element of `G` factors as `hk` in exactly one way.
    pub unique_factorization: bool,
}

impl StructureReport {
    pub fn is_semidirect(&self) -> bool {
        self.h_normal && self.intersection_order == 1 && self.product_order_matches && self.unique_factorization
    }
}

pub struct SubgroupTriple {
    pub h: PermGroup,
    pub k: PermGroup,
    pub g: PermGroup,
}

/// Materialises `H = <g1, g2>`, `K = <g3, g4>` and `G = <g1, g2, g3, g4>`.
pub fn subgroups(gens: &GeneratorSet, cap: usize) -> Result<SubgroupTriple> {
    use Generator::*;
    let pick = |list: &[Generator]| list.iter().map(|&g| gens.get(g).cloned()).collect::<Result<Vec<_>>>();
    Ok(SubgroupTriple {
        h: closure(&pick(&[G1, G2])?, cap)?,
        k: closure(&pick(&[G3, G4])?, cap)?,
        g: closure(&pick(&[G1, G2, G3, G4])?, cap)?,
    })
}

pub fn verify_group_structure(n: usize) -> Result<StructureReport> {
    let gens = make_generators(TorusParams::square(n)?)?;
    verify_group_structure_with(&gens, DEFAULT_ELEMENT_CAP)
}

pub fn verify_group_structure_with(gens: &GeneratorSet, cap: usize) -> Result<StructureReport> {
    let n = gens.params().n;
    let SubgroupTriple { h, k, g } = subgroups(gens, cap)?;
    let g1 = gens.get(Generator::G1)?;
    let g2 = gens.get(Generator::G2)?;
    let cyclic_meet = intersect(&closure(&[g1.clone()], cap)?, &closure(&[g2.clone()], cap)?)?;
    let h_is_cn_x_cn = h.is_abelian()
        && g1.order() == n
        && g2.order() == n
        && cyclic_meet.order() == 1
        && h.order() == n * n;

    let mut factor_counts = vec![0usize; g.order()];
    for a in h.elements() {
        for b in k.elements() {
            if let Some(pos) = g.position(&a.compose(b)?) {
                factor_counts[pos] += 1;
            }
        }
    }

    Ok(StructureReport {
        n,
        h_order: h.order(),
        k_order: k.order(),
        g_order: g.order(),
        h_is_cn_x_cn,
        k_abelian: k.is_abelian(),
        k_elementary_abelian: k.is_abelian() && k.elements().iter().all(|p| p.is_identity() || p.order() == 2),
        k_type: k.structure_description(),
        h_normal: is_normal(&h, &g)?,
        k_normal: is_normal(&k, &g)?,
        intersection_order: intersect(&h, &k)?.order(),
        product_order_matches: h.order() * k.order() == g.order(),
        unique_factorization: factor_counts.iter().all(|&c| c == 1),
    })
}

/// Same-type and the six listed mixed-type words. `None` for the remaining
/// ordered type pairs, which are obtained by inverting the reverse pair.
fn direct_word(v: VertexId, w: VertexId) -> Option<GroupWord> {
    use Generator::*;
    let (j, i) = (v.j as i64, v.i as i64);
    let (jp, ip) = (w.j as i64, w.i as i64);
    let shift = |a: i64, b: i64, tail: &[Generator]| {
        GroupWord::new([(G1, a), (G2, b)].into_iter().chain(tail.iter().map(|&g| (g, 1))))
    };
    let word = match (v.t, w.t) {
        (s, t) if s == t => shift(i - ip, jp - j, &[]),
        (3, 2) | (1, 0) => shift(j - ip, jp - i, &[G3]),
        (3, 0) | (2, 1) => shift(-ip - i + 1, jp + j - 1, &[G4]),
        (3, 1) => shift(-ip - j + 1, jp + i - 1, &[G3, G4]),
        (2, 0) => shift(-ip - j + 1, jp + i - 1, &[G4, G3]),
        _ => return None,
    };
    Some(word)
}

/// A word over the generators carrying `v` to `w` on `[n, n]`.
pub fn transport(n: usize, v: VertexId, w: VertexId) -> Result<GroupWord> {
    let gens = make_generators(TorusParams::square(n)?)?;
    transport_with(&gens, v, w)
}

pub fn transport_with(gens: &GeneratorSet, v: VertexId, w: VertexId) -> Result<GroupWord> {
    let params = gens.params();
    if !params.is_square() {
        return Err(Error::Shape { generator: 3, m: params.m, n: params.n });
    }
    let from = params.encode(v)?;
    let to = params.encode(w)?;
    let word = match direct_word(v, w) {
        Some(word) => word,
        None => direct_word(w, v)
            .ok_or_else(|| Error::Consistency(format!("no transport word for types {} -> {}", v.t, w.t)))?
            .inverse(),
    };
    let landed = word.apply_to_point(gens, from)?;
    if landed != to {
        return Err(Error::Consistency(format!(
            "transport word {word} sends {v} to {} instead of {w}",
            params.decode(landed)?
        )));
    }
    Ok(word)
}

/// Stabiliser order of every point under `G = <g1, g2, g3, g4>`.
pub fn stabilizers_trivial(group: &PermGroup) -> bool {
    is_regular_action(group).stabilizer_trivial
        && (0..group.degree()).all(|p| group.stabilizer_order(p) == 1)
}
