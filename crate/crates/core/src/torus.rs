//! The rhomboidal C4C8 torus `TRC4C8(R)[m, n]`.
//!
//! Each of the `m * n` cells holds a square on four vertices of types
//! `0..=3` with edges `0-1`, `0-2`, `1-3`, `2-3`. Neighbouring cells are
//! joined by `0` to the type-`3` vertex one column to the right and by `1`
//! to the type-`2` vertex one row down, wrapping around in both directions.
//!
//! Labels are 1-based: `j` is the column in `1..=n`, `i` the row in `1..=m`.
//! Row arithmetic is modulo `m`, column arithmetic modulo `n`.
//!
//! Points are laid out as `((j - 1) * m + (i - 1)) * 4 + t`. Every export and
//! every permutation in this crate uses that layout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Adjacency;

/// Largest number of points `build_torus` will allocate by default.
pub const DEFAULT_POINT_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusParams {
    /// Rows; the row index `i` ranges over `1..=m`.
    pub m: usize,
    /// Columns; the column index `j` ranges over `1..=n`.
    pub n: usize,
}

impl TorusParams {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Parameter(format!("m and n must be at least 1, got m={m}, n={n}")));
        }
        Ok(TorusParams { m, n })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn order(&self) -> usize {
        4 * self.m * self.n
    }

    pub fn size(&self) -> usize {
        6 * self.m * self.n
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    /// `m = 1` or `n = 1`: wraparound edges land inside a single row or column.
    pub fn is_degenerate(&self) -> bool {
        self.m == 1 || self.n == 1
    }

    /// All vertices in flat-index order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.order()).map(move |p| self.decode(p).expect("index below order"))
    }

    pub fn encode(&self, v: VertexId) -> Result<usize> {
        encode_vertex(*self, v)
    }

    pub fn decode(&self, point: usize) -> Result<VertexId> {
        decode_vertex(*self, point)
    }

    /// Shifts a 1-based row label by `delta`, wrapping modulo `m`.
    pub fn wrap_row(&self, i: usize, delta: i64) -> usize {
        wrap(i, delta, self.m)
    }

    /// Shifts a 1-based column label by `delta`, wrapping modulo `n`.
    pub fn wrap_col(&self, j: usize, delta: i64) -> usize {
        wrap(j, delta, self.n)
    }
}

fn wrap(label: usize, delta: i64, modulus: usize) -> usize {
    let zero_based = (label as i64 - 1 + delta).rem_euclid(modulus as i64);
    zero_based as usize + 1
}

/// A torus vertex `v_{j,i}^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub j: usize,
    pub i: usize,
    pub t: u8,
}

impl VertexId {
    pub const fn new(j: usize, i: usize, t: u8) -> Self {
        VertexId { j, i, t }
    }

    fn check(&self, params: TorusParams) -> Result<()> {
        if !(1..=params.n).contains(&self.j) || !(1..=params.m).contains(&self.i) || self.t > 3 {
            return Err(Error::Range(format!(
                "vertex (j={}, i={}, t={}) outside [{},{}] torus",
                self.j, self.i, self.t, params.m, params.n
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v[{},{}]^{}", self.j, self.i, self.t)
    }
}

pub fn encode_vertex(params: TorusParams, v: VertexId) -> Result<usize> {
    v.check(params)?;
    Ok(((v.j - 1) * params.m + (v.i - 1)) * 4 + v.t as usize)
}

pub fn decode_vertex(params: TorusParams, point: usize) -> Result<VertexId> {
    if point >= params.order() {
        return Err(Error::Range(format!("point {point} outside 0..{}", params.order())));
    }
    let t = (point % 4) as u8;
    let cell = point / 4;
    Ok(VertexId { j: cell / params.m + 1, i: cell % params.m + 1, t })
}

/// The three neighbours of `v`, in the order type 3/2/1/0 lists them.
pub fn neighbors(params: TorusParams, v: VertexId) -> Result<[VertexId; 3]> {
    v.check(params)?;
    let VertexId { j, i, t } = v;
    let at = |j, i, t| VertexId { j, i, t };
    Ok(match t {
        3 => [at(params.wrap_col(j, -1), i, 0), at(j, i, 1), at(j, i, 2)],
        2 => [at(j, i, 3), at(j, params.wrap_row(i, -1), 1), at(j, i, 0)],
        1 => [at(j, i, 3), at(j, params.wrap_row(i, 1), 2), at(j, i, 0)],
        0 => [at(params.wrap_col(j, 1), i, 3), at(j, i, 2), at(j, i, 1)],
        _ => unreachable!("type checked above"),
    })
}

/// Immutable cubic adjacency over the `4mn` points of a torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusGraph {
    params: TorusParams,
    adjacency: Vec<[usize; 3]>,
}

pub fn build_torus(params: TorusParams) -> Result<TorusGraph> {
    build_torus_with_cap(params, DEFAULT_POINT_CAP)
}

pub fn build_torus_with_cap(params: TorusParams, cap: usize) -> Result<TorusGraph> {
    let params = TorusParams::new(params.m, params.n)?;
    let order = params.m.checked_mul(params.n).and_then(|c| c.checked_mul(4));
    let order = match order {
        Some(o) if o <= cap => o,
        _ => return Err(Error::Capacity { order: order.unwrap_or(usize::MAX), cap }),
    };
    let mut adjacency = Vec::with_capacity(order);
    for point in 0..order {
        let v = params.decode(point)?;
        let mut triple = [0usize; 3];
        for (slot, w) in triple.iter_mut().zip(neighbors(params, v)?) {
            *slot = params.encode(w)?;
        }
        triple.sort_unstable();
        adjacency.push(triple);
    }
    Ok(TorusGraph { params, adjacency })
}

impl TorusGraph {
    /// Wraps an arbitrary adjacency table without checking it. Intended for
    /// feeding damaged inputs to [`validate_torus`].
    pub fn from_raw_adjacency(params: TorusParams, mut adjacency: Vec<[usize; 3]>) -> Self {
        for triple in &mut adjacency {
            triple.sort_unstable();
        }
        TorusGraph { params, adjacency }
    }

    pub fn params(&self) -> TorusParams {
        self.params
    }

    pub fn adjacency(&self) -> &[[usize; 3]] {
        &self.adjacency
    }

    pub fn vertex(&self, point: usize) -> Result<VertexId> {
        self.params.decode(point)
    }

    pub fn point(&self, v: VertexId) -> Result<usize> {
        self.params.encode(v)
    }
}

impl Adjacency for TorusGraph {
    fn order(&self) -> usize {
        self.adjacency.len()
    }

    fn neighbors_of(&self, point: usize) -> &[usize] {
        &self.adjacency[point]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub params: TorusParams,
    pub order: usize,
    pub size: usize,
    pub order_ok: bool,
    pub size_ok: bool,
    pub cubic: bool,
    pub simple: bool,
    pub symmetric: bool,
    pub connected: bool,
    pub degenerate: bool,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.order_ok && self.size_ok && self.cubic && self.simple && self.symmetric && self.connected
    }
}

pub fn validate_torus(graph: &TorusGraph) -> ValidationReport {
    let params = graph.params;
    let order = graph.adjacency.len();
    let in_range = |p: usize| p < order;

    let mut simple = true;
    let mut cubic = true;
    let mut symmetric = true;
    let mut pairs = Vec::new();
    for (a, triple) in graph.adjacency.iter().enumerate() {
        let distinct = triple[0] != triple[1] && triple[1] != triple[2];
        if triple.contains(&a) || !distinct {
            simple = false;
        }
        if !distinct || !triple.iter().all(|&b| in_range(b)) {
            cubic = false;
        }
        for &b in triple {
            if !in_range(b) || !graph.adjacency[b].contains(&a) {
                symmetric = false;
            }
            if a != b {
                pairs.push((a.min(b), a.max(b)));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    // Connectivity follows out-lists from point 0, skipping dangling entries.
    let connected = if order == 0 {
        false
    } else {
        let mut seen = vec![false; order];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for &q in &graph.adjacency[p] {
                if in_range(q) && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen.iter().all(|&s| s)
    };

    ValidationReport {
        params,
        order,
        size: pairs.len(),
        order_ok: order == params.order(),
        size_ok: pairs.len() == params.size(),
        cubic,
        simple,
        symmetric,
        connected,
        degenerate: params.is_degenerate(),
    }
}
