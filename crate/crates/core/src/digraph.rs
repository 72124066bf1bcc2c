//! Cycle structure of the digraph with an edge `i -> j` iff `M_ij = 1`.
//!
//! Everything here works on the row masks directly. Reachability is the
//! bitset transitive closure, strongly connected components fall out of
//! mutual reachability, and no routine recurses.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{power, BitMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    /// A single vertex without a self-loop.
    Trivial,
    /// Exactly one directed cycle through all vertices (a self-loop counts).
    SimpleCycle,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// 1-based, ascending.
    #[serde(serialize_with = "crate::json::ints")]
    pub vertices: Vec<usize>,
    pub kind: ComponentKind,
}

/// Strongly connected components ordered by their smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<Component>,
    /// Component index of each vertex, 0-based vertex order.
    pub component_of: Vec<usize>,
    masks: Vec<u64>,
}

impl SccPartition {
    /// Vertex mask of component `c` (bit `v - 1` for vertex `v`).
    pub(crate) fn mask(&self, c: usize) -> u64 {
        self.masks[c]
    }
}

/// `reach[i]` has bit `j` set iff a path of length >= 1 leads from `i` to `j`
/// (0-based).
pub(crate) fn reach_masks(m: &BitMatrix) -> Vec<u64> {
    let mut reach = m.rows().to_vec();
    let n = m.size();
    for k in 0..n {
        let via = reach[k];
        for r in reach.iter_mut() {
            if *r >> k & 1 == 1 {
                *r |= via;
            }
        }
    }
    reach
}

pub(crate) fn mask_to_vertices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

fn check_index(m: &BitMatrix, i: usize) -> Result<()> {
    if (1..=m.size()).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, size: m.size() })
    }
}

pub fn sccs(m: &BitMatrix) -> SccPartition {
    let n = m.size();
    let reach = reach_masks(m);
    let rows = m.rows();
    let mut component_of = vec![usize::MAX; n];
    let mut components = Vec::new();
    let mut masks = Vec::new();
    for v in 0..n {
        if component_of[v] != usize::MAX {
            continue;
        }
        let mut mask = 1u64 << v;
        for u in 0..n {
            if u != v && reach[v] >> u & 1 == 1 && reach[u] >> v & 1 == 1 {
                mask |= 1u64 << u;
            }
        }
        let idx = components.len();
        let mut inner_edges = 0u32;
        let mut it = mask;
        while it != 0 {
            let u = it.trailing_zeros() as usize;
            component_of[u] = idx;
            inner_edges += (rows[u] & mask).count_ones();
            it &= it - 1;
        }
        let size = mask.count_ones();
        let kind = if inner_edges == 0 {
            ComponentKind::Trivial
        } else if inner_edges == size {
            ComponentKind::SimpleCycle
        } else {
            ComponentKind::Complex
        };
        components.push(Component { vertices: mask_to_vertices(mask), kind });
        masks.push(mask);
    }
    SccPartition { components, component_of, masks }
}

/// A vertex (1-based) carrying two distinct closed walks of some common
/// length, if any.
pub fn p2_witness(m: &BitMatrix) -> Option<usize> {
    let part = sccs(m);
    part.components.iter().enumerate().find(|(_, c)| c.kind == ComponentKind::Complex).map(|(idx, _)| {
        let mask = part.mask(idx);
        // some vertex of a complex component has two inner out-edges
        mask_to_vertices(mask)
            .into_iter()
            .find(|&v| (m.rows()[v - 1] & mask).count_ones() >= 2)
            .expect("complex component has a branching vertex")
    })
}

/// `(M^k)_ii <= 1` for every `i` and `k`, decided structurally: every
/// strongly connected component is trivial or a simple cycle.
pub fn satisfies_p2(m: &BitMatrix) -> bool {
    sccs(m).components.iter().all(|c| c.kind != ComponentKind::Complex)
}

pub fn check_p2(m: &BitMatrix) -> Result<()> {
    match p2_witness(m) {
        None => Ok(()),
        Some(vertex) => Err(Error::P2Violation { vertex }),
    }
}

/// Brute-force reading of P2: first `(k, i)` (1-based) with `k <= max_k`
/// and `(M^k)_ii >= 2`.
///
/// Powers use saturating `u64` arithmetic; saturation only ever happens
/// far above the threshold 2, so the answer is exact.
pub fn p2_power_oracle_witness(m: &BitMatrix, max_k: usize) -> Option<(usize, usize)> {
    let n = m.size();
    let base: Vec<u64> = (0..n * n).map(|idx| m.bit(idx / n, idx % n) as u64).collect();
    let mut acc = base.clone();
    for k in 1..=max_k {
        if k > 1 {
            let mut next = vec![0u64; n * n];
            for i in 0..n {
                for l in 0..n {
                    let a = acc[i * n + l];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let p = a.saturating_mul(base[l * n + j]);
                        next[i * n + j] = next[i * n + j].saturating_add(p);
                    }
                }
            }
            acc = next;
        }
        if let Some(i) = (0..n).find(|&i| acc[i * n + i] >= 2) {
            return Some((k, i + 1));
        }
    }
    None
}

pub fn p2_power_oracle(m: &BitMatrix, max_k: usize) -> bool {
    p2_power_oracle_witness(m, max_k).is_none()
}

/// The cycle through a vertex: its letter set and the periodic word read
/// from that vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    #[serde(serialize_with = "crate::json::ints")]
    pub vertices: Vec<usize>,
    #[serde(serialize_with = "crate::json::ints")]
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleStructure {
    /// Vertices lying on some cycle.
    #[serde(serialize_with = "crate::json::ints")]
    pub d_set: Vec<usize>,
    /// Present only when P2 holds.
    pub cycles: Option<BTreeMap<usize, Cycle>>,
    /// Cycle vertices whose cycle has no path to a vertex off every cycle.
    #[serde(serialize_with = "crate::json::opt_ints")]
    pub d0_set: Option<Vec<usize>>,
    /// Members of `d0_set` whose cycle also has no edge into another cycle.
    #[serde(serialize_with = "crate::json::opt_ints")]
    pub d00_set: Option<Vec<usize>>,
    pub sccs: Vec<Component>,
    #[serde(skip)]
    p2_witness: Option<usize>,
}

impl CycleStructure {
    pub fn cycles(&self) -> Result<&BTreeMap<usize, Cycle>> {
        self.cycles.as_ref().ok_or(Error::P2Violation { vertex: self.p2_witness.unwrap_or(0) })
    }

    pub fn d0_set(&self) -> Result<&[usize]> {
        self.cycles()?;
        Ok(self.d0_set.as_deref().unwrap_or_default())
    }

    pub fn d00_set(&self) -> Result<&[usize]> {
        self.cycles()?;
        Ok(self.d00_set.as_deref().unwrap_or_default())
    }
}

/// Mask of vertices lying on some cycle.
pub(crate) fn d_mask(part: &SccPartition) -> u64 {
    part.components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind != ComponentKind::Trivial)
        .fold(0u64, |acc, (idx, _)| acc | part.mask(idx))
}

/// Walks the unique inner successor from `start` (0-based) around its
/// simple-cycle component; returns 1-based letters.
pub(crate) fn cycle_word(m: &BitMatrix, comp_mask: u64, start: usize) -> Vec<usize> {
    let mut word = vec![start + 1];
    let mut v = start;
    loop {
        let next = (m.rows()[v] & comp_mask).trailing_zeros() as usize;
        if next == start {
            return word;
        }
        word.push(next + 1);
        v = next;
    }
}

pub fn cycle_structure(m: &BitMatrix) -> CycleStructure {
    let part = sccs(m);
    let d = d_mask(&part);
    let d_set = mask_to_vertices(d);
    let witness = p2_witness(m);
    if witness.is_some() {
        return CycleStructure {
            d_set,
            cycles: None,
            d0_set: None,
            d00_set: None,
            sccs: part.components,
            p2_witness: witness,
        };
    }

    let reach = reach_masks(m);
    let rows = m.rows();
    let mut cycles = BTreeMap::new();
    let mut d0 = Vec::new();
    let mut d00 = Vec::new();
    for &i in &d_set {
        let c = part.component_of[i - 1];
        let cmask = part.mask(c);
        cycles.insert(i, Cycle { vertices: mask_to_vertices(cmask), word: cycle_word(m, cmask, i - 1) });
        let members = mask_to_vertices(cmask);
        let closed = members.iter().all(|&j| reach[j - 1] & !d == 0);
        if closed {
            d0.push(i);
            let isolated = members.iter().all(|&j| rows[j - 1] & d & !cmask == 0);
            if isolated {
                d00.push(i);
            }
        }
    }
    CycleStructure {
        d_set,
        cycles: Some(cycles),
        d0_set: Some(d0),
        d00_set: Some(d00),
        sccs: part.components,
        p2_witness: None,
    }
}

/// Vertices reachable from `i` by a path of length >= 1 (1-based).
pub fn reachable_from(m: &BitMatrix, i: usize) -> Result<Vec<usize>> {
    check_index(m, i)?;
    Ok(mask_to_vertices(reach_masks(m)[i - 1]))
}

/// `M^b = 0`.
pub fn is_nilpotent(m: &BitMatrix) -> bool {
    if m.size() == 0 {
        return true;
    }
    power(m, m.size()).map(|p| p.is_zero()).unwrap_or(true)
}
