//! Ribbon graphs as rotation systems on half-edges.
//!
//! A graph is a set of half-edges `0..h`, a fixed-point-free pairing
//! involution (each orbit is an edge) and a partition of the half-edges into
//! vertices, each carrying the clockwise cyclic order of its half-edges and a
//! `+`/`-` color. Faces are the orbits of `pairing . rotation`; that single
//! convention fixes every face-dependent computation downstream (genus, cut
//! edges, label solving).

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ring::Sign;

/// One vertex: its color and its incident half-edges in clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub color: Sign,
    pub half_edges: Vec<usize>,
}

/// A ribbon graph. Construction never validates; [`RibbonGraph::validate`]
/// reports everything wrong at once so file-level tooling can show all
/// problems in one pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    vertices: Vec<Vertex>,
    pairing: Vec<usize>,
    half_edge_names: Vec<String>,
    vertex_names: Vec<String>,
}

/// A problem reported by [`RibbonGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("half-edge {half_edge} is out of range (have {count} half-edges)")]
    HalfEdgeOutOfRange { half_edge: usize, count: usize },
    #[error("half-edge {half_edge} appears in more than one rotation slot")]
    DuplicateHalfEdge { half_edge: usize },
    #[error("half-edge {half_edge} is paired but missing from every vertex")]
    MissingHalfEdge { half_edge: usize },
    #[error("pairing is not an involution at half-edge {half_edge}")]
    PairingNotInvolutive { half_edge: usize },
    #[error("pairing fixes half-edge {half_edge}; an edge needs two distinct half-edges")]
    PairingHasFixedPoint { half_edge: usize },
    #[error("vertex {vertex} has valence {valence}, expected 3")]
    NotTrivalent { vertex: usize, valence: usize },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
}

/// Counts derived from a structurally sound graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphInvariants {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub euler_characteristic: i64,
    pub genus: i64,
    pub positive_vertices: usize,
    pub negative_vertices: usize,
    /// Winding number `(P - N) / 2`.
    pub winding: i64,
    pub plus_plus_edges: usize,
    pub minus_minus_edges: usize,
    pub mixed_edges: usize,
}

impl RibbonGraph {
    /// Assemble a graph from vertices (clockwise half-edge cycles) and the
    /// pairing involution `pairing[h] = h'`. Names default to `h0..`/`v0..`.
    pub fn new(vertices: Vec<Vertex>, pairing: Vec<usize>) -> Self {
        let half_edge_names = (0..pairing.len()).map(|h| format!("h{h}")).collect();
        let vertex_names = (0..vertices.len()).map(|v| format!("v{v}")).collect();
        RibbonGraph { vertices, pairing, half_edge_names, vertex_names }
    }

    /// Same graph with caller-supplied display names.
    pub fn with_names(mut self, vertex_names: Vec<String>, half_edge_names: Vec<String>) -> Self {
        assert_eq!(vertex_names.len(), self.vertices.len());
        assert_eq!(half_edge_names.len(), self.pairing.len());
        self.vertex_names = vertex_names;
        self.half_edge_names = half_edge_names;
        self
    }

    pub fn half_edge_count(&self) -> usize {
        self.pairing.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn pairing(&self, h: usize) -> usize {
        self.pairing[h]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn half_edge_name(&self, h: usize) -> &str {
        &self.half_edge_names[h]
    }

    pub fn color(&self, v: usize) -> Sign {
        self.vertices[v].color
    }

    /// Map each half-edge to its vertex; only meaningful when sound.
    pub fn vertex_of(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.half_edge_count()];
        for (v, vertex) in self.vertices.iter().enumerate() {
            for &h in &vertex.half_edges {
                if h < owner.len() {
                    owner[h] = v;
                }
            }
        }
        owner
    }

    /// Clockwise successor of each half-edge around its vertex.
    pub fn rotation(&self) -> Vec<usize> {
        let mut rot = vec![usize::MAX; self.half_edge_count()];
        for vertex in &self.vertices {
            let k = vertex.half_edges.len();
            for (i, &h) in vertex.half_edges.iter().enumerate() {
                if h < rot.len() {
                    rot[h] = vertex.half_edges[(i + 1) % k];
                }
            }
        }
        rot
    }

    /// Edges as pairs `(h, pairing[h])` with `h < pairing[h]`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.half_edge_count())
            .filter(|&h| h < self.pairing[h])
            .map(|h| (h, self.pairing[h]))
            .collect()
    }

    /// Report every structural, valence and connectivity problem.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = vec![];
        let count = self.half_edge_count();
        let mut seen = vec![0usize; count];
        for vertex in &self.vertices {
            for &h in &vertex.half_edges {
                if h >= count {
                    out.push(Violation::HalfEdgeOutOfRange { half_edge: h, count });
                } else {
                    seen[h] += 1;
                }
            }
        }
        for (h, &n) in seen.iter().enumerate() {
            if n == 0 {
                out.push(Violation::MissingHalfEdge { half_edge: h });
            } else if n > 1 {
                out.push(Violation::DuplicateHalfEdge { half_edge: h });
            }
        }
        for h in 0..count {
            let p = self.pairing[h];
            if p >= count {
                out.push(Violation::HalfEdgeOutOfRange { half_edge: p, count });
            } else if p == h {
                out.push(Violation::PairingHasFixedPoint { half_edge: h });
            } else if self.pairing[p] != h {
                out.push(Violation::PairingNotInvolutive { half_edge: h });
            }
        }
        for (v, vertex) in self.vertices.iter().enumerate() {
            if vertex.half_edges.len() != 3 {
                out.push(Violation::NotTrivalent { vertex: v, valence: vertex.half_edges.len() });
            }
        }
        if out.is_empty() {
            let components = self.component_count();
            if components != 1 {
                out.push(Violation::Disconnected { components });
            }
        }
        out
    }

    /// True when everything except trivalence and connectivity holds; the
    /// face/genus machinery only needs this much.
    pub fn structurally_sound(&self) -> bool {
        !self.validate().iter().any(|v| {
            !matches!(v, Violation::NotTrivalent { .. } | Violation::Disconnected { .. })
        })
    }

    fn component_count(&self) -> usize {
        let count = self.half_edge_count();
        if count == 0 {
            return self.vertices.len();
        }
        let rot = self.rotation();
        let mut comp = vec![usize::MAX; count];
        let mut components = 0;
        for start in 0..count {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = components;
            while let Some(h) = stack.pop() {
                for next in [rot[h], self.pairing[h]] {
                    if comp[next] == usize::MAX {
                        comp[next] = components;
                        stack.push(next);
                    }
                }
            }
            components += 1;
        }
        components
    }

    /// Faces: the orbits of `pairing . rotation`, each starting at its
    /// smallest half-edge, listed in ascending order of that half-edge.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        assert!(self.structurally_sound(), "faces need a structurally sound graph");
        let rot = self.rotation();
        let mut visited = vec![false; self.half_edge_count()];
        let mut faces = vec![];
        for start in 0..self.half_edge_count() {
            if visited[start] {
                continue;
            }
            let mut orbit = vec![];
            let mut h = start;
            while !visited[h] {
                visited[h] = true;
                orbit.push(h);
                h = self.pairing[rot[h]];
            }
            faces.push(orbit);
        }
        faces
    }

    /// Map each half-edge to the index of its face in [`RibbonGraph::faces`].
    pub fn face_of(&self) -> Vec<usize> {
        let faces = self.faces();
        let mut owner = vec![usize::MAX; self.half_edge_count()];
        for (i, face) in faces.iter().enumerate() {
            for &h in face {
                owner[h] = i;
            }
        }
        owner
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertex_count() as i64;
        let e = (self.half_edge_count() / 2) as i64;
        let f = self.faces().len() as i64;
        v - e + f
    }

    /// Genus of the closed oriented surface the graph fattens into.
    pub fn genus(&self) -> i64 {
        let chi = self.euler_characteristic();
        debug_assert!(chi % 2 == 0);
        (2 - chi) / 2
    }

    /// Full invariant census; requires a bicolored graph with `P - N` even
    /// (always true for connected trivalent graphs, which have evenly many
    /// vertices... the winding number is half of `P - N`).
    pub fn invariants(&self) -> GraphInvariants {
        let positives = self.vertices.iter().filter(|v| v.color == Sign::Plus).count();
        let negatives = self.vertices.len() - positives;
        let p_minus_n = positives as i64 - negatives as i64;
        assert!(p_minus_n % 2 == 0, "winding number needs P - N even");
        let owner = self.vertex_of();
        let mut plus_plus = 0;
        let mut minus_minus = 0;
        let mut mixed = 0;
        for (a, b) in self.edges() {
            match (self.vertices[owner[a]].color, self.vertices[owner[b]].color) {
                (Sign::Plus, Sign::Plus) => plus_plus += 1,
                (Sign::Minus, Sign::Minus) => minus_minus += 1,
                _ => mixed += 1,
            }
        }
        GraphInvariants {
            vertex_count: self.vertex_count(),
            edge_count: self.half_edge_count() / 2,
            face_count: self.faces().len(),
            euler_characteristic: self.euler_characteristic(),
            genus: self.genus(),
            positive_vertices: positives,
            negative_vertices: negatives,
            winding: p_minus_n / 2,
            plus_plus_edges: plus_plus,
            minus_minus_edges: minus_minus,
            mixed_edges: mixed,
        }
    }

    pub fn winding(&self) -> i64 {
        self.invariants().winding
    }

    /// Mirror image: every rotation cycle reversed, colors kept.
    pub fn mirror(&self) -> RibbonGraph {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                color: v.color,
                half_edges: v.half_edges.iter().rev().copied().collect(),
            })
            .collect();
        RibbonGraph {
            vertices,
            pairing: self.pairing.clone(),
            half_edge_names: self.half_edge_names.clone(),
            vertex_names: self.vertex_names.clone(),
        }
    }

    /// Same graph with every vertex color replaced.
    pub fn recolored(&self, colors: Vec<Sign>) -> RibbonGraph {
        assert_eq!(colors.len(), self.vertices.len());
        let mut out = self.clone();
        for (vertex, color) in out.vertices.iter_mut().zip(colors) {
            vertex.color = color;
        }
        out
    }

    /// Mirror image with all colors flipped: the partner construction that
    /// pairs a graph of winding `w` with one of winding `-w`.
    pub fn mirror_recolored(&self) -> RibbonGraph {
        let mut out = self.mirror();
        for vertex in out.vertices.iter_mut() {
            vertex.color = vertex.color.flip();
        }
        out
    }

    /// Seeded random connected trivalent bicolored graph on `vertex_count`
    /// vertices (must be even and at least 2). Deterministic per seed.
    pub fn random(vertex_count: usize, seed: u64) -> RibbonGraph {
        assert!(
            vertex_count >= 2 && vertex_count % 2 == 0,
            "trivalent graphs need an even vertex count >= 2"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = 3 * vertex_count;
        loop {
            let mut shuffled: Vec<usize> = (0..h).collect();
            shuffled.shuffle(&mut rng);
            let mut pairing = vec![0usize; h];
            for pair in shuffled.chunks(2) {
                pairing[pair[0]] = pair[1];
                pairing[pair[1]] = pair[0];
            }
            let vertices = (0..vertex_count)
                .map(|v| {
                    let mut half_edges = vec![3 * v, 3 * v + 1, 3 * v + 2];
                    half_edges.shuffle(&mut rng);
                    let color = if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
                    Vertex { color, half_edges }
                })
                .collect();
            let graph = RibbonGraph::new(vertices, pairing);
            if graph.validate().is_empty() {
                return graph;
            }
        }
    }

    /// Convenience for tests: find the edge joining two named vertices
    /// (first match in half-edge order).
    pub fn edge_between(&self, va: &str, vb: &str) -> Option<(usize, usize)> {
        let owner = self.vertex_of();
        let name_to_index: HashMap<&str, usize> = self
            .vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let a = *name_to_index.get(va)?;
        let b = *name_to_index.get(vb)?;
        self.edges()
            .into_iter()
            .find(|&(h1, h2)| {
                (owner[h1] == a && owner[h2] == b) || (owner[h1] == b && owner[h2] == a)
            })
    }
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, vertex) in self.vertices.iter().enumerate() {
            write!(f, "vertex {} {} :", self.vertex_names[i], vertex.color)?;
            for &h in &vertex.half_edges {
                write!(f, " {}", self.half_edge_names[h])?;
            }
            writeln!(f)?;
        }
        for (a, b) in self.edges() {
            writeln!(f, "edge {} - {}", self.half_edge_names[a], self.half_edge_names[b])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn theta_graph_census() {
        let g = samples::theta();
        assert!(g.validate().is_empty());
        let inv = g.invariants();
        assert_eq!(
            (inv.vertex_count, inv.edge_count, inv.face_count),
            (2, 3, 3)
        );
        assert_eq!(inv.euler_characteristic, 2);
        assert_eq!(inv.genus, 0);
        assert_eq!(inv.winding, 1);
        assert_eq!(inv.plus_plus_edges, 3);
        // faces partition the half-edges
        let total: usize = g.faces().iter().map(Vec::len).sum();
        assert_eq!(total, g.half_edge_count());
    }

    #[test]
    fn twisted_theta_has_one_face() {
        let g = samples::theta_one_face();
        assert!(g.validate().is_empty());
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.euler_characteristic(), 0);
        assert_eq!(g.genus(), 1);
    }

    #[test]
    fn mixed_theta_has_zero_winding() {
        let g = samples::theta_mixed();
        let inv = g.invariants();
        assert_eq!(inv.winding, 0);
        assert_eq!(inv.mixed_edges, 3);
    }

    #[test]
    fn general_position_example_two_faces() {
        // 3 vertices (valences 4, 3, 3), 5 edges, 2 faces: chi = 0, genus 1.
        let g = samples::fatgraph();
        assert!(g.structurally_sound());
        assert!(g
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::NotTrivalent { valence: 4, .. })));
        assert_eq!(g.faces().len(), 2);
        assert_eq!(g.euler_characteristic(), 0);
        assert_eq!(g.genus(), 1);
    }

    #[test]
    fn mirror_is_an_involution() {
        let theta = samples::theta();
        assert_eq!(theta.mirror().mirror(), theta);
        for seed in 0..5 {
            let g = RibbonGraph::random(6, seed);
            assert_eq!(g.mirror().mirror(), g);
            // mirroring preserves the face count (orientation reversal)
            assert_eq!(g.mirror().faces().len(), g.faces().len());
        }
    }

    #[test]
    fn mirror_recolored_negates_winding() {
        let g = samples::prism();
        assert_eq!(g.winding(), 3);
        assert_eq!(g.mirror_recolored().winding(), -3);
        for seed in 0..5 {
            let g = RibbonGraph::random(4, seed);
            assert_eq!(g.mirror_recolored().winding(), -g.winding());
        }
    }

    #[test]
    fn validation_reports_problems() {
        // four half-edges on one vertex
        let g = RibbonGraph::new(
            vec![
                Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2, 3] },
                Vertex { color: Sign::Plus, half_edges: vec![4, 5] },
            ],
            vec![4, 5, 3, 2, 0, 1],
        );
        let violations = g.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::NotTrivalent { vertex: 0, valence: 4 })));

        // fixed point in the pairing
        let g = RibbonGraph::new(
            vec![Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2] }],
            vec![0, 2, 1],
        );
        assert!(g
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::PairingHasFixedPoint { half_edge: 0 })));

        // non-involutive pairing
        let g = RibbonGraph::new(
            vec![Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2] }],
            vec![1, 2, 0],
        );
        assert!(g
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::PairingNotInvolutive { .. })));

        // two disjoint theta graphs
        let theta = samples::theta();
        let mut vertices = theta.vertices().to_vec();
        for v in theta.vertices() {
            vertices.push(Vertex {
                color: v.color,
                half_edges: v.half_edges.iter().map(|h| h + 6).collect(),
            });
        }
        let mut pairing: Vec<usize> = (0..6).map(|h| theta.pairing(h)).collect();
        pairing.extend((0..6).map(|h| theta.pairing(h) + 6));
        let g = RibbonGraph::new(vertices, pairing);
        assert_eq!(
            g.validate(),
            vec![Violation::Disconnected { components: 2 }]
        );

        // missing and duplicated half-edges
        let g = RibbonGraph::new(
            vec![Vertex { color: Sign::Plus, half_edges: vec![0, 1, 1] }],
            vec![1, 0, 2],
        );
        let violations = g.validate();
        assert!(violations.iter().any(|v| matches!(v, Violation::DuplicateHalfEdge { half_edge: 1 })));
        assert!(violations.iter().any(|v| matches!(v, Violation::MissingHalfEdge { half_edge: 2 })));
        assert!(violations.iter().any(|v| matches!(v, Violation::PairingHasFixedPoint { half_edge: 2 })));
    }

    #[test]
    fn random_graphs_are_valid_and_deterministic() {
        for seed in 0..10 {
            let g = RibbonGraph::random(6, seed);
            assert!(g.validate().is_empty(), "seed {seed}");
            assert_eq!(g, RibbonGraph::random(6, seed));
        }
        // seeds differ somewhere
        assert_ne!(RibbonGraph::random(6, 0), RibbonGraph::random(6, 1));
    }
}
