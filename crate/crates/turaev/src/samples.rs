//! Small fixture graphs used across the test suites and the documentation.
//!
//! Every rotation cycle is listed clockwise; faces come out of
//! `pairing . rotation` as described in [`crate::ribbon`].

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ribbon::{RibbonGraph, Vertex};
use crate::ring::{euler_phi, Cyclotomic, Sign};
use crate::torsion::{ChainComplex, CycField, Matrix};

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// Theta graph: two positive vertices joined by three edges, embedded in the
/// sphere (3 faces), winding number 1.
pub fn theta() -> RibbonGraph {
    let vertices = vec![
        Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2] },
        Vertex { color: Sign::Plus, half_edges: vec![3, 4, 5] },
    ];
    // a-d, b-f, c-e
    let pairing = vec![3, 5, 4, 0, 2, 1];
    RibbonGraph::new(vertices, pairing).with_names(
        vec!["v1".into(), "v2".into()],
        vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into(), "f".into()],
    )
}

/// Theta graph with one vertex of each color: winding number 0.
pub fn theta_mixed() -> RibbonGraph {
    let g = theta();
    g.recolored(vec![Sign::Plus, Sign::Minus])
}

/// The other embedding of the theta graph: pairing the cycles in the same
/// order yields a single face, so the surface is a torus and every edge has
/// both sides on that one face (no valid cut edge anywhere).
pub fn theta_one_face() -> RibbonGraph {
    let vertices = vec![
        Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2] },
        Vertex { color: Sign::Plus, half_edges: vec![3, 4, 5] },
    ];
    let pairing = vec![3, 4, 5, 0, 1, 2];
    RibbonGraph::new(vertices, pairing)
}

/// Triangular prism, all vertices positive: two nested triangles joined by
/// three spokes, drawn in the sphere (5 faces), winding number 3.
pub fn prism() -> RibbonGraph {
    let vertices = vec![
        // outer triangle t0, t1, t2 (clockwise), spokes pointing inward
        Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2] },
        Vertex { color: Sign::Plus, half_edges: vec![3, 4, 5] },
        Vertex { color: Sign::Plus, half_edges: vec![6, 7, 8] },
        // inner triangle b0, b1, b2
        Vertex { color: Sign::Plus, half_edges: vec![9, 10, 11] },
        Vertex { color: Sign::Plus, half_edges: vec![12, 13, 14] },
        Vertex { color: Sign::Plus, half_edges: vec![15, 16, 17] },
    ];
    let pairing = vec![5, 9, 6, 8, 12, 0, 2, 15, 3, 1, 14, 16, 4, 17, 10, 7, 11, 13];
    RibbonGraph::new(vertices, pairing).with_names(
        vec!["t0".into(), "t1".into(), "t2".into(), "b0".into(), "b1".into(), "b2".into()],
        names("h", 18),
    )
}

/// An eight-vertex sphere graph with exactly one negative vertex: 12 edges,
/// 6 faces, winding number 3. The bottom edge between `v7` and `v8` has its
/// two sides on different faces (a 5-gon and the outer boundary), making it
/// the canonical cut edge; the label solver closes up with `u^3 = v^3` there.
///
/// Vertex layout (clockwise rotations, `v6` is the negative one):
/// an apex `v1` over a belt `v2 v3 v4`, two middle vertices `v5 v6`, and a
/// bottom pair `v7 v8`.
pub fn sphere8() -> RibbonGraph {
    let vertices = vec![
        Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2] }, // v1: v4, v3, v2
        Vertex { color: Sign::Plus, half_edges: vec![3, 4, 5] }, // v2: v1, v5, v7
        Vertex { color: Sign::Plus, half_edges: vec![6, 7, 8] }, // v3: v1, v6, v5
        Vertex { color: Sign::Plus, half_edges: vec![9, 10, 11] }, // v4: v1, v8, v6
        Vertex { color: Sign::Plus, half_edges: vec![12, 13, 14] }, // v5: v3, v7, v2
        Vertex { color: Sign::Minus, half_edges: vec![15, 16, 17] }, // v6: v4, v8, v3
        Vertex { color: Sign::Plus, half_edges: vec![18, 19, 20] }, // v7: v5, v8, v2
        Vertex { color: Sign::Plus, half_edges: vec![21, 22, 23] }, // v8: v6, v4, v7
    ];
    let pairing = vec![
        9, 6, 3, // v1
        2, 14, 20, // v2
        1, 17, 12, // v3
        0, 22, 15, // v4
        8, 18, 4, // v5
        11, 21, 7, // v6
        13, 23, 5, // v7
        16, 10, 19, // v8
    ];
    RibbonGraph::new(vertices, pairing)
        .with_names((1..=8).map(|i| format!("v{i}")).collect(), names("h", 24))
}

/// The cut edge of [`sphere8`]: the bottom edge between `v7` and `v8`.
pub fn sphere8_cut() -> (usize, usize) {
    (19, 23)
}

/// A spanning tree of [`sphere8`]: the seven edges that stay inside the
/// drawing (everything except the two top arcs, the two bottom arcs and the
/// cut edge). Its dual polygon has 10 perimeter sides.
pub fn sphere8_tree() -> Vec<(usize, usize)> {
    vec![
        (4, 14),  // v2 - v5
        (8, 12),  // v3 - v5
        (1, 6),   // v1 - v3
        (7, 17),  // v3 - v6
        (11, 15), // v4 - v6
        (13, 18), // v5 - v7
        (16, 21), // v6 - v8
    ]
}

/// A non-trivalent general-position example: 3 vertices with valences
/// (4, 3, 3) and 5 edges whose drawn rotation system produces exactly 2
/// faces, hence Euler characteristic 0 and genus 1.
pub fn fatgraph() -> RibbonGraph {
    let vertices = vec![
        Vertex { color: Sign::Plus, half_edges: vec![0, 1, 2, 3] },
        Vertex { color: Sign::Plus, half_edges: vec![4, 5, 6] },
        Vertex { color: Sign::Plus, half_edges: vec![7, 8, 9] },
    ];
    let pairing = vec![6, 7, 8, 4, 3, 9, 0, 1, 2, 5];
    RibbonGraph::new(vertices, pairing).with_names(
        vec!["x".into(), "y".into(), "z".into()],
        names("h", 10),
    )
}

/// A random small element of the cyclotomic field: coefficients drawn from
/// {−1, 0, 1} across the rational basis (zero is possible).
pub fn random_cyclotomic<R: Rng + ?Sized>(order: u32, rng: &mut R) -> Cyclotomic {
    let mut out = Cyclotomic::zero(order);
    for i in 0..euler_phi(order) {
        let c: i64 = rng.gen_range(-1..=1);
        if c != 0 {
            let scalar = Cyclotomic::from_rational(order, BigRational::from_integer(c.into()));
            out = &out + &(&scalar * &Cyclotomic::zeta_pow(order, i as i64));
        }
    }
    out
}

fn random_nonzero_cyclotomic<R: Rng + ?Sized>(order: u32, rng: &mut R) -> Cyclotomic {
    loop {
        let c = random_cyclotomic(order, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A random acyclic complex in degrees 0..=3 over the cyclotomic field of
/// the given order, returned together with its exact torsion value.
///
/// The construction is a direct sum of elementary two-term pieces `c·id`
/// bridging adjacent degrees — whose torsion is the alternating product of
/// the scalars — mixed by determinant-one basis changes that leave the
/// torsion untouched.
pub fn random_acyclic_complex(order: u32, seed: u64) -> (ChainComplex<CycField>, Cyclotomic) {
    let f = CycField { order };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // s[k] counts the elementary pieces bridging degrees (k, k−1)
    let s: [usize; 5] =
        [0, rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2), 0];
    let ranks: Vec<usize> = (0..4).map(|k| s[k] + s[k + 1]).collect();
    let mut expected = Cyclotomic::one(order);
    let mut boundaries: Vec<Matrix<CycField>> = Vec::new();
    for k in 1..4 {
        // basis convention in degree k: the s[k] upper generators of its own
        // pieces first, then the s[k+1] lower generators of the pieces above
        let mut m = Matrix::zero(f, ranks[k - 1], ranks[k]);
        for i in 0..s[k] {
            let c = random_nonzero_cyclotomic(order, &mut rng);
            expected = if k % 2 == 1 {
                &expected * &c
            } else {
                &expected * &c.inv().expect("nonzero scalar")
            };
            m.set(s[k - 1] + i, i, c);
        }
        boundaries.push(m);
    }
    for _ in 0..12 {
        let k = rng.gen_range(0..4usize);
        let n = ranks[k];
        if n < 2 {
            continue;
        }
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let coeff = random_cyclotomic(order, &mut rng);
        // change the degree-k basis by a transvection: columns of the
        // boundary out of degree k move, rows of the one into it compensate
        if k >= 1 {
            boundaries[k - 1].add_col_multiple(a, b, &coeff);
        }
        if k + 1 < 4 {
            boundaries[k].add_row_multiple(b, a, &-&coeff);
        }
    }
    let complex =
        ChainComplex::new(f, ranks, boundaries).expect("mixed complex stays valid");
    (complex, expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere8_census() {
        let g = sphere8();
        assert!(g.validate().is_empty());
        let inv = g.invariants();
        assert_eq!((inv.vertex_count, inv.edge_count, inv.face_count), (8, 12, 6));
        assert_eq!(inv.euler_characteristic, 2);
        assert_eq!(inv.genus, 0);
        assert_eq!((inv.positive_vertices, inv.negative_vertices), (7, 1));
        assert_eq!(inv.winding, 3);
    }

    #[test]
    fn sphere8_cut_edge_separates_two_faces() {
        let g = sphere8();
        let (a, b) = sphere8_cut();
        assert_eq!(g.pairing(a), b);
        let face_of = g.face_of();
        assert_ne!(face_of[a], face_of[b]);
        // one side is the central 5-gon, the other the 5-sided outer region
        let faces = g.faces();
        assert_eq!(faces[face_of[a]].len(), 5);
        assert_eq!(faces[face_of[b]].len(), 5);
    }

    #[test]
    fn sphere8_tree_is_spanning() {
        let g = sphere8();
        let tree = sphere8_tree();
        assert_eq!(tree.len(), g.vertex_count() - 1);
        for &(a, b) in &tree {
            assert_eq!(g.pairing(a), b, "tree members must be edges");
        }
        // connectivity of the tree over the vertices
        let owner = g.vertex_of();
        let mut reach = vec![false; g.vertex_count()];
        reach[0] = true;
        for _ in 0..g.vertex_count() {
            for &(a, b) in &tree {
                let (va, vb) = (owner[a], owner[b]);
                if reach[va] || reach[vb] {
                    reach[va] = true;
                    reach[vb] = true;
                }
            }
        }
        assert!(reach.iter().all(|&r| r));
    }

    #[test]
    fn random_complex_generator_smoke() {
        for seed in [0u64, 1, 2] {
            let (c, expected) = random_acyclic_complex(5, seed);
            assert_eq!(c.ranks().len(), 4);
            assert!(!expected.is_zero());
            let odd: usize = c.ranks().iter().skip(1).step_by(2).sum();
            let even: usize = c.ranks().iter().step_by(2).sum();
            assert_eq!(odd, even);
        }
    }

    #[test]
    fn prism_census() {
        let g = prism();
        assert!(g.validate().is_empty());
        let inv = g.invariants();
        assert_eq!((inv.vertex_count, inv.edge_count, inv.face_count), (6, 9, 5));
        assert_eq!(inv.genus, 0);
        assert_eq!(inv.winding, 3);
    }
}
