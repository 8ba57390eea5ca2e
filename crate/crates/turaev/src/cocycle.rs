//! The combinatorial Euler cocycle on cyclic sets, and two independent ways
//! of computing the Euler number of the plane field attached to a bicolored
//! trivalent ribbon graph.
//!
//! The cocycle route sums, over every vertex, six barycentric 2-simplices
//! whose corners are nested subsets of the vertex's three disk branches; each
//! simplex is evaluated by the brute-force order statistic [`c_z`]. The
//! clutching route is a closed-form census of vertices and edge colors. Both
//! must land on the winding number; the toolkit checks them against each
//! other rather than trusting either.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ribbon::RibbonGraph;
use crate::ring::Sign;

/// A flag of nested nonempty subsets `a ⊆ b ⊆ c` of a cyclic set, the cell
/// the Euler cocycle is evaluated on. `cycle` lists the full set in cyclic
/// order; `b` and `a` pick out the middle and small subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicTriple {
    pub cycle: Vec<usize>,
    pub b: Vec<usize>,
    pub a: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CocycleError {
    /// The per-vertex halves failed to sum to an integer. Cannot happen for
    /// a sound trivalent graph (it has evenly many vertices); kept loud
    /// rather than truncated.
    #[error("euler number summed to the non-integer {total}")]
    NonIntegerTotal { total: String },
}

/// Evaluate the Euler cocycle on a flag: with `(x, y, z)` drawn uniformly
/// from `a x b x c`, this is `-(P[cyclic] - P[anti-cyclic]) / 2`, counting
/// only triples of three distinct labels. Pure order statistics, no geometry.
///
/// # Panics
///
/// Panics when the labels of `cycle` repeat or the subsets are not nested
/// (`a ⊆ b ⊆ cycle`) or empty.
pub fn c_z(triple: &CyclicTriple) -> BigRational {
    let cycle = &triple.cycle;
    let position = |label: usize| -> usize {
        cycle
            .iter()
            .position(|&l| l == label)
            .expect("subset label missing from the cycle")
    };
    {
        // invariant checks: distinct labels, nested nonempty subsets
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), cycle.len(), "cycle labels must be distinct");
        assert!(!triple.a.is_empty() && !triple.b.is_empty(), "subsets must be nonempty");
        assert!(
            triple.a.iter().all(|l| triple.b.contains(l)),
            "a must be a subset of b"
        );
        for l in &triple.b {
            position(*l);
        }
    }
    let len = cycle.len();
    let mut cyclic = 0i64;
    let mut anti = 0i64;
    for &x in &triple.a {
        for &y in &triple.b {
            for &z in cycle {
                if x == y || y == z || x == z {
                    continue;
                }
                let px = position(x);
                let dy = (position(y) + len - px) % len;
                let dz = (position(z) + len - px) % len;
                if dy < dz {
                    cyclic += 1;
                } else {
                    anti += 1;
                }
            }
        }
    }
    let total = BigInt::from((triple.a.len() * triple.b.len() * cycle.len()) as i64);
    let diff = BigRational::from(BigInt::from(cyclic - anti)) / BigRational::from(total);
    -diff / BigRational::from(BigInt::from(2))
}

/// Contribution of one vertex: the six barycentric 2-simplices around it,
/// each evaluated through [`c_z`] on a flag `{x} ⊆ {x', x} ⊆ cycle`, with
/// the cyclic order reversed at a negative vertex. Always `+-1/2`.
fn vertex_contribution(cycle_clockwise: &[usize], color: Sign) -> BigRational {
    assert_eq!(cycle_clockwise.len(), 3, "disk branches come in threes");
    let oriented: Vec<usize> = match color {
        Sign::Plus => cycle_clockwise.to_vec(),
        Sign::Minus => cycle_clockwise.iter().rev().copied().collect(),
    };
    let k = cycle_clockwise.len();
    let mut total = BigRational::zero();
    for i in 0..k {
        let x = cycle_clockwise[i];
        let prev = cycle_clockwise[(i + k - 1) % k];
        let next = cycle_clockwise[(i + 1) % k];
        // the two simplices meeting the corner x, with opposite plane
        // orientations
        total += c_z(&CyclicTriple { cycle: oriented.clone(), b: vec![prev, x], a: vec![x] });
        total -= c_z(&CyclicTriple { cycle: oriented.clone(), b: vec![x, next], a: vec![x] });
    }
    total
}

/// Euler number by summing the cocycle over all vertices.
pub fn euler_number_cocycle(g: &RibbonGraph) -> Result<i64, CocycleError> {
    let mut total = BigRational::zero();
    for vertex in g.vertices() {
        total += vertex_contribution(&vertex.half_edges, vertex.color);
    }
    if !total.denom().is_one() {
        return Err(CocycleError::NonIntegerTotal { total: total.to_string() });
    }
    Ok(num_traits::ToPrimitive::to_i64(total.numer()).expect("euler number fits i64"))
}

/// Euler number by the clutching census: `E(++) - P + N - E(--)`, where the
/// edge counts are over same-colored endpoints.
pub fn euler_number_clutching(g: &RibbonGraph) -> i64 {
    let inv = g.invariants();
    inv.plus_plus_edges as i64 - inv.positive_vertices as i64 + inv.negative_vertices as i64
        - inv.minus_minus_edges as i64
}
