//! Exact-arithmetic toolkit for the Turaev torsion of mesh Legendrians.
//!
//! The pipeline starts from a bicolored trivalent ribbon graph, computes its
//! winding number and Euler number two independent ways, solves for the
//! handle-slide edge labels around a cut edge, and produces the torsion
//! invariants that tell mesh Legendrians apart:
//!
//! * [`ring`] — the ground ring `Z[u, u^-1, (1-u)^-1]`, its unit group, and
//!   the cyclotomic fields `Q(zeta_n)` the torsion values live in.
//! * [`ribbon`] — ribbon graphs as rotation systems on half-edges, with
//!   faces, genus, mirror image and a seeded random generator.
//! * [`cocycle`] — the combinatorial Euler-cocycle evaluation and the two
//!   independent Euler-number computations.
//! * [`slides`] — elementary row/column operations over the ground ring and
//!   machine checks of the handle-slide matrix identities.
//! * [`torsion`] — torsion of based acyclic chain complexes over a field:
//!   chain contraction, odd-to-even determinant, pivotal-minor alternating
//!   product, suspension, Reidemeister coarsening.
//! * [`mesh`] — the mesh-Legendrian pipeline: torsion reports, edge-label
//!   solving at a cut edge, the Jensen-King-Su subset relations, the
//!   distinguisher for pairs of graphs, and the `r_1` series.
//! * [`samples`] — small fixture graphs used in tests and documentation.

pub mod cocycle;
pub mod mesh;
pub mod ribbon;
pub mod ring;
pub mod samples;
pub mod slides;
pub mod torsion;
