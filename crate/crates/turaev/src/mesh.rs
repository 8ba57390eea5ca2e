//! The end-to-end pipeline for mesh Legendrians presented by bicolored
//! trivalent ribbon graphs: the torsion report `(n, ε, τ, Reidemeister
//! class)`, the handle-slide edge-label system with its global closure
//! `u^n = v^w`, a pairwise distinguisher, the tree/perimeter exponent
//! relation, and the numerical series invariant `r₁`.

use std::collections::VecDeque;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::cocycle::euler_number_cocycle;
use crate::ribbon::RibbonGraph;
use crate::ring::{Cyclotomic, LocalSystem, RingElem, Sign, UnitUpToSign};
use crate::torsion::{reidemeister_class, TorsionValue};

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("graph fails validation: {reason}")]
    InvalidGraph { reason: String },
    #[error("torsion undefined for |w|={}", .w.unsigned_abs())]
    UndefinedTorsion { w: i64 },
    #[error("no valid cut edge: {detail}")]
    NoValidCutEdge { detail: String },
    #[error(
        "label system inconsistent ({detail}); this cannot happen for a valid \
         graph and signals a broken invariant"
    )]
    InconsistentSystem { detail: String },
    #[error("not a spanning tree: {detail}")]
    NotASpanningTree { detail: String },
    #[error("tolerance must be a positive finite number, got {tol}")]
    InvalidTolerance { tol: f64 },
    #[error("zeta^{power} is not a primitive root of order {n}")]
    PowerNotPrimitive { n: u32, power: i64 },
}

fn ensure_valid(g: &RibbonGraph) -> Result<(), MeshError> {
    let violations = g.validate();
    if violations.is_empty() {
        return Ok(());
    }
    let reason =
        violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
    Err(MeshError::InvalidGraph { reason })
}

// ---------------------------------------------------------------------------
// Torsion report
// ---------------------------------------------------------------------------

/// The invariants of the Legendrian presented by a graph with `|w| >= 2`.
#[derive(Clone, Debug)]
pub struct TorsionReport {
    /// Order of the local system, `n = |w|`.
    pub n: u32,
    /// Sign of the winding number.
    pub epsilon: Sign,
    /// The torsion `±(1 − ζ^ε)`, defined up to sign only.
    pub tau: TorsionValue<Cyclotomic>,
    /// The coarser class modulo sign and powers of `ζ`, stored as its
    /// canonical representative.
    pub reidemeister_class: TorsionValue<Cyclotomic>,
    /// Set exactly when `n = 2`: `ζ` is its own conjugate there, so the
    /// sign-only refinement cannot separate mirror pairs.
    pub inconclusive: bool,
}

/// Stable JSON shape of a [`TorsionReport`].
#[derive(Clone, Debug, Serialize)]
pub struct TorsionReportJson {
    pub n: u32,
    pub epsilon: i64,
    pub tau_coeffs: Vec<String>,
    pub reidemeister_rep: Vec<String>,
    pub inconclusive: bool,
}

impl TorsionReport {
    pub fn to_json(&self) -> TorsionReportJson {
        TorsionReportJson {
            n: self.n,
            epsilon: self.epsilon.to_int(),
            tau_coeffs: self.tau.value.coeff_strings(),
            reidemeister_rep: self.reidemeister_class.value.coeff_strings(),
            inconclusive: self.inconclusive,
        }
    }
}

/// Compute the torsion report of a valid graph.
///
/// The value is `(1 − u^ε)` pushed through the order-`n` local system, i.e.
/// `±(1 − ζ^ε)`; the Reidemeister class divides out powers of `ζ` as well.
/// Graphs with `|w| < 2` carry no suitable local system and are rejected.
pub fn legendrian_turaev_torsion(g: &RibbonGraph) -> Result<TorsionReport, MeshError> {
    ensure_valid(g)?;
    let w = g.winding();
    if w.unsigned_abs() < 2 {
        return Err(MeshError::UndefinedTorsion { w });
    }
    let n = w.unsigned_abs() as u32;
    let epsilon = if w > 0 { Sign::Plus } else { Sign::Minus };
    let euler = euler_number_cocycle(g)
        .map_err(|e| MeshError::InvalidGraph { reason: e.to_string() })?;
    assert_eq!(
        euler, w,
        "cocycle Euler number must agree with the winding number"
    );
    let rho = LocalSystem::new(n);
    let tau_elem = (&RingElem::one() - &RingElem::u_pow(epsilon.to_int()))
        .eval_cyclotomic(&rho)
        .expect("order is at least 2");
    let tau = TorsionValue::<Cyclotomic>::up_to_sign(tau_elem);
    let reidemeister = reidemeister_class(&tau, &[Cyclotomic::zeta(n)]);
    Ok(TorsionReport {
        n,
        epsilon,
        tau,
        reidemeister_class: reidemeister,
        inconclusive: n == 2,
    })
}

// ---------------------------------------------------------------------------
// Pairwise distinguisher
// ---------------------------------------------------------------------------

/// What the invariants can say about a pair of graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distinguisher {
    /// `|w|` differs, so already the coarse class separates them.
    DistinctByReidemeister,
    /// `|w|` agrees but the sign-refined torsions differ.
    DistinctByTuraev,
    /// Every invariant computed here agrees.
    Indistinguishable,
    /// `|w| ∈ {1, 2}` with opposite signs: the refinement is blind there.
    Inconclusive,
}

impl std::fmt::Display for Distinguisher {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Distinguisher::DistinctByReidemeister => "DistinctByReidemeister",
            Distinguisher::DistinctByTuraev => "DistinctByTuraev",
            Distinguisher::Indistinguishable => "Indistinguishable",
            Distinguisher::Inconclusive => "Inconclusive",
        };
        write!(f, "{name}")
    }
}

/// Compare two valid graphs by `|w|` first, then by the exact torsion.
pub fn distinguish(g1: &RibbonGraph, g2: &RibbonGraph) -> Result<Distinguisher, MeshError> {
    ensure_valid(g1)?;
    ensure_valid(g2)?;
    let (w1, w2) = (g1.winding(), g2.winding());
    if w1.unsigned_abs() != w2.unsigned_abs() {
        return Ok(Distinguisher::DistinctByReidemeister);
    }
    let n = w1.unsigned_abs();
    if n >= 3 {
        let t1 = legendrian_turaev_torsion(g1)?;
        let t2 = legendrian_turaev_torsion(g2)?;
        if !t1.tau.same_class(&t2.tau) {
            return Ok(Distinguisher::DistinctByTuraev);
        }
        return Ok(Distinguisher::Indistinguishable);
    }
    if (1..=2).contains(&n) && w1.signum() != w2.signum() {
        return Ok(Distinguisher::Inconclusive);
    }
    Ok(Distinguisher::Indistinguishable)
}

// ---------------------------------------------------------------------------
// Edge labels
// ---------------------------------------------------------------------------

/// The unit labels at one vertex, listed in the rotation order of its three
/// half-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLabels {
    pub vertex: usize,
    pub a: [UnitUpToSign; 3],
    pub b: [UnitUpToSign; 3],
    pub c: [UnitUpToSign; 3],
}

/// A solved handle-slide label system: all labels are `±u^k`, the letter
/// `v = u^ε`, and cutting along `cut_edge` closes up with `u^n = v^w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    pub vertex_labels: Vec<VertexLabels>,
    /// The cut edge, as its half-edge pair (smaller index first).
    pub cut_edge: (usize, usize),
    pub v: UnitUpToSign,
    /// `n = ε·w ≥ 0`: the exponent of the global closure `u^n = v^w`.
    pub closure_exponent: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexLabelsJson {
    pub vertex: String,
    pub a: [i64; 3],
    pub b: [i64; 3],
    pub c: [i64; 3],
}

/// Stable JSON shape of an [`EdgeLabeling`]: `u`-exponents only, since every
/// label is `±u^k`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeLabelingJson {
    pub labels: Vec<VertexLabelsJson>,
    pub cut_edge: [String; 2],
    pub closure: i64,
}

impl EdgeLabeling {
    pub fn to_json(&self, g: &RibbonGraph) -> EdgeLabelingJson {
        let labels = self
            .vertex_labels
            .iter()
            .map(|vl| VertexLabelsJson {
                vertex: g.vertex_name(vl.vertex).to_string(),
                a: vl.a.map(|u| u.u_exp),
                b: vl.b.map(|u| u.u_exp),
                c: vl.c.map(|u| u.u_exp),
            })
            .collect();
        EdgeLabelingJson {
            labels,
            cut_edge: [
                g.half_edge_name(self.cut_edge.0).to_string(),
                g.half_edge_name(self.cut_edge.1).to_string(),
            ],
            closure: self.closure_exponent,
        }
    }
}

/// The first edge (ascending half-edge order) whose two sides lie on two
/// distinct faces.
pub fn first_valid_cut_edge(g: &RibbonGraph) -> Result<(usize, usize), MeshError> {
    ensure_valid(g)?;
    let face_of = g.face_of();
    for (a, b) in g.edges() {
        if face_of[a] != face_of[b] {
            return Ok((a, b));
        }
    }
    Err(MeshError::NoValidCutEdge {
        detail: "every edge has both of its sides on a single face; the \
                 double-cover fallback is not implemented"
            .into(),
    })
}

/// Solve the labels cutting along the first valid edge.
pub fn solve_edge_labels_auto(g: &RibbonGraph) -> Result<EdgeLabeling, MeshError> {
    let cut = first_valid_cut_edge(g)?;
    solve_edge_labels(g, cut)
}

/// Solve the edge-label system of a valid graph, cutting along `cut`.
///
/// Labels are `±u^k`; the system is linear in the `b`-exponents `β`:
/// per half-edge the facing `a`-exponent is `ε − β`, per vertex the three
/// `β` sum to `ε` (doubled at negative vertices, where the roles of `a` and
/// `b` swap), per edge the two `β` sum to `ε` — except at the cut edge,
/// which carries the inhomogeneous twist `ε − n`. Solved by propagation
/// along a spanning tree; every identity is re-checked on the result
/// independently of the solver path.
pub fn solve_edge_labels(
    g: &RibbonGraph,
    cut: (usize, usize),
) -> Result<EdgeLabeling, MeshError> {
    ensure_valid(g)?;
    let count = g.half_edge_count();
    if cut.0 >= count || cut.1 >= count || g.pairing(cut.0) != cut.1 || cut.0 == cut.1 {
        return Err(MeshError::NoValidCutEdge {
            detail: format!("{:?} is not an edge of the graph", cut),
        });
    }
    let cut = (cut.0.min(cut.1), cut.0.max(cut.1));
    let face_of = g.face_of();
    if face_of[cut.0] == face_of[cut.1] {
        return Err(MeshError::NoValidCutEdge {
            detail: format!(
                "edge {}-{} has both sides on one face; the double-cover \
                 fallback is not implemented",
                g.half_edge_name(cut.0),
                g.half_edge_name(cut.1)
            ),
        });
    }

    let w = g.winding();
    let eps: i64 = if w >= 0 { 1 } else { -1 };
    let n = w.abs();
    let edges = g.edges();
    let owner = g.vertex_of();
    let mut edge_of = vec![usize::MAX; count];
    for (i, &(a, b)) in edges.iter().enumerate() {
        edge_of[a] = i;
        edge_of[b] = i;
    }
    let cut_index = edge_of[cut.0];
    let rhs: Vec<i64> = (0..edges.len())
        .map(|i| if i == cut_index { eps - n } else { eps })
        .collect();
    let vertex_target: Vec<i64> = (0..g.vertex_count())
        .map(|v| match g.color(v) {
            Sign::Plus => eps,
            Sign::Minus => 2 * eps,
        })
        .collect();

    // spanning tree by breadth-first search over non-loop edges, keeping the
    // cut edge out (a two-faced edge is never a bridge, so the rest of the
    // graph stays connected without it)
    let mut neighbors: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertex_count()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (va, vb) = (owner[a], owner[b]);
        if va != vb && i != cut_index {
            neighbors[va].push((i, vb));
            neighbors[vb].push((i, va));
        }
    }
    let mut in_tree = vec![false; edges.len()];
    let mut visited = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([0usize]);
    visited[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, u) in &neighbors[v] {
            if !visited[u] {
                visited[u] = true;
                in_tree[e] = true;
                queue.push_back(u);
            }
        }
    }
    if !visited.iter().all(|&f| f) {
        return Err(MeshError::InconsistentSystem {
            detail: "spanning tree avoiding the cut edge does not reach every vertex".into(),
        });
    }

    // everything off the tree is pinned: the primary (smaller) half-edge
    // gets exponent 0, its partner follows from the edge equation
    let mut beta: Vec<Option<i64>> = vec![None; count];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if !in_tree[i] {
            beta[a] = Some(0);
            beta[b] = Some(rhs[i]);
        }
    }
    leaf_strip_solve(g, &in_tree, &rhs, &vertex_target, &mut beta)?;
    let beta: Vec<i64> = beta
        .into_iter()
        .map(|b| b.expect("leaf stripping solves every half-edge"))
        .collect();
    check_all_label_identities(g, &beta, eps, cut, n)?;

    let unit = |k: i64| UnitUpToSign { u_exp: k, one_minus_u_exp: 0 };
    let vertex_labels = (0..g.vertex_count())
        .map(|v| {
            let hs = &g.vertices()[v].half_edges;
            let b = [unit(beta[hs[0]]), unit(beta[hs[1]]), unit(beta[hs[2]])];
            let a = [
                unit(eps - beta[hs[0]]),
                unit(eps - beta[hs[1]]),
                unit(eps - beta[hs[2]]),
            ];
            // c = −b, so the sign-free exponents coincide with b's
            VertexLabels { vertex: v, a, b, c: b }
        })
        .collect();
    Ok(EdgeLabeling {
        vertex_labels,
        cut_edge: cut,
        v: unit(eps),
        closure_exponent: n,
    })
}

/// Solve the vertex equations for the exponents on the `tree` edges by
/// repeatedly eliminating leaves; `beta` must be pre-filled on every
/// half-edge that is not part of a tree edge. The one vertex left at the
/// end has its equation checked — it is the global consistency condition.
fn leaf_strip_solve(
    g: &RibbonGraph,
    tree: &[bool],
    rhs: &[i64],
    vertex_target: &[i64],
    beta: &mut [Option<i64>],
) -> Result<(), MeshError> {
    let edges = g.edges();
    let owner = g.vertex_of();
    let mut edge_of = vec![usize::MAX; g.half_edge_count()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        edge_of[a] = i;
        edge_of[b] = i;
    }
    let mut x: Vec<Option<i64>> = vec![None; edges.len()];
    let beta_value = |h: usize, x: &[Option<i64>], beta: &[Option<i64>]| -> Option<i64> {
        if let Some(v) = beta[h] {
            return Some(v);
        }
        let e = edge_of[h];
        let xe = x[e]?;
        Some(if edges[e].0 == h { xe } else { rhs[e] - xe })
    };

    let mut unsolved_deg = vec![0usize; g.vertex_count()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if tree[i] {
            unsolved_deg[owner[a]] += 1;
            unsolved_deg[owner[b]] += 1;
        }
    }
    let mut queue: VecDeque<usize> =
        (0..g.vertex_count()).filter(|&v| unsolved_deg[v] == 1).collect();
    let mut processed = vec![false; g.vertex_count()];
    while let Some(v) = queue.pop_front() {
        if processed[v] || unsolved_deg[v] != 1 {
            continue;
        }
        let mut pending: Option<(usize, bool)> = None;
        let mut total = 0i64;
        for &h in &g.vertices()[v].half_edges {
            match beta_value(h, &x, beta) {
                Some(value) => total += value,
                None => {
                    let e = edge_of[h];
                    debug_assert!(pending.is_none(), "a leaf has one open edge");
                    pending = Some((e, edges[e].0 == h));
                }
            }
        }
        let Some((e, primary)) = pending else {
            // every incident edge already solved: defer to the final check
            processed[v] = true;
            unsolved_deg[v] = 0;
            continue;
        };
        let beta_h = vertex_target[v] - total;
        x[e] = Some(if primary { beta_h } else { rhs[e] - beta_h });
        processed[v] = true;
        unsolved_deg[v] = 0;
        let (a, b) = edges[e];
        let other = if owner[a] == v { owner[b] } else { owner[a] };
        unsolved_deg[other] -= 1;
        if unsolved_deg[other] == 1 {
            queue.push_back(other);
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if tree[i] {
            let xe = x[i].ok_or_else(|| MeshError::InconsistentSystem {
                detail: "leaf stripping left a tree edge unsolved".into(),
            })?;
            beta[a] = Some(xe);
            beta[b] = Some(rhs[i] - xe);
        }
    }
    for v in 0..g.vertex_count() {
        if processed[v] {
            continue;
        }
        let total: i64 = g.vertices()[v]
            .half_edges
            .iter()
            .map(|&h| beta[h].expect("all half-edges solved"))
            .sum();
        if total != vertex_target[v] {
            return Err(MeshError::InconsistentSystem {
                detail: format!(
                    "closing vertex {} misses its target by {}",
                    g.vertex_name(v),
                    total - vertex_target[v]
                ),
            });
        }
    }
    Ok(())
}

/// Re-check every label identity from scratch: vertex triples, edge
/// matchings, the cut-edge twist, and the global closure.
fn check_all_label_identities(
    g: &RibbonGraph,
    beta: &[i64],
    eps: i64,
    cut: (usize, usize),
    n: i64,
) -> Result<(), MeshError> {
    let fail = |detail: String| Err(MeshError::InconsistentSystem { detail });
    for (a, b) in g.edges() {
        let expected = if (a, b) == cut { eps - n } else { eps };
        if beta[a] + beta[b] != expected {
            return fail(format!(
                "edge {}-{} has exponent sum {}, expected {expected}",
                g.half_edge_name(a),
                g.half_edge_name(b),
                beta[a] + beta[b]
            ));
        }
        if (a, b) != cut && (eps - beta[a]) != beta[b] {
            return fail(format!(
                "facing labels disagree across {}-{}",
                g.half_edge_name(a),
                g.half_edge_name(b)
            ));
        }
    }
    // the cut edge matches only after multiplying by u^n
    for (front, back) in [(cut.0, cut.1), (cut.1, cut.0)] {
        if eps - beta[front] != n + beta[back] {
            return fail(format!(
                "cut edge twist fails from {} to {}",
                g.half_edge_name(front),
                g.half_edge_name(back)
            ));
        }
    }
    for (v, vertex) in g.vertices().iter().enumerate() {
        let hs = &vertex.half_edges;
        for i in 0..3 {
            let (h, hj, hk) = (hs[i], hs[(i + 1) % 3], hs[(i + 2) % 3]);
            let holds = match vertex.color {
                Sign::Plus => eps - beta[h] == beta[hj] + beta[hk],
                Sign::Minus => beta[h] == (eps - beta[hj]) + (eps - beta[hk]),
            };
            if !holds {
                return fail(format!(
                    "vertex {} triple identity fails at {}",
                    g.vertex_name(v),
                    g.half_edge_name(h)
                ));
            }
        }
    }
    if n != eps * g.winding() {
        return fail(format!("closure u^{n} = v^w fails: w = {}", g.winding()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The tree/perimeter exponent relation
// ---------------------------------------------------------------------------

/// Cut the surface open along a spanning `tree`: the co-tree half-edges form
/// the perimeter of a polygon (each co-tree edge contributes both sides).
/// With `k` one more than the number of positive vertices and `m` the
/// perimeter length, the solved labels satisfy `∏ b over any k perimeter
/// slots = ∏ a over the other m−k` — checked here in exponent arithmetic for
/// the perimeter product and for up to 20 index subsets in lexicographic
/// order.
pub fn verify_jks(g: &RibbonGraph, tree: &[(usize, usize)]) -> Result<bool, MeshError> {
    ensure_valid(g)?;
    let owner = g.vertex_of();
    let edges = g.edges();
    let mut edge_of = vec![usize::MAX; g.half_edge_count()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        edge_of[a] = i;
        edge_of[b] = i;
    }
    if tree.len() + 1 != g.vertex_count() {
        return Err(MeshError::NotASpanningTree {
            detail: format!(
                "{} edges cannot span {} vertices",
                tree.len(),
                g.vertex_count()
            ),
        });
    }
    let mut in_tree = vec![false; edges.len()];
    for &(a, b) in tree {
        if a >= g.half_edge_count() || g.pairing(a) != b {
            return Err(MeshError::NotASpanningTree {
                detail: format!("({a}, {b}) is not an edge"),
            });
        }
        if owner[a] == owner[b] {
            return Err(MeshError::NotASpanningTree {
                detail: format!("({a}, {b}) is a loop"),
            });
        }
        let e = edge_of[a];
        if in_tree[e] {
            return Err(MeshError::NotASpanningTree {
                detail: format!("({a}, {b}) is listed twice"),
            });
        }
        in_tree[e] = true;
    }
    // reachability across the chosen edges
    let mut reached = vec![false; g.vertex_count()];
    reached[0] = true;
    let mut frontier = VecDeque::from([0usize]);
    while let Some(v) = frontier.pop_front() {
        for (i, &(a, b)) in edges.iter().enumerate() {
            if !in_tree[i] {
                continue;
            }
            let (va, vb) = (owner[a], owner[b]);
            let next = if va == v { vb } else if vb == v { va } else { continue };
            if !reached[next] {
                reached[next] = true;
                frontier.push_back(next);
            }
        }
    }
    if !reached.iter().all(|&r| r) {
        return Err(MeshError::NotASpanningTree {
            detail: "the chosen edges do not reach every vertex".into(),
        });
    }

    let w = g.winding();
    let eps: i64 = if w >= 0 { 1 } else { -1 };
    let inv = g.invariants();
    let vertex_target: Vec<i64> = (0..g.vertex_count())
        .map(|v| match g.color(v) {
            Sign::Plus => eps,
            Sign::Minus => 2 * eps,
        })
        .collect();
    let rhs = vec![eps; edges.len()];

    // co-tree edges are cut open: their half-edges sit on the polygon
    // perimeter individually. One slot takes the whole perimeter total
    // ε(N+1) forced by the vertex and tree equations; the rest take 0.
    let perimeter: Vec<usize> =
        (0..g.half_edge_count()).filter(|&h| !in_tree[edge_of[h]]).collect();
    let mut beta: Vec<Option<i64>> = vec![None; g.half_edge_count()];
    for (slot, &h) in perimeter.iter().enumerate() {
        beta[h] = Some(if slot == 0 {
            eps * (inv.negative_vertices as i64 + 1)
        } else {
            0
        });
    }
    leaf_strip_solve(g, &in_tree, &rhs, &vertex_target, &mut beta)?;
    let beta: Vec<i64> = beta
        .into_iter()
        .map(|b| b.expect("leaf stripping solves every half-edge"))
        .collect();

    let m = perimeter.len();
    let k = inv.positive_vertices + 1;
    let a_exp = |h: usize| eps - beta[h];
    // the perimeter product of the a-labels is v^k
    let total_a: i64 = perimeter.iter().map(|&h| a_exp(h)).sum();
    if total_a != eps * k as i64 {
        return Ok(false);
    }
    if k > m {
        return Ok(true);
    }
    let mut combo: Vec<usize> = (0..k).collect();
    for _ in 0..20 {
        let sum_b: i64 = combo.iter().map(|&i| beta[perimeter[i]]).sum();
        let sum_a: i64 = (0..m)
            .filter(|i| combo.binary_search(i).is_err())
            .map(|i| a_exp(perimeter[i]))
            .sum();
        if sum_b != sum_a {
            return Ok(false);
        }
        if !next_combination(&mut combo, m) {
            break;
        }
    }
    Ok(true)
}

/// Advance `combo` (strictly increasing indices below `m`) to the next
/// subset in lexicographic order; false when it was the last one.
fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] != i + m - k {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// The series invariant r₁
// ---------------------------------------------------------------------------

/// `r₁ = n · Im( Σ_{k≥1} ζ^{pk} / k² )` for `ζ = e^{2πi/n}`, truncated so
/// the tail stays below `tol` (the tail of `Σ k⁻²` past `K` is below `1/K`).
///
/// The imaginary parts cycle through a sine table with exact zeros at the
/// real slots, so orders whose roots are all real (`n ∈ {1, 2}`) return an
/// exact `0.0` without summing.
pub fn higher_torsion_r1(n: u32, power: i64, tol: f64) -> Result<f64, MeshError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(MeshError::InvalidTolerance { tol });
    }
    if n == 0 {
        return Err(MeshError::PowerNotPrimitive { n, power });
    }
    let nn = n as u64;
    let p = power.rem_euclid(n as i64) as u64;
    if p.gcd(&nn) != 1 {
        return Err(MeshError::PowerNotPrimitive { n, power });
    }
    let table: Vec<f64> = (0..nn)
        .map(|r| {
            if r == 0 || 2 * r == nn {
                0.0
            } else {
                (std::f64::consts::TAU * r as f64 / n as f64).sin()
            }
        })
        .collect();
    if table.iter().all(|&s| s == 0.0) {
        return Ok(0.0);
    }
    let k_max = (n as f64 / tol).ceil() as u64;
    let mut sum = 0.0f64;
    // summed smallest terms first for floating-point hygiene
    for k in (1..=k_max).rev() {
        let idx = (p * (k % nn)) % nn;
        sum += table[idx as usize] / ((k * k) as f64);
    }
    Ok(n as f64 * sum)
}
