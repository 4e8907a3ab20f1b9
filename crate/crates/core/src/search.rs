//! Bounded search in the Pachner move graph.
//!
//! `move_search` looks for a path of moves connecting two triangulations up
//! to iso-signature equality, within caps on depth and tetrahedron count.
//! A found path is a PL-homeomorphism certificate that replays: applying the
//! returned moves to `a` produces a triangulation with the signature of `b`.
//! Exhausting the bounds is a normal outcome, never a "not homeomorphic".
//!
//! The search runs breadth-first from both endpoints with signature
//! memoization; backward edges are unwound through the inverse descriptors
//! that `apply_move` reports.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::isosig::iso_signature;
use crate::moves::{apply_move, enumerate_moves, MoveError, PachnerMove};
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SearchOutcome {
    Found { path: Vec<PachnerMove> },
    NotFoundWithinBounds { explored: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub max_tetra: usize,
    pub max_depth: usize,
}

struct Node {
    tri: Triangulation,
    sig: String,
    parent: Option<usize>,
    /// move applied to the parent to reach this node
    step: Option<PachnerMove>,
    /// inverse of `step`, located in this node
    back: Option<PachnerMove>,
    depth: usize,
}

struct Side {
    nodes: Vec<Node>,
    seen: HashMap<String, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(tri: &Triangulation) -> Self {
        let sig = iso_signature(tri, false);
        let nodes = vec![Node {
            tri: tri.clone(),
            sig: sig.clone(),
            parent: None,
            step: None,
            back: None,
            depth: 0,
        }];
        let mut seen = HashMap::new();
        seen.insert(sig, 0);
        Side { nodes, seen, frontier: vec![0] }
    }

    fn expand(&mut self, bounds: SearchBounds) -> Result<Vec<(String, usize)>, MoveError> {
        let mut next = Vec::new();
        let mut fresh = Vec::new();
        for &id in &self.frontier.clone() {
            let depth = self.nodes[id].depth;
            let tri = self.nodes[id].tri.clone();
            for mv in enumerate_moves(&tri)? {
                let out = apply_move(&tri, mv)?;
                if out.result.tetra_count() > bounds.max_tetra {
                    continue;
                }
                let sig = iso_signature(&out.result, false);
                if self.seen.contains_key(&sig) {
                    continue;
                }
                let nid = self.nodes.len();
                self.nodes.push(Node {
                    tri: out.result,
                    sig: sig.clone(),
                    parent: Some(id),
                    step: Some(mv),
                    back: Some(out.inverse),
                    depth: depth + 1,
                });
                self.seen.insert(sig.clone(), nid);
                next.push(nid);
                fresh.push((sig, nid));
            }
        }
        self.frontier = next;
        Ok(fresh)
    }
}

/// Path from the forward root to node `id`.
fn forward_path(side: &Side, id: usize) -> Vec<PachnerMove> {
    let mut path = Vec::new();
    let mut cur = id;
    while let Some(parent) = side.nodes[cur].parent {
        path.push(side.nodes[cur].step.unwrap());
        cur = parent;
    }
    path.reverse();
    path
}

/// The chain of (inverse move, expected result signature) pairs leading from
/// node `id` back up to the backward root.
fn backward_chain(side: &Side, id: usize) -> Vec<(PachnerMove, String)> {
    let mut chain = Vec::new();
    let mut cur = id;
    while let Some(parent) = side.nodes[cur].parent {
        chain.push((side.nodes[cur].back.unwrap(), side.nodes[parent].sig.clone()));
        cur = parent;
    }
    chain
}

pub fn move_search(
    a: &Triangulation,
    b: &Triangulation,
    bounds: SearchBounds,
) -> Result<SearchOutcome, MoveError> {
    let sig_a = iso_signature(a, false);
    let sig_b = iso_signature(b, false);
    if sig_a == sig_b {
        return Ok(SearchOutcome::Found { path: Vec::new() });
    }

    let mut fwd = Side::new(a);
    let mut bwd = Side::new(b);
    if a.tetra_count() > bounds.max_tetra || b.tetra_count() > bounds.max_tetra {
        return Ok(SearchOutcome::NotFoundWithinBounds { explored: 0 });
    }

    let mut depth = 0;
    while depth < bounds.max_depth {
        // expand the smaller frontier; total path depth is the sum of sides
        let expand_fwd = fwd.frontier.len() <= bwd.frontier.len();
        let fresh = if expand_fwd { fwd.expand(bounds)? } else { bwd.expand(bounds)? };
        depth += 1;
        let other = if expand_fwd { &bwd } else { &fwd };
        for (sig, id) in &fresh {
            if let Some(&oid) = other.seen.get(sig) {
                let (fid, bid) = if expand_fwd { (*id, oid) } else { (oid, *id) };
                if fwd.nodes[fid].depth + bwd.nodes[bid].depth > bounds.max_depth {
                    continue;
                }
                // meeting point: the two triangulations are isomorphic but
                // not necessarily identical; splice through the signature
                let mut path = forward_path(&fwd, fid);
                path.extend(relocated_backward_path(&fwd.nodes[fid].tri, &bwd, bid));
                return Ok(SearchOutcome::Found { path });
            }
        }
        if fwd.frontier.is_empty() && bwd.frontier.is_empty() {
            break;
        }
    }
    Ok(SearchOutcome::NotFoundWithinBounds { explored: fwd.nodes.len() + bwd.nodes.len() })
}

/// The backward half of a spliced path. The meet triangulation found on the
/// forward side is isomorphic to the backward node's triangulation but not
/// necessarily equal to it, so each recorded inverse move is relocated: try
/// the literal descriptor first, else every move of the same kind, accepting
/// one whose result has the expected signature.
fn relocated_backward_path(meet: &Triangulation, bwd: &Side, bid: usize) -> Vec<PachnerMove> {
    let mut path = Vec::new();
    let mut cur = meet.clone();
    for (recorded, expect_sig) in backward_chain(bwd, bid) {
        let mv = relocate(&cur, recorded, &expect_sig).expect("backward edge must relocate");
        cur = apply_move(&cur, mv).expect("relocated move applies").result;
        path.push(mv);
    }
    path
}

fn relocate(cur: &Triangulation, recorded: PachnerMove, expect_sig: &str) -> Option<PachnerMove> {
    if let Ok(out) = apply_move(cur, recorded) {
        if iso_signature(&out.result, false) == expect_sig {
            return Some(recorded);
        }
    }
    for cand in enumerate_moves(cur).ok()? {
        if cand.kind != recorded.kind {
            continue;
        }
        if let Ok(out) = apply_move(cur, cand) {
            if iso_signature(&out.result, false) == expect_sig {
                return Some(cand);
            }
        }
    }
    None
}

/// Applies a seeded sequence of random valid moves; used for scramble
/// fixtures and property tests. Returns the scrambled triangulation and the
/// moves taken.
pub fn scramble(
    tri: &Triangulation,
    steps: usize,
    max_tetra: usize,
    seed: u64,
) -> Result<(Triangulation, Vec<PachnerMove>), MoveError> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cur = tri.clone();
    let mut taken = Vec::new();
    for _ in 0..steps {
        let moves: Vec<PachnerMove> = enumerate_moves(&cur)?
            .into_iter()
            .filter(|mv| {
                let grow = match mv.kind {
                    crate::moves::MoveKind::OneFour => 3,
                    crate::moves::MoveKind::TwoThree => 1,
                    _ => 0,
                };
                cur.tetra_count() + grow <= max_tetra
            })
            .collect();
        if moves.is_empty() {
            break;
        }
        // pick a kind uniformly among those present, then an instance;
        // keeps the walk from drifting upward in size
        let kinds: Vec<crate::moves::MoveKind> = {
            let mut ks: Vec<_> = moves.iter().map(|m| m.kind).collect();
            ks.sort_by_key(|k| format!("{k}"));
            ks.dedup();
            ks
        };
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let of_kind: Vec<&PachnerMove> = moves.iter().filter(|m| m.kind == kind).collect();
        let mv = *of_kind[rng.gen_range(0..of_kind.len())];
        cur = apply_move(&cur, mv)?.result;
        taken.push(mv);
    }
    Ok((cur, taken))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::moves::{MoveKind, MoveLocation};

    #[test]
    fn identical_inputs_need_no_moves() {
        let tri = fixtures::boundary_4_simplex();
        let out = move_search(&tri, &tri, SearchBounds { max_tetra: 10, max_depth: 3 }).unwrap();
        assert!(matches!(out, SearchOutcome::Found { path } if path.is_empty()));
    }

    #[test]
    fn single_move_found() {
        let tri = fixtures::boundary_4_simplex();
        let mv = PachnerMove {
            kind: MoveKind::TwoThree,
            location: MoveLocation::Triangle { tet: 0, face: 0 },
        };
        let b = apply_move(&tri, mv).unwrap().result;
        let out = move_search(&tri, &b, SearchBounds { max_tetra: 12, max_depth: 4 }).unwrap();
        let SearchOutcome::Found { path } = out else { panic!("no path found") };
        assert_eq!(path.len(), 1);
        // replay
        let replayed = replay(&tri, &path);
        assert_eq!(
            crate::isosig::iso_signature(&replayed, false),
            crate::isosig::iso_signature(&b, false)
        );
    }

    #[test]
    fn different_manifolds_not_found() {
        let a = fixtures::boundary_4_simplex();
        let b = fixtures::m004();
        let out = move_search(&a, &b, SearchBounds { max_tetra: 9, max_depth: 3 }).unwrap();
        assert!(matches!(out, SearchOutcome::NotFoundWithinBounds { .. }));
    }

    pub(super) fn replay(tri: &Triangulation, path: &[PachnerMove]) -> Triangulation {
        let mut cur = tri.clone();
        for &mv in path {
            cur = apply_move(&cur, mv).expect("certificate must replay").result;
        }
        cur
    }

    #[test]
    fn scramble_and_search_round_trip() {
        let tri = fixtures::boundary_4_simplex();
        for seed in 0..5u64 {
            let (b, _) = scramble(&tri, 4, 20, seed).unwrap();
            let out =
                move_search(&tri, &b, SearchBounds { max_tetra: 24, max_depth: 10 }).unwrap();
            let SearchOutcome::Found { path } = out else {
                panic!("seed {seed}: no path found")
            };
            let replayed = replay(&tri, &path);
            assert_eq!(
                crate::isosig::iso_signature(&replayed, false),
                crate::isosig::iso_signature(&b, false),
                "seed {seed}"
            );
        }
    }
}
