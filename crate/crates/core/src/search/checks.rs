//! Runtime checks for the search tree invariants.

use super::rectify::{nec, EvalMode, Rectifier};
use super::result::SearchResult;
use super::tree::{NodeId, NodeStatus, SearchNode, SearchTree};
use super::SearchError;

pub const TOLERANCE: f64 = 1e-9;

pub fn check_node_f(node: &SearchNode, mode: EvalMode, rect: Rectifier) -> bool {
    (node.f - nec(mode, rect, f64::from(node.g), node.h, node.n)).abs() <= TOLERANCE
}

/// Nodes whose stored f differs from the value recomputed from `(g, h, n)`.
pub fn check_f_consistency(tree: &SearchTree, mode: EvalMode, rect: Rectifier) -> Vec<NodeId> {
    tree.iter().filter(|(_, n)| !check_node_f(n, mode, rect)).map(|(id, _)| id).collect()
}

fn bounds(ancestor: &SearchNode) -> bool {
    // a dropped node has left the open list; its f is frozen
    ancestor.status != NodeStatus::Dropped
}

/// First live ancestor whose current f is below the selection f of `id`.
pub(crate) fn prop1_on_path(tree: &SearchTree, id: NodeId) -> Option<NodeId> {
    let fs = tree.get(id).f_selected?;
    tree.ancestors(id).find(|&a| {
        let anc = tree.get(a);
        bounds(anc) && fs > anc.f + TOLERANCE
    })
}

/// All `(ancestor, descendant)` pairs where a non-leaf descendant was
/// selected with an f above the ancestor's current f. Empty means the
/// subtree bound holds everywhere.
///
/// A non-leaf node's own f grows when it is rectified, so the bound is
/// checked against the f it had when it was last selected.
pub fn assert_prop1(tree: &SearchTree) -> Vec<(NodeId, NodeId)> {
    // max selection f over strict descendants, bottom-up
    let mut below = vec![f64::NEG_INFINITY; tree.len()];
    for (id, node) in tree.iter().collect::<Vec<_>>().into_iter().rev() {
        if let Some((parent, _)) = &node.parent {
            let own = node.f_selected.unwrap_or(f64::NEG_INFINITY);
            below[parent.0] = below[parent.0].max(below[id.0]).max(own);
        }
    }
    let mut out = Vec::new();
    for (id, node) in tree.iter() {
        if !bounds(node) || below[id.0] <= node.f + TOLERANCE {
            continue;
        }
        let mut stack = node.children.clone();
        while let Some(d) = stack.pop() {
            let dn = tree.get(d);
            if dn.f_selected.is_some_and(|fs| fs > node.f + TOLERANCE) {
                out.push((id, d));
            }
            stack.extend(dn.children.iter().copied());
        }
    }
    out.sort();
    out
}

pub(crate) fn thm2_bound_holds(plan_len: usize, h0: f64, rect: Rectifier, n_root: u64) -> bool {
    plan_len as f64 <= rect.rectify(h0, n_root) + TOLERANCE
}

/// Checks that a solution found in additive mode is no longer than
/// `h(s0) + r(n_root)`. Unsolved results pass trivially.
pub fn assert_thm2(
    result: &SearchResult,
    tree: &SearchTree,
    mode: EvalMode,
    rect: Rectifier,
) -> Result<bool, SearchError> {
    if mode != EvalMode::Additive {
        return Err(SearchError::Contract("the solution-cost bound only applies to the additive mode".into()));
    }
    let Some(len) = result.plan_len() else {
        return Ok(true);
    };
    let root = tree.root().ok_or_else(|| SearchError::Contract("empty search tree".into()))?;
    Ok(thm2_bound_holds(len, root.h, rect, root.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ControlValuation, Decision, State};
    use crate::sampling::NodeSamplerState;
    use crate::search::result::{Outcome, SearchStats};

    fn node(parent: Option<NodeId>, f: f64, f_selected: Option<f64>) -> SearchNode {
        SearchNode {
            state: State::new(vec![], vec![]),
            key: None,
            g: 0,
            h: f,
            n: 0,
            f,
            f_selected,
            parent: parent.map(|p| (p, Decision { action: 0, controls: ControlValuation(vec![]) })),
            sampler: NodeSamplerState::default(),
            children: Vec::new(),
            status: NodeStatus::Open,
        }
    }

    #[test]
    fn trivial_trees_pass() {
        let mut t = SearchTree::new();
        let r = t.push(node(None, 3.0, None));
        assert!(assert_prop1(&t).is_empty());
        t.push(node(Some(r), 10.0, None));
        assert!(assert_prop1(&t).is_empty());
    }

    #[test]
    fn violation_is_reported() {
        let mut t = SearchTree::new();
        let r = t.push(node(None, 3.0, Some(2.0)));
        let a = t.push(node(Some(r), 4.0, Some(2.5)));
        let b = t.push(node(Some(a), 9.0, Some(3.5)));
        assert_eq!(assert_prop1(&t), vec![(r, b)]);
        assert_eq!(prop1_on_path(&t, b), Some(r));
        t.get_mut(r).status = NodeStatus::Dropped;
        assert!(assert_prop1(&t).is_empty());
    }

    #[test]
    fn thm2_checker() {
        let mut t = SearchTree::new();
        t.push(node(None, 2.0, None));
        let solved = |len: usize| SearchResult {
            outcome: Outcome::Solved,
            plan: Some(vec![Decision { action: 0, controls: ControlValuation(vec![]) }; len]),
            stats: SearchStats::default(),
        };
        assert!(assert_thm2(&solved(0), &t, EvalMode::Additive, Rectifier::Linear).unwrap());
        assert!(assert_thm2(&solved(2), &t, EvalMode::Additive, Rectifier::Linear).unwrap());
        assert!(!assert_thm2(&solved(3), &t, EvalMode::Additive, Rectifier::Linear).unwrap());
        t.get_mut(SearchTree::ROOT).n = 1;
        assert!(assert_thm2(&solved(3), &t, EvalMode::Additive, Rectifier::Linear).unwrap());
        assert!(assert_thm2(&solved(0), &t, EvalMode::Greedy, Rectifier::Linear).is_err());
    }

    #[test]
    fn f_consistency() {
        let mut t = SearchTree::new();
        t.push(node(None, 2.0, None));
        assert!(check_f_consistency(&t, EvalMode::Greedy, Rectifier::Linear).is_empty());
        t.get_mut(SearchTree::ROOT).n = 1;
        assert_eq!(check_f_consistency(&t, EvalMode::Greedy, Rectifier::Linear), vec![SearchTree::ROOT]);
    }
}
