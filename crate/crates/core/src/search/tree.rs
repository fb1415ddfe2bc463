use crate::model::{Decision, State, StateKey};
use crate::sampling::NodeSamplerState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    /// In the open list, or currently being expanded.
    Open,
    /// Finite decision set exhausted; never reinserted.
    Dropped,
    /// Extracted and found to satisfy the goal.
    Goal,
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub state: State,
    pub key: Option<StateKey>,
    /// Plan length from the root.
    pub g: u32,
    pub h: f64,
    /// Partial expansions performed on this node.
    pub n: u64,
    pub f: f64,
    /// f at the most recent extraction that led to an expansion.
    pub f_selected: Option<f64>,
    pub parent: Option<(NodeId, Decision)>,
    pub sampler: NodeSamplerState,
    pub children: Vec<NodeId>,
    pub status: NodeStatus,
}

impl SearchNode {
    /// A node is a leaf until it has been selected for expansion.
    pub fn is_leaf(&self) -> bool {
        self.f_selected.is_none()
    }
}

/// Arena of search nodes. Parents always precede their children, so a
/// reverse scan visits every subtree bottom-up.
#[derive(Debug, Clone, Default)]
pub struct SearchTree {
    nodes: Vec<SearchNode>,
}

impl SearchTree {
    pub const ROOT: NodeId = NodeId(0);

    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: SearchNode) -> NodeId {
        let id = NodeId(self.nodes.len());
        if let Some((parent, _)) = &node.parent {
            self.nodes[parent.0].children.push(id);
        }
        self.nodes.push(node);
        id
    }

    pub fn get(&self, id: NodeId) -> &SearchNode {
        &self.nodes[id.0]
    }

    pub fn get_mut(&mut self, id: NodeId) -> &mut SearchNode {
        &mut self.nodes[id.0]
    }

    pub fn root(&self) -> Option<&SearchNode> {
        self.nodes.first()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &SearchNode)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    /// Strict ancestors of `id`, nearest first.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let mut cur = self.get(id).parent.as_ref().map(|(p, _)| *p);
        std::iter::from_fn(move || {
            let out = cur?;
            cur = self.get(out).parent.as_ref().map(|(p, _)| *p);
            Some(out)
        })
    }

    /// Decisions from the root to `id`, in execution order.
    pub fn reconstruct_plan(&self, id: NodeId) -> Vec<Decision> {
        let mut plan = Vec::with_capacity(self.get(id).g as usize);
        let mut cur = id;
        while let Some((parent, decision)) = &self.get(cur).parent {
            plan.push(decision.clone());
            cur = *parent;
        }
        plan.reverse();
        plan
    }
}
