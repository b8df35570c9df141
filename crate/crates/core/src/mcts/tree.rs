use std::collections::{HashMap, HashSet};

use crate::mdp::{Action, FireState};

/// Statistics for one sampled successor of `(s, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChildNode {
    pub state: FireState,
    /// Reward cached when the successor was first drawn.
    pub reward: f64,
    pub visits: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionNode {
    pub action: Action,
    pub visits: u64,
    pub q: f64,
    pub children: Vec<ChildNode>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateNode {
    pub visits: u64,
    pub actions: Vec<ActionNode>,
}

impl StateNode {
    pub fn find(&self, action: &Action) -> Option<usize> {
        self.actions.iter().position(|a| &a.action == action)
    }

    /// `argmax_a Q(s, a)` over tried actions, first index on ties.
    pub fn best(&self) -> Option<&ActionNode> {
        let mut best: Option<&ActionNode> = None;
        for a in self.actions.iter().filter(|a| a.visits > 0) {
            if best.is_none_or(|b| a.q > b.q) {
                best = Some(a);
            }
        }
        best
    }
}

/// The set `T` of expanded states with their statistics.
#[derive(Debug, Clone, Default)]
pub struct SearchTree {
    nodes: Vec<StateNode>,
    index: HashMap<FireState, usize>,
}

impl SearchTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, state: &FireState) -> bool {
        self.index.contains_key(state)
    }

    pub fn get(&self, state: &FireState) -> Option<&StateNode> {
        self.index.get(state).map(|&i| &self.nodes[i])
    }

    pub(crate) fn id(&self, state: &FireState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub(crate) fn node(&self, id: usize) -> &StateNode {
        &self.nodes[id]
    }

    pub(crate) fn node_mut(&mut self, id: usize) -> &mut StateNode {
        &mut self.nodes[id]
    }

    pub(crate) fn insert(&mut self, state: FireState, visits: u64) -> usize {
        let id = self.nodes.len();
        self.nodes.push(StateNode { visits, actions: Vec::new() });
        self.index.insert(state, id);
        id
    }

    pub fn states(&self) -> impl Iterator<Item = (&FireState, &StateNode)> {
        self.index.iter().map(|(s, &i)| (s, &self.nodes[i]))
    }

    /// Keep only the states reachable from `root` through stored successors.
    pub fn retain_reachable(&mut self, root: &FireState) {
        let mut keep: HashSet<usize> = HashSet::new();
        let mut stack: Vec<usize> = self.id(root).into_iter().collect();
        while let Some(id) = stack.pop() {
            if !keep.insert(id) {
                continue;
            }
            for a in &self.nodes[id].actions {
                for c in &a.children {
                    if let Some(&cid) = self.index.get(&c.state) {
                        if !keep.contains(&cid) {
                            stack.push(cid);
                        }
                    }
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::with_capacity(keep.len());
        for (old, node) in std::mem::take(&mut self.nodes).into_iter().enumerate() {
            if keep.contains(&old) {
                remap[old] = nodes.len();
                nodes.push(node);
            }
        }
        self.index.retain(|_, id| {
            if remap[*id] == usize::MAX {
                false
            } else {
                *id = remap[*id];
                true
            }
        });
        self.nodes = nodes;
    }
}
