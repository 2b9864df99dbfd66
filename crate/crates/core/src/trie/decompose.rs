use crate::trie::HeightStats;

/// Read-only navigation shared by the byte and the binary trie.
pub trait TrieShape {
    fn root(&self) -> u32;
    fn num_children(&self, v: u32) -> usize;
    /// The `k`-th child in branching order.
    fn child(&self, v: u32, k: usize) -> u32;
    fn leaves(&self, v: u32) -> usize;
}

/// Which child continues a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathChoice {
    /// Always the first child.
    Leftmost,
    /// The child with most leaves; ties go to the earlier child. On a binary
    /// trie this is the left-biased heavy path.
    Heavy,
}

/// How the sub-tries hanging off a path are ordered as children.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChildOrder {
    /// Deepest path node first; left to right within a node.
    BottomUp,
    /// Binary tries only: hanging left sub-tries top to bottom, then hanging
    /// right sub-tries bottom to top (lexicographic order).
    Lexicographic,
}

/// The path decomposition of a trie: one node per root-to-leaf path, in
/// depth-first preorder. Node `x` owns trie nodes
/// `path_nodes[path_start[x]..path_start[x + 1]]` (from the top of the path
/// down to its leaf) and children `children[child_start[x]..child_start[x + 1]]`.
#[derive(Clone, Debug, Default)]
pub struct PathDecompTree {
    pub path_start: Vec<u64>,
    pub path_nodes: Vec<u32>,
    pub child_start: Vec<u64>,
    pub children: Vec<u32>,
}

impl PathDecompTree {
    pub fn len(&self) -> usize {
        self.path_start.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn path(&self, x: usize) -> &[u32] {
        &self.path_nodes[self.path_start[x] as usize..self.path_start[x + 1] as usize]
    }

    #[inline]
    pub fn children(&self, x: usize) -> &[u32] {
        &self.children[self.child_start[x] as usize..self.child_start[x + 1] as usize]
    }

    /// Trie node at the top of the path of `x`.
    #[inline]
    pub fn head(&self, x: usize) -> u32 {
        self.path_nodes[self.path_start[x] as usize]
    }

    /// Node depths (root 0) in preorder.
    pub fn depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.len()];
        for x in 0..self.len() {
            for &c in self.children(x) {
                depth[c as usize] = depth[x] + 1;
            }
        }
        depth
    }

    /// Depth statistics over all nodes.
    pub fn heights(&self) -> HeightStats {
        HeightStats::from_depths(self.depths().into_iter().map(|d| d as usize))
    }
}

fn next_on_path<T: TrieShape + ?Sized>(t: &T, v: u32, choice: PathChoice) -> usize {
    match choice {
        PathChoice::Leftmost => 0,
        PathChoice::Heavy => {
            let mut best = (0, t.leaves(t.child(v, 0)));
            for k in 1..t.num_children(v) {
                let l = t.leaves(t.child(v, k));
                if l > best.1 {
                    best = (k, l);
                }
            }
            best.0
        }
    }
}

/// Decomposes `t` into paths chosen by `choice`.
pub fn decompose<T: TrieShape + ?Sized>(t: &T, choice: PathChoice, order: ChildOrder) -> PathDecompTree {
    const UNSET: u64 = u64::MAX;
    let mut out = PathDecompTree::default();
    // (trie node heading a path, slot in `children` awaiting its id)
    let mut stack = vec![(t.root(), UNSET)];
    let mut hang: Vec<u32> = Vec::new();
    let mut left_hang: Vec<u32> = Vec::new();
    while let Some((head, slot)) = stack.pop() {
        let id = out.path_start.len() as u32;
        if slot != UNSET {
            out.children[slot as usize] = id;
        }
        out.path_start.push(out.path_nodes.len() as u64);
        let path_from = out.path_nodes.len();
        let mut v = head;
        loop {
            out.path_nodes.push(v);
            let d = t.num_children(v);
            if d == 0 {
                break;
            }
            v = t.child(v, next_on_path(t, v, choice));
        }

        hang.clear();
        left_hang.clear();
        let path = &out.path_nodes[path_from..];
        match order {
            ChildOrder::BottomUp => {
                for &u in path.iter().rev() {
                    let next = next_child_index(t, u, choice);
                    for k in 0..t.num_children(u) {
                        if Some(k) != next {
                            hang.push(t.child(u, k));
                        }
                    }
                }
            }
            ChildOrder::Lexicographic => {
                for &u in path {
                    if t.num_children(u) == 0 {
                        continue;
                    }
                    debug_assert_eq!(t.num_children(u), 2);
                    if next_on_path(t, u, choice) == 1 {
                        left_hang.push(t.child(u, 0));
                    }
                }
                hang.extend_from_slice(&left_hang);
                for &u in path.iter().rev() {
                    if t.num_children(u) != 0 && next_on_path(t, u, choice) == 0 {
                        hang.push(t.child(u, 1));
                    }
                }
            }
        }

        out.child_start.push(out.children.len() as u64);
        let base = out.children.len() as u64;
        out.children.resize(out.children.len() + hang.len(), u32::MAX);
        for (k, &h) in hang.iter().enumerate().rev() {
            stack.push((h, base + k as u64));
        }
    }
    out.path_start.push(out.path_nodes.len() as u64);
    out.child_start.push(out.children.len() as u64);
    out
}

fn next_child_index<T: TrieShape + ?Sized>(t: &T, v: u32, choice: PathChoice) -> Option<usize> {
    (t.num_children(v) > 0).then(|| next_on_path(t, v, choice))
}
