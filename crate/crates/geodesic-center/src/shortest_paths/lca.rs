//! Lowest common ancestors via an Euler tour and a sparse table.

/// LCA structure over a rooted forest given by parent links.
#[derive(Clone, Debug)]
pub struct Lca {
    first: Vec<usize>,
    euler: Vec<usize>,
    depth: Vec<usize>,
    table: Vec<Vec<usize>>,
    comp: Vec<usize>,
}

impl Lca {
    /// `parent[v] == None` marks a root.
    pub fn new(parent: &[Option<usize>]) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (v, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(v),
                None => roots.push(v),
            }
        }
        let mut first = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        let mut comp = vec![usize::MAX; n];
        let mut euler = Vec::with_capacity(2 * n);
        for &r in &roots {
            // Iterative DFS emitting a node on entry and after each child.
            let mut stack: Vec<(usize, usize)> = vec![(r, 0)];
            comp[r] = r;
            while let Some(top) = stack.len().checked_sub(1) {
                let (v, ci) = stack[top];
                if ci == 0 {
                    first[v] = euler.len();
                }
                euler.push(v);
                if ci < children[v].len() {
                    stack[top].1 += 1;
                    let c = children[v][ci];
                    depth[c] = depth[v] + 1;
                    comp[c] = r;
                    stack.push((c, 0));
                } else {
                    stack.pop();
                }
            }
        }
        let m = euler.len();
        let mut table = vec![euler.clone()];
        let mut k = 1;
        while (1 << k) <= m {
            let prev = &table[k - 1];
            let half = 1 << (k - 1);
            let row: Vec<usize> = (0..=m - (1 << k))
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + half]);
                    if depth[a] <= depth[b] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            table.push(row);
            k += 1;
        }
        Lca { first, euler, depth, table, comp }
    }

    /// `None` when the nodes are in different trees.
    pub fn query(&self, a: usize, b: usize) -> Option<usize> {
        if self.comp[a] != self.comp[b] || self.comp[a] == usize::MAX {
            return None;
        }
        let (mut l, mut r) = (self.first[a], self.first[b]);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let len = r - l + 1;
        let k = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let (x, y) = (self.table[k][l], self.table[k][r + 1 - (1 << k)]);
        Some(if self.depth[x] <= self.depth[y] { x } else { y })
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn tour_len(&self) -> usize {
        self.euler.len()
    }
}
