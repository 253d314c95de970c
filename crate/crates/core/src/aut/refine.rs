use std::hash::{DefaultHasher, Hash, Hasher};

use crate::scheme::Scheme;

/// An ordered partition of the points: `color(a)` is the index of the cell
/// containing `a`, cells numbered `0..num_cells` in their canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexColoring {
    colors: Vec<u32>,
    num_cells: usize,
}

impl VertexColoring {
    pub fn uniform(n: usize) -> Self {
        VertexColoring {
            colors: vec![0; n],
            num_cells: usize::from(n > 0),
        }
    }

    /// Renumbers arbitrary labels into cells ordered by label value.
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut distinct: Vec<u32> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let colors = labels
            .iter()
            .map(|l| distinct.binary_search(l).expect("present") as u32)
            .collect();
        VertexColoring {
            colors,
            num_cells: distinct.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, a: usize) -> u32 {
        self.colors[a]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn is_discrete(&self) -> bool {
        self.num_cells == self.colors.len()
    }

    /// Cells in order, members ascending.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.num_cells];
        for (a, &c) in self.colors.iter().enumerate() {
            cells[c as usize].push(a);
        }
        cells
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_cells];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Splits `{v}` off its cell, placing the singleton just before the rest.
    pub fn individualize(&self, v: usize) -> VertexColoring {
        let c = self.colors[v];
        if self.cell_sizes()[c as usize] == 1 {
            return self.clone();
        }
        let colors = self
            .colors
            .iter()
            .enumerate()
            .map(|(a, &x)| {
                if x > c || (x == c && a != v) {
                    x + 1
                } else {
                    x
                }
            })
            .collect();
        VertexColoring {
            colors,
            num_cells: self.num_cells + 1,
        }
    }

    /// The first smallest cell with more than one point.
    pub fn target_cell(&self) -> Option<u32> {
        let sizes = self.cell_sizes();
        let mut best: Option<(usize, u32)> = None;
        for (c, &s) in sizes.iter().enumerate() {
            if s > 1 && best.is_none_or(|(bs, _)| s < bs) {
                best = Some((s, c as u32));
            }
        }
        best.map(|(_, c)| c)
    }
}

/// Coarsest stable refinement of `initial`: two points stay together only
/// if they see every (color, cell) combination equally often.
pub fn refine(x: &Scheme, initial: &VertexColoring) -> VertexColoring {
    refine_traced(x, initial).0
}

/// Refinement plus a hash of every round's signatures. The hash depends
/// only on the isomorphism type of `(x, initial)`, so it can be compared
/// across branches of a search tree.
pub(crate) fn refine_traced(x: &Scheme, initial: &VertexColoring) -> (VertexColoring, u64) {
    let n = x.n();
    let r = x.rank() as u32;
    let mut hasher = DefaultHasher::new();
    let mut cur = initial.clone();
    let mut sigs: Vec<Vec<u32>> = vec![Vec::with_capacity(n); n];
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        for (a, sig) in sigs.iter_mut().enumerate() {
            sig.clear();
            let row = x.matrix().row(a);
            sig.extend((0..n).map(|g| cur.colors[g] * r + row[g] as u32));
            sig.sort_unstable();
        }
        order.sort_by(|&a, &b| {
            cur.colors[a]
                .cmp(&cur.colors[b])
                .then_with(|| sigs[a].cmp(&sigs[b]))
        });
        let mut next = vec![0u32; n];
        let mut cell = 0u32;
        for w in 0..n {
            let a = order[w];
            if w > 0 {
                let prev = order[w - 1];
                if cur.colors[prev] != cur.colors[a] || sigs[prev] != sigs[a] {
                    cell += 1;
                    cur.colors[prev].hash(&mut hasher);
                    sigs[prev].hash(&mut hasher);
                }
            }
            next[a] = cell;
        }
        let num_cells = if n == 0 { 0 } else { cell as usize + 1 };
        num_cells.hash(&mut hasher);
        let stable = num_cells == cur.num_cells;
        cur = VertexColoring {
            colors: next,
            num_cells,
        };
        if stable {
            return (cur, hasher.finish());
        }
    }
}
