//! Row maxima of totally monotone matrices.

/// A matrix whose rows are searched for their leftmost maximum.
pub trait RowMaxima {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// True iff entry `(r, c_new)` is strictly greater than `(r, c_old)`.
    fn better(&mut self, r: usize, c_old: usize, c_new: usize) -> bool;
}

/// A dense matrix of reals.
#[derive(Clone, Debug)]
pub struct ExplicitMatrix(pub Vec<Vec<f64>>);

impl RowMaxima for ExplicitMatrix {
    fn rows(&self) -> usize {
        self.0.len()
    }
    fn cols(&self) -> usize {
        self.0.first().map_or(0, Vec::len)
    }
    fn better(&mut self, r: usize, c_old: usize, c_new: usize) -> bool {
        self.0[r][c_new] > self.0[r][c_old]
    }
}

/// Column of the leftmost maximum in every row.
pub fn smawk<M: RowMaxima>(m: &mut M) -> Vec<usize> {
    let rows: Vec<usize> = (0..m.rows()).collect();
    let cols: Vec<usize> = (0..m.cols()).collect();
    let mut out = vec![0; rows.len()];
    if !cols.is_empty() {
        solve(m, &rows, &cols, &mut out);
    }
    out
}

fn solve<M: RowMaxima>(m: &mut M, rows: &[usize], cols: &[usize], out: &mut [usize]) {
    if rows.is_empty() {
        return;
    }
    // REDUCE: keep at most one candidate column per row.
    let mut stack: Vec<usize> = Vec::with_capacity(rows.len());
    for &c in cols {
        while let Some(&top) = stack.last() {
            let r = rows[stack.len() - 1];
            if m.better(r, top, c) {
                stack.pop();
            } else {
                break;
            }
        }
        if stack.len() < rows.len() {
            stack.push(c);
        }
    }
    let odd: Vec<usize> = rows.iter().skip(1).step_by(2).copied().collect();
    solve(m, &odd, &stack, out);
    // Fill even rows between the answers of their odd neighbours.
    let mut start = 0;
    for i in (0..rows.len()).step_by(2) {
        let r = rows[i];
        let end = if i + 1 < rows.len() {
            let c = out[rows[i + 1]];
            start + stack[start..].iter().position(|&x| x == c).unwrap()
        } else {
            stack.len() - 1
        };
        let mut best = stack[start];
        for &c in &stack[start + 1..=end] {
            if m.better(r, best, c) {
                best = c;
            }
        }
        out[r] = best;
        start = end;
    }
}

/// Leftmost row maxima by scanning every entry.
pub fn naive_row_maxima<M: RowMaxima>(m: &mut M) -> Vec<usize> {
    (0..m.rows())
        .map(|r| {
            let mut best = 0;
            for c in 1..m.cols() {
                if m.better(r, best, c) {
                    best = c;
                }
            }
            best
        })
        .collect()
}
