use nalgebra::DMatrix;

use super::C64;

/// Partition of `0..n` into the connected components of the sparsity graph of
/// `m` (an edge wherever `m[(r, c)]` or `m[(c, r)]` is not exactly zero).
///
/// Components are returned sorted by their smallest index, each component in
/// ascending order.
pub fn connected_blocks(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for c in 0..n {
        for r in 0..n {
            if r == c {
                continue;
            }
            let v = m[(r, c)];
            if v.re != 0.0 || v.im != 0.0 {
                let (ra, rb) = (find(&mut parent, r), find(&mut parent, c));
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi] = lo;
                }
            }
        }
    }

    let mut roots: Vec<Option<usize>> = vec![None; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match roots[root] {
            Some(slot) => out[slot].push(i),
            None => {
                roots[root] = Some(out.len());
                out.push(vec![i]);
            }
        }
    }
    out
}

pub(crate) fn submatrix(m: &DMatrix<C64>, idx: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}
