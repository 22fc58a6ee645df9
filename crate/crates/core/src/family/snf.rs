//! Smith normal form over the integers, with transformation matrices.
//!
//! Sizes here are tiny (a handful of generators), so entries are `i128` and
//! the elimination is the textbook one.

pub type IntMat = Vec<Vec<i128>>;

#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal entries, nonnegative, each dividing the next; length `min(m, n)`.
    pub diagonal: Vec<i128>,
    /// Unimodular `m x m` with `u * a * v = d`.
    pub u: IntMat,
    /// Unimodular `n x n`.
    pub v: IntMat,
}

fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn smith_normal_form(a: &IntMat, cols: usize) -> Snf {
    let m = a.len();
    let n = cols;
    let mut d: IntMat = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);

    let row_add = |mat: &mut IntMat, dst: usize, src: usize, k: i128| {
        if k == 0 {
            return;
        }
        let src_row = mat[src].clone();
        for (x, s) in mat[dst].iter_mut().zip(src_row) {
            *x += k * s;
        }
    };
    let col_add = |mat: &mut IntMat, dst: usize, src: usize, k: i128| {
        if k == 0 {
            return;
        }
        for row in mat.iter_mut() {
            let s = row[src];
            row[dst] += k * s;
        }
    };
    let col_swap = |mat: &mut IntMat, a: usize, b: usize| {
        for row in mat.iter_mut() {
            row.swap(a, b);
        }
    };

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                let diagonal = (0..m.min(n)).map(|k| d[k][k].abs()).collect();
                return Snf { diagonal, u, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut d, t, pj);
            col_swap(&mut v, t, pj);

            let p = d[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                let k = d[i][t] / p;
                row_add(&mut d, i, t, -k);
                row_add(&mut u, i, t, -k);
                dirty |= d[i][t] != 0;
            }
            for j in t + 1..n {
                let k = d[t][j] / p;
                col_add(&mut d, j, t, -k);
                col_add(&mut v, j, t, -k);
                dirty |= d[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // Pivot must divide the rest; otherwise fold an offending row in.
            let offending = (t + 1..m).find(|&i| d[i][t + 1..].iter().any(|&x| x % p != 0));
            match offending {
                Some(i) => {
                    row_add(&mut d, t, i, 1);
                    row_add(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diagonal = (0..m.min(n)).map(|k| d[k][k].abs()).collect();
    Snf { diagonal, u, v }
}

/// Columns spanning the integer kernel of `a` (`m x cols`).
pub fn integer_kernel(a: &IntMat, cols: usize) -> Vec<Vec<i128>> {
    let snf = smith_normal_form(a, cols);
    let rank = snf.diagonal.iter().filter(|&&x| x != 0).count();
    (rank..cols)
        .map(|j| snf.v.iter().map(|row| row[j]).collect())
        .collect()
}

/// Invariant factors (those > 1) of `Z^rows / colspan(relations)`.
/// Returns `None` when the quotient is infinite.
pub fn quotient_invariants(relations: &[Vec<i128>], rows: usize) -> Option<Vec<u64>> {
    // Transpose so that relations become rows of an `rows x k` matrix.
    let k = relations.len();
    let mat: IntMat = (0..rows)
        .map(|i| relations.iter().map(|r| r[i]).collect())
        .collect();
    let snf = smith_normal_form(&mat, k);
    let mut out = Vec::new();
    for i in 0..rows {
        let d = snf.diagonal.get(i).copied().unwrap_or(0);
        if d == 0 {
            return None;
        }
        if d > 1 {
            out.push(u64::try_from(d).ok()?);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn snf_reconstructs_diagonal() {
        let a: IntMat = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let snf = smith_normal_form(&a, 3);
        assert_eq!(snf.diagonal, vec![2, 6, 12]);
        let d = mat_mul(&mat_mul(&snf.u, &a), &snf.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { snf.diagonal[i] } else { 0 });
            }
        }
    }

    #[test]
    fn quotient_of_diag_2_3_is_cyclic_6() {
        let rel = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(quotient_invariants(&rel, 2), Some(vec![6]));
        assert_eq!(quotient_invariants(&[vec![2, 0]], 2), None);
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let a: IntMat = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ker = integer_kernel(&a, 3);
        assert_eq!(ker.len(), 2);
        for v in ker {
            for row in &a {
                assert_eq!(row.iter().zip(&v).map(|(x, y)| x * y).sum::<i128>(), 0);
            }
        }
    }
}
