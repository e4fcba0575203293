//! Exact linear algebra used by the dependence search and by Bass descent:
//! kernels and inhomogeneous solves over field domains, and integer linear
//! solves through a column-echelon (Hermite-style) reduction.
//!
//! Unknowns are columns, equations are rows. Kernel bases come from the
//! reduced row echelon form with a fixed column order, so they are canonical
//! regardless of pivot-row heuristics.

use crate::scalar::{Domain, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Sparse rows: sorted `(column, value)` pairs, zeros absent.
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn push_row(&mut self, mut row: Vec<(usize, Scalar)>) {
        row.sort_by_key(|(c, _)| *c);
        row.retain(|(_, v)| !v.is_zero());
        self.rows.push(row);
    }
}

fn row_get(row: &[(usize, Scalar)], col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `dst - f * src`, merging sorted sparse rows.
fn row_axpy(domain: &Domain, dst: &[(usize, Scalar)], f: &Scalar, src: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i >= dst.len() || src[j].0 < dst[i].0 {
            let v = domain.neg(&domain.mul(f, &src[j].1));
            if !v.is_zero() {
                out.push((src[j].0, v));
            }
            j += 1;
        } else {
            let v = domain.sub(&dst[i].1, &domain.mul(f, &src[j].1));
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct Echelon {
    /// `(pivot column, reduced row)` in column order; pivot rows are reduced
    /// against each other, so together they form the RREF.
    pivots: Vec<(usize, Vec<(usize, Scalar)>)>,
    free_cols: Vec<usize>,
}

fn echelon(domain: &Domain, m: &SparseMatrix) -> Echelon {
    let mut active: Vec<Vec<(usize, Scalar)>> = m.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut pivots: Vec<(usize, Vec<(usize, Scalar)>)> = Vec::new();
    let mut free_cols = Vec::new();
    for col in 0..m.ncols {
        // pick the sparsest active row with a nonzero entry in this column
        let cand = active
            .iter()
            .enumerate()
            .filter(|(_, r)| row_get(r, col).is_some())
            .min_by_key(|(i, r)| (r.len(), *i))
            .map(|(i, _)| i);
        let Some(ri) = cand else {
            free_cols.push(col);
            continue;
        };
        let mut pivot_row = active.swap_remove(ri);
        let inv = domain.inv(row_get(&pivot_row, col).unwrap()).expect("pivot is nonzero in a field");
        if !inv.is_one() {
            for (_, v) in pivot_row.iter_mut() {
                *v = domain.mul(&inv, v);
            }
        }
        for row in active.iter_mut() {
            if let Some(f) = row_get(row, col).cloned() {
                *row = row_axpy(domain, row, &f, &pivot_row);
            }
        }
        active.retain(|r| !r.is_empty());
        for (_, prow) in pivots.iter_mut() {
            if let Some(f) = row_get(prow, col).cloned() {
                *prow = row_axpy(domain, prow, &f, &pivot_row);
            }
        }
        pivots.push((col, pivot_row));
    }
    Echelon { pivots, free_cols }
}

/// Canonical kernel basis: one vector per free column, in column order. The
/// vector for free column `f` has a 1 at `f` and the negated reduced-row
/// entries at the pivot columns.
pub fn kernel_basis(domain: &Domain, m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let ech = echelon(domain, m);
    let mut out = Vec::new();
    for &f in &ech.free_cols {
        let mut v = vec![domain.zero(); m.ncols];
        v[f] = domain.one();
        for (pc, prow) in &ech.pivots {
            if let Some(x) = row_get(prow, f) {
                v[*pc] = domain.neg(x);
            }
        }
        out.push(v);
    }
    out
}

/// Exact solve of `M x = rhs` over a field domain. Free variables are zero.
pub fn solve(domain: &Domain, m: &SparseMatrix, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows.len(), rhs.len());
    // augment with the rhs as one extra column and reuse the echelon pass
    let mut aug = SparseMatrix::new(m.ncols + 1);
    for (row, b) in m.rows.iter().zip(rhs) {
        let mut r = row.clone();
        if !b.is_zero() {
            r.push((m.ncols, b.clone()));
        }
        aug.push_row(r);
    }
    let ech = echelon(domain, &aug);
    // inconsistent iff the augmented column is a pivot
    if ech.pivots.iter().any(|(c, _)| *c == m.ncols) {
        return None;
    }
    let mut x = vec![domain.zero(); m.ncols];
    for (pc, prow) in &ech.pivots {
        if let Some(v) = row_get(prow, m.ncols) {
            x[*pc] = v.clone();
        }
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Integer systems
// ---------------------------------------------------------------------------

/// Exact solve of `A x = b` over the integers via a column-echelon reduction
/// with a tracked unimodular column transform. Returns `None` when no
/// integral solution exists.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = a.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let n = a[0].len();
    assert!(a.iter().all(|r| r.len() == n));
    assert_eq!(b.len(), m);
    if n == 0 {
        return b.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let mut mat: Vec<Vec<BigInt>> = a.to_vec();
    // v tracks column operations: the echelon solution maps back by x = V y
    let mut v: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() }).collect())
        .collect();

    fn col_swap(mat: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_submul(mat: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        for row in mat.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
        for row in v.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    }
    fn col_neg(mat: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], i: usize) {
        for row in mat.iter_mut() {
            row[i] = -row[i].clone();
        }
        for row in v.iter_mut() {
            row[i] = -row[i].clone();
        }
    }

    let mut pivot_of_row = vec![usize::MAX; m];
    let mut slot = 0usize;
    for row in 0..m {
        if slot >= n {
            break;
        }
        let Some(j) = (slot..n).find(|&j| !mat[row][j].is_zero()) else {
            continue;
        };
        if j != slot {
            col_swap(&mut mat, &mut v, slot, j);
        }
        while (slot + 1..n).any(|j| !mat[row][j].is_zero()) {
            for j in (slot + 1)..n {
                if mat[row][j].is_zero() {
                    continue;
                }
                if mat[row][slot].is_zero() || mat[row][j].abs() < mat[row][slot].abs() {
                    col_swap(&mut mat, &mut v, slot, j);
                }
                if mat[row][j].is_zero() {
                    continue;
                }
                let q = &mat[row][j] / &mat[row][slot];
                col_submul(&mut mat, &mut v, j, slot, &q);
            }
        }
        if mat[row][slot].is_negative() {
            col_neg(&mut mat, &mut v, slot);
        }
        pivot_of_row[row] = slot;
        slot += 1;
    }

    // forward substitution over the echelon columns
    let mut y = vec![BigInt::zero(); n];
    for row in 0..m {
        let mut residual = b[row].clone();
        for j in 0..slot {
            if j != pivot_of_row[row] {
                residual -= &mat[row][j] * &y[j];
            }
        }
        let c = pivot_of_row[row];
        if c != usize::MAX {
            // the pivot entry was not folded into the residual above
            let (q, rem) = num_integer::Integer::div_rem(&residual, &mat[row][c]);
            if !rem.is_zero() {
                return None;
            }
            y[c] = q;
        } else if !residual.is_zero() {
            return None;
        }
    }

    let x: Vec<BigInt> = (0..n)
        .map(|i| {
            let mut acc = BigInt::zero();
            for (j, yj) in y.iter().enumerate() {
                acc += &v[i][j] * yj;
            }
            acc
        })
        .collect();
    debug_assert!(a
        .iter()
        .zip(b)
        .all(|(row, bi)| row.iter().zip(&x).map(|(c, xi)| c * xi).sum::<BigInt>() == *bi));
    Some(x)
}

/// Is `target` in the integer column span of `basis` (columns)? Used as the
/// exact augmentation-lattice obstruction in descent.
pub fn in_lattice(basis: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    if basis.is_empty() {
        return target.iter().all(|t| t.is_zero());
    }
    let m = basis[0].len();
    let a: Vec<Vec<BigInt>> = (0..m).map(|r| basis.iter().map(|col| col[r].clone()).collect()).collect();
    solve_integer(&a, target).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Domain {
        Domain::Rational
    }

    fn s(d: &Domain, v: i64) -> Scalar {
        d.from_integer(v)
    }

    #[test]
    fn kernel_of_rank_one_system() {
        let d = q();
        let mut m = SparseMatrix::new(3);
        m.push_row(vec![(0, s(&d, 1)), (1, s(&d, 1)), (2, s(&d, 1))]);
        let k = kernel_basis(&d, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let mut acc = d.zero();
            for x in v {
                acc = d.add(&acc, x);
            }
            assert!(acc.is_zero());
        }
        // canonical: first kernel vector belongs to the first free column
        assert!(k[0][1].is_one());
        assert!(k[0][2].is_zero());
    }

    #[test]
    fn kernel_empty_for_independent_columns() {
        let d = Domain::fp(5).unwrap();
        let mut m = SparseMatrix::new(2);
        m.push_row(vec![(0, s(&d, 1))]);
        m.push_row(vec![(1, s(&d, 2))]);
        assert!(kernel_basis(&d, &m).is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let d = q();
        let mut m = SparseMatrix::new(2);
        m.push_row(vec![(0, s(&d, 2)), (1, s(&d, 1))]);
        m.push_row(vec![(0, s(&d, 1))]);
        let x = solve(&d, &m, &[s(&d, 5), s(&d, 2)]).unwrap();
        assert_eq!(x[0].to_string(), "2");
        assert_eq!(x[1].to_string(), "1");

        let mut bad = SparseMatrix::new(1);
        bad.push_row(vec![(0, s(&d, 1))]);
        bad.push_row(vec![(0, s(&d, 1))]);
        assert!(solve(&d, &bad, &[s(&d, 1), s(&d, 2)]).is_none());
    }

    #[test]
    fn integer_solve_divisibility() {
        let a = vec![vec![BigInt::from(2)]];
        assert_eq!(solve_integer(&a, &[BigInt::from(6)]).unwrap(), vec![BigInt::from(3)]);
        assert!(solve_integer(&a, &[BigInt::from(3)]).is_none());

        // 2x + 3y = 1 has integer solutions
        let a = vec![vec![BigInt::from(2), BigInt::from(3)]];
        let x = solve_integer(&a, &[BigInt::from(1)]).unwrap();
        assert_eq!(&x[0] * 2 + &x[1] * 3, BigInt::from(1));
    }

    #[test]
    fn integer_solve_multi_row() {
        // x + y = 4, x - y = 2  =>  x = 3, y = 1
        let a = vec![
            vec![BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(-1)],
        ];
        let x = solve_integer(&a, &[BigInt::from(4), BigInt::from(2)]).unwrap();
        assert_eq!(x, vec![BigInt::from(3), BigInt::from(1)]);
        // x + y = 1, x + y = 2 inconsistent
        let a = vec![
            vec![BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(1)],
        ];
        assert!(solve_integer(&a, &[BigInt::from(1), BigInt::from(2)]).is_none());
    }

    #[test]
    fn lattice_membership() {
        let basis = vec![vec![BigInt::from(2), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        assert!(in_lattice(&basis, &[BigInt::from(4), BigInt::from(-3)]));
        assert!(!in_lattice(&basis, &[BigInt::from(1), BigInt::from(0)]));
    }
}
