//! Exact Gaussian elimination over a supported field, used to solve the
//! homogeneous-identity systems of the integral-relation finder.

use crate::numfield::FieldElement;

/// Solve A x = b exactly. Returns any solution with free variables set to
/// zero, or None when the system is inconsistent.
pub fn solve(mut a: Vec<Vec<FieldElement>>, mut b: Vec<FieldElement>) -> Option<Vec<FieldElement>> {
    let rows = a.len();
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let field = if cols > 0 { a[0][0].field() } else { b[0].field() };
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        // find a pivot in column c at or below row r
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].inv();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..cols {
                    let t = &factor * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
                let t = &factor * &b[r];
                b[i] = &b[i] - &t;
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency: remaining rows must have zero rhs
    for i in r..rows {
        if !b[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![FieldElement::zero(field); cols];
    for (c, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(row) = pivot {
            x[c] = b[*row].clone();
        }
    }
    Some(x)
}
