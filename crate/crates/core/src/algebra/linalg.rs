//! Exact dense linear algebra over a [`Field`].
//!
//! Determinants use Bareiss' fraction-free elimination; solving and null
//! spaces go through a reduced row echelon form. Infeasibility is always a
//! certified statement (a pivot in the right-hand-side column), never a
//! tolerance decision.


use super::field::Field;
use super::poly::Poly;

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains(c)).collect()
    }
}

pub fn rref<F: Field>(matrix: &[Vec<F>], cols: usize) -> Rref<F> {
    let mut rows: Vec<Vec<F>> = matrix.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Rref { rows, pivots, cols }
}

/// Basis of `{x : A x = 0}`, one vector per free column (that entry set to 1).
pub fn null_space<F: Field>(matrix: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let red = rref(matrix, cols);
    red.free_columns()
        .into_iter()
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (r, &pc) in red.pivots.iter().enumerate() {
                v[pc] = -red.rows[r][free].clone();
            }
            v
        })
        .collect()
}

/// A particular solution of `A x = b`, or `None` when the system is
/// inconsistent. Free variables take the values `free_value(column)`.
pub fn solve_with<F: Field>(
    matrix: &[Vec<F>],
    rhs: &[F],
    cols: usize,
    free_value: impl Fn(usize) -> F,
) -> Option<Vec<F>> {
    let augmented: Vec<Vec<F>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let red = rref(&augmented, cols + 1);
    if red.pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    let free: Vec<usize> = (0..cols).filter(|c| !red.pivots.contains(c)).collect();
    for &f in &free {
        x[f] = free_value(f);
    }
    for (r, &pc) in red.pivots.iter().enumerate() {
        let mut v = red.rows[r][cols].clone();
        for &f in &free {
            v = v - red.rows[r][f].clone() * x[f].clone();
        }
        x[pc] = v;
    }
    Some(x)
}

/// Particular solution with every free variable set to zero.
pub fn solve<F: Field>(matrix: &[Vec<F>], rhs: &[F], cols: usize) -> Option<Vec<F>> {
    solve_with(matrix, rhs, cols, |_| F::zero())
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn determinant<F: Field>(matrix: &[Vec<F>]) -> F {
    let n = matrix.len();
    if n == 0 {
        return F::one();
    }
    let mut m = matrix.to_vec();
    let mut sign = F::one();
    let mut prev = F::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return F::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Determinant of a small square matrix of polynomials by cofactor expansion.
pub fn poly_determinant<F: Field>(matrix: &[Vec<Poly<F>>]) -> Poly<F> {
    let n = matrix.len();
    match n {
        0 => Poly::one(),
        1 => matrix[0][0].clone(),
        _ => {
            let mut acc = Poly::zero();
            for (j, entry) in matrix[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly<F>>> = matrix[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = entry * &poly_determinant(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}
