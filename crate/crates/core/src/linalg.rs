//! Dense exact linear algebra over fields.

use crate::scalar::Field;

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref<F: Field>(mut a: Vec<Vec<F>>) -> (Vec<Vec<F>>, Vec<usize>) {
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse().expect("nonzero field element");
        for x in a[r].iter_mut() {
            *x = x.mul_ref(&inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = x.sub_ref(&f.mul_ref(y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(pivots.len());
    (a, pivots)
}

/// Basis of `{ v : A v = 0 }`.
pub fn nullspace<F: Field>(a: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let (r, pivots) = rref(a);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Incrementally built row echelon basis used for normal forms modulo a
/// subspace.
#[derive(Debug, Clone)]
pub struct Echelon<F> {
    rows: Vec<(usize, Vec<F>)>,
    ncols: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { rows: Vec::new(), ncols }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.sub_ref(&f.mul_ref(y));
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.ncols);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse().expect("nonzero field element");
        for x in v.iter_mut() {
            *x = x.mul_ref(&inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x = x.sub_ref(&f.mul_ref(y));
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: Vec<F>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

/// Solves `A x = b`, where the columns of `A` are given. Returns `None` when
/// `b` is outside the column span, and `Err(j)` with a redundant column when
/// the solution is not unique.
pub fn solve_columns<F: Field>(cols: &[Vec<F>], b: &[F]) -> Result<Option<Vec<F>>, usize> {
    let nrows = b.len();
    let n = cols.len();
    let a: Vec<Vec<F>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<F> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(a);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    if let Some(j) = (0..n).find(|j| !pivots.contains(j)) {
        return Err(j);
    }
    Ok(Some(r.iter().map(|row| row[n].clone()).collect()))
}

/// Some solution of `A x = b` with free variables set to zero, or `None`
/// when the system is inconsistent.
pub fn solve_any<F: Field>(cols: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = cols.len();
    let a: Vec<Vec<F>> = (0..b.len())
        .map(|i| {
            let mut row: Vec<F> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(a);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[row][n].clone();
    }
    Some(x)
}
