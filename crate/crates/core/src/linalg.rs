//! Dense matrices and Gauss-Jordan elimination over any [`Field`].

use crate::gf::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn empty(cols: usize) -> Self {
        Matrix {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> E {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[E]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// Stacks the rows of `other` below `self`.
    pub fn stack(&self, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.cols);
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn truncate_rows(&mut self, rows: usize) {
        if rows < self.rows {
            self.rows = rows;
            self.data.truncate(rows * self.cols);
        }
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

/// Brings `m` to reduced row echelon form in place, drops zero rows, and
/// returns the pivot columns. Only the first `pivot_limit` columns are
/// eligible as pivots.
pub fn rref_limited<F: Field>(field: &F, m: &mut Matrix<F::Elem>, pivot_limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    let cols = m.cols;
    for col in 0..pivot_limit.min(cols) {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !field.is_zero(m.get(r, col))) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
        if inv != field.one() {
            for c in col..cols {
                let v = m.get(row, c);
                m.set(row, c, field.mul(v, inv));
            }
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if field.is_zero(factor) {
                continue;
            }
            for c in col..cols {
                let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate_rows(row);
    pivots
}

/// Full reduced row echelon form; see [`rref_limited`].
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let cols = m.cols;
    rref_limited(field, m, cols)
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(field, &mut work).len()
}

/// Basis of the right null space `{x : M x = 0}` of a matrix already in RREF
/// with the given pivots.
pub fn nullspace_of_rref<F: Field>(
    field: &F,
    reduced: &Matrix<F::Elem>,
    pivots: &[usize],
) -> Vec<Vec<F::Elem>> {
    let cols = reduced.cols;
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(reduced.get(r, free));
            }
            v
        })
        .collect()
}

pub fn nullspace<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref(field, &mut work);
    nullspace_of_rref(field, &work, &pivots)
}

/// Solution set of an augmented system `[A | b]`: a particular solution and a
/// basis of the homogeneous solutions, or `None` when inconsistent.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<E> {
    pub particular: Vec<E>,
    pub homogeneous: Vec<Vec<E>>,
}

/// Solves an augmented system whose last column holds the right-hand side.
pub fn solve_augmented<F: Field>(
    field: &F,
    augmented: &Matrix<F::Elem>,
) -> Option<AffineSolution<F::Elem>> {
    let mut work = augmented.clone();
    let unknowns = work.cols - 1;
    let pivots = rref(field, &mut work);
    solution_from_rref(field, &work, &pivots, unknowns)
}

/// Reads the solution set off an augmented RREF.
pub fn solution_from_rref<F: Field>(
    field: &F,
    reduced: &Matrix<F::Elem>,
    pivots: &[usize],
    unknowns: usize,
) -> Option<AffineSolution<F::Elem>> {
    if pivots.last() == Some(&unknowns) {
        return None;
    }
    let mut particular = vec![field.zero(); unknowns];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = reduced.get(r, unknowns);
    }
    let mut is_pivot = vec![false; unknowns];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let homogeneous = (0..unknowns)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); unknowns];
            v[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(reduced.get(r, free));
            }
            v
        })
        .collect();
    Some(AffineSolution {
        particular,
        homogeneous,
    })
}

pub fn mat_vec<F: Field>(field: &F, m: &Matrix<F::Elem>, x: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(m.cols, x.len());
    (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .zip(x)
                .fold(field.zero(), |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{ExactField, Fp, PrimeField};
    use crate::Rational;
    use proptest::prelude::*;

    fn f17() -> PrimeField {
        PrimeField::new(17).unwrap()
    }

    fn mat(f: &PrimeField, cols: usize, rows: &[&[u64]]) -> Matrix<Fp> {
        Matrix::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| f.elem(x)).collect()).collect(),
        )
    }

    #[test]
    fn rref_identity_and_dependent_rows() {
        let f = f17();
        let mut m = mat(&f, 3, &[&[2, 4, 6], &[1, 2, 3], &[0, 1, 5]]);
        let pivots = rref(&f, &mut m);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rows(), 2);
        assert_eq!(m.row(0), &[Fp::ONE, Fp::ZERO, f.elem_signed(3 - 10)][..]);
        assert_eq!(m.row(1), &[Fp::ZERO, Fp::ONE, f.elem(5)][..]);
    }

    #[test]
    fn inconsistent_system_detected() {
        let f = f17();
        // x + y = 1, x + y = 2
        let m = mat(&f, 3, &[&[1, 1, 1], &[1, 1, 2]]);
        assert!(solve_augmented(&f, &m).is_none());
    }

    #[test]
    fn rational_elimination_agrees_with_known_solution() {
        let f = ExactField::<Rational>::new();
        let r = |n: i64, d: i64| Rational::new(n, d);
        // 2x + y = 1, x - y = 1/2  =>  x = 1/2, y = 0
        let m = Matrix::from_rows(3, vec![vec![r(2, 1), r(1, 1), r(1, 1)], vec![r(1, 1), r(-1, 1), r(1, 2)]]);
        let sol = solve_augmented(&f, &m).unwrap();
        assert_eq!(sol.particular, vec![r(1, 2), r(0, 1)]);
        assert!(sol.homogeneous.is_empty());
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_annihilated(
            rows in 1usize..5, cols in 1usize..6,
            seed in proptest::collection::vec(0u64..17, 30)
        ) {
            let f = f17();
            let m = Matrix::from_rows(cols, (0..rows)
                .map(|r| (0..cols).map(|c| f.elem(seed[(r * cols + c) % seed.len()])).collect())
                .collect());
            let ns = nullspace(&f, &m);
            prop_assert_eq!(ns.len() + rank(&f, &m), cols);
            for v in &ns {
                prop_assert!(mat_vec(&f, &m, v).iter().all(|x| *x == Fp::ZERO));
            }
        }

        #[test]
        fn rref_is_idempotent_and_row_space_preserving(
            seed in proptest::collection::vec(0u64..17, 12)
        ) {
            let f = f17();
            let m = Matrix::from_rows(4, seed.chunks(4).map(|c| c.iter().map(|&x| f.elem(x)).collect()).collect());
            let mut once = m.clone();
            rref(&f, &mut once);
            let mut twice = once.clone();
            rref(&f, &mut twice);
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(rank(&f, &m.stack(&once)), once.rows());
        }
    }
}
