//! Exact integer linear algebra: lattice vectors and matrices over
//! arbitrary-precision integers, Smith and Hermite normal forms, saturated
//! kernels, cokernel presentations, and exact rational solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Int = BigInt;
pub type Rat = BigRational;

/// A vector with integer entries, used both for lattice points and for
/// integral linear functionals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub Vec<Int>);

impl LatticeVector {
    pub fn new(entries: Vec<Int>) -> Self {
        LatticeVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        LatticeVector(vec![Int::zero(); n])
    }

    /// Standard basis vector `e_i` of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![Int::zero(); n];
        v[i] = Int::one();
        LatticeVector(v)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &LatticeVector) -> Int {
        assert_eq!(self.len(), other.len(), "dot of mismatched lengths");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.len(), other.len());
        LatticeVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.len(), other.len());
        LatticeVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Int) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * c).collect())
    }

    /// gcd of the absolute values of the entries; zero for the zero vector.
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for x in &self.0 {
            g = g.gcd(x);
        }
        g
    }

    /// The primitive vector on the same ray: entries divided by their gcd.
    /// The zero vector is returned unchanged.
    pub fn primitive(&self) -> LatticeVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|x| x / &g).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl LatticeMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LatticeMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Int::one();
        }
        m
    }

    /// Build from row vectors. The column count must be passed explicitly so
    /// that matrices with zero rows still know their shape.
    pub fn from_rows(cols: usize, rows: &[LatticeVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            for j in 0..cols {
                *m.get_mut(i, j) = r.0[j].clone();
            }
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[LatticeVector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in 0..rows {
                *m.get_mut(i, j) = c.0[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> LatticeMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *m.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &LatticeMatrix) -> LatticeMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.get(k, j);
                    *m.get_mut(i, j) += t;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        LatticeVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v.0[j]).sum())
                .collect(),
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i -= q * row_k
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * self.get(k, j);
            *self.get_mut(i, j) -= t;
        }
    }

    /// col_j -= q * col_k
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = q * self.get(i, k);
            *self.get_mut(i, j) -= t;
        }
    }

    /// row_i += row_k
    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            let t = self.get(k, j).clone();
            *self.get_mut(i, j) += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -self.get(i, j).clone();
            *self.get_mut(i, j) = t;
        }
    }
}

impl fmt::Debug for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Smith decomposition `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal with nonnegative entries forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: LatticeMatrix,
    pub d: LatticeMatrix,
    pub v: LatticeMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `d` as a vector of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Smith normal form by elementary row and column operations. Pivots are
/// chosen of minimal absolute value; the reduce-and-swap loop terminates
/// because that value strictly decreases.
pub fn smith_normal_form(a: &LatticeMatrix) -> SmithDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = LatticeMatrix::identity(r);
    let mut v = LatticeMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        // Locate a nonzero entry of minimal absolute value in the submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if d.get(i, j).is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => d.get(i, j).abs() < d.get(pi, pj).abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        'reduce: loop {
            for i in t + 1..r {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                d.row_sub_mul(i, t, &q);
                u.row_sub_mul(i, t, &q);
                if !d.get(i, t).is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    continue 'reduce;
                }
            }
            for j in t + 1..c {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                d.col_sub_mul(j, t, &q);
                v.col_sub_mul(j, t, &q);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    continue 'reduce;
                }
            }
            // Row and column t are clear. Pull in any entry the pivot does
            // not divide so the diagonal ends up a divisibility chain.
            let p = d.get(t, t).clone();
            let mut offender = None;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !d.get(i, j).mod_floor(&p).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    d.row_add(t, i);
                    u.row_add(t, i);
                    continue 'reduce;
                }
                None => break 'reduce,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, d, v }
}

/// Rank over the rationals, by exact Gaussian elimination.
pub fn rank(a: &LatticeMatrix) -> usize {
    let mut m: Vec<Vec<Rat>> = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| Rat::from_integer(a.get(i, j).clone()))
                .collect()
        })
        .collect();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let Some(p) = (row..a.rows()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for i in row + 1..a.rows() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &m[row][col];
            for j in col..a.cols() {
                let t = &f * &m[row][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
        row += 1;
    }
    row
}

/// Determinant of a square matrix by Bareiss fraction-free elimination.
pub fn determinant(a: &LatticeMatrix) -> Int {
    assert_eq!(a.rows(), a.cols(), "determinant of non-square matrix");
    let n = a.rows();
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Int::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                *m.get_mut(i, j) = t / &prev;
            }
            *m.get_mut(i, k) = Int::zero();
        }
        prev = m.get(k, k).clone();
    }
    sign * m.get(n - 1, n - 1).clone()
}

/// Canonical basis for the row lattice: Hermite normal form rows, pivots
/// positive, entries above each pivot reduced into `[0, pivot)`. Zero rows
/// are dropped.
pub fn hermite_row_basis(rows: &[LatticeVector], cols: usize) -> Vec<LatticeVector> {
    let mut m = LatticeMatrix::from_rows(cols, rows);
    let r = m.rows();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == r {
            break;
        }
        if (pivot_row..r).all(|i| m.get(i, col).is_zero()) {
            continue;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..r {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => m.get(i, col).abs() < m.get(b, col).abs(),
                };
                if better {
                    best = Some(i);
                }
            }
            let b = best.expect("nonzero column");
            m.swap_rows(pivot_row, b);
            let mut any_left = false;
            for i in pivot_row + 1..r {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let q = m.get(i, col).div_floor(m.get(pivot_row, col));
                m.row_sub_mul(i, pivot_row, &q);
                if !m.get(i, col).is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if m.get(pivot_row, col).is_negative() {
            m.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = m.get(i, col).div_floor(m.get(pivot_row, col));
            m.row_sub_mul(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (0..pivot_row).map(|i| m.row(i)).collect()
}

/// Basis of the integer kernel `{x : a x = 0}`. The basis spans a saturated
/// sublattice (Smith columns of a unimodular matrix), returned in Hermite
/// canonical form.
pub fn kernel_basis(a: &LatticeMatrix) -> Vec<LatticeVector> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let mut gens = Vec::new();
    for j in 0..a.cols() {
        let free = j >= diag.len() || diag[j].is_zero();
        if free {
            gens.push(snf.v.col(j));
        }
    }
    hermite_row_basis(&gens, a.cols())
}

/// Cokernel of `a` as a map into `Z^rows`: free rank, torsion invariants
/// (each dividing the next, invariants equal to 1 omitted), and an integer
/// matrix projecting a codomain vector onto coordinates of the free part.
#[derive(Clone, Debug)]
pub struct CokernelData {
    pub free_rank: usize,
    pub torsion_invariants: Vec<Int>,
    pub projection: LatticeMatrix,
}

pub fn cokernel(a: &LatticeMatrix) -> CokernelData {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let mut torsion = Vec::new();
    let mut free_rows = Vec::new();
    for i in 0..a.rows() {
        let d = if i < diag.len() {
            diag[i].clone()
        } else {
            Int::zero()
        };
        if d.is_zero() {
            free_rows.push(snf.u.row(i));
        } else if !d.is_one() {
            torsion.push(d);
        }
    }
    let projection = LatticeMatrix::from_rows(a.rows(), &free_rows);
    CokernelData {
        free_rank: free_rows.len(),
        torsion_invariants: torsion,
        projection,
    }
}

/// One exact rational solution of `a x = b`, or `None` if the system is
/// inconsistent. Free variables (non-pivot columns, scanned left to right)
/// are set to zero, which makes the choice deterministic.
pub fn solve_rational(a: &LatticeMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let rows = a.rows();
    let cols = a.cols();
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> = (0..cols)
                .map(|j| Rat::from_integer(a.get(i, j).clone()))
                .collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for j in col..=cols {
            m[row][j] = &m[row][j] * &inv;
        }
        for i in 0..rows {
            if i == row || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=cols {
                let t = &f * &m[row][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    for i in row..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, c) in pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// One integer solution of `a x = b`, or `None` if no integer solution
/// exists. Computed through the Smith decomposition, so the particular
/// solution is deterministic.
pub fn solve_integer(a: &LatticeMatrix, b: &LatticeVector) -> Option<LatticeVector> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let ub = snf.u.mul_vec(b);
    let mut y = vec![Int::zero(); a.cols()];
    for i in 0..a.rows() {
        let d = if i < diag.len() {
            diag[i].clone()
        } else {
            Int::zero()
        };
        if d.is_zero() {
            if !ub.0[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub.0[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&LatticeVector(y)))
}

/// Convert an integer vector to rationals.
pub fn to_rational(v: &LatticeVector) -> Vec<Rat> {
    v.0.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Round-trip check: does the rational vector have integer entries?
pub fn rational_to_integer(v: &[Rat]) -> Option<LatticeVector> {
    let mut out = Vec::with_capacity(v.len());
    for x in v {
        if !x.is_integer() {
            return None;
        }
        out.push(x.to_integer());
    }
    Some(LatticeVector(out))
}
