//! Exact rational scalars, vectors, matrices and linear algebra.
//!
//! Every quantity in this crate is a reduced arbitrary-precision rational;
//! no floating point enters any geometric computation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reduced arbitrary-precision rational (denominator always positive).
pub type Rat = BigRational;

/// Dense exact vector.
pub type RatVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses the literal forms `p` and `p/q`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let t = text.trim();
    Rat::from_str(t).map_err(|e| Error::Syntax {
        pos: 0,
        msg: format!("invalid rational literal `{t}`: {e}"),
    })
}

pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn vec_from_i64(entries: &[i64]) -> RatVec {
    entries.iter().map(|&n| rat(n)).collect()
}

pub fn zero_vec(dim: usize) -> RatVec {
    vec![Rat::zero(); dim]
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Rat, a: &[Rat]) -> RatVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg_vec(a: &[Rat]) -> RatVec {
    a.iter().map(|x| -x).collect()
}

pub fn one_norm(a: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for x in a {
        acc += x.abs();
    }
    acc
}

pub fn vec_to_string(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(rat_to_string).collect();
    format!("({})", parts.join(", "))
}

/// Scales a rational row to the unique coprime integer row with the same span
/// direction (positive scaling only). Returns the zero row unchanged.
pub fn primitive_integer_row(row: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = gcd.gcd(n);
    }
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|n| n / &gcd).collect()
}

/// Primitive integer row with the first nonzero entry positive. Used for
/// vectors whose sign carries no meaning (lineality generators, equations).
pub fn primitive_signed_row(row: &[Rat]) -> Vec<BigInt> {
    let mut ints = primitive_integer_row(row);
    if let Some(first) = ints.iter().find(|n| !n.is_zero()) {
        if first.is_negative() {
            for n in ints.iter_mut() {
                *n = -n.clone();
            }
        }
    }
    ints
}

pub fn row_from_ints(ints: &[BigInt]) -> RatVec {
    ints.iter().map(|n| Rat::from_integer(n.clone())).collect()
}

/// Dense exact matrix with fixed dimensions.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for RatMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", vec_to_string(self.row(i)))?;
        }
        write!(f, "]")
    }
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| vec_from_i64(r)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mat_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// v^T M, returned as a row vector.
    pub fn vec_mat(&self, v: &[Rat]) -> RatVec {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = Rat::zero();
                for i in 0..self.rows {
                    acc += &v[i] * self.get(i, j);
                }
                acc
            })
            .collect()
    }

    pub fn mat_mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Rat) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMat {
        RatMat::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }
}

/// Reduced row echelon form. Returns (rref, pivot columns).
fn rref(m: &RatMat) -> (RatMat, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a.get(r, j).clone();
                a.set(r, j, a.get(p, j).clone());
                a.set(p, j, tmp);
            }
        }
        let inv = a.get(r, c).recip();
        for j in 0..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i != r && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for j in 0..cols {
                    let v = a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank and a basis of the exact kernel of `m`.
pub fn rank_kernel(m: &RatMat) -> (usize, Vec<RatVec>) {
    let (red, pivots) = rref(m);
    let rank = pivots.len();
    let cols = m.ncols();
    let mut basis = Vec::with_capacity(cols - rank);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = zero_vec(cols);
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -red.get(r, free).clone();
        }
        basis.push(v);
    }
    (rank, basis)
}

pub fn rank(m: &RatMat) -> usize {
    rref(m).1.len()
}

/// Solves M x = b exactly. Returns None iff b is outside the range of M.
pub fn solve_linear(m: &RatMat, b: &[Rat]) -> Result<Option<RatVec>> {
    if b.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: b.len(),
        });
    }
    let cols = m.ncols();
    let mut aug = RatMat::zeros(m.nrows(), cols + 1);
    for i in 0..m.nrows() {
        for j in 0..cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, cols, b[i].clone());
    }
    let (red, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return Ok(None); // inconsistent row 0 = 1
    }
    let mut x = zero_vec(cols);
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = red.get(r, cols).clone();
    }
    Ok(Some(x))
}

/// Basis of the row space intersected test: true iff `v` lies in the column
/// space of `m`.
pub fn in_range(m: &RatMat, v: &[Rat]) -> bool {
    matches!(solve_linear(m, v), Ok(Some(_)))
}

/// Canonical basis of the subspace spanned by `vecs`: RREF rows scaled to
/// primitive integers with positive leading entry.
pub fn canonical_subspace_basis(vecs: &[RatVec], dim: usize) -> Vec<RatVec> {
    if vecs.is_empty() {
        return Vec::new();
    }
    debug_assert!(vecs.iter().all(|v| v.len() == dim));
    let (red, pivots) = rref(&RatMat::from_rows(vecs.to_vec()));
    (0..pivots.len())
        .map(|r| row_from_ints(&primitive_signed_row(red.row(r))))
        .collect()
}

/// Reduces `v` modulo the span of an RREF-canonical `basis` (zeroes out the
/// pivot coordinates). The result is a canonical coset representative.
pub fn reduce_mod_subspace(v: &[Rat], basis: &[RatVec]) -> RatVec {
    let mut out = v.to_vec();
    for b in basis {
        let Some(p) = b.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if !out[p].is_zero() {
            let f = &out[p] / &b[p];
            for j in 0..out.len() {
                let val = &out[j] - &f * &b[j];
                out[j] = val;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rand_rat(rng: &mut StdRng) -> Rat {
        ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
    }

    #[test]
    fn rank_kernel_identity() {
        let (r, k) = rank_kernel(&RatMat::identity(2));
        assert_eq!(r, 2);
        assert!(k.is_empty());
    }

    #[test]
    fn rank_kernel_gradient_rows() {
        // rows (0,1) and (0,-1): rank 1, kernel spanned by (1,0)
        let m = RatMat::from_i64(&[&[0, 1], &[0, -1]]);
        let (r, k) = rank_kernel(&m);
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec_from_i64(&[1, 0])]);
    }

    #[test]
    fn rank_kernel_zero_map() {
        let m = RatMat::zeros(3, 2);
        let (r, k) = rank_kernel(&m);
        assert_eq!(r, 0);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn solve_identity() {
        let b = vec_from_i64(&[3, -7]);
        let x = solve_linear(&RatMat::identity(2), &b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_consistent_underdetermined() {
        let m = RatMat::from_i64(&[&[0, 1], &[0, -1]]);
        let b = vec_from_i64(&[1, -1]);
        let x = solve_linear(&m, &b).unwrap().unwrap();
        assert_eq!(m.mat_vec(&x), b);
    }

    #[test]
    fn solve_inconsistent() {
        let m = RatMat::from_i64(&[&[0, 1], &[0, -1]]);
        let b = vec_from_i64(&[1, 1]);
        assert!(solve_linear(&m, &b).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = RatMat::identity(2);
        assert!(solve_linear(&m, &vec_from_i64(&[1, 2, 3])).is_err());
    }

    #[test]
    fn rank_plus_nullity_random() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let m = RatMat::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| rand_rat(&mut rng)).collect())
                    .collect(),
            );
            let (r, k) = rank_kernel(&m);
            assert_eq!(r + k.len(), cols);
            for v in &k {
                assert!(is_zero_vec(&m.mat_vec(v)));
            }
            // kernel vectors are linearly independent
            if !k.is_empty() {
                assert_eq!(rank(&RatMat::from_rows(k.clone())), k.len());
            }
        }
    }

    #[test]
    fn solve_resubstitutes_random() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let m = RatMat::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| rand_rat(&mut rng)).collect())
                    .collect(),
            );
            let b: RatVec = (0..rows).map(|_| rand_rat(&mut rng)).collect();
            if let Some(x) = solve_linear(&m, &b).unwrap() {
                assert_eq!(m.mat_vec(&x), b);
            } else {
                // certificate of inconsistency: rank grows with the column b
                let mut aug_rows = m.rows_vec();
                for (i, row) in aug_rows.iter_mut().enumerate() {
                    row.push(b[i].clone());
                }
                assert_eq!(rank(&RatMat::from_rows(aug_rows)), rank(&m) + 1);
            }
        }
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..200 {
            let a = rand_rat(&mut rng);
            let b = rand_rat(&mut rng);
            let c = rand_rat(&mut rng);
            assert_eq!(&a + &b, &b + &a);
            assert_eq!(&a * &b, &b * &a);
            assert_eq!((&a + &b) + &c, &a + (&b + &c));
            assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }
    }

    #[test]
    fn rational_literals_roundtrip() {
        for s in ["-3/2", "7", "0", "5/3"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(rat_to_string(&x), s);
        }
        assert_eq!(parse_rat("4/2").unwrap(), rat(2));
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn primitive_rows() {
        let row = vec![ratio(1, 2), ratio(-3, 4), rat(0)];
        assert_eq!(
            primitive_integer_row(&row),
            vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]
        );
        assert_eq!(
            primitive_signed_row(&vec![ratio(-1, 3), ratio(2, 3)]),
            vec![BigInt::from(1), BigInt::from(-2)]
        );
    }
}
