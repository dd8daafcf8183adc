//! Small dense exact linear algebra: rational matrices, Smith normal form,
//! LDLᵀ decomposition and bounded lattice-point enumeration.
//!
//! Everything here works on ranks ≤ 12, so the implementations favour clarity
//! over asymptotics. Integer matrix work uses `BigInt` throughout; Smith
//! normal form intermediates can grow well past machine words even for small
//! inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;
pub type IMat = Vec<Vec<BigInt>>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `x` reduced into `[0, m)`.
pub fn rem_mod(x: &Rat, m: i64) -> Rat {
    let m = rat(m);
    let q = (x / &m).floor();
    x - q * m
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn is_even_integer(x: &Rat) -> bool {
    is_integer(x) && x.numer().is_even()
}

/// Dense rational matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_fn(rows.len(), rows[0].len(), |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        QMat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                acc += self.at(i, k) * other.at(k, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * &v[k];
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Rat) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * s)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(is_integer)
    }

    pub fn to_int(&self) -> Option<IMat> {
        if !self.is_integral() {
            return None;
        }
        Some(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.at(i, j).numer().clone()).collect())
                .collect(),
        )
    }

    /// Determinant by fraction Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let pivot = (k..n).find(|&i| !a.at(i, k).is_zero());
            let Some(p) = pivot else { return Rat::zero() };
            if p != k {
                for j in 0..n {
                    let tmp = a.at(p, j).clone();
                    a.set(p, j, a.at(k, j).clone());
                    a.set(k, j, tmp);
                }
                det = -det;
            }
            let pk = a.at(k, k).clone();
            det *= &pk;
            for i in k + 1..n {
                let factor = a.at(i, k) / &pk;
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a.at(i, j) - &factor * a.at(k, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a.at(i, k).is_zero())?;
            if p != k {
                for j in 0..n {
                    let tmp = a.at(p, j).clone();
                    a.set(p, j, a.at(k, j).clone());
                    a.set(k, j, tmp);
                    let tmp = inv.at(p, j).clone();
                    inv.set(p, j, inv.at(k, j).clone());
                    inv.set(k, j, tmp);
                }
            }
            let pk = a.at(k, k).clone();
            for j in 0..n {
                a.set(k, j, a.at(k, j) / &pk);
                inv.set(k, j, inv.at(k, j) / &pk);
            }
            for i in 0..n {
                if i == k || a.at(i, k).is_zero() {
                    continue;
                }
                let factor = a.at(i, k).clone();
                for j in 0..n {
                    let v = a.at(i, j) - &factor * a.at(k, j);
                    a.set(i, j, v);
                    let v = inv.at(i, j) - &factor * inv.at(k, j);
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_f64().unwrap()).collect())
            .collect()
    }
}

/// `xᵀ G y`.
pub fn dot(g: &QMat, x: &[Rat], y: &[Rat]) -> Rat {
    let gy = g.mul_vec(y);
    let mut acc = Rat::zero();
    for (xi, gyi) in x.iter().zip(gy.iter()) {
        acc += xi * gyi;
    }
    acc
}

pub fn vec_add(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vec_neg(x: &[Rat]) -> Vec<Rat> {
    x.iter().map(|a| -a).collect()
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// `p * a * q = diag(d)` with `p`, `q` unimodular and `d1 | d2 | ...`, all
/// diagonal entries non-negative.
pub struct Snf {
    pub p: IMat,
    pub q: IMat,
    pub diag: Vec<BigInt>,
}

fn imat_identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn swap_rows(a: &mut IMat, i: usize, j: usize) {
    a.swap(i, j);
}

fn swap_cols(a: &mut IMat, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn add_row(a: &mut IMat, dst: usize, src: usize, c: &BigInt) {
    let n = a[0].len();
    for j in 0..n {
        let v = &a[dst][j] + c * &a[src][j];
        a[dst][j] = v;
    }
}

fn add_col(a: &mut IMat, dst: usize, src: usize, c: &BigInt) {
    for row in a.iter_mut() {
        let v = &row[dst] + c * &row[src];
        row[dst] = v;
    }
}

fn negate_row(a: &mut IMat, i: usize) {
    for v in a[i].iter_mut() {
        *v = -v.clone();
    }
}

pub fn smith_normal_form(input: &IMat) -> Snf {
    let rows = input.len();
    let cols = input[0].len();
    let mut a = input.clone();
    let mut p = imat_identity(rows);
    let mut q = imat_identity(cols);

    let n = rows.min(cols);
    for k in 0..n {
        'outer: loop {
            // Locate the minimal nonzero entry of the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !a[i][j].is_zero()
                        && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != k {
                swap_rows(&mut a, pi, k);
                swap_rows(&mut p, pi, k);
            }
            if pj != k {
                swap_cols(&mut a, pj, k);
                swap_cols(&mut q, pj, k);
            }
            if a[k][k].is_negative() {
                negate_row(&mut a, k);
                negate_row(&mut p, k);
            }
            // Reduce column k and row k by the pivot.
            let mut dirty = false;
            for i in k + 1..rows {
                if !a[i][k].is_zero() {
                    let c = -(&a[i][k] / &a[k][k]);
                    add_row(&mut a, i, k, &c);
                    add_row(&mut p, i, k, &c);
                    if !a[i][k].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !a[k][j].is_zero() {
                    let c = -(&a[k][j] / &a[k][k]);
                    add_col(&mut a, j, k, &c);
                    add_col(&mut q, j, k, &c);
                    if !a[k][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility pass: the pivot must divide the trailing block.
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        add_row(&mut a, k, i, &BigInt::one());
                        add_row(&mut p, k, i, &BigInt::one());
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }

    let diag: Vec<BigInt> = (0..n).map(|i| a[i][i].clone()).collect();
    Snf { p, q, diag }
}

pub fn imat_to_qmat(a: &IMat) -> QMat {
    QMat::from_fn(a.len(), a[0].len(), |i, j| Rat::from_integer(a[i][j].clone()))
}

// ---------------------------------------------------------------------------
// LDLᵀ and integer point enumeration under a positive quadratic form
// ---------------------------------------------------------------------------

/// `g = l · diag(d) · lᵀ` with `l` unit lower triangular. Fails when `g` is
/// not positive definite.
pub fn ldlt(g: &QMat) -> Result<(QMat, Vec<Rat>)> {
    let n = g.rows();
    assert!(g.is_symmetric(), "ldlt needs a symmetric matrix");
    let mut l = QMat::identity(n);
    let mut d = vec![Rat::zero(); n];
    for j in 0..n {
        let mut dj = g.at(j, j).clone();
        for k in 0..j {
            dj -= l.at(j, k) * l.at(j, k) * &d[k];
        }
        if dj <= Rat::zero() {
            return Err(Error::Domain("matrix is not positive definite".into()));
        }
        d[j] = dj;
        for i in j + 1..n {
            let mut v = g.at(i, j).clone();
            for k in 0..j {
                v -= l.at(i, k) * l.at(j, k) * &d[k];
            }
            l.set(i, j, v / &d[j]);
        }
    }
    Ok((l, d))
}

/// Enumerate integer vectors `c` with `Q(c + shift) ≤ bound`, where
/// `Q(x) = Σ d_i (x_i + Σ_{j>i} l_{ji} x_j)²` is the LDLᵀ form of a positive
/// definite Gram matrix. Works in `f64` with a small inflation margin, so a
/// point on the boundary may appear on either side of it; callers that need
/// exactness must re-check candidates with rational arithmetic.
///
/// The callback receives the integer coordinates and the `f64` value of `Q`.
pub struct F64Enumerator {
    pub l: Vec<Vec<f64>>,
    pub d: Vec<f64>,
}

impl F64Enumerator {
    pub fn new(l: &QMat, d: &[Rat]) -> Self {
        F64Enumerator { l: l.to_f64(), d: d.iter().map(|x| x.to_f64().unwrap()).collect() }
    }

    pub fn from_gram(basis_gram: &QMat) -> Result<Self> {
        let (l, d) = ldlt(basis_gram)?;
        Ok(Self::new(&l, &d))
    }

    /// Estimated number of enumerated points (ball volume over covolume).
    pub fn estimate_count(&self, bound: f64) -> f64 {
        let n = self.d.len();
        let det: f64 = self.d.iter().product();
        let r = bound.max(0.0).sqrt();
        // V_k = V_{k-2} * 2π/k, V_0 = 1, V_1 = 2.
        let mut v = vec![1.0f64; n + 1];
        if n >= 1 {
            v[1] = 2.0;
        }
        for k in 2..=n {
            v[k] = v[k - 2] * std::f64::consts::TAU / k as f64;
        }
        v[n] * r.powi(n as i32) / det.sqrt().max(f64::MIN_POSITIVE)
    }

    pub fn enumerate(&self, shift: &[f64], bound: f64, mut on_point: impl FnMut(&[i64], f64)) {
        let n = self.d.len();
        if n == 0 {
            return;
        }
        let bound = bound * (1.0 + 1e-12) + 1e-12;
        let mut c = vec![0i64; n];
        let mut x = vec![0.0f64; n]; // x_j = c_j + shift_j for fixed levels
        self.recurse(n - 1, 0.0, bound, shift, &mut c, &mut x, &mut on_point);
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &self,
        level: usize,
        acc: f64,
        bound: f64,
        shift: &[f64],
        c: &mut Vec<i64>,
        x: &mut Vec<f64>,
        on_point: &mut impl FnMut(&[i64], f64),
    ) {
        // y_level = (c + shift)_level + Σ_{j>level} l[j][level] * x_j
        let mut t = shift[level];
        for j in level + 1..self.d.len() {
            t += self.l[j][level] * x[j];
        }
        let dk = self.d[level];
        let rem = bound - acc;
        if rem < 0.0 {
            return;
        }
        let hw = (rem / dk).sqrt();
        let lo = (-t - hw).ceil() as i64;
        let hi = (-t + hw).floor() as i64;
        for ci in lo..=hi {
            let y = ci as f64 + t;
            let q = dk * y * y;
            if q > rem {
                continue;
            }
            c[level] = ci;
            x[level] = ci as f64 + shift[level];
            if level == 0 {
                on_point(c, acc + q);
            } else {
                self.recurse(level - 1, acc + q, bound, shift, c, x, on_point);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_matches_known_form() {
        let m: IMat = vec![
            vec![(-6).into(), 111.into(), (-36).into(), 6.into()],
            vec![5.into(), (-672).into(), 210.into(), 74.into()],
            vec![0.into(), (-255).into(), 81.into(), 24.into()],
            vec![(-7).into(), 255.into(), (-81).into(), (-10).into()],
        ];
        let snf = smith_normal_form(&m);
        let d: Vec<i64> = snf.diag.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 3, 21, 0]);
        // p * m * q = diag
        let pm = imat_to_qmat(&snf.p).mul(&imat_to_qmat(&m)).mul(&imat_to_qmat(&snf.q));
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { Rat::from_integer(snf.diag[i].clone()) } else { Rat::zero() };
                assert_eq!(*pm.at(i, j), expect, "entry ({i},{j})");
            }
        }
        // transforms unimodular
        assert_eq!(imat_to_qmat(&snf.p).det().abs(), Rat::one());
        assert_eq!(imat_to_qmat(&snf.q).det().abs(), Rat::one());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMat::from_int_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(3));
        assert_eq!(m.det(), rat(4));
    }

    #[test]
    fn ldlt_reconstructs() {
        let g = QMat::from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        let (l, d) = ldlt(&g).unwrap();
        let mut dm = QMat::zeros(2, 2);
        for i in 0..2 {
            dm.set(i, i, d[i].clone());
        }
        assert_eq!(l.mul(&dm).mul(&l.transpose()), g);
    }

    #[test]
    fn enumerate_a2_norm_two_vectors() {
        // A2 Gram: points with xᵀGx ≤ 2 are the 6 roots plus origin.
        let g = QMat::from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        let e = F64Enumerator::from_gram(&g).unwrap();
        let mut count = 0;
        e.enumerate(&[0.0, 0.0], 2.0, |_c, q| {
            assert!(q <= 2.0 + 1e-9);
            count += 1;
        });
        assert_eq!(count, 7);
    }
}
