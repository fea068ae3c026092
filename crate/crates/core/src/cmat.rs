//! Dense complex matrices in row-major order.
//!
//! This is the common carrier for every operator in the crate. Sizes are
//! desk-scale (tens of rows), so the arithmetic is straightforward dense
//! code; no attempt is made at blocking or sparsity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Complex inner product, antilinear in the first argument.
pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len(), "vdot length mismatch");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Dense complex matrix with row-major storage.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != nc) {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        Ok(CMat {
            rows: nr,
            cols: nc,
            data: rows.concat(),
        })
    }

    /// Real-entry convenience constructor, used mostly in tests and fixtures.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        CMat::from_fn(nr, nc, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn scalar(z: C64) -> Self {
        CMat {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = CMat::zeros(n, n);
        for (i, z) in entries.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    pub fn column(v: &[C64]) -> Self {
        CMat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Reinterprets an entryless matrix with the given shape. Deserialized
    /// empty blocks ([]) carry no column count, so model constructors use
    /// this to restore the shape implied by the surrounding blocks.
    pub fn reshape_empty(&self, rows: usize, cols: usize) -> Result<Self> {
        if !self.data.is_empty() || rows * cols != 0 {
            return Err(Error::DimMismatch(
                "reshape_empty on non-empty matrix".into(),
            ));
        }
        Ok(CMat {
            rows,
            cols,
            data: Vec::new(),
        })
    }

    pub fn scale(&self, z: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn fro_dist(&self, other: &CMat) -> f64 {
        (self - other).fro_norm()
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> CMat {
        assert!(
            r0 + nr <= self.rows && c0 + nc <= self.cols,
            "block out of range"
        );
        CMat::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMat) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "block out of range"
        );
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Solves `self * x = rhs` by LU factorization with partial pivoting.
    pub fn solve(&self, rhs: &CMat) -> Result<CMat> {
        let n = self.require_square()?;
        if rhs.rows != n {
            return Err(Error::DimMismatch(format!(
                "solve: lhs is {}x{} but rhs has {} rows",
                n, n, rhs.rows
            )));
        }
        if n == 0 {
            return Ok(CMat::zeros(0, rhs.cols));
        }
        let mut lu = self.clone();
        let mut x = rhs.clone();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let piv_tol = 1e-13 * scale;
        for k in 0..n {
            let (mut p, mut best) = (k, lu[(k, k)].norm());
            for i in k + 1..n {
                let m = lu[(i, k)].norm();
                if m > best {
                    p = i;
                    best = m;
                }
            }
            if best <= piv_tol {
                return Err(Error::Singular(format!(
                    "pivot {:.3e} at column {}",
                    best, k
                )));
            }
            if p != k {
                for j in 0..n {
                    self::swap_entries(&mut lu, (k, j), (p, j));
                }
                for j in 0..x.cols {
                    self::swap_entries(&mut x, (k, j), (p, j));
                }
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let upd = lu[(k, j)] * f;
                    lu[(i, j)] -= upd;
                }
                for j in 0..x.cols {
                    let upd = x[(k, j)] * f;
                    x[(i, j)] -= upd;
                }
            }
        }
        for j in 0..x.cols {
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for l in i + 1..n {
                    s -= lu[(i, l)] * x[(l, j)];
                }
                x[(i, j)] = s / lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMat> {
        let n = self.require_square()?;
        self.solve(&CMat::identity(n))
    }
}

fn swap_entries(m: &mut CMat, a: (usize, usize), b: (usize, usize)) {
    let t = m[a];
    m[a] = m[b];
    m[b] = t;
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add shape mismatch"
        );
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub shape mismatch"
        );
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let upd = a * rhs[(k, j)];
                    out[(i, j)] += upd;
                }
            }
        }
        out
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Wire format shared by every module: a complex number is a two-element
// array [re, im]; a matrix is a row-major nested array of those.
impl Serialize for CMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<[f64; 2]> = (0..self.cols)
                .map(|j| [self[(i, j)].re, self[(i, j)].im])
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MatVisitor;
        impl<'de> Visitor<'de> for MatVisitor {
            type Value = CMat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nested array of [re, im] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<CMat, A::Error> {
                let mut rows: Vec<Vec<[f64; 2]>> = Vec::new();
                while let Some(row) = seq.next_element::<Vec<[f64; 2]>>()? {
                    rows.push(row);
                }
                let nc = rows.first().map_or(0, |r| r.len());
                if rows.iter().any(|r| r.len() != nc) {
                    return Err(de::Error::custom("ragged matrix rows"));
                }
                let data = rows
                    .iter()
                    .flat_map(|r| r.iter().map(|[re, im]| C64::new(*re, *im)))
                    .collect();
                Ok(CMat {
                    rows: rows.len(),
                    cols: nc,
                    data,
                })
            }
        }
        deserializer.deserialize_seq(MatVisitor)
    }
}

/// Complex vector newtype carrying the shared [re, im] wire format.
#[derive(Clone, Debug, PartialEq)]
pub struct CVec(pub Vec<C64>);

impl Serialize for CVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Ok(CVec(
            v.into_iter().map(|[re, im]| C64::new(re, im)).collect(),
        ))
    }
}
