//! Exact arithmetic over `Z_d` and `Z_d^n`, square matrices over `Z_d`, and
//! commutator matrices.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(i64),
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix is not skew-symmetric mod {d}: entry ({i},{j}) = {ij} but ({j},{i}) = {ji}")]
    NotSkew {
        d: u32,
        i: usize,
        j: usize,
        ij: u32,
        ji: u32,
    },
    #[error("diagonal entry ({i},{i}) is {value}, expected 0")]
    NonZeroDiagonal { i: usize, value: u32 },
    #[error("expected {expected} generator labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("invalid generator label {0:?}")]
    InvalidLabel(String),
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("embedding requires a matrix over Z_2, got Z_{0}")]
    NotBinary(u32),
    #[error("scale factor must be at least 1, got {0}")]
    InvalidScale(i64),
    #[error("malformed matrix file: {0}")]
    Json(String),
}

/// The modulus `d` of the phase group `Z_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(d: i64) -> Result<Self, AlgebraError> {
        if !(2..=i64::from(u32::MAX)).contains(&d) {
            return Err(AlgebraError::InvalidModulus(d));
        }
        Ok(Modulus(d as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Canonical representative in `[0, d)` of an arbitrary integer.
    #[inline]
    pub fn reduce(self, value: i64) -> u32 {
        value.rem_euclid(i64::from(self.0)) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.0)) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }

    pub fn is_even(self) -> bool {
        self.0 % 2 == 0
    }

    /// Whether `a` is a unit of `Z_d`.
    pub fn is_unit(self, a: u32) -> bool {
        gcd(u64::from(a), u64::from(self.0)) == 1
    }

    pub fn scalar(self, value: i64) -> Scalar {
        Scalar {
            value: self.reduce(value),
            modulus: self,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar {
            value: 0,
            modulus: self,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// An element of `Z_d`, always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    value: u32,
    modulus: Modulus,
}

impl Scalar {
    pub fn new(value: i64, modulus: Modulus) -> Self {
        modulus.scalar(value)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Scalar) {
        assert_eq!(
            self.modulus, other.modulus,
            "scalar arithmetic across different moduli"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.check(rhs);
        Scalar {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = *self + rhs;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.check(rhs);
        Scalar {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

/// A vector in `Z_d^n`; the exponent part of a normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    modulus: Modulus,
    entries: Vec<u32>,
}

impl ExponentVector {
    pub fn zero(n: usize, modulus: Modulus) -> Self {
        ExponentVector {
            modulus,
            entries: vec![0; n],
        }
    }

    pub fn unit(n: usize, i: usize, modulus: Modulus) -> Self {
        let mut v = Self::zero(n, modulus);
        v.entries[i] = 1;
        v
    }

    pub fn from_ints(values: &[i64], modulus: Modulus) -> Self {
        ExponentVector {
            modulus,
            entries: values.iter().map(|&v| modulus.reduce(v)).collect(),
        }
    }

    /// Wraps already-reduced entries.
    pub(crate) fn from_reduced(entries: Vec<u32>, modulus: Modulus) -> Self {
        debug_assert!(entries.iter().all(|&e| e < modulus.get()));
        ExponentVector { modulus, entries }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn entry(&self, i: usize) -> Scalar {
        Scalar {
            value: self.entries[i],
            modulus: self.modulus,
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.entries
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), other.len());
        let m = self.modulus;
        ExponentVector {
            modulus: m,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| m.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> ExponentVector {
        let m = self.modulus;
        ExponentVector {
            modulus: m,
            entries: self.entries.iter().map(|&a| m.neg(a)).collect(),
        }
    }

    pub fn scale(&self, k: u32) -> ExponentVector {
        let m = self.modulus;
        ExponentVector {
            modulus: m,
            entries: self.entries.iter().map(|&a| m.mul(a, k)).collect(),
        }
    }
}

/// A square matrix over `Z_d`, stored row-major with reduced entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    modulus: Modulus,
    n: usize,
    entries: Vec<u32>,
}

impl ModMatrix {
    pub fn zero(n: usize, modulus: Modulus) -> Self {
        ModMatrix {
            modulus,
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, modulus: Modulus) -> Self {
        let mut m = Self::zero(n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], modulus: Modulus) -> Result<Self, AlgebraError> {
        let n = rows.len();
        let mut m = Self::zero(n, modulus);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AlgebraError::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, modulus.reduce(v));
            }
        }
        Ok(m)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        debug_assert!(value < self.modulus.get());
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n.max(1)).map(<[u32]>::to_vec).collect()
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut t = Self::zero(self.n, self.modulus);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix, AlgebraError> {
        self.check_compatible(other)?;
        let m = self.modulus;
        let mut out = Self::zero(self.n, m);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..self.n {
                    let cur = out.get(i, j);
                    out.set(i, j, m.add(cur, m.mul(a, other.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ModMatrix) -> Result<ModMatrix, AlgebraError> {
        self.check_compatible(other)?;
        let m = self.modulus;
        let mut out = self.clone();
        for (o, &b) in out.entries.iter_mut().zip(&other.entries) {
            *o = m.sub(*o, b);
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &ModMatrix) -> Result<(), AlgebraError> {
        if self.modulus != other.modulus {
            return Err(AlgebraError::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ));
        }
        if self.n != other.n {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Determinant reduced mod `d`, by fraction-free elimination over the
    /// integers on the representatives.
    pub fn determinant(&self) -> u32 {
        let n = self.n;
        if n == 0 {
            return self.modulus.reduce(1);
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| i128::from(self.get(i, j))).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        let det = sign * a[n - 1][n - 1];
        det.rem_euclid(i128::from(self.modulus.get())) as u32
    }

    /// `M(k, l) = k^T M l`.
    pub fn bilinear(&self, k: &[u32], l: &[u32]) -> Result<u32, AlgebraError> {
        for v in [k, l] {
            if v.len() != self.n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.n,
                    found: v.len(),
                });
            }
        }
        Ok(self.bilinear_unchecked(k, l))
    }

    pub(crate) fn bilinear_unchecked(&self, k: &[u32], l: &[u32]) -> u32 {
        let d = u64::from(self.modulus.get());
        let mut acc = 0u64;
        for (i, &ki) in k.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            let row = &self.entries[i * self.n..(i + 1) * self.n];
            let mut inner = 0u64;
            for (&mij, &lj) in row.iter().zip(l) {
                inner = (inner + u64::from(mij) * u64::from(lj)) % d;
            }
            acc = (acc + u64::from(ki) * inner) % d;
        }
        acc as u32
    }

    /// Row vector `k^T M`.
    pub(crate) fn left_apply(&self, k: &[u32]) -> Vec<u32> {
        let m = self.modulus;
        let mut out = vec![0u32; self.n];
        for (i, &ki) in k.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = m.add(*o, m.mul(ki, self.get(i, j)));
            }
        }
        out
    }
}

/// The bilinear form `k^T M l` with dimension and modulus checks.
pub fn bilinear(
    matrix: &ModMatrix,
    k: &ExponentVector,
    l: &ExponentVector,
) -> Result<Scalar, AlgebraError> {
    for v in [k, l] {
        if v.modulus() != matrix.modulus() {
            return Err(AlgebraError::ModulusMismatch(
                matrix.modulus().get(),
                v.modulus().get(),
            ));
        }
    }
    let value = matrix.bilinear(k.as_slice(), l.as_slice())?;
    Ok(Scalar {
        value,
        modulus: matrix.modulus(),
    })
}

/// Strictly lower-triangular part of a commutator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerPart(ModMatrix);

impl LowerPart {
    pub fn matrix(&self) -> &ModMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.0.get(i, j)
    }
}

/// A skew-symmetric matrix over `Z_d` with zero diagonal, together with the
/// names of the generators indexing its rows. Row order is generator order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorMatrix {
    matrix: ModMatrix,
    labels: Vec<String>,
}

/// On-disk matrix format: `{"d": .., "labels": [..], "mu": [[..]..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub mu: Vec<Vec<i64>>,
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn check_label(label: &str) -> Result<(), AlgebraError> {
    let valid_chars = !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
    let phase_like = label.len() > 1
        && label.starts_with('J')
        && label[1..].chars().all(|c| c.is_ascii_digit());
    let starts_digit = label.chars().next().is_some_and(|c| c.is_ascii_digit());
    if !valid_chars || phase_like || starts_digit {
        return Err(AlgebraError::InvalidLabel(label.to_string()));
    }
    Ok(())
}

impl CommutatorMatrix {
    pub fn new(
        raw: &[Vec<i64>],
        modulus: Modulus,
        labels: Option<Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        let matrix = ModMatrix::from_rows(raw, modulus)?;
        Self::from_matrix(matrix, labels)
    }

    pub fn from_matrix(
        matrix: ModMatrix,
        labels: Option<Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        let n = matrix.dim();
        let labels = labels.unwrap_or_else(|| default_labels(n));
        if labels.len() != n {
            return Err(AlgebraError::LabelCount {
                expected: n,
                found: labels.len(),
            });
        }
        for (i, label) in labels.iter().enumerate() {
            check_label(label)?;
            if labels[..i].contains(label) {
                return Err(AlgebraError::DuplicateLabel(label.clone()));
            }
        }
        let m = matrix.modulus();
        for i in 0..n {
            let value = matrix.get(i, i);
            if value != 0 {
                return Err(AlgebraError::NonZeroDiagonal { i, value });
            }
            for j in i + 1..n {
                let (ij, ji) = (matrix.get(i, j), matrix.get(j, i));
                if ij != m.neg(ji) {
                    return Err(AlgebraError::NotSkew {
                        d: m.get(),
                        i,
                        j,
                        ij,
                        ji,
                    });
                }
            }
        }
        Ok(CommutatorMatrix { matrix, labels })
    }

    pub fn zero(n: usize, modulus: Modulus) -> Self {
        CommutatorMatrix {
            matrix: ModMatrix::zero(n, modulus),
            labels: default_labels(n),
        }
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self, AlgebraError> {
        let modulus = Modulus::new(file.d)?;
        Self::new(&file.mu, modulus, file.labels.clone())
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| AlgebraError::Json(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            d: i64::from(self.modulus().get()),
            labels: Some(self.labels.clone()),
            mu: self
                .matrix
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix serializes")
    }

    pub fn modulus(&self) -> Modulus {
        self.matrix.modulus()
    }

    /// Number of generators.
    pub fn n(&self) -> usize {
        self.matrix.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        self = Self::from_matrix(self.matrix, Some(labels))?;
        Ok(self)
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.matrix
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.matrix.get(i, j)
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.modulus().scalar(i64::from(self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries.iter().all(|&e| e == 0)
    }

    pub fn lower_part(&self) -> LowerPart {
        let n = self.n();
        let mut lower = ModMatrix::zero(n, self.modulus());
        for i in 0..n {
            for j in 0..i {
                lower.set(i, j, self.get(i, j));
            }
        }
        LowerPart(lower)
    }

    /// `mu(k, l) = k^T mu l`, which equals `lower(k,l) - lower(l,k)`.
    pub fn commutator_value(
        &self,
        k: &ExponentVector,
        l: &ExponentVector,
    ) -> Result<Scalar, AlgebraError> {
        let lower = self.lower_part();
        let a = bilinear(lower.matrix(), k, l)?;
        let b = bilinear(lower.matrix(), l, k)?;
        Ok(a - b)
    }

    /// Two copies of the generators; same-copy pairs inherit `mu`, cross-copy
    /// pairs commute. Labels are suffixed with the copy number.
    pub fn tensor_double(&self) -> CommutatorMatrix {
        let n = self.n();
        let mut out = ModMatrix::zero(2 * n, self.modulus());
        for copy in 0..2 {
            for i in 0..n {
                for j in 0..n {
                    out.set(copy * n + i, copy * n + j, self.get(i, j));
                }
            }
        }
        let labels = (1..=2)
            .flat_map(|c| self.labels.iter().map(move |l| format!("{l}{c}")))
            .collect();
        CommutatorMatrix {
            matrix: out,
            labels,
        }
    }

    /// Pushes a `Z_2` matrix along `Z_2 -> Z_{2k}`, `1 -> k`.
    pub fn embed_scale(&self, k: i64) -> Result<CommutatorMatrix, AlgebraError> {
        if self.modulus().get() != 2 {
            return Err(AlgebraError::NotBinary(self.modulus().get()));
        }
        if k < 1 {
            return Err(AlgebraError::InvalidScale(k));
        }
        let target = Modulus::new(2 * k)?;
        let n = self.n();
        let mut out = ModMatrix::zero(n, target);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, target.reduce(i64::from(self.get(i, j)) * k));
            }
        }
        Self::from_matrix(out, Some(self.labels.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(d: i64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    fn mu1() -> CommutatorMatrix {
        CommutatorMatrix::new(
            &[
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 0],
            ],
            z(2),
            Some(["a", "b", "c", "d"].map(String::from).to_vec()),
        )
        .unwrap()
    }

    #[test]
    fn rejects_degenerate_modulus() {
        assert_eq!(Modulus::new(1), Err(AlgebraError::InvalidModulus(1)));
        assert!(Modulus::new(0).is_err());
    }

    #[test]
    fn reduces_entries_on_load() {
        let mu = CommutatorMatrix::new(&[vec![0, 5], vec![-5, 0]], z(3), None).unwrap();
        assert_eq!(mu.get(0, 1), 2);
        assert_eq!(mu.get(1, 0), 1);
        assert_eq!(mu.labels(), ["x1", "x2"]);
    }

    #[test]
    fn rejects_symmetric_entry_pair() {
        let err = CommutatorMatrix::new(&[vec![0, 1], vec![1, 0]], z(3), None).unwrap_err();
        assert!(matches!(err, AlgebraError::NotSkew { i: 0, j: 1, .. }));
    }

    #[test]
    fn rejects_nonzero_diagonal_even_when_skew() {
        // 1 = -1 mod 2, so only the explicit diagonal check catches this.
        let err = CommutatorMatrix::new(&[vec![1, 0], vec![0, 0]], z(2), None).unwrap_err();
        assert_eq!(err, AlgebraError::NonZeroDiagonal { i: 0, value: 1 });
    }

    #[test]
    fn rejects_ragged_input() {
        let err = CommutatorMatrix::new(&[vec![0, 1], vec![1]], z(2), None).unwrap_err();
        assert!(matches!(err, AlgebraError::NotSquare { row: 1, .. }));
    }

    #[test]
    fn rejects_bad_labels() {
        let raw = [vec![0, 0], vec![0, 0]];
        for labels in [vec!["a", "a"], vec!["J1", "b"], vec!["a b", "c"], vec!["a"]] {
            let labels = labels.into_iter().map(String::from).collect();
            assert!(CommutatorMatrix::new(&raw, z(2), Some(labels)).is_err());
        }
    }

    #[test]
    fn zero_matrix_is_accepted() {
        let mu = CommutatorMatrix::new(&vec![vec![0; 4]; 4], z(5), None).unwrap();
        assert!(mu.is_zero());
        assert!(mu.lower_part().matrix().entries.iter().all(|&e| e == 0));
    }

    #[test]
    fn lower_part_of_mu1() {
        let lower = mu1().lower_part();
        let nonzero: Vec<_> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| lower.get(i, j) != 0)
            .collect();
        // (c,b) and (d,a)
        assert_eq!(nonzero, vec![(2, 1), (3, 0)]);
    }

    #[test]
    fn lower_part_keeps_value() {
        let mu = CommutatorMatrix::new(&[vec![0, 1], vec![3, 0]], z(4), None).unwrap();
        assert_eq!(mu.lower_part().get(1, 0), 3);
        assert_eq!(mu.lower_part().get(0, 1), 0);
    }

    #[test]
    fn bilinear_examples() {
        let mu = mu1();
        let lower = mu.lower_part();
        let e = |i| ExponentVector::unit(4, i, z(2));
        assert_eq!(bilinear(lower.matrix(), &e(3), &e(0)).unwrap().value(), 1);
        let zero = ExponentVector::zero(4, z(2));
        assert_eq!(bilinear(lower.matrix(), &zero, &e(2)).unwrap().value(), 0);
        let short = ExponentVector::zero(3, z(2));
        assert!(bilinear(lower.matrix(), &short, &e(0)).is_err());
    }

    #[test]
    fn commutator_value_examples() {
        let mu = mu1();
        let e = |i| ExponentVector::unit(4, i, z(2));
        assert_eq!(mu.commutator_value(&e(0), &e(3)).unwrap().value(), 1);
        assert_eq!(mu.commutator_value(&e(1), &e(1)).unwrap().value(), 0);
    }

    #[test]
    fn tensor_double_blocks() {
        let mu = CommutatorMatrix::new(&[vec![0, 1], vec![1, 0]], z(2), None).unwrap();
        let doubled = mu.tensor_double();
        assert_eq!(doubled.n(), 4);
        assert_eq!(doubled.labels(), ["x11", "x21", "x12", "x22"]);
        for i in 0..4 {
            for j in 0..4 {
                let same_copy = i / 2 == j / 2;
                let expected = u32::from(same_copy && i != j);
                assert_eq!(doubled.get(i, j), expected, "({i},{j})");
            }
        }
        let raw: Vec<Vec<i64>> = doubled
            .matrix()
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(i64::from).collect())
            .collect();
        assert!(CommutatorMatrix::new(&raw, z(2), None).is_ok());
        assert!(CommutatorMatrix::zero(3, z(3)).tensor_double().is_zero());
    }

    #[test]
    fn embed_scale_examples() {
        let padded = mu1().embed_scale(2).unwrap();
        assert_eq!(padded.modulus().get(), 4);
        assert_eq!(padded.get(0, 3), 2);
        assert_eq!(padded.get(3, 0), 2);
        assert_eq!(padded.get(0, 1), 0);
        let same = mu1().embed_scale(1).unwrap();
        assert_eq!(same, mu1());
        assert_eq!(mu1().embed_scale(0), Err(AlgebraError::InvalidScale(0)));
        let z3 = CommutatorMatrix::zero(2, z(3));
        assert_eq!(z3.embed_scale(2), Err(AlgebraError::NotBinary(3)));
    }

    #[test]
    fn determinant_of_simple_matrices() {
        let m = z(6);
        assert_eq!(ModMatrix::identity(4, m).determinant(), 1);
        let a = ModMatrix::from_rows(&[vec![2, 1], vec![1, 1]], m).unwrap();
        assert_eq!(a.determinant(), 1);
        let b = ModMatrix::from_rows(&[vec![0, 1], vec![1, 0]], m).unwrap();
        assert_eq!(b.determinant(), 5);
        let c = ModMatrix::from_rows(&[vec![2, 0], vec![0, 3]], m).unwrap();
        assert_eq!(c.determinant(), 0);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"d": 2, "labels": ["a","b","c","d"],
                       "mu": [[0,0,0,1],[0,0,1,0],[0,1,0,0],[1,0,0,0]]}"#;
        let mu = CommutatorMatrix::from_json(text).unwrap();
        assert_eq!(mu, mu1());
        assert_eq!(CommutatorMatrix::from_json(&mu.to_json()).unwrap(), mu);
        assert!(CommutatorMatrix::from_json(r#"{"d": 2}"#).is_err());
    }
}
