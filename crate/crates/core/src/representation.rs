//! Clock and shift operators on `(C^d)^n` and the representation of `H(mu)`.
//!
//! A Weyl operator `(p, a, b)` sends `|l>` to `w^(p + b.l) |l + a>` where
//! `w = exp(2 pi i / d)`. Phases stay exact exponents of `w`; complex
//! numbers only appear in [`DenseOperator`].

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::algebra::{CommutatorMatrix, ExponentVector, Modulus, Scalar};
use crate::group::{Group, GroupElement, GroupError};

/// Largest Hilbert space dimension `d^n` that [`to_dense`] builds by default.
pub const DEFAULT_DENSE_CAP: u64 = 1024;

/// Absolute per-entry tolerance for dense comparisons.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("operators act on {left} and {right} qudits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operators are over Z_{left} and Z_{right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("dimension {dimension} exceeds the dense cap {cap}")]
    CapExceeded { dimension: String, cap: u64 },
    #[error("cannot parse operator: {0}")]
    Parse(String),
    #[error("rho(g) rho(h) != rho(gh) for g = {left}, h = {right}")]
    NotHomomorphic { left: String, right: String },
    #[error("dense product differs from dense image for g = {left}, h = {right}")]
    DenseMismatch { left: String, right: String },
    #[error("scalar {0} is not sent to a multiple of the identity")]
    ScalarNotPreserved(String),
    #[error("elements {first} and {second} have the same image")]
    NotInjective { first: String, second: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylOperator {
    pub phase: Scalar,
    pub shift: ExponentVector,
    pub clock: ExponentVector,
}

impl WeylOperator {
    pub fn identity(n: usize, modulus: Modulus) -> Self {
        Self::scalar(n, modulus.zero())
    }

    /// `w^k` times the identity.
    pub fn scalar(n: usize, phase: Scalar) -> Self {
        let m = phase.modulus();
        WeylOperator {
            phase,
            shift: ExponentVector::zero(n, m),
            clock: ExponentVector::zero(n, m),
        }
    }

    /// `X_i`: `|l> -> |l + e_i>`.
    pub fn shift_at(n: usize, i: usize, modulus: Modulus) -> Self {
        WeylOperator {
            shift: ExponentVector::unit(n, i, modulus),
            ..Self::identity(n, modulus)
        }
    }

    /// `Z_i`: `|l> -> w^(l_i) |l>`.
    pub fn clock_at(n: usize, i: usize, modulus: Modulus) -> Self {
        WeylOperator {
            clock: ExponentVector::unit(n, i, modulus),
            ..Self::identity(n, modulus)
        }
    }

    pub fn n(&self) -> usize {
        self.shift.len()
    }

    pub fn modulus(&self) -> Modulus {
        self.phase.modulus()
    }

    pub fn is_scalar(&self) -> bool {
        self.shift.is_zero() && self.clock.is_zero()
    }

    fn dot(b: &ExponentVector, l: &[u32]) -> u32 {
        let m = b.modulus();
        b.as_slice()
            .iter()
            .zip(l)
            .fold(0, |acc, (&x, &y)| m.add(acc, m.mul(x, y)))
    }

    /// Image of a basis label: `(phase exponent, new label)`.
    pub fn apply(&self, label: &[u32]) -> (u32, Vec<u32>) {
        let m = self.modulus();
        let phase = m.add(self.phase.value(), Self::dot(&self.clock, label));
        let out = label
            .iter()
            .zip(self.shift.as_slice())
            .map(|(&l, &a)| m.add(l, a))
            .collect();
        (phase, out)
    }

    /// `self` after `other`.
    fn then_unchecked(&self, other: &WeylOperator) -> WeylOperator {
        let m = self.modulus();
        let cross = m.scalar(i64::from(Self::dot(&self.clock, other.shift.as_slice())));
        WeylOperator {
            phase: self.phase + other.phase + cross,
            shift: self.shift.add(&other.shift),
            clock: self.clock.add(&other.clock),
        }
    }

    /// Product form `w^p X1^a1 Z1^b1 X2^a2 ...`; `I` for the identity.
    pub fn to_pauli_string(&self) -> String {
        let mut parts = Vec::new();
        if !self.phase.is_zero() {
            parts.push(format!("w^{}", self.phase.value()));
        }
        let power = |letter: char, i: usize, e: u32| match e {
            0 => None,
            1 => Some(format!("{letter}{}", i + 1)),
            _ => Some(format!("{letter}{}^{e}", i + 1)),
        };
        for i in 0..self.n() {
            parts.extend(power('X', i, self.shift.as_slice()[i]));
            parts.extend(power('Z', i, self.clock.as_slice()[i]));
        }
        if parts.is_empty() {
            "I".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Parses a product of `w`, `X<i>` and `Z<i>` factors, each optionally
    /// raised to `^<e>`. Qudits are numbered from 1.
    pub fn parse_pauli(text: &str, n: usize, modulus: Modulus) -> Result<Self, RepresentationError> {
        let err = |msg: String| RepresentationError::Parse(msg);
        let mut acc = Self::identity(n, modulus);
        for token in text.split_whitespace() {
            if token == "I" {
                continue;
            }
            let (base, exponent) = match token.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| err(format!("bad exponent in {token:?}")))?,
                ),
                None => (token, 1),
            };
            let mut chars = base.chars();
            let letter = chars.next().ok_or_else(|| err("empty factor".into()))?;
            let factor = if letter == 'w' && chars.as_str().is_empty() {
                Self::scalar(n, modulus.scalar(1))
            } else {
                let i: usize = chars
                    .as_str()
                    .parse()
                    .map_err(|_| err(format!("bad qudit index in {token:?}")))?;
                if i == 0 || i > n {
                    return Err(err(format!("qudit {i} out of range 1..={n}")));
                }
                match letter {
                    'X' => Self::shift_at(n, i - 1, modulus),
                    'Z' => Self::clock_at(n, i - 1, modulus),
                    _ => return Err(err(format!("unknown factor {token:?}"))),
                }
            };
            let times = modulus.reduce(exponent);
            for _ in 0..times {
                acc = acc.then_unchecked(&factor);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pauli_string())
    }
}

/// `rho(k, v) = (k, v, v^T lower)`.
pub fn represent(g: &GroupElement, mu: &CommutatorMatrix) -> WeylOperator {
    let m = mu.modulus();
    let clock = mu.lower_part().matrix().left_apply(g.vector.as_slice());
    WeylOperator {
        phase: g.phase,
        shift: g.vector.clone(),
        clock: ExponentVector::from_reduced(clock, m),
    }
}

fn check_compatible(p: &WeylOperator, q: &WeylOperator) -> Result<(), RepresentationError> {
    if p.modulus() != q.modulus() {
        return Err(RepresentationError::ModulusMismatch {
            left: p.modulus().get(),
            right: q.modulus().get(),
        });
    }
    if p.n() != q.n() {
        return Err(RepresentationError::DimensionMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    Ok(())
}

/// The operator product `p q` (apply `q` first).
pub fn compose_weyl(p: &WeylOperator, q: &WeylOperator) -> Result<WeylOperator, RepresentationError> {
    check_compatible(p, q)?;
    Ok(p.then_unchecked(q))
}

pub fn weyl_equal(p: &WeylOperator, q: &WeylOperator) -> Result<bool, RepresentationError> {
    check_compatible(p, q)?;
    Ok(p == q)
}

/// `exp(2 pi i k / d)`, exact at multiples of a quarter turn.
pub fn root_of_unity(k: u32, d: u32) -> Complex64 {
    let k = k % d;
    if (4 * k) % d == 0 {
        return match 4 * k / d {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * f64::from(k) / f64::from(d))
}

/// A square complex matrix, row-major. Basis labels are ordered
/// lexicographically with qudit 1 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        DenseOperator { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(DenseOperator {
            dim,
            entries: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DenseOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| e * c).collect(),
        }
    }

    /// Matrix product; zero entries of `other` are skipped.
    pub fn mul(&self, other: &DenseOperator) -> Option<Self> {
        if self.dim != other.dim {
            return None;
        }
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for j in 0..n {
                let b = other.entries[k * n + j];
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i in 0..n {
                    out[i * n + j] += self.entries[i * n + k] * b;
                }
            }
        }
        Some(DenseOperator { dim: n, entries: out })
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        DenseOperator { dim: n, entries }
    }

    pub fn max_distance(&self, other: &DenseOperator) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DenseOperator, tolerance: f64) -> bool {
        self.max_distance(other) <= tolerance
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.adjoint()
            .mul(self)
            .is_some_and(|p| p.approx_eq(&Self::identity(self.dim), tolerance))
    }

    /// Exactly one nonzero entry per row and column, each a `d`-th root of
    /// unity up to the tolerance.
    pub fn is_monomial(&self, d: u32, tolerance: f64) -> bool {
        let n = self.dim;
        let mut row_used = vec![false; n];
        for j in 0..n {
            let nonzero: Vec<usize> = (0..n)
                .filter(|&i| self.get(i, j).norm() > tolerance)
                .collect();
            let [i] = nonzero[..] else {
                return false;
            };
            if std::mem::replace(&mut row_used[i], true) {
                return false;
            }
            let z = self.get(i, j);
            if !(0..d).any(|k| (z - root_of_unity(k, d)).norm() <= tolerance) {
                return false;
            }
        }
        true
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = self
            .entries
            .chunks(self.dim.max(1))
            .take(self.dim)
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        serde_json::json!(rows)
    }
}

fn hilbert_dimension(n: usize, d: u32, cap: u64) -> Result<usize, RepresentationError> {
    let dim = u64::from(d).checked_pow(n as u32).filter(|&x| x <= cap);
    match dim {
        Some(dim) => Ok(dim as usize),
        None => Err(RepresentationError::CapExceeded {
            dimension: format!("{d}^{n}"),
            cap,
        }),
    }
}

fn label_of(mut index: usize, n: usize, d: u32) -> Vec<u32> {
    let mut label = vec![0; n];
    for slot in label.iter_mut().rev() {
        *slot = (index % d as usize) as u32;
        index /= d as usize;
    }
    label
}

fn index_of(label: &[u32], d: u32) -> usize {
    label
        .iter()
        .fold(0, |acc, &l| acc * d as usize + l as usize)
}

pub fn to_dense(p: &WeylOperator, cap: u64) -> Result<DenseOperator, RepresentationError> {
    let d = p.modulus().get();
    let dim = hilbert_dimension(p.n(), d, cap)?;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let (phase, image) = p.apply(&label_of(col, p.n(), d));
        entries[index_of(&image, d) * dim + col] = root_of_unity(phase, d);
    }
    Ok(DenseOperator { dim, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every pair of group elements.
    Exhaustive,
    /// Random pairs from a seeded generator.
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RepresentationReport {
    pub elements: u64,
    pub pairs_checked: u64,
    /// Whether dense matrices were compared as well as symbolic operators.
    pub dense_checked: bool,
    pub homomorphism: bool,
    pub scalars_preserved: bool,
    pub injective: bool,
}

fn describe(g: &GroupElement) -> String {
    format!("({}, {:?})", g.phase.value(), g.vector.as_slice())
}

/// Quantized dense entries, for distinctness checks.
fn fingerprint(op: &DenseOperator) -> Vec<(i64, i64)> {
    op.entries
        .iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

/// Checks that `rho` is an injective homomorphism preserving scalars.
/// Dense matrices are compared when `d^n` is within `dense_cap`.
pub fn verify_representation(
    mu: &CommutatorMatrix,
    mode: VerifyMode,
    enumeration_cap: u64,
    dense_cap: u64,
) -> Result<RepresentationReport, RepresentationError> {
    let group = Group::new(mu.clone());
    let n = mu.n();
    let d = mu.modulus().get();
    let dense = hilbert_dimension(n, d, dense_cap).is_ok();

    let mut elements = 0u64;
    let mut symbolic = HashMap::new();
    let mut fingerprints = HashMap::new();
    let mut images = Vec::new();
    let mut dense_images = Vec::new();
    for g in group.enumerate(enumeration_cap)? {
        let rho = represent(&g, mu);
        if g.is_scalar() && !rho.is_scalar() {
            return Err(RepresentationError::ScalarNotPreserved(describe(&g)));
        }
        if let Some(prior) = symbolic.insert(rho.clone(), g.clone()) {
            return Err(RepresentationError::NotInjective {
                first: describe(&prior),
                second: describe(&g),
            });
        }
        if dense {
            let m = to_dense(&rho, dense_cap)?;
            if g.is_scalar() {
                let expected =
                    DenseOperator::identity(m.dim()).scale(root_of_unity(g.phase.value(), d));
                if !m.approx_eq(&expected, TOLERANCE) {
                    return Err(RepresentationError::ScalarNotPreserved(describe(&g)));
                }
            }
            if let Some(prior) = fingerprints.insert(fingerprint(&m), g.clone()) {
                return Err(RepresentationError::NotInjective {
                    first: describe(&prior),
                    second: describe(&g),
                });
            }
            dense_images.push(m);
        }
        images.push((g, rho));
        elements += 1;
    }

    let check = |i: usize, j: usize| -> Result<(), RepresentationError> {
        let (g, rg) = &images[i];
        let (h, rh) = &images[j];
        let gh = group.mul(g, h);
        let expected = represent(&gh, mu);
        if compose_weyl(rg, rh)? != expected {
            return Err(RepresentationError::NotHomomorphic {
                left: describe(g),
                right: describe(h),
            });
        }
        if dense {
            let product = dense_images[i].mul(&dense_images[j]).expect("same dimension");
            let target = &dense_images[group.encode(&gh) as usize];
            if !product.approx_eq(target, TOLERANCE) {
                return Err(RepresentationError::DenseMismatch {
                    left: describe(g),
                    right: describe(h),
                });
            }
        }
        Ok(())
    };

    let total = images.len();
    let mut pairs_checked = 0u64;
    match mode {
        VerifyMode::Exhaustive => {
            for i in 0..total {
                for j in 0..total {
                    check(i, j)?;
                    pairs_checked += 1;
                }
            }
        }
        VerifyMode::Sampled { pairs, seed } => {
            let mut rng = StdRng::seed_from_u64(seed);
            for _ in 0..pairs {
                check(rng.gen_range(0..total), rng.gen_range(0..total))?;
                pairs_checked += 1;
            }
        }
    }
    Ok(RepresentationReport {
        elements,
        pairs_checked,
        dense_checked: dense,
        homomorphism: true,
        scalars_preserved: true,
        injective: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::DEFAULT_ENUMERATION_CAP;

    fn z(d: i64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_and_generator_images() {
        let mu = CommutatorMatrix::zero(1, z(3));
        let g = Group::new(mu.clone());
        let one = represent(&g.scalar(1), &mu);
        assert_eq!(one, WeylOperator::scalar(1, z(3).scalar(1)));
        assert_eq!(represent(&g.generator(0), &mu), WeylOperator::shift_at(1, 0, z(3)));

        let sq = fixtures::square();
        let g = Group::new(sq.clone());
        let lower = sq.lower_part();
        for i in 0..sq.n() {
            let mut expected = WeylOperator::shift_at(sq.n(), i, z(2));
            for j in 0..sq.n() {
                for _ in 0..lower.get(i, j) {
                    expected = compose_weyl(&expected, &WeylOperator::clock_at(sq.n(), j, z(2))).unwrap();
                }
            }
            assert_eq!(represent(&g.generator(i), &sq), expected);
        }
    }

    #[test]
    fn clock_and_shift_relation() {
        let m = z(5);
        let x = WeylOperator::shift_at(1, 0, m);
        let zz = WeylOperator::clock_at(1, 0, m);
        let zx = compose_weyl(&zz, &x).unwrap();
        let xz = compose_weyl(&x, &zz).unwrap();
        let w = WeylOperator::scalar(1, m.scalar(1));
        assert_eq!(zx, compose_weyl(&w, &xz).unwrap());
        let id = WeylOperator::identity(1, m);
        assert!(weyl_equal(&compose_weyl(&zx, &id).unwrap(), &zx).unwrap());
        assert!(matches!(
            compose_weyl(&x, &WeylOperator::identity(1, z(3))),
            Err(RepresentationError::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn qubit_matrices() {
        let m = z(2);
        let x = to_dense(&WeylOperator::shift_at(1, 0, m), DEFAULT_DENSE_CAP).unwrap();
        let zz = to_dense(&WeylOperator::clock_at(1, 0, m), DEFAULT_DENSE_CAP).unwrap();
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        assert_eq!(x, DenseOperator::from_rows(&[vec![zero, one], vec![one, zero]]).unwrap());
        assert_eq!(zz, DenseOperator::from_rows(&[vec![one, zero], vec![zero, -one]]).unwrap());
        let id = DenseOperator::identity(2);
        assert_eq!(x.mul(&x).unwrap(), id);
        assert_eq!(zz.mul(&zz).unwrap(), id);
        assert_eq!(zz.mul(&x).unwrap(), x.mul(&zz).unwrap().scale(-one));
        assert_eq!(to_dense(&WeylOperator::identity(2, m), 1024).unwrap(), DenseOperator::identity(4));
    }

    #[test]
    fn dense_cap_is_enforced() {
        let p = WeylOperator::identity(11, z(2));
        assert!(matches!(to_dense(&p, DEFAULT_DENSE_CAP), Err(RepresentationError::CapExceeded { .. })));
        assert!(to_dense(&WeylOperator::identity(10, z(2)), DEFAULT_DENSE_CAP).is_ok());
    }

    #[test]
    fn pauli_strings_round_trip() {
        let m = z(3);
        let p = WeylOperator::parse_pauli("w^1 X1 Z1^2 X2", 2, m).unwrap();
        assert_eq!(p.to_pauli_string(), "w^1 X1 Z1^2 X2");
        assert_eq!(WeylOperator::parse_pauli(&p.to_pauli_string(), 2, m).unwrap(), p);
        assert_eq!(WeylOperator::identity(2, m).to_pauli_string(), "I");
        // Z X = w X Z
        assert_eq!(
            WeylOperator::parse_pauli("Z1 X1", 1, m).unwrap(),
            WeylOperator::parse_pauli("w X1 Z1", 1, m).unwrap()
        );
        assert!(WeylOperator::parse_pauli("X3", 2, m).is_err());
        assert!(WeylOperator::parse_pauli("Y1", 2, m).is_err());
    }

    #[test]
    fn magic_square_products() {
        let mu = fixtures::peres_mermin();
        let g = Group::new(mu.clone());
        let el = |v: [i64; 4]| g.element(0, &v).unwrap();
        // Generators x1 y1 x2 y2.
        let grid = [
            [el([1, 0, 0, 0]), el([0, 0, 1, 0])],
            [el([0, 0, 0, 1]), el([0, 1, 0, 0])],
            [el([1, 0, 0, 1]), el([0, 1, 1, 0])],
        ];
        let rows: Vec<[GroupElement; 3]> = grid
            .iter()
            .map(|[a, b]| {
                let third = g.inverse(&g.mul(a, b)).unwrap();
                [a.clone(), b.clone(), third]
            })
            .collect();
        let dense = |x: &GroupElement| to_dense(&represent(x, &mu), DEFAULT_DENSE_CAP).unwrap();
        let product = |xs: [&GroupElement; 3]| {
            xs.iter()
                .map(|x| dense(x))
                .reduce(|a, b| a.mul(&b).unwrap())
                .unwrap()
        };
        let id = DenseOperator::identity(16);
        for r in &rows {
            assert!(product([&r[0], &r[1], &r[2]]).approx_eq(&id, TOLERANCE));
        }
        for col in 0..2 {
            assert!(product([&rows[0][col], &rows[1][col], &rows[2][col]]).approx_eq(&id, TOLERANCE));
        }
        let last = product([&rows[0][2], &rows[1][2], &rows[2][2]]);
        assert!(last.approx_eq(&id.scale(c(-1.0, 0.0)), TOLERANCE));
    }

    #[test]
    fn two_qubit_magic_square() {
        let m = z(2);
        let op = |t: &str| to_dense(&WeylOperator::parse_pauli(t, 2, m).unwrap(), 16).unwrap();
        let grid = [
            ["X1", "X2", "X1 X2"],
            ["Z2", "Z1", "Z1 Z2"],
            ["X1 Z2", "Z1 X2", "w X1 Z1 X2 Z2"],
        ];
        let product = |ts: [&str; 3]| {
            ts.iter()
                .map(|t| op(t))
                .reduce(|a, b| a.mul(&b).unwrap())
                .unwrap()
        };
        let id = DenseOperator::identity(4);
        for row in &grid {
            assert!(product(*row).approx_eq(&id, TOLERANCE));
        }
        for col in 0..2 {
            assert!(product([grid[0][col], grid[1][col], grid[2][col]]).approx_eq(&id, TOLERANCE));
        }
        let last = product([grid[0][2], grid[1][2], grid[2][2]]);
        assert!(last.approx_eq(&id.scale(c(-1.0, 0.0)), TOLERANCE));
    }

    #[test]
    fn composition_matches_group_product() {
        let mu = CommutatorMatrix::new(&[vec![0, 1], vec![2, 0]], z(3), None).unwrap();
        let g = Group::new(mu.clone());
        let all: Vec<_> = g.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().collect();
        for a in &all {
            for b in &all {
                let lhs = compose_weyl(&represent(a, &mu), &represent(b, &mu)).unwrap();
                assert_eq!(lhs, represent(&g.mul(a, b), &mu));
            }
        }
    }

    #[test]
    fn dense_images_are_monomial_unitaries() {
        let mu = CommutatorMatrix::new(
            &[vec![0, 1, 3], vec![3, 0, 2], vec![1, 2, 0]],
            z(4),
            None,
        )
        .unwrap();
        let g = Group::new(mu.clone());
        for code in [0, 5, 17, 63, 200, 255] {
            let m = to_dense(&represent(&g.decode(code), &mu), DEFAULT_DENSE_CAP).unwrap();
            assert!(m.is_unitary(TOLERANCE));
            assert!(m.is_monomial(4, TOLERANCE));
        }
    }

    #[test]
    fn verification_passes() {
        let cases = [
            fixtures::peres_mermin(),
            CommutatorMatrix::zero(1, z(4)),
            CommutatorMatrix::new(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]], z(3), None).unwrap(),
        ];
        for mu in &cases {
            let r = verify_representation(mu, VerifyMode::Exhaustive, DEFAULT_ENUMERATION_CAP, DEFAULT_DENSE_CAP)
                .unwrap();
            assert!(r.dense_checked && r.injective);
            assert_eq!(r.pairs_checked, r.elements * r.elements);
        }
        let sampled = verify_representation(
            &cases[2],
            VerifyMode::Sampled { pairs: 50, seed: 7 },
            DEFAULT_ENUMERATION_CAP,
            DEFAULT_DENSE_CAP,
        )
        .unwrap();
        assert_eq!(sampled.pairs_checked, 50);
    }

    #[test]
    fn dense_json_shape() {
        let m = to_dense(&WeylOperator::clock_at(1, 0, z(2)), 16).unwrap();
        assert_eq!(m.to_json(), serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]));
    }
}
