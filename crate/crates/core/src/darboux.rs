//! Cogredient reduction of commutator matrices (`U^T mu U`) to tridiagonal
//! and block-diagonal form, and the contextuality decision for block-diagonal
//! matrices.
//!
//! Generator labels are carried over unchanged; after a base change they
//! name the new basis vectors, not the original generators.

use thiserror::Error;

use crate::algebra::{gcd, AlgebraError, CommutatorMatrix, ModMatrix, Modulus, Scalar};
use crate::contextuality::{Bracketing, ContextualWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DarbouxError {
    #[error("index {index} out of range for {n} generators")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("matrix is not block diagonal: entry ({row}, {col}) = {value}")]
    NotDarboux { row: usize, col: usize, value: u32 },
    #[error("relative parity needs an even modulus, got {0}")]
    OddModulus(u32),
    #[error("relative parity of a zero entry")]
    ZeroEntry,
    #[error("constructed word failed to verify: {0}")]
    Certificate(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An invertible matrix over `Z_d`; column `j` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseChange(ModMatrix);

impl BaseChange {
    pub fn identity(n: usize, modulus: Modulus) -> Self {
        BaseChange(ModMatrix::identity(n, modulus))
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.0
    }

    pub fn determinant(&self) -> Scalar {
        let m = self.0.modulus();
        m.scalar(i64::from(self.0.determinant()))
    }

    pub fn is_invertible(&self) -> bool {
        let det = self.0.determinant();
        self.0.modulus().is_unit(det)
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.0.rows()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CogredientResult {
    pub base: BaseChange,
    pub result: CommutatorMatrix,
    /// Set when the requested operation had no effect (a swap of an index
    /// with itself).
    pub no_op: bool,
}

impl CogredientResult {
    /// Whether `U^T mu U` equals the result, by direct multiplication.
    pub fn verify(&self, mu: &CommutatorMatrix) -> bool {
        let u = self.base.matrix();
        let Ok(left) = u.transpose().mul(mu.matrix()) else {
            return false;
        };
        let Ok(product) = left.mul(u) else {
            return false;
        };
        &product == self.result.matrix()
    }
}

/// A matrix under reduction together with the accumulated base change.
struct Reducer {
    mu: ModMatrix,
    u: ModMatrix,
    m: Modulus,
    n: usize,
}

impl Reducer {
    fn new(mu: &CommutatorMatrix) -> Self {
        let m = mu.modulus();
        Reducer {
            mu: mu.matrix().clone(),
            u: ModMatrix::identity(mu.n(), m),
            m,
            n: mu.n(),
        }
    }

    fn get(&self, i: usize, j: usize) -> u32 {
        self.mu.get(i, j)
    }

    /// Exchanges basis vectors `i` and `j`.
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.n {
            let (a, b) = (self.mu.get(i, k), self.mu.get(j, k));
            self.mu.set(i, k, b);
            self.mu.set(j, k, a);
        }
        for k in 0..self.n {
            let (a, b) = (self.mu.get(k, i), self.mu.get(k, j));
            self.mu.set(k, i, b);
            self.mu.set(k, j, a);
            let (a, b) = (self.u.get(k, i), self.u.get(k, j));
            self.u.set(k, i, b);
            self.u.set(k, j, a);
        }
    }

    /// Replaces basis vector `x` by `x + alpha y`: row and column `x` gain
    /// `alpha` times row and column `y`.
    fn add(&mut self, x: usize, y: usize, alpha: u32) {
        if alpha == 0 {
            return;
        }
        let m = self.m;
        for k in 0..self.n {
            let v = m.add(self.mu.get(x, k), m.mul(alpha, self.mu.get(y, k)));
            self.mu.set(x, k, v);
        }
        for k in 0..self.n {
            let v = m.add(self.mu.get(k, x), m.mul(alpha, self.mu.get(k, y)));
            self.mu.set(k, x, v);
            let v = m.add(self.u.get(k, x), m.mul(alpha, self.u.get(k, y)));
            self.u.set(k, x, v);
        }
    }

    /// Euclid's algorithm on row `r`: leaves `gcd` of the two entries in
    /// column `pivot` and zero in column `other`.
    fn euclid(&mut self, r: usize, pivot: usize, other: usize) {
        while self.get(r, other) != 0 {
            let a = self.get(r, pivot);
            let b = self.get(r, other);
            if a == 0 {
                self.swap(pivot, other);
                continue;
            }
            let q = b / a;
            self.add(other, pivot, self.m.neg(q % self.m.get()));
            if self.get(r, other) != 0 {
                self.swap(pivot, other);
            }
        }
    }

    /// Clears rows `n-1` down to `start + 2` so that, within indices
    /// `>= start`, only the entries next to the diagonal remain.
    fn standardize_from(&mut self, start: usize) {
        for r in (start + 2..self.n).rev() {
            // Nonzero entries of the row to the right, ascending, ties by column.
            let mut order: Vec<usize> = (start..r).collect();
            order.sort_by_key(|&c| (self.get(r, c) != 0, self.get(r, c), c));
            let mut position: Vec<usize> = (start..r).collect();
            for (slot, &col) in order.iter().enumerate() {
                let target = start + slot;
                let current = position
                    .iter()
                    .position(|&p| p == col)
                    .map(|p| p + start)
                    .expect("column is tracked");
                if current != target {
                    self.swap(target, current);
                    position.swap(target - start, current - start);
                }
            }
            for c in (start..r - 1).rev() {
                self.euclid(r, r - 1, c);
            }
        }
    }

    fn ideal(&self, value: u32) -> u64 {
        gcd(u64::from(value), u64::from(self.m.get()))
    }

    /// Makes rows `i` and `i + 1` vanish outside the block `{i, i + 1}`.
    /// Returns `false` if every remaining entry is already zero.
    fn split_block(&mut self, i: usize) -> bool {
        let n = self.n;
        let mut tracked: Option<u64> = None;
        loop {
            if (i + 1..n).all(|c| self.get(i, c) == 0) {
                let Some(j) = (i + 1..n).find(|&j| (i..n).any(|c| self.get(j, c) != 0)) else {
                    return false;
                };
                self.swap(i, j);
            }
            if self.get(i, i + 1) == 0 {
                let c = (i + 2..n)
                    .find(|&c| self.get(i, c) != 0)
                    .expect("row is nonzero");
                self.swap(i + 1, c);
            }
            for c in i + 2..n {
                self.euclid(i, i + 1, c);
            }

            let g = self.ideal(self.get(i + 1, i));
            if let Some(previous) = tracked {
                assert!(
                    g <= previous && previous % g == 0,
                    "pivot ideal shrank: {previous} -> {g}"
                );
            }
            tracked = Some(g);

            let mut grew = false;
            for c in i + 2..n {
                let v = self.get(i + 1, c);
                if v == 0 {
                    continue;
                }
                let pivot = self.get(i + 1, i);
                match solve(pivot, self.m.neg(v), self.m) {
                    Some(alpha) => self.add(c, i, alpha),
                    None => {
                        self.euclid(i + 1, i, c);
                        let after = self.ideal(self.get(i + 1, i));
                        assert!(
                            after < g && g % after == 0,
                            "pivot ideal did not grow: {g} -> {after}"
                        );
                        grew = true;
                        break;
                    }
                }
            }
            if !grew {
                return true;
            }
        }
    }

    fn finish(self, labels: &[String]) -> CogredientResult {
        CogredientResult {
            base: BaseChange(self.u),
            result: CommutatorMatrix::from_matrix(self.mu, Some(labels.to_vec()))
                .expect("cogredient operations keep the matrix skew"),
            no_op: false,
        }
    }
}

/// Some `alpha` with `alpha * a = b` mod d, if one exists.
fn solve(a: u32, b: u32, m: Modulus) -> Option<u32> {
    let d = i64::from(m.get());
    let (g, x, _) = extended_gcd(i64::from(a), d);
    if i64::from(b) % g != 0 {
        return None;
    }
    Some(m.reduce(x * (i64::from(b) / g)))
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn check_index(mu: &CommutatorMatrix, index: usize) -> Result<(), DarbouxError> {
    if index >= mu.n() {
        return Err(DarbouxError::IndexOutOfRange { index, n: mu.n() });
    }
    Ok(())
}

/// Exchanges generators `i` and `j`.
pub fn swap_cogredient(
    mu: &CommutatorMatrix,
    i: usize,
    j: usize,
) -> Result<CogredientResult, DarbouxError> {
    check_index(mu, i)?;
    check_index(mu, j)?;
    let mut r = Reducer::new(mu);
    r.swap(i, j);
    let mut out = r.finish(mu.labels());
    out.no_op = i == j;
    Ok(out)
}

/// Adds `alpha` times row and column `j` to row and column `i`.
pub fn add_cogredient(
    mu: &CommutatorMatrix,
    i: usize,
    j: usize,
    alpha: i64,
) -> Result<CogredientResult, DarbouxError> {
    check_index(mu, i)?;
    check_index(mu, j)?;
    let mut r = Reducer::new(mu);
    let alpha = mu.modulus().reduce(alpha);
    if i == j {
        // x -> (1 + alpha) x is not generally invertible; refuse quietly.
        let mut out = r.finish(mu.labels());
        out.no_op = true;
        return Ok(out);
    }
    r.add(i, j, alpha);
    Ok(r.finish(mu.labels()))
}

/// A cogredient matrix whose only nonzero entries are next to the diagonal.
pub fn standard_form(mu: &CommutatorMatrix) -> CogredientResult {
    let mut r = Reducer::new(mu);
    r.standardize_from(0);
    r.finish(mu.labels())
}

/// A cogredient matrix made of `2x2` blocks `(0, l; -l, 0)` on the diagonal.
pub fn darboux_form(mu: &CommutatorMatrix) -> CogredientResult {
    let mut r = Reducer::new(mu);
    r.standardize_from(0);
    let mut i = 0;
    while i + 1 < r.n {
        if !r.split_block(i) {
            break;
        }
        i += 2;
    }
    r.finish(mu.labels())
}

pub fn is_tridiagonal(mu: &CommutatorMatrix) -> bool {
    first_entry_outside(mu, |i, j| i.abs_diff(j) == 1).is_none()
}

fn first_entry_outside(
    mu: &CommutatorMatrix,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize, u32)> {
    let n = mu.n();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| mu.get(i, j) != 0 && !allowed(i, j))
        .map(|(i, j)| (i, j, mu.get(i, j)))
}

fn in_block(i: usize, j: usize) -> bool {
    i != j && i / 2 == j / 2
}

/// Nonzero entries only inside the diagonal blocks `{2j, 2j+1}`.
pub fn is_darboux(mu: &CommutatorMatrix) -> bool {
    first_entry_outside(mu, in_block).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    OddRelative,
    EvenRelative,
}

/// 2-adic valuations of an entry and of `n = d / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelativeParity {
    pub entry_valuation: u32,
    pub half_valuation: u32,
    pub verdict: Parity,
}

pub fn relative_parity(lambda: Scalar) -> Result<RelativeParity, DarbouxError> {
    let d = lambda.modulus().get();
    if d % 2 != 0 {
        return Err(DarbouxError::OddModulus(d));
    }
    if lambda.is_zero() {
        return Err(DarbouxError::ZeroEntry);
    }
    let l = lambda.value().trailing_zeros();
    let m = (d / 2).trailing_zeros();
    Ok(RelativeParity {
        entry_valuation: l,
        half_valuation: m,
        verdict: if l <= m {
            Parity::OddRelative
        } else {
            Parity::EvenRelative
        },
    })
}

#[derive(Debug, Clone)]
pub enum Decision {
    /// Built from the first two blocks whose entries are odd relative to `d/2`.
    Contextual {
        word: ContextualWord,
        blocks: (usize, usize),
    },
    /// Blocks (by index) whose entries are odd relative to `d/2`; fewer than two.
    NonContextual { odd_blocks: Vec<usize> },
}

/// Decides contextuality of a block-diagonal matrix by relative parity.
pub fn decide_darboux(mu: &CommutatorMatrix) -> Result<Decision, DarbouxError> {
    if let Some((row, col, value)) = first_entry_outside(mu, in_block) {
        return Err(DarbouxError::NotDarboux { row, col, value });
    }
    let m = mu.modulus();
    if !m.is_even() {
        return Ok(Decision::NonContextual {
            odd_blocks: Vec::new(),
        });
    }
    let mut odd_blocks = Vec::new();
    for block in 0..mu.n() / 2 {
        let lambda = mu.entry(2 * block, 2 * block + 1);
        if !lambda.is_zero() && relative_parity(lambda)?.verdict == Parity::OddRelative {
            odd_blocks.push(block);
        }
    }
    let [first, second, ..] = odd_blocks[..] else {
        return Ok(Decision::NonContextual { odd_blocks });
    };
    let half = m.get() / 2;
    let odd_part = half >> half.trailing_zeros();
    let multiplier = |block: usize| -> usize {
        let p = relative_parity(mu.entry(2 * block, 2 * block + 1)).expect("nonzero entry");
        (odd_part << (p.half_valuation - p.entry_valuation)) as usize
    };
    let (ka, kc) = (multiplier(first), multiplier(second));
    let (a, b, c, d) = (2 * first, 2 * first + 1, 2 * second, 2 * second + 1);
    let run = |g: usize, k: usize| Bracketing::Leaf(g).repeated(k);
    let leaf = Bracketing::Leaf;
    let a_run = run(a, ka).expect("ka >= 1");
    let c_run = run(c, kc).expect("kc >= 1");
    let head = Bracketing::pair(
        Bracketing::pair(
            Bracketing::pair(a_run.clone(), c_run.clone()),
            Bracketing::pair(leaf(b), leaf(d)),
        ),
        Bracketing::pair(
            Bracketing::pair(a_run, leaf(d)),
            Bracketing::pair(leaf(b), c_run),
        ),
    );
    let two_n = 2 * half as usize;
    let tails = [
        run(a, two_n - 2 * ka),
        run(b, two_n - 2),
        run(c, two_n - 2 * kc),
        run(d, two_n - 2),
    ];
    let bracketing = Bracketing::left_fold(std::iter::once(head).chain(tails.into_iter().flatten()))
        .expect("nonempty");
    let word = ContextualWord::from_bracketing(bracketing, mu)
        .map_err(|why| DarbouxError::Certificate(why.describe(mu.labels())))?;
    if word.phase().value() != half {
        return Err(DarbouxError::Certificate(format!(
            "phase {} instead of {half}",
            word.phase()
        )));
    }
    Ok(Decision::Contextual {
        word,
        blocks: (first, second),
    })
}

/// Block diagonal matrix with the given block entries.
pub fn darboux_matrix(
    lambdas: &[i64],
    extra: usize,
    modulus: Modulus,
) -> Result<CommutatorMatrix, AlgebraError> {
    let n = 2 * lambdas.len() + extra;
    let mut rows = vec![vec![0i64; n]; n];
    for (j, &l) in lambdas.iter().enumerate() {
        rows[2 * j][2 * j + 1] = l;
        rows[2 * j + 1][2 * j] = -l;
    }
    CommutatorMatrix::new(&rows, modulus, None)
}
