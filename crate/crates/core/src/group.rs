//! The group `H(mu)` on `Z_d x Z_d^n` with product
//! `(k, v) (l, w) = (k + l + lower(v, w), v + w)`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CommutatorMatrix, ExponentVector, LowerPart, Modulus, Scalar};
use crate::rewrite::NormalForm;
use crate::word::{Letter, Word};

/// Default bound on `d^(n+1)` for anything that enumerates the group.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element has {found} components, group has {expected} generators")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("element is over Z_{found}, group is over Z_{expected}")]
    ModulusMismatch { expected: u32, found: u32 },
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: String, cap: u64 },
}

/// A group element `(k, v)`, i.e. the normal form `J_k x1^v1 ... xn^vn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub phase: Scalar,
    pub vector: ExponentVector,
}

/// JSON shape `{"k": .., "vec": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub k: u32,
    pub vec: Vec<u32>,
}

impl GroupElement {
    pub fn record(&self) -> ElementRecord {
        ElementRecord {
            k: self.phase.value(),
            vec: self.vector.as_slice().to_vec(),
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.vector.is_zero()
    }
}

#[derive(Debug)]
struct Context {
    mu: CommutatorMatrix,
    lower: LowerPart,
}

/// Shared, immutable group context for one commutator matrix.
#[derive(Debug, Clone)]
pub struct Group {
    ctx: Arc<Context>,
}

impl Group {
    pub fn new(mu: CommutatorMatrix) -> Self {
        let lower = mu.lower_part();
        Group {
            ctx: Arc::new(Context { mu, lower }),
        }
    }

    pub fn mu(&self) -> &CommutatorMatrix {
        &self.ctx.mu
    }

    pub fn lower(&self) -> &LowerPart {
        &self.ctx.lower
    }

    pub fn modulus(&self) -> Modulus {
        self.ctx.mu.modulus()
    }

    pub fn n(&self) -> usize {
        self.ctx.mu.n()
    }

    /// `d^(n+1)`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        u64::from(self.modulus().get()).checked_pow(u32::try_from(self.n() + 1).ok()?)
    }

    pub fn check_cap(&self, cap: u64) -> Result<u64, GroupError> {
        match self.order() {
            Some(order) if order <= cap => Ok(order),
            Some(order) => Err(GroupError::CapExceeded {
                order: order.to_string(),
                cap,
            }),
            None => Err(GroupError::CapExceeded {
                order: format!("{}^{}", self.modulus().get(), self.n() + 1),
                cap,
            }),
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        let m = self.modulus();
        for found in [g.phase.modulus(), g.vector.modulus()] {
            if found != m {
                return Err(GroupError::ModulusMismatch {
                    expected: m.get(),
                    found: found.get(),
                });
            }
        }
        if g.vector.len() != self.n() {
            return Err(GroupError::DimensionMismatch {
                expected: self.n(),
                found: g.vector.len(),
            });
        }
        Ok(())
    }

    pub fn element(&self, k: i64, vector: &[i64]) -> Result<GroupElement, GroupError> {
        let m = self.modulus();
        let g = GroupElement {
            phase: m.scalar(k),
            vector: ExponentVector::from_ints(vector, m),
        };
        self.check(&g)?;
        Ok(g)
    }

    pub fn from_record(&self, record: &ElementRecord) -> Result<GroupElement, GroupError> {
        let vec: Vec<i64> = record.vec.iter().map(|&v| i64::from(v)).collect();
        self.element(i64::from(record.k), &vec)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            phase: self.modulus().zero(),
            vector: ExponentVector::zero(self.n(), self.modulus()),
        }
    }

    /// The central element `(k, 0)`.
    pub fn scalar(&self, k: i64) -> GroupElement {
        GroupElement {
            phase: self.modulus().scalar(k),
            vector: ExponentVector::zero(self.n(), self.modulus()),
        }
    }

    /// The generator `(0, e_i)`.
    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement {
            phase: self.modulus().zero(),
            vector: ExponentVector::unit(self.n(), i, self.modulus()),
        }
    }

    fn check_pair(&self, g: &GroupElement, h: &GroupElement) -> Result<(), GroupError> {
        self.check(g)?;
        self.check(h)
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_pair(g, h)?;
        Ok(self.mul(g, h))
    }

    /// Product without validation; callers guarantee both elements belong here.
    pub(crate) fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let cocycle = self
            .lower()
            .matrix()
            .bilinear_unchecked(g.vector.as_slice(), h.vector.as_slice());
        GroupElement {
            phase: g.phase + h.phase + self.modulus().scalar(i64::from(cocycle)),
            vector: g.vector.add(&h.vector),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        Ok(self.inv(g))
    }

    pub(crate) fn inv(&self, g: &GroupElement) -> GroupElement {
        let neg = g.vector.neg();
        let cocycle = self
            .lower()
            .matrix()
            .bilinear_unchecked(g.vector.as_slice(), neg.as_slice());
        let m = self.modulus();
        GroupElement {
            phase: -g.phase - m.scalar(i64::from(cocycle)),
            vector: neg,
        }
    }

    /// `g h g^-1 h^-1`, which is always `(mu(v, w), 0)`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_pair(g, h)?;
        let gh = self.mul(g, h);
        let hg = self.mul(h, g);
        Ok(self.mul(&gh, &self.inv(&hg)))
    }

    pub fn commutes(&self, g: &GroupElement, h: &GroupElement) -> bool {
        self.mu()
            .matrix()
            .bilinear_unchecked(g.vector.as_slice(), h.vector.as_slice())
            == 0
    }

    pub fn power(&self, g: &GroupElement, exponent: u64) -> GroupElement {
        let mut acc = self.identity();
        for _ in 0..exponent {
            acc = self.mul(&acc, g);
        }
        acc
    }

    /// Least `m >= 1` with `g^m = 1`, found by repeated multiplication.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        let identity = self.identity();
        let bound = u64::from(self.modulus().get()).pow(2);
        let mut acc = g.clone();
        for m in 1..=bound {
            if acc == identity {
                return m;
            }
            acc = self.mul(&acc, g);
        }
        unreachable!("element order divides d^2")
    }

    pub fn from_normal_form(&self, nf: &NormalForm) -> GroupElement {
        GroupElement {
            phase: nf.phase,
            vector: nf.exponents.clone(),
        }
    }

    pub fn to_normal_form(&self, g: &GroupElement) -> NormalForm {
        NormalForm {
            phase: g.phase,
            exponents: g.vector.clone(),
        }
    }

    /// Folds a word through the group product, letter by letter.
    pub fn evaluate(&self, word: &Word) -> GroupElement {
        word.letters()
            .iter()
            .fold(self.identity(), |acc, letter| match *letter {
                Letter::Generator(i) => self.mul(&acc, &self.generator(i)),
                Letter::Phase(k) => self.mul(&acc, &self.scalar(i64::from(k))),
            })
    }

    /// Dense index of an element: `k + d * (v1 + d v2 + ...)`.
    pub fn encode(&self, g: &GroupElement) -> u64 {
        let d = u64::from(self.modulus().get());
        let mut code = 0u64;
        for &v in g.vector.as_slice().iter().rev() {
            code = code * d + u64::from(v);
        }
        code * d + u64::from(g.phase.value())
    }

    pub fn decode(&self, mut code: u64) -> GroupElement {
        let m = self.modulus();
        let d = u64::from(m.get());
        let phase = (code % d) as u32;
        code /= d;
        let mut vector = Vec::with_capacity(self.n());
        for _ in 0..self.n() {
            vector.push((code % d) as u32);
            code /= d;
        }
        GroupElement {
            phase: m.scalar(i64::from(phase)),
            vector: ExponentVector::from_reduced(vector, m),
        }
    }

    /// Every element exactly once, in code order.
    pub fn enumerate(
        &self,
        cap: u64,
    ) -> Result<impl Iterator<Item = GroupElement> + '_, GroupError> {
        let order = self.check_cap(cap)?;
        Ok((0..order).map(move |c| self.decode(c)))
    }

    /// Elements of `set` commuting with every element of `set`.
    pub fn centre(&self, set: &[GroupElement]) -> Vec<GroupElement> {
        set.iter()
            .filter(|a| set.iter().all(|b| self.commutes(a, b)))
            .cloned()
            .collect()
    }

    pub fn distinct(&self, set: &[GroupElement]) -> bool {
        let mut seen = HashSet::new();
        set.iter().all(|g| seen.insert(self.encode(g)))
    }
}
