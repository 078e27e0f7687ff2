use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::bihom::{BihomPoly, PurePoly};
use crate::coeff::GaussCoeff;
use crate::error::{CrnfError, Result};

/// A sum of bihomogeneous parts of total degree at most `max_degree`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedSeries {
    n_vars: usize,
    max_degree: u32,
    parts: BTreeMap<(u32, u32), BihomPoly>,
}

/// A natural number or infinity; `Finite(_) < Infinite`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ExtNat {
    Finite(u32),
    Infinite,
}

#[derive(Clone, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Scale,
    Mul,
}

#[derive(Clone, Debug)]
pub enum Operand<'a> {
    Series(&'a MixedSeries),
    Scalar(&'a GaussCoeff),
}

impl MixedSeries {
    pub fn zero(n_vars: usize, max_degree: u32) -> Self {
        MixedSeries { n_vars, max_degree, parts: BTreeMap::new() }
    }

    pub fn from_part(p: BihomPoly, max_degree: u32) -> Self {
        let mut s = MixedSeries::zero(p.n_vars(), max_degree);
        s.add_part(&p);
        s
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&(u32, u32), &BihomPoly)> {
        self.parts.iter()
    }

    pub fn part(&self, m: u32, n: u32) -> BihomPoly {
        self.parts
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| BihomPoly::zero(self.n_vars, (m, n)))
    }

    pub fn part_ref(&self, m: u32, n: u32) -> Option<&BihomPoly> {
        self.parts.get(&(m, n))
    }

    /// φ_{T,0} as a pure polynomial.
    pub fn pure_part(&self, degree: u32) -> PurePoly {
        PurePoly::try_from_bihom(self.part(degree, 0)).expect("bidegree (T,0)")
    }

    /// Adds a part; parts above the truncation degree are dropped.
    pub fn add_part(&mut self, p: &BihomPoly) {
        assert_eq!(p.n_vars(), self.n_vars, "n_vars mismatch");
        if p.is_zero() || p.degree() > self.max_degree {
            return;
        }
        let key = p.bidegree();
        let merged = match self.parts.get(&key) {
            Some(q) => q.add(p),
            None => p.clone(),
        };
        if merged.is_zero() {
            self.parts.remove(&key);
        } else {
            self.parts.insert(key, merged);
        }
    }

    pub fn set_part(&mut self, p: BihomPoly) {
        let key = p.bidegree();
        if p.is_zero() || p.degree() > self.max_degree {
            self.parts.remove(&key);
        } else {
            self.parts.insert(key, p);
        }
    }

    pub fn remove_part(&mut self, m: u32, n: u32) {
        self.parts.remove(&(m, n));
    }

    /// Parts of total degree `d`.
    pub fn homogeneous(&self, d: u32) -> impl Iterator<Item = &BihomPoly> {
        self.parts.iter().filter(move |(k, _)| k.0 + k.1 == d).map(|(_, p)| p)
    }

    pub fn truncate(&self, max_degree: u32) -> MixedSeries {
        MixedSeries {
            n_vars: self.n_vars,
            max_degree,
            parts: self
                .parts
                .iter()
                .filter(|(k, _)| k.0 + k.1 <= max_degree)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    fn check(&self, o: &MixedSeries) -> Result<()> {
        if self.n_vars != o.n_vars {
            return Err(CrnfError::DimensionMismatch { expected: self.n_vars, found: o.n_vars });
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &MixedSeries) -> Result<MixedSeries> {
        self.check(o)?;
        let mut out = self.truncate(self.max_degree.min(o.max_degree));
        for p in o.parts.values() {
            out.add_part(p);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &MixedSeries) -> Result<MixedSeries> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &MixedSeries) -> Result<MixedSeries> {
        self.check(o)?;
        let d = self.max_degree.min(o.max_degree);
        let mut out = MixedSeries::zero(self.n_vars, d);
        for a in self.parts.values() {
            for b in o.parts.values() {
                if a.degree() + b.degree() <= d {
                    out.add_part(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// Panicking form of [`checked_add`](Self::checked_add) for internal use.
    pub fn add(&self, o: &MixedSeries) -> MixedSeries {
        self.checked_add(o).expect("n_vars mismatch")
    }

    pub fn sub(&self, o: &MixedSeries) -> MixedSeries {
        self.checked_sub(o).expect("n_vars mismatch")
    }

    pub fn mul(&self, o: &MixedSeries) -> MixedSeries {
        self.checked_mul(o).expect("n_vars mismatch")
    }

    pub fn neg(&self) -> MixedSeries {
        self.scale(&GaussCoeff::from_int(-1))
    }

    pub fn scale(&self, c: &GaussCoeff) -> MixedSeries {
        let mut out = MixedSeries::zero(self.n_vars, self.max_degree);
        if c.is_zero() {
            return out;
        }
        for p in self.parts.values() {
            out.parts.insert(p.bidegree(), p.scale(c));
        }
        out
    }

    pub fn conjugate(&self) -> MixedSeries {
        let mut out = MixedSeries::zero(self.n_vars, self.max_degree);
        for p in self.parts.values() {
            let c = p.conjugate();
            out.parts.insert(c.bidegree(), c);
        }
        out
    }

    pub fn derive(&self, k: usize, anti: bool) -> MixedSeries {
        let mut out = MixedSeries::zero(self.n_vars, self.max_degree);
        for p in self.parts.values() {
            out.add_part(&p.derive(k, anti));
        }
        out
    }

    pub fn trace(&self, iterations: u32) -> MixedSeries {
        let mut out = MixedSeries::zero(self.n_vars, self.max_degree);
        for p in self.parts.values() {
            if let Some(t) = p.trace(iterations) {
                out.add_part(&t);
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[GaussCoeff]) -> GaussCoeff {
        let mut acc = GaussCoeff::zero();
        for p in self.parts.values() {
            acc += &p.evaluate(point);
        }
        acc
    }

    /// Huang-Yin weight (wt z = 1, wt z̄ = s−1) and order of the lowest monomials.
    pub fn weight_and_order(&self, s: u32) -> (ExtNat, ExtNat) {
        let mut w = ExtNat::Infinite;
        let mut o = ExtNat::Infinite;
        for ((m, n), _) in &self.parts {
            w = w.min(ExtNat::Finite(m + (s - 1) * n));
            o = o.min(ExtNat::Finite(m + n));
        }
        (w, o)
    }

    /// Largest total degree with a nonzero part.
    pub fn top_degree(&self) -> Option<u32> {
        self.parts.keys().map(|(m, n)| m + n).max()
    }
}

impl fmt::Display for MixedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for p in self.parts.values() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The four ring operations with the truncation contract.
pub fn poly_arith(op: ArithOp, lhs: &MixedSeries, rhs: Operand<'_>) -> Result<MixedSeries> {
    match (op, rhs) {
        (ArithOp::Add, Operand::Series(r)) => lhs.checked_add(r),
        (ArithOp::Sub, Operand::Series(r)) => lhs.checked_sub(r),
        (ArithOp::Mul, Operand::Series(r)) => lhs.checked_mul(r),
        (ArithOp::Scale, Operand::Scalar(c)) | (ArithOp::Mul, Operand::Scalar(c)) => Ok(lhs.scale(c)),
        (op, rhs) => Err(CrnfError::InvalidInput(format!("operation {op:?} does not accept {rhs:?}"))),
    }
}
