use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::monomial::{monomial_basis, Monomial};
use crate::coeff::{GaussCoeff, Rational};
use crate::error::{CrnfError, Result};

/// A bihomogeneous polynomial of bidegree (m, n) in z, z̄.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BihomPoly {
    n_vars: usize,
    bidegree: (u32, u32),
    terms: BTreeMap<Monomial, GaussCoeff>,
}

impl BihomPoly {
    pub fn zero(n_vars: usize, bidegree: (u32, u32)) -> Self {
        BihomPoly { n_vars, bidegree, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: GaussCoeff) -> Self {
        let mut p = BihomPoly::zero(n_vars, (0, 0));
        p.add_term(Monomial::one(n_vars), c);
        p
    }

    pub fn monomial(m: Monomial, c: GaussCoeff) -> Self {
        let mut p = BihomPoly::zero(m.n_vars(), m.bidegree());
        p.add_term(m, c);
        p
    }

    /// Builds from terms, checking every monomial against the bidegree. Repeated monomials add up.
    pub fn from_terms<I>(n_vars: usize, bidegree: (u32, u32), terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, GaussCoeff)>,
    {
        let mut p = BihomPoly::zero(n_vars, bidegree);
        for (m, c) in terms {
            if m.n_vars() != n_vars {
                return Err(CrnfError::DimensionMismatch { expected: n_vars, found: m.n_vars() });
            }
            if m.bidegree() != bidegree {
                return Err(CrnfError::InvalidInput(format!(
                    "monomial {m} has bidegree {:?}, expected {:?}",
                    m.bidegree(),
                    bidegree
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn degree(&self) -> u32 {
        self.bidegree.0 + self.bidegree.1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussCoeff {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: GaussCoeff) {
        debug_assert_eq!(m.bidegree(), self.bidegree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &BihomPoly) {
        assert_eq!(self.n_vars, other.n_vars, "n_vars mismatch");
        assert_eq!(self.bidegree, other.bidegree, "bidegree mismatch");
    }

    pub fn add(&self, other: &BihomPoly) -> BihomPoly {
        self.check_same(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BihomPoly) -> BihomPoly {
        self.check_same(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> BihomPoly {
        self.scale(&GaussCoeff::from_int(-1))
    }

    pub fn scale(&self, c: &GaussCoeff) -> BihomPoly {
        let mut out = BihomPoly::zero(self.n_vars, self.bidegree);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> BihomPoly {
        self.scale(&GaussCoeff::from_rational(r.clone()))
    }

    pub fn mul(&self, other: &BihomPoly) -> BihomPoly {
        assert_eq!(self.n_vars, other.n_vars, "n_vars mismatch");
        let bd = (self.bidegree.0 + other.bidegree.0, self.bidegree.1 + other.bidegree.1);
        let mut out = BihomPoly::zero(self.n_vars, bd);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BihomPoly {
        let mut acc = BihomPoly::constant(self.n_vars, GaussCoeff::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conjugate(&self) -> BihomPoly {
        let mut out = BihomPoly::zero(self.n_vars, (self.bidegree.1, self.bidegree.0));
        for (m, c) in &self.terms {
            out.terms.insert(m.conjugate(), c.conj());
        }
        out
    }

    /// ∂/∂z_k (`anti = false`) or ∂/∂z̄_k, 0-based `k`.
    pub fn derive(&self, k: usize, anti: bool) -> BihomPoly {
        assert!(k < self.n_vars, "variable index out of range");
        let (m, n) = self.bidegree;
        let bd = if anti { (m, n.saturating_sub(1)) } else { (m.saturating_sub(1), n) };
        let mut out = BihomPoly::zero(self.n_vars, bd);
        if (anti && n == 0) || (!anti && m == 0) {
            return out;
        }
        for (mono, c) in &self.terms {
            let e = mono.exponent(k, anti);
            if let Some(low) = mono.lowered(k, anti) {
                out.add_term(low, c.scale(&Rational::from_integer(e.into())));
            }
        }
        out
    }

    /// tr = Σ_k ∂²/∂z_k∂z̄_k applied `iterations` times; `None` when the bidegree would go negative.
    pub fn trace(&self, iterations: u32) -> Option<BihomPoly> {
        let (m, n) = self.bidegree;
        if iterations > m || iterations > n {
            return None;
        }
        let mut cur = self.clone();
        for _ in 0..iterations {
            let (a, b) = cur.bidegree;
            let mut next = BihomPoly::zero(self.n_vars, (a - 1, b - 1));
            for (mono, c) in &cur.terms {
                for k in 0..self.n_vars {
                    let (p, q) = (mono.exponent(k, false), mono.exponent(k, true));
                    if p > 0 && q > 0 {
                        let low = mono.lowered(k, false).unwrap().lowered(k, true).unwrap();
                        next.add_term(low, c.scale(&Rational::from_integer((p * q).into())));
                    }
                }
            }
            cur = next;
        }
        Some(cur)
    }

    pub fn evaluate(&self, point: &[GaussCoeff]) -> GaussCoeff {
        assert_eq!(point.len(), self.n_vars, "point length mismatch");
        let conj: Vec<GaussCoeff> = point.iter().map(|p| p.conj()).collect();
        let mut acc = GaussCoeff::zero();
        for (mono, c) in &self.terms {
            let mut v = c.clone();
            for k in 0..self.n_vars {
                v = &v * &point[k].pow(mono.dz()[k]);
                v = &v * &conj[k].pow(mono.dzb()[k]);
            }
            acc += &v;
        }
        acc
    }

    /// Coefficient vector in the canonical monomial basis of the bidegree.
    pub fn to_vector(&self, basis: &[Monomial]) -> Vec<GaussCoeff> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_vector(n_vars: usize, bidegree: (u32, u32), basis: &[Monomial], v: &[GaussCoeff]) -> BihomPoly {
        let mut out = BihomPoly::zero(n_vars, bidegree);
        for (m, c) in basis.iter().zip(v) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn basis(&self) -> Vec<Monomial> {
        monomial_basis(self.n_vars, self.bidegree.0, self.bidegree.1)
    }

    pub fn is_pure(&self) -> bool {
        self.bidegree.1 == 0
    }
}

impl fmt::Display for BihomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{m}")?;
            } else if m.degree() == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// ⟨z,z⟩ = Σ z_k z̄_k.
pub fn hermitian_quadric(n_vars: usize) -> BihomPoly {
    let mut p = BihomPoly::zero(n_vars, (1, 1));
    for k in 0..n_vars {
        p.add_term(Monomial::z(n_vars, k).mul(&Monomial::zb(n_vars, k)), GaussCoeff::one());
    }
    p
}

/// A holomorphic homogeneous polynomial (bidegree (d, 0)).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PurePoly(BihomPoly);

impl PurePoly {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        PurePoly(BihomPoly::zero(n_vars, (degree, 0)))
    }

    pub fn constant(n_vars: usize, c: GaussCoeff) -> Self {
        PurePoly(BihomPoly::constant(n_vars, c))
    }

    /// z_k (0-based).
    pub fn var(n_vars: usize, k: usize) -> Self {
        PurePoly(BihomPoly::monomial(Monomial::z(n_vars, k), GaussCoeff::one()))
    }

    /// Builds from holomorphic exponent vectors.
    pub fn from_exponents<I>(n_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, GaussCoeff)>,
    {
        let zeros = vec![0; n_vars];
        let mut ms = Vec::new();
        for (e, c) in terms {
            if e.len() != n_vars {
                return Err(CrnfError::DimensionMismatch { expected: n_vars, found: e.len() });
            }
            ms.push((Monomial::new(&e, &zeros), c));
        }
        BihomPoly::from_terms(n_vars, (degree, 0), ms).map(PurePoly)
    }

    pub fn try_from_bihom(p: BihomPoly) -> Result<Self> {
        if p.bidegree.1 != 0 {
            return Err(CrnfError::InvalidInput(format!(
                "expected a pure polynomial, got bidegree {:?}",
                p.bidegree
            )));
        }
        Ok(PurePoly(p))
    }

    pub fn as_bihom(&self) -> &BihomPoly {
        &self.0
    }

    pub fn into_bihom(self) -> BihomPoly {
        self.0
    }

    pub fn n_vars(&self) -> usize {
        self.0.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.0.bidegree.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussCoeff)> {
        self.0.terms()
    }

    pub fn coeff_of(&self, dz: &[u32]) -> GaussCoeff {
        self.0.coeff(&Monomial::new(dz, &vec![0; dz.len()]))
    }

    pub fn add(&self, o: &PurePoly) -> PurePoly {
        PurePoly(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &PurePoly) -> PurePoly {
        PurePoly(self.0.sub(&o.0))
    }

    pub fn scale(&self, c: &GaussCoeff) -> PurePoly {
        PurePoly(self.0.scale(c))
    }

    pub fn mul(&self, o: &PurePoly) -> PurePoly {
        PurePoly(self.0.mul(&o.0))
    }

    pub fn pow(&self, e: u32) -> PurePoly {
        PurePoly(self.0.pow(e))
    }

    pub fn derive(&self, k: usize) -> PurePoly {
        PurePoly(self.0.derive(k, false))
    }

    pub fn basis(&self) -> Vec<Monomial> {
        self.0.basis()
    }

    pub fn pure_basis(n_vars: usize, degree: u32) -> Vec<Monomial> {
        monomial_basis(n_vars, degree, 0)
    }

    pub fn from_vector(n_vars: usize, degree: u32, basis: &[Monomial], v: &[GaussCoeff]) -> PurePoly {
        PurePoly(BihomPoly::from_vector(n_vars, (degree, 0), basis, v))
    }

    pub fn to_vector(&self, basis: &[Monomial]) -> Vec<GaussCoeff> {
        self.0.to_vector(basis)
    }

    /// Substitutes z ↦ A z for a square matrix A (rows act on z).
    pub fn linear_change(&self, a: &[Vec<GaussCoeff>]) -> PurePoly {
        let n = self.n_vars();
        let images: Vec<PurePoly> = (0..n)
            .map(|k| {
                let mut acc = PurePoly::zero(n, 1);
                for (j, c) in a[k].iter().enumerate() {
                    acc = acc.add(&PurePoly::var(n, j).scale(c));
                }
                acc
            })
            .collect();
        let mut out = PurePoly::zero(n, self.degree());
        for (mono, c) in self.terms() {
            let mut term = PurePoly::constant(n, c.clone());
            for (k, &e) in mono.dz().iter().enumerate() {
                term = term.mul(&images[k].pow(e));
            }
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for PurePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn zz(n: usize) -> BihomPoly {
        hermitian_quadric(n)
    }

    #[test]
    fn trace_examples() {
        let p = BihomPoly::monomial(Monomial::new(&[1], &[1]), GaussCoeff::one());
        assert_eq!(p.trace(1).unwrap(), BihomPoly::constant(1, GaussCoeff::one()));
        assert_eq!(zz(2).trace(1).unwrap(), BihomPoly::constant(2, GaussCoeff::from_int(2)));
        assert_eq!(zz(3).trace(1).unwrap(), BihomPoly::constant(3, GaussCoeff::from_int(3)));
        assert!(p.trace(2).is_none());
        assert_eq!(p.trace(0).unwrap(), p);
    }

    #[test]
    fn trace_of_square_by_single_derivatives() {
        // z1^2 zb1^2 differentiated twice in each slot by hand: 2*2*1*1 = 4
        let p = BihomPoly::monomial(Monomial::new(&[2, 0], &[2, 0]), GaussCoeff::one());
        let mut q = p.clone();
        for _ in 0..2 {
            q = q.derive(0, false).derive(0, true);
        }
        assert_eq!(q, BihomPoly::constant(2, GaussCoeff::from_int(4)));
        assert_eq!(p.trace(2).unwrap(), q);
    }

    #[test]
    fn derive_examples() {
        let p = PurePoly::from_exponents(1, 3, [(vec![3], GaussCoeff::one())]).unwrap();
        assert_eq!(p.derive(0).coeff_of(&[2]), GaussCoeff::from_int(3));
        assert!(p.as_bihom().derive(0, true).is_zero());
        let q = BihomPoly::monomial(Monomial::new(&[2, 0], &[0, 1]), GaussCoeff::one());
        assert_eq!(q.derive(1, true), BihomPoly::monomial(Monomial::new(&[2, 0], &[0, 0]), GaussCoeff::one()));
    }

    #[test]
    fn conjugate_examples() {
        let p = BihomPoly::monomial(Monomial::new(&[2], &[0]), GaussCoeff::i());
        let c = p.conjugate();
        assert_eq!(c, BihomPoly::monomial(Monomial::new(&[0], &[2]), -GaussCoeff::i()));
        assert_eq!(zz(2).conjugate(), zz(2));
    }

    #[test]
    fn evaluate_examples() {
        let p = BihomPoly::monomial(Monomial::new(&[1], &[1]), GaussCoeff::one());
        let pt = [GaussCoeff::new(rat(1, 1), rat(1, 1))];
        assert_eq!(p.evaluate(&pt), GaussCoeff::from_int(2));
        assert!(zz(2).evaluate(&[GaussCoeff::zero(), GaussCoeff::zero()]).is_zero());
        let q = BihomPoly::monomial(Monomial::new(&[2], &[0]), GaussCoeff::one());
        assert_eq!(q.evaluate(&[GaussCoeff::from_rational(rat(1, 2))]), GaussCoeff::from_rational(rat(1, 4)));
    }

    #[test]
    fn from_terms_rejects_wrong_bidegree() {
        let r = BihomPoly::from_terms(1, (2, 0), [(Monomial::new(&[1], &[1]), GaussCoeff::one())]);
        assert!(r.is_err());
    }

    #[test]
    fn display() {
        let p = zz(2).scale(&GaussCoeff::from_rational(rat(1, 2)));
        assert_eq!(p.to_string(), "1/2*z1*zb1 + 1/2*z2*zb2");
    }
}
