use std::cmp::Ordering;
use std::fmt;

/// z^dz z̄^dzb, stored as one exponent vector `[dz.., dzb..]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(dz: &[u32], dzb: &[u32]) -> Self {
        assert_eq!(dz.len(), dzb.len(), "dz and dzb lengths differ");
        let mut exps = Vec::with_capacity(2 * dz.len());
        exps.extend_from_slice(dz);
        exps.extend_from_slice(dzb);
        Monomial { exps }
    }

    pub fn one(n_vars: usize) -> Self {
        Monomial { exps: vec![0; 2 * n_vars] }
    }

    /// z_k (0-based).
    pub fn z(n_vars: usize, k: usize) -> Self {
        let mut m = Monomial::one(n_vars);
        m.exps[k] = 1;
        m
    }

    /// z̄_k (0-based).
    pub fn zb(n_vars: usize, k: usize) -> Self {
        let mut m = Monomial::one(n_vars);
        m.exps[n_vars + k] = 1;
        m
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn dz(&self) -> &[u32] {
        &self.exps[..self.n_vars()]
    }

    pub fn dzb(&self) -> &[u32] {
        &self.exps[self.n_vars()..]
    }

    pub(crate) fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn holo_degree(&self) -> u32 {
        self.dz().iter().sum()
    }

    pub fn anti_degree(&self) -> u32 {
        self.dzb().iter().sum()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.holo_degree(), self.anti_degree())
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn conjugate(&self) -> Monomial {
        let n = self.n_vars();
        let mut exps = Vec::with_capacity(2 * n);
        exps.extend_from_slice(&self.exps[n..]);
        exps.extend_from_slice(&self.exps[..n]);
        Monomial { exps }
    }

    /// Exponent slot for z_k (`anti = false`) or z̄_k.
    pub(crate) fn slot(&self, k: usize, anti: bool) -> usize {
        if anti {
            self.n_vars() + k
        } else {
            k
        }
    }

    pub fn exponent(&self, k: usize, anti: bool) -> u32 {
        self.exps[self.slot(k, anti)]
    }

    /// Lowers the exponent in one slot; `None` if it is already zero.
    pub fn lowered(&self, k: usize, anti: bool) -> Option<Monomial> {
        let s = self.slot(k, anti);
        if self.exps[s] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[s] -= 1;
        Some(Monomial { exps })
    }

    pub fn raised(&self, k: usize, anti: bool) -> Monomial {
        let s = self.slot(k, anti);
        let mut exps = self.exps.clone();
        exps[s] += 1;
        Monomial { exps }
    }

    /// Π α_i! over the holomorphic exponents.
    pub fn holo_factorial(&self) -> num_bigint::BigInt {
        let mut acc = num_bigint::BigInt::from(1);
        for &e in self.dz() {
            for j in 2..=e {
                acc *= j;
            }
        }
        acc
    }
}

/// Graded, then lexicographically decreasing exponents: z_1^2 < z_1 z_2 < z_2^2.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_vars();
        let mut first = true;
        for (slot, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = if slot < n { "z" } else { "zb" };
            write!(f, "{}{}", name, slot % n + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All exponent vectors of length `len` summing to `degree`, lexicographically decreasing.
pub(crate) fn compositions(len: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=degree).rev() {
            prefix.push(first);
            rec(len - 1, degree - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(len, degree, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Monomials of bidegree (m, n) in canonical order.
pub fn monomial_basis(n_vars: usize, m: u32, n: u32) -> Vec<Monomial> {
    let holo = compositions(n_vars, m);
    let anti = compositions(n_vars, n);
    let mut out = Vec::with_capacity(holo.len() * anti.len());
    for a in &holo {
        for b in &anti {
            out.push(Monomial::new(a, b));
        }
    }
    out.sort();
    out
}
