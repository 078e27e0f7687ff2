//! Dense truncated polynomial arithmetic with integer numerators over one common denominator.
//!
//! Internal plumbing for substitution-heavy work. Monomials of weighted degree at most `max`
//! are enumerated once per layout, sorted by weighted degree, and addressed through
//! mixed-radix keys so that multiplying monomials is adding keys.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff::{GaussCoeff, Rational};

const TABLE_LIMIT: u64 = 1 << 24;

enum Index {
    Table(Vec<u32>),
    Map(HashMap<u64, u32>),
}

pub(crate) struct Layout {
    pub nvars: usize,
    pub weights: Vec<u32>,
    pub max: u32,
    exps: Vec<u16>,
    pub wdeg: Vec<u32>,
    keys: Vec<u64>,
    place: Vec<u64>,
    index: Index,
    /// `deg_end[d]`: number of monomials of weighted degree ≤ d.
    deg_end: Vec<usize>,
    /// Index of the monomial with the first and second halves of the variables swapped.
    conj: Option<Vec<u32>>,
}

type LayoutKey = (Vec<u32>, u32, bool);

fn layout_cache() -> &'static Mutex<HashMap<LayoutKey, Arc<Layout>>> {
    static CACHE: OnceLock<Mutex<HashMap<LayoutKey, Arc<Layout>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Layout {
    /// Layout for z_1..z_N, z̄_1..z̄_N, all of weight 1.
    pub fn mixed(n_vars: usize, max: u32) -> Arc<Layout> {
        Layout::get(vec![1; 2 * n_vars], max, true)
    }

    /// Layout for z_1..z_N (weight 1) and w (weight 2).
    pub fn zw(n_vars: usize, max: u32) -> Arc<Layout> {
        let mut w = vec![1; n_vars];
        w.push(2);
        Layout::get(w, max, false)
    }

    fn get(weights: Vec<u32>, max: u32, with_conj: bool) -> Arc<Layout> {
        let key = (weights.clone(), max, with_conj);
        if let Some(l) = layout_cache().lock().expect("layout lock").get(&key) {
            return l.clone();
        }
        let l = Arc::new(Layout::build(weights, max, with_conj));
        layout_cache().lock().expect("layout lock").insert(key, l.clone());
        l
    }

    fn build(weights: Vec<u32>, max: u32, with_conj: bool) -> Layout {
        let nvars = weights.len();
        let bases: Vec<u64> = weights.iter().map(|&w| (max / w) as u64 + 1).collect();
        let mut place = vec![1u64; nvars];
        for i in 1..nvars {
            place[i] = place[i - 1] * bases[i - 1];
        }
        let mut all: Vec<(u32, Vec<u16>)> = Vec::new();
        let mut cur = vec![0u16; nvars];
        fn rec(i: usize, budget: u32, w: &[u32], cur: &mut Vec<u16>, out: &mut Vec<(u32, Vec<u16>)>, max: u32) {
            if i == w.len() {
                out.push((max - budget, cur.clone()));
                return;
            }
            let mut e = 0u32;
            while e * w[i] <= budget {
                cur[i] = e as u16;
                rec(i + 1, budget - e * w[i], w, cur, out, max);
                e += 1;
            }
            cur[i] = 0;
        }
        rec(0, max, &weights, &mut cur, &mut all, max);
        all.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        let n = all.len();
        let mut exps = Vec::with_capacity(n * nvars);
        let mut wdeg = Vec::with_capacity(n);
        let mut keys = Vec::with_capacity(n);
        for (d, e) in &all {
            exps.extend_from_slice(e);
            wdeg.push(*d);
            keys.push(e.iter().zip(&place).map(|(&x, &p)| x as u64 * p).sum());
        }
        let total: u64 = bases.iter().product();
        let index = if total <= TABLE_LIMIT {
            let mut t = vec![u32::MAX; total as usize];
            for (i, &k) in keys.iter().enumerate() {
                t[k as usize] = i as u32;
            }
            Index::Table(t)
        } else {
            Index::Map(keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect())
        };
        let mut deg_end = vec![0usize; max as usize + 1];
        for d in 0..=max {
            deg_end[d as usize] = wdeg.partition_point(|&x| x <= d);
        }
        let mut layout = Layout { nvars, weights, max, exps, wdeg, keys, place, index, deg_end, conj: None };
        if with_conj {
            let h = nvars / 2;
            let conj = (0..n)
                .map(|i| {
                    let e = layout.exps_of(i);
                    let mut s = Vec::with_capacity(nvars);
                    s.extend_from_slice(&e[h..]);
                    s.extend_from_slice(&e[..h]);
                    layout.index_of(&s).expect("swap stays in layout") as u32
                })
                .collect();
            layout.conj = Some(conj);
        }
        layout
    }

    pub fn len(&self) -> usize {
        self.wdeg.len()
    }

    pub fn exps_of(&self, i: usize) -> &[u16] {
        &self.exps[i * self.nvars..(i + 1) * self.nvars]
    }

    pub fn index_of(&self, e: &[u16]) -> Option<usize> {
        let d: u32 = e.iter().zip(&self.weights).map(|(&x, &w)| x as u32 * w).sum();
        if d > self.max {
            return None;
        }
        let k: u64 = e.iter().zip(&self.place).map(|(&x, &p)| x as u64 * p).sum();
        self.index_of_key(k)
    }

    fn index_of_key(&self, k: u64) -> Option<usize> {
        match &self.index {
            Index::Table(t) => t.get(k as usize).and_then(|&i| (i != u32::MAX).then_some(i as usize)),
            Index::Map(m) => m.get(&k).map(|&i| i as usize),
        }
    }

    /// Index of the product of two monomials, if inside the truncation.
    fn product(&self, a: usize, b: usize) -> Option<usize> {
        if self.wdeg[a] + self.wdeg[b] > self.max {
            return None;
        }
        self.index_of_key(self.keys[a] + self.keys[b])
    }

    pub fn var(&self, i: usize) -> usize {
        let mut e = vec![0u16; self.nvars];
        e[i] = 1;
        self.index_of(&e).expect("variable within truncation")
    }

    pub fn deg_range(&self, d: u32) -> std::ops::Range<usize> {
        let start = if d == 0 { 0 } else { self.deg_end[d as usize - 1] };
        start..self.deg_end[d as usize]
    }

    fn conj_of(&self, i: usize) -> usize {
        self.conj.as_ref().expect("layout without conjugation")[i] as usize
    }
}

/// Gaussian-rational vector `(re + i·im) / den` over a layout, `den > 0`.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub den: BigInt,
    pub re: Vec<BigInt>,
    pub im: Vec<BigInt>,
}

impl Dense {
    pub fn zero(l: &Layout) -> Dense {
        Dense { den: BigInt::one(), re: vec![BigInt::zero(); l.len()], im: vec![BigInt::zero(); l.len()] }
    }

    pub fn monomial(l: &Layout, idx: usize) -> Dense {
        let mut d = Dense::zero(l);
        d.re[idx] = BigInt::one();
        d
    }

    pub fn one(l: &Layout) -> Dense {
        Dense::monomial(l, 0)
    }

    pub fn from_terms<'a, I>(l: &Layout, terms: I) -> Dense
    where
        I: IntoIterator<Item = (usize, &'a GaussCoeff)>,
    {
        let terms: Vec<(usize, &GaussCoeff)> = terms.into_iter().collect();
        let mut den = BigInt::one();
        for (_, c) in &terms {
            den = den.lcm(c.re.denom()).lcm(c.im.denom());
        }
        let mut d = Dense::zero(l);
        for (i, c) in terms {
            d.re[i] += c.re.numer() * (&den / c.re.denom());
            d.im[i] += c.im.numer() * (&den / c.im.denom());
        }
        d.den = den;
        d.normalize();
        d
    }

    pub fn coeff(&self, i: usize) -> GaussCoeff {
        GaussCoeff::new(
            Rational::new(self.re[i].clone(), self.den.clone()),
            Rational::new(self.im[i].clone(), self.den.clone()),
        )
    }

    pub fn is_nonzero_at(&self, i: usize) -> bool {
        !self.re[i].is_zero() || !self.im[i].is_zero()
    }

    pub fn nonzeros(&self) -> Vec<usize> {
        (0..self.re.len()).filter(|&i| self.is_nonzero_at(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.re.len()).all(|i| !self.is_nonzero_at(i))
    }

    /// Lowest weighted degree present.
    pub fn order(&self, l: &Layout) -> Option<u32> {
        (0..self.re.len()).find(|&i| self.is_nonzero_at(i)).map(|i| l.wdeg[i])
    }

    /// Divides out the common content of numerators and denominator.
    pub fn normalize(&mut self) {
        let mut g = self.den.clone();
        for v in self.re.iter().chain(self.im.iter()) {
            if g.is_one() {
                return;
            }
            if !v.is_zero() {
                g = g.gcd(v);
            }
        }
        if g.is_one() {
            return;
        }
        for v in self.re.iter_mut().chain(self.im.iter_mut()) {
            if !v.is_zero() {
                *v /= &g;
            }
        }
        self.den /= &g;
    }

    fn rescale(&mut self, factor: &BigInt) {
        if factor.is_one() {
            return;
        }
        for v in self.re.iter_mut().chain(self.im.iter_mut()) {
            if !v.is_zero() {
                *v *= factor;
            }
        }
        self.den *= factor;
    }

    /// self += sign·other.
    pub fn add_signed(&mut self, other: &Dense, negate: bool) {
        let l = self.den.lcm(&other.den);
        let fs = &l / &self.den;
        let fo = &l / &other.den;
        self.rescale(&fs);
        for i in 0..self.re.len() {
            if !other.is_nonzero_at(i) {
                continue;
            }
            let (r, m) = if fo.is_one() {
                (other.re[i].clone(), other.im[i].clone())
            } else {
                (&other.re[i] * &fo, &other.im[i] * &fo)
            };
            if negate {
                self.re[i] -= r;
                self.im[i] -= m;
            } else {
                self.re[i] += r;
                self.im[i] += m;
            }
        }
        self.normalize();
    }

    pub fn add(&mut self, other: &Dense) {
        self.add_signed(other, false)
    }

    pub fn sub(&mut self, other: &Dense) {
        self.add_signed(other, true)
    }

    /// Keeps only the entries in the index range.
    pub fn restricted(&self, r: std::ops::Range<usize>) -> Dense {
        let mut out = Dense {
            den: self.den.clone(),
            re: vec![BigInt::zero(); self.re.len()],
            im: vec![BigInt::zero(); self.re.len()],
        };
        for i in r {
            out.re[i] = self.re[i].clone();
            out.im[i] = self.im[i].clone();
        }
        out.normalize();
        out
    }

    /// Swaps z and z̄ and conjugates coefficients.
    pub fn conjugate(&self, l: &Layout) -> Dense {
        let mut out = Dense::zero(l);
        out.den = self.den.clone();
        for i in 0..self.re.len() {
            if self.is_nonzero_at(i) {
                let j = l.conj_of(i);
                out.re[j] = self.re[i].clone();
                out.im[j] = -self.im[i].clone();
            }
        }
        out
    }

    /// Truncated product.
    pub fn mul(&self, other: &Dense, l: &Layout) -> Dense {
        let mut acc_re = vec![BigInt::zero(); l.len()];
        let mut acc_im = vec![BigInt::zero(); l.len()];
        let a_nz = self.nonzeros();
        let b_nz = other.nonzeros();
        mul_into(l, &a_nz, &self.re, &self.im, &b_nz, &other.re, &other.im, &mut acc_re, &mut acc_im);
        let mut out = Dense { den: &self.den * &other.den, re: acc_re, im: acc_im };
        out.normalize();
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn mul_into(
    l: &Layout,
    a_nz: &[usize],
    a_re: &[BigInt],
    a_im: &[BigInt],
    b_nz: &[usize],
    b_re: &[BigInt],
    b_im: &[BigInt],
    acc_re: &mut [BigInt],
    acc_im: &mut [BigInt],
) {
    for &a in a_nz {
        let limit = l.max - l.wdeg[a];
        let (ar, ai) = (&a_re[a], &a_im[a]);
        let (ar_z, ai_z) = (ar.is_zero(), ai.is_zero());
        for &b in b_nz {
            if l.wdeg[b] > limit {
                break;
            }
            let Some(p) = l.product(a, b) else { continue };
            let (br, bi) = (&b_re[b], &b_im[b]);
            let (br_z, bi_z) = (br.is_zero(), bi.is_zero());
            if !ar_z && !br_z {
                acc_re[p] += ar * br;
            }
            if !ai_z && !bi_z {
                acc_re[p] -= ai * bi;
            }
            if !ar_z && !bi_z {
                acc_im[p] += ar * bi;
            }
            if !ai_z && !br_z {
                acc_im[p] += ai * br;
            }
        }
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    let mut acc = 1u64;
    for j in 0..k {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// Evaluates polynomials at `x_i + δ_i` via Σ_γ (∂^γ p / γ!) δ^γ, memoizing the products δ^γ.
///
/// Every δ_i must have weighted order above the weight of x_i.
pub(crate) struct Taylor<'a> {
    l: &'a Layout,
    deltas: Vec<Dense>,
    delta_order: Vec<u32>,
    memo: HashMap<usize, Option<Dense>>,
}

impl<'a> Taylor<'a> {
    pub fn new(l: &'a Layout, deltas: Vec<Dense>) -> Self {
        assert_eq!(deltas.len(), l.nvars);
        let delta_order = deltas
            .iter()
            .zip(&l.weights)
            .map(|(d, &w)| {
                let o = d.order(l).unwrap_or(l.max + 1);
                assert!(o > w, "substitution must raise order");
                o
            })
            .collect();
        Taylor { l, deltas, delta_order, memo: HashMap::new() }
    }

    fn gamma_order(&self, g: &[u16]) -> u32 {
        g.iter().zip(&self.delta_order).map(|(&e, &o)| e as u32 * o).sum()
    }

    /// δ^γ for γ given by its layout index; `None` when it vanishes in the truncation.
    fn power(&mut self, gi: usize) -> Option<&Dense> {
        if !self.memo.contains_key(&gi) {
            let g: Vec<u16> = self.l.exps_of(gi).to_vec();
            let value = if self.gamma_order(&g) > self.l.max {
                None
            } else {
                let j = g.iter().position(|&e| e > 0).expect("γ ≠ 0");
                let mut rest = g.clone();
                rest[j] -= 1;
                if rest.iter().all(|&e| e == 0) {
                    Some(self.deltas[j].clone())
                } else {
                    let ri = self.l.index_of(&rest).expect("sub-monomial in layout");
                    let base = self.power(ri).cloned();
                    base.map(|b| b.mul(&self.deltas[j], self.l)).filter(|d| !d.is_zero())
                }
            };
            self.memo.insert(gi, value);
        }
        self.memo[&gi].as_ref()
    }

    /// Σ_{γ≠0} (∂^γ p / γ!) δ^γ, truncated.
    pub fn shift(&mut self, p: &Dense) -> Dense {
        let l = self.l;
        let nv = l.nvars;
        // γ index -> list of (index of x^{α-γ}, binomial factor, source index)
        let mut groups: HashMap<usize, Vec<(usize, u64, usize)>> = HashMap::new();
        let mut gamma = vec![0u16; nv];
        for a in p.nonzeros() {
            let alpha: Vec<u16> = l.exps_of(a).to_vec();
            let mut rest = alpha.clone();
            // enumerate all γ ≤ α, γ ≠ 0
            enumerate_sub(&alpha, 0, &mut gamma, &mut |g: &[u16]| {
                if g.iter().all(|&e| e == 0) {
                    return;
                }
                if self.gamma_order(g) > l.max {
                    return;
                }
                for i in 0..nv {
                    rest[i] = alpha[i] - g[i];
                }
                let rest_deg: u32 = rest.iter().zip(&l.weights).map(|(&e, &w)| e as u32 * w).sum();
                if rest_deg + self.gamma_order(g) > l.max {
                    return;
                }
                let gi = l.index_of(g).expect("γ in layout");
                let ri = l.index_of(&rest).expect("α-γ in layout");
                let mut b = 1u64;
                for i in 0..nv {
                    b *= binomial(alpha[i] as u32, g[i] as u32);
                }
                groups.entry(gi).or_default().push((ri, b, a));
            });
        }
        let mut keys: Vec<usize> = groups.keys().copied().collect();
        keys.sort_unstable();
        let mut parts: Vec<(Vec<usize>, Vec<BigInt>, Vec<BigInt>, Dense)> = Vec::new();
        for gi in keys {
            let Some(pw) = self.power(gi).cloned() else { continue };
            let mut re = vec![BigInt::zero(); l.len()];
            let mut im = vec![BigInt::zero(); l.len()];
            let mut nz = Vec::new();
            for &(ri, b, a) in &groups[&gi] {
                if re[ri].is_zero() && im[ri].is_zero() {
                    nz.push(ri);
                }
                re[ri] += &p.re[a] * b;
                im[ri] += &p.im[a] * b;
            }
            nz.sort_unstable();
            nz.dedup();
            parts.push((nz, re, im, pw));
        }
        let mut common = BigInt::one();
        for (_, _, _, pw) in &parts {
            common = common.lcm(&pw.den);
        }
        let mut acc_re = vec![BigInt::zero(); l.len()];
        let mut acc_im = vec![BigInt::zero(); l.len()];
        for (nz, mut re, mut im, pw) in parts {
            let f = &common / &pw.den;
            if !f.is_one() {
                for &i in &nz {
                    re[i] *= &f;
                    im[i] *= &f;
                }
            }
            let b_nz = pw.nonzeros();
            mul_into(l, &nz, &re, &im, &b_nz, &pw.re, &pw.im, &mut acc_re, &mut acc_im);
        }
        let mut out = Dense { den: &p.den * &common, re: acc_re, im: acc_im };
        out.normalize();
        out
    }

    /// p(x + δ), truncated.
    pub fn substitute(&mut self, p: &Dense) -> Dense {
        let mut out = self.shift(p);
        out.add(p);
        out
    }
}

fn enumerate_sub(alpha: &[u16], i: usize, cur: &mut Vec<u16>, f: &mut dyn FnMut(&[u16])) {
    if i == alpha.len() {
        f(cur);
        return;
    }
    for e in 0..=alpha[i] {
        cur[i] = e;
        enumerate_sub(alpha, i + 1, cur, f);
    }
    cur[i] = 0;
}

/// Exact reconstruction helper for tests.
#[cfg(test)]
pub(crate) fn to_map(d: &Dense, l: &Layout) -> std::collections::BTreeMap<Vec<u16>, GaussCoeff> {
    d.nonzeros().into_iter().map(|i| (l.exps_of(i).to_vec(), d.coeff(i))).collect()
}
