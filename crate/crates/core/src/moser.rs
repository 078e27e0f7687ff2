//! Manifolds `w = ⟨z,z⟩ + φ`, formal maps, push-forward and the trace-normalized partial normal form.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::GaussCoeff;
use crate::decomp::{is_nondegenerate, trace_decompose};
use crate::dense::{Dense, Layout, Taylor};
use crate::error::{CrnfError, Result};
use crate::polycore::{hermitian_quadric, BihomPoly, MixedSeries, Monomial, PurePoly};

/// `w = ⟨z,z⟩ + Σ φ_{m,n}` with 3 ≤ m+n ≤ D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifold {
    n_vars: usize,
    max_degree: u32,
    phi: MixedSeries,
}

impl Manifold {
    pub fn new(n_vars: usize, max_degree: u32, phi: MixedSeries) -> Result<Self> {
        if n_vars == 0 {
            return Err(CrnfError::InvalidInput("n_vars must be at least 1".into()));
        }
        if phi.n_vars() != n_vars {
            return Err(CrnfError::DimensionMismatch { expected: n_vars, found: phi.n_vars() });
        }
        if let Some(((m, n), _)) = phi.parts().find(|((m, n), _)| m + n < 3) {
            return Err(CrnfError::InvalidInput(format!(
                "part of bidegree ({m},{n}) has total degree below 3"
            )));
        }
        if let Some(((m, n), _)) = phi.parts().find(|((m, n), _)| m + n > max_degree) {
            return Err(CrnfError::InvalidInput(format!(
                "part of bidegree ({m},{n}) exceeds truncation degree {max_degree}"
            )));
        }
        Ok(Manifold { n_vars, max_degree, phi: phi.truncate(max_degree) })
    }

    /// The model quadric w = ⟨z,z⟩.
    pub fn quadric(n_vars: usize, max_degree: u32) -> Self {
        Manifold { n_vars, max_degree, phi: MixedSeries::zero(n_vars, max_degree) }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn phi(&self) -> &MixedSeries {
        &self.phi
    }

    /// Same manifold at a lower truncation degree.
    pub fn truncated(&self, d: u32) -> Manifold {
        let d = d.min(self.max_degree);
        Manifold { n_vars: self.n_vars, max_degree: d, phi: self.phi.truncate(d) }
    }

    /// Replaces one part of φ.
    pub fn with_part(&self, p: BihomPoly) -> Result<Manifold> {
        let mut phi = self.phi.clone();
        phi.set_part(p);
        Manifold::new(self.n_vars, self.max_degree, phi)
    }
}

/// Σ P_{m,n}(z) w^n with P_{m,n} homogeneous of degree m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZwSeries {
    pub n_vars: usize,
    pub terms: BTreeMap<(u32, u32), PurePoly>,
}

impl ZwSeries {
    pub fn new(n_vars: usize) -> Self {
        ZwSeries { n_vars, terms: BTreeMap::new() }
    }

    /// P(z)·w^n added to the series.
    pub fn add_term(&mut self, p: PurePoly, n: u32) {
        let key = (p.degree(), n);
        let v = match self.terms.get(&key) {
            Some(q) => q.add(&p),
            None => p,
        };
        if v.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }
}

/// `(z,w) ↦ (z + Σ F_{m,n}(z) w^n, w + Σ G_{m,n}(z) w^n)`; the identity parts are implicit.
///
/// F components have normal weight m+2n ≥ 2, G components m+2n ≥ 3, all at most
/// `max_normal_weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalMap {
    n_vars: usize,
    max_normal_weight: u32,
    f: BTreeMap<(u32, u32), Vec<PurePoly>>,
    g: BTreeMap<(u32, u32), PurePoly>,
}

impl FormalMap {
    pub fn identity(n_vars: usize, max_normal_weight: u32) -> Self {
        FormalMap { n_vars, max_normal_weight, f: BTreeMap::new(), g: BTreeMap::new() }
    }

    /// Builds a map from its families, validating the shape.
    pub fn new(
        n_vars: usize,
        max_normal_weight: u32,
        f: BTreeMap<(u32, u32), Vec<PurePoly>>,
        g: BTreeMap<(u32, u32), PurePoly>,
    ) -> Result<Self> {
        let mut map = FormalMap::identity(n_vars, max_normal_weight);
        for ((m, n), comps) in f {
            if m + 2 * n < 2 {
                return Err(CrnfError::InvalidInput(format!(
                    "F_{{{m},{n}}} would change the linear part of the map"
                )));
            }
            if comps.len() != n_vars {
                return Err(CrnfError::DimensionMismatch { expected: n_vars, found: comps.len() });
            }
            if let Some(c) = comps.iter().find(|c| c.degree() != m || c.n_vars() != n_vars) {
                return Err(CrnfError::InvalidInput(format!(
                    "F_{{{m},{n}}} component of degree {} in {} variables",
                    c.degree(),
                    c.n_vars()
                )));
            }
            map.set_f(m, n, comps);
        }
        for ((m, n), p) in g {
            if m + 2 * n < 3 {
                return Err(CrnfError::InvalidInput(format!(
                    "G_{{{m},{n}}} would change the quadric or the linear part"
                )));
            }
            if p.degree() != m || p.n_vars() != n_vars {
                return Err(CrnfError::InvalidInput(format!("G_{{{m},{n}}} has degree {}", p.degree())));
            }
            map.set_g(m, n, p);
        }
        Ok(map)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_normal_weight(&self) -> u32 {
        self.max_normal_weight
    }

    pub fn f(&self) -> &BTreeMap<(u32, u32), Vec<PurePoly>> {
        &self.f
    }

    pub fn g(&self) -> &BTreeMap<(u32, u32), PurePoly> {
        &self.g
    }

    pub fn f_part(&self, m: u32, n: u32) -> Vec<PurePoly> {
        self.f
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| vec![PurePoly::zero(self.n_vars, m); self.n_vars])
    }

    pub fn g_part(&self, m: u32, n: u32) -> PurePoly {
        self.g.get(&(m, n)).cloned().unwrap_or_else(|| PurePoly::zero(self.n_vars, m))
    }

    pub fn is_identity(&self) -> bool {
        self.f.is_empty() && self.g.is_empty()
    }

    pub(crate) fn set_f(&mut self, m: u32, n: u32, comps: Vec<PurePoly>) {
        if comps.iter().all(|c| c.is_zero()) || m + 2 * n > self.max_normal_weight {
            self.f.remove(&(m, n));
        } else {
            self.f.insert((m, n), comps);
        }
    }

    pub(crate) fn set_g(&mut self, m: u32, n: u32, p: PurePoly) {
        if p.is_zero() || m + 2 * n > self.max_normal_weight {
            self.g.remove(&(m, n));
        } else {
            self.g.insert((m, n), p);
        }
    }

    /// Drops all components of normal weight above `w`.
    pub fn truncated(&self, w: u32) -> FormalMap {
        let mut out = FormalMap::identity(self.n_vars, w.min(self.max_normal_weight));
        for ((m, n), c) in &self.f {
            out.set_f(*m, *n, c.clone());
        }
        for ((m, n), p) in &self.g {
            out.set_g(*m, *n, p.clone());
        }
        out
    }

    /// Keeps grades ≤ `t`: F of weight ≤ t−1 and G of weight ≤ t.
    pub fn truncated_to_grade(&self, t: u32) -> FormalMap {
        let mut out = self.truncated(t);
        out.f.retain(|(m, n), _| m + 2 * n < t);
        out
    }

    /// Largest grade carrying a nonzero component (F at weight T−1 and G at weight T count as grade T).
    pub fn top_grade(&self) -> u32 {
        let f = self.f.keys().map(|(m, n)| m + 2 * n + 1).max().unwrap_or(0);
        let g = self.g.keys().map(|(m, n)| m + 2 * n).max().unwrap_or(0);
        f.max(g)
    }

    /// F_k − z_k as a (z,w) series.
    pub fn f_component(&self, k: usize) -> ZwSeries {
        let mut s = ZwSeries::new(self.n_vars);
        for ((_, n), comps) in &self.f {
            s.add_term(comps[k].clone(), *n);
        }
        s
    }

    /// G − w as a (z,w) series.
    pub fn g_series(&self) -> ZwSeries {
        let mut s = ZwSeries::new(self.n_vars);
        for ((_, n), p) in &self.g {
            s.add_term(p.clone(), *n);
        }
        s
    }
}

impl fmt::Display for FormalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "identity");
        }
        for ((m, n), comps) in &self.f {
            let shown: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
            writeln!(f, "F[{m},{n}] = ({})", shown.join(", "))?;
        }
        for ((m, n), p) in &self.g {
            writeln!(f, "G[{m},{n}] = {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoserCertificate {
    pub checked_degrees: std::ops::RangeInclusive<u32>,
    /// Bidegree and residual: tr^{m−1}φ or tr^nφ for mixed parts, φ_{0,T} − conj φ_{T,0} at (0,T).
    pub violations: Vec<((u32, u32), BihomPoly)>,
}

impl MoserCertificate {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantData {
    /// None when every pure part vanishes up to the truncation degree.
    pub s: Option<u32>,
    pub delta: PurePoly,
    pub delta_partials: Vec<PurePoly>,
    pub nondegenerate: bool,
    pub witness: Option<Vec<PurePoly>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoserResult {
    pub map: FormalMap,
    pub manifold: Manifold,
    pub certificate: MoserCertificate,
}

fn u16s(e: &[u32]) -> Vec<u16> {
    e.iter().map(|&x| x as u16).collect()
}

fn mixed_to_dense(s: &MixedSeries, l: &Layout) -> Dense {
    let mut idx = Vec::new();
    for (_, p) in s.parts() {
        for (m, c) in p.terms() {
            if let Some(i) = l.index_of(&u16s(m.exps())) {
                idx.push((i, c));
            }
        }
    }
    Dense::from_terms(l, idx)
}

fn pure_to_mixed_dense(p: &PurePoly, l: &Layout) -> Dense {
    let nv = p.n_vars();
    let terms = p.terms().filter_map(|(m, c)| {
        let mut e = u16s(m.dz());
        e.extend(std::iter::repeat(0).take(nv));
        l.index_of(&e).map(|i| (i, c))
    });
    Dense::from_terms(l, terms.collect::<Vec<_>>())
}

fn dense_to_mixed(d: &Dense, l: &Layout, n_vars: usize, max_degree: u32) -> MixedSeries {
    let mut parts: BTreeMap<(u32, u32), Vec<(Monomial, GaussCoeff)>> = BTreeMap::new();
    for i in d.nonzeros() {
        let e: Vec<u32> = l.exps_of(i).iter().map(|&x| x as u32).collect();
        let m = Monomial::new(&e[..n_vars], &e[n_vars..]);
        parts.entry(m.bidegree()).or_default().push((m, d.coeff(i)));
    }
    let mut out = MixedSeries::zero(n_vars, max_degree);
    for (bd, terms) in parts {
        out.set_part(BihomPoly::from_terms(n_vars, bd, terms).expect("bidegree by construction"));
    }
    out
}

fn zw_to_dense(s: &ZwSeries, l: &Layout) -> Dense {
    let mut idx = Vec::new();
    for ((_, n), p) in &s.terms {
        for (m, c) in p.terms() {
            let mut e = u16s(m.dz());
            e.push(*n as u16);
            if let Some(i) = l.index_of(&e) {
                idx.push((i, c));
            }
        }
    }
    Dense::from_terms(l, idx)
}

fn dense_to_zw(d: &Dense, l: &Layout, n_vars: usize) -> ZwSeries {
    let mut groups: BTreeMap<(u32, u32), Vec<(Vec<u32>, GaussCoeff)>> = BTreeMap::new();
    for i in d.nonzeros() {
        let e = l.exps_of(i);
        let dz: Vec<u32> = e[..n_vars].iter().map(|&x| x as u32).collect();
        let n = e[n_vars] as u32;
        groups.entry((dz.iter().sum(), n)).or_default().push((dz, d.coeff(i)));
    }
    let mut out = ZwSeries::new(n_vars);
    for ((m, n), terms) in groups {
        out.add_term(PurePoly::from_exponents(n_vars, m, terms).expect("degree"), n);
    }
    out
}

/// W = ⟨z,z⟩ + φ and its powers up to the truncation.
fn defining_powers(m: &Manifold, l: &Layout, d: u32) -> Vec<Dense> {
    let mut w = mixed_to_dense(&m.phi.truncate(d), l);
    w.add(&mixed_to_dense(&MixedSeries::from_part(hermitian_quadric(m.n_vars), d), l));
    let mut pows = vec![Dense::one(l)];
    for _ in 0..d / 2 {
        let next = pows.last().unwrap().mul(&w, l);
        pows.push(next);
    }
    pows
}

fn restrict_dense(s: &ZwSeries, pows: &[Dense], l: &Layout) -> Dense {
    let mut out = Dense::zero(l);
    let mut by_n: BTreeMap<u32, Dense> = BTreeMap::new();
    for ((_, n), p) in &s.terms {
        if (*n as usize) < pows.len() {
            by_n.entry(*n).or_insert_with(|| Dense::zero(l)).add(&pure_to_mixed_dense(p, l));
        }
    }
    for (n, a) in by_n {
        out.add(&a.mul(&pows[n as usize], l));
    }
    out
}

/// Substitutes w := ⟨z,z⟩ + φ into a (z,w) series, truncating at the manifold's degree.
pub fn restrict_to_manifold(s: &ZwSeries, m: &Manifold) -> MixedSeries {
    let d = m.max_degree;
    let l = Layout::mixed(m.n_vars, d);
    let pows = defining_powers(m, &l, d);
    dense_to_mixed(&restrict_dense(s, &pows, &l), &l, m.n_vars, d)
}

/// Image of M under T, computed up to degree `d ≤ D`.
pub(crate) fn push_forward_to(m: &Manifold, t: &FormalMap, d: u32) -> Manifold {
    let n = m.n_vars;
    assert_eq!(t.n_vars, n, "n_vars mismatch");
    let l = Layout::mixed(n, d);
    let pows = defining_powers(m, &l, d);
    let mut f: Vec<Dense> = (0..n)
        .map(|k| {
            let mut fk = restrict_dense(&t.f_component(k), &pows, &l);
            fk.add(&Dense::monomial(&l, l.var(k)));
            fk
        })
        .collect();
    let mut h = restrict_dense(&t.g_series(), &pows, &l);
    if pows.len() > 1 {
        h.add(&pows[1]);
    }
    let fbar: Vec<Dense> = f.iter().map(|x| x.conjugate(&l)).collect();
    for k in 0..n {
        h.sub(&f[k].mul(&fbar[k], &l));
    }
    let mut deltas = Vec::with_capacity(2 * n);
    for (k, fk) in f.iter_mut().enumerate() {
        fk.sub(&Dense::monomial(&l, l.var(k)));
        deltas.push(fk.clone());
    }
    for (k, mut fb) in fbar.into_iter().enumerate() {
        fb.sub(&Dense::monomial(&l, l.var(n + k)));
        deltas.push(fb);
    }
    debug_assert!(h.nonzeros().iter().all(|&i| l.wdeg[i] >= 3), "image is not of the quadric form");
    let mut taylor = Taylor::new(&l, deltas);
    let mut phi = Dense::zero(&l);
    for deg in 3..=d {
        let r = h.restricted(l.deg_range(deg));
        if r.is_zero() {
            continue;
        }
        phi.add(&r);
        if deg < d {
            let s = taylor.shift(&r);
            h.sub(&s);
        }
    }
    Manifold { n_vars: n, max_degree: d, phi: dense_to_mixed(&phi, &l, n, d) }
}

/// The unique M′ with G = ⟨F,F⟩ + φ′(F, F̄) on M, up to M's truncation degree.
pub fn push_forward(m: &Manifold, t: &FormalMap) -> Manifold {
    push_forward_to(m, t, m.max_degree)
}

/// The map "apply `t1`, then `t2`", truncated at the smaller normal weight.
pub fn compose_maps(t1: &FormalMap, t2: &FormalMap) -> FormalMap {
    assert_eq!(t1.n_vars, t2.n_vars, "n_vars mismatch");
    let n = t1.n_vars;
    let wmax = t1.max_normal_weight.min(t2.max_normal_weight);
    if t1.is_identity() {
        return t2.truncated(wmax);
    }
    if t2.is_identity() {
        return t1.truncated(wmax);
    }
    let l = Layout::zw(n, wmax);
    let f1: Vec<Dense> = (0..n).map(|k| zw_to_dense(&t1.f_component(k), &l)).collect();
    let g1 = zw_to_dense(&t1.g_series(), &l);
    let mut deltas = f1.clone();
    deltas.push(g1.clone());
    let mut taylor = Taylor::new(&l, deltas);
    let mut out = FormalMap::identity(n, wmax);
    let mut f_out: Vec<ZwSeries> = Vec::with_capacity(n);
    for (k, f1k) in f1.iter().enumerate() {
        let mut fk = taylor.substitute(&zw_to_dense(&t2.f_component(k), &l));
        fk.add(f1k);
        f_out.push(dense_to_zw(&fk, &l, n));
    }
    let mut g = taylor.substitute(&zw_to_dense(&t2.g_series(), &l));
    g.add(&g1);
    let mut keys: Vec<(u32, u32)> = f_out.iter().flat_map(|s| s.terms.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    for (m, w) in keys {
        let comps = f_out
            .iter()
            .map(|s| s.terms.get(&(m, w)).cloned().unwrap_or_else(|| PurePoly::zero(n, m)))
            .collect();
        out.set_f(m, w, comps);
    }
    for ((m, w), p) in dense_to_zw(&g, &l, n).terms {
        out.set_g(m, w, p);
    }
    out
}

/// ⟨F, z⟩ = Σ F^k(z) z̄_k for holomorphic components of degree m.
pub(crate) fn pair_f_z(comps: &[PurePoly]) -> BihomPoly {
    let n = comps.len();
    let m = comps.first().map_or(0, |c| c.degree());
    let mut out = BihomPoly::zero(n, (m, 1));
    for (k, c) in comps.iter().enumerate() {
        let zb = BihomPoly::monomial(Monomial::zb(n, k), GaussCoeff::from_int(1));
        out = out.add(&c.as_bihom().mul(&zb));
    }
    out
}

/// Solves the grade-`t` unknowns from the degree-`t` part of the current image.
fn solve_grade(map: &mut FormalMap, image: &MixedSeries, t: u32) {
    let n = map.n_vars;
    let q = hermitian_quadric(n);
    for a in 1..t {
        let b = t - a;
        if a + 1 > b {
            continue;
        }
        let split = trace_decompose(&image.part(a, b), a - 1);
        let comps: Vec<PurePoly> = (0..n)
            .map(|k| {
                PurePoly::try_from_bihom(split.quotient.derive(k, false).conjugate()).expect("holomorphic")
            })
            .collect();
        map.set_f(b - a + 1, a - 1, comps);
    }
    for b in 1..t {
        let a = t - b;
        if a < b {
            continue;
        }
        let mut k = image.part(a, b);
        if a > b {
            let f = map.f_part(a - b + 1, b - 1);
            k = k.sub(&pair_f_z(&f).mul(&q.pow(b - 1)));
        }
        let split = trace_decompose(&k, b);
        let g = PurePoly::try_from_bihom(split.quotient.neg()).expect("holomorphic quotient");
        map.set_g(a - b, b, g);
    }
    let pure = image.part(t, 0);
    let anti = image.part(0, t).conjugate();
    map.set_g(t, 0, PurePoly::try_from_bihom(anti.sub(&pure)).expect("holomorphic"));
}

/// Trace-normalized partial normal form, grade by grade.
pub fn extended_moser(m: &Manifold) -> MoserResult {
    let d = m.max_degree;
    let mut map = FormalMap::identity(m.n_vars, d);
    for t in 3..=d {
        let image = push_forward_to(m, &map, t);
        solve_grade(&mut map, &image.phi, t);
    }
    let manifold = push_forward(m, &map);
    let certificate = moser_certificate(&manifold);
    MoserResult { map, manifold, certificate }
}

/// Checks the trace conditions on mixed parts and reality of the pure parts.
pub fn moser_certificate(m: &Manifold) -> MoserCertificate {
    let d = m.max_degree;
    let mut violations = Vec::new();
    for total in 3..=d {
        for a in 1..total {
            let b = total - a;
            let p = m.phi.part(a, b);
            if p.is_zero() {
                continue;
            }
            let iters = if a + 1 <= b { a - 1 } else { b };
            if let Some(r) = p.trace(iters) {
                if !r.is_zero() {
                    violations.push(((a, b), r));
                }
            }
        }
        let r = m.phi.part(0, total).sub(&m.phi.part(total, 0).conjugate());
        if !r.is_zero() {
            violations.push(((0, total), r));
        }
    }
    MoserCertificate { checked_degrees: 3..=d, violations }
}

/// s, Δ = φ_{s,0}, its partials and the nondegeneracy verdict.
pub fn moser_invariants(m: &Manifold) -> InvariantData {
    let n = m.n_vars;
    let s = (3..=m.max_degree).find(|&k| !m.phi.part(k, 0).is_zero());
    match s {
        None => InvariantData {
            s: None,
            delta: PurePoly::zero(n, 0),
            delta_partials: vec![PurePoly::zero(n, 0); n],
            nondegenerate: false,
            witness: None,
        },
        Some(s) => {
            let delta = m.phi.pure_part(s);
            let nd = is_nondegenerate(&delta);
            InvariantData {
                s: Some(s),
                delta_partials: (0..n).map(|k| delta.derive(k)).collect(),
                delta,
                nondegenerate: nd.nondegenerate,
                witness: nd.witness,
            }
        }
    }
}
