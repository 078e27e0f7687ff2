//! Full normalization: kernel parameters fixed by Fischer conditions on the pure terms.
//!
//! For t = 1, 2, … the even step kills the Δ^t-component of φ_{ts+1,0} with the map
//! `a w^t − z⟨z,a⟩w^{t−1}`, and the odd step kills the A_k of the gradient split of φ_{(t+1)s,0}
//! with `(w^t A z, (a+ā) w^{t+1})`, N a = tr A. The affine dependence of the target on the
//! parameter is measured by probing rather than by closed formulas.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::coeff::{GaussCoeff, Rational};
use crate::decomp::{fischer_apply, fischer_decompose_gradient, fischer_decompose_power};
use crate::error::{CrnfError, Result};
use crate::linalg::Matrix;
use crate::moser::{
    compose_maps, extended_moser, moser_certificate, moser_invariants, push_forward, push_forward_to,
    FormalMap, InvariantData, Manifold,
};
use crate::polycore::{BihomPoly, PurePoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// `F = a w^t − z⟨z,a⟩ w^{t−1}`, `G = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelParamEven {
    pub t: u32,
    pub a: Vec<GaussCoeff>,
}

/// `F = w^t A z`, `G = (a+ā) w^{t+1}` with N a = tr A.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelParamOdd {
    pub t: u32,
    pub a: Vec<Vec<GaussCoeff>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelParam {
    Even(KernelParamEven),
    Odd(KernelParamOdd),
}

impl KernelParam {
    pub fn is_zero(&self) -> bool {
        match self {
            KernelParam::Even(p) => p.a.iter().all(|c| c.is_zero()),
            KernelParam::Odd(p) => p.a.iter().flatten().all(|c| c.is_zero()),
        }
    }

    pub fn map(&self, n_vars: usize, max_weight: u32) -> FormalMap {
        match self {
            KernelParam::Even(p) => kernel_map_even(p, n_vars, max_weight),
            KernelParam::Odd(p) => kernel_map_odd(p, n_vars, max_weight),
        }
    }

    /// Parameter from real coordinates (Re, Im interleaved).
    pub fn from_real(parity: Parity, t: u32, n_vars: usize, x: &[Rational]) -> KernelParam {
        let c = |i: usize| GaussCoeff::new(x[2 * i].clone(), x[2 * i + 1].clone());
        match parity {
            Parity::Even => KernelParam::Even(KernelParamEven { t, a: (0..n_vars).map(c).collect() }),
            Parity::Odd => KernelParam::Odd(KernelParamOdd {
                t,
                a: (0..n_vars).map(|k| (0..n_vars).map(|j| c(k * n_vars + j)).collect()).collect(),
            }),
        }
    }
}

pub fn kernel_map_even(p: &KernelParamEven, n_vars: usize, max_weight: u32) -> FormalMap {
    assert!(p.t >= 1, "t ≥ 1");
    assert_eq!(p.a.len(), n_vars);
    let t = p.t;
    let mut f = BTreeMap::new();
    f.insert((0, t), p.a.iter().map(|c| PurePoly::constant(n_vars, c.clone())).collect());
    // ⟨z,a⟩ = Σ z_j ā_j
    let mut za = PurePoly::zero(n_vars, 1);
    for (j, c) in p.a.iter().enumerate() {
        za = za.add(&PurePoly::var(n_vars, j).scale(&c.conj()));
    }
    let comps: Vec<PurePoly> = (0..n_vars)
        .map(|k| PurePoly::var(n_vars, k).mul(&za).scale(&GaussCoeff::from_int(-1)))
        .collect();
    f.insert((2, t - 1), comps);
    FormalMap::new(n_vars, max_weight, f, BTreeMap::new()).expect("kernel shape")
}

pub fn kernel_map_odd(p: &KernelParamOdd, n_vars: usize, max_weight: u32) -> FormalMap {
    assert!(p.t >= 1, "t ≥ 1");
    assert_eq!(p.a.len(), n_vars);
    let t = p.t;
    let comps: Vec<PurePoly> = p
        .a
        .iter()
        .map(|row| {
            let mut acc = PurePoly::zero(n_vars, 1);
            for (j, c) in row.iter().enumerate() {
                acc = acc.add(&PurePoly::var(n_vars, j).scale(c));
            }
            acc
        })
        .collect();
    let mut trace = GaussCoeff::zero();
    for (k, row) in p.a.iter().enumerate() {
        trace += &row[k];
    }
    let a = trace.scale(&Rational::new(1.into(), (n_vars as i64).into()));
    let mut f = BTreeMap::new();
    f.insert((1, t), comps);
    let mut g = BTreeMap::new();
    g.insert((0, t + 1), PurePoly::constant(n_vars, &a + &a.conj()));
    FormalMap::new(n_vars, max_weight, f, g).expect("kernel shape")
}

/// Push-forward by the kernel map followed by Moser re-normalization.
pub fn kernel_step(m: &Manifold, p: &KernelParam) -> (FormalMap, Manifold) {
    let k = p.map(m.n_vars(), m.max_degree());
    let pushed = push_forward(m, &k);
    let res = extended_moser(&pushed);
    (compose_maps(&k, &res.map), res.manifold)
}

pub fn target_degree(s: u32, t: u32, parity: Parity) -> u32 {
    match parity {
        Parity::Even => t * s + 1,
        Parity::Odd => (t + 1) * s,
    }
}

fn push_real(out: &mut Vec<Rational>, c: &GaussCoeff) {
    out.push(c.re.clone());
    out.push(c.im.clone());
}

/// Real coordinates of the Fischer projection that the step must annihilate.
pub fn target_coordinates(m: &Manifold, inv: &InvariantData, t: u32, parity: Parity) -> Result<Vec<Rational>> {
    let s = inv.s.ok_or_else(|| CrnfError::InvalidInput("s undetermined".into()))?;
    let n = m.n_vars();
    let deg = target_degree(s, t, parity);
    let phi = m.phi().pure_part(deg);
    let mut out = Vec::new();
    match parity {
        Parity::Even => {
            let q = fischer_decompose_power(&phi, &inv.delta, t)?.quotient;
            for j in 0..n {
                let mut e = vec![0; n];
                e[j] = 1;
                push_real(&mut out, &q.coeff_of(&e));
            }
        }
        Parity::Odd => {
            let split = fischer_decompose_gradient(&phi, &inv.delta)?;
            let forms = split.linear_forms.ok_or(CrnfError::GradientNotUnique)?;
            for l in &forms {
                for j in 0..n {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    push_real(&mut out, &l.coeff_of(&e));
                }
            }
        }
    }
    Ok(out)
}

/// Exact affine map x ↦ matrix·x + offset from real parameters to target coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseMap {
    pub t: u32,
    pub parity: Parity,
    pub degree: u32,
    pub n_vars: usize,
    pub matrix: Matrix<Rational>,
    pub offset: Vec<Rational>,
}

impl ResponseMap {
    pub fn dimension(&self) -> usize {
        self.matrix.cols
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_vec(x).into_iter().zip(&self.offset).map(|(a, b)| a + b).collect()
    }
}

pub fn param_dimension(n_vars: usize, parity: Parity) -> usize {
    match parity {
        Parity::Even => 2 * n_vars,
        Parity::Odd => 2 * n_vars * n_vars,
    }
}

/// Target coordinates after one kernel step with real parameter `x`, truncated at the target degree.
pub fn probe(m: &Manifold, inv: &InvariantData, t: u32, parity: Parity, x: &[Rational]) -> Result<Vec<Rational>> {
    let s = inv.s.ok_or_else(|| CrnfError::InvalidInput("s undetermined".into()))?;
    let deg = target_degree(s, t, parity);
    let low = m.truncated(deg);
    let p = KernelParam::from_real(parity, t, m.n_vars(), x);
    let image = if p.is_zero() {
        extended_moser(&low).manifold
    } else {
        let k = p.map(m.n_vars(), deg);
        extended_moser(&push_forward_to(&low, &k, deg)).manifold
    };
    target_coordinates(&image, inv, t, parity)
}

/// Probes the zero parameter and every real basis direction.
pub fn pure_term_response(m: &Manifold, inv: &InvariantData, t: u32, parity: Parity) -> Result<ResponseMap> {
    let s = inv.s.ok_or_else(|| CrnfError::InvalidInput("s undetermined at truncation".into()))?;
    if !inv.nondegenerate {
        return Err(CrnfError::Degenerate { witness: inv.witness.clone().unwrap_or_default() });
    }
    let deg = target_degree(s, t, parity);
    if deg > m.max_degree() {
        return Err(CrnfError::InvalidInput(format!("target degree {deg} beyond truncation")));
    }
    let n = m.n_vars();
    let dim = param_dimension(n, parity);
    let runs: Vec<Result<Vec<Rational>>> = (0..=dim)
        .into_par_iter()
        .map(|i| {
            let mut x = vec![Rational::zero(); dim];
            if i > 0 {
                x[i - 1] = Rational::from_integer(1.into());
            }
            probe(m, inv, t, parity, &x)
        })
        .collect();
    let mut runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let offset = runs.remove(0);
    let cols: Vec<Vec<Rational>> = runs
        .into_iter()
        .map(|r| r.into_iter().zip(&offset).map(|(a, b)| a - b).collect())
        .collect();
    let matrix = Matrix::from_cols(cols, offset.len());
    Ok(ResponseMap { t, parity, degree: deg, n_vars: n, matrix, offset })
}

/// Unique x with matrix·x = −offset.
pub fn solve_kernel_parameter(r: &ResponseMap) -> Result<KernelParam> {
    let rhs: Vec<Rational> = r.offset.iter().map(|v| -v.clone()).collect();
    let x = r.matrix.solve(&rhs).ok_or_else(|| CrnfError::SingularSystem {
        degree: r.degree,
        kind: r.parity.name().into(),
    })?;
    Ok(KernelParam::from_real(r.parity, r.t, r.n_vars, &x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// tr^{m−1}φ_{m,n} (m ≤ n−1) or tr^n φ_{m,n} (m ≥ n).
    Trace,
    /// φ_{0,T} − conj φ_{T,0}.
    Reality,
    /// (Δ^t)* φ_{ts+1,0}.
    FischerEven,
    /// (Δ_k Δ^t)* φ_{(t+1)s,0}.
    FischerOdd,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Trace => "trace",
            Condition::Reality => "reality",
            Condition::FischerEven => "fischer_even",
            Condition::FischerOdd => "fischer_odd",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub condition: Condition,
    pub bidegree: (u32, u32),
    /// k for the odd Fischer conditions.
    pub index: Option<usize>,
    pub value: BihomPoly,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResidualReport {
    pub entries: Vec<Residual>,
}

impl ResidualReport {
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|r| r.value.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Residual> {
        self.entries.iter().filter(|r| !r.value.is_zero())
    }
}

/// Recomputes every normalization condition up to the truncation degree.
pub fn verify_normal_form(m: &Manifold, inv: &InvariantData) -> ResidualReport {
    let d = m.max_degree();
    let phi = m.phi();
    let mut entries = Vec::new();
    for total in 3..=d {
        for a in 1..total {
            let b = total - a;
            let iters = if a + 1 <= b { a - 1 } else { b };
            let p = phi.part(a, b);
            let value = p.trace(iters).expect("iterations within bidegree");
            entries.push(Residual { condition: Condition::Trace, bidegree: (a, b), index: None, value });
        }
        let value = phi.part(0, total).sub(&phi.part(total, 0).conjugate());
        entries.push(Residual { condition: Condition::Reality, bidegree: (0, total), index: None, value });
    }
    if let Some(s) = inv.s {
        let mut t = 1;
        while t * s + 1 <= d {
            let dt = inv.delta.pow(t);
            let even = t * s + 1;
            let value = fischer_apply(&dt, &phi.pure_part(even)).into_bihom();
            entries.push(Residual { condition: Condition::FischerEven, bidegree: (even, 0), index: None, value });
            let odd = (t + 1) * s;
            if odd <= d {
                for (k, dk) in inv.delta_partials.iter().enumerate() {
                    let value = fischer_apply(&dk.mul(&dt), &phi.pure_part(odd)).into_bihom();
                    entries.push(Residual {
                        condition: Condition::FischerOdd,
                        bidegree: (odd, 0),
                        index: Some(k),
                        value,
                    });
                }
            }
            t += 1;
        }
    }
    ResidualReport { entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Every condition holds up to the truncation degree.
    Normalized,
    /// No pure term up to the truncation degree; only the partial normal form is available.
    SUndetermined,
    /// Only the partial normal form was requested.
    MoserOnly,
    /// Some residual is nonzero.
    ResidualsNonzero,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Normalized => "normalized",
            Status::SUndetermined => "s_undetermined",
            Status::MoserOnly => "moser_only",
            Status::ResidualsNonzero => "residuals_nonzero",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverLogEntry {
    pub degree: u32,
    pub parity: Parity,
    pub t: u32,
    pub dimension: usize,
    pub parameter: KernelParam,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormReport {
    pub status: Status,
    pub invariants: InvariantData,
    pub map: FormalMap,
    pub normalized: Manifold,
    pub residuals: ResidualReport,
    pub solver_log: Vec<SolverLogEntry>,
}

/// Partial normal form, invariants, then the kernel steps in increasing target degree.
pub fn full_normalize(m: &Manifold) -> Result<NormalFormReport> {
    let d = m.max_degree();
    let first = extended_moser(m);
    let mut map = first.map;
    let mut cur = first.manifold;
    let inv = moser_invariants(&cur);
    let Some(s) = inv.s else {
        let residuals = verify_normal_form(&cur, &inv);
        return Ok(NormalFormReport {
            status: Status::SUndetermined,
            invariants: inv,
            map,
            normalized: cur,
            residuals,
            solver_log: Vec::new(),
        });
    };
    if !inv.nondegenerate {
        return Err(CrnfError::Degenerate { witness: inv.witness.clone().unwrap_or_default() });
    }
    let mut log = Vec::new();
    let mut t = 1;
    while t * s + 1 <= d {
        for parity in [Parity::Even, Parity::Odd] {
            if target_degree(s, t, parity) > d {
                continue;
            }
            let resp = pure_term_response(&cur, &inv, t, parity)?;
            let param = solve_kernel_parameter(&resp)?;
            if !param.is_zero() {
                let (step, next) = kernel_step(&cur, &param);
                map = compose_maps(&map, &step);
                cur = next;
            }
            log.push(SolverLogEntry {
                degree: resp.degree,
                parity,
                t,
                dimension: resp.dimension(),
                parameter: param,
            });
        }
        t += 1;
    }
    let residuals = verify_normal_form(&cur, &inv);
    let status = if residuals.all_zero() && moser_certificate(&cur).is_clean() {
        Status::Normalized
    } else {
        Status::ResidualsNonzero
    };
    Ok(NormalFormReport { status, invariants: inv, map, normalized: cur, residuals, solver_log: log })
}

/// Only the partial normal form, packaged as a report.
pub fn moser_report(m: &Manifold) -> NormalFormReport {
    let res = extended_moser(m);
    let inv = moser_invariants(&res.manifold);
    let residuals = verify_normal_form(&res.manifold, &inv);
    NormalFormReport {
        status: Status::MoserOnly,
        invariants: inv,
        map: res.map,
        normalized: res.manifold,
        residuals,
        solver_log: Vec::new(),
    }
}
