//! Trace decomposition against ⟨z,z⟩^n and Fischer decompositions against Δ^k and {Δ_k Δ^t}.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coeff::{GaussCoeff, Rational};
use crate::error::{CrnfError, Result};
use crate::linalg::Matrix;
use crate::polycore::{hermitian_quadric, monomial_basis, BihomPoly, Monomial, PurePoly};

/// P = Q·⟨z,z⟩^n + R with tr^n R = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSplit {
    pub quotient: BihomPoly,
    pub remainder: BihomPoly,
}

/// P = Q·Δ^k + R with (Δ^k)*R = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct FischerSplit {
    pub quotient: PurePoly,
    pub remainder: PurePoly,
}

/// P = L + C with L = (Σ A_k Δ_k) Δ^t and (Δ_k Δ^t)*C = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientSplit {
    /// The A_k; `None` when Δ is degenerate and only the projection was requested.
    pub linear_forms: Option<Vec<PurePoly>>,
    pub structured_part: PurePoly,
    pub complement: PurePoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    /// A nonzero (L_1..L_N) with Σ L_k Δ_k = 0 when degenerate.
    pub witness: Option<Vec<PurePoly>>,
}

fn falling(a: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc *= a - j;
    }
    acc
}

/// V*(P) = Σ conj(b_I) ∂^I P over the terms b_I z^I of V.
pub fn fischer_apply(v: &PurePoly, p: &PurePoly) -> PurePoly {
    let n = p.n_vars();
    assert_eq!(v.n_vars(), n, "n_vars mismatch");
    if v.degree() > p.degree() {
        return PurePoly::zero(n, 0);
    }
    let d = p.degree() - v.degree();
    let zeros = vec![0u32; n];
    let mut acc: HashMap<Vec<u32>, GaussCoeff> = HashMap::new();
    for (mp, cp) in p.terms() {
        for (mv, cv) in v.terms() {
            let a = mp.dz();
            let i = mv.dz();
            if a.iter().zip(i).any(|(x, y)| y > x) {
                continue;
            }
            let mut f = BigInt::from(1);
            for (x, y) in a.iter().zip(i) {
                f *= falling(*x, *y);
            }
            let c = (cp * &cv.conj()).scale(&Rational::from_integer(f));
            let e: Vec<u32> = a.iter().zip(i).map(|(x, y)| x - y).collect();
            *acc.entry(e).or_default() += &c;
        }
    }
    let terms = acc.into_iter().map(|(e, c)| (Monomial::new(&e, &zeros), c));
    PurePoly::try_from_bihom(BihomPoly::from_terms(n, (d, 0), terms).expect("degree"))
        .expect("pure")
}

/// ⟨P,Q⟩ = Σ p_α conj(q_α) α!; zero across different degrees.
pub fn fischer_inner(p: &PurePoly, q: &PurePoly) -> GaussCoeff {
    if p.degree() != q.degree() || p.n_vars() != q.n_vars() {
        return GaussCoeff::zero();
    }
    let mut acc = GaussCoeff::zero();
    for (m, c) in p.terms() {
        let d = q.as_bihom().coeff(m);
        if !d.is_zero() {
            acc += &(c * &d.conj()).scale(&Rational::from_integer(m.holo_factorial()));
        }
    }
    acc
}

type TraceKey = (usize, u32, u32, u32);

fn trace_cache() -> &'static Mutex<HashMap<TraceKey, Arc<Matrix<Rational>>>> {
    static CACHE: OnceLock<Mutex<HashMap<TraceKey, Arc<Matrix<Rational>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Matrix of Q ↦ tr^p(Q⟨z,z⟩^p) on bidegree (a, b) in the given basis.
fn trace_operator(n_vars: usize, basis: &[Monomial], p: u32) -> Matrix<Rational> {
    let qp = hermitian_quadric(n_vars).pow(p);
    let cols = basis
        .iter()
        .map(|b| {
            let img = BihomPoly::monomial(b.clone(), GaussCoeff::from_int(1))
                .mul(&qp)
                .trace(p)
                .expect("bidegree large enough");
            basis.iter().map(|m| img.coeff(m).re).collect()
        })
        .collect();
    Matrix::from_cols(cols, basis.len())
}

fn apply_rational(m: &Matrix<Rational>, v: &[GaussCoeff]) -> Vec<GaussCoeff> {
    m.data
        .iter()
        .map(|row| {
            let mut acc = GaussCoeff::zero();
            for (a, x) in row.iter().zip(v) {
                if !a.is_zero() && !x.is_zero() {
                    acc += &x.scale(a);
                }
            }
            acc
        })
        .collect()
}

fn trace_out_of_range(p: &BihomPoly, n: u32) -> Option<TraceSplit> {
    let (m, k) = p.bidegree();
    if n > m || n > k {
        return Some(TraceSplit {
            quotient: BihomPoly::zero(p.n_vars(), (0, 0)),
            remainder: p.clone(),
        });
    }
    if n == 0 {
        return Some(TraceSplit {
            quotient: p.clone(),
            remainder: BihomPoly::zero(p.n_vars(), p.bidegree()),
        });
    }
    None
}

fn finish_trace(p: &BihomPoly, n: u32, basis: &[Monomial], q: Vec<GaussCoeff>) -> TraceSplit {
    let (m, k) = p.bidegree();
    let quotient = BihomPoly::from_vector(p.n_vars(), (m - n, k - n), basis, &q);
    let remainder = p.sub(&quotient.mul(&hermitian_quadric(p.n_vars()).pow(n)));
    TraceSplit { quotient, remainder }
}

/// Unique P = Q⟨z,z⟩^n + R with tr^n R = 0.
///
/// Out of range (n larger than either degree) gives (0, P); n = 0 gives (P, 0).
pub fn trace_decompose(p: &BihomPoly, n: u32) -> TraceSplit {
    if let Some(s) = trace_out_of_range(p, n) {
        return s;
    }
    let (m, k) = p.bidegree();
    let nv = p.n_vars();
    let key = (nv, m - n, k - n, n);
    let cached = trace_cache().lock().expect("cache lock").get(&key).cloned();
    let basis = monomial_basis(nv, m - n, k - n);
    let inv = match cached {
        Some(inv) => inv,
        None => {
            let inv = Arc::new(
                trace_operator(nv, &basis, n)
                    .inverse()
                    .expect("trace operator is invertible"),
            );
            trace_cache().lock().expect("cache lock").insert(key, inv.clone());
            inv
        }
    };
    let rhs = p.trace(n).expect("in range").to_vector(&basis);
    finish_trace(p, n, &basis, apply_rational(&inv, &rhs))
}

/// [`trace_decompose`] with the unknowns ordered by `basis` and no caching.
pub fn trace_decompose_in_basis(p: &BihomPoly, n: u32, basis: &[Monomial]) -> TraceSplit {
    if let Some(s) = trace_out_of_range(p, n) {
        return s;
    }
    let op = trace_operator(p.n_vars(), basis, n);
    let rhs = p.trace(n).expect("in range").to_vector(basis);
    let re: Vec<Rational> = rhs.iter().map(|c| c.re.clone()).collect();
    let im: Vec<Rational> = rhs.iter().map(|c| c.im.clone()).collect();
    let sol = op.solve_many(&[re, im]).expect("trace operator is invertible");
    let q = sol[0]
        .iter()
        .zip(&sol[1])
        .map(|(a, b)| GaussCoeff::new(a.clone(), b.clone()))
        .collect();
    finish_trace(p, n, basis, q)
}

/// Unique P = QΔ^k + R with (Δ^k)*R = 0.
pub fn fischer_decompose_power(p: &PurePoly, delta: &PurePoly, k: u32) -> Result<FischerSplit> {
    let basis = PurePoly::pure_basis(p.n_vars(), p.degree().saturating_sub(delta.degree() * k));
    fischer_decompose_power_in_basis(p, delta, k, &basis)
}

/// [`fischer_decompose_power`] with the unknowns ordered by `basis`.
pub fn fischer_decompose_power_in_basis(
    p: &PurePoly,
    delta: &PurePoly,
    k: u32,
    basis: &[Monomial],
) -> Result<FischerSplit> {
    if delta.is_zero() {
        return Err(CrnfError::InvalidInput("Δ must be nonzero".into()));
    }
    if k == 0 {
        return Err(CrnfError::InvalidInput("power k must be at least 1".into()));
    }
    if delta.n_vars() != p.n_vars() {
        return Err(CrnfError::DimensionMismatch { expected: p.n_vars(), found: delta.n_vars() });
    }
    let n = p.n_vars();
    let dk = delta.pow(k);
    if p.degree() < dk.degree() {
        return Ok(FischerSplit { quotient: PurePoly::zero(n, 0), remainder: p.clone() });
    }
    let qdeg = p.degree() - dk.degree();
    let cols = basis
        .iter()
        .map(|b| {
            let e = PurePoly::try_from_bihom(BihomPoly::monomial(b.clone(), GaussCoeff::from_int(1)))
                .expect("pure basis");
            fischer_apply(&dk, &e.mul(&dk)).to_vector(basis)
        })
        .collect();
    let mat = Matrix::from_cols(cols, basis.len());
    let rhs = fischer_apply(&dk, p).to_vector(basis);
    let q = mat.solve(&rhs).expect("Fischer Gram matrix is positive definite");
    let quotient = PurePoly::from_vector(n, qdeg, basis, &q);
    let remainder = p.sub(&quotient.mul(&dk));
    Ok(FischerSplit { quotient, remainder })
}

/// The generators z_j Δ_k Δ^t in (k, j) order.
fn gradient_generators(delta: &PurePoly, t: u32) -> Vec<PurePoly> {
    let n = delta.n_vars();
    let dt = delta.pow(t);
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        let dk = delta.derive(k).mul(&dt);
        for j in 0..n {
            out.push(PurePoly::var(n, j).mul(&dk));
        }
    }
    out
}

/// Fischer projection onto span{z_j Δ_k Δ^t}.
///
/// With `allow_degenerate` the projection is returned for degenerate Δ as well, without the A_k.
pub fn fischer_decompose_gradient_with(
    p: &PurePoly,
    delta: &PurePoly,
    allow_degenerate: bool,
) -> Result<GradientSplit> {
    let n = p.n_vars();
    let s = delta.degree();
    if delta.is_zero() || s == 0 {
        return Err(CrnfError::InvalidInput("Δ must be a nonzero form of positive degree".into()));
    }
    if p.degree() % s != 0 || p.degree() / s < 2 {
        return Err(CrnfError::InvalidInput(format!(
            "gradient split needs degree (t+1)s with t ≥ 1; got degree {} for s = {s}",
            p.degree()
        )));
    }
    let t = p.degree() / s - 1;
    let gens = gradient_generators(delta, t);
    let nondeg = is_nondegenerate(delta).nondegenerate;
    if !nondeg && !allow_degenerate {
        return Err(CrnfError::GradientNotUnique);
    }
    let chosen: Vec<usize> = if nondeg {
        (0..gens.len()).collect()
    } else {
        let basis = PurePoly::pure_basis(n, p.degree());
        let cols = gens.iter().map(|g| g.to_vector(&basis)).collect();
        Matrix::from_cols(cols, basis.len()).rref().pivots
    };
    let gram = Matrix::from_rows(
        chosen
            .iter()
            .map(|&r| chosen.iter().map(|&c| fischer_inner(&gens[c], &gens[r])).collect())
            .collect(),
    );
    let rhs: Vec<GaussCoeff> = chosen.iter().map(|&r| fischer_inner(p, &gens[r])).collect();
    let alpha = gram.solve(&rhs).expect("Gram matrix of independent generators");
    let mut structured = PurePoly::zero(n, p.degree());
    for (a, &g) in alpha.iter().zip(&chosen) {
        structured = structured.add(&gens[g].scale(a));
    }
    let complement = p.sub(&structured);
    let linear_forms = nondeg.then(|| {
        (0..n)
            .map(|k| {
                let mut l = PurePoly::zero(n, 1);
                for j in 0..n {
                    l = l.add(&PurePoly::var(n, j).scale(&alpha[k * n + j]));
                }
                l
            })
            .collect()
    });
    Ok(GradientSplit { linear_forms, structured_part: structured, complement })
}

/// Gradient split of P against Δ; requires nondegenerate Δ.
pub fn fischer_decompose_gradient(p: &PurePoly, delta: &PurePoly) -> Result<GradientSplit> {
    fischer_decompose_gradient_with(p, delta, false)
}

/// Whether (L_1..L_N) ↦ Σ L_k Δ_k is injective on N-tuples of linear forms.
pub fn is_nondegenerate(delta: &PurePoly) -> Nondegeneracy {
    let n = delta.n_vars();
    let basis = PurePoly::pure_basis(n, delta.degree());
    let mut cols = Vec::with_capacity(n * n);
    for k in 0..n {
        let dk = delta.derive(k);
        for j in 0..n {
            cols.push(PurePoly::var(n, j).mul(&dk).to_vector(&basis));
        }
    }
    let mat = Matrix::from_cols(cols, basis.len());
    let kernel = mat.nullspace();
    match kernel.first() {
        None => Nondegeneracy { nondegenerate: true, witness: None },
        Some(v) => {
            let witness = (0..n)
                .map(|k| {
                    let mut l = PurePoly::zero(n, 1);
                    for j in 0..n {
                        l = l.add(&PurePoly::var(n, j).scale(&v[k * n + j]));
                    }
                    l
                })
                .collect();
            Nondegeneracy { nondegenerate: false, witness: Some(witness) }
        }
    }
}
