//! JSON documents: manifolds, maps and reports.
//!
//! Rationals travel as strings ("p" or "p/q"), coefficients as `{"re": .., "im": ..}`,
//! monomials as two exponent arrays.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coeff::{format_rational, parse_rational, GaussCoeff};
use crate::error::{CrnfError, Result};
use crate::moser::{FormalMap, InvariantData, Manifold, MoserCertificate};
use crate::normalform::{KernelParam, NormalFormReport, ResidualReport, SolverLogEntry};
use crate::polycore::{BihomPoly, MixedSeries, Monomial, PurePoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffDoc {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    pub dz: Vec<u32>,
    pub dzb: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub m: u32,
    pub n: u32,
    pub monomials: Vec<MonomialDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDocument {
    pub n_vars: usize,
    pub degree: u32,
    pub terms: Vec<TermDoc>,
}

/// `F_{m,n}`: one monomial list per component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFTerm {
    pub m: u32,
    pub n: u32,
    pub components: Vec<Vec<MonomialDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub n_vars: usize,
    pub max_normal_weight: u32,
    #[serde(rename = "F")]
    pub f: Vec<MapFTerm>,
    #[serde(rename = "G")]
    pub g: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsDoc {
    pub s: Option<u32>,
    pub delta: Vec<MonomialDoc>,
    pub delta_partials: Vec<Vec<MonomialDoc>>,
    pub nondegenerate: bool,
    pub witness: Option<Vec<Vec<MonomialDoc>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualDoc {
    pub condition: String,
    pub bidegree: [u32; 2],
    pub index: Option<usize>,
    pub value: Vec<MonomialDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverLogDoc {
    pub degree: u32,
    pub parity: String,
    pub t: u32,
    pub dimension: usize,
    /// `a` for even steps (N entries), `A` row by row for odd steps.
    pub parameter: Vec<Vec<CoeffDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub status: String,
    pub invariants: Option<InvariantsDoc>,
    pub map: Option<MapDocument>,
    pub manifold: Option<ManifoldDocument>,
    pub residuals: Vec<ResidualDoc>,
    pub solver_log: Vec<SolverLogDoc>,
}

fn perr(location: impl Into<String>, message: impl Into<String>) -> CrnfError {
    CrnfError::Parse { location: location.into(), message: message.into() }
}

/// Deserializes with field paths in the error location.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let location = if matches!(path.as_str(), "" | "." | "?") {
            format!("line {} column {}", inner.line(), inner.column())
        } else {
            path
        };
        perr(location, inner.to_string())
    })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn coeff_doc(c: &GaussCoeff) -> CoeffDoc {
    CoeffDoc { re: format_rational(&c.re), im: format_rational(&c.im) }
}

fn parse_coeff(re: &str, im: &str, loc: &str) -> Result<GaussCoeff> {
    let re = parse_rational(re).map_err(|e| perr(format!("{loc}.re"), e))?;
    let im = parse_rational(im).map_err(|e| perr(format!("{loc}.im"), e))?;
    Ok(GaussCoeff::new(re, im))
}

pub fn poly_doc(p: &BihomPoly) -> Vec<MonomialDoc> {
    p.terms()
        .map(|(m, c)| MonomialDoc {
            dz: m.dz().to_vec(),
            dzb: m.dzb().to_vec(),
            re: format_rational(&c.re),
            im: format_rational(&c.im),
        })
        .collect()
}

/// Reads a monomial list of fixed bidegree; zero coefficients are dropped, repeats rejected.
pub fn parse_poly(monos: &[MonomialDoc], n_vars: usize, bidegree: (u32, u32), loc: &str) -> Result<BihomPoly> {
    let mut seen = BTreeSet::new();
    let mut terms = Vec::with_capacity(monos.len());
    for (i, md) in monos.iter().enumerate() {
        let here = format!("{loc}[{i}]");
        if md.dz.len() != n_vars {
            return Err(perr(format!("{here}.dz"), format!("expected {n_vars} exponents, found {}", md.dz.len())));
        }
        if md.dzb.len() != n_vars {
            return Err(perr(format!("{here}.dzb"), format!("expected {n_vars} exponents, found {}", md.dzb.len())));
        }
        let mono = Monomial::new(&md.dz, &md.dzb);
        if mono.bidegree() != bidegree {
            return Err(perr(
                here,
                format!("monomial {mono} has bidegree {:?}, part is {:?}", mono.bidegree(), bidegree),
            ));
        }
        if !seen.insert(mono.clone()) {
            return Err(perr(here, format!("duplicate monomial {mono}")));
        }
        let c = parse_coeff(&md.re, &md.im, &here)?;
        terms.push((mono, c));
    }
    BihomPoly::from_terms(n_vars, bidegree, terms).map_err(|e| perr(loc, e.to_string()))
}

fn parse_pure(monos: &[MonomialDoc], n_vars: usize, degree: u32, loc: &str) -> Result<PurePoly> {
    let p = parse_poly(monos, n_vars, (degree, 0), loc)?;
    Ok(PurePoly::try_from_bihom(p).expect("bidegree checked"))
}

/// Parts in graded order, higher holomorphic degree first within a degree.
fn canonical_parts(s: &MixedSeries) -> Vec<(&(u32, u32), &BihomPoly)> {
    let mut v: Vec<_> = s.parts().collect();
    v.sort_by_key(|((m, n), _)| (m + n, std::cmp::Reverse(*m)));
    v
}

pub fn parse_manifold(doc: &ManifoldDocument) -> Result<Manifold> {
    if doc.n_vars == 0 {
        return Err(perr("n_vars", "must be at least 1"));
    }
    if doc.degree < 3 {
        return Err(perr("degree", "truncation degree must be at least 3"));
    }
    let mut phi = MixedSeries::zero(doc.n_vars, doc.degree);
    let mut seen = BTreeSet::new();
    for (i, t) in doc.terms.iter().enumerate() {
        let loc = format!("terms[{i}]");
        if t.m + t.n < 3 {
            return Err(perr(loc, format!("part ({},{}) has total degree below 3", t.m, t.n)));
        }
        if t.m + t.n > doc.degree {
            return Err(perr(loc, format!("part ({},{}) exceeds degree {}", t.m, t.n, doc.degree)));
        }
        if !seen.insert((t.m, t.n)) {
            return Err(perr(loc, format!("duplicate part ({},{})", t.m, t.n)));
        }
        let p = parse_poly(&t.monomials, doc.n_vars, (t.m, t.n), &format!("{loc}.monomials"))?;
        phi.add_part(&p);
    }
    Manifold::new(doc.n_vars, doc.degree, phi)
}

pub fn parse_manifold_json(text: &str) -> Result<Manifold> {
    parse_manifold(&from_json(text)?)
}

pub fn manifold_document(m: &Manifold) -> ManifoldDocument {
    let terms = canonical_parts(m.phi())
        .into_iter()
        .map(|(&(a, b), p)| TermDoc { m: a, n: b, monomials: poly_doc(p) })
        .collect();
    ManifoldDocument { n_vars: m.n_vars(), degree: m.max_degree(), terms }
}

pub fn parse_map(doc: &MapDocument) -> Result<FormalMap> {
    let n = doc.n_vars;
    let mut f = BTreeMap::new();
    for (i, t) in doc.f.iter().enumerate() {
        let loc = format!("F[{i}]");
        if t.components.len() != n {
            return Err(perr(format!("{loc}.components"), format!("expected {n} components")));
        }
        let comps = t
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| parse_pure(c, n, t.m, &format!("{loc}.components[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        if f.insert((t.m, t.n), comps).is_some() {
            return Err(perr(loc, format!("duplicate entry ({},{})", t.m, t.n)));
        }
    }
    let mut g = BTreeMap::new();
    for (i, t) in doc.g.iter().enumerate() {
        let loc = format!("G[{i}]");
        let p = parse_pure(&t.monomials, n, t.m, &format!("{loc}.monomials"))?;
        if g.insert((t.m, t.n), p).is_some() {
            return Err(perr(loc, format!("duplicate entry ({},{})", t.m, t.n)));
        }
    }
    FormalMap::new(n, doc.max_normal_weight, f, g).map_err(|e| perr("map", e.to_string()))
}

pub fn parse_map_json(text: &str) -> Result<FormalMap> {
    parse_map(&from_json(text)?)
}

fn weight_order(k: &(u32, u32)) -> (u32, std::cmp::Reverse<u32>) {
    (k.0 + 2 * k.1, std::cmp::Reverse(k.0))
}

pub fn map_document(map: &FormalMap) -> MapDocument {
    let mut f: Vec<_> = map.f().iter().collect();
    f.sort_by_key(|(k, _)| weight_order(k));
    let mut g: Vec<_> = map.g().iter().collect();
    g.sort_by_key(|(k, _)| weight_order(k));
    MapDocument {
        n_vars: map.n_vars(),
        max_normal_weight: map.max_normal_weight(),
        f: f.into_iter()
            .map(|(&(m, n), comps)| MapFTerm {
                m,
                n,
                components: comps.iter().map(|c| poly_doc(c.as_bihom())).collect(),
            })
            .collect(),
        g: g.into_iter()
            .map(|(&(m, n), p)| TermDoc { m, n, monomials: poly_doc(p.as_bihom()) })
            .collect(),
    }
}

pub fn invariants_doc(inv: &InvariantData) -> InvariantsDoc {
    InvariantsDoc {
        s: inv.s,
        delta: poly_doc(inv.delta.as_bihom()),
        delta_partials: inv.delta_partials.iter().map(|p| poly_doc(p.as_bihom())).collect(),
        nondegenerate: inv.nondegenerate,
        witness: inv.witness.as_ref().map(|w| w.iter().map(|p| poly_doc(p.as_bihom())).collect()),
    }
}

/// Nonzero residuals only.
pub fn residual_docs(r: &ResidualReport) -> Vec<ResidualDoc> {
    r.nonzero()
        .map(|e| ResidualDoc {
            condition: e.condition.name().into(),
            bidegree: [e.bidegree.0, e.bidegree.1],
            index: e.index,
            value: poly_doc(&e.value),
        })
        .collect()
}

pub fn certificate_docs(c: &MoserCertificate) -> Vec<ResidualDoc> {
    c.violations
        .iter()
        .map(|((m, n), v)| ResidualDoc {
            condition: "moser".into(),
            bidegree: [*m, *n],
            index: None,
            value: poly_doc(v),
        })
        .collect()
}

pub fn solver_log_doc(e: &SolverLogEntry) -> SolverLogDoc {
    let parameter = match &e.parameter {
        KernelParam::Even(p) => vec![p.a.iter().map(coeff_doc).collect()],
        KernelParam::Odd(p) => p.a.iter().map(|row| row.iter().map(coeff_doc).collect()).collect(),
    };
    SolverLogDoc { degree: e.degree, parity: e.parity.name().into(), t: e.t, dimension: e.dimension, parameter }
}

pub fn normal_form_report(r: &NormalFormReport) -> ReportDocument {
    ReportDocument {
        status: r.status.name().into(),
        invariants: Some(invariants_doc(&r.invariants)),
        map: Some(map_document(&r.map)),
        manifold: Some(manifold_document(&r.normalized)),
        residuals: residual_docs(&r.residuals),
        solver_log: r.solver_log.iter().map(solver_log_doc).collect(),
    }
}

/// A report carrying only a status and, for degenerate input, the witness.
pub fn error_report(err: &CrnfError) -> ReportDocument {
    let invariants = match err {
        CrnfError::Degenerate { witness } => Some(InvariantsDoc {
            s: None,
            delta: Vec::new(),
            delta_partials: Vec::new(),
            nondegenerate: false,
            witness: Some(witness.iter().map(|p| poly_doc(p.as_bihom())).collect()),
        }),
        _ => None,
    };
    let status = match err {
        CrnfError::Degenerate { .. } | CrnfError::GradientNotUnique => "degenerate",
        CrnfError::SingularSystem { .. } => "singular_system",
        _ => "error",
    };
    ReportDocument {
        status: status.into(),
        invariants,
        map: None,
        manifold: None,
        residuals: Vec::new(),
        solver_log: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_and_cubic() {
        let m = parse_manifold_json(r#"{"n_vars":2,"degree":5,"terms":[]}"#).unwrap();
        assert!(m.phi().is_zero());
        let m = parse_manifold_json(
            r#"{"n_vars":1,"degree":4,"terms":[{"m":3,"n":0,"monomials":[{"dz":[3],"dzb":[0],"re":"1","im":"0"}]}]}"#,
        )
        .unwrap();
        assert_eq!(m.phi().part(3, 0).coeff(&Monomial::new(&[3], &[0])), GaussCoeff::from_int(1));
    }

    #[test]
    fn bad_rational_names_the_field() {
        let e = parse_manifold_json(
            r#"{"n_vars":1,"degree":4,"terms":[{"m":3,"n":0,"monomials":[{"dz":[3],"dzb":[0],"re":"1","im":"1/0"}]}]}"#,
        )
        .unwrap_err();
        match e {
            CrnfError::Parse { location, .. } => assert_eq!(location, "terms[0].monomials[0].im"),
            e => panic!("{e}"),
        }
    }
}
