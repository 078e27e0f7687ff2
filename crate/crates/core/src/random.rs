//! Seeded random manifolds for test corpora.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{rat, GaussCoeff};
use crate::error::{CrnfError, Result};
use crate::io::{manifold_document, ManifoldDocument};
use crate::moser::{extended_moser, moser_invariants, Manifold};
use crate::polycore::{monomial_basis, BihomPoly, MixedSeries};

pub const RETRY_BUDGET: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Pure parts of degree s..=D only.
    PureOnly,
    /// φ_{s,0}, φ_{0,s} and every mixed part.
    Mixed,
    /// Every part, with pure parts below degree s left out.
    Generic,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::PureOnly => "pure-only",
            Profile::Mixed => "mixed",
            Profile::Generic => "generic",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pure-only" => Ok(Profile::PureOnly),
            "mixed" => Ok(Profile::Mixed),
            "generic" => Ok(Profile::Generic),
            _ => Err(format!("unknown profile {s:?} (pure-only, mixed, generic)")),
        }
    }
}

fn coeff(r: &mut ChaCha8Rng) -> GaussCoeff {
    GaussCoeff::new(rat(r.gen_range(-3..=3), r.gen_range(1..=3)), rat(r.gen_range(-3..=3), r.gen_range(1..=3)))
}

fn part(r: &mut ChaCha8Rng, n_vars: usize, m: u32, n: u32) -> BihomPoly {
    let terms: Vec<_> = monomial_basis(n_vars, m, n)
        .into_iter()
        .filter_map(|mono| r.gen_bool(0.5).then(|| (mono, coeff(r))))
        .collect();
    BihomPoly::from_terms(n_vars, (m, n), terms).expect("basis monomials")
}

fn wanted(profile: Profile, s: u32, m: u32, n: u32) -> bool {
    let pure = m == 0 || n == 0;
    match profile {
        Profile::PureOnly => pure && m + n >= s,
        Profile::Mixed => !pure || m + n == s,
        Profile::Generic => !pure || m + n >= s,
    }
}

fn draw(r: &mut ChaCha8Rng, n_vars: usize, degree: u32, s: u32, profile: Profile) -> Manifold {
    let mut phi = MixedSeries::zero(n_vars, degree);
    for total in 3..=degree {
        for m in (0..=total).rev() {
            let n = total - m;
            if wanted(profile, s, m, n) {
                let mut p = part(r, n_vars, m, n);
                if (m, n) == (s, 0) && p.is_zero() {
                    p = part(r, n_vars, m, n);
                }
                phi.add_part(&p);
            }
        }
    }
    Manifold::new(n_vars, degree, phi).expect("parts within range")
}

/// Deterministic in the seed. The leading pure term φ_{s,0} is nonzero; with two or more
/// variables the draw is repeated until the partial normal form has invariant s and a
/// nondegenerate Δ.
pub fn random_manifold(seed: u64, n_vars: usize, degree: u32, s: u32, profile: Profile) -> Result<ManifoldDocument> {
    if n_vars == 0 {
        return Err(CrnfError::InvalidInput("n_vars must be at least 1".into()));
    }
    if s < 3 || degree < s {
        return Err(CrnfError::InvalidInput(format!("need 3 <= s <= degree, got s={s}, degree={degree}")));
    }
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let m = draw(&mut r, n_vars, degree, s, profile);
        if m.phi().part(s, 0).is_zero() {
            continue;
        }
        let inv = moser_invariants(&extended_moser(&m.truncated(s)).manifold);
        if inv.s == Some(s) && (n_vars == 1 || inv.nondegenerate) {
            return Ok(manifold_document(&m));
        }
    }
    Err(CrnfError::RetryBudget(RETRY_BUDGET))
}
