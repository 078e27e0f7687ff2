#![allow(dead_code)]

use std::collections::BTreeMap;

use crnf::coeff::{rat, GaussCoeff};
use crnf::moser::{FormalMap, Manifold};
use crnf::polycore::{hermitian_quadric, monomial_basis, BihomPoly, MixedSeries, Monomial, PurePoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_coeff(r: &mut ChaCha8Rng, complex: bool) -> GaussCoeff {
    let re = rat(r.gen_range(-4..=4), r.gen_range(1..=3));
    let im = if complex { rat(r.gen_range(-4..=4), r.gen_range(1..=3)) } else { rat(0, 1) };
    GaussCoeff::new(re, im)
}

pub fn random_bihom(r: &mut ChaCha8Rng, n: usize, m: u32, k: u32, density: f64) -> BihomPoly {
    let mut terms: Vec<(Monomial, GaussCoeff)> = Vec::new();
    for mono in monomial_basis(n, m, k) {
        if r.gen_bool(density) {
            terms.push((mono, small_coeff(r, true)));
        }
    }
    BihomPoly::from_terms(n, (m, k), terms).unwrap()
}

pub fn random_pure(r: &mut ChaCha8Rng, n: usize, d: u32, density: f64) -> PurePoly {
    PurePoly::try_from_bihom(random_bihom(r, n, d, 0, density)).unwrap()
}

/// Random φ with every bidegree 3 ≤ m+n ≤ d populated sparsely.
pub fn random_manifold(r: &mut ChaCha8Rng, n: usize, d: u32, density: f64) -> Manifold {
    let mut phi = MixedSeries::zero(n, d);
    for total in 3..=d {
        for m in 0..=total {
            phi.add_part(&random_bihom(r, n, m, total - m, density));
        }
    }
    Manifold::new(n, d, phi).unwrap()
}

/// Random tangent-to-identity map with components of normal weight ≤ w.
pub fn random_map(r: &mut ChaCha8Rng, n: usize, w: u32, wmax: u32, density: f64) -> FormalMap {
    let mut f = BTreeMap::new();
    let mut g = BTreeMap::new();
    for nw in 2..=w {
        for k in 0..=nw / 2 {
            let m = nw - 2 * k;
            if (m, k) == (1, 0) {
                continue;
            }
            let comps: Vec<PurePoly> = (0..n).map(|_| random_pure(r, n, m, density)).collect();
            f.insert((m, k), comps);
            if nw >= 3 && !(m == 0 && k == 1) {
                g.insert((m, k), random_pure(r, n, m, density));
            }
        }
    }
    FormalMap::new(n, wmax, f, g).unwrap()
}

/// Sparse-arithmetic oracle: G − ⟨F,F⟩ − φ′(F, F̄) restricted to M, which must vanish.
pub fn pushforward_residual(m: &Manifold, t: &FormalMap, image: &Manifold) -> MixedSeries {
    let n = m.n_vars();
    let d = m.max_degree();
    let w = MixedSeries::from_part(hermitian_quadric(n), d).add(m.phi());
    let mut wpow = vec![MixedSeries::from_part(BihomPoly::constant(n, GaussCoeff::from_int(1)), d)];
    for _ in 0..d {
        let next = wpow.last().unwrap().mul(&w);
        wpow.push(next);
    }
    let lift = |p: &PurePoly| MixedSeries::from_part(p.as_bihom().clone(), d);
    let mut f: Vec<MixedSeries> = (0..n)
        .map(|k| MixedSeries::from_part(BihomPoly::monomial(Monomial::z(n, k), GaussCoeff::from_int(1)), d))
        .collect();
    for ((_, e), comps) in t.f() {
        for k in 0..n {
            f[k] = f[k].add(&lift(&comps[k]).mul(&wpow[*e as usize]));
        }
    }
    let mut g = w.clone();
    for ((_, e), p) in t.g() {
        g = g.add(&lift(p).mul(&wpow[*e as usize]));
    }
    let fb: Vec<MixedSeries> = f.iter().map(|x| x.conjugate()).collect();
    let mut res = g;
    for k in 0..n {
        res = res.sub(&f[k].mul(&fb[k]));
    }
    for (_, part) in image.phi().parts() {
        for (mono, c) in part.terms() {
            let mut term = MixedSeries::from_part(BihomPoly::constant(n, c.clone()), d);
            for k in 0..n {
                for _ in 0..mono.dz()[k] {
                    term = term.mul(&f[k]);
                }
                for _ in 0..mono.dzb()[k] {
                    term = term.mul(&fb[k]);
                }
            }
            res = res.sub(&term);
        }
    }
    res
}

pub fn z_pow(n: usize, e: &[u32], c: GaussCoeff) -> BihomPoly {
    BihomPoly::monomial(Monomial::new(e, &vec![0; n]), c)
}

/// Moser data plus a nonzero cubic pure term (z1^3 scaled for N=1, z1^3+z2^3 otherwise).
pub fn with_cube(r: &mut ChaCha8Rng, n: usize, d: u32) -> Manifold {
    let m = random_manifold(r, n, d, 0.5);
    let mut phi = MixedSeries::zero(n, d);
    for ((a, b), p) in m.phi().parts() {
        if (*a, *b) != (3, 0) && (*a, *b) != (0, 3) {
            phi.add_part(p);
        }
    }
    let one = GaussCoeff::from_int(1);
    let c = if n == 1 {
        z_pow(1, &[3], GaussCoeff::new(rat(r.gen_range(1..4), 1), rat(r.gen_range(-2..3), 1)))
    } else {
        z_pow(n, &[3, 0], one.clone()).add(&z_pow(n, &[0, 3], one))
    };
    phi.add_part(&c);
    phi.add_part(&c.conjugate());
    Manifold::new(n, d, phi).unwrap()
}

/// Highest grade at which every kernel parameter of the full normalization is fixed by degree d.
pub fn pinned_grade(s: u32, d: u32) -> u32 {
    let t_even = (1..).find(|t| t * s + 1 > d).unwrap();
    let t_odd = (1..).find(|t| (t + 1) * s > d).unwrap();
    (2 * t_even + 1).min(2 * t_odd + 2) - 1
}

/// Degrees below which normal forms at truncation d coincide: for N >= 2 an unfixed odd
/// parameter at t moves the mixed term of bidegree (t+1, t+1).
pub fn unique_degree(n: usize, s: u32, d: u32) -> u32 {
    if n == 1 {
        return d + 1;
    }
    let t_odd = (1..).find(|t| (t + 1) * s > d).unwrap();
    (2 * t_odd + 2).min(d + 1)
}
