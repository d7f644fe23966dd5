//! Helpers shared by the integration and acceptance suites: independent
//! brute-force generators and seeded random builders.

#![allow(dead_code)]

use nflin_core::algebra::{GaussianRational, Multiindex, Polynomial, PolyExp, SymbolTable};
use nflin_core::normal_form::NormalFormSystem;
use nflin_core::resonance::enumerate_resonances;
use nflin_core::spectrum::{Coupling, JordanStructure, Spectrum};
use rand::rngs::StdRng;
use rand::Rng;

/// Independent resonance generator: walks all exponent tuples in
/// `(0..=bound)^n` with an odometer and filters by degree and the exact
/// pairing, computed by repeated addition.
pub fn brute_force_resonances(spectrum: &Spectrum, bound: u32) -> Vec<(Vec<u32>, usize)> {
    let n = spectrum.len();
    let mut found = Vec::new();
    let mut tuple = vec![0u32; n];
    loop {
        let degree: u32 = tuple.iter().sum();
        if (2..=bound).contains(&degree) {
            let mut pairing = GaussianRational::zero();
            for (slot, &e) in tuple.iter().enumerate() {
                for _ in 0..e {
                    pairing += spectrum.eigenvalue(slot);
                }
            }
            for alpha in 0..n {
                if pairing == *spectrum.eigenvalue(alpha) {
                    found.push((tuple.clone(), alpha));
                }
            }
        }
        let mut slot = n;
        loop {
            if slot == 0 {
                return found;
            }
            slot -= 1;
            if tuple[slot] < bound {
                tuple[slot] += 1;
                break;
            }
            tuple[slot] = 0;
        }
    }
}

/// Sorts brute-force output the way the enumerator orders its entries.
pub fn sort_resonances(entries: &mut [(Vec<u32>, usize)]) {
    entries.sort_by(|(mu_a, alpha_a), (mu_b, alpha_b)| {
        alpha_a
            .cmp(alpha_b)
            .then_with(|| Multiindex::new(mu_a.clone()).cmp(&Multiindex::new(mu_b.clone())))
    });
}

/// Random integer spectrum; couplings only where adjacent eigenvalues agree.
pub fn random_jordan(rng: &mut StdRng, n: usize) -> JordanStructure {
    let spectrum = Spectrum::new(
        (0..n)
            .map(|_| GaussianRational::from_int(rng.gen_range(-4i64..=4)))
            .collect(),
    )
    .unwrap();
    let superdiagonal = (0..n - 1)
        .map(|k| {
            if spectrum.eigenvalue(k) == spectrum.eigenvalue(k + 1) && rng.gen_bool(0.6) {
                Coupling::One
            } else {
                Coupling::Zero
            }
        })
        .collect();
    JordanStructure::new(spectrum, superdiagonal).unwrap()
}

/// Random coefficient list with degrees in `2..=5` and no duplicate
/// `(monomial, target)` pairs; scalars are nonzero integers.
pub fn random_coefficients(
    rng: &mut StdRng,
    n: usize,
    params: &SymbolTable,
    count: usize,
) -> Vec<(Multiindex, usize, Polynomial)> {
    let mut out: Vec<(Multiindex, usize, Polynomial)> = Vec::new();
    while out.len() < count {
        let mu = Multiindex::new((0..n).map(|_| rng.gen_range(0u32..=3)).collect::<Vec<_>>());
        if !(2..=5).contains(&mu.degree()) {
            continue;
        }
        let alpha = rng.gen_range(0..n);
        if out.iter().any(|(m, a, _)| *m == mu && *a == alpha) {
            continue;
        }
        out.push((mu, alpha, Polynomial::int(params, rng.gen_range(1i64..=3))));
    }
    out
}

/// Random Poincaré system: positive integer spectrum, a random subset of
/// its resonant monomials, one symbolic parameter per kept coefficient.
pub fn random_poincare_system(rng: &mut StdRng) -> NormalFormSystem {
    let n = rng.gen_range(2..=4);
    let spectrum = Spectrum::new(
        (0..n)
            .map(|_| GaussianRational::from_int(rng.gen_range(1..=5)))
            .collect(),
    )
    .unwrap();
    let jordan = JordanStructure::diagonal(spectrum);
    let table = enumerate_resonances(&jordan, None).unwrap();
    let chosen: Vec<_> = table
        .entries()
        .iter()
        .filter(|_| rng.gen_bool(0.7))
        .cloned()
        .collect();
    let params = SymbolTable::new((1..=chosen.len()).map(|k| format!("c{k}"))).unwrap();
    let coefficients = chosen
        .into_iter()
        .enumerate()
        .map(|(k, entry)| (entry.mu, entry.alpha, Polynomial::symbol(&params, k)))
        .collect();
    NormalFormSystem::new(jordan, params, coefficients).unwrap()
}

/// Random polynomial over `table` with a few small terms.
pub fn random_polynomial(rng: &mut StdRng, table: &SymbolTable) -> Polynomial {
    let mut acc = Polynomial::zero(table);
    for _ in 0..rng.gen_range(0..=4) {
        let mu = Multiindex::new(
            (0..table.len())
                .map(|_| rng.gen_range(0u32..=2))
                .collect::<Vec<_>>(),
        );
        let coeff = GaussianRational::new(
            nflin_core::algebra::rational(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4)),
            nflin_core::algebra::rational(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4)),
        );
        acc = &acc + &Polynomial::monomial(table, mu, coeff);
    }
    acc
}

/// Random polynomial-exponential function with a few exponents and `t`-degree
/// at most 2.
pub fn random_polyexp(rng: &mut StdRng, table: &SymbolTable) -> PolyExp {
    let mut acc = PolyExp::zero(table);
    for _ in 0..rng.gen_range(0..=3) {
        let lambda = GaussianRational::new(
            nflin_core::algebra::rational(rng.gen_range(-3i64..=3), 1),
            nflin_core::algebra::rational(rng.gen_range(-2i64..=2), 1),
        );
        let t_coeffs = (0..rng.gen_range(1..=3))
            .map(|_| random_polynomial(rng, table))
            .collect();
        acc = &acc + &PolyExp::term(table, lambda, t_coeffs);
    }
    acc
}
