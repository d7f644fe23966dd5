//! Small ready-made systems in (semi)normal form, named by their spectra.
//! They double as documentation and as fixtures for integration tests;
//! every nonlinear coefficient is kept symbolic.

use crate::algebra::{GaussianRational, Multiindex, Polynomial, SymbolTable};
use crate::normal_form::NormalFormSystem;
use crate::spectrum::{Coupling, JordanStructure, Spectrum};

fn mi(e: &[u32]) -> Multiindex {
    Multiindex::new(e.to_vec())
}

/// `x1' = x1, x2' = k x2 + c1 x1^k` on the spectrum `{1, k}`: the single
/// resonance is `x1^k -> e2`. Requires `k >= 2`.
pub fn two_dim_single_resonance(k: u32) -> NormalFormSystem {
    assert!(k >= 2, "the resonance x1^k needs k >= 2");
    let params = SymbolTable::new(["c1"]).unwrap();
    NormalFormSystem::new(
        JordanStructure::diagonal(Spectrum::from_ints(&[1, k as i64])),
        params.clone(),
        vec![(mi(&[k, 0]), 1, Polynomial::symbol(&params, 0))],
    )
    .expect("valid by construction")
}

/// Spectrum `{1, 2, 5}` with all four resonant coefficients `c1..c4`:
/// `x1' = x1, x2' = 2 x2 + c1 x1^2,
///  x3' = 5 x3 + c2 x1 x2^2 + c3 x1^3 x2 + c4 x1^5`.
pub fn three_dim_chain_1_2_5() -> NormalFormSystem {
    let params = SymbolTable::new(["c1", "c2", "c3", "c4"]).unwrap();
    let c = |k| Polynomial::symbol(&params, k);
    NormalFormSystem::new(
        JordanStructure::diagonal(Spectrum::from_ints(&[1, 2, 5])),
        params.clone(),
        vec![
            (mi(&[2, 0, 0]), 1, c(0)),
            (mi(&[1, 2, 0]), 2, c(1)),
            (mi(&[3, 1, 0]), 2, c(2)),
            (mi(&[5, 0, 0]), 2, c(3)),
        ],
    )
    .expect("valid by construction")
}

/// Spectrum `{1, 1, 2}` with superdiagonal coupling `coupling` between the
/// repeated eigenvalues and `F = (c1 x1^2 + c2 x1 x2 + c3 x2^2) e3`.
///
/// With `zero_mixed_terms` the `c2`, `c3` coefficients are set to zero: for
/// a nonzero coupling that is exactly the full normal-form condition.
pub fn jordan_block_1_1_2(coupling: Coupling, zero_mixed_terms: bool) -> NormalFormSystem {
    let params = SymbolTable::new(["eta", "c1", "c2", "c3"]).unwrap();
    let coeff = |k: usize| {
        if zero_mixed_terms && k >= 2 {
            Polynomial::zero(&params)
        } else {
            Polynomial::symbol(&params, k)
        }
    };
    NormalFormSystem::new(
        JordanStructure::new(
            Spectrum::from_ints(&[1, 1, 2]),
            vec![coupling, Coupling::Zero],
        )
        .expect("superdiagonal length 2"),
        params.clone(),
        vec![
            (mi(&[2, 0, 0]), 2, coeff(1)),
            (mi(&[1, 1, 0]), 2, coeff(2)),
            (mi(&[0, 2, 0]), 2, coeff(3)),
        ],
    )
    .expect("valid by construction")
}

/// The oscillator pair `{i, -i}` in complex eigencoordinates, truncated to
/// its cubic resonant terms: `z1' = i z1 + (a1 + i b1) z1^2 z2` and the
/// conjugate equation. The spectrum carries the master resonance
/// `lambda_1 + lambda_2 = 0`, so the full resonance set is infinite.
pub fn oscillator_pair() -> NormalFormSystem {
    let params = SymbolTable::new(["a1", "b1"]).unwrap();
    let a1 = Polynomial::symbol(&params, 0);
    let b1 = Polynomial::symbol(&params, 1);
    let i = GaussianRational::i();
    let d1 = &a1 + &b1.scaled(&i);
    let d1_conj = &a1 - &b1.scaled(&i);
    let spectrum = Spectrum::new(vec![i.clone(), -&i]).unwrap();
    NormalFormSystem::new(
        JordanStructure::diagonal(spectrum),
        params.clone(),
        vec![(mi(&[2, 1]), 0, d1), (mi(&[1, 2]), 1, d1_conj)],
    )
    .expect("valid by construction")
}

/// Spectrum `{1, 2, 3, 10}` with its cubic-or-lower coefficients `c1..c3`
/// and one representative quartic resonance `c4 x2^2 x3^2 -> e4`:
/// `x1' = x1, x2' = 2 x2 + c1 x1^2, x3' = 3 x3 + c2 x1 x2 + c3 x1^3,
///  x4' = 10 x4 + c4 x2^2 x3^2`.
///
/// Truncating at order 3 drops the quartic term and closes over a basis of
/// three monomials.
pub fn four_dim_1_2_3_10() -> NormalFormSystem {
    let params = SymbolTable::new(["c1", "c2", "c3", "c4"]).unwrap();
    let c = |k| Polynomial::symbol(&params, k);
    NormalFormSystem::new(
        JordanStructure::diagonal(Spectrum::from_ints(&[1, 2, 3, 10])),
        params.clone(),
        vec![
            (mi(&[2, 0, 0, 0]), 1, c(0)),
            (mi(&[1, 1, 0, 0]), 2, c(1)),
            (mi(&[3, 0, 0, 0]), 2, c(2)),
            (mi(&[0, 2, 2, 0]), 3, c(3)),
        ],
    )
    .expect("valid by construction")
}
