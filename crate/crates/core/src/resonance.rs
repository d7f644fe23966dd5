//! Enumeration of resonant monomials `x^mu e_alpha` (those with
//! `mu . lambda = lambda_alpha`, `|mu| >= 2`) and their per-target degree
//! intervals.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{multiindex_for_each_of_degree, Multiindex};
use crate::spectrum::{check_poincare, resonance_degree_bound, JordanStructure, Spectrum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResonanceError {
    #[error(
        "spectrum fails the Poincaré condition so the resonance set may be \
         infinite; supply a maximum degree to enumerate a truncation"
    )]
    NonPoincareUnbounded,
}

/// A monomial vector `x^mu e_alpha` satisfying the resonance relation.
/// `alpha` is a 0-based coordinate index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonantMonomial {
    pub mu: Multiindex,
    pub alpha: usize,
}

impl fmt::Display for ResonantMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} -> e{}", self.mu, self.alpha + 1)
    }
}

/// Degree summary for one target coordinate: the smallest and largest
/// resonance degrees and the number of resonant monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaInterval {
    pub m_minus: u32,
    pub m_plus: u32,
    pub count: usize,
}

/// Complete (or degree-capped) list of resonant monomials of a spectrum,
/// sorted by `(alpha, |mu|, canonical monomial order)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceTable {
    spectrum: Spectrum,
    entries: Vec<ResonantMonomial>,
    per_alpha: BTreeMap<usize, AlphaInterval>,
    truncation_degree: Option<u32>,
}

impl ResonanceTable {
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn entries(&self) -> &[ResonantMonomial] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The degree cap, when enumeration did not cover all resonances of the
    /// spectrum. `None` means the table is complete.
    pub fn truncation_degree(&self) -> Option<u32> {
        self.truncation_degree
    }

    pub fn is_complete(&self) -> bool {
        self.truncation_degree.is_none()
    }

    pub fn per_alpha(&self) -> &BTreeMap<usize, AlphaInterval> {
        &self.per_alpha
    }
}

/// Exact test of the resonance relation `mu . lambda = lambda_alpha`.
/// Callers are expected to pass `|mu| >= 2`; degree-one multiindices are
/// never treated as resonances by the enumerator.
pub fn is_resonant(mu: &Multiindex, alpha: usize, spectrum: &Spectrum) -> bool {
    spectrum.pair(mu) == *spectrum.eigenvalue(alpha)
}

/// Enumerates every resonant monomial with `2 <= |mu| <= bound`.
///
/// For a Poincaré spectrum the bound is the certificate degree bound
/// intersected with `max_degree` (the smaller wins); the table is complete
/// whenever the cap does not cut below the certificate bound. For a
/// non-Poincaré spectrum `max_degree` is mandatory, and the table is always
/// marked as truncated.
///
/// Resonance is decided against the semisimple part, so only the spectrum of
/// the Jordan structure matters here.
pub fn enumerate_resonances(
    jordan: &JordanStructure,
    max_degree: Option<u32>,
) -> Result<ResonanceTable, ResonanceError> {
    let spectrum = jordan.spectrum();
    let certificate_bound = check_poincare(spectrum).map(|c| resonance_degree_bound(spectrum, &c));
    let (bound, truncation_degree) = match (certificate_bound, max_degree) {
        (Some(b), None) => (b, None),
        (Some(b), Some(cap)) => {
            let effective = b.min(cap);
            (effective, (effective < b).then_some(effective))
        }
        (None, Some(cap)) => (cap, Some(cap)),
        (None, None) => return Err(ResonanceError::NonPoincareUnbounded),
    };

    let n = spectrum.len();
    let mut entries = Vec::new();
    for alpha in 0..n {
        let target = spectrum.eigenvalue(alpha);
        for degree in 2..=bound {
            multiindex_for_each_of_degree(n, degree, &mut |mu| {
                if spectrum.pair(mu) == *target {
                    entries.push(ResonantMonomial {
                        mu: mu.clone(),
                        alpha,
                    });
                }
            });
        }
    }

    let mut per_alpha: BTreeMap<usize, AlphaInterval> = BTreeMap::new();
    for entry in &entries {
        let degree = entry.mu.degree();
        per_alpha
            .entry(entry.alpha)
            .and_modify(|interval| {
                interval.m_minus = interval.m_minus.min(degree);
                interval.m_plus = interval.m_plus.max(degree);
                interval.count += 1;
            })
            .or_insert(AlphaInterval {
                m_minus: degree,
                m_plus: degree,
                count: 1,
            });
    }

    Ok(ResonanceTable {
        spectrum: spectrum.clone(),
        entries,
        per_alpha,
        truncation_degree,
    })
}

/// Per-target degree intervals `alpha -> (m_minus, m_plus)`; targets with no
/// resonance are absent.
pub fn resonance_intervals(table: &ResonanceTable) -> BTreeMap<usize, (u32, u32)> {
    table
        .per_alpha
        .iter()
        .map(|(&alpha, interval)| (alpha, (interval.m_minus, interval.m_plus)))
        .collect()
}

/// Searches for a master resonance `mu . lambda = 0` with `1 <= |mu| <=
/// max_degree`. Its existence forces infinitely many resonances and rules
/// out the Poincaré condition.
pub fn find_master_resonance(spectrum: &Spectrum, max_degree: u32) -> Option<Multiindex> {
    let n = spectrum.len();
    for degree in 1..=max_degree {
        let mut found = None;
        multiindex_for_each_of_degree(n, degree, &mut |mu| {
            if found.is_none() && spectrum.pair(mu).is_zero() {
                found = Some(mu.clone());
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, GaussianRational};
    use crate::spectrum::Coupling;

    fn mi(e: &[u32]) -> Multiindex {
        Multiindex::new(e.to_vec())
    }

    fn gauss(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(rational(re, 1), rational(im, 1))
    }

    fn entry(mu: &[u32], alpha: usize) -> ResonantMonomial {
        ResonantMonomial {
            mu: mi(mu),
            alpha,
        }
    }

    #[test]
    fn resonance_relation_is_exact() {
        let s = Spectrum::from_ints(&[1, 2, 5]);
        assert!(is_resonant(&mi(&[2, 0, 0]), 1, &s));
        assert!(!is_resonant(&mi(&[2, 0, 0]), 0, &s));
        let osc = Spectrum::new(vec![gauss(0, 1), gauss(0, -1)]).unwrap();
        assert!(is_resonant(&mi(&[2, 1]), 0, &osc));
    }

    #[test]
    fn spectrum_1_2_5_has_four_resonances() {
        let j = JordanStructure::diagonal(Spectrum::from_ints(&[1, 2, 5]));
        let table = enumerate_resonances(&j, None).unwrap();
        assert_eq!(
            table.entries(),
            &[
                entry(&[2, 0, 0], 1),
                entry(&[1, 2, 0], 2),
                entry(&[3, 1, 0], 2),
                entry(&[5, 0, 0], 2),
            ]
        );
        assert!(table.is_complete());
        let intervals = resonance_intervals(&table);
        assert_eq!(intervals.get(&1), Some(&(2, 2)));
        assert_eq!(intervals.get(&2), Some(&(3, 5)));
    }

    #[test]
    fn repeated_eigenvalue_block_has_three_quadratics() {
        let j = JordanStructure::new(
            Spectrum::from_ints(&[1, 1, 2]),
            vec![Coupling::One, Coupling::Zero],
        )
        .unwrap();
        let table = enumerate_resonances(&j, None).unwrap();
        assert_eq!(
            table.entries(),
            &[
                entry(&[2, 0, 0], 2),
                entry(&[1, 1, 0], 2),
                entry(&[0, 2, 0], 2),
            ]
        );
    }

    #[test]
    fn nonresonant_spectrum_gives_empty_table() {
        let j = JordanStructure::diagonal(Spectrum::from_ints(&[2, 3]));
        let table = enumerate_resonances(&j, None).unwrap();
        assert!(table.is_empty());
        assert!(resonance_intervals(&table).is_empty());
    }

    #[test]
    fn oscillator_pair_needs_a_cap_and_yields_the_cubic_family() {
        let j = JordanStructure::diagonal(Spectrum::new(vec![gauss(0, 1), gauss(0, -1)]).unwrap());
        assert_eq!(
            enumerate_resonances(&j, None),
            Err(ResonanceError::NonPoincareUnbounded)
        );
        let table = enumerate_resonances(&j, Some(3)).unwrap();
        assert_eq!(table.entries(), &[entry(&[2, 1], 0), entry(&[1, 2], 1)]);
        assert_eq!(table.truncation_degree(), Some(3));
    }

    #[test]
    fn cap_above_the_certificate_bound_changes_nothing() {
        let j = JordanStructure::diagonal(Spectrum::from_ints(&[1, 2, 5]));
        let full = enumerate_resonances(&j, None).unwrap();
        let capped = enumerate_resonances(&j, Some(8)).unwrap();
        assert_eq!(full, capped);
        let below = enumerate_resonances(&j, Some(3)).unwrap();
        assert_eq!(below.truncation_degree(), Some(3));
        assert_eq!(below.len(), 2);
    }

    #[test]
    fn master_resonance_is_found_for_the_oscillator_pair() {
        let osc = Spectrum::new(vec![gauss(0, 1), gauss(0, -1)]).unwrap();
        assert_eq!(find_master_resonance(&osc, 6), Some(mi(&[1, 1])));
        assert_eq!(find_master_resonance(&Spectrum::from_ints(&[1, 2, 5]), 6), None);
    }
}
