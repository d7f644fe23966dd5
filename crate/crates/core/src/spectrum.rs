//! The linear part in Jordan form: spectrum data, exact Poincaré-condition
//! test, and the resulting bound on resonance degrees.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("a spectrum needs at least one eigenvalue")]
    Empty,
    #[error("superdiagonal must have n-1 = {expected} entries, got {got}")]
    SuperdiagonalLength { expected: usize, got: usize },
}

/// Eigenvalues of the linear part, one per coordinate, in basis order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    eigenvalues: Vec<GaussianRational>,
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<GaussianRational>) -> Result<Self, SpectrumError> {
        if eigenvalues.is_empty() {
            return Err(SpectrumError::Empty);
        }
        Ok(Self { eigenvalues })
    }

    /// Convenience constructor from integer eigenvalues.
    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| GaussianRational::from_int(v)).collect())
            .expect("nonempty integer spectrum")
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eigenvalue(&self, index: usize) -> &GaussianRational {
        &self.eigenvalues[index]
    }

    pub fn eigenvalues(&self) -> &[GaussianRational] {
        &self.eigenvalues
    }

    /// `mu . lambda`, the exact pairing with a multiindex.
    pub fn pair(&self, mu: &crate::algebra::Multiindex) -> GaussianRational {
        assert_eq!(mu.len(), self.len(), "multiindex length != dimension");
        let mut acc = GaussianRational::zero();
        for (slot, &e) in mu.exponents().iter().enumerate() {
            if e > 0 {
                acc += &(&GaussianRational::from_int(e as i64) * &self.eigenvalues[slot]);
            }
        }
        acc
    }
}

/// One superdiagonal entry of the linear part.
///
/// `One` is the usual unit Jordan coupling; `Symbol` keeps the coupling as a
/// named real parameter so structure results stay symbolic in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coupling {
    Zero,
    One,
    Symbol(String),
}

impl Coupling {
    pub fn is_zero(&self) -> bool {
        matches!(self, Coupling::Zero)
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Zero => write!(f, "0"),
            Coupling::One => write!(f, "1"),
            Coupling::Symbol(name) => write!(f, "{name}"),
        }
    }
}

/// Violation found by [`JordanStructure::validate`]: a nonzero coupling
/// between coordinates with different eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanViolation {
    /// Coupling position: links coordinates `position` and `position + 1`.
    pub position: usize,
    pub left: GaussianRational,
    pub right: GaussianRational,
}

impl fmt::Display for JordanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "superdiagonal entry {} couples eigenvalues {} and {}",
            self.position + 1,
            self.left,
            self.right
        )
    }
}

/// The matrix `A = A_s + A_n` in (upper) Jordan form: diagonal eigenvalues
/// plus superdiagonal couplings. `[A_s, A_n] = 0` holds by construction for
/// every structure that passes [`validate`](Self::validate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanStructure {
    spectrum: Spectrum,
    superdiagonal: Vec<Coupling>,
}

impl JordanStructure {
    pub fn new(spectrum: Spectrum, superdiagonal: Vec<Coupling>) -> Result<Self, SpectrumError> {
        if superdiagonal.len() + 1 != spectrum.len() {
            return Err(SpectrumError::SuperdiagonalLength {
                expected: spectrum.len() - 1,
                got: superdiagonal.len(),
            });
        }
        Ok(Self {
            spectrum,
            superdiagonal,
        })
    }

    /// Purely diagonal structure (`A = A_s`).
    pub fn diagonal(spectrum: Spectrum) -> Self {
        let n = spectrum.len();
        Self {
            spectrum,
            superdiagonal: vec![Coupling::Zero; n - 1],
        }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dimension(&self) -> usize {
        self.spectrum.len()
    }

    pub fn superdiagonal(&self) -> &[Coupling] {
        &self.superdiagonal
    }

    pub fn coupling(&self, position: usize) -> &Coupling {
        &self.superdiagonal[position]
    }

    pub fn is_semisimple(&self) -> bool {
        self.superdiagonal.iter().all(Coupling::is_zero)
    }

    /// Nonzero couplings must stay inside one Jordan block, i.e. link equal
    /// eigenvalues. Returns every violation; empty means valid.
    pub fn validate(&self) -> Vec<JordanViolation> {
        let mut violations = Vec::new();
        for (position, coupling) in self.superdiagonal.iter().enumerate() {
            if coupling.is_zero() {
                continue;
            }
            let left = self.spectrum.eigenvalue(position);
            let right = self.spectrum.eigenvalue(position + 1);
            if left != right {
                violations.push(JordanViolation {
                    position,
                    left: left.clone(),
                    right: right.clone(),
                });
            }
        }
        violations
    }
}

/// Exact witness that the origin lies strictly outside the convex hull of
/// the spectrum: `d . lambda >= margin > 0` for every eigenvalue, where the
/// pairing is `d1*Re(lambda) + d2*Im(lambda)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareCertificate {
    pub separating_direction: (Rational, Rational),
    pub margin: Rational,
}

impl PoincareCertificate {
    /// Re-checks the certificate inequality against a spectrum.
    pub fn verify(&self, spectrum: &Spectrum) -> bool {
        if !self.margin.is_positive() {
            return false;
        }
        spectrum
            .eigenvalues()
            .iter()
            .all(|lambda| pair_direction(&self.separating_direction, lambda) >= self.margin)
    }
}

fn pair_direction(direction: &(Rational, Rational), lambda: &GaussianRational) -> Rational {
    &direction.0 * lambda.re() + &direction.1 * lambda.im()
}

/// Decides the Poincaré condition exactly: returns a separating-direction
/// certificate iff the origin is strictly outside the convex hull of the
/// spectrum in the complex plane. An origin on the hull boundary fails.
///
/// Candidate directions are the eigenvalue positions themselves and the two
/// normals of every eigenvalue pair, tried in input order; the first
/// candidate whose inequality verifies exactly is returned, so the result is
/// deterministic for a given spectrum.
pub fn check_poincare(spectrum: &Spectrum) -> Option<PoincareCertificate> {
    let points: Vec<(Rational, Rational)> = spectrum
        .eigenvalues()
        .iter()
        .map(|l| (l.re().clone(), l.im().clone()))
        .collect();

    let mut candidates: Vec<(Rational, Rational)> = points.clone();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let edge = (&points[j].0 - &points[i].0, &points[j].1 - &points[i].1);
            // Both normals of the segment i-j.
            candidates.push((-edge.1.clone(), edge.0.clone()));
            candidates.push((edge.1.clone(), -edge.0.clone()));
        }
    }

    for direction in candidates {
        if direction.0.is_zero() && direction.1.is_zero() {
            continue;
        }
        let margin = spectrum
            .eigenvalues()
            .iter()
            .map(|l| pair_direction(&direction, l))
            .min()
            .expect("spectrum nonempty");
        if margin.is_positive() {
            let certificate = PoincareCertificate {
                separating_direction: direction,
                margin,
            };
            debug_assert!(certificate.verify(spectrum));
            return Some(certificate);
        }
    }
    None
}

/// Degree bound for resonances of a Poincaré spectrum:
/// `D = floor(max_a <d, lambda_a> / min_j <d, lambda_j>)`. Every resonance
/// `mu . lambda = lambda_a` has `|mu| <= D`, because each factor contributes
/// at least the minimum pairing.
pub fn resonance_degree_bound(spectrum: &Spectrum, certificate: &PoincareCertificate) -> u32 {
    let pairings: Vec<Rational> = spectrum
        .eigenvalues()
        .iter()
        .map(|l| pair_direction(&certificate.separating_direction, l))
        .collect();
    let max = pairings.iter().max().expect("nonempty").clone();
    let min = pairings.iter().min().expect("nonempty").clone();
    assert!(min.is_positive(), "certificate does not verify");
    (max / min).floor().to_integer().to_u32().unwrap_or(u32::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn gauss(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(rational(re, 1), rational(im, 1))
    }

    #[test]
    fn real_positive_spectrum_has_axis_certificate() {
        let s = Spectrum::from_ints(&[1, 2, 5]);
        let cert = check_poincare(&s).expect("Poincaré spectrum");
        assert_eq!(cert.separating_direction, (rational(1, 1), rational(0, 1)));
        assert_eq!(cert.margin, rational(1, 1));
        assert_eq!(resonance_degree_bound(&s, &cert), 5);
    }

    #[test]
    fn imaginary_pair_fails() {
        let s = Spectrum::new(vec![gauss(0, 1), gauss(0, -1)]).unwrap();
        assert!(check_poincare(&s).is_none());
    }

    #[test]
    fn origin_on_segment_fails() {
        let s = Spectrum::from_ints(&[1, -1]);
        assert!(check_poincare(&s).is_none());
    }

    #[test]
    fn origin_in_hull_interior_fails() {
        let s = Spectrum::new(vec![gauss(1, 0), gauss(-1, 1), gauss(-1, -1)]).unwrap();
        assert!(check_poincare(&s).is_none());
    }

    #[test]
    fn off_axis_spectrum_needs_an_edge_normal() {
        // Points 1+2i and 2-1i: neither point direction separates on its
        // own margin check failing? They do fine; use a case where only an
        // edge normal works: i+1 and 1-i are separated by direction (1,0)
        // via the pair normal or the vertex direction sum.
        let s = Spectrum::new(vec![gauss(1, 5), gauss(1, -5)]).unwrap();
        let cert = check_poincare(&s).expect("strictly right of the origin");
        assert!(cert.verify(&s));
    }

    #[test]
    fn degree_bounds_match_known_spectra() {
        let s = Spectrum::from_ints(&[1, 2, 3, 10]);
        let cert = check_poincare(&s).unwrap();
        assert_eq!(resonance_degree_bound(&s, &cert), 10);
        let s = Spectrum::from_ints(&[1, 1, 2]);
        let cert = check_poincare(&s).unwrap();
        assert_eq!(resonance_degree_bound(&s, &cert), 2);
    }

    #[test]
    fn jordan_validation_flags_cross_block_couplings() {
        let j = JordanStructure::new(
            Spectrum::from_ints(&[1, 1, 2]),
            vec![Coupling::One, Coupling::Zero],
        )
        .unwrap();
        assert!(j.validate().is_empty());

        let bad = JordanStructure::new(Spectrum::from_ints(&[1, 2]), vec![Coupling::One]).unwrap();
        let violations = bad.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].position, 0);

        let block3 = JordanStructure::new(
            Spectrum::from_ints(&[3, 3, 3]),
            vec![Coupling::One, Coupling::One],
        )
        .unwrap();
        assert!(block3.validate().is_empty());
    }

    #[test]
    fn superdiagonal_length_is_enforced() {
        assert!(matches!(
            JordanStructure::new(Spectrum::from_ints(&[1, 2]), vec![]),
            Err(SpectrumError::SuperdiagonalLength { expected: 1, got: 0 })
        ));
    }
}
