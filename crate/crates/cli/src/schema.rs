//! JSON system definitions: the on-disk format, validation into a
//! [`NormalFormSystem`] with field-path error messages, and rendering back.

use nflin_core::algebra::{parse_rational, GaussianRational, Multiindex, Polynomial, SymbolTable};
use nflin_core::normal_form::{NormalFormError, NormalFormSystem};
use nflin_core::spectrum::{Coupling, JordanStructure, Spectrum};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Complex scalar as a pair of rational strings, e.g. `{"re":"1","im":"0"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexString {
    pub re: String,
    pub im: String,
}

impl ComplexString {
    pub fn of(value: &GaussianRational) -> Self {
        Self {
            re: value.re().to_string(),
            im: value.im().to_string(),
        }
    }

    fn parse(&self, path: &str) -> Result<GaussianRational, CliError> {
        let re = parse_rational(&self.re)
            .map_err(|e| CliError::schema(format!("{path}.re: {e}")))?;
        let im = parse_rational(&self.im)
            .map_err(|e| CliError::schema(format!("{path}.im: {e}")))?;
        Ok(GaussianRational::new(re, im))
    }
}

/// Superdiagonal entry: the flags `0`/`1`, or the name of a declared
/// parameter for a symbolic coupling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuperdiagonalEntry {
    Flag(u8),
    Symbol(String),
}

/// Nonlinear coefficient value: a declared parameter name or an explicit
/// complex rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientValue {
    Symbol(String),
    Constant(ComplexString),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientDefinition {
    pub mu: Vec<u32>,
    /// 1-based target coordinate index.
    pub alpha: usize,
    pub c: CoefficientValue,
}

/// The on-disk description of a system in (semi)normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDefinition {
    pub eigenvalues: Vec<ComplexString>,
    pub superdiagonal: Vec<SuperdiagonalEntry>,
    pub coefficients: Vec<CoefficientDefinition>,
    #[serde(default)]
    pub parameters: Vec<String>,
}

impl SystemDefinition {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::schema(format!("invalid JSON: {e}")))
    }

    /// Validates into a system; resonance of every coefficient is checked on
    /// load and reported with the offending monomial and target.
    pub fn to_system(&self) -> Result<NormalFormSystem, CliError> {
        if self.eigenvalues.is_empty() {
            return Err(CliError::schema("eigenvalues: must not be empty".into()));
        }
        let eigenvalues = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, v)| v.parse(&format!("eigenvalues[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let spectrum = Spectrum::new(eigenvalues)
            .map_err(|e| CliError::schema(format!("eigenvalues: {e}")))?;

        let superdiagonal = self
            .superdiagonal
            .iter()
            .enumerate()
            .map(|(k, entry)| match entry {
                SuperdiagonalEntry::Flag(0) => Ok(Coupling::Zero),
                SuperdiagonalEntry::Flag(1) => Ok(Coupling::One),
                SuperdiagonalEntry::Flag(other) => Err(CliError::schema(format!(
                    "superdiagonal[{k}]: must be 0, 1, or a parameter name, got {other}"
                ))),
                SuperdiagonalEntry::Symbol(name) => {
                    if self.parameters.contains(name) {
                        Ok(Coupling::Symbol(name.clone()))
                    } else {
                        Err(CliError::schema(format!(
                            "superdiagonal[{k}]: `{name}` is not a declared parameter"
                        )))
                    }
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let jordan = JordanStructure::new(spectrum, superdiagonal)
            .map_err(|e| CliError::schema(format!("superdiagonal: {e}")))?;

        let params = SymbolTable::new(self.parameters.clone())
            .map_err(|e| CliError::schema(format!("parameters: {e}")))?;

        let n = jordan.dimension();
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, def)| {
                let path = format!("coefficients[{k}]");
                if def.alpha == 0 || def.alpha > n {
                    return Err(CliError::schema(format!(
                        "{path}.alpha: must be in 1..={n}, got {}",
                        def.alpha
                    )));
                }
                let value = match &def.c {
                    CoefficientValue::Symbol(name) => Polynomial::symbol_named(&params, name)
                        .ok_or_else(|| {
                            CliError::schema(format!(
                                "{path}.c: `{name}` is not a declared parameter"
                            ))
                        })?,
                    CoefficientValue::Constant(c) => {
                        Polynomial::constant(&params, c.parse(&format!("{path}.c"))?)
                    }
                };
                Ok((Multiindex::new(def.mu.clone()), def.alpha - 1, value))
            })
            .collect::<Result<Vec<_>, _>>()?;

        NormalFormSystem::new(jordan, params, coefficients).map_err(|e| match e {
            NormalFormError::NonResonantCoefficient { mu, alpha } => CliError::schema(format!(
                "coefficients: monomial {mu} -> e{} is not resonant with the spectrum",
                alpha + 1
            )),
            other => CliError::schema(other.to_string()),
        })
    }

    /// Inverse of [`to_system`](Self::to_system) for systems whose
    /// coefficient values are single parameters or constants (everything the
    /// schema can express).
    pub fn from_system(system: &NormalFormSystem) -> Result<Self, CliError> {
        let jordan = system.jordan();
        let eigenvalues = jordan
            .spectrum()
            .eigenvalues()
            .iter()
            .map(ComplexString::of)
            .collect();
        let superdiagonal = jordan
            .superdiagonal()
            .iter()
            .map(|c| match c {
                Coupling::Zero => SuperdiagonalEntry::Flag(0),
                Coupling::One => SuperdiagonalEntry::Flag(1),
                Coupling::Symbol(name) => SuperdiagonalEntry::Symbol(name.clone()),
            })
            .collect();
        let coefficients = system
            .coefficients()
            .iter()
            .map(|c| {
                let value = if let Some(constant) = c.value.as_constant() {
                    CoefficientValue::Constant(ComplexString::of(&constant))
                } else if let Some(name) = single_symbol(&c.value) {
                    CoefficientValue::Symbol(name)
                } else {
                    return Err(CliError::schema(format!(
                        "coefficient {} -> e{}: value `{}` is not expressible in the file \
                         format (single parameter or constant)",
                        c.mu,
                        c.alpha + 1,
                        c.value
                    )));
                };
                Ok(CoefficientDefinition {
                    mu: c.mu.exponents().to_vec(),
                    alpha: c.alpha + 1,
                    c: value,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            eigenvalues,
            superdiagonal,
            coefficients,
            parameters: system.params().names().to_vec(),
        })
    }
}

fn single_symbol(value: &Polynomial) -> Option<String> {
    if value.term_count() != 1 {
        return None;
    }
    let (mu, coeff) = value.terms().next().unwrap();
    if !coeff.is_one() || mu.degree() != 1 {
        return None;
    }
    let slot = mu.exponents().iter().position(|&e| e == 1).unwrap();
    Some(value.table().name(slot).to_string())
}
