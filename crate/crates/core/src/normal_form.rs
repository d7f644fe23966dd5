//! The nonlinear system `x' = Ax + F(x)` with resonant nonlinearity: its
//! associated vector fields, exact Lie brackets, and the seminormal / full
//! normal-form commutation tests.

use std::fmt;

use thiserror::Error;

use crate::algebra::{GaussianRational, Multiindex, Polynomial, SymbolTable};
use crate::resonance::is_resonant;
use crate::spectrum::{Coupling, JordanStructure, JordanViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("Jordan structure invalid: {0:?}")]
    JordanInvalid(Vec<JordanViolation>),
    #[error("coupling symbol `{0}` is not a declared parameter")]
    UnknownCouplingSymbol(String),
    #[error("parameter `{0}` collides with a phase-coordinate name")]
    ReservedParameterName(String),
    #[error("coefficient multiindex {mu} has length {got}, expected {expected}")]
    MultiindexLength {
        mu: Multiindex,
        got: usize,
        expected: usize,
    },
    #[error("coefficient target index {alpha} out of range for dimension {dimension}")]
    AlphaOutOfRange { alpha: usize, dimension: usize },
    #[error("coefficient monomial {mu} has degree {degree} < 2")]
    DegreeTooLow { mu: Multiindex, degree: u32 },
    #[error("coefficient value must live over the parameter table")]
    CoefficientTableMismatch,
    #[error("duplicate coefficient for monomial {mu} -> e{}", alpha + 1)]
    DuplicateCoefficient { mu: Multiindex, alpha: usize },
    #[error("monomial {mu} -> e{} is not resonant with the spectrum", alpha + 1)]
    NonResonantCoefficient { mu: Multiindex, alpha: usize },
}

/// Polynomial vector field `V = V^i(x) d/dx_i` on `dim` phase coordinates.
///
/// Components live over a table whose first `dim` symbols are the phase
/// coordinates; trailing symbols are parameters, which differentiation
/// treats as constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialVectorField {
    dim: usize,
    components: Vec<Polynomial>,
}

impl PolynomialVectorField {
    pub fn new(dim: usize, components: Vec<Polynomial>) -> Self {
        assert_eq!(components.len(), dim, "one component per phase coordinate");
        assert!(
            components.iter().all(|c| c.table().len() >= dim),
            "component table must declare the phase coordinates"
        );
        Self { dim, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn table(&self) -> &SymbolTable {
        self.components[0].table()
    }

    pub fn component(&self, index: usize) -> &Polynomial {
        &self.components[index]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::new(
            self.dim,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn negated(&self) -> Self {
        Self::new(self.dim, self.components.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for PolynomialVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Exact Lie bracket `[V, W]^i = V^j d_j W^i - W^j d_j V^i`, differentiating
/// with respect to the phase coordinates only.
pub fn lie_bracket(v: &PolynomialVectorField, w: &PolynomialVectorField) -> PolynomialVectorField {
    assert_eq!(v.dim, w.dim, "vector fields of different dimension");
    assert!(v.table() == w.table(), "vector fields over different tables");
    let dim = v.dim;
    let mut components = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut acc = Polynomial::zero(v.table());
        for j in 0..dim {
            acc = &acc + &(v.component(j) * &w.component(i).partial_derivative(j));
            acc = &acc - &(w.component(j) * &v.component(i).partial_derivative(j));
        }
        components.push(acc);
    }
    PolynomialVectorField::new(dim, components)
}

/// One nonlinear term `c * x^mu e_alpha` with the scalar `c` a polynomial in
/// the parameter symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficient {
    pub mu: Multiindex,
    pub alpha: usize,
    pub value: Polynomial,
}

/// A system `x' = Ax + F(x)` with `A` in Jordan form and
/// `F = sum c_i x^(mu_i) e_(alpha_i)`.
///
/// [`NormalFormSystem::new`] validates that every coefficient monomial is
/// resonant with the semisimple part of `A`, so constructed systems are in
/// seminormal form by definition; [`NormalFormSystem::new_unchecked`] skips
/// that check and exists so the commutation tests can be exercised against
/// systems that violate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormSystem {
    jordan: JordanStructure,
    params: SymbolTable,
    coefficients: Vec<Coefficient>,
}

impl NormalFormSystem {
    pub fn new(
        jordan: JordanStructure,
        params: SymbolTable,
        coefficients: Vec<(Multiindex, usize, Polynomial)>,
    ) -> Result<Self, NormalFormError> {
        let system = Self::new_unchecked(jordan, params, coefficients)?;
        for c in &system.coefficients {
            if !is_resonant(&c.mu, c.alpha, system.jordan.spectrum()) {
                return Err(NormalFormError::NonResonantCoefficient {
                    mu: c.mu.clone(),
                    alpha: c.alpha,
                });
            }
        }
        Ok(system)
    }

    /// Builds without the per-monomial resonance check. Shape requirements
    /// (dimensions, degrees, parameter names) are still enforced.
    pub fn new_unchecked(
        jordan: JordanStructure,
        params: SymbolTable,
        coefficients: Vec<(Multiindex, usize, Polynomial)>,
    ) -> Result<Self, NormalFormError> {
        let violations = jordan.validate();
        if !violations.is_empty() {
            return Err(NormalFormError::JordanInvalid(violations));
        }
        let n = jordan.dimension();
        for name in params.names() {
            if phase_names(n).contains(name) {
                return Err(NormalFormError::ReservedParameterName(name.clone()));
            }
        }
        for coupling in jordan.superdiagonal() {
            if let Coupling::Symbol(name) = coupling {
                if params.index_of(name).is_none() {
                    return Err(NormalFormError::UnknownCouplingSymbol(name.clone()));
                }
            }
        }
        let mut seen: Vec<(Multiindex, usize)> = Vec::new();
        let mut list = Vec::with_capacity(coefficients.len());
        for (mu, alpha, value) in coefficients {
            if mu.len() != n {
                return Err(NormalFormError::MultiindexLength {
                    got: mu.len(),
                    expected: n,
                    mu,
                });
            }
            if alpha >= n {
                return Err(NormalFormError::AlphaOutOfRange {
                    alpha,
                    dimension: n,
                });
            }
            if mu.degree() < 2 {
                return Err(NormalFormError::DegreeTooLow {
                    degree: mu.degree(),
                    mu,
                });
            }
            if value.table() != &params {
                return Err(NormalFormError::CoefficientTableMismatch);
            }
            if seen.contains(&(mu.clone(), alpha)) {
                return Err(NormalFormError::DuplicateCoefficient { mu, alpha });
            }
            seen.push((mu.clone(), alpha));
            list.push(Coefficient { mu, alpha, value });
        }
        Ok(Self {
            jordan,
            params,
            coefficients: list,
        })
    }

    pub fn jordan(&self) -> &JordanStructure {
        &self.jordan
    }

    pub fn dimension(&self) -> usize {
        self.jordan.dimension()
    }

    pub fn params(&self) -> &SymbolTable {
        &self.params
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coefficients
    }

    /// Symbol table `x1..xn` followed by the parameters; the common table of
    /// all vector fields of this system.
    pub fn phase_table(&self) -> SymbolTable {
        SymbolTable::with_parameters(phase_names(self.dimension()), self.params.names().to_vec())
            .expect("phase/parameter names are distinct")
    }

    /// Embeds a parameter-table polynomial into the phase table.
    pub fn param_to_phase(&self, value: &Polynomial) -> Polynomial {
        let phase = self.phase_table();
        let n = self.dimension();
        let slot_map: Vec<usize> = (0..self.params.len()).map(|k| n + k).collect();
        value.embedded(&phase, &slot_map)
    }

    fn coupling_poly(&self, table: &SymbolTable, position: usize) -> Polynomial {
        match self.jordan.coupling(position) {
            Coupling::Zero => Polynomial::zero(table),
            Coupling::One => Polynomial::one(table),
            Coupling::Symbol(name) => {
                Polynomial::symbol_named(table, name).expect("validated coupling symbol")
            }
        }
    }

    /// `X_0 = (A_s x)^i d_i`, from the semisimple part.
    pub fn field_semisimple(&self) -> PolynomialVectorField {
        let table = self.phase_table();
        let n = self.dimension();
        let components = (0..n)
            .map(|i| {
                Polynomial::symbol(&table, i)
                    .scaled(self.jordan.spectrum().eigenvalue(i))
            })
            .collect();
        PolynomialVectorField::new(n, components)
    }

    /// `X_A = (A x)^i d_i`, from the full linear part.
    pub fn field_linear(&self) -> PolynomialVectorField {
        let table = self.phase_table();
        let n = self.dimension();
        let components = (0..n)
            .map(|i| {
                let mut c = Polynomial::symbol(&table, i)
                    .scaled(self.jordan.spectrum().eigenvalue(i));
                if i + 1 < n {
                    let eta = self.coupling_poly(&table, i);
                    c = &c + &(&eta * &Polynomial::symbol(&table, i + 1));
                }
                c
            })
            .collect();
        PolynomialVectorField::new(n, components)
    }

    /// `X_l = (A^+ x)^i d_i` from the conjugate transpose of `A` (the plain
    /// transpose when `A` is real; parameters count as real).
    pub fn field_adjoint(&self) -> PolynomialVectorField {
        let table = self.phase_table();
        let n = self.dimension();
        let components = (0..n)
            .map(|i| {
                let mut c = Polynomial::symbol(&table, i)
                    .scaled(&self.jordan.spectrum().eigenvalue(i).conj());
                if i > 0 {
                    let eta = self.coupling_poly(&table, i - 1).conjugate();
                    c = &c + &(&eta * &Polynomial::symbol(&table, i - 1));
                }
                c
            })
            .collect();
        PolynomialVectorField::new(n, components)
    }

    /// `X_F`, the nonlinear part.
    pub fn field_nonlinear(&self) -> PolynomialVectorField {
        let table = self.phase_table();
        let n = self.dimension();
        let mut components = vec![Polynomial::zero(&table); n];
        for c in &self.coefficients {
            let phase_mu = c.mu.embedded(table.len(), &(0..n).collect::<Vec<_>>());
            let mono = Polynomial::monomial(&table, phase_mu, GaussianRational::one());
            components[c.alpha] = &components[c.alpha] + &(&self.param_to_phase(&c.value) * &mono);
        }
        PolynomialVectorField::new(n, components)
    }

    /// `X_f = X_A + X_F`, the whole right-hand side as a vector field.
    pub fn field_full(&self) -> PolynomialVectorField {
        self.field_linear().add(&self.field_nonlinear())
    }

    /// Right-hand side components of `x' = Ax + F(x)` as exact polynomials,
    /// symbolic in the parameters.
    pub fn rhs(&self) -> PolynomialVectorField {
        self.field_full()
    }

    /// Seminormal test via the bracket: `[X_0, X_f] = 0` exactly.
    pub fn check_seminormal(&self) -> bool {
        lie_bracket(&self.field_semisimple(), &self.field_full()).is_zero()
    }

    /// Seminormal test via the resonance relation: every coefficient
    /// monomial with a nonzero scalar satisfies it. Agrees with
    /// [`check_seminormal`](Self::check_seminormal) on every system.
    pub fn seminormal_by_resonance(&self) -> bool {
        self.coefficients
            .iter()
            .filter(|c| !c.value.is_zero())
            .all(|c| is_resonant(&c.mu, c.alpha, self.jordan.spectrum()))
    }

    /// Residual of the full normal-form condition: `[X_l, X_F]`. The system
    /// is in Poincaré–Dulac normal form iff this vanishes identically in the
    /// parameters.
    pub fn full_normal_form_residual(&self) -> PolynomialVectorField {
        lie_bracket(&self.field_adjoint(), &self.field_nonlinear())
    }

    /// Full normal-form test: `[X_l, X_F] = 0` exactly, identically in all
    /// parameters.
    pub fn check_full_normal_form(&self) -> bool {
        self.full_normal_form_residual().is_zero()
    }

    /// Same structure with every parameter specialised to an exact value
    /// (handy for turning a symbolic family into one concrete member).
    pub fn bind_parameters(&self, values: &[GaussianRational]) -> NormalFormSystem {
        assert_eq!(values.len(), self.params.len());
        let empty = SymbolTable::new(Vec::<String>::new()).expect("empty table");
        let coefficients = self
            .coefficients
            .iter()
            .map(|c| {
                (
                    c.mu.clone(),
                    c.alpha,
                    Polynomial::constant(&empty, c.value.eval_gaussian(values)),
                )
            })
            .collect();
        // Couplings stay structural; symbolic couplings are not rebound here.
        NormalFormSystem::new_unchecked(self.jordan.clone(), empty, coefficients)
            .expect("shape-preserving rebinding")
    }
}

pub(crate) fn phase_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}
