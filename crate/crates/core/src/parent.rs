//! Construction of the parent linear system `xi' = B xi` on the extended
//! space spanned by the phase coordinates and one coordinate `w_i` per
//! resonant monomial, together with the invariant constraint manifold
//! `w_i = x^mu(i)`, structural verification, and truncation analysis.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{GaussianRational, Multiindex, Polynomial, SymbolTable};
use crate::normal_form::{lie_bracket, phase_names, NormalFormSystem, PolynomialVectorField};
use crate::resonance::{
    enumerate_resonances, is_resonant, resonance_intervals, ResonanceTable, ResonantMonomial,
};
use crate::spectrum::{check_poincare, JordanStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParentError {
    #[error("generated monomial {witness} lies outside the kept basis")]
    NotClosed { witness: Multiindex },
    #[error("resonance table was enumerated for a different spectrum")]
    SpectrumMismatch,
    #[error("system is not in seminormal form")]
    NotSeminormal,
}

/// Structural property violated by a parent matrix. These indicate an
/// implementation bug: the construction guarantees all of them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureViolation {
    #[error("w-row {row} has a nonzero entry in x-column {col}")]
    LowerLeftNotZero { row: usize, col: usize },
    #[error("w-block entry ({row},{col}) couples different resonance targets")]
    AlphaBlockMixed { row: usize, col: usize },
    #[error("diagonal entry {index} is not a constant scalar")]
    NonConstantDiagonal { index: usize },
    #[error("diagonal eigenvalues disagree with the spectrum union")]
    EigenvalueMismatch,
    #[error("no variable order makes the matrix upper triangular")]
    NoTriangularOrder,
}

/// The parent linear system: matrix `B` over the coordinates
/// `x1..xn, w1..wr`, entries constant in the phase symbols but possibly
/// symbolic in the parameters, plus the constraint polynomials
/// `E_i = w_i - x^mu(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentSystem {
    jordan: JordanStructure,
    params: SymbolTable,
    basis: Vec<ResonantMonomial>,
    matrix: Vec<Vec<Polynomial>>,
    labels: Vec<String>,
}

impl ParentSystem {
    /// Phase dimension `n`.
    pub fn n(&self) -> usize {
        self.jordan.dimension()
    }

    /// Number of adjoined coordinates `r`.
    pub fn r(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.n() + self.r()
    }

    pub fn jordan(&self) -> &JordanStructure {
        &self.jordan
    }

    pub fn params(&self) -> &SymbolTable {
        &self.params
    }

    /// Resonant monomials backing the `w` coordinates, in basis order.
    pub fn basis(&self) -> &[ResonantMonomial] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    /// Matrix entry as a polynomial over the parameter table.
    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.matrix[row][col]
    }

    pub fn matrix(&self) -> &[Vec<Polynomial>] {
        &self.matrix
    }

    /// Diagonal entry as a scalar; by construction every diagonal entry is
    /// an eigenvalue.
    pub fn diagonal(&self, index: usize) -> GaussianRational {
        self.matrix[index][index]
            .as_constant()
            .expect("parent diagonal entries are scalars")
    }

    /// Eigenvalues of `B` in coordinate order: the spectrum followed by the
    /// target eigenvalue of every basis monomial.
    pub fn expected_eigenvalues(&self) -> Vec<GaussianRational> {
        let spectrum = self.jordan.spectrum();
        let mut out: Vec<GaussianRational> = spectrum.eigenvalues().to_vec();
        out.extend(
            self.basis
                .iter()
                .map(|b| spectrum.eigenvalue(b.alpha).clone()),
        );
        out
    }

    /// Symbol table `x1..xn, w1..wr` followed by the parameters; constraints
    /// and constraint derivatives live here.
    pub fn state_table(&self) -> SymbolTable {
        let mut names = phase_names(self.n());
        names.extend((1..=self.r()).map(|k| format!("w{k}")));
        SymbolTable::with_parameters(names, self.params.names().to_vec())
            .expect("state and parameter names are distinct")
    }

    fn param_to_state(&self, table: &SymbolTable, value: &Polynomial) -> Polynomial {
        let offset = self.dim();
        let slot_map: Vec<usize> = (0..self.params.len()).map(|k| offset + k).collect();
        value.embedded(table, &slot_map)
    }

    /// The constraint polynomials `E_i = w_i - x^mu(i)` over the state
    /// table; their common zero set is the invariant manifold.
    pub fn constraints(&self) -> Vec<Polynomial> {
        let table = self.state_table();
        let n = self.n();
        self.basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let w = Polynomial::symbol(&table, n + i);
                let mono = Polynomial::monomial(
                    &table,
                    b.mu.embedded(table.len(), &(0..n).collect::<Vec<_>>()),
                    GaussianRational::one(),
                );
                &w - &mono
            })
            .collect()
    }

    /// Components of `B xi` as polynomials over the state table.
    fn flow_components(&self) -> Vec<Polynomial> {
        let table = self.state_table();
        let dim = self.dim();
        (0..dim)
            .map(|row| {
                let mut acc = Polynomial::zero(&table);
                for col in 0..dim {
                    let entry = &self.matrix[row][col];
                    if entry.is_zero() {
                        continue;
                    }
                    let coeff = self.param_to_state(&table, entry);
                    acc = &acc + &(&coeff * &Polynomial::symbol(&table, col));
                }
                acc
            })
            .collect()
    }

    /// Checks that every constraint is a first integral of the flow on the
    /// manifold: `dE_i/dt = grad E_i . (B xi)` reduces to the zero
    /// polynomial after substituting `w_j -> x^mu(j)`. Exact, identically in
    /// all parameters.
    pub fn verify_constraint_invariance(&self) -> bool {
        let table = self.state_table();
        let n = self.n();
        let flow = self.flow_components();
        let on_manifold: BTreeMap<usize, Polynomial> = self
            .basis
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let mono = Polynomial::monomial(
                    &table,
                    b.mu.embedded(table.len(), &(0..n).collect::<Vec<_>>()),
                    GaussianRational::one(),
                );
                (n + j, mono)
            })
            .collect();
        self.constraints().iter().all(|constraint| {
            let mut derivative = Polynomial::zero(&table);
            for slot in 0..self.dim() {
                let partial = constraint.partial_derivative(slot);
                if !partial.is_zero() {
                    derivative = &derivative + &(&partial * &flow[slot]);
                }
            }
            derivative.substitute(&on_manifold).is_zero()
        })
    }

    /// Verifies the structural theorems of the construction and reports the
    /// data they certify; any violation signals an implementation bug.
    ///
    /// Checked: (a) `w`-rows do not reference `x`-columns; (b) the `w`-block
    /// splits across resonance targets; (c) every diagonal entry is a scalar
    /// and the diagonal multiset equals the spectrum joined with the basis
    /// target eigenvalues; (d) a strict upper-triangular variable order
    /// exists.
    pub fn structure_report(&self) -> Result<StructureReport, StructureViolation> {
        let n = self.n();
        let dim = self.dim();
        for row in n..dim {
            for col in 0..n {
                if !self.matrix[row][col].is_zero() {
                    return Err(StructureViolation::LowerLeftNotZero { row, col });
                }
            }
        }
        for i in 0..self.r() {
            for j in 0..self.r() {
                if i != j
                    && !self.matrix[n + i][n + j].is_zero()
                    && self.basis[i].alpha != self.basis[j].alpha
                {
                    return Err(StructureViolation::AlphaBlockMixed {
                        row: n + i,
                        col: n + j,
                    });
                }
            }
        }
        let mut diagonal = Vec::with_capacity(dim);
        for index in 0..dim {
            match self.matrix[index][index].as_constant() {
                Some(value) => diagonal.push(value),
                None => return Err(StructureViolation::NonConstantDiagonal { index }),
            }
        }
        let mut sorted = diagonal.clone();
        sorted.sort();
        let mut expected = self.expected_eigenvalues();
        expected.sort();
        if sorted != expected {
            return Err(StructureViolation::EigenvalueMismatch);
        }
        let order =
            triangular_order_of(&self.matrix).ok_or(StructureViolation::NoTriangularOrder)?;
        debug_assert!(is_upper_triangular_under(&self.matrix, &order));
        let mut alpha_block_sizes = BTreeMap::new();
        for b in &self.basis {
            *alpha_block_sizes.entry(b.alpha).or_insert(0usize) += 1;
        }
        Ok(StructureReport {
            eigenvalues: diagonal,
            triangular_order: order,
            alpha_block_sizes,
        })
    }

    /// The same system with `B` negated (time reversal).
    pub fn negated(&self) -> ParentSystem {
        ParentSystem {
            jordan: self.jordan.clone(),
            params: self.params.clone(),
            basis: self.basis.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|e| -e).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

impl fmt::Display for ParentSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, label) in self.labels.iter().enumerate() {
            let mut terms = Vec::new();
            for col in 0..self.dim() {
                let entry = &self.matrix[row][col];
                if entry.is_zero() {
                    continue;
                }
                let rendered = if entry.as_constant().is_some_and(|c| c.is_one()) {
                    self.labels[col].clone()
                } else if entry.term_count() > 1 {
                    format!("({})*{}", entry, self.labels[col])
                } else {
                    format!("{}*{}", entry, self.labels[col])
                };
                terms.push(rendered);
            }
            let rhs = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            };
            writeln!(f, "{label}' = {rhs}")?;
        }
        Ok(())
    }
}

/// Verified structural data of a parent matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// Diagonal of `B` in coordinate order; equals the spectrum followed by
    /// the basis target eigenvalues.
    pub eigenvalues: Vec<GaussianRational>,
    /// Coordinate permutation under which `B` is upper triangular.
    pub triangular_order: Vec<usize>,
    /// Size of the `w`-block attached to each resonance target.
    pub alpha_block_sizes: BTreeMap<usize, usize>,
}

/// Closure analysis of a truncated system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationReport {
    /// Truncation order `N`.
    pub order: u32,
    /// Whether the degree-capped basis closed under the flow.
    pub closed: bool,
    /// A generated monomial outside the kept basis, when not closed.
    pub witness: Option<Multiindex>,
    pub kept_basis_size: usize,
    /// `n + kept_basis_size`.
    pub dimension: usize,
    /// Advisory degree-interval exclusion test per resonance target.
    pub interval_check: Vec<IntervalCheck>,
    /// Degree horizon the intervals were computed to, when the full
    /// resonance set could not be enumerated (non-Poincaré spectra).
    pub interval_horizon: Option<u32>,
}

/// Result of the interval exclusion test for one target: the truncation
/// order avoids `[m_minus, m_plus]`. A failed test does not imply a failed
/// closure ([`closure_analysis`] decides constructively), which is why this
/// is advisory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalCheck {
    pub alpha: usize,
    pub m_minus: u32,
    pub m_plus: u32,
    pub outside: bool,
}

/// Builds the parent system of a seminormal system over the monomial basis
/// of a resonance table.
///
/// Each `w = x^mu` with target `alpha` evolves by
/// `w' = lambda_alpha w + sum_i mu_i eta_(i,i+1) x^(mu - nu(i) + nu(i+1))
///  + sum_sigma c_sigma mu_beta x^(mu - nu(beta) + sigma)`,
/// and every generated monomial is re-expressed in the `w` basis, which
/// makes the right-hand side exactly linear in `(x, w)`. A generated
/// monomial outside the basis is reported as [`ParentError::NotClosed`];
/// for complete tables this cannot happen.
pub fn build_parent(
    nf: &NormalFormSystem,
    table: &ResonanceTable,
) -> Result<ParentSystem, ParentError> {
    match assemble(nf, table, true) {
        Ok((parent, _)) => Ok(parent),
        Err(e) => Err(e),
    }
}

/// Like [`build_parent`], but drops generated monomials that fall outside
/// the kept basis instead of failing, returning the dropped monomials.
/// The resulting system no longer preserves the constraint manifold when
/// the dropped set is nonempty.
pub fn build_parent_projected(
    nf: &NormalFormSystem,
    table: &ResonanceTable,
) -> Result<(ParentSystem, Vec<Multiindex>), ParentError> {
    assemble(nf, table, false)
}

fn assemble(
    nf: &NormalFormSystem,
    table: &ResonanceTable,
    strict: bool,
) -> Result<(ParentSystem, Vec<Multiindex>), ParentError> {
    if table.spectrum() != nf.jordan().spectrum() {
        return Err(ParentError::SpectrumMismatch);
    }
    if !nf.seminormal_by_resonance() {
        return Err(ParentError::NotSeminormal);
    }

    let n = nf.dimension();
    let r = table.len();
    let dim = n + r;
    let params = nf.params().clone();
    let basis: Vec<ResonantMonomial> = table.entries().to_vec();
    let index_of: BTreeMap<&Multiindex, usize> =
        basis.iter().enumerate().map(|(i, b)| (&b.mu, i)).collect();

    let mut matrix = vec![vec![Polynomial::zero(&params); dim]; dim];
    let mut dropped: Vec<Multiindex> = Vec::new();
    let spectrum = nf.jordan().spectrum();

    let place = |matrix: &mut Vec<Vec<Polynomial>>,
                     dropped: &mut Vec<Multiindex>,
                     row: usize,
                     target: &Multiindex,
                     value: Polynomial|
     -> Result<(), ParentError> {
        match index_of.get(target) {
            Some(&col) => {
                matrix[row][n + col] = &matrix[row][n + col] + &value;
                Ok(())
            }
            None if strict => Err(ParentError::NotClosed {
                witness: target.clone(),
            }),
            None => {
                if !dropped.contains(target) {
                    dropped.push(target.clone());
                }
                Ok(())
            }
        }
    };

    // x-rows: the linear part plus one column per nonlinear coefficient.
    for i in 0..n {
        matrix[i][i] = Polynomial::constant(&params, spectrum.eigenvalue(i).clone());
        if i + 1 < n {
            matrix[i][i + 1] = coupling_polynomial(nf, i);
        }
    }
    for c in nf.coefficients() {
        if c.value.is_zero() {
            continue;
        }
        place(&mut matrix, &mut dropped, c.alpha, &c.mu, c.value.clone())?;
    }

    // w-rows: exact expansion of d(x^mu)/dt along the flow.
    for (wi, b) in basis.iter().enumerate() {
        let row = n + wi;
        matrix[row][row] =
            Polynomial::constant(&params, spectrum.eigenvalue(b.alpha).clone());
        for position in 0..n.saturating_sub(1) {
            let eta = coupling_polynomial(nf, position);
            if eta.is_zero() {
                continue;
            }
            if let Some(shifted) = b.mu.shift(position, position + 1) {
                let factor = GaussianRational::from_int(b.mu.get(position) as i64);
                place(
                    &mut matrix,
                    &mut dropped,
                    row,
                    &shifted,
                    eta.scaled(&factor),
                )?;
            }
        }
        for c in nf.coefficients() {
            if c.value.is_zero() {
                continue;
            }
            if let Some(replaced) = b.mu.replace_factor(c.alpha, &c.mu) {
                let factor = GaussianRational::from_int(b.mu.get(c.alpha) as i64);
                place(
                    &mut matrix,
                    &mut dropped,
                    row,
                    &replaced,
                    c.value.scaled(&factor),
                )?;
            }
        }
    }

    let mut labels = phase_names(n);
    labels.extend((1..=r).map(|k| format!("w{k}")));
    dropped.sort();

    Ok((
        ParentSystem {
            jordan: nf.jordan().clone(),
            params,
            basis,
            matrix,
            labels,
        },
        dropped,
    ))
}

fn coupling_polynomial(nf: &NormalFormSystem, position: usize) -> Polynomial {
    use crate::spectrum::Coupling;
    let params = nf.params();
    match nf.jordan().coupling(position) {
        Coupling::Zero => Polynomial::zero(params),
        Coupling::One => Polynomial::one(params),
        Coupling::Symbol(name) => {
            Polynomial::symbol_named(params, name).expect("validated coupling symbol")
        }
    }
}

/// Drops every coefficient of degree greater than `order`. At `order = 1`
/// the system reduces to its linear part.
pub fn truncate_normal_form(nf: &NormalFormSystem, order: u32) -> NormalFormSystem {
    let coefficients = nf
        .coefficients()
        .iter()
        .filter(|c| c.mu.degree() <= order)
        .map(|c| (c.mu.clone(), c.alpha, c.value.clone()))
        .collect();
    NormalFormSystem::new(nf.jordan().clone(), nf.params().clone(), coefficients)
        .expect("truncation preserves validity")
}

/// Constructive closure analysis of the order-`order` truncation: truncates
/// the system, enumerates the degree-capped basis, and attempts the parent
/// build. The per-target interval exclusion test is reported as an advisory
/// alongside; the constructive outcome is authoritative.
pub fn closure_analysis(nf: &NormalFormSystem, order: u32) -> TruncationReport {
    let truncated = truncate_normal_form(nf, order);
    let capped = enumerate_resonances(nf.jordan(), Some(order))
        .expect("capped enumeration always terminates");
    let kept_basis_size = capped.len();
    let dimension = nf.dimension() + kept_basis_size;
    let (closed, witness) = match build_parent(&truncated, &capped) {
        Ok(_) => (true, None),
        Err(ParentError::NotClosed { witness }) => (false, Some(witness)),
        Err(e) => unreachable!("truncated build can only fail closure: {e}"),
    };

    // Advisory intervals come from the full resonance set when it is finite,
    // otherwise from a larger horizon than the truncation order.
    let poincare = check_poincare(nf.jordan().spectrum()).is_some();
    let horizon = (!poincare).then_some(2 * order + 3);
    let interval_table = enumerate_resonances(nf.jordan(), horizon)
        .expect("bounded enumeration always terminates");
    let interval_check = resonance_intervals(&interval_table)
        .into_iter()
        .map(|(alpha, (m_minus, m_plus))| IntervalCheck {
            alpha,
            m_minus,
            m_plus,
            outside: order < m_minus || order > m_plus,
        })
        .collect();

    TruncationReport {
        order,
        closed,
        witness,
        kept_basis_size,
        dimension,
        interval_check,
        interval_horizon: horizon,
    }
}

/// Checks the invariance of the resonant-field span under the flow: for
/// every basis monomial `x^mu e_alpha`, each term of `[X_f, x^mu d_alpha]`
/// is again a resonant monomial vector (and lies in the basis when the
/// table is complete).
pub fn verify_bracket_closure(nf: &NormalFormSystem, table: &ResonanceTable) -> bool {
    let phase = nf.phase_table();
    let n = nf.dimension();
    let full = nf.field_full();
    let spectrum = nf.jordan().spectrum();
    table.entries().iter().all(|b| {
        let mut components = vec![Polynomial::zero(&phase); n];
        components[b.alpha] = Polynomial::monomial(
            &phase,
            b.mu.embedded(phase.len(), &(0..n).collect::<Vec<_>>()),
            GaussianRational::one(),
        );
        let basis_field = PolynomialVectorField::new(n, components);
        let bracket = lie_bracket(&full, &basis_field);
        (0..n).all(|m| {
            bracket.component(m).terms().all(|(mu_full, _)| {
                let phase_part =
                    Multiindex::new(mu_full.exponents()[..n].to_vec());
                let resonant =
                    phase_part.degree() >= 2 && is_resonant(&phase_part, m, spectrum);
                let in_basis = !table.is_complete()
                    || table
                        .entries()
                        .iter()
                        .any(|e| e.mu == phase_part && e.alpha == m);
                resonant && in_basis
            })
        })
    })
}

/// Finds a coordinate permutation under which the matrix is upper
/// triangular, preferring earlier coordinates; `None` if the dependency
/// graph has a cycle.
pub(crate) fn triangular_order_of(matrix: &[Vec<Polynomial>]) -> Option<Vec<usize>> {
    let dim = matrix.len();
    let mut blockers = vec![0usize; dim];
    for (u, row) in matrix.iter().enumerate() {
        for v in 0..dim {
            if u != v && !row[v].is_zero() {
                blockers[v] += 1;
            }
        }
    }
    let mut placed = vec![false; dim];
    let mut order = Vec::with_capacity(dim);
    for _ in 0..dim {
        let next = (0..dim).find(|&v| !placed[v] && blockers[v] == 0)?;
        placed[next] = true;
        order.push(next);
        for v in 0..dim {
            if v != next && !placed[v] && !matrix[next][v].is_zero() {
                blockers[v] -= 1;
            }
        }
    }
    Some(order)
}

pub(crate) fn is_upper_triangular_under(matrix: &[Vec<Polynomial>], order: &[usize]) -> bool {
    let dim = matrix.len();
    (0..dim).all(|a| (0..a).all(|b| matrix[order[a]][order[b]].is_zero()))
}
