//! Closed-form integration of parent systems: triangular back-substitution
//! by scalar variation of constants, restriction to the constraint
//! manifold, projection to the phase coordinates, and exact symbolic
//! verification of the result.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{GaussianRational, Polynomial, PolyExp, SymbolTable};
use crate::normal_form::PolynomialVectorField;
use crate::parent::{triangular_order_of, ParentSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("no variable order makes the parent matrix upper triangular")]
    NoTriangularOrder,
    #[error("diagonal entry {index} is not a scalar")]
    NonScalarDiagonal { index: usize },
    #[error("solution is already restricted to the manifold")]
    AlreadyRestricted,
    #[error("solution must be restricted before projection")]
    NotRestricted,
    #[error("solution does not belong to this parent system")]
    ShapeMismatch,
}

/// General solution of a parent system: one polynomial-exponential function
/// per coordinate, symbolic in the initial values `x0_1..x0_n, w0_1..w0_r`
/// and the parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormSolution {
    labels: Vec<String>,
    components: Vec<PolyExp>,
    table: SymbolTable,
    phase_dim: usize,
    restricted: bool,
    projected: bool,
}

impl ClosedFormSolution {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn components(&self) -> &[PolyExp] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &PolyExp {
        &self.components[index]
    }

    pub fn component_named(&self, label: &str) -> Option<&PolyExp> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.components[i])
    }

    /// Table of the coefficient symbols: initial values followed by the
    /// parameters. Unchanged by restriction and projection (restricted
    /// solutions simply no longer mention the `w0` symbols).
    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn phase_dim(&self) -> usize {
        self.phase_dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted
    }

    pub fn is_projected(&self) -> bool {
        self.projected
    }
}

/// A coordinate permutation of the parent system under which its matrix is
/// upper triangular with the eigenvalues on the diagonal. Failure signals an
/// implementation bug: the construction guarantees existence.
pub fn triangular_order(ps: &ParentSystem) -> Result<Vec<usize>, SolverError> {
    triangular_order_of(ps.matrix()).ok_or(SolverError::NoTriangularOrder)
}

fn solution_table(ps: &ParentSystem) -> SymbolTable {
    let mut names: Vec<String> = (1..=ps.n()).map(|k| format!("x0_{k}")).collect();
    names.extend((1..=ps.r()).map(|k| format!("w0_{k}")));
    SymbolTable::with_parameters(names, ps.params().names().to_vec())
        .expect("initial-value and parameter names are distinct")
}

/// Exact general solution of `xi' = B xi` by scalar variation of constants
/// along the reverse triangular order. Every component is a
/// polynomial-exponential function satisfying `xi(0) = xi0` symbolically.
pub fn solve_parent(ps: &ParentSystem) -> Result<ClosedFormSolution, SolverError> {
    let order = triangular_order(ps)?;
    let table = solution_table(ps);
    let dim = ps.dim();
    let param_offset = dim;
    let param_map: Vec<usize> = (0..ps.params().len()).map(|k| param_offset + k).collect();

    let mut components: Vec<Option<PolyExp>> = vec![None; dim];
    for &coord in order.iter().rev() {
        let lambda = ps
            .entry(coord, coord)
            .as_constant()
            .ok_or(SolverError::NonScalarDiagonal { index: coord })?;
        let mut forcing = PolyExp::zero(&table);
        for col in 0..dim {
            if col == coord || ps.entry(coord, col).is_zero() {
                continue;
            }
            let weight = ps.entry(coord, col).embedded(&table, &param_map);
            let source = components[col]
                .as_ref()
                .expect("triangular order solves dependencies first");
            forcing = &forcing + &source.scaled(&weight);
        }
        let initial = Polynomial::symbol(&table, coord);
        components[coord] = Some(PolyExp::solve_scalar(&lambda, &initial, &forcing));
    }

    Ok(ClosedFormSolution {
        labels: ps.labels().to_vec(),
        components: components.into_iter().map(Option::unwrap).collect(),
        table,
        phase_dim: ps.n(),
        restricted: false,
        projected: false,
    })
}

/// Restricts a general solution to the constraint manifold by substituting
/// `w0_i -> x0^mu(i)` everywhere, leaving a solution that depends on the `n`
/// phase initial values only.
pub fn restrict(
    sol: &ClosedFormSolution,
    ps: &ParentSystem,
) -> Result<ClosedFormSolution, SolverError> {
    if sol.restricted {
        return Err(SolverError::AlreadyRestricted);
    }
    if sol.components.len() != ps.dim()
        || sol.phase_dim != ps.n()
        || sol.table != solution_table(ps)
    {
        return Err(SolverError::ShapeMismatch);
    }
    let n = ps.n();
    let phase_map: Vec<usize> = (0..n).collect();
    let bindings: BTreeMap<usize, Polynomial> = ps
        .basis()
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let mono = Polynomial::monomial(
                &sol.table,
                b.mu.embedded(sol.table.len(), &phase_map),
                GaussianRational::one(),
            );
            (n + k, mono)
        })
        .collect();
    Ok(ClosedFormSolution {
        labels: sol.labels.clone(),
        components: sol
            .components
            .iter()
            .map(|c| c.substitute(&bindings))
            .collect(),
        table: sol.table.clone(),
        phase_dim: sol.phase_dim,
        restricted: true,
        projected: sol.projected,
    })
}

/// Keeps only the phase components of a restricted solution.
pub fn project(sol: &ClosedFormSolution) -> Result<ClosedFormSolution, SolverError> {
    if !sol.restricted {
        return Err(SolverError::NotRestricted);
    }
    let n = sol.phase_dim;
    Ok(ClosedFormSolution {
        labels: sol.labels[..n].to_vec(),
        components: sol.components[..n].to_vec(),
        table: sol.table.clone(),
        phase_dim: n,
        restricted: true,
        projected: true,
    })
}

/// Evaluates a polynomial with one polynomial-exponential value per symbol.
fn eval_polynomial_in_polyexp(p: &Polynomial, assignment: &[PolyExp]) -> PolyExp {
    assert_eq!(assignment.len(), p.table().len());
    let table = assignment
        .first()
        .map(|f| f.table().clone())
        .expect("nonempty assignment");
    let mut acc = PolyExp::zero(&table);
    for (mu, coeff) in p.terms() {
        let mut term = PolyExp::from_polynomial(Polynomial::constant(&table, coeff.clone()));
        for (slot, &e) in mu.exponents().iter().enumerate() {
            for _ in 0..e {
                term = &term * &assignment[slot];
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// Checks, as an exact identity of polynomial-exponential functions in
/// `(t, x0, parameters)`, that a projected solution satisfies
/// `x' = rhs(x)`: each component derivative equals the right-hand side with
/// the solution substituted for the phase coordinates.
pub fn verify_solution_symbolic(
    sol: &ClosedFormSolution,
    rhs: &PolynomialVectorField,
) -> bool {
    assert!(
        sol.projected,
        "verify_solution_symbolic expects a projected solution"
    );
    assert_eq!(sol.components.len(), rhs.dim(), "dimension mismatch");
    let rhs_table = rhs.table();
    // Assignment for every rhs symbol: phase coordinates map to solution
    // components, parameters map to themselves as symbols of the solution
    // table.
    let assignment: Vec<PolyExp> = (0..rhs_table.len())
        .map(|slot| {
            if slot < rhs.dim() {
                sol.components[slot].clone()
            } else {
                let name = rhs_table.name(slot);
                let sol_slot = sol
                    .table
                    .index_of(name)
                    .expect("rhs parameter missing from solution table");
                PolyExp::from_polynomial(Polynomial::symbol(&sol.table, sol_slot))
            }
        })
        .collect();
    (0..rhs.dim()).all(|i| {
        let lhs = sol.components[i].derivative();
        let expected = eval_polynomial_in_polyexp(rhs.component(i), &assignment);
        (&lhs - &expected).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Multiindex;
    use crate::normal_form::NormalFormSystem;
    use crate::parent::build_parent;
    use crate::resonance::enumerate_resonances;
    use crate::spectrum::{JordanStructure, Spectrum};

    fn mi(e: &[u32]) -> Multiindex {
        Multiindex::new(e.to_vec())
    }

    fn single_resonance() -> (NormalFormSystem, ParentSystem) {
        let p = SymbolTable::new(["c1"]).unwrap();
        let nf = NormalFormSystem::new(
            JordanStructure::diagonal(Spectrum::from_ints(&[1, 2])),
            p.clone(),
            vec![(mi(&[2, 0]), 1, Polynomial::symbol(&p, 0))],
        )
        .unwrap();
        let table = enumerate_resonances(nf.jordan(), None).unwrap();
        let ps = build_parent(&nf, &table).unwrap();
        (nf, ps)
    }

    #[test]
    fn general_solution_solves_the_matrix_equation() {
        let (_, ps) = single_resonance();
        let sol = solve_parent(&ps).unwrap();
        assert_eq!(
            sol.component_named("x1").unwrap().to_string(),
            "x0_1*exp(t)"
        );
        assert_eq!(
            sol.component_named("x2").unwrap().to_string(),
            "(x0_2 + c1*w0_1*t)*exp(2*t)"
        );
        assert_eq!(
            sol.component_named("w1").unwrap().to_string(),
            "w0_1*exp(2*t)"
        );
        // xi(0) = xi0 and xi' = B xi, exactly.
        let table = sol.table();
        let param_map: Vec<usize> = (0..1).map(|k| ps.dim() + k).collect();
        for (i, c) in sol.components().iter().enumerate() {
            assert_eq!(c.eval_at_zero(), Polynomial::symbol(table, i));
            let mut rhs = PolyExp::zero(table);
            for j in 0..ps.dim() {
                if !ps.entry(i, j).is_zero() {
                    let w = ps.entry(i, j).embedded(table, &param_map);
                    rhs = &rhs + &sol.component(j).scaled(&w);
                }
            }
            assert!((&c.derivative() - &rhs).is_zero());
        }
    }

    #[test]
    fn restriction_substitutes_the_constraints() {
        let (_, ps) = single_resonance();
        let sol = solve_parent(&ps).unwrap();
        let restricted = restrict(&sol, &ps).unwrap();
        assert_eq!(
            restricted.component_named("x2").unwrap().to_string(),
            "(x0_2 + c1*x0_1^2*t)*exp(2*t)"
        );
        // w0 symbols are gone everywhere.
        let w0_slot = restricted.table().index_of("w0_1").unwrap();
        for c in restricted.components() {
            for (_, tp) in c.terms() {
                for poly in tp {
                    assert!(poly.terms().all(|(mu, _)| mu.get(w0_slot) == 0));
                }
            }
        }
        assert!(restrict(&restricted, &ps).is_err());
    }

    #[test]
    fn projection_keeps_phase_components() {
        let (nf, ps) = single_resonance();
        let sol = solve_parent(&ps).unwrap();
        assert!(project(&sol).is_err());
        let projected = project(&restrict(&sol, &ps).unwrap()).unwrap();
        assert_eq!(projected.labels(), &["x1", "x2"]);
        assert!(verify_solution_symbolic(&projected, &nf.rhs()));
    }

    #[test]
    fn broken_ansatz_fails_verification() {
        let (nf, ps) = single_resonance();
        let sol = project(&restrict(&solve_parent(&ps).unwrap(), &ps).unwrap()).unwrap();
        // Delete the t-term of the second component.
        let table = sol.table().clone();
        let mut broken_components = sol.components().to_vec();
        broken_components[1] = PolyExp::exponential(
            GaussianRational::from_int(2),
            Polynomial::symbol(&table, 1),
        );
        let broken = ClosedFormSolution {
            labels: sol.labels().to_vec(),
            components: broken_components,
            table,
            phase_dim: 2,
            restricted: true,
            projected: true,
        };
        assert!(!verify_solution_symbolic(&broken, &nf.rhs()));
    }

    #[test]
    fn zero_matrix_solution_is_constant() {
        let p = SymbolTable::new(Vec::<String>::new()).unwrap();
        let nf = NormalFormSystem::new(
            JordanStructure::diagonal(Spectrum::from_ints(&[0, 0])),
            p,
            vec![],
        )
        .unwrap();
        let table = enumerate_resonances(nf.jordan(), Some(4)).unwrap();
        // sigma = {0,0} has master resonances; cap the table and keep only
        // the linear part so B = 0.
        let ps = build_parent(
            &crate::parent::truncate_normal_form(&nf, 1),
            &crate::resonance::enumerate_resonances(nf.jordan(), Some(1)).unwrap(),
        )
        .unwrap();
        assert_eq!(table.truncation_degree(), Some(4));
        let sol = solve_parent(&ps).unwrap();
        for (i, c) in sol.components().iter().enumerate() {
            assert_eq!(*c, PolyExp::from_polynomial(Polynomial::symbol(sol.table(), i)));
        }
    }
}
