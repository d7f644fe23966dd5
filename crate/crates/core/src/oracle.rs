//! Independent floating-point verification: fixed-step RK4 integration of
//! nonlinear and parent systems, numeric evaluation of closed-form
//! solutions, trajectory comparison, and constraint-drift measurement.
//!
//! This is the only module that touches floating point; everything it
//! checks is produced exactly elsewhere.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::Polynomial;
use crate::normal_form::PolynomialVectorField;
use crate::parent::ParentSystem;
use crate::solver::ClosedFormSolution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("trajectory became non-finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("symbol `{name}` has no numeric binding")]
    UnboundSymbol { name: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Numeric values for symbols, keyed by name.
pub type Bindings = BTreeMap<String, Complex64>;

/// Convenience constructor from `(name, real-value)` pairs.
pub fn real_bindings(pairs: &[(&str, f64)]) -> Bindings {
    pairs
        .iter()
        .map(|&(name, value)| (name.to_string(), Complex64::new(value, 0.0)))
        .collect()
}

/// Fixed-step trajectory: uniformly spaced sample times (including `t = 0`)
/// and one complex state vector per sample.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub step: f64,
    pub method: &'static str,
}

impl Trajectory {
    pub fn last_state(&self) -> &[Complex64] {
        self.states.last().expect("trajectory has samples")
    }
}

/// A polynomial with parameters folded in: exponents over the state
/// coordinates plus a complex coefficient per term.
struct CompiledPolynomial {
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl CompiledPolynomial {
    fn compile(
        p: &Polynomial,
        state_dim: usize,
        bindings: &Bindings,
    ) -> Result<Self, OracleError> {
        let table = p.table();
        let mut terms = Vec::with_capacity(p.term_count());
        for (mu, coeff) in p.terms() {
            let mut value = coeff.to_complex64();
            let exponents = mu.exponents()[..state_dim].to_vec();
            for slot in state_dim..table.len() {
                let e = mu.get(slot);
                if e == 0 {
                    continue;
                }
                let name = table.name(slot);
                let bound = bindings.get(name).ok_or_else(|| OracleError::UnboundSymbol {
                    name: name.to_string(),
                })?;
                value *= bound.powi(e as i32);
            }
            terms.push((exponents, value));
        }
        Ok(Self { terms })
    }

    fn eval(&self, state: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (exponents, coeff) in &self.terms {
            let mut term = *coeff;
            for (slot, &e) in exponents.iter().enumerate() {
                if e > 0 {
                    term *= state[slot].powi(e as i32);
                }
            }
            acc += term;
        }
        acc
    }
}

fn rk4<F>(rhs: F, x0: &[Complex64], t_end: f64, step: f64) -> Result<Trajectory, OracleError>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    assert!(step > 0.0, "step must be positive");
    assert!(t_end >= 0.0, "integration horizon must be nonnegative");
    let steps = (t_end / step).round() as usize;
    let dim = x0.len();
    let mut state = x0.to_vec();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(state.clone());
    let half = step / 2.0;
    for k in 0..steps {
        let k1 = rhs(&state);
        let mut probe: Vec<Complex64> = (0..dim).map(|i| state[i] + half * k1[i]).collect();
        let k2 = rhs(&probe);
        for i in 0..dim {
            probe[i] = state[i] + half * k2[i];
        }
        let k3 = rhs(&probe);
        for i in 0..dim {
            probe[i] = state[i] + step * k3[i];
        }
        let k4 = rhs(&probe);
        for i in 0..dim {
            state[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = (k + 1) as f64 * step;
        if state.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(OracleError::NonFinite { t });
        }
        times.push(t);
        states.push(state.clone());
    }
    Ok(Trajectory {
        times,
        states,
        step,
        method: "rk4",
    })
}

/// Classical fixed-step RK4 for the nonlinear system `x' = field(x)`, with
/// every parameter symbol bound numerically.
pub fn integrate_field(
    field: &PolynomialVectorField,
    bindings: &Bindings,
    x0: &[Complex64],
    t_end: f64,
    step: f64,
) -> Result<Trajectory, OracleError> {
    if x0.len() != field.dim() {
        return Err(OracleError::DimensionMismatch {
            expected: field.dim(),
            got: x0.len(),
        });
    }
    let compiled: Vec<CompiledPolynomial> = field
        .components()
        .iter()
        .map(|c| CompiledPolynomial::compile(c, field.dim(), bindings))
        .collect::<Result<_, _>>()?;
    rk4(
        |state| compiled.iter().map(|c| c.eval(state)).collect(),
        x0,
        t_end,
        step,
    )
}

/// Numeric matrix of a parent system with parameters bound.
pub fn parent_matrix_numeric(
    ps: &ParentSystem,
    bindings: &Bindings,
) -> Result<Vec<Vec<Complex64>>, OracleError> {
    let params = ps.params();
    let values: Vec<Complex64> = params
        .names()
        .iter()
        .map(|name| {
            bindings
                .get(name)
                .copied()
                .ok_or_else(|| OracleError::UnboundSymbol { name: name.clone() })
        })
        .collect::<Result<_, _>>()?;
    Ok(ps
        .matrix()
        .iter()
        .map(|row| row.iter().map(|e| e.eval_complex(&values)).collect())
        .collect())
}

/// Fixed-step RK4 for the parent system `xi' = B xi`.
pub fn integrate_parent(
    ps: &ParentSystem,
    bindings: &Bindings,
    xi0: &[Complex64],
    t_end: f64,
    step: f64,
) -> Result<Trajectory, OracleError> {
    if xi0.len() != ps.dim() {
        return Err(OracleError::DimensionMismatch {
            expected: ps.dim(),
            got: xi0.len(),
        });
    }
    let matrix = parent_matrix_numeric(ps, bindings)?;
    rk4(
        |state| {
            matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(state)
                        .map(|(m, s)| m * s)
                        .sum::<Complex64>()
                })
                .collect()
        },
        xi0,
        t_end,
        step,
    )
}

/// Places a phase point on the constraint manifold: appends
/// `w_i = x^mu(i)` evaluated at `x0`.
pub fn manifold_initial_state(ps: &ParentSystem, x0: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(x0.len(), ps.n());
    let mut xi0 = x0.to_vec();
    for b in ps.basis() {
        let mut value = Complex64::new(1.0, 0.0);
        for (slot, &e) in b.mu.exponents().iter().enumerate() {
            if e > 0 {
                value *= x0[slot].powi(e as i32);
            }
        }
        xi0.push(value);
    }
    xi0
}

fn solution_values(
    sol: &ClosedFormSolution,
    bindings: &Bindings,
) -> Result<Vec<Complex64>, OracleError> {
    sol.table()
        .names()
        .iter()
        .map(|name| {
            bindings
                .get(name)
                .copied()
                .ok_or_else(|| OracleError::UnboundSymbol { name: name.clone() })
        })
        .collect()
}

/// Numeric value of every solution component at time `t`, with all
/// initial-value and parameter symbols bound.
pub fn evaluate_solution(
    sol: &ClosedFormSolution,
    bindings: &Bindings,
    t: f64,
) -> Result<Vec<Complex64>, OracleError> {
    let values = solution_values(sol, bindings)?;
    Ok(sol
        .components()
        .iter()
        .map(|c| c.eval_complex(&values, t))
        .collect())
}

/// Maximum over sample times and components of the absolute difference
/// between a trajectory and a closed-form solution.
pub fn compare(
    traj: &Trajectory,
    sol: &ClosedFormSolution,
    bindings: &Bindings,
) -> Result<f64, OracleError> {
    let state_dim = traj.states.first().map_or(0, Vec::len);
    if sol.len() != state_dim {
        return Err(OracleError::DimensionMismatch {
            expected: state_dim,
            got: sol.len(),
        });
    }
    let values = solution_values(sol, bindings)?;
    let mut worst: f64 = 0.0;
    for (t, state) in traj.times.iter().zip(&traj.states) {
        for (component, numeric) in sol.components().iter().zip(state) {
            let error = (component.eval_complex(&values, *t) - numeric).norm();
            worst = worst.max(error);
        }
    }
    Ok(worst)
}

/// Integrates the parent system from an on-manifold initial point and
/// returns the largest constraint value `max_i |w_i(t) - x(t)^mu(i)|` seen
/// along the trajectory. For exactly invariant manifolds this is pure
/// integrator noise.
pub fn manifold_drift(
    ps: &ParentSystem,
    bindings: &Bindings,
    x0: &[Complex64],
    t_end: f64,
    step: f64,
) -> Result<f64, OracleError> {
    let xi0 = manifold_initial_state(ps, x0);
    let traj = integrate_parent(ps, bindings, &xi0, t_end, step)?;
    let n = ps.n();
    let mut worst: f64 = 0.0;
    for state in &traj.states {
        for (k, b) in ps.basis().iter().enumerate() {
            let mut mono = Complex64::new(1.0, 0.0);
            for (slot, &e) in b.mu.exponents().iter().enumerate() {
                if e > 0 {
                    mono *= state[slot].powi(e as i32);
                }
            }
            worst = worst.max((state[n + k] - mono).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Multiindex, SymbolTable};
    use crate::normal_form::NormalFormSystem;
    use crate::parent::build_parent;
    use crate::resonance::enumerate_resonances;
    use crate::solver::{project, restrict, solve_parent};
    use crate::spectrum::{JordanStructure, Spectrum};

    fn single_resonance() -> (NormalFormSystem, ParentSystem) {
        let p = SymbolTable::new(["c1"]).unwrap();
        let nf = NormalFormSystem::new(
            JordanStructure::diagonal(Spectrum::from_ints(&[1, 2])),
            p.clone(),
            vec![(
                Multiindex::new(vec![2, 0]),
                1,
                Polynomial::symbol(&p, 0),
            )],
        )
        .unwrap();
        let table = enumerate_resonances(nf.jordan(), None).unwrap();
        let ps = build_parent(&nf, &table).unwrap();
        (nf, ps)
    }

    #[test]
    fn pure_exponential_reaches_e_to_machine_tolerance() {
        let p = SymbolTable::new(Vec::<String>::new()).unwrap();
        let nf = NormalFormSystem::new(
            JordanStructure::diagonal(Spectrum::from_ints(&[1])),
            p,
            vec![],
        )
        .unwrap();
        let traj = integrate_field(
            &nf.rhs(),
            &Bindings::new(),
            &[Complex64::new(1.0, 0.0)],
            1.0,
            1e-3,
        )
        .unwrap();
        let e = traj.last_state()[0].re;
        assert!((e - std::f64::consts::E).abs() < 1e-9, "got {e}");
    }

    #[test]
    fn parent_trajectory_tracks_the_nonlinear_system_on_the_manifold() {
        let (nf, ps) = single_resonance();
        let bindings = real_bindings(&[("c1", 1.0)]);
        let x0 = [Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0)];
        let nonlinear = integrate_field(&nf.rhs(), &bindings, &x0, 1.0, 1e-3).unwrap();
        let xi0 = manifold_initial_state(&ps, &x0);
        assert_eq!(xi0.len(), 3);
        assert!((xi0[2].re - 0.01).abs() < 1e-15);
        let parent = integrate_parent(&ps, &bindings, &xi0, 1.0, 1e-3).unwrap();
        let mut worst: f64 = 0.0;
        for (a, b) in nonlinear.states.iter().zip(&parent.states) {
            for i in 0..2 {
                worst = worst.max((a[i] - b[i]).norm());
            }
        }
        assert!(worst <= 1e-8, "x-components diverged by {worst}");
    }

    #[test]
    fn closed_form_matches_rk4_and_initial_data() {
        let (nf, ps) = single_resonance();
        let sol = project(&restrict(&solve_parent(&ps).unwrap(), &ps).unwrap()).unwrap();
        let mut bindings = real_bindings(&[("c1", 1.0), ("x0_1", 0.1), ("x0_2", 0.2)]);
        bindings.insert("w0_1".into(), Complex64::new(0.01, 0.0));
        let at0 = evaluate_solution(&sol, &bindings, 0.0).unwrap();
        assert!((at0[0].re - 0.1).abs() < 1e-15);
        assert!((at0[1].re - 0.2).abs() < 1e-15);
        // y(1) = (y0 + c1 x0^2) e^2.
        let at1 = evaluate_solution(&sol, &bindings, 1.0).unwrap();
        let expected = (0.2 + 0.01) * (2.0f64).exp().powi(1);
        assert!((at1[1].re - expected).abs() < 1e-12);

        let x0 = [Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0)];
        let traj = integrate_field(&nf.rhs(), &bindings, &x0, 1.0, 1e-3).unwrap();
        let err = compare(&traj, &sol, &bindings).unwrap();
        assert!(err <= 1e-9, "closed form vs RK4: {err}");
    }

    #[test]
    fn manifold_drift_is_integrator_noise_for_closed_parents() {
        let (_, ps) = single_resonance();
        let bindings = real_bindings(&[("c1", 1.0)]);
        let x0 = [Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0)];
        let drift = manifold_drift(&ps, &bindings, &x0, 1.0, 1e-3).unwrap();
        assert!(drift <= 1e-8, "drift {drift}");
    }

    #[test]
    fn unbound_symbols_are_reported() {
        let (nf, _) = single_resonance();
        let err = integrate_field(
            &nf.rhs(),
            &Bindings::new(),
            &[Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0)],
            1.0,
            1e-3,
        )
        .unwrap_err();
        assert_eq!(
            err,
            OracleError::UnboundSymbol {
                name: "c1".to_string()
            }
        );
    }

    #[test]
    fn blowup_is_reported_with_a_time() {
        // x' = x^2 from x0 = 1 blows up at t = 1.
        let p = SymbolTable::new(Vec::<String>::new()).unwrap();
        let table = SymbolTable::new(["x1"]).unwrap();
        let _ = p;
        let field = PolynomialVectorField::new(
            1,
            vec![Polynomial::symbol(&table, 0).pow(2)],
        );
        let err = integrate_field(
            &field,
            &Bindings::new(),
            &[Complex64::new(1.0, 0.0)],
            2.0,
            1e-3,
        )
        .unwrap_err();
        match err {
            OracleError::NonFinite { t } => assert!(t > 0.9 && t < 1.1, "blow-up at {t}"),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }
}
