//! Polynomial-exponential functions `sum_lambda p_lambda(t) * e^(lambda t)`
//! with polynomial coefficients in symbolic parameters: the algebra that
//! closed-form solutions of triangular linear systems live in.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{GaussianRational, Polynomial, SymbolTable};

/// Coefficients of a polynomial in `t`: slot `k` holds the coefficient of
/// `t^k`. Kept free of trailing zero polynomials.
type TPoly = Vec<Polynomial>;

/// Finite sum of terms `p(t) * e^(lambda t)` with distinct exponents
/// `lambda` and nonzero polynomials `p` whose coefficients are
/// [`Polynomial`] values over a shared symbol table.
///
/// The representation is closed under addition, multiplication,
/// differentiation and antidifferentiation, all exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExp {
    table: SymbolTable,
    terms: BTreeMap<GaussianRational, TPoly>,
}

impl PolyExp {
    pub fn zero(table: &SymbolTable) -> Self {
        Self {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A time-independent value: `p * e^(0 t)`.
    pub fn from_polynomial(p: Polynomial) -> Self {
        let table = p.table().clone();
        let mut out = Self::zero(&table);
        out.add_term(GaussianRational::zero(), vec![p]);
        out
    }

    /// `p * e^(lambda t)` for a time-independent polynomial `p`.
    pub fn exponential(lambda: GaussianRational, p: Polynomial) -> Self {
        let table = p.table().clone();
        let mut out = Self::zero(&table);
        out.add_term(lambda, vec![p]);
        out
    }

    /// `p(t) * e^(lambda t)` from explicit `t`-coefficients (slot `k` is the
    /// coefficient of `t^k`).
    pub fn term(table: &SymbolTable, lambda: GaussianRational, t_coeffs: Vec<Polynomial>) -> Self {
        let mut out = Self::zero(table);
        out.add_term(lambda, t_coeffs);
        out
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(lambda, t-coefficients)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&GaussianRational, &[Polynomial])> {
        self.terms.iter().map(|(l, p)| (l, p.as_slice()))
    }

    /// Exponents with nonzero coefficient polynomial.
    pub fn exponents(&self) -> impl Iterator<Item = &GaussianRational> {
        self.terms.keys()
    }

    /// Highest power of `t` attached to `lambda`, if the term is present.
    pub fn t_degree(&self, lambda: &GaussianRational) -> Option<usize> {
        self.terms.get(lambda).map(|p| p.len() - 1)
    }

    fn assert_same_table(&self, other: &Self) {
        assert!(
            self.table == other.table,
            "poly-exponential symbol tables differ"
        );
    }

    fn add_term(&mut self, lambda: GaussianRational, t_coeffs: TPoly) {
        let entry = self
            .terms
            .entry(lambda.clone())
            .or_insert_with(Vec::new);
        *entry = tpoly_add(&self.table, entry, &t_coeffs);
        if entry.is_empty() {
            self.terms.remove(&lambda);
        }
    }

    /// Multiplies every coefficient by a time-independent polynomial.
    pub fn scaled(&self, factor: &Polynomial) -> Self {
        assert!(self.table == *factor.table(), "symbol tables differ");
        if factor.is_zero() {
            return Self::zero(&self.table);
        }
        let mut out = Self::zero(&self.table);
        for (lambda, tp) in &self.terms {
            out.add_term(lambda.clone(), tp.iter().map(|p| p * factor).collect());
        }
        out
    }

    /// Exact derivative `d/dt`: term-wise `(p' + lambda p) e^(lambda t)`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(&self.table);
        for (lambda, tp) in &self.terms {
            let lambda_poly = Polynomial::constant(&self.table, lambda.clone());
            let scaled: TPoly = tp.iter().map(|p| p * &lambda_poly).collect();
            let sum = tpoly_add(&self.table, &tpoly_derivative(tp), &scaled);
            out.add_term(lambda.clone(), sum);
        }
        out
    }

    /// An exact antiderivative: `derivative(antiderivative(f)) == f`.
    ///
    /// Terms with `lambda != 0` integrate by repeated parts; the `lambda = 0`
    /// polynomial integrates by the power rule with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = Self::zero(&self.table);
        for (lambda, tp) in &self.terms {
            if lambda.is_zero() {
                out.add_term(GaussianRational::zero(), tpoly_integral_from_zero(tp));
            } else {
                out.add_term(lambda.clone(), tpoly_parts_integral(&self.table, tp, lambda));
            }
        }
        out
    }

    /// Value at `t = 0` as a polynomial in the symbols.
    pub fn eval_at_zero(&self) -> Polynomial {
        let mut acc = Polynomial::zero(&self.table);
        for tp in self.terms.values() {
            if let Some(p0) = tp.first() {
                acc = &acc + p0;
            }
        }
        acc
    }

    /// Solves the scalar linear equation `y' = lambda y + g(t)` with
    /// `y(0) = y0`, exactly.
    ///
    /// Forcing terms whose exponent equals `lambda` are resonant and raise
    /// the `t`-power (`t^k` integrates to `t^(k+1)/(k+1)`); all other terms
    /// integrate by repeated parts.
    pub fn solve_scalar(lambda: &GaussianRational, y0: &Polynomial, g: &PolyExp) -> PolyExp {
        let table = y0.table().clone();
        assert!(table == g.table, "symbol tables differ");
        let mut out = Self::zero(&table);
        out.add_term(lambda.clone(), vec![y0.clone()]);
        for (mu, tp) in &g.terms {
            let nu = mu - lambda;
            if nu.is_zero() {
                // Resonant forcing: e^(-lambda t) g-term is polynomial.
                out.add_term(lambda.clone(), tpoly_integral_from_zero(tp));
            } else {
                // Integral of p(s) e^(nu s) over [0, t] is Q(t)e^(nu t) - Q(0).
                let q = tpoly_parts_integral(&table, tp, &nu);
                let q0 = q.first().cloned().unwrap_or_else(|| Polynomial::zero(&table));
                out.add_term(mu.clone(), q);
                out.add_term(lambda.clone(), vec![-&q0]);
            }
        }
        out
    }

    /// Substitutes polynomials for symbols in every coefficient.
    pub fn substitute(&self, bindings: &BTreeMap<usize, Polynomial>) -> Self {
        let mut out = Self::zero(&self.table);
        for (lambda, tp) in &self.terms {
            out.add_term(
                lambda.clone(),
                tp.iter().map(|p| p.substitute(bindings)).collect(),
            );
        }
        out
    }

    /// Re-expresses every coefficient over `target` (see
    /// [`Polynomial::embedded`]).
    pub fn embedded(&self, target: &SymbolTable, slot_map: &[usize]) -> Self {
        let mut out = Self::zero(target);
        for (lambda, tp) in &self.terms {
            out.add_term(
                lambda.clone(),
                tp.iter().map(|p| p.embedded(target, slot_map)).collect(),
            );
        }
        out
    }

    /// Floating-point evaluation with one complex value per symbol.
    pub fn eval_complex(&self, values: &[Complex64], t: f64) -> Complex64 {
        let tc = Complex64::new(t, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (lambda, tp) in &self.terms {
            let mut poly = Complex64::new(0.0, 0.0);
            let mut t_power = Complex64::new(1.0, 0.0);
            for p in tp {
                poly += p.eval_complex(values) * t_power;
                t_power *= tc;
            }
            acc += poly * (lambda.to_complex64() * tc).exp();
        }
        acc
    }
}

impl Add for &PolyExp {
    type Output = PolyExp;
    fn add(self, rhs: &PolyExp) -> PolyExp {
        self.assert_same_table(rhs);
        let mut out = self.clone();
        for (lambda, tp) in &rhs.terms {
            out.add_term(lambda.clone(), tp.clone());
        }
        out
    }
}

impl Sub for &PolyExp {
    type Output = PolyExp;
    fn sub(self, rhs: &PolyExp) -> PolyExp {
        self + &-rhs
    }
}

impl Neg for &PolyExp {
    type Output = PolyExp;
    fn neg(self) -> PolyExp {
        PolyExp {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(l, tp)| (l.clone(), tp.iter().map(|p| -p).collect()))
                .collect(),
        }
    }
}

impl Mul for &PolyExp {
    type Output = PolyExp;
    fn mul(self, rhs: &PolyExp) -> PolyExp {
        self.assert_same_table(rhs);
        let mut out = PolyExp::zero(&self.table);
        for (la, pa) in &self.terms {
            for (lb, pb) in &rhs.terms {
                out.add_term(la + lb, tpoly_mul(&self.table, pa, pb));
            }
        }
        out
    }
}

fn tpoly_trim(mut tp: TPoly) -> TPoly {
    while tp.last().is_some_and(Polynomial::is_zero) {
        tp.pop();
    }
    tp
}

fn tpoly_add(table: &SymbolTable, a: &[Polynomial], b: &[Polynomial]) -> TPoly {
    let mut out: TPoly = Vec::with_capacity(a.len().max(b.len()));
    for k in 0..a.len().max(b.len()) {
        let zero = Polynomial::zero(table);
        let pa = a.get(k).unwrap_or(&zero);
        let pb = b.get(k).unwrap_or(&zero);
        out.push(pa + pb);
    }
    tpoly_trim(out)
}

fn tpoly_mul(table: &SymbolTable, a: &[Polynomial], b: &[Polynomial]) -> TPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Polynomial::zero(table); a.len() + b.len() - 1];
    for (i, pa) in a.iter().enumerate() {
        for (j, pb) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(pa * pb);
        }
    }
    tpoly_trim(out)
}

/// `d/dt` of a polynomial in `t`.
fn tpoly_derivative(tp: &[Polynomial]) -> TPoly {
    tpoly_trim(
        tp.iter()
            .enumerate()
            .skip(1)
            .map(|(k, p)| p.scaled(&GaussianRational::from_int(k as i64)))
            .collect(),
    )
}

/// Power-rule antiderivative vanishing at `t = 0`.
fn tpoly_integral_from_zero(tp: &[Polynomial]) -> TPoly {
    if tp.is_empty() {
        return Vec::new();
    }
    let table = tp[0].table().clone();
    let mut out = vec![Polynomial::zero(&table)];
    for (k, p) in tp.iter().enumerate() {
        let inv = GaussianRational::from_int(k as i64 + 1)
            .inverse()
            .expect("k+1 > 0");
        out.push(p.scaled(&inv));
    }
    tpoly_trim(out)
}

/// `Q` with `(Q e^(nu t))' = p e^(nu t)`, by repeated integration by parts:
/// `Q = sum_j (-1)^j p^(j) / nu^(j+1)`.
fn tpoly_parts_integral(table: &SymbolTable, tp: &[Polynomial], nu: &GaussianRational) -> TPoly {
    let inv_nu = nu.inverse().expect("nonzero exponent difference");
    let mut acc: TPoly = Vec::new();
    let mut current = tpoly_trim(tp.to_vec());
    let mut factor = inv_nu.clone();
    let mut negate = false;
    while !current.is_empty() {
        let signed = if negate { -&factor } else { factor.clone() };
        let contribution: TPoly = current.iter().map(|p| p.scaled(&signed)).collect();
        acc = tpoly_add(table, &acc, &contribution);
        current = tpoly_derivative(&current);
        factor = &factor * &inv_nu;
        negate = !negate;
    }
    acc
}

impl fmt::Display for PolyExp {
    /// Canonical rendering sorted by exponent, then `t`-power, e.g.
    /// `(x0_2 + c1*w0_1*t)*exp(2*t)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(lambda, tp)| {
                let poly = render_tpoly(tp);
                if lambda.is_zero() {
                    poly
                } else {
                    let wrapped = if tp.iter().filter(|p| !p.is_zero()).count() > 1 {
                        format!("({poly})")
                    } else {
                        poly
                    };
                    format!("{wrapped}*{}", render_exp_factor(lambda))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

fn render_tpoly(tp: &[Polynomial]) -> String {
    let mut parts = Vec::new();
    for (k, p) in tp.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let t_factor = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        let coeff = p.to_string();
        let piece = if t_factor.is_empty() {
            coeff
        } else if p.as_constant().is_some_and(|c| c.is_one()) {
            t_factor
        } else if p.term_count() > 1 {
            format!("({coeff})*{t_factor}")
        } else {
            format!("{coeff}*{t_factor}")
        };
        parts.push(piece);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn render_exp_factor(lambda: &GaussianRational) -> String {
    if lambda.is_one() {
        "exp(t)".to_string()
    } else if (-lambda).is_one() {
        "exp(-t)".to_string()
    } else if lambda.is_real() {
        format!("exp({lambda}*t)")
    } else {
        format!("exp(({lambda})*t)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn table() -> SymbolTable {
        SymbolTable::with_parameters(["y0", "w0"], ["c1"]).unwrap()
    }

    fn sym(name: &str) -> Polynomial {
        Polynomial::symbol_named(&table(), name).unwrap()
    }

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn derivative_applies_product_rule() {
        // t*e^(2t) -> (1 + 2t)*e^(2t)
        let t = table();
        let f = PolyExp::term(&t, g(2), vec![Polynomial::zero(&t), Polynomial::one(&t)]);
        let expected = PolyExp::term(&t, g(2), vec![Polynomial::one(&t), Polynomial::int(&t, 2)]);
        assert_eq!(f.derivative(), expected);
        // Constants die: e^(0t) -> 0.
        let c = PolyExp::from_polynomial(Polynomial::one(&t));
        assert!(c.derivative().is_zero());
    }

    #[test]
    fn derivative_of_shifted_exponential_matches_hand_computation() {
        // (g3 + g4 t) e^(5t) -> (g4 + 5 g3 + 5 g4 t) e^(5t); here y0, w0 stand
        // in for the two symbols.
        let t = table();
        let f = PolyExp::term(&t, g(5), vec![sym("y0"), sym("w0")]);
        let d = f.derivative();
        let expected = PolyExp::term(
            &t,
            g(5),
            vec![&sym("w0") + &sym("y0").scaled(&g(5)), sym("w0").scaled(&g(5))],
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn antiderivative_round_trips_through_derivative() {
        let t = table();
        let f = &PolyExp::term(&t, g(3), vec![sym("y0"), Polynomial::one(&t)])
            + &PolyExp::from_polynomial(&sym("c1") + &Polynomial::int(&t, 2));
        assert_eq!(f.antiderivative().derivative(), f);
    }

    #[test]
    fn solve_scalar_resonant_forcing_raises_t_power() {
        // y' = 2y + c1 w0 e^(2t), y(0) = y0  =>  (y0 + c1 w0 t) e^(2t)
        let t = table();
        let forcing = PolyExp::exponential(g(2), &sym("c1") * &sym("w0"));
        let y = PolyExp::solve_scalar(&g(2), &sym("y0"), &forcing);
        let expected = PolyExp::term(&t, g(2), vec![sym("y0"), &sym("c1") * &sym("w0")]);
        assert_eq!(y, expected);
    }

    #[test]
    fn solve_scalar_homogeneous_case() {
        let t = table();
        let y = PolyExp::solve_scalar(&g(1), &sym("y0"), &PolyExp::zero(&t));
        assert_eq!(y, PolyExp::exponential(g(1), sym("y0")));
    }

    #[test]
    fn solve_scalar_stacked_resonance_gives_quadratic_t() {
        // y' = 5y + 2 c1 (y0 + c1 w0 t) e^(5t), y(0) = c1:
        // y = (c1 + 2 c1 y0 t + c1^2 w0 t^2) e^(5t)
        let t = table();
        let two_c1 = sym("c1").scaled(&g(2));
        let forcing = PolyExp::term(&t, g(5), vec![sym("y0"), &sym("c1") * &sym("w0")])
            .scaled(&two_c1);
        let y = PolyExp::solve_scalar(&g(5), &sym("c1"), &forcing);
        let expected = PolyExp::term(
            &t,
            g(5),
            vec![
                sym("c1"),
                (&sym("c1") * &sym("y0")).scaled(&g(2)),
                &sym("c1").pow(2) * &sym("w0"),
            ],
        );
        assert_eq!(y, expected);
        // The defining identity holds exactly.
        let residual = &(&y.derivative() - &y.scaled(&Polynomial::int(&t, 5))) - &forcing;
        assert!(residual.is_zero());
        assert_eq!(y.eval_at_zero(), sym("c1"));
    }

    #[test]
    fn non_resonant_forcing_integrates_by_parts() {
        // y' = y + t e^(2t), y(0) = 0: y = ((t - 1)e^(2t) + e^t) exactly.
        let t = table();
        let forcing = PolyExp::term(&t, g(2), vec![Polynomial::zero(&t), Polynomial::one(&t)]);
        let y = PolyExp::solve_scalar(&g(1), &Polynomial::zero(&t), &forcing);
        let residual = &(&y.derivative() - &y) - &forcing;
        assert!(residual.is_zero());
        assert!(y.eval_at_zero().is_zero());
        let expected = &PolyExp::term(&t, g(2), vec![-&Polynomial::one(&t), Polynomial::one(&t)])
            + &PolyExp::exponential(g(1), Polynomial::one(&t));
        assert_eq!(y, expected);
    }

    #[test]
    fn multiplication_adds_exponents() {
        let t = table();
        let a = PolyExp::exponential(g(2), sym("y0"));
        let b = PolyExp::term(&t, g(3), vec![Polynomial::one(&t), sym("c1")]);
        let prod = &a * &b;
        let expected = PolyExp::term(&t, g(5), vec![sym("y0"), &sym("y0") * &sym("c1")]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn rendering_is_canonical() {
        let t = table();
        let f = PolyExp::term(&t, g(2), vec![sym("y0"), &sym("c1") * &sym("w0")]);
        assert_eq!(f.to_string(), "(y0 + c1*w0*t)*exp(2*t)");
        let half = GaussianRational::new(rational(1, 2), rational(0, 1));
        let gterm = PolyExp::exponential(GaussianRational::i(), Polynomial::constant(&t, half));
        assert_eq!(gterm.to_string(), "1/2*exp((i)*t)");
        assert_eq!(PolyExp::zero(&t).to_string(), "0");
    }
}
