//! Sparse multivariate polynomials with Gaussian-rational coefficients over
//! a declared, ordered list of symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Signed;

use super::{AlgebraError, GaussianRational, Multiindex};

/// Ordered list of distinct symbol names shared by a family of polynomials.
///
/// A table may declare a trailing block of parameter symbols (see
/// [`with_parameters`](Self::with_parameters)); parameters behave like any
/// other symbol algebraically but render before the variables inside a
/// monomial, giving the conventional `c1*x1^2` form. Cloning is cheap; two
/// tables compare equal iff they declare the same names, order, and split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    names: Arc<Vec<String>>,
    param_start: usize,
}

impl SymbolTable {
    pub fn new<I, S>(names: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names = Self::checked_names(names)?;
        let param_start = names.len();
        Ok(Self {
            names: Arc::new(names),
            param_start,
        })
    }

    /// Variables followed by a trailing parameter block.
    pub fn with_parameters<I, J, S, T>(variables: I, parameters: J) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut names: Vec<String> = variables.into_iter().map(Into::into).collect();
        let param_start = names.len();
        names.extend(parameters.into_iter().map(Into::into));
        let names = Self::checked_names(names)?;
        Ok(Self {
            names: Arc::new(names),
            param_start,
        })
    }

    fn checked_names<I, S>(names: I) -> Result<Vec<String>, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (k, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(AlgebraError::EmptySymbolName);
            }
            if names[..k].contains(name) {
                return Err(AlgebraError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, slot: usize) -> &str {
        &self.names[slot]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// First slot of the trailing parameter block (`len` when the table
    /// declares no parameters).
    pub fn param_start(&self) -> usize {
        self.param_start
    }

    pub fn is_parameter(&self, slot: usize) -> bool {
        slot >= self.param_start
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Sparse multivariate polynomial: finite map from multiindices (over the
/// table's symbols) to nonzero Gaussian-rational coefficients.
///
/// Arithmetic between polynomials requires identical symbol tables; mixing
/// tables is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    table: SymbolTable,
    terms: BTreeMap<Multiindex, GaussianRational>,
}

impl Polynomial {
    pub fn zero(table: &SymbolTable) -> Self {
        Self {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &SymbolTable, value: GaussianRational) -> Self {
        let mut p = Self::zero(table);
        if !value.is_zero() {
            p.terms.insert(Multiindex::zeros(table.len()), value);
        }
        p
    }

    pub fn one(table: &SymbolTable) -> Self {
        Self::constant(table, GaussianRational::one())
    }

    pub fn int(table: &SymbolTable, n: i64) -> Self {
        Self::constant(table, GaussianRational::from_int(n))
    }

    /// The polynomial `x_slot`.
    pub fn symbol(table: &SymbolTable, slot: usize) -> Self {
        Self::monomial(
            table,
            Multiindex::unit(table.len(), slot),
            GaussianRational::one(),
        )
    }

    /// The polynomial named `name`; `None` if the table does not declare it.
    pub fn symbol_named(table: &SymbolTable, name: &str) -> Option<Self> {
        table.index_of(name).map(|slot| Self::symbol(table, slot))
    }

    pub fn monomial(table: &SymbolTable, mu: Multiindex, coeff: GaussianRational) -> Self {
        assert_eq!(mu.len(), table.len(), "multiindex length != table length");
        let mut p = Self::zero(table);
        if !coeff.is_zero() {
            p.terms.insert(mu, coeff);
        }
        p
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (graded) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Multiindex, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mu: &Multiindex) -> GaussianRational {
        self.terms.get(mu).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Multiindex::degree).max()
    }

    /// The constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (mu, c) = self.terms.iter().next().unwrap();
                mu.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn assert_same_table(&self, other: &Self) {
        assert!(
            self.table == other.table,
            "polynomial symbol tables differ: {:?} vs {:?}",
            self.table.names(),
            other.table.names()
        );
    }

    fn insert_term(&mut self, mu: Multiindex, coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scaled(&self, factor: &GaussianRational) -> Self {
        if factor.is_zero() {
            return Self::zero(&self.table);
        }
        Self {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mu, c)| (mu.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.table);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative with respect to the symbol in `slot`.
    pub fn partial_derivative(&self, slot: usize) -> Self {
        let mut out = Self::zero(&self.table);
        for (mu, coeff) in &self.terms {
            let e = mu.get(slot);
            if e == 0 {
                continue;
            }
            let mut lowered = mu.exponents().to_vec();
            lowered[slot] -= 1;
            out.insert_term(
                Multiindex::new(lowered),
                coeff * &GaussianRational::from_int(e as i64),
            );
        }
        out
    }

    /// Complex conjugate of every coefficient. Symbols stand for real
    /// parameters, so they are left untouched.
    pub fn conjugate(&self) -> Self {
        Self {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mu, c)| (mu.clone(), c.conj()))
                .collect(),
        }
    }

    /// Substitutes polynomials for symbols by slot; unbound symbols are
    /// retained as themselves. Every binding must share this table.
    pub fn substitute(&self, bindings: &BTreeMap<usize, Polynomial>) -> Self {
        for p in bindings.values() {
            self.assert_same_table(p);
        }
        let mut out = Self::zero(&self.table);
        for (mu, coeff) in &self.terms {
            let mut term = Self::constant(&self.table, coeff.clone());
            for (slot, &e) in mu.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match bindings.get(&slot) {
                    Some(p) => p.pow(e),
                    None => Self::monomial(
                        &self.table,
                        Multiindex::unit(self.table.len(), slot).scaled(e),
                        GaussianRational::one(),
                    ),
                };
                term = &term * &factor;
            }
            out = &out + &term;
        }
        out
    }

    /// Re-expresses the polynomial over `target`, sending the symbol in slot
    /// `s` to the target slot `slot_map[s]`.
    pub fn embedded(&self, target: &SymbolTable, slot_map: &[usize]) -> Self {
        assert_eq!(slot_map.len(), self.table.len());
        let mut out = Self::zero(target);
        for (mu, coeff) in &self.terms {
            out.insert_term(mu.embedded(target.len(), slot_map), coeff.clone());
        }
        out
    }

    /// Exact evaluation with one Gaussian-rational value per symbol.
    pub fn eval_gaussian(&self, values: &[GaussianRational]) -> GaussianRational {
        assert_eq!(values.len(), self.table.len());
        let mut acc = GaussianRational::zero();
        for (mu, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (slot, &e) in mu.exponents().iter().enumerate() {
                if e > 0 {
                    term *= &values[slot].pow(e);
                }
            }
            acc += &term;
        }
        acc
    }

    /// Floating-point evaluation with one complex value per symbol.
    pub fn eval_complex(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.table.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (mu, coeff) in &self.terms {
            let mut term = coeff.to_complex64();
            for (slot, &e) in mu.exponents().iter().enumerate() {
                if e > 0 {
                    term *= values[slot].powi(e as i32);
                }
            }
            acc += term;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_table(rhs);
        let mut out = self.clone();
        for (mu, coeff) in &rhs.terms {
            out.insert_term(mu.clone(), coeff.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_table(rhs);
        let mut out = self.clone();
        for (mu, coeff) in &rhs.terms {
            out.insert_term(mu.clone(), -coeff);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_table(rhs);
        let mut out = Polynomial::zero(&self.table);
        for (mu_a, c_a) in &self.terms {
            for (mu_b, c_b) in &rhs.terms {
                out.insert_term(mu_a.plus(mu_b), c_a * c_b);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(mu, c)| (mu.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    /// Canonical rendering in graded term order, e.g. `2*x1 - x2^2 + (1+i)*x1*x2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (position, (mu, coeff)) in self.terms.iter().enumerate() {
            let mono = render_monomial(&self.table, mu);
            let first = position == 0;
            if coeff.is_real() {
                let re = coeff.re();
                let negative = re.is_negative();
                match (first, negative) {
                    (true, false) => {}
                    (true, true) => write!(f, "-")?,
                    (false, false) => write!(f, " + ")?,
                    (false, true) => write!(f, " - ")?,
                }
                let mag = re.abs();
                if mono.is_empty() {
                    write!(f, "{mag}")?;
                } else if mag.is_one() {
                    write!(f, "{mono}")?;
                } else {
                    write!(f, "{mag}*{mono}")?;
                }
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                if mono.is_empty() {
                    write!(f, "{coeff}")?;
                } else {
                    write!(f, "({coeff})*{mono}")?;
                }
            }
        }
        Ok(())
    }
}

fn render_monomial(table: &SymbolTable, mu: &Multiindex) -> String {
    let mut parts = Vec::new();
    let mut push = |slot: usize, e: u32| match e {
        0 => {}
        1 => parts.push(table.name(slot).to_string()),
        _ => parts.push(format!("{}^{}", table.name(slot), e)),
    };
    // Parameters first, then variables, each block in slot order.
    for slot in table.param_start()..table.len() {
        push(slot, mu.get(slot));
    }
    for slot in 0..table.param_start() {
        push(slot, mu.get(slot));
    }
    parts.join("*")
}

use num_traits::One;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn table() -> SymbolTable {
        SymbolTable::new(["x", "y", "c"]).unwrap()
    }

    fn x() -> Polynomial {
        Polynomial::symbol(&table(), 0)
    }

    fn y() -> Polynomial {
        Polynomial::symbol(&table(), 1)
    }

    fn c() -> Polynomial {
        Polynomial::symbol(&table(), 2)
    }

    #[test]
    fn table_rejects_duplicates() {
        assert_eq!(
            SymbolTable::new(["a", "a"]),
            Err(AlgebraError::DuplicateSymbol("a".into()))
        );
    }

    #[test]
    fn arithmetic_collects_and_cancels_terms() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let expected = &x().pow(2) - &y().pow(2);
        assert_eq!(p, expected);
        assert!((&p - &expected).is_zero());
    }

    #[test]
    fn substitution_binds_single_symbols() {
        let t = table();
        // w-slot stands in via c here: c*x + y with x -> y^2 gives c*y^2 + y.
        let p = &(&c() * &x()) + &y();
        let mut bindings = BTreeMap::new();
        bindings.insert(0, y().pow(2));
        let q = p.substitute(&bindings);
        assert_eq!(q, &(&c() * &y().pow(2)) + &y());
        // Annihilation: (x + y)^2 with x -> 0 gives y^2.
        let sq = (&x() + &y()).pow(2);
        let mut zero_x = BTreeMap::new();
        zero_x.insert(0, Polynomial::zero(&t));
        assert_eq!(sq.substitute(&zero_x), y().pow(2));
    }

    #[test]
    fn derivative_drops_degree_exactly() {
        let p = &x().pow(3) + &(&x() * &y());
        let dx = p.partial_derivative(0);
        let three_x2 = Polynomial::monomial(
            &table(),
            Multiindex::new(vec![2, 0, 0]),
            GaussianRational::from_int(3),
        );
        assert_eq!(dx, &three_x2 + &y());
    }

    #[test]
    fn eval_matches_structure() {
        let p = &(&c() * &x().pow(2)) + &y();
        let v = p.eval_gaussian(&[
            GaussianRational::from_int(2),
            GaussianRational::from_int(-1),
            GaussianRational::new(rational(1, 2), rational(0, 1)),
        ]);
        assert_eq!(v, GaussianRational::from_int(1));
    }

    #[test]
    fn display_is_deterministic_and_graded() {
        let p = &(&x() + &y().pow(2).scaled(&(-GaussianRational::one()))) + &Polynomial::int(&table(), 3);
        assert_eq!(p.to_string(), "3 + x - y^2");
        let q = x().scaled(&GaussianRational::i());
        assert_eq!(q.to_string(), "(i)*x");
        assert_eq!(Polynomial::zero(&table()).to_string(), "0");
    }
}
