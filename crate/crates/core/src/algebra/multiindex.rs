//! Multiindices: exponent vectors for monomials `x^mu`.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `mu` with nonnegative entries, one per symbol.
///
/// The ordering is graded: lower total degree first, and within one degree
/// the monomial heavier in earlier symbols comes first (`x1^2 < x1*x2 <
/// x2^2`). Sorted containers of multiindices therefore iterate in the
/// canonical term order used for rendering and for the resonant basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multiindex(Vec<u32>);

impl Multiindex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    /// The zero multiindex (constant monomial) on `len` symbols.
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// `nu(i)`: a single 1 in slot `i`.
    pub fn unit(len: usize, slot: usize) -> Self {
        let mut e = vec![0; len];
        e[slot] = 1;
        Self(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, slot: usize) -> u32 {
        self.0[slot]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|mu|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Entry-wise sum (monomial product).
    pub fn plus(&self, other: &Multiindex) -> Multiindex {
        debug_assert_eq!(self.len(), other.len());
        Multiindex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `mu - nu(from) + nu(to)`; `None` when `mu_from == 0`.
    pub fn shift(&self, from: usize, to: usize) -> Option<Multiindex> {
        if self.0[from] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[from] -= 1;
        e[to] += 1;
        Some(Multiindex(e))
    }

    /// `mu - nu(slot) + sigma`; `None` when `mu_slot == 0`.
    pub fn replace_factor(&self, slot: usize, sigma: &Multiindex) -> Option<Multiindex> {
        debug_assert_eq!(self.len(), sigma.len());
        if self.0[slot] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[slot] -= 1;
        for (entry, extra) in e.iter_mut().zip(&sigma.0) {
            *entry += extra;
        }
        Some(Multiindex(e))
    }

    /// Scales every exponent (monomial power).
    pub fn scaled(&self, factor: u32) -> Multiindex {
        Multiindex(self.0.iter().map(|&e| e * factor).collect())
    }

    /// Re-embeds into a table with `new_len` symbols, sending old slot `s`
    /// to `slot_map[s]`.
    pub fn embedded(&self, new_len: usize, slot_map: &[usize]) -> Multiindex {
        debug_assert_eq!(self.len(), slot_map.len());
        let mut e = vec![0; new_len];
        for (slot, &exp) in self.0.iter().enumerate() {
            e[slot_map[slot]] += exp;
        }
        Multiindex(e)
    }
}

impl Ord for Multiindex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Multiindex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for Multiindex {
    fn from(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }
}

impl fmt::Display for Multiindex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Calls `visit` once for every multiindex of length `len` with total degree
/// exactly `degree`, in canonical (graded) order.
pub(crate) fn for_each_of_degree(len: usize, degree: u32, visit: &mut impl FnMut(&Multiindex)) {
    let mut current = vec![0u32; len];
    descend(&mut current, 0, degree, visit);
}

fn descend(current: &mut Vec<u32>, slot: usize, remaining: u32, visit: &mut impl FnMut(&Multiindex)) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        visit(&Multiindex(current.clone()));
        current[slot] = 0;
        return;
    }
    // Largest exponent first so visits follow the canonical order.
    for e in (0..=remaining).rev() {
        current[slot] = e;
        descend(current, slot + 1, remaining - e, visit);
    }
    current[slot] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> Multiindex {
        Multiindex::new(e.to_vec())
    }

    #[test]
    fn ordering_is_graded_with_early_symbols_heavy_first() {
        let mut monos = vec![mi(&[0, 2]), mi(&[2, 0]), mi(&[1, 1]), mi(&[1, 0]), mi(&[0, 1])];
        monos.sort();
        assert_eq!(
            monos,
            vec![mi(&[1, 0]), mi(&[0, 1]), mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]
        );
    }

    #[test]
    fn shift_and_replace_respect_zero_slots() {
        let mu = mi(&[2, 0, 1]);
        assert_eq!(mu.shift(0, 1), Some(mi(&[1, 1, 1])));
        assert_eq!(mu.shift(1, 0), None);
        assert_eq!(mu.replace_factor(2, &mi(&[2, 0, 0])), Some(mi(&[4, 0, 0])));
        assert_eq!(mu.replace_factor(1, &mi(&[2, 0, 0])), None);
    }

    #[test]
    fn degree_enumeration_is_complete_and_ordered() {
        let mut seen = Vec::new();
        for_each_of_degree(3, 2, &mut |m| seen.push(m.clone()));
        assert_eq!(seen.len(), 6);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
        assert_eq!(seen[0], mi(&[2, 0, 0]));
        assert_eq!(seen[5], mi(&[0, 0, 2]));
    }
}
