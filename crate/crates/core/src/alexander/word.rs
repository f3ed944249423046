//! Free-group words, the integral group ring of a free group, and Fox
//! derivatives.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// One letter `g^e` with `e = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1, "letter exponent must be ±1");
        Letter { generator, exponent }
    }

    pub fn inverse(self) -> Self {
        Letter { generator: self.generator, exponent: -self.exponent }
    }
}

/// A word in the free group. Always stored freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord { letters: Vec::new() }
    }

    pub fn generator(g: usize) -> Self {
        GroupWord { letters: vec![Letter::new(g, 1)] }
    }

    /// Build from `(generator, ±1)` pairs; the result is freely reduced.
    pub fn from_letters<I: IntoIterator<Item = (usize, i8)>>(letters: I) -> Self {
        let mut w = GroupWord::identity();
        for (g, e) in letters {
            w.push(Letter::new(g, e));
        }
        w
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of exponents, i.e. the image under the abelianization `αᵢ ↦ t`.
    pub fn exponent_sum(&self) -> i32 {
        self.letters.iter().map(|l| l.exponent as i32).sum()
    }

    pub fn inverse(&self) -> Self {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Prefix of length `k` (already reduced, since prefixes of reduced words are).
    pub fn prefix(&self, k: usize) -> GroupWord {
        GroupWord { letters: self.letters[..k].to_vec() }
    }

    /// Replace generators through `f`, reducing the result.
    pub fn map_generators(&self, f: impl Fn(usize) -> usize) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().map(|l| (f(l.generator), l.exponent)))
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().map(|l| l.generator)
    }
}

impl Mul for &GroupWord {
    type Output = GroupWord;
    fn mul(self, rhs: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for &l in &rhs.letters {
            w.push(l);
        }
        w
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exponent == 1 {
                write!(f, "a{}", l.generator)?;
            } else {
                write!(f, "a{}^-1", l.generator)?;
            }
        }
        Ok(())
    }
}

/// Element of `ℤ[F]`: finitely supported integer combination of reduced words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupWord, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn one() -> Self {
        GroupRingElement::from_word(GroupWord::identity())
    }

    pub fn from_word(w: GroupWord) -> Self {
        let mut e = GroupRingElement::zero();
        e.add_term(w, 1);
        e
    }

    pub fn add_term(&mut self, w: GroupWord, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupWord, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Left multiplication by a group element.
    pub fn left_mul_word(&self, w: &GroupWord) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (v, c) in self.terms() {
            out.add_term(w * v, c);
        }
        out
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement { terms: self.terms.iter().map(|(w, &c)| (w.clone(), -c)).collect() }
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                out.add_term(u * v, a * b);
            }
        }
        out
    }
}

/// Fox derivative `∂w/∂α_j`.
///
/// For `w = l₁ ⋯ l_k`, `∂w/∂α_j = Σᵢ l₁⋯l_{i−1} · ∂lᵢ/∂α_j`, where
/// `∂α_j/∂α_j = 1` and `∂α_j⁻¹/∂α_j = −α_j⁻¹`.
pub fn fox_derivative(w: &GroupWord, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for (i, l) in w.letters().iter().enumerate() {
        if l.generator != j {
            continue;
        }
        let prefix = w.prefix(i);
        if l.exponent == 1 {
            out.add_term(prefix, 1);
        } else {
            out.add_term(&prefix * &GroupWord::from_letters([(j, -1)]), -1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(letters: &[(usize, i8)]) -> GroupWord {
        GroupWord::from_letters(letters.iter().copied())
    }

    #[test]
    fn reduction_cancels_adjacent_inverses() {
        let x = w(&[(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
        assert_eq!(x, GroupWord::generator(2));
        assert!((&x * &x.inverse()).is_identity());
    }

    #[test]
    fn fox_axioms() {
        assert_eq!(fox_derivative(&GroupWord::generator(0), 0), GroupRingElement::one());
        assert!(fox_derivative(&GroupWord::generator(1), 0).is_zero());
        let inv = w(&[(0, -1)]);
        let mut expected = GroupRingElement::zero();
        expected.add_term(inv.clone(), -1);
        assert_eq!(fox_derivative(&inv, 0), expected);
    }

    #[test]
    fn fox_of_wirtinger_relator() {
        // ∂(α₁α₂α₁⁻¹α₃⁻¹)/∂α₁ = 1 − α₁α₂α₁⁻¹, worked by hand with the product rule
        let r = w(&[(1, 1), (2, 1), (1, -1), (3, -1)]);
        let mut expected = GroupRingElement::one();
        expected.add_term(w(&[(1, 1), (2, 1), (1, -1)]), -1);
        assert_eq!(fox_derivative(&r, 1), expected);
        // ∂/∂α₃ = −α₁α₂α₁⁻¹α₃⁻¹
        let mut e3 = GroupRingElement::zero();
        e3.add_term(r.clone(), -1);
        assert_eq!(fox_derivative(&r, 3), e3);
    }

    fn arb_word(gens: usize, max_len: usize) -> impl Strategy<Value = GroupWord> {
        prop::collection::vec((0..gens, prop::bool::ANY), 0..max_len)
            .prop_map(|v| GroupWord::from_letters(v.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 }))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn fox_product_rule(u in arb_word(4, 8), v in arb_word(4, 8), j in 0usize..4) {
            let lhs = fox_derivative(&(&u * &v), j);
            let rhs = &fox_derivative(&u, j) + &fox_derivative(&v, j).left_mul_word(&u);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fundamental_identity(x in arb_word(4, 12)) {
            // Σ_j (∂w/∂α_j)(α_j − 1) = w − 1
            let mut sum = GroupRingElement::zero();
            for j in 0..4 {
                let mut aj_minus_1 = GroupRingElement::from_word(GroupWord::generator(j));
                aj_minus_1.add_term(GroupWord::identity(), -1);
                sum = &sum + &(&fox_derivative(&x, j) * &aj_minus_1);
            }
            let mut expected = GroupRingElement::from_word(x.clone());
            expected.add_term(GroupWord::identity(), -1);
            prop_assert_eq!(sum, expected);
        }
    }
}
