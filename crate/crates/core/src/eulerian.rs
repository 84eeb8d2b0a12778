//! Univariate and multivariate Eulerian polynomials.
//!
//! The multivariate lifting tags every descent top of a permutation of
//! `[n+1]` with its own variable: the value `v` is tagged by `x_{v-1}`, so
//! `A_n(x, 1) = sum over sigma of prod_{v in DT(sigma)} x_{v-1}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Dense univariate polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rational>,
}

impl UnivariatePolynomial {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(it: I) -> Self {
        Self::new(it.into_iter().map(Rational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Integer coefficients when every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// `sum_i s(i) x^i`.
pub fn polynomialize(s: &[Rational]) -> Result<UnivariatePolynomial> {
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(UnivariatePolynomial::new(s.to_vec()))
}

/// Eulerian polynomial `A_n` through `A_n = (n+1) x A_{n-1} + (1 - x) (x A_{n-1})'`.
pub fn univariate_eulerian(n: usize) -> UnivariatePolynomial {
    let mut coeffs: Vec<BigInt> = vec![BigInt::one()];
    for step in 1..=n {
        // Coefficient of x^k in (x A)' is (k+1) a_k; in (1-x)(x A)' it is
        // (k+1) a_k - k a_{k-1}; and (step+1) x A contributes (step+1) a_{k-1}.
        let prev = &coeffs;
        let mut next = vec![BigInt::zero(); step + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let a_k = prev.get(k).cloned().unwrap_or_default();
            let a_km1 = if k > 0 { prev.get(k - 1).cloned().unwrap_or_default() } else { BigInt::zero() };
            *slot = BigInt::from(k + 1) * a_k - BigInt::from(k) * &a_km1 + BigInt::from(step + 1) * a_km1;
        }
        coeffs = next;
    }
    UnivariatePolynomial::from_integers(coeffs)
}

/// Subset bitmask over variables `x_1..x_n`: bit `i-1` stands for `x_i`.
pub type SubsetMask = u64;

pub fn mask_of(indices: &[usize]) -> SubsetMask {
    indices.iter().fold(0, |m, &i| m | (1 << (i - 1)))
}

pub fn indices_of(mask: SubsetMask) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Multi-affine polynomial in `x_1..x_n` keyed by variable subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAffinePolynomial {
    n: usize,
    coeffs: BTreeMap<SubsetMask, BigInt>,
}

impl MultiAffinePolynomial {
    pub fn new(n: usize, coeffs: BTreeMap<SubsetMask, BigInt>) -> Self {
        assert!(n < 64, "at most 63 variables");
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MultiAffinePolynomial { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, indices: &[usize]) -> BigInt {
        self.coeff_mask(mask_of(indices))
    }

    pub fn coeff_mask(&self, mask: SubsetMask) -> BigInt {
        self.coeffs.get(&mask).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (SubsetMask, &BigInt)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Substitutes `x_i := x` for every `i`.
    pub fn diagonal(&self) -> UnivariatePolynomial {
        let mut out = vec![BigInt::zero(); self.n + 1];
        for (mask, c) in &self.coeffs {
            out[mask.count_ones() as usize] += c;
        }
        UnivariatePolynomial::from_integers(out)
    }

    /// Total of the coefficients whose subset has exactly `k` elements.
    pub fn level_sum(&self, k: usize) -> BigInt {
        self.coeffs
            .iter()
            .filter(|(m, _)| m.count_ones() as usize == k)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .map(|(mask, c)| {
                indices_of(*mask)
                    .into_iter()
                    .fold(Rational::from_integer(c.clone()), |acc, i| acc * &x[i - 1])
            })
            .sum()
    }
}

/// Monomial of the homogeneous lifting: `x`-support in the low 32 bits,
/// `y`-support in the high 32 bits.
type HomogeneousKey = u64;

const Y_SHIFT: u32 = 32;

/// Largest `n` accepted by [`multivariate_eulerian`]; the homogeneous lifting
/// has Catalan(n) monomials.
pub const HOMOGENEOUS_MAX_N: usize = 16;

/// Homogeneous lifting `A^h_n` in the paired variables `(x_i, y_i)`.
///
/// `A^h_n = (x_n + y_n) A^h_{n-1} + x_n y_n sum_{i<n} (d/dx_i + d/dy_i) A^h_{n-1}`.
pub fn homogeneous_eulerian(n: usize) -> HashMap<HomogeneousKey, BigInt> {
    assert!(n <= HOMOGENEOUS_MAX_N, "homogeneous lifting capped at n = {HOMOGENEOUS_MAX_N}");
    let mut poly: HashMap<HomogeneousKey, BigInt> = HashMap::from([(0, BigInt::one())]);
    for k in 1..=n {
        let xk: u64 = 1 << (k - 1);
        let yk: u64 = xk << Y_SHIFT;
        let mut next: HashMap<HomogeneousKey, BigInt> = HashMap::with_capacity(poly.len() * 3);
        let mut add = |key: u64, c: &BigInt| {
            *next.entry(key).or_default() += c;
        };
        for (&key, c) in &poly {
            add(key | xk, c);
            add(key | yk, c);
            for i in 0..k - 1 {
                let xi: u64 = 1 << i;
                let yi: u64 = xi << Y_SHIFT;
                if key & xi != 0 {
                    add((key & !xi) | xk | yk, c);
                }
                if key & yi != 0 {
                    add((key & !yi) | xk | yk, c);
                }
            }
        }
        poly = next;
    }
    poly
}

/// Multivariate Eulerian polynomial `A_n(x, 1)`: the homogeneous lifting with
/// every `y_i := 1`.
pub fn multivariate_eulerian(n: usize) -> MultiAffinePolynomial {
    let mut coeffs: BTreeMap<SubsetMask, BigInt> = BTreeMap::new();
    for (key, c) in homogeneous_eulerian(n) {
        *coeffs.entry(key & 0xFFFF_FFFF).or_default() += c;
    }
    MultiAffinePolynomial::new(n, coeffs)
}

/// `A_n(x, 1)` truncated to subsets of size `<= max_degree`, computed without
/// the `y` variables.
///
/// Every monomial of `A^h_k` has total degree `k`, so its `y`-degree is
/// `k - |xs|`. Setting `y = 1` therefore commutes with the recursion once the
/// `y`-derivatives are replaced by that degree:
/// `P_k = (1 + x_k) P_{k-1} + x_k sum_{i<k} d/dx_i P_{k-1} + x_k (k - 1 - deg_x) P_{k-1}`.
/// The `x`-degree never decreases, so truncating at every step is exact.
pub fn multivariate_eulerian_truncated(n: usize, max_degree: usize) -> MultiAffinePolynomial {
    assert!(n < 64, "at most 63 variables");
    let mut poly: BTreeMap<SubsetMask, BigInt> = BTreeMap::from([(0, BigInt::one())]);
    for k in 1..=n {
        let xk: u64 = 1 << (k - 1);
        let mut next: BTreeMap<SubsetMask, BigInt> = BTreeMap::new();
        for (&xs, c) in &poly {
            let deg = xs.count_ones() as usize;
            *next.entry(xs).or_default() += c;
            if deg < max_degree {
                let weight = BigInt::from(k - deg);
                *next.entry(xs | xk).or_default() += c * weight;
            }
            for i in 0..k - 1 {
                let xi: u64 = 1 << i;
                if xs & xi != 0 {
                    *next.entry((xs & !xi) | xk).or_default() += c;
                }
            }
        }
        poly = next;
    }
    MultiAffinePolynomial::new(n, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use num_traits::FromPrimitive;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn factorial(n: usize) -> BigInt {
        (1..=n).map(|k| BigInt::from_usize(k).unwrap()).product()
    }

    /// Eulerian numbers from the explicit alternating sum, independent of the recurrence.
    fn eulerian_number(n: usize, k: usize) -> BigInt {
        let m = n + 1;
        (0..=k)
            .map(|j| {
                let binom = factorial(m + 1) / (factorial(j) * factorial(m + 1 - j));
                let term = binom * num_traits::pow(BigInt::from(k + 1 - j), m);
                if j % 2 == 0 { term } else { -term }
            })
            .sum()
    }

    #[test]
    fn polynomialize_examples() {
        let p = polynomialize(&[int(1), int(2), int(1)]).unwrap();
        assert_eq!(p.coeffs(), &[int(1), int(2), int(1)]);
        let c = polynomialize(&[int(7)]).unwrap();
        assert_eq!(c.degree(), Some(0));
        assert_eq!(polynomialize(&[]), Err(Error::EmptySequence));
        let p = polynomialize(&[int(1), int(4), int(1)]).unwrap();
        assert_eq!(p, univariate_eulerian(2));
    }

    #[test]
    fn univariate_small_cases() {
        assert_eq!(univariate_eulerian(0).integer_coeffs().unwrap(), ints(&[1]));
        assert_eq!(univariate_eulerian(2).integer_coeffs().unwrap(), ints(&[1, 4, 1]));
        let a4 = univariate_eulerian(4).integer_coeffs().unwrap();
        assert_eq!(a4, ints(&[1, 26, 66, 26, 1]));
        assert_eq!(a4.iter().sum::<BigInt>(), BigInt::from(120));
    }

    #[test]
    fn univariate_matches_explicit_formula() {
        for n in 0..=15 {
            let coeffs = univariate_eulerian(n).integer_coeffs().unwrap();
            assert_eq!(coeffs.len(), n + 1);
            for (k, c) in coeffs.iter().enumerate() {
                assert_eq!(c, &eulerian_number(n, k), "A_{n}[{k}]");
            }
            assert!(univariate_eulerian(n).is_palindromic());
            assert_eq!(coeffs.iter().sum::<BigInt>(), factorial(n + 1));
        }
    }

    #[test]
    fn multivariate_small_cases() {
        let p1 = multivariate_eulerian(1);
        assert_eq!(p1.coeff(&[]), BigInt::from(1));
        assert_eq!(p1.coeff(&[1]), BigInt::from(1));
        assert_eq!(p1.len(), 2);

        let p2 = multivariate_eulerian(2);
        assert_eq!(p2.coeff(&[]), BigInt::from(1));
        assert_eq!(p2.coeff(&[1]), BigInt::from(1));
        assert_eq!(p2.coeff(&[2]), BigInt::from(3));
        assert_eq!(p2.coeff(&[1, 2]), BigInt::from(1));
        assert_eq!(p2.diagonal(), univariate_eulerian(2));
    }

    #[test]
    fn homogeneous_size_is_catalan() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
        for n in 1..=8 {
            assert_eq!(homogeneous_eulerian(n).len(), catalan[n + 1]);
        }
    }

    #[test]
    fn multivariate_invariants() {
        for n in 1..=9 {
            let p = multivariate_eulerian(n);
            assert_eq!(p.coeff(&[]), BigInt::one());
            assert_eq!(p.coefficient_sum(), factorial(n + 1));
            for i in 1..=n {
                assert_eq!(p.coeff(&[i]), (BigInt::one() << i) - 1, "singleton {{{i}}}");
            }
            let diag = p.diagonal();
            assert_eq!(diag, univariate_eulerian(n));
            for k in 0..=n {
                assert_eq!(p.level_sum(k), diag.coeff(k).to_integer());
            }
        }
    }

    #[test]
    fn truncated_recursion_matches_homogeneous() {
        for n in 1..=10 {
            let full = multivariate_eulerian(n);
            assert_eq!(multivariate_eulerian_truncated(n, n), full, "n = {n}");
            let cut = multivariate_eulerian_truncated(n, 3);
            for (mask, c) in full.terms() {
                if mask.count_ones() <= 3 {
                    assert_eq!(&cut.coeff_mask(mask), c);
                }
            }
            assert!(cut.terms().all(|(m, _)| m.count_ones() <= 3));
        }
    }
}
