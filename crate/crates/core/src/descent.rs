//! Descent-top statistics and the three ways of counting `R(n, X)`: the
//! number of permutations of `[n+1]` whose descent-top set is exactly `X`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A permutation of `1..=len`, stored by its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let len = image.len();
        let mut seen = vec![false; len + 1];
        for &v in &image {
            if v == 0 || v > len || seen[v] {
                return Err(Error::InvalidPermutation(format!("{image:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }
}

/// Set of descent-top values. `1` is never a member.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DescentTopSet {
    values: BTreeSet<usize>,
}

impl DescentTopSet {
    pub fn new<I: IntoIterator<Item = usize>>(values: I) -> Result<Self> {
        let values: BTreeSet<usize> = values.into_iter().collect();
        if values.contains(&0) || values.contains(&1) {
            return Err(Error::InvalidDescentTopSet {
                n: 0,
                values: values.into_iter().collect(),
                reason: "values must be at least 2",
            });
        }
        Ok(DescentTopSet { values })
    }

    pub fn empty() -> Self {
        DescentTopSet::default()
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.values.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.values.iter().next_back().copied()
    }

    /// Bitmask with bit `v` set for each member `v`.
    pub fn mask(&self) -> u64 {
        self.values.iter().fold(0, |m, &v| m | (1 << v))
    }

    fn check_fits(&self, n: usize) -> Result<()> {
        if self.max().is_some_and(|m| m > n + 1) {
            return Err(Error::InvalidDescentTopSet {
                n,
                values: self.to_vec(),
                reason: "values must lie in 2..=n+1",
            });
        }
        Ok(())
    }
}

/// `{ sigma(i) : sigma(i) > sigma(i+1) }`.
pub fn descent_top_set(sigma: &Permutation) -> DescentTopSet {
    DescentTopSet {
        values: sigma
            .image
            .windows(2)
            .filter(|w| w[0] > w[1])
            .map(|w| w[0])
            .collect(),
    }
}

/// Largest `n` for which brute-force enumeration of `S_{n+1}` is accepted.
pub const BRUTEFORCE_MAX_N: usize = 9;

fn descent_mask(image: &[usize]) -> u64 {
    image
        .windows(2)
        .filter(|w| w[0] > w[1])
        .fold(0, |m, w| m | (1 << w[0]))
}

/// Visits every arrangement of `rest` appended to `prefix` (Heap's algorithm).
fn for_each_completion(prefix: &[usize], rest: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let mut buf: Vec<usize> = prefix.iter().chain(rest.iter()).copied().collect();
    let start = prefix.len();
    let k = rest.len();
    let mut c = vec![0usize; k];
    f(&buf);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                buf.swap(start, start + i);
            } else {
                buf.swap(start + c[i], start + i);
            }
            f(&buf);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Histogram of descent-top masks over all of `S_{n+1}`, indexed by
/// `mask >> 2` (bit `v` of the mask marks top value `v`).
pub fn descent_top_histogram(n: usize) -> Result<Vec<u64>> {
    if n == 0 || n > BRUTEFORCE_MAX_N {
        return Err(Error::EnumerationTooLarge {
            n,
            max: BRUTEFORCE_MAX_N,
        });
    }
    let size = n + 1;
    let slots = 1usize << n;
    // Parallel over the first entry; each worker owns a histogram.
    let partials: Vec<Vec<u64>> = (1..=size)
        .into_par_iter()
        .map(|first| {
            let mut hist = vec![0u64; slots];
            let mut rest: Vec<usize> = (1..=size).filter(|&v| v != first).collect();
            for_each_completion(&[first], &mut rest, &mut |img| {
                hist[(descent_mask(img) >> 2) as usize] += 1;
            });
            hist
        })
        .collect();
    let mut total = vec![0u64; slots];
    for hist in partials {
        for (t, h) in total.iter_mut().zip(hist) {
            *t += h;
        }
    }
    Ok(total)
}

/// `|{ sigma in S_{n+1} : DT(sigma) = X }|` by direct enumeration.
pub fn count_exact_bruteforce(n: usize, x: &DescentTopSet) -> Result<BigInt> {
    x.check_fits(n)?;
    let hist = descent_top_histogram(n)?;
    Ok(BigInt::from(hist[(x.mask() >> 2) as usize]))
}

/// Which printed inclusion-exclusion form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Alternating sum over subsets of the complement of `X`.
    Complement,
    /// Alternating sum over subsets of `X` using `alpha(J)` and the `beta-hat!` operator.
    Deletion,
}

/// Shift between our `n` (permutations of `[n+1]`) and the inclusion-exclusion
/// ground set `[N]` with `|R(N-1, X)|`: `N = n + COUNT_INDEX_OFFSET`.
///
/// Fixed by agreement with brute force over `n <= 6`; see the calibration test.
pub const COUNT_INDEX_OFFSET: usize = 1;

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `|R(n, X)|` from the printed inclusion-exclusion formulas.
pub fn count_formula(n: usize, x: &DescentTopSet, method: CountMethod) -> Result<BigInt> {
    x.check_fits(n)?;
    count_formula_with_offset(n, x, method, COUNT_INDEX_OFFSET)
}

/// Same as [`count_formula`] with an explicit index offset; used to calibrate.
pub fn count_formula_with_offset(
    n: usize,
    x: &DescentTopSet,
    method: CountMethod,
    offset: usize,
) -> Result<BigInt> {
    let ground = n + offset;
    if x.max().is_some_and(|m| m > ground) {
        return Err(Error::InvalidDescentTopSet {
            n,
            values: x.to_vec(),
            reason: "values exceed the ground set",
        });
    }
    Ok(match method {
        CountMethod::Complement => complement_sum(ground, &x.to_vec()),
        CountMethod::Deletion => deletion_sum(&x.to_vec()),
    })
}

/// `sum_{S subset [N] \ X} (-1)^|S| (N - |X u S|)! prod_i (x_{S,i} - i)`.
fn complement_sum(ground: usize, xs: &[usize]) -> BigInt {
    let complement: Vec<usize> = (1..=ground).filter(|v| !xs.contains(v)).collect();
    let mut total = BigInt::zero();
    for sel in 0u64..(1u64 << complement.len()) {
        let mut chain: Vec<usize> = xs.to_vec();
        chain.extend(
            complement
                .iter()
                .enumerate()
                .filter(|(b, _)| sel >> b & 1 == 1)
                .map(|(_, &v)| v),
        );
        chain.sort_unstable();
        let mut term = factorial(ground - chain.len());
        for (i, &v) in chain.iter().enumerate() {
            // (x_{S,i} - i) with 1-based i
            let f = v as i64 - (i as i64 + 1);
            if f == 0 {
                term = BigInt::zero();
                break;
            }
            term *= f;
        }
        if sel.count_ones() % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

/// `alpha(X) = (x_1 - 1, x_2 - x_1, ..., x_k - x_{k-1})`.
fn alpha(xs: &[usize]) -> Vec<u32> {
    let mut prev = 1;
    xs.iter()
        .map(|&v| {
            let d = (v - prev) as u32;
            prev = v;
            d
        })
        .collect()
}

/// `beta-hat! = (k+1)^{beta_1} k^{beta_2} ... 2^{beta_k}`.
fn beta_hat_factorial(beta: &[u32]) -> BigInt {
    let k = beta.len() as u64;
    beta.iter()
        .enumerate()
        .map(|(i, &b)| num_traits::pow(BigInt::from(k + 1 - i as u64), b as usize))
        .product()
}

/// `sum_{J subset X} (-1)^{|X \ J|} alpha(J) beta-hat!`.
fn deletion_sum(xs: &[usize]) -> BigInt {
    let k = xs.len();
    let mut total = BigInt::zero();
    for sel in 0u64..(1u64 << k) {
        let j: Vec<usize> = (0..k).filter(|b| sel >> b & 1 == 1).map(|b| xs[b]).collect();
        let term = beta_hat_factorial(&alpha(&j));
        if (k - j.len()) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

fn p2(e: usize) -> BigInt {
    BigInt::one() << (e as u32 as usize)
}

fn p3(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(3), e)
}

fn p4(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(4), e)
}

/// Printed closed forms of `R(X)` for `|X| <= 3`; independent of `n`.
pub fn closed_form_r(x: &DescentTopSet) -> Result<BigInt> {
    let v = x.to_vec();
    match v.as_slice() {
        [x1] => Ok(p2(x1 - 1) - 1),
        [x1, x2] => Ok(p3(x1 - 1) * p2(x2 - x1) - (p2(x1 - 1) + p2(x2 - 1)) + 1),
        [x1, x2, x3] => Ok(p4(x1 - 1) * p3(x2 - x1) * p2(x3 - x2)
            - (p3(x1 - 1) * p2(x2 - x1) + p3(x2 - 1) * p2(x3 - x2) + p3(x1 - 1) * p2(x3 - x1))
            + (p2(x1 - 1) + p2(x2 - 1) + p2(x3 - 1))
            - 1),
        _ => Err(Error::NoClosedForm(v.len())),
    }
}

/// All descent-top sets in `{2..=n+1}` with at most `max_size` elements,
/// in (size, lexicographic) order.
pub fn small_descent_top_sets(n: usize, max_size: usize) -> Vec<DescentTopSet> {
    let values: Vec<usize> = (2..=n + 1).collect();
    let mut out = Vec::new();
    for size in 0..=max_size.min(values.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(DescentTopSet {
                values: idx.iter().map(|&i| values[i]).collect(),
            });
            // next combination
            let mut pos = size;
            while pos > 0 && idx[pos - 1] == values.len() - size + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            for j in pos..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dts(v: &[usize]) -> DescentTopSet {
        DescentTopSet::new(v.iter().copied()).unwrap()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn descent_tops_of_examples() {
        assert_eq!(descent_top_set(&perm(&[1, 2, 3])), dts(&[]));
        assert_eq!(descent_top_set(&perm(&[3, 2, 1])), dts(&[2, 3]));
        assert_eq!(descent_top_set(&perm(&[2, 3, 1])), dts(&[3]));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(DescentTopSet::new([1, 3]).is_err());
        assert!(matches!(
            count_exact_bruteforce(10, &dts(&[])),
            Err(Error::EnumerationTooLarge { .. })
        ));
        assert!(count_formula(2, &dts(&[4]), CountMethod::Deletion).is_err());
        assert_eq!(closed_form_r(&dts(&[2, 3, 4, 5])), Err(Error::NoClosedForm(4)));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(count_exact_bruteforce(2, &dts(&[])).unwrap(), BigInt::from(1));
        assert_eq!(count_exact_bruteforce(2, &dts(&[3])).unwrap(), BigInt::from(3));
        assert_eq!(count_exact_bruteforce(2, &dts(&[2, 3])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn heap_enumeration_matches_naive_check() {
        // Every permutation visited exactly once.
        let mut seen = std::collections::HashSet::new();
        let mut rest = vec![2, 3, 4, 5];
        for_each_completion(&[1], &mut rest, &mut |img| {
            assert!(seen.insert(img.to_vec()));
            Permutation::new(img.to_vec()).unwrap();
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn formula_examples() {
        for n in 2..=6 {
            assert_eq!(count_formula(n, &dts(&[]), CountMethod::Complement).unwrap(), BigInt::from(1));
            assert_eq!(count_formula(n, &dts(&[]), CountMethod::Deletion).unwrap(), BigInt::from(1));
            for x1 in 2..=n + 1 {
                let expect = (BigInt::one() << (x1 - 1)) - 1;
                for m in [CountMethod::Complement, CountMethod::Deletion] {
                    assert_eq!(count_formula(n, &dts(&[x1]), m).unwrap(), expect);
                }
            }
        }
        assert_eq!(count_formula(2, &dts(&[2, 3]), CountMethod::Complement).unwrap(), BigInt::from(1));
        assert_eq!(count_formula(2, &dts(&[2, 3]), CountMethod::Deletion).unwrap(), BigInt::from(1));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_r(&dts(&[2])).unwrap(), BigInt::from(1));
        assert_eq!(closed_form_r(&dts(&[3])).unwrap(), BigInt::from(3));
        // 4*9*2 - (12 + 54 + 24) + (2 + 8 + 16) - 1
        assert_eq!(closed_form_r(&dts(&[2, 4, 5])).unwrap(), BigInt::from(7));
        assert_eq!(count_exact_bruteforce(4, &dts(&[2, 4, 5])).unwrap(), BigInt::from(7));
        assert_eq!(count_exact_bruteforce(6, &dts(&[2, 4, 5])).unwrap(), BigInt::from(7));
    }

    #[test]
    fn index_offset_calibration() {
        // Counts do not depend on n once X fits, so every offset past the
        // smallest agreeing one also agrees.
        let agreeing: Vec<usize> = (0..=2)
            .filter(|&offset| {
                (1..=6).all(|n| {
                    let hist = descent_top_histogram(n).unwrap();
                    small_descent_top_sets(n, 3).iter().all(|x| {
                        let brute = BigInt::from(hist[(x.mask() >> 2) as usize]);
                        count_formula_with_offset(n, x, CountMethod::Complement, offset)
                            .is_ok_and(|v| v == brute)
                    })
                })
            })
            .collect();
        assert_eq!(agreeing.first(), Some(&COUNT_INDEX_OFFSET));
        assert!(!agreeing.contains(&0));
    }

    #[test]
    fn enumerates_small_sets() {
        let sets = small_descent_top_sets(3, 3);
        // subsets of {2,3,4}
        assert_eq!(sets.len(), 8);
        assert_eq!(sets[0], DescentTopSet::empty());
        assert_eq!(sets[7], dts(&[2, 3, 4]));
        assert_eq!(small_descent_top_sets(5, 2).len(), 1 + 5 + 10);
    }
}
