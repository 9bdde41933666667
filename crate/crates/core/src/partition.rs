//! Integer partitions stored nondecreasing, ordered shortlex: shorter first,
//! then lexicographically on the parts.
//!
//! Consecutive pairs under this order fall into two shapes. Within a fixed
//! length the successor raises one pivot part by one, levels every later part
//! but the last to the same value and dumps the remainder on the last part.
//! Across lengths the maximum of `P(n, k)` is followed by `(1, ..., 1, n - k)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("a partition needs at least one part")]
    Empty,
    #[error("part {index} is zero; parts must be positive")]
    ZeroPart { index: usize },
    #[error("parts must be nondecreasing, found {prev} before {next}")]
    Decreasing { prev: usize, next: usize },
    #[error("partitions of 0 are not enumerated")]
    ZeroTotal,
    #[error("partitions of different totals: {0} and {1}")]
    SumMismatch(usize, usize),
    #[error("({a}, {b}) is not a Case I pair with pivot {pivot}")]
    NotCaseOne { a: String, b: String, pivot: usize },
    #[error("cannot parse partition `{0}`")]
    Parse(String),
}

/// A nondecreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(PartitionError::ZeroPart { index });
        }
        if let Some(w) = parts.windows(2).find(|w| w[0] > w[1]) {
            return Err(PartitionError::Decreasing {
                prev: w[0],
                next: w[1],
            });
        }
        Ok(Partition { parts })
    }

    /// Sorts first; zero parts are still rejected.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self, PartitionError> {
        parts.sort_unstable();
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn last(&self) -> usize {
        *self.parts.last().expect("nonempty")
    }

    /// Shortlex maximum of `P(n, k)`: `k - r` copies of `n / k` then `r`
    /// copies of `n / k + 1`, where `r = n mod k`.
    pub fn max_of_length(n: usize, k: usize) -> Option<Partition> {
        if k == 0 || k > n {
            return None;
        }
        let (q, r) = (n / k, n % k);
        let parts = concat(&repeat(&[q], k - r), &repeat(&[q + 1], r));
        Some(Partition { parts })
    }

    /// Shortlex minimum of `P(n, k)`: `(1, ..., 1, n - k + 1)`.
    pub fn min_of_length(n: usize, k: usize) -> Option<Partition> {
        if k == 0 || k > n {
            return None;
        }
        let parts = concat(&repeat(&[1], k - 1), &[n - k + 1]);
        Some(Partition { parts })
    }

    /// Decomposes the partition as `[a]*s + [b]` (with `b = 0` meaning no
    /// extra part), the shape whose pendant paths collapse to one weighted
    /// path in the symmetrized quotient. Two distinct singleton parts put the
    /// larger one in the repeated slot.
    pub fn pendant_shape(&self) -> Option<PendantShape> {
        let mut values: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match values.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => values.push((p, 1)),
            }
        }
        match values.as_slice() {
            [(a, s)] => Some(PendantShape {
                a: *a,
                b: 0,
                s: *s,
            }),
            [(x, cx), (y, cy)] => match (*cx, *cy) {
                (1, 1) => Some(PendantShape { a: *y, b: *x, s: 1 }),
                (s, 1) => Some(PendantShape { a: *x, b: *y, s }),
                (1, s) => Some(PendantShape { a: *y, b: *x, s }),
                _ => None,
            },
            _ => None,
        }
    }
}

/// `[a]*s + [b]` with `a >= 1`, `s >= 1`, `b >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendantShape {
    pub a: usize,
    pub b: usize,
    pub s: usize,
}

impl PendantShape {
    /// Path lengths in attachment order; a zero `b` contributes nothing.
    pub fn lengths(&self) -> Vec<usize> {
        let tail: &[usize] = if self.b == 0 { &[] } else { &[self.b] };
        concat(&repeat(&[self.a], self.s), tail)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex_cmp(self, other)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PartitionError::Parse(s.to_string()))?;
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Shorter partitions first; equal lengths compare at the first differing part.
pub fn shortlex_cmp(a: &Partition, b: &Partition) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.parts.cmp(&b.parts))
}

pub fn concat<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().chain(b).cloned().collect()
}

/// `n` copies of `a` back to back.
pub fn repeat<T: Clone>(a: &[T], n: usize) -> Vec<T> {
    (0..n).flat_map(|_| a.iter().cloned()).collect()
}

/// Every partition of `n`, ascending in shortlex order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>, PartitionError> {
    if n == 0 {
        return Err(PartitionError::ZeroTotal);
    }
    let mut out = Vec::new();
    for k in 1..=n {
        let mut current = Partition::min_of_length(n, k);
        while let Some(p) = current {
            current = successor_same_length(&p);
            out.push(p);
        }
    }
    Ok(out)
}

/// Lexicographic successor among partitions of the same total and length.
///
/// Takes the rightmost pivot `i < k - 1` that can be raised by one while
/// leveling `i..k-1` to the new value and keeping the last part at least as
/// large.
pub fn successor_same_length(p: &Partition) -> Option<Partition> {
    let k = p.len();
    let parts = p.parts();
    (0..k.saturating_sub(1))
        .rev()
        .find(|&i| pivot_feasible(parts, i))
        .map(|i| {
            let raised = parts[i] + 1;
            let suffix: usize = parts[i..].iter().sum();
            let mut next = parts[..i].to_vec();
            next.extend(repeat(&[raised], k - 1 - i));
            next.push(suffix - raised * (k - 1 - i));
            Partition { parts: next }
        })
}

/// Whether raising the 0-based pivot `i` leaves a valid last part.
fn pivot_feasible(parts: &[usize], i: usize) -> bool {
    let k = parts.len();
    let suffix: usize = parts[i..].iter().sum();
    suffix >= (k - i) * (parts[i] + 1)
}

/// How two partitions of the same total sit next to each other in shortlex
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConsecutiveCase {
    /// Same length; `pivot` is the 1-based index where the parts first differ.
    CaseI { pivot: usize },
    /// `a` is the maximum of its length and `b` the minimum of the next length.
    CaseII,
    NotConsecutive,
}

/// Recognizes consecutive pairs `a`, `b` (with `a` first) from their shape
/// alone.
///
/// Case I requires, at the 1-based pivot `i`, a shared prefix, `b_i = ... =
/// b_{k-1} = a_i + 1` and the last part balancing the total. On top of that
/// the pivot must be the rightmost raisable one, otherwise some partition
/// sits strictly between the two.
pub fn classify_consecutive(
    a: &Partition,
    b: &Partition,
) -> Result<ConsecutiveCase, PartitionError> {
    let n = a.total();
    if n != b.total() {
        return Err(PartitionError::SumMismatch(n, b.total()));
    }
    let (k, l) = (a.len(), b.len());
    if l == k {
        return Ok(case_one_pivot(a.parts(), b.parts())
            .map_or(ConsecutiveCase::NotConsecutive, |pivot| {
                ConsecutiveCase::CaseI { pivot }
            }));
    }
    if l == k + 1
        && n > k
        && Partition::max_of_length(n, k).as_ref() == Some(a)
        && b.parts()[..k].iter().all(|&x| x == 1)
        && b.last() == n - k
    {
        return Ok(ConsecutiveCase::CaseII);
    }
    Ok(ConsecutiveCase::NotConsecutive)
}

fn case_one_pivot(a: &[usize], b: &[usize]) -> Option<usize> {
    let k = a.len();
    // 0-based pivot: first index where the parts differ.
    let i = a.iter().zip(b).position(|(x, y)| x != y)?;
    if i + 1 >= k {
        return None;
    }
    let raised = a[i] + 1;
    if b[i..k - 1].iter().any(|&x| x != raised) {
        return None;
    }
    let tail: isize = a[i..k - 1]
        .iter()
        .map(|&x| x as isize - a[i] as isize - 1)
        .sum();
    if b[k - 1] as isize != a[k - 1] as isize + tail {
        return None;
    }
    if (i + 1..k - 1).any(|j| pivot_feasible(a, j)) {
        return None;
    }
    Some(i + 1)
}

/// Claim A on a Case I pair: the last part of `b` is at least `a_k - 1`.
pub fn claim_a_holds(a: &Partition, b: &Partition, pivot: usize) -> Result<bool, PartitionError> {
    match classify_consecutive(a, b)? {
        ConsecutiveCase::CaseI { pivot: p } if p == pivot => Ok(b.last() + 1 >= a.last()),
        _ => Err(PartitionError::NotCaseOne {
            a: a.to_string(),
            b: b.to_string(),
            pivot,
        }),
    }
}

/// `(q - 1)(k - 1) + r - ceil(r / k)` for `n = qk + r`; equals
/// `n - k + 1 - ceil(n / k)`.
pub fn case_two_slack(n: usize, k: usize) -> i64 {
    assert!(k >= 1 && n >= k);
    let (q, r) = ((n / k) as i64, (n % k) as i64);
    let k = k as i64;
    (q - 1) * (k - 1) + r - (r + k - 1) / k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(Partition::new(vec![]), Err(PartitionError::Empty));
        assert!(matches!(
            Partition::new(vec![1, 0]),
            Err(PartitionError::ZeroPart { index: 1 })
        ));
        assert!(matches!(
            Partition::new(vec![3, 1]),
            Err(PartitionError::Decreasing { prev: 3, next: 1 })
        ));
        assert_eq!(Partition::from_unsorted(vec![2, 2, 2, 1]).unwrap(), p(&[1, 2, 2, 2]));
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_partitions(1).unwrap(), vec![p(&[1])]);
        assert_eq!(
            enumerate_partitions(3).unwrap(),
            vec![p(&[3]), p(&[1, 2]), p(&[1, 1, 1])]
        );
        let five = enumerate_partitions(5).unwrap();
        let expected = [
            p(&[5]),
            p(&[1, 4]),
            p(&[2, 3]),
            p(&[1, 1, 3]),
            p(&[1, 2, 2]),
            p(&[1, 1, 1, 2]),
            p(&[1, 1, 1, 1, 1]),
        ];
        assert_eq!(five, expected);
        assert_eq!(enumerate_partitions(0), Err(PartitionError::ZeroTotal));
    }

    #[test]
    fn shortlex_examples() {
        assert_eq!(shortlex_cmp(&p(&[5]), &p(&[1, 4])), Ordering::Less);
        assert_eq!(shortlex_cmp(&p(&[1, 4]), &p(&[2, 3])), Ordering::Less);
        assert_eq!(shortlex_cmp(&p(&[2, 3]), &p(&[2, 3])), Ordering::Equal);
    }

    #[test]
    fn list_operations() {
        assert_eq!(concat(&[1, 2, 4], &[3, 2]), vec![1, 2, 4, 3, 2]);
        assert_eq!(repeat(&[1, 2, 4], 3), vec![1, 2, 4, 1, 2, 4, 1, 2, 4]);
        assert!(repeat(&[7], 0).is_empty());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_consecutive(&p(&[1, 1, 3]), &p(&[1, 2, 2])).unwrap(),
            ConsecutiveCase::CaseI { pivot: 2 }
        );
        assert_eq!(
            classify_consecutive(&p(&[2, 3]), &p(&[1, 1, 3])).unwrap(),
            ConsecutiveCase::CaseII
        );
        assert_eq!(
            classify_consecutive(&p(&[5]), &p(&[1, 1, 3])).unwrap(),
            ConsecutiveCase::NotConsecutive
        );
        // Right shape at pivot 1, but (1,1,2,4) lies in between.
        assert_eq!(
            classify_consecutive(&p(&[1, 1, 1, 5]), &p(&[2, 2, 2, 2])).unwrap(),
            ConsecutiveCase::NotConsecutive
        );
        assert!(matches!(
            classify_consecutive(&p(&[2]), &p(&[1, 2])),
            Err(PartitionError::SumMismatch(2, 3))
        ));
        // P(n, n) has no successor.
        assert_eq!(
            classify_consecutive(&p(&[1, 1]), &p(&[1, 1])).unwrap(),
            ConsecutiveCase::NotConsecutive
        );
    }

    #[test]
    fn claim_a_examples() {
        assert!(claim_a_holds(&p(&[1, 1, 3]), &p(&[1, 2, 2]), 2).unwrap());
        assert!(claim_a_holds(&p(&[1, 3]), &p(&[2, 2]), 1).unwrap());
        assert!(matches!(
            claim_a_holds(&p(&[2, 2, 2]), &p(&[1, 1, 4]), 1),
            Err(PartitionError::NotCaseOne { .. })
        ));
    }

    #[test]
    fn pendant_shapes() {
        let shape = |parts: &[usize]| p(parts).pendant_shape();
        assert_eq!(shape(&[2, 2, 2]), Some(PendantShape { a: 2, b: 0, s: 3 }));
        assert_eq!(shape(&[1, 2, 2, 2]), Some(PendantShape { a: 2, b: 1, s: 3 }));
        assert_eq!(shape(&[1, 1, 3]), Some(PendantShape { a: 1, b: 3, s: 2 }));
        assert_eq!(shape(&[1, 3]), Some(PendantShape { a: 3, b: 1, s: 1 }));
        assert_eq!(shape(&[1, 1, 2, 2]), None);
        assert_eq!(shape(&[1, 2, 3]), None);
        assert_eq!(PendantShape { a: 2, b: 1, s: 3 }.lengths(), vec![2, 2, 2, 1]);
        assert_eq!(PendantShape { a: 4, b: 0, s: 2 }.lengths(), vec![4, 4]);
    }

    #[test]
    fn case_two_slack_values() {
        assert_eq!(case_two_slack(5, 2), 1);
        assert_eq!(case_two_slack(4, 4), 0);
        for n in 1usize..40 {
            for k in 1..=n {
                let direct = n as i64 - k as i64 + 1 - n.div_ceil(k) as i64;
                assert_eq!(case_two_slack(n, k), direct);
            }
        }
    }

    #[test]
    fn text_form() {
        assert_eq!(p(&[1, 2, 2]).to_string(), "[1,2,2]");
        assert_eq!("[1, 2,2]".parse::<Partition>().unwrap(), p(&[1, 2, 2]));
        assert!("1,2".parse::<Partition>().is_err());
        assert!("[2,1]".parse::<Partition>().is_err());
    }
}
