//! Picard lattice of the blow-up of r ≤ 8 general points of the plane.
//!
//! Coordinates follow the basis (E₁, …, E_r, L) with Gram matrix
//! diag(−1, …, −1, 1); the class dL − Σ mᵢEᵢ has coordinates (−m₁, …, −m_r, d).

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("classes live on different lattices (r = {0} and r = {1})")]
    RankMismatch(usize, usize),
    #[error("c² + c·K = {0} is odd, so the input is not a divisor class")]
    OddAdjunction(i64),
    #[error("r = {r} is outside {lo}..={hi}")]
    OutOfRange { r: usize, lo: usize, hi: usize },
    #[error("neighbour profile is not uniform across exceptional classes")]
    NonUniform,
}

/// Blow-up of r general points, 0 ≤ r ≤ 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlowupLattice {
    pub r: usize,
}

impl BlowupLattice {
    pub fn new(r: usize) -> Result<BlowupLattice, LatticeError> {
        check_range(r, 0, 8)?;
        Ok(BlowupLattice { r })
    }

    pub fn rank(&self) -> usize {
        self.r + 1
    }

    /// diag(−1, …, −1, 1) in the basis (E₁, …, E_r, L).
    pub fn gram(&self) -> Vec<Vec<i64>> {
        (0..=self.r)
            .map(|i| {
                (0..=self.r)
                    .map(|j| {
                        if i != j {
                            0
                        } else if i == self.r {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn canonical(&self) -> DivClass {
        DivClass::canonical(self.r)
    }

    /// The anticanonical degree K², equal to 9 − r.
    pub fn degree(&self) -> i64 {
        9 - self.r as i64
    }
}

/// The class d·L − Σ mᵢ·Eᵢ. Derived ordering is lexicographic on (d, m₁, …, m_r).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DivClass {
    pub d: i64,
    pub m: Vec<i64>,
}

impl DivClass {
    pub fn new(d: i64, m: Vec<i64>) -> DivClass {
        DivClass { d, m }
    }

    pub fn r(&self) -> usize {
        self.m.len()
    }

    pub fn line(r: usize) -> DivClass {
        DivClass::new(1, vec![0; r])
    }

    /// E_i for 1 ≤ i ≤ r.
    pub fn exceptional(r: usize, i: usize) -> DivClass {
        let mut m = vec![0; r];
        m[i - 1] = -1;
        DivClass::new(0, m)
    }

    /// K = −3L + Σ Eᵢ.
    pub fn canonical(r: usize) -> DivClass {
        DivClass::new(-3, vec![-1; r])
    }

    pub fn coords(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.m.iter().map(|x| -x).collect();
        v.push(self.d);
        v
    }

    pub fn from_coords(v: &[i64]) -> DivClass {
        let (last, rest) = v.split_last().expect("nonempty coordinate vector");
        DivClass::new(*last, rest.iter().map(|x| -x).collect())
    }

    pub fn add(&self, o: &DivClass) -> DivClass {
        DivClass::new(
            self.d + o.d,
            self.m.iter().zip(&o.m).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, o: &DivClass) -> DivClass {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> DivClass {
        DivClass::new(self.d * k, self.m.iter().map(|a| a * k).collect())
    }
}

/// d_a·d_b − Σ m_{a,i}·m_{b,i}.
pub fn intersect(a: &DivClass, b: &DivClass) -> Result<i64, LatticeError> {
    if a.r() != b.r() {
        return Err(LatticeError::RankMismatch(a.r(), b.r()));
    }
    Ok(a.d * b.d - a.m.iter().zip(&b.m).map(|(x, y)| x * y).sum::<i64>())
}

fn dot(a: &DivClass, b: &DivClass) -> i64 {
    intersect(a, b).expect("same lattice")
}

/// Adjunction: g = 1 + (c² + c·K)/2.
pub fn arithmetic_genus(c: &DivClass) -> Result<i64, LatticeError> {
    let k = DivClass::canonical(c.r());
    let s = dot(c, c) + dot(c, &k);
    if s % 2 != 0 {
        return Err(LatticeError::OddAdjunction(s));
    }
    Ok(1 + s / 2)
}

fn check_range(r: usize, lo: usize, hi: usize) -> Result<(), LatticeError> {
    if (lo..=hi).contains(&r) {
        Ok(())
    } else {
        Err(LatticeError::OutOfRange { r, lo, hi })
    }
}

/// Integers d in a window for which Cauchy's inequality (Σmᵢ)² ≤ r·Σmᵢ² admits
/// Σmᵢ = sum(d) and Σmᵢ² = squares(d). Asserts the admissible set is bounded
/// inside the window.
fn cauchy_window(r: i64, sum: impl Fn(i64) -> i64, squares: impl Fn(i64) -> i64) -> Vec<i64> {
    const WINDOW: i64 = 40;
    let ok = |d: i64| squares(d) >= 0 && sum(d).pow(2) <= r * squares(d);
    assert!(
        !ok(-WINDOW) && !ok(WINDOW),
        "Cauchy bound does not close for r = {r}"
    );
    (-WINDOW..=WINDOW).filter(|&d| ok(d)).collect()
}

/// All integer vectors of length `slots` with entries in `lo..=hi`, the given sum
/// and sum of squares, in lexicographic order.
fn fixed_moments(slots: usize, lo: i64, hi: i64, sum: i64, squares: i64) -> Vec<Vec<i64>> {
    fn rec(
        prefix: &mut Vec<i64>,
        left: usize,
        lo: i64,
        hi: i64,
        s: i64,
        q: i64,
        out: &mut Vec<Vec<i64>>,
    ) {
        if q < 0 || s * s > left as i64 * q {
            return;
        }
        if left == 0 {
            if s == 0 && q == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for v in lo..=hi {
            if v * v > q {
                continue;
            }
            prefix.push(v);
            rec(prefix, left - 1, lo, hi, s - v, q - v * v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(
        &mut Vec::with_capacity(slots),
        slots,
        lo,
        hi,
        sum,
        squares,
        &mut out,
    );
    out
}

/// Classes with C² = −1 and C·K = −1, i.e. Σmᵢ = 3d − 1 and Σmᵢ² = d² + 1.
pub fn enumerate_exceptional(r: usize) -> Result<Vec<DivClass>, LatticeError> {
    check_range(r, 1, 8)?;
    let mut out = Vec::new();
    for d in cauchy_window(r as i64, |d| 3 * d - 1, |d| d * d + 1) {
        let b = ((d * d + 1) as f64).sqrt() as i64 + 1;
        for m in fixed_moments(r, -b, b, 3 * d - 1, d * d + 1) {
            out.push(DivClass::new(d, m));
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

/// Classes f = dL − Σ aᵢEᵢ with d ≥ 1, aᵢ ≥ 0, f² = 0 and f·K = −2.
pub fn enumerate_conic_classes(r: usize) -> Result<Vec<DivClass>, LatticeError> {
    check_range(r, 1, 8)?;
    let mut out = Vec::new();
    for d in cauchy_window(r as i64, |d| 3 * d - 2, |d| d * d) {
        if d < 1 {
            continue;
        }
        for a in fixed_moments(r, 0, d, 3 * d - 2, d * d) {
            out.push(DivClass::new(d, a));
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

/// Largest degree d among the enumerated classes of each kind.
pub fn degree_bound(classes: &[DivClass]) -> i64 {
    classes.iter().map(|c| c.d).max().unwrap_or(0)
}

/// Distribution of positive intersection numbers of one exceptional class with
/// the others, required to be the same for every class.
pub fn neighbor_profile(r: usize) -> Result<BTreeMap<i64, usize>, LatticeError> {
    check_range(r, 3, 8)?;
    let classes = enumerate_exceptional(r)?;
    let profile_of = |i: usize| {
        let mut p = BTreeMap::new();
        for (j, other) in classes.iter().enumerate() {
            let v = dot(&classes[i], other);
            if j != i && v > 0 {
                *p.entry(v).or_insert(0) += 1;
            }
        }
        p
    };
    let first = profile_of(0);
    if (1..classes.len()).any(|i| profile_of(i) != first) {
        return Err(LatticeError::NonUniform);
    }
    Ok(first)
}

/// Positive intersection profile of every exceptional class, without the
/// uniformity requirement (used to inspect the r = 2 exception).
pub fn neighbor_profiles_raw(r: usize) -> Result<Vec<BTreeMap<i64, usize>>, LatticeError> {
    check_range(r, 1, 8)?;
    let classes = enumerate_exceptional(r)?;
    Ok(classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut p = BTreeMap::new();
            for (j, o) in classes.iter().enumerate() {
                let v = dot(c, o);
                if i != j && v > 0 {
                    *p.entry(v).or_insert(0) += 1;
                }
            }
            p
        })
        .collect())
}

/// Adjacency lists of the graph on exceptional classes joined when they meet
/// with intersection number 1.
pub fn exceptional_graph(r: usize) -> Result<Vec<Vec<usize>>, LatticeError> {
    let classes = enumerate_exceptional(r)?;
    Ok((0..classes.len())
        .map(|i| {
            (0..classes.len())
                .filter(|&j| j != i && dot(&classes[i], &classes[j]) == 1)
                .collect()
        })
        .collect())
}

/// True when the graph is one cycle through all vertices.
pub fn is_single_cycle(adj: &[Vec<usize>]) -> bool {
    if adj.len() < 3 || adj.iter().any(|n| n.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut seen) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev {
            adj[cur][1]
        } else {
            adj[cur][0]
        };
        prev = cur;
        cur = next;
        seen += 1;
        if seen > adj.len() {
            return false;
        }
    }
    seen == adj.len()
}

/// Numerical homaloidal-net test: Σkᵢ = 3n − 3 and Σkᵢ² = n² − 1.
/// Irreducibility of the general member is not checked.
pub fn is_homaloidal(n: i64, k: &[i64]) -> bool {
    k.iter().sum::<i64>() == 3 * n - 3 && k.iter().map(|v| v * v).sum::<i64>() == n * n - 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcondSolution {
    pub m: i64,
    pub s: [i64; 4],
}

/// Brute force over 1 ≤ m ≤ m_max and sᵢ ≥ 0 with Σsᵢ² = m² − 1,
/// Σsᵢ = 2(m − 1) and sᵢ + sⱼ ≤ m for i ≠ j.
pub fn arcond_search(m_max: i64) -> Vec<ArcondSolution> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let (sum, sq) = (2 * (m - 1), m * m - 1);
        for s1 in 0..=m.min(sum) {
            for s2 in 0..=(m - s1).min(sum - s1) {
                let q2 = s1 * s1 + s2 * s2;
                if q2 > sq {
                    break;
                }
                for s3 in 0..=(m - s1.max(s2)).min(sum - s1 - s2) {
                    let s4 = sum - s1 - s2 - s3;
                    let s = [s1, s2, s3, s4];
                    if s.iter().map(|v| v * v).sum::<i64>() != sq {
                        continue;
                    }
                    let pairs_ok = (0..4).all(|i| (i + 1..4).all(|j| s[i] + s[j] <= m));
                    if pairs_ok {
                        out.push(ArcondSolution { m, s });
                    }
                }
            }
        }
    }
    out
}

/// k·Σaᵢ² − (Σaᵢ)², nonnegative by Cauchy's inequality and zero exactly when
/// all entries agree.
pub fn cauchy_gap(a: &[i64]) -> i64 {
    let s: i64 = a.iter().sum();
    a.len() as i64 * a.iter().map(|v| v * v).sum::<i64>() - s * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_examples() {
        let l = DivClass::line(6);
        assert_eq!(intersect(&l, &l), Ok(1));
        let e1 = DivClass::exceptional(6, 1);
        assert_eq!(intersect(&e1, &e1), Ok(-1));
        let k = DivClass::canonical(6);
        assert_eq!(intersect(&k, &k), Ok(3));
        assert_eq!(
            intersect(&l, &DivClass::line(5)),
            Err(LatticeError::RankMismatch(6, 5))
        );
    }

    #[test]
    fn genus_examples() {
        assert_eq!(arithmetic_genus(&DivClass::line(4)), Ok(0));
        assert_eq!(arithmetic_genus(&DivClass::new(3, vec![])), Ok(1));
        assert_eq!(arithmetic_genus(&DivClass::exceptional(2, 1)), Ok(0));
        assert_eq!(arithmetic_genus(&DivClass::new(4, vec![])), Ok(3));
    }

    #[test]
    fn coordinates_round_trip() {
        let c = DivClass::new(3, vec![2, 1, 0, -1]);
        assert_eq!(c.coords(), vec![-2, -1, 0, 1, 3]);
        assert_eq!(DivClass::from_coords(&c.coords()), c);
        assert_eq!(DivClass::canonical(2).coords(), vec![1, 1, -3]);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_exceptional(3).unwrap().len(), 6);
        assert_eq!(enumerate_conic_classes(4).unwrap().len(), 5);
        assert!(enumerate_exceptional(0).is_err());
        assert!(enumerate_exceptional(9).is_err());
        assert!(enumerate_conic_classes(9).is_err());
        let r2 = enumerate_exceptional(2).unwrap();
        assert_eq!(r2[0], DivClass::exceptional(2, 1));
        assert_eq!(r2[2], DivClass::new(1, vec![1, 1]));
    }

    #[test]
    fn profile_preconditions() {
        assert!(matches!(
            neighbor_profile(2),
            Err(LatticeError::OutOfRange { .. })
        ));
        let raw = neighbor_profiles_raw(2).unwrap();
        assert_ne!(raw[0], raw[2]);
    }

    #[test]
    fn homaloidal_examples() {
        assert!(is_homaloidal(1, &[]));
        assert!(is_homaloidal(2, &[1, 1, 1]));
        assert!(!is_homaloidal(2, &[1, 1]));
        assert!(is_homaloidal(3, &[2, 1, 1, 1, 1]));
    }

    #[test]
    fn arcond_small() {
        assert_eq!(
            arcond_search(1),
            vec![ArcondSolution {
                m: 1,
                s: [0, 0, 0, 0]
            }]
        );
        assert_eq!(arcond_search(12).len(), 1);
    }

    #[test]
    fn cauchy_gap_examples() {
        assert_eq!(cauchy_gap(&[2, 2, 2]), 0);
        assert!(cauchy_gap(&[1, 2, 3]) > 0);
    }
}
