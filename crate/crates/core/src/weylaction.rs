//! Integer matrices acting on the Picard lattice, in the basis (E₁, …, E_r, L).
//! Matrices act on column coordinate vectors: column j is the image of the
//! j-th basis element.

use std::collections::BTreeMap;

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{cyclotomic_polynomial, Q};
use crate::piclattice::{enumerate_exceptional, BlowupLattice, DivClass, LatticeError};
use crate::Order;

/// Default cap for order searches.
pub const ORDER_CAP: u64 = 5040;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("matrix must be square of size 1..=9, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize },
    #[error("matrix does not preserve the intersection form and the canonical class")]
    NotWeyl,
    #[error("matrices act on different lattices")]
    Mismatch,
    #[error("empty generator list")]
    NoGenerators,
    #[error("no finite order up to {0}")]
    InfiniteOrder(u64),
    #[error("image of exceptional class {0} is not exceptional")]
    NotPermutation(usize),
    #[error("characteristic polynomial is not a product of cyclotomic factors")]
    NonCyclotomic,
    #[error("integer overflow in matrix power")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Matrix = Vec<Vec<i64>>;

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn matmul(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = out[i][j].checked_add(a[i][k].checked_mul(b[k][j])?)?;
            }
        }
    }
    Some(out)
}

fn gram(n: usize) -> Matrix {
    BlowupLattice { r: n - 1 }.gram()
}

/// Checks MᵀGM = G and M·K = K for the lattice of rank = size of M.
pub fn is_weyl(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    if n == 0 || n > 9 || m.iter().any(|row| row.len() != n) {
        return false;
    }
    let g = gram(n);
    let mt: Matrix = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
    let m = m.to_vec();
    let preserved = matmul(&mt, &g)
        .and_then(|x| matmul(&x, &m))
        .is_some_and(|x| x == g);
    let k = DivClass::canonical(n - 1).coords();
    let mk: Vec<i64> = m
        .iter()
        .map(|row| row.iter().zip(&k).map(|(a, b)| a * b).sum())
        .collect();
    preserved && mk == k
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicAut {
    pub lattice: BlowupLattice,
    m: Matrix,
}

impl PicAut {
    pub fn new(m: Matrix) -> Result<PicAut, WeylError> {
        let rows = m.len();
        if rows == 0 || rows > 9 || m.iter().any(|row| row.len() != rows) {
            return Err(WeylError::Shape {
                rows,
                cols: m.first().map_or(0, Vec::len),
            });
        }
        if !is_weyl(&m) {
            return Err(WeylError::NotWeyl);
        }
        Ok(PicAut {
            lattice: BlowupLattice { r: rows - 1 },
            m,
        })
    }

    pub fn identity(r: usize) -> PicAut {
        PicAut {
            lattice: BlowupLattice { r },
            m: identity(r + 1),
        }
    }

    /// The Weyl element permuting E₁..E_r by i ↦ perm[i] (0-based) and fixing L.
    pub fn from_point_permutation(perm: &[usize]) -> Result<PicAut, WeylError> {
        let n = perm.len() + 1;
        let mut m = vec![vec![0; n]; n];
        for (j, &i) in perm.iter().enumerate() {
            m[i][j] = 1;
        }
        m[n - 1][n - 1] = 1;
        PicAut::new(m)
    }

    pub fn r(&self) -> usize {
        self.lattice.r
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn compose(&self, o: &PicAut) -> Result<PicAut, WeylError> {
        if self.r() != o.r() {
            return Err(WeylError::Mismatch);
        }
        let m = matmul(&self.m, &o.m).ok_or(WeylError::Overflow)?;
        Ok(PicAut {
            lattice: self.lattice,
            m,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.m == identity(self.r() + 1)
    }

    pub fn trace(&self) -> i64 {
        (0..=self.r()).map(|i| self.m[i][i]).sum()
    }

    pub fn apply(&self, c: &DivClass) -> DivClass {
        let v = c.coords();
        let w: Vec<i64> = self
            .m
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        DivClass::from_coords(&w)
    }
}

pub fn make_geiser() -> PicAut {
    let mut m = vec![vec![0; 8]; 8];
    for i in 0..7 {
        for j in 0..7 {
            m[i][j] = if i == j { -2 } else { -1 };
        }
        m[i][7] = -3;
        m[7][i] = 3;
    }
    m[7][7] = 8;
    PicAut::new(m).expect("Geiser matrix is a Weyl element")
}

pub fn make_bertini() -> PicAut {
    let mut m = vec![vec![0; 9]; 9];
    for i in 0..8 {
        for j in 0..8 {
            m[i][j] = if i == j { -3 } else { -2 };
        }
        m[i][8] = -6;
        m[8][i] = 6;
    }
    m[8][8] = 17;
    PicAut::new(m).expect("Bertini matrix is a Weyl element")
}

/// Lift of the quadratic involution (ayz : bxz : cxy) on the degree 4 surface.
pub fn make_dp4_quadratic() -> PicAut {
    PicAut::new(vec![
        vec![0, -1, -1, 0, 0, -1],
        vec![-1, 0, -1, 0, 0, -1],
        vec![-1, -1, 0, 0, 0, -1],
        vec![0, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![1, 1, 1, 0, 0, 2],
    ])
    .expect("quadratic involution matrix is a Weyl element")
}

/// Lift of the cubic de Jonquières involution on the degree 4 surface.
pub fn make_dp4_cubic() -> PicAut {
    PicAut::new(vec![
        vec![-1, -1, -1, -1, -1, -2],
        vec![-1, -1, 0, 0, 0, -1],
        vec![-1, 0, -1, 0, 0, -1],
        vec![-1, 0, 0, -1, 0, -1],
        vec![-1, 0, 0, 0, -1, -1],
        vec![2, 1, 1, 1, 1, 3],
    ])
    .expect("cubic involution matrix is a Weyl element")
}

/// Least k ≥ 1 with M^k = I, searched up to `cap`.
pub fn order(m: &PicAut, cap: u64) -> Order {
    let mut p = m.clone();
    for k in 1..=cap {
        if p.is_identity() {
            return Order::Finite(k);
        }
        match p.compose(m) {
            Ok(next) => p = next,
            Err(_) => return Order::OverCap,
        }
    }
    Order::OverCap
}

fn rank_rational(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let piv = a[rank][c].clone();
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &piv;
                for j in c..cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the sublattice fixed by every generator.
pub fn fixed_rank(gens: &[PicAut]) -> Result<usize, WeylError> {
    let first = gens.first().ok_or(WeylError::NoGenerators)?;
    let n = first.r() + 1;
    let mut rows = Vec::new();
    for g in gens {
        if g.r() != first.r() {
            return Err(WeylError::Mismatch);
        }
        for i in 0..n {
            rows.push((0..n).map(|j| g.m[i][j] - i64::from(i == j)).collect());
        }
    }
    Ok(n - rank_rational(&rows))
}

/// Characteristic polynomial det(tI − M), lowest degree first, by
/// Faddeev–LeVerrier over the integers.
pub fn char_poly(m: &PicAut) -> Vec<BigInt> {
    let n = m.r() + 1;
    let a: Vec<Vec<BigInt>> =
        m.m.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
    let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    // M_0 = 0; M_k = A·M_{k−1} + c_{n−k+1}·I; c_{n−k} = −tr(A·M_k)/k.
    let mut am: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut mk = am;
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        am = mul(&a, &mk);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
    }
    c
}

fn divide_exact(p: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    if p.len() < d.len() {
        return None;
    }
    let mut r = p.to_vec();
    let (dp, dd) = (p.len() - 1, d.len() - 1);
    let mut q = vec![BigInt::zero(); dp - dd + 1];
    for k in (0..=dp - dd).rev() {
        let c = r[k + dd].clone();
        for (j, dj) in d.iter().enumerate() {
            r[k + j] -= &c * dj;
        }
        q[k] = c;
    }
    r.iter().all(Zero::is_zero).then_some(q)
}

/// Multiplicity of Φ_d in the characteristic polynomial, for each d dividing the order.
pub fn eigenvalue_multiplicities(m: &PicAut) -> Result<BTreeMap<u32, usize>, WeylError> {
    let Order::Finite(k) = order(m, ORDER_CAP) else {
        return Err(WeylError::InfiniteOrder(ORDER_CAP));
    };
    let mut p = char_poly(m);
    let mut out = BTreeMap::new();
    for d in (1..=k as u32).filter(|d| k % *d as u64 == 0) {
        let phi = cyclotomic_polynomial(d);
        let mut mult = 0;
        while let Some(q) = divide_exact(&p, &phi) {
            p = q;
            mult += 1;
        }
        if mult > 0 {
            out.insert(d, mult);
        }
    }
    if p.len() != 1 || !p[0].abs().is_one() {
        return Err(WeylError::NonCyclotomic);
    }
    Ok(out)
}

/// Permutation of the sorted exceptional classes, in one-line notation.
pub fn act_on_exceptional(m: &PicAut) -> Result<Vec<usize>, WeylError> {
    let classes = enumerate_exceptional(m.r())?;
    classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            classes
                .binary_search(&m.apply(c))
                .map_err(|_| WeylError::NotPermutation(i))
        })
        .collect()
}

/// Disjoint cycles of a permutation in one-line notation, fixed points included.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = vec![s];
        seen[s] = true;
        let mut j = perm[s];
        while j != s {
            seen[j] = true;
            cyc.push(j);
            j = perm[j];
        }
        out.push(cyc);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub fixed_rank: usize,
    pub degree: i64,
    pub orbit_sizes: Vec<usize>,
    /// Present only when the fixed rank is 1.
    pub divisible: Option<bool>,
}

/// Orbits of the generated group on exceptional classes, with the divisibility
/// check by the degree 9 − r when the fixed part has rank 1.
pub fn orbit_divisibility(gens: &[PicAut]) -> Result<OrbitReport, WeylError> {
    let rank = fixed_rank(gens)?;
    let r = gens[0].r();
    let perms: Vec<Vec<usize>> = gens
        .iter()
        .map(act_on_exceptional)
        .collect::<Result<_, _>>()?;
    let n = perms[0].len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for perm in &perms {
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        *sizes.entry(find(&mut parent, i)).or_insert(0) += 1;
    }
    let mut orbit_sizes: Vec<usize> = sizes.into_values().collect();
    orbit_sizes.sort_unstable();
    let degree = 9 - r as i64;
    let divisible = (rank == 1).then(|| orbit_sizes.iter().all(|&s| s as i64 % degree == 0));
    Ok(OrbitReport {
        fixed_rank: rank,
        degree,
        orbit_sizes,
        divisible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_checks() {
        assert!(is_weyl(make_geiser().matrix()));
        assert!(PicAut::from_point_permutation(&[1, 0, 2]).is_ok());
        let mut d = identity(4);
        d[0][0] = 2;
        assert!(!is_weyl(&d));
        assert_eq!(PicAut::new(d), Err(WeylError::NotWeyl));
    }

    #[test]
    fn orders() {
        assert_eq!(order(&make_geiser(), ORDER_CAP), Order::Finite(2));
        assert_eq!(order(&PicAut::identity(5), ORDER_CAP), Order::Finite(1));
        let c3 = PicAut::from_point_permutation(&[1, 2, 0, 3, 4]).unwrap();
        assert_eq!(order(&c3, ORDER_CAP), Order::Finite(3));
    }

    #[test]
    fn char_poly_of_identity() {
        let p = char_poly(&PicAut::identity(1));
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn cycle_decomposition() {
        assert_eq!(cycles(&[1, 0, 2]), vec![vec![0, 1], vec![2]]);
    }
}
