//! The statistics-dependent determinant-like function `|M|_η`.
//!
//! For bosons (`η = +1`) this is the permanent, for fermions (`η = -1`) the
//! determinant. Every post-selected amplitude and every normalization in the
//! crate reduces to one of these.
//!
//! Three evaluation routes exist:
//!
//! * [`eta_det`]: Ryser's inclusion-exclusion formula (Gray-code ordered,
//!   `O(2^N N)`) for bosons and partially pivoted LU elimination (`O(N^3)`)
//!   for fermions.
//! * [`eta_det_naive`]: the direct `N!` permutation sum, kept as the reference.
//! * [`eta_det_sparse`]: depth-first expansion over nonzero entries, which is
//!   exact and much cheaper when every row has only a handful of nonzeros.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A probability amplitude.
pub type Amplitude = Complex64;

/// Largest order accepted by the fast paths.
pub const MAX_ORDER: usize = 16;
/// Largest order accepted by the permutation-sum reference.
pub const MAX_NAIVE_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// Exchange factor: `+1` for bosons, `-1` for fermions.
    #[inline]
    pub fn eta(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }

    /// `η^k`.
    #[inline]
    pub fn eta_pow(self, k: usize) -> f64 {
        match self {
            Statistics::Fermion if k % 2 == 1 => -1.0,
            _ => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boson" | "bosons" | "b" => Ok(Statistics::Boson),
            "fermion" | "fermions" | "f" => Ok(Statistics::Fermion),
            other => Err(Error::InvalidConfig(format!("unknown statistics `{other}` (expected boson|fermion)"))),
        }
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    order: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        Self { order, data: vec![Complex64::new(0.0, 0.0); order * order] }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged or empty input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NonSquare { rows: 0, row: 0, cols: 0 });
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare { rows: n, row: i, cols: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { order: n, data })
    }

    /// Convenience constructor for real-valued matrices.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.order;
        for j in 0..n {
            self.data.swap(a * n + j, b * n + j);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: Complex64) {
        let n = self.order;
        for v in &mut self.data[i * n..(i + 1) * n] {
            *v *= c;
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.order;
        (0..n).all(|i| (0..n).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.order).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.order + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.order + j]
    }
}

/// `|m|_η` through the fast paths.
pub fn eta_det(m: &ComplexMatrix, stats: Statistics) -> Result<Amplitude> {
    check_order(m, MAX_ORDER)?;
    Ok(match stats {
        Statistics::Boson => permanent_ryser(m),
        Statistics::Fermion => determinant_lu(m),
    })
}

/// `|m|_η` as the explicit sum over all `N!` permutations with sign `η^P`.
pub fn eta_det_naive(m: &ComplexMatrix, stats: Statistics) -> Result<Amplitude> {
    check_order(m, MAX_NAIVE_ORDER)?;
    let n = m.order();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    permutation_sum(m, stats, &mut perm, 0, 1.0, &mut total);
    Ok(total)
}

/// `|m|_η` by depth-first expansion over the nonzero entries of each row.
///
/// Exact for any input; its cost is bounded by the product of per-row nonzero
/// counts, so it beats Ryser only on sparse matrices.
pub fn eta_det_sparse(m: &ComplexMatrix, stats: Statistics) -> Result<Amplitude> {
    check_order(m, MAX_ORDER)?;
    let rows = nonzero_rows(m);
    Ok(expand(&rows, stats, 0, 0, Complex64::new(1.0, 0.0)))
}

/// Picks whichever exact route is cheapest for this matrix.
pub fn eta_det_auto(m: &ComplexMatrix, stats: Statistics) -> Result<Amplitude> {
    check_order(m, MAX_ORDER)?;
    let rows = nonzero_rows(m);
    if rows.iter().any(|r| r.is_empty()) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    match stats {
        Statistics::Fermion => Ok(determinant_lu(m)),
        Statistics::Boson => {
            let n = m.order();
            let ryser_cost = (1u64 << n) * n as u64;
            let mut expand_cost = 1u64;
            for r in &rows {
                expand_cost = expand_cost.saturating_mul(r.len() as u64);
            }
            if expand_cost <= ryser_cost {
                Ok(expand(&rows, stats, 0, 0, Complex64::new(1.0, 0.0)))
            } else {
                Ok(permanent_ryser(m))
            }
        }
    }
}

fn check_order(m: &ComplexMatrix, max: usize) -> Result<()> {
    if m.order() > max {
        return Err(Error::OrderTooLarge { order: m.order(), max });
    }
    Ok(())
}

fn permutation_sum(
    m: &ComplexMatrix,
    stats: Statistics,
    perm: &mut [usize],
    k: usize,
    sign: f64,
    total: &mut Complex64,
) {
    let n = perm.len();
    if k == n {
        let mut prod = Complex64::new(sign, 0.0);
        for (i, &j) in perm.iter().enumerate() {
            prod *= m[(i, j)];
        }
        *total += prod;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        // each non-trivial swap is a transposition
        let s = if i == k { sign } else { sign * stats.eta() };
        permutation_sum(m, stats, perm, k + 1, s, total);
        perm.swap(k, i);
    }
}

fn permanent_ryser(m: &ComplexMatrix) -> Complex64 {
    let n = m.order();
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut in_set = vec![false; n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut set_size = 0usize;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        if in_set[j] {
            in_set[j] = false;
            set_size -= 1;
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, j)];
            }
        } else {
            in_set[j] = true;
            set_size += 1;
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, j)];
            }
        }
        let prod = row_sums.iter().fold(Complex64::new(1.0, 0.0), |acc, s| acc * s);
        if set_size.is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

fn determinant_lu(m: &ComplexMatrix) -> Complex64 {
    let n = m.order();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (pivot, best) =
            (col..n).map(|r| (r, a[(r, col)].norm())).fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for r in col + 1..n {
            let factor = a[(r, col)] / p;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col + 1..n {
                let v = a[(col, c)];
                a[(r, c)] -= factor * v;
            }
        }
    }
    det
}

fn nonzero_rows(m: &ComplexMatrix) -> Vec<Vec<(usize, Complex64)>> {
    (0..m.order())
        .map(|i| {
            m.row(i).iter().enumerate().filter(|(_, z)| **z != Complex64::new(0.0, 0.0)).map(|(j, z)| (j, *z)).collect()
        })
        .collect()
}

fn expand(rows: &[Vec<(usize, Complex64)>], stats: Statistics, row: usize, used: u32, acc: Complex64) -> Complex64 {
    if row == rows.len() {
        return acc;
    }
    let mut total = Complex64::new(0.0, 0.0);
    for &(j, z) in &rows[row] {
        if used & (1 << j) != 0 {
            continue;
        }
        // columns already taken to the right of j each add one inversion
        let inversions = (used >> (j + 1)).count_ones() as usize;
        let term = acc * z * stats.eta_pow(inversions);
        total += expand(rows, stats, row + 1, used | (1 << j), term);
    }
    total
}

/// Sign `η^π` of a permutation given in one-line notation.
pub fn permutation_sign(perm: &[usize], stats: Statistics) -> f64 {
    let n = perm.len();
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    stats.eta_pow(inversions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const B: Statistics = Statistics::Boson;
    const F: Statistics = Statistics::Fermion;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
            .collect();
        ComplexMatrix::from_rows(rows).unwrap()
    }

    // Cofactor expansion along the first row; independent of every route above.
    fn laplace(m: &ComplexMatrix) -> Complex64 {
        let n = m.order();
        if n == 1 {
            return m[(0, 0)];
        }
        let mut total = c(0.0);
        for j in 0..n {
            let minor_rows: Vec<Vec<Complex64>> =
                (1..n).map(|i| (0..n).filter(|&k| k != j).map(|k| m[(i, k)]).collect()).collect();
            let minor = ComplexMatrix::from_rows(minor_rows).unwrap();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += m[(0, j)] * sign * laplace(&minor);
        }
        total
    }

    #[test]
    fn identity_permanent_is_one() {
        let v = eta_det(&ComplexMatrix::identity(3), B).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn all_ones_two_by_two() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_abs_diff_eq!(eta_det(&m, B).unwrap().re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eta_det(&m, F).unwrap().norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn uniform_three_by_three_permanent() {
        let a = 1.0 / 3f64.sqrt();
        let m = ComplexMatrix::from_real_rows(&vec![vec![a; 3]; 3]).unwrap();
        // six permutations, each contributing a^3
        let oracle = eta_det_naive(&m, B).unwrap();
        assert_abs_diff_eq!(oracle.re, 6.0 * a * a * a, epsilon = 1e-14);
        assert_abs_diff_eq!(oracle.re, 1.154_700_538_379_251_5, epsilon = 1e-14);
        let fast = eta_det(&m, B).unwrap();
        assert_abs_diff_eq!(fast.re, oracle.re, epsilon = 1e-14);
        assert_abs_diff_eq!(fast.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn naive_small_cases() {
        assert_abs_diff_eq!(eta_det_naive(&ComplexMatrix::identity(2), F).unwrap().re, 1.0);
        let swap = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(eta_det_naive(&swap, F).unwrap().re, -1.0);
        assert_abs_diff_eq!(eta_det_naive(&swap, B).unwrap().re, 1.0);
    }

    #[test]
    fn random_four_by_four_fermion_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 4);
            let lu = eta_det(&m, F).unwrap();
            assert!((lu - eta_det_naive(&m, F).unwrap()).norm() < 1e-12);
            assert!((lu - laplace(&m)).norm() < 1e-12);
        }
    }

    #[test]
    fn order_limits() {
        let big = ComplexMatrix::zeros(17);
        assert!(matches!(eta_det(&big, B), Err(Error::OrderTooLarge { order: 17, max: 16 })));
        let nine = ComplexMatrix::zeros(9);
        assert!(matches!(eta_det_naive(&nine, F), Err(Error::OrderTooLarge { order: 9, max: 8 })));
        assert!(eta_det(&ComplexMatrix::zeros(16), F).is_ok());
    }

    #[test]
    fn ragged_rows_rejected() {
        let r = ComplexMatrix::from_rows(vec![vec![c(1.0), c(2.0)], vec![c(3.0)]]);
        assert!(matches!(r, Err(Error::NonSquare { rows: 2, row: 1, cols: 1 })));
        assert!(matches!(ComplexMatrix::from_rows(vec![]), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn sparse_and_auto_routes_agree_with_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=7 {
            for _ in 0..20 {
                let mut m = random_matrix(&mut rng, n);
                for i in 0..n {
                    for j in 0..n {
                        if rng.random_bool(0.5) {
                            m[(i, j)] = c(0.0);
                        }
                    }
                }
                for s in [B, F] {
                    let reference = eta_det_naive(&m, s).unwrap();
                    assert!((eta_det_sparse(&m, s).unwrap() - reference).norm() < 1e-12);
                    assert!((eta_det_auto(&m, s).unwrap() - reference).norm() < 1e-12);
                }
            }
        }
    }

    fn matrix_strategy() -> impl Strategy<Value = ComplexMatrix> {
        (1usize..=6).prop_flat_map(|n| {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
                let rows = v.chunks(n).map(|r| r.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).collect();
                ComplexMatrix::from_rows(rows).unwrap()
            })
        })
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-10 * (1.0 + a.norm().max(b.norm()))
    }

    proptest! {
        #[test]
        fn fast_matches_naive(m in matrix_strategy()) {
            for s in [B, F] {
                prop_assert!(close(eta_det(&m, s).unwrap(), eta_det_naive(&m, s).unwrap()));
            }
        }

        #[test]
        fn transpose_invariance(m in matrix_strategy()) {
            for s in [B, F] {
                prop_assert!(close(eta_det(&m.transpose(), s).unwrap(), eta_det(&m, s).unwrap()));
            }
        }

        #[test]
        fn row_swap_sign(m in matrix_strategy(), a in 0usize..6, b in 0usize..6) {
            let n = m.order();
            let (a, b) = (a % n, b % n);
            prop_assume!(a != b);
            let mut swapped = m.clone();
            swapped.swap_rows(a, b);
            for s in [B, F] {
                let expected = eta_det(&m, s).unwrap() * s.eta();
                prop_assert!(close(eta_det(&swapped, s).unwrap(), expected));
            }
        }

        #[test]
        fn row_scaling(m in matrix_strategy(), row in 0usize..6, re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let row = row % m.order();
            let k = Complex64::new(re, im);
            let mut scaled = m.clone();
            scaled.scale_row(row, k);
            for s in [B, F] {
                prop_assert!(close(eta_det(&scaled, s).unwrap(), eta_det(&m, s).unwrap() * k));
            }
        }
    }
}
