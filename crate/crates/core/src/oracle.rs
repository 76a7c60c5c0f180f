//! Brute-force reference in first quantization.
//!
//! The deformed N-particle state is built as an explicit (anti)symmetrized
//! tensor over `n` slots, each slot holding one of `2n` single-particle
//! labels `(region, spin)`. Post-selection is a literal projector onto tuples
//! whose regions are a permutation of `0..n`. Nothing here uses the
//! η-determinant kernels or the Gram matrix.

use num_complex::Complex64;

use crate::detlike::{Amplitude, Statistics};
use crate::error::{Error, Result};
use crate::scheme::{Scheme, Spin};
use crate::slocc::{PostSelectedState, SpinConfig};

pub const MAX_ORACLE_N: usize = 5;

/// Dense `(2n)^n` amplitude array; slot 0 is the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub amps: Vec<Amplitude>,
}

#[inline]
fn label(region: usize, spin: Spin) -> usize {
    2 * region + spin as usize
}

impl DenseState {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Flat index of a tuple of single-particle labels.
    pub fn index(&self, labels: &[usize]) -> usize {
        labels.iter().fold(0, |acc, &l| acc * self.dim() + l)
    }

    pub fn labels(&self, mut index: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = vec![0; self.n];
        for slot in (0..self.n).rev() {
            out[slot] = index % d;
            index /= d;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// The same state with tensor slots `a` and `b` exchanged.
    pub fn swap_slots(&self, a: usize, b: usize) -> DenseState {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            let mut l = self.labels(i);
            l.swap(a, b);
            out[self.index(&l)] = *amp;
        }
        DenseState { n: self.n, amps: out }
    }
}

/// All permutations of `0..n` with their inversion parity.
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                go(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut perms = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (p, inversions % 2 == 1)
        })
        .collect()
}

/// `Σ_P η^P ⊗_i φ_{P(i)}`, unnormalized.
pub fn symmetrize(s: &Scheme) -> Result<DenseState> {
    let n = s.n();
    if n > MAX_ORACLE_N {
        return Err(Error::OrderTooLarge { order: n, max: MAX_ORACLE_N });
    }
    let d = 2 * n;
    let single: Vec<Vec<(usize, Amplitude)>> =
        s.qubits().iter().map(|q| q.amps().map(|((r, spin), a)| (label(r, spin), a)).collect()).collect();
    let mut amps = vec![Complex64::new(0.0, 0.0); d.pow(n as u32)];
    for (perm, odd) in permutations(n) {
        let sign = if odd && s.stats() == Statistics::Fermion { -1.0 } else { 1.0 };
        // slot i holds particle perm[i]
        let mut partial: Vec<(usize, Amplitude)> = vec![(0, Complex64::new(sign, 0.0))];
        for &particle in &perm {
            let mut next = Vec::with_capacity(partial.len() * single[particle].len());
            for &(idx, a) in &partial {
                for &(l, b) in &single[particle] {
                    next.push((idx * d + l, a * b));
                }
            }
            partial = next;
        }
        for (idx, a) in partial {
            amps[idx] += a;
        }
    }
    Ok(DenseState { n, amps })
}

/// Post-selection by explicit projection; `nu` is reported as total norm² / n!.
pub fn post_select_bruteforce(s: &Scheme) -> Result<PostSelectedState> {
    let psi = symmetrize(s)?;
    let n = s.n();
    let total = psi.norm_sqr();

    let mut projected = 0.0;
    for (i, a) in psi.amps.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let mut seen = vec![false; n];
        if psi.labels(i).iter().all(|l| !std::mem::replace(&mut seen[l / 2], true)) {
            projected += a.norm_sqr();
        }
    }

    // read one amplitude per spin configuration, regions in slot order
    let mut raw = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (k, slot) in raw.iter_mut().enumerate() {
        let cfg = SpinConfig(k as u32);
        let labels: Vec<usize> = (0..n).map(|r| label(r, cfg.spin(r))).collect();
        *slot = psi.amps[psi.index(&labels)];
    }

    let n_g: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
    if n_g < crate::slocc::VANISHING_NG || projected == 0.0 {
        return Err(Error::VanishingState);
    }
    let orderings: f64 = (1..=n).map(|x| x as f64).product();
    let scale = 1.0 / n_g.sqrt();
    Ok(PostSelectedState {
        n,
        amps: raw.into_iter().map(|a| a * scale).collect(),
        n_g,
        nu: total / orderings,
        probability: projected / total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scheme::DeformedQubit;
    use crate::scheme::Spin::Up as U;
    use approx::assert_abs_diff_eq;
    use Statistics::{Boson, Fermion};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn permutation_parities() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().filter(|(_, odd)| *odd).count(), 3);
    }

    #[test]
    fn slater_pair() {
        let s = Scheme::new(
            vec![DeformedQubit::new(0, [((0, U), re(1.0))]), DeformedQubit::new(1, [((1, U), re(1.0))])],
            Fermion,
            "pair",
        )
        .unwrap();
        let psi = symmetrize(&s).unwrap();
        assert_abs_diff_eq!(psi.norm_sqr(), 2.0, epsilon = 1e-15);
        let a = psi.amps[psi.index(&[0, 2])];
        let b = psi.amps[psi.index(&[2, 0])];
        assert_eq!(a, re(1.0));
        assert_eq!(b, re(-1.0));
    }

    #[test]
    fn pauli_exclusion() {
        let q = DeformedQubit::new(0, [((0, U), re(FRAC)), ((1, U), re(FRAC))]);
        let s = Scheme::new(vec![q.clone(), DeformedQubit::new(1, q.amps())], Fermion, "same").unwrap();
        assert_eq!(symmetrize(&s).unwrap().norm_sqr(), 0.0);
        assert!(matches!(post_select_bruteforce(&s), Err(Error::VanishingState)));
    }

    const FRAC: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn exchange_symmetry() {
        for stats in [Boson, Fermion] {
            let psi = symmetrize(&catalog::w_star(3, stats).unwrap()).unwrap();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let swapped = psi.swap_slots(a, b);
                for (x, y) in psi.amps.iter().zip(&swapped.amps) {
                    assert!((x * stats.eta() - y).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn published_values() {
        let out = post_select_bruteforce(&catalog::w_complete(3, Boson).unwrap()).unwrap();
        assert_abs_diff_eq!(out.probability, 2.0 / 9.0, epsilon = 1e-12);
        let out = post_select_bruteforce(&catalog::w_star(3, Fermion).unwrap()).unwrap();
        assert_abs_diff_eq!(out.probability, 1.0 / 3.0, epsilon = 1e-12);
        let out = post_select_bruteforce(&catalog::bell_remote(Boson)).unwrap();
        assert_abs_diff_eq!(out.probability, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn too_large() {
        let s = catalog::ghz_scheme(6, Boson).unwrap();
        assert!(matches!(symmetrize(&s), Err(Error::OrderTooLarge { order: 6, max: 5 })));
    }

    #[test]
    fn index_round_trip() {
        let psi = DenseState { n: 3, amps: vec![] };
        for i in [0, 5, 77, 215] {
            assert_eq!(psi.index(&psi.labels(i)), i);
        }
    }
}
