//! sLOCC post-selection: one particle per detection region, blind to pseudospin.
//!
//! For every spin configuration `σ_k` the unnormalized amplitude is
//! `S_k = |R_σk|_η`. The output state is `S_k / √N_g` with
//! `N_g = Σ_k |S_k|²`, and the success probability is `N_g / ν`, where
//! `ν = |G|_η` is the η-determinant of the Gram matrix of deformed states
//! (the self-overlap of the unnormalized N-particle state).

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detlike::{eta_det_auto, Amplitude, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scheme::{gram, Scheme, Spin};

/// Largest particle count accepted by [`post_select`].
pub const MAX_POST_SELECT_N: usize = 12;
/// `N_g` below this is treated as an exact zero (every `|S_k| < 1e-10`).
pub const VANISHING_NG: f64 = 1e-20;
/// `ν` at or below this means the deformed states are linearly dependent.
pub const DEGENERATE_NU: f64 = 1e-12;

/// Spin configuration over the detection regions; bit `i` set means region `i` saw spin down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinConfig(pub u32);

impl SpinConfig {
    pub fn from_spins(spins: &[Spin]) -> Self {
        SpinConfig(spins.iter().enumerate().filter(|(_, s)| **s == Spin::Down).fold(0, |acc, (i, _)| acc | (1 << i)))
    }

    #[inline]
    pub fn spin(self, region: usize) -> Spin {
        if self.0 >> region & 1 == 1 {
            Spin::Down
        } else {
            Spin::Up
        }
    }

    pub fn spins(self, n: usize) -> Vec<Spin> {
        (0..n).map(|i| self.spin(i)).collect()
    }

    /// `'u'`/`'d'` string, region 0 leftmost.
    pub fn to_string(self, n: usize) -> String {
        (0..n).map(|i| self.spin(i).as_char()).collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::from_spins(&crate::scheme::parse_spins(s)?))
    }

    /// Number of regions that detected spin up.
    pub fn ups(self, n: usize) -> usize {
        n - (self.0 & mask(n)).count_ones() as usize
    }
}

#[inline]
fn mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectedState {
    pub n: usize,
    /// Normalized amplitudes indexed by `SpinConfig.0`; length `2^n`.
    pub amps: Vec<Amplitude>,
    /// `Σ_k |S_k|²` before normalization.
    pub n_g: f64,
    pub nu: f64,
    pub probability: f64,
}

impl PostSelectedState {
    /// Builds a state from raw `S_k` values and the success probability.
    pub fn from_raw(n: usize, raw: Vec<Amplitude>, nu: f64) -> Result<Self> {
        debug_assert_eq!(raw.len(), 1 << n);
        let n_g: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
        if n_g < VANISHING_NG {
            return Err(Error::VanishingState);
        }
        if nu <= DEGENERATE_NU {
            return Err(Error::DegenerateNorm { nu });
        }
        let scale = 1.0 / n_g.sqrt();
        let amps = raw.into_iter().map(|a| a * scale).collect();
        Ok(Self { n, amps, n_g, nu, probability: n_g / nu })
    }

    #[inline]
    pub fn amp(&self, k: SpinConfig) -> Amplitude {
        self.amps[k.0 as usize]
    }

    /// Configurations with amplitude magnitude above `tol`.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = (SpinConfig, Amplitude)> + '_ {
        self.amps.iter().enumerate().filter(move |(_, a)| a.norm() > tol).map(|(k, a)| (SpinConfig(k as u32), *a))
    }

    pub fn to_json(&self) -> String {
        let rec = StateRecord {
            n: self.n,
            n_g: self.n_g,
            nu: self.nu,
            probability: self.probability,
            amplitudes: self
                .support(0.0)
                .map(|(k, a)| ConfigAmplitude { config: k.to_string(self.n), re: a.re, im: a.im })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: StateRecord = serde_json::from_str(text)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << rec.n];
        for a in rec.amplitudes {
            if a.config.chars().count() != rec.n {
                return Err(Error::InvalidConfig(format!("config `{}` does not have {} characters", a.config, rec.n)));
            }
            amps[SpinConfig::parse(&a.config)?.0 as usize] = Complex64::new(a.re, a.im);
        }
        Ok(Self { n: rec.n, amps, n_g: rec.n_g, nu: rec.nu, probability: rec.probability })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StateRecord {
    n: usize,
    n_g: f64,
    nu: f64,
    probability: f64,
    amplitudes: Vec<ConfigAmplitude>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConfigAmplitude {
    config: String,
    re: f64,
    im: f64,
}

/// Projects the deformed state onto one-particle-per-region outcomes.
pub fn post_select(s: &Scheme) -> Result<PostSelectedState> {
    let n = s.n();
    if n > MAX_POST_SELECT_N {
        return Err(Error::OrderTooLarge { order: n, max: MAX_POST_SELECT_N });
    }
    let stats = s.stats();

    // which spins reach each region at all
    let mut reachable = vec![[false; 2]; n];
    for q in s.qubits() {
        for ((r, spin), _) in q.amps() {
            reachable[r][spin as usize] = true;
        }
    }

    let mut raw = vec![Complex64::new(0.0, 0.0); 1 << n];
    let mut m = ComplexMatrix::zeros(n);
    for (k, slot) in raw.iter_mut().enumerate() {
        let cfg = SpinConfig(k as u32);
        if (0..n).any(|r| !reachable[r][cfg.spin(r) as usize]) {
            continue;
        }
        for (j, q) in s.qubits().iter().enumerate() {
            for r in 0..n {
                m[(r, j)] = q.amp(r, cfg.spin(r));
            }
        }
        *slot = eta_det_auto(&m, stats)?;
    }

    let nu = self_overlap(s)?;
    PostSelectedState::from_raw(n, raw, nu)
}

/// `ν = |G|_η`, the norm² of the unnormalized N-particle deformed state.
pub fn self_overlap(s: &Scheme) -> Result<f64> {
    let nu = eta_det_auto(&gram(s), s.stats())?;
    if nu.im.abs() > 1e-10 * nu.re.abs().max(1.0) {
        return Err(Error::InvalidScheme(format!(
            "Gram η-determinant has a non-negligible imaginary part {:e}",
            nu.im
        )));
    }
    Ok(nu.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetClass {
    Bell,
    W,
    Dicke,
    Ghz,
    Cluster,
}

impl TargetClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetClass::Bell => "bell",
            TargetClass::W => "w",
            TargetClass::Dicke => "dicke",
            TargetClass::Ghz => "ghz",
            TargetClass::Cluster => "cluster",
        }
    }
}

impl fmt::Display for TargetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TargetClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bell" => Ok(TargetClass::Bell),
            "w" => Ok(TargetClass::W),
            "dicke" => Ok(TargetClass::Dicke),
            "ghz" => Ok(TargetClass::Ghz),
            "cluster" => Ok(TargetClass::Cluster),
            other => Err(Error::UnsupportedClass(other.to_string())),
        }
    }
}

/// A canonical target state, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    pub class: TargetClass,
    pub n: usize,
    pub amps: Vec<(SpinConfig, Amplitude)>,
}

impl TargetState {
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn amp(&self, k: SpinConfig) -> Amplitude {
        self.amps.iter().find(|(c, _)| *c == k).map(|(_, a)| *a).unwrap_or_default()
    }
}

pub fn make_target(class: TargetClass, n: usize) -> Result<TargetState> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    if n > MAX_POST_SELECT_N {
        return Err(Error::OrderTooLarge { order: n, max: MAX_POST_SELECT_N });
    }
    let all_down = mask(n);
    let uniform = |configs: Vec<u32>| {
        let a = Complex64::new(1.0 / (configs.len() as f64).sqrt(), 0.0);
        configs.into_iter().map(|k| (SpinConfig(k), a)).collect::<Vec<_>>()
    };
    let amps = match class {
        TargetClass::Bell | TargetClass::Ghz => {
            if class == TargetClass::Bell && n != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: n });
            }
            uniform(vec![0, all_down])
        }
        TargetClass::W => uniform((0..n).map(|i| all_down & !(1 << i)).collect()),
        TargetClass::Dicke => {
            if n % 2 == 1 {
                return Err(Error::OddN { n });
            }
            uniform((0..=all_down).filter(|k| k.count_ones() as usize == n / 2).collect())
        }
        TargetClass::Cluster => {
            if n % 2 == 1 {
                return Err(Error::OddN { n });
            }
            let h = n / 2;
            let first_half = mask(h);
            let second_half = all_down & !first_half;
            let half = Complex64::new(0.5, 0.0);
            vec![
                (SpinConfig(0), half),
                (SpinConfig(all_down), -half),
                // up on the first half, down on the second
                (SpinConfig(second_half), half),
                (SpinConfig(first_half), half),
            ]
        }
    };
    Ok(TargetState { class, n, amps })
}

/// Pure-state fidelity `|<t|out>|²`.
pub fn fidelity(out: &PostSelectedState, t: &TargetState) -> Result<f64> {
    if out.n != t.n {
        return Err(Error::DimensionMismatch { expected: t.n, found: out.n });
    }
    let overlap: Complex64 = t.amps.iter().map(|(k, a)| a.conj() * out.amp(*k)).sum();
    Ok(overlap.norm_sqr().min(1.0))
}

/// Fidelity above which the output is certified genuinely `n`-partite entangled.
pub fn genuine_threshold(class: TargetClass, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let nf = n as f64;
    match class {
        TargetClass::W => Ok((nf - 1.0) / nf),
        TargetClass::Dicke => {
            if n % 2 == 1 {
                Err(Error::OddN { n })
            } else {
                Ok(nf / (2.0 * (nf - 1.0)))
            }
        }
        TargetClass::Ghz | TargetClass::Cluster => Ok(0.5),
        TargetClass::Bell => Err(Error::UnsupportedClass("bell".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// `<out| P |out>` for a Pauli string given as (region, operator) pairs.
///
/// `σ_z` is `|↓⟩⟨↓| − |↑⟩⟨↑|`, so spin down is the `+1` eigenvector.
pub fn pauli_expectation(out: &PostSelectedState, ops: &[(usize, Pauli)]) -> f64 {
    let mut flip = 0u32;
    for &(q, p) in ops {
        if matches!(p, Pauli::X | Pauli::Y) {
            flip |= 1 << q;
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (k, a) in out.amps.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        // P|k> = phase |k ^ flip>
        let mut phase = Complex64::new(1.0, 0.0);
        for &(q, p) in ops {
            let down = (k >> q) & 1 == 1;
            match p {
                Pauli::X => {}
                // Y = i(|↑⟩⟨↓| − |↓⟩⟨↑|) in the (↑, ↓) basis
                Pauli::Y => phase *= if down { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) },
                Pauli::Z => phase *= if down { 1.0 } else { -1.0 },
            }
        }
        total += out.amps[k ^ flip as usize].conj() * phase * a;
    }
    total.re
}

/// `<σ_x^{R_i} σ_z^{R_{i+1}}>` for `i = 0..n-1`.
pub fn cluster_stabilizer_check(out: &PostSelectedState) -> Vec<f64> {
    (0..out.n.saturating_sub(1)).map(|i| pauli_expectation(out, &[(i, Pauli::X), (i + 1, Pauli::Z)])).collect()
}

/// Expectations of a generating set of the even-`n` cluster target's stabilizer group.
///
/// Generators: `Z_j Z_{j+1}` inside each half, `X^{⊗ first half} Z_{n-1}` and
/// `Z_0 X^{⊗ second half}`. The ideal target gives `+1` on the first `n − 2`
/// and `−1` on the last two.
pub fn cluster_target_stabilizers(out: &PostSelectedState) -> Result<Vec<f64>> {
    let n = out.n;
    if n % 2 == 1 {
        return Err(Error::OddN { n });
    }
    let h = n / 2;
    let mut values = Vec::with_capacity(n);
    for j in (0..h - 1).chain(h..n - 1) {
        values.push(pauli_expectation(out, &[(j, Pauli::Z), (j + 1, Pauli::Z)]));
    }
    let mut xa: Vec<(usize, Pauli)> = (0..h).map(|q| (q, Pauli::X)).collect();
    xa.push((n - 1, Pauli::Z));
    values.push(pauli_expectation(out, &xa));
    let mut xb: Vec<(usize, Pauli)> = (h..n).map(|q| (q, Pauli::X)).collect();
    xb.push((0, Pauli::Z));
    values.push(pauli_expectation(out, &xb));
    Ok(values)
}

/// Rotates amplitudes so the largest-magnitude entry (lowest index among near-ties) is real positive.
pub fn align_global_phase(amps: &[Amplitude]) -> Vec<Amplitude> {
    let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return amps.to_vec();
    }
    let pivot = amps.iter().find(|a| a.norm() >= max - 1e-9).expect("max exists");
    let rot = pivot.conj() / pivot.norm();
    amps.iter().map(|a| a * rot).collect()
}

/// Largest entrywise difference after aligning both states to the canonical gauge.
pub fn phase_aligned_distance(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    let a = align_global_phase(a);
    let b = align_global_phase(b);
    a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detlike::Statistics::{self, Boson, Fermion};
    use crate::scheme::DeformedQubit;
    use crate::scheme::Spin::{Down as D, Up as U};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn complete(spins: &[Spin], stats: Statistics) -> Scheme {
        let n = spins.len();
        let a = re(1.0 / (n as f64).sqrt());
        Scheme::new(
            (0..n).map(|i| DeformedQubit::new(i, (0..n).map(|r| ((r, spins[i]), a)))).collect(),
            stats,
            "complete",
        )
        .unwrap()
    }

    fn ghz(n: usize, stats: Statistics) -> Scheme {
        let h = 1.0 / 2f64.sqrt();
        Scheme::new(
            (0..n)
                .map(|i| {
                    let fwd = if i + 1 < n { stats.eta() } else { 1.0 };
                    DeformedQubit::new(i, [((i, U), re(h)), (((i + 1) % n, D), re(fwd * h))])
                })
                .collect(),
            stats,
            "ghz",
        )
        .unwrap()
    }

    fn state_from(target: &TargetState) -> PostSelectedState {
        let mut amps = vec![re(0.0); 1 << target.n];
        for (k, a) in &target.amps {
            amps[k.0 as usize] = *a;
        }
        PostSelectedState { n: target.n, amps, n_g: 1.0, nu: 1.0, probability: 1.0 }
    }

    #[test]
    fn spin_config_bits() {
        let k = SpinConfig::parse("udd").unwrap();
        assert_eq!(k.0, 0b110);
        assert_eq!(k.to_string(3), "udd");
        assert_eq!(k.ups(3), 1);
        assert_eq!(SpinConfig::from_spins(&[D, U]), SpinConfig(1));
    }

    #[test]
    fn complete_w_three_bosons() {
        let out = post_select(&complete(&[U, D, D], Boson)).unwrap();
        assert_abs_diff_eq!(out.probability, 2.0 / 9.0, epsilon = 1e-12);
        let w = make_target(TargetClass::W, 3).unwrap();
        assert_abs_diff_eq!(fidelity(&out, &w).unwrap(), 1.0, epsilon = 1e-12);
        for cfg in ["udd", "dud", "ddu"] {
            assert_abs_diff_eq!(out.amp(SpinConfig::parse(cfg).unwrap()).re, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn complete_w_fermions_vanish() {
        assert!(matches!(post_select(&complete(&[U, D, D], Fermion)), Err(Error::VanishingState)));
    }

    #[test]
    fn ghz_four_bosons() {
        let out = post_select(&ghz(4, Boson)).unwrap();
        assert_abs_diff_eq!(out.probability, 0.125, epsilon = 1e-12);
        let h = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(out.amp(SpinConfig(0)).norm(), h, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amp(SpinConfig(0b1111)).norm(), h, epsilon = 1e-12);
    }

    #[test]
    fn localized_particles_always_succeed() {
        let same = Scheme::new(
            vec![DeformedQubit::new(0, [((0, U), re(1.0))]), DeformedQubit::new(1, [((1, U), re(1.0))])],
            Fermion,
            "localized",
        )
        .unwrap();
        let out = post_select(&same).unwrap();
        assert_eq!(out.nu, 1.0);
        assert_eq!(out.probability, 1.0);
    }

    #[test]
    fn fidelity_examples() {
        let w = make_target(TargetClass::W, 3).unwrap();
        assert_abs_diff_eq!(fidelity(&state_from(&w), &w).unwrap(), 1.0, epsilon = 1e-15);
        let w4 = make_target(TargetClass::W, 4).unwrap();
        assert!(matches!(fidelity(&state_from(&w), &w4), Err(Error::DimensionMismatch { expected: 4, found: 3 })));
    }

    #[test]
    fn thresholds() {
        assert_abs_diff_eq!(genuine_threshold(TargetClass::W, 4).unwrap(), 0.75);
        assert_abs_diff_eq!(genuine_threshold(TargetClass::Dicke, 4).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        for n in 2..9 {
            assert_eq!(genuine_threshold(TargetClass::Ghz, n).unwrap(), 0.5);
        }
        assert_eq!(genuine_threshold(TargetClass::Cluster, 6).unwrap(), 0.5);
        assert!(matches!(genuine_threshold(TargetClass::Bell, 2), Err(Error::UnsupportedClass(_))));
        assert!(matches!(genuine_threshold(TargetClass::Dicke, 5), Err(Error::OddN { n: 5 })));
    }

    #[test]
    fn targets() {
        let w = make_target(TargetClass::W, 3).unwrap();
        assert_eq!(w.amps.len(), 3);
        assert!(w.amps.iter().all(|(_, a)| (a.re - 1.0 / 3f64.sqrt()).abs() < 1e-15));
        let d = make_target(TargetClass::Dicke, 4).unwrap();
        assert_eq!(d.amps.len(), 6);
        assert!(d.amps.iter().all(|(k, a)| k.ups(4) == 2 && (a.re - 1.0 / 6f64.sqrt()).abs() < 1e-15));
        let g = make_target(TargetClass::Ghz, 2).unwrap();
        let bell = make_target(TargetClass::Bell, 2).unwrap();
        assert_eq!(g.amps, bell.amps);
        assert!(matches!(make_target(TargetClass::Dicke, 3), Err(Error::OddN { n: 3 })));
        assert!(matches!(make_target(TargetClass::Cluster, 5), Err(Error::OddN { n: 5 })));
        for class in [TargetClass::W, TargetClass::Ghz, TargetClass::Cluster, TargetClass::Dicke] {
            for n in [2, 4, 6, 8] {
                assert_abs_diff_eq!(make_target(class, n).unwrap().norm_sqr(), 1.0, epsilon = 1e-12);
            }
        }
        let c = make_target(TargetClass::Cluster, 4).unwrap();
        assert_eq!(c.amp(SpinConfig::parse("uuuu").unwrap()), re(0.5));
        assert_eq!(c.amp(SpinConfig::parse("dddd").unwrap()), re(-0.5));
        assert_eq!(c.amp(SpinConfig::parse("uudd").unwrap()), re(0.5));
        assert_eq!(c.amp(SpinConfig::parse("dduu").unwrap()), re(0.5));
    }

    #[test]
    fn ghz_target_fails_stabilizer_check() {
        let v = cluster_stabilizer_check(&state_from(&make_target(TargetClass::Ghz, 4).unwrap()));
        assert_eq!(v.len(), 3);
        assert!(v.iter().any(|x| x.abs() < 1.0 - 1e-9));
    }

    #[test]
    fn neighbouring_stabilizer_terms_anticommute() {
        // X_0 Z_1 and X_1 Z_2 anticommute, so no state reaches |<.>| = 1 on both;
        // (<A> + <B>)^2 <= 2 for anticommuting involutions bounds their sum.
        for class in [TargetClass::Cluster, TargetClass::Ghz, TargetClass::W] {
            let v = cluster_stabilizer_check(&state_from(&make_target(class, 4).unwrap()));
            assert!(v[0] * v[0] + v[1] * v[1] <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn cluster_target_generators_are_stabilizers() {
        for n in [2usize, 4, 6, 8] {
            let s = state_from(&make_target(TargetClass::Cluster, n).unwrap());
            let v = cluster_target_stabilizers(&s).unwrap();
            assert_eq!(v.len(), n);
            for x in &v[..n - 2] {
                assert_abs_diff_eq!(*x, 1.0, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(v[n - 2], -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(v[n - 1], -1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn uniform_state_expectations_bounded() {
        let n = 4;
        let a = re(1.0 / 4.0);
        let s = PostSelectedState { n, amps: vec![a; 16], n_g: 1.0, nu: 1.0, probability: 1.0 };
        for v in cluster_stabilizer_check(&s) {
            assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v));
        }
    }

    #[test]
    fn pauli_y_convention() {
        // |↑> is the -1 eigenvector of σ_z here; Y|↑> = -i|↓> ... check <+i|Y|+i> = 1 for (|↑> + i|↓>)/√2
        let h = 1.0 / 2f64.sqrt();
        let s =
            PostSelectedState { n: 1, amps: vec![re(h), Complex64::new(0.0, h)], n_g: 1.0, nu: 1.0, probability: 1.0 };
        let y = pauli_expectation(&s, &[(0, Pauli::Y)]);
        assert_abs_diff_eq!(y.abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pauli_expectation(&s, &[(0, Pauli::Z)]), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn state_json_round_trip() {
        let out = post_select(&complete(&[U, D, D], Boson)).unwrap();
        let back = PostSelectedState::from_json(&out.to_json()).unwrap();
        assert_eq!(back.n, 3);
        assert!(phase_aligned_distance(&back.amps, &out.amps) < 1e-15);
        assert_eq!(back.probability, out.probability);
        let v: serde_json::Value = serde_json::from_str(&out.to_json()).unwrap();
        assert!(v["amplitudes"].as_array().unwrap().iter().all(|a| a["config"].as_str().unwrap().len() == 3));
    }

    fn random_scheme(n: usize, stats: Statistics, seed: u64) -> Scheme {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let qubits = (0..n)
            .map(|i| {
                let mut raw = Vec::new();
                for k in (0..n).flat_map(|r| [(r, U), (r, D)]) {
                    if rng.random_bool(0.6) {
                        raw.push((k, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
                    }
                }
                let raw = if raw.is_empty() { vec![((i, U), re(1.0))] } else { raw };
                let norm: f64 = raw.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
                DeformedQubit::new(i, raw.into_iter().map(|(k, a)| (k, a / norm)))
            })
            .collect();
        Scheme::new(qubits, stats, "random").unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn probability_in_unit_interval(n in 2usize..=4, fermion: bool, seed: u64) {
            let stats = if fermion { Fermion } else { Boson };
            match post_select(&random_scheme(n, stats, seed)) {
                Ok(out) => {
                    prop_assert!(out.probability >= -1e-12 && out.probability <= 1.0 + 1e-9);
                    let norm: f64 = out.amps.iter().map(|a| a.norm_sqr()).sum();
                    prop_assert!((norm - 1.0).abs() < 1e-10);
                }
                Err(Error::VanishingState) | Err(Error::DegenerateNorm { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn particle_swap_and_phase_invariance(n in 2usize..=4, fermion: bool, seed: u64, a in 0usize..4, b in 0usize..4, phase in 0.0f64..std::f64::consts::TAU) {
            let stats = if fermion { Fermion } else { Boson };
            let s = random_scheme(n, stats, seed);
            let Ok(out) = post_select(&s) else { return Ok(()) };
            let swapped = post_select(&s.with_swapped_qubits(a % n, b % n)).unwrap();
            prop_assert!((swapped.probability - out.probability).abs() < 1e-10);
            let factor = if a % n != b % n { stats.eta() } else { 1.0 };
            for (x, y) in out.amps.iter().zip(&swapped.amps) {
                prop_assert!((x * factor - y).norm() < 1e-10);
            }
            let rotated = post_select(&s.with_phase(a % n, phase)).unwrap();
            prop_assert!((rotated.probability - out.probability).abs() < 1e-10);
            prop_assert!(phase_aligned_distance(&rotated.amps, &out.amps) < 1e-9);
        }
    }
}
