//! Random search over edge weights of a digraph template.
//!
//! Each sample draws free magnitudes uniformly from `[0, 1)` (plus a uniform
//! phase in the complex domain), rescales every qubit to unit norm, and
//! records `(F, P)`. Samples are split into fixed-size chunks; chunk `c` draws
//! from ChaCha8 seeded with the master seed on stream `c`, so results do not
//! depend on how chunks are spread over threads.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::catalog;
use crate::detlike::{eta_det_auto, Amplitude, ComplexMatrix, Statistics};
use crate::error::{Error, Result};
use crate::scheme::{DeformedQubit, Scheme, Spin};
use crate::slocc::{SpinConfig, TargetClass, TargetState, DEGENERATE_NU, MAX_POST_SELECT_N, VANISHING_NG};
use crate::verify::sig12;

/// Samples per RNG stream.
pub const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightDomain {
    NonnegativeReal,
    Complex,
}

/// One edge `qubit → (region, spin)`; its amplitude is `phase · weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slot {
    pub qubit: usize,
    pub region: usize,
    pub spin: Spin,
    pub phase: Amplitude,
}

impl Slot {
    pub fn new(qubit: usize, region: usize, spin: Spin) -> Self {
        Self { qubit, region, spin, phase: Complex64::new(1.0, 0.0) }
    }

    /// Column name used in trade-off CSV files.
    pub fn column(&self) -> String {
        format!("w_q{}_r{}_{}", self.qubit, self.region, self.spin.as_char())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub n: usize,
    pub stats: Statistics,
    pub free: Vec<Slot>,
    /// Edges with frozen amplitudes; they are never rescaled.
    pub fixed: Vec<(Slot, Amplitude)>,
    pub domain: WeightDomain,
}

impl Template {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_POST_SELECT_N {
            return Err(Error::InvalidConfig(format!("template size {} out of range", self.n)));
        }
        for s in self.free.iter().chain(self.fixed.iter().map(|(s, _)| s)) {
            if s.qubit >= self.n || s.region >= self.n {
                return Err(Error::InvalidConfig(format!(
                    "slot q{} r{} outside a {}-qubit template",
                    s.qubit, s.region, self.n
                )));
            }
        }
        for q in 0..self.n {
            let fixed: f64 = self.fixed.iter().filter(|(s, _)| s.qubit == q).map(|(_, a)| a.norm_sqr()).sum();
            let has_free = self.free.iter().any(|s| s.qubit == q);
            if !has_free && (fixed - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!("qubit {q} has no free edge and fixed norm {fixed}")));
            }
            if has_free && fixed > 1.0 + 1e-9 {
                return Err(Error::InvalidConfig(format!("qubit {q} fixed norm {fixed} exceeds 1")));
            }
        }
        Ok(())
    }

    /// Every edge of `s` as a free slot, keeping each amplitude's phase.
    pub fn from_scheme(s: &Scheme) -> Self {
        let free = s
            .qubits()
            .iter()
            .enumerate()
            .flat_map(|(q, dq)| {
                dq.amps().map(move |((region, spin), a)| Slot { qubit: q, region, spin, phase: a / a.norm() })
            })
            .collect();
        Self { n: s.n(), stats: s.stats(), free, fixed: Vec::new(), domain: WeightDomain::NonnegativeReal }
    }

    /// Every edge of `s` frozen; sampling then always returns `s` itself.
    pub fn frozen(s: &Scheme) -> Self {
        let fixed = s
            .qubits()
            .iter()
            .enumerate()
            .flat_map(|(q, dq)| dq.amps().map(move |((region, spin), a)| (Slot::new(q, region, spin), a)))
            .collect();
        Self { n: s.n(), stats: s.stats(), free: Vec::new(), fixed, domain: WeightDomain::NonnegativeReal }
    }

    /// Rescales raw free weights so each qubit has unit norm.
    pub fn normalize(&self, raw: &mut [Amplitude]) {
        let mut free_norm = vec![0.0; self.n];
        for (s, w) in self.free.iter().zip(raw.iter()) {
            free_norm[s.qubit] += w.norm_sqr();
        }
        let mut budget = vec![1.0; self.n];
        for (s, a) in &self.fixed {
            budget[s.qubit] -= a.norm_sqr();
        }
        for (s, w) in self.free.iter().zip(raw.iter_mut()) {
            let f = free_norm[s.qubit];
            *w = if f > 0.0 { *w * (budget[s.qubit].max(0.0) / f).sqrt() } else { Complex64::new(0.0, 0.0) };
        }
    }

    pub fn instantiate(&self, weights: &[Amplitude]) -> Result<Scheme> {
        if weights.len() != self.free.len() {
            return Err(Error::DimensionMismatch { expected: self.free.len(), found: weights.len() });
        }
        let mut per_qubit: Vec<Vec<((usize, Spin), Amplitude)>> = vec![Vec::new(); self.n];
        for (s, a) in &self.fixed {
            per_qubit[s.qubit].push(((s.region, s.spin), *a));
        }
        for (s, w) in self.free.iter().zip(weights) {
            per_qubit[s.qubit].push(((s.region, s.spin), s.phase * w));
        }
        Scheme::new(
            per_qubit.into_iter().enumerate().map(|(q, a)| DeformedQubit::new(q, a)).collect(),
            self.stats,
            "sampled",
        )
    }

    fn draw(&self, rng: &mut ChaCha8Rng, out: &mut [Amplitude]) {
        for w in out.iter_mut() {
            let mag: f64 = rng.random();
            *w = match self.domain {
                WeightDomain::NonnegativeReal => Complex64::new(mag, 0.0),
                WeightDomain::Complex => Complex64::from_polar(mag, rng.random_range(0.0..2.0 * PI)),
            };
        }
        self.normalize(out);
    }
}

/// Search templates: all-edges digraphs for W and Dicke, the catalog topology for GHZ and cluster.
pub fn templates_for(class: TargetClass, n: usize, stats: Statistics) -> Result<Template> {
    let t = match class {
        TargetClass::W | TargetClass::Dicke => {
            if n < 2 {
                return Err(Error::TooSmall { n, min: 2 });
            }
            if class == TargetClass::Dicke && n % 2 == 1 {
                return Err(Error::OddN { n });
            }
            let spin = |q: usize| match class {
                TargetClass::W if q == 0 => Spin::Up,
                TargetClass::W => Spin::Down,
                _ if q < n / 2 => Spin::Up,
                _ => Spin::Down,
            };
            let free = (0..n).flat_map(|q| (0..n).map(move |r| Slot::new(q, r, spin(q)))).collect();
            Template { n, stats, free, fixed: Vec::new(), domain: WeightDomain::NonnegativeReal }
        }
        TargetClass::Ghz => Template::from_scheme(&catalog::ghz_scheme(n, stats)?),
        TargetClass::Cluster => Template::from_scheme(&catalog::cluster_scheme(n, stats)?),
        TargetClass::Bell => return Err(Error::UnsupportedClass("bell".into())),
    };
    t.validate()?;
    Ok(t)
}

/// `(row, col, amplitude index)` of one weight-matrix entry.
type Entry = (usize, usize, usize);

/// Fast `(F, P)` for one template, reusing precomputed structure across samples.
pub struct Evaluator {
    n: usize,
    stats: Statistics,
    /// Per feasible config: (config, matrix entries).
    configs: Vec<(SpinConfig, Vec<Entry>)>,
    /// `(position in configs, conj(target amplitude))`.
    target: Vec<(usize, Amplitude)>,
    /// Nonzero `(region, spin)` labels per qubit, as amplitude indices.
    support: Vec<Vec<usize>>,
    free_index: Vec<usize>,
    fixed: Vec<(usize, Amplitude)>,
    phases: Vec<Amplitude>,
    amps: Vec<Amplitude>,
    matrix: ComplexMatrix,
    gram: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fidelity: f64,
    pub probability: f64,
}

impl Evaluator {
    pub fn new(t: &Template, target: &TargetState) -> Result<Self> {
        t.validate()?;
        if target.n != t.n {
            return Err(Error::DimensionMismatch { expected: t.n, found: target.n });
        }
        let n = t.n;
        let idx = |q: usize, r: usize, s: Spin| (q * n + r) * 2 + s as usize;
        let mut present = vec![false; n * n * 2];
        for s in t.free.iter().chain(t.fixed.iter().map(|(s, _)| s)) {
            present[idx(s.qubit, s.region, s.spin)] = true;
        }

        let mut configs = Vec::new();
        for k in 0..1u32 << n {
            let cfg = SpinConfig(k);
            let entries: Vec<(usize, usize, usize)> = (0..n)
                .flat_map(|r| (0..n).map(move |q| (r, q)))
                .filter(|&(r, q)| present[idx(q, r, cfg.spin(r))])
                .map(|(r, q)| (r, q, idx(q, r, cfg.spin(r))))
                .collect();
            if has_perfect_matching(n, &entries) {
                configs.push((cfg, entries));
            }
        }
        let target_terms = target
            .amps
            .iter()
            .filter_map(|(k, a)| configs.iter().position(|(c, _)| c == k).map(|p| (p, a.conj())))
            .collect();
        let support = (0..n)
            .map(|q| {
                (0..n).flat_map(|r| [Spin::Up, Spin::Down].map(|s| idx(q, r, s))).filter(|&i| present[i]).collect()
            })
            .collect();

        Ok(Self {
            n,
            stats: t.stats,
            configs,
            target: target_terms,
            support,
            free_index: t.free.iter().map(|s| idx(s.qubit, s.region, s.spin)).collect(),
            fixed: t.fixed.iter().map(|(s, a)| (idx(s.qubit, s.region, s.spin), *a)).collect(),
            phases: t.free.iter().map(|s| s.phase).collect(),
            amps: vec![Complex64::new(0.0, 0.0); n * n * 2],
            matrix: ComplexMatrix::zeros(n),
            gram: ComplexMatrix::zeros(n),
        })
    }

    /// Number of spin configurations that can ever have nonzero amplitude.
    pub fn feasible_configs(&self) -> usize {
        self.configs.len()
    }

    /// `None` when post-selection never succeeds for these weights.
    pub fn evaluate(&mut self, weights: &[Amplitude]) -> Option<Evaluation> {
        let zero = Complex64::new(0.0, 0.0);
        self.amps.iter_mut().for_each(|a| *a = zero);
        for &(i, a) in &self.fixed {
            self.amps[i] = a;
        }
        for ((&i, p), w) in self.free_index.iter().zip(&self.phases).zip(weights) {
            self.amps[i] += p * w;
        }

        let mut n_g = 0.0;
        let mut overlap = zero;
        let mut s_values = Vec::with_capacity(self.configs.len());
        for (_, entries) in &self.configs {
            for r in 0..self.n {
                for q in 0..self.n {
                    self.matrix[(r, q)] = zero;
                }
            }
            for &(r, q, i) in entries {
                self.matrix[(r, q)] = self.amps[i];
            }
            let s = eta_det_auto(&self.matrix, self.stats).expect("order checked by template");
            n_g += s.norm_sqr();
            s_values.push(s);
        }
        for &(p, t) in &self.target {
            overlap += t * s_values[p];
        }
        if n_g < VANISHING_NG {
            return None;
        }

        for i in 0..self.n {
            for j in 0..self.n {
                let mut g = zero;
                for &a in &self.support[i] {
                    // both qubits index the same (region, spin) offset within their block
                    let off = a - i * self.n * 2;
                    g += self.amps[a].conj() * self.amps[j * self.n * 2 + off];
                }
                self.gram[(i, j)] = g;
            }
        }
        let nu = eta_det_auto(&self.gram, self.stats).expect("order checked by template").re;
        if nu <= DEGENERATE_NU {
            return None;
        }
        Some(Evaluation { fidelity: (overlap.norm_sqr() / n_g).min(1.0), probability: n_g / nu })
    }
}

fn has_perfect_matching(n: usize, entries: &[(usize, usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(r, q, _) in entries {
        adj[r].push(q);
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(r: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &q in &adj[r] {
            if !seen[q] {
                seen[q] = true;
                if owner[q].is_none_or(|r2| augment(r2, adj, seen, owner)) {
                    owner[q] = Some(r);
                    return true;
                }
            }
        }
        false
    }
    (0..n).all(|r| augment(r, &adj, &mut vec![false; n], &mut owner))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealConfig {
    pub initial_temperature: f64,
    pub cooling: f64,
    pub steps: u64,
    /// Standard deviation of the Gaussian kick applied to each free weight.
    pub step_size: f64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self { initial_temperature: 0.05, cooling: 0.9995, steps: 10_000, step_size: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub samples: u64,
    pub seed: u64,
    pub bin_width: f64,
    pub anneal: Option<AnnealConfig>,
}

impl SearchConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, bin_width: 0.01, anneal: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if !(self.bin_width > 0.0 && self.bin_width <= 1.0) {
            return Err(Error::InvalidConfig(format!("bin width {} outside (0, 1]", self.bin_width)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    pub fidelity_bin_low: f64,
    pub fidelity_bin_high: f64,
    pub max_probability: f64,
    /// Fidelity of the achieving sample.
    pub fidelity: f64,
    /// Normalized free weights of the achieving sample.
    pub best_weights: Vec<Amplitude>,
    /// Global index of the achieving raw sample; `None` when annealing found it.
    pub sample: Option<u64>,
}

#[derive(Debug, Clone)]
struct Best {
    probability: f64,
    fidelity: f64,
    sample: Option<u64>,
    weights: Vec<Amplitude>,
}

impl Best {
    fn beats(&self, other: &Best) -> bool {
        // raw samples tie-break on the lower index so any chunk order gives the same answer
        self.probability > other.probability
            || (self.probability == other.probability
                && self.sample.unwrap_or(u64::MAX) < other.sample.unwrap_or(u64::MAX))
    }
}

fn merge(mut acc: Vec<Option<Best>>, other: Vec<Option<Best>>) -> Vec<Option<Best>> {
    for (slot, o) in acc.iter_mut().zip(other) {
        if let Some(o) = o {
            if slot.as_ref().is_none_or(|s| o.beats(s)) {
                *slot = Some(o);
            }
        }
    }
    acc
}

fn bin_count(threshold: f64, width: f64) -> usize {
    (((1.0 - threshold) / width) - 1e-9).ceil().max(1.0) as usize
}

fn bin_of(f: f64, threshold: f64, width: f64, bins: usize) -> usize {
    (((f - threshold) / width).floor() as usize).min(bins - 1)
}

fn run_chunk(
    t: &Template,
    target: &TargetState,
    threshold: f64,
    cfg: &SearchConfig,
    chunk: u64,
    bins: usize,
) -> Vec<Option<Best>> {
    let mut eval = Evaluator::new(t, target).expect("validated by caller");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk);
    let mut best: Vec<Option<Best>> = vec![None; bins];
    let mut w = vec![Complex64::new(0.0, 0.0); t.free.len()];
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(cfg.samples);
    for sample in start..end {
        t.draw(&mut rng, &mut w);
        let Some(e) = eval.evaluate(&w) else { continue };
        if e.fidelity < threshold {
            continue;
        }
        let b = bin_of(e.fidelity, threshold, cfg.bin_width, bins);
        if best[b].as_ref().is_none_or(|x| e.probability > x.probability) {
            best[b] = Some(Best {
                probability: e.probability,
                fidelity: e.fidelity,
                sample: Some(sample),
                weights: w.clone(),
            });
        }
    }
    best
}

/// Per-bin maximum probability over `cfg.samples` random weightings with `F ≥ threshold`.
///
/// With `cfg.anneal` set, bins are then refined from the top down: each bin's
/// chain starts from the better of its own best point and the refined point of
/// the bin above, and must keep `F` at or above the bin's lower edge. Every
/// point the chains evaluate is credited to whichever bin it falls in.
pub fn sample_tradeoff(
    t: &Template,
    target: &TargetState,
    threshold: f64,
    cfg: &SearchConfig,
) -> Result<Vec<TradeoffPoint>> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidConfig(format!("threshold {threshold} outside [0, 1]")));
    }
    Evaluator::new(t, target)?;
    let bins = bin_count(threshold, cfg.bin_width);
    let chunks = cfg.samples.div_ceil(CHUNK);

    #[cfg(feature = "parallel")]
    let mut best = {
        use rayon::prelude::*;
        (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(t, target, threshold, cfg, c, bins))
            .reduce(|| vec![None; bins], merge)
    };
    #[cfg(not(feature = "parallel"))]
    let mut best = (0..chunks).map(|c| run_chunk(t, target, threshold, cfg, c, bins)).fold(vec![None; bins], merge);

    if best.iter().all(Option::is_none) {
        return Err(Error::EmptyResult);
    }

    if let (Some(a), false) = (cfg.anneal, t.free.is_empty()) {
        let mut carry: Option<Best> = None;
        for i in (0..bins).rev() {
            let low = threshold + i as f64 * cfg.bin_width;
            let start = match (&best[i], &carry) {
                (Some(x), Some(c)) => Some(if c.probability > x.probability { c.clone() } else { x.clone() }),
                (Some(x), None) => Some(x.clone()),
                (None, Some(c)) => Some(c.clone()),
                (None, None) => None,
            };
            let Some(start) = start else { continue };
            let mut record = |w: &[Amplitude], e: Evaluation| {
                let b = bin_of(e.fidelity, threshold, cfg.bin_width, bins);
                if best[b].as_ref().is_none_or(|x| e.probability > x.probability) {
                    best[b] = Some(Best {
                        probability: e.probability,
                        fidelity: e.fidelity,
                        sample: None,
                        weights: w.to_vec(),
                    });
                }
            };
            let stream = u64::MAX - 1 - i as u64;
            let (w, f, p) = anneal(t, target, low, cfg.seed, stream, &a, &start, &mut record)?;
            carry = Some(Best { probability: p, fidelity: f, sample: None, weights: w });
        }
    }

    Ok(best
        .into_iter()
        .enumerate()
        .filter_map(|(i, b)| {
            b.map(|b| TradeoffPoint {
                fidelity_bin_low: threshold + i as f64 * cfg.bin_width,
                fidelity_bin_high: (threshold + (i + 1) as f64 * cfg.bin_width).min(1.0),
                max_probability: b.probability,
                fidelity: b.fidelity,
                best_weights: b.weights,
                sample: b.sample,
            })
        })
        .collect())
}

/// Highest probability over the whole curve.
pub fn global_max(points: &[TradeoffPoint]) -> Option<&TradeoffPoint> {
    points.iter().fold(None, |acc: Option<&TradeoffPoint>, p| match acc {
        Some(a) if a.max_probability >= p.max_probability => Some(a),
        _ => Some(p),
    })
}

#[derive(Debug, Clone)]
pub struct Optimum {
    pub scheme: Scheme,
    pub weights: Vec<Amplitude>,
    pub fidelity: f64,
    pub probability: f64,
}

/// Best point subject to `F ≥ threshold`, then optional annealing on the weights.
pub fn optimize_max_prob(t: &Template, target: &TargetState, threshold: f64, cfg: &SearchConfig) -> Result<Optimum> {
    let points = sample_tradeoff(t, target, threshold, cfg)?;
    let top = global_max(&points).expect("nonempty");
    let mut start = Best {
        probability: top.max_probability,
        fidelity: top.fidelity,
        sample: top.sample,
        weights: top.best_weights.clone(),
    };
    if let (Some(a), false) = (cfg.anneal, t.free.is_empty()) {
        let (w, f, p) = anneal(t, target, threshold, cfg.seed, u64::MAX, &a, &start, &mut |_, _| {})?;
        start = Best { probability: p, fidelity: f, sample: None, weights: w };
    }
    Ok(Optimum {
        scheme: t.instantiate(&start.weights)?,
        weights: start.weights,
        fidelity: start.fidelity,
        probability: start.probability,
    })
}

/// Metropolis search on the free weights, accepting only `F ≥ floor`.
///
/// Temperatures are relative to the starting probability; the Gaussian kick
/// shrinks with the square root of the temperature, down to a tenth of
/// `step_size`. `record` sees every proposal that clears the floor.
#[allow(clippy::too_many_arguments)]
fn anneal(
    t: &Template,
    target: &TargetState,
    floor: f64,
    seed: u64,
    stream: u64,
    a: &AnnealConfig,
    start: &Best,
    record: &mut dyn FnMut(&[Amplitude], Evaluation),
) -> Result<(Vec<Amplitude>, f64, f64)> {
    let mut eval = Evaluator::new(t, target)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");

    let p0 = start.probability.max(1e-12);
    let (mut cur, mut cur_p) = (start.weights.clone(), start.probability);
    let (mut best, mut best_f, mut best_p) = (start.weights.clone(), start.fidelity, start.probability);
    let mut temp = a.initial_temperature;
    let mut prop = cur.clone();
    for _ in 0..a.steps {
        let sigma = a.step_size * (temp / a.initial_temperature).sqrt().max(0.1);
        for (p, c) in prop.iter_mut().zip(&cur) {
            *p = match t.domain {
                WeightDomain::NonnegativeReal => Complex64::new((c.re + sigma * unit.sample(&mut rng)).abs(), 0.0),
                WeightDomain::Complex => {
                    c + Complex64::new(sigma * unit.sample(&mut rng), sigma * unit.sample(&mut rng))
                }
            };
        }
        t.normalize(&mut prop);
        if let Some(e) = eval.evaluate(&prop) {
            if e.fidelity >= floor {
                record(&prop, e);
                let delta = (e.probability - cur_p) / p0;
                if delta >= 0.0 || rng.random::<f64>() < (delta / temp).exp() {
                    cur.clone_from(&prop);
                    cur_p = e.probability;
                    if e.probability > best_p {
                        best.clone_from(&prop);
                        best_f = e.fidelity;
                        best_p = e.probability;
                    }
                }
            }
        }
        temp = (temp * a.cooling).max(1e-12);
    }
    Ok((best, best_f, best_p))
}

fn format_weight(w: Amplitude, domain: WeightDomain) -> String {
    match domain {
        WeightDomain::NonnegativeReal => sig12(w.re),
        WeightDomain::Complex => format!("{}{}{}i", sig12(w.re), if w.im < 0.0 { "-" } else { "+" }, sig12(w.im.abs())),
    }
}

/// Writes the trade-off CSV: bin bounds, maximum probability, then one column per free slot.
pub fn write_tradeoff_csv<W: Write>(mut out: W, t: &Template, points: &[TradeoffPoint]) -> Result<()> {
    let mut header = vec!["fidelity_bin_low".to_string(), "fidelity_bin_high".into(), "max_probability".into()];
    header.extend(t.free.iter().map(Slot::column));
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let mut row = vec![sig12(p.fidelity_bin_low), sig12(p.fidelity_bin_high), sig12(p.max_probability)];
        row.extend(p.best_weights.iter().map(|w| format_weight(*w, t.domain)));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
