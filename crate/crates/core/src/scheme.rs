//! Generation schemes: deformed single-particle states and their graph views.
//!
//! A [`Scheme`] lists, for each of the `n` source particles, the amplitude of
//! finding it in detection region `j` with pseudospin `s`. Storage is
//! source-major. The weight matrix for a spin assignment `σ` puts detection
//! regions on rows and source particles on columns, `m[i][j] = <R_i σ_i | φ_j>`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detlike::{permutation_sign, Amplitude, ComplexMatrix, Statistics};
use crate::error::{Error, Result};

/// Tolerance on `Σ|amp|² = 1` for every deformed particle.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Matching enumeration skips zero entries, so sparse schemes stay cheap well past the naive kernel's limit.
pub const MAX_MATCHING_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Spin::Up => 'u',
            Spin::Down => 'd',
        }
    }

    pub fn from_char(c: char) -> Option<Spin> {
        match c {
            'u' | 'U' => Some(Spin::Up),
            'd' | 'D' => Some(Spin::Down),
            _ => None,
        }
    }
}

/// Parses a spin string such as `"udd"`; region 0 is the leftmost character.
pub fn parse_spins(s: &str) -> Result<Vec<Spin>> {
    s.chars()
        .enumerate()
        .map(|(i, c)| {
            Spin::from_char(c).ok_or_else(|| {
                Error::InvalidConfig(format!("invalid spin character `{c}` at position {i} (expected 'u' or 'd')"))
            })
        })
        .collect()
}

pub fn spins_to_string(spins: &[Spin]) -> String {
    spins.iter().map(|s| s.as_char()).collect()
}

/// One particle after its deformation: amplitude per (region, spin).
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedQubit {
    pub source_id: usize,
    amps: BTreeMap<(usize, Spin), Amplitude>,
}

impl DeformedQubit {
    /// Collects amplitudes, summing repeated keys and dropping exact zeros.
    pub fn new(source_id: usize, amps: impl IntoIterator<Item = ((usize, Spin), Amplitude)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in amps {
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        map.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        Self { source_id, amps: map }
    }

    #[inline]
    pub fn amp(&self, region: usize, spin: Spin) -> Amplitude {
        self.amps.get(&(region, spin)).copied().unwrap_or_default()
    }

    pub fn amps(&self) -> impl Iterator<Item = ((usize, Spin), Amplitude)> + '_ {
        self.amps.iter().map(|(k, v)| (*k, *v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `<self|other>`.
    pub fn overlap(&self, other: &DeformedQubit) -> Amplitude {
        self.amps.iter().filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b)).sum()
    }

    /// Multiplies every amplitude by `c`.
    pub fn scaled(&self, c: Amplitude) -> Self {
        Self::new(self.source_id, self.amps().map(|(k, v)| (k, v * c)))
    }
}

/// N deformed particles, N detection regions, and the particle statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    n: usize,
    qubits: Vec<DeformedQubit>,
    stats: Statistics,
    pub label: String,
}

impl Scheme {
    /// Validates and builds a scheme. Amplitudes are never renormalized here.
    pub fn new(qubits: Vec<DeformedQubit>, stats: Statistics, label: impl Into<String>) -> Result<Self> {
        let n = qubits.len();
        if n == 0 {
            return Err(Error::InvalidScheme("a scheme needs at least one particle".into()));
        }
        for (i, q) in qubits.iter().enumerate() {
            for ((region, _), a) in q.amps() {
                if region >= n {
                    return Err(Error::InvalidScheme(format!(
                        "qubit {i} has amplitude on region {region}, but only {n} regions exist"
                    )));
                }
                if !(a.re.is_finite() && a.im.is_finite()) {
                    return Err(Error::InvalidScheme(format!(
                        "qubit {i} has a non-finite amplitude on region {region}"
                    )));
                }
            }
            let norm = q.norm_sqr();
            if q.amps.is_empty() || (norm - 1.0).abs() > UNITARITY_TOL {
                return Err(Error::NotNormalized { qubit: i, norm });
            }
        }
        Ok(Self { n, qubits, stats, label: label.into() })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn stats(&self) -> Statistics {
        self.stats
    }

    pub fn qubits(&self) -> &[DeformedQubit] {
        &self.qubits
    }

    /// Same deformations, other statistics.
    pub fn with_stats(&self, stats: Statistics) -> Self {
        Self { stats, ..self.clone() }
    }

    /// Swaps two entries of the particle list.
    pub fn with_swapped_qubits(&self, a: usize, b: usize) -> Self {
        let mut s = self.clone();
        s.qubits.swap(a, b);
        s
    }

    /// Multiplies one particle's amplitudes by a unit-modulus phase.
    pub fn with_phase(&self, qubit: usize, phase: f64) -> Self {
        let mut s = self.clone();
        s.qubits[qubit] = s.qubits[qubit].scaled(Complex64::from_polar(1.0, phase));
        s
    }

    /// Relabels regions: amplitude on region `r` moves to `perm[r]`.
    pub fn with_relabelled_regions(&self, perm: &[usize]) -> Self {
        let mut s = self.clone();
        s.qubits = self
            .qubits
            .iter()
            .map(|q| DeformedQubit::new(q.source_id, q.amps().map(|((r, sp), a)| ((perm[r], sp), a))))
            .collect();
        s
    }

    /// True if some region receives amplitude from at least two particles.
    pub fn has_spatial_overlap(&self) -> bool {
        (0..self.n).any(|r| self.qubits.iter().filter(|q| q.amps().any(|((reg, _), _)| reg == r)).count() >= 2)
    }
}

/// Directed edge `from → to` carrying a spin colour and a complex weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub spin: Spin,
    pub weight: Amplitude,
}

/// Coloured, weighted digraph with self-loops; node `u_i` pairs particle `i`
/// with region `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl Digraph {
    /// Number of distinct source nodes with an edge into `node` (a self-loop counts once).
    pub fn in_degree(&self, node: usize) -> usize {
        let mut sources: Vec<usize> = self.edges.iter().filter(|e| e.to == node).map(|e| e.from).collect();
        sources.sort_unstable();
        sources.dedup();
        sources.len()
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == node)
    }
}

pub fn scheme_to_digraph(s: &Scheme) -> Digraph {
    let edges = s
        .qubits
        .iter()
        .enumerate()
        .flat_map(|(i, q)| q.amps().map(move |((to, spin), weight)| Edge { from: i, to, spin, weight }))
        .collect();
    Digraph { n: s.n, edges }
}

pub fn digraph_to_scheme(g: &Digraph, stats: Statistics) -> Result<Scheme> {
    for e in &g.edges {
        if e.from >= g.n || e.to >= g.n {
            return Err(Error::InvalidScheme(format!(
                "edge {} -> {} references a node outside 0..{}",
                e.from, e.to, g.n
            )));
        }
    }
    let qubits: Vec<DeformedQubit> =
        (0..g.n).map(|i| DeformedQubit::new(i, g.out_edges(i).map(|e| ((e.to, e.spin), e.weight)))).collect();
    for (i, q) in qubits.iter().enumerate() {
        let norm = q.norm_sqr();
        if (norm - 1.0).abs() > UNITARITY_TOL {
            return Err(Error::NotNormalized { qubit: i, norm });
        }
    }
    Scheme::new(qubits, stats, "digraph")
}

/// The weight matrix `R_σ` for one spin assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub sigma: Vec<Spin>,
    pub m: ComplexMatrix,
}

pub fn weight_matrix(s: &Scheme, sigma: &[Spin]) -> Result<WeightMatrix> {
    if sigma.len() != s.n {
        return Err(Error::SpinLengthMismatch { expected: s.n, found: sigma.len() });
    }
    let mut m = ComplexMatrix::zeros(s.n);
    for (j, q) in s.qubits.iter().enumerate() {
        for ((region, spin), a) in q.amps() {
            if sigma[region] == spin {
                m[(region, j)] = a;
            }
        }
    }
    Ok(WeightMatrix { sigma: sigma.to_vec(), m })
}

/// Gram matrix `G[i][j] = <φ_i|φ_j>` of the deformed particles.
pub fn gram(s: &Scheme) -> ComplexMatrix {
    let n = s.n;
    let mut g = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = s.qubits[i].overlap(&s.qubits[j]);
        }
    }
    g
}

/// One perfect matching of the bigraph: region `i` is matched with particle `perm[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub perm: Vec<usize>,
    pub product: Amplitude,
    /// `η^π`
    pub sign: f64,
}

/// Every perfect matching with a nonzero weight product, in lexicographic order.
pub fn perfect_matchings(s: &Scheme, sigma: &[Spin]) -> Result<Vec<Matching>> {
    if s.n > MAX_MATCHING_ORDER {
        return Err(Error::OrderTooLarge { order: s.n, max: MAX_MATCHING_ORDER });
    }
    let w = weight_matrix(s, sigma)?;
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(s.n);
    collect_matchings(&w.m, s.stats, &mut perm, 0, Complex64::new(1.0, 0.0), &mut out);
    Ok(out)
}

fn collect_matchings(
    m: &ComplexMatrix,
    stats: Statistics,
    perm: &mut Vec<usize>,
    used: u32,
    acc: Complex64,
    out: &mut Vec<Matching>,
) {
    let n = m.order();
    let row = perm.len();
    if row == n {
        out.push(Matching { perm: perm.clone(), product: acc, sign: permutation_sign(perm, stats) });
        return;
    }
    for j in 0..n {
        let z = m[(row, j)];
        if used & (1 << j) != 0 || z == Complex64::new(0.0, 0.0) {
            continue;
        }
        perm.push(j);
        collect_matchings(m, stats, perm, used | (1 << j), acc * z, out);
        perm.pop();
    }
}

/// `Σ η^π · product` over a matching list.
pub fn matching_total(matchings: &[Matching]) -> Amplitude {
    matchings.iter().map(|m| m.product * m.sign).sum()
}

// ---------------------------------------------------------------------------
// JSON file format

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    n: usize,
    statistics: Statistics,
    label: String,
    qubits: Vec<QubitRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QubitRecord {
    source_id: usize,
    amplitudes: Vec<AmplitudeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AmplitudeRecord {
    region: usize,
    spin: Spin,
    re: f64,
    im: f64,
}

impl Scheme {
    pub fn to_json(&self) -> String {
        let file = SchemeFile {
            n: self.n,
            statistics: self.stats,
            label: self.label.clone(),
            qubits: self
                .qubits
                .iter()
                .map(|q| QubitRecord {
                    source_id: q.source_id,
                    amplitudes: q
                        .amps()
                        .map(|((region, spin), a)| AmplitudeRecord { region, spin, re: a.re, im: a.im })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("scheme serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SchemeFile = serde_json::from_str(text)?;
        if file.qubits.len() != file.n {
            return Err(Error::InvalidScheme(format!(
                "field `n` is {} but {} qubits are listed",
                file.n,
                file.qubits.len()
            )));
        }
        let qubits = file
            .qubits
            .into_iter()
            .map(|q| {
                DeformedQubit::new(
                    q.source_id,
                    q.amplitudes.into_iter().map(|a| ((a.region, a.spin), Complex64::new(a.re, a.im))),
                )
            })
            .collect();
        Scheme::new(qubits, file.statistics, file.label)
    }
}
