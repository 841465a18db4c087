//! Dense statevector simulator.
//!
//! Holds the full complex amplitude vector over an IN (x) OUT qubit
//! register and supplies exactly the gate set the sampling circuits need:
//! Hadamard, the switchable controlled phase, the real waveplate rotation
//! G(theta), table-driven oracle unitaries, exact Fourier blocks on
//! sub-registers, and seeded computational-basis sampling.
//!
//! Qubit 0 is the most significant bit of the basis label, matching the
//! left-to-right reading of bit strings everywhere else in the crate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::groups::FunctionTable;

const NORM_TOL: f64 = 1e-12;

/// Which physical qubits carry the input and output registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    in_qubits: Vec<usize>,
    out_qubits: Vec<usize>,
}

impl RegisterLayout {
    /// IN on qubits `0..n`, OUT on `n..n+m`.
    pub fn standard(n: u8, m: u8) -> Self {
        RegisterLayout {
            in_qubits: (0..n as usize).collect(),
            out_qubits: (n as usize..(n + m) as usize).collect(),
        }
    }

    pub fn new(in_qubits: Vec<usize>, out_qubits: Vec<usize>) -> Result<Self> {
        let n = in_qubits.len() + out_qubits.len();
        let mut seen = vec![false; n];
        for &q in in_qubits.iter().chain(&out_qubits) {
            if q >= n {
                return Err(Error::InvalidLayout(format!(
                    "qubit {q} outside 0..{n}"
                )));
            }
            if seen[q] {
                return Err(Error::InvalidLayout(format!("qubit {q} listed twice")));
            }
            seen[q] = true;
        }
        Ok(RegisterLayout {
            in_qubits,
            out_qubits,
        })
    }

    pub fn in_qubits(&self) -> &[usize] {
        &self.in_qubits
    }

    pub fn out_qubits(&self) -> &[usize] {
        &self.out_qubits
    }

    pub fn n_qubits(&self) -> usize {
        self.in_qubits.len() + self.out_qubits.len()
    }
}

/// One computational-basis sample split into register values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementRecord {
    pub in_bits: BitString,
    pub out_bits: BitString,
}

/// Normalized complex amplitudes over `2^n_qubits` basis states.
#[derive(Clone, Debug)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros basis state.
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1 && n_qubits <= 16, "unsupported qubit count");
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[0] = Complex64::ONE;
        Statevector { n_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::InvalidLayout(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let state = Statevector {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn mask(&self, q: usize) -> Result<usize> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(1usize << (self.n_qubits - 1 - q))
    }

    /// Single-qubit Hadamard.
    pub fn hadamard(&mut self, q: usize) -> Result<()> {
        let mask = self.mask(q)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a = self.amps[i];
                let b = self.amps[i | mask];
                self.amps[i] = s * (a + b);
                self.amps[i | mask] = s * (a - b);
            }
        }
        Ok(())
    }

    /// Switchable controlled phase: with `theta` on, basis states with both
    /// control and target set pick up a factor `e^{i pi/2} = i`; with it
    /// off the gate is the identity.
    pub fn controlled_phase(&mut self, control: usize, target: usize, theta: bool) -> Result<()> {
        if control == target {
            return Err(Error::InvalidLayout(
                "controlled phase needs distinct control and target".into(),
            ));
        }
        let cm = self.mask(control)?;
        let tm = self.mask(target)?;
        if !theta {
            return Ok(());
        }
        let phase = Complex64::I;
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm != 0 {
                self.amps[i] *= phase;
            }
        }
        Ok(())
    }

    /// The real waveplate rotation
    /// `G(theta) = [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]]`,
    /// which equals the Hadamard at `theta = pi/8`.
    pub fn g_gate(&mut self, q: usize, theta: f64) -> Result<()> {
        let mask = self.mask(q)?;
        let c = (2.0 * theta).cos();
        let s = (2.0 * theta).sin();
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a = self.amps[i];
                let b = self.amps[i | mask];
                self.amps[i] = c * a + s * b;
                self.amps[i | mask] = s * a - c * b;
            }
        }
        Ok(())
    }

    fn extract(&self, idx: usize, qubits: &[usize]) -> BitString {
        let mut v = 0u32;
        for &q in qubits {
            let bit = (idx >> (self.n_qubits - 1 - q)) & 1;
            v = (v << 1) | bit as u32;
        }
        BitString::new(v, qubits.len() as u8)
    }

    /// Oracle unitary `|x>|y> -> |x>|y XOR f(x)>`.  XOR on the OUT
    /// register keeps the map a permutation (and self-inverse) even for
    /// non-injective tables; on `|0>_OUT` it writes `f(x)` directly.
    pub fn oracle(&mut self, layout: &RegisterLayout, f: &FunctionTable) -> Result<()> {
        if layout.in_qubits.len() != f.n() as usize || layout.out_qubits.len() != f.m() as usize {
            return Err(Error::WidthMismatch {
                expected: f.n() + f.m(),
                actual: layout.n_qubits() as u8,
            });
        }
        if layout.n_qubits() != self.n_qubits {
            return Err(Error::InvalidLayout(format!(
                "layout covers {} qubits, state has {}",
                layout.n_qubits(),
                self.n_qubits
            )));
        }
        let out_masks: Vec<usize> = layout
            .out_qubits
            .iter()
            .map(|&q| 1usize << (self.n_qubits - 1 - q))
            .collect();
        let mut new = vec![Complex64::ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let x = self.extract(i, &layout.in_qubits);
            let fx = f.entry(x.index());
            let mut j = i;
            for (k, &om) in out_masks.iter().enumerate() {
                if (fx >> (out_masks.len() - 1 - k)) & 1 == 1 {
                    j ^= om;
                }
            }
            new[j] = a;
        }
        self.amps = new;
        Ok(())
    }

    fn qft_impl(&mut self, qubits: &[usize], inverse: bool) -> Result<()> {
        let k = qubits.len();
        if k == 0 {
            return Ok(());
        }
        let masks: Vec<usize> = qubits
            .iter()
            .map(|&q| self.mask(q))
            .collect::<Result<_>>()?;
        let mut seen = 0usize;
        for &m in &masks {
            if seen & m != 0 {
                return Err(Error::InvalidLayout("duplicate qubit in QFT block".into()));
            }
            seen |= m;
        }
        let n = 1usize << k;
        // scatter[j]: the full-index bits for sub-label j (qubits[0] = MSB)
        let scatter: Vec<usize> = (0..n)
            .map(|j| {
                let mut bits = 0usize;
                for (pos, &m) in masks.iter().enumerate() {
                    if (j >> (k - 1 - pos)) & 1 == 1 {
                        bits |= m;
                    }
                }
                bits
            })
            .collect();
        let sign = if inverse { -1.0 } else { 1.0 };
        let omega: Vec<Complex64> = (0..n)
            .map(|t| Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * t as f64 / n as f64))
            .collect();
        let scale = 1.0 / (n as f64).sqrt();
        let sub_mask = seen;
        let mut sub = vec![Complex64::ZERO; n];
        for base in 0..self.amps.len() {
            if base & sub_mask != 0 {
                continue;
            }
            for j in 0..n {
                sub[j] = self.amps[base | scatter[j]];
            }
            for (out, &sc) in scatter.iter().enumerate() {
                let mut acc = Complex64::ZERO;
                for (j, &v) in sub.iter().enumerate() {
                    acc += omega[(j * out) % n] * v;
                }
                self.amps[base | sc] = scale * acc;
            }
        }
        Ok(())
    }

    /// Exact discrete Fourier transform on the listed qubits, output in
    /// standard order: `|j> -> sum_k omega^{jk} |k> / sqrt(N)`.
    pub fn qft(&mut self, qubits: &[usize]) -> Result<()> {
        self.qft_impl(qubits, false)
    }

    /// Conjugate-transpose of [`Statevector::qft`].
    pub fn qft_inverse(&mut self, qubits: &[usize]) -> Result<()> {
        self.qft_impl(qubits, true)
    }

    /// Born probabilities over the full basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal distribution of the listed qubits (MSB-first label order).
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            self.mask(q)?;
        }
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[self.extract(i, qubits).index()] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projects the listed qubits onto `outcome`, returning the outcome
    /// probability and the renormalized post-measurement state.
    pub fn project(&self, qubits: &[usize], outcome: BitString) -> Result<(f64, Statevector)> {
        if outcome.width() as usize != qubits.len() {
            return Err(Error::WidthMismatch {
                expected: qubits.len() as u8,
                actual: outcome.width(),
            });
        }
        let mut prob = 0.0;
        let mut amps = vec![Complex64::ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if self.extract(i, qubits) == outcome {
                prob += a.norm_sqr();
                amps[i] = a;
            }
        }
        if prob <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / prob.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((
            prob,
            Statevector {
                n_qubits: self.n_qubits,
                amps,
            },
        ))
    }

    /// Exact joint distribution over (IN, OUT) register values.
    pub fn joint_distribution(
        &self,
        layout: &RegisterLayout,
    ) -> Result<Vec<((BitString, BitString), f64)>> {
        if layout.n_qubits() != self.n_qubits {
            return Err(Error::InvalidLayout(format!(
                "layout covers {} qubits, state has {}",
                layout.n_qubits(),
                self.n_qubits
            )));
        }
        let mut map = std::collections::BTreeMap::new();
        for (i, a) in self.amps.iter().enumerate() {
            let key = (
                self.extract(i, &layout.in_qubits),
                self.extract(i, &layout.out_qubits),
            );
            *map.entry(key).or_insert(0.0) += a.norm_sqr();
        }
        Ok(map.into_iter().collect())
    }

    /// Draws `shots` i.i.d. computational-basis samples.  Deterministic for
    /// a fixed seed.
    pub fn sample(
        &self,
        layout: &RegisterLayout,
        shots: usize,
        seed: u64,
    ) -> Result<Vec<MeasurementRecord>> {
        if layout.n_qubits() != self.n_qubits {
            return Err(Error::InvalidLayout(format!(
                "layout covers {} qubits, state has {}",
                layout.n_qubits(),
                self.n_qubits
            )));
        }
        let probs = self.probabilities();
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p / total;
            cum.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut records = Vec::with_capacity(shots);
        for _ in 0..shots {
            let u: f64 = rng.random();
            let idx = cum.partition_point(|&c| c <= u).min(probs.len() - 1);
            records.push(MeasurementRecord {
                in_bits: self.extract(idx, &layout.in_qubits),
                out_bits: self.extract(idx, &layout.out_qubits),
            });
        }
        Ok(records)
    }
}
