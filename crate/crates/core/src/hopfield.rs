//! Symmetric Hopfield network with Hebbian storage.
//!
//! Weights follow the outer-product rule with a zero diagonal: storing
//! pattern x adds x_i x_j / N to every off-diagonal entry. Recall is
//! synchronous: all neurons read the activation a = W x of the current
//! state and move to sign(a) in one step, with a zero activation keeping
//! the neuron's current bit.
//!
//! A stored pattern is considered recalled when it is a fixed point of
//! that map. The relaxation variant iterates the map until it stops
//! moving or a sweep budget runs out, which recovers patterns from
//! nearby probes but decides self-probes exactly as the one-step rule
//! does.
//!
//! # Examples
//!
//! ```
//! use hopcap_core::hopfield::Network;
//!
//! let mut net = Network::new(8)?;
//! net.store(&[1, 1, -1, 1, -1, -1, 1, -1])?;
//! assert!(net.is_fixed_point(&[1, 1, -1, 1, -1, -1, 1, -1])?);
//!
//! // one corrupted bit relaxes back to the stored pattern
//! let out = net.recall_relax(&[-1, 1, -1, 1, -1, -1, 1, -1], 10)?;
//! assert!(out.converged);
//! assert_eq!(out.state, vec![1, 1, -1, 1, -1, -1, 1, -1]);
//! # Ok::<(), hopcap_core::error::Error>(())
//! ```

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Dense symmetric weight matrix with a zero diagonal, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
}

/// Magic bytes opening the binary weight dump, followed by a format
/// version byte.
const DUMP_MAGIC: &[u8; 4] = b"HWM\0";
const DUMP_VERSION: u8 = 1;

impl WeightMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "network needs at least 2 neurons, got {n}"
            )));
        }
        Ok(Self {
            n,
            w: vec![0.0; n * n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    fn check_pattern(&self, x: &[i8]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        for (index, &value) in x.iter().enumerate() {
            if value != 1 && value != -1 {
                return Err(Error::NotBipolar { index, value });
            }
        }
        Ok(())
    }

    /// Hebbian update: w_ij += x_i x_j / N for i != j.
    pub fn store(&mut self, x: &[i8]) -> Result<()> {
        self.check_pattern(x)?;
        let n = self.n;
        let scale = 1.0 / n as f64;
        for i in 0..n {
            let xi = f64::from(x[i]) * scale;
            let row = &mut self.w[i * n..(i + 1) * n];
            for (j, slot) in row.iter_mut().enumerate() {
                *slot += xi * f64::from(x[j]);
            }
        }
        // the loop above also touched the diagonal; put it back to zero
        for i in 0..n {
            self.w[i * n + i] = 0.0;
        }
        Ok(())
    }

    /// Activation vector a = W x.
    pub fn activation(&self, x: &[i8]) -> Result<Vec<f64>> {
        self.check_pattern(x)?;
        let n = self.n;
        Ok((0..n)
            .map(|i| {
                self.w[i * n..(i + 1) * n]
                    .iter()
                    .zip(x.iter())
                    .map(|(wij, &xj)| wij * f64::from(xj))
                    .sum()
            })
            .collect())
    }

    /// Serialize as a little-endian binary dump: magic, version byte,
    /// N as u64, then the N*N weights row by row as f64.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&[DUMP_VERSION])?;
        out.write_all(&(self.n as u64).to_le_bytes())?;
        for v in &self.w {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Read back a dump produced by [`WeightMatrix::write_binary`].
    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(Error::InvalidArgument("not a weight dump".into()));
        }
        let mut version = [0u8; 1];
        input.read_exact(&mut version)?;
        if version[0] != DUMP_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported weight dump version {}",
                version[0]
            )));
        }
        let mut len = [0u8; 8];
        input.read_exact(&mut len)?;
        let n = u64::from_le_bytes(len) as usize;
        if !(2..=1 << 20).contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "implausible dump dimension {n}"
            )));
        }
        let mut w = vec![0.0f64; n * n];
        let mut buf = [0u8; 8];
        for slot in &mut w {
            input.read_exact(&mut buf)?;
            *slot = f64::from_le_bytes(buf);
        }
        Ok(Self { n, w })
    }
}

/// Result of iterated recall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxOutcome {
    /// Final state after the last executed sweep.
    pub state: Vec<i8>,
    /// Sweeps actually executed.
    pub sweeps: usize,
    /// Whether the state stopped changing within the budget.
    pub converged: bool,
}

/// A weight matrix plus the count of patterns stored into it.
#[derive(Debug, Clone)]
pub struct Network {
    weights: WeightMatrix,
    stored: usize,
}

impl Network {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            weights: WeightMatrix::zeros(n)?,
            stored: 0,
        })
    }

    pub fn from_weights(weights: WeightMatrix, stored: usize) -> Self {
        Self { weights, stored }
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn stored(&self) -> usize {
        self.stored
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn store(&mut self, x: &[i8]) -> Result<()> {
        self.weights.store(x)?;
        self.stored += 1;
        Ok(())
    }

    /// One synchronous update of every neuron.
    ///
    /// Hebbian activations are integer multiples of 1/N, so the sign
    /// decision snaps a * N to the nearest integer first. That keeps the
    /// zero-activation tie exact in floating point instead of letting
    /// rounding noise a dozen orders of magnitude below the grid pick a
    /// side.
    pub fn recall_one_step(&self, x: &[i8]) -> Result<Vec<i8>> {
        let a = self.weights.activation(x)?;
        let n = self.n() as f64;
        Ok(a.iter()
            .zip(x.iter())
            .map(|(&ai, &xi)| {
                let t = (ai * n).round();
                if t > 0.0 {
                    1
                } else if t < 0.0 {
                    -1
                } else {
                    xi
                }
            })
            .collect())
    }

    /// Iterate [`Network::recall_one_step`] until the state repeats or
    /// `max_sweeps` updates have run.
    pub fn recall_relax(&self, x: &[i8], max_sweeps: usize) -> Result<RelaxOutcome> {
        let mut state = x.to_vec();
        for sweep in 1..=max_sweeps {
            let next = self.recall_one_step(&state)?;
            if next == state {
                return Ok(RelaxOutcome {
                    state,
                    sweeps: sweep,
                    converged: true,
                });
            }
            state = next;
        }
        Ok(RelaxOutcome {
            state,
            sweeps: max_sweeps,
            converged: false,
        })
    }

    /// Whether x maps to itself in one synchronous step.
    pub fn is_fixed_point(&self, x: &[i8]) -> Result<bool> {
        Ok(self.recall_one_step(x)? == x)
    }
}
