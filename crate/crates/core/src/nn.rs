//! Minimal dense-network substrate: forward pass, analytic reverse-mode
//! gradients, Adam, orthogonal initialization, and flat-parameter access.
//!
//! Networks are plain MLPs with tanh on hidden layers and identity on the
//! output layer. Parameters flatten in layer order, weights (row-major,
//! `out x in`) before biases, which fixes the layout for gradients,
//! broadcasting, and checkpoints.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{all_finite, Scalar};

/// Fully-connected network with tanh hidden activations and identity output.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseNet<F: Scalar> {
    layer_dims: Vec<usize>,
    /// Per-layer row-major weight matrices, shape `(dims[l+1], dims[l])`.
    weights: Vec<Vec<F>>,
    biases: Vec<Vec<F>>,
}

/// Post-activation values of every layer, input included. Feeds `backward`.
#[derive(Debug, Clone)]
pub struct ForwardTrace<F: Scalar> {
    /// `activations[0]` is the input; `activations[l + 1]` is layer `l`'s output.
    pub activations: Vec<Vec<F>>,
}

impl<F: Scalar> ForwardTrace<F> {
    pub fn output(&self) -> &[F] {
        self.activations.last().expect("trace has at least the input")
    }
}

fn validate_dims(layer_dims: &[usize]) -> Result<()> {
    if layer_dims.len() < 2 {
        return Err(Error::InvalidArchitecture(format!(
            "need at least input and output dims, got {layer_dims:?}"
        )));
    }
    if let Some(&bad) = layer_dims.iter().find(|&&d| d == 0) {
        return Err(Error::InvalidArchitecture(format!(
            "layer dimension must be positive, got {bad} in {layer_dims:?}"
        )));
    }
    Ok(())
}

impl<F: Scalar> DenseNet<F> {
    /// All-zero network with the given layer sizes.
    pub fn zeros(layer_dims: &[usize]) -> Result<Self> {
        validate_dims(layer_dims)?;
        let weights = (0..layer_dims.len() - 1)
            .map(|l| vec![F::zero(); layer_dims[l + 1] * layer_dims[l]])
            .collect();
        let biases = (0..layer_dims.len() - 1)
            .map(|l| vec![F::zero(); layer_dims[l + 1]])
            .collect();
        Ok(Self { layer_dims: layer_dims.to_vec(), weights, biases })
    }

    /// Orthogonal initialization: each weight matrix is (semi-)orthogonal
    /// scaled by its gain, so `W Wᵀ = gain² I` when rows <= cols (and
    /// `Wᵀ W = gain² I` otherwise). Biases start at zero. Deterministic for
    /// a given seed.
    pub fn init_orthogonal(layer_dims: &[usize], gains: &[F], seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::init_orthogonal_with_rng(layer_dims, gains, &mut rng)
    }

    /// Same as [`DenseNet::init_orthogonal`] but drawing from a caller-owned RNG.
    pub fn init_orthogonal_with_rng<R: Rng + ?Sized>(
        layer_dims: &[usize],
        gains: &[F],
        rng: &mut R,
    ) -> Result<Self> {
        validate_dims(layer_dims)?;
        if gains.len() != layer_dims.len() - 1 {
            return Err(Error::InvalidArchitecture(format!(
                "expected {} gains, got {}",
                layer_dims.len() - 1,
                gains.len()
            )));
        }
        let mut net = Self::zeros(layer_dims)?;
        for l in 0..layer_dims.len() - 1 {
            let rows = layer_dims[l + 1];
            let cols = layer_dims[l];
            let ortho = orthogonal_matrix::<F, R>(rows, cols, gains[l], rng);
            net.weights[l] = ortho;
        }
        Ok(net)
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_dims.last().unwrap()
    }

    pub fn num_layers(&self) -> usize {
        self.layer_dims.len() - 1
    }

    /// Row-major weight matrix of layer `l`.
    pub fn layer_weights(&self, l: usize) -> &[F] {
        &self.weights[l]
    }

    pub fn layer_weights_mut(&mut self, l: usize) -> &mut [F] {
        &mut self.weights[l]
    }

    pub fn layer_biases_mut(&mut self, l: usize) -> &mut [F] {
        &mut self.biases[l]
    }

    pub fn param_count(&self) -> usize {
        self.layer_dims
            .windows(2)
            .map(|w| w[1] * w[0] + w[1])
            .sum()
    }

    /// Flattens all parameters: per layer, weights row-major then biases.
    pub fn get_flat(&self) -> Vec<F> {
        let mut flat = Vec::with_capacity(self.param_count());
        for l in 0..self.num_layers() {
            flat.extend_from_slice(&self.weights[l]);
            flat.extend_from_slice(&self.biases[l]);
        }
        flat
    }

    /// Restores parameters from a flat vector laid out as in [`DenseNet::get_flat`].
    pub fn set_flat(&mut self, flat: &[F]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(Error::Shape(format!(
                "flat vector has {} entries, network has {} parameters",
                flat.len(),
                self.param_count()
            )));
        }
        let mut offset = 0;
        for l in 0..self.num_layers() {
            let wlen = self.weights[l].len();
            self.weights[l].copy_from_slice(&flat[offset..offset + wlen]);
            offset += wlen;
            let blen = self.biases[l].len();
            self.biases[l].copy_from_slice(&flat[offset..offset + blen]);
            offset += blen;
        }
        Ok(())
    }

    /// Forward pass; tanh on hidden layers, identity output.
    pub fn forward(&self, input: &[F]) -> Result<Vec<F>> {
        let mut trace = self.forward_trace(input)?;
        Ok(trace.activations.pop().expect("trace has at least the input"))
    }

    /// Forward pass keeping every layer's post-activation output for backprop.
    pub fn forward_trace(&self, input: &[F]) -> Result<ForwardTrace<F>> {
        if input.len() != self.input_dim() {
            return Err(Error::Shape(format!(
                "input has {} entries, network expects {}",
                input.len(),
                self.input_dim()
            )));
        }
        let mut activations = Vec::with_capacity(self.num_layers() + 1);
        activations.push(input.to_vec());
        for l in 0..self.num_layers() {
            let a_in = &activations[l];
            let out_dim = self.layer_dims[l + 1];
            let in_dim = self.layer_dims[l];
            let mut out = vec![F::zero(); out_dim];
            let last = l + 1 == self.num_layers();
            for (o, out_o) in out.iter_mut().enumerate() {
                let row = &self.weights[l][o * in_dim..(o + 1) * in_dim];
                let mut z = self.biases[l][o];
                for (w, x) in row.iter().zip(a_in.iter()) {
                    z = z + *w * *x;
                }
                *out_o = if last { z } else { z.tanh() };
            }
            activations.push(out);
        }
        Ok(ForwardTrace { activations })
    }

    /// Reverse-mode gradient of `output . output_gradient` with respect to
    /// every parameter (flat layout) and the input.
    pub fn backward(
        &self,
        trace: &ForwardTrace<F>,
        output_gradient: &[F],
    ) -> Result<(Vec<F>, Vec<F>)> {
        if output_gradient.len() != self.output_dim() {
            return Err(Error::Shape(format!(
                "output gradient has {} entries, network output is {}",
                output_gradient.len(),
                self.output_dim()
            )));
        }
        if !all_finite(output_gradient) || !all_finite(&trace.activations[0]) {
            return Err(Error::Numeric("non-finite inputs to backward".into()));
        }

        let n_layers = self.num_layers();
        let mut flat = vec![F::zero(); self.param_count()];
        // Precompute each layer's offset into the flat layout.
        let mut offsets = Vec::with_capacity(n_layers);
        let mut off = 0;
        for l in 0..n_layers {
            offsets.push(off);
            off += self.weights[l].len() + self.biases[l].len();
        }

        // delta = dJ/dz_l; the output layer is identity so it starts as the
        // upstream gradient itself.
        let mut delta = output_gradient.to_vec();
        let mut input_grad = vec![F::zero(); self.input_dim()];
        for l in (0..n_layers).rev() {
            let in_dim = self.layer_dims[l];
            let a_in = &trace.activations[l];
            let base = offsets[l];
            let wlen = self.weights[l].len();
            for (o, d) in delta.iter().enumerate() {
                let row = base + o * in_dim;
                for (i, x) in a_in.iter().enumerate() {
                    flat[row + i] = *d * *x;
                }
                flat[base + wlen + o] = *d;
            }
            // Gradient w.r.t. this layer's input.
            let mut da = vec![F::zero(); in_dim];
            for (o, d) in delta.iter().enumerate() {
                let row = &self.weights[l][o * in_dim..(o + 1) * in_dim];
                for (i, w) in row.iter().enumerate() {
                    da[i] = da[i] + *w * *d;
                }
            }
            if l > 0 {
                // a_in is the tanh output of layer l-1.
                delta = da
                    .iter()
                    .zip(a_in.iter())
                    .map(|(g, a)| *g * (F::one() - *a * *a))
                    .collect();
            } else {
                input_grad = da;
            }
        }
        Ok((flat, input_grad))
    }

    /// Convenience wrapper: trace + backward in one call.
    pub fn backward_from_input(&self, input: &[F], output_gradient: &[F]) -> Result<Vec<F>> {
        let trace = self.forward_trace(input)?;
        Ok(self.backward(&trace, output_gradient)?.0)
    }

    /// Serializes the parameters as a checkpoint fragment: one-line JSON
    /// header `{layer_dims, param_count}` followed by the flat parameters as
    /// little-endian f64.
    pub fn write_fragment<W: Write>(&self, w: &mut W) -> Result<()> {
        let header = FragmentHeader {
            layer_dims: self.layer_dims.clone(),
            param_count: self.param_count(),
        };
        write_fragment_header(w, &header)?;
        write_f64_array(w, &self.get_flat())?;
        Ok(())
    }

    /// Reads a fragment written by [`DenseNet::write_fragment`].
    pub fn read_fragment<R: Read>(r: &mut R) -> Result<Self> {
        let header: FragmentHeader = read_fragment_header(r)?;
        let values = read_f64_array(r, header.param_count)?;
        let mut net = Self::zeros(&header.layer_dims)?;
        if net.param_count() != header.param_count {
            return Err(Error::Checkpoint(format!(
                "header param_count {} does not match dims {:?}",
                header.param_count, header.layer_dims
            )));
        }
        let flat: Vec<F> = values.iter().map(|&v| F::c(v)).collect();
        net.set_flat(&flat)?;
        Ok(net)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FragmentHeader {
    pub layer_dims: Vec<usize>,
    pub param_count: usize,
}

pub(crate) fn write_fragment_header<W: Write, H: Serialize>(w: &mut W, header: &H) -> Result<()> {
    let mut line = serde_json::to_string(header)
        .map_err(|e| Error::Checkpoint(format!("header encode: {e}")))?;
    line.push('\n');
    w.write_all(line.as_bytes())?;
    Ok(())
}

pub(crate) fn read_fragment_header<R: Read, H: for<'de> Deserialize<'de>>(r: &mut R) -> Result<H> {
    let mut line = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        r.read_exact(&mut byte)?;
        if byte[0] == b'\n' {
            break;
        }
        line.push(byte[0]);
        if line.len() > 1 << 20 {
            return Err(Error::Checkpoint("unterminated fragment header".into()));
        }
    }
    serde_json::from_slice(&line).map_err(|e| Error::Checkpoint(format!("header decode: {e}")))
}

pub(crate) fn write_f64_array<W: Write, F: Scalar>(w: &mut W, values: &[F]) -> Result<()> {
    for v in values {
        let x = v.to_f64().ok_or_else(|| Error::Numeric("parameter not representable".into()))?;
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_f64_array<R: Read>(r: &mut R, count: usize) -> Result<Vec<f64>> {
    let mut buf = vec![0u8; count * 8];
    r.read_exact(&mut buf)?;
    Ok(buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// Gain-scaled (semi-)orthogonal `rows x cols` matrix, row-major.
fn orthogonal_matrix<F: Scalar, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    gain: F,
    rng: &mut R,
) -> Vec<F> {
    // Orthonormalize along the smaller dimension: rows if rows <= cols,
    // otherwise columns (via the transpose).
    let (n_vecs, vec_len, transpose) =
        if rows <= cols { (rows, cols, false) } else { (cols, rows, true) };

    let mut basis: Vec<Vec<F>> = Vec::with_capacity(n_vecs);
    for _ in 0..n_vecs {
        let mut v: Vec<F> = (0..vec_len).map(|_| F::sample_standard_normal(rng)).collect();
        loop {
            // Two Gram-Schmidt passes keep orthogonality well below 1e-12.
            for _ in 0..2 {
                for b in &basis {
                    let dot: F = v.iter().zip(b.iter()).map(|(a, c)| *a * *c).sum();
                    for (vi, bi) in v.iter_mut().zip(b.iter()) {
                        *vi = *vi - dot * *bi;
                    }
                }
            }
            let norm: F = v.iter().map(|x| *x * *x).sum::<F>().sqrt();
            if norm > F::c(1e-8) {
                for vi in v.iter_mut() {
                    *vi = *vi / norm;
                }
                break;
            }
            // Degenerate draw; resample.
            v = (0..vec_len).map(|_| F::sample_standard_normal(rng)).collect();
        }
        basis.push(v);
    }

    let mut w = vec![F::zero(); rows * cols];
    for (k, v) in basis.iter().enumerate() {
        for (j, x) in v.iter().enumerate() {
            let (r, c) = if transpose { (j, k) } else { (k, j) };
            w[r * cols + c] = gain * *x;
        }
    }
    w
}

/// Adam optimizer state over one flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<F: Scalar> {
    step_count: u64,
    first_moment: Vec<F>,
    second_moment: Vec<F>,
    pub learning_rate: F,
    pub beta1: F,
    pub beta2: F,
    pub eps: F,
}

impl<F: Scalar> AdamState<F> {
    pub fn new(len: usize, learning_rate: F) -> Self {
        Self {
            step_count: 0,
            first_moment: vec![F::zero(); len],
            second_moment: vec![F::zero(); len],
            learning_rate,
            beta1: F::c(0.9),
            beta2: F::c(0.999),
            eps: F::c(1e-8),
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn len(&self) -> usize {
        self.first_moment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_moment.is_empty()
    }

    /// Standard Adam update with bias correction. Refuses non-finite
    /// gradients without touching the parameters.
    pub fn step(&mut self, params: &mut [F], gradient: &[F]) -> Result<()> {
        if params.len() != self.first_moment.len() || gradient.len() != params.len() {
            return Err(Error::Shape(format!(
                "adam state len {}, params {}, gradient {}",
                self.first_moment.len(),
                params.len(),
                gradient.len()
            )));
        }
        if !all_finite(gradient) {
            return Err(Error::Numeric("non-finite gradient, update refused".into()));
        }
        self.step_count += 1;
        let t = self.step_count as i32;
        let bc1 = F::one() - self.beta1.powi(t);
        let bc2 = F::one() - self.beta2.powi(t);
        for i in 0..params.len() {
            let g = gradient[i];
            self.first_moment[i] = self.beta1 * self.first_moment[i] + (F::one() - self.beta1) * g;
            self.second_moment[i] =
                self.beta2 * self.second_moment[i] + (F::one() - self.beta2) * g * g;
            let m_hat = self.first_moment[i] / bc1;
            let v_hat = self.second_moment[i] / bc2;
            params[i] = params[i] - self.learning_rate * m_hat / (v_hat.sqrt() + self.eps);
        }
        Ok(())
    }

    /// Clears moments and the step counter (used after policy broadcasts).
    pub fn reset(&mut self) {
        self.step_count = 0;
        self.first_moment.iter_mut().for_each(|m| *m = F::zero());
        self.second_moment.iter_mut().for_each(|m| *m = F::zero());
    }

    pub fn moments(&self) -> (&[F], &[F]) {
        (&self.first_moment, &self.second_moment)
    }

    pub fn restore(&mut self, step_count: u64, first: &[F], second: &[F]) -> Result<()> {
        if first.len() != self.first_moment.len() || second.len() != self.second_moment.len() {
            return Err(Error::Shape("adam moment length mismatch".into()));
        }
        self.step_count = step_count;
        self.first_moment.copy_from_slice(first);
        self.second_moment.copy_from_slice(second);
        Ok(())
    }
}

/// Scales the concatenated gradient segments so their global L2 norm does not
/// exceed `max_norm`. Returns the pre-clip norm.
pub fn clip_global_norm<F: Scalar>(segments: &mut [&mut [F]], max_norm: F) -> F {
    let mut sq = F::zero();
    for seg in segments.iter() {
        for g in seg.iter() {
            sq = sq + *g * *g;
        }
    }
    let norm = sq.sqrt();
    if norm > max_norm && norm > F::zero() {
        let scale = max_norm / norm;
        for seg in segments.iter_mut() {
            for g in seg.iter_mut() {
                *g = *g * scale;
            }
        }
    }
    norm
}
