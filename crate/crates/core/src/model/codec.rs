//! Reader and writer for `.sgt` tensor files.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! "SGT1" | rank: u32 | rank × dim: u32 | product(dims) × f32
//! ```
//!
//! Rank 3 carries an [`ActivationStack`] with dims `(K, H, W)`; rank 2 carries
//! [`ClassWeights`] with dims `(C, K)`.

use std::path::Path;

use crate::error::{Error, Result};

use super::types::{ActivationStack, ClassWeights};

pub const MAGIC: &[u8; 4] = b"SGT1";

#[derive(Debug, Clone, PartialEq)]
pub enum Tensor {
    Activations(ActivationStack),
    Weights(ClassWeights),
}

impl Tensor {
    pub fn rank(&self) -> u32 {
        match self {
            Tensor::Activations(_) => 3,
            Tensor::Weights(_) => 2,
        }
    }

    fn dims(&self) -> Vec<usize> {
        match self {
            Tensor::Activations(a) => vec![a.channels(), a.height(), a.width()],
            Tensor::Weights(w) => vec![w.num_classes(), w.channels()],
        }
    }

    fn values(&self) -> &[f32] {
        match self {
            Tensor::Activations(a) => a.data(),
            Tensor::Weights(w) => w.data(),
        }
    }

    pub fn into_activations(self) -> Result<ActivationStack> {
        match self {
            Tensor::Activations(a) => Ok(a),
            other => Err(Error::UnexpectedRank {
                expected: 3,
                found: other.rank(),
            }),
        }
    }

    pub fn into_weights(self) -> Result<ClassWeights> {
        match self {
            Tensor::Weights(w) => Ok(w),
            other => Err(Error::UnexpectedRank {
                expected: 2,
                found: other.rank(),
            }),
        }
    }
}

impl From<ActivationStack> for Tensor {
    fn from(a: ActivationStack) -> Self {
        Tensor::Activations(a)
    }
}

impl From<ClassWeights> for Tensor {
    fn from(w: ClassWeights) -> Self {
        Tensor::Weights(w)
    }
}

fn read_u32(bytes: &[u8], offset: usize) -> Option<u32> {
    let chunk = bytes.get(offset..offset + 4)?;
    Some(u32::from_le_bytes(chunk.try_into().unwrap()))
}

pub fn decode_tensor(bytes: &[u8]) -> Result<Tensor> {
    if bytes.len() < MAGIC.len() || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let rank = read_u32(bytes, 4).ok_or(Error::TruncatedPayload {
        expected: 8,
        found: bytes.len(),
    })?;
    if rank != 2 && rank != 3 {
        return Err(Error::UnsupportedRank(rank));
    }

    let header_len = 8 + 4 * rank as usize;
    let mut dims = Vec::with_capacity(rank as usize);
    for i in 0..rank as usize {
        let dim = read_u32(bytes, 8 + 4 * i).ok_or(Error::TruncatedPayload {
            expected: header_len,
            found: bytes.len(),
        })?;
        dims.push(dim as usize);
    }

    // Absurd dims overflow usize; report them as a size mismatch.
    let expected = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(header_len))
        .unwrap_or(usize::MAX);
    if bytes.len() != expected {
        return Err(Error::TruncatedPayload {
            expected,
            found: bytes.len(),
        });
    }

    let values: Vec<f32> = bytes[header_len..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index });
    }

    Ok(match rank {
        3 => Tensor::Activations(ActivationStack::new(dims[0], dims[1], dims[2], values)?),
        _ => Tensor::Weights(ClassWeights::new(dims[0], dims[1], values)?),
    })
}

pub fn encode_tensor(tensor: &Tensor) -> Vec<u8> {
    let dims = tensor.dims();
    let values = tensor.values();
    let mut out = Vec::with_capacity(8 + 4 * dims.len() + 4 * values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&tensor.rank().to_le_bytes());
    for d in dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_tensor(path: &Path) -> Result<Tensor> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_tensor(&bytes)
}

pub fn write_tensor(path: &Path, tensor: &Tensor) -> Result<()> {
    std::fs::write(path, encode_tensor(tensor)).map_err(|e| Error::io(path, e))
}
