//! Self-describing binary container for network parameters.
//!
//! Layout (all little-endian):
//!
//! ```text
//! magic   6 bytes  "EVMLP\0"
//! version u16      currently 1
//! layers  u32      number of entries in `sizes`
//! sizes   u32 × layers
//! out_act u8       0 = identity, 1 = tanh-scaled
//! bound   f64      tanh bound (0 for identity)
//! params  f64 × N  weights then biases per layer, forward order
//! ```
//!
//! Parameters are stored as raw IEEE bits, so a save/load round trip is
//! bit-exact.

use alloc::vec::Vec;

use super::{Mlp, OutputActivation};

const MAGIC: &[u8; 6] = b"EVMLP\0";
const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("not a model file (bad magic)")]
    BadMagic,
    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u16),
    #[error("model file truncated: needed {needed} more bytes")]
    Truncated { needed: usize },
    #[error("model file has {0} trailing bytes")]
    TrailingBytes(usize),
    #[error("unknown output activation tag {0}")]
    BadActivation(u8),
    #[error("implausible layer table")]
    BadLayerTable,
}

pub fn to_bytes(net: &Mlp) -> Vec<u8> {
    let sizes = net.sizes();
    let (weights, biases) = net.params();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(sizes.len() as u32).to_le_bytes());
    for &s in sizes {
        out.extend_from_slice(&(s as u32).to_le_bytes());
    }
    match net.output_activation() {
        OutputActivation::Identity => {
            out.push(0);
            out.extend_from_slice(&0f64.to_le_bytes());
        }
        OutputActivation::TanhScaled(bound) => {
            out.push(1);
            out.extend_from_slice(&bound.to_le_bytes());
        }
    }
    for (w, b) in weights.iter().zip(biases) {
        for v in w.iter().chain(b) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CodecError> {
        if self.at + n > self.bytes.len() {
            return Err(CodecError::Truncated {
                needed: self.at + n - self.bytes.len(),
            });
        }
        let s = &self.bytes[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, CodecError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, CodecError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, CodecError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<Mlp, CodecError> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(MAGIC.len())? != MAGIC {
        return Err(CodecError::BadMagic);
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(CodecError::UnsupportedVersion(version));
    }
    let n_sizes = r.u32()? as usize;
    if !(2..=64).contains(&n_sizes) {
        return Err(CodecError::BadLayerTable);
    }
    let mut sizes = Vec::with_capacity(n_sizes);
    for _ in 0..n_sizes {
        let s = r.u32()? as usize;
        if s == 0 || s > 1 << 20 {
            return Err(CodecError::BadLayerTable);
        }
        sizes.push(s);
    }
    let act_tag = r.take(1)?[0];
    let bound = r.f64()?;
    let out_act = match act_tag {
        0 => OutputActivation::Identity,
        1 => OutputActivation::TanhScaled(bound),
        other => return Err(CodecError::BadActivation(other)),
    };
    let mut weights = Vec::with_capacity(n_sizes - 1);
    let mut biases = Vec::with_capacity(n_sizes - 1);
    for pair in sizes.windows(2) {
        let (n_in, n_out) = (pair[0], pair[1]);
        let mut w = Vec::with_capacity(n_in * n_out);
        for _ in 0..n_in * n_out {
            w.push(r.f64()?);
        }
        let mut b = Vec::with_capacity(n_out);
        for _ in 0..n_out {
            b.push(r.f64()?);
        }
        weights.push(w);
        biases.push(b);
    }
    if r.at != bytes.len() {
        return Err(CodecError::TrailingBytes(bytes.len() - r.at));
    }
    Ok(Mlp::from_parts(sizes, out_act, weights, biases))
}
