//! Dense matrix kernels for the network forward/backward passes.
//!
//! Everything is row-major `f64`. Each output element accumulates in a
//! fixed order, so results are reproducible run to run. Two numeric
//! variants exist: a portable multiply-add kernel and a fused-multiply-add
//! kernel selected at runtime when the CPU supports AVX2+FMA (`std` builds
//! only). The variants round differently; [`force_portable_kernels`] pins
//! the portable one when bit-identical output across machines matters more
//! than speed.

use core::sync::atomic::{AtomicU8, Ordering};

const MODE_UNSET: u8 = 0;
const MODE_PORTABLE: u8 = 1;
const MODE_FMA: u8 = 2;

static KERNEL_MODE: AtomicU8 = AtomicU8::new(MODE_UNSET);

/// Pin the portable (non-fused) kernels regardless of CPU support.
pub fn force_portable_kernels() {
    KERNEL_MODE.store(MODE_PORTABLE, Ordering::Relaxed);
}

/// Name of the kernel variant in use, for run manifests.
pub fn kernel_mode() -> &'static str {
    match resolve_mode() {
        MODE_FMA => "fma",
        _ => "portable",
    }
}

fn resolve_mode() -> u8 {
    let mode = KERNEL_MODE.load(Ordering::Relaxed);
    if mode != MODE_UNSET {
        return mode;
    }
    let detected = detect_mode();
    KERNEL_MODE.store(detected, Ordering::Relaxed);
    detected
}

#[cfg(all(feature = "std", target_arch = "x86_64"))]
fn detect_mode() -> u8 {
    if std::is_x86_feature_detected!("avx2") && std::is_x86_feature_detected!("fma") {
        MODE_FMA
    } else {
        MODE_PORTABLE
    }
}

#[cfg(not(all(feature = "std", target_arch = "x86_64")))]
fn detect_mode() -> u8 {
    MODE_PORTABLE
}

#[inline(always)]
fn fmadd<const FMA: bool>(a: f64, b: f64, c: f64) -> f64 {
    if FMA {
        crate::fmath::mul_add(a, b, c)
    } else {
        a * b + c
    }
}

/// How the kernel walks the left operand: as stored, or transposed.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Lhs {
    /// `a` is (m × k) row-major; `c += a · b`.
    Normal,
    /// `a` is (k × m) row-major and used as its transpose; `c += aᵀ · b`.
    Transposed,
}

/// `c (m×n) += lhs(a) (m×k) · b (k×n)`, all row-major.
///
/// The transposed variant materializes `aᵀ` into scratch first; the tiled
/// kernel needs contiguous left-operand rows and the transpose is cheap
/// next to the multiply at these shapes.
pub fn gemm_acc(lhs: Lhs, m: usize, k: usize, n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
    assert_eq!(a.len(), m * k);
    assert_eq!(b.len(), k * n);
    assert_eq!(c.len(), m * n);
    let scratch;
    let a = match lhs {
        Lhs::Normal => a,
        Lhs::Transposed => {
            let mut t = alloc::vec![0.0; m * k];
            transpose(k, m, a, &mut t);
            scratch = t;
            &scratch[..]
        }
    };
    match resolve_mode() {
        #[cfg(all(feature = "std", target_arch = "x86_64"))]
        MODE_FMA => unsafe { gemm_fma(m, k, n, a, b, c) },
        _ => gemm_impl::<false>(m, k, n, a, b, c),
    }
}

#[cfg(all(feature = "std", target_arch = "x86_64"))]
#[target_feature(enable = "avx2,fma")]
unsafe fn gemm_fma(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
    gemm_impl::<true>(m, k, n, a, b, c);
}

#[inline(always)]
fn load8(s: &[f64]) -> [f64; 8] {
    let mut out = [0.0; 8];
    out.copy_from_slice(&s[..8]);
    out
}

/// Blocked accumulation: 4 output rows × 8 output columns held in
/// registers across the whole k loop; the row iterators keep the inner
/// loop free of bounds checks.
#[inline(always)]
fn gemm_impl<const FMA: bool>(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
    let mut i = 0;
    while i + 4 <= m {
        let a0 = &a[i * k..(i + 1) * k];
        let a1 = &a[(i + 1) * k..(i + 2) * k];
        let a2 = &a[(i + 2) * k..(i + 3) * k];
        let a3 = &a[(i + 3) * k..(i + 4) * k];
        let (r0, rest) = c[i * n..(i + 4) * n].split_at_mut(n);
        let (r1, rest) = rest.split_at_mut(n);
        let (r2, r3) = rest.split_at_mut(n);
        let mut j = 0;
        while j + 8 <= n {
            let mut acc0 = load8(&r0[j..]);
            let mut acc1 = load8(&r1[j..]);
            let mut acc2 = load8(&r2[j..]);
            let mut acc3 = load8(&r3[j..]);
            for (kk, brow) in b.chunks_exact(n).enumerate() {
                let bk = load8(&brow[j..]);
                let (w0, w1, w2, w3) = (a0[kk], a1[kk], a2[kk], a3[kk]);
                for t in 0..8 {
                    acc0[t] = fmadd::<FMA>(w0, bk[t], acc0[t]);
                    acc1[t] = fmadd::<FMA>(w1, bk[t], acc1[t]);
                    acc2[t] = fmadd::<FMA>(w2, bk[t], acc2[t]);
                    acc3[t] = fmadd::<FMA>(w3, bk[t], acc3[t]);
                }
            }
            r0[j..j + 8].copy_from_slice(&acc0);
            r1[j..j + 8].copy_from_slice(&acc1);
            r2[j..j + 8].copy_from_slice(&acc2);
            r3[j..j + 8].copy_from_slice(&acc3);
            j += 8;
        }
        while j < n {
            let mut s0 = r0[j];
            let mut s1 = r1[j];
            let mut s2 = r2[j];
            let mut s3 = r3[j];
            for (kk, brow) in b.chunks_exact(n).enumerate() {
                let bv = brow[j];
                s0 = fmadd::<FMA>(a0[kk], bv, s0);
                s1 = fmadd::<FMA>(a1[kk], bv, s1);
                s2 = fmadd::<FMA>(a2[kk], bv, s2);
                s3 = fmadd::<FMA>(a3[kk], bv, s3);
            }
            r0[j] = s0;
            r1[j] = s1;
            r2[j] = s2;
            r3[j] = s3;
            j += 1;
        }
        i += 4;
    }
    while i < m {
        let arow = &a[i * k..(i + 1) * k];
        let row = &mut c[i * n..(i + 1) * n];
        let mut j = 0;
        while j + 8 <= n {
            let mut acc = load8(&row[j..]);
            for (kk, brow) in b.chunks_exact(n).enumerate() {
                let bk = load8(&brow[j..]);
                let w = arow[kk];
                for t in 0..8 {
                    acc[t] = fmadd::<FMA>(w, bk[t], acc[t]);
                }
            }
            row[j..j + 8].copy_from_slice(&acc);
            j += 8;
        }
        while j < n {
            let mut s = row[j];
            for (kk, brow) in b.chunks_exact(n).enumerate() {
                s = fmadd::<FMA>(arow[kk], brow[j], s);
            }
            row[j] = s;
            j += 1;
        }
        i += 1;
    }
}

/// `dst (n×m) = src (m×n) transposed`, both row-major.
pub fn transpose(m: usize, n: usize, src: &[f64], dst: &mut [f64]) {
    assert_eq!(src.len(), m * n);
    assert_eq!(dst.len(), m * n);
    for i in 0..m {
        for j in 0..n {
            dst[j * m + i] = src[i * n + j];
        }
    }
}

/// Adds the bias vector to every row of the (rows × n) matrix.
pub fn add_bias_rows(rows: usize, n: usize, out: &mut [f64], bias: &[f64]) {
    assert_eq!(bias.len(), n);
    for r in 0..rows {
        let row = &mut out[r * n..(r + 1) * n];
        for (o, b) in row.iter_mut().zip(bias) {
            *o += b;
        }
    }
}

/// Column sums of a (rows × n) matrix, accumulated into `out`.
pub fn col_sums_acc(rows: usize, n: usize, m: &[f64], out: &mut [f64]) {
    assert_eq!(out.len(), n);
    for r in 0..rows {
        let row = &m[r * n..(r + 1) * n];
        for (o, v) in out.iter_mut().zip(row) {
            *o += v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn reference(m: usize, k: usize, n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; m * n];
        for i in 0..m {
            for kk in 0..k {
                for j in 0..n {
                    c[i * n + j] += a[i * k + kk] * b[kk * n + j];
                }
            }
        }
        c
    }

    fn filled(len: usize, seed: u64) -> Vec<f64> {
        let mut x = seed | 1;
        (0..len)
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn matches_reference_over_odd_shapes() {
        for &(m, k, n) in &[
            (1, 1, 1),
            (4, 8, 8),
            (5, 7, 9),
            (13, 6, 2),
            (3, 256, 1),
            (9, 3, 17),
            (8, 8, 24),
        ] {
            let a = filled(m * k, 42 + (m * k * n) as u64);
            let b = filled(k * n, 7 + (m + k + n) as u64);
            let mut c = vec![0.0; m * n];
            gemm_acc(Lhs::Normal, m, k, n, &a, &b, &mut c);
            let want = reference(m, k, n, &a, &b);
            for (x, y) in c.iter().zip(&want) {
                assert!((x - y).abs() < 1e-12, "({m},{k},{n}): {x} vs {y}");
            }
        }
    }

    #[test]
    fn transposed_lhs_matches_explicit_transpose() {
        let (m, k, n) = (6, 11, 9);
        let at = filled(k * m, 99); // stored (k × m)
        let b = filled(k * n, 5);
        let mut a = vec![0.0; k * m];
        transpose(k, m, &at, &mut a); // a is (m × k)
        let mut c1 = vec![0.0; m * n];
        gemm_acc(Lhs::Transposed, m, k, n, &at, &b, &mut c1);
        let mut c2 = vec![0.0; m * n];
        gemm_acc(Lhs::Normal, m, k, n, &a, &b, &mut c2);
        for (x, y) in c1.iter().zip(&c2) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn accumulates_into_existing_values() {
        let (m, k, n) = (4, 4, 8);
        let a = filled(m * k, 3);
        let b = filled(k * n, 4);
        let mut c = vec![1.0; m * n];
        gemm_acc(Lhs::Normal, m, k, n, &a, &b, &mut c);
        let want = reference(m, k, n, &a, &b);
        for (x, y) in c.iter().zip(&want) {
            assert!((x - (y + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn transpose_round_trip() {
        let src = filled(5 * 3, 11);
        let mut t = vec![0.0; 15];
        let mut back = vec![0.0; 15];
        transpose(5, 3, &src, &mut t);
        transpose(3, 5, &t, &mut back);
        assert_eq!(src, back);
    }
}
