//! Radix-2 complex FFT.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// Smallest power of two ≥ n.
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// In-place unnormalised DFT, X_j = Σ_m x_m e^{∓2πi jm/N}.
///
/// `sign = -1` gives the forward transform, `sign = +1` the inverse kernel.
/// The length must be a power of two.
pub fn fft_in_place(buf: &mut [Complex64], sign: i32) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let s = sign.signum() as f64;
    let tw: Vec<Complex64> = (0..n / 2)
        .map(|k| Complex64::from_polar(1.0, s * 2.0 * PI * k as f64 / n as f64))
        .collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = tw[k * step];
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}
