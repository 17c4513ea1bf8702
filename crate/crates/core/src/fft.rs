//! Discrete Fourier transforms in the walk's sign convention:
//! the forward transform carries e^{+i2πrn/N}, the inverse e^{−i2πrn/N}/N.
//!
//! Power-of-two lengths go through an iterative radix-2 transform with a
//! bit-reversal permutation; other lengths use the direct O(N²) sum.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Radix-2 when the length is a power of two, direct sum otherwise.
    Auto,
    Direct,
    Radix2,
}

/// e^{sign·i2πk/N} for k in 0..N, each entry evaluated independently.
fn twiddles(len: usize, sign: f64) -> Vec<Complex64> {
    (0..len)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / len as f64).sin_cos();
            Complex64::new(c, sign * s)
        })
        .collect()
}

fn bit_reverse_permute(buf: &mut [Complex64]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
}

/// In-place radix-2 transform Σₙ x(n) e^{sign·i2πrn/N}, unnormalized.
///
/// Panics unless the length is a power of two.
pub fn radix2_in_place(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "radix-2 transform needs a power-of-two length, got {n}");
    bit_reverse_permute(buf);
    let table = twiddles(n, sign);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let w = table[k * stride] * *b;
                *b = *a - w;
                *a += w;
            }
        }
        len <<= 1;
    }
}

/// Direct O(N²) evaluation of Σₙ x(n) e^{sign·i2πrn/N}, unnormalized.
pub fn direct(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    let table = twiddles(n, sign);
    (0..n)
        .map(|r| {
            let mut acc = Complex64::default();
            let mut idx = 0usize;
            for x in input {
                acc += *x * table[idx];
                idx += r;
                if idx >= n {
                    idx -= n;
                }
            }
            acc
        })
        .collect()
}

fn transform(input: &[Complex64], sign: f64, algorithm: Algorithm) -> Vec<Complex64> {
    let use_radix2 = match algorithm {
        Algorithm::Auto => input.len().is_power_of_two(),
        Algorithm::Direct => false,
        Algorithm::Radix2 => true,
    };
    if use_radix2 {
        let mut buf = input.to_vec();
        radix2_in_place(&mut buf, sign);
        buf
    } else {
        direct(input, sign)
    }
}

/// f̃(r) = Σₙ f(n) e^{+i2πrn/N}
pub fn forward(input: &[Complex64], algorithm: Algorithm) -> Vec<Complex64> {
    transform(input, 1.0, algorithm)
}

/// f(n) = (1/N) Σ_r f̃(r) e^{−i2πrn/N}
pub fn inverse(input: &[Complex64], algorithm: Algorithm) -> Vec<Complex64> {
    let scale = 1.0 / input.len().max(1) as f64;
    let mut out = transform(input, -1.0, algorithm);
    for x in &mut out {
        *x *= scale;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn length_one_is_identity() {
        let x = [Complex64::new(0.3, -0.2)];
        assert_eq!(forward(&x, Algorithm::Auto), x.to_vec());
        assert_eq!(inverse(&x, Algorithm::Auto), x.to_vec());
    }

    #[test]
    fn delta_transforms_to_constant() {
        let mut x = vec![Complex64::default(); 16];
        x[0] = Complex64::new(1.0, 0.0);
        for v in forward(&x, Algorithm::Radix2) {
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn sign_convention() {
        // f(n) = δ_{n,1}  →  f̃(r) = e^{+i2πr/N}
        let mut x = vec![Complex64::default(); 8];
        x[1] = Complex64::new(1.0, 0.0);
        let y = forward(&x, Algorithm::Radix2);
        for (r, v) in y.iter().enumerate() {
            let want = Complex64::from_polar(1.0, 2.0 * PI * r as f64 / 8.0);
            assert!((v - want).norm() < 1e-15);
        }
    }

    #[test]
    #[should_panic]
    fn radix2_rejects_odd_length() {
        let mut x = vec![Complex64::default(); 6];
        radix2_in_place(&mut x, 1.0);
    }

    proptest! {
        #[test]
        fn radix2_agrees_with_direct(
            log_n in 0u32..10,
            seed in proptest::collection::vec(-1.0f64..1.0, 2048),
        ) {
            let n = 1usize << log_n;
            let x: Vec<Complex64> = (0..n).map(|k| Complex64::new(seed[2 * k], seed[2 * k + 1])).collect();
            let fast = forward(&x, Algorithm::Radix2);
            let slow = forward(&x, Algorithm::Direct);
            prop_assert!(max_diff(&fast, &slow) < 1e-12 * n as f64);
        }

        #[test]
        fn inverse_undoes_forward(
            n in 1usize..70,
            seed in proptest::collection::vec(-1.0f64..1.0, 140),
        ) {
            let x: Vec<Complex64> = (0..n).map(|k| Complex64::new(seed[2 * k], seed[2 * k + 1])).collect();
            let back = inverse(&forward(&x, Algorithm::Auto), Algorithm::Auto);
            prop_assert!(max_diff(&back, &x) < 1e-13);
        }
    }
}
