//! Seeded, portable random primitives.
//!
//! Everything here is plain integer arithmetic (plus IEEE multiply/sqrt for
//! the Poisson sampler), so draws are bit-identical across platforms and
//! easy to reimplement in another language. The core mixer is splitmix64.

/// splitmix64 finalizer. Statistically strong enough to turn sequential
/// inputs into independent-looking 64-bit values.
pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `i`-th value of the stream identified by `seed`. Pure in (seed, i).
pub(crate) fn stream(seed: u64, i: u64) -> u64 {
    splitmix64(seed ^ splitmix64(i))
}

/// Uniform draw from `[1, hi]` using the given raw word.
/// Modulo bias is below `hi / 2^64`, irrelevant at the sizes used here.
pub(crate) fn uniform_1_to(word: u64, hi: u64) -> u64 {
    debug_assert!(hi >= 1);
    1 + word % hi
}

fn unit_f64(word: u64) -> f64 {
    // 53 top bits -> [0, 1)
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Poisson draw with integer mean `mean`, from the stream `(seed, i)`.
///
/// Small means use CDF inversion with e^-1 powers built by repeated
/// multiplication; large means use a 12-uniform Irwin-Hall normal
/// approximation. Neither path calls libm, so results are reproducible.
pub(crate) fn poisson(seed: u64, i: u64, mean: u64) -> u64 {
    const E_NEG_1: f64 = 0.367_879_441_171_442_33;
    if mean == 0 {
        return 0;
    }
    if mean <= 30 {
        let u = unit_f64(stream(seed, i));
        let mut p = 1.0;
        for _ in 0..mean {
            p *= E_NEG_1;
        }
        let mut cum = p;
        let mut j = 0u64;
        while cum < u && j < 16 * mean + 64 {
            j += 1;
            p *= mean as f64 / j as f64;
            cum += p;
        }
        j
    } else {
        // Irwin-Hall: sum of 12 uniforms has mean 6 and variance 1.
        let mut z = -6.0;
        for d in 0..12u64 {
            z += unit_f64(stream(seed, i.wrapping_mul(12).wrapping_add(d)));
        }
        let lambda = mean as f64;
        let x = lambda + lambda.sqrt() * z;
        if x < 0.0 {
            0
        } else {
            (x + 0.5) as u64
        }
    }
}
