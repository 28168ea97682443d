//! Keyed pseudorandom permutation of `0..n`: a 4-round balanced Feistel
//! network over the smallest even bit width covering `n`, with SplitMix64
//! round functions and cycle walking to stay inside the domain. Drawing a
//! random subset of size m means taking the images of `0..m`.

pub const PERMUTATION_ID: &str = "feistel4-splitmix64-cyclewalk/1";

const ROUNDS: usize = 4;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct FeistelPermutation {
    domain: u64,
    half_bits: u32,
    keys: [u64; ROUNDS],
}

impl FeistelPermutation {
    pub fn new(domain: u64, seed: u64) -> Self {
        assert!(domain > 0, "empty permutation domain");
        let needed = 64 - (domain - 1).leading_zeros();
        let bits = needed.max(2).next_multiple_of(2);
        let mut keys = [0u64; ROUNDS];
        let mut state = seed;
        for key in &mut keys {
            state = splitmix64(state);
            *key = state;
        }
        FeistelPermutation { domain, half_bits: bits / 2, keys }
    }

    fn round_trip(&self, x: u64) -> u64 {
        let mask = (1u64 << self.half_bits) - 1;
        let (mut left, mut right) = (x >> self.half_bits, x & mask);
        for (round, &key) in self.keys.iter().enumerate() {
            let f = splitmix64(right ^ key ^ round as u64) & mask;
            (left, right) = (right, left ^ f);
        }
        (left << self.half_bits) | right
    }

    pub fn apply(&self, x: u64) -> u64 {
        assert!(x < self.domain);
        let mut y = self.round_trip(x);
        while y >= self.domain {
            y = self.round_trip(y);
        }
        y
    }
}
