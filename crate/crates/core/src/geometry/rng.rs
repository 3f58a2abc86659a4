//! Counter-based random streams.
//!
//! A stream is identified by a master seed and a structured [`StreamKey`].
//! The `n`-th output of a stream is a pure function of `(seed, key, n)`, so any
//! draw can be recomputed later without storing it. This is what lets the
//! perfect sampler replay the random map of a given time step exactly, run
//! after run.
//!
//! The generator is SplitMix64 started from a hash of the key: output `n` is
//! the 64-bit finalizer applied to `state + (n + 1) * GAMMA`.

use rand::RngCore;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps 64 random bits to a uniform double in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// What a stream is used for. Distinct purposes never share draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Purpose {
    PoissonPlus,
    PoissonMinus,
    EdgePlus,
    EdgeMinus,
    Boundary,
    Coloring,
    ClusterEdges,
    Percolation,
    Custom(u32),
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::PoissonPlus => 1,
            Purpose::PoissonMinus => 2,
            Purpose::EdgePlus => 3,
            Purpose::EdgeMinus => 4,
            Purpose::Boundary => 5,
            Purpose::Coloring => 6,
            Purpose::ClusterEdges => 7,
            Purpose::Percolation => 8,
            Purpose::Custom(c) => 0x1_0000_0000 | c as u64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub purpose: Purpose,
    pub time: i64,
    pub replica: u64,
}

impl StreamKey {
    pub fn new(purpose: Purpose, time: i64, replica: u64) -> Self {
        Self {
            purpose,
            time,
            replica,
        }
    }

    fn hash(&self, seed: u64) -> u64 {
        let mut h = mix64(seed ^ 0x5eed_0f_c0ff_ee00);
        for word in [self.purpose.tag(), self.time as u64, self.replica] {
            h = mix64(h.wrapping_add(GAMMA) ^ mix64(word.wrapping_add(GAMMA)));
        }
        h
    }
}

/// A replayable pseudo-random stream; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    key: StreamKey,
    state: u64,
    counter: u64,
}

pub fn derive_stream(master_seed: u64, key: StreamKey) -> RngStream {
    RngStream {
        seed: master_seed,
        key,
        state: key.hash(master_seed),
        counter: 0,
    }
}

impl RngStream {
    pub fn key(&self) -> StreamKey {
        self.key
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// The 64-bit word at `counter`, independent of the current position.
    #[inline]
    pub fn word_at(&self, counter: u64) -> u64 {
        mix64(self.state.wrapping_add(counter.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    /// Uniform in `[0, 1)` attached to the ordered pair of labels `(a, b)`.
    /// Used for lazily generated edge decisions.
    #[inline]
    pub fn pair_uniform(&self, a: u64, b: u64) -> f64 {
        let h = mix64(self.state ^ mix64(a.wrapping_mul(GAMMA) ^ 0x243f_6a88_85a3_08d3));
        unit_f64(mix64(h.wrapping_add(b.wrapping_add(1).wrapping_mul(GAMMA))))
    }

    /// Independent child stream, e.g. one per trial of an estimator.
    pub fn child(&self, index: u64) -> RngStream {
        let state = mix64(mix64(self.state ^ 0x6a09_e667_f3bc_c908).wrapping_add(index.wrapping_mul(GAMMA)));
        RngStream {
            seed: self.seed,
            key: self.key,
            state,
            counter: 0,
        }
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        let w = self.word_at(self.counter);
        self.counter += 1;
        w
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
