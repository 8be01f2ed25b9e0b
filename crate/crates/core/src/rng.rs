//! Named, reproducible random substreams.
//!
//! Every consumer of randomness asks for a stream by name (`sampler/3`,
//! `oracle/rep_12`, ...). The name selects the ChaCha stream id while the
//! experiment seed selects the key, so streams never overlap and adding a new
//! consumer leaves existing ones untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type StreamRng = ChaCha12Rng;

/// FNV-1a; stable across platforms and releases, unlike `DefaultHasher`.
fn stream_id(name: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in name.bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

pub fn substream(seed: u64, name: &str) -> StreamRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(name));
    rng
}
