use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent sample streams derived from one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Channel {
    TwoCopy = 1,
    ThreeCopy = 2,
}

/// ChaCha8 keyed by `master_seed` on the stream `(channel, repetition)`.
///
/// Streams depend only on their indices, so results do not depend on which
/// worker thread handles a repetition.
pub fn stream_rng(master_seed: u64, channel: Channel, repetition: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((channel as u64) << 56) ^ repetition);
    rng
}
