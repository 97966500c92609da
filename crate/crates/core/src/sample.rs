//! Seeded random instances shared by the suites and tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::LatticeVector;
use crate::surfacegroup::{Letter, Word};

/// Deterministic generator for a named stream under a seed.
pub fn rng(seed: u64, stream: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// Generator indices of the given blocks.
pub fn block_gens(blocks: impl IntoIterator<Item = usize>) -> Vec<u16> {
    blocks
        .into_iter()
        .flat_map(|d| [(2 * d - 1) as u16, (2 * d) as u16])
        .collect()
}

/// A reduced word of exactly `len` letters drawn from `gens`.
pub fn word(genus: usize, gens: &[u16], len: usize, rng: &mut impl Rng) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(
            *gens.choose(rng).expect("nonempty generator set"),
            if rng.gen() { 1 } else { -1 },
        );
        if letters.last().is_some_and(|p| *p == l.inverse()) {
            continue;
        }
        letters.push(l);
    }
    Word::from_letters(genus, letters).expect("letters within genus")
}

/// A word with letters from `gens` and length in `1..=max_len` whose homology class is nonzero,
/// unless `gens` admits none.
pub fn nontrivial_word(genus: usize, gens: &[u16], max_len: usize, rng: &mut impl Rng) -> Word {
    loop {
        let len = rng.gen_range(1..=max_len);
        let w = word(genus, gens, len, rng);
        if !w.homology_class().is_zero() {
            return w;
        }
    }
}

/// A random word of trivial homology: a product of commutators of words over `gens`.
pub fn commutator_word(
    genus: usize,
    gens: &[u16],
    factors: usize,
    max_len: usize,
    rng: &mut impl Rng,
) -> Word {
    let mut out = Word::identity(genus);
    for _ in 0..factors {
        let x = word(genus, gens, rng.gen_range(1..=max_len), rng);
        let y = word(genus, gens, rng.gen_range(1..=max_len), rng);
        let c = Word::commutator(&x, &y).expect("same genus");
        out = out.multiply(&c).expect("same genus");
    }
    out
}

/// A lattice vector with coordinates in `-bound..=bound`.
pub fn lattice(genus: usize, bound: i64, rng: &mut impl Rng) -> LatticeVector {
    LatticeVector::new(
        (0..2 * genus)
            .map(|_| rng.gen_range(-bound..=bound))
            .collect(),
    )
    .expect("positive genus")
}

/// A lattice vector supported on `blocks` with coordinates in `-bound..=bound`.
pub fn lattice_on(genus: usize, blocks: &[usize], bound: i64, rng: &mut impl Rng) -> LatticeVector {
    let mut c = vec![0; 2 * genus];
    for &d in blocks {
        c[2 * d - 2] = rng.gen_range(-bound..=bound);
        c[2 * d - 1] = rng.gen_range(-bound..=bound);
    }
    LatticeVector::new(c).expect("positive genus")
}

/// A nonzero lattice vector supported on `blocks`.
pub fn nonzero_lattice_on(
    genus: usize,
    blocks: &[usize],
    bound: i64,
    rng: &mut impl Rng,
) -> LatticeVector {
    loop {
        let v = lattice_on(genus, blocks, bound, rng);
        if !v.is_zero() {
            return v;
        }
    }
}
