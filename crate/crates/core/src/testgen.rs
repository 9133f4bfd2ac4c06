//! Seeded random instances for property suites.
//!
//! Instances have at most 5 messages over GF(2) or GF(3), and their
//! fitting patterns have at most 12 free cells (7 over GF(3)), so every
//! fitting matrix can be enumerated.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use crate::fitting::FittingPattern;
use crate::gf::PrimeField;
use crate::instance::{AdversarySplit, Instance, MessageSet, Receiver};

pub const MAX_MESSAGES: usize = 5;

pub fn max_free_cells(q: u32) -> usize {
    if q == 2 {
        12
    } else {
        7
    }
}

/// Instance and split for `seed`; the field is GF(3) for roughly a third
/// of the seeds.
pub fn random_instance(seed: u64) -> (Instance, AdversarySplit) {
    let mut rng = Pcg64::seed_from_u64(seed);
    let q = if rng.gen_ratio(1, 3) { 3 } else { 2 };
    generate(&mut rng, q)
}

pub fn random_instance_over(seed: u64, q: u32) -> (Instance, AdversarySplit) {
    let mut rng = Pcg64::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    generate(&mut rng, q)
}

fn generate(rng: &mut Pcg64, q: u32) -> (Instance, AdversarySplit) {
    let field = PrimeField::new(q as u64).expect("prime field order");
    let n = rng.gen_range(1..=MAX_MESSAGES);
    let inst = loop {
        let m = rng.gen_range(0..=n + 1);
        let receivers = (0..m).map(|_| random_receiver(rng, n)).collect();
        let inst = Instance::new(field, n, receivers).expect("generated receivers are well formed");
        if FittingPattern::from_instance(&inst).free_count() <= max_free_cells(q) {
            break inst;
        }
    };
    (inst, random_split(rng, n))
}

fn random_receiver(rng: &mut Pcg64, n: usize) -> Receiver {
    let mut messages: Vec<usize> = (0..n).collect();
    messages.shuffle(rng);
    let wanted = if n > 1 && rng.gen_ratio(1, 5) { 2 } else { 1 };
    let wants: MessageSet = messages[..wanted].iter().copied().collect();
    let has: MessageSet = messages[wanted..].iter().copied().filter(|_| rng.gen_bool(0.45)).collect();
    Receiver { wants, has }
}

fn random_split(rng: &mut Pcg64, n: usize) -> AdversarySplit {
    let mut parts: [MessageSet; 3] = Default::default();
    for j in 0..n {
        let part = match rng.gen_range(0..10) {
            0..=1 => 0,
            2..=5 => 1,
            _ => 2,
        };
        parts[part].insert(j);
    }
    if parts[1].is_empty() {
        let j = rng.gen_range(0..n);
        parts[0].remove(&j);
        parts[2].remove(&j);
        parts[1].insert(j);
    }
    let [known, sensitive, nonsensitive] = parts;
    AdversarySplit::new(n, known, sensitive, nonsensitive).expect("generated split partitions the messages")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_respects_bounds() {
        let mut saw_q3 = false;
        for seed in 0..300 {
            let (inst, split) = random_instance(seed);
            assert!(inst.message_count() <= MAX_MESSAGES);
            assert!(FittingPattern::from_instance(&inst).free_count() <= max_free_cells(inst.q()));
            assert!(split.s() >= 1);
            assert_eq!(split.message_count(), inst.message_count());
            saw_q3 |= inst.q() == 3;
        }
        assert!(saw_q3);
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_instance(17), random_instance(17));
        assert_eq!(random_instance_over(5, 2).0.q(), 2);
    }
}
