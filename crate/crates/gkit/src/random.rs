//! Seeded random instance generation: groupoids drawn from the standard
//! constructions within size bounds, and wide subgroupoids of the adjacent
//! products drawn as closures of random arrow seeds. Identical seeds give
//! identical instances.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groupoid::{build_groupoid, cyclic_group, ArrowId, Builder, FiniteGroupoid};
use crate::mackey::MackeyInstance;

#[derive(Debug, Clone, Copy)]
pub struct RandomConfig {
    pub seed: u64,
    pub max_objects: usize,
    pub max_group_order: usize,
    pub count: usize,
}

impl RandomConfig {
    pub fn new(seed: u64, max_objects: usize, max_group_order: usize, count: usize) -> RandomConfig {
        assert!(max_objects >= 1 && max_group_order >= 1 && count >= 1, "bounds must be >= 1");
        RandomConfig { seed, max_objects, max_group_order, count }
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn random_base_groupoid(rng: &mut ChaCha8Rng, prefix: &str, max_objects: usize, max_group_order: usize) -> FiniteGroupoid {
    match rng.gen_range(0..4u8) {
        0 => {
            let n = rng.gen_range(1..=max_objects);
            build_groupoid(&Builder::Trivial { elements: labels(prefix, n) }).unwrap()
        }
        1 => {
            let n = rng.gen_range(1..=max_objects);
            build_groupoid(&Builder::Pairs { elements: labels(prefix, n) }).unwrap()
        }
        2 => {
            let n = rng.gen_range(1..=max_objects);
            let blocks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let mut classes: Vec<Vec<String>> = Vec::new();
            let mut block_ids: Vec<usize> = Vec::new();
            for (i, &b) in blocks.iter().enumerate() {
                match block_ids.iter().position(|&x| x == b) {
                    Some(c) => classes[c].push(format!("{prefix}{i}")),
                    None => {
                        block_ids.push(b);
                        classes.push(vec![format!("{prefix}{i}")]);
                    }
                }
            }
            build_groupoid(&Builder::EqRel { elements: labels(prefix, n), classes }).unwrap()
        }
        _ => {
            let q = rng.gen_range(1..=max_group_order);
            cyclic_group(q).unwrap()
        }
    }
}

/// Draws one groupoid from {trivial, pairs, random equivalence relation,
/// cyclic group, product of two of those} with at most `max_objects`
/// objects. Product draws retry until the bound fits, then shrink to a
/// point.
pub fn random_groupoid(
    rng: &mut ChaCha8Rng,
    prefix: &str,
    max_objects: usize,
    max_group_order: usize,
) -> Arc<FiniteGroupoid> {
    if rng.gen_range(0..5u8) == 4 {
        for _ in 0..16 {
            let a = random_base_groupoid(rng, &format!("{prefix}l"), max_objects, max_group_order);
            let b = random_base_groupoid(rng, &format!("{prefix}r"), max_objects, max_group_order);
            if a.n_objects() * b.n_objects() <= max_objects {
                return Arc::new(
                    build_groupoid(&Builder::Product(Arc::new(a), Arc::new(b))).unwrap(),
                );
            }
        }
        return Arc::new(build_groupoid(&Builder::Trivial { elements: labels(prefix, 1) }).unwrap());
    }
    Arc::new(random_base_groupoid(rng, prefix, max_objects, max_group_order))
}

fn random_seed_pairs(rng: &mut ChaCha8Rng, left: &FiniteGroupoid, right: &FiniteGroupoid) -> Vec<(ArrowId, ArrowId)> {
    let n = rng.gen_range(0..=2usize);
    (0..n)
        .map(|_| {
            (
                ArrowId(rng.gen_range(0..left.n_arrows())),
                ArrowId(rng.gen_range(0..right.n_arrows())),
            )
        })
        .collect()
}

/// The instance drawn at `index` under this configuration. Deterministic in
/// `(seed, index)` and independent of `count`, so batches may be generated
/// concurrently.
pub fn random_instance_at(cfg: &RandomConfig, index: u64) -> MackeyInstance {
    // Derive one stream per instance; StdRng mixes seed and index so that
    // nearby seeds do not share streams.
    let mixed = {
        let mut m = StdRng::seed_from_u64(cfg.seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        m.gen::<u64>()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    let k = random_groupoid(&mut rng, "k", cfg.max_objects, cfg.max_group_order);
    let h = random_groupoid(&mut rng, "h", cfg.max_objects, cfg.max_group_order);
    let g = random_groupoid(&mut rng, "g", cfg.max_objects, cfg.max_group_order);
    let m_seeds = random_seed_pairs(&mut rng, &k, &h);
    let l_seeds = random_seed_pairs(&mut rng, &h, &g);
    MackeyInstance::from_seed_arrows(k, h, g, &m_seeds, &l_seeds)
        .expect("wide closures always satisfy the instance invariants")
}

/// The first instance of the batch.
pub fn random_instance(cfg: &RandomConfig) -> MackeyInstance {
    random_instance_at(cfg, 0)
}

/// The whole batch, in index order.
pub fn random_instances(cfg: &RandomConfig) -> Vec<MackeyInstance> {
    (0..cfg.count as u64).map(|i| random_instance_at(cfg, i)).collect()
}
