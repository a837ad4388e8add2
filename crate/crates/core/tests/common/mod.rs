#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reeb_forge::catalog::{check_embeddable, make_bouquet, product};
use reeb_forge::{BubblingOp, BubblingScript, ManifoldDesc};

pub const DEFAULT_SEED: u64 = 0x005e_ed0f_4eeb;

/// Seed from `REEB_FORGE_SEED`, else a fixed default.
pub fn seed() -> u64 {
    std::env::var("REEB_FORGE_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ScriptShape {
    pub allow_wedge: bool,
    pub torsion_free: bool,
    /// Only generators with `χ >= 0`.
    pub nonnegative_chi: bool,
}

/// Catalog manifolds (parameters <= 4) that embed in `R^n` with dim < n.
pub fn generator_pool(n: usize, shape: ScriptShape) -> Vec<ManifoldDesc> {
    let mut pool = vec![ManifoldDesc::point()];
    for k in 1..=4 {
        pool.push(ManifoldDesc::sphere(k).unwrap());
        pool.push(ManifoldDesc::homology_sphere(k).unwrap());
    }
    for g in 0..=4 {
        pool.push(ManifoldDesc::surface(g));
    }
    if !shape.torsion_free {
        for (p, q) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3)] {
            pool.push(ManifoldDesc::lens(p, q).unwrap());
        }
    }
    let base = pool.clone();
    for a in &base {
        for b in &base {
            if !a.is_point() && !b.is_point() && a.dim() + b.dim() <= 4 {
                pool.push(product(a, b));
            }
        }
    }
    pool.retain(|m| {
        m.dim() < n
            && check_embeddable(m, n)
            && (!shape.nonnegative_chi || m.euler_characteristic() >= 0)
            && (!shape.torsion_free || m.homology().is_torsion_free())
    });
    pool
}

pub fn random_op(rng: &mut ChaCha8Rng, pool: &[ManifoldDesc], shape: ScriptShape) -> BubblingOp {
    if shape.allow_wedge && rng.gen_bool(0.3) {
        let m = rng.gen_range(1..=3);
        let parts: Vec<ManifoldDesc> = (0..m).map(|_| pool.choose(rng).unwrap().clone()).collect();
        BubblingOp::wedge(make_bouquet(&parts).unwrap())
    } else {
        BubblingOp::normal(pool.choose(rng).unwrap().clone())
    }
}

pub fn random_script(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_ops: usize,
    shape: ScriptShape,
) -> BubblingScript {
    let pool = generator_pool(n, shape);
    let mut script = BubblingScript::new(n);
    for _ in 0..rng.gen_range(0..=max_ops) {
        script.push(random_op(rng, &pool, shape));
    }
    script
}
