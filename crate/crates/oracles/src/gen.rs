//! Seeded random workloads.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tempogeo::{EventSequence, RawEvent, Window};

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Point distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cloud {
    /// Uniform in the unit cube.
    Uniform,
    /// Small integer grid: many duplicates and collinear triples.
    Grid(u32),
    /// On the unit circle: every point is a hull vertex.
    Circle,
}

pub fn point(rng: &mut Rng64, dim: usize, cloud: Cloud) -> Vec<f64> {
    match cloud {
        Cloud::Uniform => (0..dim).map(|_| rng.gen::<f64>()).collect(),
        Cloud::Grid(side) => (0..dim).map(|_| rng.gen_range(0..side) as f64).collect(),
        Cloud::Circle => {
            let a = rng.gen::<f64>() * std::f64::consts::TAU;
            let mut p = vec![a.cos(), a.sin()];
            p.resize(dim, 0.0);
            p
        }
    }
}

/// Sequence of `n` points with timestamps `0..n`, optionally colored with
/// `colors` labels.
pub fn sequence(rng: &mut Rng64, n: usize, dim: usize, cloud: Cloud, colors: Option<u32>) -> EventSequence {
    let events = (0..n)
        .map(|k| {
            let p = point(rng, dim, cloud);
            match colors {
                Some(c) => RawEvent::colored(k as i64, p, rng.gen_range(0..c)),
                None => RawEvent::new(k as i64, p),
            }
        })
        .collect();
    EventSequence::new(events).expect("nonempty")
}

/// Uniformly random window of `[0, n)`.
pub fn window(rng: &mut Rng64, n: usize) -> Window {
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    Window::new(a.min(b), a.max(b))
}

/// Random window of width `w` (clipped to `n`).
pub fn window_of_width(rng: &mut Rng64, n: usize, w: usize) -> Window {
    let w = w.clamp(1, n);
    let i = rng.gen_range(0..=n - w);
    Window::new(i, i + w - 1)
}

/// Random nonzero direction.
pub fn direction(rng: &mut Rng64) -> [f64; 2] {
    loop {
        let d = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if d != [0.0, 0.0] {
            return d;
        }
    }
}
