//! Seeded instance generators: office floors (rooms off a corridor), random
//! polyominoes grown from short random walks, and straight corridors.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::grid::{build_grid_instance, Coverage, GridError, GridInstance, Heading, Pixel};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Office,
    RandomPolyomino,
    Corridor,
}

impl std::str::FromStr for GenKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "office" => Ok(GenKind::Office),
            "random-polyomino" => Ok(GenKind::RandomPolyomino),
            "corridor" => Ok(GenKind::Corridor),
            _ => Err(GenError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Full,
    Subset,
    Penalty,
}

impl std::str::FromStr for Variant {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Variant::Full),
            "subset" => Ok(Variant::Subset),
            "penalty" => Ok(Variant::Penalty),
            _ => Err(GenError::ParamOutOfRange(format!("variant `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenParams {
    /// Target pixel count (offices may overshoot to finish a room).
    pub pixels: usize,
    /// Random walk length for polyominoes, `1..=64`.
    pub scale: usize,
    /// Optional `width × height` box the polyomino must fit in.
    pub bounds: Option<(i32, i32)>,
    pub variant: Variant,
    /// Fraction of pixels that are in the subset or carry a penalty.
    pub density: f64,
    /// Penalties are drawn from `1..=max_penalty`.
    pub max_penalty: i64,
    pub kappa: Rational,
    pub tau: Rational,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            pixels: 30,
            scale: 4,
            bounds: None,
            variant: Variant::Full,
            density: 0.3,
            max_penalty: 8,
            kappa: Rational::from_integer(0),
            tau: Rational::from_integer(1),
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("unknown generator `{0}` (expected office, random-polyomino or corridor)")]
    UnknownKind(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

pub fn gen_instance(kind: GenKind, params: &GenParams, seed: u64) -> Result<GridInstance, GenError> {
    check(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = match kind {
        GenKind::Corridor => (0..params.pixels as i32).map(|x| Pixel::new(x, 0)).collect(),
        GenKind::RandomPolyomino => polyomino(params, &mut rng),
        GenKind::Office => office(params.pixels, &mut rng),
    };
    let coverage = coverage(params, &pixels, &mut rng);
    Ok(build_grid_instance(pixels, coverage, params.kappa, params.tau)?)
}

fn check(p: &GenParams) -> Result<(), GenError> {
    let bad = |m: &str| Err(GenError::ParamOutOfRange(m.to_string()));
    if p.pixels < 2 || p.pixels > 100_000 {
        return bad("pixels must be in 2..=100000");
    }
    if p.scale == 0 || p.scale > 64 {
        return bad("scale must be in 1..=64");
    }
    if let Some((w, h)) = p.bounds {
        if w < 1 || h < 1 || (w as i64 * h as i64) < p.pixels as i64 {
            return bad("bounds must hold at least `pixels` cells");
        }
    }
    if !(0.0..=1.0).contains(&p.density) {
        return bad("density must be in [0, 1]");
    }
    if p.max_penalty < 1 {
        return bad("max_penalty must be positive");
    }
    if p.kappa < Rational::from_integer(0) || p.tau < Rational::from_integer(0) {
        return bad("kappa and tau must be nonnegative");
    }
    Ok(())
}

fn polyomino(p: &GenParams, rng: &mut ChaCha8Rng) -> Vec<Pixel> {
    let inside = |q: Pixel| p.bounds.is_none_or(|(w, h)| q.x >= 0 && q.y >= 0 && q.x < w && q.y < h);
    let start = p.bounds.map_or(Pixel::new(0, 0), |(w, h)| Pixel::new(rng.gen_range(0..w), rng.gen_range(0..h)));
    let mut set = BTreeSet::from([start]);
    let mut list = vec![start];
    while set.len() < p.pixels {
        let mut at = *list.choose(rng).unwrap();
        for _ in 0..p.scale {
            let h = Heading::ALL[rng.gen_range(0..4)];
            let Some(next) = at.step(h).filter(|&q| inside(q)) else { continue };
            at = next;
            if set.insert(at) {
                list.push(at);
                if set.len() == p.pixels {
                    break;
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Rooms of 2..=4 by 2..=4 cells on both sides of a corridor, each with a
/// one-cell door.
fn office(target: usize, rng: &mut ChaCha8Rng) -> Vec<Pixel> {
    let mut set = BTreeSet::new();
    let mut x = 0;
    let mut above = true;
    while set.len() < target {
        let (w, h) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        for cx in x..x + w + 1 {
            set.insert(Pixel::new(cx, 0));
        }
        let door = x + rng.gen_range(0..w);
        let (door_y, y0) = if above { (1, 2) } else { (-1, -1 - h) };
        set.insert(Pixel::new(door, door_y));
        for rx in x..x + w {
            for ry in y0..y0 + h {
                set.insert(Pixel::new(rx, ry));
            }
        }
        if rng.gen_bool(0.5) {
            x += w + 1;
        }
        above = !above;
    }
    set.into_iter().collect()
}

fn coverage(p: &GenParams, pixels: &[Pixel], rng: &mut ChaCha8Rng) -> Coverage {
    match p.variant {
        Variant::Full => Coverage::Full,
        Variant::Subset => {
            let mut s: BTreeSet<Pixel> = pixels.iter().copied().filter(|_| rng.gen_bool(p.density)).collect();
            if s.is_empty() {
                s.insert(*pixels.choose(rng).unwrap());
            }
            Coverage::Subset(s)
        }
        Variant::Penalty => {
            let mut m = BTreeMap::new();
            for &q in pixels {
                if rng.gen_bool(p.density) {
                    m.insert(q, Rational::from_integer(rng.gen_range(1..=p.max_penalty)));
                }
            }
            Coverage::Penalty(m)
        }
    }
}
