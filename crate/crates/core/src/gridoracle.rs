//! Brute-force oracle on the finite cyclic group `(1/q)Z / Z`: restriction,
//! finite minimality, the grid perturbation null space and a random
//! corpus of continuous minimal functions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, Rat};
use crate::linalg::Echelon;
use crate::pwl::PwlFunction;

pub const DEFAULT_OVERSAMPLE: u64 = 4;

/// Values of a function at `i/q`, `i = 0..q-1`, with `f = fi/q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    pub q: u64,
    pub values: Vec<Rat>,
    pub fi: u64,
}

impl GridFunction {
    pub fn f(&self) -> Rat {
        Rat::new(self.fi as i64, self.q as i64)
    }

    fn at(&self, i: u64) -> &Rat {
        &self.values[(i % self.q) as usize]
    }

    fn slack(&self, i: u64, j: u64) -> Rat {
        self.at(i) + self.at(j) - self.at(i + j)
    }

    /// Continuous interpolation over `(1/q)Z`.
    pub fn interpolate(&self) -> Result<PwlFunction> {
        let map: BTreeMap<Rat, Rat> = (0..self.q)
            .map(|i| (Rat::new(i as i64, self.q as i64), self.values[i as usize].clone()))
            .collect();
        PwlFunction::interpolate_from_grid(&map, self.f())
    }
}

fn grid_index(x: &Rat, q: u64) -> Option<u64> {
    let scaled = x * &Rat::int(q as i64);
    scaled.is_integer().then(|| scaled.numer().to_u64()).flatten()
}

pub fn restrict_to_grid(pi: &PwlFunction, q: u64) -> Result<GridFunction> {
    let fi = grid_index(pi.f(), q)
        .filter(|&i| i > 0 && i < q)
        .ok_or_else(|| Error::Grid(format!("f = {} is not an interior point of the 1/{q} grid", pi.f())))?;
    let mut values = Vec::with_capacity(q as usize);
    for i in 0..q {
        let x = Rat::new(i as i64, q as i64);
        if !pi.is_continuous_at(&x) {
            return Err(Error::Grid(format!("discontinuous at grid point {x}")));
        }
        values.push(pi.eval(&x));
    }
    Ok(GridFunction { q, values, fi })
}

pub fn grid_minimality(g: &GridFunction) -> bool {
    let q = g.q;
    let one = Rat::one();
    if !g.values[0].is_zero() || g.at(g.fi) != &one {
        return false;
    }
    if g.values.iter().any(|v| v.is_negative() || v > &one) {
        return false;
    }
    for i in 0..q {
        if g.at(i) + g.at(g.fi + q - i) != one {
            return false;
        }
        for j in i..q {
            if g.slack(i, j).is_negative() {
                return false;
            }
        }
    }
    true
}

/// Null space of `π̃(0) = π̃(f) = 0` and additivity on every tight pair.
pub fn grid_perturbation_basis(g: &GridFunction) -> Vec<Vec<Rat>> {
    let q = g.q as usize;
    let unit = |k: usize| {
        let mut row = vec![Rat::zero(); q];
        row[k] = Rat::one();
        row
    };
    let mut rows: BTreeSet<Vec<Rat>> = BTreeSet::new();
    rows.insert(unit(0));
    rows.insert(unit(g.fi as usize));
    for i in 0..q {
        for j in i..q {
            if g.slack(i as u64, j as u64).is_zero() {
                let mut row = vec![Rat::zero(); q];
                row[i] = &row[i] + &Rat::one();
                row[j] = &row[j] + &Rat::one();
                row[(i + j) % q] = &row[(i + j) % q] - &Rat::one();
                rows.insert(row);
            }
        }
    }
    let rows: Vec<Vec<Rat>> = rows.into_iter().collect();
    Echelon::new(&rows, q).null_space()
}

pub fn grid_perturbation_dimension(g: &GridFunction) -> usize {
    grid_perturbation_basis(g).len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GridVerdict {
    Extreme,
    NotExtreme,
}

#[derive(Clone, Debug)]
pub struct GridReport {
    pub q: u64,
    pub verdict: GridVerdict,
    pub dimension: usize,
    /// Interpolation of the first null-space vector, when there is one.
    pub witness: Option<PwlFunction>,
}

/// Smallest `q` with all breakpoints and `f` in `(1/q)Z`.
pub fn breakpoint_denominator(pi: &PwlFunction) -> Result<u64> {
    let mut pts = pi.breakpoints();
    pts.push(pi.f().clone());
    common_denominator(pts.iter())
        .to_u64()
        .ok_or_else(|| Error::Grid("breakpoint denominator too large".into()))
}

/// Extreme iff the restriction to `(1/(oversample q))Z` has no nonzero
/// perturbation.
pub fn grid_extremality_oracle(pi: &PwlFunction, oversample: u64) -> Result<GridReport> {
    if !pi.is_continuous() {
        return Err(Error::Precondition("grid oracle needs a continuous function".into()));
    }
    if oversample == 0 {
        return Err(Error::Precondition("oversample must be positive".into()));
    }
    let q = breakpoint_denominator(pi)? * oversample;
    let g = restrict_to_grid(pi, q)?;
    if !grid_minimality(&g) {
        return Err(Error::NotMinimal(format!("restriction to the 1/{q} grid")));
    }
    let basis = grid_perturbation_basis(&g);
    let witness = match basis.first() {
        Some(v) => Some(GridFunction { q, values: v.clone(), fi: g.fi }.interpolate()?),
        None => None,
    };
    let verdict = if basis.is_empty() { GridVerdict::Extreme } else { GridVerdict::NotExtreme };
    Ok(GridReport { q, verdict, dimension: basis.len(), witness })
}

/// Candidate symmetric grid function with values in `(1/d)Z`; `None`
/// when the symmetry pairing forces an out-of-range value.
fn random_symmetric(rng: &mut ChaCha8Rng, q: u64, fi: u64, d: i64) -> Option<GridFunction> {
    let mut values: Vec<Option<Rat>> = vec![None; q as usize];
    values[0] = Some(Rat::zero());
    values[fi as usize] = Some(Rat::one());
    for i in 1..q {
        if values[i as usize].is_some() {
            continue;
        }
        let partner = ((fi + q - i) % q) as usize;
        let v = if partner == i as usize { Rat::new(1, 2) } else { Rat::new(rng.gen_range(0..=d), d) };
        values[partner] = Some(Rat::one() - v.clone());
        values[i as usize] = Some(v);
    }
    let values: Vec<Rat> = values.into_iter().collect::<Option<_>>()?;
    Some(GridFunction { q, values, fi })
}

/// `count` distinct continuous minimal functions with breakpoints in
/// `(1/q)Z`, `2 <= q <= max_q`, from grid functions passing
/// `grid_minimality` and midpoints of pairs of them.
pub fn random_corpus(seed: u64, count: usize, max_q: u64) -> Vec<PwlFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: BTreeMap<(u64, u64), Vec<GridFunction>> = BTreeMap::new();
    let mut out: Vec<PwlFunction> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut push = |g: &GridFunction, out: &mut Vec<PwlFunction>| {
        if let Ok(pi) = g.interpolate() {
            let pi = pi.canonicalize();
            if seen.insert(pi.to_json_string()) {
                out.push(pi);
            }
        }
    };
    let mut attempts = 0usize;
    while out.len() < count && attempts < 200_000 {
        attempts += 1;
        let q = rng.gen_range(2..=max_q.max(2));
        let fi = rng.gen_range(1..q);
        let d = *[1i64, 2, 3, 4, 6].choose(&mut rng).unwrap();
        if rng.gen_bool(0.3) {
            if let Some(pool) = found.get(&(q, fi)).filter(|p| p.len() >= 2) {
                let a = pool.choose(&mut rng).unwrap();
                let b = pool.choose(&mut rng).unwrap();
                let values = a.values.iter().zip(&b.values).map(|(x, y)| x.mid(y)).collect();
                let g = GridFunction { q, values, fi };
                if a != b && grid_minimality(&g) {
                    push(&g, &mut out);
                }
                continue;
            }
        }
        let Some(g) = random_symmetric(&mut rng, q, fi, d) else { continue };
        if grid_minimality(&g) {
            push(&g, &mut out);
            found.entry((q, fi)).or_default().push(g);
        }
    }
    out
}
