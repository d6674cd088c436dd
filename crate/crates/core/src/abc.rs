//! Bee-colony search over the smoothing-constant vector.
//!
//! The scheme follows the scout/forager style: `ns` scouts are scattered
//! uniformly over the parameter box, the best `nb` sites recruit foragers
//! for local search (elite sites get more), and the remaining scouts are
//! resampled every iteration. A site's flower patch is an axis-aligned box
//! around its scout that shrinks whenever no forager improves on it.
//!
//! Everything is driven by a single seeded PRNG, so runs are reproducible
//! bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Lower clamp of every search coordinate. The model's smoothing constants
/// live in (0, 1]; the open end is approximated by a small positive floor
/// so the update equations stay well-defined.
pub const PARAM_MIN: f64 = 1e-4;
/// Upper clamp of every search coordinate.
pub const PARAM_MAX: f64 = 1.0;

/// Colony sizing and termination settings.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcConfig {
    /// Scout count (population size).
    pub ns: usize,
    /// Best sites kept for local search; at most `ns`.
    pub nb: usize,
    /// Elite sites among the best; at most `nb`.
    pub ne: usize,
    /// Foragers recruited per elite site.
    pub nre: usize,
    /// Foragers recruited per remaining best site; fewer than `nre`.
    pub nrb: usize,
    /// Initial neighborhood half-width of a flower patch.
    pub patch_radius: f64,
    /// Patch shrink factor applied when no forager improves the site.
    pub shrink: f64,
    /// Local-search cycles per site per iteration.
    pub local_cycles: usize,
    /// Maximum number of iterations.
    pub max_iter: usize,
    /// Stop once the best-fitness improvement between consecutive
    /// iterations drops to this value or below.
    pub max_error: f64,
    /// PRNG seed.
    pub seed: u64,
}

impl Default for AbcConfig {
    fn default() -> Self {
        Self {
            ns: 30,
            nb: 10,
            ne: 3,
            nre: 7,
            nrb: 3,
            patch_radius: 0.1,
            shrink: 0.8,
            local_cycles: 5,
            max_iter: 50,
            max_error: 1e-6,
            seed: 0,
        }
    }
}

impl AbcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ns == 0 || self.nb == 0 || self.ne == 0 || self.nre == 0 {
            return Err(Error::InvalidConfig("colony sizes must be positive".into()));
        }
        if self.ne > self.nb || self.nb > self.ns {
            return Err(Error::InvalidConfig(
                "colony sizing must satisfy ne <= nb <= ns".into(),
            ));
        }
        if self.nrb >= self.nre {
            return Err(Error::InvalidConfig(
                "elite sites must recruit more foragers than remaining best sites".into(),
            ));
        }
        if !(self.patch_radius > 0.0 && self.patch_radius < 1.0) {
            return Err(Error::InvalidConfig("patch radius must lie in (0, 1)".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidConfig("shrink factor must lie in (0, 1)".into()));
        }
        if self.local_cycles == 0 || self.max_iter == 0 {
            return Err(Error::InvalidConfig(
                "local cycles and max iterations must be positive".into(),
            ));
        }
        if self.max_error < 0.0 {
            return Err(Error::InvalidConfig("max error must be nonnegative".into()));
        }
        Ok(())
    }
}

/// A candidate parameter point with its fitness (replay MSE; lower is
/// better).
#[derive(Debug, Clone, PartialEq)]
pub struct Bee {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// Outcome of an optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub position: Vec<f64>,
    pub fitness: f64,
    /// Best fitness in the population at the end of each iteration.
    pub best_per_iter: Vec<f64>,
    /// Total number of fitness evaluations performed.
    pub evaluations: usize,
}

fn sanitize(fitness: f64) -> f64 {
    if fitness.is_nan() {
        f64::INFINITY
    } else {
        fitness
    }
}

fn random_position<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.random_range(PARAM_MIN..=PARAM_MAX))
        .collect()
}

fn sort_ascending(bees: &mut [Bee]) {
    // total_cmp keeps the sort stable in the presence of infinities
    bees.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
}

/// Local search within one flower patch.
///
/// Each cycle samples `recruits` positions uniformly in the box
/// `center ± radius` (clamped to the parameter bounds). If the best sample
/// beats the center it becomes the new center and the radius is kept;
/// otherwise the patch shrinks by `shrink`. The center itself is never
/// re-evaluated.
pub fn local_search<F, R>(
    mut center: Bee,
    mut radius: f64,
    shrink: f64,
    recruits: usize,
    cycles: usize,
    fitness: &mut F,
    rng: &mut R,
) -> Bee
where
    F: FnMut(&[f64]) -> f64,
    R: Rng,
{
    debug_assert!(radius > 0.0);
    for _ in 0..cycles {
        let mut best_sample: Option<Bee> = None;
        for _ in 0..recruits {
            let position: Vec<f64> = center
                .position
                .iter()
                .map(|&c| {
                    rng.random_range(c - radius..=c + radius)
                        .clamp(PARAM_MIN, PARAM_MAX)
                })
                .collect();
            let fit = sanitize(fitness(&position));
            if best_sample.as_ref().is_none_or(|b| fit < b.fitness) {
                best_sample = Some(Bee {
                    position,
                    fitness: fit,
                });
            }
        }
        match best_sample {
            Some(sample) if sample.fitness < center.fitness => center = sample,
            _ => radius *= shrink,
        }
    }
    center
}

/// Runs the full colony search and returns the best bee seen.
///
/// Deterministic for a given `config.seed`. Stops after `max_iter`
/// iterations or as soon as the best fitness improves by no more than
/// `max_error` between consecutive iterations (never on the first).
pub fn optimize<F>(mut fitness: F, dim: usize, config: &AbcConfig) -> Result<OptimizeResult>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be at least 1".into()));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut evaluations = 0usize;
    let mut eval = |pos: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        sanitize(fitness(pos))
    };

    let mut scouts: Vec<Bee> = (0..config.ns)
        .map(|_| {
            let position = random_position(&mut rng, dim);
            let fitness = eval(&position, &mut evaluations);
            Bee { position, fitness }
        })
        .collect();
    sort_ascending(&mut scouts);
    let mut best = scouts[0].clone();

    let mut best_per_iter = Vec::new();
    let mut previous_best: Option<f64> = None;

    for _ in 0..config.max_iter {
        // local search around the best sites, elites first
        for site in 0..config.nb {
            let recruits = if site < config.ne {
                config.nre
            } else {
                config.nrb
            };
            let center = scouts[site].clone();
            scouts[site] = local_search(
                center,
                config.patch_radius,
                config.shrink,
                recruits,
                config.local_cycles,
                &mut |pos: &[f64]| eval(pos, &mut evaluations),
                &mut rng,
            );
        }

        // fresh random solutions for the non-best sites
        for site in config.nb..config.ns {
            let position = random_position(&mut rng, dim);
            let fitness = eval(&position, &mut evaluations);
            scouts[site] = Bee { position, fitness };
        }

        sort_ascending(&mut scouts);
        let current = scouts[0].fitness;
        if current < best.fitness {
            best = scouts[0].clone();
        }
        best_per_iter.push(best.fitness);

        if let Some(previous) = previous_best {
            if previous - current <= config.max_error {
                break;
            }
        }
        previous_best = Some(current);
    }

    Ok(OptimizeResult {
        position: best.position,
        fitness: best.fitness,
        best_per_iter,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(p: &[f64]) -> f64 {
        p.iter().map(|&v| (v - 0.5) * (v - 0.5)).sum()
    }

    /// Exhaustive grid search at step 0.01, the independent optimum oracle.
    fn grid_min_2d<F: Fn(&[f64]) -> f64>(f: F) -> f64 {
        let mut best = f64::INFINITY;
        for i in 1..=100 {
            for j in 1..=100 {
                let p = [i as f64 * 0.01, j as f64 * 0.01];
                best = best.min(f(&p));
            }
        }
        best
    }

    fn grid_min_1d<F: Fn(&[f64]) -> f64>(f: F) -> f64 {
        (1..=100)
            .map(|i| f(&[i as f64 * 0.01]))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn finds_interior_optimum() {
        let config = AbcConfig {
            seed: 11,
            ..AbcConfig::default()
        };
        let result = optimize(sphere, 2, &config).unwrap();
        assert!((result.position[0] - 0.5).abs() < 0.05, "{:?}", result.position);
        assert!((result.position[1] - 0.5).abs() < 0.05, "{:?}", result.position);
        assert!(result.fitness <= grid_min_2d(sphere) + 1e-3);
    }

    #[test]
    fn finds_boundary_optimum() {
        let f = |p: &[f64]| (1.0 - p[0]) * (1.0 - p[0]);
        let config = AbcConfig {
            seed: 3,
            ..AbcConfig::default()
        };
        let result = optimize(f, 1, &config).unwrap();
        assert!((result.position[0] - 1.0).abs() < 0.05, "{:?}", result.position);
        assert!(result.fitness <= grid_min_1d(f) + 1e-3);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let config = AbcConfig {
            seed: 42,
            ..AbcConfig::default()
        };
        let a = optimize(sphere, 2, &config).unwrap();
        let b = optimize(sphere, 2, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn best_per_iteration_is_monotone() {
        let config = AbcConfig {
            seed: 5,
            max_error: 0.0,
            ..AbcConfig::default()
        };
        let result = optimize(sphere, 2, &config).unwrap();
        for w in result.best_per_iter.windows(2) {
            assert!(w[1] <= w[0], "best fitness regressed: {w:?}");
        }
        assert!(result.fitness <= result.best_per_iter[0]);
    }

    #[test]
    fn positions_stay_clamped() {
        for seed in 0..5 {
            let config = AbcConfig {
                seed,
                ..AbcConfig::default()
            };
            // optimum outside the box pushes positions onto the boundary
            let f = |p: &[f64]| p.iter().map(|&v| (v - 2.0) * (v - 2.0)).sum::<f64>();
            let result = optimize(f, 3, &config).unwrap();
            for &v in &result.position {
                assert!((PARAM_MIN..=PARAM_MAX).contains(&v));
            }
        }
    }

    #[test]
    fn evaluation_count_is_exact() {
        let config = AbcConfig {
            seed: 9,
            max_iter: 7,
            ..AbcConfig::default()
        };
        let mut count = 0usize;
        let result = optimize(
            |p: &[f64]| {
                count += 1;
                sphere(p)
            },
            2,
            &config,
        )
        .unwrap();
        // ns initial scouts, then per iteration: every site's recruits
        // (local cycles times per-site foragers) plus the refreshed
        // non-best scouts — nothing else may touch the fitness
        let per_site = config.local_cycles
            * (config.ne * config.nre + (config.nb - config.ne) * config.nrb);
        let iterations = result.best_per_iter.len();
        let expected = config.ns + iterations * (per_site + (config.ns - config.nb));
        assert_eq!(count, expected);
        assert_eq!(result.evaluations, expected);
        assert!(iterations >= 2);
    }

    #[test]
    fn stall_termination_stops_early() {
        let config = AbcConfig {
            seed: 1,
            max_error: 1e-6,
            max_iter: 50,
            ..AbcConfig::default()
        };
        let result = optimize(|_: &[f64]| 1.0, 2, &config).unwrap();
        // constant fitness: first iteration runs, second stalls out
        assert_eq!(result.best_per_iter.len(), 2);
    }

    #[test]
    fn local_search_keeps_center_on_constant_fitness() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let center = Bee {
            position: vec![0.4, 0.6],
            fitness: 1.0,
        };
        let result = local_search(
            center.clone(),
            0.1,
            0.8,
            4,
            5,
            &mut |_: &[f64]| 1.0,
            &mut rng,
        );
        assert_eq!(result, center);
    }

    #[test]
    fn local_search_improves_from_poor_center() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let start = vec![0.9, 0.9];
        let center = Bee {
            fitness: sphere(&start),
            position: start,
        };
        let initial = center.fitness;
        let mut f = sphere;
        let result = local_search(center, 0.1, 0.8, 10, 8, &mut f, &mut rng);
        assert!(result.fitness < initial);
    }

    #[test]
    fn local_search_evaluation_count() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let center = Bee {
            position: vec![0.5],
            fitness: 0.0,
        };
        let mut count = 0usize;
        local_search(
            center,
            0.1,
            0.8,
            1,
            1,
            &mut |_: &[f64]| {
                count += 1;
                1.0
            },
            &mut rng,
        );
        assert_eq!(count, 1);
    }

    #[test]
    fn config_validation() {
        let mut c = AbcConfig::default();
        assert!(c.validate().is_ok());
        c.ne = c.nb + 1;
        assert!(c.validate().is_err());
        let mut c = AbcConfig::default();
        c.nrb = c.nre;
        assert!(c.validate().is_err());
        let mut c = AbcConfig::default();
        c.patch_radius = 1.0;
        assert!(c.validate().is_err());
    }
}
