use super::particles::{Species, SpinPointConfig};
use super::potential::Potential;
use crate::error::{invalid, Result};
use crate::geometry::{CellGrid, Point, Window, MAX_DIM};

/// Interspecies energy `sum J(x - y)` over `x in X+`, `y in X-` with at least
/// one of the two inside the window. Infinite on a hard-core overlap.
pub fn hamiltonian_continuum(cfg: &SpinPointConfig, w: &Window, pot: &Potential) -> Result<f64> {
    cfg.validate(w)?;
    if cfg.plus.is_empty() || cfg.minus.is_empty() {
        return Ok(0.0);
    }
    let minus: Vec<Point> = cfg.minus.iter().map(|p| p.pos).collect();
    let grid = CellGrid::build(w, &minus, pot.range())?;
    let mut total = 0.0;
    for x in &cfg.plus {
        let x_in = w.contains(&x.pos);
        let mut hit_inf = false;
        grid.for_each_within(&x.pos, |j, d| {
            if x_in || w.contains(&minus[j]) {
                let e = pot.eval_raw(&d);
                if e == f64::INFINITY {
                    hit_inf = true;
                }
                total += e;
            }
        });
        if hit_inf {
            return Ok(f64::INFINITY);
        }
    }
    Ok(total)
}

/// Conditional intensity of adding a particle of `species` at `x`:
/// `z * exp(-sum_{y in opposite species} J(x - y))`.
pub fn papangelou_intensity(
    x: &Point,
    species: Species,
    cfg: &SpinPointConfig,
    w: &Window,
    pot: &Potential,
    z: f64,
) -> f64 {
    let mut energy = 0.0;
    for y in cfg.species(species.opposite()) {
        energy += pot.eval_raw(&w.displacement(x, &y.pos));
        if energy == f64::INFINITY {
            return 0.0;
        }
    }
    z * (-energy).exp()
}

/// Midpoint-rule value of `int_delta (1 - exp(-sum_{x in X+} J(x - y))) dy`,
/// using about `resolution` nodes per unit volume.
///
/// For a hard core this is the volume of `delta` covered by the balls `B_{2r}(x)`.
pub fn area_hamiltonian(
    plus: &[Point],
    delta: &Window,
    pot: &Potential,
    resolution: f64,
) -> Result<f64> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return invalid("quadrature resolution must be positive");
    }
    if plus.is_empty() {
        return Ok(0.0);
    }
    let dim = delta.dim();
    let per_unit = resolution.powf(1.0 / dim as f64);
    let mut n = [1usize; MAX_DIM];
    let mut h = [0.0; MAX_DIM];
    for k in 0..dim {
        n[k] = ((delta.side(k) * per_unit).ceil() as usize).max(1);
        h[k] = delta.side(k) / n[k] as f64;
    }
    let cell_volume: f64 = h[..dim].iter().product();
    let total_nodes: usize = n[..dim].iter().product();

    let reach = Window::new(delta.lower(), delta.upper())?.with_collar(pot.range())?;
    let grid = CellGrid::build(&reach, plus, pot.range())?;

    let mut sum = 0.0;
    let mut coords = [0.0; MAX_DIM];
    for node in 0..total_nodes {
        let mut rem = node;
        for k in 0..dim {
            coords[k] = delta.lower()[k] + (rem % n[k]) as f64 * h[k] + 0.5 * h[k];
            rem /= n[k];
        }
        let y = Point::new(&coords[..dim])?;
        let mut energy = 0.0;
        grid.for_each_within(&y, |_, d| energy += pot.eval_raw(&d));
        sum += -(-energy).exp_m1();
    }
    Ok(sum * cell_volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{derive_stream, Purpose, StreamKey};

    fn soft() -> Potential {
        Potential::paper_soft()
    }

    #[test]
    fn no_minus_means_zero_energy() {
        let w = Window::cube(2, 4.0).unwrap();
        let cfg = SpinPointConfig::from_points(&[Point::xy(1.0, 1.0)], &[]);
        assert_eq!(hamiltonian_continuum(&cfg, &w, &soft()).unwrap(), 0.0);
    }

    #[test]
    fn single_pair_energy() {
        let w = Window::new(&[-2.0, -2.0], &[2.0, 2.0]).unwrap();
        let cfg = SpinPointConfig::from_points(&[Point::xy(0.0, 0.0)], &[Point::xy(0.5, 0.0)]);
        let e = hamiltonian_continuum(&cfg, &w, &soft()).unwrap();
        assert!((e - 0.75).abs() < 1e-15);
        let far = SpinPointConfig::from_points(&[Point::xy(0.0, 0.0)], &[Point::xy(1.2, 0.0)]);
        assert_eq!(hamiltonian_continuum(&far, &w, &soft()).unwrap(), 0.0);
    }

    #[test]
    fn hard_core_overlap_is_infinite() {
        let w = Window::cube(2, 4.0).unwrap();
        let cfg = SpinPointConfig::from_points(&[Point::xy(1.0, 1.0)], &[Point::xy(1.5, 1.0)]);
        let e = hamiltonian_continuum(&cfg, &w, &Potential::HardCore { r: 0.5 }).unwrap();
        assert_eq!(e, f64::INFINITY);
    }

    #[test]
    fn pairs_entirely_outside_window_do_not_count() {
        let w = Window::cube(2, 4.0).unwrap().with_collar(1.0).unwrap();
        let cfg = SpinPointConfig::from_points(&[Point::xy(-0.5, -0.5)], &[Point::xy(-0.5, -0.2)]);
        assert_eq!(hamiltonian_continuum(&cfg, &w, &soft()).unwrap(), 0.0);
        let cfg = SpinPointConfig::from_points(&[Point::xy(-0.2, 0.5)], &[Point::xy(0.2, 0.5)]);
        assert!(hamiltonian_continuum(&cfg, &w, &soft()).unwrap() > 0.0);
    }

    fn random_cfg(n: usize, seed: u64, side: f64) -> SpinPointConfig {
        let mut s = derive_stream(seed, StreamKey::new(Purpose::Custom(9), 0, 0));
        let mut pts = |k: usize| -> Vec<Point> {
            (0..k)
                .map(|_| Point::xy(side * s.uniform(), side * s.uniform()))
                .collect()
        };
        let a = pts(n);
        let b = pts(n);
        SpinPointConfig::from_points(&a, &b)
    }

    #[test]
    fn symmetric_under_species_swap() {
        let w = Window::cube(2, 5.0).unwrap();
        for seed in 0..10 {
            let cfg = random_cfg(40, seed, 5.0);
            let a = hamiltonian_continuum(&cfg, &w, &soft()).unwrap();
            let b = hamiltonian_continuum(&cfg.swapped(), &w, &soft()).unwrap();
            assert!((a - b).abs() < 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn grid_energy_matches_all_pairs() {
        let w = Window::cube(2, 5.0).unwrap();
        let cfg = random_cfg(60, 99, 5.0);
        let mut brute = 0.0;
        for x in &cfg.plus {
            for y in &cfg.minus {
                brute += soft().eval(&x.pos.sub(&y.pos));
            }
        }
        let e = hamiltonian_continuum(&cfg, &w, &soft()).unwrap();
        assert!((e - brute).abs() < 1e-9);
    }

    #[test]
    fn papangelou_cases() {
        let w = Window::cube(2, 4.0).unwrap();
        let x = Point::xy(2.0, 2.0);
        let empty = SpinPointConfig::default();
        assert_eq!(papangelou_intensity(&x, Species::Plus, &empty, &w, &soft(), 1.7), 1.7);

        let cfg = SpinPointConfig::from_points(&[], &[Point::xy(2.5, 2.0)]);
        let g = papangelou_intensity(&x, Species::Plus, &cfg, &w, &soft(), 2.0);
        assert!((g - 2.0 * (-0.75f64).exp()).abs() < 1e-14);
        // Same-species neighbors do not matter.
        assert_eq!(papangelou_intensity(&x, Species::Minus, &cfg, &w, &soft(), 2.0), 2.0);

        let hc = Potential::HardCore { r: 0.5 };
        assert_eq!(papangelou_intensity(&x, Species::Plus, &cfg, &w, &hc, 2.0), 0.0);
    }

    #[test]
    fn area_empty_and_disk() {
        let delta = Window::new(&[-2.0, -2.0], &[2.0, 2.0]).unwrap();
        let hc = Potential::HardCore { r: 0.5 };
        assert_eq!(area_hamiltonian(&[], &delta, &hc, 1e3).unwrap(), 0.0);
        let a = area_hamiltonian(&[Point::xy(0.1, -0.2)], &delta, &hc, 1e4).unwrap();
        // 100 nodes per unit length; boundary error is well under 0.02.
        assert!((a - std::f64::consts::PI).abs() < 0.02, "area {a}");
        let twice = area_hamiltonian(&[Point::xy(0.1, -0.2), Point::xy(0.1, -0.2)], &delta, &hc, 1e4)
            .unwrap();
        assert_eq!(a, twice);
    }

    #[test]
    fn area_soft_matches_monte_carlo() {
        let delta = Window::cube(2, 3.0).unwrap();
        let plus = [Point::xy(1.0, 1.0), Point::xy(1.6, 1.2), Point::xy(2.9, 0.1)];
        let pot = soft();
        let quad = area_hamiltonian(&plus, &delta, &pot, 1e4).unwrap();

        let mut s = derive_stream(5, StreamKey::new(Purpose::Custom(11), 0, 0));
        let n = 200_000;
        let vals: Vec<f64> = (0..n)
            .map(|_| {
                let y = Point::xy(3.0 * s.uniform(), 3.0 * s.uniform());
                let e: f64 = plus.iter().map(|x| pot.eval(&x.sub(&y))).sum();
                9.0 * (1.0 - (-e).exp())
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((quad - mean).abs() < 4.0 * se + 1e-3, "quad {quad} mc {mean} se {se}");
    }
}
