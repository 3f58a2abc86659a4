use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::window::{Point, Window, MAX_DIM};

/// Poisson-distributed count with the given mean (0 for a zero mean).
pub fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("finite positive Poisson mean");
    let n: f64 = d.sample(rng);
    n as usize
}

fn uniform_in_box<R: Rng + ?Sized>(lo: &[f64], hi: &[f64], rng: &mut R) -> Point {
    let mut c = [0.0; MAX_DIM];
    for k in 0..lo.len() {
        c[k] = lo[k] + (hi[k] - lo[k]) * rng.random::<f64>();
    }
    Point::from_raw(c, lo.len())
}

/// Homogeneous Poisson process of intensity `z` on the window.
pub fn sample_poisson_window<R: Rng + ?Sized>(w: &Window, z: f64, rng: &mut R) -> Vec<Point> {
    let n = poisson_count(z * w.volume(), rng);
    (0..n)
        .map(|_| uniform_in_box(w.lower(), w.upper(), rng))
        .collect()
}

/// Homogeneous Poisson process of intensity `z` on the collar (the enlarged box
/// minus the window), by restricting a Poisson draw on the enlarged box.
pub fn sample_poisson_collar<R: Rng + ?Sized>(w: &Window, z: f64, rng: &mut R) -> Vec<Point> {
    let c = w.collar_width();
    if c <= 0.0 {
        return Vec::new();
    }
    let lo: Vec<f64> = w.lower().iter().map(|v| v - c).collect();
    let hi: Vec<f64> = w.upper().iter().map(|v| v + c).collect();
    let n = poisson_count(z * w.extended_volume(), rng);
    (0..n)
        .map(|_| uniform_in_box(&lo, &hi, rng))
        .filter(|p| !w.contains(p))
        .collect()
}
