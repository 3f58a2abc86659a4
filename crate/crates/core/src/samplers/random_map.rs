use crate::geometry::{derive_stream, sample_poisson_window, CellGrid, Point, Purpose, RngStream, StreamKey, Window};
use crate::model::{Origin, Particle, PointId, Potential, Species};

/// One realization of the random thinning map `F` for one species at one
/// time index: a Poisson draw `Y` and lazily generated edge decisions.
///
/// Everything is a pure function of `(seed, replica, time, species)`, so the
/// same realization can be rebuilt at will and always thins identically.
#[derive(Clone, Debug)]
pub struct RandomMapRealization {
    pub time: i64,
    pub species: Species,
    pub draws: Vec<Particle>,
    edges: RngStream,
}

fn purposes(species: Species) -> (Purpose, Purpose) {
    match species {
        Species::Plus => (Purpose::PoissonPlus, Purpose::EdgePlus),
        Species::Minus => (Purpose::PoissonMinus, Purpose::EdgeMinus),
    }
}

impl RandomMapRealization {
    pub fn derive(seed: u64, replica: u64, time: i64, species: Species, w: &Window, z: f64) -> Self {
        let (poisson, edge) = purposes(species);
        let mut rng = derive_stream(seed, StreamKey::new(poisson, time, replica));
        let draws = sample_poisson_window(w, z, &mut rng)
            .into_iter()
            .enumerate()
            .map(|(i, pos)| Particle { pos, id: PointId::new(Origin::Draw, species, time, i as u32) })
            .collect();
        Self {
            time,
            species,
            draws,
            edges: derive_stream(seed, StreamKey::new(edge, time, replica)),
        }
    }

    /// The uniform deciding the edge between input particle `x` and draw `y`.
    #[inline]
    pub fn edge_uniform(&self, x: PointId, y_index: usize) -> f64 {
        self.edges.pair_uniform(x.raw(), y_index as u64)
    }

    /// Whether input particle `x` at displacement `d` from draw `y_index`
    /// is joined to it, given edge probability `p`.
    #[inline]
    fn joined(&self, x: PointId, y_index: usize, p: f64) -> bool {
        p >= 1.0 || (p > 0.0 && self.edge_uniform(x, y_index) < p)
    }

    /// `F(input) = {y in Y : no edge between y and any input particle}`,
    /// in the order of `Y`.
    pub fn apply(&self, input: &[Particle], w: &Window, pot: &Potential) -> Vec<Particle> {
        if input.is_empty() || self.draws.is_empty() {
            return self.draws.clone();
        }
        let positions: Vec<Point> = input.iter().map(|p| p.pos).collect();
        let grid = CellGrid::build(w, &positions, pot.range()).expect("validated window and potential");
        self.draws
            .iter()
            .enumerate()
            .filter(|(yi, y)| {
                let mut removed = false;
                grid.for_each_within(&y.pos, |xi, d| {
                    if !removed {
                        removed = self.joined(input[xi].id, *yi, pot.edge_prob_raw(&d));
                    }
                });
                !removed
            })
            .map(|(_, y)| *y)
            .collect()
    }
}

/// `true` if every particle of `a` is in `b`; both sorted by id.
pub(crate) fn is_sorted_subset(a: &[Particle], b: &[Particle]) -> bool {
    let mut j = 0;
    for p in a {
        while j < b.len() && b[j].id < p.id {
            j += 1;
        }
        if j == b.len() || b[j].id != p.id {
            return false;
        }
        j += 1;
    }
    true
}

pub(crate) fn same_ids(a: &[Particle], b: &[Particle]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.id == y.id)
}
