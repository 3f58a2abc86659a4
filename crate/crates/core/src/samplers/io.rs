use std::io::Write;

use serde::Serialize;

use super::setup::BoundaryCondition;
use crate::model::{Potential, SpinPointConfig};

/// Writes `species,x1,...,xd` rows, plus particles first, with shortest
/// round-trip decimal coordinates.
pub fn write_sample_csv<W: Write>(cfg: &SpinPointConfig, dim: usize, mut out: W) -> std::io::Result<()> {
    let header: Vec<String> = (1..=dim).map(|k| format!("x{k}")).collect();
    writeln!(out, "species,{}", header.join(","))?;
    for (label, set) in [("plus", &cfg.plus), ("minus", &cfg.minus)] {
        for p in set.iter() {
            let coords: Vec<String> = p.pos.coords().iter().map(|c| format!("{c}")).collect();
            writeln!(out, "{label},{}", coords.join(","))?;
        }
    }
    Ok(())
}

/// Run record stored next to every sample.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub seed: u64,
    pub replica: u64,
    pub z: [f64; 2],
    pub potential: Potential,
    pub bc: BoundaryCondition,
    #[serde(rename = "N_K", skip_serializing_if = "Option::is_none")]
    pub n_k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweeps: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn csv_layout() {
        let cfg = SpinPointConfig::from_points(&[Point::xy(0.1, 2.0)], &[Point::xy(1.0 / 3.0, 0.5)]);
        let mut buf = Vec::new();
        write_sample_csv(&cfg, 2, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "species,x1,x2\nplus,0.1,2\nminus,0.3333333333333333,0.5\n"
        );
    }
}
