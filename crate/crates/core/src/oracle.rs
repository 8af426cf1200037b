//! Randomized sweeps over the bundled fixture spaces.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{build_cover, verify_cover, Backend};
use crate::fixtures;
use crate::space::FiniteSpace;

/// The fixture spaces swept by default: circles, a path and a grid, all
/// carrying coordinates.
pub fn fixture_spaces() -> Vec<(String, FiniteSpace)> {
    vec![
        ("circle9".into(), fixtures::circle(9)),
        ("circle12".into(), fixtures::circle(12)),
        ("path7".into(), fixtures::path(7)),
        ("grid3x4".into(), fixtures::grid(3, 4)),
    ]
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverSweep {
    pub builds: usize,
    pub violations: usize,
    /// Descriptions of failing builds, at most a handful.
    pub failures: Vec<String>,
}

/// `builds` random cover builds with `backend`: a random fixture, a random
/// nonempty subset, `m ∈ 2..=6`, an admissible `mu`, and `eps` between a
/// tenth of the diameter and the diameter. For bricks, `mu ≤ m - D` keeps
/// every build feasible.
pub fn cover_sweep(backend: Backend, builds: usize, seed: u64) -> CoverSweep {
    let spaces = fixture_spaces();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CoverSweep::default();
    while out.builds < builds {
        let (name, s) = &spaces[rng.gen_range(0..spaces.len())];
        let d = s.coords().map_or(0, |c| c.dim);
        let m = rng.gen_range(2..=6usize);
        let top = match backend {
            Backend::Cells => m,
            Backend::Bricks => m.saturating_sub(d),
        };
        if top == 0 {
            continue;
        }
        let mu = rng.gen_range(1..=top);
        let mut pts: Vec<usize> = (0..s.n_points()).collect();
        pts.shuffle(&mut rng);
        let k = rng.gen_range(1..=pts.len());
        let z = &pts[..k];
        let all: Vec<usize> = (0..s.n_points()).collect();
        let diam = s.diameter(&all);
        let eps = diam * rng.gen_range(0.1..=1.0);
        out.builds += 1;
        let label = format!("{name} |Z|={k} m={m} mu={mu} eps={eps}");
        match build_cover(s, z, m, mu, eps, backend) {
            Ok(c) => {
                let report = verify_cover(&c, s);
                if !report.is_valid() {
                    out.violations += report.violations.len();
                    if out.failures.len() < 5 {
                        out.failures.push(format!("{label}: {}", report.violations[0]));
                    }
                }
            }
            Err(e) => {
                out.violations += 1;
                if out.failures.len() < 5 {
                    out.failures.push(format!("{label}: {e}"));
                }
            }
        }
    }
    out
}
