use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Erdős–Rényi `G(n, p)`: pairs `i < j` are visited in lexicographic order and
/// each is kept independently with probability `p`.
pub fn sample_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                g.set(i, j, true);
            }
        }
    }
    Ok(g)
}
