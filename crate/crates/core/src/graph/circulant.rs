use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Cayley graph of `Z_n` given by its connection set.
///
/// `conn` holds one representative `s` per shift class `{s, n - s}` with
/// `1 <= s <= n / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CirculantSpec {
    n: usize,
    conn: BTreeSet<usize>,
}

impl CirculantSpec {
    pub fn new(n: usize, conn: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("circulant graph needs n >= 1"));
        }
        let conn: BTreeSet<usize> = conn.into_iter().collect();
        if let Some(&s) = conn.iter().find(|&&s| s == 0 || s > n / 2) {
            return Err(Error::invalid(format!("shift {s} outside 1..={} for n={n}", n / 2)));
        }
        Ok(CirculantSpec { n, conn })
    }

    /// Normalizes arbitrary nonzero residues to their representatives
    /// `min(s, n - s)`.
    pub fn from_residues(n: usize, residues: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut conn = BTreeSet::new();
        for r in residues {
            let r = r % n.max(1);
            if r == 0 {
                return Err(Error::invalid("residue 0 is not a valid shift"));
            }
            conn.insert(r.min(n - r));
        }
        CirculantSpec::new(n, conn)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conn(&self) -> &BTreeSet<usize> {
        &self.conn
    }

    /// True if the residue `k mod n` is a neighbour of vertex 0.
    pub fn is_edge_shift(&self, k: usize) -> bool {
        let k = k % self.n;
        k != 0 && self.conn.contains(&k.min(self.n - k))
    }

    /// The complementary circulant: every shift class not in `conn`.
    pub fn complement(&self) -> CirculantSpec {
        let conn = (1..=self.n / 2).filter(|s| !self.conn.contains(s)).collect();
        CirculantSpec { n: self.n, conn }
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            for &s in &self.conn {
                g.set(i, (i + s) % self.n, true);
            }
        }
        g
    }

    /// Degree of every vertex.
    pub fn degree(&self) -> usize {
        self.conn.iter().map(|&s| if 2 * s == self.n { 1 } else { 2 }).sum()
    }
}

impl fmt::Display for CirculantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shifts: Vec<String> = self.conn.iter().map(|s| s.to_string()).collect();
        write!(f, "circulant {} : {}", self.n, shifts.join(","))
    }
}

impl FromStr for CirculantSpec {
    type Err = Error;

    /// Parses `circulant <n> : s1,s2,...` (the shift list may be empty).
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: 1, msg: msg.to_string() };
        let rest = s.trim().strip_prefix("circulant").ok_or_else(|| bad("expected 'circulant'"))?;
        let (n, shifts) = rest.split_once(':').ok_or_else(|| bad("expected ':'"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("bad vertex count"))?;
        let mut conn = Vec::new();
        for tok in shifts.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            conn.push(tok.parse::<usize>().map_err(|_| bad("bad shift"))?);
        }
        let len = conn.len();
        let spec = CirculantSpec::new(n, conn)?;
        if spec.conn.len() != len {
            return Err(bad("duplicate shift"));
        }
        Ok(spec)
    }
}

pub fn build_circulant(spec: &CirculantSpec) -> Graph {
    spec.to_graph()
}

/// Random dense circulant graph: every shift `1..=ceil((n-1)/2)` is included
/// with probability 1/2. For even `n` this range ends at the self-paired
/// shift `n/2`, which therefore gets one fair bit of its own.
pub fn sample_random_circulant(n: usize, seed: u64) -> Result<CirculantSpec> {
    if n < 2 {
        return Err(Error::invalid("random circulant needs n >= 2"));
    }
    let mut rng = rng_from_seed(seed);
    let top = n / 2; // == ceil((n-1)/2)
    let conn: Vec<usize> = (1..=top).filter(|_| rng.random::<bool>()).collect();
    CirculantSpec::new(n, conn)
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Smallest generator of `Z_p^*`.
pub fn primitive_root(p: usize) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p == 2 {
        return Ok(1);
    }
    let phi = (p - 1) as u64;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g as u64, phi / q, p as u64) != 1))
        .ok_or_else(|| Error::Internal(format!("no primitive root mod {p}")))
}

pub(crate) fn check_paley_prime(p: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p % 4 != 1 {
        return Err(Error::invalid(format!("{p} is not 1 mod 4")));
    }
    Ok(())
}

/// Nonzero quadratic residues mod `p`, ascending.
pub(crate) fn quadratic_residues(p: usize) -> Vec<usize> {
    let mut qr: Vec<usize> = (1..p).map(|x| x * x % p).collect();
    qr.sort_unstable();
    qr.dedup();
    qr
}

/// Paley graph on `Z_p`: `i ~ j` iff `i - j` is a nonzero square mod `p`.
pub fn build_paley(p: usize) -> Result<CirculantSpec> {
    check_paley_prime(p)?;
    CirculantSpec::from_residues(p, quadratic_residues(p))
}

/// The 1-localization of the Paley graph in its cyclic labelling.
#[derive(Clone, Debug)]
pub struct PaleyLocalization {
    /// Circulant on `Z_m`, `m = (p-1)/2`.
    pub spec: CirculantSpec,
    /// `labels[i] = g^(2i) mod p` for the primitive root `g`; vertex `i` of
    /// `spec` is the Paley vertex `labels[i]`.
    pub labels: Vec<usize>,
    pub generator: usize,
}

/// The neighbours of 0 in the Paley graph are the squares `g^(2i)`. Two of
/// them are adjacent iff `g^(2(i-j)) - 1` is a square, which depends only on
/// `i - j mod m`, so the localization is a circulant on `Z_m`.
pub fn paley_localization(p: usize) -> Result<PaleyLocalization> {
    check_paley_prime(p)?;
    let g = primitive_root(p)?;
    let m = (p - 1) / 2;
    let g2 = (g * g) % p;
    let mut labels = Vec::with_capacity(m);
    let mut x = 1usize;
    for _ in 0..m {
        labels.push(x);
        x = x * g2 % p;
    }
    let mut is_square = vec![false; p];
    for q in quadratic_residues(p) {
        is_square[q] = true;
    }
    let residues = (1..m).filter(|&s| is_square[(labels[s] + p - 1) % p]);
    let spec = CirculantSpec::from_residues(m, residues)?;
    Ok(PaleyLocalization { spec, labels, generator: g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complement, localize};

    #[test]
    fn nine_cycle() {
        let g = CirculantSpec::new(9, [1]).unwrap().to_graph();
        assert_eq!(g, Graph::cycle(9));
        assert!((0..9).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn nine_vertex_shifts_two_three() {
        // Row 0 of the adjacency matrix: neighbours 2, 3, 6, 7.
        let g = CirculantSpec::new(9, [2, 3]).unwrap().to_graph();
        assert_eq!(g.neighbors(0).collect::<Vec<_>>(), vec![2, 3, 6, 7]);
        assert!((0..9).all(|v| g.degree(v) == 4));
        for i in 0..9 {
            for j in 0..9 {
                let d = (i + 9 - j) % 9;
                assert_eq!(g.has_edge(i, j), [2, 3, 6, 7].contains(&d));
            }
        }
    }

    #[test]
    fn empty_connection_set() {
        assert_eq!(CirculantSpec::new(4, []).unwrap().to_graph(), Graph::empty(4));
    }

    #[test]
    fn rejects_bad_shifts() {
        assert!(CirculantSpec::new(9, [0]).is_err());
        assert!(CirculantSpec::new(9, [5]).is_err());
        assert!(CirculantSpec::new(8, [4]).is_ok());
    }

    #[test]
    fn cyclic_shift_is_an_automorphism() {
        for seed in 0..50 {
            let n = 2 + (seed as usize * 7) % 40;
            let g = sample_random_circulant(n, seed).unwrap().to_graph();
            let shift: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            assert!(g.is_isomorphic_under(&g, &shift));
        }
    }

    #[test]
    fn random_circulant_ranges() {
        for seed in 0..100 {
            let s = sample_random_circulant(9, seed).unwrap();
            assert!(s.conn().iter().all(|&k| (1..=4).contains(&k)));
        }
        // Some seed yields the single possible edge class on two vertices.
        let seed = (0..64).find(|&s| !sample_random_circulant(2, s).unwrap().conn().is_empty()).unwrap();
        let spec = sample_random_circulant(2, seed).unwrap();
        assert_eq!(spec.conn().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(spec.to_graph(), Graph::complete(2));
    }

    #[test]
    fn random_circulant_mean_size() {
        // |conn| ~ Binomial(32, 1/2): mean 16, sd of the mean over 1000 draws
        // is sqrt(8 / 1000) ~ 0.0894.
        let total: usize = (0..1000).map(|s| sample_random_circulant(64, s).unwrap().conn().len()).sum();
        let mean = total as f64 / 1000.0;
        assert!((mean - 16.0).abs() <= 4.0 * (8.0f64 / 1000.0).sqrt(), "mean {mean}");
    }

    #[test]
    fn paley_five_is_c5() {
        let spec = build_paley(5).unwrap();
        assert_eq!(spec.conn().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(spec.to_graph(), Graph::cycle(5));
    }

    #[test]
    fn paley_degrees() {
        for p in [5, 13, 17, 29] {
            let g = build_paley(p).unwrap().to_graph();
            assert!((0..p).all(|v| g.degree(v) == (p - 1) / 2), "p={p}");
        }
    }

    #[test]
    fn paley_rejects_bad_primes() {
        assert!(build_paley(7).is_err());
        assert!(build_paley(9).is_err());
        assert!(build_paley(21).is_err());
    }

    #[test]
    fn paley_self_complementary_under_nonresidue_scaling() {
        let p = 13;
        let g = build_paley(p).unwrap().to_graph();
        let qr = quadratic_residues(p);
        let c = (2..p).find(|x| !qr.contains(x)).unwrap();
        let perm: Vec<usize> = (0..p).map(|i| i * c % p).collect();
        assert!(g.is_isomorphic_under(&complement(&g), &perm));
    }

    #[test]
    fn paley_localization_matches_induced_subgraph() {
        for p in [13, 17, 29, 37, 101] {
            let loc = paley_localization(p).unwrap();
            let direct = localize(&build_paley(p).unwrap().to_graph(), &[0]).unwrap();
            assert_eq!(direct.graph.n(), (p - 1) / 2);
            // Map cyclic index i -> position of labels[i] in the direct labelling.
            let perm: Vec<usize> = loc
                .labels
                .iter()
                .map(|l| direct.labels.iter().position(|x| x == l).unwrap())
                .collect();
            assert!(loc.spec.to_graph().is_isomorphic_under(&direct.graph, &perm), "p={p}");
        }
    }

    #[test]
    fn text_round_trip() {
        let spec = CirculantSpec::new(12, [1, 4, 6]).unwrap();
        assert_eq!(spec.to_string(), "circulant 12 : 1,4,6");
        assert_eq!(spec.to_string().parse::<CirculantSpec>().unwrap(), spec);
        let empty: CirculantSpec = "circulant 4 : ".parse().unwrap();
        assert!(empty.conn().is_empty());
        assert!("circulant 4 : 3".parse::<CirculantSpec>().is_err());
        assert!("circulant 9 : 1,1".parse::<CirculantSpec>().is_err());
    }

    #[test]
    fn complement_spec_matches_graph_complement() {
        for seed in 0..20 {
            let s = sample_random_circulant(11 + seed as usize, seed).unwrap();
            assert_eq!(s.complement().to_graph(), complement(&s.to_graph()));
        }
    }
}
