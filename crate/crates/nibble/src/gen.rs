//! Deterministic graph generators for tests and the CLI.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Vertex, VertexSet};

/// Two k-cliques joined by a single bridge edge between vertex k-1 and
/// vertex k.
pub fn barbell(k: u32) -> Graph {
    assert!(k >= 2, "barbell needs cliques of size >= 2");
    let mut edges = Vec::new();
    for side in 0..2u32 {
        let base = side * k;
        for i in 0..k {
            for j in (i + 1)..k {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.push((k - 1, k));
    Graph::build(&edges, &[]).expect("barbell construction is valid")
}

/// r k-cliques arranged in a ring, consecutive cliques joined by one
/// edge.
pub fn ring_of_cliques(r: u32, k: u32) -> Graph {
    assert!(r >= 2 && k >= 2, "ring needs r >= 2 cliques of size >= 2");
    let mut edges = Vec::new();
    for c in 0..r {
        let base = c * k;
        for i in 0..k {
            for j in (i + 1)..k {
                edges.push((base + i, base + j));
            }
        }
        let next_base = ((c + 1) % r) * k;
        edges.push((base + k - 1, next_base));
    }
    Graph::build(&edges, &[]).expect("ring construction is valid")
}

/// Planted-cut instance: the first n/3 vertices form the planted set S.
/// Edges inside S and inside the complement appear with probability
/// p_in, edges across with probability p_out. Vertices left isolated by
/// the draw get one self-loop so degrees stay positive. Returns the
/// graph together with S.
pub fn planted_cut(n: u32, p_in: f64, p_out: f64, seed: u64) -> (Graph, VertexSet) {
    assert!(n >= 6, "planted cut needs n >= 6");
    assert!((0.0..=1.0).contains(&p_in) && (0.0..=1.0).contains(&p_out));
    let split = n / 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut degree = vec![0u64; n as usize];
    for u in 0..n {
        for v in (u + 1)..n {
            let same_side = (u < split) == (v < split);
            let p = if same_side { p_in } else { p_out };
            if rng.gen_range(0.0..1.0) < p {
                edges.push((u, v));
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }
    }
    let loops: Vec<(Vertex, u64)> =
        (0..n).filter(|&u| degree[u as usize] == 0).map(|u| (u, 1)).collect();
    let g = Graph::build(&edges, &loops).expect("planted construction is valid");
    let s = VertexSet::new(&g, (0..split).collect()).expect("planted set is valid");
    (g, s)
}

/// Generator spec of the form "barbell:K", "ring:R,K" or
/// "planted:N,P_IN,P_OUT". Randomized kinds take their seed separately.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Barbell(u32),
    RingOfCliques(u32, u32),
    PlantedCut { n: u32, p_in: f64, p_out: f64 },
}

impl GenSpec {
    pub fn parse(text: &str) -> Result<GenSpec, String> {
        let (kind, rest) = text.split_once(':').ok_or_else(|| format!("missing ':' in generator spec '{text}'"))?;
        let parts: Vec<&str> = rest.split(',').collect();
        let arity = |want: usize| -> Result<(), String> {
            if parts.len() == want {
                Ok(())
            } else {
                Err(format!("generator '{kind}' takes {want} parameters, got {}", parts.len()))
            }
        };
        let int = |s: &str| s.trim().parse::<u32>().map_err(|e| format!("bad integer '{s}': {e}"));
        let float = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number '{s}': {e}"));
        match kind {
            "barbell" => {
                arity(1)?;
                Ok(GenSpec::Barbell(int(parts[0])?))
            }
            "ring" | "ring_of_cliques" => {
                arity(2)?;
                Ok(GenSpec::RingOfCliques(int(parts[0])?, int(parts[1])?))
            }
            "planted" | "planted_cut" => {
                arity(3)?;
                Ok(GenSpec::PlantedCut { n: int(parts[0])?, p_in: float(parts[1])?, p_out: float(parts[2])? })
            }
            other => Err(format!("unknown generator '{other}'")),
        }
    }

    /// Builds the graph; `seed` is only consumed by randomized kinds.
    /// The second value is the planted set when one exists.
    pub fn build(&self, seed: u64) -> (Graph, Option<VertexSet>) {
        match *self {
            GenSpec::Barbell(k) => (barbell(k), None),
            GenSpec::RingOfCliques(r, k) => (ring_of_cliques(r, k), None),
            GenSpec::PlantedCut { n, p_in, p_out } => {
                let (g, s) = planted_cut(n, p_in, p_out, seed);
                (g, Some(s))
            }
        }
    }

    pub fn canonical(&self) -> String {
        match *self {
            GenSpec::Barbell(k) => format!("barbell:{k}"),
            GenSpec::RingOfCliques(r, k) => format!("ring:{r},{k}"),
            GenSpec::PlantedCut { n, p_in, p_out } => format!("planted:{n},{p_in},{p_out}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{conductance, Frac};

    #[test]
    fn barbell_counts() {
        let g = barbell(3);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.total_volume(), 14); // 7 edges
    }

    #[test]
    fn barbell_bridge_conductance() {
        let g = barbell(50);
        // one clique side: vol = 50*49 + 1 bridge endpoint
        let s = VertexSet::new(&g, (0..50).collect()).unwrap();
        assert_eq!(s.volume(), 50 * 49 + 1);
        assert_eq!(conductance(&g, &s).unwrap(), Frac::new(1, 50 * 49 + 1));
    }

    #[test]
    fn ring_is_connected() {
        let g = ring_of_cliques(4, 5);
        assert_eq!(g.vertex_count(), 20);
        // breadth-first reachability from 0
        let mut seen = vec![false; 20];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn planted_cut_is_deterministic_and_marked() {
        let (g1, s1) = planted_cut(30, 0.6, 0.05, 7);
        let (g2, s2) = planted_cut(30, 0.6, 0.05, 7);
        assert_eq!(s1, s2);
        assert_eq!(g1.total_volume(), g2.total_volume());
        assert_eq!(s1.len(), 10);
    }

    #[test]
    fn disconnected_planted_side_has_zero_conductance() {
        let (g, s) = planted_cut(30, 0.9, 0.0, 3);
        assert_eq!(conductance(&g, &s).unwrap(), Frac::new(0, 1));
    }

    #[test]
    fn spec_parsing_round_trips() {
        let spec = GenSpec::parse("barbell:50").unwrap();
        assert_eq!(spec, GenSpec::Barbell(50));
        assert_eq!(spec.canonical(), "barbell:50");
        assert!(GenSpec::parse("ring:4,5").is_ok());
        assert!(GenSpec::parse("planted:120,0.3,0.02").is_ok());
        assert!(GenSpec::parse("mystery:1").is_err());
        assert!(GenSpec::parse("barbell").is_err());
    }
}
