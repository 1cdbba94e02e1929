use super::InteractionGraph;
use crate::{Error, Result};
use serde::Serialize;

/// Largest vertex count for which `CoverMode::Auto` runs the exact search.
pub const EXACT_COVER_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMode {
    Auto,
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCover {
    pub vertices: Vec<usize>,
    /// `Exact` or `Greedy`, never `Auto`.
    pub method: CoverMode,
}

pub fn validate_cover(graph: &InteractionGraph, cover: &[usize]) -> Result<()> {
    let mut inside = vec![false; graph.n()];
    for &v in cover {
        if v >= graph.n() {
            return Err(Error::IndexOutOfRange {
                what: "cover vertex",
                index: v,
                limit: graph.n(),
            });
        }
        inside[v] = true;
    }
    match graph.edges().iter().find(|&&(a, b)| !inside[a] && !inside[b]) {
        Some(&(a, b)) => Err(Error::InvalidCover(a, b)),
        None => Ok(()),
    }
}

pub fn vertex_cover(graph: &InteractionGraph, mode: CoverMode) -> VertexCover {
    let exact = match mode {
        CoverMode::Exact => true,
        CoverMode::Greedy => false,
        CoverMode::Auto => graph.n() <= EXACT_COVER_LIMIT,
    };
    let vertices = if exact { exact_cover(graph) } else { greedy_cover(graph) };
    debug_assert!(validate_cover(graph, &vertices).is_ok());
    VertexCover {
        vertices,
        method: if exact { CoverMode::Exact } else { CoverMode::Greedy },
    }
}

/// Repeatedly take the vertex covering most uncovered edges, lowest index on ties.
fn greedy_cover(graph: &InteractionGraph) -> Vec<usize> {
    let n = graph.n();
    let mut alive: Vec<bool> = vec![true; graph.num_edges()];
    let mut cover = Vec::new();
    loop {
        let mut count = vec![0usize; n];
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            if alive[e] {
                count[a] += 1;
                count[b] += 1;
            }
        }
        let (best, &c) = match count.iter().enumerate().max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0))) {
            Some(b) => b,
            None => break,
        };
        if c == 0 {
            break;
        }
        cover.push(best);
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            if a == best || b == best {
                alive[e] = false;
            }
        }
    }
    cover.sort_unstable();
    cover
}

fn exact_cover(graph: &InteractionGraph) -> Vec<usize> {
    let mut best = greedy_cover(graph);
    let mut chosen = vec![false; graph.n()];
    let mut current = Vec::new();
    branch(graph, &mut chosen, &mut current, &mut best);
    best.sort_unstable();
    best
}

fn uncovered<'a>(graph: &'a InteractionGraph, chosen: &'a [bool]) -> impl Iterator<Item = (usize, usize)> + 'a {
    graph
        .edges()
        .iter()
        .copied()
        .filter(move |&(a, b)| !chosen[a] && !chosen[b])
}

/// Size of a greedy maximal matching among uncovered edges: a lower bound on
/// how many more vertices any cover needs.
fn matching_bound(graph: &InteractionGraph, chosen: &[bool]) -> usize {
    let mut used = vec![false; graph.n()];
    let mut size = 0;
    for (a, b) in uncovered(graph, chosen) {
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            size += 1;
        }
    }
    size
}

fn branch(graph: &InteractionGraph, chosen: &mut [bool], current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if current.len() + matching_bound(graph, chosen) >= best.len() {
        return;
    }
    let Some((a, _)) = uncovered(graph, chosen).next() else {
        *best = current.clone();
        return;
    };
    // Either `a` is in the cover, or all of its uncovered neighbours are.
    chosen[a] = true;
    current.push(a);
    branch(graph, chosen, current, best);
    current.pop();
    chosen[a] = false;

    let added: Vec<usize> = graph
        .neighbors(a)
        .iter()
        .copied()
        .filter(|&v| !chosen[v])
        .collect();
    for &v in &added {
        chosen[v] = true;
        current.push(v);
    }
    branch(graph, chosen, current, best);
    for &v in &added {
        chosen[v] = false;
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_size(g: &InteractionGraph) -> usize {
        (0u32..1 << g.n())
            .filter(|mask| g.edges().iter().all(|&(a, b)| mask >> a & 1 == 1 || mask >> b & 1 == 1))
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn small_examples() {
        let star = InteractionGraph::star(6).unwrap();
        assert_eq!(vertex_cover(&star, CoverMode::Exact).vertices, vec![0]);
        let path = InteractionGraph::path(3).unwrap();
        assert_eq!(vertex_cover(&path, CoverMode::Exact).vertices, vec![1]);
        let k4 = InteractionGraph::complete(4).unwrap();
        assert_eq!(vertex_cover(&k4, CoverMode::Exact).vertices.len(), 3);
        assert_eq!(brute_force_size(&k4), 3);
    }

    #[test]
    fn exact_matches_brute_force() {
        let graphs = [
            InteractionGraph::lattice(&[3, 3]).unwrap(),
            InteractionGraph::ring(7).unwrap(),
            InteractionGraph::complete_bipartite(3, 4).unwrap(),
            InteractionGraph::from_edge_list(
                8,
                &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 7), (2, 6)],
            )
            .unwrap(),
        ];
        for g in graphs {
            let c = vertex_cover(&g, CoverMode::Auto);
            assert_eq!(c.method, CoverMode::Exact);
            validate_cover(&g, &c.vertices).unwrap();
            assert_eq!(c.vertices.len(), brute_force_size(&g));
            validate_cover(&g, &vertex_cover(&g, CoverMode::Greedy).vertices).unwrap();
        }
    }

    #[test]
    fn invalid_cover_names_edge() {
        let g = InteractionGraph::path(4).unwrap();
        match validate_cover(&g, &[1]) {
            Err(Error::InvalidCover(2, 3)) => {}
            other => panic!("{other:?}"),
        }
    }
}
