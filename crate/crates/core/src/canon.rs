//! Canonical labeling of vertex-facet incidence structures, viewed as
//! bipartite graphs with the two sides distinguished. Iterative color
//! refinement plus individualization with backtracking; the graphs here
//! have at most a few dozen nodes, so the simple scheme is plenty.

use std::collections::BTreeMap;

/// Canonical key of the bipartite incidence graph with `num_left` vertices
/// on one side, `num_right` on the other, and the given incidence edges
/// (left index, right index). Two structures get the same key iff they are
/// isomorphic by a pair of side-preserving bijections.
pub fn canonical_key(num_left: usize, num_right: usize, edges: &[(usize, usize)]) -> String {
    let n = num_left + num_right;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(l, r) in edges {
        assert!(l < num_left && r < num_right);
        adj[l].push(num_left + r);
        adj[num_left + r].push(l);
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
        nbrs.dedup();
    }
    // Initial colors: side then degree, compacted in sorted signature order.
    let init: Vec<(usize, usize)> = (0..n)
        .map(|v| (usize::from(v >= num_left), adj[v].len()))
        .collect();
    let colors = compact_colors(&init);
    let key = search(&adj, colors, num_left);
    format!("V{num_left}F{num_right}:{key}")
}

fn compact_colors<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sig.to_vec();
    sorted.sort();
    sorted.dedup();
    let index: BTreeMap<T, usize> = sorted
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    sig.iter().map(|s| index[s]).collect()
}

fn refine(adj: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let sig: Vec<(usize, Vec<usize>)> = (0..adj.len())
            .map(|v| {
                let mut nbr: Vec<usize> = adj[v].iter().map(|&u| colors[u]).collect();
                nbr.sort_unstable();
                (colors[v], nbr)
            })
            .collect();
        let next = compact_colors(&sig);
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

/// Recursive individualization: refine; if the coloring is discrete, emit
/// the key; otherwise branch on every node of the first non-singleton color
/// class and keep the lexicographically least key.
fn search(adj: &[Vec<usize>], colors: Vec<usize>, num_left: usize) -> String {
    let colors = refine(adj, colors);
    let n = adj.len();
    let mut class_sizes = vec![0usize; n];
    for &c in &colors {
        class_sizes[c] += 1;
    }
    // The non-singleton class with the smallest color id, if any.
    let target = (0..n)
        .map(|v| colors[v])
        .filter(|&c| class_sizes[c] > 1)
        .min();
    let Some(class_color) = target else {
        return key_from_discrete(adj, &colors, num_left);
    };
    let mut best: Option<String> = None;
    for v in 0..n {
        if colors[v] != class_color {
            continue;
        }
        let mut branched = colors.clone();
        branched[v] = n; // sentinel color, split off and re-compacted by refine
        let branched = compact_colors(&branched);
        let key = search(adj, branched, num_left);
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    }
    best.expect("non-singleton class has members")
}

fn key_from_discrete(adj: &[Vec<usize>], colors: &[usize], num_left: usize) -> String {
    let n = adj.len();
    // colors is a bijection onto 0..n; order nodes by color.
    let mut by_color: Vec<usize> = (0..n).collect();
    by_color.sort_by_key(|&v| colors[v]);
    let mut canon_index = vec![0usize; n];
    let mut left_seen = 0usize;
    let mut right_seen = 0usize;
    for &v in &by_color {
        if v < num_left {
            canon_index[v] = left_seen;
            left_seen += 1;
        } else {
            canon_index[v] = right_seen;
            right_seen += 1;
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for v in 0..num_left {
        for &u in &adj[v] {
            pairs.push((canon_index[v], canon_index[u]));
        }
    }
    pairs.sort_unstable();
    let body: Vec<String> = pairs.iter().map(|(l, r)| format!("{l}-{r}")).collect();
    body.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_incidence(k: usize) -> Vec<(usize, usize)> {
        // k-gon: vertex i on "edges" (facets) i and i+1 mod k.
        (0..k).flat_map(|i| [(i, i), (i, (i + 1) % k)]).collect()
    }

    #[test]
    fn relabeling_leaves_key_unchanged() {
        let edges = cycle_incidence(5);
        let base = canonical_key(5, 5, &edges);
        // Rotate labels.
        let rotated: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(l, r)| ((l + 2) % 5, (r + 3) % 5))
            .collect();
        assert_eq!(canonical_key(5, 5, &rotated), base);
    }

    #[test]
    fn sides_are_distinguished() {
        // A path graph l0-r0-l1 versus its mirror with sides swapped has
        // different side sizes, hence different keys.
        let a = canonical_key(2, 1, &[(0, 0), (1, 0)]);
        let b = canonical_key(1, 2, &[(0, 0), (0, 1)]);
        assert_ne!(a, b);
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        // Two facets of sizes 3+1 versus 2+2 on four vertices.
        let a = canonical_key(4, 2, &[(0, 0), (1, 0), (2, 0), (3, 1)]);
        let b = canonical_key(4, 2, &[(0, 0), (1, 0), (2, 1), (3, 1)]);
        assert_ne!(a, b);
    }

    #[test]
    fn highly_symmetric_graph_is_stable() {
        // Octahedron vertex-facet incidence: 6 vertices, 8 triangles.
        let mut edges = Vec::new();
        let opposite = [1, 0, 3, 2, 5, 4];
        let mut f = 0;
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    edges.push((a, f));
                    edges.push((b, f));
                    edges.push((c, f));
                    f += 1;
                }
            }
        }
        let base = canonical_key(6, 8, &edges);
        // Relabel vertices by swapping each antipodal pair.
        let relabeled: Vec<(usize, usize)> = edges.iter().map(|&(v, f)| (opposite[v], f)).collect();
        assert_eq!(canonical_key(6, 8, &relabeled), base);
    }
}
