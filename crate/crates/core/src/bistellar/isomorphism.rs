use std::collections::{BTreeSet, HashMap, HashSet};

use crate::kernel::{Complex, Face, Vertex};

/// Vertex bijection mapping the facets of `c1` onto those of `c2`, as the
/// image list `image[v - 1]`.
pub fn is_isomorphic(c1: &Complex, c2: &Complex) -> Option<Vec<Vertex>> {
    if c1.n_vertices() != c2.n_vertices() || c1.facets().len() != c2.facets().len() {
        return None;
    }
    if c1.f_vector() != c2.f_vector() {
        return None;
    }
    let map = face_isomorphism(c1.facets(), c2.facets())?;
    Some((1..=c1.n_vertices() as Vertex).map(|v| map[&v]).collect())
}

/// Isomorphism between two facet lists over arbitrary vertex ids.
///
/// Vertices are first colored by the face counts of their stars and then
/// refined by the colors of their facet neighbours; the remaining ambiguity
/// is resolved by backtracking with adjacency and facet checks.
pub fn face_isomorphism(f1: &[Face], f2: &[Face]) -> Option<HashMap<Vertex, Vertex>> {
    if f1.len() != f2.len() {
        return None;
    }
    let g1 = Indexed::new(f1);
    let g2 = Indexed::new(f2);
    if g1.ids.len() != g2.ids.len() || g1.f_vector != g2.f_vector {
        return None;
    }
    let (c1, c2) = refine(&g1, &g2)?;
    let n = g1.ids.len();
    let mut search = Search {
        g1: &g1,
        g2: &g2,
        c1: &c1,
        c2: &c2,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        order: Vec::with_capacity(n),
        class_size: HashMap::new(),
    };
    for &c in &c1 {
        *search.class_size.entry(c).or_insert(0) += 1;
    }
    search.order = search.vertex_order();
    if !search.extend(0) {
        return None;
    }
    Some(
        (0..n)
            .map(|i| (g1.ids[i], g2.ids[search.image[i]]))
            .collect(),
    )
}

struct Indexed {
    ids: Vec<Vertex>,
    facets: Vec<Vec<usize>>,
    facet_set: HashSet<Vec<usize>>,
    by_vertex: Vec<Vec<usize>>,
    adjacent: Vec<Vec<bool>>,
    f_vector: Vec<usize>,
    /// Number of faces of each size containing the vertex.
    star_counts: Vec<Vec<usize>>,
}

impl Indexed {
    fn new(faces: &[Face]) -> Indexed {
        let ids: Vec<Vertex> = faces
            .iter()
            .flat_map(|f| f.iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let facets: Vec<Vec<usize>> = faces
            .iter()
            .map(|f| f.iter().map(|v| index[v]).collect())
            .collect();
        let mut by_vertex = vec![Vec::new(); n];
        let mut adjacent = vec![vec![false; n]; n];
        let mut all: HashSet<Face> = HashSet::new();
        for (k, f) in facets.iter().enumerate() {
            for &v in f {
                by_vertex[v].push(k);
                for &w in f {
                    adjacent[v][w] = v != w;
                }
            }
            let face = Face::new(f.iter().map(|&v| v as Vertex).collect());
            all.extend(face.nonempty_subsets());
        }
        let top = facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut f_vector = vec![0; top];
        let mut star_counts = vec![vec![0; top]; n];
        for s in &all {
            f_vector[s.len() - 1] += 1;
            for &v in s.iter() {
                star_counts[v as usize][s.len() - 1] += 1;
            }
        }
        let facet_set = facets.iter().cloned().collect();
        Indexed {
            ids,
            facets,
            facet_set,
            by_vertex,
            adjacent,
            f_vector,
            star_counts,
        }
    }
}

/// Joint color refinement; returns `None` when the color class sizes differ.
fn refine(g1: &Indexed, g2: &Indexed) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut dict: HashMap<Vec<usize>, u32> = HashMap::new();
    let color = |key: Vec<usize>, dict: &mut HashMap<Vec<usize>, u32>| {
        let next = dict.len() as u32;
        *dict.entry(key).or_insert(next)
    };
    let mut c1: Vec<u32> = g1.star_counts.iter().map(|s| color(s.clone(), &mut dict)).collect();
    let mut c2: Vec<u32> = g2.star_counts.iter().map(|s| color(s.clone(), &mut dict)).collect();
    let classes = |c: &[u32]| c.iter().collect::<HashSet<_>>().len();
    loop {
        if histogram(&c1) != histogram(&c2) {
            return None;
        }
        let before = classes(&c1);
        let mut dict: HashMap<(u32, Vec<Vec<u32>>), u32> = HashMap::new();
        let step = |g: &Indexed, c: &[u32], dict: &mut HashMap<(u32, Vec<Vec<u32>>), u32>| -> Vec<u32> {
            (0..g.ids.len())
                .map(|v| {
                    let mut around: Vec<Vec<u32>> = g.by_vertex[v]
                        .iter()
                        .map(|&k| {
                            let mut cs: Vec<u32> =
                                g.facets[k].iter().filter(|&&w| w != v).map(|&w| c[w]).collect();
                            cs.sort_unstable();
                            cs
                        })
                        .collect();
                    around.sort_unstable();
                    let next = dict.len() as u32;
                    *dict.entry((c[v], around)).or_insert(next)
                })
                .collect()
        };
        let n1 = step(g1, &c1, &mut dict);
        let n2 = step(g2, &c2, &mut dict);
        c1 = n1;
        c2 = n2;
        if classes(&c1) == before {
            return (histogram(&c1) == histogram(&c2)).then_some((c1, c2));
        }
    }
}

fn histogram(c: &[u32]) -> Vec<(u32, usize)> {
    let mut h: HashMap<u32, usize> = HashMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    let mut v: Vec<_> = h.into_iter().collect();
    v.sort_unstable();
    v
}

struct Search<'a> {
    g1: &'a Indexed,
    g2: &'a Indexed,
    c1: &'a [u32],
    c2: &'a [u32],
    image: Vec<usize>,
    used: Vec<bool>,
    order: Vec<usize>,
    class_size: HashMap<u32, usize>,
}

impl Search<'_> {
    /// Smallest color class first, then greedily the vertex with the most
    /// already-ordered neighbours.
    fn vertex_order(&self) -> Vec<usize> {
        let n = self.g1.ids.len();
        let mut placed = vec![false; n];
        let mut links = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (links[v], std::cmp::Reverse(self.class_size[&self.c1[v]]), std::cmp::Reverse(v)))
                .expect("unplaced vertex remains");
            placed[v] = true;
            order.push(v);
            for (w, l) in links.iter_mut().enumerate() {
                if self.g1.adjacent[v][w] {
                    *l += 1;
                }
            }
        }
        order
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for cand in 0..self.g2.ids.len() {
            if self.used[cand] || self.c2[cand] != self.c1[v] || !self.consistent(v, cand, depth) {
                continue;
            }
            self.image[v] = cand;
            self.used[cand] = true;
            if self.facets_ok(v) && self.extend(depth + 1) {
                return true;
            }
            self.used[cand] = false;
            self.image[v] = usize::MAX;
        }
        false
    }

    fn consistent(&self, v: usize, cand: usize, depth: usize) -> bool {
        self.order[..depth]
            .iter()
            .all(|&u| self.g1.adjacent[v][u] == self.g2.adjacent[cand][self.image[u]])
    }

    fn facets_ok(&self, v: usize) -> bool {
        self.g1.by_vertex[v].iter().all(|&k| {
            let f = &self.g1.facets[k];
            if f.iter().any(|&w| self.image[w] == usize::MAX) {
                return true;
            }
            let mut mapped: Vec<usize> = f.iter().map(|&w| self.image[w]).collect();
            mapped.sort_unstable();
            self.g2.facet_set.contains(&mapped)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{boundary_simplex, cross_polytope, cyclic_polytope_boundary};
    use rand::seq::SliceRandom;

    fn shuffled(c: &Complex, seed: u64) -> Complex {
        let mut image: Vec<Vertex> = (1..=c.n_vertices() as Vertex).collect();
        image.shuffle(&mut crate::rng::seeded(seed));
        c.permute_vertices(&image).unwrap()
    }

    fn replays(c1: &Complex, c2: &Complex, image: &[Vertex]) -> bool {
        let mapped: BTreeSet<Face> = c1
            .facets()
            .iter()
            .map(|f| Face::new(f.iter().map(|&v| image[v as usize - 1]).collect()))
            .collect();
        mapped == c2.facets().iter().cloned().collect()
    }

    #[test]
    fn relabelled_copies() {
        for c in [
            cyclic_polytope_boundary(4, 10).unwrap(),
            cross_polytope(4).unwrap(),
            boundary_simplex(5).unwrap(),
        ] {
            for seed in 0..4 {
                let d = shuffled(&c, seed);
                let image = is_isomorphic(&c, &d).expect("relabelled copy is isomorphic");
                assert!(replays(&c, &d, &image));
            }
        }
    }

    #[test]
    fn different_complexes() {
        let a = boundary_simplex(4).unwrap();
        let b = cross_polytope(4).unwrap();
        assert!(is_isomorphic(&a, &b).is_none());
        // both have f = [6, 12, 8]; only the octahedron is 4-regular
        let stacked = crate::generators::stacked_sphere(2, 6, 1).unwrap();
        assert_eq!(stacked.f_vector(), vec![6, 12, 8]);
        assert!(is_isomorphic(&cross_polytope(3).unwrap(), &stacked).is_none());
        let s1 = crate::generators::stacked_sphere(2, 9, 1).unwrap();
        let s2 = crate::generators::stacked_sphere(2, 9, 2).unwrap();
        if let Some(image) = is_isomorphic(&s1, &s2) {
            assert!(replays(&s1, &s2, &image));
        }
    }
}
