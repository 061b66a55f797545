//! Maximum-clique search by Bron–Kerbosch enumeration with Tomita pivoting
//! and a size bound, over fixed-width vertex bitsets.

/// Fixed-capacity set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut set = Self::empty(capacity);
        for v in 0..capacity {
            set.insert(v);
        }
        set
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

/// All cliques of maximum cardinality in the graph given by `neighbors`
/// (one neighbour set per vertex, symmetric, no self-loops). Each clique is
/// a sorted list of vertex indices; the list is sorted lexicographically.
pub fn maximum_cliques(neighbors: &[VertexSet]) -> (usize, Vec<Vec<usize>>) {
    let n = neighbors.len();
    let mut search = Search {
        neighbors,
        best: 0,
        found: Vec::new(),
    };
    let mut current = Vec::new();
    search.expand(&mut current, VertexSet::full(n), VertexSet::empty(n));
    let mut found = search.found;
    for clique in &mut found {
        clique.sort_unstable();
    }
    found.sort();
    found.dedup();
    (search.best, found)
}

struct Search<'a> {
    neighbors: &'a [VertexSet],
    best: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: VertexSet, mut excluded: VertexSet) {
        if candidates.is_empty() {
            if excluded.is_empty() {
                self.record(current);
            }
            return;
        }
        // nothing reachable from here can match the best size
        if current.len() + candidates.len() < self.best {
            return;
        }
        let pivot = candidates
            .union(&excluded)
            .iter()
            .max_by_key(|&u| (candidates.intersection_len(&self.neighbors[u]), std::cmp::Reverse(u)))
            .expect("candidates is non-empty");
        let branch = candidates.difference(&self.neighbors[pivot]);
        for v in branch.iter() {
            let nv = &self.neighbors[v];
            current.push(v);
            self.expand(current, candidates.intersection(nv), excluded.intersection(nv));
            current.pop();
            candidates.remove(v);
            excluded.insert(v);
            if current.len() + candidates.len() < self.best {
                return;
            }
        }
    }

    fn record(&mut self, clique: &[usize]) {
        match clique.len().cmp(&self.best) {
            std::cmp::Ordering::Greater => {
                self.best = clique.len();
                self.found.clear();
                self.found.push(clique.to_vec());
            }
            std::cmp::Ordering::Equal => self.found.push(clique.to_vec()),
            std::cmp::Ordering::Less => {}
        }
    }
}
