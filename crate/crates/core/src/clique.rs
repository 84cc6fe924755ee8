//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting).

/// Undirected simple graph on `0..n` stored as a dense adjacency matrix.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![vec![false; n]; n] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a][b] = true;
            self.adj[b][a] = true;
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    fn neighbors<'a>(&'a self, v: usize, set: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        set.iter().copied().filter(move |&u| self.adj[v][u])
    }

    /// Every inclusion-maximal clique among `vertices`, each sorted ascending.
    /// Isolated vertices come back as singletons.
    pub fn maximal_cliques(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut r = Vec::new();
        self.expand(&mut r, vertices.to_vec(), Vec::new(), &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out
    }

    fn expand(&self, r: &mut Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        // pivot maximizing |P ∩ N(u)| over P ∪ X
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| self.neighbors(u, &p).count())
            .expect("P is nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !self.adj[pivot][v]).collect();
        for v in candidates {
            let p_next: Vec<usize> = self.neighbors(v, &p).collect();
            let x_next: Vec<usize> = self.neighbors(v, &x).collect();
            r.push(v);
            self.expand(r, p_next, x_next, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
}
