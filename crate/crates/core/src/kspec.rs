//! Kochen-Specker combinatorics: exactly-one assignments, graphs, cliques and transversals.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Simple undirected graph on labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacent: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(usize, usize)]) -> Result<Self> {
        let labels: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(Error::InvalidGraph("duplicate vertex label".into()));
        }
        let n = labels.len();
        let mut adjacent = vec![vec![false; n]; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) references a missing vertex")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at `{}`", labels[u])));
            }
            adjacent[u][v] = true;
            adjacent[v][u] = true;
        }
        Ok(Graph { labels, adjacent })
    }

    pub fn from_labels<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let find = |x: &S| {
            vertices
                .iter()
                .position(|v| v.as_ref() == x.as_ref())
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{}`", x.as_ref())))
        };
        let edges = edges.iter().map(|(u, v)| Ok((find(u)?, find(v)?))).collect::<Result<Vec<_>>>()?;
        Graph::new(vertices, &edges)
    }

    /// Measurements adjacent iff they share a context.
    pub fn co_context(scenario: &Scenario) -> Graph {
        let n = scenario.measurement_count();
        let mut adjacent = vec![vec![false; n]; n];
        for c in scenario.cover() {
            for &u in c {
                for &v in c {
                    if u != v {
                        adjacent[u][v] = true;
                    }
                }
            }
        }
        Graph { labels: scenario.measurements().to_vec(), adjacent }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacent[u][v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacent[v].iter().filter(|&&a| a).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&u| self.adjacent[v][u]).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        (0..n).flat_map(|u| (u + 1..n).filter(move |&v| self.adjacent[u][v]).map(move |v| (u, v))).collect()
    }

    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let adjacent = (0..n).map(|u| (0..n).map(|v| u != v && !self.adjacent[u][v]).collect()).collect();
        Graph { labels: self.labels.clone(), adjacent }
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|&u| set.iter().all(|&v| !self.adjacent[u][v]))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().all(|&u| set.iter().all(|&v| u == v || self.adjacent[u][v]))
    }

    /// All maximal cliques, each sorted, in lexicographic order.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        self.bron_kerbosch(&mut Vec::new(), all, Vec::new(), &mut out);
        for c in out.iter_mut() {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        let pivot = *p
            .iter()
            .chain(&x)
            .max_by_key(|&&u| p.iter().filter(|&&v| self.adjacent[u][v]).count())
            .expect("p is non-empty");
        let branch: Vec<usize> = p.iter().copied().filter(|&v| !self.adjacent[pivot][v]).collect();
        for v in branch {
            r.push(v);
            let p_next = p.iter().copied().filter(|&u| self.adjacent[v][u]).collect();
            let x_next = x.iter().copied().filter(|&u| self.adjacent[v][u]).collect();
            self.bron_kerbosch(r, p_next, x_next, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }

    /// The cover `M_G` of maximal cliques, with binary outcomes.
    pub fn clique_cover(&self) -> Result<Scenario> {
        let cover: Vec<Vec<&str>> = self
            .maximal_cliques()
            .iter()
            .map(|c| c.iter().map(|&v| self.labels[v].as_str()).collect())
            .collect();
        Scenario::new(&self.labels.iter().map(|s| s.as_str()).collect::<Vec<_>>(), &["0", "1"], &cover)
    }

    pub fn maximal_cliques_have_size(&self, d: usize) -> bool {
        self.maximal_cliques().iter().all(|c| c.len() == d)
    }

    /// `vertices: a b c` followed by one `u v` edge per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut vertices: Option<Vec<String>> = None;
        let mut edges = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = || format!("line {}", n + 1);
            if let Some(rest) = line.strip_prefix("vertices:") {
                if vertices.is_some() {
                    return Err(Error::parse(at(), "vertex list given twice"));
                }
                vertices = Some(rest.split_whitespace().map(String::from).collect());
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = words[..] else {
                return Err(Error::parse(at(), "expected an edge `u v`"));
            };
            edges.push((u.to_string(), v.to_string(), at()));
        }
        let vertices = vertices.ok_or_else(|| Error::parse("line 1", "missing `vertices:` line"))?;
        let index = |x: &str, at: &str| {
            vertices
                .iter()
                .position(|v| v == x)
                .ok_or_else(|| Error::parse(at, format!("unknown vertex `{x}`")))
        };
        let pairs = edges
            .iter()
            .map(|(u, v, at)| Ok((index(u, at)?, index(v, at)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(&vertices, &pairs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.labels.join(" "));
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }
}

/// Integer vectors of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFamily {
    labels: Vec<String>,
    vectors: Vec<Vec<i64>>,
}

impl VectorFamily {
    pub fn new(labels: Vec<String>, vectors: Vec<Vec<i64>>) -> Result<Self> {
        if labels.len() != vectors.len() {
            return Err(Error::InvalidVectors("one label per vector".into()));
        }
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(Error::InvalidVectors("duplicate label".into()));
        }
        if let Some(first) = vectors.first() {
            if let Some(v) = vectors.iter().find(|v| v.len() != first.len()) {
                return Err(Error::DimensionMismatch(first.len(), v.len()));
            }
        }
        if let Some(i) = vectors.iter().position(|v| v.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidVectors(format!("`{}` is the zero vector", labels[i])));
        }
        Ok(VectorFamily { labels, vectors })
    }

    /// One `label x1 x2 … xd` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let label = words.next().expect("non-empty line");
            let coords = words
                .map(|w| w.parse::<i64>().map_err(|_| Error::parse(format!("line {}", n + 1), format!("bad coordinate `{w}`"))))
                .collect::<Result<Vec<_>>>()?;
            labels.push(label.to_string());
            vectors.push(coords);
        }
        VectorFamily::new(labels, vectors)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (l, v) in self.labels.iter().zip(&self.vectors) {
            let coords: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{l} {}", coords.join(" "));
        }
        out
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    pub fn dot(&self, i: usize, j: usize) -> i64 {
        self.vectors[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum()
    }

    /// Adjacent iff the integer dot product vanishes.
    pub fn orthogonality_graph(&self) -> Graph {
        let n = self.len();
        let adjacent = (0..n).map(|i| (0..n).map(|j| i != j && self.dot(i, j) == 0).collect()).collect();
        Graph { labels: self.labels.clone(), adjacent }
    }

    /// Mutually orthogonal `d`-subsets, i.e. the orthogonal bases inside the family.
    pub fn orthogonal_bases(&self) -> Vec<Vec<usize>> {
        let d = self.dimension();
        self.orthogonality_graph().maximal_cliques().into_iter().filter(|c| c.len() == d).collect()
    }

    /// The bases as a measurement cover; fails if some vector lies in no basis.
    pub fn basis_cover(&self) -> Result<Scenario> {
        let bases = self.orthogonal_bases();
        if let Some(i) = (0..self.len()).find(|i| !bases.iter().any(|b| b.contains(i))) {
            return Err(Error::InvalidVectors(format!("`{}` lies in no orthogonal basis of the family", self.labels[i])));
        }
        let cover: Vec<Vec<&str>> = bases.iter().map(|b| b.iter().map(|&i| self.labels[i].as_str()).collect()).collect();
        Scenario::new(&self.labels.iter().map(|s| s.as_str()).collect::<Vec<_>>(), &["0", "1"], &cover)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityVerdict {
    /// `|M(m)|` per measurement.
    pub occurrences: Vec<usize>,
    pub gcd: usize,
    pub contexts: usize,
    /// `gcd ∤ |M|`: no exactly-one assignment can exist.
    pub obstructed: bool,
}

/// Every measurement set to 1 is counted `|M(m)|` times when summing over
/// contexts, so an exactly-one assignment forces `gcd |M(m)|` to divide `|M|`.
pub fn parity_obstruction(scenario: &Scenario) -> ParityVerdict {
    let occurrences: Vec<usize> =
        (0..scenario.measurement_count()).map(|m| scenario.contexts_containing(m).len()).collect();
    let gcd = occurrences.iter().fold(0usize, |g, &k| g.gcd(&k));
    let contexts = scenario.cover().len();
    let obstructed = gcd == 0 || !contexts.is_multiple_of(gcd);
    ParityVerdict { occurrences, gcd, contexts, obstructed }
}

/// Measurements to set to 1 so that every context has exactly one, if any.
pub fn one_section(scenario: &Scenario) -> Option<Vec<usize>> {
    let order: Vec<usize> = (0..scenario.measurement_count()).collect();
    exactly_one(scenario.measurement_count(), scenario.cover(), &order)
}

/// A set meeting every maximal clique exactly once, if any.
pub fn stable_transversal(graph: &Graph) -> Option<Vec<usize>> {
    let cliques = graph.maximal_cliques();
    let mut order: Vec<usize> = (0..graph.vertex_count()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
    let found = exactly_one(graph.vertex_count(), &cliques, &order)?;
    assert!(graph.is_independent(&found), "a stable transversal is independent");
    Some(found)
}

/// Backtracking over `order`; a set is dead once it has no 1 and no unassigned member.
fn exactly_one(n: usize, sets: &[Vec<usize>], order: &[usize]) -> Option<Vec<usize>> {
    if sets.iter().any(|s| s.is_empty()) {
        return None;
    }
    let mut member_of = vec![Vec::new(); n];
    for (k, s) in sets.iter().enumerate() {
        for &v in s {
            member_of[v].push(k);
        }
    }
    let mut state = OneState {
        ones: vec![0; sets.len()],
        open: sets.iter().map(|s| s.len()).collect(),
        chosen: Vec::new(),
    };
    state.search(order, &member_of).then(|| {
        let mut chosen = state.chosen;
        chosen.sort_unstable();
        chosen
    })
}

struct OneState {
    ones: Vec<usize>,
    open: Vec<usize>,
    chosen: Vec<usize>,
}

impl OneState {
    fn search(&mut self, order: &[usize], member_of: &[Vec<usize>]) -> bool {
        let Some((&v, rest)) = order.split_first() else {
            return self.ones.iter().all(|&k| k == 1);
        };
        let sets = &member_of[v];
        for &k in sets {
            self.open[k] -= 1;
        }
        if sets.iter().all(|&k| self.ones[k] == 0) {
            for &k in sets {
                self.ones[k] += 1;
            }
            self.chosen.push(v);
            if self.search(rest, member_of) {
                return true;
            }
            self.chosen.pop();
            for &k in sets {
                self.ones[k] -= 1;
            }
        }
        if sets.iter().all(|&k| self.ones[k] == 1 || self.open[k] > 0) && self.search(rest, member_of) {
            return true;
        }
        for &k in sets {
            self.open[k] += 1;
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BellType {
    /// Incompatibility is an equivalence and the cover is its set of transversals.
    Yes { parts: Vec<Vec<usize>> },
    No { reason: String },
}

impl BellType {
    pub fn is_bell_type(&self) -> bool {
        matches!(self, BellType::Yes { .. })
    }
}

/// Decides whether a cover arises from a Bell-type scenario.
pub fn is_bell_type(scenario: &Scenario) -> BellType {
    let g = Graph::co_context(scenario);
    let n = g.vertex_count();
    let related = |u: usize, v: usize| u == v || !g.has_edge(u, v);
    for x in 0..n {
        for y in 0..n {
            if !related(x, y) {
                continue;
            }
            if let Some(z) = (0..n).find(|&z| related(y, z) && !related(x, z)) {
                let l = scenario.measurements();
                return BellType::No {
                    reason: format!("incompatibility is not transitive: {} / {} / {}", l[x], l[y], l[z]),
                };
            }
        }
    }
    let cliques: BTreeSet<Vec<usize>> = g.maximal_cliques().into_iter().collect();
    let cover: BTreeSet<Vec<usize>> = scenario.cover().iter().cloned().collect();
    if cliques != cover {
        return BellType::No { reason: "the cover is not the set of maximal compatible sets".into() };
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        match parts.iter_mut().find(|p| related(p[0], v)) {
            Some(p) => p.push(v),
            None => parts.push(vec![v]),
        }
    }
    BellType::Yes { parts }
}
