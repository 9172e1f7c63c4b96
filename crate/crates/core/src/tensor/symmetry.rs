//! Index symmetry descriptors and the storage layouts they induce.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// One symmetry generator over 0-based slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Antisymmetric(usize, usize),
    Symmetric(usize, usize),
    /// `(a,b) <-> (c,d)`.
    BlockSwap(usize, usize, usize, usize),
}

impl Generator {
    fn max_slot(self) -> usize {
        match self {
            Generator::Antisymmetric(a, b) | Generator::Symmetric(a, b) => a.max(b),
            Generator::BlockSwap(a, b, c, d) => a.max(b).max(c).max(d),
        }
    }

    /// Image of `idx` and the sign relating the two components.
    pub fn apply(self, idx: &mut [usize]) -> i8 {
        match self {
            Generator::Antisymmetric(a, b) => {
                idx.swap(a, b);
                -1
            }
            Generator::Symmetric(a, b) => {
                idx.swap(a, b);
                1
            }
            Generator::BlockSwap(a, b, c, d) => {
                idx.swap(a, c);
                idx.swap(b, d);
                1
            }
        }
    }
}

/// A set of generators; the group they generate acts on index tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry(Vec<Generator>);

impl Symmetry {
    pub fn none() -> Self {
        Symmetry(Vec::new())
    }

    pub fn new(mut generators: Vec<Generator>) -> Self {
        generators.sort();
        generators.dedup();
        Symmetry(generators)
    }

    pub fn symmetric_pair() -> Self {
        Symmetry::new(vec![Generator::Symmetric(0, 1)])
    }

    /// Antisymmetric in (0,1) and (2,3), symmetric under pair interchange.
    pub fn riemann() -> Self {
        Symmetry::new(vec![
            Generator::Antisymmetric(0, 1),
            Generator::Antisymmetric(2, 3),
            Generator::BlockSwap(0, 1, 2, 3),
        ])
    }

    pub fn with(&self, g: Generator) -> Self {
        let mut v = self.0.clone();
        v.push(g);
        Symmetry::new(v)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.0.contains(&g)
    }

    /// Generators shared by both descriptors.
    pub fn meet(&self, other: &Symmetry) -> Symmetry {
        Symmetry(self.0.iter().copied().filter(|g| other.0.contains(g)).collect())
    }

    pub fn fits(&self, valence: usize) -> bool {
        self.0.iter().all(|g| g.max_slot() < valence)
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|g| match g {
                Generator::Antisymmetric(a, b) => format!("anti({},{})", a + 1, b + 1),
                Generator::Symmetric(a, b) => format!("sym({},{})", a + 1, b + 1),
                Generator::BlockSwap(a, b, c, d) => format!("swap({},{};{},{})", a + 1, b + 1, c + 1, d + 1),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// For every flat index: the flat index of its canonical representative and
/// the sign with `T[index] = sign * T[rep]`. Sign 0 marks components forced
/// to vanish.
#[derive(Debug)]
pub struct Layout {
    pub dim: usize,
    pub valence: usize,
    entries: Vec<(usize, i8)>,
    representatives: Vec<usize>,
}

impl Layout {
    pub fn entry(&self, flat: usize) -> (usize, i8) {
        self.entries[flat]
    }

    /// Canonical representatives that are not forced to vanish, ascending.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn build(dim: usize, valence: usize, symmetry: &Symmetry) -> Layout {
        let total = dim.pow(valence as u32);
        let mut entries: Vec<Option<(usize, i8)>> = vec![None; total];
        let mut representatives = Vec::new();
        let mut idx = vec![0usize; valence];
        for start in 0..total {
            if entries[start].is_some() {
                continue;
            }
            // Orbit of `start` with signs relative to `start`.
            let mut orbit: HashMap<usize, i8> = HashMap::new();
            let mut queue = VecDeque::new();
            orbit.insert(start, 1);
            queue.push_back(start);
            let mut vanishes = false;
            while let Some(cur) = queue.pop_front() {
                let s = orbit[&cur];
                for g in symmetry.generators() {
                    decode(cur, dim, &mut idx);
                    let sign = g.apply(&mut idx) * s;
                    let next = encode(&idx, dim);
                    match orbit.get(&next) {
                        Some(&existing) => {
                            if existing != sign {
                                vanishes = true;
                            }
                        }
                        None => {
                            orbit.insert(next, sign);
                            queue.push_back(next);
                        }
                    }
                }
            }
            // `start` is the smallest unvisited index, hence the orbit minimum.
            for (member, sign) in orbit {
                entries[member] = Some((start, if vanishes { 0 } else { sign }));
            }
            if !vanishes {
                representatives.push(start);
            }
        }
        Layout {
            dim,
            valence,
            entries: entries.into_iter().map(|e| e.expect("every index is visited")).collect(),
            representatives,
        }
    }
}

pub fn encode(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

pub fn decode(mut flat: usize, dim: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

type LayoutKey = (usize, usize, Symmetry);

/// Shared layout for a shape; layouts are cached process-wide.
pub fn layout(dim: usize, valence: usize, symmetry: &Symmetry) -> Arc<Layout> {
    static CACHE: OnceLock<Mutex<HashMap<LayoutKey, Arc<Layout>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (dim, valence, symmetry.clone());
    if let Some(l) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return l.clone();
    }
    let built = Arc::new(Layout::build(dim, valence, symmetry));
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .entry(key)
        .or_insert(built)
        .clone()
}
