use std::fmt;

/// Index of a candidate in an election's universe.
///
/// Ids follow declaration order, which gives the deterministic iteration
/// order used throughout. Ids never act as tie-breakers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(pub usize);

impl CandidateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Fixed-universe bitset of candidates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    universe: usize,
    words: Vec<u64>,
}

impl CandidateSet {
    pub fn empty(universe: usize) -> Self {
        CandidateSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(CandidateId(i));
        }
        set
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = CandidateId>) -> Self {
        let mut set = Self::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, id: CandidateId) -> bool {
        id.0 < self.universe && self.words[id.0 / 64] & (1 << (id.0 % 64)) != 0
    }

    /// Panics if `id` lies outside the universe.
    pub fn insert(&mut self, id: CandidateId) {
        assert!(id.0 < self.universe, "candidate {id} outside universe");
        self.words[id.0 / 64] |= 1 << (id.0 % 64);
    }

    pub fn remove(&mut self, id: CandidateId) {
        if id.0 < self.universe {
            self.words[id.0 / 64] &= !(1 << (id.0 % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = CandidateId> + '_ {
        (0..self.universe)
            .map(CandidateId)
            .filter(move |&c| self.contains(c))
    }

    pub fn is_subset(&self, other: &CandidateSet) -> bool {
        self.iter().all(|c| other.contains(c))
    }

    pub fn union(&self, other: &CandidateSet) -> CandidateSet {
        let mut out = self.clone();
        for c in other.iter() {
            out.insert(c);
        }
        out
    }

    pub fn intersection(&self, other: &CandidateSet) -> CandidateSet {
        CandidateSet::from_ids(self.universe, self.iter().filter(|&c| other.contains(c)))
    }

    pub fn difference(&self, other: &CandidateSet) -> CandidateSet {
        CandidateSet::from_ids(self.universe, self.iter().filter(|&c| !other.contains(c)))
    }
}

impl fmt::Debug for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}
