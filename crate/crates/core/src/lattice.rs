//! Subgroup and normal-subgroup enumeration, and the residual subgroups
//! built from them: `I_n(G)`, `I_n^Ω(G)` and `O^π(G)`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{same_group, Endomorphism, FiniteGroup, Subgroup};
use crate::mask::Mask;

/// Default cap on closure steps during subgroup enumeration.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Subgroups of index at most `max_index`, sorted by index then members.
#[derive(Clone, Debug)]
pub struct SubgroupCatalog {
    pub parent: Arc<FiniteGroup>,
    pub max_index: usize,
    pub entries: Vec<Subgroup>,
    /// `false` when the node budget ran out before the search finished.
    pub complete: bool,
    pub nodes: usize,
}

impl SubgroupCatalog {
    pub fn of_index(&self, index: usize) -> impl Iterator<Item = &Subgroup> {
        self.entries.iter().filter(move |s| s.index() == index)
    }
}

/// A set of automorphisms of one group, deduplicated as element maps.
#[derive(Clone, Debug)]
pub struct AutoSet {
    parent: Arc<FiniteGroup>,
    maps: Vec<Endomorphism>,
}

impl AutoSet {
    pub fn empty(parent: &Arc<FiniteGroup>) -> Self {
        Self {
            parent: parent.clone(),
            maps: Vec::new(),
        }
    }

    pub fn new(
        parent: &Arc<FiniteGroup>,
        maps: impl IntoIterator<Item = Endomorphism>,
    ) -> Result<Self> {
        let mut out: Vec<Endomorphism> = Vec::new();
        for m in maps {
            if !same_group(m.group(), parent) {
                return Err(Error::DifferentParents);
            }
            if !m.is_automorphism() {
                return Err(Error::NotAutomorphism);
            }
            if !out.contains(&m) {
                out.push(m);
            }
        }
        Ok(Self {
            parent: parent.clone(),
            maps: out,
        })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn maps(&self) -> &[Endomorphism] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Every map fixes `s` setwise.
    pub fn stabilizes(&self, s: &Subgroup) -> bool {
        self.maps.iter().all(|m| s.is_invariant_setwise(m))
    }

    /// `self ∪ other`, deduplicated.
    pub fn union(&self, other: &AutoSet) -> Result<AutoSet> {
        AutoSet::new(
            &self.parent,
            self.maps.iter().chain(other.maps.iter()).cloned(),
        )
    }
}

fn factorial_at_least(n: usize, bound: usize) -> bool {
    let mut acc: usize = 1;
    for k in 2..=n {
        acc = acc.saturating_mul(k);
        if acc >= bound {
            return true;
        }
    }
    acc >= bound
}

fn factorial(n: usize) -> usize {
    (2..=n).fold(1usize, |a, k| a.saturating_mul(k))
}

/// Distinct cyclic subgroups, each with its least generator, skipping
/// elements already inside `floor`.
fn cyclic_representatives(g: &Arc<FiniteGroup>, floor: &Subgroup) -> Vec<usize> {
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for x in g.elements() {
        if floor.contains(x) {
            continue;
        }
        let m = g.closure_mask([x]);
        if seen.insert(m) {
            reps.push(x);
        }
    }
    reps
}

pub fn enumerate_subgroups(g: &Arc<FiniteGroup>, max_index: usize) -> SubgroupCatalog {
    enumerate_subgroups_with_budget(g, max_index, DEFAULT_NODE_BUDGET)
}

/// Complete list of subgroups of index at most `max_index`.
///
/// Every subgroup is a join of cyclic subgroups, so a breadth-first search
/// that adjoins one cyclic generator at a time reaches all of them. A
/// subgroup of index at most `n` contains the kernel of its coset action,
/// which has index at most `n!`, so the search starts from `I_{n!}(G)`.
pub fn enumerate_subgroups_with_budget(
    g: &Arc<FiniteGroup>,
    max_index: usize,
    budget: usize,
) -> SubgroupCatalog {
    let max_index = max_index.max(1);
    let order = g.order();
    let floor = if factorial_at_least(max_index, order) {
        Subgroup::trivial(g)
    } else {
        residual_intersection(g, factorial(max_index), &AutoSet::empty(g))
    };
    let reps = cyclic_representatives(g, &floor);

    let mut seen: HashSet<Mask> = HashSet::new();
    let mut entries = Vec::new();
    let mut queue = VecDeque::new();
    let mut nodes = 0usize;
    let mut complete = true;
    seen.insert(floor.members().clone());
    queue.push_back((floor.clone(), floor.generators()));

    'search: while let Some((s, gens)) = queue.pop_front() {
        if s.index() <= max_index {
            entries.push(s.clone());
        }
        for &c in &reps {
            if s.contains(c) {
                continue;
            }
            nodes += 1;
            if nodes > budget {
                complete = false;
                break 'search;
            }
            let mut next_gens = gens.clone();
            next_gens.push(c);
            let t = Subgroup::generated(g, next_gens.iter().copied());
            if seen.insert(t.members().clone()) {
                queue.push_back((t, next_gens));
            }
        }
    }
    sort_canonical(&mut entries);
    SubgroupCatalog {
        parent: g.clone(),
        max_index,
        entries,
        complete,
        nodes,
    }
}

fn sort_canonical(list: &mut [Subgroup]) {
    list.sort_by(|a, b| {
        a.index()
            .cmp(&b.index())
            .then_with(|| a.elements().cmp(&b.elements()))
    });
}

/// Conjugacy classes, each listed in increasing order, ordered by least element.
pub fn conjugacy_classes(g: &Arc<FiniteGroup>) -> Vec<Vec<usize>> {
    let mut seen = Mask::empty(g.order());
    let mut classes = Vec::new();
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        let mut class = Mask::empty(g.order());
        for h in g.elements() {
            class.insert(g.conj(h, x));
        }
        for y in class.iter() {
            seen.insert(y);
        }
        classes.push(class.iter().collect());
    }
    classes
}

/// All normal subgroups, as joins of normal closures of conjugacy classes
/// saturated under join and meet.
pub fn enumerate_normals(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut found: Vec<Subgroup> = vec![Subgroup::trivial(g)];
    let mut seen: HashSet<Mask> = found.iter().map(|s| s.members().clone()).collect();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for class in conjugacy_classes(g).into_iter().skip(1) {
        let ncl = Subgroup::generated(g, [class[0]]).normal_closure();
        if seen.insert(ncl.members().clone()) {
            queue.push_back(found.len());
            found.push(ncl);
        }
    }
    while let Some(i) = queue.pop_front() {
        let mut j = 0;
        while j < found.len() {
            let a = &found[i];
            let b = &found[j];
            let join = Subgroup::generated(g, a.generators().into_iter().chain(b.generators()));
            let meet = a.intersection(b).expect("same parent");
            for s in [join, meet] {
                if seen.insert(s.members().clone()) {
                    queue.push_back(found.len());
                    found.push(s);
                }
            }
            j += 1;
        }
    }
    sort_canonical(&mut found);
    found
}

/// Normal subgroups of index at most `n` fixed setwise by every map in `omega`.
pub fn residual_family(normals: &[Subgroup], n: usize, omega: &AutoSet) -> Vec<Subgroup> {
    normals
        .iter()
        .filter(|s| s.index() <= n && omega.stabilizes(s))
        .cloned()
        .collect()
}

fn meet_all<'a>(g: &Arc<FiniteGroup>, family: impl IntoIterator<Item = &'a Subgroup>) -> Subgroup {
    let mut acc = Mask::full(g.order());
    for s in family {
        acc = acc.and(s.members());
    }
    Subgroup::from_mask_unchecked(g, acc)
}

/// `I_n^Ω(G)`; with `omega` empty this is `I_n(G)`.
pub fn residual_intersection(g: &Arc<FiniteGroup>, n: usize, omega: &AutoSet) -> Subgroup {
    let normals = enumerate_normals(g);
    residual_from_normals(g, &normals, n, omega)
}

pub fn residual_from_normals(
    g: &Arc<FiniteGroup>,
    normals: &[Subgroup],
    n: usize,
    omega: &AutoSet,
) -> Subgroup {
    meet_all(g, &residual_family(normals, n, omega))
}

/// True if every prime factor of `n` is in `primes`.
pub fn is_pi_number(mut n: u64, primes: &[u64]) -> bool {
    for &p in primes {
        if p < 2 {
            continue;
        }
        while n % p == 0 {
            n /= p;
        }
    }
    n == 1
}

/// `O^π(G)`: the least normal subgroup whose quotient is a π-group.
pub fn o_pi(g: &Arc<FiniteGroup>, primes: &[u64]) -> Result<Subgroup> {
    o_pi_from_normals(g, &enumerate_normals(g), primes)
}

pub fn o_pi_from_normals(
    g: &Arc<FiniteGroup>,
    normals: &[Subgroup],
    primes: &[u64],
) -> Result<Subgroup> {
    if primes.is_empty() {
        return Err(Error::ParamOutOfRange("prime set must be non-empty".into()));
    }
    if let Some(&bad) = primes.iter().find(|&&p| !crate::group::is_prime(p)) {
        return Err(Error::ParamOutOfRange(format!("{bad} is not prime")));
    }
    Ok(meet_all(
        g,
        normals
            .iter()
            .filter(|s| is_pi_number(s.index() as u64, primes)),
    ))
}

/// Per-index subgroup counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountProfile {
    pub counts: BTreeMap<usize, usize>,
    pub complete: bool,
}

pub fn count_profile(g: &Arc<FiniteGroup>, n: usize) -> CountProfile {
    count_profile_with_budget(g, n, DEFAULT_NODE_BUDGET)
}

pub fn count_profile_with_budget(g: &Arc<FiniteGroup>, n: usize, budget: usize) -> CountProfile {
    let catalog = enumerate_subgroups_with_budget(g, n, budget);
    let mut counts = BTreeMap::new();
    for s in &catalog.entries {
        *counts.entry(s.index()).or_insert(0) += 1;
    }
    CountProfile {
        counts,
        complete: catalog.complete,
    }
}
