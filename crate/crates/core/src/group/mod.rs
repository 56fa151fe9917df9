//! Exact finite-group arithmetic over Cayley tables.
//!
//! Every group is a complete multiplication table on element indices
//! `0..order`, with the identity normalized to index `0`. Subgroups are
//! bitmasks over those indices and homomorphisms are total element maps.

mod build;
mod hom;
mod nilpotency;
mod subgroup;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mask::Mask;

pub(crate) use build::is_prime;
pub use build::{
    alternating, cyclic, dihedral, direct_product, prime_divisors, quaternion, semidirect,
    semidirect_by_generators, symmetric, units_mod, Action,
};
pub use hom::{compose, Endomorphism, GroupHom, HomParts};
pub use nilpotency::{commutator_subgroup, nilpotency, Nilpotency};
pub use subgroup::{NormalityReport, ProductReport, Subgroup, SubgroupSummary};

/// Default ceiling on the order of any constructed group.
pub const DEFAULT_ORDER_GUARD: usize = 5000;

/// Orders below this get a full associativity scan at table construction.
pub const FULL_SCAN_LIMIT: usize = 512;

static ORDER_GUARD: AtomicUsize = AtomicUsize::new(DEFAULT_ORDER_GUARD);

/// Current process-wide order guard.
pub fn order_guard() -> usize {
    ORDER_GUARD.load(Ordering::Relaxed)
}

/// Replaces the process-wide order guard, returning the previous value.
pub fn set_order_guard(guard: usize) -> usize {
    ORDER_GUARD.swap(guard.max(1), Ordering::Relaxed)
}

pub(crate) fn check_guard(order: usize) -> Result<()> {
    let guard = order_guard();
    if order > guard {
        Err(Error::OrderGuard { order, guard })
    } else {
        Ok(())
    }
}

/// How a group was built. Constructors that combine groups keep their
/// factors so coordinate-wise maps (scalings, projections, restrictions to
/// the normal factor of a semidirect product) can be written down.
///
/// Pair-structured groups encode `(a, h)` as `a * |right| + h`.
#[derive(Clone)]
pub enum Structure {
    Table,
    Cyclic(usize),
    /// Units of `Z/modulus`, listed by increasing residue.
    Units {
        modulus: u64,
        residues: Vec<u64>,
    },
    Product {
        left: Arc<FiniteGroup>,
        right: Arc<FiniteGroup>,
    },
    /// `normal ⋊ complement` with `(a,h)(b,k) = (a·action[h](b), hk)`.
    Semidirect {
        normal: Arc<FiniteGroup>,
        complement: Arc<FiniteGroup>,
        action: Vec<Vec<u32>>,
    },
    /// Quotient by a normal subgroup; `reps[i]` is the least element of coset `i`.
    Quotient {
        reps: Vec<usize>,
    },
    /// Permutations of `0..degree`, indexed in lexicographic order.
    Permutations {
        degree: usize,
        perms: Vec<Vec<u8>>,
    },
}

/// A finite group given by a complete multiplication table.
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    label: String,
    generators: Vec<usize>,
    structure: Structure,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a user-supplied multiplication table and relabels its
    /// identity to index 0.
    pub fn from_table(rows: &[Vec<usize>], label: impl Into<String>) -> Result<Arc<Self>> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::BadTable("empty table".into()));
        }
        check_guard(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::BadTable(format!(
                    "entry {bad} in row {i} out of range"
                )));
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        // swap labels 0 <-> identity
        let relabel = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as u32;
            }
        }

        let mut inv = vec![0u32; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x * n + y] == 0 && table[y * n + x] == 0)
                .ok_or(Error::MissingInverse {
                    element: relabel(x),
                })?;
            inv[x] = y as u32;
        }

        let mut g = FiniteGroup {
            order: n,
            table,
            inv,
            label: label.into(),
            generators: Vec::new(),
            structure: Structure::Table,
        };
        g.generators = g.greedy_generators();
        if n < FULL_SCAN_LIMIT {
            if let Some((a, b, c)) = g.associativity_violation() {
                return Err(Error::NotAssociative {
                    a: relabel(a),
                    b: relabel(b),
                    c: relabel(c),
                });
            }
        } else if let Some((a, b, c)) = g
            .light_test_violation()
            .or_else(|| g.random_associativity_violation(10_000, 0x5eed))
        {
            return Err(Error::NotAssociative {
                a: relabel(a),
                b: relabel(b),
                c: relabel(c),
            });
        }
        Ok(Arc::new(g))
    }

    /// Assembles a group from a table known to be a group table with
    /// identity 0. Computes inverses; generators are computed greedily when
    /// none are supplied.
    pub(crate) fn from_trusted(
        order: usize,
        table: Vec<u32>,
        label: String,
        generators: Option<Vec<usize>>,
        structure: Structure,
    ) -> Arc<Self> {
        debug_assert_eq!(table.len(), order * order);
        let mut inv = vec![0u32; order];
        for x in 0..order {
            let row = &table[x * order..(x + 1) * order];
            inv[x] = row
                .iter()
                .position(|&v| v == 0)
                .expect("group table row without identity") as u32;
        }
        let mut g = FiniteGroup {
            order,
            table,
            inv,
            label,
            generators: Vec::new(),
            structure,
        };
        g.generators = match generators {
            Some(gens) => gens.into_iter().filter(|&x| x != 0).collect(),
            None => g.greedy_generators(),
        };
        Arc::new(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Generating set used for homomorphism expansion; `g0, g1, …` in the
    /// scenario language refer to these in order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `x⁻¹ y⁻¹ x y`
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn pow(&self, x: usize, mut e: i64) -> usize {
        let mut base = if e < 0 {
            e = -e;
            self.inv(x)
        } else {
            x
        };
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Human-readable name of an element, following the construction.
    pub fn element_label(&self, x: usize) -> String {
        match &self.structure {
            Structure::Cyclic(_) => x.to_string(),
            Structure::Units { residues, .. } => residues[x].to_string(),
            Structure::Product { left, right } => {
                let r = right.order();
                format!(
                    "({},{})",
                    left.element_label(x / r),
                    right.element_label(x % r)
                )
            }
            Structure::Semidirect {
                normal, complement, ..
            } => {
                let r = complement.order();
                format!(
                    "({},{})",
                    normal.element_label(x / r),
                    complement.element_label(x % r)
                )
            }
            Structure::Permutations { perms, .. } => {
                let p: Vec<String> = perms[x].iter().map(|v| v.to_string()).collect();
                format!("[{}]", p.join(" "))
            }
            Structure::Table | Structure::Quotient { .. } => format!("x{x}"),
        }
    }

    /// Returns the first failing triple of a full O(n³) associativity scan.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Light's test against the generating set: `(x s) y = x (s y)` for all
    /// `x, y` and generators `s`. Exact once the generators generate the
    /// table under left-nested products.
    pub fn light_test_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for &s in &self.generators {
            for x in 0..n {
                let xs = self.mul(x, s);
                for y in 0..n {
                    if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                        return Some((x, s, y));
                    }
                }
            }
        }
        None
    }

    pub fn random_associativity_violation(
        &self,
        samples: usize,
        seed: u64,
    ) -> Option<(usize, usize, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.order;
        (0..samples).find_map(|_| {
            let (a, b, c) = (
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            );
            (self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))).then_some((a, b, c))
        })
    }

    /// Picks the least element outside the current closure until the
    /// closure covers the group. Closure here is under right multiplication
    /// by the chosen elements, starting from the identity.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = Mask::from_iter(self.order, [0]);
        while let Some(x) = (0..self.order).find(|&x| !covered.contains(x)) {
            gens.push(x);
            covered = self.right_closure(&gens);
        }
        gens
    }

    fn right_closure(&self, gens: &[usize]) -> Mask {
        let mut seen = Mask::from_iter(self.order, [0]);
        let mut queue = vec![0usize];
        while let Some(y) = queue.pop() {
            for &s in gens {
                let z = self.mul(y, s);
                if seen.insert(z) {
                    queue.push(z);
                }
            }
        }
        seen
    }

    /// Mask of the subgroup generated by `gens`.
    pub(crate) fn closure_mask(&self, gens: impl IntoIterator<Item = usize>) -> Mask {
        let gens: Vec<usize> = gens.into_iter().filter(|&g| g != 0).collect();
        self.right_closure(&gens)
    }

    /// Checks identity, inverse and (optionally) associativity laws.
    pub fn verify_axioms(&self, full_associativity: bool) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(Error::NoIdentity);
            }
            let i = self.inv(x);
            if self.mul(x, i) != 0 || self.mul(i, x) != 0 {
                return Err(Error::MissingInverse { element: x });
            }
        }
        let violation = if full_associativity {
            self.associativity_violation()
        } else {
            self.light_test_violation()
        };
        match violation {
            Some((a, b, c)) => Err(Error::NotAssociative { a, b, c }),
            None => Ok(()),
        }
    }

    /// Rows of the multiplication table as plain indices.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }
}

/// True if both handles denote the same group (same table).
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Parses a whitespace-separated integer matrix.
pub fn parse_table_text(text: &str) -> Result<Vec<Vec<usize>>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| Error::BadTable(format!("bad entry {tok:?}")))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_rows() -> Vec<Vec<usize>> {
        (0..4)
            .map(|a| (0..4).map(|b| (a + b) % 4).collect())
            .collect()
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_table(&[vec![0]], "1").unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.generators().is_empty());
    }

    #[test]
    fn z4_table() {
        let g = FiniteGroup::from_table(&z4_rows(), "Z4").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.mul(1, 3), 0);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.element_order(2), 2);
    }

    #[test]
    fn corrupted_z4_is_not_associative() {
        let mut rows = z4_rows();
        rows[1][1] = 3;
        match FiniteGroup::from_table(&rows, "bad") {
            Err(Error::NotAssociative { a, b, c }) => {
                let m = |x: usize, y: usize| rows[x][y];
                assert_ne!(m(m(a, b), c), m(a, m(b, c)));
            }
            other => panic!("expected NotAssociative, got {other:?}"),
        }
    }

    #[test]
    fn identity_is_relabeled() {
        // Z3 written with the identity as element 2.
        let rows = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table(&rows, "Z3").unwrap();
        for x in 0..3 {
            assert_eq!(g.mul(0, x), x);
            assert_eq!(g.mul(x, 0), x);
        }
        g.verify_axioms(true).unwrap();
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1]], "x"),
            Err(Error::BadTable(_))
        ));
        assert!(matches!(
            FiniteGroup::from_table(&[vec![1, 1], vec![1, 1]], "x"),
            Err(Error::NoIdentity)
        ));
        // identity 0, but 1*1 = 1 and 1*0 = 1: no inverse for 1
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]], "x"),
            Err(Error::MissingInverse { element: 1 })
        ));
    }

    #[test]
    fn parse_table_text_roundtrip() {
        let rows = parse_table_text("0 1\n1 0\n").unwrap();
        let g = FiniteGroup::from_table(&rows, "Z2").unwrap();
        assert_eq!(g.table_rows(), rows);
    }
}
