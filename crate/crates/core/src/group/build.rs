//! Catalog constructors. All of them place the identity at index 0.

use std::collections::HashMap;
use std::sync::Arc;

use super::{check_guard, FiniteGroup, GroupHom, Structure};
use crate::error::{Error, Result};

pub fn cyclic(n: usize) -> Result<Arc<FiniteGroup>> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("cyclic(n) needs n >= 1".into()));
    }
    check_guard(n)?;
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as u32;
        }
    }
    let gens = if n > 1 { vec![1] } else { vec![] };
    Ok(FiniteGroup::from_trusted(
        n,
        table,
        format!("Z{n}"),
        Some(gens),
        Structure::Cyclic(n),
    ))
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The unit group of `Z/p^k`.
pub fn units_mod(p: u64, k: u32) -> Result<Arc<FiniteGroup>> {
    if !is_prime(p) {
        return Err(Error::ParamOutOfRange(format!(
            "units_mod: {p} is not prime"
        )));
    }
    if k == 0 {
        return Err(Error::ParamOutOfRange("units_mod: k must be >= 1".into()));
    }
    let modulus = p
        .checked_pow(k)
        .ok_or_else(|| Error::ParamOutOfRange(format!("units_mod: {p}^{k} overflows")))?;
    let order = (modulus / p) * (p - 1);
    check_guard(order as usize)?;
    let residues: Vec<u64> = (1..modulus.max(2))
        .filter(|&u| gcd(u, modulus) == 1)
        .collect();
    // Z/2 has the single unit 1
    let residues = if modulus == 2 { vec![1] } else { residues };
    debug_assert_eq!(residues.len() as u64, order);
    let n = residues.len();
    let index: HashMap<u64, usize> = residues.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = index[&(residues[a] * residues[b] % modulus)] as u32;
        }
    }
    Ok(FiniteGroup::from_trusted(
        n,
        table,
        format!("U({modulus})"),
        None,
        Structure::Units { modulus, residues },
    ))
}

pub fn direct_product(
    left: &Arc<FiniteGroup>,
    right: &Arc<FiniteGroup>,
) -> Result<Arc<FiniteGroup>> {
    let (l, r) = (left.order(), right.order());
    let n = l
        .checked_mul(r)
        .ok_or_else(|| Error::ParamOutOfRange("product order overflows".into()))?;
    check_guard(n)?;
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a, h) = (x / r, x % r);
        for y in 0..n {
            let (b, k) = (y / r, y % r);
            table[x * n + y] = (left.mul(a, b) * r + right.mul(h, k)) as u32;
        }
    }
    let gens = left
        .generators()
        .iter()
        .map(|&g| g * r)
        .chain(right.generators().iter().copied())
        .collect();
    Ok(FiniteGroup::from_trusted(
        n,
        table,
        format!("{}x{}", left.label(), right.label()),
        Some(gens),
        Structure::Product {
            left: left.clone(),
            right: right.clone(),
        },
    ))
}

/// How the complement of a semidirect product acts on the normal factor.
#[derive(Clone, Debug)]
pub enum Action {
    Trivial,
    /// Every generator of the complement acts by inversion.
    Invert,
    /// Units of `Z/p^k` acting on a cyclic group by multiplication.
    Multiplication,
    /// One automorphism of the normal factor per complement generator.
    Generators(Vec<GroupHom>),
}

pub fn semidirect(
    normal: &Arc<FiniteGroup>,
    complement: &Arc<FiniteGroup>,
    action: &Action,
) -> Result<Arc<FiniteGroup>> {
    let n_ord = normal.order();
    let per_element: Vec<Vec<u32>> = match action {
        Action::Trivial => vec![(0..n_ord as u32).collect(); complement.order()],
        Action::Invert => {
            let inv: Vec<u32> = (0..n_ord).map(|x| normal.inv(x) as u32).collect();
            extend_action(
                normal,
                complement,
                &vec![inv; complement.generators().len()],
            )?
        }
        Action::Multiplication => {
            let Structure::Cyclic(m) = normal.structure() else {
                return Err(Error::BadAction(
                    "mult_action needs a cyclic normal factor".into(),
                ));
            };
            let Structure::Units { residues, .. } = complement.structure() else {
                return Err(Error::BadAction(
                    "mult_action needs a units_mod complement".into(),
                ));
            };
            let m = *m as u64;
            residues
                .iter()
                .map(|&u| (0..m).map(|b| (u * b % m) as u32).collect())
                .collect()
        }
        Action::Generators(maps) => {
            if maps.len() != complement.generators().len() {
                return Err(Error::BadAction(format!(
                    "{} generator images given, complement has {} generators",
                    maps.len(),
                    complement.generators().len()
                )));
            }
            let raw: Vec<Vec<u32>> = maps
                .iter()
                .map(|m| {
                    if !super::same_group(m.domain(), normal)
                        || !super::same_group(m.codomain(), normal)
                    {
                        Err(Error::BadAction(
                            "action map is not an endomorphism of the normal factor".into(),
                        ))
                    } else {
                        Ok(m.raw_map().to_vec())
                    }
                })
                .collect::<Result<_>>()?;
            extend_action(normal, complement, &raw)?
        }
    };
    validate_action(normal, complement, &per_element)?;
    semidirect_from_action(normal, complement, per_element)
}

/// Builds `normal ⋊ complement` where complement generator `i` acts by
/// `generator_images[i]` (an automorphism of `normal` as an element map).
pub fn semidirect_by_generators(
    normal: &Arc<FiniteGroup>,
    complement: &Arc<FiniteGroup>,
    generator_images: &[Vec<u32>],
) -> Result<Arc<FiniteGroup>> {
    let per_element = extend_action(normal, complement, generator_images)?;
    validate_action(normal, complement, &per_element)?;
    semidirect_from_action(normal, complement, per_element)
}

/// Extends per-generator automorphisms along the Cayley graph of the
/// complement, rejecting inconsistent assignments.
fn extend_action(
    normal: &Arc<FiniteGroup>,
    complement: &Arc<FiniteGroup>,
    gen_maps: &[Vec<u32>],
) -> Result<Vec<Vec<u32>>> {
    let gens = complement.generators();
    if gen_maps.len() != gens.len() {
        return Err(Error::BadAction(
            "one map per complement generator required".into(),
        ));
    }
    let n_ord = normal.order();
    if gen_maps.iter().any(|m| m.len() != n_ord) {
        return Err(Error::BadAction(
            "map length differs from normal factor order".into(),
        ));
    }
    let mut per: Vec<Option<Vec<u32>>> = vec![None; complement.order()];
    per[0] = Some((0..n_ord as u32).collect());
    let mut queue = vec![0usize];
    while let Some(h) = queue.pop() {
        for (gi, &g) in gens.iter().enumerate() {
            let hg = complement.mul(h, g);
            let cur = per[h].as_ref().expect("visited");
            // α_{hg} = α_h ∘ α_g
            let composed: Vec<u32> = gen_maps[gi].iter().map(|&b| cur[b as usize]).collect();
            match &per[hg] {
                Some(existing) if *existing != composed => {
                    return Err(Error::BadAction(format!(
                        "generator images violate a relation of the complement at element {hg}"
                    )))
                }
                Some(_) => {}
                None => {
                    per[hg] = Some(composed);
                    queue.push(hg);
                }
            }
        }
    }
    Ok(per
        .into_iter()
        .map(|m| m.expect("generators generate"))
        .collect())
}

fn validate_action(
    normal: &Arc<FiniteGroup>,
    complement: &Arc<FiniteGroup>,
    per_element: &[Vec<u32>],
) -> Result<()> {
    let n_ord = normal.order();
    for (h, map) in per_element.iter().enumerate() {
        let mut seen = vec![false; n_ord];
        for &v in map {
            if v as usize >= n_ord || std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::BadAction(format!("image of {h} is not a bijection")));
            }
        }
        for a in 0..n_ord {
            for &s in normal.generators() {
                let lhs = map[normal.mul(a, s)] as usize;
                let rhs = normal.mul(map[a] as usize, map[s] as usize);
                if lhs != rhs {
                    return Err(Error::BadAction(format!(
                        "image of {h} is not a homomorphism"
                    )));
                }
            }
        }
    }
    for h in 0..complement.order() {
        for &g in complement.generators() {
            let hg = complement.mul(h, g);
            let ok = (0..n_ord)
                .all(|b| per_element[hg][b] == per_element[h][per_element[g][b] as usize]);
            if !ok {
                return Err(Error::BadAction(format!(
                    "action is not a homomorphism at ({h}, {g})"
                )));
            }
        }
    }
    Ok(())
}

fn semidirect_from_action(
    normal: &Arc<FiniteGroup>,
    complement: &Arc<FiniteGroup>,
    action: Vec<Vec<u32>>,
) -> Result<Arc<FiniteGroup>> {
    let (l, r) = (normal.order(), complement.order());
    let n = l
        .checked_mul(r)
        .ok_or_else(|| Error::ParamOutOfRange("product order overflows".into()))?;
    check_guard(n)?;
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a, h) = (x / r, x % r);
        let act = &action[h];
        for y in 0..n {
            let (b, k) = (y / r, y % r);
            let first = normal.mul(a, act[b] as usize);
            table[x * n + y] = (first * r + complement.mul(h, k)) as u32;
        }
    }
    let gens = normal
        .generators()
        .iter()
        .map(|&g| g * r)
        .chain(complement.generators().iter().copied())
        .collect();
    Ok(FiniteGroup::from_trusted(
        n,
        table,
        format!("{}:{}", normal.label(), complement.label()),
        Some(gens),
        Structure::Semidirect {
            normal: normal.clone(),
            complement: complement.clone(),
            action,
        },
    ))
}

pub fn dihedral(n: usize) -> Result<Arc<FiniteGroup>> {
    semidirect(&cyclic(n)?, &cyclic(2)?, &Action::Invert)
}

fn permutation_group(degree: usize, even_only: bool, label: String) -> Result<Arc<FiniteGroup>> {
    if degree == 0 || degree > 6 {
        return Err(Error::ParamOutOfRange(format!(
            "permutation degree {degree} not in 1..=6"
        )));
    }
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut cur: Vec<u8> = (0..degree as u8).collect();
    loop {
        if !even_only || parity(&cur) == 0 {
            perms.push(cur.clone());
        }
        if !next_permutation(&mut cur) {
            break;
        }
    }
    let n = perms.len();
    check_guard(n)?;
    let index: HashMap<&[u8], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            // apply b first, then a
            let c: Vec<u8> = (0..degree)
                .map(|i| perms[a][perms[b][i] as usize])
                .collect();
            table[a * n + b] = index[c.as_slice()] as u32;
        }
    }
    drop(index);
    Ok(FiniteGroup::from_trusted(
        n,
        table,
        label,
        None,
        Structure::Permutations { degree, perms },
    ))
}

/// Symmetric group on `degree` points (degree ≤ 6).
pub fn symmetric(degree: usize) -> Result<Arc<FiniteGroup>> {
    permutation_group(degree, false, format!("S{degree}"))
}

/// Alternating group on `degree` points (degree ≤ 6).
pub fn alternating(degree: usize) -> Result<Arc<FiniteGroup>> {
    permutation_group(degree, true, format!("A{degree}"))
}

pub(crate) fn parity(p: &[u8]) -> usize {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = (0..p.len().saturating_sub(1))
        .rev()
        .find(|&i| p[i] < p[i + 1])
    else {
        return false;
    };
    let j = (i + 1..p.len())
        .rev()
        .find(|&j| p[j] > p[i])
        .expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// The quaternion group of order 8; element `s*4 + u` is `(-1)^s · u` with
/// `u` in `1, i, j, k`.
pub fn quaternion() -> Result<Arc<FiniteGroup>> {
    // unit products (sign, unit)
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let rows: Vec<Vec<usize>> = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (s, u) = UNIT[x % 4][y % 4];
                    ((s + x / 4 + y / 4) % 2) * 4 + u
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&rows, "Q8")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force isomorphism search over all bijections fixing the identity.
    fn isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        if a.order() != b.order() {
            return false;
        }
        let n = a.order();
        let mut perm: Vec<usize> = (1..n).collect();
        loop {
            let f = |x: usize| if x == 0 { 0 } else { perm[x - 1] };
            if (0..n).all(|x| (0..n).all(|y| f(a.mul(x, y)) == b.mul(f(x), f(y)))) {
                return true;
            }
            let mut bytes: Vec<u8> = perm.iter().map(|&v| v as u8).collect();
            if !next_permutation(&mut bytes) {
                return false;
            }
            perm = bytes.into_iter().map(|v| v as usize).collect();
        }
    }

    #[test]
    fn cyclic_one_is_trivial() {
        let g = cyclic(1).unwrap();
        assert_eq!(g.order(), 1);
        assert!(cyclic(0).is_err());
    }

    #[test]
    fn semidirect_inversion_is_s3() {
        let g = semidirect(&cyclic(3).unwrap(), &cyclic(2).unwrap(), &Action::Invert).unwrap();
        assert_eq!(g.order(), 6);
        g.verify_axioms(true).unwrap();
        assert!(!g.is_abelian());
        assert!(isomorphic(&g, &symmetric(3).unwrap()));
        assert!(!isomorphic(&g, &cyclic(6).unwrap()));
    }

    #[test]
    fn units_mod_nine() {
        // integers below 9 coprime to 9: 1 2 4 5 7 8
        let oracle = (1..9u64).filter(|u| gcd(*u, 9) == 1).count();
        let g = units_mod(3, 2).unwrap();
        assert_eq!(g.order(), oracle);
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
        g.verify_axioms(true).unwrap();
        assert!(units_mod(4, 1).is_err());
        assert_eq!(units_mod(2, 1).unwrap().order(), 1);
        assert_eq!(units_mod(2, 3).unwrap().order(), 4);
    }

    #[test]
    fn units_semidirect_levels_are_groups() {
        for k in 1..=3u32 {
            let n = cyclic(3usize.pow(k)).unwrap();
            let u = units_mod(3, k).unwrap();
            let g = semidirect(&n, &u, &Action::Multiplication).unwrap();
            assert_eq!(g.order(), 3usize.pow(k) * 2 * 3usize.pow(k - 1));
            g.verify_axioms(k < 3).unwrap();
        }
    }

    #[test]
    fn bad_action_is_rejected() {
        // doubling on Z4 is not an automorphism
        let z4 = cyclic(4).unwrap();
        let double = GroupHom::new(&z4, &z4, (0..4).map(|x| (2 * x) % 4).collect()).unwrap();
        let err = semidirect(&z4, &cyclic(2).unwrap(), &Action::Generators(vec![double]));
        assert!(matches!(err, Err(Error::BadAction(_))));
        // inversion on Z3 by a generator of order 3 violates g^3 = 1
        let err = semidirect(&cyclic(3).unwrap(), &cyclic(3).unwrap(), &Action::Invert);
        assert!(matches!(err, Err(Error::BadAction(_))));
    }

    #[test]
    fn small_catalog_groups() {
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(alternating(4).unwrap().order(), 12);
        let q = quaternion().unwrap();
        assert_eq!(q.order(), 8);
        assert!(!isomorphic(&q, &dihedral(4).unwrap()));
        let d = dihedral(4).unwrap();
        d.verify_axioms(true).unwrap();
        let p = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap()).unwrap();
        p.verify_axioms(true).unwrap();
        assert_eq!(p.generators(), &[2, 1]);
    }

    #[test]
    fn prime_helpers() {
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(prime_divisors(486), vec![2, 3]);
        assert!(is_prime(97));
        assert!(!is_prime(1));
    }
}
