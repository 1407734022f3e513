//! Permutations in one-line notation and naive permutation-group closures.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Default element cap for group closures.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

/// A permutation of `0..degree` stored in one-line notation: `p.0[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from its one-line images, returning `None` if `images` is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    ///
    /// # Panics
    /// If a cycle mentions a point twice or a point `>= n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut img: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                assert!(a < n && !touched[a], "bad cycle {c:?}");
                touched[a] = true;
                img[a] = c[(i + 1) % c.len()];
            }
        }
        Perm(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn pow(&self, k: i64) -> Perm {
        let n = self.degree();
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(n);
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    /// Disjoint cycles including fixed points, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Image of a set, sorted.
    pub fn image_of(&self, set: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = set.iter().map(|&x| self.0[x]).collect();
        v.sort_unstable();
        v
    }

    /// Commutator `a⁻¹ b⁻¹ a b` (as maps: apply `b`, then `a`, then `b⁻¹`, then `a⁻¹`).
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.inverse().compose(&b.inverse()).compose(a).compose(b)
    }

    /// Cycle notation, e.g. `(0 1)(2 3)`; the identity prints as `()`.
    pub fn cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }

    /// Disjoint union of permutations acting on consecutive blocks of points.
    pub fn disjoint_sum(parts: &[&Perm]) -> Perm {
        let mut img = Vec::new();
        let mut off = 0;
        for p in parts {
            img.extend(p.0.iter().map(|&v| v + off));
            off += p.degree();
        }
        Perm(img)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("closure of group `{group}` exceeded {cap} elements")]
pub struct ClosureCapExceeded {
    pub group: String,
    pub cap: usize,
}

/// Outcome of the lower central series computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "class")]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent,
}

impl Nilpotency {
    pub fn class(self) -> Option<usize> {
        match self {
            Nilpotency::Class(c) => Some(c),
            Nilpotency::NotNilpotent => None,
        }
    }
}

/// A finite permutation group with its full element list.
#[derive(Debug, Clone)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    /// Closes the generators under composition by breadth-first multiplication.
    pub fn generate(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self, usize> {
        let id = Perm::identity(degree);
        let gens: Vec<Perm> = {
            let mut seen = HashSet::new();
            generators
                .into_iter()
                .filter(|g| !g.is_identity() && seen.insert(g.clone()))
                .collect()
        };
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let h = g.compose(&elements[i]);
                if !index.contains_key(&h) {
                    if elements.len() >= cap {
                        return Err(cap);
                    }
                    index.insert(h.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(h);
                }
            }
        }
        Ok(PermGroup { degree, generators: gens, elements, index })
    }

    /// Like [`PermGroup::generate`], labelling a cap failure with `name`.
    pub fn generate_named(
        name: &str,
        degree: usize,
        generators: Vec<Perm>,
        cap: usize,
    ) -> Result<Self, ClosureCapExceeded> {
        Self::generate(degree, generators, cap).map_err(|cap| ClosureCapExceeded { group: name.to_string(), cap })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.elements.iter().fold(1, |acc, p| lcm(acc, p.order()))
    }

    /// Orbits on `0..degree`, each sorted, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for s in 0..self.degree {
            if seen[s] {
                continue;
            }
            let mut orb = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < orb.len() {
                let x = orb[k];
                for g in &self.generators {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orb.push(y);
                    }
                }
                k += 1;
            }
            orb.sort_unstable();
            out.push(orb);
        }
        out
    }

    /// Sizes of the lower central series `γ₁ = G ⊇ γ₂ ⊇ …` until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let mut sizes = vec![self.order()];
        let mut current: Vec<Perm> = self.elements.clone();
        loop {
            let next = self.commutator_with(&current);
            if next.len() == current.len() {
                break;
            }
            sizes.push(next.len());
            current = next;
        }
        sizes
    }

    /// Nilpotency class: number of steps for the lower central series to reach the identity.
    pub fn nilpotency_class(&self) -> Nilpotency {
        let series = self.lower_central_series();
        if *series.last().unwrap() == 1 {
            Nilpotency::Class(series.len() - 1)
        } else {
            Nilpotency::NotNilpotent
        }
    }

    /// `[H, G]` for a normal subgroup `H` given by its elements: the normal closure of `{[h, t]}` over
    /// generators `t` of `G`.
    fn commutator_with(&self, h: &[Perm]) -> Vec<Perm> {
        let mut seeds: Vec<Perm> = Vec::new();
        let mut seen: HashSet<Perm> = HashSet::new();
        for x in h {
            for t in &self.generators {
                let c = Perm::commutator(x, t);
                if !c.is_identity() && seen.insert(c.clone()) {
                    seeds.push(c);
                }
            }
        }
        let mut gens = seeds.clone();
        let mut k = 0;
        while k < gens.len() {
            for t in &self.generators {
                let c = t.inverse().compose(&gens[k]).compose(t);
                if seen.insert(c.clone()) {
                    gens.push(c);
                }
            }
            k += 1;
        }
        PermGroup::generate(self.degree, gens, usize::MAX)
            .expect("uncapped closure")
            .elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_first() {
        let a = Perm::from_cycles(3, &[&[0, 1]]);
        let b = Perm::from_cycles(3, &[&[1, 2]]);
        // b first: 1 -> 2, then a fixes 2.
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(b.compose(&a).apply(1), 0);
    }

    #[test]
    fn nilpotency_classes_of_small_groups() {
        let triv = PermGroup::generate(3, vec![], 100).unwrap();
        assert_eq!(triv.nilpotency_class(), Nilpotency::Class(0));
        let c2 = PermGroup::generate(3, vec![Perm::from_cycles(3, &[&[0, 1]])], 100).unwrap();
        assert_eq!(c2.nilpotency_class(), Nilpotency::Class(1));
        let s3 = PermGroup::generate(
            3,
            vec![Perm::from_cycles(3, &[&[0, 1]]), Perm::from_cycles(3, &[&[0, 1, 2]])],
            100,
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.lower_central_series(), vec![6, 3]);
        assert_eq!(s3.nilpotency_class(), Nilpotency::NotNilpotent);
        let d4 = PermGroup::generate(
            4,
            vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 2]])],
            100,
        )
        .unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.nilpotency_class(), Nilpotency::Class(2));
    }

    #[test]
    fn cap_is_enforced() {
        let s4 = PermGroup::generate(
            4,
            vec![Perm::from_cycles(4, &[&[0, 1]]), Perm::from_cycles(4, &[&[0, 1, 2, 3]])],
            10,
        );
        assert_eq!(s4.unwrap_err(), 10);
    }

    #[test]
    fn exponent_and_orbits() {
        let g = PermGroup::generate(
            5,
            vec![Perm::from_cycles(5, &[&[0, 1, 2]]), Perm::from_cycles(5, &[&[3, 4]])],
            100,
        )
        .unwrap();
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.orbits(), vec![vec![0, 1, 2], vec![3, 4]]);
    }
}
