//! Finite groups given by Cayley tables, their subgroups and left coset spaces.
//!
//! Haar measure on a group is the uniform weight `1/|G|`; the invariant
//! measure on `G/H` is the uniform weight `1/[G:H]`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, LoadError, Result};

/// Tables up to this order get an exhaustive associativity check.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table (row `g`, column `h` holds the index of `g*h`).
    ///
    /// The first violated axiom is reported: shape, range, Latin property,
    /// identity, then associativity.
    pub fn from_table(name: impl Into<String>, cayley: Vec<Vec<usize>>) -> Result<Self, LoadError> {
        let n = cayley.len();
        if n == 0 {
            return Err(LoadError::Empty);
        }
        for (row, r) in cayley.iter().enumerate() {
            if r.len() != n {
                return Err(LoadError::RaggedRow {
                    row,
                    len: r.len(),
                    order: n,
                });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(LoadError::EntryOutOfRange { row, col, value });
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                let v = cayley[i][j];
                if std::mem::replace(&mut seen_row[v], true) {
                    return Err(LoadError::NotLatinSquare {
                        line: format!("row {i}"),
                        value: v,
                    });
                }
                let w = cayley[j][i];
                if std::mem::replace(&mut seen_col[w], true) {
                    return Err(LoadError::NotLatinSquare {
                        line: format!("column {i}"),
                        value: w,
                    });
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or(LoadError::MissingIdentity)?;

        let check = |a: usize, b: usize, c: usize| {
            if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                Err(LoadError::NotAssociative { a, b, c })
            } else {
                Ok(())
            }
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            // Deterministic sample: a linear congruential walk over triples.
            let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
            for _ in 0..200_000 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                let b = (state >> 17) as usize % n;
                let c = (state >> 3) as usize % n;
                check(a, b, c)?;
            }
        }

        // Latin property guarantees a unique solution of g*x = e.
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&x| cayley[g][x] == identity)
                    .expect("latin square")
            })
            .collect();
        Ok(Self {
            name: name.into(),
            cayley,
            identity,
            inverse,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `g x g^-1`
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Closure of `generators` under multiplication.
    pub fn generated(&self, generators: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &s in generators {
                let y = self.mul(x, s);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&x| x >= group.order()) {
            return Err(Error::Subgroup(format!(
                "element {bad} is not in {}",
                group.name()
            )));
        }
        if !set.contains(&group.identity()) {
            return Err(Error::Subgroup("does not contain the identity".into()));
        }
        for &a in &set {
            if !set.contains(&group.inv(a)) {
                return Err(Error::Subgroup(format!(
                    "not closed under inversion at {a}"
                )));
            }
            for &b in &set {
                if !set.contains(&group.mul(a, b)) {
                    return Err(Error::Subgroup(format!(
                        "not closed: {a}*{b} = {}",
                        group.mul(a, b)
                    )));
                }
            }
        }
        Ok(Self {
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self {
            elements: vec![group.identity()],
        }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Self {
            elements: (0..group.order()).collect(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_normal(&self, group: &FiniteGroup) -> bool {
        (0..group.order()).all(|g| {
            self.elements
                .iter()
                .all(|&h| self.contains(group.conjugate(h, g)))
        })
    }
}

/// Left cosets `xH`, each represented by its smallest element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSpace {
    group: Arc<FiniteGroup>,
    subgroup: Subgroup,
    representatives: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn new(group: Arc<FiniteGroup>, subgroup: Subgroup) -> Result<Self> {
        // Re-validate: a Subgroup built against another group must not slip through.
        let subgroup = Subgroup::new(&group, subgroup.elements())?;
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = representatives.len();
            representatives.push(x);
            for &h in subgroup.elements() {
                coset_of[group.mul(x, h)] = idx;
            }
        }
        Ok(Self {
            group,
            subgroup,
            representatives,
            coset_of,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Number of cosets `[G:H]`.
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Invariant measure of a single coset.
    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn representative(&self, coset: usize) -> usize {
        self.representatives[coset]
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn members(&self, coset: usize) -> Vec<usize> {
        let x = self.representatives[coset];
        let mut m: Vec<usize> = self
            .subgroup
            .elements()
            .iter()
            .map(|&h| self.group.mul(x, h))
            .collect();
        m.sort_unstable();
        m
    }

    /// Coset reached by left translation `g * xH`.
    pub fn translate(&self, g: usize, coset: usize) -> usize {
        self.coset_of[self.group.mul(g, self.representatives[coset])]
    }

    /// The averaging map `T_H f (xH) = (1/|H|) sum_h f(xh)`.
    pub fn average_over_subgroup(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.group.order() {
            return Err(Error::Shape(format!(
                "function on G needs {} values, got {}",
                self.group.order(),
                f.len()
            )));
        }
        let h = self.subgroup.order() as f64;
        Ok(self
            .representatives
            .iter()
            .map(|&x| {
                self.subgroup
                    .elements()
                    .iter()
                    .map(|&s| f[self.group.mul(x, s)])
                    .sum::<Complex64>()
                    / h
            })
            .collect())
    }

    /// Lifts a coset function to `G` via `f~(x) = f(xH)`.
    pub fn lift(&self, values: &[Complex64]) -> Vec<Complex64> {
        self.coset_of.iter().map(|&c| values[c]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::c;

    fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::from_table(
            format!("Z{n}"),
            (0..n)
                .map(|i| (0..n).map(|j| (i + j) % n).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn z4_is_cyclic() {
        let g = cyclic(4);
        assert_eq!(g.order(), 4);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.mul(i, j), (i + j) % 4);
            }
        }
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 3);
    }

    #[test]
    fn repeated_row_entry_is_not_latin() {
        let mut t: Vec<Vec<usize>> = (0..3)
            .map(|i| (0..3).map(|j| (i + j) % 3).collect())
            .collect();
        t[1][2] = t[1][1];
        let err = FiniteGroup::from_table("bad", t).unwrap_err();
        assert!(matches!(err, LoadError::NotLatinSquare { .. }));
        assert!(err.to_string().contains("not a Latin square"));
    }

    #[test]
    fn missing_identity_and_associativity() {
        // x*y = (y - x) mod 3 is a Latin square with no two-sided identity.
        let t: Vec<Vec<usize>> = (0..3)
            .map(|i| (0..3).map(|j| (j + 3 - i) % 3).collect())
            .collect();
        assert_eq!(
            FiniteGroup::from_table("sub", t).unwrap_err(),
            LoadError::MissingIdentity
        );

        // A loop of order 5 with identity 0 that is not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table("loop", t).unwrap_err(),
            LoadError::NotAssociative { .. }
        ));
    }

    #[test]
    fn ragged_and_out_of_range() {
        assert!(matches!(
            FiniteGroup::from_table("r", vec![vec![0, 1], vec![1]]).unwrap_err(),
            LoadError::RaggedRow { .. }
        ));
        assert!(matches!(
            FiniteGroup::from_table("r", vec![vec![0, 2], vec![1, 0]]).unwrap_err(),
            LoadError::EntryOutOfRange { .. }
        ));
    }

    #[test]
    fn s3_is_nonabelian() {
        let b = catalog::builtin("S3").unwrap();
        let g = &b.group;
        assert_eq!(g.order(), 6);
        assert_ne!(g.mul(1, 2), g.mul(2, 1));
        assert!(!g.is_abelian());
    }

    #[test]
    fn s3_cosets_of_transposition() {
        let b = catalog::builtin("S3").unwrap();
        let h = b.subgroup("Z2a").unwrap();
        let x = CosetSpace::new(b.group.clone(), h).unwrap();
        assert_eq!(x.len(), 3);
        assert!((x.weight() - 1.0 / 3.0).abs() < 1e-15);
        // brute-force left cosets
        let g = &b.group;
        let mut cosets: Vec<Vec<usize>> = (0..6)
            .map(|a| {
                let mut c: Vec<usize> = x
                    .subgroup()
                    .elements()
                    .iter()
                    .map(|&s| g.mul(a, s))
                    .collect();
                c.sort();
                c
            })
            .collect();
        cosets.sort();
        cosets.dedup();
        assert_eq!(cosets.len(), 3);
        for i in 0..x.len() {
            assert!(cosets.contains(&x.members(i)));
            assert_eq!(x.coset_of(x.representative(i)), i);
            assert_eq!(x.representative(i), *x.members(i).iter().min().unwrap());
        }
    }

    #[test]
    fn trivial_and_whole_subgroups() {
        let b = catalog::builtin("S3").unwrap();
        let x = CosetSpace::new(b.group.clone(), Subgroup::trivial(&b.group)).unwrap();
        assert_eq!(x.len(), 6);
        assert!((0..6).all(|g| x.coset_of(g) == g));
        let x = CosetSpace::new(b.group.clone(), Subgroup::whole(&b.group)).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.weight(), 1.0);
    }

    #[test]
    fn non_closed_subgroup_rejected() {
        let b = catalog::builtin("S3").unwrap();
        // identity plus a 3-cycle but not its square
        let three_cycle = (0..6).find(|&g| g != 0 && b.group.mul(g, g) != 0).unwrap();
        assert!(Subgroup::new(&b.group, &[0, three_cycle]).is_err());
        assert!(Subgroup::new(&b.group, &[1, 2]).is_err());
    }

    #[test]
    fn averaging_indicator_and_weil() {
        let b = catalog::builtin("S3").unwrap();
        let x = CosetSpace::new(b.group.clone(), b.subgroup("Z2a").unwrap()).unwrap();
        let ind: Vec<Complex64> = (0..6)
            .map(|g| c(x.subgroup().contains(g) as u8 as f64, 0.0))
            .collect();
        let avg = x.average_over_subgroup(&ind).unwrap();
        assert_eq!(avg, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let constant = vec![c(2.5, -1.0); 6];
        assert!(x
            .average_over_subgroup(&constant)
            .unwrap()
            .iter()
            .all(|&v| v == c(2.5, -1.0)));

        let f: Vec<Complex64> = (0..6)
            .map(|g| c((g as f64).sin(), (3.0 * g as f64).cos()))
            .collect();
        let avg = x.average_over_subgroup(&f).unwrap();
        let lhs: Complex64 = avg.iter().sum::<Complex64>() * x.weight();
        let rhs: Complex64 = f.iter().sum::<Complex64>() / 6.0;
        assert!((lhs - rhs).norm() < 1e-12);
        // independent of the representative
        for coset in 0..x.len() {
            for &m in &x.members(coset) {
                let direct: Complex64 = x
                    .subgroup()
                    .elements()
                    .iter()
                    .map(|&s| f[b.group.mul(m, s)])
                    .sum::<Complex64>()
                    / 2.0;
                assert!((direct - avg[coset]).norm() < 1e-15);
            }
        }
    }
}
