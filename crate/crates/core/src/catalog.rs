//! Built-in groups with named subgroups and complete irrep catalogs.
//!
//! Every representation is generated from the images of a few generators by
//! word expansion over the Cayley table and then checked with
//! [`verify_irrep`](crate::irrep::verify_irrep).
//!
//! | name        | order | notes                                   |
//! |-------------|-------|-----------------------------------------|
//! | `Z2`..`Z24` | n     | characters `chiKK`                      |
//! | `D3`..`D12` | 2n    | `r^k s^e` stored at index `k + n*e`     |
//! | `S3`, `S4`  | 6, 24 | permutations in lexicographic order     |
//! | `Q8`        | 8     | `1, -1, i, -i, j, -j, k, -k`            |

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::irrep::{verify_irrep, Irrep};
use crate::linalg::{c, CMat, ONE, ZERO};
use crate::space::HomogeneousSpace;

/// A group together with everything needed to build coset spaces over it.
#[derive(Clone, Debug)]
pub struct GroupBundle {
    pub group: Arc<FiniteGroup>,
    pub subgroups: BTreeMap<String, Vec<usize>>,
    pub irreps: Vec<Arc<Irrep>>,
    /// Default symmetric, conjugation-closed generating multiset for the Laplacian.
    pub heat_generators: Vec<usize>,
}

impl GroupBundle {
    pub fn subgroup(&self, name: &str) -> Result<Subgroup> {
        match name {
            "trivial" => Ok(Subgroup::trivial(&self.group)),
            "full" => Ok(Subgroup::whole(&self.group)),
            _ => {
                let elems = self.subgroups.get(name).ok_or_else(|| Error::Unknown {
                    kind: "subgroup",
                    name: format!("{name} (of {})", self.group.name()),
                })?;
                Subgroup::new(&self.group, elems)
            }
        }
    }

    /// Names of all subgroups, including the implicit `trivial` and `full`.
    pub fn subgroup_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.subgroups.keys().cloned().collect();
        for implicit in ["trivial", "full"] {
            if !names.iter().any(|n| n == implicit) {
                names.push(implicit.to_string());
            }
        }
        names
    }

    pub fn space(&self, subgroup: &str) -> Result<HomogeneousSpace> {
        Ok(
            HomogeneousSpace::new(self.group.clone(), self.subgroup(subgroup)?, &self.irreps)?
                .with_subgroup_name(subgroup),
        )
    }
}

/// Names of all built-in groups, in listing order.
pub fn builtin_names() -> Vec<String> {
    let mut names = vec!["S3".to_string(), "S4".to_string(), "Q8".to_string()];
    names.extend((3..=12).map(|n| format!("D{n}")));
    names.extend((2..=24).map(|n| format!("Z{n}")));
    names
}

pub fn builtin(name: &str) -> Result<GroupBundle> {
    let unknown = || Error::Unknown {
        kind: "group",
        name: name.to_string(),
    };
    match name {
        "S3" => symmetric(3),
        "S4" => symmetric(4),
        "Q8" => quaternion(),
        _ => {
            let (prefix, rest) = name.split_at(1);
            let n: usize = rest.parse().map_err(|_| unknown())?;
            match prefix {
                "Z" if (2..=24).contains(&n) => cyclic(n),
                "D" if (3..=12).contains(&n) => dihedral(n),
                _ => Err(unknown()),
            }
        }
    }
}

/// The (group, subgroup) pairs exercised by the verification suites.
pub fn standard_pairs() -> Vec<(&'static str, &'static str)> {
    vec![
        ("Z12", "Z3"),
        ("Z12", "Z4"),
        ("S3", "Z2a"),
        ("S3", "Z3"),
        ("S4", "S3"),
        ("S4", "V4"),
        ("D4", "Z2r"),
        ("Q8", "Z4"),
        ("S3", "trivial"),
        ("S4", "trivial"),
        ("S3", "full"),
        ("Q8", "full"),
    ]
}

/// Spreads generator images over the whole group by breadth-first word
/// expansion: `rho(x*s) = rho(x) rho(s)`.
pub fn expand_from_generators(group: &FiniteGroup, images: &[(usize, CMat)]) -> Result<Vec<CMat>> {
    let d = images.first().map(|(_, m)| m.nrows()).unwrap_or(1);
    let mut mats: Vec<Option<CMat>> = vec![None; group.order()];
    mats[group.identity()] = Some(CMat::identity(d, d));
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for (s, m) in images {
            let y = group.mul(x, *s);
            if mats[y].is_none() {
                mats[y] = Some(mats[x].as_ref().unwrap() * m);
                queue.push_back(y);
            }
        }
    }
    mats.into_iter()
        .enumerate()
        .map(|(g, m)| {
            m.ok_or_else(|| Error::Generators(format!("element {g} not reached by the generators")))
        })
        .collect()
}

fn build_irrep(group: &FiniteGroup, label: &str, images: &[(usize, CMat)]) -> Result<Arc<Irrep>> {
    let mats = expand_from_generators(group, images)?;
    let report = verify_irrep(group, &mats, label);
    if !report.passed {
        return Err(Error::Irrep {
            label: label.to_string(),
            reason: format!(
                "failed validation (hom {:e}, unitary {:e}, norm {})",
                report.homomorphism_residual, report.unitarity_residual, report.irreducibility
            ),
        });
    }
    Ok(Arc::new(Irrep::new(label, mats)?))
}

fn scalar(z: Complex64) -> CMat {
    CMat::from_element(1, 1, z)
}

fn mat2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> CMat {
    CMat::from_row_slice(2, 2, &[a, b, cc, d])
}

fn cyclic(n: usize) -> Result<GroupBundle> {
    let table = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    let group = Arc::new(FiniteGroup::from_table(format!("Z{n}"), table)?);
    let width = if n > 10 { 2 } else { 1 };
    let irreps = (0..n)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            build_irrep(&group, &format!("chi{k:0width$}"), &[(1, scalar(z))])
        })
        .collect::<Result<_>>()?;
    let mut subgroups = BTreeMap::new();
    for d in (2..n).filter(|d| n % d == 0) {
        subgroups.insert(format!("Z{d}"), group.generated(&[n / d]));
    }
    Ok(GroupBundle {
        group,
        subgroups,
        irreps,
        heat_generators: vec![1, n - 1],
    })
}

fn dihedral(n: usize) -> Result<GroupBundle> {
    // r^a s^e at index a + n*e; (r^a s^e)(r^b s^f) = r^(a + (-1)^e b) s^(e+f)
    let idx = |a: usize, e: usize| a % n + n * (e % 2);
    let table = (0..2 * n)
        .map(|x| {
            let (a, e) = (x % n, x / n);
            (0..2 * n)
                .map(|y| {
                    let (b, f) = (y % n, y / n);
                    let rot = if e == 0 { a + b } else { a + n - b };
                    idx(rot, e + f)
                })
                .collect()
        })
        .collect();
    let group = Arc::new(FiniteGroup::from_table(format!("D{n}"), table)?);
    let (r, s) = (1, n);
    let mut irreps = vec![
        build_irrep(&group, "trivial", &[(r, scalar(ONE)), (s, scalar(ONE))])?,
        build_irrep(&group, "A2", &[(r, scalar(ONE)), (s, scalar(-ONE))])?,
    ];
    if n % 2 == 0 {
        irreps.push(build_irrep(
            &group,
            "B1",
            &[(r, scalar(-ONE)), (s, scalar(ONE))],
        )?);
        irreps.push(build_irrep(
            &group,
            "B2",
            &[(r, scalar(-ONE)), (s, scalar(-ONE))],
        )?);
    }
    for j in 1..=((n - 1) / 2) {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let rot = mat2(w, ZERO, ZERO, w.conj());
        let refl = mat2(ZERO, ONE, ONE, ZERO);
        irreps.push(build_irrep(
            &group,
            &format!("E{j}"),
            &[(r, rot), (s, refl)],
        )?);
    }
    let mut subgroups = BTreeMap::new();
    subgroups.insert(format!("C{n}"), (0..n).collect());
    subgroups.insert("Z2s".to_string(), vec![0, s]);
    if n % 2 == 0 {
        subgroups.insert("Z2r".to_string(), vec![0, n / 2]);
    }
    Ok(GroupBundle {
        group,
        subgroups,
        irreps,
        heat_generators: (n..2 * n).collect(),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Orthonormal (Helmert) basis of the sum-zero subspace of `R^n`.
fn helmert(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            (0..n)
                .map(|m| match m.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0 / norm,
                    std::cmp::Ordering::Equal => -(k as f64) / norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

/// Standard representation of a permutation `p` (sending `m` to `p[m]`) on
/// the sum-zero subspace: entry `(i, j) = <b_i, P b_j>`.
fn standard_matrix(p: &[usize]) -> CMat {
    let basis = helmert(p.len());
    let d = basis.len();
    CMat::from_fn(d, d, |i, j| {
        let v: f64 = (0..p.len()).map(|m| basis[i][p[m]] * basis[j][m]).sum();
        c(v, 0.0)
    })
}

fn perm_sign(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn symmetric(n: usize) -> Result<GroupBundle> {
    let perms = permutations(n);
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
    // (p*q)(m) = p(q(m))
    let table = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| index(&q.iter().map(|&m| p[m]).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    let group = Arc::new(FiniteGroup::from_table(format!("S{n}"), table)?);
    let transposition = |a: usize, b: usize| {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(a, b);
        index(&p)
    };
    let cycle = |elems: &[usize]| {
        let mut p: Vec<usize> = (0..n).collect();
        for w in 0..elems.len() {
            p[elems[w]] = elems[(w + 1) % elems.len()];
        }
        index(&p)
    };
    let adjacent: Vec<usize> = (0..n - 1).map(|a| transposition(a, a + 1)).collect();
    let images = |f: &dyn Fn(&[usize]) -> CMat| -> Vec<(usize, CMat)> {
        adjacent.iter().map(|&g| (g, f(&perms[g]))).collect()
    };

    let mut irreps = vec![
        build_irrep(&group, "trivial", &images(&|_| scalar(ONE)))?,
        build_irrep(&group, "sign", &images(&|p| scalar(c(perm_sign(p), 0.0))))?,
        build_irrep(&group, "standard", &images(&|p| standard_matrix(p)))?,
    ];
    let mut subgroups = BTreeMap::new();
    if n == 3 {
        subgroups.insert("Z2a".into(), group.generated(&[transposition(0, 1)]));
        subgroups.insert("Z2b".into(), group.generated(&[transposition(0, 2)]));
        subgroups.insert("Z2c".into(), group.generated(&[transposition(1, 2)]));
        subgroups.insert("Z3".into(), group.generated(&[cycle(&[0, 1, 2])]));
    } else if n == 4 {
        irreps.push(build_irrep(
            &group,
            "standard_sign",
            &images(&|p| standard_matrix(p) * c(perm_sign(p), 0.0)),
        )?);
        // S4 permutes the three pairings {01|23}, {02|13}, {03|12}; compose with the S3 standard rep.
        let pairings: [[usize; 2]; 3] = [[0, 1], [0, 2], [0, 3]];
        let pairing_of = |a: usize, b: usize| {
            let (lo, hi) = (a.min(b), a.max(b));
            if lo == 0 {
                pairings.iter().position(|q| q[1] == hi).unwrap()
            } else {
                // complement of {lo, hi} contains 0
                let other = (1..4).find(|&m| m != lo && m != hi).unwrap();
                pairings.iter().position(|q| q[1] == other).unwrap()
            }
        };
        let induced = |p: &[usize]| -> CMat {
            let q: Vec<usize> = pairings
                .iter()
                .map(|pr| pairing_of(p[pr[0]], p[pr[1]]))
                .collect();
            standard_matrix(&q)
        };
        irreps.push(build_irrep(&group, "two", &images(&induced))?);
        subgroups.insert(
            "S3".into(),
            group.generated(&[transposition(0, 1), transposition(1, 2)]),
        );
        subgroups.insert(
            "V4".into(),
            group.generated(&[index(&[1, 0, 3, 2]), index(&[2, 3, 0, 1])]),
        );
        subgroups.insert(
            "A4".into(),
            group.generated(&[cycle(&[0, 1, 2]), cycle(&[1, 2, 3])]),
        );
        subgroups.insert(
            "D4".into(),
            group.generated(&[cycle(&[0, 1, 2, 3]), transposition(0, 2)]),
        );
        subgroups.insert("Z4".into(), group.generated(&[cycle(&[0, 1, 2, 3])]));
        subgroups.insert("Z3".into(), group.generated(&[cycle(&[0, 1, 2])]));
        subgroups.insert("Z2a".into(), group.generated(&[transposition(0, 1)]));
    }
    let heat_generators = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .map(|(a, b)| transposition(a, b))
        .collect();
    Ok(GroupBundle {
        group,
        subgroups,
        irreps,
        heat_generators,
    })
}

fn quaternion() -> Result<GroupBundle> {
    // element = (sign, unit) with unit 0..4 = 1, i, j, k; index = 2*unit + (sign < 0)
    fn unit_product(a: usize, b: usize) -> (bool, usize) {
        match (a, b) {
            (0, u) | (u, 0) => (false, u),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    }
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (neg, u) = unit_product(x / 2, y / 2);
                    let negative = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
                    2 * u + negative as usize
                })
                .collect()
        })
        .collect();
    let group = Arc::new(FiniteGroup::from_table("Q8", table)?);
    let (i, j) = (2, 4);
    let s = |a: f64, b: f64| [(i, scalar(c(a, 0.0))), (j, scalar(c(b, 0.0)))];
    let irreps = vec![
        build_irrep(&group, "trivial", &s(1.0, 1.0))?,
        build_irrep(&group, "A_i", &s(1.0, -1.0))?,
        build_irrep(&group, "A_j", &s(-1.0, 1.0))?,
        build_irrep(&group, "A_k", &s(-1.0, -1.0))?,
        build_irrep(
            &group,
            "H",
            &[
                (i, mat2(c(0.0, 1.0), ZERO, ZERO, c(0.0, -1.0))),
                (j, mat2(ZERO, ONE, -ONE, ZERO)),
            ],
        )?,
    ];
    let mut subgroups = BTreeMap::new();
    subgroups.insert("Z2".into(), vec![0, 1]);
    subgroups.insert("Z4".into(), group.generated(&[i]));
    subgroups.insert("Z4j".into(), group.generated(&[j]));
    subgroups.insert("Z4k".into(), group.generated(&[6]));
    Ok(GroupBundle {
        group,
        subgroups,
        irreps,
        heat_generators: (2..8).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_has_complete_verified_catalog() {
        for name in builtin_names() {
            let b = builtin(&name).unwrap();
            let sum: usize = b.irreps.iter().map(|p| p.dim() * p.dim()).sum();
            assert_eq!(sum, b.group.order(), "{name}");
            for p in &b.irreps {
                let r = verify_irrep(&b.group, p.matrices(), p.label());
                assert!(r.passed, "{name}/{}: {r:?}", p.label());
            }
            assert!(b.irreps.iter().any(|p| p.is_trivial()), "{name}");
            for sub in b.subgroup_names() {
                b.subgroup(&sub).unwrap();
            }
        }
    }

    #[test]
    fn catalog_contents() {
        let names = builtin_names();
        for n in ["S3", "S4", "Q8", "Z12", "D4"] {
            assert!(names.iter().any(|m| m == n));
        }
        let s3 = builtin("S3").unwrap();
        let mut dims: Vec<usize> = s3.irreps.iter().map(|p| p.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2]);
        assert!(builtin("NOPE").is_err());
        assert!(builtin("Z99").is_err());
    }

    #[test]
    fn subgroup_orders_and_normality() {
        let s4 = builtin("S4").unwrap();
        let order = |b: &GroupBundle, s: &str| b.subgroup(s).unwrap().order();
        assert_eq!(order(&s4, "S3"), 6);
        assert_eq!(order(&s4, "V4"), 4);
        assert_eq!(order(&s4, "A4"), 12);
        assert_eq!(order(&s4, "D4"), 8);
        assert!(s4.subgroup("V4").unwrap().is_normal(&s4.group));
        assert!(!s4.subgroup("S3").unwrap().is_normal(&s4.group));
        let d4 = builtin("D4").unwrap();
        assert!(d4.subgroup("Z2r").unwrap().is_normal(&d4.group));
        let q8 = builtin("Q8").unwrap();
        assert_eq!(order(&q8, "Z4"), 4);
        assert!(!q8.group.is_abelian());
        let z12 = builtin("Z12").unwrap();
        assert_eq!(z12.subgroup("Z4").unwrap().elements(), &[0, 3, 6, 9]);
    }

    #[test]
    fn dihedral_relations() {
        for n in 3..=12 {
            let b = builtin(&format!("D{n}")).unwrap();
            let g = &b.group;
            let (r, s) = (1, n);
            assert_eq!(g.mul(s, s), 0);
            // s r s = r^-1
            assert_eq!(g.mul(g.mul(s, r), s), g.inv(r));
            assert_eq!(
                b.irreps.len(),
                if n % 2 == 0 {
                    4 + (n - 2) / 2
                } else {
                    2 + (n - 1) / 2
                }
            );
        }
    }
}
